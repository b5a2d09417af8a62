#pragma once

namespace paulloc {

inline constexpr const char* VERSION = "0.1.0";

} // namespace paulloc
