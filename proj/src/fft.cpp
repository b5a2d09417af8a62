#include "paulloc/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace paulloc {

namespace {

std::mutex plan_mutex;
std::map<int, std::pair<fftw_plan, fftw_plan>>& plan_cache() {
    static std::map<int, std::pair<fftw_plan, fftw_plan>> cache;
    return cache;
}

std::pair<fftw_plan, fftw_plan> plans_for(int n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // FFTW_ESTIMATE keeps planning deterministic; FFTW_UNALIGNED lets the
    // plans run on arbitrary caller buffers via fftw_execute_dft.
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan f = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_plan b = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!f || !b) throw std::runtime_error("fftw plan creation failed");
    cache[n] = {f, b};
    return {f, b};
}

} // namespace

Fft::Fft(int n) : n_(n) {
    auto [f, b] = plans_for(n);
    fwd_ = f;
    bwd_ = b;
}

void Fft::forward(std::complex<double>* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), buf, buf);
}

void Fft::inverse(std::complex<double>* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), buf, buf);
    const double scale = 1.0 / n_;
    for (int i = 0; i < n_; ++i) data[i] *= scale;
}

} // namespace paulloc
