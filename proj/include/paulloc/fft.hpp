#pragma once

#include <complex>

namespace paulloc {

// Thin wrapper over cached FFTW plans for one transform size.  Plans are
// created once per size behind a mutex (plan creation is not thread safe);
// execution on caller-owned buffers is re-entrant, so concurrent propagations
// may share the same Fft instance or size.
class Fft {
public:
    explicit Fft(int n);

    // in place, unnormalized
    void forward(std::complex<double>* data) const;
    // in place, scales by 1/n so inverse(forward(x)) == x up to rounding
    void inverse(std::complex<double>* data) const;

    int size() const { return n_; }

private:
    int n_;
    void* fwd_; // fftw_plan
    void* bwd_;
};

} // namespace paulloc
