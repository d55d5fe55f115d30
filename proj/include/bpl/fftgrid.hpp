#pragma once

// Thin RAII wrapper over FFTW complex transforms of arbitrary rank,
// used by the composition-operator assembly and the pseudo-spectral
// validator.  Unnormalized forward = sum_p x_p e^{-2pi i k.p/n}.

#include <complex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace bpl {

class FftNd {
public:
    FftNd(std::vector<int> dims) : dims_(std::move(dims)) {
        n_ = 1;
        for (int d : dims_) n_ *= std::size_t(d);
        buf_in_ = fftw_alloc_complex(n_);
        buf_out_ = fftw_alloc_complex(n_);
        if (!buf_in_ || !buf_out_) throw std::bad_alloc();
        fwd_ = fftw_plan_dft(int(dims_.size()), dims_.data(), buf_in_, buf_out_,
                             FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft(int(dims_.size()), dims_.data(), buf_in_, buf_out_,
                             FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw std::runtime_error("fft: planning failed");
    }
    FftNd(const FftNd&) = delete;
    FftNd& operator=(const FftNd&) = delete;
    ~FftNd() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_in_);
        fftw_free(buf_out_);
    }

    std::size_t size() const { return n_; }
    const std::vector<int>& dims() const { return dims_; }

    std::complex<double>* in() { return reinterpret_cast<std::complex<double>*>(buf_in_); }
    std::complex<double>* out() { return reinterpret_cast<std::complex<double>*>(buf_out_); }

    void forward() { fftw_execute(fwd_); }
    void backward() { fftw_execute(bwd_); }  // unnormalized inverse

private:
    std::vector<int> dims_;
    std::size_t n_ = 0;
    fftw_complex* buf_in_ = nullptr;
    fftw_complex* buf_out_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

}  // namespace bpl
