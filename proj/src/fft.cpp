#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace bohmgrav {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Dst1::Dst1(std::size_t n) : n_(n) {
  if (n_ == 0) throw std::domain_error("Dst1: empty transform");
  std::lock_guard<std::mutex> lock(planner_mutex());
  in_ = fftw_alloc_real(n_);
  out_ = fftw_alloc_real(n_);
  plan_ = fftw_plan_r2r_1d(static_cast<int>(n_), in_, out_, FFTW_RODFT00,
                           FFTW_ESTIMATE);
}

Dst1::~Dst1() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(in_);
  fftw_free(out_);
}

void Dst1::transform(std::span<const double> in, std::span<double> out) {
  if (in.size() != n_ || out.size() != n_)
    throw std::domain_error("Dst1::transform: size mismatch");
  std::memcpy(in_, in.data(), n_ * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(plan_));
  std::memcpy(out.data(), out_, n_ * sizeof(double));
}

Fft1d::Fft1d(std::size_t n) : n_(n) {
  if (n_ == 0) throw std::domain_error("Fft1d: empty transform");
  std::lock_guard<std::mutex> lock(planner_mutex());
  buf_ = fftw_alloc_complex(n_);
  auto* buf = static_cast<fftw_complex*>(buf_);
  plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n_), buf, buf, FFTW_FORWARD,
                               FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_1d(static_cast<int>(n_), buf, buf, FFTW_BACKWARD,
                               FFTW_ESTIMATE);
}

Fft1d::~Fft1d() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(buf_);
}

void Fft1d::forward(std::span<std::complex<double>> data) {
  if (data.size() != n_) throw std::domain_error("Fft1d::forward: size mismatch");
  std::memcpy(buf_, data.data(), n_ * sizeof(fftw_complex));
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::memcpy(data.data(), buf_, n_ * sizeof(fftw_complex));
}

void Fft1d::backward(std::span<std::complex<double>> data) {
  if (data.size() != n_) throw std::domain_error("Fft1d::backward: size mismatch");
  std::memcpy(buf_, data.data(), n_ * sizeof(fftw_complex));
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  std::memcpy(data.data(), buf_, n_ * sizeof(fftw_complex));
}

}  // namespace bohmgrav
