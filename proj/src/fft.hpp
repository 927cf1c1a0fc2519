#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace bohmgrav {

// Thin FFTW wrappers.  Plan creation/destruction is serialized internally
// (FFTW's planner is not thread-safe); execution is safe per object.

/// DST-I (FFTW RODFT00) over n interior points of a Dirichlet interval.
/// The transform is its own inverse up to the factor 2(n+1).
class Dst1 {
 public:
  explicit Dst1(std::size_t n);
  ~Dst1();
  Dst1(const Dst1&) = delete;
  Dst1& operator=(const Dst1&) = delete;

  void transform(std::span<const double> in, std::span<double> out);
  double renorm() const { return 1.0 / (2.0 * static_cast<double>(n_ + 1)); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  void* plan_ = nullptr;
  double* in_ = nullptr;
  double* out_ = nullptr;
};

/// Complex 1D DFT, unnormalized (backward(forward(x)) = n x).
class Fft1d {
 public:
  explicit Fft1d(std::size_t n);
  ~Fft1d();
  Fft1d(const Fft1d&) = delete;
  Fft1d& operator=(const Fft1d&) = delete;

  void forward(std::span<std::complex<double>> data);
  void backward(std::span<std::complex<double>> data);
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  void* buf_ = nullptr;
};

}  // namespace bohmgrav
