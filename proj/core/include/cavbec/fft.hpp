#pragma once

#include <complex>
#include <vector>

#include "cavbec/field.hpp"

namespace cavbec {

// In-place 1D c2c transform pair on an aligned private buffer.
// Plans are created with deterministic (heuristic, not timed) planning so
// identical inputs give bit-identical outputs run to run. One instance is NOT
// safe for concurrent use; give each worker its own.
class Fft1D {
 public:
  explicit Fft1D(int n);
  ~Fft1D();
  Fft1D(const Fft1D&) = delete;
  Fft1D& operator=(const Fft1D&) = delete;

  int size() const { return n_; }
  void forward(std::vector<cxd>& inout) const;   // unnormalized DFT
  void backward(std::vector<cxd>& inout) const;  // inverse, includes 1/n

 private:
  int n_;
  void* buf_;  // fftw_complex*
  void* fwd_;  // fftw_plan
  void* bwd_;
};

// Parseval value of the norm: (dx/n) * sum |psi_k|^2
double norm2_spectral(const ComplexField& f, const Fft1D& fft);

}  // namespace cavbec
