#include "cavbec/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace cavbec {

// FFTW's planner is not thread-safe; serialize plan creation/destruction.
static std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

Fft1D::Fft1D(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("Fft1D: n must be >= 2");
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(n));
  if (!buf) throw std::bad_alloc();
  buf_ = buf;
  fwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("Fft1D: plan creation failed");
}

Fft1D::~Fft1D() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(static_cast<fftw_complex*>(buf_));
}

void Fft1D::forward(std::vector<cxd>& inout) const {
  if (static_cast<int>(inout.size()) != n_) throw std::invalid_argument("Fft1D: size mismatch");
  std::memcpy(buf_, inout.data(), sizeof(cxd) * n_);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  std::memcpy(inout.data(), buf_, sizeof(cxd) * n_);
}

void Fft1D::backward(std::vector<cxd>& inout) const {
  if (static_cast<int>(inout.size()) != n_) throw std::invalid_argument("Fft1D: size mismatch");
  std::memcpy(buf_, inout.data(), sizeof(cxd) * n_);
  fftw_execute(static_cast<fftw_plan>(bwd_));
  fftw_complex* b = static_cast<fftw_complex*>(buf_);
  const double inv = 1.0 / n_;
  for (int i = 0; i < n_; ++i) {
    inout[i] = cxd{b[i][0] * inv, b[i][1] * inv};
  }
}

double norm2_spectral(const ComplexField& f, const Fft1D& fft) {
  std::vector<cxd> tmp = f.values;
  fft.forward(tmp);
  double s = 0.0;
  for (const cxd& v : tmp) s += std::norm(v);
  return s * f.dx() / fft.size();
}

}  // namespace cavbec
