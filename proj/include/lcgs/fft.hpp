#pragma once
// Thin RAII wrappers around FFTW3 double-precision 2-D transforms.
//
// Conventions:
//   * forward  : real m x m  ->  complex m x (m/2+1), unnormalized (plain DFT sum)
//   * backward : complex m x (m/2+1) -> real m x m, normalized by 1/m^2,
//                so backward(forward(x)) == x up to roundoff.
//
// FFTW's planner is not thread-safe; all plan creation/destruction is guarded
// by a process-wide mutex. Plan execution on distinct buffers is safe, and each
// Fft2D owns its buffers, so distinct instances may run concurrently.

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace lcgs {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// One fixed-size m x m real<->complex transform pair with owned buffers.
class Fft2D {
 public:
  explicit Fft2D(int m) : m_(m), nc_(m * (m / 2 + 1)) {
    if (m <= 0) throw std::invalid_argument("Fft2D: size must be positive");
    real_ = fftw_alloc_real(static_cast<size_t>(m_) * m_);
    cplx_ = fftw_alloc_complex(static_cast<size_t>(nc_));
    if (!real_ || !cplx_) {
      free_buffers();
      throw std::bad_alloc();
    }
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fw_ = fftw_plan_dft_r2c_2d(m_, m_, real_, cplx_, FFTW_ESTIMATE);
    bw_ = fftw_plan_dft_c2r_2d(m_, m_, cplx_, real_, FFTW_ESTIMATE);
    if (!fw_ || !bw_) {
      destroy_plans();
      free_buffers();
      throw std::runtime_error("Fft2D: FFTW plan creation failed");
    }
  }

  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  ~Fft2D() {
    destroy_plans();
    free_buffers();
  }

  int size() const { return m_; }
  int complex_size() const { return nc_; }  // entries in the half-spectrum

  // real m*m row-major -> complex m*(m/2+1) row-major (unnormalized)
  void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
    check_len(in.size(), static_cast<size_t>(m_) * m_, "forward input");
    out.resize(static_cast<size_t>(nc_));
    for (int i = 0; i < m_ * m_; ++i) real_[i] = in[static_cast<size_t>(i)];
    fftw_execute(fw_);
    for (int i = 0; i < nc_; ++i)
      out[static_cast<size_t>(i)] = {cplx_[i][0], cplx_[i][1]};
  }

  // complex m*(m/2+1) -> real m*m, scaled by 1/m^2
  void backward(const std::vector<std::complex<double>>& in, std::vector<double>& out) {
    check_len(in.size(), static_cast<size_t>(nc_), "backward input");
    out.resize(static_cast<size_t>(m_) * m_);
    for (int i = 0; i < nc_; ++i) {
      cplx_[i][0] = in[static_cast<size_t>(i)].real();
      cplx_[i][1] = in[static_cast<size_t>(i)].imag();
    }
    fftw_execute(bw_);
    const double scale = 1.0 / (static_cast<double>(m_) * m_);
    for (int i = 0; i < m_ * m_; ++i) out[static_cast<size_t>(i)] = real_[i] * scale;
  }

 private:
  static void check_len(size_t got, size_t want, const char* what) {
    if (got != want) throw std::invalid_argument(std::string("Fft2D: bad length for ") + what);
  }
  void destroy_plans() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (fw_) fftw_destroy_plan(fw_);
    if (bw_) fftw_destroy_plan(bw_);
    fw_ = bw_ = nullptr;
  }
  void free_buffers() {
    if (real_) fftw_free(real_);
    if (cplx_) fftw_free(cplx_);
    real_ = nullptr;
    cplx_ = nullptr;
  }

  int m_ = 0;
  int nc_ = 0;
  double* real_ = nullptr;
  fftw_complex* cplx_ = nullptr;
  fftw_plan fw_ = nullptr;
  fftw_plan bw_ = nullptr;
};

// Per-thread plan cache: transforms of a given size are reused across calls.
// Thread-local storage keeps execution race-free without locking on use.
inline Fft2D& cached_fft(int m) {
  thread_local std::vector<std::pair<int, Fft2D*>> cache;
  for (auto& e : cache)
    if (e.first == m) return *e.second;
  cache.emplace_back(m, new Fft2D(m));
  return *cache.back().second;
}

}  // namespace lcgs
