#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gro/error.hpp"

namespace gro {

using LogValue = double;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Combined supports above this size are convolved with FFT.
inline constexpr std::size_t kFftThreshold = 4096;

// FFT outputs below this fraction of the maximum are round-off and set to zero.
inline constexpr double kFftClamp = 1e-15;

namespace detail {

// lgamma_r avoids the global signgam write of std::lgamma.
inline double lgamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// k * log(p) with 0 * log(0) = 0.
inline double xlogy(double k, double p) {
  if (k == 0.0) return 0.0;
  return k * std::log(p);
}

// k * log(1 - p) with 0 * log(0) = 0.
inline double xlog1my(double k, double p) {
  if (k == 0.0) return 0.0;
  return k * std::log1p(-p);
}

}  // namespace detail

inline LogValue log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw Error("empty reduction");
  double m = *std::max_element(values.begin(), values.end());
  if (m == kNegInf) return kNegInf;
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

inline LogValue log_sum_exp(std::initializer_list<double> values) {
  return log_sum_exp(std::span<const double>(values.begin(), values.size()));
}

inline LogValue log_add(LogValue a, LogValue b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

inline LogValue log_binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) {
    throw Error("invalid binomial (" + std::to_string(n) + ", " + std::to_string(k) + ")");
  }
  if (k == 0 || k == n) return 0.0;
  return detail::lgamma(double(n) + 1.0) - detail::lgamma(double(k) + 1.0) -
         detail::lgamma(double(n - k) + 1.0);
}

inline LogValue log_beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error("beta function needs positive arguments");
  return detail::lgamma(a) + detail::lgamma(b) - detail::lgamma(a + b);
}

// log C(n, k) + k log(k/n) + (n-k) log(1-k/n), 0^0 = 1.
inline LogValue log_nml_term(long n, long k) {
  double nn = double(n), kk = double(k);
  return log_binomial(n, k) + detail::xlogy(kk, kk / nn) + detail::xlogy(nn - kk, (nn - kk) / nn);
}

inline LogValue nml_log_normalizer(long n) {
  if (n < 1) throw Error("NML normalizer needs n >= 1");
  std::vector<double> terms(std::size_t(n) + 1);
  for (long k = 0; k <= n; ++k) terms[std::size_t(k)] = log_nml_term(n, k);
  return log_sum_exp(terms);
}

// Log of a binomial pmf value, 0^0 = 1.
inline LogValue log_binomial_pmf(long n, long k, double p) {
  return log_binomial(n, k) + detail::xlogy(double(k), p) + detail::xlog1my(double(n - k), p);
}

// Probability mass function on {0, ..., size-1}, stored as log-weights.
class Pmf {
 public:
  Pmf() = default;

  // Normalizes unless `normalize` is false, in which case the weights must already sum to one.
  static Pmf from_log_weights(std::vector<double> log_w, bool normalize = true) {
    if (log_w.empty()) throw Error("empty pmf");
    for (double v : log_w) {
      if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
        throw Error("pmf log-weight must be finite or -inf");
      }
    }
    double z = log_sum_exp(log_w);
    if (z == kNegInf) throw Error("pmf has no mass");
    if (normalize) {
      for (double& v : log_w) v -= z;
    } else if (std::abs(z) > 1e-12) {
      throw Error("pmf not normalized");
    }
    Pmf out;
    out.log_w_ = std::move(log_w);
    return out;
  }

  static Pmf from_probabilities(std::span<const double> probs, bool normalize = true) {
    std::vector<double> lw(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (!(probs[i] >= 0.0)) throw Error("negative probability");
      lw[i] = probs[i] > 0.0 ? std::log(probs[i]) : kNegInf;
    }
    return from_log_weights(std::move(lw), normalize);
  }

  static Pmf point_mass(std::size_t size, std::size_t at) {
    if (at >= size) throw Error("point mass outside support");
    std::vector<double> lw(size, kNegInf);
    lw[at] = 0.0;
    return from_log_weights(std::move(lw), false);
  }

  static Pmf uniform(std::size_t size) {
    if (size == 0) throw Error("empty pmf");
    return from_log_weights(std::vector<double>(size, -std::log(double(size))), false);
  }

  static Pmf binomial(long n, double p) {
    if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw Error("invalid binomial parameters");
    std::vector<double> lw(std::size_t(n) + 1);
    for (long k = 0; k <= n; ++k) lw[std::size_t(k)] = log_binomial_pmf(n, k, p);
    return from_log_weights(std::move(lw));
  }

  std::size_t size() const { return log_w_.size(); }
  long max_outcome() const { return long(log_w_.size()) - 1; }
  double log_prob(std::size_t i) const { return i < log_w_.size() ? log_w_[i] : kNegInf; }
  double prob(std::size_t i) const { return std::exp(log_prob(i)); }
  std::span<const double> log_weights() const { return log_w_; }

  std::vector<double> probabilities() const {
    std::vector<double> p(log_w_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(log_w_[i]);
    return p;
  }

  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < log_w_.size(); ++i) m += double(i) * std::exp(log_w_[i]);
    return m;
  }

  double variance() const {
    double mu = mean(), v = 0.0;
    for (std::size_t i = 0; i < log_w_.size(); ++i) {
      double d = double(i) - mu;
      v += d * d * std::exp(log_w_[i]);
    }
    return v;
  }

  bool operator==(const Pmf&) const = default;

 private:
  std::vector<double> log_w_;
};

// Density on the uniform grid j / (size - 1) of [0, 1], trapezoid-normalized.
class GridDensity {
 public:
  GridDensity() = default;

  static GridDensity from_log_density(std::vector<double> log_f) {
    if (log_f.size() < 2) throw Error("grid density needs at least two nodes");
    for (double v : log_f) {
      if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
        throw Error("grid density must be finite or -inf");
      }
    }
    GridDensity out;
    out.log_f_ = std::move(log_f);
    double z = out.log_trapezoid();
    if (z == kNegInf) throw Error("grid density has no mass");
    for (double& v : out.log_f_) v -= z;
    return out;
  }

  std::size_t size() const { return log_f_.size(); }
  double step() const { return 1.0 / double(log_f_.size() - 1); }
  double point(std::size_t j) const {
    return j + 1 == log_f_.size() ? 1.0 : double(j) / double(log_f_.size() - 1);
  }
  double log_density(std::size_t j) const { return log_f_[j]; }
  double density(std::size_t j) const { return std::exp(log_f_[j]); }
  std::span<const double> log_values() const { return log_f_; }

  double trapezoid_integral() const { return std::exp(log_trapezoid()); }

  // Mass of [j/bins, (j+1)/bins) for each bin, integrating the linear interpolant.
  std::vector<double> cell_masses(std::size_t bins) const {
    if (bins == 0) throw Error("need at least one bin");
    std::vector<double> out(bins, 0.0);
    const double h = step();
    for (std::size_t j = 0; j + 1 < log_f_.size(); ++j) {
      double a = point(j), b = point(j + 1);
      double fa = density(j), fb = density(j + 1);
      // Split the segment at bin edges; the interpolant is linear inside.
      double x = a;
      while (x < b) {
        std::size_t bin = std::min(bins - 1, std::size_t(x * double(bins)));
        double edge = std::min(b, double(bin + 1) / double(bins));
        if (edge <= x) edge = b;
        double fx = fa + (fb - fa) * (x - a) / h;
        double fe = fa + (fb - fa) * (edge - a) / h;
        out[bin] += 0.5 * (fx + fe) * (edge - x);
        x = edge;
      }
    }
    return out;
  }

 private:
  double log_trapezoid() const {
    std::vector<double> terms(log_f_);
    terms.front() += std::log(0.5);
    terms.back() += std::log(0.5);
    return log_sum_exp(terms) + std::log(step());
  }

  std::vector<double> log_f_;
};

// Direct log-space convolution of unnormalized log-weight vectors.
inline std::vector<double> log_convolve_direct(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error("empty reduction");
  const std::size_t na = a.size(), nb = b.size();
  std::vector<double> out(na + nb - 1, kNegInf);
  for (std::size_t s = 0; s < out.size(); ++s) {
    std::size_t lo = s >= nb - 1 ? s - (nb - 1) : 0;
    std::size_t hi = std::min(s, na - 1);
    double m = kNegInf;
    for (std::size_t i = lo; i <= hi; ++i) m = std::max(m, a[i] + b[s - i]);
    if (m == kNegInf) continue;
    double acc = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) acc += std::exp(a[i] + b[s - i] - m);
    out[s] = m + std::log(acc);
  }
  return out;
}

namespace detail {

// Smallest 7-smooth integer >= n; FFTW is fast on these lengths.
inline std::size_t fft_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 2);; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2, 3, 5, 7}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

// FFTW planning is not thread-safe; execution on distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    real_ = fftw_alloc_real(n_);
    spec_ = fftw_alloc_complex(n_ / 2 + 1);
    if (real_ == nullptr || spec_ == nullptr) {
      release();
      throw Error("FFT allocation failed");
    }
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(int(n_), real_, spec_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(int(n_), spec_, real_, FFTW_ESTIMATE);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() { release(); }

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  // Transforms exp(log_w) zero-padded to the plan length.
  std::vector<std::complex<double>> forward(std::span<const double> log_w) {
    std::fill(real_, real_ + n_, 0.0);
    for (std::size_t i = 0; i < log_w.size(); ++i) real_[i] = std::exp(log_w[i]);
    fftw_execute(forward_);
    std::vector<std::complex<double>> out(spectrum_size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {spec_[i][0], spec_[i][1]};
    return out;
  }

  // Unscaled inverse of a spectrum; returns the first `len` samples divided by n.
  std::vector<double> backward(const std::vector<std::complex<double>>& spectrum, std::size_t len) {
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
      spec_[i][0] = spectrum[i].real();
      spec_[i][1] = spectrum[i].imag();
    }
    fftw_execute(backward_);
    std::vector<double> out(len);
    for (std::size_t i = 0; i < len; ++i) out[i] = real_[i] / double(n_);
    return out;
  }

 private:
  void release() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (forward_ != nullptr) fftw_destroy_plan(forward_);
    if (backward_ != nullptr) fftw_destroy_plan(backward_);
    if (real_ != nullptr) fftw_free(real_);
    if (spec_ != nullptr) fftw_free(spec_);
    forward_ = backward_ = nullptr;
    real_ = nullptr;
    spec_ = nullptr;
  }

  std::size_t n_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

inline Pmf fft_convolve_all(std::span<const Pmf> pmfs) {
  std::size_t len = 1;
  for (const Pmf& p : pmfs) len += p.size() - 1;
  RealFft fft(fft_size(len));
  std::vector<std::complex<double>> acc, cur;
  for (std::size_t i = 0; i < pmfs.size(); ++i) {
    // Groups of equal size and prior share a transform.
    if (i == 0 || !(pmfs[i] == pmfs[i - 1])) cur = fft.forward(pmfs[i].log_weights());
    if (i == 0) {
      acc = cur;
    } else {
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] *= cur[j];
    }
  }
  std::vector<double> v = fft.backward(acc, len);
  double vmax = *std::max_element(v.begin(), v.end());
  if (!(vmax > 0.0)) throw Error("FFT convolution lost all mass");
  std::vector<double> lw(len);
  for (std::size_t i = 0; i < len; ++i) {
    lw[i] = v[i] < kFftClamp * vmax ? kNegInf : std::log(v[i]);
  }
  return Pmf::from_log_weights(std::move(lw));
}

}  // namespace detail

// Left fold in the given order; FFT when the combined support exceeds kFftThreshold.
inline Pmf convolve_all(std::span<const Pmf> pmfs) {
  if (pmfs.empty()) throw Error("empty reduction");
  if (pmfs.size() == 1) return pmfs[0];
  std::size_t len = 1;
  for (const Pmf& p : pmfs) len += p.size() - 1;
  if (len > kFftThreshold) return detail::fft_convolve_all(pmfs);
  std::vector<double> acc(pmfs[0].log_weights().begin(), pmfs[0].log_weights().end());
  for (std::size_t i = 1; i < pmfs.size(); ++i) acc = log_convolve_direct(acc, pmfs[i].log_weights());
  return Pmf::from_log_weights(std::move(acc));
}

inline Pmf convolve(const Pmf& a, const Pmf& b) {
  const Pmf pair[2] = {a, b};
  return convolve_all(pair);
}

inline double kl_divergence(const Pmf& p, const Pmf& q) {
  if (p.size() != q.size()) throw Error("KL support mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double lp = p.log_prob(i);
    if (lp == kNegInf) continue;
    double lq = q.log_prob(i);
    if (lq == kNegInf) throw Error("KL undefined: reference has zero mass at " + std::to_string(i));
    kl += std::exp(lp) * (lp - lq);
  }
  return kl;
}

inline double total_variation(const Pmf& p, const Pmf& q) {
  std::size_t n = std::max(p.size(), q.size());
  double tv = 0.0;
  for (std::size_t i = 0; i < n; ++i) tv += std::abs(p.prob(i) - q.prob(i));
  return 0.5 * tv;
}

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error("TV support mismatch");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

}  // namespace gro
