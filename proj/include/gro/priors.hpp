#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <optional>
#include <sstream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gro/error.hpp"
#include "gro/numerics.hpp"

namespace gro {

struct UniformPrior {
  bool operator==(const UniformPrior&) const = default;
};

struct BetaPrior {
  double alpha = 1.0;
  double beta = 1.0;
  bool operator==(const BetaPrior&) const = default;
};

struct NmlPrior {
  bool operator==(const NmlPrior&) const = default;
};

struct ExplicitPrior {
  Pmf pmf;
  bool operator==(const ExplicitPrior&) const = default;
};

// Prior on one group's mean-value parameter.
class PriorSpec {
 public:
  using Kind = std::variant<UniformPrior, BetaPrior, NmlPrior, ExplicitPrior>;

  PriorSpec() : kind_(UniformPrior{}) {}

  static PriorSpec uniform() { return PriorSpec(UniformPrior{}); }
  static PriorSpec nml() { return PriorSpec(NmlPrior{}); }

  static PriorSpec beta(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
      throw Error("beta prior parameters must be positive");
    }
    return PriorSpec(BetaPrior{alpha, beta});
  }

  static PriorSpec explicit_pmf(Pmf pmf) { return PriorSpec(ExplicitPrior{std::move(pmf)}); }

  const Kind& kind() const { return kind_; }
  bool is_explicit() const { return std::holds_alternative<ExplicitPrior>(kind_); }

  // Beta parameters, with Uniform as Beta(1, 1).
  std::optional<BetaPrior> as_beta() const {
    if (std::holds_alternative<UniformPrior>(kind_)) return BetaPrior{1.0, 1.0};
    if (const auto* b = std::get_if<BetaPrior>(&kind_)) return *b;
    return std::nullopt;
  }

  // True when the high-resolution density can diverge at 0 or 1.
  bool boundary_singular() const {
    if (std::holds_alternative<NmlPrior>(kind_)) return true;
    if (const auto* b = std::get_if<BetaPrior>(&kind_)) return b->alpha < 1.0 || b->beta < 1.0;
    return false;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    if (std::holds_alternative<UniformPrior>(kind_)) {
      os << "uniform";
    } else if (const auto* b = std::get_if<BetaPrior>(&kind_)) {
      os << "beta:" << b->alpha << "," << b->beta;
    } else if (std::holds_alternative<NmlPrior>(kind_)) {
      os << "nml";
    } else {
      const auto& e = std::get<ExplicitPrior>(kind_);
      os << "explicit:";
      for (std::size_t i = 0; i < e.pmf.size(); ++i) os << (i ? "," : "") << e.pmf.prob(i);
    }
    return os.str();
  }

  bool operator==(const PriorSpec&) const = default;

 private:
  explicit PriorSpec(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

// Pmf of one group's count of ones under the prior; a size-0 group is the point mass at 0.
inline Pmf induced_group_pmf(const PriorSpec& spec, long n) {
  if (n < 0) throw Error("group size must be nonnegative");
  if (n == 0 && !spec.is_explicit()) return Pmf::point_mass(1, 0);
  const std::size_t len = std::size_t(n) + 1;
  return std::visit(
      [&](const auto& s) -> Pmf {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformPrior>) {
          return Pmf::uniform(len);
        } else if constexpr (std::is_same_v<T, BetaPrior>) {
          std::vector<double> lw(len);
          const double lb = log_beta_fn(s.alpha, s.beta);
          for (long k = 0; k <= n; ++k) {
            lw[std::size_t(k)] =
                log_binomial(n, k) + log_beta_fn(double(k) + s.alpha, double(n - k) + s.beta) - lb;
          }
          return Pmf::from_log_weights(std::move(lw));
        } else if constexpr (std::is_same_v<T, NmlPrior>) {
          std::vector<double> lw(len);
          for (long k = 0; k <= n; ++k) lw[std::size_t(k)] = log_nml_term(n, k);
          const double z = log_sum_exp(lw);
          for (double& v : lw) v -= z;
          return Pmf::from_log_weights(std::move(lw));
        } else {
          if (s.pmf.size() != len) {
            throw Error("explicit prior has support " + std::to_string(s.pmf.size()) +
                        ", group needs " + std::to_string(len));
          }
          return s.pmf;
        }
      },
      spec.kind());
}

inline std::vector<Pmf> induced_group_pmfs(std::span<const PriorSpec> specs, std::span<const long> sizes) {
  if (specs.size() != sizes.size()) throw Error("need one prior per group");
  std::vector<Pmf> out;
  out.reserve(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) out.push_back(induced_group_pmf(specs[i], sizes[i]));
  return out;
}

inline Pmf null_optimal_prior(std::span<const Pmf> group_pmfs) {
  if (group_pmfs.empty()) throw Error("null_optimal_prior needs at least one group");
  return convolve_all(group_pmfs);
}

namespace detail {

using boost::multiprecision::cpp_int;

inline cpp_int binomial_int(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  cpp_int r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

// Inclusion-exclusion count of compositions of n1 with part i in [0, sizes[i]], over the number of cells.
inline double uniform_convolution_closed_form(std::span<const long> sizes, long n1) {
  using detail::binomial_int;
  using detail::cpp_int;
  const long k = long(sizes.size());
  if (k == 0) throw Error("no groups");
  if (k > 20) throw Error("use numeric convolution for more than 20 groups");
  long total = 0;
  for (long s : sizes) {
    if (s < 0) throw Error("group size must be nonnegative");
    total += s;
  }
  if (n1 < 0 || n1 > total) throw Error("n1 outside [0, n]");

  cpp_int count = 0;
  bool equal = std::all_of(sizes.begin(), sizes.end(), [&](long s) { return s == sizes[0]; });
  if (equal) {
    const long m = sizes[0];
    for (long j = 0; j <= n1 / (m + 1); ++j) {
      cpp_int term = binomial_int(k, j) * binomial_int(n1 - j * (m + 1) + k - 1, k - 1);
      count += (j % 2 == 0) ? term : cpp_int(-term);
    }
  } else {
    for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
      long shift = 0;
      int bits = 0;
      for (long j = 0; j < k; ++j) {
        if (mask & (1ul << j)) {
          shift += sizes[std::size_t(j)] + 1;
          ++bits;
        }
      }
      if (shift > n1) continue;
      cpp_int term = binomial_int(n1 - shift + k - 1, k - 1);
      count += (bits % 2 == 0) ? term : cpp_int(-term);
    }
  }
  cpp_int cells = 1;
  for (long s : sizes) cells *= (s + 1);
  boost::multiprecision::cpp_rational q(count, cells);
  return q.convert_to<double>();
}

inline Pmf discrete_gaussian_approx(std::span<const Pmf> group_pmfs) {
  if (group_pmfs.size() < 2) throw Error("Gaussian approximation needs at least two groups");
  double mu = 0.0, var = 0.0;
  std::size_t n = 0;
  for (const Pmf& p : group_pmfs) {
    mu += p.mean();
    var += p.variance();
    n += p.size() - 1;
  }
  if (!(var > 1e-300)) throw Error("degenerate priors: zero total variance");
  std::vector<double> lw(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    double d = double(i) - mu;
    lw[i] = -d * d / (2.0 * var);
  }
  return Pmf::from_log_weights(std::move(lw));
}

enum class DensityProvenance { kHighResolutionLimit, kDirectConvolution };

struct PseudoDensity {
  GridDensity density;
  DensityProvenance provenance = DensityProvenance::kHighResolutionLimit;
  long scale = 0;  // zero for direct convolution
};

// High-resolution limit: group sizes multiplied by `scale`, mapped onto p0 = n1 / (scale * n).
inline PseudoDensity pseudo_null_density(std::span<const PriorSpec> specs, std::span<const long> sizes,
                                         long scale) {
  if (scale < 10) throw Error("scale must be at least 10");
  if (specs.size() != sizes.size() || specs.empty()) throw Error("need one prior per group");
  bool singular = false;
  std::vector<long> scaled;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].is_explicit()) throw Error("explicit prior has no high-resolution extension");
    if (sizes[i] < 0) throw Error("group size must be nonnegative");
    singular = singular || specs[i].boundary_singular();
    scaled.push_back(sizes[i] * scale);
  }
  std::vector<Pmf> pmfs = induced_group_pmfs(specs, scaled);
  Pmf w = null_optimal_prior(pmfs);
  if (w.size() < 3) throw Error("pseudo density needs a nonempty table");
  std::vector<double> lf(w.log_weights().begin(), w.log_weights().end());
  if (singular) {
    // Endpoint nodes dropped; the grid is effectively [step, 1 - step].
    lf.front() = kNegInf;
    lf.back() = kNegInf;
  }
  return {GridDensity::from_log_density(std::move(lf)), DensityProvenance::kHighResolutionLimit, scale};
}

// Continuous convolution of beta densities, mapped to the average of the k group parameters.
inline PseudoDensity direct_convolution_density(std::span<const BetaPrior> specs, long grid_size) {
  const std::size_t k = specs.size();
  if (k < 2) throw Error("direct convolution needs at least two groups");
  if (grid_size < 3) throw Error("grid too small");
  for (const BetaPrior& b : specs) {
    if (!(b.alpha > 0.0) || !(b.beta > 0.0)) throw Error("beta prior parameters must be positive");
    if (b.alpha < 1.0 || b.beta < 1.0) throw Error("density unbounded at boundary");
  }
  // Per-group grid so that the k-fold sum lands on roughly grid_size nodes.
  const std::size_t g = std::size_t((grid_size - 1 + long(k) - 1) / long(k)) + 1;
  const double h = 1.0 / double(g - 1);
  auto beta_density = [&](const BetaPrior& b) {
    std::vector<double> f(g);
    const double lb = log_beta_fn(b.alpha, b.beta);
    for (std::size_t j = 0; j < g; ++j) {
      double x = j + 1 == g ? 1.0 : double(j) * h;
      double lf = detail::xlogy(b.alpha - 1.0, x) + detail::xlog1my(b.beta - 1.0, x) - lb;
      f[j] = std::exp(lf);
    }
    return f;
  };
  std::vector<double> acc = beta_density(specs[0]);
  for (std::size_t i = 1; i < k; ++i) {
    std::vector<double> f = beta_density(specs[i]);
    std::vector<double> out(acc.size() + g - 1, 0.0);
    for (std::size_t l = 0; l < out.size(); ++l) {
      std::size_t lo = l >= g - 1 ? l - (g - 1) : 0;
      std::size_t hi = std::min(l, acc.size() - 1);
      if (hi == lo) continue;
      double s = 0.5 * (acc[lo] * f[l - lo] + acc[hi] * f[l - hi]);
      for (std::size_t j = lo + 1; j < hi; ++j) s += acc[j] * f[l - j];
      out[l] = s * h;
    }
    acc = std::move(out);
  }
  std::vector<double> lf(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) lf[j] = acc[j] > 0.0 ? std::log(acc[j]) : kNegInf;
  return {GridDensity::from_log_density(std::move(lf)), DensityProvenance::kDirectConvolution, 0};
}

}  // namespace gro
