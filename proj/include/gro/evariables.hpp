#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gro/error.hpp"
#include "gro/models.hpp"
#include "gro/numerics.hpp"
#include "gro/priors.hpp"
#include "gro/ripr.hpp"

namespace gro {

enum class StatisticKind { kGroMic, kPseudo, kGroCan, kGroPoint };

inline const char* to_string(StatisticKind k) {
  switch (k) {
    case StatisticKind::kGroMic: return "gro_mic";
    case StatisticKind::kPseudo: return "pseudo";
    case StatisticKind::kGroCan: return "gro_can";
    case StatisticKind::kGroPoint: return "gro_point";
  }
  return "unknown";
}

// Declared property of the kind; the pseudo statistic is not an e-variable in general.
inline bool is_evariable(StatisticKind k) { return k != StatisticKind::kPseudo; }

struct EValueReport {
  LogValue log_e = 0.0;
  StatisticKind kind = StatisticKind::kGroMic;
  bool is_evariable = true;
  LogValue log_numerator = 0.0;
  LogValue log_denominator = 0.0;
  std::vector<long> c1;
  long c0 = 0;
  std::optional<double> achieved_kl;  // solver-based kinds only
};

// log S(c1) = sum_i num_i(c1_i) - den(c0): every statistic here has this shape at configuration level.
struct SeparableStatistic {
  StatisticKind kind = StatisticKind::kGroMic;
  std::vector<long> sizes;
  std::vector<std::vector<double>> num;  // num[i][c], c = 0..sizes[i]
  std::vector<double> den;               // den[c0], c0 = 0..n
  std::optional<double> achieved_kl;

  long total_size() const { return long(den.size()) - 1; }

  LogValue log_numerator(std::span<const long> c1) const {
    if (c1.size() != num.size()) throw Error("table shape does not match statistic");
    LogValue acc = 0.0;
    for (std::size_t i = 0; i < c1.size(); ++i) {
      if (c1[i] < 0 || c1[i] > sizes[i]) throw Error("count outside group support");
      acc += num[i][std::size_t(c1[i])];
    }
    return acc;
  }

  LogValue log_denominator(long c0) const {
    if (c0 < 0 || c0 > total_size()) throw Error("total outside support");
    return den[std::size_t(c0)];
  }

  LogValue log_e(std::span<const long> c1) const {
    long c0 = 0;
    for (long c : c1) c0 += c;
    LogValue a = log_numerator(c1), b = log_denominator(c0);
    if (a == kNegInf) return kNegInf;
    return a - b;
  }

  EValueReport evaluate(const Table& t) const {
    if (t.sizes() != sizes) throw Error("table shape does not match statistic");
    EValueReport r;
    r.kind = kind;
    r.is_evariable = is_evariable(kind);
    r.c1 = suff_stats(t).c1;
    r.c0 = t.total_ones();
    r.log_numerator = log_numerator(r.c1);
    r.log_denominator = log_denominator(r.c0);
    r.log_e = log_e(r.c1);
    r.achieved_kl = achieved_kl;
    return r;
  }
};

namespace detail {

inline long checked_total(std::span<const long> sizes) {
  if (sizes.empty()) throw Error("no groups");
  long n = 0;
  for (long s : sizes) {
    if (s < 0) throw Error("group size must be nonnegative");
    n += s;
  }
  if (n < 1) throw Error("table has no observations");
  return n;
}

// num_i(c) = log W_1^i(c) - log C(n^i, c): the per-configuration Bayes marginal of group i.
inline std::vector<std::vector<double>> alt_numerators(std::span<const PriorSpec> specs,
                                                       std::span<const long> sizes) {
  std::vector<Pmf> w1 = induced_group_pmfs(specs, sizes);
  std::vector<std::vector<double>> num(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    num[i].resize(std::size_t(sizes[i]) + 1);
    for (long c = 0; c <= sizes[i]; ++c) num[i][std::size_t(c)] = w1[i].log_prob(std::size_t(c)) - log_binomial(sizes[i], c);
  }
  return num;
}

// Top-level block width in units of 1/n, also the bound on |phi^(k)| * width^k for expanding a block.
inline constexpr double kBlockWidth = 0.03;
// Leaf blocks at most this long are summed node by node.
inline constexpr std::size_t kLeafLength = 8;
// Blocks whose contribution bound is this many nats below the largest are skipped.
inline constexpr double kQuadratureWindow = 230.0;

// Grid trapezoid weights of a density aggregated over a binary tree of aligned blocks: each block
// keeps its log mass, centroid and normalized central moments of orders 2 to 4.
struct DensityBlocks {
  struct Block {
    double log_mass = kNegInf;
    double mu = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  };
  const GridDensity* density = nullptr;
  double log_step = 0.0;
  std::vector<std::vector<Block>> levels;  // levels[0] has the shortest blocks
  std::vector<std::size_t> lengths;

  double log_weight(std::size_t j) const {
    double lw = density->log_density(j) + log_step;
    return (j == 0 || j + 1 == density->size()) ? lw - std::numbers::ln2 : lw;
  }
};

inline DensityBlocks make_blocks(const GridDensity& d, long n) {
  using Block = DensityBlocks::Block;
  DensityBlocks out;
  out.density = &d;
  out.log_step = std::log(d.step());
  const std::size_t g = d.size();
  std::size_t top = 1;
  while (double(2 * top) * d.step() * double(n) <= kBlockWidth) top *= 2;
  std::size_t len = std::min(top, kLeafLength);

  std::vector<Block> leaves;
  for (std::size_t s = 0; s < g; s += len) {
    const std::size_t e = std::min(g, s + len);
    Block b;
    double lmax = kNegInf;
    for (std::size_t j = s; j < e; ++j) lmax = std::max(lmax, out.log_weight(j));
    if (lmax > kNegInf) {
      double m0 = 0.0, m1 = 0.0;
      for (std::size_t j = s; j < e; ++j) {
        double w = std::exp(out.log_weight(j) - lmax);
        m0 += w;
        m1 += w * d.point(j);
      }
      b.mu = m1 / m0;
      for (std::size_t j = s; j < e; ++j) {
        double w = std::exp(out.log_weight(j) - lmax) / m0;
        double x = d.point(j) - b.mu, x2 = x * x;
        b.m2 += w * x2;
        b.m3 += w * x2 * x;
        b.m4 += w * x2 * x2;
      }
      b.log_mass = lmax + std::log(m0);
    }
    leaves.push_back(b);
  }
  out.levels.push_back(std::move(leaves));
  out.lengths.push_back(len);

  // Parents from pairs of children by the parallel-axis shift of central moments.
  while (len < top) {
    const std::vector<Block>& kids = out.levels.back();
    std::vector<Block> level((kids.size() + 1) / 2);
    for (std::size_t i = 0; i < level.size(); ++i) {
      const Block& a = kids[2 * i];
      const Block b = 2 * i + 1 < kids.size() ? kids[2 * i + 1] : Block{};
      Block& p = level[i];
      p.log_mass = log_add(a.log_mass, b.log_mass);
      if (p.log_mass == kNegInf) continue;
      const double fa = std::exp(a.log_mass - p.log_mass), fb = std::exp(b.log_mass - p.log_mass);
      p.mu = fa * a.mu + fb * b.mu;
      for (auto [f, k] : {std::pair<double, const Block*>{fa, &a}, {fb, &b}}) {
        if (f == 0.0) continue;
        const double t = k->mu - p.mu, t2 = t * t;
        p.m2 += f * (k->m2 + t2);
        p.m3 += f * (k->m3 + 3.0 * t * k->m2 + t2 * t);
        p.m4 += f * (k->m4 + 4.0 * t * k->m3 + 6.0 * t2 * k->m2 + t2 * t2);
      }
    }
    out.levels.push_back(std::move(level));
    len *= 2;
    out.lengths.push_back(len);
  }
  return out;
}

// log of the grid trapezoid rule for int p^n1 (1-p)^(n-n1) w(p) dp. Inside a block the kernel
// exp(phi) is expanded to fourth order about the block centroid; blocks where that is inaccurate
// are split, and leaves are summed node by node.
inline LogValue pseudo_quadrature(const DensityBlocks& db, long n, long n1) {
  const double c = double(n1), m = double(n - n1);
  const GridDensity& d = *db.density;
  const std::size_t g = d.size();
  const std::size_t top_level = db.levels.size() - 1;
  auto phi = [&](double p) { return xlogy(c, p) + xlog1my(m, p); };
  auto slope = [&](double p) { return (p > 0.0 ? c / p : 0.0) + (p < 1.0 ? m / (1.0 - p) : 0.0); };

  double top = kNegInf;
  for (const auto& b : db.levels[top_level]) {
    if (b.log_mass == kNegInf || !(b.mu > 0.0 && b.mu < 1.0)) continue;
    top = std::max(top, b.log_mass + phi(b.mu));
  }

  std::vector<double> terms;
  auto visit = [&](auto&& self, std::size_t level, std::size_t i) -> void {
    const auto& b = db.levels[level][i];
    if (b.log_mass == kNegInf) return;
    const std::size_t len = db.lengths[level];
    const double w = double(len) * d.step();
    const double mu = b.mu;
    if (mu > 0.0 && mu < 1.0) {
      const double approx = b.log_mass + phi(mu);
      // Concavity of phi: the block's kernel never exceeds phi(mu) + |phi'(mu)| * width.
      if (approx + slope(mu) * w < top - kQuadratureWindow) return;
      const double u = 1.0 / mu, v = 1.0 / (1.0 - mu);
      const double d1 = c * u - m * v;
      const double d2 = -c * u * u - m * v * v;
      const double d3 = 2.0 * (c * u * u * u - m * v * v * v);
      const double d4 = -6.0 * (c * u * u * u * u + m * v * v * v * v);
      const double t = kBlockWidth;
      if (std::abs(d1) * w <= t && std::abs(d2) * w * w <= t * t && std::abs(d3) * w * w * w <= t * t * t &&
          std::abs(d4) * w * w * w * w <= t * t * t * t) {
        // Derivatives of exp(phi) over exp(phi), against central moments (first moment is zero).
        const double e2 = d2 + d1 * d1;
        const double e3 = d3 + 3.0 * d1 * d2 + d1 * d1 * d1;
        const double e4 = d4 + 4.0 * d1 * d3 + 3.0 * d2 * d2 + 6.0 * d1 * d1 * d2 + d1 * d1 * d1 * d1;
        terms.push_back(approx + std::log(1.0 + e2 * b.m2 / 2.0 + e3 * b.m3 / 6.0 + e4 * b.m4 / 24.0));
        return;
      }
    }
    if (level > 0) {
      for (std::size_t child = 2 * i; child < std::min(2 * i + 2, db.levels[level - 1].size()); ++child) {
        self(self, level - 1, child);
      }
      return;
    }
    for (std::size_t j = i * len; j < std::min(g, (i + 1) * len); ++j) {
      double lw = db.log_weight(j);
      double p = d.point(j);
      if (lw == kNegInf || (p == 0.0 && n1 > 0) || (p == 1.0 && n1 < n)) continue;
      terms.push_back(lw + phi(p));
    }
  };
  for (std::size_t i = 0; i < db.levels[top_level].size(); ++i) visit(visit, top_level, i);
  if (terms.empty()) throw Error("quadrature underflow");
  LogValue out = log_sum_exp(terms);
  if (out == kNegInf) throw Error("quadrature underflow");
  return out;
}

}  // namespace detail

// log P_can,1(x): product over groups of the Bayes (or NML) marginal of one configuration.
inline LogValue log_marginal_alt(const Table& t, std::span<const PriorSpec> specs) {
  if (specs.size() != t.k()) throw Error("need one prior per group");
  LogValue acc = 0.0;
  for (std::size_t i = 0; i < t.k(); ++i) {
    const Group& g = t.groups()[i];
    acc += induced_group_pmf(specs[i], g.size).log_prob(std::size_t(g.ones)) - log_binomial(g.size, g.ones);
  }
  return acc;
}

// log W_pseudo,0(n1) = log C(n, n1) + log int p^n1 (1-p)^(n-n1) w(p) dp.
inline LogValue log_w_pseudo0(const PseudoDensity& density, long n, long n1) {
  if (n < 1) throw Error("n must be positive");
  if (n1 < 0 || n1 > n) throw Error("n1 outside [0, n]");
  return log_binomial(n, n1) + detail::pseudo_quadrature(detail::make_blocks(density.density, n), n, n1);
}

// W_pseudo,0 on 0..n. The grid trapezoid sums to one exactly; the block expansion is
// renormalized to keep that property.
inline Pmf pseudo_null_pmf(const PseudoDensity& density, long n) {
  if (n < 1) throw Error("n must be positive");
  detail::DensityBlocks blocks = detail::make_blocks(density.density, n);
  std::vector<double> lw(std::size_t(n) + 1);
  for (long c = 0; c <= n; ++c) lw[std::size_t(c)] = log_binomial(n, c) + detail::pseudo_quadrature(blocks, n, c);
  return Pmf::from_log_weights(std::move(lw));
}

inline SeparableStatistic gro_mic_statistic(std::span<const PriorSpec> specs, std::span<const long> sizes) {
  if (sizes.size() < 2) throw Error("microcanonical GRO needs at least two groups");
  const long n = detail::checked_total(sizes);
  SeparableStatistic s;
  s.kind = StatisticKind::kGroMic;
  s.sizes.assign(sizes.begin(), sizes.end());
  s.num = detail::alt_numerators(specs, sizes);
  Pmf w0 = null_optimal_prior(induced_group_pmfs(specs, sizes));
  s.den.resize(std::size_t(n) + 1);
  for (long c = 0; c <= n; ++c) s.den[std::size_t(c)] = w0.log_prob(std::size_t(c)) - log_binomial(n, c);
  return s;
}

// Pseudo statistic with an explicit null pmf on the total.
inline SeparableStatistic pseudo_statistic(std::span<const PriorSpec> specs, std::span<const long> sizes,
                                           const Pmf& w_pseudo) {
  const long n = detail::checked_total(sizes);
  if (w_pseudo.max_outcome() != n) throw Error("pseudo null pmf must cover 0..n");
  SeparableStatistic s;
  s.kind = StatisticKind::kPseudo;
  s.sizes.assign(sizes.begin(), sizes.end());
  s.num = detail::alt_numerators(specs, sizes);
  s.den.resize(std::size_t(n) + 1);
  for (long c = 0; c <= n; ++c) s.den[std::size_t(c)] = w_pseudo.log_prob(std::size_t(c)) - log_binomial(n, c);
  return s;
}

inline SeparableStatistic pseudo_statistic(std::span<const PriorSpec> specs, std::span<const long> sizes,
                                           const PseudoDensity& density) {
  return pseudo_statistic(specs, sizes, pseudo_null_pmf(density, detail::checked_total(sizes)));
}

// Target of the canonical GRO projection: the total's marginal under the alternative, equal to W_0*.
inline Pmf can_target(std::span<const PriorSpec> specs, std::span<const long> sizes) {
  detail::checked_total(sizes);
  return null_optimal_prior(induced_group_pmfs(specs, sizes));
}

// Exact pmf of the total under independent binomial groups.
inline Pmf point_target(const MeanParams& p_alt, std::span<const long> sizes) {
  validate(p_alt);
  if (p_alt.p.size() != sizes.size()) throw Error("alternative needs one mean parameter per group");
  detail::checked_total(sizes);
  std::vector<Pmf> parts;
  for (std::size_t i = 0; i < sizes.size(); ++i) parts.push_back(Pmf::binomial(sizes[i], p_alt.p[i]));
  return convolve_all(parts);
}

inline RiprSolution solve_gro_can(std::span<const PriorSpec> specs, std::span<const long> sizes,
                                  const RiprOptions& opt = {}) {
  return ripr_solve(can_target(specs, sizes), detail::checked_total(sizes), opt);
}

inline RiprSolution solve_gro_point(const MeanParams& p_alt, std::span<const long> sizes,
                                    const RiprOptions& opt = {}) {
  return ripr_solve(point_target(p_alt, sizes), detail::checked_total(sizes), opt);
}

namespace detail {

inline std::vector<double> mixture_denominator(const RiprSolution& sol, long n) {
  if (!sol.converged) throw Error("refine solver: certificate " + std::to_string(sol.certificate));
  if (sol.n != n) throw Error("solver was run for a different total size");
  return mixture_log_likelihood(sol);
}

}  // namespace detail

inline SeparableStatistic gro_can_statistic(std::span<const PriorSpec> specs, std::span<const long> sizes,
                                            const RiprSolution& sol) {
  const long n = detail::checked_total(sizes);
  SeparableStatistic s;
  s.kind = StatisticKind::kGroCan;
  s.sizes.assign(sizes.begin(), sizes.end());
  s.num = detail::alt_numerators(specs, sizes);
  s.den = detail::mixture_denominator(sol, n);
  s.achieved_kl = sol.achieved_kl;
  return s;
}

inline SeparableStatistic gro_point_statistic(const MeanParams& p_alt, std::span<const long> sizes,
                                              const RiprSolution& sol) {
  validate(p_alt);
  if (p_alt.p.size() != sizes.size()) throw Error("alternative needs one mean parameter per group");
  const long n = detail::checked_total(sizes);
  SeparableStatistic s;
  s.kind = StatisticKind::kGroPoint;
  s.sizes.assign(sizes.begin(), sizes.end());
  s.num.resize(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (long c = 0; c <= sizes[i]; ++c) s.num[i].push_back(bernoulli_loglik(sizes[i], c, p_alt.p[i]));
  }
  s.den = detail::mixture_denominator(sol, n);
  s.achieved_kl = sol.achieved_kl;
  return s;
}

inline EValueReport log_e_gro_mic(const Table& t, std::span<const PriorSpec> specs) {
  std::vector<long> sizes = t.sizes();
  return gro_mic_statistic(specs, sizes).evaluate(t);
}

inline EValueReport log_e_pseudo(const Table& t, std::span<const PriorSpec> specs, const PseudoDensity& density) {
  std::vector<long> sizes = t.sizes();
  return pseudo_statistic(specs, sizes, density).evaluate(t);
}

inline EValueReport log_e_gro_can(const Table& t, std::span<const PriorSpec> specs, const RiprSolution& sol) {
  std::vector<long> sizes = t.sizes();
  return gro_can_statistic(specs, sizes, sol).evaluate(t);
}

inline EValueReport log_e_gro_point(const Table& t, const MeanParams& p_alt, const RiprSolution& sol) {
  std::vector<long> sizes = t.sizes();
  return gro_point_statistic(p_alt, sizes, sol).evaluate(t);
}

inline EValueReport log_e_gro_point(const Table& t, const MeanParams& p_alt, const RiprOptions& opt = {}) {
  std::vector<long> sizes = t.sizes();
  return log_e_gro_point(t, p_alt, solve_gro_point(p_alt, sizes, opt));
}

// Per-group pmfs of the reference distribution; expectations below are over their product.
inline std::vector<Pmf> alt_reference(std::span<const PriorSpec> specs, std::span<const long> sizes) {
  return induced_group_pmfs(specs, sizes);
}

inline std::vector<Pmf> point_reference(const MeanParams& p_alt, std::span<const long> sizes) {
  validate(p_alt);
  if (p_alt.p.size() != sizes.size()) throw Error("alternative needs one mean parameter per group");
  std::vector<Pmf> out;
  for (std::size_t i = 0; i < sizes.size(); ++i) out.push_back(Pmf::binomial(sizes[i], p_alt.p[i]));
  return out;
}

// Calls f(c1, log_prob) for every c1 with positive mass under the product reference.
template <class F>
void for_each_configuration(std::span<const Pmf> reference, F&& f) {
  if (reference.empty()) throw Error("no groups");
  const std::size_t k = reference.size();
  std::vector<long> c1(k, 0);
  while (true) {
    double lp = 0.0;
    for (std::size_t i = 0; i < k && lp > kNegInf; ++i) lp += reference[i].log_prob(std::size_t(c1[i]));
    if (lp > kNegInf) f(std::as_const(c1), lp);
    std::size_t i = 0;
    while (i < k && c1[i] == reference[i].max_outcome()) c1[i++] = 0;
    if (i == k) break;
    ++c1[i];
  }
}

// E[log S] by enumeration of the product support.
template <class F>
double e_power_enumerate(F&& log_s, std::span<const Pmf> reference) {
  double acc = 0.0;
  for_each_configuration(reference, [&](const std::vector<long>& c1, double lp) {
    double v = log_s(std::span<const long>(c1));
    if (v == kNegInf) throw Error("statistic vanishes on support");
    if (!std::isfinite(v)) throw Error("statistic unbounded on support");
    acc += std::exp(lp) * v;
  });
  return acc;
}

// E[log S] by linearity: sum_i E[num_i] - E[den(c0)], with c0's law the convolution of the reference.
inline double e_power(const SeparableStatistic& s, std::span<const Pmf> reference) {
  if (reference.size() != s.num.size()) throw Error("reference must have one pmf per group");
  double acc = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference[i].max_outcome() != s.sizes[i]) throw Error("reference support does not match group size");
    for (std::size_t c = 0; c < reference[i].size(); ++c) {
      double lp = reference[i].log_prob(c);
      if (lp == kNegInf) continue;
      if (s.num[i][c] == kNegInf) throw Error("statistic vanishes on support");
      acc += std::exp(lp) * s.num[i][c];
    }
  }
  Pmf total = convolve_all(reference);
  for (std::size_t c = 0; c < total.size(); ++c) {
    double lp = total.log_prob(c);
    if (lp == kNegInf) continue;
    if (s.den[c] == kNegInf) throw Error("statistic unbounded on support");
    acc -= std::exp(lp) * s.den[c];
  }
  return acc;
}

namespace detail {

// log sum over c1 with sum c0 of prod_i exp(base_i(c1_i) + num_i(c1_i)), for every c0.
inline std::vector<double> log_weighted_numerator(const SeparableStatistic& s,
                                                  const std::vector<std::vector<double>>& base) {
  std::vector<double> acc;
  for (std::size_t i = 0; i < s.num.size(); ++i) {
    std::vector<double> u(s.num[i].size());
    for (std::size_t c = 0; c < u.size(); ++c) {
      u[c] = (base[i][c] == kNegInf || s.num[i][c] == kNegInf) ? kNegInf : base[i][c] + s.num[i][c];
    }
    acc = i == 0 ? std::move(u) : log_convolve_direct(acc, u);
  }
  return acc;
}

}  // namespace detail

// log E[S] under the canonical null with success probability p0.
inline LogValue log_null_expectation_canonical(const SeparableStatistic& s, double p0) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw Error("null parameter outside [0, 1]");
  std::vector<std::vector<double>> base(s.sizes.size());
  for (std::size_t i = 0; i < s.sizes.size(); ++i) {
    for (long c = 0; c <= s.sizes[i]; ++c) base[i].push_back(log_binomial_pmf(s.sizes[i], c, p0));
  }
  std::vector<double> u = detail::log_weighted_numerator(s, base);
  std::vector<double> terms;
  for (std::size_t c = 0; c < u.size(); ++c) {
    if (u[c] > kNegInf) terms.push_back(u[c] - s.den[c]);
  }
  return terms.empty() ? kNegInf : log_sum_exp(terms);
}

// log E[S | c0] under the microcanonical null (uniform over configurations with total c0), for every c0.
inline std::vector<double> log_null_expectation_micro(const SeparableStatistic& s) {
  std::vector<std::vector<double>> base(s.sizes.size());
  for (std::size_t i = 0; i < s.sizes.size(); ++i) {
    for (long c = 0; c <= s.sizes[i]; ++c) base[i].push_back(log_binomial(s.sizes[i], c));
  }
  std::vector<double> u = detail::log_weighted_numerator(s, base);
  const long n = s.total_size();
  for (long c = 0; c <= n; ++c) {
    std::size_t j = std::size_t(c);
    u[j] = u[j] == kNegInf ? kNegInf : u[j] - s.den[j] - log_binomial(n, c);
  }
  return u;
}

// P(S >= exp(log_threshold)) under the canonical null, by enumeration.
inline double null_tail_probability(const SeparableStatistic& s, double p0, LogValue log_threshold) {
  std::vector<Pmf> ref;
  for (long size : s.sizes) ref.push_back(Pmf::binomial(size, p0));
  double acc = 0.0;
  for_each_configuration(ref, [&](const std::vector<long>& c1, double lp) {
    if (s.log_e(c1) >= log_threshold) acc += std::exp(lp);
  });
  return acc;
}

// Product of e-values from independent batches.
inline LogValue combine_evalues(std::span<const LogValue> log_es) {
  if (log_es.empty()) throw Error("no e-values to combine");
  LogValue acc = 0.0;
  for (LogValue v : log_es) {
    if (std::isnan(v)) throw Error("e-value is NaN");
    acc += v;
  }
  return acc;
}

enum class Decision { kReject, kContinue };

inline const char* to_string(Decision d) { return d == Decision::kReject ? "reject" : "continue"; }

inline Decision decide(LogValue log_e, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must lie in (0, 1]");
  return log_e >= -std::log(alpha) ? Decision::kReject : Decision::kContinue;
}

}  // namespace gro
