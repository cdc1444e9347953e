#pragma once

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gro/error.hpp"
#include "gro/evariables.hpp"
#include "gro/models.hpp"
#include "gro/numerics.hpp"
#include "gro/parallel.hpp"
#include "gro/priors.hpp"
#include "gro/ripr.hpp"

namespace gro {

namespace detail {

inline std::string describe_specs(std::span<const PriorSpec> specs) {
  std::string out;
  for (std::size_t i = 0; i < specs.size(); ++i) out += (i ? ";" : "") + specs[i].describe();
  return out;
}

}  // namespace detail

struct GapReport {
  double r = 0.0;
  std::vector<double> per_point;  // log W_0*(c0) - log W_pseudo,0(c0)
  std::vector<long> sizes;
  std::size_t k = 0;
  std::string spec_summary;
};

// Pointwise log-ratio between the optimal null prior on the total and its pseudo counterpart.
inline std::vector<double> gap_log_ratio(std::span<const PriorSpec> specs, std::span<const long> sizes,
                                         const PseudoDensity& density) {
  const long n = detail::checked_total(sizes);
  Pmf w0 = can_target(specs, sizes);
  Pmf wp = pseudo_null_pmf(density, n);
  std::vector<double> out(std::size_t(n) + 1);
  for (std::size_t c = 0; c < out.size(); ++c) {
    if (wp.log_prob(c) == kNegInf && w0.log_prob(c) > kNegInf) {
      throw Error("pseudo density vanished where the optimal null prior has mass, total " + std::to_string(c));
    }
    out[c] = w0.log_prob(c) == kNegInf ? 0.0 : w0.log_prob(c) - wp.log_prob(c);
  }
  return out;
}

// r = KL(W_0* || W_pseudo,0), the expected log-ratio under the alternative marginal.
inline GapReport gap_r(std::span<const PriorSpec> specs, std::span<const long> sizes, const PseudoDensity& density) {
  GapReport rep;
  rep.sizes.assign(sizes.begin(), sizes.end());
  rep.k = sizes.size();
  rep.spec_summary = detail::describe_specs(specs);
  rep.per_point = gap_log_ratio(specs, sizes, density);
  Pmf w0 = can_target(specs, sizes);
  for (std::size_t c = 0; c < rep.per_point.size(); ++c) rep.r += w0.prob(c) * rep.per_point[c];
  return rep;
}

// The same log-ratio averaged under the total's law at a fixed alternative.
inline double r_prime_from_ratio(const MeanParams& p_alt, std::span<const long> sizes, std::span<const double> ratio) {
  Pmf t = point_target(p_alt, sizes);
  if (t.size() != ratio.size()) throw Error("log-ratio does not match the total size");
  double acc = 0.0;
  for (std::size_t c = 0; c < ratio.size(); ++c) acc += t.prob(c) * ratio[c];
  return acc;
}

inline double gap_r_prime(const MeanParams& p_alt, std::span<const PriorSpec> specs, std::span<const long> sizes,
                          const PseudoDensity& density) {
  std::vector<double> ratio = gap_log_ratio(specs, sizes, density);
  return r_prime_from_ratio(p_alt, sizes, ratio);
}

struct ParamGrid {
  double step = 0.02;
  double lo = 0.02;
  double hi = 0.98;

  std::vector<double> axis() const {
    if (!(step > 0.0) || !(lo >= 0.0) || !(hi <= 1.0) || !(lo <= hi)) throw Error("invalid parameter grid");
    std::vector<double> out;
    const long count = long(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) out.push_back(lo + double(i) * step);
    return out;
  }

  // Interior grids stay inside the region where the asymptotic rates apply.
  bool interior() const { return lo > 0.0 && hi < 1.0; }
};

struct WorstCase {
  double value = 0.0;
  MeanParams argmax;
};

// Point i of the product grid in lexicographic order, first coordinate slowest.
inline MeanParams grid_point(const std::vector<double>& axis, std::size_t k, std::size_t i) {
  MeanParams p;
  p.p.resize(k);
  for (std::size_t d = k; d-- > 0;) {
    p.p[d] = axis[i % axis.size()];
    i /= axis.size();
  }
  return p;
}

// Maximum over the product grid; ties go to the lexicographically smallest point.
template <class F>
WorstCase grid_maximum(F&& value_at, std::size_t k, const ParamGrid& grid, std::size_t workers) {
  std::vector<double> axis = grid.axis();
  double total = std::pow(double(axis.size()), double(k));
  if (total > 1e7) throw Error("parameter grid too large");
  const std::size_t count = std::size_t(total);
  std::vector<double> values(count);
  parallel_for(count, [&](std::size_t i) { values[i] = value_at(grid_point(axis, k, i)); }, workers);
  std::size_t best = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return {values[best], grid_point(axis, k, best)};
}

inline WorstCase worst_case_r_prime(std::span<const PriorSpec> specs, std::span<const long> sizes,
                                    const PseudoDensity& density, const ParamGrid& grid = {},
                                    std::size_t workers = default_workers()) {
  std::vector<double> ratio = gap_log_ratio(specs, sizes, density);
  return grid_maximum([&](const MeanParams& p) { return r_prime_from_ratio(p, sizes, ratio); }, sizes.size(), grid,
                      workers);
}

// E_{p_alt}[log S_point - log S_cand]; the point statistic is rebuilt from a fresh solve.
inline double regret(const MeanParams& p_alt, const SeparableStatistic& candidate, const RiprOptions& opt = {}) {
  RiprSolution sol = solve_gro_point(p_alt, candidate.sizes, opt);
  SeparableStatistic best = gro_point_statistic(p_alt, candidate.sizes, sol);
  std::vector<Pmf> ref = point_reference(p_alt, candidate.sizes);
  return e_power(best, ref) - e_power(candidate, ref);
}

// Candidate statistics for regret curves, all with the Bayes or NML numerator of `specs`.
struct CandidateSpec {
  StatisticKind kind = StatisticKind::kGroMic;
  long scale = 10000;  // pseudo only
  RiprOptions solver;  // canonical only
};

inline SeparableStatistic build_candidate(const CandidateSpec& cand, std::span<const PriorSpec> specs,
                                          std::span<const long> sizes) {
  switch (cand.kind) {
    case StatisticKind::kGroMic: return gro_mic_statistic(specs, sizes);
    case StatisticKind::kPseudo: return pseudo_statistic(specs, sizes, pseudo_null_density(specs, sizes, cand.scale));
    case StatisticKind::kGroCan: return gro_can_statistic(specs, sizes, solve_gro_can(specs, sizes, cand.solver));
    case StatisticKind::kGroPoint: break;
  }
  throw Error("the point statistic is the regret reference, not a candidate");
}

// Sum over groups of KL(Bin(n^i, p_i) || W_1^i): the multiplicities cancel at the sufficient statistic.
inline double redundancy(const MeanParams& p_alt, std::span<const PriorSpec> specs, std::span<const long> sizes) {
  std::vector<Pmf> truth = point_reference(p_alt, sizes);
  std::vector<Pmf> universal = induced_group_pmfs(specs, sizes);
  double acc = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) acc += kl_divergence(truth[i], universal[i]);
  return acc;
}

struct LogFit {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;  // root mean square
};

// Least squares of y on log m.
inline LogFit fit_log_slope(std::span<const std::pair<long, double>> points) {
  std::vector<long> ms;
  for (const auto& [m, y] : points) {
    if (m < 1) throw Error("sample sizes must be positive");
    ms.push_back(m);
  }
  std::sort(ms.begin(), ms.end());
  if (std::unique(ms.begin(), ms.end()) - ms.begin() < 3) throw Error("degenerate design: need three distinct m");
  const double cnt = double(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [m, y] : points) {
    sx += std::log(double(m));
    sy += y;
  }
  const double mx = sx / cnt, my = sy / cnt;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [m, y] : points) {
    double dx = std::log(double(m)) - mx;
    sxx += dx * dx;
    sxy += dx * (y - my);
  }
  LogFit fit;
  fit.a = sxy / sxx;
  fit.b = my - fit.a * mx;
  double ss = 0.0;
  for (const auto& [m, y] : points) {
    double e = y - (fit.a * std::log(double(m)) + fit.b);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / cnt);
  return fit;
}

struct RegretCurve {
  std::vector<std::pair<long, double>> points;  // sorted by m
  LogFit fit;
  MeanParams grid_cell;
};

// Regret at p_alt for equal group sizes m, fitted against log m.
inline RegretCurve regret_curve(const MeanParams& p_alt, std::span<const PriorSpec> specs, std::vector<long> ms,
                                const CandidateSpec& cand = {}, const RiprOptions& opt = {}) {
  std::sort(ms.begin(), ms.end());
  RegretCurve out;
  out.grid_cell = p_alt;
  for (long m : ms) {
    std::vector<long> sizes(p_alt.p.size(), m);
    out.points.emplace_back(m, regret(p_alt, build_candidate(cand, specs, sizes), opt));
  }
  out.fit = fit_log_slope(out.points);
  return out;
}

struct Theorem1Report {
  double tv = 0.0;
  std::vector<double> model_cells;  // law of s/m under the marginal, per cell
  std::vector<double> prior_cells;  // prior mass per cell
};

// Cell j is [j/bins, (j+1)/bins), the last one closed. NML is compared with Beta(1/2, 1/2).
inline Theorem1Report theorem1_diagnostic(const PriorSpec& spec, long m, long bins) {
  if (m < 1) throw Error("m must be positive");
  if (bins < 1) throw Error("need at least one bin");
  if (bins > m + 1) throw Error("more bins than support points");
  BetaPrior limit;
  if (std::holds_alternative<NmlPrior>(spec.kind())) {
    limit = {0.5, 0.5};
  } else if (auto b = spec.as_beta()) {
    limit = *b;
  } else {
    throw Error("prior has no density representation");
  }
  Pmf w1 = induced_group_pmf(spec, m);
  Theorem1Report rep;
  rep.model_cells.assign(std::size_t(bins), 0.0);
  rep.prior_cells.assign(std::size_t(bins), 0.0);
  for (long s = 0; s <= m; ++s) {
    // Integer arithmetic keeps cell edges exact.
    long cell = std::min(bins - 1, s * bins / m);
    rep.model_cells[std::size_t(cell)] += w1.prob(std::size_t(s));
  }
  double prev = 0.0;
  for (long j = 0; j < bins; ++j) {
    double x = j + 1 == bins ? 1.0 : double(j + 1) / double(bins);
    double cdf = boost::math::ibeta(limit.alpha, limit.beta, x);
    rep.prior_cells[std::size_t(j)] = cdf - prev;
    prev = cdf;
  }
  rep.tv = total_variation(rep.model_cells, rep.prior_cells);
  return rep;
}

// Total variation between W_0* and its moment-matched discrete Gaussian.
inline double gaussian_tv(std::span<const PriorSpec> specs, std::span<const long> sizes) {
  std::vector<Pmf> pmfs = induced_group_pmfs(specs, sizes);
  return total_variation(null_optimal_prior(pmfs), discrete_gaussian_approx(pmfs));
}

enum class Regime { kFixedM, kFixedN, kPowerLaw };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::kFixedM: return "m_fixed";
    case Regime::kFixedN: return "n_fixed";
    case Regime::kPowerLaw: return "power_law";
  }
  return "unknown";
}

struct SweepConfig {
  std::string diagnostic = "gap_r";
  Regime regime = Regime::kFixedM;
  std::vector<long> ks{2};
  std::vector<long> ms{10};  // m fixed: per-group sizes
  long n = 0;                // n fixed: m = n / k
  double coefficient = 5.0;  // power law: m = coefficient * k^exponent
  double exponent = 2.0;
  std::vector<PriorSpec> specs{PriorSpec::uniform()};  // each applied to every group of a cell
  long scale = 10000;
  ParamGrid grid;
  std::optional<std::size_t> workers;
};

struct SweepCell {
  std::size_t index = 0;
  long k = 0;
  long m = 0;
  PriorSpec spec;
};

struct SweepRow {
  SweepCell cell;
  double value = 0.0;
};

inline const std::vector<std::string>& sweep_diagnostics() {
  static const std::vector<std::string> names{"gap_r", "worst_case_r_prime", "epower_mic", "epower_pseudo",
                                              "gaussian_tv", "redundancy_center"};
  return names;
}

// Cells in order: spec, then k, then m.
inline std::vector<SweepCell> sweep_cells(const SweepConfig& cfg) {
  const auto& names = sweep_diagnostics();
  if (std::find(names.begin(), names.end(), cfg.diagnostic) == names.end()) {
    throw Error("unknown diagnostic: " + cfg.diagnostic);
  }
  if (cfg.ks.empty() || cfg.specs.empty()) throw Error("empty sweep");
  std::vector<SweepCell> out;
  for (const PriorSpec& spec : cfg.specs) {
    for (long k : cfg.ks) {
      if (k < 1) throw Error("k must be positive");
      std::vector<long> ms;
      switch (cfg.regime) {
        case Regime::kFixedM: ms = cfg.ms; break;
        case Regime::kFixedN:
          if (cfg.n < 1 || cfg.n % k != 0) throw Error("n must be a positive multiple of every k");
          ms = {cfg.n / k};
          break;
        case Regime::kPowerLaw: ms = {std::max(1L, std::lround(cfg.coefficient * std::pow(double(k), cfg.exponent)))}; break;
      }
      for (long m : ms) {
        if (m < 1) throw Error("m must be positive");
        out.push_back({out.size(), k, m, spec});
      }
    }
  }
  return out;
}

inline double evaluate_cell(const SweepConfig& cfg, const SweepCell& cell) {
  std::vector<PriorSpec> specs(std::size_t(cell.k), cell.spec);
  std::vector<long> sizes(std::size_t(cell.k), cell.m);
  const std::string& d = cfg.diagnostic;
  if (d == "gap_r") return gap_r(specs, sizes, pseudo_null_density(specs, sizes, cfg.scale)).r;
  if (d == "worst_case_r_prime") {
    return worst_case_r_prime(specs, sizes, pseudo_null_density(specs, sizes, cfg.scale), cfg.grid, 1).value;
  }
  if (d == "epower_mic") return e_power(gro_mic_statistic(specs, sizes), alt_reference(specs, sizes));
  if (d == "epower_pseudo") {
    return e_power(pseudo_statistic(specs, sizes, pseudo_null_density(specs, sizes, cfg.scale)),
                   alt_reference(specs, sizes));
  }
  if (d == "gaussian_tv") return gaussian_tv(specs, sizes);
  if (d == "redundancy_center") return redundancy(MeanParams{std::vector<double>(sizes.size(), 0.5)}, specs, sizes);
  throw Error("unknown diagnostic: " + d);
}

// Cells run on a worker pool; rows come back in cell order whatever the thread count.
inline std::vector<SweepRow> sweep(const SweepConfig& cfg) {
  std::vector<SweepCell> cells = sweep_cells(cfg);
  std::vector<SweepRow> rows(cells.size());
  parallel_for(
      cells.size(), [&](std::size_t i) { rows[i] = {cells[i], evaluate_cell(cfg, cells[i])}; },
      cfg.workers.value_or(default_workers()));
  return rows;
}

}  // namespace gro
