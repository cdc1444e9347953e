// Acceptance run: one line per criterion, nonzero exit if any criterion fails or overruns its budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gro/gro.hpp"
#include "test_support.hpp"

using namespace gro;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<PriorSpec> same(const PriorSpec& p, std::size_t k) { return std::vector<PriorSpec>(k, p); }

// Linear-space statistic values for every c1, indexed in the for_each_c1 order.
std::vector<double> statistic_values(const SeparableStatistic& s) {
  std::vector<double> out;
  test::for_each_c1(s.sizes, [&](const std::vector<long>& c1) { out.push_back(std::exp(s.log_e(c1))); });
  return out;
}

Outcome exact_unity() {
  const std::vector<PriorSpec> priors{PriorSpec::beta(0.5, 0.5), PriorSpec::uniform(), PriorSpec::beta(3, 3),
                                      PriorSpec::nml()};
  double worst = 0.0;
  long cases = 0;
  for (std::size_t k : {2u, 3u}) {
    std::vector<long> sizes(k, 1);
    while (true) {
      long n = 0;
      for (long s : sizes) n += s;
      for (const PriorSpec& prior : priors) {
        SeparableStatistic st = gro_mic_statistic(same(prior, k), sizes);
        std::vector<double> vals = statistic_values(st);
        // Conditional expectation given c0: weights C(n_i, c1_i) / C(n, c0).
        std::vector<double> micro(std::size_t(n) + 1, 0.0);
        std::vector<double> canon(21, 0.0);
        std::size_t idx = 0;
        test::for_each_c1(sizes, [&](const std::vector<long>& c1) {
          double omega1 = 1.0;
          long c0 = 0;
          for (std::size_t i = 0; i < k; ++i) {
            omega1 *= test::binom(sizes[i], c1[i]);
            c0 += c1[i];
          }
          const double v = vals[idx++];
          micro[std::size_t(c0)] += omega1 / test::binom(n, c0) * v;
          for (int g = 0; g <= 20; ++g) {
            double p0 = 0.05 * g, w = 1.0;
            for (std::size_t i = 0; i < k; ++i) w *= test::binomial_pmf(sizes[i], c1[i], p0);
            canon[std::size_t(g)] += w * v;
          }
        });
        for (double e : micro) worst = std::max(worst, std::abs(e - 1.0));
        for (double e : canon) worst = std::max(worst, std::abs(e - 1.0));
        ++cases;
      }
      std::size_t i = 0;
      while (i < k && sizes[i] == 12) sizes[i++] = 1;
      if (i == k) break;
      ++sizes[i];
    }
  }
  return {worst <= 1e-10, std::to_string(cases) + " cases, max |E-1| = " + fmt(worst)};
}

Outcome triangular_prior() {
  std::vector<long> sizes{8, 10};
  Pmf w0 = null_optimal_prior(induced_group_pmfs(same(PriorSpec::uniform(), 2), sizes));
  double worst = 0.0;
  for (long c = 0; c <= 18; ++c) {
    worst = std::max(worst, std::abs(w0.prob(std::size_t(c)) - uniform_convolution_closed_form(sizes, c)));
  }
  return {w0.size() == 19 && worst <= 1e-12, "19 points, max diff = " + fmt(worst)};
}

Outcome worked_evalue() {
  EValueReport r = log_e_gro_mic(Table({{2, 2}, {2, 0}}), same(PriorSpec::uniform(), 2));
  double e = std::exp(r.log_e);
  return {std::abs(e - 2.0) <= 1e-12, "e = " + fmt(e)};
}

Outcome sandwich() {
  double worst = INFINITY;
  bool converged = true;
  for (long m : {5L, 10L, 20L}) {
    for (const PriorSpec& prior : {PriorSpec::uniform(), PriorSpec::beta(3, 3), PriorSpec::nml()}) {
      std::vector<long> sizes{m, m};
      auto specs = same(prior, 2);
      auto ref = alt_reference(specs, sizes);
      RiprSolution sol = solve_gro_can(specs, sizes, RiprOptions{2001, 1e-10, 50000});
      converged = converged && sol.converged;
      double mic = e_power(gro_mic_statistic(specs, sizes), ref);
      double can = e_power(gro_can_statistic(specs, sizes, sol), ref);
      double pseudo = e_power(pseudo_statistic(specs, sizes, pseudo_null_density(specs, sizes, 10000)), ref);
      worst = std::min({worst, can - mic, pseudo - can});
    }
  }
  return {converged && worst >= -1e-8, "min slack = " + fmt(worst) + (converged ? "" : ", solver not converged")};
}

// Gap r for a sequence of size vectors; returns the values.
std::vector<double> gap_series(const std::vector<std::vector<long>>& sizes, const PriorSpec& prior, long scale) {
  std::vector<double> out;
  for (const auto& s : sizes) {
    auto specs = same(prior, s.size());
    out.push_back(gap_r(specs, s, pseudo_null_density(specs, s, scale)).r);
  }
  return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string series(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

constexpr long kGapScale = 10000;

Outcome gap_convergence() {
  const std::vector<long> ms{10, 20, 40, 80, 160, 320};
  std::vector<std::vector<long>> equal, ratio;
  for (long m : ms) {
    equal.push_back({m, m});
    ratio.push_back({2 * m, m});
  }
  std::vector<double> u = gap_series(equal, PriorSpec::uniform(), kGapScale);
  std::vector<double> r = gap_series(ratio, PriorSpec::uniform(), kGapScale);
  std::vector<double> nml = gap_series(equal, PriorSpec::nml(), kGapScale);
  bool ok = strictly_decreasing(u) && u.back() < u.front() / 10.0 && strictly_decreasing(r) && strictly_decreasing(nml);
  return {ok, "equal [" + series(u) + "] 2:1 [" + series(r) + "] nml [" + series(nml) + "]"};
}

Outcome regimes() {
  std::vector<std::vector<long>> a, b, c;
  for (long m : {8L, 16L, 32L, 64L, 128L}) a.push_back(std::vector<long>(8, m));
  for (long k : {2L, 4L, 8L, 16L}) b.push_back(std::vector<long>(std::size_t(k), 1024 / k));
  for (long k : {2L, 3L, 4L}) c.push_back(std::vector<long>(std::size_t(k), 5 * k * k));
  std::vector<double> ra = gap_series(a, PriorSpec::uniform(), kGapScale);
  std::vector<double> rb = gap_series(b, PriorSpec::uniform(), kGapScale);
  std::vector<double> rc = gap_series(c, PriorSpec::uniform(), kGapScale);
  bool nondecreasing = true;
  for (std::size_t i = 1; i < rb.size(); ++i) nondecreasing = nondecreasing && rb[i] >= rb[i - 1];
  bool ok = strictly_decreasing(ra) && nondecreasing && strictly_decreasing(rc);
  return {ok, "k=8 [" + series(ra) + "] n=1024 [" + series(rb) + "] m=5k^2 [" + series(rc) + "]"};
}

Outcome nml_identity() {
  double worst = 0.0;
  for (long n = 1; n <= 1000; ++n) {
    double direct = std::exp(nml_log_normalizer(n));
    worst = std::max(worst, std::abs(direct - test::nml_gamma_form(n)) / direct);
  }
  return {worst <= 1e-8, "max relative diff = " + fmt(worst)};
}

Outcome stars_and_bars() {
  double worst = 0.0;
  long cases = 0;
  // Convolution is symmetric in the group order, so nondecreasing size tuples cover every tuple.
  for (std::size_t k = 1; k <= 5; ++k) {
    std::vector<long> sizes(k, 1);
    while (true) {
      Pmf num = null_optimal_prior(induced_group_pmfs(same(PriorSpec::uniform(), k), sizes));
      for (std::size_t c = 0; c < num.size(); ++c) {
        worst = std::max(worst, std::abs(num.prob(c) - uniform_convolution_closed_form(sizes, long(c))));
      }
      ++cases;
      std::size_t i = 0;
      while (i < k && sizes[i] == 10) ++i;
      if (i == k) break;
      ++sizes[i];
      for (std::size_t j = 0; j < i; ++j) sizes[j] = sizes[i];
    }
  }
  return {worst <= 1e-10, std::to_string(cases) + " size tuples, max diff = " + fmt(worst)};
}

// Frozen from the first run, rounded up.
constexpr double kGaussTv5 = 0.016;
constexpr double kGaussTv50 = 0.0015;

Outcome gaussian_approx() {
  double tv5 = gaussian_tv(same(PriorSpec::uniform(), 5), std::vector<long>(5, 10));
  double tv50 = gaussian_tv(same(PriorSpec::uniform(), 50), std::vector<long>(50, 10));
  return {tv50 < tv5 && tv5 < kGaussTv5 && tv50 < kGaussTv50, "TV(5) = " + fmt(tv5) + ", TV(50) = " + fmt(tv50)};
}

Outcome regret_slope() {
  struct Cell {
    double gamma;
    std::vector<double> p;
  };
  const std::vector<Cell> cells{{1.5, {0.3, 0.3}}, {1.5, {0.3, 0.7}}, {1.5, {0.5, 0.5}}, {0.5, {0.5, 0.5}}};
  std::vector<long> ms;
  for (long m = 600; m <= 1800; m += 200) ms.push_back(m);
  std::vector<double> slopes(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    MeanParams p{cells[i].p};
    slopes[i] = regret_curve(p, same(PriorSpec::beta(cells[i].gamma, cells[i].gamma), 2), ms).fit.a;
  });
  bool ok = slopes[3] > 0.5;
  for (std::size_t i = 0; i < 3; ++i) ok = ok && slopes[i] >= 0.35 && slopes[i] <= 0.65;
  return {ok, "slopes " + series(slopes)};
}

Outcome continuation() {
  std::vector<long> sizes{4, 4};
  SeparableStatistic s = gro_mic_statistic(same(PriorSpec::uniform(), 2), sizes);
  std::vector<double> vals = statistic_values(s);
  double worst = 0.0;
  for (int g = 0; g <= 20; ++g) {
    double p0 = 0.05 * g;
    std::vector<double> probs;
    test::for_each_c1(sizes, [&](const std::vector<long>& c1) {
      probs.push_back(test::binomial_pmf(4, c1[0], p0) * test::binomial_pmf(4, c1[1], p0));
    });
    double e = 0.0;
    for (std::size_t a = 0; a < vals.size(); ++a) {
      for (std::size_t b = 0; b < vals.size(); ++b) e += probs[a] * probs[b] * vals[a] * vals[b];
    }
    worst = std::max(worst, e);
  }
  return {worst <= 1.0 + 1e-10, "max E[e1 e2] = " + fmt(worst)};
}

Outcome markov() {
  double worst = -INFINITY;
  for (const std::vector<long>& sizes : {std::vector<long>{6, 6}, {3, 9}, {4, 4, 4}}) {
    SeparableStatistic s = gro_mic_statistic(same(PriorSpec::uniform(), sizes.size()), sizes);
    std::vector<double> vals = statistic_values(s);
    for (double alpha : {0.01, 0.05, 0.1}) {
      for (int g = 0; g <= 20; ++g) {
        double p0 = 0.05 * g, tail = 0.0;
        std::size_t idx = 0;
        test::for_each_c1(sizes, [&](const std::vector<long>& c1) {
          if (vals[idx++] >= 1.0 / alpha) {
            double w = 1.0;
            for (std::size_t i = 0; i < sizes.size(); ++i) w *= test::binomial_pmf(sizes[i], c1[i], p0);
            tail += w;
          }
        });
        worst = std::max(worst, tail - alpha);
      }
    }
  }
  return {worst <= 0.0, "max P(S >= 1/alpha) - alpha = " + fmt(worst)};
}

Outcome weak_convergence() {
  double tv50 = theorem1_diagnostic(PriorSpec::beta(2, 2), 50, 20).tv;
  double tv400 = theorem1_diagnostic(PriorSpec::beta(2, 2), 400, 20).tv;
  double bound = 20.0 * std::log(400.0) / 400.0;
  return {tv400 < tv50 && tv400 < bound, "TV(50) = " + fmt(tv50) + ", TV(400) = " + fmt(tv400)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "null expectation of GroMic is one", 30, exact_unity},
      {2, "triangular optimal null prior", 1, triangular_prior},
      {3, "worked e-value", 1, worked_evalue},
      {4, "e-power sandwich", 120, sandwich},
      {5, "gap convergence in m", 60, gap_convergence},
      {6, "2xk regimes", 120, regimes},
      {7, "NML normalizer identity", 5, nml_identity},
      {8, "uniform convolution closed form", 10, stars_and_bars},
      {9, "Gaussian approximation of W0*", 10, gaussian_approx},
      {10, "regret slope", 600, regret_slope},
      {11, "optional continuation", 5, continuation},
      {12, "Markov type-I bound", 5, markov},
      {13, "weak convergence diagnostic", 30, weak_convergence},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_budget = secs < c.budget_s;
    bool pass = o.ok && in_budget;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d: %s (%s; %.2f s of %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.budget_s, in_budget ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
