#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "gro/error.hpp"
#include "gro/numerics.hpp"

namespace gro {

struct RiprOptions {
  long grid_size = 2001;
  double tol = 1e-10;
  long max_iter = 50000;
};

// Mixture of binomials over an equispaced p0-grid approximating the reverse projection.
struct RiprSolution {
  std::vector<double> grid;
  Pmf weights;
  long n = 0;
  double achieved_kl = 0.0;
  long iterations = 0;
  bool converged = false;
  // max_j sum_c target(c) q_j(c) / q_w(c) - 1; bounds achieved_kl minus the grid optimum.
  double certificate = 0.0;
  std::vector<double> kl_history;
};

// Candidate support size for the Newton step when the weights are dense.
inline constexpr std::size_t kMaxNewtonSupport = 200;
// Newton iterations without halving the certificate before switching to the barrier polish.
inline constexpr int kStallIterations = 5;
inline constexpr int kPolishRounds = 10;
// Off-support grid points (largest gradient ratio first) added to the polish candidate set.
inline constexpr std::size_t kPolishExtra = 50;
// Points in the first polish round's sweep of the target range, and the tail mass it ignores.
inline constexpr std::size_t kPolishSweep = 150;
inline constexpr double kSweepTail = 1e-9;
// Initial barrier duality gap; the start point is not centered, so begin well above tol.
inline constexpr double kPolishStartGap = 1e-4;
// Newton decrements below this are round-off.
inline constexpr double kDecrementFloor = 1e-15;
// Mass spread over the candidate set so the barrier starts strictly inside the simplex.
inline constexpr double kPolishMix = 1e-6;
// Barrier pruning: from mu |S| <= kPruneStart, drop points with weight below kPruneFactor * mu whose
// gradient ratio stays below kPruneGradient without the dropped mass; at most kPrunePasses screening passes.
inline constexpr double kPruneStart = 1e-3;
inline constexpr double kPruneFactor = 10.0;
inline constexpr double kPruneGradient = 0.9;
inline constexpr int kPrunePasses = 50;

namespace detail {

// Lawson-Hanson: argmin ||A x - b|| subject to x >= 0.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (n == 0 || a.rows() == 0) return x;
  std::vector<char> passive(std::size_t(n), 0);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * a.cwiseAbs().colwise().sum().maxCoeff() *
                     double(std::max(a.rows(), n));
  Eigen::VectorXd grad = a.transpose() * b;
  const long max_outer = 3 * long(n) + 10;
  for (long outer = 0; outer < max_outer; ++outer) {
    Eigen::Index best = -1;
    double best_val = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[std::size_t(j)] && grad(j) > best_val) {
        best_val = grad(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[std::size_t(best)] = 1;
    for (long inner = 0; inner < max_outer; ++inner) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[std::size_t(j)]) idx.push_back(j);
      }
      if (idx.empty()) break;
      Eigen::MatrixXd ap(a.rows(), Eigen::Index(idx.size()));
      for (std::size_t c = 0; c < idx.size(); ++c) ap.col(Eigen::Index(c)) = a.col(idx[c]);
      Eigen::VectorXd z = ap.colPivHouseholderQr().solve(b);
      bool feasible = true;
      for (Eigen::Index c = 0; c < z.size(); ++c) feasible = feasible && z(c) > 0.0;
      if (feasible) {
        x.setZero();
        for (std::size_t c = 0; c < idx.size(); ++c) x(idx[c]) = z(Eigen::Index(c));
        break;
      }
      double alpha = 1.0;
      for (std::size_t c = 0; c < idx.size(); ++c) {
        double zc = z(Eigen::Index(c)), xc = x(idx[c]);
        if (zc <= 0.0) alpha = std::min(alpha, xc / (xc - zc));
      }
      for (std::size_t c = 0; c < idx.size(); ++c) {
        double& xc = x(idx[c]);
        xc += alpha * (z(Eigen::Index(c)) - xc);
        if (xc <= tol) {
          xc = 0.0;
          passive[std::size_t(idx[c])] = 0;
        }
      }
    }
    grad = a.transpose() * (b - a * x);
    // The entering column could not be kept positive; stop rather than cycle.
    if (!passive[std::size_t(best)]) grad(best) = 0.0;
  }
  return x;
}

// Kernel rows q_j(c) = Bin(n, p_j)(c) restricted to the retained target outcomes.
class MixtureProblem {
 public:
  MixtureProblem(const Pmf& target, long n, long grid_size) : n_(n), g_(std::size_t(grid_size)) {
    // Outcomes with target mass below this carry no weight in the objective at double precision.
    constexpr double kTargetFloor = 1e-250;
    for (long c = 0; c <= n; ++c) {
      double t = target.prob(std::size_t(c));
      if (t > kTargetFloor) {
        cols_.push_back(c);
        t_.push_back(t);
        tlog_.push_back(target.log_prob(std::size_t(c)));
      }
    }
    r_ = cols_.size();
    grid_.resize(g_);
    for (std::size_t j = 0; j < g_; ++j) grid_[j] = j + 1 == g_ ? 1.0 : double(j) / double(g_ - 1);
    k_.resize(g_ * r_);
    for (std::size_t j = 0; j < g_; ++j) {
      for (std::size_t r = 0; r < r_; ++r) {
        k_[j * r_ + r] = std::exp(log_binomial_pmf(n_, cols_[r], grid_[j]));
      }
    }
  }

  std::size_t grid_size() const { return g_; }

  // Grid index range covering the target outside tails of mass `tail` on each side.
  std::pair<std::size_t, std::size_t> target_span(double tail) const {
    double acc = 0.0;
    std::size_t lo = 0, hi = r_ - 1;
    for (std::size_t r = 0; r < r_; ++r) {
      acc += t_[r];
      if (acc > tail) {
        lo = r;
        break;
      }
    }
    acc = 0.0;
    for (std::size_t r = r_; r-- > 0;) {
      acc += t_[r];
      if (acc > tail) {
        hi = r;
        break;
      }
    }
    auto index = [&](long c) { return std::size_t(std::lround(double(c) / double(n_) * double(g_ - 1))); };
    return {index(cols_[lo]), index(cols_[hi])};
  }
  const std::vector<double>& grid() const { return grid_; }

  std::vector<double> mixture(const std::vector<double>& w) const {
    std::vector<double> q(r_, 0.0);
    for (std::size_t j = 0; j < g_; ++j) {
      if (w[j] == 0.0) continue;
      const double* row = &k_[j * r_];
      for (std::size_t r = 0; r < r_; ++r) q[r] += w[j] * row[r];
    }
    return q;
  }

  double kl(const std::vector<double>& q) const {
    double s = 0.0;
    for (std::size_t r = 0; r < r_; ++r) {
      if (!(q[r] > 0.0)) return std::numeric_limits<double>::infinity();
      s += t_[r] * (tlog_[r] - std::log(q[r]));
    }
    return s;
  }

  // KL(w_new) - KL(w_old) from the weight difference; exact differences survive when both are tiny.
  double kl_change(const std::vector<double>& q_old, const std::vector<double>& w_new,
                   const std::vector<double>& w_old) const {
    std::vector<double> dw(g_);
    for (std::size_t j = 0; j < g_; ++j) dw[j] = w_new[j] - w_old[j];
    std::vector<double> dq = mixture(dw);
    double s = 0.0;
    for (std::size_t r = 0; r < r_; ++r) {
      double ratio = dq[r] / q_old[r];
      if (!(ratio > -1.0)) return std::numeric_limits<double>::infinity();
      s -= t_[r] * std::log1p(ratio);
    }
    return s;
  }

  // g_j = sum_c t(c) q_j(c) / q(c).
  std::vector<double> gradient_ratio(const std::vector<double>& q) const {
    std::vector<double> ratio(r_);
    for (std::size_t r = 0; r < r_; ++r) ratio[r] = t_[r] / q[r];
    std::vector<double> g(g_, 0.0);
    for (std::size_t j = 0; j < g_; ++j) {
      const double* row = &k_[j * r_];
      double s = 0.0;
      for (std::size_t r = 0; r < r_; ++r) s += row[r] * ratio[r];
      g[j] = s;
    }
    return g;
  }

  // Log-barrier Newton polish on candidate set `cand`; w must be positive on cand and zero elsewhere.
  // Returns the number of Newton steps taken. At the barrier optimum g_j = 1 + mu |S| - mu / w_j on S.
  long barrier_polish(std::vector<double>& w, std::vector<std::size_t> cand, double tol, long max_steps) const {
    auto objective_change = [&](const std::vector<double>& q_old, const Eigen::VectorXd& ws,
                                const Eigen::VectorXd& dws, double alpha, double mu) {
      std::vector<double> dq(r_, 0.0);
      for (std::size_t a = 0; a < cand.size(); ++a) {
        const double* row = &k_[cand[a] * r_];
        double d = alpha * dws(Eigen::Index(a));
        for (std::size_t r = 0; r < r_; ++r) dq[r] += d * row[r];
      }
      double f = 0.0;
      for (std::size_t r = 0; r < r_; ++r) {
        double ratio = dq[r] / q_old[r];
        if (!(ratio > -1.0)) return std::numeric_limits<double>::infinity();
        f -= t_[r] * std::log1p(ratio);
      }
      for (Eigen::Index a = 0; a < ws.size(); ++a) {
        double ratio = alpha * dws(a) / ws(a);
        if (!(ratio > -1.0)) return std::numeric_limits<double>::infinity();
        f -= mu * std::log1p(ratio);
      }
      return f;
    };

    std::vector<double> q = mixture(w);
    std::vector<double> gfull = gradient_ratio(q);
    double gmax = 0.0;
    for (std::size_t j : cand) gmax = std::max(gmax, gfull[j] - 1.0);
    double mu = std::max(gmax, kPolishStartGap) / double(cand.size());
    const double mu_final = 1e-3 * tol / double(cand.size());
    long steps = 0;
    Eigen::VectorXd ws;
    Eigen::MatrixXd ks;
    auto load = [&] {
      const auto es = Eigen::Index(cand.size());
      ws.resize(es);
      ks.resize(es, Eigen::Index(r_));
      for (std::size_t a = 0; a < cand.size(); ++a) {
        ws(Eigen::Index(a)) = w[cand[a]];
        for (std::size_t r = 0; r < r_; ++r) ks(Eigen::Index(a), Eigen::Index(r)) = k_[cand[a] * r_ + r];
      }
    };
    load();
    while (steps < max_steps) {
      const auto es = Eigen::Index(cand.size());
      for (int inner = 0; inner < 50 && steps < max_steps; ++inner) {
        ++steps;
        const auto er = Eigen::Index(r_);
        Eigen::VectorXd ratio(er), curv(er);
        for (std::size_t r = 0; r < r_; ++r) {
          ratio(Eigen::Index(r)) = t_[r] / q[r];
          curv(Eigen::Index(r)) = std::sqrt(t_[r]) / q[r];
        }
        Eigen::VectorXd gs = ks * ratio;
        Eigen::MatrixXd kc = ks * curv.asDiagonal();
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(es, es);
        h.selfadjointView<Eigen::Lower>().rankUpdate(kc);
        Eigen::VectorXd grad = -gs;
        for (Eigen::Index a = 0; a < es; ++a) {
          grad(a) -= mu / ws(a);
          h(a, a) += mu / (ws(a) * ws(a));
        }
        Eigen::LDLT<Eigen::MatrixXd, Eigen::Lower> ldlt(h);
        Eigen::VectorXd ha = ldlt.solve(grad);
        Eigen::VectorXd hb = ldlt.solve(Eigen::VectorXd::Ones(es));
        double nu = -ha.sum() / hb.sum();
        Eigen::VectorXd dws = -(ha + nu * hb);
        double decrement = -grad.dot(dws);
        if (!(decrement > std::max(1e-6 * mu * double(es), kDecrementFloor))) break;
        double alpha = 1.0;
        for (Eigen::Index a = 0; a < es; ++a) {
          if (dws(a) < 0.0) alpha = std::min(alpha, 0.99 * ws(a) / -dws(a));
        }
        double f = objective_change(q, ws, dws, alpha, mu);
        while (f > -0.25 * alpha * decrement && alpha > 1e-12) {
          alpha *= 0.5;
          f = objective_change(q, ws, dws, alpha, mu);
        }
        if (!(f <= 0.0)) break;
        ws += alpha * dws;
        ws /= ws.sum();
        for (std::size_t a = 0; a < cand.size(); ++a) w[cand[a]] = ws(Eigen::Index(a));
        q = mixture(w);
      }
      if (mu <= mu_final) break;
      // Once mu |S| is small, drop points with w_j < 10 mu whose gradient ratio stays below 0.9 after all
      // dropped mass is removed from the mixture; a small barrier weight alone does not rule out the support.
      if (mu * double(cand.size()) <= kPruneStart) {
        std::vector<char> drop(cand.size(), 0);
        for (std::size_t a = 0; a < cand.size(); ++a) drop[a] = ws(Eigen::Index(a)) < kPruneFactor * mu;
        for (int pass = 0; pass < kPrunePasses; ++pass) {
          // Rebuilt from the kept weights: subtracting dropped mass cancels where it dominates q.
          std::vector<double> w_rest = w;
          double removed = 0.0;
          for (std::size_t a = 0; a < cand.size(); ++a) {
            if (!drop[a]) continue;
            removed += w[cand[a]];
            w_rest[cand[a]] = 0.0;
          }
          std::vector<double> q_rest = mixture(w_rest);
          bool changed = false;
          for (std::size_t a = 0; a < cand.size(); ++a) {
            if (!drop[a]) continue;
            const double* row = &k_[cand[a] * r_];
            double g = 0.0;
            for (std::size_t r = 0; r < r_ && g < kPruneGradient; ++r) {
              g += q_rest[r] > 0.0 ? row[r] * t_[r] * (1.0 - removed) / q_rest[r] : row[r] > 0.0 ? INFINITY : 0.0;
            }
            if (!(g < kPruneGradient)) {
              drop[a] = 0;
              changed = true;
            }
          }
          if (!changed) break;
          if (pass + 1 == kPrunePasses) std::fill(drop.begin(), drop.end(), 0);
        }
        std::vector<std::size_t> keep;
        double z = 0.0;
        for (std::size_t a = 0; a < cand.size(); ++a) {
          if (drop[a]) {
            w[cand[a]] = 0.0;
          } else {
            keep.push_back(cand[a]);
            z += w[cand[a]];
          }
        }
        if (!keep.empty() && keep.size() < cand.size()) {
          for (std::size_t k : keep) w[k] /= z;
          cand.swap(keep);
          load();
          q = mixture(w);
        } else {
          for (std::size_t a = 0; a < cand.size(); ++a) w[cand[a]] = ws(Eigen::Index(a));
        }
      }
      mu = std::max(mu_final, 0.1 * mu);
    }
    return steps;
  }

  // Newton direction: NNLS of sqrt(t) (S w - 2) with S = q_j / q on the chosen support,
  // plus a heavily weighted sum-to-one row.
  std::vector<double> newton_target(const std::vector<double>& q, const std::vector<std::size_t>& support) const {
    constexpr double kSumWeight = 1e3;
    const auto rows = Eigen::Index(r_) + 1, cols = Eigen::Index(support.size());
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (std::size_t r = 0; r < r_; ++r) {
      double st = std::sqrt(t_[r]);
      b(Eigen::Index(r)) = 2.0 * st;
      for (std::size_t s = 0; s < support.size(); ++s) {
        a(Eigen::Index(r), Eigen::Index(s)) = st * k_[support[s] * r_ + r] / q[r];
      }
    }
    a.row(rows - 1).setConstant(kSumWeight);
    b(rows - 1) = kSumWeight;
    Eigen::VectorXd x = nnls(a, b);
    std::vector<double> w(g_, 0.0);
    double total = x.sum();
    if (!(total > 0.0)) return {};
    for (std::size_t s = 0; s < support.size(); ++s) w[support[s]] = x(Eigen::Index(s)) / total;
    return w;
  }

 private:
  long n_;
  std::size_t g_;
  std::size_t r_ = 0;
  std::vector<long> cols_;
  std::vector<double> t_, tlog_;
  std::vector<double> grid_;
  std::vector<double> k_;
};

inline std::vector<std::size_t> local_maxima(const std::vector<double>& v, double floor) {
  std::vector<std::size_t> out;
  const std::size_t n = v.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (!(v[j] > floor)) continue;
    bool left = j == 0 || v[j] > v[j - 1];  // a plateau counts once, at its left end
    bool right = j + 1 == n || v[j] >= v[j + 1];
    if (left && right) out.push_back(j);
  }
  return out;
}

}  // namespace detail

// Minimizes KL(target || sum_j w_j Bin(n, p_j)) over grid weights.
// Each iteration is a multiplicative EM step followed by a constrained Newton step
// (NNLS on the active support plus gradient peaks) with a monotone line search.
// Stops when the duality certificate max_j g_j - 1 drops to tol.
inline RiprSolution ripr_solve(const Pmf& target, long n, const RiprOptions& opt = {}) {
  if (n < 1) throw Error("solver needs n >= 1");
  if (target.size() != std::size_t(n) + 1) throw Error("target support must be 0..n");
  if (opt.grid_size < 51) throw Error("grid_size must be at least 51");
  if (!(opt.tol > 0.0)) throw Error("tol must be positive");
  if (opt.max_iter < 1) throw Error("max_iter must be positive");

  detail::MixtureProblem prob(target, n, opt.grid_size);
  const std::size_t g = prob.grid_size();
  std::vector<double> w(g, 1.0 / double(g));
  std::vector<double> q = prob.mixture(w);
  double kl = prob.kl(q);

  RiprSolution sol;
  sol.kl_history.push_back(kl);
  std::vector<double> grad = prob.gradient_ratio(q);
  double cert = *std::max_element(grad.begin(), grad.end()) - 1.0;
  long it = 0;
  int stalled = 0;
  while (cert > opt.tol && it < opt.max_iter) {
    ++it;
    bool moved = false;

    std::vector<double> w_em(g);
    double z = 0.0;
    for (std::size_t j = 0; j < g; ++j) z += (w_em[j] = w[j] * grad[j]);
    for (double& v : w_em) v /= z;
    std::vector<double> q_em = prob.mixture(w_em);
    double d_em = prob.kl_change(q, w_em, w);
    if (d_em <= 0.0) {
      double kl_em = kl + d_em;
      w.swap(w_em);
      q.swap(q_em);
      kl = kl_em;
      grad = prob.gradient_ratio(q);
      moved = d_em < 0.0;
    }

    // Dense weights (early iterations) are thinned so the NNLS stays small.
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < g; ++j) {
      if (w[j] > 0.0) support.push_back(j);
    }
    if (support.size() > kMaxNewtonSupport) {
      std::size_t stride = (support.size() + kMaxNewtonSupport - 1) / kMaxNewtonSupport;
      std::vector<std::size_t> thin = detail::local_maxima(w, 0.0);
      for (std::size_t i = 0; i < support.size(); i += stride) thin.push_back(support[i]);
      thin.push_back(support.back());
      support.swap(thin);
    }
    for (std::size_t j : detail::local_maxima(grad, 1.0)) support.push_back(j);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    std::vector<double> w_nt = prob.newton_target(q, support);
    if (!w_nt.empty()) {
      for (double alpha = 1.0; alpha > 1e-9; alpha *= 0.5) {
        std::vector<double> w_try(g);
        for (std::size_t j = 0; j < g; ++j) w_try[j] = (1.0 - alpha) * w[j] + alpha * w_nt[j];
        std::vector<double> q_try = prob.mixture(w_try);
        double d_try = prob.kl_change(q, w_try, w);
        if (d_try <= 0.0) {
          double kl_try = kl + d_try;
          moved = moved || d_try < 0.0 || w_try != w;
          w.swap(w_try);
          q.swap(q_try);
          kl = kl_try;
          grad = prob.gradient_ratio(q);
          break;
        }
      }
    }
    sol.kl_history.push_back(kl);
    double prev = cert;
    cert = *std::max_element(grad.begin(), grad.end()) - 1.0;
    stalled = (cert > 0.5 * prev) ? stalled + 1 : 0;
    if (!moved || stalled >= kStallIterations) break;
  }

  // Barrier polish with column generation when the Newton steps stall short of the tolerance.
  for (int round = 0; round < kPolishRounds && cert > opt.tol && it < opt.max_iter; ++round) {
    // Candidates: current support plus the grid points with the largest gradient ratio.
    std::vector<std::size_t> cand, rest;
    for (std::size_t j = 0; j < g; ++j) (w[j] > 0.0 ? cand : rest).push_back(j);
    if (cand.size() > kMaxNewtonSupport) {
      // Dense weights: keep the heaviest points and the weight peaks; the rest rejoin the pool.
      std::vector<std::size_t> peaks = detail::local_maxima(w, 0.0);
      std::partial_sort(cand.begin(), cand.begin() + long(kMaxNewtonSupport), cand.end(),
                        [&](std::size_t a, std::size_t b) { return w[a] > w[b] || (w[a] == w[b] && a < b); });
      rest.insert(rest.end(), cand.begin() + long(kMaxNewtonSupport), cand.end());
      cand.resize(kMaxNewtonSupport);
      cand.insert(cand.end(), peaks.begin(), peaks.end());
    }
    std::size_t extra = std::min(rest.size(), round == 0 ? std::max(kPolishExtra, cand.size()) : kPolishExtra);
    std::partial_sort(rest.begin(), rest.begin() + long(extra), rest.end(),
                      [&](std::size_t a, std::size_t b) { return grad[a] > grad[b] || (grad[a] == grad[b] && a < b); });
    cand.insert(cand.end(), rest.begin(), rest.begin() + long(extra));
    if (round == 0) {
      // Coarse sweep of the target's range catches atoms the gradient has not exposed yet.
      auto [lo, hi] = prob.target_span(kSweepTail);
      std::size_t stride = std::max<std::size_t>(1, (hi - lo) / kPolishSweep + 1);
      for (std::size_t j = lo; j <= hi; j += stride) cand.push_back(j);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<double> w_new(g, 0.0);
    double z = 0.0;
    for (std::size_t j : cand) z += (w_new[j] = w[j] + kPolishMix / double(cand.size()));
    for (double& v : w_new) v /= z;
    it += prob.barrier_polish(w_new, cand, opt.tol, opt.max_iter - it);
    double d = prob.kl_change(q, w_new, w);
    w.swap(w_new);
    q = prob.mixture(w);
    kl += d;
    grad = prob.gradient_ratio(q);
    cert = *std::max_element(grad.begin(), grad.end()) - 1.0;
    sol.kl_history.push_back(kl);
  }

  sol.grid = prob.grid();
  sol.weights = Pmf::from_probabilities(w);
  sol.n = n;
  sol.achieved_kl = kl;
  sol.iterations = it;
  sol.certificate = cert;
  sol.converged = cert <= opt.tol;
  return sol;
}

inline RiprSolution ripr_solve(const Pmf& target, long n, long grid_size, double tol, long max_iter) {
  return ripr_solve(target, n, RiprOptions{grid_size, tol, max_iter});
}

// Raw probabilities must already sum to one.
inline RiprSolution ripr_solve(std::span<const double> target, long n, const RiprOptions& opt = {}) {
  double s = 0.0;
  for (double v : target) s += v;
  if (std::abs(s - 1.0) > 1e-12) throw Error("target not normalized");
  return ripr_solve(Pmf::from_probabilities(target, false), n, opt);
}

// log sum_j w_j p_j^c (1 - p_j)^(n - c) for c = 0..n: the configuration-level mixture likelihood.
inline std::vector<double> mixture_log_likelihood(const RiprSolution& sol) {
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < sol.grid.size(); ++j) {
    if (sol.weights.log_prob(j) > kNegInf) support.push_back(j);
  }
  std::vector<double> out(std::size_t(sol.n) + 1);
  std::vector<double> terms(support.size());
  for (long c = 0; c <= sol.n; ++c) {
    for (std::size_t s = 0; s < support.size(); ++s) {
      double p = sol.grid[support[s]];
      terms[s] = sol.weights.log_prob(support[s]) + detail::xlogy(double(c), p) +
                 detail::xlog1my(double(sol.n - c), p);
    }
    out[std::size_t(c)] = log_sum_exp(terms);
  }
  return out;
}

}  // namespace gro
