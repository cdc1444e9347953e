#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "gro/error.hpp"
#include "gro/numerics.hpp"

namespace gro {

struct Group {
  long size = 0;
  long ones = 0;
  bool operator==(const Group&) const = default;
};

// 2 x k table: one (size, ones) pair per group.
class Table {
 public:
  Table() = default;

  explicit Table(std::vector<Group> groups) : groups_(std::move(groups)) {
    if (groups_.empty()) throw Error("no groups");
    long n = 0;
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      const Group& g = groups_[i];
      if (g.size < 0 || g.ones < 0 || g.ones > g.size) {
        throw Error("invalid table row " + std::to_string(i + 1));
      }
      n += g.size;
    }
    if (n < 1) throw Error("table has no observations");
  }

  std::span<const Group> groups() const { return groups_; }
  std::size_t k() const { return groups_.size(); }

  std::vector<long> sizes() const {
    std::vector<long> out;
    for (const Group& g : groups_) out.push_back(g.size);
    return out;
  }

  long total_size() const {
    long n = 0;
    for (const Group& g : groups_) n += g.size;
    return n;
  }

  long total_ones() const {
    long n1 = 0;
    for (const Group& g : groups_) n1 += g.ones;
    return n1;
  }

  bool operator==(const Table&) const = default;

 private:
  std::vector<Group> groups_;
};

struct SufficientStats {
  std::vector<long> c1;  // per-group ones
  long c0 = 0;           // total ones
};

inline SufficientStats suff_stats(const Table& t) {
  SufficientStats s;
  for (const Group& g : t.groups()) s.c1.push_back(g.ones);
  s.c0 = t.total_ones();
  return s;
}

enum class Hypothesis { kNull, kAlternative };

// Log of the number of configurations sharing the table's sufficient statistic.
inline LogValue log_multiplicity(const Table& t, Hypothesis h) {
  if (h == Hypothesis::kNull) return log_binomial(t.total_size(), t.total_ones());
  LogValue acc = 0.0;
  for (const Group& g : t.groups()) acc += log_binomial(g.size, g.ones);
  return acc;
}

// Success probabilities; one entry for the null, one per group for the alternative.
struct MeanParams {
  std::vector<double> p;
};

// theta = log((1 - p) / p), the sign convention of the maximum-entropy weights.
struct NaturalParams {
  std::vector<double> theta;
};

inline void validate(const MeanParams& m) {
  if (m.p.empty()) throw Error("empty mean parameters");
  for (double p : m.p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("mean parameter outside [0, 1]");
  }
}

// Log-probability of one configuration with per-group counts (size, ones), 0^0 = 1.
inline LogValue bernoulli_loglik(long size, long ones, double p) {
  return detail::xlogy(double(ones), p) + detail::xlog1my(double(size - ones), p);
}

inline LogValue canonical_loglik(const Table& t, const MeanParams& m, Hypothesis h) {
  validate(m);
  if (h == Hypothesis::kNull) {
    if (m.p.size() != 1) throw Error("null needs a single mean parameter");
    return bernoulli_loglik(t.total_size(), t.total_ones(), m.p[0]);
  }
  if (m.p.size() != t.k()) throw Error("alternative needs one mean parameter per group");
  LogValue acc = 0.0;
  for (std::size_t i = 0; i < t.k(); ++i) {
    acc += bernoulli_loglik(t.groups()[i].size, t.groups()[i].ones, m.p[i]);
  }
  return acc;
}

inline MeanParams theta_to_p(const NaturalParams& n) {
  MeanParams out;
  for (double th : n.theta) {
    if (std::isnan(th)) throw Error("natural parameter is NaN");
    // e^{-th} / (1 + e^{-th}) in the stable form for either sign.
    out.p.push_back(th >= 0 ? std::exp(-th) / (1.0 + std::exp(-th)) : 1.0 / (1.0 + std::exp(th)));
  }
  return out;
}

inline NaturalParams p_to_theta(const MeanParams& m) {
  validate(m);
  NaturalParams out;
  for (double p : m.p) {
    if (p == 0.0 || p == 1.0) throw Error("boundary has no natural parameter");
    out.theta.push_back(std::log1p(-p) - std::log(p));
  }
  return out;
}

}  // namespace gro
