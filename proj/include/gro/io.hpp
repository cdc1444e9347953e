#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gro/error.hpp"
#include "gro/evariables.hpp"
#include "gro/models.hpp"
#include "gro/priors.hpp"

namespace gro {

using Json = nlohmann::json;

enum class TableFormat { kJson, kCsv };

namespace detail {

inline std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  std::size_t a = s.find_first_not_of(ws);
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(ws) - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline bool parse_long(const std::string& s, long& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stol(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

inline double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error("invalid " + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw Error("invalid " + what + ": '" + s + "'");
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace detail

// {"groups":[{"n":8,"ones":3},...]}
inline Table table_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("groups") || !j["groups"].is_array()) {
    throw Error("table JSON needs a \"groups\" array");
  }
  std::vector<Group> groups;
  for (const Json& g : j["groups"]) {
    if (!g.is_object() || !g.contains("n") || !g.contains("ones") || !g["n"].is_number_integer() ||
        !g["ones"].is_number_integer()) {
      throw Error("invalid table row " + std::to_string(groups.size() + 1));
    }
    groups.push_back({g["n"].get<long>(), g["ones"].get<long>()});
  }
  return Table(std::move(groups));
}

inline Json table_to_json(const Table& t) {
  Json groups = Json::array();
  for (const Group& g : t.groups()) groups.push_back({{"n", g.size}, {"ones", g.ones}});
  return {{"groups", groups}};
}

// Rows group_id,n,ones; an optional header row naming the columns is skipped.
inline Table table_from_csv(const std::string& text) {
  std::vector<Group> groups;
  std::istringstream is(text);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    std::vector<std::string> f = detail::split(line, ',');
    long n = 0, ones = 0;
    bool ok = f.size() == 3 && detail::parse_long(f[1], n) && detail::parse_long(f[2], ones);
    if (!ok && first && f.size() == 3 && f[1] == "n" && f[2] == "ones") {
      first = false;
      continue;
    }
    first = false;
    if (!ok) throw Error("invalid table row " + std::to_string(groups.size() + 1));
    groups.push_back({n, ones});
  }
  return Table(std::move(groups));
}

inline Table parse_table_text(const std::string& text, TableFormat fmt) {
  if (fmt == TableFormat::kCsv) return table_from_csv(text);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed table JSON: ") + e.what());
  }
  return table_from_json(j);
}

inline TableFormat format_from_path(const std::string& path) {
  auto ends = [&](const std::string& suf) {
    return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends(".csv")) return TableFormat::kCsv;
  return TableFormat::kJson;
}

inline Table parse_table(const std::string& path, TableFormat fmt) {
  return parse_table_text(detail::read_file(path), fmt);
}

inline Table parse_table(const std::string& path) { return parse_table(path, format_from_path(path)); }

// "uniform", "nml", "beta:a,b" or "explicit:p0,p1,...".
inline PriorSpec parse_prior(const std::string& text) {
  std::string s = detail::trim(text);
  if (s == "uniform") return PriorSpec::uniform();
  if (s == "nml") return PriorSpec::nml();
  auto colon = s.find(':');
  if (colon != std::string::npos) {
    std::string kind = s.substr(0, colon);
    std::vector<std::string> args = detail::split(s.substr(colon + 1), ',');
    if (kind == "beta") {
      if (args.size() != 2) throw Error("beta prior needs two parameters: '" + s + "'");
      return PriorSpec::beta(detail::parse_double(args[0], "beta parameter"),
                             detail::parse_double(args[1], "beta parameter"));
    }
    if (kind == "explicit") {
      std::vector<double> probs;
      for (const auto& a : args) probs.push_back(detail::parse_double(a, "probability"));
      double sum = 0.0;
      for (double p : probs) {
        if (!(p >= 0.0)) throw Error("explicit prior needs nonnegative probabilities");
        sum += p;
      }
      if (probs.empty() || std::abs(sum - 1.0) > 1e-9) throw Error("explicit prior must sum to one");
      return PriorSpec::explicit_pmf(Pmf::from_probabilities(probs));
    }
  }
  throw Error("unknown prior '" + s + "'");
}

// One spec repeated for every group, or exactly one per group.
inline std::vector<PriorSpec> expand_priors(const std::vector<std::string>& texts, std::size_t k) {
  if (texts.empty()) return std::vector<PriorSpec>(k, PriorSpec::uniform());
  if (texts.size() == 1) return std::vector<PriorSpec>(k, parse_prior(texts[0]));
  if (texts.size() != k) throw Error("need one prior or one per group");
  std::vector<PriorSpec> out;
  for (const auto& t : texts) out.push_back(parse_prior(t));
  return out;
}

enum class NetworkMode { kSbmUndirected, kSbmDirected, kPcmBipartite };

inline NetworkMode parse_network_mode(const std::string& s) {
  if (s == "sbm_vs_er_undirected") return NetworkMode::kSbmUndirected;
  if (s == "sbm_vs_er_directed") return NetworkMode::kSbmDirected;
  if (s == "pcm_vs_er_bipartite") return NetworkMode::kPcmBipartite;
  throw Error("unknown network mode '" + s + "'");
}

struct NetworkInput {
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::string> partition;  // node -> block label
  NetworkMode mode = NetworkMode::kSbmUndirected;
  // Bipartite only: label of the layer whose degrees are constrained; defaults to the smallest label.
  std::string constrained;
};

struct NetworkTable {
  Table table;
  std::vector<std::string> group_labels;
  std::vector<std::string> warnings;
};

// Block pairs (sorted labels) for SBM modes, constrained-layer nodes (sorted ids) for bipartite mode.
inline NetworkTable network_to_table(const NetworkInput& net) {
  std::map<std::string, long> block_size;
  for (const auto& [node, label] : net.partition) ++block_size[label];
  for (const auto& [u, v] : net.edges) {
    for (const auto* x : {&u, &v}) {
      if (!net.partition.count(*x)) throw Error("node " + *x + " has no block");
    }
  }

  std::vector<std::string> labels;
  std::vector<Group> groups;
  NetworkTable out;
  auto push = [&](std::string label, long size, long ones) {
    if (size == 0) {
      out.warnings.push_back("dropped empty group " + label);
      return;
    }
    labels.push_back(std::move(label));
    groups.push_back({size, ones});
  };

  if (net.mode == NetworkMode::kPcmBipartite) {
    if (block_size.size() != 2) throw Error("bipartite mode needs exactly two layer labels");
    const std::string rows = net.constrained.empty() ? block_size.begin()->first : net.constrained;
    if (!block_size.count(rows)) throw Error("unknown constrained layer " + rows);
    long cols = 0;
    for (const auto& [label, size] : block_size) {
      if (label != rows) cols = size;
    }
    std::map<std::string, long> degree;
    for (const auto& [node, label] : net.partition) {
      if (label == rows) degree[node] = 0;
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& [u, v] : net.edges) {
      const std::string& lu = net.partition.at(u);
      const std::string& lv = net.partition.at(v);
      if (lu == lv) throw Error("edge " + u + "-" + v + " lies within one layer");
      auto key = lu == rows ? std::make_pair(u, v) : std::make_pair(v, u);
      if (!seen.insert(key).second) throw Error("multigraph unsupported");
      ++degree[key.first];
    }
    for (const auto& [node, d] : degree) push(node, cols, d);
  } else {
    const bool directed = net.mode == NetworkMode::kSbmDirected;
    std::map<std::pair<std::string, std::string>, long> ones;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& [u, v] : net.edges) {
      if (u == v) throw Error("self-loop at " + u);
      auto key = (directed || u < v) ? std::make_pair(u, v) : std::make_pair(v, u);
      if (!seen.insert(key).second) throw Error("multigraph unsupported");
      std::string bu = net.partition.at(u), bv = net.partition.at(v);
      if (!directed && bv < bu) std::swap(bu, bv);
      ++ones[{bu, bv}];
    }
    for (const auto& [a, na] : block_size) {
      for (const auto& [b, nb] : block_size) {
        if (!directed && b < a) continue;
        long size = a == b ? (directed ? na * (na - 1) : na * (na - 1) / 2) : na * nb;
        auto it = ones.find({a, b});
        push(a + (directed ? "->" : "~") + b, size, it == ones.end() ? 0 : it->second);
      }
    }
  }
  if (groups.empty()) throw Error("no groups");
  out.table = Table(std::move(groups));
  out.group_labels = std::move(labels);
  return out;
}

// Rows are the constrained layer; entries must be 0 or 1.
inline Table biadjacency_to_table(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw Error("no groups");
  std::vector<Group> groups;
  const std::size_t cols = rows[0].size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error("ragged biadjacency row " + std::to_string(i + 1));
    long d = 0;
    for (int x : rows[i]) {
      if (x != 0 && x != 1) throw Error("biadjacency entries must be 0 or 1");
      d += x;
    }
    groups.push_back({long(cols), d});
  }
  return Table(std::move(groups));
}

inline std::vector<std::vector<int>> parse_biadjacency_csv(const std::string& text) {
  std::vector<std::vector<int>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    std::vector<int> row;
    for (const auto& f : detail::split(line, ',')) {
      long v = 0;
      if (!detail::parse_long(f, v)) throw Error("invalid biadjacency entry '" + f + "'");
      row.push_back(int(v));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Whitespace- or comma-separated node pairs, one per line; '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> parse_edge_list(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = line.substr(0, line.find('#'));
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string u, v, extra;
    if (!(ls >> u)) continue;
    if (!(ls >> v) || (ls >> extra)) throw Error("edge lines need exactly two nodes: '" + detail::trim(line) + "'");
    out.emplace_back(u, v);
  }
  return out;
}

// node,label per line.
inline std::map<std::string, std::string> parse_partition(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = detail::trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    std::vector<std::string> f = detail::split(line, ',');
    if (f.size() != 2 || f[0].empty() || f[1].empty()) throw Error("partition lines need node,label: '" + line + "'");
    if (!out.emplace(f[0], f[1]).second) throw Error("node " + f[0] + " assigned twice");
  }
  return out;
}

// Non-finite numbers become null.
inline Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json report_to_json(const EValueReport& r, double alpha) {
  Decision d = decide(r.log_e, alpha);
  Json j;
  j["statistic_kind"] = to_string(r.kind);
  j["is_evariable"] = r.is_evariable;
  j["log_e"] = json_number(r.log_e);
  j["e"] = json_number(std::exp(r.log_e));
  j["alpha"] = alpha;
  j["decision"] = to_string(d);
  // Post-hoc: the data reject at any level at least 1/e.
  j["post_hoc_level"] = json_number(std::min(1.0, std::exp(-r.log_e)));
  j["components"] = {{"log_numerator", json_number(r.log_numerator)},
                     {"log_denominator", json_number(r.log_denominator)}};
  j["table_stats"] = {{"c1", r.c1}, {"c0", r.c0}};
  if (r.achieved_kl) j["achieved_kl"] = *r.achieved_kl;
  return j;
}

}  // namespace gro
