// Command-line front end: JSON on stdout, a JSON error object on stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gro/gro.hpp"

namespace {

using gro::Error;
using gro::Json;

struct Design {
  std::vector<long> sizes;
  long k = 0;
  long m = 0;
  std::vector<std::string> priors;
  std::optional<double> gamma;

  void add(CLI::App* app) {
    app->add_option("--sizes", sizes, "group sizes")->delimiter(',');
    app->add_option("--k", k, "number of groups (with --m)");
    app->add_option("--m", m, "common group size (with --k)");
    add_priors(app);
  }

  void add_priors(CLI::App* app) {
    app->add_option("--prior", priors, "uniform | nml | beta:a,b | explicit:p0,... (once, or once per group)");
    app->add_option("--gamma", gamma, "shorthand for --prior beta:gamma,gamma");
  }

  std::vector<long> resolve_sizes() const {
    if (!sizes.empty()) {
      if (k || m) throw Error("give either --sizes or --k and --m");
      return sizes;
    }
    if (k < 1 || m < 0) throw Error("need --sizes, or --k and --m");
    return std::vector<long>(std::size_t(k), m);
  }

  std::vector<gro::PriorSpec> resolve_priors(std::size_t groups) const {
    if (gamma) {
      if (!priors.empty()) throw Error("give either --prior or --gamma");
      return std::vector<gro::PriorSpec>(groups, gro::PriorSpec::beta(*gamma, *gamma));
    }
    return gro::expand_priors(priors, groups);
  }
};

struct Solver {
  gro::RiprOptions opt;
  void add(CLI::App* app) {
    app->add_option("--grid", opt.grid_size, "solver grid size")->capture_default_str();
    app->add_option("--tol", opt.tol, "solver certificate tolerance")->capture_default_str();
    app->add_option("--max-iter", opt.max_iter, "solver iteration cap")->capture_default_str();
  }
};

gro::MeanParams parse_params(const std::string& s) {
  gro::MeanParams p;
  for (const auto& f : gro::detail::split(s, ',')) p.p.push_back(gro::detail::parse_double(f, "mean parameter"));
  gro::validate(p);
  return p;
}

gro::StatisticKind parse_kind(const std::string& s) {
  if (s == "mic") return gro::StatisticKind::kGroMic;
  if (s == "pseudo") return gro::StatisticKind::kPseudo;
  if (s == "can") return gro::StatisticKind::kGroCan;
  if (s == "point") return gro::StatisticKind::kGroPoint;
  throw Error("unknown statistic '" + s + "'");
}

Json solver_json(const gro::RiprSolution& sol) {
  return {{"achieved_kl", sol.achieved_kl},
          {"certificate", sol.certificate},
          {"iterations", sol.iterations},
          {"converged", sol.converged}};
}

Json priors_json(const std::vector<gro::PriorSpec>& specs) {
  Json j = Json::array();
  for (const auto& s : specs) j.push_back(s.describe());
  return j;
}

struct TestArgs {
  std::string statistic = "mic";
  std::string palt;
  long scale = 100000;
  double alpha = 0.05;
  Solver solver;
};

Json run_test(const gro::Table& t, const std::vector<gro::PriorSpec>& specs, const TestArgs& a) {
  gro::StatisticKind kind = parse_kind(a.statistic);
  std::vector<long> sizes = t.sizes();
  gro::EValueReport rep;
  std::optional<gro::RiprSolution> sol;
  switch (kind) {
    case gro::StatisticKind::kGroMic: rep = gro::log_e_gro_mic(t, specs); break;
    case gro::StatisticKind::kPseudo:
      rep = gro::log_e_pseudo(t, specs, gro::pseudo_null_density(specs, sizes, a.scale));
      break;
    case gro::StatisticKind::kGroCan:
      sol = gro::solve_gro_can(specs, sizes, a.solver.opt);
      rep = gro::log_e_gro_can(t, specs, *sol);
      break;
    case gro::StatisticKind::kGroPoint: {
      if (a.palt.empty()) throw Error("the point statistic needs --palt");
      gro::MeanParams p = parse_params(a.palt);
      sol = gro::solve_gro_point(p, sizes, a.solver.opt);
      rep = gro::log_e_gro_point(t, p, *sol);
      break;
    }
  }
  Json j = gro::report_to_json(rep, a.alpha);
  j["inputs"] = {{"table", gro::table_to_json(t)}, {"priors", priors_json(specs)}};
  if (kind == gro::StatisticKind::kPseudo) j["inputs"]["scale"] = a.scale;
  if (kind == gro::StatisticKind::kGroPoint) j["inputs"]["palt"] = parse_params(a.palt).p;
  if (sol) j["solver"] = solver_json(*sol);
  return j;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growth-rate-optimal e-values for 2 x k contingency tables"};
  app.require_subcommand(1);

  // test
  auto* test = app.add_subcommand("test", "e-value of one table");
  std::string table_path, table_format;
  Design test_design;
  TestArgs test_args;
  test->add_option("--table", table_path, "table file (.json or .csv)")->required();
  test->add_option("--format", table_format, "json | csv (default from extension)");
  test_design.add_priors(test);
  test->add_option("--statistic", test_args.statistic, "mic | pseudo | can | point")->capture_default_str();
  test->add_option("--palt", test_args.palt, "alternative parameters for the point statistic, p1,p2,...");
  test->add_option("--scale", test_args.scale, "pseudo density resolution scale")->capture_default_str();
  test->add_option("--alpha", test_args.alpha, "significance level")->capture_default_str();
  test_args.solver.add(test);

  // epower
  auto* epower = app.add_subcommand("epower", "e-powers of the microcanonical, canonical and pseudo statistics");
  Design ep_design;
  Solver ep_solver;
  long ep_scale = 100000;
  ep_design.add(epower);
  ep_solver.add(epower);
  epower->add_option("--scale", ep_scale, "pseudo density resolution scale")->capture_default_str();

  // gap
  auto* gap = app.add_subcommand("gap", "gap r between pseudo and microcanonical e-powers");
  Design gap_design;
  long gap_scale = 10000;
  bool gap_points = false;
  gap_design.add(gap);
  gap->add_option("--scale", gap_scale, "pseudo density resolution scale")->capture_default_str();
  gap->add_flag("--per-point", gap_points, "include the per-total log-ratio");

  // rprime
  auto* rprime = app.add_subcommand("rprime", "gap r' at a fixed alternative or its worst case on a grid");
  Design rp_design;
  long rp_scale = 100000;
  std::string rp_palt;
  bool rp_worst = false;
  gro::ParamGrid rp_grid;
  rp_design.add(rprime);
  rprime->add_option("--scale", rp_scale, "pseudo density resolution scale")->capture_default_str();
  rprime->add_option("--palt", rp_palt, "alternative parameters p1,p2,...");
  rprime->add_flag("--worst-case", rp_worst, "maximize over the parameter grid");
  rprime->add_option("--lo", rp_grid.lo, "grid lower bound")->capture_default_str();
  rprime->add_option("--hi", rp_grid.hi, "grid upper bound")->capture_default_str();
  rprime->add_option("--step", rp_grid.step, "grid step")->capture_default_str();

  // regret
  auto* regret = app.add_subcommand("regret", "regret curves against log m with fitted slopes");
  Design rg_design;
  Solver rg_solver;
  std::vector<std::string> rg_palts;
  std::vector<long> rg_ms;
  std::string rg_candidate = "mic";
  long rg_scale = 10000;
  rg_design.add_priors(regret);
  rg_solver.add(regret);
  regret->add_option("--palt", rg_palts, "alternative parameters p1,p2,... (repeatable)")->required();
  regret->add_option("--ms", rg_ms, "group sizes m")->delimiter(',')->required();
  regret->add_option("--candidate", rg_candidate, "mic | can | pseudo")->capture_default_str();
  regret->add_option("--scale", rg_scale, "pseudo density resolution scale")->capture_default_str();

  // weak convergence of the prior
  auto* thm = app.add_subcommand("theorem1", "total variation between the marginal of s/m and the prior on cells");
  std::string thm_prior = "uniform";
  long thm_m = 0, thm_bins = 20;
  thm->add_option("--prior", thm_prior, "uniform | nml | beta:a,b")->capture_default_str();
  thm->add_option("--m", thm_m, "sample size")->required();
  thm->add_option("--bins", thm_bins, "number of cells")->capture_default_str();

  // continue
  auto* cont = app.add_subcommand("continue", "combine e-values from independent batches");
  std::vector<double> cont_values;
  std::vector<std::string> cont_reports;
  double cont_alpha = 0.05;
  cont->add_option("evalues", cont_values, "e-values");
  cont->add_option("--report", cont_reports, "report files from earlier runs (repeatable)");
  cont->add_option("--alpha", cont_alpha, "significance level")->capture_default_str();

  // net-test
  auto* net = app.add_subcommand("net-test", "block-model test on a network");
  std::string net_edges, net_partition, net_mode = "sbm_vs_er_undirected", net_constrained, net_biadj;
  Design net_design;
  TestArgs net_args;
  net->add_option("--edges", net_edges, "edge list file");
  net->add_option("--partition", net_partition, "node,label file");
  net->add_option("--mode", net_mode, "sbm_vs_er_undirected | sbm_vs_er_directed | pcm_vs_er_bipartite")
      ->capture_default_str();
  net->add_option("--constrained", net_constrained, "bipartite: label of the constrained layer");
  net->add_option("--biadjacency", net_biadj, "bipartite: 0/1 CSV with one row per constrained node");
  net_design.add_priors(net);
  net->add_option("--statistic", net_args.statistic, "mic | pseudo | can | point")->capture_default_str();
  net->add_option("--palt", net_args.palt, "alternative parameters for the point statistic");
  net->add_option("--scale", net_args.scale, "pseudo density resolution scale")->capture_default_str();
  net->add_option("--alpha", net_args.alpha, "significance level")->capture_default_str();
  net_args.solver.add(net);

  // sweep
  auto* sw = app.add_subcommand("sweep", "evaluate a diagnostic over a grid of designs");
  gro::SweepConfig sw_cfg;
  std::string sw_regime = "m_fixed", sw_tsv;
  std::vector<std::string> sw_priors;
  std::size_t sw_workers = 0;
  sw->add_option("--diagnostic", sw_cfg.diagnostic, "gap_r | worst_case_r_prime | epower_mic | epower_pseudo | "
                                                    "gaussian_tv | redundancy_center")
      ->capture_default_str();
  sw->add_option("--regime", sw_regime, "m_fixed | n_fixed | power_law")->capture_default_str();
  sw->add_option("--ks", sw_cfg.ks, "numbers of groups")->delimiter(',');
  sw->add_option("--ms", sw_cfg.ms, "group sizes (m_fixed)")->delimiter(',');
  sw->add_option("--n", sw_cfg.n, "total size (n_fixed)");
  sw->add_option("--coefficient", sw_cfg.coefficient, "power law m = c k^e")->capture_default_str();
  sw->add_option("--exponent", sw_cfg.exponent, "power law m = c k^e")->capture_default_str();
  sw->add_option("--prior", sw_priors, "prior settings, each applied to all groups (repeatable)");
  sw->add_option("--scale", sw_cfg.scale, "pseudo density resolution scale")->capture_default_str();
  sw->add_option("--workers", sw_workers, "worker threads (default: GRO_WORKERS or hardware)");
  sw->add_option("--tsv", sw_tsv, "also write one row per cell to this TSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << Json{{"error", e.what()}, {"kind", "usage"}}.dump() << "\n";
    return 2;
  }

  try {
    if (*test) {
      gro::Table t = table_format.empty() ? gro::parse_table(table_path)
                                          : gro::parse_table(table_path, table_format == "csv" ? gro::TableFormat::kCsv
                                                                                               : gro::TableFormat::kJson);
      emit(run_test(t, test_design.resolve_priors(t.k()), test_args));
    } else if (*epower) {
      std::vector<long> sizes = ep_design.resolve_sizes();
      auto specs = ep_design.resolve_priors(sizes.size());
      auto ref = gro::alt_reference(specs, sizes);
      double mic = gro::e_power(gro::gro_mic_statistic(specs, sizes), ref);
      gro::RiprSolution sol = gro::solve_gro_can(specs, sizes, ep_solver.opt);
      Json j;
      j["sizes"] = sizes;
      j["priors"] = priors_json(specs);
      j["epower_mic"] = mic;
      j["solver"] = solver_json(sol);
      double pseudo =
          gro::e_power(gro::pseudo_statistic(specs, sizes, gro::pseudo_null_density(specs, sizes, ep_scale)), ref);
      j["epower_pseudo"] = pseudo;
      j["scale"] = ep_scale;
      if (sol.converged) {
        double can = gro::e_power(gro::gro_can_statistic(specs, sizes, sol), ref);
        j["epower_can"] = can;
        j["sandwich_holds"] = mic <= can + 1e-8 && can <= pseudo + 1e-8;
      } else {
        j["epower_can"] = nullptr;
        j["sandwich_holds"] = nullptr;
      }
      emit(j);
    } else if (*gap) {
      std::vector<long> sizes = gap_design.resolve_sizes();
      auto specs = gap_design.resolve_priors(sizes.size());
      gro::GapReport rep = gro::gap_r(specs, sizes, gro::pseudo_null_density(specs, sizes, gap_scale));
      Json j{{"r", rep.r}, {"sizes", rep.sizes}, {"k", rep.k}, {"priors", rep.spec_summary}, {"scale", gap_scale}};
      if (gap_points) j["per_point"] = rep.per_point;
      emit(j);
    } else if (*rprime) {
      std::vector<long> sizes = rp_design.resolve_sizes();
      auto specs = rp_design.resolve_priors(sizes.size());
      gro::PseudoDensity d = gro::pseudo_null_density(specs, sizes, rp_scale);
      Json j{{"sizes", sizes}, {"priors", priors_json(specs)}, {"scale", rp_scale}};
      if (rp_worst == !rp_palt.empty()) throw Error("give exactly one of --palt and --worst-case");
      if (rp_worst) {
        gro::WorstCase wc = gro::worst_case_r_prime(specs, sizes, d, rp_grid);
        j["worst_case_r_prime"] = wc.value;
        j["argmax"] = wc.argmax.p;
        j["grid"] = {{"lo", rp_grid.lo}, {"hi", rp_grid.hi}, {"step", rp_grid.step}};
        j["interior"] = rp_grid.interior();
      } else {
        gro::MeanParams p = parse_params(rp_palt);
        j["palt"] = p.p;
        j["r_prime"] = gro::gap_r_prime(p, specs, sizes, d);
      }
      emit(j);
    } else if (*regret) {
      gro::CandidateSpec cand;
      cand.kind = parse_kind(rg_candidate);
      cand.scale = rg_scale;
      cand.solver = rg_solver.opt;
      Json rows = Json::array();
      for (const auto& s : rg_palts) {
        gro::MeanParams p = parse_params(s);
        auto specs = rg_design.resolve_priors(p.p.size());
        gro::RegretCurve c = gro::regret_curve(p, specs, rg_ms, cand, rg_solver.opt);
        Json pts = Json::array();
        for (const auto& [m, r] : c.points) pts.push_back({{"m", m}, {"regret", r}});
        rows.push_back({{"palt", p.p},
                        {"priors", priors_json(specs)},
                        {"points", pts},
                        {"slope", c.fit.a},
                        {"intercept", c.fit.b},
                        {"residual", c.fit.residual}});
      }
      emit({{"candidate", rg_candidate}, {"curves", rows}});
    } else if (*thm) {
      gro::Theorem1Report rep = gro::theorem1_diagnostic(gro::parse_prior(thm_prior), thm_m, thm_bins);
      emit({{"prior", thm_prior},
            {"m", thm_m},
            {"bins", thm_bins},
            {"tv", rep.tv},
            {"model_cells", rep.model_cells},
            {"prior_cells", rep.prior_cells}});
    } else if (*cont) {
      std::vector<double> logs;
      for (double e : cont_values) {
        if (!(e >= 0.0)) throw Error("e-values must be nonnegative");
        logs.push_back(std::log(e));
      }
      for (const auto& path : cont_reports) {
        Json r = Json::parse(gro::detail::read_file(path));
        if (!r.contains("log_e") || !r["log_e"].is_number()) throw Error(path + " has no numeric log_e");
        if (r.contains("is_evariable") && !r["is_evariable"].get<bool>()) {
          throw Error(path + " holds a statistic that is not an e-variable");
        }
        logs.push_back(r["log_e"].get<double>());
      }
      double log_e = gro::combine_evalues(logs);
      emit({{"log_e", gro::json_number(log_e)},
            {"e", gro::json_number(std::exp(log_e))},
            {"count", logs.size()},
            {"alpha", cont_alpha},
            {"decision", gro::to_string(gro::decide(log_e, cont_alpha))},
            {"post_hoc_level", gro::json_number(std::min(1.0, std::exp(-log_e)))}});
    } else if (*net) {
      gro::NetworkTable nt;
      if (!net_biadj.empty()) {
        if (!net_edges.empty() || !net_partition.empty()) throw Error("give either --biadjacency or --edges");
        nt.table = gro::biadjacency_to_table(gro::parse_biadjacency_csv(gro::detail::read_file(net_biadj)));
      } else {
        if (net_edges.empty() || net_partition.empty()) throw Error("need --edges and --partition");
        gro::NetworkInput in;
        in.edges = gro::parse_edge_list(gro::detail::read_file(net_edges));
        in.partition = gro::parse_partition(gro::detail::read_file(net_partition));
        in.mode = gro::parse_network_mode(net_mode);
        in.constrained = net_constrained;
        nt = gro::network_to_table(in);
      }
      for (const auto& w : nt.warnings) std::cerr << Json{{"warning", w}}.dump() << "\n";
      Json j = run_test(nt.table, net_design.resolve_priors(nt.table.k()), net_args);
      if (!nt.group_labels.empty()) j["inputs"]["groups"] = nt.group_labels;
      emit(j);
    } else if (*sw) {
      if (sw_regime == "m_fixed") {
        sw_cfg.regime = gro::Regime::kFixedM;
      } else if (sw_regime == "n_fixed") {
        sw_cfg.regime = gro::Regime::kFixedN;
      } else if (sw_regime == "power_law") {
        sw_cfg.regime = gro::Regime::kPowerLaw;
      } else {
        throw Error("unknown regime '" + sw_regime + "'");
      }
      if (!sw_priors.empty()) {
        sw_cfg.specs.clear();
        for (const auto& p : sw_priors) sw_cfg.specs.push_back(gro::parse_prior(p));
      }
      if (sw_workers > 0) sw_cfg.workers = sw_workers;
      std::vector<gro::SweepRow> rows = gro::sweep(sw_cfg);
      Json out = Json::array();
      for (const auto& r : rows) {
        out.push_back({{"cell", r.cell.index},
                       {"k", r.cell.k},
                       {"m", r.cell.m},
                       {"prior", r.cell.spec.describe()},
                       {"value", gro::json_number(r.value)}});
      }
      if (!sw_tsv.empty()) {
        std::ofstream tsv(sw_tsv);
        if (!tsv) throw Error("cannot write " + sw_tsv);
        tsv.precision(17);
        tsv << "cell\tregime\tk\tm\tprior\t" << sw_cfg.diagnostic << "\n";
        for (const auto& r : rows) {
          tsv << r.cell.index << "\t" << sw_regime << "\t" << r.cell.k << "\t" << r.cell.m << "\t"
              << r.cell.spec.describe() << "\t" << r.value << "\n";
        }
      }
      emit({{"diagnostic", sw_cfg.diagnostic}, {"regime", sw_regime}, {"scale", sw_cfg.scale}, {"rows", out}});
    }
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
