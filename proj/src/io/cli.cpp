#include "windadm/io/cli.hpp"

#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "windadm/assessment/assessment.hpp"
#include "windadm/assessment/replay.hpp"
#include "windadm/common/error.hpp"
#include "windadm/grid/case_io.hpp"
#include "windadm/io/config.hpp"
#include "windadm/io/reports.hpp"
#include "windadm/scuc/scuc.hpp"

namespace windadm::io {
namespace {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNumericBreakdown:
    case ErrorCode::kInfeasible:
    case ErrorCode::kCapExceeded:
    case ErrorCode::kQuadratureNonconvergence:
    case ErrorCode::kBigMTooSmall:
    case ErrorCode::kIterationCap:
      return kExitSolver;
    default:
      return kExitUsage;
  }
}

// Command-line values that override the config file when given.
struct Overrides {
  std::string config;
  std::optional<double> sigma, c_loss, k;
  std::optional<int> gamma_t, gamma_s;
  std::optional<std::string> mode, out_dir, boundary;
};

struct Inputs {
  RunConfig cfg;
  grid::Case c;
  grid::UcSchedule uc;
};

Inputs load_inputs(const Overrides& o, bool need_uc, std::ostream& err) {
  Inputs in;
  in.cfg = load_run_config(o.config);
  if (o.sigma) in.cfg.sigma = *o.sigma;
  if (o.c_loss) in.cfg.assessment.c_loss = *o.c_loss;
  if (o.k) in.cfg.assessment.penalty_k = *o.k;
  if (o.gamma_t) in.cfg.budgets.gamma_t = *o.gamma_t;
  if (o.gamma_s) in.cfg.budgets.gamma_s = *o.gamma_s;
  if (o.mode) in.cfg.assessment.mode = assessment::parse_mode(*o.mode);
  if (o.out_dir) in.cfg.output_dir = *o.out_dir;
  in.cfg.validate();
  in.c = grid::load_case_file(in.cfg.case_path);
  if (!need_uc) return in;
  if (in.cfg.uc_path) {
    in.uc = grid::read_uc_csv_file(*in.cfg.uc_path, in.c.network);
  } else {
    err << fmt::format("no paths.uc given; solving unit commitment at r = {}\n",
                       in.cfg.reserve_rate);
    scuc::ScucConfig sc;
    sc.reserve_rate = in.cfg.reserve_rate;
    in.uc = scuc::solve_scuc(in.c.network, sc).uc;
  }
  return in;
}

uncertainty::Boundary boundary_or_full(const Overrides& o, const grid::Network& net) {
  if (o.boundary) return read_boundary_csv_file(*o.boundary, net);
  return uncertainty::Boundary::full_width(net);
}

assessment::AssessmentResult assess_once(const Inputs& in, double sigma,
                                         const uncertainty::Budgets& budgets) {
  const risk::ErrorModel em(in.c.network, sigma);
  return assessment::run_assessment(in.c.network, in.uc, in.c.prices, em, in.cfg.pla, budgets,
                                    in.cfg.assessment);
}

int cmd_assess(const Overrides& o, bool sweep, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(o, true, err);
  const risk::ErrorModel em(in.c.network, in.cfg.sigma);
  const auto r = assessment::run_assessment(
      in.c.network, in.uc, in.c.prices, em, in.cfg.pla, in.cfg.budgets, in.cfg.assessment,
      [&](const assessment::IterationLog& e) {
        err << fmt::format("k={} G={:.6f} F_R={:.6f} eta={:.6f} rows={} {:.0f} ms\n", e.k, e.g,
                           e.f_r, e.eta, e.master_rows, e.wall_ms);
      });
  emit_reports(r, in.cfg.output_dir);
  if (sweep) {
    std::vector<SweepRow> by_sigma;
    for (double s : in.cfg.sweep_sigma) {
      const auto sr = assess_once(in, s, in.cfg.budgets);
      by_sigma.push_back({s, sr.risk_pla, sr.exact.total, static_cast<int>(sr.log.size()),
                          sr.certified});
    }
    auto f1 = open_output(in.cfg.output_dir / "sweep_sigma.csv");
    write_sweep_csv(f1, "sigma", by_sigma);
    std::vector<SweepRow> by_gamma;
    for (int g : in.cfg.sweep_gamma_t) {
      auto budgets = in.cfg.budgets;
      budgets.gamma_t = g;
      const auto sr = assess_once(in, in.cfg.sigma, budgets);
      by_gamma.push_back({static_cast<double>(g), sr.risk_pla, sr.exact.total,
                          static_cast<int>(sr.log.size()), sr.certified});
    }
    auto f2 = open_output(in.cfg.output_dir / "sweep_gamma_t.csv");
    write_sweep_csv(f2, "gamma_t", by_gamma);
  }
  out << fmt::format("risk_usd={} exact_usd={} iterations={} converged={} certified={}\n",
                     r.risk_pla, r.exact.total, r.log.size(), r.converged, r.certified);
  if (!r.converged) {
    err << fmt::format("iteration cap of {} reached; reports hold the last master boundary\n",
                       in.cfg.assessment.max_iterations);
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_check(const Overrides& o, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(o, true, err);
  const auto b = boundary_or_full(o, in.c.network);
  const auto v = admissibility::check_admissibility(in.c.network, in.uc, in.c.prices, b,
                                                    in.cfg.budgets, in.cfg.assessment.c_loss,
                                                    in.cfg.assessment.subproblem);
  json j;
  j["verdict"] = v.admissible ? "admissible" : "inadmissible";
  j["c_loss"] = v.c_loss;
  j["F_R"] = v.certificate.objective;
  j["certificate"] = admissibility::subproblem_to_json(v.certificate);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_risk(const Overrides& o, const std::string& pla_csv, std::ostream& out,
             std::ostream& err) {
  const Inputs in = load_inputs(o, false, err);
  const auto b = boundary_or_full(o, in.c.network);
  const risk::ErrorModel em(in.c.network, in.cfg.sigma);
  const auto pc = risk::build_pla(em, in.cfg.pla, in.c.prices);
  const auto exact = risk::risk_exact(b, em, in.c.prices, in.cfg.quadrature);
  const auto pla = risk::risk_pla(b, pc);
  const auto mc = risk::monte_carlo_risk(b, em, in.c.prices, in.cfg.mc_samples, in.cfg.mc_seed,
                                         in.cfg.workers);
  if (!pla_csv.empty()) {
    auto f = open_output(pla_csv);
    risk::write_pla_csv(f, pc);
  }
  json j;
  j["exact"] = risk_to_json(exact);
  j["pla"] = risk_to_json(pla);
  j["monte_carlo"] = risk_to_json(mc.value);
  j["monte_carlo"]["stderr_usd"] = mc.stderr_total;
  j["monte_carlo"]["samples"] = in.cfg.mc_samples;
  j["monte_carlo"]["seed"] = in.cfg.mc_seed;
  j["monte_carlo"]["workers"] = in.cfg.workers;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_scuc(const Overrides& o, std::optional<double> rate, const std::string& target,
             std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(o, false, err);
  scuc::ScucConfig sc;
  sc.reserve_rate = rate.value_or(in.cfg.reserve_rate);
  const auto res = scuc::solve_scuc(in.c.network, sc);
  if (target.empty()) {
    grid::write_uc_csv(out, res.uc);
  } else {
    auto f = open_output(target);
    grid::write_uc_csv(f, res.uc);
    out << fmt::format("cost_usd={} nodes={} written={}\n", res.cost, res.nodes, target);
  }
  return kExitOk;
}

int cmd_validate(const Overrides& o, std::optional<std::int64_t> samples, std::ostream& out,
                 std::ostream& err) {
  const Inputs in = load_inputs(o, true, err);
  const auto b = boundary_or_full(o, in.c.network);
  const risk::ErrorModel em(in.c.network, in.cfg.sigma);
  assessment::ReplayConfig rc;
  rc.samples = samples.value_or(in.cfg.replay_samples);
  rc.seed = in.cfg.mc_seed;
  rc.workers = in.cfg.workers;
  const auto rep =
      assessment::replay_scenarios(in.c.network, in.uc, in.c.prices, em, b, in.cfg.budgets, rc);
  out << replay_to_json(rep).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Admissibility assessment of wind generation"};
  app.require_subcommand(1);
  Overrides o;
  bool sweep = false;
  std::string pla_csv, uc_target;
  std::optional<double> reserve;
  std::optional<std::int64_t> samples;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "run configuration file")->required();
    sub->add_option("--sigma", o.sigma, "forecast error scale");
    sub->add_option("--gamma-t", o.gamma_t, "deviating periods per farm");
    sub->add_option("--gamma-s", o.gamma_s, "deviating farms per period");
  };
  auto* assess = app.add_subcommand("assess", "compute the admissible region");
  common(assess);
  assess->add_option("--c-loss", o.c_loss, "allowed worst-case cost ($)");
  assess->add_option("--K", o.k, "penalty on eta");
  assess->add_option("--mode", o.mode, "a1, a2 or a3");
  assess->add_option("-o,--out", o.out_dir, "output directory");
  assess->add_flag("--sweep", sweep, "also sweep sigma and gamma_t");

  auto* check = app.add_subcommand("check", "worst-case check of one boundary");
  common(check);
  check->add_option("--c-loss", o.c_loss, "allowed worst-case cost ($)");
  check->add_option("-b,--boundary", o.boundary, "boundary CSV (default: full width)");

  auto* risk_cmd = app.add_subcommand("risk", "exact, PLA and Monte Carlo risk of a boundary");
  common(risk_cmd);
  risk_cmd->add_option("-b,--boundary", o.boundary, "boundary CSV (default: full width)");
  risk_cmd->add_option("--pla-csv", pla_csv, "write the PLA cuts here");

  auto* scuc_cmd = app.add_subcommand("scuc", "unit commitment with a reserve rate");
  common(scuc_cmd);
  scuc_cmd->add_option("-r,--reserve-rate", reserve, "spinning reserve rate");
  scuc_cmd->add_option("-o,--out", uc_target, "UC CSV path (default: stdout)");

  auto* validate = app.add_subcommand("validate", "replay wind scenarios inside a boundary");
  common(validate);
  validate->add_option("-b,--boundary", o.boundary, "boundary CSV")->required();
  validate->add_option("-n,--samples", samples, "samples per family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*assess) return cmd_assess(o, sweep, out, err);
    if (*check) return cmd_check(o, out, err);
    if (*risk_cmd) return cmd_risk(o, pla_csv, out, err);
    if (*scuc_cmd) return cmd_scuc(o, reserve, uc_target, out, err);
    return cmd_validate(o, samples, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace windadm::io
