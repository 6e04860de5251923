// Command-line surface: fits, design diagnostics, bound evaluation, and the
// seeded simulation harness. Matrices travel as CSV files; every subcommand
// writes a JSON report with a fixed key set and echoes its resolved
// configuration, so repeated runs with the same seed are byte-identical.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lowrr/bounds.hpp"
#include "lowrr/design.hpp"
#include "lowrr/estimators.hpp"
#include "lowrr/io.hpp"
#include "lowrr/kernels.hpp"
#include "lowrr/simkit.hpp"
#include "lowrr/svd.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using lowrr::ConstantMode;
using lowrr::Mat;
using json = nlohmann::ordered_json;

constexpr const char* kPenaltyNote =
    "pen(r) = c * r * (sqrt(T) + sqrt(q))^2 is a default shape, not a "
    "calibrated choice";

ConstantMode parse_constant(const std::string& name) {
  return name == "relaxed" ? ConstantMode::relaxed : ConstantMode::exact;
}

const char* constant_name(ConstantMode mode) {
  return mode == ConstantMode::exact ? "exact" : "relaxed";
}

void write_report(const json& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw lowrr::CsvError("cannot open report path '" + path + "'", 0);
  out << report.dump(2) << '\n';
  if (!out) throw lowrr::CsvError("failed writing report '" + path + "'", 0);
}

json fit_json(const lowrr::FitResult& fit) {
  return json{{"rss", fit.rss},
              {"nuclear_norm", fit.nuclear_norm},
              {"rank_hat", fit.rank_hat},
              {"iterations", fit.iterations},
              {"converged", fit.converged}};
}

json design_json(const lowrr::DesignSummary& summary) {
  return json{{"n", summary.n},       {"p", summary.p},
              {"q", summary.q},       {"sigma1", summary.sigma1},
              {"sigmaq", summary.sigmaq}, {"mu", summary.mu},
              {"eta", summary.eta}};
}

json bound_side_json(const lowrr::BoundReport& report) {
  return json{{"rhs", report.rhs},
              {"argmin_r", report.argmin_r},
              {"holds", report.holds}};
}

struct SolverFlags {
  int max_iterations = lowrr::SolverOptions{}.max_iterations;
  double rel_tol = lowrr::SolverOptions{}.rel_tol;
  bool no_accel = false;
  double step_scale = 1.0;

  lowrr::SolverOptions options() const {
    lowrr::SolverOptions opts;
    opts.max_iterations = max_iterations;
    opts.rel_tol = rel_tol;
    opts.acceleration = !no_accel;
    opts.step_scale = step_scale;
    return opts;
  }
  json to_json() const {
    return json{{"max_iterations", max_iterations},
                {"rel_tol", rel_tol},
                {"acceleration", !no_accel},
                {"step_scale", step_scale}};
  }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags) {
  cmd->add_option("--max-iter", flags.max_iterations, "Solver iteration cap");
  cmd->add_option("--rel-tol", flags.rel_tol,
                  "Relative objective-change stopping threshold");
  cmd->add_flag("--no-accel", flags.no_accel, "Disable momentum acceleration");
  cmd->add_option("--step-scale", flags.step_scale,
                  "Multiplier in (0,1] on the safe step");
}

struct TrialFlags {
  lowrr::TrialConfig cfg;
  json to_json() const {
    return json{{"n", cfg.n},
                {"p", cfg.p},
                {"t", cfg.T},
                {"r0", cfg.r0},
                {"eta", cfg.eta_target},
                {"sigma1", cfg.sigma1_target},
                {"signal", cfg.signal},
                {"sigma", cfg.sigma},
                {"k", cfg.K},
                {"seed", cfg.seed},
                {"coef_in_rowspace", cfg.coef_in_rowspace}};
  }
};

void add_trial_flags(CLI::App* cmd, TrialFlags& flags) {
  cmd->add_option("--n", flags.cfg.n, "Observations");
  cmd->add_option("--p", flags.cfg.p, "Covariates");
  cmd->add_option("--t", flags.cfg.T, "Response dimension");
  cmd->add_option("--r0", flags.cfg.r0, "True coefficient rank");
  cmd->add_option("--eta", flags.cfg.eta_target,
                  "Target sigma1/sigmaq of the design");
  cmd->add_option("--sigma1", flags.cfg.sigma1_target, "Design scale sigma1");
  cmd->add_option("--signal", flags.cfg.signal,
                  "Singular values of the true coefficients");
  cmd->add_option("--sigma", flags.cfg.sigma, "Noise standard deviation");
  cmd->add_option("--k", flags.cfg.K, "Calibration multiplier K > 1");
  cmd->add_option("--seed", flags.cfg.seed, "Base seed");
  cmd->add_flag("--coef-in-rowspace", flags.cfg.coef_in_rowspace,
                "Project the true coefficients onto rg(X^T)");
}

json trial_json(const lowrr::TrialReport& report) {
  return json{{"seed", report.seed},
              {"lambda", report.lambda},
              {"lambda_min_event", report.lambda_min_event},
              {"lhs", report.exact.lhs},
              {"exact", bound_side_json(report.exact)},
              {"relaxed", bound_side_json(report.relaxed)},
              {"design",
               json{{"q", report.q},
                    {"sigma1", report.sigma1_x},
                    {"sigmaq", report.sigmaq_x},
                    {"eta", report.eta_x}}},
              {"solver",
               json{{"iterations", report.solver_iterations},
                    {"converged", report.solver_converged}}}};
}

int run_app(int argc, char** argv) {
  CLI::App app{"lowrr: low-rank multivariate regression toolkit"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes:\n"
      "  0  success\n"
      "  1  internal error\n"
      "  2  usage error (unknown subcommand or bad flag)\n"
      "  3  file error (missing/unreadable/unparseable CSV or report path)\n"
      "  4  validation error (parameters violate an operation precondition)");

  int threads = 0;
  app.add_option("--threads", threads,
                 "OpenMP thread count (0 keeps the runtime default)");

  // fit-rr ------------------------------------------------------------
  auto* fit_rr = app.add_subcommand("fit-rr", "Rank-constrained least squares");
  std::string rr_x, rr_y, rr_out = "report.json", rr_aout;
  int rr_rank = 0;
  fit_rr->add_option("--x", rr_x, "Design CSV")->required();
  fit_rr->add_option("--y", rr_y, "Response CSV")->required();
  fit_rr->add_option("--rank", rr_rank, "Rank constraint")->required();
  fit_rr->add_option("--out", rr_out, "Report JSON path");
  fit_rr->add_option("--a-out", rr_aout, "Write the estimate to this CSV");
  fit_rr->callback([&] {
    const Mat x = lowrr::read_matrix_csv(rr_x);
    const Mat y = lowrr::read_matrix_csv(rr_y);
    const lowrr::FitResult fit = lowrr::fit_reduced_rank(x, y, rr_rank);
    if (!rr_aout.empty()) lowrr::write_matrix_csv(fit.A_hat, rr_aout);
    json report{{"subcommand", "fit-rr"},
                {"config",
                 json{{"x", rr_x},
                      {"y", rr_y},
                      {"out", rr_out},
                      {"a_out", rr_aout.empty() ? json(nullptr) : json(rr_aout)},
                      {"rank", rr_rank}}},
                {"fit", fit_json(fit)}};
    write_report(report, rr_out);
    std::cout << "fit-rr: rank=" << rr_rank << " rss=" << fit.rss
              << " rank_hat=" << fit.rank_hat << " report=" << rr_out << "\n";
  });

  // fit-nnp -----------------------------------------------------------
  auto* fit_nnp = app.add_subcommand(
      "fit-nnp", "Nuclear-norm-penalized least squares (proximal gradient)");
  std::string nnp_x, nnp_y, nnp_out = "report.json", nnp_aout;
  double nnp_lambda = 0.0;
  SolverFlags nnp_solver;
  fit_nnp->add_option("--x", nnp_x, "Design CSV")->required();
  fit_nnp->add_option("--y", nnp_y, "Response CSV")->required();
  fit_nnp->add_option("--lambda", nnp_lambda, "Penalty level")->required();
  fit_nnp->add_option("--out", nnp_out, "Report JSON path");
  fit_nnp->add_option("--a-out", nnp_aout, "Write the estimate to this CSV");
  add_solver_flags(fit_nnp, nnp_solver);
  fit_nnp->callback([&] {
    const Mat x = lowrr::read_matrix_csv(nnp_x);
    const Mat y = lowrr::read_matrix_csv(nnp_y);
    const lowrr::FitResult fit =
        lowrr::fit_nnp(x, y, nnp_lambda, nnp_solver.options());
    if (!nnp_aout.empty()) lowrr::write_matrix_csv(fit.A_hat, nnp_aout);
    json report{
        {"subcommand", "fit-nnp"},
        {"config",
         json{{"x", nnp_x},
              {"y", nnp_y},
              {"out", nnp_out},
              {"a_out", nnp_aout.empty() ? json(nullptr) : json(nnp_aout)},
              {"lambda", nnp_lambda},
              {"solver", nnp_solver.to_json()}}},
        {"fit", fit_json(fit)}};
    write_report(report, nnp_out);
    std::cout << "fit-nnp: lambda=" << nnp_lambda << " rss=" << fit.rss
              << " rank_hat=" << fit.rank_hat
              << " converged=" << (fit.converged ? "yes" : "no")
              << " report=" << nnp_out << "\n";
  });

  // select-rank ---------------------------------------------------------
  auto* select = app.add_subcommand(
      "select-rank", "Fit the full rank path and pick r by criterion");
  std::string sel_x, sel_y, sel_out = "report.json", sel_criterion = "crit";
  double sel_pen_c = 1.1;
  std::optional<double> sel_sigma;
  select->add_option("--x", sel_x, "Design CSV")->required();
  select->add_option("--y", sel_y, "Response CSV")->required();
  select->add_option("--criterion", sel_criterion, "crit | crit-log")
      ->check(CLI::IsMember({"crit", "crit-log"}));
  select->add_option("--pen-c", sel_pen_c, "Penalty constant c");
  select
      ->add_option("--sigma", sel_sigma,
                   "Noise sd (required for --criterion crit)")
      ->expected(1);
  select->add_option("--out", sel_out, "Report JSON path");
  select->callback([&] {
    const Mat x = lowrr::read_matrix_csv(sel_x);
    const Mat y = lowrr::read_matrix_csv(sel_y);
    const lowrr::DesignSummary summary = lowrr::summarize_design(x);
    const int T = y.cols;
    const double root_sum = std::sqrt(static_cast<double>(T)) +
                            std::sqrt(static_cast<double>(summary.q));
    const bool log_form = sel_criterion == "crit-log";
    // Penalty scale for the log form is normalized per observation cell.
    const double denom = log_form ? static_cast<double>(x.rows) * T : 1.0;
    auto pen = [&](int r) { return sel_pen_c * r * root_sum * root_sum / denom; };
    const auto path = lowrr::fit_reduced_rank_path(x, y);
    const auto selection = lowrr::select_rank(
        path,
        log_form ? lowrr::RankCriterion::log_form
                 : lowrr::RankCriterion::known_variance,
        pen, sel_sigma);
    json rss_path = json::array();
    for (const auto& fit : path) rss_path.push_back(fit.rss);
    json crit_values = json::array();
    for (double v : selection.criterion)
      crit_values.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    json report{{"subcommand", "select-rank"},
                {"config",
                 json{{"x", sel_x},
                      {"y", sel_y},
                      {"out", sel_out},
                      {"criterion", sel_criterion},
                      {"pen_c", sel_pen_c},
                      {"sigma", sel_sigma ? json(*sel_sigma) : json(nullptr)}}},
                {"selection",
                 json{{"r_hat", selection.r_hat},
                      {"exact_fit", selection.exact_fit},
                      {"criterion_values", crit_values},
                      {"rss_path", rss_path},
                      {"q", summary.q},
                      {"penalty_note", kPenaltyNote}}},
                {"fit", fit_json(path[selection.r_hat])}};
    write_report(report, sel_out);
    std::cout << "select-rank: r_hat=" << selection.r_hat
              << " rss=" << path[selection.r_hat].rss << " report=" << sel_out
              << "\n";
  });

  // check-design --------------------------------------------------------
  auto* check = app.add_subcommand(
      "check-design", "Spectral summary and design-condition checks");
  std::string chk_x, chk_out = "report.json";
  std::optional<double> chk_mu_max, chk_eta_max;
  check->add_option("--x", chk_x, "Design CSV")->required();
  check->add_option("--mu-max", chk_mu_max,
                    "Check sigma_q >= 1/mu_max when given");
  check->add_option("--eta-max", chk_eta_max,
                    "Check eta <= eta_max when given");
  check->add_option("--out", chk_out, "Report JSON path");
  check->callback([&] {
    const Mat x = lowrr::read_matrix_csv(chk_x);
    const lowrr::DesignSummary summary = lowrr::summarize_design(x);
    json a1 = nullptr;
    if (chk_mu_max) {
      const auto rep = lowrr::check_assumption1(summary, *chk_mu_max);
      a1 = json{{"mu_max", rep.mu_max},
                {"holds", rep.holds},
                {"sigmaq", rep.sigmaq},
                {"mu_required", rep.mu_required},
                {"eta", rep.eta}};
    }
    json ri = nullptr;
    if (chk_eta_max) {
      ri = json{{"eta_max", *chk_eta_max},
                {"holds", lowrr::check_ri_property(summary, *chk_eta_max)}};
    }
    json report{{"subcommand", "check-design"},
                {"config",
                 json{{"x", chk_x},
                      {"out", chk_out},
                      {"mu_max", chk_mu_max ? json(*chk_mu_max) : json(nullptr)},
                      {"eta_max", chk_eta_max ? json(*chk_eta_max) : json(nullptr)}}},
                {"design", design_json(summary)},
                {"assumption1", a1},
                {"ri_property", ri}};
    write_report(report, chk_out);
    std::cout << "check-design: q=" << summary.q << " sigma1=" << summary.sigma1
              << " sigmaq=" << summary.sigmaq << " eta=" << summary.eta
              << " report=" << chk_out << "\n";
  });

  // bound ----------------------------------------------------------------
  auto* bound = app.add_subcommand(
      "bound", "Fit at lambda and compare against the oracle bound");
  std::string bnd_x, bnd_y, bnd_a0, bnd_out = "report.json",
                                    bnd_constant = "exact";
  std::optional<double> bnd_lambda, bnd_k, bnd_sigma;
  SolverFlags bnd_solver;
  bound->add_option("--x", bnd_x, "Design CSV")->required();
  bound->add_option("--y", bnd_y, "Response CSV")->required();
  bound->add_option("--a0", bnd_a0, "True coefficient CSV")->required();
  bound->add_option("--lambda", bnd_lambda, "Penalty level (overrides --k)");
  bound->add_option("--k", bnd_k, "Calibration multiplier K > 1");
  bound->add_option("--sigma", bnd_sigma, "Noise sd for the K calibration");
  bound->add_option("--constant", bnd_constant, "exact | relaxed")
      ->check(CLI::IsMember({"exact", "relaxed"}));
  bound->add_option("--out", bnd_out, "Report JSON path");
  add_solver_flags(bound, bnd_solver);
  bound->callback([&] {
    const Mat x = lowrr::read_matrix_csv(bnd_x);
    const Mat y = lowrr::read_matrix_csv(bnd_y);
    const Mat a0 = lowrr::read_matrix_csv(bnd_a0);
    const lowrr::DesignSummary summary = lowrr::summarize_design(x);
    double lambda = 0.0;
    if (bnd_lambda) {
      lambda = *bnd_lambda;
    } else if (bnd_k) {
      lambda = lowrr::lambda_corollary(summary.sigma1, y.cols, summary.q,
                                       *bnd_k, bnd_sigma.value_or(1.0));
    } else {
      throw std::invalid_argument("bound: provide --lambda or --k");
    }
    const ConstantMode mode = parse_constant(bnd_constant);
    const lowrr::FitResult fit =
        lowrr::fit_nnp(x, y, lambda, bnd_solver.options());
    // In the regression model the noise realization is determined by the
    // rest of the data: E = Y - X*A0.
    const Mat noise = y - lowrr::kernels::gemm_nn(x, a0);
    const auto exact = lowrr::check_oracle(x, a0, fit.A_hat, lambda, noise,
                                           ConstantMode::exact);
    const auto relaxed = lowrr::check_oracle(x, a0, fit.A_hat, lambda, noise,
                                             ConstantMode::relaxed);
    const auto& selected = mode == ConstantMode::exact ? exact : relaxed;
    json report{
        {"subcommand", "bound"},
        {"config",
         json{{"x", bnd_x},
              {"y", bnd_y},
              {"a0", bnd_a0},
              {"out", bnd_out},
              {"lambda", bnd_lambda ? json(*bnd_lambda) : json(nullptr)},
              {"k", bnd_k ? json(*bnd_k) : json(nullptr)},
              {"sigma", bnd_sigma ? json(*bnd_sigma) : json(nullptr)},
              {"constant", bnd_constant},
              {"solver", bnd_solver.to_json()}}},
        {"fit", fit_json(fit)},
        {"bound",
         json{{"lhs", selected.lhs},
              {"lambda_used", lambda},
              {"lambda_min_event", selected.lambda_min_event.value()},
              {"constant_mode", constant_name(mode)},
              {"rhs", selected.rhs},
              {"argmin_r", selected.argmin_r},
              {"holds", selected.holds},
              {"exact", bound_side_json(exact)},
              {"relaxed", bound_side_json(relaxed)}}}};
    write_report(report, bnd_out);
    std::cout << "bound: lambda=" << lambda << " lhs=" << selected.lhs
              << " rhs=" << selected.rhs
              << " holds=" << (selected.holds ? "yes" : "no")
              << " report=" << bnd_out << "\n";
  });

  // trial ------------------------------------------------------------------
  auto* trial = app.add_subcommand("trial", "One seeded simulation trial");
  TrialFlags trial_flags;
  SolverFlags trial_solver;
  std::string trial_out = "report.json";
  add_trial_flags(trial, trial_flags);
  add_solver_flags(trial, trial_solver);
  trial->add_option("--out", trial_out, "Report JSON path");
  trial->callback([&] {
    const lowrr::TrialReport rep =
        lowrr::run_trial(trial_flags.cfg, trial_solver.options());
    json report{{"subcommand", "trial"},
                {"config",
                 json{{"trial", trial_flags.to_json()},
                      {"solver", trial_solver.to_json()},
                      {"out", trial_out}}},
                {"trial", trial_json(rep)}};
    write_report(report, trial_out);
    std::cout << "trial: seed=" << rep.seed << " lambda=" << rep.lambda
              << " lhs=" << rep.exact.lhs << " rhs(exact)=" << rep.exact.rhs
              << " holds=" << (rep.exact.holds ? "yes" : "no")
              << " report=" << trial_out << "\n";
  });

  // monte-carlo --------------------------------------------------------------
  auto* mc = app.add_subcommand("monte-carlo",
                                "Aggregate seeded trials and tail frequencies");
  TrialFlags mc_flags;
  SolverFlags mc_solver;
  std::string mc_out = "report.json", mc_constant = "exact";
  int mc_trials = 100;
  add_trial_flags(mc, mc_flags);
  add_solver_flags(mc, mc_solver);
  mc->add_option("--trials", mc_trials, "Number of trials");
  mc->add_option("--constant", mc_constant, "exact | relaxed")
      ->check(CLI::IsMember({"exact", "relaxed"}));
  mc->add_option("--out", mc_out, "Report JSON path");
  mc->callback([&] {
    const lowrr::MCReport rep =
        lowrr::monte_carlo(mc_flags.cfg, mc_trials, mc_solver.options());
    const ConstantMode mode = parse_constant(mc_constant);
    json detail = json::array();
    for (const auto& t : rep.trial_reports) {
      detail.push_back(json{{"seed", t.seed},
                            {"lambda", t.lambda},
                            {"lhs", t.exact.lhs},
                            {"rhs_exact", t.exact.rhs},
                            {"rhs_relaxed", t.relaxed.rhs},
                            {"event", t.lambda_min_event},
                            {"holds_exact", t.exact.holds},
                            {"holds_relaxed", t.relaxed.holds},
                            {"converged", t.solver_converged}});
    }
    json report{{"subcommand", "monte-carlo"},
                {"config",
                 json{{"trial", mc_flags.to_json()},
                      {"solver", mc_solver.to_json()},
                      {"trials", mc_trials},
                      {"constant", mc_constant},
                      {"out", mc_out}}},
                {"monte_carlo",
                 json{{"trials", rep.trials},
                      {"violation_count", rep.violation_count(mode)},
                      {"violation_count_exact", rep.violation_count_exact},
                      {"violation_count_relaxed", rep.violation_count_relaxed},
                      {"event_fail_count", rep.event_fail_count},
                      {"bound_probability", rep.bound_probability},
                      {"constant_mode", constant_name(mode)},
                      {"trial_detail", detail}}}};
    write_report(report, mc_out);
    std::cout << "monte-carlo: trials=" << rep.trials << " violations("
              << mc_constant << ")=" << rep.violation_count(mode)
              << " event_fails=" << rep.event_fail_count
              << " bound_prob=" << rep.bound_probability
              << " report=" << mc_out << "\n";
  });

  // gen-data -------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen-data",
                                 "Write seeded X, A0, E, Y matrices as CSV");
  TrialFlags gen_flags;
  std::string gen_x = "X.csv", gen_y = "Y.csv", gen_a0 = "A0.csv",
              gen_e = "E.csv", gen_out = "report.json";
  gen->add_option("--x", gen_x, "Output path for X");
  gen->add_option("--y", gen_y, "Output path for Y");
  gen->add_option("--a0", gen_a0, "Output path for A0");
  gen->add_option("--e", gen_e, "Output path for E");
  add_trial_flags(gen, gen_flags);
  gen->add_option("--out", gen_out, "Report JSON path");
  gen->callback([&] {
    const lowrr::TrialConfig& cfg = gen_flags.cfg;
    cfg.validate();
    const Mat x = lowrr::gen_design(cfg);
    Mat a0 = lowrr::gen_coef(cfg);
    const lowrr::DesignSummary summary = lowrr::summarize_design(x);
    if (cfg.coef_in_rowspace && cfg.r0 > 0)
      a0 = lowrr::project_rowspace(summary.svd, a0);
    const Mat e = lowrr::gen_noise(cfg);
    const Mat y = lowrr::kernels::gemm_nn(x, a0) + e;
    lowrr::write_matrix_csv(x, gen_x);
    lowrr::write_matrix_csv(a0, gen_a0);
    lowrr::write_matrix_csv(e, gen_e);
    lowrr::write_matrix_csv(y, gen_y);
    const int rank_a0 =
        lowrr::max_abs(a0) > 0.0
            ? lowrr::numerical_rank(lowrr::thin_svd(a0))
            : 0;
    json report{{"subcommand", "gen-data"},
                {"config",
                 json{{"trial", gen_flags.to_json()},
                      {"x", gen_x},
                      {"y", gen_y},
                      {"a0", gen_a0},
                      {"e", gen_e},
                      {"out", gen_out}}},
                {"gen_data",
                 json{{"design", design_json(summary)}, {"rank_a0", rank_a0}}}};
    write_report(report, gen_out);
    std::cout << "gen-data: wrote " << gen_x << " " << gen_a0 << " " << gen_e
              << " " << gen_y << " report=" << gen_out << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const lowrr::CsvError& e) {
    std::cerr << "file error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
