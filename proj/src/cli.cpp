#include "strata/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "strata/dataio.hpp"

namespace strata {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

unsigned worker_count_from_env() {
  const char* env = std::getenv("STRATA_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0' || v == 0 || v > 256) return 1;
  return static_cast<unsigned>(v);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct AnalyzeOptions {
  std::string summary_path;
  std::string dataset;
  std::string format = "table";
  std::string f_convention = "computed";
};

struct EstimateOptions {
  std::string micro_path;
  std::string summary_path;
  std::string estimator;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool has_lambda1 = false;
  bool has_lambda2 = false;
  std::string a = "opt";
};

struct SimulateOptions {
  std::string summary_path;
  std::string dataset;
  std::int64_t reps = 10000;
  std::uint64_t seed = 1;
  std::string dist = "lognormal";
  std::int64_t pop_scale = 0;  // 0: use N_h as given
  std::string estimators;     // comma list; empty: all
};

struct DatasetOptions {
  std::string action;
  std::string name;
  std::string out_path;
};

// throws CLI::ValidationError so a bad list surfaces as a usage error
std::vector<EstimatorId> parse_estimator_list(const std::string& spec) {
  std::vector<EstimatorId> estimators;
  if (spec.empty()) {
    estimators.assign(std::begin(kAllEstimators), std::end(kAllEstimators));
    return estimators;
  }
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto id = estimator_from_name(token);
    if (!id)
      throw CLI::ValidationError("--estimators",
                                 "unknown estimator '" + token + "'");
    estimators.push_back(*id);
  }
  if (estimators.empty())
    throw CLI::ValidationError("--estimators", "empty list");
  return estimators;
}

StratifiedDesign load_design(const std::string& summary_path,
                             const std::string& dataset,
                             FConvention convention) {
  if (!dataset.empty()) return builtin_dataset(dataset, convention);
  return parse_summary_csv(read_file(summary_path));
}

int do_analyze(const AnalyzeOptions& opt, std::ostream& out) {
  const FConvention convention = opt.f_convention == "tabulated"
                                     ? FConvention::tabulated
                                     : FConvention::computed;
  const StratifiedDesign design =
      load_design(opt.summary_path, opt.dataset, convention);
  AnalysisReport report = pre_table(design);
  report.dataset = !opt.dataset.empty() ? opt.dataset : opt.summary_path;
  out << write_report(report, opt.format == "json" ? ReportFormat::json
                                                   : ReportFormat::table);
  return 0;
}

int do_estimate(const EstimateOptions& opt, std::ostream& out) {
  const StratifiedDesign design = parse_summary_csv(read_file(opt.summary_path));
  const MicroData micro = parse_micro_csv(read_file(opt.micro_path));
  const auto id = estimator_from_name(opt.estimator);
  if (!id)
    throw Error(Errc::InvariantViolation,
                "unknown estimator '" + opt.estimator + "'");

  double value = 0.0;
  if (*id == EstimatorId::tp) {
    const LambdaPair lambda = opt.has_lambda1
                                  ? LambdaPair{opt.lambda1, opt.lambda2}
                                  : opt_lambdas(design);
    value = point_estimate_tp(micro.sample, design, lambda.lambda1,
                              lambda.lambda2);
  } else if (*id == EstimatorId::tR) {
    std::vector<double> a;
    if (opt.a == "opt") {
      a = opt_a(design);
    } else {
      char* end = nullptr;
      const double v = std::strtod(opt.a.c_str(), &end);
      if (end != opt.a.c_str() + opt.a.size() || opt.a.empty())
        throw Error(Errc::ZeroTuning, "--a expects 'opt' or a real number");
      a.assign(design.size(), v);
    }
    value = point_estimate_classical(EstimatorId::tR, micro.sample, design, &a);
  } else {
    value = point_estimate_classical(*id, micro.sample, design);
  }
  out << estimator_name(*id) << " " << fmt17(value) << "\n";
  return 0;
}

int do_simulate(const SimulateOptions& opt, std::ostream& out) {
  const StratifiedDesign design =
      load_design(opt.summary_path, opt.dataset, FConvention::computed);

  const auto family = dist_family_from_name(opt.dist);
  if (!family)
    throw Error(Errc::InvalidSpec, "unknown distribution '" + opt.dist + "'");

  const std::vector<EstimatorId> estimators =
      parse_estimator_list(opt.estimators);

  PopulationSpec spec;
  spec.family = *family;
  spec.seed = opt.seed;
  std::vector<std::int64_t> n;
  const std::int64_t scale = std::max<std::int64_t>(1, opt.pop_scale);
  for (const auto& s : design.strata) {
    spec.strata.push_back({s.id, s.pop_count * scale, s.mean_x, s.mean_y,
                           s.sd_x, s.sd_y, s.rho});
    n.push_back(s.sample_count);
  }

  const FinitePopulation pop = gen_population(spec);
  const SimulationReport report = simulate(pop, n, estimators, opt.reps,
                                           opt.seed, worker_count_from_env());

  out << "synthetic-population validation\n";
  out << "source: "
      << (!opt.dataset.empty() ? opt.dataset : opt.summary_path) << "\n";
  out << "distribution: " << dist_family_name(*family) << "\n";
  out << "pop-scale: " << scale << "\n";
  out << write_simulation_report(report);
  return 0;
}

int do_dataset(const DatasetOptions& opt, std::ostream& out) {
  if (opt.action != "export")
    throw Error(Errc::UnknownDataset,
                "unknown action '" + opt.action + "'; expected 'export'");
  const StratifiedDesign design = builtin_dataset(opt.name);
  std::ofstream file(opt.out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + opt.out_path + "'");
  file << write_summary_csv(design);
  file.close();
  out << "wrote " << opt.out_path << "\n";
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"design-based estimators for stratified SRSWOR surveys"};
  app.name("strata");
  app.require_subcommand(1);

  AnalyzeOptions analyze_opt;
  auto* analyze = app.add_subcommand(
      "analyze", "MSE / PRE table of all estimators for a design");
  auto* an_summary =
      analyze->add_option("--summary", analyze_opt.summary_path,
                          "summary-statistics CSV path");
  auto* an_dataset = analyze->add_option("--dataset", analyze_opt.dataset,
                                         "builtin dataset name");
  an_summary->excludes(an_dataset);
  analyze->add_option("--format", analyze_opt.format, "output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  auto* an_fconv =
      analyze
          ->add_option("--f-convention", analyze_opt.f_convention,
                       "fpc source for builtin datasets")
          ->check(CLI::IsMember({"computed", "tabulated"}))
          ->capture_default_str();

  EstimateOptions estimate_opt;
  auto* estimate =
      app.add_subcommand("estimate", "point estimate from drawn microdata");
  estimate->add_option("--micro", estimate_opt.micro_path, "microdata CSV path")
      ->required();
  estimate
      ->add_option("--summary", estimate_opt.summary_path,
                   "summary-statistics CSV path")
      ->required();
  estimate->add_option("--estimator", estimate_opt.estimator, "estimator id")
      ->required()
      ->check(CLI::IsMember(
          {"mean", "t1", "t2", "t3", "t4", "tlr", "tR", "tp"}));
  auto* l1 = estimate->add_option("--lambda1", estimate_opt.lambda1,
                                  "tp scale on ybar (default: optimum)");
  auto* l2 = estimate->add_option("--lambda2", estimate_opt.lambda2,
                                  "tp scale on (Xbar - xbar) (default: optimum)");
  estimate->add_option("--a", estimate_opt.a, "tR tuning: 'opt' or a real")
      ->capture_default_str();

  SimulateOptions simulate_opt;
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "synthetic-population Monte-Carlo validation");
  auto* sim_summary =
      simulate_cmd->add_option("--summary", simulate_opt.summary_path,
                               "summary-statistics CSV path");
  auto* sim_dataset = simulate_cmd->add_option(
      "--dataset", simulate_opt.dataset, "builtin dataset name");
  sim_summary->excludes(sim_dataset);
  simulate_cmd->add_option("--reps", simulate_opt.reps, "replicate count")
      ->capture_default_str();
  simulate_cmd->add_option("--seed", simulate_opt.seed, "random seed")
      ->capture_default_str();
  simulate_cmd->add_option("--dist", simulate_opt.dist, "unit-value family")
      ->check(CLI::IsMember({"gaussian", "lognormal"}))
      ->capture_default_str();
  simulate_cmd->add_option("--pop-scale", simulate_opt.pop_scale,
                           "multiply each N_h (default: use N_h as given)");
  simulate_cmd->add_option("--estimators", simulate_opt.estimators,
                           "comma list (default: all)");

  DatasetOptions dataset_opt;
  auto* dataset_cmd =
      app.add_subcommand("dataset", "builtin dataset utilities");
  dataset_cmd->add_option("action", dataset_opt.action, "'export'")->required();
  dataset_cmd->add_option("name", dataset_opt.name, "dataset name")->required();
  dataset_cmd->add_option("--out", dataset_opt.out_path, "output CSV path")
      ->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  estimate_opt.has_lambda1 = l1->count() > 0;
  estimate_opt.has_lambda2 = l2->count() > 0;
  if (estimate->parsed() &&
      estimate_opt.has_lambda1 != estimate_opt.has_lambda2) {
    err << "--lambda1 and --lambda2 must be given together\n";
    return 1;
  }

  try {
    if (analyze->parsed()) {
      if (analyze_opt.summary_path.empty() && analyze_opt.dataset.empty()) {
        err << "analyze requires --summary or --dataset\n";
        return 1;
      }
      if (an_fconv->count() > 0 && analyze_opt.f_convention == "tabulated" &&
          an_dataset->count() == 0) {
        err << "--f-convention tabulated applies only to builtin datasets\n";
        return 1;
      }
      return do_analyze(analyze_opt, out);
    }
    if (estimate->parsed()) return do_estimate(estimate_opt, out);
    if (simulate_cmd->parsed()) {
      if (simulate_opt.summary_path.empty() && simulate_opt.dataset.empty()) {
        err << "simulate requires --summary or --dataset\n";
        return 1;
      }
      return do_simulate(simulate_opt, out);
    }
    if (dataset_cmd->parsed()) return do_dataset(dataset_opt, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 1;
}

}  // namespace strata
