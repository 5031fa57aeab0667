#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "drmean/csv.hpp"
#include "drmean/diagnostics.hpp"
#include "drmean/error.hpp"
#include "drmean/estimators.hpp"
#include "drmean/logistic.hpp"
#include "drmean/scenario_io.hpp"
#include "drmean/simulation.hpp"
#include "table_writer.hpp"

namespace drm::cli {
namespace {

struct Options {
  std::string scenario;
  std::string data;
  std::size_t n = 0;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  std::string estimators;
  std::string basis = "spline";
  double delta = 0.05;
  double ramp_width = 0.01;
  double epsilon = kDefaultClipEpsilon;
  double span = 2.0 / 3.0;
  int degree = 1;
  std::size_t grid_points = 100;
  std::string grid;
  std::string axis = "eta";
  std::string format = "csv";
  std::string out;
  std::string replicates;
  std::string variant;
  std::string mae = "median";
  unsigned threads = 1;
  int fit_group = 1;
  double subsample = 0.2;
  std::string expression;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

Format parse_format(const std::string& f) {
  if (f == "csv") return Format::Csv;
  if (f == "jsonl") return Format::JsonLines;
  throw Error(ErrorCode::ConfigError, "unknown format '" + f + "'");
}

// Writes to --out when given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorCode::ConfigError, "cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

EstimatorConfig estimator_defaults(const Options& o) {
  EstimatorConfig d;
  d.basis.kind = parse_basis_kind(o.basis);
  d.delta = o.delta;
  d.ramp_width = o.ramp_width;
  d.epsilon = o.epsilon;
  return d;
}

std::vector<EstimatorConfig> parse_estimators(const Options& o, const std::string& fallback) {
  const EstimatorConfig defaults = estimator_defaults(o);
  std::vector<EstimatorConfig> out;
  for (const auto& name : split_list(o.estimators.empty() ? fallback : o.estimators)) {
    out.push_back(parse_estimator(name, defaults));
    out.back().validate();
  }
  if (out.empty()) throw Error(ErrorCode::ConfigError, "no estimators given");
  return out;
}

ScenarioSpec load_scenario_with_variant(const Options& o) {
  if (o.scenario.empty()) throw Error(ErrorCode::ConfigError, "--scenario is required");
  ScenarioSpec spec = load_scenario(o.scenario);
  if (o.variant == "alt_x4") {
    apply_alternative_x4(spec);
  } else if (!o.variant.empty() && o.variant != "classic") {
    throw Error(ErrorCode::ConfigError, "unknown variant '" + o.variant + "'");
  }
  return spec;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  RunConfig config;
  config.scenario = load_scenario_with_variant(o);
  config.n = o.n == 0 ? 200 : o.n;
  config.reps = o.reps;
  config.seed = o.seed;
  config.threads = o.threads;
  config.estimators = parse_estimators(o, "mu_ols,mu_pi_cov");
  for (const auto& c : split_list(o.grid)) config.spec_grid.push_back(parse_grid_cell(c));
  if (o.mae == "mean") {
    config.mae_kind = AbsErrorSummary::Mean;
  } else if (o.mae != "median") {
    throw Error(ErrorCode::ConfigError, "--mae must be median or mean");
  }
  const Format format = parse_format(o.format);

  const SimulationResult result = run_simulation(config);

  Sink sink(o.out, out);
  TableWriter table(sink.get(), format,
                    {"cell", "estimator", "reps", "excluded", "bias", "pct_bias", "rmse", "mae",
                     "var", "mse"});
  for (const auto& row : summarise(result, config.mae_kind)) {
    const MetricsRow& m = row.metrics;
    table.row({to_string(row.cell), m.estimator, static_cast<std::int64_t>(m.reps),
               static_cast<std::int64_t>(row.excluded), m.bias, cell(m.pct_bias), m.rmse, m.mae,
               cell(m.var), m.mse});
  }

  if (!o.replicates.empty()) {
    Sink rep_sink(o.replicates, out);
    TableWriter reps(rep_sink.get(), format, {"rep", "cell", "estimator", "estimate"});
    for (std::size_t r = 0; r < result.reps; ++r) {
      for (std::size_t c = 0; c < result.cells.size(); ++c) {
        for (std::size_t e = 0; e < result.estimator_ids.size(); ++e) {
          reps.row({static_cast<std::int64_t>(r), to_string(result.cells[c]),
                    result.estimator_ids[e], result.estimate(r, c, e)});
        }
      }
    }
  }

  err << "# replicates: " << result.reps << ", failures: " << result.failures.size() << '\n';
  for (const auto& f : result.failures) {
    err << "# rep " << f.rep << ' ' << to_string(f.cell) << ' ' << f.estimator << ": " << f.message
        << '\n';
  }
  return kExitOk;
}

int cmd_estimate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.data.empty()) throw Error(ErrorCode::ConfigError, "--data is required");
  const auto estimators =
      parse_estimators(o, "naive_mean,mu_ols,mu_ipw_ht,mu_ipw_hajek,mu_bc_ols,mu_wls,mu_pi_cov,mu_hybrid");
  const Format format = parse_format(o.format);
  CsvDataset csv = read_dataset_csv(o.data);
  for (const auto& w : csv.warnings) err << "warning: " << w << '\n';

  std::optional<LogisticFit> pfit;
  for (const auto& e : estimators) {
    if (e.needs_propensity() && !pfit) pfit = fit_logistic(csv.data.x, csv.data.t);
  }
  if (pfit && !pfit->converged) err << "warning: propensity model did not converge\n";

  Sink sink(o.out, out);
  TableWriter table(sink.get(), format,
                    {"estimator", "estimate", "se", "n_respondents", "max_weight", "notes"});
  for (const auto& e : estimators) {
    PropensityScores ps;
    if (e.needs_propensity()) ps = make_propensity_scores(*pfit, e.epsilon);
    const EstimatorResult r = estimate(csv.data, e.needs_propensity() ? &ps : nullptr, e);
    std::string notes;
    for (const auto& n : r.notes) notes += (notes.empty() ? "" : "; ") + n;
    table.row({e.id(), r.mu_hat, cell(r.se), static_cast<std::int64_t>(r.n_respondents),
               cell(r.max_weight), notes});
  }
  return kExitOk;
}

int cmd_diagnose(const Options& o, std::ostream& out, std::ostream& err) {
  DiagnosticRequest req;
  if (o.fit_group != 0 && o.fit_group != 1) throw Error(ErrorCode::ConfigError, "--fit-group must be 0 or 1");
  req.fit_group = static_cast<std::uint8_t>(o.fit_group);
  if (o.axis == "eta") {
    req.axis = DiagnosticAxis::LogitPropensity;
  } else if (o.axis == "fitted") {
    req.axis = DiagnosticAxis::FittedValue;
  } else {
    throw Error(ErrorCode::ConfigError, "--axis must be eta or fitted");
  }
  req.loess.span = o.span;
  req.loess.degree = o.degree;
  req.loess.grid_points = o.grid_points;
  req.subsample_fraction = o.subsample;
  req.seed = o.seed;
  const Format format = parse_format(o.format);

  Dataset data;
  std::vector<double> y_full;
  if (!o.data.empty()) {
    CsvDataset csv = read_dataset_csv(o.data);
    for (const auto& w : csv.warnings) err << "warning: " << w << '\n';
    data = std::move(csv.data);
  } else if (!o.scenario.empty()) {
    const ScenarioSpec spec = load_scenario_with_variant(o);
    GeneratedSample s = generate_sample(spec, o.n == 0 ? 1000 : o.n, o.seed);
    data = std::move(s.dataset);
    y_full = std::move(s.y_full);
  } else {
    throw Error(ErrorCode::ConfigError, "diagnose needs --data or --scenario");
  }

  const LogisticFit pfit = fit_logistic(data.x, data.t);
  const PropensityScores ps = make_propensity_scores(pfit, o.epsilon);
  const DiagnosticPlotData plot = residual_diagnostic(data, y_full, ps, req);

  Sink sink(o.out, out);
  TableWriter table(sink.get(), format, {"x", "residual", "group", "display", "curve"});
  for (const auto& p : plot.points) {
    table.row({p.x, p.residual, static_cast<std::int64_t>(p.group),
               static_cast<std::int64_t>(p.display ? 1 : 0), std::int64_t{0}});
  }
  for (const auto& gc : plot.curves) {
    for (const auto& cp : gc.curve.points) {
      table.row({cp.x, cp.value, static_cast<std::int64_t>(gc.group), std::int64_t{1},
                 std::int64_t{1}});
    }
    if (gc.curve.degenerate_points > 0) {
      err << "warning: group " << int(gc.group) << " loess had " << gc.curve.degenerate_points
          << " degenerate neighbourhoods\n";
    }
  }
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const ScenarioSpec spec = load_scenario_with_variant(o);
  const ValidationReport r = validate_scenario(spec, o.n == 0 ? 100000 : o.n, o.seed);
  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  s << "n = " << r.n << '\n';
  s << "r2_y_on_x = " << format_number(r.r2_y_on_x) << '\n';
  s << "corr_lp = " << format_number(r.corr_lp) << '\n';
  s << "corr_true_y = " << format_number(r.corr_true_y) << '\n';
  s << "corr_true_pi = " << format_number(r.corr_true_pi) << '\n';
  for (std::size_t i = 0; i < r.quantile_probs.size(); ++i) {
    s << "pi_quantile_" << format_number(r.quantile_probs[i]) << " = "
      << format_number(r.propensity_quantiles[i]) << '\n';
  }
  for (std::size_t i = 0; i < r.monotone_check.size(); ++i) {
    const auto& m = r.monotone_check[i];
    s << "monotone_x" << (i + 1) << " = " << (m.consistent ? "ok" : "suspect");
    if (!m.consistent) {
      s << " (axes";
      for (auto a : m.suspect_axes) s << " z" << a;
      s << ')';
    }
    s << '\n';
  }
  return kExitOk;
}

int cmd_parse_check(const Options& o, std::ostream& out) {
  const Expression e = Expression::parse(o.expression);
  const std::vector<double> origin(e.max_variable(), 0.0);
  out << "normalized = " << e.to_string() << '\n';
  out << "max_variable = " << e.max_variable() << '\n';
  out << "value_at_origin = " << format_number(e.evaluate(origin)) << '\n';
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownVariable:
    case ErrorCode::MalformedCsv:
    case ErrorCode::EpsilonOutOfRange:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Population-mean estimators for incomplete data"};
  app.require_subcommand(1);

  auto add_common_estimation = [&](CLI::App* sub) {
    sub->add_option("--estimators", o.estimators, "Comma-separated estimator list");
    sub->add_option("--basis", o.basis, "pi-cov basis: spline|quintile|squared");
    sub->add_option("--delta", o.delta, "Hybrid threshold");
    sub->add_option("--ramp-width", o.ramp_width, "Smooth hybrid ramp width");
    sub->add_option("--epsilon", o.epsilon, "Propensity clipping bound");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "csv|jsonl");
    sub->add_option("--out", o.out, "Output path (default stdout)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo performance table");
  simulate->add_option("--scenario", o.scenario, "Scenario file")->required();
  simulate->add_option("--n", o.n, "Sample size per replicate");
  simulate->add_option("--reps", o.reps, "Replicates");
  simulate->add_option("--seed", o.seed, "Master seed");
  simulate->add_option("--grid", o.grid, "Comma-separated model-specification cells");
  simulate->add_option("--replicates", o.replicates, "Also write the replicate table here");
  simulate->add_option("--threads", o.threads, "Worker threads");
  simulate->add_option("--variant", o.variant, "classic|alt_x4");
  simulate->add_option("--mae", o.mae, "median|mean absolute error");
  add_common_estimation(simulate);
  add_output(simulate);

  CLI::App* est = app.add_subcommand("estimate", "Estimate the mean from a CSV dataset");
  est->add_option("--data", o.data, "Dataset CSV")->required();
  add_common_estimation(est);
  add_output(est);

  CLI::App* diag = app.add_subcommand("diagnose", "Residual-versus-propensity plot data");
  diag->add_option("--data", o.data, "Dataset CSV");
  diag->add_option("--scenario", o.scenario, "Scenario file (full-data diagnostics)");
  diag->add_option("--variant", o.variant, "classic|alt_x4");
  diag->add_option("--n", o.n, "Sample size in scenario mode");
  diag->add_option("--seed", o.seed, "Seed for the sample and the display subsample");
  diag->add_option("--axis", o.axis, "eta|fitted");
  diag->add_option("--span", o.span, "Loess span");
  diag->add_option("--degree", o.degree, "Loess degree (1 or 2)");
  diag->add_option("--grid-points", o.grid_points, "Loess grid size");
  diag->add_option("--fit-group", o.fit_group, "Group the y-model is fit on (0 or 1)");
  diag->add_option("--subsample", o.subsample, "Fraction of points flagged for display");
  diag->add_option("--epsilon", o.epsilon, "Propensity clipping bound");
  add_output(diag);

  CLI::App* validate = app.add_subcommand("validate-scenario", "Check the design criteria");
  validate->add_option("--scenario", o.scenario, "Scenario file")->required();
  validate->add_option("--variant", o.variant, "classic|alt_x4");
  validate->add_option("--n", o.n, "Sample size (default 100000)");
  validate->add_option("--seed", o.seed, "Seed");
  validate->add_option("--out", o.out, "Output path (default stdout)");

  CLI::App* parse = app.add_subcommand("parse-check", "Parse a transformation expression");
  parse->add_option("expression", o.expression, "Expression text")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(o, out, err);
    if (*est) return cmd_estimate(o, out, err);
    if (*diag) return cmd_diagnose(o, out, err);
    if (*validate) return cmd_validate(o, out);
    if (*parse) return cmd_parse_check(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace drm::cli
