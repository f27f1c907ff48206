#include "mdpd_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <map>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mdpd/asymptotics.hpp"
#include "mdpd/dataio.hpp"
#include "mdpd/error.hpp"
#include "mdpd/estimator.hpp"
#include "mdpd/parallel.hpp"
#include "mdpd/plot_data.hpp"
#include "mdpd/selection.hpp"
#include "mdpd/tuning.hpp"
#include "mdpd/uncertainty.hpp"

namespace mdpd::cli {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommands = {{
    {Command::Fit, "fit"},
    {Command::Tune, "tune"},
    {Command::Select, "select"},
    {Command::AreTable, "are-table"},
    {Command::Influence, "influence"},
    {Command::Bootstrap, "bootstrap"},
    {Command::Simulate, "simulate"},
    {Command::Report, "report"},
}};

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json named(const ParamVector& p, std::span<const double> values) {
  json j = json::object();
  const auto names = param_names(p.family());
  for (std::size_t i = 0; i < values.size(); ++i) j[std::string(names[i])] = number(values[i]);
  return j;
}

json fit_json(const FitResult& f, const Sample& sample) {
  return {
      {"family", family_name(f.family)},
      {"alpha", f.alpha},
      {"params", named(f.theta_hat, f.theta_hat.values())},
      {"objective", number(f.objective)},
      {"converged", f.converged},
      {"n", f.n_obs},
      {"dry_count", sample.dry_count()},
      {"evaluations", f.evaluations},
      {"warnings", f.warnings},
  };
}

// NaN when the sandwich cannot be formed; the reason goes into `warnings`.
std::vector<double> try_asymptotic_se(const FitResult& f, std::vector<std::string>& warnings) {
  try {
    return asymptotic_se(f);
  } catch (const Error& e) {
    warnings.push_back(std::string("asymptotic SE unavailable: ") + e.what());
    return std::vector<double>(f.theta_hat.size(), NAN);
  }
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ParamVector theta_or_default(const CliConfig& c) {
  const Family f = *c.family;
  if (c.theta.empty()) {
    if (f == Family::Exponential) return ParamVector::exponential(1.0);
    throw UsageError(std::string("--theta is required for the ") + std::string(family_name(f)) + " family");
  }
  if (c.theta.size() != param_count(f))
    throw UsageError(std::string(family_name(f)) + " takes " + std::to_string(param_count(f)) + " parameters");
  return ParamVector(f, c.theta);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError(DataError::Reason::MissingFile, 0, "cannot write " + path);
  return out;
}

void run_fit(const CliConfig& c, std::ostream& out) {
  const Sample sample = load_csv(c.input, c.column);
  FitResult f;
  std::optional<double> cvmd;
  if (c.alpha) {
    f = fit(*c.family, *c.alpha, sample);
  } else {
    TuningOptions to;
    to.fast = c.fast;
    to.threads = c.threads;
    TuningResult t = select_alpha(*c.family, sample, to);
    f = std::move(t.fit_star);
    cvmd = t.cvmd_star;
  }
  std::vector<std::string> warnings;
  const auto se = try_asymptotic_se(f, warnings);

  if (c.format == "csv") {
    out << "param,estimate,se\n";
    const auto names = param_names(f.family);
    for (std::size_t i = 0; i < f.theta_hat.size(); ++i) out << names[i] << ',' << fmt(f.theta_hat[i]) << ',' << fmt(se[i]) << '\n';
  } else {
    json j = fit_json(f, sample);
    j["se"] = named(f.theta_hat, se);
    if (cvmd) j["cvmd"] = *cvmd;
    for (auto& w : warnings) j["warnings"].push_back(w);
    out << j.dump() << '\n';
  }
  if (!c.plot_data.empty()) {
    auto file = open_output(c.plot_data);
    write_plot_data(file, emit_plot_data(f, sample, c.bins));
  }
}

json tuning_json(const TuningResult& t, const Sample& sample) {
  json curve = json::array();
  for (std::size_t k = 0; k < t.alpha_grid.size(); ++k) curve.push_back({{"alpha", t.alpha_grid[k]}, {"cvmd", t.cvmd_curve[k]}});
  json refined = json::array();
  for (const auto& [a, v] : t.refinements) refined.push_back({{"alpha", a}, {"cvmd", v}});
  return {
      {"family", family_name(t.family)},
      {"alpha_star", t.alpha_star},
      {"cvmd_star", t.cvmd_star},
      {"fit", fit_json(t.fit_star, sample)},
      {"curve", curve},
      {"refinements", refined},
  };
}

void run_tune(const CliConfig& c, std::ostream& out) {
  const Sample sample = load_csv(c.input, c.column);
  TuningOptions to;
  to.fast = c.fast;
  to.threads = c.threads;
  if (c.family) {
    const TuningResult t = select_alpha(*c.family, sample, to);
    out << tuning_json(t, sample).dump() << '\n';
    if (!c.curve.empty()) {
      auto file = open_output(c.curve);
      write_cvmd_csv(file, t);
    }
    return;
  }
  json all = json::array();
  for (Family f : kAllFamilies) all.push_back(tuning_json(select_alpha(f, sample, to), sample));
  out << json{{"results", all}}.dump() << '\n';
}

void run_select(const CliConfig& c, std::ostream& out) {
  const Sample sample = load_csv(c.input, c.column);
  SelectionOptions so;
  so.fast = c.fast;
  so.threads = c.threads;
  const SelectionReport r = select_model(kAllFamilies, sample, so);
  json fams = json::array();
  for (const auto& f : r.families)
    fams.push_back({{"family", family_name(f.family)},
                    {"alpha_star_ric", f.alpha_star_ric},
                    {"ric_min", f.ric_min},
                    {"fit", fit_json(f.fit, sample)}});
  out << json{{"winner", family_name(r.winner)}, {"families", fams}, {"warnings", r.warnings}}.dump() << '\n';
  if (!c.ric_table.empty()) {
    auto file = open_output(c.ric_table);
    write_ric_csv(file, r);
  }
}

void run_are_table(const CliConfig& c, std::ostream& out) {
  const ParamVector theta = theta_or_default(c);
  const std::vector<double> alphas = c.alphas.empty() ? are_table_alphas() : c.alphas;
  write_are_csv(out, are(theta, alphas));
}

void run_influence(const CliConfig& c, std::ostream& out) {
  const ParamVector theta = theta_or_default(c);
  const InfluenceCurve curve(theta, c.alpha.value_or(0.0));
  out << 'y';
  for (auto name : param_names(theta.family())) out << ",if_" << name;
  out << ",norm\n";
  for (double y : influence_grid(theta, c.points)) {
    const auto v = curve(y);
    out << fmt(y);
    double sq = 0.0;
    for (double x : v) {
      out << ',' << fmt(x);
      sq += x * x;
    }
    out << ',' << fmt(std::sqrt(sq)) << '\n';
  }
}

void run_bootstrap(const CliConfig& c, std::ostream& out) {
  const Sample sample = load_csv(c.input, c.column);
  BootstrapOptions bo;
  bo.threads = c.threads;
  const BootstrapResult r = bootstrap_se(*c.family, c.alpha.value_or(0.0), sample, c.replicates, c.seed.value_or(0), bo);
  std::vector<std::string> warnings = r.warnings;
  const auto ase = try_asymptotic_se(r.fit, warnings);
  json j = fit_json(r.fit, sample);
  j["B"] = r.replicates;
  j["seed"] = c.seed.value_or(0);
  j["se_bootstrap"] = named(r.fit.theta_hat, r.se);
  j["se_asymptotic"] = named(r.fit.theta_hat, ase);
  j["failures"] = r.failures;
  for (auto& w : warnings) j["warnings"].push_back(w);
  out << j.dump() << '\n';
  if (!c.replicates_out.empty()) {
    auto file = open_output(c.replicates_out);
    write_replicates_csv(file, r);
  }
}

void run_simulate(const CliConfig& c, std::ostream& out) {
  const ParamVector theta = theta_or_default(c);
  ContaminationScheme scheme;
  scheme.epsilon = c.epsilon;
  scheme.seed = *c.seed;
  if (!c.contaminant_theta.empty()) {
    if (c.contaminant_theta.size() != theta.size())
      throw UsageError("--contaminant-theta must have as many values as --theta");
    scheme.contaminant = ParamVector(theta.family(), c.contaminant_theta);
  } else if (c.point) {
    scheme.contaminant = *c.point;
  } else if (c.epsilon > 0.0) {
    throw UsageError("--epsilon > 0 needs --point or --contaminant-theta");
  }
  const Sample s = simulate_contaminated(theta, scheme, c.n);
  out << "index,value\n";
  char buf[32];
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto res = std::to_chars(buf, buf + sizeof buf, s[i]);
    out << i + 1 << ',';
    out.write(buf, res.ptr - buf) << '\n';
  }
}

struct SeriesOutcome {
  std::string row;
  std::string error;
  ErrorKind kind = ErrorKind::Data;
};

std::string report_row(const PanelSeries& series, const CliConfig& c) {
  if (!series.error.empty()) throw DataError(DataError::Reason::Malformed, 0, series.error);
  const Sample& s = series.sample;
  SelectionOptions so;
  so.fast = c.fast;
  so.threads = 1;
  const SelectionReport sel = select_model(kAllFamilies, s, so);
  TuningOptions to;
  to.fast = c.fast;
  to.threads = 1;
  const TuningResult t = select_alpha(sel.winner, s, to);
  std::vector<std::string> ignored;
  const auto se = try_asymptotic_se(t.fit_star, ignored);
  const auto& th = t.fit_star.theta_hat;
  const bool two = th.size() == 2;
  std::ostringstream row;
  row << series.label << ',' << family_name(sel.winner) << ',' << fmt(t.alpha_star) << ',' << fmt(th[0]) << ','
      << (two ? fmt(th[1]) : "") << ',' << fmt(se[0]) << ',' << (two ? fmt(se[1]) : "") << ',' << fmt(t.cvmd_star) << ','
      << fmt(sel.winning().ric_min) << ',' << fmt(adjusted_median(t.fit_star, s.dry_count(), s.size()));
  return row.str();
}

int run_report(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const std::vector<PanelSeries> panel = load_panel(c.input);
  std::vector<SeriesOutcome> outcomes(panel.size());
  parallel_for(
      panel.size(),
      [&](std::size_t i) {
        try {
          outcomes[i].row = report_row(panel[i], c);
        } catch (const Error& e) {
          outcomes[i].error = e.what();
          outcomes[i].kind = e.kind();
        }
      },
      c.threads);

  out << kReportHeader << '\n';
  std::size_t ok = 0;
  bool any_numerical = false;
  for (std::size_t i = 0; i < panel.size(); ++i) {
    if (outcomes[i].error.empty()) {
      out << outcomes[i].row << '\n';
      ++ok;
    } else {
      any_numerical = any_numerical || outcomes[i].kind == ErrorKind::Numerical;
      err << json{{"warning", "series skipped"}, {"series", panel[i].label}, {"message", outcomes[i].error}}.dump() << '\n';
    }
  }
  if (ok > 0) return kSuccess;
  err << json{{"error", {{"kind", any_numerical ? "numerical" : "data"}, {"message", "no series could be processed"}}}}.dump()
      << '\n';
  return any_numerical ? kNumericalFailure : kDataFailure;
}

void emit_error(std::ostream& err, std::string_view kind, const std::string& message, const DataError* data = nullptr) {
  json e = {{"kind", kind}, {"message", message}};
  if (data && data->row() > 0) e["row"] = data->row();
  err << json{{"error", e}}.dump() << '\n';
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "?";
}

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommands)
    if (n == name) return cmd;
  return std::nullopt;
}

void CliConfig::validate() const {
  const bool needs_family = command == Command::Fit || command == Command::AreTable || command == Command::Influence ||
                            command == Command::Bootstrap || command == Command::Simulate;
  if (needs_family && !family) throw UsageError(std::string(command_name(command)) + " requires --family");
  const bool needs_input = command != Command::AreTable && command != Command::Influence && command != Command::Simulate;
  if (needs_input && input.empty()) throw UsageError(std::string(command_name(command)) + " requires --input");
  if (command == Command::Simulate && !seed) throw UsageError("simulate requires --seed");
  if (command == Command::Tune && !curve.empty() && !family) throw UsageError("--curve needs a single --family");
  if (alpha && !(*alpha >= 0.0 && *alpha <= kMaxAlpha)) throw UsageError("--alpha must lie in [0, 1]");
  if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");
  if (bins < 1) throw UsageError("--bins must be at least 1");
  if (command == Command::Bootstrap && replicates < 2) throw UsageError("--B must be at least 2");
  if (command == Command::Simulate && n < 1) throw UsageError("--n must be at least 1");
  if (command == Command::Influence && points < 2) throw UsageError("--points must be at least 2");
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    std::ofstream file;
    std::ostream* dst = &out;
    if (!config.output.empty()) {
      file = open_output(config.output);
      dst = &file;
    }
    switch (config.command) {
      case Command::Fit: run_fit(config, *dst); break;
      case Command::Tune: run_tune(config, *dst); break;
      case Command::Select: run_select(config, *dst); break;
      case Command::AreTable: run_are_table(config, *dst); break;
      case Command::Influence: run_influence(config, *dst); break;
      case Command::Bootstrap: run_bootstrap(config, *dst); break;
      case Command::Simulate: run_simulate(config, *dst); break;
      case Command::Report: return run_report(config, *dst, err);
    }
    return kSuccess;
  } catch (const UsageError& e) {
    emit_error(err, "usage", e.what());
    return kUsage;
  } catch (const DataError& e) {
    emit_error(err, "data", e.what(), &e);
    return kDataFailure;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Domain: emit_error(err, "domain", e.what()); return kUsage;
      case ErrorKind::Data: emit_error(err, "data", e.what()); return kDataFailure;
      case ErrorKind::Numerical: break;
    }
    emit_error(err, "numerical", e.what());
    return kNumericalFailure;
  } catch (const std::exception& e) {
    emit_error(err, "numerical", e.what());
    return kNumericalFailure;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust minimum density power divergence fitting for positive data", "mdpd"};
  app.require_subcommand(1, 1);

  CliConfig c;
  std::string family;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  double point = 0.0;
  std::vector<CLI::Option*> alpha_opts, seed_opts, point_opts, family_opts;

  const auto add_family = [&](CLI::App* sc) {
    family_opts.push_back(sc->add_option("-f,--family", family, "exponential | gamma | lognormal | weibull"));
  };
  const auto add_alpha = [&](CLI::App* sc) { alpha_opts.push_back(sc->add_option("-a,--alpha", alpha, "Tuning parameter in [0, 1]")); };
  const auto add_input = [&](CLI::App* sc) {
    sc->add_option("-i,--input", c.input, "Input CSV with a header row");
    sc->add_option("-c,--column", c.column, "Column to read")->capture_default_str();
  };
  const auto add_common = [&](CLI::App* sc) {
    sc->add_option("-o,--output", c.output, "Output file (default stdout)");
    sc->add_option("--threads", c.threads, "Worker threads (default RF_THREADS or all cores)");
  };
  const auto add_theta = [&](CLI::App* sc) {
    sc->add_option("--theta", c.theta, "Parameter values, e.g. --theta 5,0.05")->delimiter(',');
  };
  const auto add_seed = [&](CLI::App* sc) { seed_opts.push_back(sc->add_option("-s,--seed", seed, "RNG seed")); };

  std::map<CLI::App*, Command> subs;
  const auto sub = [&](Command cmd, const char* help) {
    CLI::App* sc = app.add_subcommand(std::string(command_name(cmd)), help);
    subs[sc] = cmd;
    add_common(sc);
    return sc;
  };

  auto* fit_cmd = sub(Command::Fit, "Fit one family at a fixed alpha, or at the CVM-tuned alpha when --alpha is absent");
  add_family(fit_cmd);
  add_alpha(fit_cmd);
  add_input(fit_cmd);
  fit_cmd->add_option("--format", c.format, "json | csv")->capture_default_str();
  fit_cmd->add_flag("--fast", c.fast, "Grid-only tuning");
  fit_cmd->add_option("--plot-data", c.plot_data, "Write histogram and fitted-density CSV here");
  fit_cmd->add_option("--bins", c.bins, "Histogram bins")->capture_default_str();

  auto* tune_cmd = sub(Command::Tune, "Select alpha by leave-one-out Cramer-von Mises distance");
  add_family(tune_cmd);
  add_input(tune_cmd);
  tune_cmd->add_flag("--fast", c.fast, "Grid only, no golden-section refinement");
  tune_cmd->add_option("--curve", c.curve, "Write the alpha,cvmd curve CSV here");

  auto* select_cmd = sub(Command::Select, "Robust information criterion across the four families");
  add_input(select_cmd);
  select_cmd->add_flag("--fast", c.fast, "Grid only, no golden-section refinement");
  select_cmd->add_option("--ric-table", c.ric_table, "Write the family,alpha,ric CSV here");

  auto* are_cmd = sub(Command::AreTable, "Asymptotic relative efficiency table");
  add_family(are_cmd);
  add_theta(are_cmd);
  are_cmd->add_option("--alphas", c.alphas, "Alpha values (default 0.1,0.2,0.3,0.4,0.5,0.7,1)")->delimiter(',');

  auto* if_cmd = sub(Command::Influence, "Influence function over a geometric y grid");
  add_family(if_cmd);
  add_theta(if_cmd);
  add_alpha(if_cmd);
  if_cmd->add_option("--points", c.points, "Grid points")->capture_default_str();

  auto* boot_cmd = sub(Command::Bootstrap, "Nonparametric bootstrap standard errors");
  add_family(boot_cmd);
  add_alpha(boot_cmd);
  add_input(boot_cmd);
  add_seed(boot_cmd);
  boot_cmd->add_option("-B,--B", c.replicates, "Bootstrap replicates")->capture_default_str();
  boot_cmd->add_option("--replicates", c.replicates_out, "Write replicate,param,value CSV here");

  auto* sim_cmd = sub(Command::Simulate, "Draw a (contaminated) sample");
  add_family(sim_cmd);
  add_theta(sim_cmd);
  add_seed(sim_cmd);
  sim_cmd->add_option("-n,--n", c.n, "Sample size")->capture_default_str();
  sim_cmd->add_option("--epsilon", c.epsilon, "Contamination proportion in [0, 0.5)")->capture_default_str();
  point_opts.push_back(sim_cmd->add_option("--point", point, "Contamination point y"));
  sim_cmd->add_option("--contaminant-theta", c.contaminant_theta, "Contaminating distribution parameters")->delimiter(',');

  auto* report_cmd = sub(Command::Report, "Per-series pipeline over a wide panel CSV");
  add_input(report_cmd);
  report_cmd->add_flag("--fast", c.fast, "Grid-only tuning and RIC search");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage", e.what());
    return kUsage;
  }

  for (const auto& [sc, cmd] : subs)
    if (sc->parsed()) c.command = cmd;
  const auto given = [](const std::vector<CLI::Option*>& opts) {
    for (auto* o : opts)
      if (o->count() > 0) return true;
    return false;
  };
  if (given(family_opts)) {
    c.family = parse_family(family);
    if (!c.family) {
      emit_error(err, "usage", "unknown family '" + family + "'");
      return kUsage;
    }
  }
  if (given(alpha_opts)) c.alpha = alpha;
  if (given(seed_opts)) c.seed = seed;
  if (given(point_opts)) c.point = point;
  return run(c, out, err);
}

}  // namespace mdpd::cli
