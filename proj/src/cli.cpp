#include "thirdassay/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "thirdassay/conditional.hpp"
#include "thirdassay/errors.hpp"
#include "thirdassay/estimator.hpp"
#include "thirdassay/gof.hpp"
#include "thirdassay/random_stream.hpp"
#include "thirdassay/threshold.hpp"

namespace thirdassay::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSimulations = 1'000'000;
constexpr std::uint64_t kDefaultBatches = 199;

std::string num(double v) { return fmt::format("{:.10g}", v); }

// Rounds to 10 significant digits so JSON output carries the same precision as the CSVs.
double json_num(double v) { return std::stod(num(v)); }

std::vector<ErrorModel> selected_models(const RunConfig& c) {
  if (c.model) return {*c.model};
  return {kAllModels.begin(), kAllModels.end()};
}

ConditionalOptions conditional_options(const RunConfig& c) {
  ConditionalOptions o;
  // tol bounds each h value: h = (2/alpha)(g(x) + g(-x)).
  o.density_tol = c.tol * c.alpha / 8.0;
  o.probability_tol = c.tol;
  o.evaluation_budget = c.max_evals;
  return o;
}

// Writes to --output when given, otherwise to `out`.
template <class Writer>
void emit(const RunConfig& c, std::ostream& out, Writer&& write) {
  if (c.output.empty()) {
    write(out);
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) throw InputError("cannot open output file " + c.output);
  write(file);
  if (!file) throw InputError("failed writing " + c.output);
}

std::ofstream open_in_dir(const std::string& dir, const std::string& name, std::string& path) {
  std::filesystem::create_directories(dir);
  path = (std::filesystem::path(dir) / name).string();
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open output file " + path);
  return file;
}

void write_table1(const RunConfig& c, std::ostream& os) {
  const auto rows = tail_thickness_table();
  if (c.markdown) {
    os << "| alpha | normal | laplace |\n|---|---|---|\n";
    for (const auto& r : rows) os << fmt::format("| {:g} | {:.3f} | {:.3f} |\n", r.alpha, r.normal, r.laplace);
    return;
  }
  os << "alpha,normal,laplace\n";
  for (const auto& r : rows) os << fmt::format("{:g},{:.3f},{:.3f}\n", r.alpha, r.normal, r.laplace);
}

void write_threshold(const RunConfig& c, std::ostream& os) {
  os << "model,alpha,r,two_sided_quantile\n";
  for (ErrorModel m : selected_models(c)) {
    const Threshold t = r_of_alpha(m, c.alpha);
    os << to_string(m) << ',' << num(c.alpha) << ',' << num(t.r) << ',' << num(two_sided_quantile(m, c.alpha))
       << '\n';
  }
}

void write_pdf(const RunConfig& c, std::ostream& os) {
  const auto models = selected_models(c);
  os << 'x';
  for (ErrorModel m : models) os << ',' << to_string(m);
  os << '\n';
  for (double x : make_grid(c.grid_min, c.grid_max, c.grid_step)) {
    os << num(x);
    for (ErrorModel m : models) os << ',' << num(pdf(m, x));
    os << '\n';
  }
}

int run_density(const RunConfig& c, std::ostream& out) {
  const auto grid = make_grid(c.grid_min, c.grid_max, c.grid_step);
  const auto models = selected_models(c);
  for (ErrorModel m : models) {
    const DensityCurve dc = curve(make_conditional_spec(m, c.alpha, conditional_options(c)), grid);
    const auto write = [&dc](std::ostream& os) {
      os << "x,g_plus,g_minus,h,exceedance\n";
      for (std::size_t i = 0; i < dc.xs.size(); ++i) {
        os << num(dc.xs[i]) << ',' << num(dc.g_plus[i]) << ',' << num(dc.g_minus[i]) << ',' << num(dc.h[i]) << ','
           << num(dc.exceedance[i]) << '\n';
      }
    };
    if (!c.output.empty() && models.size() == 1) {
      emit(c, out, write);
      continue;
    }
    std::string path;
    auto file = open_in_dir(c.out_dir, fmt::format("density_{}.csv", to_string(m)), path);
    write(file);
    out << path << '\n';
  }
  return kExitOk;
}

int run_exceedance(const RunConfig& c, std::ostream& out) {
  const auto grid = make_grid(c.grid_min, c.grid_max, c.grid_step);
  const auto models = selected_models(c);
  std::vector<std::vector<double>> columns;
  for (ErrorModel m : models) {
    columns.push_back(curve(make_conditional_spec(m, c.alpha, conditional_options(c)), grid).exceedance);
  }
  emit(c, out, [&](std::ostream& os) {
    os << 'x';
    for (ErrorModel m : models) os << ',' << to_string(m);
    os << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
      os << num(grid[i]);
      for (const auto& col : columns) os << ',' << num(col[i]);
      os << '\n';
    }
  });
  return kExitOk;
}

int run_simulate(const RunConfig& c, std::ostream& out) {
  const std::uint64_t n = c.samples.value_or(kDefaultSimulations);
  Json doc = Json::object();
  for (ErrorModel m : selected_models(c)) {
    const SimulationSummary s = simulate(m, c.alpha, n, c.seed);
    doc[std::string(to_string(m))] = Json{
        {"model", to_string(m)},
        {"alpha", json_num(s.alpha)},
        {"r", json_num(s.r)},
        {"n", s.n},
        {"seed", s.seed},
        {"rejections", s.rejections},
        {"rejection_rate", json_num(s.rejection_rate)},
        {"conditional_count", s.conditional_samples.size()},
        {"mean", json_num(s.mean)},
        {"variance", json_num(s.variance)},
    };
    std::string path;
    auto file = open_in_dir(c.out_dir, fmt::format("histogram_{}.csv", to_string(m)), path);
    file << "bin_center,count,density\n";
    for (const auto& b : centered_histogram(s.conditional_samples, c.bin_width)) {
      file << num(b.center) << ',' << b.count << ',' << num(b.density) << '\n';
    }
    doc[std::string(to_string(m))]["histogram"] = path;
  }
  emit(c, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return kExitOk;
}

int run_gof(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.input.empty()) throw InputError("gof requires --input");
  std::ifstream in(c.input, std::ios::binary);
  if (!in) throw InputError("cannot open input file " + c.input);
  std::vector<std::string> warnings;
  const auto differences = read_differences(in, c.diff_column, warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';

  const auto reports = gof_report(differences, c.sigma, c.reps, c.seed);
  Json doc = Json::object();
  doc["n"] = reports[0].n;
  doc["sigma"] = json_num(c.sigma);
  doc["sample_mean"] = json_num(reports[0].sample_mean);
  doc["sample_sd"] = json_num(reports[0].sample_sd);
  doc["reports"] = Json::array();
  for (const auto& r : reports) {
    doc["reports"].push_back(Json{
        {"model", to_string(r.model)},
        {"t_n", json_num(r.t_n)},
        {"p_value", json_num(r.p_value)},
        {"n", r.n},
        {"reps", r.reps},
        {"seed", r.seed},
        {"sigma", json_num(r.sigma)},
        {"sample_mean", json_num(r.sample_mean)},
        {"sample_sd", json_num(r.sample_sd)},
    });
  }
  emit(c, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return kExitOk;
}

int run_gen_data(const RunConfig& c, std::ostream& out) {
  if (!c.model) throw InputError("gen-data requires --model");
  const std::uint64_t n = c.samples.value_or(kDefaultBatches);
  RandomStream stream(c.seed);
  emit(c, out, [&](std::ostream& os) {
    os << "x1,x2\n";
    for (std::uint64_t i = 0; i < n; ++i) {
      const double x1 = c.mean + c.sigma * draw(*c.model, stream);
      const double x2 = c.mean + c.sigma * draw(*c.model, stream);
      os << num(x1) << ',' << num(x2) << '\n';
    }
  });
  return kExitOk;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text, std::size_t line_no) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v)) {
    throw InputError(fmt::format("line {}: '{}' is not a finite number", line_no, t));
  }
  return v;
}

}  // namespace

std::vector<double> read_differences(std::istream& in, bool diff_column, std::vector<std::string>& warnings) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty()) header = split_fields(line);
  }
  for (auto& h : header) h = trim(h);
  const std::vector<std::string> expected =
      diff_column ? std::vector<std::string>{"diff"} : std::vector<std::string>{"x1", "x2"};
  if (header.size() < expected.size() || !std::equal(expected.begin(), expected.end(), header.begin())) {
    throw InputError(diff_column ? "input header must start with 'diff'" : "input header must start with 'x1,x2'");
  }
  if (header.size() > expected.size()) {
    warnings.push_back(fmt::format("ignoring {} extra column(s)", header.size() - expected.size()));
  }

  std::vector<double> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() < expected.size()) {
      throw InputError(fmt::format("line {}: expected {} field(s)", line_no, expected.size()));
    }
    if (diff_column) {
      out.push_back(parse_number(fields[0], line_no));
    } else {
      out.push_back(parse_number(fields[0], line_no) - parse_number(fields[1], line_no));
    }
  }
  if (out.empty()) throw InputError("input contains no data rows");
  return out;
}

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Conditional third-assay estimator: densities, simulation and goodness of fit"};
  app.require_subcommand(1);
  RunConfig c;
  std::string model_name;

  const auto add_model = [&](CLI::App* sub) {
    sub->add_option("-m,--model", model_name, "normal or laplace (default: both)")
        ->check(CLI::IsMember({"normal", "laplace"}));
  };
  const auto add_alpha = [&](CLI::App* sub) {
    sub->add_option("-a,--alpha", c.alpha, "rejection rate")->capture_default_str();
  };
  const auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", c.output, "output file (default stdout)"); };
  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "random seed")->envname(kSeedEnvVar)->capture_default_str();
  };
  const auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--grid-min", c.grid_min)->capture_default_str();
    sub->add_option("--grid-max", c.grid_max)->capture_default_str();
    sub->add_option("--grid-step", c.grid_step)->capture_default_str();
    sub->add_option("--tol", c.tol, "absolute tolerance on density values")->capture_default_str();
    sub->add_option("--max-evals", c.max_evals, "quadrature evaluations allowed per pass")->capture_default_str();
  };

  auto* table1 = app.add_subcommand("table1", "two-sided quantiles of a single observation");
  table1->add_flag("--markdown", c.markdown, "emit a markdown table instead of CSV");
  add_output(table1);

  auto* threshold = app.add_subcommand("threshold", "difference threshold r(alpha)");
  add_model(threshold);
  add_alpha(threshold);
  add_output(threshold);

  auto* pdf_cmd = app.add_subcommand("pdf", "standardized error densities on a grid");
  add_model(pdf_cmd);
  pdf_cmd->add_option("--grid-min", c.grid_min)->capture_default_str();
  pdf_cmd->add_option("--grid-max", c.grid_max)->capture_default_str();
  pdf_cmd->add_option("--grid-step", c.grid_step)->capture_default_str();
  add_output(pdf_cmd);

  auto* density = app.add_subcommand("density", "g, g(-x), h and exceedance on a grid, one CSV per model");
  add_model(density);
  add_alpha(density);
  add_grid(density);
  add_output(density);
  density->add_option("--out-dir", c.out_dir)->capture_default_str();

  auto* exceed = app.add_subcommand("exceedance", "P(estimate > x | rejection) on a grid");
  add_model(exceed);
  add_alpha(exceed);
  add_grid(exceed);
  add_output(exceed);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo runs of the protocol");
  add_model(sim);
  add_alpha(sim);
  add_seed(sim);
  add_output(sim);
  sim->add_option("-n,--n,--samples", c.samples, "protocol executions (default 1000000)");
  sim->add_option("--bin-width", c.bin_width)->capture_default_str();
  sim->add_option("--out-dir", c.out_dir, "directory for histogram CSVs")->capture_default_str();

  auto* gof = app.add_subcommand("gof", "weighted KS test of paired assays against both error laws");
  gof->add_option("-i,--input", c.input, "CSV with header x1,x2 (or diff)")->required();
  gof->add_flag("--diff-column", c.diff_column, "input has a single 'diff' column");
  gof->add_option("--sigma", c.sigma, "prescribed assay standard deviation")->capture_default_str();
  gof->add_option("--reps", c.reps, "Monte Carlo replicates")->capture_default_str();
  add_seed(gof);
  add_output(gof);

  auto* gen = app.add_subcommand("gen-data", "synthetic paired assays");
  add_model(gen);
  gen->add_option("-n,--n,--samples", c.samples, "number of batches (default 199)");
  gen->add_option("--sigma", c.sigma)->capture_default_str();
  gen->add_option("--mean", c.mean, "true value")->capture_default_str();
  add_seed(gen);
  add_output(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream text;
    std::ostringstream error;
    const int code = app.exit(e, text, error);
    if (code == 0) throw HelpRequested(text.str());
    throw UsageError(error.str().empty() ? e.what() : error.str());
  }

  if (!model_name.empty()) c.model = parse_model(model_name);
  if (*table1) c.command = Command::Table1;
  if (*threshold) c.command = Command::Threshold;
  if (*pdf_cmd) c.command = Command::Pdf;
  if (*density) c.command = Command::Density;
  if (*exceed) c.command = Command::Exceedance;
  if (*sim) c.command = Command::Simulate;
  if (*gof) c.command = Command::Gof;
  if (*gen) c.command = Command::GenData;
  return c;
}

void validate(const RunConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw DomainError("--alpha must lie in (0, 1)");
  if (!(c.sigma > 0.0) || !std::isfinite(c.sigma)) throw DomainError("--sigma must be positive");
  if (!(c.grid_min < c.grid_max)) throw DomainError("--grid-min must be below --grid-max");
  if (!(c.grid_step > 0.0)) throw DomainError("--grid-step must be positive");
  if (!(c.tol > 0.0)) throw DomainError("--tol must be positive");
  if (!(c.bin_width > 0.0)) throw DomainError("--bin-width must be positive");
  if (c.max_evals == 0) throw DomainError("--max-evals must be at least 1");
  if (c.reps == 0) throw DomainError("--reps must be at least 1");
  if (c.samples && *c.samples == 0) throw DomainError("--n must be at least 1");
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    switch (c.command) {
      case Command::Table1:
        emit(c, out, [&](std::ostream& os) { write_table1(c, os); });
        return kExitOk;
      case Command::Threshold:
        emit(c, out, [&](std::ostream& os) { write_threshold(c, os); });
        return kExitOk;
      case Command::Pdf:
        emit(c, out, [&](std::ostream& os) { write_pdf(c, os); });
        return kExitOk;
      case Command::Density:
        return run_density(c, out);
      case Command::Exceedance:
        return run_exceedance(c, out);
      case Command::Simulate:
        return run_simulate(c, out);
      case Command::Gof:
        return run_gof(c, out, err);
      case Command::GenData:
        return run_gen_data(c, out);
    }
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (best estimate " << num(e.best_estimate()) << ")\n";
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << e.what();
    return kExitUsage;
  }
  try {
    validate(config);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run(config, out, err);
}

}  // namespace thirdassay::cli
