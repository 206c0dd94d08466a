// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "thirdassay/conditional.hpp"
#include "thirdassay/distributions.hpp"
#include "thirdassay/estimator.hpp"
#include "thirdassay/gof.hpp"
#include "thirdassay/random_stream.hpp"
#include "thirdassay/threshold.hpp"

using namespace thirdassay;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

const std::string kCli = THIRDASSAY_CLI_PATH;

fs::path work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / fmt::format("thirdassay_acceptance_{}", ::getpid());
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome table1() {
  const double normal[] = {1.645, 1.960, 2.241, 2.576, 2.807};
  const double laplace[] = {1.628, 2.118, 2.608, 3.256, 3.746};
  const double alphas[] = {0.10, 0.05, 0.025, 0.01, 0.005};
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    // Unrounded values against the published three-decimal cells.
    worst = std::max(worst, std::abs(two_sided_quantile(ErrorModel::Normal, alphas[i]) - normal[i]));
    worst = std::max(worst, std::abs(two_sided_quantile(ErrorModel::Laplace, alphas[i]) - laplace[i]));
  }
  const auto rows = tail_thickness_table();
  bool rounded = rows.size() == 5;
  for (std::size_t i = 0; rounded && i < rows.size(); ++i) {
    rounded = std::abs(rows[i].normal - normal[i]) < 1e-12 && std::abs(rows[i].laplace - laplace[i]) < 1e-12;
  }
  return {worst <= 0.0005 && rounded, fmt::format("max |cell - published| = {:.2e}, rounded table exact: {}", worst,
                                                  rounded ? "yes" : "no")};
}

Outcome mass_identity() {
  double worst_g = 0.0;
  double worst_h = 0.0;
  for (ErrorModel m : kAllModels) {
    for (double alpha : {0.01, 0.05, 0.10}) {
      const auto spec = make_conditional_spec(m, alpha);
      worst_g = std::max(worst_g, std::abs(total_g(spec) - alpha / 4.0));
      worst_h = std::max(worst_h, std::abs(total_h(spec) - 1.0));
    }
  }
  return {worst_g <= 1e-6 && worst_h <= 1e-6,
          fmt::format("max |int g - alpha/4| = {:.2e}, max |int h - 1| = {:.2e}", worst_g, worst_h)};
}

Outcome oracle_equivalence() {
  double worst = 0.0;
  for (ErrorModel m : kAllModels) {
    const auto spec = make_conditional_spec(m, 0.05);
    for (double x : {-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0}) {
      worst = std::max(worst, std::abs(g_1d(spec, x) - g_2d(spec, x)));
    }
  }
  return {worst <= 1e-8, fmt::format("max |g_1d - g_2d| over 18 probes = {:.2e}", worst)};
}

Outcome simulator_vs_quadrature() {
  double worst = 0.0;
  for (ErrorModel m : kAllModels) {
    const auto spec = make_conditional_spec(m, 0.05);
    const auto grid = make_grid(-8.0, 8.0, 0.002);
    const DensityCurve c = curve(spec, grid);
    const auto cdf = [&](double x) {
      if (x <= grid.front()) return 0.0;
      if (x >= grid.back()) return 1.0;
      const auto i = static_cast<std::size_t>((x - grid.front()) / 0.002);
      const std::size_t j = std::min(i, grid.size() - 2);
      const double t = (x - grid[j]) / (grid[j + 1] - grid[j]);
      return 1.0 - ((1.0 - t) * c.exceedance[j] + t * c.exceedance[j + 1]);
    };
    auto draws = conditional_sample(m, 0.05, 1'000'000, 2024 + static_cast<std::uint64_t>(m)).values;
    std::sort(draws.begin(), draws.end());
    worst = std::max(worst, sup_distance(draws, cdf));
  }
  return {worst <= 0.005, fmt::format("max sup-distance over both models = {:.5f} (10^6 draws each)", worst)};
}

Outcome shapes() {
  const auto grid = make_grid(-4.0, 4.0, 0.01);
  const auto normal_spec = make_conditional_spec(ErrorModel::Normal, 0.05);
  const auto laplace_spec = make_conditional_spec(ErrorModel::Laplace, 0.05);
  const DensityCurve normal = curve(normal_spec, grid);
  const DensityCurve laplace = curve(laplace_spec, grid);
  const std::size_t zero = 400;

  double normal_peak = 0.0;
  double normal_mode = 0.0;
  for (std::size_t i = zero + 1; i < grid.size() && grid[i] < 2.0; ++i) {
    if (normal.h[i] > normal_peak) {
      normal_peak = normal.h[i];
      normal_mode = grid[i];
    }
  }
  const bool bimodal = normal_peak > normal.h[zero];
  const auto laplace_top = std::max_element(laplace.h.begin(), laplace.h.end()) - laplace.h.begin();
  const bool unimodal = grid[static_cast<std::size_t>(laplace_top)] == 0.0;

  const double e0n = exceedance(normal_spec, 0.0);
  const double e0l = exceedance(laplace_spec, 0.0);
  const bool half = std::abs(e0n - 0.5) <= 1e-6 && std::abs(e0l - 0.5) <= 1e-6;
  bool ordered = true;
  std::string gaps;
  for (double x : {0.5, 1.0}) {
    const double n = exceedance(normal_spec, x);
    const double l = exceedance(laplace_spec, x);
    ordered = ordered && n > l;
    gaps += fmt::format(" P(>{:g}) {:.4f} vs {:.4f};", x, n, l);
  }
  return {bimodal && unimodal && half && ordered,
          fmt::format("normal h(0)={:.4f} < h({:.2f})={:.4f}; laplace argmax x={:g}; exceedance(0)-0.5 = {:.1e}/{:.1e};{}",
                      normal.h[zero], normal_mode, normal_peak, grid[static_cast<std::size_t>(laplace_top)],
                      e0n - 0.5, e0l - 0.5, gaps)};
}

Outcome type_one() {
  const std::uint64_t n = 1'000'000;
  bool pass = true;
  std::string detail;
  for (double alpha : {0.01, 0.05}) {
    for (ErrorModel m : kAllModels) {
      const auto s = simulate(m, alpha, n, 600 + static_cast<std::uint64_t>(alpha * 1000) + static_cast<std::uint64_t>(m));
      const double se = std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(n));
      const double z = (s.rejection_rate - alpha) / se;
      pass = pass && std::abs(z) <= 3.0;
      detail += fmt::format("{} a={:g}: {:.5f} (z={:+.2f}) ", to_string(m), alpha, s.rejection_rate, z);
    }
  }
  return {pass, detail};
}

std::vector<double> assay_differences(ErrorModel m, std::size_t n, RandomStream stream) {
  std::vector<double> d(n);
  for (auto& v : d) {
    const double x1 = 0.4 * draw(m, stream);
    const double x2 = 0.4 * draw(m, stream);
    v = x1 - x2;
  }
  return d;
}

Outcome gof_calibration() {
  const RandomStream root(7007);
  bool pass = true;
  std::string detail;
  for (ErrorModel m : kAllModels) {
    std::vector<double> ps;
    for (std::uint64_t k = 0; k < 200; ++k) {
      const auto d = assay_differences(m, 199, root.split(1000 * static_cast<std::uint64_t>(m) + k));
      const auto z = standardize(d, 0.4);
      ps.push_back(mc_pvalue(m, 199, t_n(z, m), 2000, 90000 + 1000 * static_cast<std::uint64_t>(m) + k));
    }
    std::sort(ps.begin(), ps.end());
    const double ks = sup_distance(ps, [](double u) { return std::clamp(u, 0.0, 1.0); });
    pass = pass && ks <= 0.12;
    detail += fmt::format("{} null KS={:.4f}; ", to_string(m), ks);
  }
  int laplace_wins = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto d = assay_differences(ErrorModel::Laplace, 199, root.split(5000 + k));
    const auto reports = gof_report(d, 0.4, 2000, 70000 + k);
    laplace_wins += reports[1].p_value > reports[0].p_value;
  }
  pass = pass && laplace_wins >= 80;
  detail += fmt::format("laplace p > normal p in {}/100 Laplace datasets", laplace_wins);
  return {pass, detail};
}

Outcome gof_performance() {
  const fs::path data = work_dir() / "perf.csv";
  if (shell(fmt::format("{} gen-data -m laplace -n 199 --seed 11 -o {}", kCli, data.string())) != 0) {
    return {false, "gen-data failed"};
  }
  const auto start = std::chrono::steady_clock::now();
  const int code = shell(fmt::format("{} gof -i {} --reps 100000 --seed 11 -o {}", kCli, data.string(),
                                     (work_dir() / "perf.json").string()));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {code == 0 && seconds < 60.0, fmt::format("gof n=199 reps=100000 took {:.2f} s", seconds)};
}

Outcome determinism() {
  const fs::path dir = work_dir();
  const fs::path data = dir / "det.csv";
  shell(fmt::format("{} gen-data -m laplace --seed 5 -o {}", kCli, data.string()));
  struct Case {
    std::string name;
    std::string args;  // {dir} is replaced by the run directory
  };
  const std::vector<Case> cases = {
      {"table1", "table1"},
      {"threshold", "threshold"},
      {"pdf", "pdf"},
      {"density", "density --out-dir {dir}"},
      {"exceedance", "exceedance"},
      {"simulate", "simulate --seed 5 --out-dir {dir}"},
      {"gof", "gof -i " + data.string() + " --seed 5"},
      {"gen-data", "gen-data -m normal --seed 5"},
  };
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path run_dir = dir / fmt::format("{}_{}", c.name, run);
      fs::create_directories(run_dir);
      std::string args = c.args;
      if (const auto pos = args.find("{dir}"); pos != std::string::npos) args.replace(pos, 5, run_dir.string());
      const fs::path stdout_file = run_dir / "stdout";
      if (shell(fmt::format("{} {} > {}", kCli, args, stdout_file.string())) != 0) pass = false;
      // Compare stdout with run-specific paths masked, then every file written.
      std::string text = slurp(stdout_file);
      for (auto pos = text.find(run_dir.string()); pos != std::string::npos; pos = text.find(run_dir.string())) {
        text.replace(pos, run_dir.string().size(), "<dir>");
      }
      outputs[run] = text;
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(run_dir)) {
        if (entry.path().filename() != "stdout") files.push_back(entry.path().filename());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) outputs[run] += "\n--" + f.string() + "\n" + slurp(run_dir / f);
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    pass = pass && same;
    detail += fmt::format("{}:{} ", c.name, same ? "identical" : "DIFFERENT");
  }
  return {pass, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
    double limit_seconds;  // 0 means no time bound
  };
  const std::vector<Criterion> criteria = {
      {"C1 tail-thickness table", table1, 1.0},
      {"C2 mass identity", mass_identity, 30.0},
      {"C3 g_1d vs g_2d", oracle_equivalence, 120.0},
      {"C4 simulator vs quadrature", simulator_vs_quadrature, 120.0},
      {"C5 shape and exceedance", shapes, 0.0},
      {"C6 type-I calibration", type_one, 0.0},
      {"C7 goodness-of-fit calibration", gof_calibration, 0.0},
      {"C8 goodness-of-fit runtime", gof_performance, 60.0},
      {"C9 determinism", determinism, 0.0},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && seconds >= c.limit_seconds) {
      o.pass = false;
      o.detail += fmt::format(" [over the {:g} s limit]", c.limit_seconds);
    }
    failures += !o.pass;
    fmt::print("{} {:<32} ({:7.2f} s)  {}\n", o.pass ? "PASS" : "FAIL", c.name, seconds, o.detail);
    std::fflush(stdout);
  }
  fs::remove_all(work_dir());
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
