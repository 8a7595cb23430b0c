// Command-line front end: measure one X state, sweep a model parameter,
// run finite-size scaling studies, and run the validation suite.
//
// Exit codes: 0 success, 1 validation or computation failure, 2 bad input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qcrit/qcrit.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct CommonOptions {
  std::string model = "ising";
  double lambda = 0.0;
  double gamma = 1.0;
  double alpha = 0.0;
  double delta = 0.0;
  std::string pair = "same";
  std::string sector = "ground";
  std::string sweep;
  std::vector<int> sites{2001};
  std::vector<std::string> measures{"eof", "qd", "cc", "mid", "chsh"};
  std::string out = "-";
  std::string format = "csv";
  double jump_threshold = 20.0;
  double cusp_threshold = 10.0;
  int median_window = 10;
  unsigned threads = 0;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--model", o.model, "ising | xy | xyt | xxz | lmg")
      ->check(CLI::IsMember({"ising", "xy", "xyt", "xxz", "lmg"}))
      ->capture_default_str();
  app->add_option("--lambda", o.lambda, "transverse field")->capture_default_str();
  app->add_option("--gamma", o.gamma, "XY anisotropy")->capture_default_str();
  app->add_option("--alpha", o.alpha, "three-spin coupling")->capture_default_str();
  app->add_option("--delta", o.delta, "XXZ anisotropy")->capture_default_str();
  app->add_option("--pair", o.pair, "LMG mode pair: same | different")
      ->check(CLI::IsMember({"same", "different"}))
      ->capture_default_str();
  app->add_option("--sector", o.sector, "chain parity sector: ground | periodic | antiperiodic")
      ->check(CLI::IsMember({"ground", "periodic", "antiperiodic"}))
      ->capture_default_str();
  app->add_option("--sweep", o.sweep, "swept parameter as param:lo:hi:step")->required();
  app->add_option("--sites", o.sites, "lattice sizes (odd), comma separated")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--measures", o.measures, "eof,qd,cc,mid,chsh,mi")->delimiter(',')->capture_default_str();
  app->add_option("--out", o.out, "output path, - for stdout")->capture_default_str();
  app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app->add_option("--jump-threshold", o.jump_threshold, "jump detector multiple")->capture_default_str();
  app->add_option("--cusp-threshold", o.cusp_threshold, "cusp detector multiple")->capture_default_str();
  app->add_option("--median-window", o.median_window, "detector neighbourhood per side")->capture_default_str();
  app->add_option("--threads", o.threads, "worker threads, 0 = all cores")->capture_default_str();
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw qcrit::invalid_spec("cannot parse " + what + " '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

qcrit::sweep::SweepConfig make_config(const CommonOptions& o) {
  qcrit::sweep::SweepConfig c;
  c.model = qcrit::parse_model(o.model);
  c.fixed.lambda = o.lambda;
  c.fixed.gamma = o.gamma;
  c.fixed.alpha = o.alpha;
  c.fixed.delta = o.delta;
  c.fixed.mode_pair = qcrit::parse_mode_pair(o.pair);
  c.fixed.sector = qcrit::parse_sector(o.sector);
  const auto parts = split(o.sweep, ':');
  if (parts.size() != 4) throw qcrit::invalid_spec("--sweep expects param:lo:hi:step, got '" + o.sweep + "'");
  c.param = parts[0];
  c.lo = parse_number(parts[1], "sweep lower bound");
  c.hi = parse_number(parts[2], "sweep upper bound");
  c.step = parse_number(parts[3], "sweep step");
  c.sites = o.sites;
  c.measures = o.measures;
  c.detector.jump_threshold = o.jump_threshold;
  c.detector.cusp_threshold = o.cusp_threshold;
  c.detector.window = o.median_window;
  c.threads = o.threads;
  if (!(o.jump_threshold > 0.0) || !(o.cusp_threshold > 0.0) || o.median_window < 1) {
    throw qcrit::invalid_spec("detector thresholds and window must be positive");
  }
  qcrit::sweep::validate(c);
  return c;
}

// Writes through `emit` to a file or stdout.
template <class Emit>
void write_output(const std::string& path, Emit&& emit) {
  if (path == "-") {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path);
  if (!f) throw qcrit::invalid_spec("cannot open output file '" + path + "'");
  emit(f);
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

int cmd_measure(const std::vector<double>& entries, const std::string& format) {
  const qcrit::XState s{entries[0], entries[1], entries[2], entries[3], entries[4], entries[5]};
  const qcrit::MeasureSet m = qcrit::measure_all(s);
  const qcrit::XStateSpectrum sp = qcrit::spectrum(s);
  const double c = qcrit::concurrence(s);
  if (format == "json") {
    nlohmann::ordered_json j;
    j["eof"] = m.eof;
    j["qd"] = m.qd;
    j["cc"] = m.cc;
    j["mid"] = m.mid;
    j["chsh"] = m.chsh;
    j["concurrence"] = c;
    j["mutual_info"] = m.mutual_info;
    j["spectrum"] = sp.values;
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  const auto line = [](const char* k, double v) { std::printf("%-12s %.12g\n", k, v); };
  line("eof", m.eof);
  line("qd", m.qd);
  line("cc", m.cc);
  line("mid", m.mid);
  line("chsh", m.chsh);
  line("concurrence", c);
  line("mutual_info", m.mutual_info);
  std::printf("%-12s %.12g %.12g %.12g %.12g\n", "spectrum", sp.values[0], sp.values[1], sp.values[2],
              sp.values[3]);
  return kOk;
}

int cmd_sweep(const CommonOptions& o, bool derivatives) {
  qcrit::sweep::SweepConfig c = make_config(o);
  c.derivatives = derivatives;
  const qcrit::sweep::ResultTable t = qcrit::sweep::run_sweep(c);
  write_output(o.out, [&](std::ostream& os) {
    if (o.format == "json") {
      qcrit::sweep::write_json(os, t);
    } else {
      qcrit::sweep::write_csv(os, t);
    }
  });
  if (!t.warnings.empty()) {
    std::cerr << t.failed_points << " of " << t.total_points << " points failed\n";
    const std::size_t shown = std::min<std::size_t>(t.warnings.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) std::cerr << "  " << t.warnings[i] << "\n";
    if (shown < t.warnings.size()) std::cerr << "  ...\n";
  }
  return t.failed() ? kFailure : kOk;
}

int cmd_scaling(const CommonOptions& o, const std::vector<int>& orders, const std::string& window,
                const std::string& abscissa) {
  qcrit::sweep::ScalingConfig sc;
  sc.sweep = make_config(o);
  sc.orders = orders;
  sc.abscissa = abscissa == "log10" ? qcrit::crit::Abscissa::log10 : qcrit::crit::Abscissa::ln;
  if (!window.empty()) {
    const auto parts = split(window, ':');
    if (parts.size() != 2) throw qcrit::invalid_spec("--window expects lo:hi, got '" + window + "'");
    sc.window_lo = parse_number(parts[0], "window lower bound");
    sc.window_hi = parse_number(parts[1], "window upper bound");
    if (*sc.window_hi < *sc.window_lo) throw qcrit::invalid_spec("--window is empty");
  }
  const qcrit::sweep::ScalingReport r = qcrit::sweep::run_scaling(sc);
  write_output(o.out, [&](std::ostream& os) {
    if (o.format == "json") {
      qcrit::sweep::write_json(os, r);
    } else {
      qcrit::sweep::write_csv(os, r);
    }
  });
  return kOk;
}

int cmd_validate(const std::vector<std::string>& only, const std::string& fault, const std::string& format) {
  qcrit::validation::Options opt;
  opt.only = only;
  if (fault == "g-sign") opt.providers = qcrit::validation::with_flipped_g_sign(opt.providers);
  const auto results = qcrit::validation::run(opt);
  const bool ok = qcrit::validation::all_passed(results);
  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : results) {
      j.push_back({{"check", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    std::cout << nlohmann::ordered_json{{"passed", ok}, {"checks", j}}.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
    }
    std::cout << (ok ? "all checks passed" : "validation FAILED") << "\n";
  }
  return ok ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation measures and critical-point analysis for exactly solvable spin chains"};
  app.set_config("--config", "", "key = value configuration file; flags override it");
  app.require_subcommand(1);

  auto* measure = app.add_subcommand("measure", "all measures of one X state (u11 u22 u33 u44 u14 u23)");
  std::vector<double> entries;
  std::string measure_format = "text";
  measure->add_option("entries", entries, "u11 u22 u33 u44 u14 u23")->expected(6)->required();
  measure->add_option("--format", measure_format, "text | json")->check(CLI::IsMember({"text", "json"}));

  auto* sweep = app.add_subcommand("sweep", "evaluate measures along a parameter grid");
  CommonOptions sweep_opt;
  bool derivatives = false;
  add_common(sweep, sweep_opt);
  sweep->add_flag("--derivatives", derivatives, "add first and second derivative columns");

  auto* scaling = app.add_subcommand("scaling", "derivative extrema versus N and ln N fits");
  CommonOptions scaling_opt;
  scaling_opt.sites = {51, 101, 501, 2001};
  std::vector<int> orders{1, 2};
  std::string window;
  std::string abscissa = "ln";
  add_common(scaling, scaling_opt);
  scaling->add_option("--orders", orders, "derivative orders")->delimiter(',')->capture_default_str();
  scaling->add_option("--window", window, "restrict extremum search to lo:hi");
  scaling->add_option("--abscissa", abscissa, "ln | log10")->check(CLI::IsMember({"ln", "log10"}));

  auto* validate = app.add_subcommand("validate", "cross-check solvers against independent references");
  std::vector<std::string> only;
  std::string fault;
  std::string validate_format = "text";
  validate->add_option("--only", only, "groups: xstate, chain, ed, xxz, lmg")->delimiter(',');
  validate->add_option("--inject-fault", fault, "deliberately break a solver (g-sign)")
      ->check(CLI::IsMember({"g-sign"}));
  validate->add_option("--format", validate_format, "text | json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*measure) return cmd_measure(entries, measure_format);
    if (*sweep) return cmd_sweep(sweep_opt, derivatives);
    if (*scaling) return cmd_scaling(scaling_opt, orders, window, abscissa);
    if (*validate) return cmd_validate(only, fault, validate_format);
  } catch (const qcrit::invalid_state& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
