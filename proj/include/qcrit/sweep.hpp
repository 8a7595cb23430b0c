#pragma once

// Parameter sweeps and finite-size scaling studies over the model solvers,
// with CSV and JSON export. Points are evaluated on a worker pool and
// gathered in grid order, so output never depends on scheduling.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <exception>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "qcrit/criticality.hpp"
#include "qcrit/error.hpp"
#include "qcrit/model.hpp"

namespace qcrit::sweep {

inline constexpr const char* kVersion = "1.0.0";
// A sweep is reported as failed when more than this fraction of points fail.
inline constexpr double kFailureFraction = 0.01;

struct SweepConfig {
  Model model = Model::ising;
  ModelPoint fixed;
  std::string param = "lambda";
  double lo = 0.0;
  double hi = 2.0;
  double step = 1e-3;
  std::vector<int> sites{2001};
  std::vector<std::string> measures{"eof", "qd", "cc", "mid", "chsh"};
  bool derivatives = false;
  crit::DetectorOptions detector;
  unsigned threads = 0;  // 0 = hardware concurrency
};

using Cell = std::optional<double>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
  std::vector<std::string> warnings;
  std::size_t failed_points = 0;
  std::size_t total_points = 0;

  bool failed() const {
    return total_points > 0 &&
           static_cast<double>(failed_points) > kFailureFraction * static_cast<double>(total_points);
  }
};

inline void validate(const SweepConfig& c) {
  check_parameter(c.model, c.param);
  if (!std::isfinite(c.lo) || !std::isfinite(c.hi) || !std::isfinite(c.step)) {
    throw invalid_spec("sweep range must be finite");
  }
  if (!(c.step > 0.0)) throw invalid_spec("sweep step must be positive");
  if (c.hi < c.lo) throw invalid_spec("sweep range is empty (hi < lo)");
  if (c.measures.empty()) throw invalid_spec("no measures selected");
  for (const auto& m : c.measures) check_measure(m);
  if (uses_sites(c.model)) {
    if (c.sites.empty()) throw invalid_spec("no lattice sizes given");
    for (int n : c.sites) chain::check(chain::ChainSpec{0.0, 1.0, 0.0, n});
  }
}

// lo + i * step for i = 0 .. floor((hi - lo) / step), endpoints inclusive up
// to rounding.
inline std::vector<double> grid(double lo, double hi, double step) {
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo + static_cast<double>(i) * step;
  return g;
}

inline std::vector<int> effective_sites(const SweepConfig& c) {
  return uses_sites(c.model) ? c.sites : std::vector<int>{0};
}

// Runs fn(i) for i in [0, n) on a pool of worker threads.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Everything that determines the data rows, in a fixed textual form.
inline std::string canonical(const SweepConfig& c, const std::string& command) {
  std::ostringstream os;
  os << "command=" << command << ";model=" << to_string(c.model) << ";param=" << c.param
     << ";lo=" << format_double(c.lo) << ";hi=" << format_double(c.hi) << ";step=" << format_double(c.step);
  for (auto p : parameters_of(c.model)) {
    if (p == c.param) continue;
    ModelPoint f = c.fixed;
    os << ";" << p << "=" << format_double(parameter_ref(f, p));
  }
  if (c.model == Model::lmg) os << ";pair=" << to_string(c.fixed.mode_pair);
  if (uses_sites(c.model)) {
    os << ";sector=" << to_string(c.fixed.sector) << ";sites=";
    for (int n : c.sites) os << n << ",";
  }
  os << ";measures=";
  for (const auto& m : c.measures) os << m << ",";
  os << ";derivatives=" << c.derivatives << ";jump=" << format_double(c.detector.jump_threshold)
     << ";cusp=" << format_double(c.detector.cusp_threshold) << ";window=" << c.detector.window;
  return os.str();
}

inline nlohmann::ordered_json base_metadata(const SweepConfig& c, const std::string& command) {
  nlohmann::ordered_json m;
  m["tool"] = "qcrit";
  m["version"] = kVersion;
  m["command"] = command;
  m["model"] = std::string(to_string(c.model));
  m["parameter"] = c.param;
  m["range"] = {c.lo, c.hi, c.step};
  for (auto p : parameters_of(c.model)) {
    if (p == c.param) continue;
    ModelPoint f = c.fixed;
    m[std::string(p)] = parameter_ref(f, p);
  }
  if (c.model == Model::lmg) m["mode_pair"] = std::string(to_string(c.fixed.mode_pair));
  if (uses_sites(c.model)) {
    m["sector"] = std::string(to_string(c.fixed.sector));
    m["sites"] = c.sites;
  }
  m["measures"] = c.measures;
  m["config_hash"] = hex(fnv1a(canonical(c, command)));
  m["generated_at"] = utc_timestamp();
  return m;
}

namespace detail {

struct PointResult {
  std::optional<Evaluation> eval;
  std::string error;
};

inline std::vector<PointResult> evaluate_grid(const SweepConfig& c, const std::vector<double>& xs,
                                              const std::vector<int>& sites) {
  std::vector<PointResult> out(xs.size() * sites.size());
  parallel_for(out.size(), c.threads, [&](std::size_t idx) {
    ModelPoint p = c.fixed;
    p.n_sites = sites[idx / xs.size()];
    parameter_ref(p, c.param) = xs[idx % xs.size()];
    try {
      out[idx].eval = evaluate(c.model, p);
    } catch (const std::exception& e) {
      out[idx].error = e.what();
    }
  });
  return out;
}

// Maximal runs [begin, end) of valid entries.
inline std::vector<std::pair<std::size_t, std::size_t>> valid_runs(const std::vector<bool>& ok) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t i = 0;
  while (i < ok.size()) {
    if (!ok[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < ok.size() && ok[j]) ++j;
    runs.emplace_back(i, j);
    i = j;
  }
  return runs;
}

}  // namespace detail

inline ResultTable run_sweep(const SweepConfig& c) {
  validate(c);
  const std::vector<double> xs = grid(c.lo, c.hi, c.step);
  const std::vector<int> sites = effective_sites(c);
  const std::vector<detail::PointResult> results = detail::evaluate_grid(c, xs, sites);

  ResultTable t;
  t.columns = {c.param, "N", "u11", "u22", "u33", "u44", "u14", "u23"};
  for (const auto& m : c.measures) t.columns.push_back(m);
  for (const auto& m : c.measures) {
    t.columns.push_back(m + "_jump");
    t.columns.push_back(m + "_cusp");
  }
  if (c.derivatives) {
    for (const auto& m : c.measures) {
      t.columns.push_back("d1_" + m);
      t.columns.push_back("d2_" + m);
    }
  }
  const std::size_t nm = c.measures.size();
  const std::size_t flag_col = 8 + nm;
  const std::size_t deriv_col = flag_col + 2 * nm;

  for (std::size_t si = 0; si < sites.size(); ++si) {
    const std::size_t base = si * xs.size();
    const std::size_t first_row = t.rows.size();
    std::vector<bool> ok(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto& r = results[base + i];
      std::vector<Cell> row(t.columns.size());
      row[0] = xs[i];
      if (uses_sites(c.model)) row[1] = static_cast<double>(sites[si]);
      ++t.total_points;
      ok[i] = r.eval.has_value();
      if (r.eval) {
        const XState& s = r.eval->state;
        row[2] = s.u11;
        row[3] = s.u22;
        row[4] = s.u33;
        row[5] = s.u44;
        row[6] = s.u14;
        row[7] = s.u23;
        for (std::size_t k = 0; k < nm; ++k) row[8 + k] = measure_value(r.eval->measures, c.measures[k]);
      } else {
        ++t.failed_points;
        std::ostringstream os;
        os << c.param << "=" << format_double(xs[i]);
        if (uses_sites(c.model)) os << " N=" << sites[si];
        os << ": " << r.error;
        t.warnings.push_back(os.str());
      }
      t.rows.push_back(std::move(row));
    }

    // Flags and derivatives per contiguous run of valid points.
    for (const auto& [b, e] : detail::valid_runs(ok)) {
      for (std::size_t i = b; i < e; ++i) {
        for (std::size_t k = 0; k < nm; ++k) {
          t.rows[first_row + i][flag_col + 2 * k] = 0.0;
          t.rows[first_row + i][flag_col + 2 * k + 1] = 0.0;
        }
      }
      if (e - b < crit::kMinPoints) continue;
      for (std::size_t k = 0; k < nm; ++k) {
        crit::Series s;
        s.name = c.measures[k];
        for (std::size_t i = b; i < e; ++i) {
          s.x.push_back(xs[i]);
          s.y.push_back(*t.rows[first_row + i][8 + k]);
        }
        for (const auto& sig : crit::detect_jump_or_cusp(s, c.detector)) {
          const std::size_t col = flag_col + 2 * k + (sig.kind == crit::SignalKind::jump ? 0 : 1);
          for (std::size_t i = b; i < e; ++i) {
            if (std::abs(xs[i] - sig.location) <= 0.5 * c.step * (1.0 + 1e-9)) {
              t.rows[first_row + i][col] = 1.0;
            }
          }
        }
        if (c.derivatives) {
          const crit::Series d1 = crit::derivative(s, 1);
          const crit::Series d2 = crit::derivative(s, 2);
          for (std::size_t i = b; i < e; ++i) {
            t.rows[first_row + i][deriv_col + 2 * k] = d1.y[i - b];
            t.rows[first_row + i][deriv_col + 2 * k + 1] = d2.y[i - b];
          }
        }
      }
    }
  }

  t.metadata = base_metadata(c, "sweep");
  t.metadata["points"] = t.total_points;
  t.metadata["failed_points"] = t.failed_points;
  return t;
}

// One measure's series at one N, failing on any bad point.
inline crit::Series series(const SweepConfig& c, const std::string& measure, int n_sites) {
  SweepConfig one = c;
  one.sites = {n_sites};
  one.measures = {measure};
  validate(one);
  const std::vector<double> xs = grid(c.lo, c.hi, c.step);
  const auto results = detail::evaluate_grid(one, xs, effective_sites(one));
  crit::Series s;
  s.name = measure;
  s.model = std::string(to_string(c.model));
  s.n_sites = uses_sites(c.model) ? n_sites : 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!results[i].eval) {
      throw analysis_error(c.param + "=" + format_double(xs[i]) + ": " + results[i].error);
    }
    s.x.push_back(xs[i]);
    s.y.push_back(measure_value(results[i].eval->measures, measure));
  }
  return s;
}

struct ScalingConfig {
  SweepConfig sweep;
  std::vector<int> orders{1, 2};
  std::optional<double> window_lo;
  std::optional<double> window_hi;
  crit::Abscissa abscissa = crit::Abscissa::ln;
};

struct ExtremumRecord {
  std::string measure;
  int order = 1;
  int n_sites = 0;
  double location = 0.0;
  double value = 0.0;
};

struct FitRecord {
  std::string measure;
  int order = 1;
  crit::ScalingFit fit;
};

struct ScalingReport {
  std::vector<ExtremumRecord> extrema;
  std::vector<FitRecord> fits;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

inline ScalingReport run_scaling(const ScalingConfig& sc) {
  const SweepConfig& c = sc.sweep;
  validate(c);
  if (!uses_sites(c.model)) throw invalid_spec("scaling needs a finite-size model (ising, xy, xyt)");
  if (c.sites.size() < 3) throw invalid_spec("scaling needs at least 3 lattice sizes");
  for (int o : sc.orders) {
    if (o != 1 && o != 2) throw invalid_spec("derivative orders must be 1 or 2");
  }
  ScalingReport rep;
  // Series are computed per N once and reused for every measure.
  std::vector<std::vector<crit::Series>> by_n;
  const std::vector<double> xs = grid(c.lo, c.hi, c.step);
  for (int n : c.sites) {
    SweepConfig one = c;
    one.sites = {n};
    const auto results = detail::evaluate_grid(one, xs, {n});
    std::vector<crit::Series> per;
    for (const auto& m : c.measures) {
      crit::Series s;
      s.name = m;
      s.model = std::string(to_string(c.model));
      s.n_sites = n;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!results[i].eval) {
          throw analysis_error("N=" + std::to_string(n) + " " + c.param + "=" + format_double(xs[i]) + ": " +
                               results[i].error);
        }
        s.x.push_back(xs[i]);
        s.y.push_back(measure_value(results[i].eval->measures, m));
      }
      per.push_back(std::move(s));
    }
    by_n.push_back(std::move(per));
  }

  for (std::size_t k = 0; k < c.measures.size(); ++k) {
    for (int order : sc.orders) {
      std::vector<crit::ScalingPoint> pts;
      for (std::size_t ni = 0; ni < c.sites.size(); ++ni) {
        const crit::Series d = crit::derivative(by_n[ni][k], order);
        const crit::CriticalSignal sig = crit::locate_extremum(d, sc.window_lo, sc.window_hi);
        rep.extrema.push_back({c.measures[k], order, c.sites[ni], sig.location, sig.magnitude});
        pts.push_back({c.sites[ni], sig.magnitude});
      }
      rep.fits.push_back({c.measures[k], order, crit::scaling_fit(pts, crit::FitModel::linear_in_logN, sc.abscissa)});
      if (pts.size() >= 4) {
        rep.fits.push_back(
            {c.measures[k], order, crit::scaling_fit(pts, crit::FitModel::quadratic_in_logN, sc.abscissa)});
      }
    }
  }
  rep.metadata = base_metadata(c, "scaling");
  rep.metadata["orders"] = sc.orders;
  if (sc.window_lo) rep.metadata["window"] = {*sc.window_lo, *sc.window_hi};
  rep.metadata["abscissa"] = sc.abscissa == crit::Abscissa::ln ? "ln" : "log10";
  return rep;
}

// ---- export ----------------------------------------------------------------

inline void write_metadata_comments(std::ostream& os, const nlohmann::ordered_json& meta) {
  for (const auto& [k, v] : meta.items()) {
    os << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

inline void write_csv(std::ostream& os, const ResultTable& t) {
  write_metadata_comments(os, t.metadata);
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      if (row[i]) os << format_double(*row[i]);
    }
    os << "\n";
  }
}

inline nlohmann::ordered_json to_json(const ResultTable& t) {
  nlohmann::ordered_json j;
  j["metadata"] = t.metadata;
  j["metadata"]["warnings"] = t.warnings;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i]) {
        r[t.columns[i]] = *row[i];
      } else {
        r[t.columns[i]] = nullptr;
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline void write_json(std::ostream& os, const ResultTable& t) { os << to_json(t).dump(2) << "\n"; }

inline nlohmann::ordered_json to_json(const ScalingReport& r) {
  nlohmann::ordered_json j;
  j["metadata"] = r.metadata;
  nlohmann::ordered_json ex = nlohmann::ordered_json::array();
  for (const auto& e : r.extrema) {
    ex.push_back({{"measure", e.measure}, {"order", e.order}, {"N", e.n_sites}, {"location", e.location},
                  {"value", e.value}});
  }
  nlohmann::ordered_json fits = nlohmann::ordered_json::array();
  for (const auto& f : r.fits) {
    fits.push_back({{"measure", f.measure},
                    {"order", f.order},
                    {"model", crit::to_string(f.fit.model)},
                    {"coefficients", f.fit.coefficients},
                    {"r_squared", f.fit.r_squared}});
  }
  j["extrema"] = std::move(ex);
  j["fits"] = std::move(fits);
  return j;
}

inline void write_json(std::ostream& os, const ScalingReport& r) { os << to_json(r).dump(2) << "\n"; }

// One CSV table: extremum rows carry N, location and value; fit rows carry the
// coefficients (a, b[, c]) and R^2.
inline void write_csv(std::ostream& os, const ScalingReport& r) {
  write_metadata_comments(os, r.metadata);
  os << "kind,measure,order,N,location,value,a,b,c,r_squared\n";
  for (const auto& e : r.extrema) {
    os << "extremum," << e.measure << "," << e.order << "," << e.n_sites << "," << format_double(e.location)
       << "," << format_double(e.value) << ",,,,\n";
  }
  for (const auto& f : r.fits) {
    os << crit::to_string(f.fit.model) << "," << f.measure << "," << f.order << ",,,";
    for (std::size_t i = 0; i < 3; ++i) {
      os << ",";
      if (i < f.fit.coefficients.size()) os << format_double(f.fit.coefficients[i]);
    }
    os << "," << format_double(f.fit.r_squared) << "\n";
  }
}

}  // namespace qcrit::sweep
