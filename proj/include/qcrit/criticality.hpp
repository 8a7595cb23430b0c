#pragma once

// Derivative analysis of measure-versus-parameter curves: finite-difference
// derivatives, refined extremum location, jump and cusp classification, and
// regressions of extremum magnitudes against ln N.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcrit/error.hpp"

namespace qcrit::crit {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string name;
  std::string model;
  int n_sites = 0;
};

enum class SignalKind { derivative_extremum, inflection, jump, cusp };

struct CriticalSignal {
  double location = 0.0;
  SignalKind kind = SignalKind::derivative_extremum;
  double magnitude = 0.0;
};

enum class FitModel { linear_in_logN, quadratic_in_logN };
enum class Abscissa { ln, log10 };

struct ScalingFit {
  FitModel model = FitModel::linear_in_logN;
  // Highest power first: (a, b) for a x + b, (a, b, c) for a x^2 + b x + c.
  std::vector<double> coefficients;
  double r_squared = 0.0;
};

struct DetectorOptions {
  // Jump: |dy_i| above this multiple of the median |dy| nearby.
  double jump_threshold = 20.0;
  // Cusp: slope change above this multiple of the median slope change nearby.
  double cusp_threshold = 10.0;
  // Neighbours on each side used for the local medians.
  int window = 10;
  // Absolute floors so that exactly flat regions never fire.
  double jump_floor = 1e-12;
  double cusp_floor = 1e-9;
  // Cusp flags this close (in cells) to a jump are attributed to the jump.
  int jump_shadow = 3;
};

inline constexpr std::size_t kMinPoints = 5;
inline constexpr double kUniformTolerance = 1e-12;

inline const char* to_string(SignalKind k) {
  switch (k) {
    case SignalKind::derivative_extremum: return "derivative_extremum";
    case SignalKind::inflection: return "inflection";
    case SignalKind::jump: return "jump";
    case SignalKind::cusp: return "cusp";
  }
  return "unknown";
}

inline const char* to_string(FitModel m) {
  return m == FitModel::linear_in_logN ? "linear_in_logN" : "quadratic_in_logN";
}

// Grid spacing after checking size, monotonicity and uniformity.
inline double spacing(const Series& s, std::size_t min_points = kMinPoints) {
  if (s.x.size() != s.y.size()) throw analysis_error("series x and y lengths differ");
  if (s.x.size() < min_points) {
    std::ostringstream os;
    os << "series '" << s.name << "' has " << s.x.size() << " points; need at least " << min_points;
    throw analysis_error(os.str());
  }
  const double h = (s.x.back() - s.x.front()) / static_cast<double>(s.x.size() - 1);
  if (!(h > 0.0)) throw analysis_error("series grid must be strictly increasing");
  for (std::size_t i = 1; i < s.x.size(); ++i) {
    if (std::abs((s.x[i] - s.x[i - 1]) - h) > kUniformTolerance) {
      throw analysis_error("series grid is not uniform");
    }
  }
  return h;
}

// Central differences inside, second-order one-sided stencils at the ends.
inline Series derivative(const Series& s, int order) {
  if (order != 1 && order != 2) throw analysis_error("derivative order must be 1 or 2");
  const double h = spacing(s);
  const std::vector<double>& f = s.y;
  const std::size_t n = f.size();
  Series out = s;
  out.name = s.name + (order == 1 ? "'" : "''");
  if (order == 1) {
    const double inv = 1.0 / (2.0 * h);
    out.y[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
    out.y[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) out.y[i] = (f[i + 1] - f[i - 1]) * inv;
  } else {
    const double inv = 1.0 / (h * h);
    out.y[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    out.y[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) out.y[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
  }
  return out;
}

// Grid argmax of |y| (optionally restricted to [lo, hi]) refined by a
// least-squares parabola through up to five neighbours. The refined location
// never leaves the adjacent cells.
inline CriticalSignal locate_extremum(const Series& s, std::optional<double> lo = std::nullopt,
                                      std::optional<double> hi = std::nullopt) {
  const double h = spacing(s);
  const std::size_t n = s.y.size();
  std::size_t begin = 0;
  std::size_t end = n;
  if (lo) begin = static_cast<std::size_t>(std::lower_bound(s.x.begin(), s.x.end(), *lo) - s.x.begin());
  if (hi) end = static_cast<std::size_t>(std::upper_bound(s.x.begin(), s.x.end(), *hi) - s.x.begin());
  if (end <= begin) throw analysis_error("extremum window contains no grid points");

  std::size_t best = begin;
  double best_v = -1.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double v = std::abs(s.y[i]);
    if (!std::isfinite(v)) throw analysis_error("non-finite value in series '" + s.name + "'");
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  // Plateau: another point at the same height that is not a direct neighbour.
  const double tie = 1e-12 * std::max(best_v, 1e-300);
  for (std::size_t i = begin; i < end; ++i) {
    const std::size_t gap = i > best ? i - best : best - i;
    if (gap > 1 && best_v - std::abs(s.y[i]) <= tie) {
      std::ostringstream os;
      os.precision(17);
      os << "plateau in '" << s.name << "': |y| reaches " << best_v << " at x=" << s.x[best]
         << " and x=" << s.x[i];
      throw analysis_error(os.str());
    }
  }

  CriticalSignal sig{s.x[best], SignalKind::derivative_extremum, best_v};
  const std::size_t a = best >= begin + 2 ? best - 2 : begin;
  const std::size_t b = std::min(end, best + 3);
  if (b - a < 3) return sig;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(b - a), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(b - a));
  for (std::size_t i = a; i < b; ++i) {
    const double u = (s.x[i] - s.x[best]) / h;
    const auto r = static_cast<Eigen::Index>(i - a);
    design(r, 0) = u * u;
    design(r, 1) = u;
    design(r, 2) = 1.0;
    rhs(r) = std::abs(s.y[i]);
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
  if (!(c(0) < 0.0)) return sig;  // not a maximum of the parabola
  const double u = std::clamp(-c(1) / (2.0 * c(0)), -1.0, 1.0);
  sig.location = s.x[best] + u * h;
  sig.magnitude = std::max(best_v, c(0) * u * u + c(1) * u + c(2));
  return sig;
}

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

// Median of |d[j]| for j within `window` of i, skipping j in [skip_lo, skip_hi].
inline double local_scale(const std::vector<double>& d, std::size_t i, int window, std::size_t skip_lo,
                          std::size_t skip_hi) {
  std::vector<double> nb;
  const std::size_t w = static_cast<std::size_t>(window);
  const std::size_t lo = i >= w ? i - w : 0;
  const std::size_t hi = std::min(d.size(), i + w + 1);
  for (std::size_t j = lo; j < hi; ++j) {
    if (j >= skip_lo && j <= skip_hi) continue;
    nb.push_back(std::abs(d[j]));
  }
  return median(std::move(nb));
}

struct Flag {
  std::size_t index;
  double location;
  double magnitude;
};

// Merges runs of adjacent flags into one signal located at the
// magnitude-weighted mean position, carrying the summed magnitude.
inline std::vector<CriticalSignal> cluster(const std::vector<Flag>& flags, SignalKind kind) {
  std::vector<CriticalSignal> out;
  std::size_t i = 0;
  while (i < flags.size()) {
    std::size_t j = i + 1;
    while (j < flags.size() && flags[j].index == flags[j - 1].index + 1) ++j;
    double wsum = 0.0;
    double xsum = 0.0;
    double msum = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      const double w = std::abs(flags[k].magnitude);
      wsum += w;
      xsum += w * flags[k].location;
      msum += flags[k].magnitude;
    }
    out.push_back({wsum > 0.0 ? xsum / wsum : flags[i].location, kind, msum});
    i = j;
  }
  return out;
}

}  // namespace detail

// Jumps: |y_{i+1} - y_i| large against the median step in a window around it.
// Cusps: the change between consecutive one-sided slopes large against the
// median slope change nearby, away from any jump.
inline std::vector<CriticalSignal> detect_jump_or_cusp(const Series& s, const DetectorOptions& opt = {}) {
  const double h = spacing(s);
  const std::size_t n = s.y.size();
  std::vector<double> dy(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) dy[i] = s.y[i + 1] - s.y[i];

  std::vector<detail::Flag> jumps;
  for (std::size_t i = 0; i < dy.size(); ++i) {
    const double scale = detail::local_scale(dy, i, opt.window, i, i);
    const double a = std::abs(dy[i]);
    if (a > opt.jump_threshold * scale && a > opt.jump_floor) {
      jumps.push_back({i, 0.5 * (s.x[i] + s.x[i + 1]), dy[i]});
    }
  }

  // ds[i] is the slope change at grid point i+1.
  std::vector<double> ds(dy.size() - 1);
  for (std::size_t i = 0; i + 1 < dy.size(); ++i) ds[i] = (dy[i + 1] - dy[i]) / h;
  std::vector<detail::Flag> cusps;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double scale = detail::local_scale(ds, i, opt.window, i == 0 ? 0 : i - 1, i + 1);
    const double a = std::abs(ds[i]);
    if (!(a > opt.cusp_threshold * scale && a > opt.cusp_floor)) continue;
    bool shadowed = false;
    for (const auto& j : jumps) {
      const std::size_t gap = j.index > i ? j.index - i : i - j.index;
      if (gap <= static_cast<std::size_t>(opt.jump_shadow)) shadowed = true;
    }
    if (!shadowed) cusps.push_back({i + 1, s.x[i + 1], ds[i]});
  }

  std::vector<CriticalSignal> out = detail::cluster(jumps, SignalKind::jump);
  const std::vector<CriticalSignal> c = detail::cluster(cusps, SignalKind::cusp);
  out.insert(out.end(), c.begin(), c.end());
  std::sort(out.begin(), out.end(),
            [](const CriticalSignal& a, const CriticalSignal& b) { return a.location < b.location; });
  return out;
}

// Single-threshold form: the same multiple is used for jumps and cusps.
inline std::vector<CriticalSignal> detect_jump_or_cusp(const Series& s, double threshold) {
  DetectorOptions opt;
  opt.jump_threshold = threshold;
  opt.cusp_threshold = threshold;
  return detect_jump_or_cusp(s, opt);
}

struct ScalingPoint {
  int n_sites = 0;
  double value = 0.0;
};

// Least squares of value against ln N (or log10 N). R^2 = 1 - SS_res/SS_tot,
// clamped to [0, 1]; a constant series that is fitted exactly gives 1.
inline ScalingFit scaling_fit(const std::vector<ScalingPoint>& points, FitModel model,
                              Abscissa abscissa = Abscissa::ln) {
  const int degree = model == FitModel::linear_in_logN ? 1 : 2;
  const std::size_t need = model == FitModel::linear_in_logN ? 3 : 4;
  if (points.size() < need) {
    std::ostringstream os;
    os << to_string(model) << " fit needs at least " << need << " points, got " << points.size();
    throw analysis_error(os.str());
  }
  std::vector<int> ns;
  for (const auto& p : points) {
    if (p.n_sites <= 0) throw analysis_error("scaling fit needs positive N");
    if (!std::isfinite(p.value)) throw analysis_error("scaling fit value is not finite");
    ns.push_back(p.n_sites);
  }
  std::sort(ns.begin(), ns.end());
  if (std::adjacent_find(ns.begin(), ns.end()) != ns.end()) {
    throw analysis_error("singular scaling design: repeated N");
  }
  const auto m = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(m, degree + 1);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    const double x = abscissa == Abscissa::ln ? std::log(p.n_sites) : std::log10(p.n_sites);
    for (int d = 0; d <= degree; ++d) design(i, d) = std::pow(x, degree - d);
    y(i) = p.value;
  }
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < degree + 1) throw analysis_error("singular scaling design");
  const Eigen::VectorXd c = qr.solve(y);
  const Eigen::VectorXd r = y - design * c;
  const double ss_res = r.squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  ScalingFit fit;
  fit.model = model;
  fit.coefficients.assign(c.data(), c.data() + c.size());
  if (ss_tot > 0.0) {
    fit.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  } else {
    fit.r_squared = ss_res <= 1e-24 ? 1.0 : 0.0;
  }
  return fit;
}

}  // namespace qcrit::crit
