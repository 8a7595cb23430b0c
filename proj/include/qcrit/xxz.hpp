#pragma once

// Thermodynamic-limit nearest-neighbour correlators of the antiferromagnetic
// XXZ chain H = sum_j (Sx Sx + Sy Sy + delta Sz Sz) from Bethe-ansatz
// integral representations.
//
//   delta <= -1      ferromagnet: zz = 1, xx = 0
//   -1 < delta < 1   gapless, Phi = acos(delta) / pi, real-line integrals
//   delta > 1        Neel, nu = acosh(delta), integrals on Im x = 1/2

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qcrit/error.hpp"
#include "qcrit/xstate.hpp"

namespace qcrit::xxz {

struct XxzSpec {
  double delta = 0.0;
  // Absolute tolerance on each returned correlator.
  double quad_tol = 1e-10;
  // Truncation in units of the integrand decay length (e^-cutoff is dropped).
  double cutoff = 40.0;
};

struct XxzCorrelators {
  double zz = 0.0;
  double xx = 0.0;
  double error_estimate = 0.0;
};

// Half-widths of the windows around delta = 1 (both sides) and delta = -1
// (gapless side) where the integrals lose accuracy.
inline constexpr double kCriticalWindow = 1e-6;
// Largest imaginary residue tolerated on the massive contour.
inline constexpr double kImaginaryTolerance = 1e-8;

namespace detail {

using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
inline constexpr unsigned kMaxDepth = 12;
// Boost compares the unscaled Kronrod/Gauss gap with a scaled target, so very
// small relative tolerances recurse to max depth on narrow panels.
inline constexpr double kRelTol = 1e-12;
inline constexpr double kSeries = 1e-6;

inline double sech(double y) {
  const double e = std::exp(-std::abs(y));
  return 2.0 * e / (1.0 + e * e);
}

// sinh(a x) / sinh(x) for x > 0, 0 < a < 1, without overflow.
inline double sinh_ratio(double a, double x) {
  return std::exp((a - 1.0) * x) * std::expm1(-2.0 * a * x) / std::expm1(-2.0 * x);
}

template <class F>
struct Piecewise {
  decltype(std::declval<F>()(0.0)) value{};
  double error = 0.0;
  double l1 = 0.0;
};

// Gauss-Kronrod over consecutive panels. A single panel spanning many decay
// lengths can pass the Kronrod/Gauss agreement test while missing the bulk.
template <class F>
Piecewise<F> integrate_panels(const F& f, const std::vector<double>& edges) {
  Piecewise<F> out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double err = 0.0;
    double l1 = 0.0;
    out.value += Quad::integrate(f, edges[i], edges[i + 1], kMaxDepth, kRelTol, &err, &l1);
    out.error += err;
    out.l1 += l1;
  }
  return out;
}

// Panel edges on [lo, hi]: doubling from `first` up to `scale`, then uniform
// steps of `scale`.
inline std::vector<double> panel_edges(double lo, double hi, double first, double scale) {
  std::vector<double> edges{lo};
  double w = std::min(first, scale);
  double x = lo;
  // The last panel absorbs any sliver narrower than half a step.
  while (x + 1.5 * w < hi) {
    x += w;
    edges.push_back(x);
    if (w < scale) w = std::min(2.0 * w, scale);
  }
  edges.push_back(hi);
  return edges;
}

// sin z - z, by series for small |z|.
inline std::complex<double> sin_minus(std::complex<double> z) {
  if (std::abs(z) > 0.5) return std::sin(z) - z;
  const std::complex<double> z2 = z * z;
  std::complex<double> term = -z * z2 / 6.0;
  std::complex<double> sum = term;
  for (int n = 2; n < 30 && std::abs(term) > 1e-18 * std::abs(sum); ++n) {
    term *= -z2 / static_cast<double>((2 * n) * (2 * n + 1));
    sum += term;
  }
  return sum;
}

// sinh v - v, by series for small v.
inline double sinh_minus(double v) {
  if (std::abs(v) > 0.5) return std::sinh(v) - v;
  const double v2 = v * v;
  double term = v * v2 / 6.0;
  double sum = term;
  for (int n = 2; n < 30 && std::abs(term) > 1e-18 * std::abs(sum); ++n) {
    term *= v2 / static_cast<double>((2 * n) * (2 * n + 1));
    sum += term;
  }
  return sum;
}

// v coth v - 1 = (v cosh v - sinh v) / sinh v, by series for small v.
inline double nu_coth_minus_one(double v) {
  if (v > 0.5) return v / std::tanh(v) - 1.0;
  // v cosh v - sinh v = sum_n 2n v^(2n+1) / (2n+1)!
  const double v2 = v * v;
  double power = v * v2 / 6.0;  // v^3 / 3!
  double sum = 2.0 * power;
  for (int n = 2; n < 30; ++n) {
    power *= v2 / static_cast<double>((2 * n) * (2 * n + 1));
    const double term = 2.0 * n * power;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum / std::sinh(v);
}

// Floating-point floor for a combination of large cancelling terms.
inline double rounding_floor(double magnitude) {
  return 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
}

[[noreturn]] inline void fail(const char* what, const XxzSpec& spec, double err) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (delta=" << spec.delta << ", error estimate=" << err << ", quad_tol=" << spec.quad_tol
     << ")";
  throw quadrature_error(os.str());
}

inline XxzCorrelators gapless(const XxzSpec& spec) {
  const double phi = std::acos(spec.delta) / std::numbers::pi;
  const double half_width = spec.cutoff / (2.0 * phi);
  // Both integrands are even; integrate over [0, X] and double.
  const auto f1 = [phi](double x) {
    const double s = sech(phi * x);
    if (x < kSeries) return s * s;
    return x / std::tanh(x) * s * s;
  };
  const auto f2 = [phi](double x) {
    if (x < kSeries) return (1.0 - phi) * sech(phi * x);
    return sinh_ratio(1.0 - phi, x) * sech(phi * x);
  };
  const std::vector<double> edges = panel_edges(0.0, half_width, 1.0, 1.0 / (2.0 * phi));
  const auto p1 = integrate_panels(f1, edges);
  const auto p2 = integrate_panels(f2, edges);
  const double i1 = 2.0 * p1.value;
  const double i2 = 2.0 * p2.value;
  const double e1 = 2.0 * p1.error;
  const double e2 = 2.0 * p2.error;

  const double pi = std::numbers::pi;
  const double sp = std::sin(pi * phi);
  const double cp = std::cos(pi * phi);
  const double z1 = 2.0 / (pi * pi);
  const double z2 = 2.0 * cp / (sp * pi);
  const double x1 = cp / (pi * pi);
  const double x2 = 1.0 / (pi * sp);

  XxzCorrelators out;
  out.zz = 1.0 - z1 * i1 + z2 * i2;
  out.xx = x1 * i1 - x2 * i2;
  const double err_zz = z1 * e1 + std::abs(z2) * e2;
  const double err_xx = std::abs(x1) * e1 + x2 * e2;
  out.error_estimate = std::max(err_zz, err_xx);
  const double floor_zz = rounding_floor(z1 * std::abs(i1) + std::abs(z2 * i2));
  const double floor_xx = rounding_floor(std::abs(x1 * i1) + std::abs(x2 * i2));
  if (err_zz > std::max(spec.quad_tol, floor_zz) || err_xx > std::max(spec.quad_tol, floor_xx)) {
    fail("gapless quadrature did not converge", spec, out.error_estimate);
  }
  return out;
}

inline XxzCorrelators massive(const XxzSpec& spec) {
  using cd = std::complex<double>;
  const double nu = std::acosh(spec.delta);
  const double pi = std::numbers::pi;
  // Peaks of x / sin^2(nu x) grow like 1/nu^2 against the e^{-pi t} decay.
  const double half_width = (spec.cutoff + 2.0 * std::max(0.0, std::log(1.0 / nu))) / pi;
  const double coth_nu = 1.0 / std::tanh(nu);
  const double sinh_nu = std::sinh(nu);
  const double nu_coth_m1 = nu_coth_minus_one(nu);
  const double sinhm_2nu = sinh_minus(2.0 * nu);
  // Near delta = 1 both bracketed terms grow like 1/nu^2 and cancel; the
  // numerators are rewritten through sin z - z and sinh v - v to keep O(1)
  // accuracy. On x = t + i/2: sinh(pi x) = i cosh(pi t).
  const auto parts = [nu, pi](double t, cd& x, cd& sinm2y, cd& sin2y, cd& inv_sinh) {
    x = cd(t, 0.5);
    const cd y = nu * x;
    const cd s = std::sin(y);
    sinm2y = sin_minus(2.0 * y);
    sin2y = s * s;
    inv_sinh = cd(0.0, -sech(pi * t));
  };
  const auto gzz = [&](double t) {
    cd x, sinm2y, sin2y, inv_sinh;
    parts(t, x, sinm2y, sin2y, inv_sinh);
    return (0.5 * sinm2y * coth_nu + x * nu_coth_m1) / sin2y * inv_sinh;
  };
  const auto gxx = [&](double t) {
    cd x, sinm2y, sin2y, inv_sinh;
    parts(t, x, sinm2y, sin2y, inv_sinh);
    return 0.5 * (sinhm_2nu * x - sinm2y) / (sinh_nu * sin2y) * inv_sinh;
  };
  const std::vector<double> right = panel_edges(0.0, half_width, 0.25, 1.0);
  std::vector<double> edges;
  for (auto it = right.rbegin(); it != right.rend(); ++it) edges.push_back(-*it);
  edges.insert(edges.end(), right.begin() + 1, right.end());
  const auto pz = integrate_panels(gzz, edges);
  const auto px = integrate_panels(gxx, edges);
  const cd jz = pz.value;
  const cd jx = px.value;
  const double ez = pz.error;
  const double ex = px.error;

  XxzCorrelators out;
  out.zz = 1.0 + 2.0 * jz.real();
  out.xx = jx.real();
  out.error_estimate = std::max(2.0 * ez, ex);
  const double floor_z = rounding_floor(2.0 * pz.l1);
  const double floor_x = rounding_floor(px.l1);
  if (2.0 * ez > std::max(spec.quad_tol, floor_z) || ex > std::max(spec.quad_tol, floor_x)) fail("massive quadrature did not converge", spec, out.error_estimate);
  const double residue = std::max(std::abs(jz.imag()), std::abs(jx.imag()));
  if (residue > kImaginaryTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "contour integral has imaginary part " << residue << " at delta=" << spec.delta;
    throw quadrature_error(os.str());
  }
  return out;
}

}  // namespace detail

inline void check(const XxzSpec& spec) {
  if (!std::isfinite(spec.delta)) throw invalid_spec("delta must be finite");
  if (!(spec.quad_tol > 0.0)) throw invalid_spec("quad_tol must be positive");
  if (!(spec.cutoff > 0.0)) throw invalid_spec("cutoff must be positive");
  const bool near_one = std::abs(spec.delta - 1.0) < kCriticalWindow;
  const bool near_minus_one = spec.delta > -1.0 && spec.delta < -1.0 + kCriticalWindow;
  if (near_one || near_minus_one) {
    std::ostringstream os;
    os.precision(17);
    os << "delta=" << spec.delta << " lies inside the critical exclusion window; evaluate at least "
       << kCriticalWindow << " away";
    throw invalid_spec(os.str());
  }
}

inline XxzCorrelators correlators(const XxzSpec& spec) {
  check(spec);
  if (spec.delta <= -1.0) return {1.0, 0.0, 0.0};
  if (spec.delta < 1.0) return detail::gapless(spec);
  return detail::massive(spec);
}

inline XState reduced_density(const XxzCorrelators& c) {
  XState s;
  s.u11 = (1.0 + c.zz) / 4.0;
  s.u44 = s.u11;
  s.u22 = (1.0 - c.zz) / 4.0;
  s.u33 = s.u22;
  s.u23 = c.xx / 2.0;
  s.u14 = 0.0;
  return validated(s);
}

inline XState reduced_density(const XxzSpec& spec) { return reduced_density(correlators(spec)); }

}  // namespace qcrit::xxz
