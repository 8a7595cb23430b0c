#pragma once

// Two-qubit X-structured density matrices and closed-form correlation
// measures on them: concurrence, entanglement of formation, quantum discord
// and classical correlations, measurement-induced disturbance, and the
// Horodecki-maximised CHSH value.
//
// Basis ordering is |1> = |up up>, |2> = |up down>, |3> = |down up>,
// |4> = |down down>. Only the diagonal and the anti-diagonal are non-zero:
//
//   | u11  0    0    u14 |
//   | 0    u22  u23  0   |
//   | 0    u23  u33  0   |
//   | u14  0    0    u44 |
//
// Coherences are kept signed so that density matrices round-trip; every
// measure consumes |u14| and |u23|.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "qcrit/error.hpp"

namespace qcrit {

struct XState {
  double u11 = 0.0;
  double u22 = 0.0;
  double u33 = 0.0;
  double u44 = 0.0;
  double u14 = 0.0;
  double u23 = 0.0;
};

// Tolerance applied to trace, sign and positivity checks.
inline constexpr double kStateTolerance = 1e-9;

// Eigenvalues of an X state, sorted descending.
struct XStateSpectrum {
  std::array<double, 4> values{};
};

struct DiscordPair {
  double qd = 0.0;
  double cc = 0.0;
};

struct MeasureSet {
  double eof = 0.0;
  double qd = 0.0;
  double cc = 0.0;
  double mid = 0.0;
  double chsh = 0.0;
  double mutual_info = 0.0;
};

namespace detail {

inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Tiny negative round-off is reported as zero; anything larger is left visible.
inline double snap_nonnegative(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

inline double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

inline std::string describe(const XState& s) {
  std::ostringstream os;
  os.precision(17);
  os << "(u11=" << s.u11 << ", u22=" << s.u22 << ", u33=" << s.u33 << ", u44=" << s.u44
     << ", u14=" << s.u14 << ", u23=" << s.u23 << ")";
  return os.str();
}

}  // namespace detail

// H[x] = -x log2 x - (1-x) log2 (1-x), with H[0] = H[1] = 0.
inline double binary_entropy(double x) {
  x = detail::clamp_unit(x);
  return 0.0 - (detail::xlog2x(x) + detail::xlog2x(1.0 - x));
}

// Throws invalid_state when trace, diagonal sign or 2x2-block positivity is
// violated beyond kStateTolerance. Returns the state with tiny negative
// diagonals clamped to zero.
inline XState validated(const XState& s) {
  const auto bad = [&](const char* what) {
    return invalid_state(std::string("invalid X state: ") + what + " " + detail::describe(s));
  };
  const std::array<double, 6> all{s.u11, s.u22, s.u33, s.u44, s.u14, s.u23};
  for (double v : all) {
    if (!std::isfinite(v)) throw bad("non-finite entry");
  }
  const double trace = s.u11 + s.u22 + s.u33 + s.u44;
  if (std::abs(trace - 1.0) > kStateTolerance) throw bad("trace != 1");
  for (double d : {s.u11, s.u22, s.u33, s.u44}) {
    if (d < -kStateTolerance) throw bad("negative diagonal entry");
  }
  XState out = s;
  out.u11 = std::max(0.0, s.u11);
  out.u22 = std::max(0.0, s.u22);
  out.u33 = std::max(0.0, s.u33);
  out.u44 = std::max(0.0, s.u44);
  if (out.u11 * out.u44 < s.u14 * s.u14 - kStateTolerance) throw bad("outer block not positive");
  if (out.u22 * out.u33 < s.u23 * s.u23 - kStateTolerance) throw bad("inner block not positive");
  return out;
}

inline bool is_valid(const XState& s) {
  try {
    validated(s);
    return true;
  } catch (const invalid_state&) {
    return false;
  }
}

namespace detail {

inline XStateSpectrum spectrum_unchecked(const XState& s) {
  const double m1 = 0.5 * (s.u11 + s.u44);
  const double r1 = std::hypot(0.5 * (s.u11 - s.u44), s.u14);
  const double m2 = 0.5 * (s.u22 + s.u33);
  const double r2 = std::hypot(0.5 * (s.u22 - s.u33), s.u23);
  XStateSpectrum out{{m1 + r1, m1 - r1, m2 + r2, m2 - r2}};
  for (double& v : out.values) v = clamp_unit(v);
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

inline double concurrence_unchecked(const XState& s) {
  const double a = std::abs(s.u14) - std::sqrt(s.u22 * s.u33);
  const double b = std::abs(s.u23) - std::sqrt(s.u11 * s.u44);
  return clamp_unit(2.0 * std::max({0.0, a, b}));
}

inline double eof_unchecked(const XState& s) {
  const double c = concurrence_unchecked(s);
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

inline double spectral_sum(const XStateSpectrum& sp) {
  double acc = 0.0;
  for (double v : sp.values) acc += xlog2x(v);
  return acc;  // sum lambda log2 lambda = -S(rho)
}

inline double diagonal_sum(const XState& s) {
  return xlog2x(s.u11) + xlog2x(s.u22) + xlog2x(s.u33) + xlog2x(s.u44);
}

inline DiscordPair qd_cc_unchecked(const XState& s, const XStateSpectrum& sp) {
  const double a14 = std::abs(s.u14);
  const double a23 = std::abs(s.u23);
  const double lead = 1.0 - 2.0 * (s.u33 + s.u44);
  const double tau = 0.5 * (1.0 + std::sqrt(lead * lead + 4.0 * (a14 + a23) * (a14 + a23)));
  const double d1 = binary_entropy(tau);
  const double h13 = binary_entropy(s.u11 + s.u33);
  const double d2 = -diagonal_sum(s) - h13;
  const double h12 = binary_entropy(s.u11 + s.u22);
  const double lsum = spectral_sum(sp);
  const double cc1 = h12 - d1;
  const double cc2 = h12 - d2;
  const double q1 = h13 + lsum + d1;
  const double q2 = h13 + lsum + d2;
  return {snap_nonnegative(std::min(q1, q2)), snap_nonnegative(std::max(cc1, cc2))};
}

inline double mid_unchecked(const XState& s, const XStateSpectrum& sp) {
  // A diagonal state is its own dephased state; avoid summation-order noise.
  if (s.u14 == 0.0 && s.u23 == 0.0) return 0.0;
  return snap_nonnegative(spectral_sum(sp) - diagonal_sum(s));
}

inline double chsh_unchecked(const XState& s) {
  const double k1 = s.u11 + s.u44 - s.u22 - s.u33;
  const double k2 = std::abs(s.u14) + std::abs(s.u23);
  const double k3 = std::abs(s.u14) - std::abs(s.u23);
  const double b1 = 2.0 * std::sqrt(k1 * k1 + 4.0 * k2 * k2);
  const double b2 = 4.0 * std::sqrt(k2 * k2 + k3 * k3);
  return std::max(b1, b2);
}

inline double mutual_info_unchecked(const XState& s, const XStateSpectrum& sp) {
  return binary_entropy(s.u11 + s.u22) + binary_entropy(s.u11 + s.u33) + spectral_sum(sp);
}

}  // namespace detail

inline XStateSpectrum spectrum(const XState& s) { return detail::spectrum_unchecked(validated(s)); }

// C = 2 max{0, |u14| - sqrt(u22 u33), |u23| - sqrt(u11 u44)}.
inline double concurrence(const XState& s) { return detail::concurrence_unchecked(validated(s)); }

inline double eof(const XState& s) { return detail::eof_unchecked(validated(s)); }

// One-sided discord and classical correlations for a projective measurement
// on the second qubit. For u22 != u33 the result is the discord of that
// convention only.
inline DiscordPair qd_cc(const XState& s) {
  const XState v = validated(s);
  return detail::qd_cc_unchecked(v, detail::spectrum_unchecked(v));
}

// Relative entropy between rho and its diagonal (the state after the
// least-disturbing local measurement).
inline double mid(const XState& s) {
  const XState v = validated(s);
  return detail::mid_unchecked(v, detail::spectrum_unchecked(v));
}

// Maximal CHSH value; anything above 2 violates the Bell inequality.
inline double chsh(const XState& s) { return detail::chsh_unchecked(validated(s)); }

// I(rho) = S(rho_A) + S(rho_B) - S(rho).
inline double mutual_information(const XState& s) {
  const XState v = validated(s);
  return detail::mutual_info_unchecked(v, detail::spectrum_unchecked(v));
}

inline MeasureSet measure_all(const XState& s) {
  const XState v = validated(s);
  const XStateSpectrum sp = detail::spectrum_unchecked(v);
  const DiscordPair d = detail::qd_cc_unchecked(v, sp);
  MeasureSet m;
  m.eof = detail::eof_unchecked(v);
  m.qd = d.qd;
  m.cc = d.cc;
  m.mid = detail::mid_unchecked(v, sp);
  m.chsh = detail::chsh_unchecked(v);
  m.mutual_info = detail::snap_nonnegative(detail::mutual_info_unchecked(v, sp));
  return m;
}

}  // namespace qcrit
