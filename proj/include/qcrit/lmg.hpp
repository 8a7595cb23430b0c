#pragma once

// Hartree-Fock pairwise density matrices of the Lipkin-Meshkov-Glick model.
// The HF ground state rotates each mode pair by a mixing angle alpha with
// cos(2 alpha) = lambda below the transition and alpha = 0 above it.

#include <cmath>
#include <numbers>
#include <string>

#include "qcrit/error.hpp"
#include "qcrit/xstate.hpp"

namespace qcrit::lmg {

// same_mode pairs (+m, -m); different_mode pairs (+m, -n) with m != n.
enum class ModePair { same_mode, different_mode };

struct LmgSpec {
  double lambda = 0.0;
  ModePair mode_pair = ModePair::same_mode;
};

inline void check(const LmgSpec& spec) {
  if (!std::isfinite(spec.lambda)) throw invalid_spec("lambda must be finite");
  if (spec.lambda < 0.0) throw invalid_spec("LMG lambda must be non-negative");
}

// alpha = acos(lambda) / 2 for lambda < 1, else 0. Range [0, pi/4].
inline double mixing_angle(const LmgSpec& spec) {
  check(spec);
  return spec.lambda < 1.0 ? 0.5 * std::acos(spec.lambda) : 0.0;
}

inline XState density(const LmgSpec& spec) {
  const double a = mixing_angle(spec);
  const double s = std::sin(a);
  const double c = std::cos(a);
  XState st;
  if (spec.mode_pair == ModePair::same_mode) {
    st.u22 = c * c;
    st.u33 = s * s;
    st.u23 = c * s;
  } else {
    st.u11 = s * s * c * c;
    st.u22 = c * c * c * c;
    st.u33 = s * s * s * s;
    st.u44 = st.u11;
  }
  return validated(st);
}

inline double chsh_closed_form(const LmgSpec& spec) {
  check(spec);
  const double l = spec.lambda;
  if (l >= 1.0) return 2.0;
  return spec.mode_pair == ModePair::same_mode ? 2.0 * std::sqrt(2.0 - l * l) : 2.0 * l * l;
}

// The same_mode state is pure, so entanglement of formation, discord,
// classical correlations and MID all equal the marginal entropy H[c^2].
// different_mode states are diagonal and carry none of them.
inline MeasureSet measures(const LmgSpec& spec) {
  const XState st = density(spec);
  MeasureSet m;
  m.chsh = chsh(st);
  if (spec.mode_pair == ModePair::same_mode) {
    const double h = binary_entropy(st.u22);
    m.eof = m.qd = m.cc = m.mid = h;
    m.mutual_info = 2.0 * h;
  } else {
    m.mutual_info = mutual_information(st);
  }
  return m;
}

}  // namespace qcrit::lmg
