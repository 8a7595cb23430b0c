#pragma once

// Finite-N nearest-neighbour correlators of the periodic XYT chain
//
//   H = -sum_j [ (1+g)/2 sx_j sx_j+1 + (1-g)/2 sy_j sy_j+1 + l sz_j ]
//       -a sum_j [ sx_j-1 sz_j sx_j+1 + sy_j-1 sz_j sy_j+1 ]
//
// from its Jordan-Wigner free-fermion solution. Ising is g=1, a=0; XY is a=0.
//
// A periodic spin chain splits into two fermion-parity sectors. Even parity
// uses half-integer momenta, odd parity integer momenta. In each sector the
// mode at x=0 (integer grid) or x=pi (half-integer grid) is unpaired and its
// occupation is fixed by the parity constraint. The other modes sit in their
// Bogoliubov vacuum, except when a single quasiparticle is the cheaper way to
// reach the required parity. Sector::periodic and Sector::antiperiodic evaluate the
// bare mode sums on one grid. Sector::ground enforces the parity constraint in
// both sectors and returns the lower-energy state (an equal mixture when the
// two are degenerate within kSectorDegeneracy), which is the state an exact
// diagonalisation produces.

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qcrit/error.hpp"
#include "qcrit/xstate.hpp"

namespace qcrit::chain {

enum class Sector { periodic, antiperiodic, ground };
enum class ModeGrid { periodic, antiperiodic };

struct ChainSpec {
  double lambda = 0.0;
  double gamma = 1.0;
  double alpha = 0.0;
  int n_sites = 2001;
  Sector sector = Sector::ground;
};

inline ChainSpec ising(double lambda, int n_sites) { return {lambda, 1.0, 0.0, n_sites}; }
inline ChainSpec xy(double lambda, double gamma, int n_sites) { return {lambda, gamma, 0.0, n_sites}; }
inline ChainSpec xyt(double lambda, double gamma, double alpha, int n_sites) {
  return {lambda, gamma, alpha, n_sites};
}

// Modes in order k = -M..M (integer grid) or k+1/2 for k = -M..M (half grid).
struct ModeData {
  int m = 0;
  ModeGrid grid = ModeGrid::periodic;
  std::vector<double> x;
  std::vector<double> eps;
  std::vector<double> omega;
};

struct CorrelatorSet {
  double sz = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;
};

// Ground state of one parity sector.
struct SectorState {
  ModeGrid grid = ModeGrid::periodic;
  double energy = 0.0;
  // The unpaired mode had to be flipped to satisfy the parity constraint.
  bool flipped = false;
  // Instead of the flip, one paired quasiparticle (an equal mixture of +x and
  // -x) was the cheaper way to reach the right parity.
  bool quasiparticle = false;
  // Number of degenerate states mixed into corr.
  int degeneracy = 1;
  CorrelatorSet corr;
};

// Modes with omega below this are treated as gap closings.
inline constexpr double kZeroMode = 1e-14;
// Sectors whose energies differ by less than this are mixed equally.
inline constexpr double kSectorDegeneracy = 1e-9;

inline void check(const ChainSpec& spec) {
  if (!std::isfinite(spec.lambda) || !std::isfinite(spec.gamma) || !std::isfinite(spec.alpha)) {
    throw invalid_spec("chain parameters must be finite");
  }
  if (spec.n_sites < 3) throw invalid_spec("chain needs at least 3 sites");
  if (spec.n_sites % 2 == 0) {
    std::ostringstream os;
    os << "even N=" << spec.n_sites << " is unsupported; use N=" << spec.n_sites - 1 << " or N="
       << spec.n_sites + 1;
    throw invalid_spec(os.str());
  }
}

namespace detail {

struct Mode {
  double c;    // cos x
  double s2;   // sin^2 x
  double eps;
  double omega;
};

inline Mode make_mode(const ChainSpec& spec, double x) {
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double eps = spec.lambda - c - 2.0 * spec.alpha * std::cos(2.0 * x);
  const double gs = spec.gamma * s;
  return {c, s * s, eps, std::sqrt(eps * eps + gs * gs)};
}

inline double momentum(int k2, int n) {
  // k2 is twice the (possibly half-integer) mode index.
  return std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
}

[[noreturn]] inline void throw_gap(const ChainSpec& spec, double x) {
  std::ostringstream os;
  os.precision(17);
  os << "gap closing: omega_k ~ 0 at x=" << x << " (lambda=" << spec.lambda << ", gamma=" << spec.gamma
     << ", alpha=" << spec.alpha << ", N=" << spec.n_sites << "); nudge the parameter";
  throw gap_closing(os.str());
}

struct Sums {
  double ratio = 0.0;  // sum eps/omega
  double a = 0.0;      // sum cos x eps/omega
  double b = 0.0;      // sum sin^2 x / omega
  double zz_shift = 0.0;
};

inline CorrelatorSet assemble(const ChainSpec& spec, const Sums& s) {
  const double inv_n = 1.0 / static_cast<double>(spec.n_sites);
  const double b = spec.gamma * s.b;
  CorrelatorSet c;
  c.sz = s.ratio * inv_n;
  c.xx = -(s.a - b) * inv_n;
  c.yy = -(s.a + b) * inv_n;
  c.zz = c.sz * c.sz - c.xx * c.yy + s.zz_shift;
  return c;
}

// Sums over one grid. Paired modes (+x, -x) are evaluated once and doubled so
// that mirror-image terms cancel exactly.
//
// With the parity constraint enforced, a vacuum of the wrong parity is fixed
// by the cheaper of two moves: flipping the unpaired mode (cost 2 omega_u) or
// adding one quasiparticle to the softest pair (cost 2 omega_q). The latter
// leaves the pair singly occupied: it drops out of the mode sums, and the
// current it carries adds -4 sin^2(x_q) / N^2 to zz in either of the +-x_q
// states. Moves degenerate within kSectorDegeneracy are mixed equally.
inline SectorState solve_sector(const ChainSpec& spec, ModeGrid grid, bool enforce_parity) {
  const int n = spec.n_sites;
  Sums vac;
  double omega_sum = 0.0;
  std::vector<std::pair<double, int>> paired;  // (omega, k2)
  paired.reserve(static_cast<std::size_t>(n / 2));

  const int first = grid == ModeGrid::periodic ? 2 : 1;
  for (int k2 = first; k2 < n; k2 += 2) {
    const double x = momentum(k2, n);
    const Mode md = make_mode(spec, x);
    if (md.omega < kZeroMode) throw_gap(spec, x);
    const double r = md.eps / md.omega;
    vac.ratio += 2.0 * r;
    vac.a += 2.0 * md.c * r;
    vac.b += 2.0 * md.s2 / md.omega;
    omega_sum += 2.0 * md.omega;
    paired.emplace_back(md.omega, k2);
  }

  // Unpaired mode: x=0 on the integer grid, x=pi on the half grid.
  const double xu = grid == ModeGrid::periodic ? 0.0 : std::numbers::pi;
  const double cu = grid == ModeGrid::periodic ? 1.0 : -1.0;
  const double eps_u = spec.lambda - cu - 2.0 * spec.alpha;
  const double omega_u = std::abs(eps_u);
  omega_sum += omega_u;

  SectorState out;
  out.grid = grid;
  out.energy = -omega_sum;

  if (!enforce_parity) {
    if (omega_u < kZeroMode) throw_gap(spec, xu);
    const double ratio_u = eps_u / omega_u;
    vac.ratio += ratio_u;
    vac.a += cu * ratio_u;
    out.corr = assemble(spec, vac);
    return out;
  }

  // The odd sector needs the x=0 mode filled, the even sector the x=pi mode
  // empty; a zero mode takes whichever occupation the parity demands.
  const double required = grid == ModeGrid::periodic ? -1.0 : 1.0;
  const bool physical = omega_u < kZeroMode || (eps_u < 0.0 ? -1.0 : 1.0) == required;
  if (physical) {
    vac.ratio += required;
    vac.a += cu * required;
    out.corr = assemble(spec, vac);
    return out;
  }

  double cheapest = omega_u;
  for (const auto& p : paired) cheapest = std::min(cheapest, p.first);
  const double tol = 0.5 * kSectorDegeneracy;
  out.energy += 2.0 * cheapest;

  // Each option with its number of degenerate states.
  std::vector<std::pair<CorrelatorSet, int>> options;
  if (omega_u - cheapest <= tol) {
    Sums s = vac;
    s.ratio += required;
    s.a += cu * required;
    options.emplace_back(assemble(spec, s), 1);
    out.flipped = true;
  }
  for (const auto& [w, k2] : paired) {
    if (w - cheapest > tol) continue;
    const double x = momentum(k2, n);
    const Mode md = make_mode(spec, x);
    const double r = md.eps / md.omega;
    Sums s = vac;
    s.ratio += -required - 2.0 * r;
    s.a += -cu * required - 2.0 * md.c * r;
    s.b -= 2.0 * md.s2 / md.omega;
    s.zz_shift = -4.0 * md.s2 / (static_cast<double>(n) * static_cast<double>(n));
    options.emplace_back(assemble(spec, s), 2);
    out.quasiparticle = true;
  }
  CorrelatorSet avg;
  out.degeneracy = 0;
  for (const auto& [c, d] : options) {
    avg.sz += d * c.sz;
    avg.xx += d * c.xx;
    avg.yy += d * c.yy;
    avg.zz += d * c.zz;
    out.degeneracy += d;
  }
  const double inv = 1.0 / static_cast<double>(out.degeneracy);
  out.corr = {avg.sz * inv, avg.xx * inv, avg.yy * inv, avg.zz * inv};
  return out;
}

// Equal-weight mixture over all degenerate states of both sectors.
inline CorrelatorSet mix(const SectorState& a, const SectorState& b) {
  const double wa = static_cast<double>(a.degeneracy) / static_cast<double>(a.degeneracy + b.degeneracy);
  const double wb = 1.0 - wa;
  return {wa * a.corr.sz + wb * b.corr.sz, wa * a.corr.xx + wb * b.corr.xx, wa * a.corr.yy + wb * b.corr.yy,
          wa * a.corr.zz + wb * b.corr.zz};
}

inline CorrelatorSet ground_correlators(const ChainSpec& spec) {
  const SectorState odd = solve_sector(spec, ModeGrid::periodic, true);
  const SectorState even = solve_sector(spec, ModeGrid::antiperiodic, true);
  if (std::abs(odd.energy - even.energy) <= kSectorDegeneracy) return mix(odd, even);
  return odd.energy < even.energy ? odd.corr : even.corr;
}

}  // namespace detail

// x_k, eps_k and omega_k on the chosen grid. Defaults to the integer grid.
inline ModeData mode_data(const ChainSpec& spec, ModeGrid grid = ModeGrid::periodic) {
  check(spec);
  ModeData out;
  out.m = (spec.n_sites - 1) / 2;
  out.grid = grid;
  out.x.reserve(spec.n_sites);
  out.eps.reserve(spec.n_sites);
  out.omega.reserve(spec.n_sites);
  for (int k = -out.m; k <= out.m; ++k) {
    const int k2 = grid == ModeGrid::periodic ? 2 * k : 2 * k + 1;
    const double x = detail::momentum(k2, spec.n_sites);
    const detail::Mode md = detail::make_mode(spec, x);
    out.x.push_back(x);
    out.eps.push_back(md.eps);
    out.omega.push_back(md.omega);
  }
  return out;
}

// Parity-resolved ground state of one sector.
inline SectorState sector_state(const ChainSpec& spec, ModeGrid grid) {
  check(spec);
  return detail::solve_sector(spec, grid, true);
}

inline CorrelatorSet correlators(const ChainSpec& spec) {
  check(spec);
  switch (spec.sector) {
    case Sector::periodic:
      return detail::solve_sector(spec, ModeGrid::periodic, false).corr;
    case Sector::antiperiodic:
      return detail::solve_sector(spec, ModeGrid::antiperiodic, false).corr;
    case Sector::ground:
      break;
  }
  return detail::ground_correlators(spec);
}

// G_r for r = -1 (xx) or r = +1 (yy). Longer separations need Toeplitz
// determinants and are not provided.
inline double g_correlator(const ChainSpec& spec, int r) {
  if (r != 1 && r != -1) throw invalid_spec("only nearest-neighbour G_r (r = -1, +1) is available");
  const CorrelatorSet c = correlators(spec);
  return r == -1 ? c.xx : c.yy;
}

inline XState reduced_density(const CorrelatorSet& c) {
  XState s;
  s.u11 = (1.0 + 2.0 * c.sz + c.zz) / 4.0;
  s.u22 = (1.0 - c.zz) / 4.0;
  s.u33 = s.u22;
  s.u44 = (1.0 - 2.0 * c.sz + c.zz) / 4.0;
  s.u14 = (c.xx - c.yy) / 4.0;
  s.u23 = (c.xx + c.yy) / 4.0;
  return validated(s);
}

inline XState reduced_density(const ChainSpec& spec) { return reduced_density(correlators(spec)); }

}  // namespace qcrit::chain
