#pragma once

// Exact diagonalisation of small periodic chains, used as an independent
// oracle for the analytic solvers.
//
// Basis states are bit strings; bit j set means site j is spin down, so
// sigma^z_j = 1 - 2 b_j. Both Hamiltonians are translation invariant and
// conserve either the parity of down spins (XYT family) or their number
// (XXZ), so H is block-diagonalised in (charge, momentum) blocks built from
// translation orbits. Each block is solved densely; ground vectors are mapped
// back to the full 2^N space and verified there.
//
//   xyt_family: H = -sum [ (1+g)/2 sx sx + (1-g)/2 sy sy + l sz ]
//                   -a sum [ sx sz sx + sy sz sy ]        (three-spin, j-1,j,j+1)
//   xxz:        H =  sum [ Sx Sx + Sy Sy + d Sz Sz ],  S = sigma / 2

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcrit/error.hpp"
#include "qcrit/xstate.hpp"

namespace qcrit::ed {

enum class EdModel { xyt_family, xxz };

struct EdSpec {
  EdModel model = EdModel::xyt_family;
  double lambda = 0.0;
  double gamma = 1.0;
  double alpha = 0.0;
  double delta = 0.0;
  int n_sites = 9;
  double degeneracy_tol = 1e-9;
};

inline EdSpec xyt_spec(double lambda, double gamma, double alpha, int n_sites) {
  EdSpec s;
  s.model = EdModel::xyt_family;
  s.lambda = lambda;
  s.gamma = gamma;
  s.alpha = alpha;
  s.n_sites = n_sites;
  return s;
}

inline EdSpec xxz_spec(double delta, int n_sites) {
  EdSpec s;
  s.model = EdModel::xxz;
  s.delta = delta;
  s.n_sites = n_sites;
  return s;
}

using Vector = Eigen::VectorXcd;

struct GroundSpace {
  int n_sites = 0;
  double energy = 0.0;
  // Orthonormal ground vectors in the full 2^N basis.
  std::vector<Vector> states;
  // Largest residual |H v - E v| over the returned vectors.
  double max_residual = 0.0;
};

inline constexpr int kMinSites = 3;
inline constexpr int kMaxSites = 14;
inline constexpr double kResidualTolerance = 1e-9;
inline constexpr double kStructureTolerance = 1e-9;

inline void check(const EdSpec& spec) {
  if (spec.n_sites < kMinSites || spec.n_sites > kMaxSites) {
    std::ostringstream os;
    os << "ED supports " << kMinSites << " <= N <= " << kMaxSites << " (dimension <= 2^" << kMaxSites
       << "), got N=" << spec.n_sites;
    throw invalid_spec(os.str());
  }
  for (double v : {spec.lambda, spec.gamma, spec.alpha, spec.delta}) {
    if (!std::isfinite(v)) throw invalid_spec("ED parameters must be finite");
  }
  if (!(spec.degeneracy_tol >= 0.0)) throw invalid_spec("degeneracy_tol must be non-negative");
}

namespace detail {

using State = std::uint32_t;
using cd = std::complex<double>;

inline double sz(State s, int j) { return ((s >> j) & 1U) ? -1.0 : 1.0; }

inline State flip2(State s, int i, int j) { return s ^ ((State{1} << i) | (State{1} << j)); }

inline bool parallel(State s, int i, int j) { return ((s >> i) & 1U) == ((s >> j) & 1U); }

// Applies H to one basis state: returns the diagonal element and calls
// emit(target, amplitude) for every off-diagonal term.
template <class Emit>
double apply_hamiltonian(const EdSpec& spec, State s, Emit&& emit) {
  const int n = spec.n_sites;
  double diag = 0.0;
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    if (spec.model == EdModel::xyt_family) {
      diag -= spec.lambda * sz(s, j);
      // (1+g)/2 xx + (1-g)/2 yy flips parallel pairs with g, antiparallel with 1.
      const double amp = parallel(s, j, jp) ? -spec.gamma : -1.0;
      if (amp != 0.0) emit(flip2(s, j, jp), amp);
      // xzx + yzy flips antiparallel (j-1, j+1) pairs with 2 sz_j.
      if (spec.alpha != 0.0) {
        const int jm = (j + n - 1) % n;
        if (!parallel(s, jm, jp)) emit(flip2(s, jm, jp), -2.0 * spec.alpha * sz(s, j));
      }
    } else {
      diag += 0.25 * spec.delta * sz(s, j) * sz(s, jp);
      if (!parallel(s, j, jp)) emit(flip2(s, j, jp), 0.5);
    }
  }
  return diag;
}

inline State rotate(State s, int n) {
  const State mask = (State{1} << n) - 1;
  return ((s << 1) | (s >> (n - 1))) & mask;
}

// Charge conserved by the model: parity or number of down spins.
inline int charge(const EdSpec& spec, State s) {
  const int pop = std::popcount(s);
  return spec.model == EdModel::xyt_family ? pop % 2 : pop;
}

inline int charge_count(const EdSpec& spec) {
  return spec.model == EdModel::xyt_family ? 2 : spec.n_sites + 1;
}

// Translation orbits: representative (smallest member), period, and for each
// state its representative and shift l with T^l s = rep.
struct Orbits {
  std::vector<State> rep_of;
  std::vector<int> shift_of;
  std::vector<int> period_of;  // indexed by state, valid for representatives
  std::vector<State> reps;
};

inline Orbits build_orbits(int n) {
  const State dim = State{1} << n;
  Orbits o;
  o.rep_of.assign(dim, 0);
  o.shift_of.assign(dim, 0);
  o.period_of.assign(dim, 0);
  std::vector<bool> seen(dim, false);
  for (State s = 0; s < dim; ++s) {
    if (seen[s]) continue;
    // s is the smallest member of its orbit because all smaller states were
    // visited already.
    o.reps.push_back(s);
    State t = s;
    int period = 0;
    do {
      seen[t] = true;
      o.rep_of[t] = s;
      // t = T^period s, so T^(n - period) t = s.
      o.shift_of[t] = (n - period) % n;
      t = rotate(t, n);
      ++period;
    } while (t != s);
    o.period_of[s] = period;
  }
  return o;
}

struct Block {
  int charge = 0;
  int q = 0;  // momentum k = 2 pi q / N
  std::vector<State> basis;
  std::vector<int> index_of_rep;  // -1 when absent, indexed by state
};

inline bool compatible(int q, int period, int n) { return (q * period) % n == 0; }

inline Eigen::MatrixXcd block_matrix(const EdSpec& spec, const Orbits& o, const Block& b) {
  const int n = spec.n_sites;
  const int dim = static_cast<int>(b.basis.size());
  const double k = 2.0 * std::numbers::pi * b.q / n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    const State s = b.basis[a];
    const double ra = o.period_of[s];
    const double diag = apply_hamiltonian(spec, s, [&](State t, double amp) {
      const State r = o.rep_of[t];
      const int idx = b.index_of_rep[r];
      if (idx < 0) return;
      const int l = o.shift_of[t];
      const double rb = o.period_of[r];
      h(idx, a) += amp * std::polar(1.0, -k * l) * std::sqrt(ra / rb);
    });
    h(a, a) += diag;
  }
  return h;
}

inline std::vector<Block> build_blocks(const EdSpec& spec, const Orbits& o) {
  const int n = spec.n_sites;
  const State dim = State{1} << n;
  std::vector<Block> blocks;
  for (int c = 0; c < charge_count(spec); ++c) {
    for (int q = 0; q < n; ++q) {
      Block b;
      b.charge = c;
      b.q = q;
      b.index_of_rep.assign(dim, -1);
      for (State r : o.reps) {
        if (charge(spec, r) != c || !compatible(q, o.period_of[r], n)) continue;
        b.index_of_rep[r] = static_cast<int>(b.basis.size());
        b.basis.push_back(r);
      }
      if (!b.basis.empty()) blocks.push_back(std::move(b));
    }
  }
  return blocks;
}

// Full-space vector of a block eigenvector: psi(T^r a) = c_a e^{-ikr} / sqrt(R_a).
inline Vector expand(const EdSpec& spec, const Orbits& o, const Block& b, const Eigen::VectorXcd& c) {
  const int n = spec.n_sites;
  const double k = 2.0 * std::numbers::pi * b.q / n;
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(State{1} << n));
  for (std::size_t a = 0; a < b.basis.size(); ++a) {
    State t = b.basis[a];
    const int period = o.period_of[t];
    const double norm = 1.0 / std::sqrt(static_cast<double>(period));
    for (int r = 0; r < period; ++r) {
      psi[t] = c[static_cast<Eigen::Index>(a)] * std::polar(norm, -k * r);
      t = rotate(t, n);
    }
  }
  return psi;
}

inline Vector apply_full(const EdSpec& spec, const Vector& v) {
  Vector out = Vector::Zero(v.size());
  for (Eigen::Index s = 0; s < v.size(); ++s) {
    const cd vs = v[s];
    if (vs == cd(0.0)) continue;
    const double diag = apply_hamiltonian(spec, static_cast<State>(s), [&](State t, double amp) {
      out[t] += amp * vs;
    });
    out[s] += diag * vs;
  }
  return out;
}

}  // namespace detail

// Lowest eigenvalue and every eigenvector within degeneracy_tol of it.
inline GroundSpace ground_space(const EdSpec& spec) {
  check(spec);
  const detail::Orbits orbits = detail::build_orbits(spec.n_sites);
  const std::vector<detail::Block> blocks = detail::build_blocks(spec, orbits);

  // Pass 1: spectra only.
  std::vector<Eigen::VectorXd> spectra;
  spectra.reserve(blocks.size());
  double e0 = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(detail::block_matrix(spec, orbits, b),
                                                       Eigen::EigenvaluesOnly);
    spectra.push_back(es.eigenvalues());
    e0 = std::min(e0, es.eigenvalues()[0]);
  }

  // Pass 2: vectors from blocks that reach the ground level.
  GroundSpace gs;
  gs.n_sites = spec.n_sites;
  gs.energy = e0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (spectra[i][0] > e0 + spec.degeneracy_tol) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(detail::block_matrix(spec, orbits, blocks[i]));
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
      if (es.eigenvalues()[j] > e0 + spec.degeneracy_tol) break;
      gs.states.push_back(detail::expand(spec, orbits, blocks[i], es.eigenvectors().col(j)));
    }
  }

  for (const auto& v : gs.states) {
    const double e = std::real(v.dot(detail::apply_full(spec, v)));
    const double res = (detail::apply_full(spec, v) - e * v).norm();
    gs.max_residual = std::max(gs.max_residual, res);
  }
  if (gs.max_residual > kResidualTolerance) {
    std::ostringstream os;
    os << "ED residual " << gs.max_residual << " exceeds " << kResidualTolerance;
    throw std::runtime_error(os.str());
  }
  return gs;
}

// Hamiltonian applied to a full-space vector (for residual and variational
// checks by callers).
inline Vector apply(const EdSpec& spec, const Vector& v) {
  check(spec);
  return detail::apply_full(spec, v);
}

// Two-site reduced density matrix of the equal-weight ground mixture. Index
// 2 b_i + b_j, so 0 = up up and 3 = down down.
inline Eigen::Matrix4cd reduced_density_matrix(const GroundSpace& gs, int site_i, int site_j) {
  const int n = gs.n_sites;
  if (site_i == site_j || site_i < 0 || site_j < 0 || site_i >= n || site_j >= n) {
    throw invalid_spec("reduced density needs two distinct sites inside the chain");
  }
  if (gs.states.empty()) throw invalid_spec("empty ground space");
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  const detail::State bi = detail::State{1} << site_i;
  const detail::State bj = detail::State{1} << site_j;
  const detail::State dim = detail::State{1} << n;
  for (const auto& v : gs.states) {
    for (detail::State s = 0; s < dim; ++s) {
      if ((s & bi) || (s & bj)) continue;
      const std::complex<double> amp[4] = {v[s], v[s | bj], v[s | bi], v[s | bi | bj]};
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) rho(a, b) += amp[a] * std::conj(amp[b]);
      }
    }
  }
  return rho / static_cast<double>(gs.states.size());
}

// Projects onto an XState after checking Hermiticity, reality and that every
// entry off the X pattern vanishes.
inline XState to_xstate(const Eigen::Matrix4cd& rho) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const double imag = rho.imag().cwiseAbs().maxCoeff();
  double off_x = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a != b && a + b != 3) off_x = std::max(off_x, std::abs(rho(a, b)));
    }
  }
  if (herm > kStructureTolerance || imag > kStructureTolerance || off_x > kStructureTolerance) {
    std::ostringstream os;
    os << "reduced density is not a real X state (hermiticity " << herm << ", imaginary " << imag
       << ", off-X " << off_x << ")";
    throw invalid_state(os.str());
  }
  XState x;
  x.u11 = rho(0, 0).real();
  x.u22 = rho(1, 1).real();
  x.u33 = rho(2, 2).real();
  x.u44 = rho(3, 3).real();
  x.u14 = rho(0, 3).real();
  x.u23 = rho(1, 2).real();
  return validated(x);
}

inline XState reduced_density(const GroundSpace& gs, int site_i, int site_j) {
  return to_xstate(reduced_density_matrix(gs, site_i, site_j));
}

}  // namespace qcrit::ed
