#pragma once

// Uniform access to the model solvers: one parameter point in, one two-site
// state and its measures out.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcrit/error.hpp"
#include "qcrit/free_fermion.hpp"
#include "qcrit/lmg.hpp"
#include "qcrit/xstate.hpp"
#include "qcrit/xxz.hpp"

namespace qcrit {

enum class Model { ising, xy, xyt, xxz, lmg };

struct ModelPoint {
  double lambda = 0.0;
  double gamma = 1.0;
  double alpha = 0.0;
  double delta = 0.0;
  int n_sites = 2001;
  lmg::ModePair mode_pair = lmg::ModePair::same_mode;
  chain::Sector sector = chain::Sector::ground;
};

struct Evaluation {
  XState state;
  MeasureSet measures;
};

inline constexpr std::array<std::string_view, 5> kModelNames = {"ising", "xy", "xyt", "xxz", "lmg"};
inline constexpr std::array<std::string_view, 6> kMeasureNames = {"eof", "qd", "cc", "mid", "chsh", "mi"};
inline constexpr std::array<std::string_view, 4> kParameterNames = {"lambda", "gamma", "alpha", "delta"};

inline std::string_view to_string(Model m) { return kModelNames[static_cast<std::size_t>(m)]; }

inline Model parse_model(std::string_view name) {
  for (std::size_t i = 0; i < kModelNames.size(); ++i) {
    if (kModelNames[i] == name) return static_cast<Model>(i);
  }
  throw invalid_spec("unknown model '" + std::string(name) + "' (ising, xy, xyt, xxz, lmg)");
}

inline lmg::ModePair parse_mode_pair(std::string_view name) {
  if (name == "same" || name == "same_mode") return lmg::ModePair::same_mode;
  if (name == "different" || name == "different_mode") return lmg::ModePair::different_mode;
  throw invalid_spec("unknown mode pair '" + std::string(name) + "' (same, different)");
}

inline chain::Sector parse_sector(std::string_view name) {
  if (name == "ground") return chain::Sector::ground;
  if (name == "periodic") return chain::Sector::periodic;
  if (name == "antiperiodic") return chain::Sector::antiperiodic;
  throw invalid_spec("unknown sector '" + std::string(name) + "' (ground, periodic, antiperiodic)");
}

inline std::string_view to_string(chain::Sector s) {
  switch (s) {
    case chain::Sector::periodic: return "periodic";
    case chain::Sector::antiperiodic: return "antiperiodic";
    case chain::Sector::ground: break;
  }
  return "ground";
}

inline std::string_view to_string(lmg::ModePair p) {
  return p == lmg::ModePair::same_mode ? "same" : "different";
}

// Finite chains depend on N; the XXZ and LMG solutions do not.
inline bool uses_sites(Model m) { return m == Model::ising || m == Model::xy || m == Model::xyt; }

// Parameters the model actually reads.
inline std::vector<std::string_view> parameters_of(Model m) {
  switch (m) {
    case Model::ising: return {"lambda"};
    case Model::xy: return {"lambda", "gamma"};
    case Model::xyt: return {"lambda", "gamma", "alpha"};
    case Model::xxz: return {"delta"};
    case Model::lmg: return {"lambda"};
  }
  return {};
}

inline void check_measure(std::string_view name) {
  if (std::find(kMeasureNames.begin(), kMeasureNames.end(), name) == kMeasureNames.end()) {
    throw invalid_spec("unknown measure '" + std::string(name) + "' (eof, qd, cc, mid, chsh, mi)");
  }
}

inline double measure_value(const MeasureSet& m, std::string_view name) {
  if (name == "eof") return m.eof;
  if (name == "qd") return m.qd;
  if (name == "cc") return m.cc;
  if (name == "mid") return m.mid;
  if (name == "chsh") return m.chsh;
  if (name == "mi") return m.mutual_info;
  throw invalid_spec("unknown measure '" + std::string(name) + "'");
}

inline double& parameter_ref(ModelPoint& p, std::string_view name) {
  if (name == "lambda") return p.lambda;
  if (name == "gamma") return p.gamma;
  if (name == "alpha") return p.alpha;
  if (name == "delta") return p.delta;
  throw invalid_spec("unknown parameter '" + std::string(name) + "'");
}

inline void check_parameter(Model m, std::string_view name) {
  const auto ps = parameters_of(m);
  if (std::find(ps.begin(), ps.end(), name) == ps.end()) {
    throw invalid_spec("model " + std::string(to_string(m)) + " has no parameter '" + std::string(name) + "'");
  }
}

inline chain::ChainSpec chain_spec(Model m, const ModelPoint& p) {
  chain::ChainSpec s{p.lambda, p.gamma, p.alpha, p.n_sites, p.sector};
  if (m == Model::ising) {
    s.gamma = 1.0;
    s.alpha = 0.0;
  } else if (m == Model::xy) {
    s.alpha = 0.0;
  }
  return s;
}

inline Evaluation evaluate(Model m, const ModelPoint& p) {
  Evaluation e;
  switch (m) {
    case Model::ising:
    case Model::xy:
    case Model::xyt:
      e.state = chain::reduced_density(chain_spec(m, p));
      e.measures = measure_all(e.state);
      break;
    case Model::xxz:
      e.state = xxz::reduced_density(xxz::XxzSpec{p.delta});
      e.measures = measure_all(e.state);
      break;
    case Model::lmg: {
      const lmg::LmgSpec spec{p.lambda, p.mode_pair};
      e.state = lmg::density(spec);
      e.measures = lmg::measures(spec);
      break;
    }
  }
  return e;
}

}  // namespace qcrit
