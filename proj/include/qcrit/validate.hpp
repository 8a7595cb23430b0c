#pragma once

// Self-consistency checks of the solvers against independent references:
// exact diagonalisation, closed-form LMG expressions and analytic XXZ values.
// Solver entry points are injectable so that a deliberately broken solver can
// be shown to fail the suite.

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qcrit/ed.hpp"
#include "qcrit/free_fermion.hpp"
#include "qcrit/lmg.hpp"
#include "qcrit/xstate.hpp"
#include "qcrit/xxz.hpp"

namespace qcrit::validation {

struct Providers {
  std::function<chain::CorrelatorSet(const chain::ChainSpec&)> chain_correlators =
      [](const chain::ChainSpec& s) { return chain::correlators(s); };
  std::function<xxz::XxzCorrelators(const xxz::XxzSpec&)> xxz_correlators =
      [](const xxz::XxzSpec& s) { return xxz::correlators(s); };
};

struct CheckResult {
  std::string group;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Options {
  // Empty selects every group.
  std::vector<std::string> only;
  Providers providers;
};

inline const std::vector<std::string>& groups() {
  static const std::vector<std::string> g{"xstate", "chain", "ed", "xxz", "lmg"};
  return g;
}

// Largest element-wise difference between two X states.
inline double max_abs_diff(const XState& a, const XState& b) {
  return std::max({std::abs(a.u11 - b.u11), std::abs(a.u22 - b.u22), std::abs(a.u33 - b.u33),
                   std::abs(a.u44 - b.u44), std::abs(a.u14 - b.u14), std::abs(a.u23 - b.u23)});
}

namespace detail {

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

class Runner {
 public:
  explicit Runner(const Options& o) : opt_(o) {}

  bool enabled(const std::string& group) const {
    if (opt_.only.empty()) return true;
    return std::find(opt_.only.begin(), opt_.only.end(), group) != opt_.only.end();
  }

  // Runs body(); a thrown exception counts as a failure with its message.
  template <class Body>
  void check(const std::string& group, const std::string& name, Body&& body) {
    if (!enabled(group)) return;
    CheckResult r{group, group + "." + name, false, {}};
    try {
      std::string detail;
      r.passed = body(detail);
      r.detail = detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results_.push_back(std::move(r));
  }

  const Providers& providers() const { return opt_.providers; }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  const Options& opt_;
  std::vector<CheckResult> results_;
};

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace detail

inline std::vector<CheckResult> run(const Options& opt = {}) {
  for (const auto& g : opt.only) {
    if (std::find(groups().begin(), groups().end(), g) == groups().end()) {
      throw invalid_spec("unknown validation group '" + g + "' (xstate, chain, ed, xxz, lmg)");
    }
  }
  detail::Runner run(opt);
  const Providers& pv = opt.providers;
  const auto chain_state = [&](const chain::ChainSpec& s) { return chain::reduced_density(pv.chain_correlators(s)); };
  using detail::near;
  using detail::num;

  run.check("xstate", "uniform_quarter_state", [](std::string& d) {
    const MeasureSet m = measure_all({0.25, 0.25, 0.25, 0.25, 0.25, 0.25});
    d = "eof=" + num(m.eof) + " qd=" + num(m.qd) + " cc=" + num(m.cc) + " mid=" + num(m.mid) + " chsh=" + num(m.chsh);
    return near(m.eof, 0, 1e-12) && near(m.qd, 0, 1e-12) && near(m.cc, 1, 1e-12) && near(m.mid, 1, 1e-12) &&
           near(m.chsh, 2, 1e-12);
  });
  run.check("xstate", "bell_state", [](std::string& d) {
    const MeasureSet m = measure_all({0.5, 0, 0, 0.5, 0.5, 0});
    d = "chsh=" + num(m.chsh);
    return near(m.eof, 1, 1e-12) && near(m.qd, 1, 1e-12) && near(m.cc, 1, 1e-12) && near(m.mid, 1, 1e-12) &&
           near(m.chsh, 2 * std::numbers::sqrt2, 1e-12);
  });

  run.check("chain", "ising_zero_field", [&](std::string& d) {
    const XState s = chain_state(chain::ising(0.0, 2001));
    const XState ref{0.25, 0.25, 0.25, 0.25, 0.25, 0.25};
    const double diff = max_abs_diff(s, ref);
    d = "max |rho - rho_ref| = " + num(diff);
    return diff <= 1e-9;
  });
  run.check("chain", "polarised_limit", [&](std::string& d) {
    const chain::CorrelatorSet c = pv.chain_correlators(chain::ising(100.0, 201));
    d = "sz=" + num(c.sz) + " xx=" + num(c.xx) + " yy=" + num(c.yy);
    // Transverse correlators decay only like 1/(2 lambda).
    return near(c.sz, 1, 1e-3) && near(c.xx, 0, 1e-2) && near(c.yy, 0, 1e-2);
  });
  run.check("chain", "gamma_mirror_symmetry", [&](std::string& d) {
    const MeasureSet a = measure_all(chain_state(chain::xy(0.4, 0.3, 501)));
    const MeasureSet b = measure_all(chain_state(chain::xy(0.4, -0.3, 501)));
    const double diff = std::max({std::abs(a.eof - b.eof), std::abs(a.qd - b.qd), std::abs(a.cc - b.cc),
                                  std::abs(a.mid - b.mid), std::abs(a.chsh - b.chsh)});
    d = "max measure difference " + num(diff);
    return diff <= 1e-12;
  });

  run.check("ed", "ising_zero_field_mixture", [](std::string& d) {
    const auto gs = ed::ground_space(ed::xyt_spec(0.0, 1.0, 0.0, 9));
    const XState s = ed::reduced_density(gs, 0, 1);
    const double diff = max_abs_diff(s, {0.25, 0.25, 0.25, 0.25, 0.25, 0.25});
    d = "degeneracy " + std::to_string(gs.states.size()) + ", max diff " + num(diff);
    return diff <= 1e-9;
  });
  run.check("ed", "chain_vs_ed", [&](std::string& d) {
    double worst = 0.0;
    std::string where;
    for (int n : {9, 11, 13}) {
      for (double l : {0.3, 0.8, 1.5}) {
        for (double g : {0.5, 1.0}) {
          const XState e = ed::reduced_density(ed::ground_space(ed::xyt_spec(l, g, 0.0, n)), 0, 1);
          const XState f = chain_state(chain::xy(l, g, n));
          const double diff = max_abs_diff(e, f);
          if (diff > worst) {
            worst = diff;
            where = " at N=" + std::to_string(n) + " lambda=" + num(l) + " gamma=" + num(g);
          }
        }
      }
    }
    d = "max element difference " + num(worst) + where;
    return worst <= 1e-6;
  });
  run.check("ed", "xxz_ferromagnet", [](std::string& d) {
    double worst = 0.0;
    for (int n = 4; n <= 12; ++n) {
      const XState s = ed::reduced_density(ed::ground_space(ed::xxz_spec(-2.0, n)), 0, 1);
      const double zz = s.u11 + s.u44 - s.u22 - s.u33;
      const double xx = 2.0 * s.u23;
      worst = std::max({worst, std::abs(zz - 1.0), std::abs(xx)});
    }
    d = "max |(zz, xx) - (1, 0)| over N=4..12: " + num(worst);
    return worst <= 1e-9;
  });

  run.check("xxz", "free_point", [&](std::string& d) {
    const xxz::XxzCorrelators c = pv.xxz_correlators({0.0});
    const double pi = std::numbers::pi;
    d = "xx=" + num(c.xx) + " zz=" + num(c.zz);
    return near(c.xx, -2.0 / pi, 1e-8) && near(c.zz, -4.0 / (pi * pi), 1e-6);
  });
  run.check("xxz", "heisenberg_limit", [&](std::string& d) {
    const double ref = (1.0 - 4.0 * std::numbers::ln2) / 3.0;
    double worst = 0.0;
    for (double delta : {1.0 - 1e-3, 1.0 + 1e-3}) {
      const xxz::XxzCorrelators c = pv.xxz_correlators({delta});
      worst = std::max({worst, std::abs(c.zz - ref), std::abs(c.xx - ref)});
    }
    d = "max deviation from (1 - 4 ln 2)/3: " + num(worst);
    return worst <= 2e-3;
  });
  run.check("xxz", "ferromagnet", [&](std::string& d) {
    const xxz::XxzCorrelators c = pv.xxz_correlators({-2.0});
    d = "zz=" + num(c.zz) + " xx=" + num(c.xx);
    return c.zz == 1.0 && c.xx == 0.0;
  });

  run.check("lmg", "chsh_closed_form", [](std::string& d) {
    double worst = 0.0;
    for (auto pair : {lmg::ModePair::same_mode, lmg::ModePair::different_mode}) {
      for (int i = 0; i <= 2000; ++i) {
        const lmg::LmgSpec s{i * 1e-3, pair};
        worst = std::max(worst, std::abs(chsh(lmg::density(s)) - lmg::chsh_closed_form(s)));
      }
    }
    d = "max |chsh - closed form| = " + num(worst);
    return worst <= 1e-12;
  });
  run.check("lmg", "measure_identities", [](std::string& d) {
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double l = i * 1e-3;
      const MeasureSet same = measure_all(lmg::density({l, lmg::ModePair::same_mode}));
      const MeasureSet diff = lmg::measures({l, lmg::ModePair::different_mode});
      worst = std::max({worst, std::abs(same.eof - same.qd), std::abs(same.qd - same.cc),
                        std::abs(same.cc - same.mid), std::abs(diff.eof), std::abs(diff.qd),
                        std::abs(diff.cc), std::abs(diff.mid)});
    }
    d = "max violation " + num(worst);
    return worst <= 1e-9;
  });

  return run.take();
}

inline bool all_passed(const std::vector<CheckResult>& r) {
  return std::all_of(r.begin(), r.end(), [](const CheckResult& c) { return c.passed; });
}

// Wraps a chain solver with the sign of G_r flipped (a mutation for testing).
inline Providers with_flipped_g_sign(Providers p) {
  auto inner = p.chain_correlators;
  p.chain_correlators = [inner](const chain::ChainSpec& s) {
    chain::CorrelatorSet c = inner(s);
    c.xx = -c.xx;
    c.yy = -c.yy;
    return c;
  };
  return p;
}

}  // namespace qcrit::validation
