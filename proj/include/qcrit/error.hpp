#pragma once

#include <stdexcept>
#include <string>

namespace qcrit {

// Density-matrix entries violate trace, sign or positivity constraints.
class invalid_state : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A model parameter set outside the supported domain (even N, negative field, ...).
class invalid_spec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Some quasiparticle energy omega_k vanished on the finite-N mode grid.
class gap_closing : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Adaptive quadrature did not reach the requested tolerance.
class quadrature_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical analysis of a series failed (short grid, plateau, singular fit).
class analysis_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcrit
