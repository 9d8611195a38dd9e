#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <stdexcept>
#include <string>

namespace strongconv {

using cplx = std::complex<double>;
using Cmat = Eigen::MatrixXcd;
using Cvec = Eigen::VectorXcd;
using Rvec = Eigen::VectorXd;
using Index = Eigen::Index;

// Numerical knobs used across the library. Every check that compares against
// one of these records which value it used, so reports stay reproducible.
struct Tolerances {
  double herm = 1e-10;        // max-entry Hermiticity defect accepted on construction
  double psd = 1e-10;         // eigenvalue floor: lambda_min >= -psd
  double trace = 1e-10;       // |trace - 1| accepted for states
  double supp = 1e-12;        // eigenvalue cutoff defining numerical support
  double supp_defect = 1e-10; // mass outside a support that flips a divergence to +inf
  double rank = 1e-10;        // Choi eigenvalue cutoff defining the minimal Kraus list
  double membership = 1e-8;   // slack on the compatibility-matrix bound M <= I
  double cauchy = 1e-7;       // stabilization tolerance for limit estimates
  double cluster = 0.25;      // relative radius used to isolate the tail cluster
  double gap = 1e-6;          // dual-ladder gap threshold
  double rev = 1e-6;          // reversibility equivalence threshold
  double cert = 1e-6;         // certification residual threshold
  double roundtrip = 1e-8;    // forward/inverse residual accepted as exact
  double conv = 1e-6;         // terminal deviation accepted by convergence harnesses
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed or ill-typed input: wrong dimensions, broken schema, bad flags.
struct InvalidInput : Error {
  using Error::Error;
};
// Input is well formed but violates a stated hypothesis of the operation.
struct PreconditionViolated : Error {
  using Error::Error;
};
// Kraus data that fails the trace-non-increasing bound.
struct NotAnOperation : InvalidInput {
  using InvalidInput::InvalidInput;
};
// No element satisfying the request exists at this truncation.
struct Infeasible : Error {
  using Error::Error;
};
struct Unsupported : Error {
  using Error::Error;
};

inline Cmat hermitize(const Cmat& m) { return 0.5 * (m + m.adjoint()); }

inline double herm_defect(const Cmat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Cmat kron(const Cmat& a, const Cmat& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

// Hermitian eigensystem with eigenvalues sorted non-increasing. Eigen returns
// the increasing order; most constructions here want the largest first.
struct EigenSystem {
  Rvec values;   // non-increasing
  Cmat vectors;  // columns match values
};

EigenSystem eig_desc(const Cmat& hermitian);

}  // namespace strongconv
