#include "doctest.h"

#include <cmath>

#include <strongconv/families.hpp>
#include <strongconv/random.hpp>
#include <strongconv/recovery.hpp>

using namespace strongconv;

namespace {

Cmat diag2(double a, double b) {
  Cmat m = Cmat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_SUITE("recovery") {

TEST_CASE("recovery map restores the reference state") {
  QuantumOperation phi = amplitude_damping(0.25);
  State sigma{diag2(0.6, 0.4)};
  PetzMap pm = petz_map(phi, sigma);
  CHECK(pm.theta.is_channel());
  Cmat back = pm.theta.apply_matrix(phi.apply_matrix(sigma.matrix()));
  CHECK(trace_norm(back - sigma.matrix()) < 1e-12);
  // Dual unitality on the support of the pushed-forward reference.
  Cmat dual_id = pm.theta.dual_apply(Cmat::Identity(2, 2));
  Projector supp = support_projector(phi.apply(sigma.positive()));
  CHECK((dual_id - supp.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("recovery of a unitary channel is its inverse") {
  Rng rng(7);
  for (Index d : {2, 3, 4}) {
    Cmat u = random_unitary(rng, d);
    PetzMap pm = petz_map(unitary_channel(u), default_faithful_state(d));
    CHECK(strong_distance(pm.theta, unitary_channel(Cmat(u.adjoint()))) <
          1e-10);
  }
}

TEST_CASE("rank deficient forward output yields a strict operation") {
  // Constant map onto a pure state: the forward image has rank one.
  Cmat pure = diag2(1.0, 0.0);
  QuantumOperation phi = constant_output_channel(State(pure));
  State sigma{diag2(0.5, 0.5)};
  PetzMap pm = petz_map(phi, sigma);
  CHECK_FALSE(pm.theta.is_channel());
  Cmat dual_id = pm.theta.dual_apply(Cmat::Identity(2, 2));
  CHECK((dual_id - pure).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("unfaithful references are rejected") {
  QuantumOperation phi = amplitude_damping(0.25);
  CHECK_THROWS_AS(petz_map(phi, State(diag2(1.0, 0.0))), PreconditionViolated);
}

TEST_CASE("interpolated references approach the base recovery map") {
  QuantumOperation phi = amplitude_damping(0.3);
  State rho{diag2(0.2, 0.8)};
  State sigma{diag2(0.7, 0.3)};
  PetzMap base = petz_map(phi, sigma);
  CHECK_THROWS_AS(petz_interpolated(phi, rho, sigma, 0.0), InvalidInput);
  CHECK_THROWS_AS(petz_interpolated(phi, rho, sigma, 1.0), InvalidInput);
  double prev = 1e300;
  for (double t : {1e-2, 1e-4, 1e-6}) {
    PetzMap interp = petz_interpolated(phi, rho, sigma, t);
    double dist = strong_distance(interp.theta, base.theta);
    CHECK(dist < prev + 1e-12);
    prev = dist;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("saturation of data processing matches recoverability") {
  // Unitary channels lose nothing, so the gap closes and recovery succeeds.
  Cmat h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  ReversibilityReport uni = reversibility_test(
      unitary_channel(h), State(diag2(0.3, 0.7)), State(diag2(0.6, 0.4)));
  CHECK_FALSE(uni.vacuous);
  CHECK(uni.saturated);
  CHECK(uni.recovered);
  CHECK(uni.consistent);

  // Heavy damping on distinguishable states keeps a strict gap.
  ReversibilityReport lossy = reversibility_test(
      amplitude_damping(0.5), State(Cmat(Cmat::Ones(2, 2) / 2.0)),
      State(diag2(0.5, 0.5)));
  CHECK_FALSE(lossy.vacuous);
  CHECK(lossy.gap > 1e-3);
  CHECK_FALSE(lossy.saturated);
  CHECK_FALSE(lossy.recovered);
  CHECK(lossy.consistent);
}

TEST_CASE("interpolation identity for the divergence") {
  Rng rng(13);
  for (int k = 0; k < 25; ++k) {
    State rho = random_faithful_state(rng, 3);
    State sigma = random_faithful_state(rng, 3);
    double t = 0.05 + 0.9 * rng.uniform();
    DonaldReport rep = donald_identity_check(rho, sigma, t);
    REQUIRE(rep.finite);
    CHECK(rep.residual <= 1e-9);
  }
  // Infinite divergence is reported, not silently averaged away.
  DonaldReport inf = donald_identity_check(State(diag2(0.0, 1.0)),
                                           State(diag2(1.0, 0.0)), 0.5);
  CHECK_FALSE(inf.finite);
}

TEST_CASE("fitting a reversing channel for an invertible map") {
  Rng rng(19);
  Cmat u = random_unitary(rng, 2);
  QuantumOperation phi = unitary_channel(u);
  std::vector<State> family{State(diag2(0.3, 0.7)),
                            State(Cmat(Cmat::Ones(2, 2) / 2.0)),
                            default_faithful_state(2)};
  FitOptions opts;
  opts.restarts = 6;
  opts.seed = 3;
  ReversingFit fit = fit_reversing_channel(phi, family, opts);
  CHECK(fit.residual < 1e-7);
  REQUIRE(fit.per_state.size() == family.size());
  CHECK(strong_distance(fit.fit.fitted, unitary_channel(Cmat(u.adjoint()))) <
        1e-6);
}

TEST_CASE("sequences of reversing maps pass to the limit") {
  const Index d = 2;
  Rng rng(23);
  Cmat u = random_unitary(rng, d);
  ChannelSequence phi_seq(
      [u, d](Index n) {
        return QuantumOperation({rotation_matrix(d, 1.0 / double(n)) * u},
                                OpKind::channel);
      },
      d, d, std::nullopt, "drifting-unitary");
  ChannelSequence psi_seq(
      [u, d](Index n) {
        Cmat v = rotation_matrix(d, 1.0 / double(n)) * u;
        return QuantumOperation({Cmat(v.adjoint())}, OpKind::channel);
      },
      d, d, std::nullopt, "drifting-inverse");
  std::vector<State> family{State(diag2(0.3, 0.7)), default_faithful_state(d)};
  ReversingSequenceReport rep = reversing_sequence_harness(
      phi_seq, psi_seq, family, dense_indices(1, 200));
  CHECK(rep.per_index_ok);
  CHECK(rep.worst_per_index < 1e-10);
  CHECK(rep.phi_extraction.success);
  CHECK(rep.psi_extraction.success);
  CHECK(rep.support_rank == d);
  CHECK(rep.passed);
}

}  // TEST_SUITE
