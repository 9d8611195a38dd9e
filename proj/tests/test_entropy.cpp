#include "doctest.h"

#include <cmath>

#include <strongconv/entropy.hpp>
#include <strongconv/families.hpp>
#include <strongconv/random.hpp>

using namespace strongconv;

namespace {

constexpr double kLn2 = 0.69314718055994531;

Cmat diag2(double a, double b) {
  Cmat m = Cmat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Cmat ghz_matrix() {
  Cvec v = Cvec::Zero(8);
  v(0) = v(7) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("von neumann entropy on known spectra") {
  CHECK(von_neumann_entropy(PositiveOperator(diag2(1.0, 0.0))) ==
        doctest::Approx(0.0).epsilon(1e-13));
  CHECK(von_neumann_entropy(PositiveOperator(diag2(0.5, 0.5))) ==
        doctest::Approx(kLn2).epsilon(1e-13));
  CHECK(von_neumann_entropy(default_faithful_state(2).positive()) ==
        doctest::Approx(0.63651416829481282).epsilon(1e-12));
}

TEST_CASE("relative entropy on frozen pairs") {
  PositiveOperator flat(diag2(0.5, 0.5));
  ExtendedReal self = relative_entropy(flat, flat);
  REQUIRE_FALSE(self.infinite);
  CHECK(std::abs(self.value) < 1e-12);

  ExtendedReal pure_vs_flat =
      relative_entropy(PositiveOperator(diag2(1.0, 0.0)), flat);
  REQUIRE_FALSE(pure_vs_flat.infinite);
  CHECK(pure_vs_flat.value == doctest::Approx(kLn2).epsilon(1e-12));

  // Half ln(4/3): the even-vs-(1/4, 3/4) comparison.
  ExtendedReal skew =
      relative_entropy(flat, PositiveOperator(diag2(0.25, 0.75)));
  REQUIRE_FALSE(skew.infinite);
  CHECK(skew.value ==
        doctest::Approx(0.14384103622589043).epsilon(1e-11));
}

TEST_CASE("relative entropy detects support escape") {
  ExtendedReal inf = relative_entropy(PositiveOperator(diag2(0.0, 1.0)),
                                      PositiveOperator(diag2(1.0, 0.0)));
  CHECK(inf.infinite);
  CHECK(inf.support_defect == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("relative entropy extension conventions") {
  // Value at rho = 0 is tr sigma.
  ExtendedReal zero = relative_entropy(PositiveOperator(Cmat::Zero(2, 2)),
                                       PositiveOperator(2.0 * Cmat::Identity(2, 2)));
  REQUIRE_FALSE(zero.infinite);
  CHECK(zero.value == doctest::Approx(4.0).epsilon(1e-12));

  // Degree-one homogeneity on jointly scaled pairs.
  PositiveOperator rho(diag2(0.6, 0.4));
  PositiveOperator sig(diag2(0.2, 0.8));
  double base = relative_entropy(rho, sig).value;
  PositiveOperator rho3(3.0 * rho.matrix());
  PositiveOperator sig3(3.0 * sig.matrix());
  CHECK(relative_entropy(rho3, sig3).value ==
        doctest::Approx(3.0 * base).epsilon(1e-11));
}

TEST_CASE("mutual information on canonical states") {
  // Product state carries no correlations.
  Cmat prod = kron(diag2(0.7, 0.3), diag2(0.4, 0.6));
  CHECK(std::abs(mutual_information(PositiveOperator(prod), 2, 2)) < 1e-10);

  // Maximally entangled pure state: 2 ln 2.
  Cvec bell = Cvec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK(mutual_information(PositiveOperator(bell * bell.adjoint()), 2, 2) ==
        doctest::Approx(2.0 * kLn2).epsilon(1e-10));

  // Perfect classical correlation: ln 2.
  Cmat cc = Cmat::Zero(4, 4);
  cc(0, 0) = cc(3, 3) = 0.5;
  CHECK(mutual_information(PositiveOperator(cc), 2, 2) ==
        doctest::Approx(kLn2).epsilon(1e-10));
}

TEST_CASE("conditional mutual information ladders agree") {
  State ghz{ghz_matrix()};
  QcmiResult q = qcmi(ghz, 2, 2, 2);
  CHECK(q.value_direct == doctest::Approx(kLn2).epsilon(1e-9));
  CHECK(q.value_a_side == doctest::Approx(kLn2).epsilon(1e-9));
  CHECK(q.value_c_side == doctest::Approx(kLn2).epsilon(1e-9));
  CHECK(q.agreement < 1e-9);
  for (std::size_t i = 1; i < q.a_side_profile.size(); ++i)
    CHECK(q.a_side_profile[i] >= q.a_side_profile[i - 1] - 1e-12);

  // Fully product tripartite state: zero.
  Cmat prod = kron(kron(diag2(0.7, 0.3), diag2(0.5, 0.5)), diag2(0.2, 0.8));
  QcmiResult z = qcmi(State(prod), 2, 2, 2);
  CHECK(std::abs(z.value_direct) < 1e-9);
  CHECK(std::abs(z.value_a_side) < 1e-9);
}

TEST_CASE("data processing never increases divergence") {
  // Strict decrease through depolarizing noise, frozen endpoints.
  MonotonicityReport dep = monotonicity_check(
      depolarizing_channel(2, 0.5), PositiveOperator(diag2(1.0, 0.0)),
      PositiveOperator(diag2(0.5, 0.5)));
  CHECK_FALSE(dep.vacuous);
  CHECK(dep.d_in == doctest::Approx(kLn2).epsilon(1e-11));
  CHECK(dep.d_out == doctest::Approx(0.13081203594113694).epsilon(1e-10));
  CHECK(dep.slack > 0.5);

  Rng rng(31);
  for (int k = 0; k < 20; ++k) {
    const Index d = 2 + (k % 2);
    QuantumOperation phi = random_channel(rng, d, d, 2);
    MonotonicityReport rep =
        monotonicity_check(phi, random_state(rng, d).positive(),
                           random_faithful_state(rng, d).positive());
    if (rep.vacuous) continue;
    CHECK(rep.slack >= -1e-9);
  }
}

TEST_CASE("recovery fidelity bound on a conditionally independent state") {
  // omega = bell_AB (x) omega_C; recovering C by preparation is exact.
  Cvec bell = Cvec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  Cmat omega_c = diag2(0.3, 0.7);
  Cmat omega = kron(Cmat(bell * bell.adjoint()), omega_c);

  std::vector<Cmat> ks;
  for (Index k = 0; k < 2; ++k) {
    Cmat ek = Cmat::Zero(4, 2);  // maps |b> to |b>(x)|k>
    for (Index b = 0; b < 2; ++b) ek(b * 2 + k, b) = 1.0;
    ks.push_back(std::sqrt(std::real(omega_c(k, k))) * ek);
  }
  QuantumOperation prepare(ks, OpKind::channel);

  FidelityBoundReport rep = fr_verify(State(omega), 2, 2, 2, prepare);
  CHECK(rep.qcmi_nats == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.satisfied);
  CHECK(rep.marginals_exact);
}

TEST_CASE("energy models") {
  EnergyModel num = EnergyModel::number_operator(4);
  Cmat two = Cmat::Zero(4, 4);
  two(2, 2) = 1.0;
  CHECK(num.energy(two) == doctest::Approx(2.0).epsilon(1e-13));
  EnergyModel shifted(Cmat::Identity(2, 2), -1.0);
  CHECK(shifted.energy(diag2(0.5, 0.5)) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("energy amplification ratios") {
  EnergyModel num = EnergyModel::number_operator(3);
  std::vector<State> probes;
  for (Index i = 0; i < 3; ++i) {
    Cmat p = Cmat::Zero(3, 3);
    p(i, i) = 1.0;
    probes.push_back(State(p));
  }
  EnergyAmplificationReport rep = energy_amplification(
      QuantumOperation::identity(3), num, num, probes, 1.5, probes[1]);
  CHECK(rep.k_hat == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(rep.included.size() == 3);
  CHECK_FALSE(rep.included[0]);  // ground probe carries no energy
  CHECK(rep.included[1]);
  CHECK(rep.constraint_evaluated);
  CHECK(rep.constraint_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.constraint_ok);
}

TEST_CASE("output marginal domination forwards to extraction") {
  ChannelSequence co = constant_output_family(4);
  State rho = default_faithful_state(4);
  PositiveOperator loose(Cmat::Identity(2, 2));
  MarginalDominationReport ok = marginal_domination_check(
      co, rho, loose, loose, 2, 2, dense_indices(1, 128));
  CHECK(ok.dominated);
  CHECK(ok.passed);
  CHECK(ok.extraction.success);

  PositiveOperator tight(0.05 * Cmat::Identity(2, 2));
  MarginalDominationReport bad = marginal_domination_check(
      co, rho, tight, tight, 2, 2, dense_indices(1, 48));
  CHECK_FALSE(bad.dominated);
}

TEST_CASE("preservation harness on constant data") {
  State rho0{diag2(0.7, 0.3)};
  State sigma0{diag2(0.5, 0.5)};
  PreservationReport rep = convergence_preservation_harness(
      depolarizing_channel(2, 0.5), [&rho0](Index) { return rho0; },
      [&sigma0](Index) { return sigma0; }, rho0, sigma0, dense_indices(1, 8));
  CHECK(rep.hypotheses_ok);
  CHECK(rep.passed);
  CHECK(rep.terminal_deviation < 1e-12);
  REQUIRE_FALSE(rep.rows.empty());
  CHECK_FALSE(rep.rows.front().d_in_infinite);
}

}  // TEST_SUITE
