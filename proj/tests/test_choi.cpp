#include "doctest.h"

#include <strongconv/choi.hpp>
#include <strongconv/families.hpp>
#include <strongconv/random.hpp>

using namespace strongconv;

TEST_SUITE("choi") {

TEST_CASE("default purification anchors the isomorphism") {
  Purification anchor = default_purification(3);
  CHECK(anchor.dim_A == 3);
  CHECK(anchor.dim_R == 3);
  CHECK((anchor.reduced_A.matrix() - default_faithful_state(3).matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("membership accepts channels and scaled-down marginals only") {
  Purification anchor = default_purification(2);
  MembershipResult exact = cj_membership(anchor.reduced_R, anchor);
  CHECK(exact.member);
  CHECK(exact.witness == doctest::Approx(1.0).epsilon(1e-9));

  PositiveOperator shrunk(0.5 * anchor.reduced_R.matrix());
  CHECK(cj_membership(shrunk, anchor).member);

  PositiveOperator inflated(1.5 * anchor.reduced_R.matrix());
  MembershipResult over = cj_membership(inflated, anchor);
  CHECK_FALSE(over.member);
  CHECK(over.witness == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("forward image of a unitary channel has rank one") {
  Rng rng(3);
  for (Index d : {2, 3, 4}) {
    QuantumOperation u = unitary_channel(random_unitary(rng, d));
    ChoiOperator c = cj_forward(u);
    CHECK(c.rank == 1);
    CHECK(c.dim_B == d);
  }
  // The fully depolarizing qubit channel needs a four-dimensional environment.
  CHECK(cj_forward(depolarizing_channel(2, 1.0)).rank == 4);
}

TEST_CASE("forward then inverse reproduces the map") {
  Rng rng(17);
  for (Index d : {2, 3, 4}) {
    QuantumOperation phi = random_channel(rng, d, d, 3);
    QuantumOperation back = cj_inverse(cj_forward(phi));
    CHECK(back.is_channel());
    CHECK(strong_distance(back, phi) < 1e-9);
  }
  // Strict operations come back as operations.
  QuantumOperation op = random_operation(rng, 3, 2, 2, 0.8);
  QuantumOperation op_back = cj_inverse(cj_forward(op));
  CHECK_FALSE(op_back.is_channel());
  CHECK(strong_distance(op_back, op) < 1e-9);
}

TEST_CASE("rectangular maps survive the round trip") {
  Rng rng(23);
  QuantumOperation phi = random_channel(rng, 2, 5, 2);
  CHECK(strong_distance(cj_inverse(cj_forward(phi)), phi) < 1e-9);
  QuantumOperation psi = random_channel(rng, 4, 2, 3);
  CHECK(strong_distance(cj_inverse(cj_forward(psi)), psi) < 1e-9);
}

TEST_CASE("canonical form prunes redundant kraus operators") {
  QuantumOperation ad = amplitude_damping(0.3);
  // Inflate the representation: split one operator across two slots and pad
  // with an explicit zero.
  std::vector<Cmat> fat;
  fat.push_back(ad.kraus()[0] * std::sqrt(0.5));
  fat.push_back(ad.kraus()[0] * std::sqrt(0.5));
  fat.push_back(ad.kraus()[1]);
  fat.push_back(Cmat::Zero(2, 2));
  QuantumOperation padded(fat, OpKind::channel);
  CHECK(padded.kraus_count() == 4);
  QuantumOperation lean = canonical_form(padded);
  CHECK(lean.kraus_count() == 2);
  CHECK(strong_distance(lean, ad) < 1e-10);
}

TEST_CASE("choi rank matches the minimal kraus count") {
  Rng rng(29);
  for (Index k : {1, 2, 3}) {
    QuantumOperation phi = random_channel(rng, 3, 3, k);
    CHECK(cj_forward(phi).rank == k);
  }
}

}  // TEST_SUITE
