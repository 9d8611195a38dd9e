#include "doctest.h"

#include <cmath>

#include <strongconv/random.hpp>

using namespace strongconv;

TEST_SUITE("random") {

TEST_CASE("streams are reproducible per seed") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    double xa = a.uniform(), xb = b.uniform(), xc = c.uniform();
    all_equal = all_equal && (xa == xb);
    any_diff = any_diff || (xa != xc);
    CHECK(xa >= 0.0);
    CHECK(xa < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("gaussian variates have sane moments") {
  Rng rng(7);
  double sum = 0.0, sumsq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double x = rng.gaussian();
    sum += x;
    sumsq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sumsq / n - 1.0) < 0.05);
}

TEST_CASE("random unitaries are unitary and phase fixed") {
  Rng rng(9);
  for (Index d : {2, 5}) {
    Cmat u = random_unitary(rng, d);
    CHECK((u.adjoint() * u - Cmat::Identity(d, d)).cwiseAbs().maxCoeff() <
          1e-12);
  }
  Rng r1(9), r2(9);
  CHECK((random_unitary(r1, 3) - random_unitary(r2, 3)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("random states honor the rank request") {
  Rng rng(11);
  State full = random_state(rng, 4);
  CHECK(full.positive().rank() == 4);
  CHECK(std::abs(full.matrix().trace() - cplx(1.0)) < 1e-12);
  State pure = random_state(rng, 4, 1);
  CHECK(pure.positive().rank() == 1);
  State mid = random_state(rng, 4, 2);
  CHECK(mid.positive().rank() == 2);
}

TEST_CASE("faithful states are bounded away from singular") {
  Rng rng(13);
  for (int k = 0; k < 10; ++k) {
    State s = random_faithful_state(rng, 5, 1e-2);
    CHECK(s.faithful());
    // floor/d before normalization; total mass is at most floor + d.
    CHECK(s.positive().min_eigenvalue() >= (1e-2 / 5) / (1e-2 + 5) - 1e-12);
  }
}

TEST_CASE("random channels and operations have the declared shape") {
  Rng rng(17);
  QuantumOperation phi = random_channel(rng, 3, 4, 2);
  CHECK(phi.is_channel());
  CHECK(phi.dim_in() == 3);
  CHECK(phi.dim_out() == 4);
  CHECK(phi.kraus_count() == 2);
  CHECK(phi.trace_defect() < 1e-12);

  QuantumOperation op = random_operation(rng, 3, 3, 2, 0.7);
  CHECK_FALSE(op.is_channel());
  CHECK(op.trace_defect() > 0.1);
  // Still a valid operation: construction enforced the trace bound.
  CHECK(op.kraus_count() == 2);
}

}  // TEST_SUITE
