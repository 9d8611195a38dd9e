#include "doctest.h"

#include <strongconv/degradability.hpp>
#include <strongconv/families.hpp>

using namespace strongconv;

namespace {

FitOptions fast_opts(std::uint64_t seed) {
  FitOptions opts;
  opts.restarts = 6;
  opts.max_iters = 2000;
  opts.seed = seed;
  return opts;
}

}  // namespace

TEST_SUITE("degradability") {

TEST_CASE("weak damping is degradable, strong damping anti-degradable") {
  DegradabilityCertificate weak =
      degradability_certificate(amplitude_damping(0.25), fast_opts(1));
  CHECK(weak.degradable);
  CHECK_FALSE(weak.antidegradable);
  CHECK(weak.deg_residual <= 1e-6);
  CHECK(weak.antideg_residual > 0.1);
  CHECK(weak.conclusive);
  REQUIRE(weak.degrading.has_value());
  // The degrading map really carries the output to the complement.
  QuantumOperation comp = complementary(amplitude_damping(0.25));
  CHECK(strong_distance(compose(*weak.degrading, amplitude_damping(0.25)),
                        comp) <= 1e-6);

  DegradabilityCertificate strong =
      degradability_certificate(amplitude_damping(0.75), fast_opts(1));
  CHECK(strong.antidegradable);
  CHECK_FALSE(strong.degradable);
  CHECK(strong.antideg_residual <= 1e-6);
  CHECK(strong.conclusive);
}

TEST_CASE("the self-complementary point is degradable both ways") {
  DegradabilityCertificate mid =
      degradability_certificate(amplitude_damping(0.5), fast_opts(2));
  CHECK(mid.degradable);
  CHECK(mid.antidegradable);
  CHECK(mid.deg_residual <= 1e-6);
  CHECK(mid.antideg_residual <= 1e-6);
}

TEST_CASE("identity channels degrade trivially") {
  DegradabilityCertificate id =
      degradability_certificate(QuantumOperation::identity(2), fast_opts(3));
  CHECK(id.degradable);
  CHECK_FALSE(id.antidegradable);
}

TEST_CASE("strict operations are rejected") {
  std::vector<Cmat> ks{0.9 * Cmat::Identity(2, 2)};
  QuantumOperation op(ks, OpKind::operation);
  CHECK_THROWS_AS(degradability_certificate(op), PreconditionViolated);
}

TEST_CASE("verdicts are reproducible and seed independent") {
  DegradabilityCertificate a =
      degradability_certificate(amplitude_damping(0.25), fast_opts(5));
  DegradabilityCertificate b =
      degradability_certificate(amplitude_damping(0.25), fast_opts(5));
  CHECK(a.deg_residual == b.deg_residual);
  CHECK(a.antideg_residual == b.antideg_residual);

  DegradabilityCertificate c =
      degradability_certificate(amplitude_damping(0.25), fast_opts(99));
  CHECK(a.degradable == c.degradable);
  CHECK(a.antidegradable == c.antidegradable);
}

TEST_CASE("closure harness certifies a degradable limit") {
  ChannelSequence seq(
      [](Index n) { return amplitude_damping(0.25 + 0.1 / double(n)); }, 2, 2,
      std::nullopt, "damping-path");
  ClosureReport rep = degradable_closure_harness(seq, dense_indices(1, 32),
                                                 fast_opts(7));
  CHECK(rep.members_degradable);
  CHECK(rep.worst_member_residual <= 1e-6);
  REQUIRE(rep.limit_extraction.success);
  REQUIRE(rep.limit_certificate.has_value());
  CHECK(rep.limit_certificate->degradable);
  CHECK(rep.limit_degradable);
  CHECK(rep.passed);
  REQUIRE(rep.limit_extraction.limit.has_value());
  CHECK(strong_distance(*rep.limit_extraction.limit, amplitude_damping(0.25)) <
        1e-5);
}

TEST_CASE("short windows are rejected") {
  ChannelSequence seq(
      [](Index) { return amplitude_damping(0.3); }, 2, 2, std::nullopt, "c");
  CHECK_THROWS_AS(degradable_closure_harness(seq, dense_indices(1, 4)),
                  InvalidInput);
}

}  // TEST_SUITE
