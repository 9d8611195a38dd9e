// Acceptance gate: eight end-to-end checks, one line each, nonzero exit on
// any failure. An optional argv[1] in 1..8 runs a single check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <strongconv/choi.hpp>
#include <strongconv/convergence.hpp>
#include <strongconv/degradability.hpp>
#include <strongconv/entropy.hpp>
#include <strongconv/families.hpp>
#include <strongconv/random.hpp>
#include <strongconv/recovery.hpp>

using namespace strongconv;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Recorder {
  bool ok = true;
  std::string notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!notes.empty()) notes += "; ";
      notes += "failed: " + what;
    }
  }
  void note(const std::string& s) {
    if (!notes.empty()) notes += "; ";
    notes += s;
  }
};

Cmat diag2(double a, double b) {
  Cmat m = Cmat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// 1. State-form isomorphism round trip over the dimension grid, plus the
//    environment-dimension pins for unitary and fully depolarizing channels.
Recorder criterion_roundtrip() {
  Recorder rec;
  Rng rng(1001);
  const std::vector<Index> dims{2, 3, 4, 6, 8};
  double worst = 0.0;
  for (Index da : dims)
    for (Index db : dims)
      for (int k = 0; k < 50; ++k) {
        const Index min_kraus = (da + db - 1) / db;  // isometry needs db*m >= da
        const Index kraus = min_kraus + (k % 3);
        QuantumOperation op =
            (k % 2 == 0) ? random_channel(rng, da, db, kraus)
                         : random_operation(rng, da, db, kraus, 0.9);
        const double r = strong_distance(cj_inverse(cj_forward(op)), op);
        if (r > worst) worst = r;
      }
  rec.require(worst <= 1e-8, "round trip residual " + fmt(worst));
  rec.note("max residual " + fmt(worst));

  for (Index d : dims) {
    ChoiOperator cu = cj_forward(unitary_channel(random_unitary(rng, d)));
    rec.require(cu.rank == 1,
                "unitary environment rank " + std::to_string(cu.rank));
  }
  const Index dep_rank = cj_forward(depolarizing_channel(2, 1.0)).rank;
  rec.require(dep_rank == 4,
              "depolarizing environment rank " + std::to_string(dep_rank));
  return rec;
}

// 2. The two canonical families behave oppositely: orthogonal isometries
//    escape (unit dual-ladder gap, no extractable limit), the rotating basis
//    family converges to the pinching and away from the identity.
Recorder criterion_dichotomy() {
  Recorder rec;
  DiagnosticsReport esc = run_diagnostics(orthogonal_isometries_family(2, 32),
                                          dense_indices(1, 32));
  rec.require(esc.ladder.conclusive, "escaping ladder inconclusive");
  rec.require(std::abs(esc.ladder.gap - 1.0) <= 1e-9,
              "escaping gap " + fmt(esc.ladder.gap));
  rec.require(!esc.extraction.success, "escaping family yielded a limit");
  rec.note("escaping gap " + fmt(esc.ladder.gap));

  DiagnosticsReport rot =
      run_diagnostics(rotating_basis_family(8, 1.0), dense_indices(1, 200));
  rec.require(rot.ladder.conclusive, "rotating ladder inconclusive");
  rec.require(rot.ladder.gap <= 1e-6, "rotating gap " + fmt(rot.ladder.gap));
  rec.require(rot.extraction.success, "rotating extraction failed");
  if (rot.extraction.success) {
    const double to_pinch =
        strong_distance(*rot.extraction.limit, pinching_channel(8));
    const double to_id =
        strong_distance(*rot.extraction.limit, QuantumOperation::identity(8));
    rec.require(to_pinch <= 1e-6, "pinching residual " + fmt(to_pinch));
    rec.require(to_id >= 0.1, "identity distance " + fmt(to_id));
    rec.note("pinching residual " + fmt(to_pinch) + ", identity distance " +
             fmt(to_id));
  }
  return rec;
}

// 3. Constant-output family: the extracted limit is the constant map onto the
//    limiting output state, far from the identity.
Recorder criterion_constant_output() {
  Recorder rec;
  ExtractionResult res =
      extract_limit_point(constant_output_family(4), dense_indices(1, 128));
  rec.require(res.success, "extraction failed: " + res.status);
  if (!res.success) return rec;
  QuantumOperation target = constant_output_channel(default_faithful_state(4));
  const double to_target = strong_distance(*res.limit, target);
  const double to_id =
      strong_distance(*res.limit, QuantumOperation::identity(4));
  rec.require(to_target <= 1e-6, "limit residual " + fmt(to_target));
  rec.require(to_id >= 0.5, "identity distance " + fmt(to_id));
  rec.note("limit residual " + fmt(to_target) + ", identity distance " +
           fmt(to_id));
  return rec;
}

// 4. Recovery maps: reference restoration, unitary inversion, stability of
//    the interpolated reference, and the interpolation identity.
Recorder criterion_recovery() {
  Recorder rec;
  Rng rng(2002);
  double worst_fix = 0.0;
  for (Index d = 2; d <= 6; ++d)
    for (int k = 0; k < 50; ++k) {
      QuantumOperation phi = random_channel(rng, d, d, 1 + (k % 3));
      State sigma = random_faithful_state(rng, d);
      PetzMap pm = petz_map(phi, sigma);
      const double err = trace_norm(
          pm.theta.apply_matrix(phi.apply_matrix(sigma.matrix())) -
          sigma.matrix());
      if (err > worst_fix) worst_fix = err;
    }
  rec.require(worst_fix <= 1e-9, "reference restoration " + fmt(worst_fix));
  rec.note("max restoration error " + fmt(worst_fix));

  double worst_uni = 0.0;
  for (Index d = 2; d <= 6; ++d) {
    Cmat u = random_unitary(rng, d);
    PetzMap pm = petz_map(unitary_channel(u), default_faithful_state(d));
    const double err =
        strong_distance(pm.theta, unitary_channel(Cmat(u.adjoint())));
    if (err > worst_uni) worst_uni = err;
  }
  rec.require(worst_uni <= 1e-9, "unitary inversion " + fmt(worst_uni));

  QuantumOperation ad = amplitude_damping(0.3);
  State rho{diag2(0.2, 0.8)};
  State sigma{diag2(0.7, 0.3)};
  PetzMap base = petz_map(ad, sigma);
  double prev = 1e300, terminal = 0.0;
  bool monotone = true;
  for (double t : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const double dist =
        strong_distance(petz_interpolated(ad, rho, sigma, t).theta, base.theta);
    if (dist > prev + 1e-12) monotone = false;
    prev = dist;
    terminal = dist;
  }
  rec.require(monotone, "interpolated sweep not monotone");
  rec.require(terminal <= 1e-6, "terminal sweep distance " + fmt(terminal));
  rec.note("terminal sweep distance " + fmt(terminal));

  double worst_donald = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Index d = 2 + (k % 2);
    DonaldReport rep =
        donald_identity_check(random_faithful_state(rng, d),
                              random_faithful_state(rng, d),
                              0.05 + 0.9 * rng.uniform());
    if (!rep.finite) {
      rec.require(false, "interpolation identity went infinite");
      continue;
    }
    if (rep.residual > worst_donald) worst_donald = rep.residual;
  }
  rec.require(worst_donald <= 1e-9,
              "interpolation identity residual " + fmt(worst_donald));
  rec.note("max identity residual " + fmt(worst_donald));
  return rec;
}

// 5. Entropic toolkit: self-divergence, a frozen two-point value, the
//    data-processing inequality, and conditional mutual information on
//    product and GHZ states with both ladder expressions in agreement.
Recorder criterion_entropy() {
  Recorder rec;
  Rng rng(3003);
  double worst_self = 0.0;
  for (int k = 0; k < 20; ++k) {
    PositiveOperator rho = random_faithful_state(rng, 3).positive();
    ExtendedReal self = relative_entropy(rho, rho);
    if (self.infinite)
      rec.require(false, "self divergence infinite");
    else if (std::abs(self.value) > worst_self)
      worst_self = std::abs(self.value);
  }
  rec.require(worst_self <= 1e-10, "self divergence " + fmt(worst_self));

  ExtendedReal skew = relative_entropy(PositiveOperator(diag2(0.5, 0.5)),
                                       PositiveOperator(diag2(0.25, 0.75)));
  const double pinned = 0.5 * std::log(4.0 / 3.0);
  rec.require(!skew.infinite && std::abs(skew.value - pinned) <= 1e-6,
              "two-point divergence " + fmt(skew.value) + " vs " + fmt(pinned));
  rec.note("two-point divergence " + fmt(skew.value));

  double worst_slack = 0.0;
  int tested = 0;
  for (int k = 0; tested < 100 && k < 300; ++k) {
    const Index d = 2 + (k % 2);
    MonotonicityReport rep = monotonicity_check(
        random_channel(rng, d, d, 2), random_state(rng, d).positive(),
        random_faithful_state(rng, d).positive());
    if (rep.vacuous) continue;
    ++tested;
    if (-rep.slack > worst_slack) worst_slack = -rep.slack;
  }
  rec.require(tested == 100, "not enough finite monotonicity triples");
  rec.require(worst_slack <= 1e-9, "monotonicity violation " + fmt(worst_slack));
  rec.note("worst monotonicity slack -" + fmt(worst_slack));

  Cmat prod = kron(kron(diag2(0.7, 0.3), diag2(0.5, 0.5)), diag2(0.2, 0.8));
  QcmiResult zero = qcmi(State(prod), 2, 2, 2);
  rec.require(std::abs(zero.value_direct) <= 1e-8 &&
                  std::abs(zero.value_a_side) <= 1e-8 &&
                  std::abs(zero.value_c_side) <= 1e-8,
              "product-state conditional information " +
                  fmt(zero.value_direct));

  Cvec ghz = Cvec::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  QcmiResult g = qcmi(State(Cmat(ghz * ghz.adjoint())), 2, 2, 2);
  const double ln2 = std::log(2.0);
  rec.require(std::abs(g.value_direct - ln2) <= 1e-8 &&
                  std::abs(g.value_a_side - ln2) <= 1e-8 &&
                  std::abs(g.value_c_side - ln2) <= 1e-8,
              "ghz conditional information " + fmt(g.value_direct));
  rec.note("ghz value " + fmt(g.value_a_side));

  double worst_agreement = g.agreement;
  for (int k = 0; k < 3; ++k) {
    QcmiResult q = qcmi(random_state(rng, 8), 2, 2, 2);
    if (q.agreement > worst_agreement) worst_agreement = q.agreement;
  }
  QcmiResult q12 = qcmi(random_state(rng, 12), 3, 2, 2);
  if (q12.agreement > worst_agreement) worst_agreement = q12.agreement;
  rec.require(worst_agreement <= 1e-6,
              "ladder expression disagreement " + fmt(worst_agreement));
  rec.note("worst ladder disagreement " + fmt(worst_agreement));
  return rec;
}

// 6. Degradability certification: the weak-noise point is degradable, the
//    strong-noise point anti-degradable, stably across seeds; a path of
//    degradable channels keeps its limit certified.
Recorder criterion_degradability() {
  Recorder rec;
  double worst_deg = 0.0, worst_anti = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    FitOptions opts;
    opts.seed = seed;
    DegradabilityCertificate weak =
        degradability_certificate(amplitude_damping(0.25), opts);
    rec.require(weak.degradable && !weak.antidegradable,
                "weak-noise verdict at seed " + std::to_string(seed));
    if (weak.deg_residual > worst_deg) worst_deg = weak.deg_residual;

    DegradabilityCertificate strong =
        degradability_certificate(amplitude_damping(0.75), opts);
    rec.require(strong.antidegradable && !strong.degradable,
                "strong-noise verdict at seed " + std::to_string(seed));
    if (strong.antideg_residual > worst_anti)
      worst_anti = strong.antideg_residual;
  }
  rec.require(worst_deg <= 1e-6, "degrading residual " + fmt(worst_deg));
  rec.require(worst_anti <= 1e-6, "anti-degrading residual " + fmt(worst_anti));
  rec.note("residuals " + fmt(worst_deg) + " / " + fmt(worst_anti));

  ChannelSequence path(
      [](Index n) { return amplitude_damping(0.25 + 0.1 / double(n)); }, 2, 2,
      std::nullopt, "damping-path");
  FitOptions opts;
  opts.seed = 1;
  ClosureReport closure =
      degradable_closure_harness(path, dense_indices(1, 32), opts);
  rec.require(closure.members_degradable, "path members not all degradable");
  rec.require(closure.limit_degradable, "path limit not degradable");
  rec.require(closure.passed, "closure harness failed: " + closure.status);
  rec.note("worst member residual " + fmt(closure.worst_member_residual));
  return rec;
}

// 7. Kraus-level extraction: pure phase drift and shrinking rotations both
//    recover the base isometry as channels; the rotating-basis family
//    reassembles to the pinching.
Recorder criterion_kraus_extraction() {
  Recorder rec;
  const Index d = 3;
  Cmat v0 = Cmat::Zero(d, d);
  v0(0, 1) = v0(1, 2) = v0(2, 0) = 1.0;
  const double alpha = std::sqrt(2.0) - 1.0;
  ChannelSequence drift(
      [v0, alpha](Index n) {
        const cplx ph = std::exp(cplx(0.0, 2.0 * M_PI * double(n) * alpha));
        return QuantumOperation({ph * v0}, OpKind::channel);
      },
      d, d, std::nullopt, "phase-drift");
  KrausExtractionResult r1 =
      extract_kraus_subsequence(drift, dense_indices(1, 200), 1);
  rec.require(r1.success, "phase-drift extraction failed");
  if (r1.success) {
    const double err = strong_distance(*r1.assembled, unitary_channel(v0));
    rec.require(err <= 1e-8, "phase-drift residual " + fmt(err));
    rec.note("phase-drift residual " + fmt(err));
  }

  Rng rng(4004);
  Cmat u0 = random_unitary(rng, d);
  ChannelSequence rot(
      [u0, d](Index n) {
        return QuantumOperation({rotation_matrix(d, 1.0 / double(n)) * u0},
                                OpKind::channel);
      },
      d, d, std::nullopt, "rotation-drift");
  KrausExtractionResult r2 =
      extract_kraus_subsequence(rot, dense_indices(1, 200), 1);
  rec.require(r2.success, "rotation extraction failed");
  if (r2.success) {
    const double err = strong_distance(*r2.assembled, unitary_channel(u0));
    rec.require(err <= 1e-8, "rotation residual " + fmt(err));
    rec.note("rotation residual " + fmt(err));
  }

  KrausExtractionResult r3 = extract_kraus_subsequence(
      rotating_basis_family(4, 1.0), dense_indices(1, 200), 4);
  rec.require(r3.success, "rotating-basis extraction failed");
  if (r3.success) {
    const double err = strong_distance(*r3.assembled, pinching_channel(4));
    rec.require(err <= 1e-8, "pinching residual " + fmt(err));
    rec.note("pinching residual " + fmt(err));
  }
  return rec;
}

// 8. Preservation of divergence convergence through the two reference
//    fixtures: a mixing input path through fixed noise, and rotating maps on
//    commuting data.
Recorder criterion_preservation() {
  Recorder rec;
  {
    const Index d = 4;
    QuantumOperation phi = depolarizing_channel(d, 0.3);
    State rho0 = default_faithful_state(d);
    State sigma0{Cmat(Cmat::Identity(d, d) / double(d))};
    auto rho_n = [rho0, sigma0](Index n) {
      const double t = 1.0 / double(n);
      return State(Cmat((1.0 - t) * rho0.matrix() + t * sigma0.matrix()));
    };
    auto sigma_n = [sigma0](Index) { return sigma0; };
    PreservationReport rep = convergence_preservation_harness(
        phi, rho_n, sigma_n, rho0, sigma0,
        geometric_indices(1, Index(1) << 23, 24));
    rec.require(rep.hypotheses_ok && rep.passed,
                "mixing-path fixture: " + rep.status);
    rec.require(rep.terminal_deviation <= 1e-6,
                "mixing-path deviation " + fmt(rep.terminal_deviation));
    rec.note("mixing-path deviation " + fmt(rep.terminal_deviation));
  }
  {
    const Index d = 4;
    State rho0 = default_faithful_state(d);
    State sigma0{Cmat(Cmat::Identity(d, d) / double(d))};
    auto rho_n = [rho0](Index) { return rho0; };
    auto sigma_n = [sigma0](Index) { return sigma0; };
    PreservationReport rep = convergence_preservation_harness(
        rotating_basis_family(d, 1.0), rho_n, sigma_n, rho0, sigma0,
        geometric_indices(1, Index(1) << 12, 13));
    rec.require(rep.hypotheses_ok && rep.passed,
                "rotating fixture: " + rep.status);
    rec.require(rep.terminal_deviation <= 1e-6,
                "rotating deviation " + fmt(rep.terminal_deviation));
    rec.note("rotating deviation " + fmt(rep.terminal_deviation));
  }
  return rec;
}

struct Entry {
  const char* name;
  Recorder (*run)();
  double budget_s;
};

const Entry kEntries[] = {
    {"choi round trip across the dimension grid", criterion_roundtrip, 60},
    {"escaping vs rotating family dichotomy", criterion_dichotomy, 120},
    {"constant-output limit family", criterion_constant_output, 10},
    {"recovery map suite", criterion_recovery, 120},
    {"entropy suite", criterion_entropy, 120},
    {"degradability certification", criterion_degradability, 300},
    {"kraus-level limit extraction", criterion_kraus_extraction, 60},
    {"divergence convergence preservation", criterion_preservation, 60},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 8) {
      std::fprintf(stderr, "usage: %s [1..8]\n", argv[0]);
      return 64;
    }
  }
  int failures = 0;
  for (int i = 0; i < 8; ++i) {
    if (only && only != i + 1) continue;
    const Entry& e = kEntries[i];
    const auto t0 = std::chrono::steady_clock::now();
    Recorder rec;
    try {
      rec = e.run();
    } catch (const std::exception& ex) {
      rec.ok = false;
      rec.notes = std::string("exception: ") + ex.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (elapsed > e.budget_s) {
      rec.ok = false;
      rec.notes += (rec.notes.empty() ? "" : "; ");
      rec.notes += "over budget " + fmt(e.budget_s) + "s";
    }
    if (!rec.ok) ++failures;
    std::printf("[%d] %-45s %s  (%.1fs)  %s\n", i + 1, e.name,
                rec.ok ? "PASS" : "FAIL", elapsed, rec.notes.c_str());
    std::fflush(stdout);
  }
  return failures;
}
