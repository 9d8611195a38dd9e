// Command line front end: every subcommand parses its inputs, delegates to
// the library, and renders one deterministic JSON (or CSV) report. Exit
// codes: 0 ok, 2 bad input, 3 precondition violation, 4 optimizer or
// hypothesis inconclusive.

#include <Eigen/Core>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "strongconv/choi.hpp"
#include "strongconv/convergence.hpp"
#include "strongconv/degradability.hpp"
#include "strongconv/entropy.hpp"
#include "strongconv/json_io.hpp"
#include "strongconv/recovery.hpp"

namespace sc = strongconv;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "json";
  std::string out;
  json tol_overrides = json::object();
};

void add_common(CLI::App* sub, CommonFlags& cf) {
  sub->add_option("--seed", cf.seed, "deterministic seed")->capture_default_str();
  sub->add_option("--threads", cf.threads, "worker threads for the linear algebra")
      ->capture_default_str();
  sub->add_option("--format", cf.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--out", cf.out, "write the report here instead of stdout");
  static const char* tol_names[] = {"herm", "psd", "trace", "supp",
                                    "supp_defect", "rank", "membership",
                                    "cauchy", "cluster", "gap", "rev",
                                    "cert", "conv", "roundtrip"};
  for (const char* name : tol_names) {
    sub->add_option_function<double>(
        std::string("--tol.") + name,
        [&cf, name](double v) { cf.tol_overrides[name] = v; },
        std::string("override tolerance '") + name + "'");
  }
}

sc::Tolerances resolve_tol(const CommonFlags& cf) {
  return sc::tolerances_from_json(cf.tol_overrides, sc::Tolerances{});
}

std::vector<sc::Index> parse_window(const std::string& text) {
  // "lo:hi" is the dense window; "lo:hi:gN" keeps at most N geometrically
  // spaced indices.
  const auto c1 = text.find(':');
  if (c1 == std::string::npos)
    throw sc::InvalidInput("window must look like lo:hi or lo:hi:gN");
  const auto c2 = text.find(':', c1 + 1);
  try {
    const sc::Index lo = std::stoll(text.substr(0, c1));
    const sc::Index hi = std::stoll(
        c2 == std::string::npos ? text.substr(c1 + 1)
                                : text.substr(c1 + 1, c2 - c1 - 1));
    if (c2 == std::string::npos) return sc::dense_indices(lo, hi);
    const std::string tail = text.substr(c2 + 1);
    if (tail.size() < 2 || tail[0] != 'g')
      throw sc::InvalidInput("window third field must be gN");
    return sc::geometric_indices(lo, hi, std::stoll(tail.substr(1)));
  } catch (const std::logic_error&) {
    throw sc::InvalidInput("window fields must be integers");
  }
}

json indices_to_json(const std::vector<sc::Index>& v) {
  json a = json::array();
  for (sc::Index x : v) a.push_back(x);
  return a;
}

json extraction_to_json(const sc::ExtractionResult& ex) {
  json j;
  j["success"] = ex.success;
  j["status"] = ex.status;
  j["subsequence"] = indices_to_json(ex.subsequence);
  j["max_uncertainty"] = ex.max_uncertainty;
  j["assembly_defect"] = ex.assembly_defect;
  if (!ex.success) {
    j["offending_unit"] = json::array({ex.offending_i, ex.offending_j});
  }
  if (ex.limit) j["limit"] = sc::channel_to_json(*ex.limit);
  return j;
}

void emit(const CommonFlags& cf, json report,
          std::vector<std::string> csv_header,
          std::vector<std::vector<double>> csv_rows) {
  std::string text;
  if (cf.format == "csv") {
    text = sc::csv_from_rows(csv_header, csv_rows);
  } else {
    text = sc::dump_deterministic(report) + "\n";
  }
  if (cf.out.empty())
    std::cout << text;
  else
    sc::write_text_file(cf.out, text);
}

json envelope(const char* command, const CommonFlags& cf, const sc::Tolerances& tol) {
  json j;
  j["command"] = command;
  j["seed"] = cf.seed;
  j["tolerances"] = sc::tolerances_to_json(tol);
  return j;
}

// ---- cj ----

int cmd_cj(const std::string& input, const CommonFlags& cf) {
  const sc::Tolerances tol = resolve_tol(cf);
  const sc::QuantumOperation op =
      sc::channel_from_json(sc::load_json_file(input), tol);
  const sc::ChoiOperator choi = sc::cj_forward(op, tol);
  const sc::Cmat r_marg = sc::partial_trace(
      choi.matrix.matrix(), choi.dim_B, choi.purification_used.dim_R, false);
  const sc::MembershipResult mem =
      sc::cj_membership(sc::PositiveOperator(r_marg, tol),
                        choi.purification_used, tol);
  const sc::QuantumOperation back = sc::cj_inverse(choi, tol);
  const double residual = sc::strong_distance(back, op);

  json rep;
  rep["dim_in"] = op.dim_in();
  rep["dim_out"] = op.dim_out();
  rep["choi_rank"] = choi.rank;
  rep["choi"] = sc::matrix_to_json(choi.matrix.matrix());
  rep["membership"] = json{{"member", mem.member}, {"witness", mem.witness}};
  rep["roundtrip_residual"] = residual;
  json out = envelope("cj", cf, tol);
  out["report"] = std::move(rep);
  emit(cf, std::move(out),
       {"choi_rank", "membership_witness", "roundtrip_residual"},
       {{static_cast<double>(choi.rank), mem.witness, residual}});
  return 0;
}

// ---- diagnose ----

int cmd_diagnose(const std::string& input, const std::string& window_text,
                 const std::vector<sc::Index>& ladder_ranks,
                 const CommonFlags& cf) {
  const sc::Tolerances tol = resolve_tol(cf);
  const sc::ChannelSequence seq =
      sc::family_from_json(sc::load_json_file(input), tol);
  const std::vector<sc::Index> window = parse_window(window_text);
  std::optional<sc::TruncationLadder> ladder;
  if (!ladder_ranks.empty())
    ladder = sc::TruncationLadder::prefixes(seq.dim_out(), ladder_ranks);
  const sc::DiagnosticsReport rep =
      sc::run_diagnostics(seq, window, ladder, {}, tol);

  json j;
  j["family"] = seq.family();
  j["window"] = indices_to_json(rep.window);
  j["ladder_ranks"] = indices_to_json(rep.ladder_ranks);
  j["verdict"] = json{{"has_limit_point", rep.verdict.has_limit_point},
                      {"criterion", rep.verdict.criterion},
                      {"status", rep.verdict.status},
                      {"subsequence", indices_to_json(rep.verdict.subsequence)}};
  json crits = json::array();
  for (const auto& c : rep.verdict.criteria)
    crits.push_back(json{{"name", c.name},
                         {"evaluated", c.evaluated},
                         {"passed", c.passed},
                         {"value", c.value},
                         {"threshold", c.threshold}});
  j["criteria"] = std::move(crits);
  j["dual_ladder"] =
      json{{"gap", rep.ladder.gap},
           {"conclusive", rep.ladder.conclusive},
           {"monotonicity_defect", rep.ladder.monotonicity_defect},
           {"top_uncertainty", rep.ladder.top_uncertainty},
           {"subsequence", indices_to_json(rep.ladder.subsequence)}};
  json tail = json::array();
  for (std::size_t i = 0; i < rep.tail.ranks.size(); ++i)
    tail.push_back(json{{"rank", rep.tail.ranks[i]},
                        {"value", rep.tail.values[i]},
                        {"witness_index", rep.tail.witness_index[i]}});
  j["tail_mass"] = std::move(tail);
  j["extraction"] = extraction_to_json(rep.extraction);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.tail.ranks.size(); ++i)
    rows.push_back({static_cast<double>(rep.tail.ranks[i]), rep.tail.values[i],
                    static_cast<double>(rep.tail.witness_index[i])});
  json out = envelope("diagnose", cf, tol);
  out["report"] = std::move(j);
  emit(cf, std::move(out), {"rank", "tail_mass", "witness_index"}, rows);
  return 0;
}

// ---- petz ----

int cmd_petz(const std::string& channel_path, const std::string& sigma_path,
             const std::string& rho_path, const CommonFlags& cf) {
  const sc::Tolerances tol = resolve_tol(cf);
  const sc::QuantumOperation op =
      sc::channel_from_json(sc::load_json_file(channel_path), tol);
  const sc::State sigma =
      sc::state_from_json(sc::load_json_file(sigma_path), tol);
  const sc::PetzMap pm = sc::petz_map(op, sigma, tol.supp, tol);

  const sc::Cmat out_sigma = op.apply(sigma.positive()).matrix();
  const double fixed_point =
      sc::trace_norm(pm.theta.apply_matrix(out_sigma) - sigma.matrix());
  const sc::Cmat unital = pm.theta.dual_apply(
      sc::Cmat::Identity(op.dim_in(), op.dim_in()));
  const sc::Cmat supp =
      sc::support_projector(sc::PositiveOperator(out_sigma, tol), tol.supp)
          .matrix();
  const double unitality_defect = (unital - supp).cwiseAbs().maxCoeff();

  json rep;
  rep["reference_dim"] = sigma.dim();
  rep["support_cutoff"] = pm.support_cutoff;
  rep["fixed_point_residual"] = fixed_point;
  rep["dual_unitality_defect"] = unitality_defect;
  rep["theta"] = sc::channel_to_json(pm.theta);
  std::vector<std::string> header = {"fixed_point_residual",
                                     "dual_unitality_defect"};
  std::vector<double> row = {fixed_point, unitality_defect};
  if (!rho_path.empty()) {
    const sc::State rho = sc::state_from_json(sc::load_json_file(rho_path), tol);
    const sc::ReversibilityReport rev = sc::reversibility_test(op, rho, sigma, tol);
    rep["reversibility"] = json{{"vacuous", rev.vacuous},
                                {"d_in", rev.d_in},
                                {"d_out", rev.d_out},
                                {"gap", rev.gap},
                                {"recovery_error", rev.recovery_error},
                                {"saturated", rev.saturated},
                                {"recovered", rev.recovered},
                                {"consistent", rev.consistent}};
    header.insert(header.end(), {"gap", "recovery_error"});
    row.insert(row.end(), {rev.gap, rev.recovery_error});
  }
  json out = envelope("petz", cf, tol);
  out["report"] = std::move(rep);
  emit(cf, std::move(out), header, {row});
  return 0;
}

// ---- qcmi ----

int cmd_qcmi(const std::string& input, const CommonFlags& cf) {
  const sc::Tolerances tol = resolve_tol(cf);
  const json spec = sc::load_json_file(input);
  const sc::State omega = sc::state_from_json(spec, tol);
  const std::vector<sc::Index> dims = sc::state_dims_from_json(spec);

  json rep;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  if (dims.size() == 2) {
    const double mi =
        sc::mutual_information(omega.positive(), dims[0], dims[1], tol);
    rep["mutual_information"] = mi;
    rep["units"] = "nats";
    header = {"mutual_information"};
    rows = {{mi}};
  } else if (dims.size() == 3) {
    const sc::QcmiResult q =
        sc::qcmi(omega, dims[0], dims[1], dims[2], {}, {}, tol);
    rep["value_a_side"] = q.value_a_side;
    rep["value_c_side"] = q.value_c_side;
    rep["value_direct"] = q.value_direct;
    rep["agreement"] = q.agreement;
    rep["units"] = "nats";
    rep["a_side_profile"] = q.a_side_profile;
    rep["c_side_profile"] = q.c_side_profile;
    header = {"side", "prefix_rank", "value"};
    for (std::size_t i = 0; i < q.a_side_profile.size(); ++i)
      rows.push_back({0.0, static_cast<double>(i + 1), q.a_side_profile[i]});
    for (std::size_t i = 0; i < q.c_side_profile.size(); ++i)
      rows.push_back({1.0, static_cast<double>(i + 1), q.c_side_profile[i]});
  } else {
    throw sc::InvalidInput("qcmi expects a state with 2 or 3 dims entries");
  }
  json out = envelope("qcmi", cf, tol);
  out["report"] = std::move(rep);
  emit(cf, std::move(out), header, rows);
  return 0;
}

// ---- degradability ----

int cmd_degradability(const std::string& input, const CommonFlags& cf) {
  const sc::Tolerances tol = resolve_tol(cf);
  const sc::QuantumOperation op =
      sc::channel_from_json(sc::load_json_file(input), tol);
  sc::FitOptions opts;
  opts.seed = cf.seed;
  const sc::DegradabilityCertificate cert =
      sc::degradability_certificate(op, opts, tol);

  json rep;
  rep["deg_residual"] = cert.deg_residual;
  rep["deg_objective"] = cert.deg_objective;
  rep["antideg_residual"] = cert.antideg_residual;
  rep["antideg_objective"] = cert.antideg_objective;
  rep["degradable"] = cert.degradable;
  rep["antidegradable"] = cert.antidegradable;
  rep["conclusive"] = cert.conclusive;
  rep["restarts"] = cert.restarts;
  if (cert.degrading) rep["degrading"] = sc::channel_to_json(*cert.degrading);
  if (cert.antidegrading)
    rep["antidegrading"] = sc::channel_to_json(*cert.antidegrading);
  json out = envelope("degradability", cf, tol);
  out["report"] = std::move(rep);
  emit(cf, std::move(out),
       {"deg_residual", "antideg_residual", "degradable", "antidegradable"},
       {{cert.deg_residual, cert.antideg_residual,
         cert.degradable ? 1.0 : 0.0, cert.antidegradable ? 1.0 : 0.0}});
  return cert.conclusive ? 0 : 4;
}

// ---- entropy-harness ----

int cmd_entropy_harness(const std::string& input, const std::string& window_text,
                        const CommonFlags& cf) {
  const sc::Tolerances tol = resolve_tol(cf);
  const json cfg = sc::load_json_file(input);
  if (!cfg.is_object() || !cfg.contains("fixture") ||
      !cfg.at("fixture").is_string())
    throw sc::InvalidInput("harness config needs a string 'fixture'");
  const std::string fixture = cfg.at("fixture").get<std::string>();

  std::vector<sc::Index> window;
  if (!window_text.empty()) {
    window = parse_window(window_text);
  } else if (cfg.contains("window")) {
    if (!cfg.at("window").is_string())
      throw sc::InvalidInput("config 'window' must be a lo:hi[:gN] string");
    window = parse_window(cfg.at("window").get<std::string>());
  }

  sc::PreservationReport rep;
  if (fixture == "mixing-path") {
    // Fixed map; inputs slide toward the target pair along a 1/n mixture.
    if (window.empty()) window = sc::geometric_indices(1, sc::Index(1) << 23, 24);
    const sc::Index d = 4;
    const sc::QuantumOperation phi = sc::depolarizing_channel(d, 0.3);
    const sc::State rho0 = sc::default_faithful_state(d);
    const sc::State sigma0(
        sc::Cmat::Identity(d, d) / static_cast<double>(d));
    auto rho_n = [rho0, sigma0](sc::Index n) {
      const double e = 1.0 / static_cast<double>(n);
      return sc::State((1.0 - e) * rho0.matrix() + e * sigma0.matrix());
    };
    auto sigma_n = [sigma0](sc::Index) { return sigma0; };
    rep = sc::convergence_preservation_harness(phi, rho_n, sigma_n, rho0,
                                               sigma0, window, tol);
  } else if (fixture == "rotating-commuting") {
    // Rotating-basis maps on a commuting pair of diagonal states.
    if (window.empty()) window = sc::geometric_indices(1, sc::Index(1) << 12, 13);
    const sc::Index d = 4;
    const sc::ChannelSequence seq = sc::rotating_basis_family(d, 1.0);
    const sc::State rho0 = sc::default_faithful_state(d);
    const sc::State sigma0(
        sc::Cmat::Identity(d, d) / static_cast<double>(d));
    auto rho_n = [rho0](sc::Index) { return rho0; };
    auto sigma_n = [sigma0](sc::Index) { return sigma0; };
    rep = sc::convergence_preservation_harness(seq, rho_n, sigma_n, rho0,
                                               sigma0, window, tol);
  } else {
    throw sc::InvalidInput("unknown fixture '" + fixture +
                           "' (expected mixing-path or rotating-commuting)");
  }

  json j;
  j["fixture"] = fixture;
  j["window"] = indices_to_json(window);
  j["hypotheses_ok"] = rep.hypotheses_ok;
  j["passed"] = rep.passed;
  j["input_limit"] = rep.input_limit;
  j["limit_value"] = rep.limit_value;
  j["terminal_deviation"] = rep.terminal_deviation;
  j["status"] = rep.status;
  json rows = json::array();
  std::vector<std::vector<double>> csv_rows;
  for (const auto& r : rep.rows) {
    rows.push_back(json{{"n", r.n},
                        {"d_in", r.d_in},
                        {"d_out", r.d_out},
                        {"d_in_infinite", r.d_in_infinite},
                        {"d_out_infinite", r.d_out_infinite}});
    csv_rows.push_back(
        {static_cast<double>(r.n), r.d_in, r.d_out});
  }
  j["rows"] = std::move(rows);
  json out = envelope("entropy-harness", cf, tol);
  out["report"] = std::move(j);
  emit(cf, std::move(out), {"n", "d_in", "d_out"}, csv_rows);
  return rep.hypotheses_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-truncation diagnostics for quantum operation sequences"};
  app.require_subcommand(1);

  CommonFlags cf;
  std::string in_a, in_b, in_c;
  std::string diag_window = "1:32";
  std::string harness_window;
  std::vector<sc::Index> ladder_ranks;

  auto* cj = app.add_subcommand("cj", "Choi transform, membership, roundtrip");
  cj->add_option("input", in_a, "channel spec JSON")->required();
  add_common(cj, cf);

  auto* diag = app.add_subcommand("diagnose", "limit-point diagnostics for a family");
  diag->add_option("input", in_a, "family spec JSON")->required();
  diag->add_option("--window", diag_window, "index window lo:hi[:gN]")
      ->capture_default_str();
  diag->add_option("--ladder", ladder_ranks, "truncation ladder ranks");
  add_common(diag, cf);

  auto* petz = app.add_subcommand("petz", "canonical recovery map diagnostics");
  petz->add_option("channel", in_a, "channel spec JSON")->required();
  petz->add_option("sigma", in_b, "reference state JSON")->required();
  petz->add_option("rho", in_c, "optional test state JSON");
  add_common(petz, cf);

  auto* qcmi = app.add_subcommand("qcmi", "mutual information diagnostics");
  qcmi->add_option("input", in_a, "state spec JSON with dims")->required();
  add_common(qcmi, cf);

  auto* degr = app.add_subcommand("degradability", "two-sided degradability certificate");
  degr->add_option("input", in_a, "channel spec JSON")->required();
  add_common(degr, cf);

  auto* harness = app.add_subcommand("entropy-harness",
                                     "relative-entropy convergence harness");
  harness->add_option("config", in_a, "harness config JSON")->required();
  harness->add_option("--window", harness_window, "index window lo:hi[:gN]");
  add_common(harness, cf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    Eigen::setNbThreads(cf.threads > 0 ? cf.threads : 1);
    if (cj->parsed()) return cmd_cj(in_a, cf);
    if (diag->parsed()) return cmd_diagnose(in_a, diag_window, ladder_ranks, cf);
    if (petz->parsed()) return cmd_petz(in_a, in_b, in_c, cf);
    if (qcmi->parsed()) return cmd_qcmi(in_a, cf);
    if (degr->parsed()) return cmd_degradability(in_a, cf);
    if (harness->parsed()) return cmd_entropy_harness(in_a, harness_window, cf);
  } catch (const sc::PreconditionViolated& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 3;
  } catch (const sc::Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 4;
  } catch (const sc::InvalidInput& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const sc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
