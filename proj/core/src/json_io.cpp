#include "strongconv/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace strongconv {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw InvalidInput(what); }

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

Index need_dim(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    bad(std::string("field '") + key + "' must be a positive integer");
  return static_cast<Index>(v.get<long long>());
}

void fmt_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
  // Bare mantissas would re-parse as integers; keep the type stable.
  if (out.find_first_of(".eE", out.size() - std::strlen(buf)) == std::string::npos)
    out += ".0";
}

void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_rec(const json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        escape_into(out, it.key());
        out += ": ";
        dump_rec(it.value(), out, indent, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Flat numeric pairs ([re, im]) inline; everything else one per line.
      const bool inline_ok =
          j.size() <= 4 && std::all_of(j.begin(), j.end(), [](const json& e) {
            return e.is_number() || e.is_boolean() || e.is_null();
          });
      if (inline_ok) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_rec(j[i], out, indent, depth);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_rec(j[i], out, indent, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float:
      fmt_double(out, j.get<double>());
      return;
    case json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case json::value_t::string:
      escape_into(out, j.get<std::string>());
      return;
    default:
      out += "null";
      return;
  }
}

}  // namespace

nlohmann::json matrix_to_json(const Cmat& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Cmat matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) bad("matrix must be a non-empty array of rows");
  const std::size_t nrows = j.size();
  std::size_t ncols = 0;
  Cmat m;
  for (std::size_t r = 0; r < nrows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty())
      bad("matrix row " + std::to_string(r) + " must be a non-empty array");
    if (r == 0) {
      ncols = row.size();
      m.resize(static_cast<Index>(nrows), static_cast<Index>(ncols));
    } else if (row.size() != ncols) {
      bad("matrix row " + std::to_string(r) + " has ragged length");
    }
    for (std::size_t c = 0; c < ncols; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        bad("matrix entry (" + std::to_string(r) + "," + std::to_string(c) +
            ") must be a [re, im] pair");
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

nlohmann::json channel_to_json(const QuantumOperation& op) {
  json j;
  j["dim_in"] = op.dim_in();
  j["dim_out"] = op.dim_out();
  j["kind"] = op.is_channel() ? "channel" : "operation";
  json ks = json::array();
  for (const Cmat& k : op.kraus()) ks.push_back(matrix_to_json(k));
  j["kraus"] = std::move(ks);
  return j;
}

QuantumOperation channel_from_json(const nlohmann::json& j,
                                   const Tolerances& tol) {
  const Index din = need_dim(j, "dim_in");
  const Index dout = need_dim(j, "dim_out");
  const json& kind_j = need(j, "kind");
  if (!kind_j.is_string()) bad("field 'kind' must be a string");
  const std::string kind_s = kind_j.get<std::string>();
  OpKind kind;
  if (kind_s == "channel")
    kind = OpKind::channel;
  else if (kind_s == "operation")
    kind = OpKind::operation;
  else
    bad("field 'kind' must be 'channel' or 'operation'");
  const json& kraus_j = need(j, "kraus");
  if (!kraus_j.is_array() || kraus_j.empty())
    bad("field 'kraus' must be a non-empty array of matrices");
  std::vector<Cmat> ks;
  ks.reserve(kraus_j.size());
  for (const json& kj : kraus_j) {
    Cmat k = matrix_from_json(kj);
    if (k.rows() != dout || k.cols() != din)
      bad("kraus matrix shape disagrees with dim_out x dim_in");
    ks.push_back(std::move(k));
  }
  return QuantumOperation(std::move(ks), kind, tol);
}

nlohmann::json state_to_json(const State& s, const std::vector<Index>& dims) {
  json j;
  json d = json::array();
  if (dims.empty()) {
    d.push_back(s.dim());
  } else {
    for (Index x : dims) d.push_back(x);
  }
  j["dims"] = std::move(d);
  j["matrix"] = matrix_to_json(s.matrix());
  return j;
}

State state_from_json(const nlohmann::json& j, const Tolerances& tol) {
  const Cmat m = matrix_from_json(need(j, "matrix"));
  if (m.rows() != m.cols()) bad("state matrix must be square");
  const std::vector<Index> dims = state_dims_from_json(j);
  Index prod = 1;
  for (Index d : dims) prod *= d;
  if (prod != m.rows()) bad("product of dims disagrees with matrix size");
  try {
    return State(m, tol);
  } catch (const Error& e) {
    bad(std::string("state validation failed: ") + e.what());
  }
}

std::vector<Index> state_dims_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dims")) {
    const Cmat m = matrix_from_json(need(j, "matrix"));
    return {m.rows()};
  }
  const json& d = j.at("dims");
  if (!d.is_array() || d.empty()) bad("field 'dims' must be a non-empty array");
  std::vector<Index> dims;
  dims.reserve(d.size());
  for (const json& e : d) {
    if (!e.is_number_integer() || e.get<long long>() < 1)
      bad("entries of 'dims' must be positive integers");
    dims.push_back(static_cast<Index>(e.get<long long>()));
  }
  return dims;
}

ChannelSequence family_from_json(const nlohmann::json& j,
                                 const Tolerances& tol) {
  const json& tag_j = need(j, "family");
  if (!tag_j.is_string()) bad("field 'family' must be a string");
  const std::string tag = tag_j.get<std::string>();
  const json params = j.contains("params") ? j.at("params") : json::object();

  if (tag == "orthogonal_isometries")
    return orthogonal_isometries_family(need_dim(params, "dim_in"),
                                        need_dim(params, "blocks"));
  if (tag == "rotating_basis") {
    const Index dim = need_dim(params, "dim");
    double scale = 1.0;
    if (params.contains("theta_scale")) {
      if (!params.at("theta_scale").is_number())
        bad("field 'theta_scale' must be a number");
      scale = params.at("theta_scale").get<double>();
    }
    return rotating_basis_family(dim, scale);
  }
  if (tag == "constant_output") {
    const Index dim = need_dim(params, "dim");
    std::optional<State> sigma0;
    std::optional<State> mix;
    if (params.contains("sigma0"))
      sigma0 = State(matrix_from_json(params.at("sigma0")), tol);
    if (params.contains("mix"))
      mix = State(matrix_from_json(params.at("mix")), tol);
    if (sigma0 && sigma0->dim() != dim) bad("sigma0 dimension disagrees");
    if (mix && mix->dim() != dim) bad("mix dimension disagrees");
    return constant_output_family(dim, sigma0, mix);
  }
  if (tag == "explicit_list") {
    const json& el = need(params, "elements");
    if (!el.is_array() || el.empty())
      bad("field 'elements' must be a non-empty array of channel specs");
    std::vector<QuantumOperation> ops;
    ops.reserve(el.size());
    for (const json& e : el) ops.push_back(channel_from_json(e, tol));
    return explicit_list_family(std::move(ops));
  }
  bad("unknown family tag '" + tag + "'");
}

nlohmann::json tolerances_to_json(const Tolerances& t) {
  json j;
  j["herm"] = t.herm;
  j["psd"] = t.psd;
  j["trace"] = t.trace;
  j["supp"] = t.supp;
  j["supp_defect"] = t.supp_defect;
  j["rank"] = t.rank;
  j["membership"] = t.membership;
  j["cauchy"] = t.cauchy;
  j["cluster"] = t.cluster;
  j["gap"] = t.gap;
  j["rev"] = t.rev;
  j["cert"] = t.cert;
  j["conv"] = t.conv;
  j["roundtrip"] = t.roundtrip;
  return j;
}

Tolerances tolerances_from_json(const nlohmann::json& j, Tolerances base) {
  if (!j.is_object()) bad("tolerance overrides must be an object");
  auto take = [&](const char* key, double& slot) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number() || j.at(key).get<double>() < 0.0)
      bad(std::string("tolerance '") + key + "' must be a non-negative number");
    slot = j.at(key).get<double>();
  };
  take("herm", base.herm);
  take("psd", base.psd);
  take("trace", base.trace);
  take("supp", base.supp);
  take("supp_defect", base.supp_defect);
  take("rank", base.rank);
  take("membership", base.membership);
  take("cauchy", base.cauchy);
  take("cluster", base.cluster);
  take("gap", base.gap);
  take("rev", base.rev);
  take("cert", base.cert);
  take("conv", base.conv);
  take("roundtrip", base.roundtrip);
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"herm", "psd", "trace", "supp", "supp_defect",
                                  "rank", "membership", "cauchy", "cluster",
                                  "gap", "rev", "cert", "conv", "roundtrip"};
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) bad("unknown tolerance '" + it.key() + "'");
  }
  return base;
}

std::string dump_deterministic(const nlohmann::json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  return out;
}

std::string csv_from_rows(const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ",";
    out += header[i];
  }
  out += "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw InvalidInput("csv_from_rows: ragged row");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      fmt_double(out, row[i]);
    }
    out += "\n";
  }
  return out;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    bad("parse error in '" + path + "': " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw InvalidInput("write failed for '" + path + "'");
}

}  // namespace strongconv
