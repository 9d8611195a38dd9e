#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "strongconv/families.hpp"

namespace strongconv {

// Wire conventions: complex matrices are nested arrays of [re, im] pairs in
// row-major order; channels carry {dim_in, dim_out, kind, kraus}; states
// carry {dims, matrix}; families carry {family, params}. Parsers throw
// InvalidInput with a position hint on malformed input.

nlohmann::json matrix_to_json(const Cmat& m);
Cmat matrix_from_json(const nlohmann::json& j);

nlohmann::json channel_to_json(const QuantumOperation& op);
QuantumOperation channel_from_json(const nlohmann::json& j,
                                   const Tolerances& tol = {});

nlohmann::json state_to_json(const State& s,
                             const std::vector<Index>& dims = {});
State state_from_json(const nlohmann::json& j, const Tolerances& tol = {});
std::vector<Index> state_dims_from_json(const nlohmann::json& j);

// Family tags: orthogonal_isometries {dim_in, blocks}, rotating_basis
// {dim, theta_scale}, constant_output {dim, sigma0?, mix?}, explicit_list
// {elements: [channel...]}.
ChannelSequence family_from_json(const nlohmann::json& j,
                                 const Tolerances& tol = {});

nlohmann::json tolerances_to_json(const Tolerances& t);
Tolerances tolerances_from_json(const nlohmann::json& j,
                                Tolerances base = {});

// Render with every float at 17 significant digits and keys in sorted order,
// so equal configurations produce byte-identical reports. Non-finite floats
// become null.
std::string dump_deterministic(const nlohmann::json& j, int indent = 2);

std::string csv_from_rows(const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& rows);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace strongconv
