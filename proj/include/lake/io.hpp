#pragma once

#include "lake/hjb.hpp"
#include "lake/model.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace lake {

// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double v);

// Plain key-value parameter file: lines of the form `key = value` (or
// `key: value`), `#` comments, keys rho, b, c, sigma.  Unknown keys are
// rejected.
LakeParams parse_params_file(const std::filesystem::path& file);

// FNV-1a over the canonical key=value rendering; embedded in every output
// file so runs can be traced back to their configuration.
std::uint64_t config_hash(const std::string& canonical);

std::string canonical_params(const LakeParams& p);

// Solution table with columns x, V, dV, u_star and a config-hash header.
void write_solution_csv(const std::filesystem::path& file, const ValueFunction& v,
                        const LakeParams& p, std::uint64_t hash);

// Reads a file produced by write_solution_csv back into a ValueFunction.
// Throws config_error on malformed input or non-decreasing values.
ValueFunction read_solution_csv(const std::filesystem::path& file);

} // namespace lake
