// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "haarflow/numkernel.hpp"

namespace haarflow::io {

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double x);

// FNV-1a over the canonical (compact, key-sorted) form of a JSON text.
std::uint64_t fnv1a64(std::string_view text);
std::string config_hash_hex(const std::string& config_json);

// Envelope every JSON report shares: subcommand, the full config (parsed and
// re-emitted canonically), its hash, the seed, and the build version. The
// payload must itself be valid JSON. Wall-clock duration deliberately lives
// in a separate sidecar (make_timing) so reports stay byte-identical across
// reruns.
std::string make_report(const std::string& subcommand,
                        const std::string& config_json, std::uint64_t seed,
                        const std::string& payload_json);
std::string make_timing(const std::string& subcommand, double wall_seconds);

// First CSV line: "# subcommand=... seed=... config_hash=...". Rows follow the
// given header; every number is format_double'd by the caller.
std::string csv_meta_line(const std::string& subcommand, std::uint64_t seed,
                          const std::string& config_hash);

std::string read_text_file(const std::string& path);

// Refuses to overwrite an existing file unless force is set; creates parent
// directories as needed.
void write_text_file(const std::string& path, const std::string& content,
                     bool force);

// "A", "A:B" or "A:B:STEP", inclusive, nonnegative, ascending.
std::vector<int> parse_schedule(const std::string& text);

// Comma-separated nonnegative integers, e.g. "0,2".
std::vector<int> parse_index_set(const std::string& text);

// Row-major [[ [re, im], ... ], ...] square complex matrix.
ComplexMatrix parse_matrix_json(const std::string& text);
std::string matrix_to_json_text(const ComplexMatrix& m);

}  // namespace haarflow::io
