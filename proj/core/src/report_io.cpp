// SPDX-License-Identifier: Apache-2.0
#include "haarflow/report_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <system_error>

#include <json.hpp>

#include "haarflow/version.hpp"

namespace haarflow::io {
namespace {

using nlohmann::json;

json parse_or_throw(const std::string& text, const char* label) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw ValidationError(std::string(label) + ": invalid JSON: " + err.what());
  }
}

long long parse_int_token(std::string_view token, const std::string& what) {
  long long value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw UsageError(what + ": '" + std::string(token) + "' is not an integer");
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw ValidationError("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string config_hash_hex(const std::string& config_json) {
  const json doc = parse_or_throw(config_json, "config");
  const std::uint64_t hash = fnv1a64(doc.dump());  // canonical: compact, sorted keys
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) buf[i] = digits[(hash >> (60 - 4 * i)) & 0xf];
  buf[16] = '\0';
  return std::string(buf);
}

std::string make_report(const std::string& subcommand,
                        const std::string& config_json, std::uint64_t seed,
                        const std::string& payload_json) {
  json doc;
  doc["subcommand"] = subcommand;
  doc["config"] = parse_or_throw(config_json, "config");
  doc["config_hash"] = config_hash_hex(config_json);
  doc["seed"] = seed;
  doc["version"] = kVersion;
  doc["payload"] = parse_or_throw(payload_json, "payload");
  return doc.dump(2) + "\n";
}

std::string make_timing(const std::string& subcommand, double wall_seconds) {
  json doc;
  doc["subcommand"] = subcommand;
  doc["wall_seconds"] = wall_seconds;
  return doc.dump(2) + "\n";
}

std::string csv_meta_line(const std::string& subcommand, std::uint64_t seed,
                          const std::string& config_hash) {
  return "# subcommand=" + subcommand + " seed=" + std::to_string(seed) +
         " config_hash=" + config_hash + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open for reading");
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) throw ValidationError(path + ": read failed");
  return content;
}

void write_text_file(const std::string& path, const std::string& content,
                     bool force) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (!force && fs::exists(target)) {
    throw ValidationError(path + ": already exists; pass --force to overwrite");
  }
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) {
      throw ValidationError(target.parent_path().string() +
                            ": cannot create directory: " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError(path + ": cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw ValidationError(path + ": write failed");
}

std::vector<int> parse_schedule(const std::string& text) {
  std::vector<std::string_view> parts;
  std::string_view rest = text;
  while (true) {
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      parts.push_back(rest);
      break;
    }
    parts.push_back(rest.substr(0, colon));
    rest = rest.substr(colon + 1);
  }
  if (parts.size() > 3) {
    throw UsageError("depths: expected A, A:B or A:B:STEP, got '" + text + "'");
  }
  const long long lo = parse_int_token(parts[0], "depths");
  const long long hi = parts.size() > 1 ? parse_int_token(parts[1], "depths") : lo;
  const long long step = parts.size() > 2 ? parse_int_token(parts[2], "depths") : 1;
  if (lo < 0) throw UsageError("depths: must be nonnegative");
  if (hi < lo) throw UsageError("depths: range end below start");
  if (step < 1) throw UsageError("depths: step must be at least 1");
  if ((hi - lo) / step + 1 > 100000) throw UsageError("depths: schedule too long");
  std::vector<int> out;
  for (long long m = lo; m <= hi; m += step) out.push_back(static_cast<int>(m));
  return out;
}

std::vector<int> parse_index_set(const std::string& text) {
  std::vector<int> out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view token =
        comma == std::string_view::npos ? rest : rest.substr(0, comma);
    const long long value = parse_int_token(token, "index set");
    if (value < 0) throw UsageError("index set: negative index");
    out.push_back(static_cast<int>(value));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

ComplexMatrix parse_matrix_json(const std::string& text) {
  const json rows = parse_or_throw(text, "matrix");
  if (!rows.is_array() || rows.empty()) {
    throw ValidationError("matrix: expected a nonempty array of rows");
  }
  const int dim = static_cast<int>(rows.size());
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ValidationError("matrix[" + std::to_string(r) + "]: expected " +
                            std::to_string(dim) + " entries");
    }
    for (int c = 0; c < dim; ++c) {
      const json& cell = row[c];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
          !cell[1].is_number()) {
        throw ValidationError("matrix[" + std::to_string(r) + "][" +
                              std::to_string(c) + "]: expected [re, im]");
      }
      m(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

std::string matrix_to_json_text(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows.dump();
}

}  // namespace haarflow::io
