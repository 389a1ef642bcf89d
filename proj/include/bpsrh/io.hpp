#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bpsrh/bps.hpp"
#include "bpsrh/rh.hpp"

namespace bpsrh {

// Structure files are JSON objects with the keys
//   rank            integer >= 1
//   skew            rank x rank antisymmetric integer matrix
//   central_charge  rank entries, each [re, im]
//   omega           list of {"gamma": [int, ...], "value": int or "p/q"}
//   norm_weights    optional, rank positive numbers
// Unknown keys are rejected. Schema violations raise Errc::schema_error
// naming the offending field; malformed JSON raises Errc::parse_error with
// the reader's line/column diagnostics.
StructureConfig parse_structure(const std::string& text);
StructureConfig load_structure(const std::string& path);

// Deterministic serialization: fixed key order, floats as %.15e, invariants
// as rational strings. Identical configs produce byte-identical text.
std::string format_structure(const StructureConfig& cfg);

// Curve-count input: {"chi": int, "gv": [{"v": [re, im], "gv0": int}]}.
struct GvInput {
  std::int64_t chi = 0;
  std::vector<GvEntry> entries;
};
GvInput parse_gv(const std::string& text);
GvInput load_gv(const std::string& path);
std::string format_gv(const GvInput& in);

// Insertion-ordered JSON tree with the same deterministic emission rules,
// shared by the serializers and the command-line reports.
struct Json;
using JsonArray = std::vector<Json>;
using JsonObject = std::vector<std::pair<std::string, Json>>;

struct Json {
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string,
               JsonArray, JsonObject>
      value;

  Json() : value(nullptr) {}
  Json(bool b) : value(b) {}
  Json(int v) : value(static_cast<std::int64_t>(v)) {}
  Json(std::int64_t v) : value(v) {}
  Json(double v) : value(v) {}
  Json(const char* s) : value(std::string(s)) {}
  Json(std::string s) : value(std::move(s)) {}
  Json(JsonArray a) : value(std::move(a)) {}
  Json(JsonObject o) : value(std::move(o)) {}
};

Json json_complex(const Complex& z);  // [re, im]

// Two-space indented, "\n" line ends, no trailing newline.
std::string dump_json(const Json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bpsrh
