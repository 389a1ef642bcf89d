#include "bpsrh/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bpsrh/errors.hpp"

namespace bpsrh {
namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& msg) {
  fail(Errc::schema_error, path + ": " + msg);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::parse_error, e.what());
  }
}

std::int64_t require_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

Complex require_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    schema_fail(path, "expected [re, im]");
  return Complex(require_number(j[0], path + "[0]"),
                 require_number(j[1], path + "[1]"));
}

Charge require_charge(const json& j, int rank, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != rank)
    schema_fail(path, "expected an array of " + std::to_string(rank) +
                          " integers");
  Charge g(rank);
  for (int i = 0; i < rank; ++i)
    g[i] = require_int(j[i], path + "[" + std::to_string(i) + "]");
  return g;
}

Rational require_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      schema_fail(path, e.what());
    }
  }
  schema_fail(path, "expected an integer or a rational string \"p/q\"");
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& what) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (allowed.count(key) == 0)
      schema_fail(key, "unknown key in " + what);
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15e", v);
  return buf;
}

void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_into(std::string& out, const Json& j, int indent) {
  const std::string pad(2 * indent, ' ');
  const std::string pad1(2 * (indent + 1), ' ');
  if (std::holds_alternative<std::nullptr_t>(j.value)) {
    out += "null";
  } else if (std::holds_alternative<bool>(j.value)) {
    out += std::get<bool>(j.value) ? "true" : "false";
  } else if (std::holds_alternative<std::int64_t>(j.value)) {
    out += std::to_string(std::get<std::int64_t>(j.value));
  } else if (std::holds_alternative<double>(j.value)) {
    out += format_double(std::get<double>(j.value));
  } else if (std::holds_alternative<std::string>(j.value)) {
    escape_into(out, std::get<std::string>(j.value));
  } else if (std::holds_alternative<JsonArray>(j.value)) {
    const auto& a = std::get<JsonArray>(j.value);
    if (a.empty()) {
      out += "[]";
      return;
    }
    bool scalars = true;
    for (const Json& e : a)
      if (std::holds_alternative<JsonArray>(e.value) ||
          std::holds_alternative<JsonObject>(e.value))
        scalars = false;
    if (scalars) {
      out += '[';
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ", ";
        dump_into(out, a[i], indent);
      }
      out += ']';
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
      out += pad1;
      dump_into(out, a[i], indent + 1);
      if (i + 1 < a.size()) out += ',';
      out += '\n';
    }
    out += pad + "]";
  } else {
    const auto& o = std::get<JsonObject>(j.value);
    if (o.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    for (std::size_t i = 0; i < o.size(); ++i) {
      out += pad1;
      escape_into(out, o[i].first);
      out += ": ";
      dump_into(out, o[i].second, indent + 1);
      if (i + 1 < o.size()) out += ',';
      out += '\n';
    }
    out += pad + "}";
  }
}

}  // namespace

StructureConfig parse_structure(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) schema_fail("$", "expected a JSON object");
  reject_unknown_keys(
      j, {"rank", "skew", "central_charge", "omega", "norm_weights"},
      "a structure file");
  for (const char* key : {"rank", "skew", "central_charge", "omega"})
    if (!j.contains(key)) schema_fail(key, "missing required key");

  StructureConfig cfg;
  std::int64_t rank = require_int(j["rank"], "rank");
  if (rank < 1 || rank > 64) schema_fail("rank", "must be between 1 and 64");
  cfg.rank = static_cast<int>(rank);

  const json& skew = j["skew"];
  if (!skew.is_array() || static_cast<int>(skew.size()) != cfg.rank)
    schema_fail("skew", "expected " + std::to_string(cfg.rank) + " rows");
  cfg.skew.resize(cfg.rank);
  for (int i = 0; i < cfg.rank; ++i) {
    const std::string row_path = "skew[" + std::to_string(i) + "]";
    if (!skew[i].is_array() || static_cast<int>(skew[i].size()) != cfg.rank)
      schema_fail(row_path,
                  "expected " + std::to_string(cfg.rank) + " entries");
    cfg.skew[i].resize(cfg.rank);
    for (int k = 0; k < cfg.rank; ++k)
      cfg.skew[i][k] =
          require_int(skew[i][k], row_path + "[" + std::to_string(k) + "]");
  }
  for (int i = 0; i < cfg.rank; ++i)
    for (int k = 0; k <= i; ++k)
      if (cfg.skew[i][k] != -cfg.skew[k][i])
        schema_fail("skew[" + std::to_string(i) + "][" + std::to_string(k) +
                        "]",
                    "not antisymmetric against skew[" + std::to_string(k) +
                        "][" + std::to_string(i) + "]");

  const json& zc = j["central_charge"];
  if (!zc.is_array() || static_cast<int>(zc.size()) != cfg.rank)
    schema_fail("central_charge",
                "expected " + std::to_string(cfg.rank) + " entries");
  for (int i = 0; i < cfg.rank; ++i)
    cfg.central_charge.push_back(
        require_complex(zc[i], "central_charge[" + std::to_string(i) + "]"));

  const json& om = j["omega"];
  if (!om.is_array()) schema_fail("omega", "expected an array");
  std::set<Charge> seen;
  for (std::size_t n = 0; n < om.size(); ++n) {
    const std::string path = "omega[" + std::to_string(n) + "]";
    const json& e = om[n];
    if (!e.is_object()) schema_fail(path, "expected an object");
    reject_unknown_keys(e, {"gamma", "value"}, path);
    if (!e.contains("gamma") || !e.contains("value"))
      schema_fail(path, "needs keys gamma and value");
    Charge g = require_charge(e["gamma"], cfg.rank, path + ".gamma");
    if (!seen.insert(g).second)
      schema_fail(path + ".gamma", "duplicate class");
    Rational v = require_rational(e["value"], path + ".value");
    if (v == 0) schema_fail(path + ".value", "invariant must be nonzero");
    cfg.omega.emplace_back(std::move(g), std::move(v));
  }

  if (j.contains("norm_weights")) {
    const json& w = j["norm_weights"];
    if (!w.is_array() || static_cast<int>(w.size()) != cfg.rank)
      schema_fail("norm_weights",
                  "expected " + std::to_string(cfg.rank) + " entries");
    std::vector<double> weights(cfg.rank);
    for (int i = 0; i < cfg.rank; ++i) {
      weights[i] =
          require_number(w[i], "norm_weights[" + std::to_string(i) + "]");
      if (!(weights[i] > 0.0))
        schema_fail("norm_weights[" + std::to_string(i) + "]",
                    "must be positive");
    }
    cfg.norm_weights = std::move(weights);
  }
  return cfg;
}

StructureConfig load_structure(const std::string& path) {
  return parse_structure(read_text_file(path));
}

std::string format_structure(const StructureConfig& cfg) {
  JsonObject root;
  root.emplace_back("rank", Json(static_cast<std::int64_t>(cfg.rank)));
  JsonArray skew;
  for (const auto& row : cfg.skew) {
    JsonArray r;
    for (std::int64_t v : row) r.emplace_back(v);
    skew.emplace_back(std::move(r));
  }
  root.emplace_back("skew", Json(std::move(skew)));
  JsonArray zc;
  for (const Complex& z : cfg.central_charge) zc.push_back(json_complex(z));
  root.emplace_back("central_charge", Json(std::move(zc)));
  JsonArray om;
  for (const auto& [g, v] : cfg.omega) {
    JsonArray gamma;
    for (std::int64_t m : g) gamma.emplace_back(m);
    om.emplace_back(JsonObject{{"gamma", Json(std::move(gamma))},
                               {"value", Json(format_rational(v))}});
  }
  root.emplace_back("omega", Json(std::move(om)));
  if (cfg.norm_weights) {
    JsonArray w;
    for (double v : *cfg.norm_weights) w.emplace_back(v);
    root.emplace_back("norm_weights", Json(std::move(w)));
  }
  return dump_json(Json(std::move(root))) + "\n";
}

GvInput parse_gv(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) schema_fail("$", "expected a JSON object");
  reject_unknown_keys(j, {"chi", "gv"}, "a curve-count file");
  for (const char* key : {"chi", "gv"})
    if (!j.contains(key)) schema_fail(key, "missing required key");
  GvInput in;
  in.chi = require_int(j["chi"], "chi");
  const json& gv = j["gv"];
  if (!gv.is_array()) schema_fail("gv", "expected an array");
  for (std::size_t n = 0; n < gv.size(); ++n) {
    const std::string path = "gv[" + std::to_string(n) + "]";
    const json& e = gv[n];
    if (!e.is_object()) schema_fail(path, "expected an object");
    reject_unknown_keys(e, {"v", "gv0"}, path);
    if (!e.contains("v") || !e.contains("gv0"))
      schema_fail(path, "needs keys v and gv0");
    GvEntry entry;
    entry.v = require_complex(e["v"], path + ".v");
    entry.gv0 = require_int(e["gv0"], path + ".gv0");
    in.entries.push_back(entry);
  }
  return in;
}

GvInput load_gv(const std::string& path) { return parse_gv(read_text_file(path)); }

std::string format_gv(const GvInput& in) {
  JsonObject root;
  root.emplace_back("chi", Json(in.chi));
  JsonArray gv;
  for (const GvEntry& e : in.entries)
    gv.emplace_back(JsonObject{{"v", json_complex(e.v)},
                               {"gv0", Json(e.gv0)}});
  root.emplace_back("gv", Json(std::move(gv)));
  return dump_json(Json(std::move(root))) + "\n";
}

Json json_complex(const Complex& z) {
  return Json(JsonArray{Json(z.real()), Json(z.imag())});
}

std::string dump_json(const Json& j) {
  std::string out;
  dump_into(out, j, 0);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::parse_error, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::parse_error, "cannot open " + path + " for writing");
  out << text;
  if (!out) fail(Errc::parse_error, "failed writing " + path);
}

}  // namespace bpsrh
