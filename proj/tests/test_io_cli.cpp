#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpsrh/bps.hpp"
#include "bpsrh/errors.hpp"
#include "bpsrh/io.hpp"
#include "bpsrh/rh.hpp"

using namespace bpsrh;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::asymmetric_form;  // sentinel: did not throw
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const char* kGood = R"({
  "rank": 2,
  "skew": [[0, -1], [1, 0]],
  "central_charge": [[1.0, 0.0], [0.0, 1.0]],
  "omega": [
    {"gamma": [1, 0], "value": 1},
    {"gamma": [-1, 0], "value": "3/2"}
  ],
  "norm_weights": [1.0, 2.0]
})";

void check_config_equal(const StructureConfig& a, const StructureConfig& b) {
  CHECK(a.rank == b.rank);
  CHECK(a.skew == b.skew);
  REQUIRE(a.central_charge.size() == b.central_charge.size());
  for (std::size_t i = 0; i < a.central_charge.size(); ++i)
    CHECK(a.central_charge[i] == b.central_charge[i]);
  REQUIRE(a.omega.size() == b.omega.size());
  for (std::size_t i = 0; i < a.omega.size(); ++i) {
    CHECK(a.omega[i].first == b.omega[i].first);
    CHECK(a.omega[i].second == b.omega[i].second);
  }
  CHECK(a.norm_weights.has_value() == b.norm_weights.has_value());
  if (a.norm_weights && b.norm_weights)
    CHECK(*a.norm_weights == *b.norm_weights);
}

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string out_path = "/tmp/bpsrh_cli_stdout.txt";
  const std::string err_path = "/tmp/bpsrh_cli_stderr.txt";
  std::string cmd = env + (env.empty() ? "" : " ") + BPSRH_CLI_PATH + " " +
                    args + " > " + out_path + " 2> " + err_path;
  int rc = std::system(cmd.c_str());
  CliResult r;
  if (rc != -1 && WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  r.out = read_text_file(out_path);
  r.err = read_text_file(err_path);
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(BPSRH_FIXTURE_DIR) + "/" + name;
}

// Cells of one CSV data line.
std::vector<std::string> csv_cells(const std::string& text, int line) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  REQUIRE(line < static_cast<int>(lines.size()));
  std::vector<std::string> cells;
  cur.clear();
  for (char c : lines[line]) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

TEST_CASE("structure files parse and validate") {
  SUBCASE("well-formed input") {
    StructureConfig cfg = parse_structure(kGood);
    CHECK(cfg.rank == 2);
    CHECK(cfg.skew[0][1] == -1);
    CHECK(cfg.central_charge[1] == Complex(0.0, 1.0));
    REQUIRE(cfg.omega.size() == 2);
    CHECK(cfg.omega[0].first == Charge{1, 0});
    CHECK(cfg.omega[0].second == Rational(1));
    CHECK(cfg.omega[1].second == Rational(3, 2));
    REQUIRE(cfg.norm_weights.has_value());
    CHECK((*cfg.norm_weights)[1] == 2.0);
  }

  SUBCASE("malformed JSON reports the line") {
    std::string msg =
        message_of([] { parse_structure("{\n  \"rank\": 2,\n  oops\n}"); });
    CHECK(code_of([] {
            parse_structure("{\n  \"rank\": 2,\n  oops\n}");
          }) == Errc::parse_error);
    CHECK(msg.find("line 3") != std::string::npos);
  }

  SUBCASE("schema violations name the field") {
    auto reject = [](const std::string& text, const std::string& needle) {
      CHECK(code_of([&] { parse_structure(text); }) == Errc::schema_error);
      std::string msg = message_of([&] { parse_structure(text); });
      CHECK(msg.find(needle) != std::string::npos);
    };
    reject(R"({"rank": 1, "skew": [[0]], "central_charge": [[0,1]],
               "omega": [], "extra": 3})",
           "extra");
    reject(R"({"rank": 0, "skew": [], "central_charge": [], "omega": []})",
           "rank");
    reject(R"({"rank": 2, "skew": [[0, 2], [1, 0]],
               "central_charge": [[1,0],[0,1]], "omega": []})",
           "skew[1][0]");
    reject(R"({"rank": 2, "skew": [[0, -1], [1, 5]],
               "central_charge": [[1,0],[0,1]], "omega": []})",
           "skew[1][1]");
    reject(R"({"rank": 2, "skew": [[0, -1], [1, 0]],
               "central_charge": [[1,0]], "omega": []})",
           "central_charge");
    reject(R"({"rank": 2, "skew": [[0, -1], [1, 0]],
               "central_charge": [[1,0],[0,1]],
               "omega": [{"gamma": [1], "value": 1}]})",
           "omega[0].gamma");
    reject(R"({"rank": 2, "skew": [[0, -1], [1, 0]],
               "central_charge": [[1,0],[0,1]],
               "omega": [{"gamma": [1, 0], "value": 0}]})",
           "omega[0].value");
    reject(R"({"rank": 2, "skew": [[0, -1], [1, 0]],
               "central_charge": [[1,0],[0,1]],
               "omega": [{"gamma": [1, 0], "value": "x"}]})",
           "omega[0].value");
    reject(R"({"rank": 2, "skew": [[0, -1], [1, 0]],
               "central_charge": [[1,0],[0,1]],
               "omega": [{"gamma": [1, 0], "value": 1},
                         {"gamma": [1, 0], "value": 2}]})",
           "omega[1].gamma");
    reject(R"({"rank": 1, "skew": [[0]], "central_charge": [[0,1]],
               "omega": [], "norm_weights": [-1.0]})",
           "norm_weights[0]");
    reject(R"([1, 2])", "$");
  }

  SUBCASE("missing required key") {
    CHECK(code_of([] {
            parse_structure(R"({"rank": 1, "skew": [[0]], "omega": []})");
          }) == Errc::schema_error);
  }
}

TEST_CASE("serialization is deterministic and round-trips") {
  SUBCASE("fixed key order and float format") {
    StructureConfig cfg = parse_structure(kGood);
    std::string text = format_structure(cfg);
    CHECK(text.find("1.000000000000000e+00") != std::string::npos);
    CHECK(text.find("\"rank\"") < text.find("\"skew\""));
    CHECK(text.find("\"skew\"") < text.find("\"central_charge\""));
    CHECK(text.find("\"central_charge\"") < text.find("\"omega\""));
    CHECK(text.find("\"omega\"") < text.find("\"norm_weights\""));
    CHECK(text.find("\"3/2\"") != std::string::npos);
    CHECK(format_structure(cfg) == text);
  }

  SUBCASE("every bundled structure fixture round-trips") {
    for (const char* name :
         {"a1.json", "a1_double.json", "kronecker_k1.json",
          "kronecker_k2.json", "kronecker_k3.json", "rank4_uncoupled.json"}) {
      CAPTURE(name);
      StructureConfig first = parse_structure(read_text_file(fixture(name)));
      std::string text = format_structure(first);
      StructureConfig second = parse_structure(text);
      check_config_equal(first, second);
      CHECK(format_structure(second) == text);
      make_bps_structure(first);  // fixtures must be admissible
    }
  }

  SUBCASE("curve-count fixture round-trips") {
    GvInput first = parse_gv(read_text_file(fixture("gw_chi200.json")));
    CHECK(first.chi == -200);
    REQUIRE(first.entries.size() == 3);
    std::string text = format_gv(first);
    GvInput second = parse_gv(text);
    CHECK(second.chi == first.chi);
    REQUIRE(second.entries.size() == first.entries.size());
    for (std::size_t i = 0; i < first.entries.size(); ++i) {
      CHECK(first.entries[i].v == second.entries[i].v);
      CHECK(first.entries[i].gv0 == second.entries[i].gv0);
    }
    CHECK(format_gv(second) == text);
  }

  SUBCASE("curve-count schema") {
    CHECK(code_of([] { parse_gv(R"({"chi": 1})"); }) == Errc::schema_error);
    CHECK(code_of([] {
            parse_gv(R"({"chi": 1, "gv": [{"v": [0, 1]}]})");
          }) == Errc::schema_error);
    CHECK(code_of([] {
            parse_gv(R"({"chi": 1.5, "gv": []})");
          }) == Errc::schema_error);
  }
}

TEST_CASE("command line interface") {
  SUBCASE("kronecker table and deterministic output") {
    CliResult r = run_cli("kronecker --k 1 --truncation 8");
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "kronecker");
    REQUIRE(j["omega"].size() == 3);
    CHECK(j["omega"][0]["gamma"] == nlohmann::json::array({0, 1}));
    CHECK(j["omega"][0]["value"] == "1");
    CHECK(j["omega"][1]["gamma"] == nlohmann::json::array({1, 0}));
    CHECK(j["omega"][2]["gamma"] == nlohmann::json::array({1, 1}));
    CHECK(j["omega"][2]["value"] == "1");
    CliResult again = run_cli("kronecker --k 1 --truncation 8");
    CHECK(again.out == r.out);
  }

  SUBCASE("jump check on the bundled fixture") {
    CliResult r =
        run_cli("jump-check --input " + fixture("a1_double.json"));
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["max_residual"].get<double>() < 1e-10);
  }

  SUBCASE("malformed skew exits 1 naming the entry") {
    write_text_file("/tmp/bpsrh_bad_skew.json", R"({
      "rank": 2,
      "skew": [[0, 3], [1, 0]],
      "central_charge": [[1, 0], [0, 1]],
      "omega": [{"gamma": [1, 0], "value": 1}]
    })");
    CliResult r = run_cli("rays --input /tmp/bpsrh_bad_skew.json");
    CHECK(r.status == 1);
    CHECK(r.err.find("SchemaError") != std::string::npos);
    CHECK(r.err.find("skew[1][0]") != std::string::npos);
    CHECK(r.out.empty());
  }

  SUBCASE("missing input exits 1") {
    CliResult r = run_cli("classify --input no_such_file.json");
    CHECK(r.status == 1);
    CHECK(r.err.find("ParseError") != std::string::npos);
  }

  SUBCASE("rays csv has the header and all classes") {
    CliResult r = run_cli("rays --input " + fixture("rank4_uncoupled.json") +
                          " --format csv");
    REQUIRE(r.status == 0);
    auto header = csv_cells(r.out, 0);
    REQUIRE(header.size() == 5);
    CHECK(header[0] == "ray");
    CHECK(header[4] == "class");
    int lines = 0;
    for (char c : r.out)
      if (c == '\n') ++lines;
    CHECK(lines == 7);  // header + one class per ray
  }

  SUBCASE("classify reports the flags") {
    CliResult r = run_cli("classify --input " + fixture("a1_double.json"));
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["finite"] == true);
    CHECK(j["uncoupled"] == true);
    CHECK(j["integral"] == true);
  }

  SUBCASE("wallcross passes at the default tolerance and fails at zero") {
    CliResult ok =
        run_cli("wallcross --input " + fixture("kronecker_k1.json"));
    REQUIRE(ok.status == 0);
    auto j = nlohmann::json::parse(ok.out);
    CHECK(j["pass"] == true);
    CHECK(j["max_deviation"].get<double>() < 1e-8);
    CliResult strict = run_cli("wallcross --input " +
                               fixture("kronecker_k1.json") +
                               " --tolerance 1e-30");
    CHECK(strict.status == 2);
    auto js = nlohmann::json::parse(strict.out);
    CHECK(js["pass"] == false);
  }

  SUBCASE("solve matches the library") {
    CliResult r = run_cli("solve --input " + fixture("a1_double.json") +
                          " --ray 0,1 --beta 0,1 --t-start 0.1 --t-stop 1.0"
                          " --t-steps 3 --format csv");
    REQUIRE(r.status == 0);
    auto cells = csv_cells(r.out, 1);
    REQUIRE(cells.size() == 6);
    StructureConfig cfg =
        parse_structure(read_text_file(fixture("a1_double.json")));
    auto sol = make_rh_solution(make_bps_structure(cfg));
    Complex psi = solve_psi(sol, Complex(0.0, 1.0), {0, 1}, Complex(0.0, 0.1));
    Complex phi = solve_phi(sol, Complex(0.0, 1.0), {0, 1}, Complex(0.0, 0.1));
    CHECK(std::abs(std::stod(cells[2]) - psi.real()) < 1e-14);
    CHECK(std::abs(std::stod(cells[3]) - psi.imag()) < 1e-14);
    CHECK(std::abs(std::stod(cells[4]) - phi.real()) < 1e-14);
    CHECK(std::abs(std::stod(cells[5]) - phi.imag()) < 1e-14);
  }

  SUBCASE("gw-series matches the library") {
    CliResult r = run_cli("gw-series --input " + fixture("gw_chi200.json") +
                          " --truncation 4 --format csv");
    REQUIRE(r.status == 0);
    GvInput in = parse_gv(read_text_file(fixture("gw_chi200.json")));
    auto coeffs = gw_degenerate_series(in.chi, in.entries, 4);
    REQUIRE(coeffs.size() == 3);
    for (int g = 2; g <= 4; ++g) {
      auto cells = csv_cells(r.out, g - 1);
      REQUIRE(cells.size() == 3);
      CHECK(cells[0] == std::to_string(g));
      CHECK(std::abs(std::stod(cells[1]) - coeffs[g - 2].real()) <=
            1e-14 * std::abs(coeffs[g - 2]));
      CHECK(std::abs(std::stod(cells[2]) - coeffs[g - 2].imag()) <=
            1e-14 * std::abs(coeffs[g - 2]));
    }
  }

  SUBCASE("asymptotics emits the closed forms") {
    CliResult r = run_cli("asymptotics --input " + fixture("a1_double.json") +
                          " --truncation 3");
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["log_coefficient"] == "1/12");
    CHECK(std::abs(j["coefficients"][0]["value"][0].get<double>() +
                   1.0 / 240.0) < 1e-17);
    CHECK(std::abs(j["coefficients"][1]["value"][0].get<double>() -
                   1.0 / 1008.0) < 1e-17);
  }

  SUBCASE("output file matches stdout") {
    CliResult direct = run_cli("classify --input " + fixture("a1.json"));
    REQUIRE(direct.status == 0);
    CliResult filed = run_cli("classify --input " + fixture("a1.json") +
                              " --output /tmp/bpsrh_cli_report.json");
    REQUIRE(filed.status == 0);
    CHECK(filed.out.empty());
    CHECK(read_text_file("/tmp/bpsrh_cli_report.json") == direct.out);
  }

  SUBCASE("verbose logging is opt-in") {
    CliResult quiet = run_cli("classify --input " + fixture("a1.json"),
                              "BPSRH_LOG=");
    CHECK(quiet.err.empty());
    CliResult loud = run_cli("classify --input " + fixture("a1.json"),
                             "BPSRH_LOG=1");
    CHECK(loud.err.find("bpsrh: running classify") != std::string::npos);
  }

  SUBCASE("unknown flags and missing subcommand exit 1") {
    CliResult r = run_cli("rays --nonsense 3");
    CHECK(r.status == 1);
    CliResult none = run_cli("");
    CHECK(none.status == 1);
  }
}
