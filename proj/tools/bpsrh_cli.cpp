#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bpsrh/bps.hpp"
#include "bpsrh/errors.hpp"
#include "bpsrh/formal.hpp"
#include "bpsrh/io.hpp"
#include "bpsrh/rh.hpp"
#include "bpsrh/torus.hpp"

namespace {

using namespace bpsrh;

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Options {
  std::string input;
  std::string output;
  std::string format = "json";
  int truncation = 0;
  double t_start = 0.1;
  double t_stop = 1.0;
  int t_steps = 5;
  std::string ray_arg;
  std::string beta_arg;
  double tolerance = 0.0;
  int k = 1;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15e", v);
  return buf;
}

Complex parse_complex_arg(const std::string& text, const std::string& flag) {
  double re = 0.0, im = 0.0;
  char tail = '\0';
  if (std::sscanf(text.c_str(), "%lf,%lf%c", &re, &im, &tail) != 2)
    fail(Errc::schema_error, flag + ": expected \"re,im\", got \"" + text +
                                 "\"");
  return Complex(re, im);
}

Charge parse_charge_arg(const std::string& text, int rank,
                        const std::string& flag) {
  Charge g;
  const char* p = text.c_str();
  while (true) {
    char* end = nullptr;
    long long v = std::strtoll(p, &end, 10);
    if (end == p)
      fail(Errc::schema_error,
           flag + ": expected comma-separated integers, got \"" + text + "\"");
    g.push_back(v);
    p = end;
    if (*p == '\0') break;
    if (*p != ',')
      fail(Errc::schema_error,
           flag + ": expected comma-separated integers, got \"" + text + "\"");
    ++p;
  }
  if (static_cast<int>(g.size()) != rank)
    fail(Errc::schema_error, flag + ": expected " + std::to_string(rank) +
                                 " entries, got " +
                                 std::to_string(g.size()));
  return g;
}

// Geometric grid t_j = unit(dir) * s_j, s_j from t_start to t_stop.
std::vector<Complex> t_grid(const Options& o, Complex dir) {
  if (!(o.t_start > 0.0) || !(o.t_stop > 0.0))
    fail(Errc::schema_error, "--t-start/--t-stop: must be positive");
  if (o.t_steps < 1) fail(Errc::schema_error, "--t-steps: must be >= 1");
  Complex unit = dir / std::abs(dir);
  std::vector<Complex> ts;
  if (o.t_steps == 1) {
    ts.push_back(unit * o.t_start);
    return ts;
  }
  for (int j = 0; j < o.t_steps; ++j) {
    double s = o.t_start * std::pow(o.t_stop / o.t_start,
                                    static_cast<double>(j) / (o.t_steps - 1));
    ts.push_back(unit * s);
  }
  return ts;
}

void emit(const Options& o, const Json& report,
          const std::vector<std::string>& csv_lines) {
  std::string text;
  if (o.format == "csv") {
    for (const std::string& line : csv_lines) {
      text += line;
      text += '\n';
    }
  } else {
    text = dump_json(report) + "\n";
  }
  if (o.output.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_text_file(o.output, text);
}

Json json_charge(const Charge& g) {
  JsonArray a;
  for (std::int64_t m : g) a.emplace_back(m);
  return Json(std::move(a));
}

std::string charge_cell(const Charge& g) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(g[i]);
  }
  return out;
}

// Nearest ray to the requested direction by angle; ties by listing order.
const Ray& select_ray(const std::vector<Ray>& rays, Complex wanted) {
  if (rays.empty()) fail(Errc::domain_violation, "structure has no active rays");
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rays.size(); ++i) {
    double gap = std::abs(std::arg(rays[i].direction / wanted));
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return rays[best];
}

int cmd_rays(const Options& o) {
  auto s = make_bps_structure(load_structure(o.input));
  auto rays = active_rays(s, std::numeric_limits<double>::infinity());
  JsonArray list;
  std::vector<std::string> csv = {"ray,direction_re,direction_im,height,class"};
  for (std::size_t i = 0; i < rays.size(); ++i) {
    JsonArray classes;
    for (const Charge& g : rays[i].active_classes) {
      classes.push_back(json_charge(g));
      csv.push_back(std::to_string(i) + "," + fmt(rays[i].direction.real()) +
                    "," + fmt(rays[i].direction.imag()) + "," +
                    fmt(rays[i].height) + "," + charge_cell(g));
    }
    list.emplace_back(JsonObject{
        {"direction", json_complex(rays[i].direction)},
        {"height", Json(rays[i].height)},
        {"classes", Json(std::move(classes))}});
  }
  emit(o,
       Json(JsonObject{{"command", "rays"},
                       {"count", Json(static_cast<std::int64_t>(rays.size()))},
                       {"rays", Json(std::move(list))}}),
       csv);
  return 0;
}

int cmd_classify(const Options& o) {
  auto s = make_bps_structure(load_structure(o.input));
  auto flags = classify(s);
  Json k1, k2;
  std::string k1_cell, k2_cell;
  if (!s.omega.empty()) {
    k1 = Json(s.support_k1());
    k2 = Json(s.support_k2());
    k1_cell = fmt(s.support_k1());
    k2_cell = fmt(s.support_k2());
  }
  auto yn = [](bool b) { return b ? "true" : "false"; };
  std::vector<std::string> csv = {
      "property,value",
      std::string("finite,") + yn(flags.finite),
      std::string("ray_finite,") + yn(flags.ray_finite),
      std::string("uncoupled,") + yn(flags.uncoupled),
      std::string("generic,") + yn(flags.generic),
      std::string("integral,") + yn(flags.integral),
      "support_k1," + k1_cell,
      "support_k2," + k2_cell,
  };
  emit(o,
       Json(JsonObject{{"command", "classify"},
                       {"finite", Json(flags.finite)},
                       {"ray_finite", Json(flags.ray_finite)},
                       {"uncoupled", Json(flags.uncoupled)},
                       {"generic", Json(flags.generic)},
                       {"integral", Json(flags.integral)},
                       {"support_k1", k1},
                       {"support_k2", k2}}),
       csv);
  return 0;
}

int cmd_wallcross(const Options& o) {
  auto s = make_bps_structure(load_structure(o.input));
  auto rays = active_rays(s, std::numeric_limits<double>::infinity());
  std::vector<Ray> chosen;
  if (o.ray_arg.empty())
    chosen = rays;
  else
    chosen = {select_ray(rays, parse_complex_arg(o.ray_arg, "--ray"))};
  const double tol = o.tolerance > 0.0 ? o.tolerance : 1e-8;
  const int steps = o.t_steps;
  if (steps < 1) fail(Errc::schema_error, "--t-steps: must be >= 1");

  JsonArray list;
  std::vector<std::string> csv = {"ray,direction_re,direction_im,deviation"};
  double worst = 0.0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const Ray& l = chosen[i];
    // Deterministic base point adapted to the ray: coordinate moduli are
    // chosen so the ray classes have |x| <= 0.35, where both the flow and
    // the birational map converge.
    Charge prim = charge_divide(l.active_classes.front(),
                                charge_content(l.active_classes.front()));
    std::vector<Complex> coords(s.rank);
    for (int j = 0; j < s.rank; ++j)
      coords[j] = std::polar(prim[j] < 0 ? 1.0 / 0.35 : 0.35,
                             kTwoPi * (j + 1) / (s.rank + 1));
    TorusPoint p = make_torus_point(s, coords);
    TorusPoint bir = birational_wall_auto(s, l, p);
    TorusPoint flow = hamiltonian_flow(s, l, p, steps);
    double dev = 0.0;
    for (int j = 0; j < s.rank; ++j)
      dev = std::max(dev, std::abs(bir.coords[j] - flow.coords[j]));
    worst = std::max(worst, dev);
    list.emplace_back(JsonObject{{"direction", json_complex(l.direction)},
                                 {"deviation", Json(dev)}});
    csv.push_back(std::to_string(i) + "," + fmt(l.direction.real()) + "," +
                  fmt(l.direction.imag()) + "," + fmt(dev));
  }
  bool pass = worst <= tol;
  emit(o,
       Json(JsonObject{{"command", "wallcross"},
                       {"steps", Json(static_cast<std::int64_t>(steps))},
                       {"tolerance", Json(tol)},
                       {"rays", Json(std::move(list))},
                       {"max_deviation", Json(worst)},
                       {"pass", Json(pass)}}),
       csv);
  return pass ? 0 : 2;
}

int cmd_kronecker(const Options& o) {
  if (o.k < 1 || o.k > 12)
    fail(Errc::schema_error, "--k: must be between 1 and 12");
  if (o.truncation < 1) fail(Errc::schema_error, "--truncation: must be >= 1");
  OmegaTable table = kronecker_wallcross(o.k, o.truncation);
  JsonArray list;
  std::vector<std::string> csv = {"gamma_1,gamma_2,value"};
  for (const auto& [g, v] : table) {
    list.emplace_back(JsonObject{{"gamma", json_charge(g)},
                                 {"value", Json(format_rational(v))}});
    csv.push_back(std::to_string(g[0]) + "," + std::to_string(g[1]) + "," +
                  format_rational(v));
  }
  emit(o,
       Json(JsonObject{
           {"command", "kronecker"},
           {"k", Json(static_cast<std::int64_t>(o.k))},
           {"truncation", Json(static_cast<std::int64_t>(o.truncation))},
           {"omega", Json(std::move(list))}}),
       csv);
  return 0;
}

int cmd_solve(const Options& o) {
  auto s = make_bps_structure(load_structure(o.input));
  auto sol = make_rh_solution(s);
  Complex r = parse_complex_arg(o.ray_arg, "--ray");
  Charge beta = parse_charge_arg(o.beta_arg, s.rank, "--beta");
  JsonArray points;
  std::vector<std::string> csv = {"t_re,t_im,psi_re,psi_im,phi_re,phi_im"};
  for (Complex t : t_grid(o, r)) {
    Complex psi = solve_psi(sol, r, beta, t);
    Complex phi = solve_phi(sol, r, beta, t);
    points.emplace_back(JsonObject{{"t", json_complex(t)},
                                   {"psi", json_complex(psi)},
                                   {"phi", json_complex(phi)}});
    csv.push_back(fmt(t.real()) + "," + fmt(t.imag()) + "," + fmt(psi.real()) +
                  "," + fmt(psi.imag()) + "," + fmt(phi.real()) + "," +
                  fmt(phi.imag()));
  }
  emit(o,
       Json(JsonObject{{"command", "solve"},
                       {"ray", json_complex(r)},
                       {"beta", json_charge(beta)},
                       {"points", Json(std::move(points))}}),
       csv);
  return 0;
}

int cmd_jump_check(const Options& o) {
  auto s = make_bps_structure(load_structure(o.input));
  auto sol = make_rh_solution(s);
  auto rays = active_rays(s, std::numeric_limits<double>::infinity());
  std::vector<Ray> chosen;
  if (o.ray_arg.empty())
    chosen = rays;
  else
    chosen = {select_ray(rays, parse_complex_arg(o.ray_arg, "--ray"))};
  const double tol = o.tolerance > 0.0 ? o.tolerance : 1e-10;

  JsonArray list;
  std::vector<std::string> csv = {"ray,direction_re,direction_im,max_residual"};
  double worst = 0.0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const Ray& l = chosen[i];
    double ray_worst = 0.0;
    Options grid = o;
    grid.t_start = 0.1 * l.height;
    grid.t_stop = 0.5 * l.height;
    for (Complex t : t_grid(grid, l.direction)) {
      for (int b = 0; b < s.rank; ++b) {
        Charge beta(s.rank, 0);
        beta[b] = 1;
        ray_worst = std::max(ray_worst, verify_jump(sol, l, beta, t));
      }
    }
    worst = std::max(worst, ray_worst);
    list.emplace_back(JsonObject{{"direction", json_complex(l.direction)},
                                 {"max_residual", Json(ray_worst)}});
    csv.push_back(std::to_string(i) + "," + fmt(l.direction.real()) + "," +
                  fmt(l.direction.imag()) + "," + fmt(ray_worst));
  }
  bool pass = worst <= tol;
  emit(o,
       Json(JsonObject{{"command", "jump-check"},
                       {"tolerance", Json(tol)},
                       {"rays", Json(std::move(list))},
                       {"max_residual", Json(worst)},
                       {"pass", Json(pass)}}),
       csv);
  return pass ? 0 : 2;
}

int cmd_tau(const Options& o) {
  auto s = make_bps_structure(load_structure(o.input));
  Complex r = parse_complex_arg(o.ray_arg, "--ray");
  auto te = make_tau_evaluator(s, r);
  JsonArray points;
  std::vector<std::string> csv = {
      "t_re,t_im,log_tau_re,log_tau_im,tau_re,tau_im"};
  for (Complex t : t_grid(o, r)) {
    Complex lt = log_tau(te, s.central_charge, t);
    Complex tv = std::exp(lt);
    points.emplace_back(JsonObject{{"t", json_complex(t)},
                                   {"log_tau", json_complex(lt)},
                                   {"tau", json_complex(tv)}});
    csv.push_back(fmt(t.real()) + "," + fmt(t.imag()) + "," + fmt(lt.real()) +
                  "," + fmt(lt.imag()) + "," + fmt(tv.real()) + "," +
                  fmt(tv.imag()));
  }
  emit(o,
       Json(JsonObject{{"command", "tau"},
                       {"ray", json_complex(r)},
                       {"points", Json(std::move(points))}}),
       csv);
  return 0;
}

int cmd_asymptotics(const Options& o) {
  auto s = make_bps_structure(load_structure(o.input));
  Complex r = o.ray_arg.empty() ? Complex(0.0, 1.0)
                                : parse_complex_arg(o.ray_arg, "--ray");
  auto te = make_tau_evaluator(s, r);
  int g_max = o.truncation;
  if (g_max < 2 || g_max > 25)
    fail(Errc::schema_error, "--truncation: genus bound must be in [2, 25]");
  JsonArray coeffs;
  std::vector<std::string> csv = {"g,value_re,value_im"};
  for (int g = 2; g <= g_max; ++g) {
    Complex c = tau_asymptotic_coeff(te, g);
    coeffs.emplace_back(JsonObject{{"g", Json(static_cast<std::int64_t>(g))},
                                   {"value", json_complex(c)}});
    csv.push_back(std::to_string(g) + "," + fmt(c.real()) + "," +
                  fmt(c.imag()));
  }
  emit(o,
       Json(JsonObject{
           {"command", "asymptotics"},
           {"log_coefficient", Json(format_rational(tau_log_coefficient(te)))},
           {"coefficients", Json(std::move(coeffs))}}),
       csv);
  return 0;
}

int cmd_gw_series(const Options& o) {
  GvInput in = load_gv(o.input);
  int g_max = o.truncation;
  auto coeffs = gw_degenerate_series(in.chi, in.entries, g_max);
  JsonArray list;
  std::vector<std::string> csv = {"g,value_re,value_im"};
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    int g = static_cast<int>(i) + 2;
    list.emplace_back(JsonObject{{"g", Json(static_cast<std::int64_t>(g))},
                                 {"value", json_complex(coeffs[i])}});
    csv.push_back(std::to_string(g) + "," + fmt(coeffs[i].real()) + "," +
                  fmt(coeffs[i].imag()));
  }
  emit(o,
       Json(JsonObject{{"command", "gw-series"},
                       {"chi", Json(in.chi)},
                       {"coefficients", Json(std::move(list))}}),
       csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BPS structures: rays, wall-crossing, explicit solutions"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&)> handler;

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    auto* in = cmd->add_option("--input", o.input, "structure JSON file");
    if (needs_input) in->required();
    cmd->add_option("--output", o.output, "write the report here (default stdout)");
    cmd->add_option("--format", o.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--t-start", o.t_start, "first |t| of the grid");
    cmd->add_option("--t-stop", o.t_stop, "last |t| of the grid");
    cmd->add_option("--t-steps", o.t_steps, "number of grid points");
  };

  auto* rays = app.add_subcommand("rays", "List the active rays");
  add_common(rays, true);
  rays->callback([&] { handler = cmd_rays; });

  auto* cls = app.add_subcommand("classify", "Report structure properties");
  add_common(cls, true);
  cls->callback([&] { handler = cmd_classify; });

  auto* wc = app.add_subcommand(
      "wallcross", "Compare the flow and birational forms of the wall map");
  add_common(wc, true);
  wc->add_option("--ray", o.ray_arg, "restrict to the ray nearest re,im");
  wc->add_option("--t-steps", o.t_steps, "flow steps (default 1000)");
  wc->add_option("--tolerance", o.tolerance, "failure threshold (default 1e-8)");
  wc->callback([&] {
    if (wc->count("--t-steps") == 0) o.t_steps = 1000;
    handler = cmd_wallcross;
  });

  auto* kr = app.add_subcommand(
      "kronecker", "Invariants after crossing the Kronecker wall");
  add_common(kr, false);
  kr->add_option("--k", o.k, "number of arrows")->required();
  kr->add_option("--truncation", o.truncation, "degree bound")->required();
  kr->callback([&] { handler = cmd_kronecker; });

  auto* sv = app.add_subcommand("solve", "Evaluate the explicit solution");
  add_common(sv, true);
  sv->add_option("--ray", o.ray_arg, "evaluation ray re,im")->required();
  sv->add_option("--beta", o.beta_arg, "class m1,m2,...")->required();
  add_grid(sv);
  sv->callback([&] { handler = cmd_solve; });

  auto* jc = app.add_subcommand(
      "jump-check", "Residual of the wall relation on the active rays");
  add_common(jc, true);
  jc->add_option("--ray", o.ray_arg, "restrict to the ray nearest re,im");
  jc->add_option("--t-steps", o.t_steps, "samples per ray");
  jc->add_option("--tolerance", o.tolerance,
                 "failure threshold (default 1e-10)");
  jc->callback([&] { handler = cmd_jump_check; });

  auto* ta = app.add_subcommand("tau", "Evaluate the tau function");
  add_common(ta, true);
  ta->add_option("--ray", o.ray_arg, "evaluation ray re,im")->required();
  add_grid(ta);
  ta->callback([&] { handler = cmd_tau; });

  auto* as = app.add_subcommand(
      "asymptotics", "Large-argument expansion coefficients of tau");
  add_common(as, true);
  as->add_option("--ray", o.ray_arg, "admission ray re,im (default 0,1)");
  o.truncation = 8;
  as->add_option("--truncation", o.truncation, "largest genus (default 8)");
  as->callback([&] { handler = cmd_asymptotics; });

  auto* gw = app.add_subcommand(
      "gw-series", "Degenerate contributions to the curve-count series");
  add_common(gw, true);
  gw->add_option("--truncation", o.truncation, "largest genus (default 6)");
  gw->callback([&] {
    if (gw->count("--truncation") == 0) o.truncation = 6;
    handler = cmd_gw_series;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const char* log = std::getenv("BPSRH_LOG");
  if (log != nullptr && *log != '\0' && std::string(log) != "0")
    std::fprintf(stderr, "bpsrh: running %s\n",
                 app.get_subcommands().front()->get_name().c_str());

  try {
    return handler(o);
  } catch (const bpsrh::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "Error: %s\n", e.what());
    return 1;
  }
}
