#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "bpsrh/bps.hpp"
#include "bpsrh/errors.hpp"
#include "bpsrh/torus.hpp"

using namespace bpsrh;

namespace {

BpsStructure a1(Complex z = Complex(0.0, 1.0)) {
  StructureConfig cfg;
  cfg.rank = 1;
  cfg.skew = {{0}};
  cfg.central_charge = {z};
  cfg.omega = {{{1}, Rational(1)}};
  return make_bps_structure(cfg);
}

// Doubled A1: basis (g, g_vee), <g_vee, g> = +1, Omega(+-g) = 1.
BpsStructure a1_double(Complex z = Complex(1.0, 0.0),
                       Complex zd = Complex(0.0, 1.0)) {
  return doubled(a1(z), std::vector<Complex>{zd});
}

// Rank 3 with odd and even pairings for sign-rule coverage.
BpsStructure rank3() {
  StructureConfig cfg;
  cfg.rank = 3;
  cfg.skew = {{0, 1, 2}, {-1, 0, 1}, {-2, -1, 0}};
  cfg.central_charge = {Complex(1.0, 0.2), Complex(-0.3, 1.0),
                        Complex(0.4, -1.1)};
  cfg.omega = {{{1, 0, 0}, Rational(1)}};
  return make_bps_structure(cfg);
}

// Double of a rank-2 zero-form structure: actives pair to zero mutually.
BpsStructure rank4_uncoupled() {
  StructureConfig cfg;
  cfg.rank = 2;
  cfg.skew = {{0, 0}, {0, 0}};
  cfg.central_charge = {Complex(1.0, 0.3), Complex(-0.2, 1.1)};
  cfg.omega = {{{1, 0}, Rational(1)},
               {{0, 1}, Rational(2)},
               {{1, 1}, Rational(1)}};
  return doubled(make_bps_structure(cfg),
                 std::vector<Complex>{Complex(0.4, -2.2), Complex(0.11, 0.77)});
}

const Ray& ray_through(const std::vector<Ray>& rays, const Charge& g) {
  for (const Ray& r : rays)
    for (const Charge& c : r.active_classes)
      if (c == g) return r;
  REQUIRE(false);
  return rays.front();
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::parse_error;  // sentinel: did not throw
}

}  // namespace

TEST_CASE("quadratic refinement signs") {
  SUBCASE("rank one is identically 1") {
    auto s = a1();
    auto g0 = quadratic_refinement(s);
    for (std::int64_t m = -3; m <= 3; ++m)
      CHECK(eval_twisted(g0, {m}) == Complex(1.0));
  }
  SUBCASE("doubled basis pair picks up the skew sign") {
    auto s = a1_double();
    auto g0 = quadratic_refinement(s);
    CHECK(eval_twisted(g0, {1, 1}) == Complex(-1.0));
    CHECK(eval_twisted(g0, {2, 0}) == Complex(1.0));
    CHECK(eval_twisted(g0, {2, 2}) == Complex(1.0));  // even multiples
    CHECK(eval_twisted(g0, {1, 0}) == Complex(1.0));  // basis classes
    CHECK(eval_twisted(g0, {0, 1}) == Complex(1.0));
  }
  SUBCASE("cocycle property holds exactly") {
    auto s = rank3();
    auto g0 = quadratic_refinement(s);
    std::mt19937 rng(77001);
    std::uniform_int_distribution<std::int64_t> d(-6, 6);
    for (int trial = 0; trial < 200; ++trial) {
      Charge a = {d(rng), d(rng), d(rng)}, b = {d(rng), d(rng), d(rng)};
      double sign = (s.pair(a, b) & 1) ? -1.0 : 1.0;
      CHECK(eval_twisted(g0, charge_add(a, b)) ==
            sign * eval_twisted(g0, a) * eval_twisted(g0, b));
    }
  }
}

TEST_CASE("twisted characters multiply with the exact sign") {
  auto s = rank3();
  // powers of two keep every product and inversion exact in doubles
  auto p = make_torus_point(s, {Complex(0.5), Complex(-2.0), Complex(4.0)});

  CHECK(eval_twisted(p, {0, 0, 0}) == Complex(1.0));
  CHECK(eval_twisted(p, {1, 0, 0}) == Complex(0.5));
  CHECK(eval_twisted(p, {0, 1, 0}) == Complex(-2.0));

  std::mt19937 rng(77002);
  std::uniform_int_distribution<std::int64_t> d(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    Charge a = {d(rng), d(rng), d(rng)}, b = {d(rng), d(rng), d(rng)};
    double sign = (s.pair(a, b) & 1) ? -1.0 : 1.0;
    CHECK(eval_twisted(p, a) * eval_twisted(p, b) ==
          sign * eval_twisted(p, charge_add(a, b)));
    CHECK(eval_twisted(p, a) * eval_twisted(p, charge_negate(a)) ==
          Complex(1.0));
  }
}

TEST_CASE("involution inverts coordinates") {
  auto s = rank3();
  auto p = make_torus_point(s, {Complex(0.5), Complex(-2.0), Complex(4.0)});
  auto q = involution_sigma(p);

  SUBCASE("rank one inversion and double involution") {
    auto s1 = a1();
    auto one = make_torus_point(s1, {Complex(0.25)});
    CHECK(involution_sigma(one).coords[0] == Complex(4.0));
    auto back = involution_sigma(involution_sigma(p));
    for (int i = 0; i < 3; ++i) CHECK(back.coords[i] == p.coords[i]);
  }
  SUBCASE("evaluation negates the class") {
    std::mt19937 rng(77003);
    std::uniform_int_distribution<std::int64_t> d(-5, 5);
    for (int trial = 0; trial < 100; ++trial) {
      Charge a = {d(rng), d(rng), d(rng)};
      CHECK(eval_twisted(q, a) == eval_twisted(p, charge_negate(a)));
    }
  }
  SUBCASE("the base point is a fixed point with values in +-1") {
    auto g0 = quadratic_refinement(s);
    auto h = involution_sigma(g0);
    std::mt19937 rng(77004);
    std::uniform_int_distribution<std::int64_t> d(-5, 5);
    for (int trial = 0; trial < 50; ++trial) {
      Charge a = {d(rng), d(rng), d(rng)};
      Complex v = eval_twisted(g0, a);
      CHECK(eval_twisted(h, a) == v);
      CHECK((v == Complex(1.0) || v == Complex(-1.0)));
    }
  }
}

TEST_CASE("sector domain membership") {
  auto s = a1(Complex(0.0, 1.0));  // Z(g) = i, Z(-g) = -i, |g| = 1

  SUBCASE("strict bound against exp(-R |g|)") {
    SectorDomain d(Complex(-0.5, 1.0), Complex(0.5, 1.0), 1.0);
    CHECK(in_domain(d, make_torus_point(s, {Complex(std::exp(-2.0))})));
    CHECK_FALSE(in_domain(d, make_torus_point(s, {Complex(std::exp(-0.5))})));
    CHECK_FALSE(in_domain(d, make_torus_point(s, {Complex(std::exp(-1.0))})));
  }
  SUBCASE("empty sector is vacuously inside") {
    SectorDomain d(Complex(1.0, 0.5), Complex(1.0, -0.5), 3.0);
    CHECK(in_domain(d, make_torus_point(s, {Complex(10.0)})));
  }
  SUBCASE("boundary rays belong to the closed sector") {
    SectorDomain d(Complex(0.0, 1.0), Complex(1.0, 0.2), 1.0);
    CHECK_FALSE(in_domain(d, make_torus_point(s, {Complex(std::exp(-0.5))})));
    CHECK(in_domain(d, make_torus_point(s, {Complex(std::exp(-2.0))})));
  }
  SUBCASE("constructor validation") {
    CHECK(code_of([] { SectorDomain d(Complex(0.5, 1.0), Complex(-0.5, 1.0), 1.0); }) ==
          Errc::domain_violation);  // anticlockwise pair
    CHECK(code_of([] { SectorDomain d(Complex(-1.0, 0.0), Complex(1.0, 0.0), 1.0); }) ==
          Errc::domain_violation);  // half turn
    CHECK(code_of([] { SectorDomain d(Complex(0.0, 1.0), Complex(1.0, 0.0), 0.0); }) ==
          Errc::domain_violation);  // radius
    CHECK(code_of([] { SectorDomain d(Complex(0.0, 0.0), Complex(1.0, 0.0), 1.0); }) ==
          Errc::domain_violation);  // zero direction
  }
  SUBCASE("point validation") {
    CHECK(code_of([&] { make_torus_point(s, {Complex(0.0)}); }) ==
          Errc::domain_violation);
    CHECK(code_of([&] { make_torus_point(s, {Complex(1.0), Complex(1.0)}); }) ==
          Errc::domain_violation);
  }
}

TEST_CASE("birational wall-crossing on the doubled structure") {
  auto s = a1_double();
  auto rays = active_rays(s, 10.0);
  REQUIRE(rays.size() == 2);
  const Ray& plus = ray_through(rays, {1, 0});
  const Ray& minus = ray_through(rays, {-1, 0});

  SUBCASE("substitution at x = 1/2 halves the dual coordinate") {
    auto p = make_torus_point(s, {Complex(0.5), Complex(0.25)});
    auto q = birational_wall_auto(s, plus, p);
    CHECK(q.coords[0] == Complex(0.5));
    CHECK(q.coords[1] == Complex(0.125));
  }
  SUBCASE("null classes are untouched") {
    auto p = make_torus_point(s, {Complex(0.5), Complex(0.25)});
    auto q = birational_wall_auto(s, plus, p);
    for (std::int64_t m = -3; m <= 3; ++m)
      CHECK(eval_twisted(q, {m, 0}) == eval_twisted(p, {m, 0}));
  }
  SUBCASE("pole on the divisor") {
    auto p = make_torus_point(s, {Complex(1.0), Complex(0.25)});
    CHECK(code_of([&] { birational_wall_auto(s, plus, p); }) ==
          Errc::pole_on_divisor);
  }
  SUBCASE("sigma conjugation swaps the ray") {
    std::mt19937 rng(77005);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int trial = 0; trial < 25; ++trial) {
      Complex c(u(rng), u(rng)), d(1.0 + u(rng), u(rng));
      if (std::abs(c - Complex(1.0)) < 0.1 || std::abs(c) < 0.1) continue;
      auto p = make_torus_point(s, {c, d});
      auto lhs = involution_sigma(
          birational_wall_auto(s, plus, involution_sigma(p)));
      auto rhs = birational_wall_auto(s, minus, p);
      for (int i = 0; i < 2; ++i)
        CHECK(std::abs(lhs.coords[i] - rhs.coords[i]) <= 1e-10);
    }
  }
  SUBCASE("uncoupled structures keep every active character") {
    auto u4 = rank4_uncoupled();
    auto urays = active_rays(u4, 10.0);
    REQUIRE(urays.size() == 6);
    auto p = make_torus_point(
        u4, {Complex(0.5), Complex(0.25), Complex(2.0), Complex(4.0)});
    for (const Ray& r : urays) {
      auto q = birational_wall_auto(u4, r, p);
      for (const auto& [g, v] : u4.omega)
        CHECK(eval_twisted(q, g) == eval_twisted(p, g));
    }
  }
  SUBCASE("classification preconditions") {
    StructureConfig cfg;
    cfg.rank = 2;
    cfg.skew = {{0, 1}, {-1, 0}};
    cfg.central_charge = {Complex(1.0, 1.0), Complex(2.0, 2.0)};
    cfg.omega = {{{1, 0}, Rational(1)}, {{0, 1}, Rational(1)}};
    auto bad = make_bps_structure(cfg);
    auto brays = active_rays(bad, 10.0);
    auto p = make_torus_point(bad, {Complex(0.5), Complex(0.5)});
    CHECK(code_of([&] { birational_wall_auto(bad, brays[0], p); }) ==
          Errc::not_generic);

    auto frac = doubled(
        [&] {
          StructureConfig c1;
          c1.rank = 1;
          c1.skew = {{0}};
          c1.central_charge = {Complex(1.0)};
          c1.omega = {{{1}, Rational(1, 2)}};
          return make_bps_structure(c1);
        }());
    auto frays = active_rays(frac, 10.0);
    auto pf = make_torus_point(frac, {Complex(0.5), Complex(0.5)});
    CHECK(code_of([&] { birational_wall_auto(frac, frays[0], pf); }) ==
          Errc::not_integral);
  }
}

TEST_CASE("hamiltonian flow reproduces the birational map") {
  auto s = a1_double();
  auto rays = active_rays(s, 10.0);
  const Ray& plus = ray_through(rays, {1, 0});

  SUBCASE("dilogarithm flow at x = 0.3") {
    auto p = make_torus_point(s, {Complex(0.3), Complex(1.0)});
    auto q = hamiltonian_flow(s, plus, p, 1000);
    CHECK(q.coords[0] == Complex(0.3));  // its own bracket vanishes
    CHECK(std::abs(q.coords[1] - Complex(0.7)) <= 1e-8);
  }
  SUBCASE("matches the birational automorphism across the disc") {
    const Complex samples[] = {Complex(0.5), Complex(-0.5), Complex(0.3, 0.3),
                               Complex(0.0, 0.45), Complex(-0.2, -0.4)};
    for (const Complex& c : samples) {
      auto p = make_torus_point(s, {c, Complex(1.5, -0.5)});
      auto flow = hamiltonian_flow(s, plus, p, 1000);
      auto bir = birational_wall_auto(s, plus, p);
      for (int i = 0; i < 2; ++i)
        CHECK(std::abs(flow.coords[i] - bir.coords[i]) <= 1e-8);
    }
  }
  SUBCASE("uncoupled flow fixes active characters exactly") {
    auto u4 = rank4_uncoupled();
    auto all_rays = active_rays(u4, 10.0);
    auto p = make_torus_point(
        u4, {Complex(0.5), Complex(0.25), Complex(2.0), Complex(4.0)});
    // mirror rays see |x| > 1 at this point; flow only on contracting rays
    const std::vector<Ray> urays = {ray_through(all_rays, {1, 0, 0, 0}),
                                    ray_through(all_rays, {0, 1, 0, 0}),
                                    ray_through(all_rays, {1, 1, 0, 0})};
    for (const Ray& r : urays) {
      auto q = hamiltonian_flow(u4, r, p, 50);
      for (const auto& [g, v] : u4.omega)
        CHECK(eval_twisted(q, g) == eval_twisted(p, g));
      auto bir = birational_wall_auto(u4, r, p);
      for (int i = 0; i < 4; ++i)
        CHECK(std::abs(q.coords[i] - bir.coords[i]) <= 1e-8);
    }
  }
  SUBCASE("empty ray flows and crosses trivially") {
    Ray none;
    none.direction = Complex(1.0, 0.0);
    none.dir_key = {Integer(1), Integer(0)};
    auto p = make_torus_point(s, {Complex(0.3), Complex(0.7)});
    auto q = hamiltonian_flow(s, none, p, 10);
    CHECK(q.coords[0] == p.coords[0]);
    CHECK(q.coords[1] == p.coords[1]);
    auto b = birational_wall_auto(s, none, p);
    CHECK(b.coords[1] == p.coords[1]);
  }
  SUBCASE("divergence guards") {
    auto near_one = make_torus_point(s, {Complex(0.999), Complex(1.0)});
    CHECK(code_of([&] { hamiltonian_flow(s, plus, near_one, 10); }) ==
          Errc::flow_diverged);
    auto outside = make_torus_point(s, {Complex(1.2), Complex(1.0)});
    CHECK(code_of([&] { hamiltonian_flow(s, plus, outside, 10); }) ==
          Errc::flow_diverged);
    auto p = make_torus_point(s, {Complex(0.3), Complex(1.0)});
    CHECK(code_of([&] { hamiltonian_flow(s, plus, p, 0); }) ==
          Errc::out_of_range);
  }
}
