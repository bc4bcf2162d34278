#include "doctest.h"

#include "wpvol/errors.hpp"
#include "wpvol/volume.hpp"

using namespace wpvol;

namespace {

Chamber ch(int g, int n, const std::vector<std::vector<int>>& sets) {
  std::vector<Subset> light;
  for (const auto& s : sets) light.push_back(set_from_labels(s));
  return Chamber(g, n, light);
}

Poly P(int n, const char* text) { return parse_poly(text, PolyRing::angles(n)); }

// the five (0,4) chambers of the worked example
const Chamber B0 = ch(0, 4, {});
const Chamber B1 = ch(0, 4, {{3, 4}});
const Chamber B2 = ch(0, 4, {{2, 4}, {3, 4}});
const Chamber B3 = ch(0, 4, {{1, 4}, {2, 4}, {3, 4}});
const Chamber B4 = ch(0, 4, {{2, 3}, {2, 4}, {3, 4}});

const char* kC0 = "2*pi^2 - 1/2*(t1^2 + t2^2 + t3^2 + t4^2)";
const char* kC1 = "-1/2*t1^2 - 1/2*t2^2 + (2*pi - t3)*(2*pi - t4)";
const char* kC2 = "-1/2*t1^2 + 1/2*t4^2 + (2*pi - t4)*(4*pi - t2 - t3) - 2*pi^2";
const char* kC3 = "(2*pi - t4)*(4*pi - t1 - t2 - t3 - t4)";
const char* kC4 = "1/2*(4*pi - t1 - t2 - t3 - t4)*(4*pi - t2 - t3 - t4 + t1)";

const char* kV12 = "1/192*(4*pi^2 - t1^2 - t2^2)*(12*pi^2 - t1^2 - t2^2)";
const char* kV12Light = "1/48*(2*pi - t1)*(2*pi - t2)*(8*pi^2 - t1^2 - t2^2 - (2*pi - t1)*(2*pi - t2))";
const char* kWc12 = "1/192*(t1 + t2 - 2*pi)^2*(8*pi^2 - (t1 + t2 - 2*pi)^2)";

}  // namespace

TEST_CASE("main-chamber volumes") {
  auto& e = default_engine();
  CHECK(e.mirzakhani_volume(0, 3).poly == P(3, "1"));
  CHECK(e.mirzakhani_volume(0, 4).poly == P(4, kC0));
  CHECK(e.mirzakhani_volume(1, 1).poly == P(1, "1/48*(4*pi^2 - t1^2)"));
  CHECK(e.mirzakhani_volume(1, 2).poly == P(2, kV12));
  CHECK(e.mirzakhani_volume(2, 1).poly ==
        P(1, "(4*pi^2 - t1^2)*(12*pi^2 - t1^2)*(6960*pi^4 - 384*pi^2*t1^2 + 5*t1^4)/2211840"));
  CHECK(evaluate_formal(e.mirzakhani_volume(0, 5).poly, {0, 0, 0, 0, 0}) == P(0, "10*pi^4"));
  CHECK(evaluate_formal(e.mirzakhani_volume(1, 2).poly, {0, 0}) == P(0, "1/4*pi^4"));
  CHECK(evaluate_formal(e.mirzakhani_volume(2, 1).poly, {0}) == P(0, "29/192*pi^8"));

  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 5}, {0, 6}, {1, 3}, {2, 2}, {3, 1}}) {
    const auto v = e.mirzakhani_volume(g, n);
    CHECK(v.poly.total_degree() == 2 * (3 * g - 3 + n));
    CHECK(v.provenance.kind == Provenance::Kind::MainChamber);
    for (const auto& [ex, c] : v.poly.terms()) {
      for (int j = 1; j <= n; ++j) CHECK(ex[static_cast<std::size_t>(j)] % 2 == 0);
    }
  }
  CHECK_THROWS_AS(e.mirzakhani_volume(0, 2), Unstable);
  CHECK_THROWS_AS(e.mirzakhani_volume(4, 1), BoundExceeded);
  VolumeEngine big({.max_genus = 4});
  CHECK(big.mirzakhani_volume(4, 1).poly.total_degree() == 20);
}

TEST_CASE("the five (0,4) chambers and their wall-crossings") {
  auto& e = default_engine();
  CHECK(e.chamber_volume(B0).poly == P(4, kC0));
  CHECK(e.chamber_volume(B1).poly == P(4, kC1));
  CHECK(e.chamber_volume(B2).poly == P(4, kC2));
  CHECK(e.chamber_volume(B3).poly == P(4, kC3));
  CHECK(e.chamber_volume(B4).poly == P(4, kC4));
  CHECK(e.chamber_volume(B4).provenance.kind == Provenance::Kind::WallCrossingPath);

  CHECK(e.wall_crossing_poly(B0, set_from_labels({3, 4})).poly == P(4, "1/2*(t3 + t4 - 2*pi)^2"));
  CHECK(e.wall_crossing_poly(B1, set_from_labels({2, 4})).poly == P(4, "1/2*(t2 + t4 - 2*pi)^2"));
  CHECK(e.wall_crossing_poly(B2, set_from_labels({1, 4})).poly == P(4, "1/2*(t1 + t4 - 2*pi)^2"));
  CHECK(e.wall_crossing_poly(B2, set_from_labels({2, 3})).poly == P(4, "1/2*(t2 + t3 - 2*pi)^2"));
  CHECK(e.wall_crossing_poly(B2, set_from_labels({2, 3})).phi == P(4, "t2 + t3 - 2*pi"));

  // differences of adjacent chambers are the wall-crossings
  CHECK(P(4, kC2) - P(4, kC1) == e.wall_crossing_poly(B1, set_from_labels({2, 4})).poly);

  CHECK_THROWS_AS(e.wall_crossing_poly(B0, set_from_labels({1, 2, 3})), NotIncident);
  CHECK_THROWS_AS(e.wall_crossing_poly(B1, set_from_labels({3, 4})), NotIncident);
  CHECK_THROWS_AS(e.chamber_volume(ch(0, 4, {{1, 2}, {3, 4}})), NotRealizable);
}

TEST_CASE("genus one, two points") {
  auto& e = default_engine();
  const Chamber light = light_chamber({1, 2});
  CHECK(e.chamber_volume(light).poly == P(2, kV12Light));
  const auto w = e.wall_crossing_poly(main_chamber({1, 2}), set_from_labels({1, 2}));
  CHECK(w.poly == P(2, kWc12));

  // g >= 1, n = 2: wc = int_0^phi V_{g,1}(t) t dt
  for (int g = 1; g <= 3; ++g) {
    const auto wg = e.wall_crossing_poly(main_chamber({g, 2}), set_from_labels({1, 2}));
    const auto r = PolyRing::angles(2, true);
    const Poly v1 = e.mirzakhani_volume(g, 1).poly.compose(r, {Poly::pi(r), Poly::var(r, 3)});
    const Poly phi = phi_form(2, set_from_labels({1, 2})).rename_into(r);
    CHECK(wg.poly == (v1 * Poly::var(r, 3)).integrate_upper(3, phi).rename_into(PolyRing::angles(2)));
  }

  CHECK(eval_at_2pi(e.chamber_volume(light).poly, 2).is_zero());
  for (int g = 1; g <= 3; ++g) {
    const auto lim = limit_value_g2(e, g);
    CHECK(lim.holds());
    CHECK(limit_derivative_g2(e, g, false).holds());
    CHECK(limit_derivative_g2(e, g, true).holds());
    CHECK(incident_limit_check(e, main_chamber({g, 2}), 2).holds());
  }
  // in the main chamber the derivative carries no theta_1 term
  const auto both = limit_derivative_g2(e, 1, true);
  const auto mirz = limit_derivative_g2(e, 1, false);
  CHECK(both.lhs != mirz.lhs);
}

TEST_CASE("(0,5) wall-crossings") {
  auto& e = default_engine();
  const Subset s345 = set_from_labels({3, 4, 5});
  int above = 0;
  for (const auto& c : enumerate_chambers({0, 5}, false)) {
    if (!flip_down(c, s345) || !is_realizable(*flip_down(c, s345))) continue;
    ++above;
    CHECK(e.wall_crossing_poly(c, s345).poly == P(5, "1/8*(t3 + t4 + t5 - 4*pi)^4"));
  }
  CHECK(above > 1);

  const Subset s45 = set_from_labels({4, 5});
  const char* cases[] = {
      "1/8*(2*pi - t4 - t5)^2*(4*pi^2 - 2*(t1^2 + t2^2 + t3^2) + 4*pi*(t4 + t5) - (t4 + t5)^2)",
      "1/8*(2*pi - t4 - t5)^2*(12*pi^2 - 2*t1^2 + 4*t2*t3 - (t4 + t5)^2 - 4*pi*(2*t2 + 2*t3 - t4 - t5))",
      "1/8*(2*pi - t4 - t5)^2*(20*pi^2 + 2*t3*(2*t1 + 2*t2 + t3) - (t4 + t5)^2 - 4*pi*(2*t1 + 2*t2 + 4*t3 - t4 - t5))",
      // squared, not cubed: the integral gives degree 4
      "1/8*(2*pi - t4 - t5)^2*(2*(4*pi - t1 - t2 - t3)^2 - (2*pi - t4 - t5)^2)",
  };
  int seen[4] = {0, 0, 0, 0};
  for (const auto& c : enumerate_chambers({0, 5}, false)) {
    if (!flip_down(c, s45) || !is_realizable(*flip_down(c, s45))) continue;
    const Chamber q = quotient(c, s45);
    const bool l12 = q.light(set_from_labels({1, 2})), l13 = q.light(set_from_labels({1, 3})),
               l23 = q.light(set_from_labels({2, 3}));
    int k = -1;
    if (!l12 && !l13 && !l23) k = 0;
    else if (!l12 && !l13 && l23) k = 1;
    else if (!l12 && l13 && l23) k = 2;
    else if (l12 && l13 && l23) k = 3;
    if (k < 0) continue;
    ++seen[k];
    CHECK(e.wall_crossing_poly(c, s45).poly == P(5, cases[k]));
  }
  for (int k : seen) CHECK(k > 0);
  CHECK(P(5, "1/8*(2*pi - t4 - t5)^2*(2*(4*pi - t1 - t2 - t3)^3 - (2*pi - t4 - t5)^2)").total_degree() == 5);
}

TEST_CASE("chamber volume examples and piecewise evaluation") {
  auto& e = default_engine();
  const auto pv = piecewise_volume(e, {0, {Rational(9, 10), Rational(9, 10), Rational(9, 10), Rational(9, 10)}});
  CHECK(pv.chamber.is_main());
  CHECK(pv.value == P(0, "48/25*pi^2"));

  const auto pl = piecewise_volume(e, {1, {Rational(1, 10), Rational(1, 10)}});
  CHECK(pl.chamber == light_chamber({1, 2}));
  CHECK(pl.value == evaluate_at_weights(P(2, kV12Light), {Rational(1, 10), Rational(1, 10)}));

  // cusp volumes: all weights 1 is the main chamber with theta = 0
  const auto cusp = piecewise_volume(e, {1, {Rational(1), Rational(1)}});
  CHECK(cusp.value == P(0, "1/4*pi^4"));
  CHECK_THROWS_AS(piecewise_volume(e, {0, {Rational(1, 2), Rational(1, 2), Rational(9, 10), Rational(9, 10)}}), OnWall);
}

TEST_CASE("closed forms agree with the engine") {
  auto& e = default_engine();
  CHECK(minimal_chamber_volume_closed(3, 1).poly == P(3, "1"));
  CHECK(minimal_chamber_volume_closed(4, 1).poly == P(4, kC4));
  for (int n = 4; n <= 6; ++n) {
    for (int j : {1, n}) {
      const auto closed = minimal_chamber_volume_closed(n, j);
      CHECK(closed.poly == e.chamber_volume(closed.chamber).poly);
    }
  }
  CHECK(losev_manin_volume(2).poly == P(2, "(2*pi - t1)*(2*pi - t2)"));  // 4 pi^2 eps_1 eps_2
  for (int n = 2; n <= 4; ++n) CHECK(losev_manin_volume(n).poly == losev_manin_engine(e, n));
  CHECK(cp1n_volume(1).poly == P(4, "(2*pi - t1)*(4*pi - t1 - t2 - t3 - t4)"));
  for (int n = 1; n <= 3; ++n) CHECK(cp1n_volume(n).poly == e.chamber_volume(cp1n_chamber(n)).poly);

  // equal weights: (2pi)^{2(n-1)} n^{n-2} eps^{2(n-1)}
  std::vector<Poly> w{Poly(eps_ring()), Poly(eps_ring(), Rational(1))};
  for (int n = 2; n <= 6; ++n) {
    w.push_back(equal_weight(losev_manin_volume(n).poly, n));
    const Poly x = Poly::pi(eps_ring()) * Poly::var(eps_ring(), 1) * Rational(2);
    CHECK(w.back() == x.pow(static_cast<unsigned>(2 * (n - 1))) * Rational(n).pow(n - 2));
    CHECK(cayley_identity(w, n).holds());
  }
  for (int n = 2; n <= 4; ++n) CHECK(equal_weight(losev_manin_engine(e, n), n) == w[static_cast<std::size_t>(n)]);
}

TEST_CASE("limits and dilaton identities") {
  auto& e = default_engine();
  // light coordinates vanish at 2 pi
  for (int n : {4, 5}) {
    for (const auto& c : enumerate_chambers({0, n}, false)) {
      const auto v = e.chamber_volume(c).poly;
      for (int i = 1; i <= n; ++i) {
        if (is_light(c, i)) CHECK(eval_at_2pi(v, i).is_zero());
        if (light_chamber_below(c, i)) CHECK(incident_limit_check(e, c, i).holds());
        if (is_flat(c, i)) CHECK(dilaton_check(e, c, i).holds());
      }
    }
  }
  for (int i = 1; i <= 3; ++i) CHECK(eval_at_2pi(e.chamber_volume(cp1n_chamber(3)).poly, i).is_zero());

  // coefficient examples
  const auto dm = dilaton_check(e, main_chamber({1, 3}), 3);
  CHECK(dm.holds());
  CHECK(dm.rhs == P(3, "-2*pi*2") * relabel_angles(e.mirzakhani_volume(1, 2).poly, 3, {1, 2}));
  const auto dl = dilaton_check(e, light_chamber({1, 2}), 2);
  CHECK(dl.holds());
  CHECK(dl.rhs == P(2, "t1 - 2*pi") * relabel_angles(e.mirzakhani_volume(1, 1).poly, 2, {1}));
  CHECK_THROWS_AS(dilaton_check(e, B4, 2), NotFlat);

  // wall derivative examples
  const auto w2 = wc_derivative_check(e, B0, set_from_labels({3, 4}), 4);
  CHECK(w2.holds());
  CHECK(w2.lhs == P(4, "t3"));
  const Chamber c5 = classify({0, {Rational(9, 10), Rational(9, 10), Rational(7, 20), Rational(7, 20), Rational(7, 20)}});
  const auto w3 = wc_derivative_check(e, c5, set_from_labels({3, 4, 5}), 5);
  CHECK(w3.holds());
  CHECK(w3.lhs == P(5, "1/2*(t3 + t4 - 2*pi)^3"));
  for (int j : {3, 4}) CHECK(wc_derivative_check(e, c5, set_from_labels({3, 4, 5}), j).holds());
}

TEST_CASE("general dilaton identity") {
  auto& e = default_engine();
  // trivial path reduces to the dilaton check
  const Chamber m = main_chamber({1, 2});
  CHECK(general_dilaton_check(e, m, CrossingPath{m, {}}, 2).holds());

  // minimal chamber from the flat chamber just above the wall {2, ..., n-1}
  for (int n = 4; n <= 7; ++n) {
    const Chamber c1 = minimal_chamber_0(n, 1);
    const Subset s = full_set(n - 1) & ~singleton(1);
    std::vector<Subset> light;
    for (Subset l : c1.light_max()) {
      if (l == s) {
        for (int k : set_labels(s)) light.push_back(s & ~singleton(k));
      } else {
        light.push_back(l);
      }
    }
    const Chamber b(0, n, light);
    REQUIRE(is_realizable(b));
    CHECK(is_flat(b, n));
    CHECK(simple_cross(b, s) == c1);
    const auto sides = general_dilaton_check(e, c1, CrossingPath{b, {{b, s}}}, n);
    CHECK(sides.holds());
    // -2 pi (-1 + sum_{j=2}^{n-1} a_j) V_{C_1}(n-1 points)
    const auto r = PolyRing::angles(n);
    Poly coeff = Poly::pi(r) * Rational(2);
    for (int j = 2; j < n; ++j) coeff += Poly::theta(r, j) - Poly::pi(r) * Rational(2);
    const auto prev = minimal_chamber_volume_closed(n - 1, 1).poly;
    std::vector<int> labels;
    for (int j = 1; j < n; ++j) labels.push_back(j);
    CHECK(sides.lhs == coeff * relabel_angles(prev, n, labels));
  }

  // every chamber of D_{0,5}, from the main chamber and to a flat chamber below when there is one
  int below = 0;
  for (const auto& c : enumerate_chambers({0, 5}, false)) {
    for (int i = 1; i <= 5; ++i) {
      CHECK(general_dilaton_check(e, c, crossing_path(main_chamber({0, 5}), c), i).holds());
      const auto f = flat_chamber_below(c, i);
      if (!f) continue;
      ++below;
      CHECK(general_dilaton_check(e, c, crossing_path(c, *f), i).holds());
    }
  }
  CHECK(below > 0);
  CHECK_THROWS_AS(general_dilaton_check(e, B4, CrossingPath{B4, {}}, 2), InvalidPath);
}

TEST_CASE("wall-crossing structure") {
  auto& e = default_engine();
  for (const auto& space : std::vector<StabilitySpace>{{0, 4}, {0, 5}, {1, 2}, {1, 3}}) {
    for (const auto& c : enumerate_chambers(space, false)) {
      for (Subset s : c.minimal_heavy()) {
        const auto below = flip_down(c, s);
        if (!below || !is_realizable(*below)) continue;
        const auto w = e.wall_crossing_poly(c, s);
        for (const auto& r : continuity_residues(w)) CHECK(r.is_zero());
        CHECK(even_in_phi(w));
        CHECK(w.poly.total_degree() <= 2 * (3 * c.g() - 3 + c.n()));
      }
    }
  }
  // an injected shift of phi breaks continuity
  VolumeEngine broken({.phi_offset = 1});
  const auto bw = broken.wall_crossing_poly(B0, set_from_labels({3, 4}));
  bool all_zero = true;
  for (const auto& r : continuity_residues(bw)) all_zero = all_zero && r.is_zero();
  CHECK_FALSE(all_zero);
}

TEST_CASE("path independence, symmetry and positivity") {
  VolumeEngine first({.path = PathStrategy::GreedyFirst});
  VolumeEngine last({.path = PathStrategy::GreedyLast});
  auto& seg = default_engine();
  for (const auto& space : std::vector<StabilitySpace>{{0, 4}, {0, 5}, {1, 2}}) {
    for (const auto& c : enumerate_chambers(space, false)) {
      const Poly v = seg.chamber_volume(c).poly;
      CHECK(first.chamber_volume(c).poly == v);
      CHECK(last.chamber_volume(c).poly == v);
      for (const auto& a : interior_points(c, 5, 7)) {
        CHECK(classify({c.g(), a}) == c);
        CHECK(numeric_sign(evaluate_at_weights(v, a)) > 0);
      }
    }
  }
  // symmetric under permutations fixing the chamber: B1 is fixed by swapping 1,2 and 3,4
  const Poly v1 = seg.chamber_volume(B1).poly;
  const auto r = PolyRing::angles(4);
  CHECK(v1.compose(r, {Poly::pi(r), Poly::theta(r, 2), Poly::theta(r, 1), Poly::theta(r, 4), Poly::theta(r, 3)}) == v1);
}

TEST_CASE("volume JSON") {
  auto& e = default_engine();
  const auto j = to_json(e.chamber_volume(B1));
  CHECK(j["provenance"]["kind"] == "wall-crossing-path");
  CHECK(chamber_from_json(j["chamber"]) == B1);
  CHECK(poly_from_json(j["poly"]) == P(4, kC1));
  CHECK(to_json(e.chamber_volume(B0))["provenance"]["kind"] == "main-chamber-intersection");
  CHECK(to_json(losev_manin_volume(3))["provenance"]["name"] == "losev-manin");
  const auto wj = to_json(e.wall_crossing_poly(B0, set_from_labels({3, 4})));
  CHECK(wj["wall"] == nlohmann::json::array({3, 4}));
}
