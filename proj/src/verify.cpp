#include "wpvol/verify.hpp"

#include "wpvol/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace wpvol {

namespace {

Poly P(int n, const char* text) { return parse_poly(text, PolyRing::angles(n)); }

Chamber ch(int g, int n, const std::vector<std::vector<int>>& sets) {
  std::vector<Subset> light;
  for (const auto& s : sets) light.push_back(set_from_labels(s));
  return Chamber(g, n, light);
}

CaseResult poly_case(std::string id, const Poly& expected, const Poly& computed) {
  return {std::move(id), to_text(expected), to_text(computed), expected == computed};
}

CaseResult identity_case(std::string id, const IdentitySides& s) { return poly_case(std::move(id), s.rhs, s.lhs); }

CaseResult value_case(std::string id, const Rational& expected, const Rational& computed) {
  return {std::move(id), expected.canonical_str(), computed.canonical_str(), expected == computed};
}

// aggregate over many instances; the first failure is kept for diagnosis
struct Tally {
  std::string id;
  int total = 0;
  int failed = 0;
  std::string first;

  void add(bool ok, const std::string& what) {
    ++total;
    if (!ok && failed++ == 0) first = what;
  }
  // failures on an empty tally would hide a broken generator
  CaseResult result() const {
    std::string computed = std::to_string(failed) + " failures of " + std::to_string(total);
    if (failed) computed += "; first: " + first;
    return {id, "0 failures", computed, failed == 0 && total > 0};
  }
};

std::vector<Chamber> crossable_above(const std::vector<Chamber>& all, Subset s) {
  std::vector<Chamber> out;
  for (const auto& c : all) {
    const auto b = flip_down(c, s);
    if (b && is_realizable(*b)) out.push_back(c);
  }
  return out;
}

// every realizable simple crossing of the space: (above, wall)
std::vector<std::pair<Chamber, Subset>> all_walls(const std::vector<Chamber>& all) {
  std::vector<std::pair<Chamber, Subset>> out;
  for (const auto& c : all) {
    for (Subset s : c.minimal_heavy()) {
      const auto b = flip_down(c, s);
      if (b && is_realizable(*b)) out.emplace_back(c, s);
    }
  }
  return out;
}

std::string where(const Chamber& c, int i) { return c.str() + " i=" + std::to_string(i); }

const Chamber kB0 = ch(0, 4, {});
const Chamber kB1 = ch(0, 4, {{3, 4}});
const Chamber kB2 = ch(0, 4, {{2, 4}, {3, 4}});
const Chamber kB3 = ch(0, 4, {{1, 4}, {2, 4}, {3, 4}});
const Chamber kB4 = ch(0, 4, {{2, 3}, {2, 4}, {3, 4}});

const char* kC0 = "2*pi^2 - 1/2*(t1^2 + t2^2 + t3^2 + t4^2)";
const char* kV12Light = "1/48*(2*pi - t1)*(2*pi - t2)*(8*pi^2 - t1^2 - t2^2 - (2*pi - t1)*(2*pi - t2))";

// ---------------------------------------------------------------- groups

std::vector<CaseResult> main_volumes(VolumeEngine& e, const VerifyOptions&) {
  return {
      poly_case("main/V_0_3", P(3, "1"), e.mirzakhani_volume(0, 3).poly),
      poly_case("main/V_0_4", P(4, kC0), e.mirzakhani_volume(0, 4).poly),
      poly_case("main/V_1_1", P(1, "1/48*(4*pi^2 - t1^2)"), e.mirzakhani_volume(1, 1).poly),
      poly_case("main/V_1_2", P(2, "1/192*(4*pi^2 - t1^2 - t2^2)*(12*pi^2 - t1^2 - t2^2)"),
                e.mirzakhani_volume(1, 2).poly),
  };
}

std::vector<CaseResult> d04_chambers(VolumeEngine& e, const VerifyOptions&) {
  std::vector<CaseResult> out{
      poly_case("d04/B0", P(4, kC0), e.chamber_volume(kB0).poly),
      poly_case("d04/B1", P(4, "-1/2*t1^2 - 1/2*t2^2 + (2*pi - t3)*(2*pi - t4)"), e.chamber_volume(kB1).poly),
      poly_case("d04/B2", P(4, "-1/2*t1^2 + 1/2*t4^2 + (2*pi - t4)*(4*pi - t2 - t3) - 2*pi^2"),
                e.chamber_volume(kB2).poly),
      poly_case("d04/B3", P(4, "(2*pi - t4)*(4*pi - t1 - t2 - t3 - t4)"), e.chamber_volume(kB3).poly),
      poly_case("d04/B4", P(4, "1/2*(4*pi - t1 - t2 - t3 - t4)*(4*pi - t2 - t3 - t4 + t1)"),
                e.chamber_volume(kB4).poly),
      poly_case("d04/wc_B0_34", P(4, "1/2*(t3 + t4 - 2*pi)^2"), e.wall_crossing_poly(kB0, set_from_labels({3, 4})).poly),
      poly_case("d04/wc_B1_24", P(4, "1/2*(t2 + t4 - 2*pi)^2"), e.wall_crossing_poly(kB1, set_from_labels({2, 4})).poly),
      poly_case("d04/wc_B2_14", P(4, "1/2*(t1 + t4 - 2*pi)^2"), e.wall_crossing_poly(kB2, set_from_labels({1, 4})).poly),
      poly_case("d04/wc_B2_23", P(4, "1/2*(t2 + t3 - 2*pi)^2"), e.wall_crossing_poly(kB2, set_from_labels({2, 3})).poly),
  };
  out.push_back(value_case("d04/chambers_up_to_symmetry", Rational(5),
                           Rational(static_cast<long>(enumerate_chambers({0, 4}, true).size()))));
  return out;
}

std::vector<CaseResult> genus_one(VolumeEngine& e, const VerifyOptions&) {
  const Chamber light = light_chamber({1, 2});
  return {
      poly_case("g1n2/light_chamber_volume", P(2, kV12Light), e.chamber_volume(light).poly),
      poly_case("g1n2/wall_crossing", P(2, "1/192*(t1 + t2 - 2*pi)^2*(8*pi^2 - (t1 + t2 - 2*pi)^2)"),
                e.wall_crossing_poly(main_chamber({1, 2}), set_from_labels({1, 2})).poly),
      poly_case("g1n2/light_vanishes_at_2pi", P(2, "0"), eval_at_2pi(e.chamber_volume(light).poly, 2)),
      // (g,2) limit: derivative of the volume near 2 pi, which is the light chamber
      identity_case("g1n2/light_derivative_at_2pi", limit_derivative_g2(e, 1, true)),
      // Mirzakhani's polynomial alone: 2 pi (1 - 2g) V_{g,1}
      identity_case("g1n2/main_derivative_at_2pi", limit_derivative_g2(e, 1, false)),
      identity_case("g1n2/main_value_at_2pi", limit_value_g2(e, 1)),
  };
}

std::vector<CaseResult> d05_walls(VolumeEngine& e, const VerifyOptions&) {
  const auto all = enumerate_chambers({0, 5}, false);
  std::vector<CaseResult> out;
  Tally t3{"d05/wc_345_every_chamber_above"};
  const Poly f3 = P(5, "1/8*(t3 + t4 + t5 - 4*pi)^4");
  for (const auto& c : crossable_above(all, set_from_labels({3, 4, 5}))) {
    // independent of the memo: difference of the two chamber volumes
    const Poly diff = e.chamber_volume(*flip_down(c, set_from_labels({3, 4, 5}))).poly - e.chamber_volume(c).poly;
    t3.add(diff == f3 && e.wall_crossing_poly(c, set_from_labels({3, 4, 5})).poly == f3, c.str());
  }
  out.push_back(t3.result());

  const Subset s45 = set_from_labels({4, 5});
  const char* forms[] = {
      "1/8*(2*pi - t4 - t5)^2*(4*pi^2 - 2*(t1^2 + t2^2 + t3^2) + 4*pi*(t4 + t5) - (t4 + t5)^2)",
      "1/8*(2*pi - t4 - t5)^2*(12*pi^2 - 2*t1^2 + 4*t2*t3 - (t4 + t5)^2 - 4*pi*(2*t2 + 2*t3 - t4 - t5))",
      "1/8*(2*pi - t4 - t5)^2*(20*pi^2 + 2*t3*(2*t1 + 2*t2 + t3) - (t4 + t5)^2 - 4*pi*(2*t1 + 2*t2 + 4*t3 - t4 - t5))",
      "1/8*(2*pi - t4 - t5)^2*(2*(4*pi - t1 - t2 - t3)^2 - (2*pi - t4 - t5)^2)",
  };
  Tally cases[4] = {{"d05/wc_45_case1"}, {"d05/wc_45_case2"}, {"d05/wc_45_case3"}, {"d05/wc_45_case4"}};
  for (const auto& c : crossable_above(all, s45)) {
    const Chamber q = quotient(c, s45);
    const bool l12 = q.light(set_from_labels({1, 2})), l13 = q.light(set_from_labels({1, 3})),
               l23 = q.light(set_from_labels({2, 3}));
    int k = -1;
    if (!l12 && !l13 && !l23) k = 0;
    else if (!l12 && !l13 && l23) k = 1;
    else if (!l12 && l13 && l23) k = 2;
    else if (l12 && l13 && l23) k = 3;
    if (k < 0) continue;
    const Poly diff = e.chamber_volume(*flip_down(c, s45)).poly - e.chamber_volume(c).poly;
    cases[k].add(diff == P(5, forms[k]), c.str());
  }
  for (const auto& t : cases) out.push_back(t.result());
  return out;
}

std::vector<CaseResult> closed_forms(VolumeEngine& e, const VerifyOptions&) {
  std::vector<CaseResult> out;
  for (int n = 4; n <= 6; ++n) {
    const auto closed = minimal_chamber_volume_closed(n, 1);
    out.push_back(poly_case("closed/minimal_n" + std::to_string(n), closed.poly, e.chamber_volume(closed.chamber).poly));
  }
  out.push_back(poly_case("closed/losev_manin_L2", P(2, "(2*pi - t1)*(2*pi - t2)"), losev_manin_volume(2).poly));
  for (int n = 2; n <= 4; ++n) {
    out.push_back(poly_case("closed/losev_manin_n" + std::to_string(n), losev_manin_volume(n).poly, losev_manin_engine(e, n)));
  }
  out.push_back(poly_case("closed/cp1n_A1", P(4, "(2*pi - t1)*(4*pi - t1 - t2 - t3 - t4)"), cp1n_volume(1).poly));
  for (int n = 1; n <= 3; ++n) {
    out.push_back(poly_case("closed/cp1n_n" + std::to_string(n), cp1n_volume(n).poly, e.chamber_volume(cp1n_chamber(n)).poly));
  }
  std::vector<Poly> w{Poly(eps_ring()), Poly(eps_ring(), Rational(1))};
  std::vector<Poly> we = w;
  for (int n = 2; n <= 6; ++n) {
    w.push_back(equal_weight(losev_manin_volume(n).poly, n));
    out.push_back(identity_case("closed/cayley_n" + std::to_string(n), cayley_identity(w, n)));
  }
  for (int n = 2; n <= 4; ++n) {
    we.push_back(equal_weight(losev_manin_engine(e, n), n));
    out.push_back(identity_case("closed/cayley_engine_n" + std::to_string(n), cayley_identity(we, n)));
  }
  return out;
}

void sorted_tuples(int n, int total, int lo, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (int k = lo; k <= total; ++k) {
    cur.push_back(k);
    sorted_tuples(n, total - k, k, cur, out);
    cur.pop_back();
  }
}

std::vector<CaseResult> intersections(VolumeEngine&, const VerifyOptions&) {
  IntersectionCache cache;
  Intersections x(cache);
  std::vector<CaseResult> out{
      value_case("wk/tau0^3_g0", Rational(1), x.psi(0, {0, 0, 0})),
      value_case("wk/tau1_g1", Rational(1, 24), x.psi(1, {1})),
      value_case("wk/kappa1_g1n1", Rational(1, 24), x.kappa_psi(1, 1, {0})),
      value_case("wk/kappa1_g0n4", Rational(1), x.kappa_psi(0, 1, {0, 0, 0, 0})),
      value_case("wk/kappa1^2_g1n2", Rational(1, 8), x.kappa_psi(1, 2, {0, 0})),
      value_case("wk/kappa1^2_g0n5", Rational(5), x.kappa_psi(0, 2, {0, 0, 0, 0, 0})),
  };
  // <tau_d1 ... tau_dn>_0 = (n-3)! / prod d_i!
  Tally t{"wk/genus0_closed_form_n_le_8"};
  for (int n = 3; n <= 8; ++n) {
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    sorted_tuples(n, n - 3, 0, cur, tuples);
    for (const auto& d : tuples) {
      Rational want = factorial(n - 3);
      for (int k : d) want = want / factorial(k);
      std::string label = "n=" + std::to_string(n);
      t.add(x.psi(0, d) == want, label);
    }
  }
  out.push_back(t.result());
  return out;
}

std::vector<CaseResult> limits(VolumeEngine& e, const VerifyOptions&) {
  std::vector<CaseResult> out;
  Tally light{"limits/light_coordinates_vanish"}, wc{"limits/incident_wall_crossing_sum"},
      dil{"limits/dilaton_flat_coordinates"}, gen{"limits/general_dilaton_d05"};
  for (const auto& space : std::vector<StabilitySpace>{{0, 4}, {0, 5}, {1, 2}}) {
    for (const auto& c : enumerate_chambers(space, false)) {
      const Poly v = e.chamber_volume(c).poly;
      for (int i = 1; i <= c.n(); ++i) {
        if (is_light(c, i)) light.add(eval_at_2pi(v, i).is_zero(), where(c, i));
        if (light_chamber_below(c, i)) wc.add(incident_limit_check(e, c, i).holds(), where(c, i));
        if (is_flat(c, i)) dil.add(dilaton_check(e, c, i).holds(), where(c, i));
      }
    }
  }
  const Chamber m5 = main_chamber({0, 5});
  for (const auto& c : enumerate_chambers({0, 5}, false)) {
    for (int i = 1; i <= 5; ++i) {
      gen.add(general_dilaton_check(e, c, e.path_between(m5, c), i).holds(), where(c, i));
      if (const auto f = flat_chamber_below(c, i)) gen.add(general_dilaton_check(e, c, e.path_between(c, *f), i).holds(), where(c, i));
    }
  }
  out.push_back(light.result());
  out.push_back(wc.result());
  out.push_back(dil.result());
  out.push_back(gen.result());
  for (int g = 1; g <= 2; ++g) {
    out.push_back(identity_case("limits/main_value_at_2pi_g" + std::to_string(g), limit_value_g2(e, g)));
  }
  out.push_back(poly_case("limits/cp1n_light_vanish", P(6, "0"), eval_at_2pi(e.chamber_volume(cp1n_chamber(3)).poly, 2)));
  return out;
}

std::vector<CaseResult> properties(VolumeEngine& e, const VerifyOptions& opt) {
  std::vector<CaseResult> out;
  Tally cont{"props/continuity_at_walls"}, even{"props/even_in_phi"}, paths{"props/path_independence"},
      distinct{"props/distinct_paths_compared"}, equiv{"props/quotient_equivalence_d05"},
      quotwc{"props/equal_quotients_equal_wc_d05"}, pos{"props/positivity"};
  EngineOptions o1 = opt.engine, o2 = opt.engine;
  o1.path = PathStrategy::GreedyFirst;
  o2.path = PathStrategy::GreedyLast;
  VolumeEngine first(o1), last(o2);
  for (const auto& space : std::vector<StabilitySpace>{{0, 4}, {0, 5}, {1, 2}}) {
    const auto all = enumerate_chambers(space, false);
    for (const auto& [c, s] : all_walls(all)) {
      const auto w = e.wall_crossing_poly(c, s);
      bool ok = true;
      for (const auto& r : continuity_residues(w)) ok = ok && r.is_zero();
      cont.add(ok, c.str() + " S=" + set_str(s));
      even.add(even_in_phi(w), c.str() + " S=" + set_str(s));
    }
    const Chamber m = main_chamber(space);
    for (const auto& c : all) {
      const Poly v = e.chamber_volume(c).poly;
      const auto p1 = greedy_crossing_path(m, c, false), p2 = greedy_crossing_path(m, c, true);
      bool differ = false;
      if (p1.steps.size() == p2.steps.size()) {
        for (std::size_t k = 0; k < p1.steps.size(); ++k) differ = differ || p1.steps[k].wall != p2.steps[k].wall;
      } else {
        differ = true;
      }
      if (differ) distinct.add(true, c.str());
      paths.add(first.chamber_volume(c).poly == v && last.chamber_volume(c).poly == v, c.str());
      for (const auto& a : interior_points(c, opt.positivity_points, opt.seed)) {
        pos.add(classify({c.g(), a}) == c && numeric_sign(evaluate_at_weights(v, a)) > 0, c.str());
      }
    }
  }
  // separated chambers: T meets S exactly when the quotients by S agree; equal quotients give equal crossings
  const auto all5 = enumerate_chambers({0, 5}, false);
  for (const auto& [c1, t] : all_walls(all5)) {
    const Chamber c2 = *flip_down(c1, t);
    for (Subset s = 1; s <= full_set(5); ++s) {
      if (set_size(s) < 2 || set_size(s) > 3) continue;
      equiv.add(((t & s) != 0) == (quotient(c1, s) == quotient(c2, s)), c1.str() + " T=" + set_str(t));
    }
  }
  std::map<std::pair<Subset, Chamber>, Poly> seen;
  for (const auto& [c, s] : all_walls(all5)) {
    const Poly diff = e.chamber_volume(*flip_down(c, s)).poly - e.chamber_volume(c).poly;
    auto [it, fresh] = seen.try_emplace({s, quotient(c, s)}, diff);
    if (!fresh) quotwc.add(it->second == diff, c.str() + " S=" + set_str(s));
  }
  for (const auto* t : {&cont, &even, &paths, &distinct, &equiv, &quotwc, &pos}) out.push_back(t->result());
  return out;
}

std::vector<CaseResult> stress(VolumeEngine& e, const VerifyOptions& opt) {
  const StabilitySpace sp = opt.stress;
  sp.validate();
  const Chamber c = sp.g > 0 ? light_chamber(sp) : minimal_chamber_0(sp.n, 1);
  const std::string tag = "stress/D_" + std::to_string(sp.g) + "_" + std::to_string(sp.n);
  std::vector<CaseResult> out;
  const auto v = e.chamber_volume(c);
  out.push_back({tag + "/volume_degree", std::to_string(2 * (3 * sp.g - 3 + sp.n)), std::to_string(v.poly.total_degree()),
                 v.poly.total_degree() == 2 * (3 * sp.g - 3 + sp.n)});
  Tally cont{tag + "/continuity_along_path"}, dil{tag + "/dilaton"}, light{tag + "/light_vanish"};
  if (v.provenance.path) {
    for (const auto& st : v.provenance.path->steps) {
      const auto w = e.wall_crossing_poly(st.above, st.wall);
      bool ok = true;
      for (const auto& r : continuity_residues(w)) ok = ok && r.is_zero();
      cont.add(ok, set_str(st.wall));
    }
  }
  for (int i = 1; i <= sp.n; ++i) {
    if (is_flat(c, i) && sp.n > 1) dil.add(dilaton_check(e, c, i).holds(), where(c, i));
    if (is_light(c, i)) light.add(eval_at_2pi(v.poly, i).is_zero(), where(c, i));
  }
  out.push_back(cont.result());
  out.push_back(dil.result());
  out.push_back(light.result());
  return out;
}

}  // namespace

const std::vector<VerifyGroup>& verify_groups() {
  static const std::vector<VerifyGroup> groups{
      {"main-volumes", "paper", main_volumes},  {"d04-chambers", "paper", d04_chambers},
      {"genus-one", "paper", genus_one},        {"d05-walls", "paper", d05_walls},
      {"closed-forms", "paper", closed_forms},  {"intersections", "paper", intersections},
      {"limits", "invariants", limits},         {"properties", "invariants", properties},
      {"stress", "stress", stress},
  };
  return groups;
}

const VerifyGroup& verify_group(const std::string& name) {
  for (const auto& g : verify_groups()) {
    if (g.name == name) return g;
  }
  throw std::invalid_argument("unknown verification group: " + name);
}

std::vector<CaseResult> run_group(const VerifyGroup& g, const VerifyOptions& opt) {
  IntersectionCache cache;
  VolumeEngine e(opt.engine, &cache);
  std::vector<CaseResult> out;
  try {
    out = g.run(e, opt);
  } catch (const DomainError& err) {
    out.push_back({g.name + "/error", "no error", err.what(), false});
  }
  return out;
}

std::vector<CaseResult> run_verify(const std::string& suite, const VerifyOptions& opt) {
  if (suite != "paper" && suite != "invariants" && suite != "stress" && suite != "all") {
    throw std::invalid_argument("unknown suite: " + suite);
  }
  std::vector<CaseResult> out;
  for (const auto& g : verify_groups()) {
    if (suite != "all" && g.suite != suite) continue;
    auto part = run_group(g, opt);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end(), [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
  return out;
}

nlohmann::json verify_report(const std::string& suite, const std::vector<CaseResult>& cases) {
  nlohmann::json list = nlohmann::json::array();
  int passed = 0;
  for (const auto& c : cases) {
    passed += c.pass ? 1 : 0;
    list.push_back({{"id", c.id}, {"expected", c.expected}, {"computed", c.computed}, {"pass", c.pass}});
  }
  return {{"suite", suite},
          {"passed", passed},
          {"failed", static_cast<int>(cases.size()) - passed},
          {"cases", list}};
}

}  // namespace wpvol
