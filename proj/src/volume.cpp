#include "wpvol/volume.hpp"

#include "wpvol/errors.hpp"

#include <functional>
#include <mutex>
#include <random>

namespace wpvol {

namespace {

// compositions of `total` into n nonnegative parts
void compositions(int n, int total, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(total);
    f(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(n, total - k, cur, f);
    cur.pop_back();
  }
}

Poly two_pi(const RingPtr& r) { return Poly::pi(r) * Rational(2); }

}  // namespace

// ---------------------------------------------------------------- helpers

Poly phi_form(int n, Subset s) {
  const auto r = PolyRing::angles(n);
  Poly phi = two_pi(r) * Rational(1 - set_size(s));
  for (int j : set_labels(s)) phi += Poly::theta(r, j);
  return phi;
}

Poly evaluate_at_weights(const Poly& p, const std::vector<Rational>& a) {
  const auto target = PolyRing::pi_only();
  if (static_cast<int>(a.size()) != p.ring()->angle_count()) throw DimensionMismatch("weight vector has wrong length");
  std::vector<Poly> images{Poly::pi(target)};
  for (const auto& x : a) images.push_back(two_pi(target) * (Rational(1) - x));
  return p.compose(target, images);
}

Poly relabel_angles(const Poly& p, int n, const std::vector<int>& labels) {
  const auto target = PolyRing::angles(n);
  std::vector<Poly> images{Poly::pi(target)};
  for (int l : labels) images.push_back(Poly::theta(target, l));
  if (static_cast<int>(images.size()) != p.ring()->size()) throw DimensionMismatch("relabel: wrong number of labels");
  return p.compose(target, images);
}

// ---------------------------------------------------------------- engine

VolumeEngine::VolumeEngine(EngineOptions opt, IntersectionCache* cache)
    : opt_(opt), inter_(cache ? *cache : default_intersection_cache()) {}

VolumeEngine& default_engine() {
  static VolumeEngine e;
  return e;
}

std::size_t VolumeEngine::cached_chambers() const {
  std::shared_lock lock(mu_);
  return vols_.size();
}

VolumeResult VolumeEngine::mirzakhani_volume(int g, int n) {
  StabilitySpace{g, n}.validate();
  if (g > opt_.max_genus) {
    throw BoundExceeded("genus " + std::to_string(g) + " exceeds the backend bound " + std::to_string(opt_.max_genus));
  }
  const Chamber c = main_chamber({g, n});
  {
    std::shared_lock lock(mu_);
    auto it = mirz_.find({g, n});
    if (it != mirz_.end()) return {c, it->second, {}};
  }
  const auto r = PolyRing::angles(n);
  const int d = 3 * g - 3 + n;
  Poly v(r);
  // sum over m + |alpha| = d of (2 pi^2)^m/m! prod (-theta_j^2/2)^alpha_j/alpha_j! <kappa_1^m tau_alpha>
  for (int m = 0; m <= d; ++m) {
    const Rational pre = Rational(2).pow(m) / factorial(m);
    std::vector<int> cur;
    compositions(n, d - m, cur, [&](const std::vector<int>& alpha) {
      Rational coeff = pre * inter_.kappa_psi(g, m, alpha);
      if (coeff.is_zero()) return;
      Exponent e(static_cast<std::size_t>(r->size()), 0);
      e[0] = 2 * m;
      for (int j = 0; j < n; ++j) {
        const int k = alpha[static_cast<std::size_t>(j)];
        coeff *= Rational(-1, 2).pow(k) / factorial(k);
        e[static_cast<std::size_t>(j) + 1] = 2 * k;
      }
      v.add_term(e, coeff);
    });
  }
  std::unique_lock lock(mu_);
  mirz_.try_emplace({g, n}, v);
  return {c, v, {}};
}

Poly VolumeEngine::wall_crossing_integral(int n, Subset s, const Chamber& quot) {
  const std::tuple<Chamber, int, Subset> key{quot, n, s};
  {
    std::shared_lock lock(mu_);
    auto it = wcs_.find(key);
    if (it != wcs_.end()) return it->second;
  }
  const int k = set_size(s) - 2;
  const Poly vq = chamber_volume(quot).poly;
  const auto r = PolyRing::angles(n, true);
  const int t = n + 1;
  // quotient variables: kept labels in order, merged point last -> integration variable
  std::vector<Poly> images{Poly::pi(r)};
  for (int j : set_labels(full_set(n) & ~s)) images.push_back(Poly::theta(r, j));
  images.push_back(Poly::var(r, t));
  const Poly integrand = vq.compose(r, images);

  Poly phi = two_pi(r) * Rational(1 - set_size(s) + opt_.phi_offset);
  for (int j : set_labels(s)) phi += Poly::theta(r, j);
  const Poly tv = Poly::var(r, t);
  Poly kernel = (phi * phi - tv * tv).pow(static_cast<unsigned>(k)) * tv;
  kernel *= Rational(1) / (factorial(k) * Rational(2).pow(k));

  Poly wc = (integrand * kernel).integrate_upper(t, phi).rename_into(PolyRing::angles(n));
  std::unique_lock lock(mu_);
  wcs_.try_emplace(key, wc);
  return wc;
}

WallCrossingPoly VolumeEngine::wall_crossing_poly(const Chamber& c, Subset s) {
  simple_cross(c, s);  // NotIncident / NotRealizable
  return {c, s, wall_crossing_integral(c.n(), s, quotient(c, s)), phi_form(c.n(), s)};
}

CrossingPath VolumeEngine::path_between(const Chamber& from, const Chamber& to) const {
  switch (opt_.path) {
    case PathStrategy::GreedyFirst: return greedy_crossing_path(from, to, false);
    case PathStrategy::GreedyLast: return greedy_crossing_path(from, to, true);
    default: return crossing_path(from, to, opt_.seed);
  }
}

VolumeResult VolumeEngine::volume_along(const CrossingPath& p) {
  if (!p.from.is_main()) throw InvalidPath("volume path must start at the main chamber");
  if (!replay_ok(p)) throw InvalidPath("path contains an invalid crossing");
  Poly v = mirzakhani_volume(p.from.g(), p.from.n()).poly;
  for (const auto& st : p.steps) v += wall_crossing_integral(p.from.n(), st.wall, quotient(st.above, st.wall));
  Provenance prov{Provenance::Kind::WallCrossingPath, p, {}};
  if (p.steps.empty()) prov = {};
  return {p.target(), v, prov};
}

VolumeResult VolumeEngine::chamber_volume(const Chamber& c) {
  {
    std::shared_lock lock(mu_);
    auto it = vols_.find(c);
    if (it != vols_.end()) return it->second;
  }
  c.space().validate();
  if (!is_realizable(c)) throw NotRealizable("chamber " + c.str() + " is empty");
  VolumeResult res;
  if (c.is_main()) {
    res = mirzakhani_volume(c.g(), c.n());
  } else {
    if (c.g() > opt_.max_genus) throw BoundExceeded("genus exceeds the backend bound");
    res = volume_along(path_between(main_chamber(c.space()), c));
  }
  std::unique_lock lock(mu_);
  vols_.try_emplace(c, res);
  return res;
}

PiecewiseValue piecewise_volume(VolumeEngine& e, const WeightVector& w) {
  const Chamber c = classify(w);
  auto v = e.chamber_volume(c);
  auto value = evaluate_at_weights(v.poly, w.a);
  return {c, std::move(v), std::move(value)};
}

// ---------------------------------------------------------------- closed forms

VolumeResult minimal_chamber_volume_closed(int n, int j) {
  const Chamber c = minimal_chamber_0(n, j);
  const auto r = PolyRing::angles(n);
  // (-2 + sum a)(-a_j + sum_{k != j} a_k) = (2pi(n-2) - sum theta)(2pi(n-2) - sum_{k != j} theta_k + theta_j) / 4pi^2
  Poly x = two_pi(r) * Rational(n - 2), y = two_pi(r) * Rational(n - 2);
  for (int k = 1; k <= n; ++k) {
    x -= Poly::theta(r, k);
    y += Poly::theta(r, k) * Rational(k == j ? 1 : -1);
  }
  const int e = n - 3;
  Poly v = (x * y).pow(static_cast<unsigned>(e)) * (Rational(1) / (factorial(e) * Rational(2).pow(e)));
  return {c, v, {Provenance::Kind::ClosedForm, std::nullopt, "minimal-chamber"}};
}

VolumeResult losev_manin_volume(int n) {
  if (n < 2) throw DomainError("Losev-Manin closed form needs n >= 2");
  const auto r = PolyRing::angles(n);
  // (2pi)^{2(n-1)} prod eps_j (sum eps)^{n-2} with 2 pi eps_j = 2 pi - theta_j
  Poly prod(r, Rational(1)), sum = two_pi(r) * Rational(n);
  for (int j = 1; j <= n; ++j) {
    prod *= two_pi(r) - Poly::theta(r, j);
    sum -= Poly::theta(r, j);
  }
  return {losev_manin_chamber(n), prod * sum.pow(static_cast<unsigned>(n - 2)),
          {Provenance::Kind::ClosedForm, std::nullopt, "losev-manin"}};
}

Poly losev_manin_engine(VolumeEngine& e, int n) {
  Poly v = e.chamber_volume(losev_manin_chamber(n)).poly;
  v = v.substitute(n + 1, Rational(0)).substitute(n + 2, Rational(0));
  return v.rename_into(PolyRing::angles(n));
}

VolumeResult cp1n_volume(int n) {
  if (n < 1) throw DomainError("(CP1)^n closed form needs n >= 1");
  const auto r = PolyRing::angles(n + 3);
  // (2pi)^{2n} prod eps_j (-2 + sum eps + sum b)^n; 2 pi times the last factor is 2 pi (n+1) - sum of all angles
  Poly prod(r, Rational(1)), sum = two_pi(r) * Rational(n + 1);
  for (int j = 1; j <= n + 3; ++j) {
    if (j <= n) prod *= two_pi(r) - Poly::theta(r, j);
    sum -= Poly::theta(r, j);
  }
  return {cp1n_chamber(n), prod * sum.pow(static_cast<unsigned>(n)), {Provenance::Kind::ClosedForm, std::nullopt, "cp1n"}};
}

RingPtr eps_ring() {
  static const RingPtr r = std::make_shared<const PolyRing>(std::vector<std::string>{"pi", "eps"});
  return r;
}

Poly equal_weight(const Poly& lm, int n) {
  const auto r = eps_ring();
  const Poly theta = two_pi(r) - two_pi(r) * Poly::var(r, 1);
  std::vector<Poly> images{Poly::pi(r)};
  for (int j = 1; j <= n; ++j) images.push_back(theta);
  return lm.compose(r, images);
}

IdentitySides cayley_identity(const std::vector<Poly>& w, int n) {
  if (n < 2 || static_cast<int>(w.size()) <= n) throw DomainError("cayley identity needs w[1..n], n >= 2");
  const auto r = eps_ring();
  const Poly x = two_pi(r) * Poly::var(r, 1);
  Poly rhs(r);
  for (int i = 1; i < n; ++i) {
    const Rational c = Rational(i * (n - i), n - 1) * binomial(n, i) * Rational(1, 2);
    rhs += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(n - i)] * c;
  }
  return {w[static_cast<std::size_t>(n)], x * x * rhs};
}

// ---------------------------------------------------------------- limits

Poly eval_at_2pi(const Poly& v, int i) { return v.substitute(i, two_pi(v.ring())); }

Poly derivative_at_2pi(const Poly& v, int i) { return eval_at_2pi(v.derivative(i), i); }

std::optional<Chamber> light_chamber_below(const Chamber& c, int i) {
  const int n = c.n();
  if (i < 1 || i > n) throw DimensionMismatch("coordinate out of range");
  // c's constraints, plus every singleton other than i light by margin s and the
  // others alone still stable; then push a_i below the margin
  LinearProgram lp = chamber_lp(c);
  std::vector<Rational> total(static_cast<std::size_t>(n) + 1);
  for (int j = 1; j <= n; ++j) {
    if (j == i) continue;
    total[static_cast<std::size_t>(j - 1)] = Rational(1);
    std::vector<Rational> row(static_cast<std::size_t>(n) + 1);
    row[static_cast<std::size_t>(j - 1)] = Rational(1);
    row[static_cast<std::size_t>(n)] = Rational(-1);
    lp.add(row, Relation::GreaterEq, Rational(0));
  }
  total[static_cast<std::size_t>(n)] = Rational(1);
  lp.add(total, Relation::LessEq, Rational(n - 3 + 2 * c.g()));
  const auto res = maximize(lp);
  if (res.status != LpResult::Status::Optimal || res.value.sign() <= 0) return std::nullopt;
  std::vector<Rational> a;
  for (int j = 0; j < n; ++j) a.push_back(Rational(1) - res.x[static_cast<std::size_t>(j)]);
  a[static_cast<std::size_t>(i - 1)] = res.value / Rational(2);
  Chamber below = classify({c.g(), a});
  if (!dominates(c, below) || !is_light(below, i)) return std::nullopt;
  return below;
}

std::optional<Chamber> flat_chamber_below(const Chamber& c, int i) {
  std::vector<Subset> light;
  for (Subset l : c.light_max()) {
    light.push_back(l);
    if (set_size(l & ~singleton(i)) >= 2) light.push_back(l | singleton(i));
  }
  Chamber f(c.g(), c.n(), light);
  if (is_realizable(f)) return f;
  return light_chamber_below(c, i);
}

IdentitySides incident_limit_check(VolumeEngine& e, const Chamber& c, int i) {
  const auto below = light_chamber_below(c, i);
  if (!below) throw InvalidPath("no chamber light in coordinate " + std::to_string(i) + " lies below " + c.str());
  const auto path = e.path_between(c, *below);
  const auto r = PolyRing::angles(c.n());
  Poly rhs(r);
  for (const auto& st : path.steps) rhs -= e.wall_crossing_poly(st.above, st.wall).poly;
  return {eval_at_2pi(e.chamber_volume(c).poly, i), eval_at_2pi(rhs, i)};
}

namespace {

// int_0^theta_1 t V_{g,1}(t) dt in the 2-angle ring
Poly integrated_one_point(VolumeEngine& e, int g) {
  const auto r = PolyRing::angles(2, true);
  const Poly v1 = e.mirzakhani_volume(g, 1).poly;
  const Poly in_t = v1.compose(r, {Poly::pi(r), Poly::var(r, 3)});
  return (in_t * Poly::var(r, 3)).integrate_upper(3, Poly::theta(r, 1)).rename_into(PolyRing::angles(2));
}

}  // namespace

IdentitySides limit_value_g2(VolumeEngine& e, int g) {
  const Poly v = e.mirzakhani_volume(g, 2).poly;
  return {eval_at_2pi(v, 2), -integrated_one_point(e, g)};
}

IdentitySides limit_derivative_g2(VolumeEngine& e, int g, bool light) {
  const auto r = PolyRing::angles(2);
  const Chamber c = light ? light_chamber({g, 2}) : main_chamber({g, 2});
  const Poly v = e.chamber_volume(c).poly;
  const Poly v1 = relabel_angles(e.mirzakhani_volume(g, 1).poly, 2, {1});
  Poly coeff = two_pi(r) * Rational(1 - 2 * g);
  if (light) coeff += Poly::theta(r, 1);
  return {derivative_at_2pi(v, 2), coeff * v1};
}

namespace {

std::vector<int> labels_without(int n, int i) { return set_labels(full_set(n) & ~singleton(i)); }

void require_coordinate(const Chamber& c, int i) {
  if (i < 1 || i > c.n()) throw DimensionMismatch("coordinate out of range");
}

// the right-hand side of the derivative identity at a flat coordinate
Poly dilaton_rhs(VolumeEngine& e, const Chamber& c, int i) {
  if (!is_flat(c, i)) throw NotFlat(c.str() + " is not flat in coordinate " + std::to_string(i));
  const int n = c.n();
  const auto r = PolyRing::angles(n);
  const Subset q = q_set(c, i);
  // -2pi(2g - 2 + |q| + sum_{j not in q} (1 - theta_j / 2pi))
  Poly coeff = two_pi(r) * Rational(-(2 * c.g() - 2 + set_size(q)));
  for (int j : labels_without(n, i)) {
    if (contains(q, j)) continue;
    coeff += Poly::theta(r, j) - two_pi(r);
  }
  const auto rest = labels_without(n, i);
  const Poly vr = e.chamber_volume(restrict_to(c, full_set(n) & ~singleton(i))).poly;
  return coeff * relabel_angles(vr, n, rest);
}

// derivative of wc_{c,S} in theta_j at 2 pi, assembled from volumes of smaller spaces
Poly wall_derivative_rhs(VolumeEngine& e, const Chamber& c, Subset s, int j) {
  const int n = c.n();
  if (!contains(s, j)) throw DomainError("coordinate must lie in the wall set");
  const Subset rest_s = s & ~singleton(j);
  if (set_size(s) == 2) {
    // theta_k V_{C/S}(theta_{S^c}, theta_k), k the other element of S
    const int k = set_labels(rest_s).front();
    const Poly vq = e.chamber_volume(quotient(c, s)).poly;
    auto labels = set_labels(full_set(n) & ~s);
    labels.push_back(k);
    return Poly::theta(PolyRing::angles(n), k) * relabel_angles(vq, n, labels);
  }
  // phi_{S - j} wc_{C|, S - j}: restrict away j, then compress S - j to the new labels
  const auto kept = labels_without(n, j);
  const Chamber cr = restrict_to(c, full_set(n) & ~singleton(j));
  Subset sr = 0;
  for (std::size_t x = 0; x < kept.size(); ++x) {
    if (contains(rest_s, kept[x])) sr |= singleton(static_cast<int>(x) + 1);
  }
  const Poly wc = e.wall_crossing_integral(n - 1, sr, quotient(cr, sr));
  return phi_form(n, rest_s) * relabel_angles(wc, n, kept);
}

}  // namespace

IdentitySides dilaton_check(VolumeEngine& e, const Chamber& c, int i) {
  require_coordinate(c, i);
  const Poly rhs = dilaton_rhs(e, c, i);
  return {derivative_at_2pi(e.chamber_volume(c).poly, i), rhs};
}

IdentitySides wc_derivative_check(VolumeEngine& e, const Chamber& c, Subset s, int j) {
  const auto w = e.wall_crossing_poly(c, s);
  return {derivative_at_2pi(w.poly, j), wall_derivative_rhs(e, c, s, j)};
}

IdentitySides general_dilaton_check(VolumeEngine& e, const Chamber& c, const CrossingPath& path, int i) {
  require_coordinate(c, i);
  if (!replay_ok(path)) throw InvalidPath("path contains an invalid crossing");
  const Chamber end = path.target();
  int sign;
  Chamber flat;
  if (path.from == c && is_flat(end, i)) {
    sign = -1;  // V_c = V_flat - sum wc
    flat = end;
  } else if (end == c && is_flat(path.from, i)) {
    sign = 1;  // V_c = V_flat + sum wc
    flat = path.from;
  } else {
    throw InvalidPath("path must join c and a chamber flat in coordinate " + std::to_string(i));
  }
  Poly rhs = dilaton_rhs(e, flat, i);
  for (const auto& st : path.steps) {
    // walls through i use the quotient/restriction form; others are differentiated directly
    const Poly d = contains(st.wall, i) ? wall_derivative_rhs(e, st.above, st.wall, i)
                                        : derivative_at_2pi(e.wall_crossing_poly(st.above, st.wall).poly, i);
    if (sign > 0) rhs += d;
    else rhs -= d;
  }
  return {derivative_at_2pi(e.chamber_volume(c).poly, i), rhs};
}

// ---------------------------------------------------------------- wall properties

std::vector<Poly> continuity_residues(const WallCrossingPoly& w) {
  const auto& p = w.poly;
  const auto r = p.ring();
  const int n = r->angle_count();
  std::vector<Poly> partials{p};
  for (int j = 1; j <= n; ++j) partials.push_back(p.derivative(j));
  std::vector<Poly> out;
  for (int k : set_labels(w.wall)) {
    // theta_k = 2 pi (|S| - 1) - sum_{S - k} theta
    Poly rel = two_pi(r) * Rational(set_size(w.wall) - 1);
    for (int j : set_labels(w.wall)) {
      if (j != k) rel -= Poly::theta(r, j);
    }
    for (const auto& q : partials) out.push_back(q.substitute(k, rel));
  }
  return out;
}

bool even_in_phi(const WallCrossingPoly& w) {
  const int n = w.poly.ring()->angle_count();
  const auto r = PolyRing::angles(n, true);
  const int u = n + 1;
  const auto labels = set_labels(w.wall);
  const int k = labels.back();
  Poly rel = Poly::var(r, u) + two_pi(r) * Rational(set_size(w.wall) - 1);
  for (int j : labels) {
    if (j != k) rel -= Poly::theta(r, j);
  }
  const Poly p = w.poly.rename_into(r).substitute(k, rel);
  if (p.is_zero()) return false;
  for (int j : labels) {
    if (p.involves(j)) return false;
  }
  for (const auto& [e, c] : p.terms()) {
    const int d = e[static_cast<std::size_t>(u)];
    if (d < 2 || d % 2 != 0) return false;
  }
  return true;
}

std::vector<std::vector<Rational>> interior_points(const Chamber& c, int count, unsigned seed) {
  const auto w = chamber_witness(c);
  if (!w) throw NotRealizable("chamber " + c.str() + " is empty");
  const int n = c.n();
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(-999, 999);
  // moving each coordinate by less than margin/(2n) keeps every defining inequality strict
  const Rational step = w->margin / Rational(2 * n * 1000);
  std::vector<std::vector<Rational>> out;
  while (static_cast<int>(out.size()) < count) {
    auto a = w->a;
    for (auto& x : a) {
      int k = pick(rng);
      if (x + step * Rational(k) > Rational(1)) k = -k;
      x += step * Rational(k);
    }
    out.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------- serialization

std::string provenance_tag(const Provenance& p) {
  switch (p.kind) {
    case Provenance::Kind::WallCrossingPath: return "wall-crossing-path";
    case Provenance::Kind::ClosedForm: return "closed-form";
    default: return "main-chamber-intersection";
  }
}

nlohmann::json to_json(const VolumeResult& v) {
  nlohmann::json prov{{"kind", provenance_tag(v.provenance)}};
  if (v.provenance.path) prov["path"] = to_json(*v.provenance.path);
  if (v.provenance.kind == Provenance::Kind::ClosedForm) prov["name"] = v.provenance.name;
  return {{"chamber", to_json(v.chamber)}, {"poly", to_json(v.poly)}, {"provenance", prov}};
}

nlohmann::json to_json(const WallCrossingPoly& w) {
  return {{"chamber_above", to_json(w.above)},
          {"wall", set_labels(w.wall)},
          {"phi", to_json(w.phi)},
          {"poly", to_json(w.poly)}};
}

}  // namespace wpvol
