#include "wpvol/chamber.hpp"

#include "wpvol/errors.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <shared_mutex>
#include <sstream>

namespace wpvol {

// ---------------------------------------------------------------- subsets

int set_size(Subset s) { return std::popcount(s); }
Subset full_set(int n) { return n >= 32 ? ~Subset{0} : (Subset{1} << n) - 1; }
Subset singleton(int j) { return Subset{1} << (j - 1); }
bool contains(Subset s, int j) { return (s >> (j - 1)) & 1U; }

std::vector<int> set_labels(Subset s) {
  std::vector<int> out;
  for (int j = 1; s; ++j, s >>= 1) {
    if (s & 1U) out.push_back(j);
  }
  return out;
}

Subset set_from_labels(const std::vector<int>& labels) {
  Subset s = 0;
  for (int j : labels) {
    if (j < 1 || j > kMaxPoints) throw DomainError("label out of range: " + std::to_string(j));
    s |= singleton(j);
  }
  return s;
}

std::string set_str(Subset s) {
  std::string out = "{";
  bool first = true;
  for (int j : set_labels(s)) {
    if (!first) out += ",";
    out += std::to_string(j);
    first = false;
  }
  return out + "}";
}

bool set_less(Subset a, Subset b) {
  while (a && b) {
    const int x = std::countr_zero(a), y = std::countr_zero(b);
    if (x != y) return x < y;
    a &= a - 1;
    b &= b - 1;
  }
  return !a && b;
}

void StabilitySpace::validate() const {
  if (g < 0 || n < 1) throw Unstable("D_{g,n} needs g >= 0 and n >= 1");
  if (n > kMaxPoints) throw BoundExceeded("too many marked points");
  if (2 * g - 2 + n <= 0) {
    throw Unstable("unstable (g,n) = (" + std::to_string(g) + "," + std::to_string(n) + ")");
  }
}

// ---------------------------------------------------------------- chamber

Chamber::Chamber(int g, int n, std::vector<Subset> light_max) : g_(g), n_(n) {
  const Subset all = full_set(n);
  for (Subset s : light_max) {
    if (s & ~all) throw DomainError("light set " + set_str(s) + " exceeds n = " + std::to_string(n));
  }
  std::erase_if(light_max, [](Subset s) { return set_size(s) < 2; });
  std::sort(light_max.begin(), light_max.end());
  light_max.erase(std::unique(light_max.begin(), light_max.end()), light_max.end());
  for (Subset s : light_max) {
    const bool dominated = std::any_of(light_max.begin(), light_max.end(),
                                       [s](Subset t) { return t != s && (s & t) == s; });
    if (!dominated) light_.push_back(s);
  }
  std::sort(light_.begin(), light_.end(), set_less);
}

bool Chamber::heavy(Subset j) const {
  if (set_size(j) < 2) return false;
  return std::none_of(light_.begin(), light_.end(), [j](Subset l) { return (j & l) == j; });
}

std::vector<Subset> Chamber::minimal_heavy() const {
  std::vector<Subset> out;
  const Subset all = full_set(n_);
  for (Subset s = 1; s <= all; ++s) {
    if (set_size(s) < 2 || !heavy(s)) continue;
    bool minimal = true;
    for (Subset rest = s; rest && minimal; rest &= rest - 1) {
      const Subset low = rest & (~rest + 1);
      if (heavy(s & ~low)) minimal = false;
    }
    if (minimal) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), set_less);
  return out;
}

bool operator<(const Chamber& a, const Chamber& b) {
  if (a.g_ != b.g_) return a.g_ < b.g_;
  if (a.n_ != b.n_) return a.n_ < b.n_;
  if (a.light_.size() != b.light_.size()) return a.light_.size() < b.light_.size();
  return std::lexicographical_compare(a.light_.begin(), a.light_.end(), b.light_.begin(), b.light_.end(), set_less);
}

std::string Chamber::str() const { return to_json(*this).dump(); }

void WeightVector::validate() const {
  if (a.empty()) throw DomainError("empty weight vector");
  Rational total(0);
  for (const auto& x : a) {
    if (x.sign() <= 0 || x > Rational(1)) throw DomainError("weight " + x.str() + " outside (0,1]");
    total += x;
  }
  if (!(total > Rational(2 - 2 * g))) {
    throw DomainError("weights sum to " + total.str() + ", need > " + std::to_string(2 - 2 * g));
  }
  StabilitySpace{g, static_cast<int>(a.size())}.validate();
}

std::vector<Rational> parse_weights(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(Rational::parse(item));
  return out;
}

// ---------------------------------------------------------------- constructions

Chamber classify(const WeightVector& w) {
  w.validate();
  const int n = static_cast<int>(w.a.size());
  std::vector<Subset> light;
  for (Subset s = 1; s <= full_set(n); ++s) {
    if (set_size(s) < 2) continue;
    Rational sum(0);
    for (int j : set_labels(s)) sum += w.a[static_cast<std::size_t>(j - 1)];
    if (sum == Rational(1)) throw OnWall("weights lie on the wall W_" + set_str(s));
    if (sum < Rational(1)) light.push_back(s);
  }
  return Chamber(w.g, n, light);
}

Chamber main_chamber(const StabilitySpace& s) {
  s.validate();
  return Chamber(s.g, s.n, {});
}

Chamber light_chamber(const StabilitySpace& s) {
  s.validate();
  if (s.g == 0) throw DomainError("the light chamber is empty in genus 0");
  return Chamber(s.g, s.n, {full_set(s.n)});
}

Chamber minimal_chamber_0(int n, int j) {
  StabilitySpace{0, n}.validate();
  if (j < 1 || j > n) throw DomainError("distinguished point out of range");
  const Subset others = full_set(n) & ~singleton(j);
  std::vector<Subset> light;
  for (int k = 1; k <= n; ++k) {
    if (k != j) light.push_back(others & ~singleton(k));
  }
  return Chamber(0, n, light);
}

Chamber losev_manin_chamber(int n) {
  if (n < 1) throw DomainError("Losev-Manin chamber needs n >= 1");
  return Chamber(0, n + 2, {full_set(n)});
}

Chamber cp1n_chamber(int n) {
  if (n < 1) throw DomainError("(CP^1)^n chamber needs n >= 1");
  std::vector<Subset> light;
  for (int k = 1; k <= 3; ++k) light.push_back(full_set(n) | singleton(n + k));
  return Chamber(0, n + 3, light);
}

std::optional<Chamber> flip_down(const Chamber& c, Subset s) {
  if (set_size(s) < 2 || (s & ~full_set(c.n())) || !c.heavy(s)) return std::nullopt;
  for (Subset rest = s; rest; rest &= rest - 1) {
    const Subset low = rest & (~rest + 1);
    if (c.heavy(s & ~low)) return std::nullopt;
  }
  auto light = c.light_max();
  light.push_back(s);
  return Chamber(c.g(), c.n(), light);
}

Chamber simple_cross(const Chamber& c, Subset s) {
  auto next = flip_down(c, s);
  if (!next) throw NotIncident("chamber is not above an incident wall W_" + set_str(s));
  if (!is_realizable(*next)) throw NotRealizable("crossing W_" + set_str(s) + " leaves the stability space");
  return *next;
}

namespace {

// maps a subset of the kept labels (in increasing order) to 1..k
Subset compress(Subset s, const std::vector<int>& kept) {
  Subset out = 0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (contains(s, kept[i])) out |= singleton(static_cast<int>(i) + 1);
  }
  return out;
}

}  // namespace

Chamber quotient(const Chamber& c, Subset s) {
  if (set_size(s) < 2 || (s & ~full_set(c.n()))) throw DomainError("quotient needs a set of size >= 2");
  const int n2 = c.n() - set_size(s) + 1;
  StabilitySpace{c.g(), n2}.validate();
  const auto kept = set_labels(full_set(c.n()) & ~s);
  std::vector<Subset> light;
  for (Subset l : c.light_max()) light.push_back(compress(l & ~s, kept));
  return Chamber(c.g(), n2, light);
}

Chamber restrict_to(const Chamber& c, Subset t) {
  if (t & ~full_set(c.n())) throw DomainError("restriction set exceeds n");
  StabilitySpace{c.g(), set_size(t)}.validate();
  const auto kept = set_labels(t);
  std::vector<Subset> light;
  for (Subset l : c.light_max()) light.push_back(compress(l & t, kept));
  return Chamber(c.g(), set_size(t), light);
}

Chamber permute(const Chamber& c, const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != c.n()) throw DomainError("permutation has wrong length");
  std::vector<Subset> light;
  for (Subset l : c.light_max()) {
    Subset out = 0;
    for (int j : set_labels(l)) out |= singleton(sigma[static_cast<std::size_t>(j - 1)]);
    light.push_back(out);
  }
  return Chamber(c.g(), c.n(), light);
}

namespace {

bool forgets_cleanly(const Chamber& c, int i, int min_size) {
  const Subset others = full_set(c.n()) & ~singleton(i);
  for (Subset s = 0;; s = (s - others) & others) {
    if (set_size(s) >= min_size && c.light(s) && c.heavy(s | singleton(i))) return false;
    if (s == others) break;
  }
  return true;
}

}  // namespace

bool is_light(const Chamber& c, int i) { return forgets_cleanly(c, i, 0); }
bool is_flat(const Chamber& c, int i) { return forgets_cleanly(c, i, 2); }

Subset q_set(const Chamber& c, int i) {
  Subset q = 0;
  for (int j = 1; j <= c.n(); ++j) {
    if (j != i && c.heavy(singleton(j) | singleton(i))) q |= singleton(j);
  }
  return q;
}

// ---------------------------------------------------------------- LP

LinearProgram chamber_lp(const Chamber& c) {
  // in b_j = 1 - a_j every constraint except the light ones has a feasible slack basis at b = 0
  const int n = c.n();
  LinearProgram lp(n + 1);
  lp.objective[static_cast<std::size_t>(n)] = Rational(1);
  auto row = [&](Subset s, int slack_sign) {
    std::vector<Rational> r(static_cast<std::size_t>(n) + 1);
    for (int j : set_labels(s)) r[static_cast<std::size_t>(j - 1)] = Rational(1);
    r[static_cast<std::size_t>(n)] = Rational(slack_sign);
    return r;
  };
  for (int j = 1; j <= n; ++j) lp.add(row(singleton(j), 1), Relation::LessEq, Rational(1));
  for (Subset l : c.light_max()) lp.add(row(l, -1), Relation::GreaterEq, Rational(set_size(l) - 1));
  for (Subset h : c.minimal_heavy()) lp.add(row(h, 1), Relation::LessEq, Rational(set_size(h) - 1));
  lp.add(row(full_set(n), 1), Relation::LessEq, Rational(n - 2 + 2 * c.g()));
  std::vector<Rational> cap(static_cast<std::size_t>(n) + 1);
  cap[static_cast<std::size_t>(n)] = Rational(1);
  lp.add(cap, Relation::LessEq, Rational(1));
  return lp;
}

namespace {

std::optional<Witness> solve_witness(const Chamber& c) {
  const auto res = maximize(chamber_lp(c));
  if (res.status != LpResult::Status::Optimal || res.value.sign() <= 0) return std::nullopt;
  Witness w{res.value, {}};
  for (int j = 0; j < c.n(); ++j) w.a.push_back(Rational(1) - res.x[static_cast<std::size_t>(j)]);
  return w;
}

struct WitnessMemo {
  std::shared_mutex mu;
  std::map<Chamber, std::optional<Witness>> table;
};

WitnessMemo& witness_memo() {
  static WitnessMemo memo;
  return memo;
}

}  // namespace

std::optional<Witness> chamber_witness(const Chamber& c) {
  auto& memo = witness_memo();
  {
    std::shared_lock lock(memo.mu);
    auto it = memo.table.find(c);
    if (it != memo.table.end()) return it->second;
  }
  auto w = solve_witness(c);
  std::unique_lock lock(memo.mu);
  memo.table.try_emplace(c, w);
  return w;
}

bool is_realizable(const Chamber& c) { return chamber_witness(c).has_value(); }

// ---------------------------------------------------------------- paths

Chamber CrossingPath::target() const { return steps.empty() ? from : *flip_down(steps.back().above, steps.back().wall); }

bool dominates(const Chamber& from, const Chamber& to) {
  if (from.g() != to.g() || from.n() != to.n()) return false;
  // every light set of `from` must be light in `to`
  return std::all_of(from.light_max().begin(), from.light_max().end(), [&](Subset l) { return to.light(l); });
}

bool replay_ok(const CrossingPath& p) {
  Chamber cur = p.from;
  for (const auto& st : p.steps) {
    if (!(st.above == cur)) return false;
    auto next = flip_down(cur, st.wall);
    if (!next || !is_realizable(*next)) return false;
    cur = *next;
  }
  return true;
}

CrossingPath crossing_path(const Chamber& from, const Chamber& to, unsigned seed) {
  if (!dominates(from, to)) throw NotComparable("chambers are not comparable in the crossing order");
  CrossingPath path{from, {}};
  if (from == to) return path;
  const auto w0 = chamber_witness(from);
  const auto w1 = chamber_witness(to);
  if (!w0 || !w1) throw NotRealizable("crossing path endpoints must be realizable");
  const int n = from.n();
  std::vector<Subset> walls;
  for (Subset s = 1; s <= full_set(n); ++s) {
    if (set_size(s) >= 2 && from.heavy(s) && to.light(s)) walls.push_back(s);
  }
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(1, 1000);
  constexpr int kRetries = 64;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    // push p1 slightly down; stays inside `to` because every constraint has margin w1->margin
    std::vector<Rational> p1 = w1->a;
    for (int j = 0; j < n; ++j) {
      p1[static_cast<std::size_t>(j)] -= w1->margin * Rational(pick(rng), 1001) / Rational(2 * n);
    }
    std::vector<std::pair<Rational, Subset>> events;
    for (Subset s : walls) {
      Rational at0(0), delta(0);
      for (int j : set_labels(s)) {
        at0 += w0->a[static_cast<std::size_t>(j - 1)];
        delta += p1[static_cast<std::size_t>(j - 1)] - w0->a[static_cast<std::size_t>(j - 1)];
      }
      events.emplace_back((Rational(1) - at0) / delta, s);
    }
    std::sort(events.begin(), events.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    bool distinct = true;
    for (std::size_t i = 1; i < events.size(); ++i) {
      if (events[i].first == events[i - 1].first) distinct = false;
    }
    if (!distinct) continue;
    Chamber cur = from;
    path.steps.clear();
    for (const auto& [t, s] : events) {
      path.steps.push_back({cur, s});
      cur = simple_cross(cur, s);
    }
    if (!(cur == to)) throw InvalidPath("segment path did not reach its target");
    return path;
  }
  throw DegenerateSegment("could not separate wall crossings after bounded retries");
}

CrossingPath greedy_crossing_path(const Chamber& from, const Chamber& to, bool last) {
  if (!dominates(from, to)) throw NotComparable("chambers are not comparable in the crossing order");
  if (!is_realizable(to)) throw NotRealizable("target chamber is not realizable");
  CrossingPath path{from, {}};
  Chamber cur = from;
  while (!(cur == to)) {
    auto candidates = cur.minimal_heavy();
    if (last) std::reverse(candidates.begin(), candidates.end());
    bool moved = false;
    for (Subset s : candidates) {
      if (!to.light(s)) continue;
      auto next = flip_down(cur, s);
      if (!next || !dominates(*next, to) || !is_realizable(*next)) continue;
      path.steps.push_back({cur, s});
      cur = *next;
      moved = true;
      break;
    }
    if (!moved) throw InvalidPath("greedy crossing path is stuck at " + cur.str());
  }
  return path;
}

// ---------------------------------------------------------------- enumeration

Chamber symmetry_representative(const Chamber& c) {
  // relabelling keeps the antichain and its size, so compare permuted sorted lists directly
  std::vector<int> sigma(static_cast<std::size_t>(c.n()));
  std::iota(sigma.begin(), sigma.end(), 1);
  std::vector<Subset> best = c.light_max(), cur;
  do {
    cur.clear();
    for (Subset l : c.light_max()) {
      Subset out = 0;
      for (Subset rest = l; rest; rest &= rest - 1) out |= singleton(sigma[static_cast<std::size_t>(std::countr_zero(rest))]);
      cur.push_back(out);
    }
    std::sort(cur.begin(), cur.end(), set_less);
    if (std::lexicographical_compare(cur.begin(), cur.end(), best.begin(), best.end(), set_less)) best = cur;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return Chamber(c.g(), c.n(), best);
}

std::vector<Chamber> enumerate_chambers(const StabilitySpace& s, bool up_to_symmetry, int bound) {
  s.validate();
  if (s.n > bound) {
    throw BoundExceeded("enumeration bound is n <= " + std::to_string(bound) + ", got n = " + std::to_string(s.n));
  }
  // Every chamber is reached from the main chamber by downward simple crossings, and
  // crossings commute with relabelling, so it is enough to walk orbit representatives.
  std::set<Chamber> reps;
  std::set<Chamber> rejected;
  std::deque<Chamber> queue;
  const Chamber start = main_chamber(s);
  reps.insert(start);
  queue.push_back(start);
  while (!queue.empty()) {
    const Chamber c = queue.front();
    queue.pop_front();
    for (Subset w : c.minimal_heavy()) {
      auto next = flip_down(c, w);
      if (!next) continue;
      const Chamber rep = symmetry_representative(*next);
      if (reps.count(rep) || rejected.count(rep)) continue;
      if (!is_realizable(rep)) {
        rejected.insert(rep);
        continue;
      }
      reps.insert(rep);
      queue.push_back(rep);
    }
  }
  if (up_to_symmetry) return {reps.begin(), reps.end()};
  std::set<Chamber> all;
  std::vector<int> sigma(static_cast<std::size_t>(s.n));
  for (const auto& c : reps) {
    std::iota(sigma.begin(), sigma.end(), 1);
    do {
      all.insert(permute(c, sigma));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }
  return {all.begin(), all.end()};
}

// ---------------------------------------------------------------- json

nlohmann::json to_json(const Chamber& c) {
  nlohmann::json sets = nlohmann::json::array();
  for (Subset l : c.light_max()) sets.push_back(set_labels(l));
  return {{"g", c.g()}, {"n", c.n()}, {"light_max", sets}};
}

Chamber chamber_from_json(const nlohmann::json& j, std::optional<int> g, std::optional<int> n) {
  if (!j.is_object()) throw DomainError("chamber spec must be a JSON object");
  const int gg = j.contains("g") ? j.at("g").get<int>() : g.value_or(-1);
  const int nn = j.contains("n") ? j.at("n").get<int>() : n.value_or(-1);
  if (gg < 0 || nn < 0) throw DomainError("chamber spec needs g and n");
  if (g && *g != gg) throw DomainError("chamber genus disagrees with --g");
  if (n && *n != nn) throw DomainError("chamber point count disagrees with --n");
  StabilitySpace{gg, nn}.validate();
  std::vector<Subset> light;
  for (const auto& s : j.value("light_max", nlohmann::json::array())) {
    const Subset set = set_from_labels(s.get<std::vector<int>>());
    if (set & ~full_set(nn)) throw DomainError("light set " + set_str(set) + " exceeds n");
    light.push_back(set);
  }
  return Chamber(gg, nn, light);
}

nlohmann::json to_json(const CrossingPath& p) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& st : p.steps) steps.push_back({{"above", to_json(st.above)}, {"wall", set_labels(st.wall)}});
  return {{"from", to_json(p.from)}, {"steps", steps}};
}

}  // namespace wpvol
