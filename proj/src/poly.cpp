#include "wpvol/poly.hpp"

#include "wpvol/errors.hpp"

#include <algorithm>
#include <mutex>

namespace wpvol {

PolyRing::PolyRing(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty() || names_.front() != "pi") {
    throw RingMismatch("polynomial ring must start with pi");
  }
}

RingPtr PolyRing::angles(int n, bool with_t) {
  static std::mutex mu;
  static std::map<std::pair<int, bool>, RingPtr> rings;
  std::lock_guard lock(mu);
  auto& slot = rings[{n, with_t}];
  if (!slot) {
    std::vector<std::string> names{"pi"};
    for (int j = 1; j <= n; ++j) names.push_back("t" + std::to_string(j));
    if (with_t) names.emplace_back("t");
    slot = std::make_shared<const PolyRing>(std::move(names));
  }
  return slot;
}

int PolyRing::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int PolyRing::angle_count() const {
  int count = 0;
  for (const auto& s : names_) {
    if (s.size() > 1 && s[0] == 't') ++count;
  }
  return count;
}

Poly::Poly(RingPtr ring) : ring_(std::move(ring)) {}

Poly::Poly(RingPtr ring, const Rational& c) : ring_(std::move(ring)) {
  if (!c.is_zero()) terms_.emplace(Exponent(static_cast<std::size_t>(ring_->size()), 0), c);
}

Poly Poly::var(RingPtr ring, int index) {
  if (index < 0 || index >= ring->size()) throw RingMismatch("variable index out of range");
  Poly p(ring);
  Exponent e(static_cast<std::size_t>(ring->size()), 0);
  e[static_cast<std::size_t>(index)] = 1;
  p.terms_.emplace(std::move(e), Rational(1));
  return p;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
}

Rational Poly::constant_term() const {
  auto it = terms_.find(Exponent(static_cast<std::size_t>(ring_->size()), 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::total_degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int k : e) d += k;
    best = std::max(best, d);
  }
  return best;
}

int Poly::degree_in(int v) const {
  int best = terms_.empty() ? -1 : 0;
  for (const auto& [e, c] : terms_) best = std::max(best, e[static_cast<std::size_t>(v)]);
  return best;
}

int Poly::angle_degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (std::size_t i = 1; i < e.size(); ++i) d += e[i];
    best = std::max(best, d);
  }
  return best;
}

void Poly::add_term(const Exponent& e, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Poly::check_same_ring(const Poly& o) const {
  if (ring_ != o.ring_ && !(*ring_ == *o.ring_)) throw RingMismatch("polynomials live in different rings");
}

Poly& Poly::operator+=(const Poly& o) {
  check_same_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check_same_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_same_ring(b);
  Poly out(a.ring_);
  Exponent e(static_cast<std::size_t>(a.ring_->size()));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Poly& Poly::operator*=(const Poly& o) {
  *this = *this * o;
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Poly Poly::operator-() const {
  Poly out(*this);
  for (auto& [e, v] : out.terms_) v = -v;
  return out;
}

Poly Poly::pow(unsigned k) const {
  Poly result(ring_, Rational(1));
  Poly base = *this;
  while (k) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k) base = base * base;
  }
  return result;
}

bool operator==(const Poly& a, const Poly& b) {
  return (a.ring_ == b.ring_ || *a.ring_ == *b.ring_) && a.terms_ == b.terms_;
}

Poly Poly::derivative(int v) const {
  if (v < 0 || v >= ring_->size()) throw RingMismatch("derivative: variable index out of range");
  Poly out(ring_);
  for (const auto& [e, c] : terms_) {
    const int k = e[static_cast<std::size_t>(v)];
    if (k == 0) continue;
    Exponent f = e;
    f[static_cast<std::size_t>(v)] = k - 1;
    out.add_term(f, c * Rational(k));
  }
  return out;
}

namespace {

// powers[k] = q^k for k = 0..max
std::vector<Poly> power_table(const Poly& q, int max) {
  std::vector<Poly> powers;
  powers.emplace_back(q.ring(), Rational(1));
  for (int k = 1; k <= max; ++k) powers.push_back(powers.back() * q);
  return powers;
}

}  // namespace

Poly Poly::substitute(int v, const Poly& q) const {
  if (v < 0 || v >= ring_->size()) throw RingMismatch("substitute: variable index out of range");
  check_same_ring(q);
  const int max = degree_in(v);
  if (max <= 0) return *this;
  const auto powers = power_table(q, max);
  // bucket by the power of v so each q^k multiplies one partial sum
  std::vector<Poly> buckets(static_cast<std::size_t>(max) + 1, Poly(ring_));
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    const int k = f[static_cast<std::size_t>(v)];
    f[static_cast<std::size_t>(v)] = 0;
    buckets[static_cast<std::size_t>(k)].add_term(f, c);
  }
  Poly out(ring_);
  for (int k = 0; k <= max; ++k) {
    if (!buckets[static_cast<std::size_t>(k)].is_zero()) out += buckets[static_cast<std::size_t>(k)] * powers[static_cast<std::size_t>(k)];
  }
  return out;
}

Poly Poly::compose(const RingPtr& target, const std::vector<Poly>& images) const {
  if (static_cast<int>(images.size()) != ring_->size()) throw RingMismatch("compose: wrong number of images");
  std::vector<std::vector<Poly>> powers(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!(*images[i].ring() == *target)) throw RingMismatch("compose: image outside target ring");
    powers[i] = power_table(images[i], std::max(degree_in(static_cast<int>(i)), 0));
  }
  Poly out(target);
  for (const auto& [e, c] : terms_) {
    Poly term(target, c);
    for (std::size_t i = 0; i < e.size() && !term.is_zero(); ++i) {
      if (e[i]) term *= powers[i][static_cast<std::size_t>(e[i])];
    }
    out += term;
  }
  return out;
}

Poly Poly::rename_into(const RingPtr& target) const {
  std::vector<int> where(static_cast<std::size_t>(ring_->size()), -1);
  for (int i = 0; i < ring_->size(); ++i) where[static_cast<std::size_t>(i)] = target->index_of(ring_->name(i));
  Poly out(target);
  Exponent f(static_cast<std::size_t>(target->size()));
  for (const auto& [e, c] : terms_) {
    std::fill(f.begin(), f.end(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (where[i] < 0) throw RingMismatch("rename_into: variable '" + ring_->name(static_cast<int>(i)) + "' missing in target");
      f[static_cast<std::size_t>(where[i])] += e[i];
    }
    out.add_term(f, c);
  }
  return out;
}

Poly Poly::integrate_upper(int t, const Poly& upper) const {
  if (t < 0 || t >= ring_->size()) throw RingMismatch("integrate_upper: variable index out of range");
  check_same_ring(upper);
  const bool symbolic = upper == var(ring_, t);  // integral from 0 to t itself
  if (!symbolic && upper.involves(t)) throw RingMismatch("integrate_upper: upper bound involves the integration variable");
  Poly anti(ring_);
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    const int k = ++f[static_cast<std::size_t>(t)];
    anti.add_term(f, c / Rational(k));
  }
  return symbolic ? anti : anti.substitute(t, upper);
}

Poly evaluate_formal(const Poly& p, const std::vector<Rational>& point) {
  const auto& ring = p.ring();
  if (static_cast<int>(point.size()) != ring->size() - 1) {
    throw DimensionMismatch("evaluate: expected " + std::to_string(ring->size() - 1) + " values, got " +
                            std::to_string(point.size()));
  }
  const auto target = PolyRing::pi_only();
  std::vector<Poly> images{Poly::pi(target)};
  for (const auto& r : point) images.emplace_back(target, r);
  return p.compose(target, images);
}

}  // namespace wpvol
