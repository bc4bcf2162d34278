#pragma once

#include "wpvol/rational.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace wpvol {

// Ordered variable names. Index 0 is always the formal symbol pi.
class PolyRing {
 public:
  explicit PolyRing(std::vector<std::string> names);

  // pi, t1..tn and, if with_t, a trailing integration variable "t".
  static std::shared_ptr<const PolyRing> angles(int n, bool with_t = false);
  static std::shared_ptr<const PolyRing> pi_only() { return angles(0); }

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
  // -1 if absent
  int index_of(std::string_view name) const;
  // number of angle variables t1..tn
  int angle_count() const;

  bool operator==(const PolyRing& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const PolyRing>;
using Exponent = std::vector<int>;

class Poly {
 public:
  explicit Poly(RingPtr ring);
  Poly(RingPtr ring, const Rational& c);

  static Poly var(RingPtr ring, int index);
  static Poly pi(RingPtr ring) { return var(std::move(ring), 0); }
  // angle variable theta_j, 1-based
  static Poly theta(RingPtr ring, int j) { return var(std::move(ring), j); }

  const RingPtr& ring() const { return ring_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  std::size_t term_count() const { return terms_.size(); }

  int total_degree() const;  // -1 for zero
  int degree_in(int v) const;
  // degree counting only angle (non-pi) variables
  int angle_degree() const;
  bool involves(int v) const { return degree_in(v) > 0; }

  void add_term(const Exponent& e, const Rational& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  Poly operator-() const;

  Poly pow(unsigned k) const;

  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly derivative(int v) const;
  Poly substitute(int v, const Poly& q) const;
  Poly substitute(int v, const Rational& c) const { return substitute(v, Poly(ring_, c)); }
  // Simultaneous substitution into another ring: variable i of this ring
  // becomes images[i] (all images share target).
  Poly compose(const RingPtr& target, const std::vector<Poly>& images) const;
  // Same polynomial read in a ring that contains all used variable names.
  Poly rename_into(const RingPtr& target) const;

  // integral from 0 to U with respect to variable t; U must not involve t
  Poly integrate_upper(int t, const Poly& upper) const;

 private:
  void check_same_ring(const Poly& o) const;
  RingPtr ring_;
  std::map<Exponent, Rational> terms_;
};

// --- evaluation -----------------------------------------------------------

// Substitutes one Rational per angle variable; result lives in the pi-only ring.
Poly evaluate_formal(const Poly& p, const std::vector<Rational>& point);
// Decimal string of a pi-only (or any) polynomial with pi numeric, rounded to
// `digits` significant digits. Other variables must be absent.
std::string evaluate_numeric(const Poly& pi_poly, int digits = 50);
// Sign of a pi-only polynomial evaluated at numeric pi (used for positivity).
int numeric_sign(const Poly& pi_poly, int digits = 50);

// --- serialization --------------------------------------------------------

nlohmann::json to_json(const Poly& p);
Poly poly_from_json(const nlohmann::json& j);

std::string to_text(const Poly& p);
// Accepts + - * / ^ and parentheses over rational literals and ring names.
Poly parse_poly(std::string_view text, const RingPtr& ring);

std::string to_latex(const Poly& p);
// theta_j replaced by 2 pi (1 - a_j); printed in a_j
std::string to_a_form(const Poly& p);
// L_j = i theta_j
std::string to_l_form(const Poly& p);

}  // namespace wpvol
