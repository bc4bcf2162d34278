#include "wpvol/errors.hpp"
#include "wpvol/poly.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>

namespace wpvol {

// ---------------------------------------------------------------- numeric

namespace {

struct Mpfr {
  mpfr_t v;
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

mpfr_prec_t bits_for(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 64;
}

void numeric_value(const Poly& p, int digits, Mpfr& out) {
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = 1; i < e.size(); ++i) {
      if (e[i]) throw DimensionMismatch("numeric evaluation needs a polynomial in pi alone");
    }
  }
  const auto prec = bits_for(digits);
  Mpfr pi(prec), term(prec), coeff(prec);
  mpfr_const_pi(pi.v, MPFR_RNDN);
  mpfr_set_zero(out.v, 1);
  for (const auto& [e, c] : p.terms()) {
    mpfr_pow_ui(term.v, pi.v, static_cast<unsigned long>(e[0]), MPFR_RNDN);
    mpfr_set_q(coeff.v, c.raw().get_mpq_t(), MPFR_RNDN);
    mpfr_mul(term.v, term.v, coeff.v, MPFR_RNDN);
    mpfr_add(out.v, out.v, term.v, MPFR_RNDN);
  }
}

}  // namespace

std::string evaluate_numeric(const Poly& pi_poly, int digits) {
  if (digits < 1) throw DomainError("precision must be at least one digit");
  Mpfr value(bits_for(digits));
  numeric_value(pi_poly, digits, value);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, value.v);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

int numeric_sign(const Poly& pi_poly, int digits) {
  Mpfr value(bits_for(digits));
  numeric_value(pi_poly, digits, value);
  return mpfr_sgn(value.v);
}

// ---------------------------------------------------------------- json

nlohmann::json to_json(const Poly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"c", c.canonical_str()}, {"e", e}});
  return {{"vars", p.ring()->names()}, {"terms", terms}};
}

Poly poly_from_json(const nlohmann::json& j) {
  auto names = j.at("vars").get<std::vector<std::string>>();
  auto ring = std::make_shared<const PolyRing>(std::move(names));
  Poly p(ring);
  for (const auto& t : j.at("terms")) {
    auto e = t.at("e").get<Exponent>();
    if (static_cast<int>(e.size()) != ring->size()) throw RingMismatch("term exponent length does not match vars");
    if (std::any_of(e.begin(), e.end(), [](int k) { return k < 0; })) throw RingMismatch("negative exponent");
    p.add_term(e, Rational::parse(t.at("c").get<std::string>()));
  }
  return p;
}

// ---------------------------------------------------------------- printers

namespace {

enum class Style { Text, Latex };

// graded, highest total degree first, then lexicographically descending
std::vector<std::pair<Exponent, Rational>> display_order(const Poly& p) {
  std::vector<std::pair<Exponent, Rational>> out(p.terms().begin(), p.terms().end());
  auto deg = [](const Exponent& e) {
    int d = 0;
    for (int k : e) d += k;
    return d;
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
    const int dx = deg(x.first), dy = deg(y.first);
    if (dx != dy) return dx > dy;
    return x.first > y.first;
  });
  return out;
}

std::string latex_name(const std::string& name) {
  if (name == "pi") return "\\pi";
  if (name.size() > 1 && (name[0] == 't' || name[0] == 'a' || name[0] == 'L') &&
      std::isdigit(static_cast<unsigned char>(name[1]))) {
    const std::string base = name[0] == 't' ? "\\theta" : std::string(1, name[0]);
    return base + "_{" + name.substr(1) + "}";
  }
  return name;
}

std::string monomial(const Exponent& e, const std::vector<std::string>& names, Style style) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i]) continue;
    if (style == Style::Text) {
      if (!out.empty()) out += "*";
      out += names[i];
      if (e[i] > 1) out += "^" + std::to_string(e[i]);
    } else {
      out += latex_name(names[i]);
      if (e[i] > 1) out += "^{" + std::to_string(e[i]) + "}";
    }
  }
  return out;
}

// `suffix` is appended to every term (used for the imaginary unit)
std::string render(const std::vector<std::pair<Exponent, Rational>>& terms, const std::vector<std::string>& names,
                   Style style, const std::function<std::string(const Exponent&)>& suffix = {}) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const bool neg = c.sign() < 0;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    const Rational a = c.abs();
    std::string mono = monomial(e, names, style);
    if (suffix) {
      const std::string s = suffix(e);
      if (!s.empty()) mono += mono.empty() ? s : (style == Style::Text ? "*" + s : " " + s);
    }
    const bool unit = a == Rational(1);
    if (style == Style::Text) {
      if (mono.empty()) out += a.str();
      else if (unit) out += mono;
      else out += a.str() + "*" + mono;
    } else {
      std::string coeff;
      if (!(unit && !mono.empty())) {
        coeff = a.is_integer() ? a.numerator_str()
                               : "\\frac{" + a.numerator_str() + "}{" + a.denominator_str() + "}";
      }
      out += coeff;
      if (!coeff.empty() && !mono.empty()) out += " ";
      out += mono;
    }
  }
  return out;
}

}  // namespace

std::string to_text(const Poly& p) { return render(display_order(p), p.ring()->names(), Style::Text); }

std::string to_latex(const Poly& p) { return render(display_order(p), p.ring()->names(), Style::Latex); }

std::string to_a_form(const Poly& p) {
  std::vector<std::string> names;
  for (const auto& s : p.ring()->names()) {
    names.push_back(s.size() > 1 && s[0] == 't' ? "a" + s.substr(1) : s);
  }
  auto target = std::make_shared<const PolyRing>(names);
  std::vector<Poly> images;
  const Poly two_pi = Rational(2) * Poly::pi(target);
  for (int i = 0; i < target->size(); ++i) {
    if (names[static_cast<std::size_t>(i)] != p.ring()->name(i)) {
      images.push_back(two_pi - two_pi * Poly::var(target, i));
    } else {
      images.push_back(Poly::var(target, i));
    }
  }
  const Poly q = p.compose(target, images);
  return render(display_order(q), names, Style::Text);
}

std::string to_l_form(const Poly& p) {
  // theta = -i L, so a term of angle degree k picks up (-i)^k
  std::vector<std::string> names;
  std::vector<bool> is_angle;
  for (const auto& s : p.ring()->names()) {
    const bool angle = s.size() > 1 && s[0] == 't';
    is_angle.push_back(angle);
    names.push_back(angle ? "L" + s.substr(1) : s);
  }
  auto angle_deg = [&](const Exponent& e) {
    int k = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (is_angle[i]) k += e[i];
    }
    return k;
  };
  auto terms = display_order(p);
  for (auto& [e, c] : terms) {
    const int k = angle_deg(e) % 4;
    if (k == 1 || k == 2) c = -c;
  }
  return render(terms, names, Style::Text, [&](const Exponent& e) { return angle_deg(e) % 2 ? std::string("i") : std::string(); });
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, RingPtr ring) : s_(text), ring_(std::move(ring)) {}

  Poly parse() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly acc = term();
    for (;;) {
      if (eat('+')) acc += term();
      else if (eat('-')) acc -= term();
      else return acc;
    }
  }

  Poly term() {
    Poly acc = unary();
    for (;;) {
      if (eat('*')) {
        acc = acc * unary();
      } else if (eat('/')) {
        const Poly d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division only by nonzero constants");
        acc *= d.constant_term().inverse();
      } else {
        return acc;
      }
    }
  }

  Poly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Poly power() {
    Poly base = atom();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
    }
    return base;
  }

  Poly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Poly(ring_, Rational::parse(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      const int idx = ring_->index_of(name);
      if (idx < 0) fail("unknown variable '" + name + "'");
      return Poly::var(ring_, idx);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  RingPtr ring_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, const RingPtr& ring) { return Parser(text, ring).parse(); }

}  // namespace wpvol
