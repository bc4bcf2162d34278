#include "doctest.h"

#include "wpvol/errors.hpp"
#include "wpvol/intersection.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

using namespace wpvol;

namespace {

// all exponent vectors of length n summing to total
void compositions(int n, int total, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(total);
    f(cur);
    cur.pop_back();
    return;
  }
  for (int x = 0; x <= total; ++x) {
    cur.push_back(x);
    compositions(n, total - x, cur, f);
    cur.pop_back();
  }
}

}  // namespace

TEST_CASE("anchors and examples") {
  CHECK(psi_intersection(0, {0, 0, 0}) == Rational(1));
  CHECK(psi_intersection(1, {1}) == Rational(1, 24));
  CHECK(psi_intersection(0, {0, 0, 1, 1, 0}) == Rational(2));
  CHECK(psi_intersection(1, {0, 0, 2, 2}) == Rational(1, 6));
  CHECK(psi_intersection(1, {0, 1, 2}) == Rational(1, 12));
  CHECK(kappa_psi_intersection(1, 1, {0}) == Rational(1, 24));
  CHECK(kappa_psi_intersection(0, 1, {0, 0, 0, 0}) == Rational(1));
  CHECK(kappa_psi_intersection(1, 2, {0, 0}) == Rational(1, 8));
  CHECK(kappa_psi_intersection(0, 2, {0, 0, 0, 0, 0}) == Rational(5));
}

TEST_CASE("higher genus reference values") {
  CHECK(psi_intersection(2, {4}) == Rational(1, 1152));
  CHECK(psi_intersection(3, {7}) == Rational(1, 82944));
  CHECK(psi_intersection(2, {2, 3}) == Rational(29, 5760));
  CHECK(psi_intersection(2, {2, 2, 2}) == Rational(7, 240));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(psi_intersection(0, {0, 0, 1}), DimensionMismatch);
  CHECK_THROWS_AS(psi_intersection(0, {0, 0}), Unstable);
  CHECK_THROWS_AS(psi_intersection(1, {}), Unstable);
  CHECK_THROWS_AS(kappa_psi_intersection(1, 2, {0}), DimensionMismatch);
  CHECK_THROWS(psi_intersection(1, {-1, 3}));
}

TEST_CASE("genus zero closed form for n <= 8") {
  IntersectionCache cold(false);
  Intersections in(cold);
  int checked = 0;
  for (int n = 3; n <= 8; ++n) {
    std::vector<int> cur;
    compositions(n, n - 3, cur, [&](const std::vector<int>& d) {
      Rational expect = factorial(static_cast<unsigned>(n - 3));
      for (int x : d) expect /= factorial(static_cast<unsigned>(x));
      CHECK(in.psi(0, d) == expect);
      ++checked;
    });
  }
  CHECK(checked > 100);
}

TEST_CASE("string, dilaton, symmetry and kappa reduction on higher genus") {
  for (int g = 1; g <= 3; ++g) {
    for (int n = 1; n <= 4; ++n) {
      std::vector<int> cur;
      compositions(n, 3 * g - 3 + n, cur, [&](const std::vector<int>& d) {
        const Rational v = psi_intersection(g, d);
        auto rev = d;
        std::reverse(rev.begin(), rev.end());
        CHECK(psi_intersection(g, rev) == v);
        CHECK(kappa_psi_intersection(g, 0, d) == v);
        // dilaton: add a tau_1
        auto t = d;
        t.push_back(1);
        CHECK(psi_intersection(g, t) == Rational(2 * g - 2 + n) * v);
      });
      // string: <tau_0 prod tau_d> for d of total degree one above the n-point dimension
      compositions(n, 3 * g - 2 + n, cur, [&](const std::vector<int>& d) {
        auto s = d;
        s.push_back(0);
        Rational rhs(0);
        for (std::size_t j = 0; j < d.size(); ++j) {
          if (d[j] == 0) continue;
          auto e = d;
          --e[j];
          rhs += psi_intersection(g, e);
        }
        CHECK(psi_intersection(g, s) == rhs);
      });
    }
  }
}

TEST_CASE("cold cache reproduces warm cache") {
  // warm the default cache with a spread of values
  for (int g = 0; g <= 3; ++g) {
    for (int n = 1; n <= 3; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      for (int m = 0; m <= 3 * g - 3 + n; ++m) {
        std::vector<int> cur;
        compositions(n, 3 * g - 3 + n - m, cur, [&](const std::vector<int>& d) { kappa_psi_intersection(g, m, d); });
      }
    }
  }
  const auto warm = default_intersection_cache().snapshot();
  REQUIRE(warm.size() > 50);
  IntersectionCache cold;
  Intersections in(cold);
  for (const auto& [k, v] : warm) {
    CHECK(in.kappa_psi(k.g, k.m, k.d) == v);
  }
}

TEST_CASE("cache file round trip is sorted and bit-exact") {
  IntersectionCache c;
  Intersections in(c);
  in.kappa_psi(1, 2, {0, 0});
  in.psi(2, {2, 3});
  const std::string path = "intersection_cache_test.txt";
  c.save(path);
  IntersectionCache d;
  d.load(path);
  CHECK(d.snapshot() == c.snapshot());
  const std::string path2 = "intersection_cache_test2.txt";
  d.save(path2);
  std::ifstream a(path), b(path2);
  std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
  CHECK(sa.find("1;2;0,0;1/8\n") != std::string::npos);
  std::vector<std::string> lines;
  std::stringstream ss(sa);
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  CHECK(std::is_sorted(lines.begin(), lines.end()));
  std::remove(path.c_str());
  std::remove(path2.c_str());
}
