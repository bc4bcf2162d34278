#include "wpvol/intersection.hpp"

#include "wpvol/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>

namespace wpvol {

// ---------------------------------------------------------------- cache

std::optional<Rational> IntersectionCache::find(const IntersectionKey& key) const {
  std::shared_lock<std::shared_mutex> lock(mu_, std::defer_lock);
  if (thread_safe_) lock.lock();
  auto it = table_.find(key);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

void IntersectionCache::insert(const IntersectionKey& key, const Rational& value) {
  std::unique_lock<std::shared_mutex> lock(mu_, std::defer_lock);
  if (thread_safe_) lock.lock();
  // same key always carries the same value, so a racing insert is harmless
  table_.try_emplace(key, value);
}

std::size_t IntersectionCache::size() const {
  std::shared_lock<std::shared_mutex> lock(mu_, std::defer_lock);
  if (thread_safe_) lock.lock();
  return table_.size();
}

std::map<IntersectionKey, Rational> IntersectionCache::snapshot() const {
  std::shared_lock<std::shared_mutex> lock(mu_, std::defer_lock);
  if (thread_safe_) lock.lock();
  return table_;
}

void IntersectionCache::clear() {
  std::unique_lock<std::shared_mutex> lock(mu_, std::defer_lock);
  if (thread_safe_) lock.lock();
  table_.clear();
}

std::string cache_line(const IntersectionKey& key, const Rational& value) {
  std::string s = std::to_string(key.g) + ";" + std::to_string(key.m) + ";";
  for (std::size_t i = 0; i < key.d.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(key.d[i]);
  }
  return s + ";" + value.canonical_str();
}

void IntersectionCache::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ';')) fields.push_back(f);
    if (fields.size() == 3 && line.back() == ';') fields.emplace_back();
    if (fields.size() != 4) throw DomainError(path + ":" + std::to_string(lineno) + ": malformed cache record");
    IntersectionKey key;
    try {
      key.g = std::stoi(fields[0]);
      key.m = std::stoi(fields[1]);
      std::stringstream ds(fields[2]);
      while (std::getline(ds, f, ',')) key.d.push_back(std::stoi(f));
      std::sort(key.d.begin(), key.d.end());
      insert(key, Rational::parse(fields[3]));
    } catch (const std::invalid_argument&) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": malformed cache record");
    }
  }
}

void IntersectionCache::save(const std::string& path) const {
  std::vector<std::string> lines;
  for (const auto& [k, v] : snapshot()) lines.push_back(cache_line(k, v));
  std::sort(lines.begin(), lines.end());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write cache file " + path);
    for (const auto& l : lines) out << l << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw DomainError("cannot write cache file " + path);
}

IntersectionCache& default_intersection_cache() {
  static IntersectionCache cache;
  return cache;
}

// ---------------------------------------------------------------- recursion

namespace {

Rational double_factorial_odd(int k) {
  // (2k+1)!! with (-1)!! = 1
  Rational r(1);
  for (int i = 2 * k + 1; i > 1; i -= 2) r *= Rational(i);
  return r;
}

bool stable(int g, int n) { return 2 * g - 2 + n > 0; }

int sum(const std::vector<int>& d) { return std::accumulate(d.begin(), d.end(), 0); }

}  // namespace

void Intersections::validate(int g, int m, const std::vector<int>& d) const {
  const int n = static_cast<int>(d.size());
  if (g < 0 || m < 0 || std::any_of(d.begin(), d.end(), [](int x) { return x < 0; })) {
    throw DomainError("intersection index must be non-negative");
  }
  if (!stable(g, n)) {
    throw Unstable("unstable (g,n) = (" + std::to_string(g) + "," + std::to_string(n) + ")");
  }
  if (m + sum(d) != 3 * g - 3 + n) {
    throw DimensionMismatch("degree " + std::to_string(m + sum(d)) + " does not match dimension " +
                            std::to_string(3 * g - 3 + n));
  }
}

Rational Intersections::psi(int g, std::vector<int> d) {
  validate(g, 0, d);
  return psi_raw(g, std::move(d));
}

Rational Intersections::kappa_psi(int g, int m, std::vector<int> d) {
  validate(g, m, d);
  return kappa_raw(g, m, std::move(d));
}

// Unstable and dimension-mismatched correlators are zero here; the recursions rely on that.
Rational Intersections::psi_raw(int g, std::vector<int> d) {
  const int n = static_cast<int>(d.size());
  if (g < 0 || !stable(g, n) || sum(d) != 3 * g - 3 + n) return Rational(0);
  if (std::any_of(d.begin(), d.end(), [](int x) { return x < 0; })) return Rational(0);
  std::sort(d.begin(), d.end());

  if (g == 0) {
    Rational r = factorial(static_cast<unsigned>(n - 3));
    for (int x : d) r /= factorial(static_cast<unsigned>(x));
    return r;
  }
  if (g == 1 && n == 1) return Rational(1, 24);

  IntersectionKey key{g, 0, d};
  if (auto hit = cache_.find(key)) return *hit;

  Rational result(0);
  if (d.front() == 0 && stable(g, n - 1)) {
    // string equation
    std::vector<int> rest(d.begin() + 1, d.end());
    for (std::size_t j = 0; j < rest.size(); ++j) {
      if (rest[j] == 0) continue;
      auto e = rest;
      --e[j];
      result += psi_raw(g, e);
    }
  } else if (std::find(d.begin(), d.end(), 1) != d.end() && stable(g, n - 1)) {
    // dilaton equation
    auto rest = d;
    rest.erase(std::find(rest.begin(), rest.end(), 1));
    result = Rational(2 * g - 2 + n - 1) * psi_raw(g, rest);
  } else {
    // DVV on the largest exponent tau_{k+1}
    const int k = d.back() - 1;
    std::vector<int> s(d.begin(), d.end() - 1);
    const int ns = static_cast<int>(s.size());
    Rational acc(0);
    for (int j = 0; j < ns; ++j) {
      auto e = s;
      e[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j)] + k;
      acc += double_factorial_odd(k + s[static_cast<std::size_t>(j)]) / double_factorial_odd(s[static_cast<std::size_t>(j)] - 1) *
             psi_raw(g, e);
    }
    Rational quad(0);
    for (int r = 0; r <= k - 1; ++r) {
      const int t = k - 1 - r;
      const Rational w = double_factorial_odd(r) * double_factorial_odd(t);
      auto e = s;
      e.push_back(r);
      e.push_back(t);
      Rational inner = psi_raw(g - 1, e);
      for (unsigned mask = 0; mask < (1U << ns); ++mask) {
        std::vector<int> left{r}, right{t};
        for (int j = 0; j < ns; ++j) {
          ((mask >> j) & 1U ? left : right).push_back(s[static_cast<std::size_t>(j)]);
        }
        for (int g1 = 0; g1 <= g; ++g1) {
          const Rational a = psi_raw(g1, left);
          if (a.is_zero()) continue;
          inner += a * psi_raw(g - g1, right);
        }
      }
      quad += w * inner;
    }
    acc += Rational(1, 2) * quad;
    result = acc / double_factorial_odd(k + 1);
  }
  cache_.insert(key, result);
  return result;
}

Rational Intersections::kappa_raw(int g, int m, std::vector<int> d) {
  if (m == 0) return psi_raw(g, std::move(d));
  const int n = static_cast<int>(d.size());
  if (g < 0 || !stable(g, n) || m + sum(d) != 3 * g - 3 + n) return Rational(0);
  std::sort(d.begin(), d.end());
  IntersectionKey key{g, m, d};
  if (auto hit = cache_.find(key)) return *hit;
  // kappa_1 = pi_*(psi_{n+1}^2), corrected for kappa_1 pulling back to kappa_1 - psi_{n+1}
  Rational result(0);
  for (int j = 0; j <= m - 1; ++j) {
    auto e = d;
    e.push_back(j + 2);
    const Rational term = binomial(static_cast<unsigned>(m - 1), static_cast<unsigned>(j)) * kappa_raw(g, m - 1 - j, e);
    if (j % 2) result -= term;
    else result += term;
  }
  cache_.insert(key, result);
  return result;
}

Rational psi_intersection(int g, const std::vector<int>& d) {
  return Intersections(default_intersection_cache()).psi(g, d);
}

Rational kappa_psi_intersection(int g, int m, const std::vector<int>& d) {
  return Intersections(default_intersection_cache()).kappa_psi(g, m, d);
}

}  // namespace wpvol
