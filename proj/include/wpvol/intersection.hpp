#pragma once

#include "wpvol/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace wpvol {

// (g, power of kappa_1, sorted psi exponents)
struct IntersectionKey {
  int g = 0;
  int m = 0;
  std::vector<int> d;
  auto operator<=>(const IntersectionKey&) const = default;
};

class IntersectionCache {
 public:
  // thread_safe = false skips all locking (single-threaded use)
  explicit IntersectionCache(bool thread_safe = true) : thread_safe_(thread_safe) {}

  std::optional<Rational> find(const IntersectionKey& key) const;
  void insert(const IntersectionKey& key, const Rational& value);
  std::size_t size() const;
  std::map<IntersectionKey, Rational> snapshot() const;
  void clear();

  // `g;m;d1,...,dn;num/den` per line, lines sorted. Missing file is not an error.
  void load(const std::string& path);
  void save(const std::string& path) const;

 private:
  bool thread_safe_;
  mutable std::shared_mutex mu_;
  std::map<IntersectionKey, Rational> table_;
};

std::string cache_line(const IntersectionKey& key, const Rational& value);

// Process-wide cache used by the free functions below.
IntersectionCache& default_intersection_cache();

class Intersections {
 public:
  explicit Intersections(IntersectionCache& cache) : cache_(cache) {}

  // <tau_{d_1} ... tau_{d_n}>_g. Throws Unstable / DimensionMismatch.
  Rational psi(int g, std::vector<int> d);
  // <kappa_1^m tau_{d_1} ... tau_{d_n}>_g
  Rational kappa_psi(int g, int m, std::vector<int> d);

 private:
  void validate(int g, int m, const std::vector<int>& d) const;
  Rational psi_raw(int g, std::vector<int> d);
  Rational kappa_raw(int g, int m, std::vector<int> d);
  IntersectionCache& cache_;
};

Rational psi_intersection(int g, const std::vector<int>& d);
Rational kappa_psi_intersection(int g, int m, const std::vector<int>& d);

}  // namespace wpvol
