#pragma once

#include "wpvol/lp.hpp"
#include "wpvol/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace wpvol {

// Subset of {1..n}: bit j-1 stands for label j.
using Subset = std::uint32_t;

inline constexpr int kMaxPoints = 20;

int set_size(Subset s);
Subset full_set(int n);
Subset singleton(int j);
bool contains(Subset s, int j);
std::vector<int> set_labels(Subset s);
Subset set_from_labels(const std::vector<int>& labels);
std::string set_str(Subset s);  // "{1,2,4}"
// lexicographic order of the sorted label lists
bool set_less(Subset a, Subset b);

struct StabilitySpace {
  int g = 0;
  int n = 0;
  // throws Unstable
  void validate() const;
  bool operator==(const StabilitySpace&) const = default;
};

class Chamber {
 public:
  Chamber() = default;
  // Canonicalizes: drops sets of size < 2 and non-maximal sets, sorts.
  Chamber(int g, int n, std::vector<Subset> light_max);

  int g() const { return g_; }
  int n() const { return n_; }
  StabilitySpace space() const { return {g_, n_}; }
  const std::vector<Subset>& light_max() const { return light_; }

  // C(J): true means heavy (value 1)
  bool heavy(Subset j) const;
  bool light(Subset j) const { return !heavy(j); }
  bool is_main() const { return light_.empty(); }

  // heavy sets |S| >= 2 all of whose proper subsets are light
  std::vector<Subset> minimal_heavy() const;

  friend bool operator==(const Chamber& a, const Chamber& b) {
    return a.g_ == b.g_ && a.n_ == b.n_ && a.light_ == b.light_;
  }
  friend bool operator<(const Chamber& a, const Chamber& b);

  std::string str() const;

 private:
  int g_ = 0;
  int n_ = 0;
  std::vector<Subset> light_;
};

struct WeightVector {
  int g = 0;
  std::vector<Rational> a;
  // throws DomainError unless 0 < a_j <= 1 and sum > 2 - 2g
  void validate() const;
};

std::vector<Rational> parse_weights(const std::string& text);

// --- constructions -------------------------------------------------------

Chamber classify(const WeightVector& w);
Chamber main_chamber(const StabilitySpace& s);
Chamber light_chamber(const StabilitySpace& s);
Chamber minimal_chamber_0(int n, int j);
// D_{0,n+2}: the first n points mutually light, two points of weight 1
Chamber losev_manin_chamber(int n);
// D_{0,n+3}: the first n points light with each other and with any single heavy point
Chamber cp1n_chamber(int n);

Chamber simple_cross(const Chamber& c, Subset s);
// flip without the realizability check; nullopt if not incident
std::optional<Chamber> flip_down(const Chamber& c, Subset s);
// merged point is labelled last
Chamber quotient(const Chamber& c, Subset s);
// labels of T keep their relative order
Chamber restrict_to(const Chamber& c, Subset t);
// sigma[j-1] = image of label j
Chamber permute(const Chamber& c, const std::vector<int>& sigma);

bool is_flat(const Chamber& c, int i);
bool is_light(const Chamber& c, int i);
Subset q_set(const Chamber& c, int i);

// --- realizability ---------------------------------------------------------

// Variables a_1..a_n, s (index n); every defining strict inequality carries margin s.
LinearProgram chamber_lp(const Chamber& c);
// maximal margin s and an optimal witness; margin <= 0 means empty
struct Witness {
  Rational margin;
  std::vector<Rational> a;
};
std::optional<Witness> chamber_witness(const Chamber& c);
bool is_realizable(const Chamber& c);

// --- paths -----------------------------------------------------------------

struct CrossingStep {
  Chamber above;
  Subset wall = 0;
};

struct CrossingPath {
  Chamber from;
  std::vector<CrossingStep> steps;
  Chamber target() const;
};

// from(J) >= to(J) for every J
bool dominates(const Chamber& from, const Chamber& to);
CrossingPath crossing_path(const Chamber& from, const Chamber& to, unsigned seed = 1);
// always takes the first (or last) admissible wall in canonical order
CrossingPath greedy_crossing_path(const Chamber& from, const Chamber& to, bool last = false);
// replays the path; true if every step is a valid simple crossing
bool replay_ok(const CrossingPath& p);

// --- enumeration -----------------------------------------------------------

std::vector<Chamber> enumerate_chambers(const StabilitySpace& s, bool up_to_symmetry, int bound = 6);
Chamber symmetry_representative(const Chamber& c);

// --- serialization ---------------------------------------------------------

nlohmann::json to_json(const Chamber& c);
// g and n may be supplied by the caller when absent from the object
Chamber chamber_from_json(const nlohmann::json& j, std::optional<int> g = std::nullopt,
                          std::optional<int> n = std::nullopt);
nlohmann::json to_json(const CrossingPath& p);

}  // namespace wpvol
