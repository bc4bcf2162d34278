#pragma once

#include "wpvol/chamber.hpp"
#include "wpvol/intersection.hpp"
#include "wpvol/poly.hpp"

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

namespace wpvol {

struct Provenance {
  enum class Kind { MainChamber, WallCrossingPath, ClosedForm };
  Kind kind = Kind::MainChamber;
  std::optional<CrossingPath> path;  // WallCrossingPath only
  std::string name;                  // ClosedForm only
};

struct VolumeResult {
  Chamber chamber;
  Poly poly{PolyRing::pi_only()};
  Provenance provenance;
};

struct WallCrossingPoly {
  Chamber above;
  Subset wall = 0;
  Poly poly{PolyRing::pi_only()};
  Poly phi{PolyRing::pi_only()};
};

// Both sides of an identity, kept for diagnostics.
struct IdentitySides {
  Poly lhs{PolyRing::pi_only()};
  Poly rhs{PolyRing::pi_only()};
  bool holds() const { return lhs == rhs; }
};

enum class PathStrategy { Segment, GreedyFirst, GreedyLast };

struct EngineOptions {
  int max_genus = 3;
  PathStrategy path = PathStrategy::Segment;
  unsigned seed = 1;
  // mutation hook for the verification suite: phi_S is shifted by this many multiples of 2 pi
  int phi_offset = 0;
};

class VolumeEngine {
 public:
  explicit VolumeEngine(EngineOptions opt = {}, IntersectionCache* cache = nullptr);

  const EngineOptions& options() const { return opt_; }

  VolumeResult mirzakhani_volume(int g, int n);
  // checks that c lies above W_S and the crossing is realizable
  WallCrossingPoly wall_crossing_poly(const Chamber& c, Subset s);
  VolumeResult chamber_volume(const Chamber& c);
  // main-chamber volume plus the wall-crossings along p (p must start at the main chamber); not cached
  VolumeResult volume_along(const CrossingPath& p);
  // the integral formula for a wall S of D_{g,n} given the quotient chamber; no incidence check
  Poly wall_crossing_integral(int n, Subset s, const Chamber& quot);

  CrossingPath path_between(const Chamber& from, const Chamber& to) const;
  std::size_t cached_chambers() const;

 private:
  EngineOptions opt_;
  Intersections inter_;
  mutable std::shared_mutex mu_;
  std::map<std::pair<int, int>, Poly> mirz_;
  std::map<Chamber, VolumeResult> vols_;
  std::map<std::tuple<Chamber, int, Subset>, Poly> wcs_;
};

VolumeEngine& default_engine();

// phi_S = sum_{j in S} theta_j - 2 pi (|S| - 1) in the ring of n angles
Poly phi_form(int n, Subset s);
// theta_j -> 2 pi (1 - a_j); result lives in the pi-only ring
Poly evaluate_at_weights(const Poly& p, const std::vector<Rational>& a);
// variable k of p (1-based angle) becomes theta_{labels[k-1]} of the n-angle ring
Poly relabel_angles(const Poly& p, int n, const std::vector<int>& labels);

struct PiecewiseValue {
  Chamber chamber;
  VolumeResult volume;
  Poly value{PolyRing::pi_only()};
};
PiecewiseValue piecewise_volume(VolumeEngine& e, const WeightVector& w);

// --- closed forms --------------------------------------------------------

VolumeResult minimal_chamber_volume_closed(int n, int j);
// V_{0,L_n}(i theta, 0, 0) in the ring of the n light angles
VolumeResult losev_manin_volume(int n);
// the engine's L_n volume with the two heavy angles set to 0, same ring
Poly losev_manin_engine(VolumeEngine& e, int n);
VolumeResult cp1n_volume(int n);

// ring {pi, eps}
RingPtr eps_ring();
// all n light angles set to 2 pi (1 - eps)
Poly equal_weight(const Poly& lm, int n);
// w[k] = equal-weight L_k volume for k = 1..n (w[0] ignored);
// lhs = w[n], rhs = (2 pi eps)^2 / 2 * sum_{i=1}^{n-1} i (n-i)/(n-1) C(n,i) w[i] w[n-i]
IdentitySides cayley_identity(const std::vector<Poly>& w, int n);

// --- limits and derivative identities -------------------------------------

Poly eval_at_2pi(const Poly& v, int i);
// d/dtheta_i, then theta_i = 2 pi
Poly derivative_at_2pi(const Poly& v, int i);

// a chamber below c that is light in coordinate i, reached through walls containing i
std::optional<Chamber> light_chamber_below(const Chamber& c, int i);
// the chamber below c agreeing with c away from i and flat in i; falls back to light_chamber_below
std::optional<Chamber> flat_chamber_below(const Chamber& c, int i);

// lhs = V_c at theta_i = 2 pi; rhs = -sum of the wall-crossings (at theta_i = 2 pi)
// along a path from c to a chamber light in i.  Throws InvalidPath if none exists.
IdentitySides incident_limit_check(VolumeEngine& e, const Chamber& c, int i);
// main chamber of (g,2): V(theta_1, 2 pi) against -int_0^theta_1 t V_{g,1}(t) dt
IdentitySides limit_value_g2(VolumeEngine& e, int g);
// d/dtheta_2 at 2 pi; light = false: main chamber against 2 pi (1-2g) V_{g,1}(theta_1),
// light = true: light chamber against 2 pi (1 - 2g + theta_1/2pi) V_{g,1}(theta_1)
IdentitySides limit_derivative_g2(VolumeEngine& e, int g, bool light);

IdentitySides dilaton_check(VolumeEngine& e, const Chamber& c, int i);
IdentitySides wc_derivative_check(VolumeEngine& e, const Chamber& c, Subset s, int j);
// path runs from c down to a chamber flat in i, or from such a chamber down to c.
// Walls containing i contribute through the wall-derivative identity, other walls directly.
IdentitySides general_dilaton_check(VolumeEngine& e, const Chamber& c, const CrossingPath& path, int i);

// wall relation substituted into wc and each first partial; all must vanish
std::vector<Poly> continuity_residues(const WallCrossingPoly& w);
// wc written in u = phi_S has no theta_j (j in S) left and only even powers u^k, k >= 2
bool even_in_phi(const WallCrossingPoly& w);

// random interior rational points of a realizable chamber (deterministic for a seed)
std::vector<std::vector<Rational>> interior_points(const Chamber& c, int count, unsigned seed);

// --- serialization ---------------------------------------------------------

std::string provenance_tag(const Provenance& p);
nlohmann::json to_json(const VolumeResult& v);
nlohmann::json to_json(const WallCrossingPoly& w);

}  // namespace wpvol
