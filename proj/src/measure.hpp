#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exact.hpp"
#include "metric.hpp"
#include "smallball.hpp"
#include "json.hpp"

namespace modelab {

using Json = nlohmann::json;

// Closed-form family of near-maximisers with strictly increasing masses whose
// supremum is M_r; supplied by constructors that know the structure.
struct WitnessSequence {
  std::function<Point(long)> point_at;  // j = 1, 2, ...
  std::function<Surd(long)> mass_at;
  std::string description;
};

struct ModeAnalysis {
  Surd M_r;
  enum class Attained { Yes, No } attained = Attained::Yes;
  std::vector<Point> maximisers;  // representatives when attained
  bool all_points_maximise = false;
  std::optional<WitnessSequence> witness;
};

class Measure;
using MeasurePtr = std::shared_ptr<const Measure>;

class Measure : public std::enable_shared_from_this<Measure> {
 public:
  virtual ~Measure() = default;

  virtual SpacePtr space() const = 0;
  virtual std::string kind() const = 0;

  // Mass of the closed ball about x of radius r (pre-normalization scale).
  // Exact representations return zero-width intervals.
  Mass ball_mass(const Point& x, const Surd& r) const;

  virtual bool support_contains(const Point& x) const = 0;
  virtual SmallBallModel small_ball_model(const Point& x) const {
    return SmallBallModel::unavailable();
  }
  virtual Mass total_mass() const = 0;
  virtual Surd normalization() const { return Surd(Rat(1)); }

  // Closed-form sup/attainment analysis when the constructor provides one.
  virtual std::optional<ModeAnalysis> mode_analysis(const Surd& r) const {
    return std::nullopt;
  }
  // Points that carry the leading small-ball mass (argmax candidates as r -> 0).
  virtual std::vector<Point> dominant_centers() const { return {}; }
  // True when, for all small r, balls centered near x carry no more mass than
  // the ball centered at x (symmetric density nonincreasing away from x).
  virtual bool center_dominates_nearby(const Point& x) const { return false; }
  // Atoms / named points usable as an enumeration domain.
  virtual std::vector<Point> enumeration_points() const { return {}; }

  virtual Json to_json() const = 0;

 protected:
  virtual Mass ball_mass_impl(const Point& x, const Surd& r) const = 0;
};

// ---------------------------------------------------------------------------
// Atomic measure with an explicit atom list (finite space or real line).
struct Atom {
  Point point;
  Surd mass;
};

class AtomicMeasure final : public Measure {
 public:
  AtomicMeasure(SpacePtr space, std::vector<Atom> atoms, Surd z = Surd(Rat(1)));

  SpacePtr space() const override { return space_; }
  std::string kind() const override { return "atomic"; }
  bool support_contains(const Point& x) const override;
  SmallBallModel small_ball_model(const Point& x) const override;
  Mass total_mass() const override { return Mass(total_); }
  Surd normalization() const override { return z_; }
  std::vector<Point> enumeration_points() const override;
  Json to_json() const override;
  const std::vector<Atom>& atoms() const { return atoms_; }

 protected:
  Mass ball_mass_impl(const Point& x, const Surd& r) const override;

 private:
  std::optional<size_t> atom_index(const Point& x) const;
  Surd min_gap_at(size_t i) const;
  SpacePtr space_;
  std::vector<Atom> atoms_;
  Surd z_, total_;
};

// ---------------------------------------------------------------------------
// Countable atomic measure sum_k 2^{-k} delta_k on the doubly-spaced discrete
// metric; ball masses are evaluated in closed form (cofinite sums are exact).
class DoublySpacedGeometricMeasure final : public Measure {
 public:
  explicit DoublySpacedGeometricMeasure(long enumeration_count = 64);

  SpacePtr space() const override { return doubly_spaced_discrete_space(); }
  std::string kind() const override { return "doubly_spaced_geometric"; }
  bool support_contains(const Point& x) const override;
  SmallBallModel small_ball_model(const Point& x) const override;
  Mass total_mass() const override { return Mass(Surd(Rat(1))); }
  std::optional<ModeAnalysis> mode_analysis(const Surd& r) const override;
  std::vector<Point> dominant_centers() const override { return {IndexPoint{1}}; }
  std::vector<Point> enumeration_points() const override;
  Json to_json() const override;
  static long partner(long k) { return k % 2 == 1 ? k + 1 : k - 1; }

 protected:
  Mass ball_mass_impl(const Point& x, const Surd& r) const override;

 private:
  long enumeration_count_;
};

// ---------------------------------------------------------------------------
// Absolutely continuous measure on the line with piecewise-polynomial density.
class PiecewisePolyDensity final : public Measure {
 public:
  // pieces[i] is the density on [breakpoints[i], breakpoints[i+1])
  PiecewisePolyDensity(std::vector<Surd> breakpoints, std::vector<Poly> pieces,
                       Surd z = Surd(Rat(1)));
  static std::shared_ptr<PiecewisePolyDensity> piecewise_constant(
      std::vector<Surd> breakpoints, std::vector<Surd> values, Surd z = Surd(Rat(1)));

  SpacePtr space() const override { return RealLineSpace::instance(); }
  std::string kind() const override { return "piecewise_poly_density"; }
  bool support_contains(const Point& x) const override;
  SmallBallModel small_ball_model(const Point& x) const override;
  Mass total_mass() const override { return Mass(total_); }
  Surd normalization() const override { return z_; }
  Json to_json() const override;

  Surd cdf(const Surd& t) const;
  Surd density_at(const Surd& x, int side) const;  // side < 0 left, > 0 right
  const std::vector<Surd>& breakpoints() const { return breakpoints_; }
  const std::vector<Poly>& pieces() const { return pieces_; }
  bool piecewise_linear() const;  // all pieces have degree <= 1

 protected:
  Mass ball_mass_impl(const Point& x, const Surd& r) const override;

 private:
  std::vector<Surd> breakpoints_;
  std::vector<Poly> pieces_;       // density polynomials in x
  std::vector<Poly> antiderivs_;   // indefinite integrals of the pieces
  std::vector<Surd> cum_;          // cumulative mass at each breakpoint
  Surd z_, total_;
};

// ---------------------------------------------------------------------------
// Measure on the line symmetric about a center, defined by its radial CDF
// V(t) = mu(closed ball(center, t)): a self-similar profile near 0, optional
// piecewise-linear head knots above the profile window, and a cap (total).
class RadialMeasure final : public Measure {
 public:
  RadialMeasure(Surd center, SelfSimilarProfile profile,
                std::vector<std::pair<Surd, Surd>> head_knots, Surd support_radius,
                Surd total, std::string label = "");

  SpacePtr space() const override { return RealLineSpace::instance(); }
  std::string kind() const override { return "radial"; }
  bool support_contains(const Point& x) const override;
  SmallBallModel small_ball_model(const Point& x) const override;
  Mass total_mass() const override { return Mass(total_); }
  std::vector<Point> dominant_centers() const override { return {Point(center_)}; }
  Json to_json() const override;

  Surd radial_cdf(const Surd& t) const;  // exact for t >= 0
  const Surd& center() const { return center_; }
  const Surd& support_radius() const { return support_radius_; }
  const SelfSimilarProfile& profile() const { return profile_; }
  const std::string& label() const { return label_; }
  bool center_dominates_nearby(const Point& x) const override;
  const std::vector<std::pair<Surd, Surd>>& head() const { return head_; }
  // signed mass of [a, b] relative to the center
  Surd interval_mass(const Surd& a, const Surd& b) const;

 protected:
  Mass ball_mass_impl(const Point& x, const Surd& r) const override;

 private:
  // slope of V on the segment just below / above t, and segment margins
  struct LocalSlope {
    Surd below, above;     // slopes
    Surd margin;           // linearity margin around t
  };
  LocalSlope local_slope(const Surd& t) const;

  Surd center_;
  SelfSimilarProfile profile_;
  std::vector<std::pair<Surd, Surd>> head_;  // (t, V(t)) knots above profile top
  Surd support_radius_, total_;
  std::string label_;
};

// ---------------------------------------------------------------------------
// Cluster of atoms at center +/- beta for the breakpoints beta of a step
// profile (the cluster's radial CDF), on one or both sides of the center.
class RadialAtomCluster final : public Measure {
 public:
  enum class Sides { Both, Left, Right };
  RadialAtomCluster(Surd center, SelfSimilarProfile step_profile, Sides sides,
                    std::string label = "");

  SpacePtr space() const override { return RealLineSpace::instance(); }
  std::string kind() const override { return "radial_atom_cluster"; }
  bool support_contains(const Point& x) const override;
  SmallBallModel small_ball_model(const Point& x) const override;
  Mass total_mass() const override { return Mass(total_); }
  Json to_json() const override;

  const Surd& center() const { return center_; }
  const SelfSimilarProfile& radial_profile() const { return profile_; }
  Surd radial_cdf(const Surd& t) const;        // cluster mass within distance t
  Surd radial_cdf_below(const Surd& t) const;  // left limit
  // atoms with distance in [lo, hi] on the given side (+1 right, -1 left)
  Surd side_mass_between(const Surd& lo, const Surd& hi, int side) const;

 protected:
  Mass ball_mass_impl(const Point& x, const Surd& r) const override;

 private:
  Surd center_;
  SelfSimilarProfile profile_;  // step; V(t) for t in (0, top]
  Sides sides_;
  Surd total_;
  std::string label_;
};

// ---------------------------------------------------------------------------
// Finite sum of component measures on the real line plus a certified bound on
// the mass omitted by truncation.  Ball masses widen by [0, tail_bound].
class SumMeasure final : public Measure {
 public:
  SumMeasure(std::vector<MeasurePtr> components, Surd tail_bound = Surd(Rat(0)),
             Surd z = Surd(Rat(1)));

  SpacePtr space() const override { return RealLineSpace::instance(); }
  std::string kind() const override { return "sum"; }
  bool support_contains(const Point& x) const override;
  SmallBallModel small_ball_model(const Point& x) const override;
  Mass total_mass() const override;
  Surd normalization() const override { return z_; }
  std::vector<Point> dominant_centers() const override;
  Json to_json() const override;

  const std::vector<MeasurePtr>& components() const { return components_; }
  const Surd& tail_bound() const { return tail_bound_; }
  bool center_dominates_nearby(const Point& x) const override;

 protected:
  Mass ball_mass_impl(const Point& x, const Surd& r) const override;

 private:
  std::vector<MeasurePtr> components_;
  Surd tail_bound_, z_;
};

// ---------------------------------------------------------------------------
// Product-style measure on the two-level segment space; all ball masses have
// exact closed forms (cofinite index sums are geometric series).
class TwoLevelMeasure final : public Measure {
 public:
  explicit TwoLevelMeasure(Rat sigma, long enum_k = 8, long enum_m = 8);

  SpacePtr space() const override { return TwoLevelSpace::instance(); }
  std::string kind() const override { return "two_level"; }
  bool support_contains(const Point& x) const override;
  SmallBallModel small_ball_model(const Point& x) const override;
  Mass total_mass() const override { return Mass(Surd(Rat(1))); }
  std::optional<ModeAnalysis> mode_analysis(const Surd& r) const override;
  std::vector<Point> enumeration_points() const override;
  Json to_json() const override;

  const Rat& sigma() const { return sigma_; }
  Rat z() const { return z_; }
  Surd level_mass(long m) const;             // (2 sigma)^-m / Z
  Surd segment_mass(long k, long m) const;   // (2 sigma)^-m 2^-k / Z

 protected:
  Mass ball_mass_impl(const Point& x, const Surd& r) const override;

 private:
  Rat sigma_, z_;
  long enum_k_, enum_m_;
};

// ---------------------------------------------------------------------------
// Sum of two even polynomial bumps with certified support brackets; masses at
// the bump centers are exact polynomials, elsewhere certified intervals.
class TwoBranchPolyMeasure final : public Measure {
 public:
  struct Bump {
    Surd center;
    Poly density;       // even polynomial in y = x - center
    Surd w_exact;       // exact support radius when known, else 0
    Surd w_lo, w_hi;    // root bracket: density > 0 on [0, w_lo), < 0 at w_hi
  };
  TwoBranchPolyMeasure(Bump a, Bump b, Surd z);

  SpacePtr space() const override { return RealLineSpace::instance(); }
  std::string kind() const override { return "two_branch_poly"; }
  bool support_contains(const Point& x) const override;
  SmallBallModel small_ball_model(const Point& x) const override;
  Mass total_mass() const override;
  Surd normalization() const override { return z_; }
  std::vector<Point> dominant_centers() const override;
  Json to_json() const override;

  // exact branch RCDF at a bump center, valid while the ball stays clear of
  // the bump fringe and the other bump
  Poly branch_rcdf(size_t bump_index, Surd* valid_radius) const;
  bool center_dominates_nearby(const Point& x) const override;

 protected:
  Mass ball_mass_impl(const Point& x, const Surd& r) const override;

 private:
  Mass bump_interval_mass(const Bump& b, const Surd& a, const Surd& bnd) const;
  std::array<Bump, 2> bumps_;
  Surd z_;
};

// ---------------------------------------------------------------------------
// RCDF as a function object: exact evaluation plus an explicit segment view
// r in [r_lo, r_hi) -> value(r), built down to a configurable depth.
struct RcdfSegment {
  Surd r_lo, r_hi;
  Poly value;  // polynomial in r on [r_lo, r_hi)
};

class RcdfFunction {
 public:
  RcdfFunction(MeasurePtr mu, Point x, Surd r_max, std::vector<RcdfSegment> segments)
      : mu_(std::move(mu)), x_(std::move(x)), r_max_(std::move(r_max)),
        segments_(std::move(segments)) {}

  Mass operator()(const Surd& r) const { return mu_->ball_mass(x_, r); }
  const std::vector<RcdfSegment>& segments() const { return segments_; }
  const Surd& r_max() const { return r_max_; }
  const Point& center() const { return x_; }

 private:
  MeasurePtr mu_;
  Point x_;
  Surd r_max_;
  std::vector<RcdfSegment> segments_;
};

// Builds the RCDF of mu at x on (0, r_max]; depth bounds how many profile
// periods are expanded into explicit segments.
RcdfFunction rcdf(const MeasurePtr& mu, const Point& x, const Surd& r_max,
                  int depth = 24);

bool support_contains(const MeasurePtr& mu, const Point& x);

}  // namespace modelab
