#pragma once

#include <array>
#include <functional>

#include "measure.hpp"

namespace modelab {

// Raised when interval evidence is too wide to order two masses.
struct UndecidableError : Error {
  UndecidableError(const std::string& msg, Mass l, Mass r)
      : Error(msg), left(std::move(l)), right(std::move(r)) {}
  Mass left, right;
};

enum class Relation { StrictlyLess, StrictlyGreater, Equivalent, Incomparable };
std::string relation_name(Relation r);

struct RatioLimits {
  LimitValue lower, upper;  // liminf and limsup of mass(x,.)/mass(y,.)
  Surd window_lo, window_hi;
  bool exact = false;
};

struct ComparisonVerdict {
  Relation relation = Relation::Equivalent;
  std::optional<RatioLimits> limits;
  std::optional<std::pair<Mass, Mass>> masses;
};

struct CompareOptions {
  int depth = 64;            // sampling depth of the geometric fallback grid
  Rat fallback_base = Rat(2);
  bool allow_fallback = true;
};

// Fixed-radius comparison; total, never Incomparable.
ComparisonVerdict compare_at_radius(const MeasurePtr& mu, const Point& x,
                                    const Point& y, const Surd& r);

// liminf/limsup of the small-ball mass ratio; requires both points in support.
RatioLimits ratio_limits(const MeasurePtr& mu, const Point& x, const Point& y,
                         const CompareOptions& opts = {});

// The limiting preorder, including the off-support exceptional cases.
ComparisonVerdict compare_limit(const MeasurePtr& mu, const Point& x, const Point& y,
                                const CompareOptions& opts = {});

// x precedes y eventually (for all small r) / recurrently (along a null
// sequence); exact measure classes only.
bool compare_liminf_relation(const MeasurePtr& mu, const Point& x, const Point& y);
bool compare_limsup_relation(const MeasurePtr& mu, const Point& x, const Point& y);

using RelationFn = std::function<bool(const Point&, const Point&)>;
RelationFn relation_at_radius(const MeasurePtr& mu, const Surd& r);
RelationFn relation_limit(const MeasurePtr& mu, const CompareOptions& opts = {});
RelationFn relation_liminf(const MeasurePtr& mu);
RelationFn relation_limsup(const MeasurePtr& mu);

// All ordered triples (x, y, z) of distinct points with xRy and yRz but not xRz.
std::vector<std::array<Point, 3>> transitivity_audit(const RelationFn& rel,
                                                     const std::vector<Point>& points);

enum class OrderMode { AtRadius, Limit };

struct MaximalGreatest {
  std::vector<Point> maximal, greatest;
};
MaximalGreatest maximal_and_greatest(const MeasurePtr& mu,
                                     const std::vector<Point>& candidates,
                                     OrderMode mode, const Surd& r = Surd(Rat(0)),
                                     const CompareOptions& opts = {});

struct EssentialTotalityReport {
  bool pass = true;
  std::string failed_condition;  // "a", "b", or "c"; empty when passing
  std::vector<Point> witness;
  std::string note;
};

// Checks, over the given finite sets, that the chain is pairwise comparable,
// dominates the complement sample, and strictly dominates each complement
// point by some chain element.
EssentialTotalityReport essential_totality_check(const MeasurePtr& mu,
                                                 const std::vector<Point>& chain,
                                                 const std::vector<Point>& complement,
                                                 const CompareOptions& opts = {});

}  // namespace modelab
