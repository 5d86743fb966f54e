#pragma once

#include "order.hpp"

namespace modelab {

// Radii base^-(start + j*step), j = 0..count-1, decreasing to 0.
struct GeometricGrid {
  Rat base = Rat(2);
  long start = 1;
  long step = 1;
  long count = 40;
  Surd radius(long j) const { return Surd(rat_pow(base, -(start + j * step))); }
};

struct DomainDescriptor {
  enum class Kind { Auto, AllAtoms, Lattice1D, ExplicitSet };
  Kind kind = Kind::Auto;
  std::vector<Point> candidates;  // for ExplicitSet
  static DomainDescriptor explicit_set(std::vector<Point> pts) {
    return DomainDescriptor{Kind::ExplicitSet, std::move(pts)};
  }
};

struct ModeReport {
  Surd r;
  Mass M_r;
  enum class Attained { Yes, No, Unknown } attained = Attained::Unknown;
  std::vector<Point> maximisers;
  bool all_points_maximise = false;
  // prefix of a non-attainment witness family: strictly increasing masses
  std::vector<std::pair<Point, Surd>> witness_prefix;
  std::string note;
};

ModeReport sup_ball_mass(const MeasurePtr& mu, const Surd& r,
                         const DomainDescriptor& dom = {});
std::vector<Point> radius_r_modes(const MeasurePtr& mu, const Surd& r,
                                  const DomainDescriptor& dom = {});

struct AmfRecord {
  std::vector<Surd> radii;      // decreasing
  std::vector<Point> points;
  std::vector<Surd> eps;        // tolerance at each radius
  std::vector<Mass> achieved;   // mass(x_r, r) / M_r
};

using EpsRule = std::function<Surd(const Surd&)>;

AmfRecord build_amf(const MeasurePtr& mu, const EpsRule& eps,
                    const std::vector<Surd>& radii, const DomainDescriptor& dom = {});

struct StrongModeResult {
  LimitValue lower, upper;  // liminf/limsup of mass(x, r)/M_r over the grid tail
  bool exact = false;
  bool accepted = false;    // liminf >= 1
  Surd window;
};

// Dominant set: points whose pointwise-max RCDF equals M_r for small r; when
// empty the measure's own dominant_centers() are used.
StrongModeResult strong_mode_check(const MeasurePtr& mu, const Point& x,
                                   const std::optional<GeometricGrid>& grid = {},
                                   std::vector<Point> dominant = {});

struct SequenceSpec {
  GeometricGrid grid;
  Rat box_factor = Rat(2);  // search box radius = box_factor * r_n around x
};

struct GeneralisedVerdict {
  enum class Outcome { Accepted, Rejected, Unknown } outcome = Outcome::Unknown;
  LimitValue best_limsup;  // certified bound or attained value
  bool bound_is_exact = false;
  std::string note;
};

std::vector<GeneralisedVerdict> generalised_mode_check(
    const MeasurePtr& mu, const Point& x, const std::vector<SequenceSpec>& sequences,
    std::vector<Point> dominant = {});

// Candidates whose ball mass at every grid radius is at least the AMF point's;
// each returned point also passes strong_mode_check on the same grid.
std::vector<Point> amf_upward_intersection(const MeasurePtr& mu, const AmfRecord& amf,
                                           const std::vector<Point>& candidates,
                                           std::vector<Point> dominant = {});

// Finite-grid check of the nesting property: the radius-r upward closure of
// x_r within the candidate set shrinks as r decreases.
bool amf_nesting_check(const MeasurePtr& mu, const AmfRecord& amf,
                       const std::vector<Point>& candidates);

}  // namespace modelab
