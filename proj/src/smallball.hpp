#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "exact.hpp"

namespace modelab {

// Self-similar small-radius profile of an RCDF.  With rho = base^(-period),
//   F(beta_t * rho^j) = gamma_t * kappa^j   for t = 0..T-1 and j >= 0,
// where beta_0 > beta_1 > ... > beta_{T-1} > rho*beta_0 are the breakpoints
// of one period, and F is linear (or a right-continuous step) between
// consecutive breakpoints.  The profile describes F on (0, beta_0].
struct SelfSimilarProfile {
  Rat base;        // a > 1, rational
  long period = 1; // radius shrinks by a^(-period) per period
  Surd kappa;      // value shrinks by kappa per period; 0 < kappa
  std::vector<std::pair<Surd, Surd>> knots;  // (beta_t, gamma_t), beta descending
  bool step = false;
  // True when the profile reproduces the RCDF exactly on (0, beta_0]; false
  // when it is only the dominant part up to a relatively vanishing correction.
  bool exact_tail = true;

  Surd rho() const { return Surd(rat_pow(base, -period)); }
  const Surd& top() const { return knots.front().first; }
  Surd eval(const Surd& r) const;        // r in (0, top]
  Surd eval_below(const Surd& r) const;  // left limit at r, r in (0, top]
  void validate() const;
  // Re-express with a period that is a positive multiple of the current one.
  SelfSimilarProfile rescaled(long new_period) const;
  SelfSimilarProfile scaled_values(const Surd& c) const;
  SelfSimilarProfile shifted_down(long periods) const;  // multiply radii by rho^periods
};

// Exact model of the map r -> mu(closed ball(x, r)) near r = 0.
struct SmallBallModel {
  enum class Kind { Zero, Atom, Poly, Profile, Unavailable };
  Kind kind = Kind::Unavailable;
  Surd atom_mass;              // Atom: F(r) -> atom_mass > 0
  bool atom_isolated = false;  // Atom: F is constant on (0, valid_radius]
  Poly poly;                   // Poly: F(r) = poly(r) exactly on (0, valid_radius]
  std::optional<SelfSimilarProfile> profile;
  Surd valid_radius;
  bool exact_tail = true;  // model equals F exactly on (0, valid_radius]

  static SmallBallModel zero(const Surd& valid);
  static SmallBallModel atom(const Surd& mass, bool isolated, const Surd& valid);
  static SmallBallModel polynomial(Poly p, const Surd& valid);
  static SmallBallModel self_similar(SelfSimilarProfile pr);
  static SmallBallModel unavailable();
  bool usable() const { return kind != Kind::Unavailable; }
  Surd eval(const Surd& r) const;  // defined for Zero/Atom/Poly/Profile
};

struct ExactRatioLimits {
  LimitValue liminf, limsup;
  Surd window_hi;  // valid on (0, window_hi]
};

// liminf/limsup of F/G as r -> 0 for in-support models (kind != Zero).
// nullopt when the pair is outside the exactly decidable class.
std::optional<ExactRatioLimits> exact_ratio_limits(const SmallBallModel& F,
                                                   const SmallBallModel& G);

// Exact decisions about the sign pattern of G - F near 0:
//   eventually_le:  exists R > 0 with F(r) <= G(r) for all 0 < r < R
//   recurrently_le: exists a null sequence (r_n) with F(r_n) <= G(r_n)
// nullopt when the pair is not exactly decidable.
std::optional<bool> eventually_le(const SmallBallModel& F, const SmallBallModel& G);
std::optional<bool> recurrently_le(const SmallBallModel& F, const SmallBallModel& G);

// liminf/limsup of F/G along the radius subsequence base^-(start + j*step),
// j -> infinity.  Exact for the same model classes as exact_ratio_limits.
std::optional<ExactRatioLimits> grid_ratio_limits(const SmallBallModel& F,
                                                  const SmallBallModel& G,
                                                  const Rat& base, long start,
                                                  long step);

// The model with radii rescaled: returns r -> F(c * r).
SmallBallModel model_radius_scale(const SmallBallModel& F, const Surd& c);

// Pointwise maximum of the two models (used for M_r over a dominant set).
std::optional<SmallBallModel> model_max(const SmallBallModel& A, const SmallBallModel& B);

// Model of a finite sum of measures from the component models at one point.
SmallBallModel sum_models(const std::vector<SmallBallModel>& parts);

}  // namespace modelab
