#pragma once

#include "modes.hpp"
#include "order.hpp"

namespace modelab {

struct FactResult {
  std::string id;
  std::string description;
  bool pass = false;
  std::string expected, actual;
};

struct Fact {
  std::string id;
  std::string description;
  std::function<FactResult()> run;
};

struct GalleryItem {
  std::string id;
  std::string description;
  MeasurePtr measure;
  Json params;
  std::vector<Fact> facts;
  // certified bound on the mass omitted when the item truncates an infinite
  // construction; zero for exact items
  Surd truncation_tail{Rat(0)};
};

struct FactReport {
  std::string item_id;
  std::vector<FactResult> results;
  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

FactReport verify_expected_facts(const GalleryItem& item);

// --- constructors -----------------------------------------------------------

GalleryItem make_discrete_no_mode(long enumeration_count = 64);
GalleryItem make_two_level_no_mode(const Rat& sigma = Rat(3, 4));
GalleryItem make_bimodal_hiding();
GalleryItem make_oscillation_pair(const Rat& a = Rat(2));
GalleryItem make_rcdf_family(long k = 2, const Rat& m = Rat(1, 2), const Rat& a = Rat(2));
GalleryItem make_dense_antichain(long levels = 3);
GalleryItem make_countable_space_antichain(bool triangle_variant);
GalleryItem make_upward_closure_nonclosed();
GalleryItem make_upward_closure_unbounded(long bumps = 20);
GalleryItem make_appendix_atomic();
GalleryItem make_appendix_uniform();

std::vector<std::string> gallery_ids();
GalleryItem gallery_make(const std::string& id);

// --- building blocks --------------------------------------------------------

// Symmetric measure with the oscillatory radial CDF interpolating sqrt(r)
// through the even-index or odd-index knots a^-n; total mass = scale.
std::shared_ptr<RadialMeasure> oscillation_component(const Rat& a, bool even_knots,
                                                     const Surd& center,
                                                     const Surd& scale);

// Density with period-k flat/steep shells; radial CDF takes the value
// a^(1/2 - n/2) at knots a^-n with k | n and a^(-n/2) otherwise, truncated at
// total mass m.  The truncation radius is returned through *r_of_m.
std::shared_ptr<RadialMeasure> oscillatory_shell_family(long k, const Rat& m,
                                                        const Rat& a,
                                                        const Surd& center,
                                                        Surd* r_of_m = nullptr);

// Exact truncation radius: the smallest s with radial CDF equal to m.
Surd shell_family_truncation_radius(long k, const Rat& m, const Rat& a);

// --- dyadic and prime utilities ---------------------------------------------

struct DyadicPoint {
  long level = 1;  // l >= 1
  long index = 1;  // 1 <= i <= 2^(l-1)
  Rat value() const;  // (2i - 1) 2^-l
};

long nth_prime(long n);  // 1-based: nth_prime(1) = 2

// min over dyadic rationals of level <= l of |x - q|
Rat dyadic_irrationality_measure(const Rat& x, long level);

// Binary-expansion rule: digit(i) in {0,1} for i = 1.., evaluable to depth.
struct BinaryExpansion {
  std::function<int(long)> digit;
  long depth = 64;
  Rat prefix(long bits) const;  // sum of digit(i) 2^-i, i <= bits
};

// Interval bracketing the dyadic irrationality exponent from levels <= l_max.
std::pair<double, double> dyadic_irrationality_exponent_estimate(
    const BinaryExpansion& x, long l_max);
std::pair<double, double> dyadic_irrationality_exponent_estimate(const Rat& x,
                                                                 long l_max);

// Certified bound on the mass that levels above `levels` of the dense
// antichain construction can place inside a ball of radius r around a dyadic
// point of level <= levels.
Surd antichain_tail_in_ball(long levels, const Surd& r);

}  // namespace modelab
