#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace modelab {
namespace seq {

using Json = nlohmann::json;

enum class MarginalFamily { Gaussian, Besov, Cauchy };

// Countable product measure with independent marginals on a weighted lp space.
// Balls are taken in the norm with weights `ball_weight(k)`; samples are
// truncated at `truncation_dim` with the tail set to zero.
struct ProductMeasure {
  MarginalFamily family = MarginalFamily::Gaussian;
  double p = 2.0;                       // ball-space exponent
  double besov_p = 1.0, s = 1.0, d = 1.0, eta = 0.5;
  std::function<double(int)> scale;     // Gaussian std / Cauchy scale, 1-based
  int truncation_dim = 64;

  double ball_weight(int k) const;      // weight in the ball norm
  double marginal_scale(int k) const;   // scale of the k-th marginal density
  static ProductMeasure gaussian(double p, std::function<double(int)> scale,
                                 int truncation_dim);
  static ProductMeasure besov(double p, double s, double d, double eta,
                              int truncation_dim);
  static ProductMeasure cauchy(double p, std::function<double(int)> scale,
                               int truncation_dim);
};

struct McEstimate {
  double mean = 0;
  double se = 0;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};

// Deterministic generator: splitmix-seeded xoshiro-style stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();                 // (0, 1)
  double normal();                  // standard Gaussian (Box-Muller)
  double gamma(double shape);       // Marsaglia-Tsang, shape > 0
  std::uint64_t next();

 private:
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0;
};

std::vector<double> project(const std::vector<double>& x, int n);

double lp_distance_p(const std::vector<double>& a, const std::vector<double>& b,
                     const std::vector<double>& w, double p, int n);
double weighted_norm(const std::vector<double>& x, const std::vector<double>& w,
                     double p);

// draws one marginal coordinate of the product measure
double sample_marginal(const ProductMeasure& mu, int k, Rng& rng);

// Monte Carlo estimate of mu_n(ball(x, r)) = (mu o P_n^-1)(ball^n(P_n x, r)).
McEstimate mu_n_ball_mass(const ProductMeasure& mu, const std::vector<double>& x,
                          double r, int n, std::uint64_t budget, std::uint64_t seed);

// Quadrature estimate (n <= 4), sampler-independent; optional reweighting by
// exp(-potential(y)).
double mu_n_ball_mass_quadrature(
    const ProductMeasure& mu, const std::vector<double>& x, double r, int n,
    double tol = 1e-9,
    const std::function<double(const std::vector<double>&)>& potential = nullptr);

struct AndersonCheck {
  double ratio = 0, se = 0, bound = 0;
  double norm_x = 0;
  bool pass = false;
};

// Besov ratio bound exp(-(1/2)(|x| - r)^p) checked by Monte Carlo at the
// declared truncation dimension; x must satisfy 0 < r < |x| in the ball norm.
AndersonCheck anderson_ratio_check(const ProductMeasure& mu,
                                   const std::vector<double>& x, double r,
                                   std::uint64_t budget, std::uint64_t seed);

struct FiniteModeReport {
  std::vector<double> maximiser;
  double value = 0;
  double grid_spacing = 0;
  bool grid_flagged_coarse = false;
};

// Grid maximiser of the n-dimensional projected ball mass over a box.
FiniteModeReport truncated_radius_r_mode_search(
    const ProductMeasure& mu, double r, int n, const std::vector<double>& box_lo,
    const std::vector<double>& box_hi, int grid_points_per_dim,
    std::uint64_t budget, std::uint64_t seed,
    const std::function<double(const std::vector<double>&)>& potential = nullptr);

// Marginal normalization constant 1 / integral of exp(-|y/scale|^p), computed
// by adaptive quadrature and cached per (p, scale).
double marginal_normalizer(double p, double scale);

// Experiment configuration (JSON file) -> result rows.
Json run_mc_experiment(const Json& config);

}  // namespace seq
}  // namespace modelab
