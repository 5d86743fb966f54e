#include "seqspace.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "exact.hpp"

namespace modelab {
namespace seq {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Rng::next() {
  // xoshiro256++
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  // 53-bit mantissa in (0, 1)
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return mag * std::cos(2.0 * M_PI * u2);
}

double Rng::gamma(double shape) {
  if (shape <= 0) throw UsageError("gamma shape must be positive");
  if (shape < 1.0) {
    // boost to shape + 1 and scale back
    const double u = uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double ProductMeasure::ball_weight(int k) const {
  if (family == MarginalFamily::Besov) {
    // weights of the full-measure space X_p^t with t = s - (1 + eta) d / p
    return std::pow(static_cast<double>(k),
                    -(s / d + 0.5) + (2.0 + eta) / besov_p);
  }
  return scale ? scale(k) : 1.0;
}

double ProductMeasure::marginal_scale(int k) const {
  if (family == MarginalFamily::Besov)
    return std::pow(static_cast<double>(k), -(s / d + 0.5) + 1.0 / besov_p);
  return scale ? scale(k) : 1.0;
}

ProductMeasure ProductMeasure::gaussian(double p, std::function<double(int)> scale,
                                        int truncation_dim) {
  ProductMeasure mu;
  mu.family = MarginalFamily::Gaussian;
  mu.p = p;
  mu.scale = std::move(scale);
  mu.truncation_dim = truncation_dim;
  return mu;
}

ProductMeasure ProductMeasure::besov(double p, double s, double d, double eta,
                                     int truncation_dim) {
  ProductMeasure mu;
  mu.family = MarginalFamily::Besov;
  mu.p = p;
  mu.besov_p = p;
  mu.s = s;
  mu.d = d;
  mu.eta = eta;
  mu.truncation_dim = truncation_dim;
  return mu;
}

ProductMeasure ProductMeasure::cauchy(double p, std::function<double(int)> scale,
                                      int truncation_dim) {
  ProductMeasure mu;
  mu.family = MarginalFamily::Cauchy;
  mu.p = p;
  mu.scale = std::move(scale);
  mu.truncation_dim = truncation_dim;
  return mu;
}

std::vector<double> project(const std::vector<double>& x, int n) {
  if (n < 1) throw UsageError("projection dimension must be >= 1");
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n && i < static_cast<int>(x.size()); ++i) out[i] = x[i];
  return out;
}

double lp_distance_p(const std::vector<double>& a, const std::vector<double>& b,
                     const std::vector<double>& w, double p, int n) {
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    const double ai = i < static_cast<int>(a.size()) ? a[i] : 0.0;
    const double bi = i < static_cast<int>(b.size()) ? b[i] : 0.0;
    acc += std::pow(std::abs(ai - bi) / w[i], p);
  }
  return acc;
}

double weighted_norm(const std::vector<double>& x, const std::vector<double>& w,
                     double p) {
  double acc = 0;
  for (size_t i = 0; i < x.size(); ++i)
    acc += std::pow(std::abs(x[i]) / w[i], p);
  return std::pow(acc, 1.0 / p);
}

double sample_marginal(const ProductMeasure& mu, int k, Rng& rng) {
  switch (mu.family) {
    case MarginalFamily::Gaussian:
      return mu.marginal_scale(k) * rng.normal();
    case MarginalFamily::Cauchy:
      return mu.marginal_scale(k) * std::tan(M_PI * (rng.uniform() - 0.5));
    case MarginalFamily::Besov: {
      // density proportional to exp(-|y/g|^p): |y| = g * G^(1/p), G ~ Gamma(1/p)
      const double g = mu.marginal_scale(k);
      const double mag = g * std::pow(rng.gamma(1.0 / mu.besov_p), 1.0 / mu.besov_p);
      return rng.uniform() < 0.5 ? -mag : mag;
    }
  }
  throw Error("unreachable marginal family");
}

McEstimate mu_n_ball_mass(const ProductMeasure& mu, const std::vector<double>& x,
                          double r, int n, std::uint64_t budget, std::uint64_t seed) {
  if (n < 1 || n > mu.truncation_dim)
    throw UsageError("projection dimension outside the truncation range");
  if (r <= 0) throw UsageError("ball radius must be positive");
  if (budget < 100) throw UsageError("sampling budget too small; need >= 100");
  std::vector<double> w(n);
  for (int k = 1; k <= n; ++k) w[k - 1] = mu.ball_weight(k);
  const double rp = std::pow(r, mu.p);
  // fixed batching keeps the estimate reproducible and order-independent
  const std::uint64_t kBatch = 4096;
  std::uint64_t hits = 0, done = 0;
  std::uint64_t batch_index = 0;
  std::vector<double> y(n);
  while (done < budget) {
    const std::uint64_t m = std::min<std::uint64_t>(kBatch, budget - done);
    Rng rng(seed ^ (0x6a09e667f3bcc909ULL + batch_index * 0x9e3779b97f4a7c15ULL));
    for (std::uint64_t i = 0; i < m; ++i) {
      double acc = 0;
      for (int k = 1; k <= n; ++k) {
        const double yk = sample_marginal(mu, k, rng);
        const double xk = k - 1 < static_cast<int>(x.size()) ? x[k - 1] : 0.0;
        acc += std::pow(std::abs(yk - xk) / w[k - 1], mu.p);
      }
      if (acc <= rp) ++hits;
    }
    done += m;
    ++batch_index;
  }
  McEstimate est;
  est.count = budget;
  est.seed = seed;
  est.mean = static_cast<double>(hits) / static_cast<double>(budget);
  est.se = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(budget));
  return est;
}

double marginal_normalizer(double p, double scale) {
  static std::map<std::pair<double, double>, double> cache;
  const auto key = std::make_pair(p, scale);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  // adaptive Simpson on [0, cut] with exp(-(y/scale)^p) even in y
  std::function<double(double)> f = [&](double y) {
    return std::exp(-std::pow(y / scale, p));
  };
  double cut = scale * std::pow(60.0, 1.0 / p);  // integrand below exp(-60)
  std::function<double(double, double, double, double, double, int)> simpson =
      [&](double a, double b, double fa, double fb, double fm, int depth) -> double {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth > 40 || std::abs(left + right - whole) < 1e-13 * (1 + std::abs(whole)))
      return left + right;
    return simpson(a, m, fa, fm, flm, depth + 1) +
           simpson(m, b, fm, fb, frm, depth + 1);
  };
  const double integral =
      2.0 * simpson(0.0, cut, f(0.0), f(cut), f(0.5 * cut), 0);
  const double norm = 1.0 / integral;
  cache[key] = norm;
  return norm;
}

namespace {

double marginal_density(const ProductMeasure& mu, int k, double y) {
  switch (mu.family) {
    case MarginalFamily::Gaussian: {
      const double s = mu.marginal_scale(k);
      return std::exp(-0.5 * y * y / (s * s)) / (s * std::sqrt(2.0 * M_PI));
    }
    case MarginalFamily::Cauchy: {
      const double s = mu.marginal_scale(k);
      return s / (M_PI * (s * s + y * y));
    }
    case MarginalFamily::Besov: {
      const double g = mu.marginal_scale(k);
      return marginal_normalizer(mu.besov_p, g) *
             std::exp(-std::pow(std::abs(y) / g, mu.besov_p));
    }
  }
  return 0;
}

// recursive quadrature over the weighted-lp ball
double ball_quadrature(const ProductMeasure& mu, const std::vector<double>& x,
                       const std::vector<double>& w, double budget_p, int dim,
                       int n, std::vector<double>* point, double tol,
                       const std::function<double(const std::vector<double>&)>& pot) {
  const double xk = dim < static_cast<int>(x.size()) ? x[dim] : 0.0;
  const double reach = w[dim] * std::pow(budget_p, 1.0 / mu.p);
  const double a = xk - reach, b = xk + reach;
  std::function<double(double)> f = [&](double y) {
    (*point)[dim] = y;
    const double used = std::pow(std::abs(y - xk) / w[dim], mu.p);
    const double rem = budget_p - used;
    if (rem < 0) return 0.0;
    double inner;
    if (dim + 1 == n) {
      inner = 1.0;
      if (pot) inner = std::exp(-pot(*point));
    } else {
      inner = ball_quadrature(mu, x, w, rem, dim + 1, n, point, tol * 2, pot);
    }
    return marginal_density(mu, dim + 1, y) * inner;
  };
  std::function<double(double, double, double, double, double, int)> simpson =
      [&](double lo, double hi, double flo, double fhi, double fmid,
          int depth) -> double {
    const double m = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
    const double flm = f(lm), frm = f(rm);
    const double whole = (hi - lo) / 6.0 * (flo + 4 * fmid + fhi);
    const double left = (m - lo) / 6.0 * (flo + 4 * flm + fmid);
    const double right = (hi - m) / 6.0 * (fmid + 4 * frm + fhi);
    if (depth > 14 || std::abs(left + right - whole) < tol * (1 + std::abs(whole)))
      return left + right;
    return simpson(lo, m, flo, fmid, flm, depth + 1) +
           simpson(m, hi, fmid, fhi, frm, depth + 1);
  };
  return simpson(a, b, f(a), f(b), f(0.5 * (a + b)), 0);
}

}  // namespace

double mu_n_ball_mass_quadrature(
    const ProductMeasure& mu, const std::vector<double>& x, double r, int n,
    double tol, const std::function<double(const std::vector<double>&)>& potential) {
  if (n < 1 || n > 4) throw UsageError("quadrature mode supports n <= 4");
  std::vector<double> w(n);
  for (int k = 1; k <= n; ++k) w[k - 1] = mu.ball_weight(k);
  std::vector<double> point(n, 0.0);
  double mass = ball_quadrature(mu, x, w, std::pow(r, mu.p), 0, n, &point, tol,
                                potential);
  if (potential) {
    // normalise the reweighted density over the whole projected space: use a
    // large ball as the effective full space
    double z = ball_quadrature(mu, std::vector<double>(n, 0.0), w,
                               std::pow(64.0, mu.p), 0, n, &point, tol, potential);
    mass /= z;
  }
  return mass;
}

AndersonCheck anderson_ratio_check(const ProductMeasure& mu,
                                   const std::vector<double>& x, double r,
                                   std::uint64_t budget, std::uint64_t seed) {
  if (mu.family != MarginalFamily::Besov)
    throw UsageError("the explicit ratio bound applies to the Besov family");
  if (mu.besov_p < 1.0 || mu.besov_p > 2.0)
    throw UsageError("the explicit ratio bound needs p in [1, 2]");
  const int n = mu.truncation_dim;
  std::vector<double> w(n);
  for (int k = 1; k <= n; ++k) w[k - 1] = mu.ball_weight(k);
  AndersonCheck out;
  out.norm_x = weighted_norm(project(x, n), std::vector<double>(w.begin(), w.end()),
                             mu.p);
  if (!(r > 0 && r < out.norm_x))
    throw UsageError("precondition 0 < r < |x| violated");
  McEstimate num = mu_n_ball_mass(mu, x, r, n, budget, seed);
  McEstimate den = mu_n_ball_mass(mu, std::vector<double>(n, 0.0), r, n, budget,
                                  seed ^ 0x5851f42d4c957f2dULL);
  if (den.mean <= 0) throw Error("denominator ball mass estimated as zero");
  out.ratio = num.mean / den.mean;
  const double rel_num = num.mean > 0 ? num.se / num.mean : 0.0;
  const double rel_den = den.se / den.mean;
  out.se = out.ratio * std::sqrt(rel_num * rel_num + rel_den * rel_den);
  if (num.mean == 0) out.se = num.se / den.mean;  // conservative width at zero
  out.bound = std::exp(-0.5 * std::pow(out.norm_x - r, mu.p));
  out.pass = out.ratio <= out.bound + 3.0 * out.se;
  return out;
}

FiniteModeReport truncated_radius_r_mode_search(
    const ProductMeasure& mu, double r, int n, const std::vector<double>& box_lo,
    const std::vector<double>& box_hi, int grid_points_per_dim,
    std::uint64_t budget, std::uint64_t seed,
    const std::function<double(const std::vector<double>&)>& potential) {
  if (static_cast<int>(box_lo.size()) != n || static_cast<int>(box_hi.size()) != n)
    throw UsageError("box bounds must have dimension n");
  if (grid_points_per_dim < 1) throw UsageError("grid needs at least one point");
  const bool quadrature = n <= 4;
  FiniteModeReport rep;
  double spacing = 0;
  for (int d = 0; d < n; ++d)
    spacing = std::max(spacing, (box_hi[d] - box_lo[d]) /
                                    std::max(1, grid_points_per_dim - 1));
  rep.grid_spacing = spacing;
  rep.grid_flagged_coarse = spacing > r;

  std::vector<int> idx(n, 0);
  std::vector<double> center(n);
  bool first = true;
  std::uint64_t cell = 0;
  while (true) {
    for (int d = 0; d < n; ++d) {
      center[d] = grid_points_per_dim == 1
                      ? 0.5 * (box_lo[d] + box_hi[d])
                      : box_lo[d] + (box_hi[d] - box_lo[d]) * idx[d] /
                                        (grid_points_per_dim - 1);
    }
    double value;
    if (quadrature) {
      value = mu_n_ball_mass_quadrature(mu, center, r, n, 1e-8, potential);
    } else {
      value = mu_n_ball_mass(mu, center, r, n, budget, seed + cell).mean;
    }
    if (first || value > rep.value) {
      rep.value = value;
      rep.maximiser = center;
      first = false;
    }
    ++cell;
    int d = 0;
    while (d < n && ++idx[d] == grid_points_per_dim) {
      idx[d] = 0;
      ++d;
    }
    if (d == n) break;
  }
  return rep;
}

Json run_mc_experiment(const Json& config) {
  const std::string family = config.value("family", "gaussian");
  const double p = config.value("p", 2.0);
  const int trunc = config.value("truncation_dim", 64);
  ProductMeasure mu;
  if (family == "gaussian") {
    const double alpha = config.value("alpha", 1.0);
    mu = ProductMeasure::gaussian(p, [alpha](int) { return alpha; }, trunc);
  } else if (family == "besov") {
    mu = ProductMeasure::besov(p, config.value("s", 1.0), config.value("d", 1.0),
                               config.value("eta", 0.5), trunc);
  } else if (family == "cauchy") {
    const double gamma = config.value("gamma", 1.0);
    mu = ProductMeasure::cauchy(p, [gamma](int) { return gamma; }, trunc);
  } else {
    throw UsageError("unknown family: " + family);
  }
  std::vector<double> x = config.value("x", std::vector<double>{});
  const std::uint64_t budget = config.value("budget", std::uint64_t(100000));
  const std::uint64_t seed = config.value("seed", std::uint64_t(20240901));
  std::vector<double> radii = config.value("radii", std::vector<double>{1.0});
  std::vector<int> dims = config.value("n", std::vector<int>{1, 2, 4});
  const bool anderson = config.value("anderson", false);

  Json rows = Json::array();
  for (double r : radii) {
    for (int n : dims) {
      Json row;
      row["r"] = r;
      row["n"] = n;
      McEstimate est = mu_n_ball_mass(mu, x, r, n, budget, seed);
      row["estimate"] = est.mean;
      row["se"] = est.se;
      row["count"] = est.count;
      row["seed"] = est.seed;
      if (anderson && mu.family == MarginalFamily::Besov) {
        ProductMeasure at_n = mu;
        at_n.truncation_dim = n;
        auto chk = anderson_ratio_check(at_n, x, r, budget, seed);
        row["ratio"] = chk.ratio;
        row["bound"] = chk.bound;
        row["pass"] = chk.pass;
      }
      // report when heavy tails stretch the confidence interval too far
      const double tol = config.value("ci_tolerance", 0.05);
      row["ci_ok"] = est.se * 3.0 <= tol;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace seq
}  // namespace modelab
