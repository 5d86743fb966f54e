#include "measure.hpp"

#include <algorithm>

namespace modelab {

namespace {

const Surd kZero{Rat(0)};
const Surd kOne{Rat(1)};

Surd pow2(long e) { return Surd(rat_pow(Rat(2), e)); }

// A(x0 + s*r) - A(x0) as a polynomial in r, s = +/-1.
Poly shifted_delta(const Poly& A, const Surd& x0, int s) {
  const auto& a = A.coeff();
  if (a.empty()) return Poly();
  const size_t n = a.size();
  std::vector<Surd> out(n, kZero);
  std::vector<Surd> xpow(n, kOne);
  for (size_t j = 1; j < n; ++j) xpow[j] = xpow[j - 1] * x0;
  for (size_t j = 0; j < n; ++j) {
    if (a[j].sign() == 0) continue;
    Rat binom(1);
    for (size_t i = 0; i <= j; ++i) {
      Surd term = a[j] * Surd(binom) * xpow[j - i];
      if (s < 0 && i % 2 == 1) term = -term;
      out[i] += term;
      binom *= Rat(static_cast<long>(j - i));
      binom /= Rat(static_cast<long>(i + 1));
    }
  }
  out[0] -= A.eval(x0);
  return Poly(std::move(out));
}

Poly antiderivative(const Poly& p) {
  const auto& c = p.coeff();
  std::vector<Surd> out(c.size() + 1, kZero);
  for (size_t j = 0; j < c.size(); ++j)
    out[j + 1] = c[j] * Surd(Rat(1, static_cast<long>(j + 1)));
  return Poly(std::move(out));
}

// Newton interpolation through exact samples.
Poly interpolate(const std::vector<Surd>& xs, const std::vector<Surd>& ys) {
  const size_t n = xs.size();
  std::vector<Surd> dd = ys;  // divided differences in place
  for (size_t level = 1; level < n; ++level)
    for (size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
  Poly out;
  for (size_t i = n; i-- > 0;) {
    // out = out * (r - xs[i]) + dd[i]
    std::vector<Surd> c(out.coeff().size() + 1, kZero);
    for (size_t j = 0; j < out.coeff().size(); ++j) {
      c[j + 1] += out.coeff()[j];
      c[j] -= out.coeff()[j] * xs[i];
    }
    Poly shifted(std::move(c));
    out = shifted + Poly::constant(dd[i]);
  }
  return out;
}

}  // namespace

Mass Measure::ball_mass(const Point& x, const Surd& r) const {
  if (r.sign() < 0) throw UsageError("negative ball radius");
  if (!space()->contains(x))
    throw UsageError("point outside the measure's space: " + point_to_string(x));
  return ball_mass_impl(x, r);
}

bool support_contains(const MeasurePtr& mu, const Point& x) {
  return mu->support_contains(x);
}

// ---------------------------------------------------------------------------
// AtomicMeasure

AtomicMeasure::AtomicMeasure(SpacePtr space, std::vector<Atom> atoms, Surd z)
    : space_(std::move(space)), z_(std::move(z)), total_(Rat(0)) {
  if (atoms.empty()) throw UsageError("atomic measure needs at least one atom");
  if (z_.sign() <= 0) throw UsageError("normalization must be positive");
  for (auto& a : atoms) {
    if (a.mass.sign() <= 0) throw UsageError("atom masses must be positive");
    if (!space_->contains(a.point)) throw UsageError("atom outside space");
    bool merged = false;
    for (auto& b : atoms_) {
      if (point_equal(a.point, b.point)) {
        b.mass += a.mass;
        merged = true;
        break;
      }
    }
    if (!merged) atoms_.push_back(a);
  }
  for (const auto& a : atoms_) total_ += a.mass;
}

std::optional<size_t> AtomicMeasure::atom_index(const Point& x) const {
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (point_equal(atoms_[i].point, x)) return i;
  return std::nullopt;
}

Surd AtomicMeasure::min_gap_at(size_t i) const {
  Surd gap;
  bool first = true;
  for (size_t j = 0; j < atoms_.size(); ++j) {
    if (j == i) continue;
    Surd d = space_->distance(atoms_[i].point, atoms_[j].point);
    gap = first ? d : min(gap, d);
    first = false;
  }
  return first ? Surd(Rat(1)) : gap;
}

Mass AtomicMeasure::ball_mass_impl(const Point& x, const Surd& r) const {
  Surd sum(Rat(0));
  for (const auto& a : atoms_)
    if (space_->distance(x, a.point) <= r) sum += a.mass;
  return Mass(sum);
}

bool AtomicMeasure::support_contains(const Point& x) const {
  return atom_index(x).has_value();
}

SmallBallModel AtomicMeasure::small_ball_model(const Point& x) const {
  auto idx = atom_index(x);
  if (idx) {
    Surd gap = min_gap_at(*idx);
    return SmallBallModel::atom(atoms_[*idx].mass, true, gap / Surd(Rat(2)));
  }
  Surd gap;
  bool first = true;
  for (const auto& a : atoms_) {
    Surd d = space_->distance(x, a.point);
    gap = first ? d : min(gap, d);
    first = false;
  }
  if (gap.sign() == 0) return SmallBallModel::unavailable();
  return SmallBallModel::zero(gap / Surd(Rat(2)));
}

std::vector<Point> AtomicMeasure::enumeration_points() const {
  std::vector<Point> out;
  for (const auto& a : atoms_) out.push_back(a.point);
  return out;
}

// ---------------------------------------------------------------------------
// DoublySpacedGeometricMeasure

DoublySpacedGeometricMeasure::DoublySpacedGeometricMeasure(long enumeration_count)
    : enumeration_count_(enumeration_count) {
  if (enumeration_count_ < 2) throw UsageError("enumeration count too small");
}

Mass DoublySpacedGeometricMeasure::ball_mass_impl(const Point& x, const Surd& r) const {
  const long k = std::get<IndexPoint>(x).index;
  if (r >= Surd(Rat(2))) return Mass(kOne);
  if (r >= kOne) return Mass(kOne - pow2(-partner(k)));
  return Mass(pow2(-k));
}

bool DoublySpacedGeometricMeasure::support_contains(const Point& x) const {
  return space()->contains(x);
}

SmallBallModel DoublySpacedGeometricMeasure::small_ball_model(const Point& x) const {
  const long k = std::get<IndexPoint>(x).index;
  return SmallBallModel::atom(pow2(-k), true, Surd(Rat(1, 2)));
}

std::optional<ModeAnalysis> DoublySpacedGeometricMeasure::mode_analysis(
    const Surd& r) const {
  ModeAnalysis out;
  if (r >= Surd(Rat(2))) {
    out.M_r = kOne;
    out.attained = ModeAnalysis::Attained::Yes;
    out.all_points_maximise = true;
    for (long k = 1; k <= std::min<long>(enumeration_count_, 8); ++k)
      out.maximisers.push_back(IndexPoint{k});
    return out;
  }
  if (r >= kOne) {
    out.M_r = kOne;
    out.attained = ModeAnalysis::Attained::No;
    WitnessSequence w;
    w.point_at = [](long j) { return Point(IndexPoint{2 * j - 1}); };
    w.mass_at = [](long j) { return kOne - Surd(rat_pow(Rat(2), -2 * j)); };
    w.description = "odd points 2j-1 with masses 1 - 2^(-2j)";
    out.witness = std::move(w);
    return out;
  }
  out.M_r = Surd(Rat(1, 2));
  out.attained = ModeAnalysis::Attained::Yes;
  out.maximisers = {IndexPoint{1}};
  return out;
}

std::vector<Point> DoublySpacedGeometricMeasure::enumeration_points() const {
  std::vector<Point> out;
  for (long k = 1; k <= enumeration_count_; ++k) out.push_back(IndexPoint{k});
  return out;
}

// ---------------------------------------------------------------------------
// PiecewisePolyDensity

PiecewisePolyDensity::PiecewisePolyDensity(std::vector<Surd> breakpoints,
                                           std::vector<Poly> pieces, Surd z)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)),
      z_(std::move(z)), total_(Rat(0)) {
  if (breakpoints_.size() < 2 || pieces_.size() + 1 != breakpoints_.size())
    throw UsageError("density needs n+1 breakpoints for n pieces");
  if (z_.sign() <= 0) throw UsageError("normalization must be positive");
  for (size_t i = 0; i + 1 < breakpoints_.size(); ++i)
    if (breakpoints_[i] >= breakpoints_[i + 1])
      throw UsageError("breakpoints must strictly increase");
  antiderivs_.reserve(pieces_.size());
  cum_.reserve(breakpoints_.size());
  cum_.push_back(kZero);
  for (size_t i = 0; i < pieces_.size(); ++i) {
    antiderivs_.push_back(antiderivative(pieces_[i]));
    Surd inc = antiderivs_[i].eval(breakpoints_[i + 1]) -
               antiderivs_[i].eval(breakpoints_[i]);
    if (inc.sign() < 0) throw UsageError("density piece with negative mass");
    cum_.push_back(cum_.back() + inc);
  }
  total_ = cum_.back();
}

std::shared_ptr<PiecewisePolyDensity> PiecewisePolyDensity::piecewise_constant(
    std::vector<Surd> breakpoints, std::vector<Surd> values, Surd z) {
  std::vector<Poly> pieces;
  pieces.reserve(values.size());
  for (auto& v : values) {
    if (v.sign() < 0) throw UsageError("density values must be >= 0");
    pieces.push_back(Poly::constant(v));
  }
  return std::make_shared<PiecewisePolyDensity>(std::move(breakpoints),
                                                std::move(pieces), std::move(z));
}

Surd PiecewisePolyDensity::cdf(const Surd& t) const {
  if (t <= breakpoints_.front()) return kZero;
  if (t >= breakpoints_.back()) return total_;
  size_t i = 0;
  while (i + 2 < breakpoints_.size() && breakpoints_[i + 1] <= t) ++i;
  return cum_[i] + antiderivs_[i].eval(t) - antiderivs_[i].eval(breakpoints_[i]);
}

Surd PiecewisePolyDensity::density_at(const Surd& x, int side) const {
  if (x < breakpoints_.front() || x > breakpoints_.back()) return kZero;
  if (side < 0) {
    if (x <= breakpoints_.front()) return kZero;
    size_t i = 0;
    while (i + 1 < pieces_.size() && breakpoints_[i + 1] < x) ++i;
    return pieces_[i].eval(x);
  }
  if (x >= breakpoints_.back()) return kZero;
  size_t i = 0;
  while (i + 1 < pieces_.size() && breakpoints_[i + 1] <= x) ++i;
  return pieces_[i].eval(x);
}

Mass PiecewisePolyDensity::ball_mass_impl(const Point& x, const Surd& r) const {
  const Surd& c = std::get<Surd>(x);
  return Mass(cdf(c + r) - cdf(c - r));
}

bool PiecewisePolyDensity::support_contains(const Point& xp) const {
  const Surd& x = std::get<Surd>(xp);
  if (x < breakpoints_.front() || x > breakpoints_.back()) return false;
  for (size_t i = 0; i < pieces_.size(); ++i) {
    if (x >= breakpoints_[i] && x <= breakpoints_[i + 1] && !pieces_[i].zero())
      return true;
  }
  return false;
}

SmallBallModel PiecewisePolyDensity::small_ball_model(const Point& xp) const {
  const Surd& x = std::get<Surd>(xp);
  Surd margin;
  bool have_margin = false;
  for (const auto& b : breakpoints_) {
    Surd d = abs(x - b);
    if (d.sign() <= 0) continue;
    margin = have_margin ? min(margin, d) : d;
    have_margin = true;
  }
  if (!have_margin) margin = breakpoints_.back() - breakpoints_.front();
  Poly left, right;
  for (size_t i = 0; i < pieces_.size(); ++i) {
    if (x > breakpoints_[i] && x < breakpoints_[i + 1]) {
      left = pieces_[i];
      right = pieces_[i];
    }
    if (x == breakpoints_[i]) right = pieces_[i];
    if (x == breakpoints_[i + 1]) left = pieces_[i];
  }
  Poly F = shifted_delta(antiderivative(right), x, +1);
  F -= shifted_delta(antiderivative(left), x, -1);
  if (F.zero()) return SmallBallModel::zero(margin);
  return SmallBallModel::polynomial(std::move(F), margin);
}

bool PiecewisePolyDensity::piecewise_linear() const {
  for (const auto& p : pieces_)
    if (p.degree() > 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// RadialMeasure

RadialMeasure::RadialMeasure(Surd center, SelfSimilarProfile profile,
                             std::vector<std::pair<Surd, Surd>> head_knots,
                             Surd support_radius, Surd total, std::string label)
    : center_(std::move(center)), profile_(std::move(profile)),
      head_(std::move(head_knots)), support_radius_(std::move(support_radius)),
      total_(std::move(total)), label_(std::move(label)) {
  profile_.validate();
  if (profile_.step) throw UsageError("radial measure needs a continuous profile");
  if (support_radius_.sign() <= 0) throw UsageError("support radius must be positive");
  Surd prev_t = profile_.top();
  Surd prev_v = profile_.knots.front().second;
  for (const auto& [t, v] : head_) {
    if (t <= prev_t || v < prev_v) throw UsageError("head knots must increase");
    prev_t = t;
    prev_v = v;
  }
  if (support_radius_ < profile_.top()) {
    if (!head_.empty()) throw UsageError("truncated profile cannot carry head knots");
    if (profile_.eval(support_radius_) != total_)
      throw UsageError("total must equal the radial CDF at the truncation radius");
  } else {
    if (support_radius_ != prev_t)
      throw UsageError("support radius must be the last head knot");
    if (prev_v != total_) throw UsageError("head must reach the total mass");
  }
}

Surd RadialMeasure::radial_cdf(const Surd& t) const {
  if (t.sign() <= 0) return kZero;
  if (t >= support_radius_) return total_;
  if (t <= profile_.top()) return profile_.eval(t);
  Surd lo_t = profile_.top(), lo_v = profile_.knots.front().second;
  for (const auto& [ht, hv] : head_) {
    if (t <= ht) return lo_v + (t - lo_t) * (hv - lo_v) / (ht - lo_t);
    lo_t = ht;
    lo_v = hv;
  }
  return total_;
}

Surd RadialMeasure::interval_mass(const Surd& a, const Surd& b) const {
  if (a > b) throw UsageError("interval with a > b");
  auto H = [&](const Surd& t) {
    Surd d = t - center_;
    int s = d.sign();
    if (s == 0) return kZero;
    Surd v = radial_cdf(abs(d)) / Surd(Rat(2));
    return s > 0 ? v : -v;
  };
  return H(b) - H(a);
}

Mass RadialMeasure::ball_mass_impl(const Point& x, const Surd& r) const {
  const Surd& c = std::get<Surd>(x);
  return Mass(interval_mass(c - r, c + r));
}

// Breakpoints of the radial CDF in a neighbourhood of t > 0.
static void radial_breakpoints_near(const SelfSimilarProfile& pr,
                                    const std::vector<std::pair<Surd, Surd>>& head,
                                    const Surd& support_radius, const Surd& t,
                                    std::vector<Surd>* out) {
  out->push_back(support_radius);
  out->push_back(pr.top());
  for (const auto& [ht, hv] : head) out->push_back(ht);
  if (t <= pr.top()) {
    const Surd rho_v = pr.rho();
    Surd scale(Rat(1));
    int guard = 0;
    while (scale * pr.rho() * pr.top() >= t) {
      scale *= rho_v;
      if (++guard > 100000) throw Error("breakpoint scan did not terminate");
    }
    for (const Surd& s : {scale / rho_v, scale, scale * rho_v}) {
      if (s > kOne) continue;  // outside the profile window
      for (const auto& [b, g] : pr.knots) out->push_back(b * s);
    }
  }
}

RadialMeasure::LocalSlope RadialMeasure::local_slope(const Surd& t) const {
  if (t.sign() <= 0) throw UsageError("local slope needs t > 0");
  LocalSlope out{kZero, kZero, kOne};
  if (t > support_radius_) {
    out.margin = t - support_radius_;
    return out;
  }
  std::vector<Surd> bps;
  radial_breakpoints_near(profile_, head_, support_radius_, t, &bps);
  Surd lo_bp, hi_bp;
  bool have_lo = false, have_hi = false;
  for (const auto& b : bps) {
    if (b.sign() <= 0) continue;
    if (b < t && (!have_lo || b > lo_bp)) {
      lo_bp = b;
      have_lo = true;
    }
    if (b > t && (!have_hi || b < hi_bp)) {
      hi_bp = b;
      have_hi = true;
    }
  }
  if (!have_lo) throw Error("no radial breakpoint below t");
  auto chord = [&](const Surd& a, const Surd& b) {
    return (radial_cdf(b) - radial_cdf(a)) / (b - a);
  };
  out.below = chord(lo_bp, t);
  if (t >= support_radius_ || !have_hi) {
    out.above = kZero;
    out.margin = t - lo_bp;
  } else {
    out.above = chord(t, hi_bp);
    out.margin = min(t - lo_bp, hi_bp - t);
  }
  return out;
}

bool RadialMeasure::support_contains(const Point& xp) const {
  const Surd& x = std::get<Surd>(xp);
  Surd d = abs(x - center_);
  if (d.sign() == 0) return true;
  if (d > support_radius_) return false;
  auto s = local_slope(d);
  return s.below.sign() > 0 || s.above.sign() > 0;
}

SmallBallModel RadialMeasure::small_ball_model(const Point& xp) const {
  const Surd& x = std::get<Surd>(xp);
  Surd d = abs(x - center_);
  if (d.sign() == 0) {
    auto m = SmallBallModel::self_similar(profile_);
    m.valid_radius = min(profile_.top(), support_radius_);
    return m;
  }
  if (d > support_radius_) return SmallBallModel::zero(d - support_radius_);
  auto s = local_slope(d);
  Surd coeff = (s.below + s.above) / Surd(Rat(2));
  if (coeff.sign() == 0) return SmallBallModel::zero(s.margin);
  return SmallBallModel::polynomial(Poly({kZero, coeff}), s.margin);
}

bool RadialMeasure::center_dominates_nearby(const Point& xp) const {
  const Surd& x = std::get<Surd>(xp);
  if (x != center_) return false;
  // density must be nonincreasing in the distance from the center, i.e. the
  // radial CDF slopes must not increase toward larger radii (one period plus
  // the wrap into the next period suffices by self-similarity)
  const auto& kn = profile_.knots;
  std::vector<Surd> slopes;  // by decreasing radius
  for (size_t t = 0; t + 1 < kn.size(); ++t)
    slopes.push_back((kn[t].second - kn[t + 1].second) /
                     (kn[t].first - kn[t + 1].first));
  const Surd wrap_r = kn[0].first * profile_.rho();
  const Surd wrap_v = kn[0].second * profile_.kappa;
  slopes.push_back((kn.back().second - wrap_v) / (kn.back().first - wrap_r));
  for (size_t i = 0; i + 1 < slopes.size(); ++i)
    if (slopes[i] > slopes[i + 1]) return false;
  // next period's outermost slope
  if (slopes.back() > slopes.front() * profile_.kappa / profile_.rho()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// RadialAtomCluster

RadialAtomCluster::RadialAtomCluster(Surd center, SelfSimilarProfile step_profile,
                                     Sides sides, std::string label)
    : center_(std::move(center)), profile_(std::move(step_profile)), sides_(sides),
      label_(std::move(label)) {
  if (!profile_.step) throw UsageError("cluster profile must be a step profile");
  profile_.validate();
  total_ = profile_.knots.front().second;
}

Surd RadialAtomCluster::radial_cdf(const Surd& t) const {
  if (t.sign() <= 0) return kZero;
  if (t >= profile_.top()) return total_;
  return profile_.eval(t);
}

Surd RadialAtomCluster::radial_cdf_below(const Surd& t) const {
  if (t.sign() <= 0) return kZero;
  if (t > profile_.top()) return total_;
  return profile_.eval_below(t);
}

Surd RadialAtomCluster::side_mass_between(const Surd& lo, const Surd& hi,
                                          int side) const {
  const bool active = sides_ == Sides::Both || (side > 0 && sides_ == Sides::Right) ||
                      (side < 0 && sides_ == Sides::Left);
  if (!active) return kZero;
  if (hi.sign() <= 0 || hi < lo) return kZero;
  Surd lo_clip = max(lo, kZero);
  Surd both = radial_cdf(hi) -
              (lo_clip.sign() == 0 ? kZero : radial_cdf_below(lo_clip));
  if (sides_ == Sides::Both) both /= Surd(Rat(2));
  return both;
}

Mass RadialAtomCluster::ball_mass_impl(const Point& x, const Surd& r) const {
  const Surd& c = std::get<Surd>(x);
  Surd a = c - r, b = c + r;
  Surd out = side_mass_between(a - center_, b - center_, +1) +
             side_mass_between(center_ - b, center_ - a, -1);
  return Mass(out);
}

// Distances from d to the nearest cluster breakpoints (atom radii).
static Surd nearest_breakpoint_gap(const SelfSimilarProfile& pr, const Surd& d) {
  if (d > pr.top()) return d - pr.top();
  const Surd rho_v = pr.rho();
  Surd scale(Rat(1));
  int guard = 0;
  while (scale * rho_v * pr.top() >= d) {
    scale *= rho_v;
    if (++guard > 100000) throw Error("breakpoint scan did not terminate");
  }
  Surd best;
  bool have = false;
  for (const Surd& s : {scale / rho_v, scale, scale * rho_v}) {
    if (s > kOne) continue;
    for (const auto& [b, g] : pr.knots) {
      Surd gap = abs(b * s - d);
      if (gap.sign() == 0) continue;
      best = have ? min(best, gap) : gap;
      have = true;
    }
  }
  return have ? best : d;
}

bool RadialAtomCluster::support_contains(const Point& xp) const {
  const Surd& x = std::get<Surd>(xp);
  Surd d = x - center_;
  if (d.sign() == 0) return true;
  int side = d.sign();
  const bool active = sides_ == Sides::Both || (side > 0 && sides_ == Sides::Right) ||
                      (side < 0 && sides_ == Sides::Left);
  if (!active) return false;
  Surd ad = abs(d);
  if (ad > profile_.top()) return false;
  return radial_cdf(ad) > radial_cdf_below(ad);
}

SmallBallModel RadialAtomCluster::small_ball_model(const Point& xp) const {
  const Surd& x = std::get<Surd>(xp);
  Surd d = x - center_;
  if (d.sign() == 0) return SmallBallModel::self_similar(profile_);
  Surd ad = abs(d);
  if (support_contains(xp)) {
    Surd jump = radial_cdf(ad) - radial_cdf_below(ad);
    if (sides_ == Sides::Both) jump /= Surd(Rat(2));
    Surd gap = nearest_breakpoint_gap(profile_, ad);
    if (sides_ == Sides::Both) gap = min(gap, ad * Surd(Rat(2)));
    return SmallBallModel::atom(jump, true, gap / Surd(Rat(2)));
  }
  Surd gap = nearest_breakpoint_gap(profile_, ad);
  return SmallBallModel::zero(gap / Surd(Rat(2)));
}

// ---------------------------------------------------------------------------
// SumMeasure

SumMeasure::SumMeasure(std::vector<MeasurePtr> components, Surd tail_bound, Surd z)
    : components_(std::move(components)), tail_bound_(std::move(tail_bound)),
      z_(std::move(z)) {
  if (components_.empty()) throw UsageError("sum measure needs components");
  if (tail_bound_.sign() < 0) throw UsageError("tail bound must be >= 0");
  if (z_.sign() <= 0) throw UsageError("normalization must be positive");
  for (const auto& c : components_)
    if (c->space()->kind() != MetricSpace::Kind::RealLine)
      throw UsageError("sum components must live on the real line");
}

Mass SumMeasure::ball_mass_impl(const Point& x, const Surd& r) const {
  Mass out(kZero);
  for (const auto& c : components_) out += c->ball_mass(x, r);
  out.hi += tail_bound_;
  return out;
}

bool SumMeasure::support_contains(const Point& x) const {
  for (const auto& c : components_)
    if (c->support_contains(x)) return true;
  return false;
}

SmallBallModel SumMeasure::small_ball_model(const Point& x) const {
  if (tail_bound_.sign() > 0) return SmallBallModel::unavailable();
  std::vector<SmallBallModel> parts;
  parts.reserve(components_.size());
  for (const auto& c : components_) parts.push_back(c->small_ball_model(x));
  return sum_models(parts);
}

Mass SumMeasure::total_mass() const {
  Mass out(kZero);
  for (const auto& c : components_) out += c->total_mass();
  out.hi += tail_bound_;
  return out;
}

std::vector<Point> SumMeasure::dominant_centers() const {
  std::vector<Point> out;
  for (const auto& c : components_)
    for (const auto& p : c->dominant_centers()) out.push_back(p);
  return out;
}

bool SumMeasure::center_dominates_nearby(const Point& x) const {
  if (tail_bound_.sign() > 0) return false;
  const Measure* live = nullptr;
  for (const auto& c : components_) {
    auto m = c->small_ball_model(x);
    if (m.kind == SmallBallModel::Kind::Zero) continue;
    if (live) return false;  // two components carry mass near x
    live = c.get();
  }
  return live && live->center_dominates_nearby(x);
}

// ---------------------------------------------------------------------------
// TwoLevelMeasure

TwoLevelMeasure::TwoLevelMeasure(Rat sigma, long enum_k, long enum_m)
    : sigma_(std::move(sigma)), enum_k_(enum_k), enum_m_(enum_m) {
  if (!(sigma_ > Rat(1, 2) && sigma_ < Rat(1)))
    throw UsageError("sigma must lie in (1/2, 1)");
  z_ = Rat(1) / (2 * sigma_ - 1);
}

Surd TwoLevelMeasure::level_mass(long m) const {
  return Surd(rat_pow(2 * sigma_, -m) / z_);
}

Surd TwoLevelMeasure::segment_mass(long k, long m) const {
  return Surd(rat_pow(2 * sigma_, -m) * rat_pow(Rat(2), -k) / z_);
}

Mass TwoLevelMeasure::ball_mass_impl(const Point& xp, const Surd& r) const {
  const auto& x = std::get<TwoLevelPoint>(xp);
  const Surd h = TwoLevelSpace::half_width(x.k, x.m);
  Surd lo = max(x.xi - r, -h), hi = min(x.xi + r, h);
  Surd sum = Surd(rat_pow(sigma_, -x.m) / z_) * max(hi - lo, kZero);
  if (r >= pow2(1 - x.m)) {
    // every other segment of the level is within reach
    sum += level_mass(x.m) - segment_mass(x.k, x.m);
  } else if (r >= pow2(-x.m)) {
    const long p = DoublySpacedGeometricMeasure::partner(x.k);
    sum += level_mass(x.m) - segment_mass(x.k, x.m) - segment_mass(p, x.m);
  }
  if (r >= Surd(Rat(2))) sum += kOne - level_mass(x.m);
  return Mass(sum);
}

bool TwoLevelMeasure::support_contains(const Point& x) const {
  return space()->contains(x);
}

SmallBallModel TwoLevelMeasure::small_ball_model(const Point& xp) const {
  const auto& x = std::get<TwoLevelPoint>(xp);
  const Surd h = TwoLevelSpace::half_width(x.k, x.m);
  const Surd density = Surd(rat_pow(sigma_, -x.m) / z_);
  Surd left = h + x.xi, right = h - x.xi;
  Surd coeff = density * ((left.sign() > 0 ? kOne : kZero) +
                          (right.sign() > 0 ? kOne : kZero));
  Surd margin = pow2(-x.m) / Surd(Rat(2));
  if (left.sign() > 0) margin = min(margin, left);
  if (right.sign() > 0) margin = min(margin, right);
  return SmallBallModel::polynomial(Poly({kZero, coeff}), margin);
}

std::optional<ModeAnalysis> TwoLevelMeasure::mode_analysis(const Surd& r) const {
  if (r >= Surd(Rat(2))) {
    ModeAnalysis out;
    out.M_r = kOne;
    out.attained = ModeAnalysis::Attained::Yes;
    out.all_points_maximise = true;
    out.maximisers = {TwoLevelPoint{kZero, 1, 1}};
    return out;
  }
  if (r >= Surd(Rat(1, 8)) || r.sign() <= 0) return std::nullopt;
  long n = 1;
  while (!(pow2(-n) <= r && r < pow2(1 - n))) {
    ++n;
    if (n > 100000) throw Error("radius too small for mode analysis");
  }
  ModeAnalysis out;
  out.M_r = level_mass(n);
  out.attained = ModeAnalysis::Attained::No;
  WitnessSequence w;
  const Rat sig = sigma_, zz = z_;
  w.point_at = [n](long j) { return Point(TwoLevelPoint{kZero, 2 * j - 1, n}); };
  w.mass_at = [n, sig, zz](long j) {
    return Surd(rat_pow(2 * sig, -n) / zz) * (kOne - Surd(rat_pow(Rat(2), -2 * j)));
  };
  w.description = "(0, 2j-1, n) with masses (2 sigma)^-n (1 - 2^(-2j)) / Z";
  out.witness = std::move(w);
  return out;
}

std::vector<Point> TwoLevelMeasure::enumeration_points() const {
  std::vector<Point> out;
  for (long m = 1; m <= enum_m_; ++m)
    for (long k = 1; k <= enum_k_; ++k) out.push_back(TwoLevelPoint{kZero, k, m});
  return out;
}

// ---------------------------------------------------------------------------
// TwoBranchPolyMeasure

TwoBranchPolyMeasure::TwoBranchPolyMeasure(Bump a, Bump b, Surd z)
    : bumps_{std::move(a), std::move(b)}, z_(std::move(z)) {
  for (const auto& bump : bumps_) {
    if (bump.w_exact.sign() > 0) continue;
    if (!(bump.w_lo.sign() > 0 && bump.w_lo < bump.w_hi))
      throw UsageError("bump needs a positive root bracket");
    if (bump.density.eval(bump.w_lo).sign() <= 0 ||
        bump.density.eval(bump.w_hi).sign() >= 0)
      throw UsageError("bump bracket does not enclose the support root");
  }
  if (z_.sign() <= 0) throw UsageError("normalization must be positive");
}

Mass TwoBranchPolyMeasure::bump_interval_mass(const Bump& b, const Surd& lo,
                                              const Surd& hi) const {
  if (lo >= hi) return Mass(kZero);
  const Poly A = antiderivative(b.density);
  auto integral = [&](const Surd& u, const Surd& v) {
    if (u >= v) return kZero;
    return A.eval(v) - A.eval(u);
  };
  const Surd a_rel = lo - b.center, b_rel = hi - b.center;
  if (b.w_exact.sign() > 0) {
    return Mass(max(integral(max(a_rel, -b.w_exact), min(b_rel, b.w_exact)), kZero));
  }
  Surd lo_val = max(integral(max(a_rel, -b.w_hi), min(b_rel, b.w_hi)), kZero);
  Surd hi_val = max(integral(max(a_rel, -b.w_lo), min(b_rel, b.w_lo)), kZero);
  const Surd fringe_density = b.density.eval(b.w_lo);
  auto overlap = [&](const Surd& u, const Surd& v) {
    return max(min(b_rel, v) - max(a_rel, u), kZero);
  };
  hi_val += fringe_density * (overlap(b.w_lo, b.w_hi) + overlap(-b.w_hi, -b.w_lo));
  return Mass(lo_val, max(hi_val, lo_val));
}

Mass TwoBranchPolyMeasure::ball_mass_impl(const Point& x, const Surd& r) const {
  const Surd& c = std::get<Surd>(x);
  Mass out(kZero);
  for (const auto& b : bumps_) out += bump_interval_mass(b, c - r, c + r);
  return out;
}

bool TwoBranchPolyMeasure::support_contains(const Point& xp) const {
  const Surd& x = std::get<Surd>(xp);
  bool all_outside = true;
  for (const auto& b : bumps_) {
    Surd d = abs(x - b.center);
    Surd inner = b.w_exact.sign() > 0 ? b.w_exact : b.w_lo;
    Surd outer = b.w_exact.sign() > 0 ? b.w_exact : b.w_hi;
    if (d <= inner) return true;
    if (d < outer) all_outside = false;
  }
  if (all_outside) return false;
  throw UnsupportedError("support query falls inside a root bracket");
}

Poly TwoBranchPolyMeasure::branch_rcdf(size_t i, Surd* valid_radius) const {
  const Bump& own = bumps_[i];
  const Bump& other = bumps_[1 - i];
  const Poly A = antiderivative(own.density);
  std::vector<Surd> coeff(A.coeff().size(), kZero);
  for (size_t j = 0; j < A.coeff().size(); ++j)
    if (j % 2 == 1) coeff[j] = A.coeff()[j] * Surd(Rat(2));
  Surd own_margin = own.w_exact.sign() > 0 ? own.w_exact : own.w_lo;
  Surd other_outer = other.w_exact.sign() > 0 ? other.w_exact : other.w_hi;
  Surd gap = abs(own.center - other.center) - other_outer;
  if (valid_radius) *valid_radius = min(own_margin, gap);
  return Poly(std::move(coeff));
}

SmallBallModel TwoBranchPolyMeasure::small_ball_model(const Point& xp) const {
  const Surd& x = std::get<Surd>(xp);
  for (size_t i = 0; i < 2; ++i) {
    if (x == bumps_[i].center) {
      Surd valid;
      Poly F = branch_rcdf(i, &valid);
      return SmallBallModel::polynomial(std::move(F), valid);
    }
  }
  return SmallBallModel::unavailable();
}

Mass TwoBranchPolyMeasure::total_mass() const {
  Mass out(kZero);
  for (const auto& b : bumps_) {
    Surd outer = b.w_exact.sign() > 0 ? b.w_exact : b.w_hi;
    out += bump_interval_mass(b, b.center - outer, b.center + outer);
  }
  return out;
}

std::vector<Point> TwoBranchPolyMeasure::dominant_centers() const {
  return {Point(bumps_[0].center), Point(bumps_[1].center)};
}

bool TwoBranchPolyMeasure::center_dominates_nearby(const Point& xp) const {
  const Surd& x = std::get<Surd>(xp);
  for (const auto& b : bumps_) {
    if (x != b.center) continue;
    // derivative of the even density has only odd terms; all must be <= 0
    for (size_t j = 1; j < b.density.coeff().size(); ++j)
      if (j % 2 == 0 && (b.density.coeff()[j] * Surd(Rat(static_cast<long>(j)))).sign() > 0)
        return false;
    return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// RCDF function object.  Segment breakpoints come from the representation;
// the polynomial on each break-free piece is recovered by exact interpolation
// and double-checked at extra sample points.

namespace {

void collect_breaks(const MeasurePtr& mu, const Point& x, const Surd& r_max,
                    int depth, std::vector<Surd>* out) {
  auto add = [&](const Surd& b) {
    if (b.sign() > 0 && b < r_max) out->push_back(b);
  };
  if (auto am = std::dynamic_pointer_cast<const AtomicMeasure>(mu)) {
    for (const auto& a : am->atoms()) add(am->space()->distance(x, a.point));
  } else if (std::dynamic_pointer_cast<const DoublySpacedGeometricMeasure>(mu)) {
    add(kOne);
    add(Surd(Rat(2)));
  } else if (auto pd = std::dynamic_pointer_cast<const PiecewisePolyDensity>(mu)) {
    const Surd& c = std::get<Surd>(x);
    for (const auto& b : pd->breakpoints()) add(abs(c - b));
  } else if (auto rm = std::dynamic_pointer_cast<const RadialMeasure>(mu)) {
    const Surd off = abs(std::get<Surd>(x) - rm->center());
    const auto& pr = rm->profile();
    Surd scale(Rat(1));
    for (int d = 0; d < depth; ++d) {
      for (const auto& [b, g] : pr.knots) {
        add(abs(b * scale - off));
        add(b * scale + off);
      }
      scale *= pr.rho();
    }
    add(abs(rm->support_radius() - off));
    add(rm->support_radius() + off);
    add(off);
  } else if (auto cl = std::dynamic_pointer_cast<const RadialAtomCluster>(mu)) {
    const Surd off = abs(std::get<Surd>(x) - cl->center());
    Surd scale(Rat(1));
    for (int d = 0; d < depth; ++d) {
      for (const auto& [b, g] : cl->radial_profile().knots) {
        add(abs(b * scale - off));
        add(b * scale + off);
      }
      scale *= cl->radial_profile().rho();
    }
    add(off);
  } else if (auto sm = std::dynamic_pointer_cast<const SumMeasure>(mu)) {
    for (const auto& comp : sm->components())
      collect_breaks(comp, x, r_max, depth, out);
  } else if (auto tl = std::dynamic_pointer_cast<const TwoLevelMeasure>(mu)) {
    const auto& p = std::get<TwoLevelPoint>(x);
    const Surd h = TwoLevelSpace::half_width(p.k, p.m);
    add(h - p.xi);
    add(h + p.xi);
    add(pow2(-p.m));
    add(pow2(1 - p.m));
    add(Surd(Rat(2)));
  }
}

}  // namespace

RcdfFunction rcdf(const MeasurePtr& mu, const Point& x, const Surd& r_max, int depth) {
  if (r_max.sign() <= 0) throw UsageError("rcdf needs r_max > 0");
  std::vector<Surd> breaks;
  collect_breaks(mu, x, r_max, depth, &breaks);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks.push_back(r_max);

  std::vector<RcdfSegment> segments;
  Surd lo(Rat(0));
  bool ok = true;
  for (const Surd& hi : breaks) {
    if (hi <= lo) continue;
    // interpolate on the open segment; closed-ball steps sit at the left edge,
    // so sample strictly inside
    const int kNodes = 7, kChecks = 2;
    std::vector<Surd> xs, ys;
    for (int j = 1; j <= kNodes + kChecks; ++j) {
      Surd t = lo + (hi - lo) * Surd(Rat(j, kNodes + kChecks + 1));
      Mass v = mu->ball_mass(x, t);
      if (!v.exact()) {
        ok = false;
        break;
      }
      xs.push_back(t);
      ys.push_back(v.lo);
    }
    if (!ok) break;
    std::vector<Surd> fit_x(xs.begin(), xs.begin() + kNodes);
    std::vector<Surd> fit_y(ys.begin(), ys.begin() + kNodes);
    Poly p = interpolate(fit_x, fit_y);
    for (int j = kNodes; j < kNodes + kChecks; ++j) {
      if (p.eval(xs[j]) != ys[j]) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    segments.push_back(RcdfSegment{lo, hi, std::move(p)});
    lo = hi;
  }
  if (!ok) segments.clear();
  return RcdfFunction(mu, x, r_max, std::move(segments));
}

}  // namespace modelab
