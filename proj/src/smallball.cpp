#include "smallball.hpp"

#include <algorithm>
#include <numeric>

namespace modelab {

namespace {

Surd ratio_of(const Surd& n, const Surd& d) { return n / d; }

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

}  // namespace

Surd SelfSimilarProfile::eval(const Surd& r) const {
  if (r.sign() <= 0) throw UsageError("profile evaluated at r <= 0");
  if (r > top()) throw UsageError("profile evaluated beyond its window");
  Surd rr = r, scale(Rat(1));
  const Surd rho_v = rho();
  const Surd floor_v = rho_v * top();
  int guard = 0;
  while (rr <= floor_v) {
    rr /= rho_v;
    scale *= kappa;
    if (++guard > 100000) throw Error("profile evaluation did not terminate");
  }
  // rr in (rho*top, top]; locate the bracketing knots
  const size_t T = knots.size();
  size_t t = 0;
  while (t + 1 < T && knots[t + 1].first >= rr) ++t;
  // segment [lo, hi] with hi = knots[t], lo = knots[t+1] or the wrapped knot
  const Surd hi_r = knots[t].first;
  const Surd hi_v = knots[t].second;
  Surd lo_r, lo_v;
  if (t + 1 < T) {
    lo_r = knots[t + 1].first;
    lo_v = knots[t + 1].second;
  } else {
    lo_r = knots[0].first * rho_v;
    lo_v = knots[0].second * kappa;
  }
  Surd value;
  if (step) {
    value = rr >= hi_r ? hi_v : lo_v;
  } else if (rr == hi_r) {
    value = hi_v;
  } else {
    value = lo_v + (rr - lo_r) * (hi_v - lo_v) / (hi_r - lo_r);
  }
  return value * scale;
}

Surd SelfSimilarProfile::eval_below(const Surd& r) const {
  if (!step) return eval(r);
  // left limit of a step profile: value of the segment just below r
  Surd rr = r, scale(Rat(1));
  const Surd rho_v = rho();
  const Surd floor_v = rho_v * top();
  int guard = 0;
  while (rr <= floor_v) {
    rr /= rho_v;
    scale *= kappa;
    if (++guard > 100000) throw Error("profile evaluation did not terminate");
  }
  const size_t T = knots.size();
  for (size_t t = 0; t < T; ++t) {
    if (knots[t].first == rr) {
      // just below knot t the value is that of the next smaller knot
      if (t + 1 < T) return knots[t + 1].second * scale;
      return knots[0].second * kappa * scale;
    }
  }
  return eval(r);
}

void SelfSimilarProfile::validate() const {
  if (base <= 1) throw UsageError("profile base must be > 1");
  if (period < 1) throw UsageError("profile period must be >= 1");
  if (knots.empty()) throw UsageError("profile needs at least one knot");
  if (kappa.sign() <= 0) throw UsageError("profile kappa must be positive");
  const Surd floor_v = rho() * top();
  for (size_t t = 0; t < knots.size(); ++t) {
    if (knots[t].second.sign() <= 0) throw UsageError("profile values must be positive");
    if (t > 0 && knots[t].first >= knots[t - 1].first)
      throw UsageError("profile breakpoints must strictly decrease");
    if (knots[t].first <= floor_v)
      throw UsageError("profile breakpoints must stay within one period");
    if (t > 0 && knots[t].second > knots[t - 1].second)
      throw UsageError("profile values must be nondecreasing in radius");
  }
  if (knots[0].second * kappa > knots.back().second)
    throw UsageError("profile values must be nondecreasing across periods");
}

SelfSimilarProfile SelfSimilarProfile::rescaled(long new_period) const {
  if (new_period % period != 0) throw UsageError("rescale period must be a multiple");
  const long mult = new_period / period;
  SelfSimilarProfile out = *this;
  out.period = new_period;
  out.kappa = kappa.pow(mult);
  out.knots.clear();
  Surd rmul(Rat(1)), vmul(Rat(1));
  const Surd rho_old = rho();
  for (long i = 0; i < mult; ++i) {
    for (const auto& [b, g] : knots) out.knots.emplace_back(b * rmul, g * vmul);
    rmul *= rho_old;
    vmul *= kappa;
  }
  return out;
}

SelfSimilarProfile SelfSimilarProfile::scaled_values(const Surd& c) const {
  SelfSimilarProfile out = *this;
  for (auto& [b, g] : out.knots) g *= c;
  return out;
}

SelfSimilarProfile SelfSimilarProfile::shifted_down(long periods) const {
  SelfSimilarProfile out = *this;
  const Surd rmul = rho().pow(periods);
  const Surd vmul = kappa.pow(periods);
  for (auto& [b, g] : out.knots) {
    b *= rmul;
    g *= vmul;
  }
  return out;
}

SmallBallModel SmallBallModel::zero(const Surd& valid) {
  SmallBallModel m;
  m.kind = Kind::Zero;
  m.valid_radius = valid;
  return m;
}

SmallBallModel SmallBallModel::atom(const Surd& mass, bool isolated, const Surd& valid) {
  SmallBallModel m;
  m.kind = Kind::Atom;
  m.atom_mass = mass;
  m.atom_isolated = isolated;
  m.valid_radius = valid;
  return m;
}

SmallBallModel SmallBallModel::polynomial(Poly p, const Surd& valid) {
  SmallBallModel m;
  m.kind = Kind::Poly;
  m.poly = std::move(p);
  m.valid_radius = valid;
  return m;
}

SmallBallModel SmallBallModel::self_similar(SelfSimilarProfile pr) {
  pr.validate();
  SmallBallModel m;
  m.kind = Kind::Profile;
  m.valid_radius = pr.top();
  m.exact_tail = pr.exact_tail;
  m.profile = std::move(pr);
  return m;
}

SmallBallModel SmallBallModel::unavailable() { return SmallBallModel{}; }

Surd SmallBallModel::eval(const Surd& r) const {
  switch (kind) {
    case Kind::Zero:
      return Surd(Rat(0));
    case Kind::Atom:
      return atom_mass;
    case Kind::Poly:
      return poly.eval(r);
    case Kind::Profile:
      return profile->eval(r);
    default:
      throw UnsupportedError("no model to evaluate");
  }
}

namespace {

enum class Decay { FSlower, GSlower, Equal };

struct ProfileView {
  SelfSimilarProfile pr;
  bool leading_only = false;  // profile is the leading part of a polynomial
};

// The polynomial's leading linear term c*r as a profile over the given grid.
std::optional<ProfileView> poly_as_profile(const Poly& p, const Rat& base, long period,
                                           const Surd& window) {
  auto low = p.lowest_term();
  if (!low || low->first != 1) return std::nullopt;
  SelfSimilarProfile pr;
  pr.base = base;
  pr.period = period;
  pr.kappa = Surd(rat_pow(base, -period));
  pr.knots = {{window, low->second * window}};
  pr.step = false;
  pr.exact_tail = p.degree() == 1;
  ProfileView v{std::move(pr), p.degree() != 1};
  return v;
}

std::optional<Decay> compare_decay(const SelfSimilarProfile& A, const SelfSimilarProfile& B) {
  if (A.base != B.base) return std::nullopt;
  const long L = lcm_long(A.period, B.period);
  const Surd ka = A.kappa.pow(L / A.period);
  const Surd kb = B.kappa.pow(L / B.period);
  if (ka == kb) return Decay::Equal;
  return ka > kb ? Decay::FSlower : Decay::GSlower;
}

struct Merged {
  std::vector<Surd> attained;  // F/G at radii hit infinitely often
  std::vector<Surd> limits;    // one-sided limits, approached but maybe not attained
  Surd window;
  bool boundary_exact;  // candidates describe F/G exactly (both tails exact)
};

// Requires equal decay and a common base.
std::optional<Merged> merge_profiles(const SelfSimilarProfile& A0,
                                     const SelfSimilarProfile& B0,
                                     bool exact_a, bool exact_b) {
  if (A0.base != B0.base) return std::nullopt;
  const long L = lcm_long(A0.period, B0.period);
  SelfSimilarProfile A = A0.period == L ? A0 : A0.rescaled(L);
  SelfSimilarProfile B = B0.period == L ? B0 : B0.rescaled(L);
  if (A.kappa != B.kappa) return std::nullopt;
  const Surd W = min(A.top(), B.top());
  const Surd rho_v = A.rho();
  const Surd floor_v = rho_v * W;
  auto normalize = [&](Surd b) {
    int guard = 0;
    while (b > W) {
      b *= rho_v;
      if (++guard > 100000) throw Error("profile merge did not terminate");
    }
    while (b <= floor_v) {
      b /= rho_v;
      if (++guard > 100000) throw Error("profile merge did not terminate");
    }
    return b;
  };
  std::vector<Surd> pts;
  for (const auto& [b, g] : A.knots) pts.push_back(normalize(b));
  for (const auto& [b, g] : B.knots) pts.push_back(normalize(b));
  pts.push_back(W);
  std::sort(pts.begin(), pts.end(), [](const Surd& x, const Surd& y) { return x > y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Merged out;
  out.window = W;
  out.boundary_exact = exact_a && exact_b;
  const size_t M = pts.size();
  for (size_t s = 0; s < M; ++s) {
    const Surd v = pts[s];
    const Surd u = (s + 1 < M) ? pts[s + 1] : rho_v * pts[0];
    out.attained.push_back(ratio_of(A.eval(u), B.eval(u)));
    const Surd fa = A.step ? A.eval(u) : A.eval(v);
    const Surd fb = B.step ? B.eval(u) : B.eval(v);
    out.limits.push_back(ratio_of(fa, fb));
  }
  return out;
}

struct PairAnalysis {
  LimitValue liminf, limsup;
  Surd window;
  // set when liminf/limsup come from merged profile candidates
  std::optional<Merged> merged;
  // polynomial difference analysis available (both sides exact polynomials)
  std::optional<Poly> poly_diff;  // G - F
  bool atoms = false;
  bool atom_isolated_both = false;
  Surd atom_f, atom_g;
};

std::optional<PairAnalysis> analyze(const SmallBallModel& F, const SmallBallModel& G) {
  using K = SmallBallModel::Kind;
  if (!F.usable() || !G.usable() || F.kind == K::Zero || G.kind == K::Zero)
    return std::nullopt;
  PairAnalysis out;
  out.window = min(F.valid_radius, G.valid_radius);

  if (F.kind == K::Atom || G.kind == K::Atom) {
    if (F.kind == K::Atom && G.kind == K::Atom) {
      const Surd r = F.atom_mass / G.atom_mass;
      out.liminf = out.limsup = LimitValue::of(r);
      out.atoms = true;
      out.atom_isolated_both = F.atom_isolated && G.atom_isolated;
      out.atom_f = F.atom_mass;
      out.atom_g = G.atom_mass;
    } else if (F.kind == K::Atom) {
      out.liminf = out.limsup = LimitValue::inf();
      out.atoms = true;
    } else {
      out.liminf = out.limsup = LimitValue::of(Surd(Rat(0)));
      out.atoms = true;
    }
    return out;
  }

  if (F.kind == K::Poly && G.kind == K::Poly) {
    auto lf = F.poly.lowest_term(), lg = G.poly.lowest_term();
    if (!lf || !lg) return std::nullopt;  // zero polynomial means off support
    if (lf->first < lg->first) {
      out.liminf = out.limsup = LimitValue::inf();
    } else if (lf->first > lg->first) {
      out.liminf = out.limsup = LimitValue::of(Surd(Rat(0)));
    } else {
      out.liminf = out.limsup = LimitValue::of(lf->second / lg->second);
    }
    if (F.exact_tail && G.exact_tail) out.poly_diff = G.poly - F.poly;
    return out;
  }

  // at least one profile; express the other side over the same grid
  std::optional<ProfileView> pf, pg;
  if (F.kind == K::Profile) {
    pf = ProfileView{*F.profile, false};
    pf->pr.exact_tail = F.exact_tail;
  }
  if (G.kind == K::Profile) {
    pg = ProfileView{*G.profile, false};
    pg->pr.exact_tail = G.exact_tail;
  }
  if (F.kind == K::Poly) {
    auto lf = F.poly.lowest_term();
    if (!lf) return std::nullopt;
    const auto& gp = *G.profile;
    // decay of r^e against the profile, per common period
    const Surd poly_kappa = Surd(rat_pow(gp.base, -static_cast<long>(lf->first) * gp.period));
    if (gp.kappa != poly_kappa) {
      const bool f_slower = poly_kappa > gp.kappa;
      out.liminf = out.limsup = f_slower ? LimitValue::inf() : LimitValue::of(Surd(Rat(0)));
      return out;
    }
    pf = poly_as_profile(F.poly, gp.base, gp.period, min(out.window, gp.top()));
    if (!pf) return std::nullopt;
    if (!F.exact_tail) pf->pr.exact_tail = false;
  }
  if (G.kind == K::Poly) {
    auto lg = G.poly.lowest_term();
    if (!lg) return std::nullopt;
    const auto& fp = *F.profile;
    const Surd poly_kappa = Surd(rat_pow(fp.base, -static_cast<long>(lg->first) * fp.period));
    if (fp.kappa != poly_kappa) {
      const bool f_slower = fp.kappa > poly_kappa;
      out.liminf = out.limsup = f_slower ? LimitValue::inf() : LimitValue::of(Surd(Rat(0)));
      return out;
    }
    pg = poly_as_profile(G.poly, fp.base, fp.period, min(out.window, fp.top()));
    if (!pg) return std::nullopt;
    if (!G.exact_tail) pg->pr.exact_tail = false;
  }
  if (!pf || !pg) return std::nullopt;

  auto decay = compare_decay(pf->pr, pg->pr);
  if (!decay) return std::nullopt;
  if (*decay != Decay::Equal) {
    out.liminf = out.limsup =
        *decay == Decay::FSlower ? LimitValue::inf() : LimitValue::of(Surd(Rat(0)));
    return out;
  }
  auto merged = merge_profiles(pf->pr, pg->pr, pf->pr.exact_tail, pg->pr.exact_tail);
  if (!merged) return std::nullopt;
  Surd lo = merged->attained.front(), hi = merged->attained.front();
  for (const auto& v : merged->attained) {
    lo = min(lo, v);
    hi = max(hi, v);
  }
  for (const auto& v : merged->limits) {
    lo = min(lo, v);
    hi = max(hi, v);
  }
  out.liminf = LimitValue::of(lo);
  out.limsup = LimitValue::of(hi);
  out.window = min(out.window, merged->window);
  out.merged = std::move(merged);
  return out;
}

}  // namespace

std::optional<ExactRatioLimits> exact_ratio_limits(const SmallBallModel& F,
                                                   const SmallBallModel& G) {
  auto a = analyze(F, G);
  if (!a) return std::nullopt;
  return ExactRatioLimits{a->liminf, a->limsup, a->window};
}

std::optional<ExactRatioLimits> grid_ratio_limits(const SmallBallModel& F,
                                                  const SmallBallModel& G,
                                                  const Rat& base, long start,
                                                  long step) {
  using K = SmallBallModel::Kind;
  if (step <= 0) throw UsageError("grid step must be positive");
  auto a = analyze(F, G);
  if (!a) return std::nullopt;
  // single-limit cases are unchanged by subsampling
  if (a->liminf == a->limsup || a->atoms)
    return ExactRatioLimits{a->liminf, a->limsup, a->window};

  // oscillatory case: both sides behave as profiles over a common grid
  auto as_profile = [&](const SmallBallModel& M,
                        const SelfSimilarProfile& other) -> std::optional<SelfSimilarProfile> {
    if (M.kind == K::Profile) return *M.profile;
    if (M.kind == K::Poly) {
      auto pv = poly_as_profile(M.poly, other.base, other.period, other.top());
      if (!pv) return std::nullopt;
      return pv->pr;
    }
    return std::nullopt;
  };
  const SelfSimilarProfile* ref =
      F.kind == K::Profile ? &*F.profile : (G.kind == K::Profile ? &*G.profile : nullptr);
  if (!ref) return std::nullopt;
  if (ref->base != base) return std::nullopt;
  auto pf = as_profile(F, *ref), pg = as_profile(G, *ref);
  if (!pf || !pg || pf->base != base || pg->base != base) return std::nullopt;

  const long period = std::lcm(std::lcm(pf->period, pg->period), step);
  const long cycle = period / step;
  // first grid index deep enough that both profiles are in their windows
  long n = start;
  const Surd one(Rat(1));
  auto radius_at = [&](long idx) { return Surd(rat_pow(base, -idx)); };
  const Surd win = min(pf->top(), pg->top());
  int guard = 0;
  while (radius_at(n) > win) {
    n += step;
    if (++guard > 100000) throw Error("grid alignment did not terminate");
  }
  Surd lo, hi;
  for (long j = 0; j < cycle; ++j) {
    const Surd r = radius_at(n + j * step);
    const Surd v = pf->eval(r) / pg->eval(r);
    if (j == 0) {
      lo = hi = v;
    } else {
      lo = min(lo, v);
      hi = max(hi, v);
    }
  }
  return ExactRatioLimits{LimitValue::of(lo), LimitValue::of(hi),
                          min(a->window, radius_at(n))};
}

SmallBallModel model_radius_scale(const SmallBallModel& F, const Surd& c) {
  if (c.sign() <= 0) throw UsageError("radius scale must be positive");
  SmallBallModel out = F;
  out.valid_radius = F.valid_radius / c;
  switch (F.kind) {
    case SmallBallModel::Kind::Poly: {
      std::vector<Surd> coeff = F.poly.coeff();
      Surd p(Rat(1));
      for (auto& v : coeff) {
        v *= p;
        p *= c;
      }
      out.poly = Poly(std::move(coeff));
      return out;
    }
    case SmallBallModel::Kind::Profile: {
      for (auto& [b, g] : out.profile->knots) b /= c;
      return out;
    }
    default:
      return out;  // Zero/Atom are scale invariant
  }
}

std::optional<bool> eventually_le(const SmallBallModel& F, const SmallBallModel& G) {
  using K = SmallBallModel::Kind;
  if (F.kind == K::Zero) return true;   // F vanishes near 0
  if (G.kind == K::Zero) {
    if (F.kind == K::Zero) return true;
    return F.usable() ? std::optional<bool>(false) : std::nullopt;
  }
  auto a = analyze(F, G);
  if (!a) return std::nullopt;
  if (a->atoms) {
    if (a->liminf.infinite) return false;
    if (a->limsup.infinite) return std::nullopt;  // unreachable
    if (a->limsup.value < Surd(Rat(1))) return true;
    if (a->liminf.value > Surd(Rat(1))) return false;
    // equal atom masses
    return a->atom_isolated_both ? std::optional<bool>(true) : std::nullopt;
  }
  if (a->poly_diff) {
    auto low = a->poly_diff->lowest_term();
    if (!low) return true;  // identical polynomials
    return low->second.sign() > 0;
  }
  const Surd one(Rat(1));
  if (a->limsup.infinite) return false;
  if (a->limsup.value < one) return true;
  if (a->limsup.value > one) return false;
  // limsup == 1: all candidate values <= 1; sound only for exact tails
  if (a->merged && a->merged->boundary_exact) return true;
  return std::nullopt;
}

std::optional<bool> recurrently_le(const SmallBallModel& F, const SmallBallModel& G) {
  using K = SmallBallModel::Kind;
  if (F.kind == K::Zero) return true;
  if (G.kind == K::Zero) {
    if (F.kind == K::Zero) return true;
    return F.usable() ? std::optional<bool>(false) : std::nullopt;
  }
  auto a = analyze(F, G);
  if (!a) return std::nullopt;
  const Surd one(Rat(1));
  if (a->atoms) {
    if (a->liminf.infinite) return false;
    if (a->liminf.value < one) return true;
    if (a->liminf.value > one) return false;
    return a->atom_isolated_both ? std::optional<bool>(true) : std::nullopt;
  }
  if (a->poly_diff) {
    auto low = a->poly_diff->lowest_term();
    if (!low) return true;
    return low->second.sign() > 0;
  }
  if (a->liminf.infinite) return false;
  if (a->liminf.value < one) return true;
  if (a->liminf.value > one) return false;
  // liminf == 1: need an attained candidate equal to 1 or a limit below 1
  if (a->merged && a->merged->boundary_exact) {
    for (const auto& v : a->merged->attained)
      if (v <= one) return true;
    for (const auto& v : a->merged->limits)
      if (v < one) return true;
    return false;
  }
  return std::nullopt;
}

std::optional<SmallBallModel> model_max(const SmallBallModel& A, const SmallBallModel& B) {
  using K = SmallBallModel::Kind;
  if (!A.usable() || !B.usable()) return std::nullopt;
  if (A.kind == K::Zero) return B;
  if (B.kind == K::Zero) return A;
  const Surd window = min(A.valid_radius, B.valid_radius);

  if (A.kind == K::Poly && B.kind == K::Poly) {
    Poly d = A.poly - B.poly;
    auto low = d.lowest_term();
    if (!low) return A;
    // dominance over the whole window is certified when all coefficients of
    // the difference share one sign
    bool all_nonneg = true, all_nonpos = true;
    for (const auto& c : d.coeff()) {
      if (c.sign() < 0) all_nonneg = false;
      if (c.sign() > 0) all_nonpos = false;
    }
    if (low->second.sign() > 0 && all_nonneg) {
      SmallBallModel out = A;
      out.valid_radius = window;
      return out;
    }
    if (low->second.sign() < 0 && all_nonpos) {
      SmallBallModel out = B;
      out.valid_radius = window;
      return out;
    }
    return std::nullopt;
  }

  if (A.kind == K::Profile && B.kind == K::Profile) {
    auto decay = compare_decay(*A.profile, *B.profile);
    if (!decay) return std::nullopt;
    if (*decay != Decay::Equal) {
      SmallBallModel out = (*decay == Decay::FSlower) ? A : B;
      out.exact_tail = false;
      out.valid_radius = window;
      if (out.profile) out.profile->exact_tail = false;
      return out;
    }
    if (A.profile->step != B.profile->step) return std::nullopt;
    const long L = lcm_long(A.profile->period, B.profile->period);
    SelfSimilarProfile PA = A.profile->period == L ? *A.profile : A.profile->rescaled(L);
    SelfSimilarProfile PB = B.profile->period == L ? *B.profile : B.profile->rescaled(L);
    const Surd W = min(PA.top(), PB.top());
    const Surd rho_v = PA.rho();
    const Surd floor_v = rho_v * W;
    auto normalize = [&](Surd b) {
      while (b > W) b *= rho_v;
      while (b <= floor_v) b /= rho_v;
      return b;
    };
    std::vector<Surd> pts;
    for (const auto& [b, g] : PA.knots) pts.push_back(normalize(b));
    for (const auto& [b, g] : PB.knots) pts.push_back(normalize(b));
    pts.push_back(W);
    std::sort(pts.begin(), pts.end(), [](const Surd& x, const Surd& y) { return x > y; });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<std::pair<Surd, Surd>> knots;
    const size_t M = pts.size();
    for (size_t s = 0; s < M; ++s) {
      const Surd v = pts[s];
      const Surd u = (s + 1 < M) ? pts[s + 1] : rho_v * pts[0];
      knots.emplace_back(v, max(PA.eval(v), PB.eval(v)));
      if (!PA.step) {
        // insert the crossing of the two linear pieces when it is interior
        const Surd fa_u = PA.eval(u), fa_v = PA.eval(v);
        const Surd fb_u = PB.eval(u), fb_v = PB.eval(v);
        const Surd du = fa_u - fb_u, dv = fa_v - fb_v;
        if (du.sign() * dv.sign() < 0) {
          const Surd sa = (fa_v - fa_u) / (v - u);
          const Surd sb = (fb_v - fb_u) / (v - u);
          const Surd w = u + (fb_u - fa_u) / (sa - sb);
          if (w > u && w < v) knots.emplace_back(w, PA.eval(u) + sa * (w - u));
        }
      }
    }
    std::sort(knots.begin(), knots.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    SelfSimilarProfile out;
    out.base = PA.base;
    out.period = L;
    out.kappa = PA.kappa;
    out.knots = std::move(knots);
    out.step = PA.step;
    out.exact_tail = A.exact_tail && B.exact_tail;
    out.validate();
    return SmallBallModel::self_similar(std::move(out));
  }

  // profile against polynomial: keep the slower-decaying side
  const SmallBallModel& prof = A.kind == K::Profile ? A : B;
  const SmallBallModel& poly = A.kind == K::Profile ? B : A;
  if (poly.kind != K::Poly) return std::nullopt;
  auto low = poly.poly.lowest_term();
  if (!low) return prof;
  const Surd poly_kappa =
      Surd(rat_pow(prof.profile->base, -static_cast<long>(low->first) * prof.profile->period));
  if (prof.profile->kappa == poly_kappa) return std::nullopt;
  SmallBallModel out = prof.profile->kappa > poly_kappa ? prof : poly;
  out.exact_tail = false;
  if (out.profile) out.profile->exact_tail = false;
  out.valid_radius = window;
  return out;
}

SmallBallModel sum_models(const std::vector<SmallBallModel>& parts) {
  using K = SmallBallModel::Kind;
  if (parts.empty()) return SmallBallModel::unavailable();
  Surd window;
  bool first = true;
  for (const auto& p : parts) {
    if (!p.usable()) return SmallBallModel::unavailable();
    window = first ? p.valid_radius : min(window, p.valid_radius);
    first = false;
  }
  std::vector<const SmallBallModel*> live;
  for (const auto& p : parts)
    if (p.kind != K::Zero) live.push_back(&p);
  if (live.empty()) return SmallBallModel::zero(window);

  Surd atom_total(Rat(0));
  bool any_atom = false, all_atoms_isolated = true, only_atoms = true;
  for (const auto* p : live) {
    if (p->kind == K::Atom) {
      any_atom = true;
      atom_total += p->atom_mass;
      all_atoms_isolated = all_atoms_isolated && p->atom_isolated;
    } else {
      only_atoms = false;
    }
  }
  if (any_atom)
    return SmallBallModel::atom(atom_total, only_atoms && all_atoms_isolated, window);

  std::vector<const SmallBallModel*> polys, profiles;
  for (const auto* p : live)
    (p->kind == K::Poly ? polys : profiles).push_back(p);

  if (profiles.empty()) {
    Poly sum;
    bool exact = true;
    for (const auto* p : polys) {
      sum += p->poly;
      exact = exact && p->exact_tail;
    }
    auto out = SmallBallModel::polynomial(std::move(sum), window);
    out.exact_tail = exact;
    return out;
  }
  if (profiles.size() > 1) return SmallBallModel::unavailable();

  SmallBallModel out = *profiles.front();
  out.valid_radius = min(out.valid_radius, window);
  if (polys.empty()) return out;

  Poly sum;
  for (const auto* p : polys) sum += p->poly;
  auto low = sum.lowest_term();
  if (!low) return out;
  const auto& pr = *out.profile;
  const Surd poly_kappa =
      Surd(rat_pow(pr.base, -static_cast<long>(low->first) * pr.period));
  if (pr.kappa > poly_kappa) {
    out.exact_tail = false;
    out.profile->exact_tail = false;
    return out;
  }
  if (pr.kappa < poly_kappa) {
    auto pm = SmallBallModel::polynomial(std::move(sum), window);
    pm.exact_tail = false;
    return pm;
  }
  return SmallBallModel::unavailable();
}

}  // namespace modelab
