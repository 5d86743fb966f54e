#include "modes.hpp"

#include <algorithm>

namespace modelab {

namespace {

const Surd kZero{Rat(0)};
const Surd kOne{Rat(1)};

// Newton interpolation (exact); shared with the measure layer conceptually but
// small enough to keep local.
Poly fit_poly(const std::vector<Surd>& xs, const std::vector<Surd>& ys) {
  const size_t n = xs.size();
  std::vector<Surd> dd = ys;
  for (size_t level = 1; level < n; ++level)
    for (size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
  Poly out;
  for (size_t i = n; i-- > 0;) {
    std::vector<Surd> c(out.coeff().size() + 1, kZero);
    for (size_t j = 0; j < out.coeff().size(); ++j) {
      c[j + 1] += out.coeff()[j];
      c[j] -= out.coeff()[j] * xs[i];
    }
    out = Poly(std::move(c)) + Poly::constant(dd[i]);
  }
  return out;
}

void validate_witness(const MeasurePtr& mu, const ModeAnalysis& ana, const Surd& r,
                      ModeReport* out) {
  if (!ana.witness) return;
  const auto& w = *ana.witness;
  Surd prev;
  for (long j = 1; j <= 6; ++j) {
    Point p = w.point_at(j);
    Surd m = w.mass_at(j);
    Mass actual = mu->ball_mass(p, r);
    if (!actual.exact() || actual.lo != m)
      throw Error("witness mass formula disagrees with ball_mass");
    if (j > 1 && !(m > prev)) throw Error("witness masses are not increasing");
    if (!(m < ana.M_r)) throw Error("witness mass reaches the supremum");
    prev = m;
    out->witness_prefix.emplace_back(p, m);
  }
  out->note = w.description;
}

ModeReport report_from_analysis(const MeasurePtr& mu, const ModeAnalysis& ana,
                                const Surd& r) {
  ModeReport out;
  out.r = r;
  out.M_r = Mass(ana.M_r);
  out.maximisers = ana.maximisers;
  out.all_points_maximise = ana.all_points_maximise;
  if (ana.attained == ModeAnalysis::Attained::Yes) {
    out.attained = ModeReport::Attained::Yes;
    for (const auto& m : out.maximisers) {
      Mass v = mu->ball_mass(m, r);
      if (!v.exact() || v.lo != ana.M_r)
        throw Error("claimed maximiser does not attain M_r");
    }
  } else {
    out.attained = ModeReport::Attained::No;
    validate_witness(mu, ana, r, &out);
  }
  return out;
}

ModeReport sup_over_points(const MeasurePtr& mu, const Surd& r,
                           const std::vector<Point>& pts, bool complete_domain,
                           const std::string& note) {
  if (pts.empty()) throw UsageError("empty search domain");
  ModeReport out;
  out.r = r;
  std::vector<Mass> masses;
  masses.reserve(pts.size());
  for (const auto& p : pts) masses.push_back(mu->ball_mass(p, r));
  // find the maximum by pairwise comparison; enclosures that cannot be
  // ordered raise UndecidableError
  size_t best = 0;
  for (size_t i = 1; i < pts.size(); ++i) {
    const Mass& a = masses[i];
    const Mass& b = masses[best];
    if (a.exact() && b.exact()) {
      if (a.lo > b.lo) best = i;
    } else if (a.lo > b.hi) {
      best = i;
    } else if (!(a.hi < b.lo)) {
      throw UndecidableError("cannot order candidate masses", a, b);
    }
  }
  out.M_r = masses[best];
  if (out.M_r.exact()) {
    for (size_t i = 0; i < pts.size(); ++i)
      if (masses[i].exact() && masses[i].lo == out.M_r.lo)
        out.maximisers.push_back(pts[i]);
  } else {
    out.maximisers.push_back(pts[best]);
  }
  out.attained = complete_domain ? ModeReport::Attained::Yes : ModeReport::Attained::Unknown;
  out.note = note;
  return out;
}

ModeReport lattice_search(const MeasurePtr& mu,
                          const std::shared_ptr<const PiecewisePolyDensity>& pd,
                          const Surd& r) {
  if (!pd->piecewise_linear())
    throw UsageError("lattice search requires a density of degree <= 1");
  std::vector<Surd> crit;
  for (const auto& b : pd->breakpoints()) {
    crit.push_back(b - r);
    crit.push_back(b + r);
  }
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

  auto mass_at = [&](const Surd& c) { return mu->ball_mass(Point(c), r).lo; };
  std::vector<std::pair<Surd, Surd>> candidates;  // (center, mass)
  for (const auto& c : crit) candidates.emplace_back(c, mass_at(c));
  // the mass map is quadratic between consecutive critical centers; include
  // interior vertices
  for (size_t i = 0; i + 1 < crit.size(); ++i) {
    const Surd& u = crit[i];
    const Surd& v = crit[i + 1];
    Surd m = (u + v) / Surd(Rat(2));
    std::vector<Surd> xs{u, m, v};
    std::vector<Surd> ys{candidates[i].second, mass_at(m), candidates[i + 1].second};
    Poly q = fit_poly(xs, ys);
    if (q.degree() == 2) {
      const Surd A = q.coeff()[2], B = q.coeff()[1];
      Surd vertex = -B / (A * Surd(Rat(2)));
      if (vertex > u && vertex < v) candidates.emplace_back(vertex, mass_at(vertex));
    }
  }
  ModeReport out;
  out.r = r;
  Surd best = candidates.front().second;
  for (const auto& [c, m] : candidates) best = max(best, m);
  out.M_r = Mass(best);
  for (const auto& [c, m] : candidates)
    if (m == best) out.maximisers.push_back(Point(c));
  // dedupe
  std::vector<Point> uniq;
  for (const auto& p : out.maximisers) {
    bool seen = false;
    for (const auto& q : uniq) seen = seen || point_equal(p, q);
    if (!seen) uniq.push_back(p);
  }
  out.maximisers = std::move(uniq);
  out.attained = ModeReport::Attained::Yes;
  out.note = "exact search over the breakpoint lattice and interior vertices";
  return out;
}

SmallBallModel dominant_model(const MeasurePtr& mu, std::vector<Point> dominant) {
  if (dominant.empty()) dominant = mu->dominant_centers();
  if (dominant.empty())
    throw UsageError("no dominant centers available for the small-radius supremum");
  std::optional<SmallBallModel> acc;
  for (const auto& d : dominant) {
    SmallBallModel m = mu->small_ball_model(d);
    if (!m.usable()) throw UnsupportedError("dominant center lacks an exact model");
    if (!acc) {
      acc = m;
      continue;
    }
    auto merged = model_max(*acc, m);
    if (!merged) throw UnsupportedError("dominant models cannot be combined");
    acc = *merged;
  }
  return *acc;
}

}  // namespace

ModeReport sup_ball_mass(const MeasurePtr& mu, const Surd& r,
                         const DomainDescriptor& dom) {
  if (r.sign() <= 0) throw UsageError("sup_ball_mass needs r > 0");
  switch (dom.kind) {
    case DomainDescriptor::Kind::Auto: {
      if (auto ana = mu->mode_analysis(r)) return report_from_analysis(mu, *ana, r);
      if (auto pd = std::dynamic_pointer_cast<const PiecewisePolyDensity>(mu);
          pd && pd->piecewise_linear())
        return lattice_search(mu, pd, r);
      auto pts = mu->enumeration_points();
      if (!pts.empty()) {
        const bool complete = mu->space()->kind() == MetricSpace::Kind::Finite;
        return sup_over_points(mu, r, pts, complete,
                               complete ? "" : "enumerated prefix of a countable domain");
      }
      throw UsageError("no automatic search domain for this representation");
    }
    case DomainDescriptor::Kind::AllAtoms: {
      if (auto ana = mu->mode_analysis(r)) return report_from_analysis(mu, *ana, r);
      auto pts = mu->enumeration_points();
      if (pts.empty()) throw UsageError("measure has no atom enumeration");
      const bool complete = mu->space()->kind() == MetricSpace::Kind::Finite;
      return sup_over_points(mu, r, pts, complete,
                             complete ? "" : "enumerated prefix of a countable domain");
    }
    case DomainDescriptor::Kind::Lattice1D: {
      auto pd = std::dynamic_pointer_cast<const PiecewisePolyDensity>(mu);
      if (!pd) throw UsageError("lattice domain needs a 1D density representation");
      return lattice_search(mu, pd, r);
    }
    case DomainDescriptor::Kind::ExplicitSet:
      return sup_over_points(mu, r, dom.candidates, false,
                             "supremum over the explicit candidate set");
  }
  throw UsageError("bad domain descriptor");
}

std::vector<Point> radius_r_modes(const MeasurePtr& mu, const Surd& r,
                                  const DomainDescriptor& dom) {
  auto rep = sup_ball_mass(mu, r, dom);
  if (rep.attained == ModeReport::Attained::No) return {};
  return rep.maximisers;
}

AmfRecord build_amf(const MeasurePtr& mu, const EpsRule& eps,
                    const std::vector<Surd>& radii, const DomainDescriptor& dom) {
  if (radii.empty()) throw UsageError("AMF needs a radius grid");
  for (size_t i = 0; i + 1 < radii.size(); ++i)
    if (!(radii[i + 1] < radii[i])) throw UsageError("AMF grid must decrease");
  AmfRecord out;
  for (const auto& r : radii) {
    const Surd e = eps(r);
    if (e.sign() <= 0) throw UsageError("AMF tolerance must be positive");
    auto rep = sup_ball_mass(mu, r, dom);
    Point chosen;
    Mass achieved(kOne);
    if (rep.attained == ModeReport::Attained::Yes && !rep.maximisers.empty()) {
      chosen = rep.maximisers.front();
      achieved = Mass(kOne);
    } else if (rep.attained == ModeReport::Attained::No && !rep.witness_prefix.empty()) {
      // walk the witness family until the tolerance is met
      bool found = false;
      auto ana = mu->mode_analysis(r);
      const Surd target = (kOne - e) * rep.M_r.lo;
      for (long j = 1; j <= 1000000 && !found; ++j) {
        Surd m = ana->witness->mass_at(j);
        if (m >= target) {
          chosen = ana->witness->point_at(j);
          achieved = Mass(m / rep.M_r.lo);
          found = true;
        }
      }
      if (!found)
        throw Error("no witness point meets the tolerance at radius " + r.to_string());
    } else {
      throw Error("AMF search failed at radius " + r.to_string());
    }
    out.radii.push_back(r);
    out.points.push_back(chosen);
    out.eps.push_back(e);
    out.achieved.push_back(achieved);
  }
  return out;
}

StrongModeResult strong_mode_check(const MeasurePtr& mu, const Point& x,
                                   const std::optional<GeometricGrid>& grid,
                                   std::vector<Point> dominant) {
  SmallBallModel mx = mu->small_ball_model(x);
  SmallBallModel mM = dominant_model(mu, std::move(dominant));
  std::optional<ExactRatioLimits> lim =
      grid ? grid_ratio_limits(mx, mM, grid->base, grid->start, grid->step)
           : exact_ratio_limits(mx, mM);
  if (!lim) throw UnsupportedError("strong-mode limits need exact models");
  StrongModeResult out;
  out.lower = lim->liminf;
  out.upper = lim->limsup;
  out.exact = true;
  out.window = lim->window_hi;
  out.accepted = lim->liminf.infinite || lim->liminf.value >= kOne;
  return out;
}

std::vector<GeneralisedVerdict> generalised_mode_check(
    const MeasurePtr& mu, const Point& x, const std::vector<SequenceSpec>& sequences,
    std::vector<Point> dominant) {
  SmallBallModel mM = dominant_model(mu, std::move(dominant));
  SmallBallModel mx = mu->small_ball_model(x);
  std::vector<GeneralisedVerdict> out;
  const bool centered = mu->center_dominates_nearby(x);
  for (const auto& seq : sequences) {
    GeneralisedVerdict v;
    if (centered && mx.usable()) {
      // the centered ball dominates every ball in the shrinking box, so the
      // best achievable ratio along the sequence is the centered one
      auto lim = grid_ratio_limits(mx, mM, seq.grid.base, seq.grid.start, seq.grid.step);
      if (lim) {
        v.best_limsup = lim->limsup;
        v.bound_is_exact = true;
        const bool ge1 = lim->limsup.infinite || lim->limsup.value >= kOne;
        v.outcome = ge1 ? GeneralisedVerdict::Outcome::Accepted
                        : GeneralisedVerdict::Outcome::Rejected;
        v.note = "centered balls dominate the search box";
        out.push_back(std::move(v));
        continue;
      }
    }
    if (mx.usable()) {
      // universal envelope: any ball in the box is contained in the centered
      // ball of radius (1 + factor) r
      SmallBallModel env = model_radius_scale(mx, Surd(Rat(1)) + Surd(seq.box_factor));
      auto lim = grid_ratio_limits(env, mM, seq.grid.base, seq.grid.start, seq.grid.step);
      if (lim && !lim->limsup.infinite && lim->limsup.value < kOne) {
        v.best_limsup = lim->limsup;
        v.bound_is_exact = true;
        v.outcome = GeneralisedVerdict::Outcome::Rejected;
        v.note = "enclosing-ball bound stays below 1";
        out.push_back(std::move(v));
        continue;
      }
      if (lim) {
        v.best_limsup = lim->limsup;
        v.note = "enclosing-ball bound is inconclusive";
        out.push_back(std::move(v));
        continue;
      }
    }
    v.note = "no exact model for the search box";
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Point> amf_upward_intersection(const MeasurePtr& mu, const AmfRecord& amf,
                                           const std::vector<Point>& candidates,
                                           std::vector<Point> dominant) {
  std::vector<Point> survivors;
  for (const auto& c : candidates) {
    bool in_all = true;
    for (size_t i = 0; i < amf.radii.size() && in_all; ++i) {
      auto v = compare_at_radius(mu, c, amf.points[i], amf.radii[i]);
      in_all = v.relation != Relation::StrictlyLess;
    }
    if (!in_all) continue;
    auto strong = strong_mode_check(mu, c, std::nullopt, dominant);
    if (strong.accepted) survivors.push_back(c);
  }
  return survivors;
}

bool amf_nesting_check(const MeasurePtr& mu, const AmfRecord& amf,
                       const std::vector<Point>& candidates) {
  // upward closure membership of candidate c at grid index i
  auto member = [&](const Point& c, size_t i) {
    auto v = compare_at_radius(mu, c, amf.points[i], amf.radii[i]);
    return v.relation != Relation::StrictlyLess;
  };
  for (size_t i = 0; i + 1 < amf.radii.size(); ++i) {
    for (const auto& c : candidates) {
      if (member(c, i + 1) && !member(c, i)) return false;
    }
  }
  return true;
}

}  // namespace modelab
