#include "order.hpp"

namespace modelab {

namespace {

const Surd kOne{Rat(1)};

// Order two exact-or-interval masses; nullopt when the enclosures overlap
// with positive width on both sides.
std::optional<int> order_masses(const Mass& a, const Mass& b) {
  if (a.exact() && b.exact()) return (a.lo - b.lo).sign();
  if (a.hi < b.lo) return -1;
  if (a.lo > b.hi) return 1;
  return std::nullopt;
}

RatioLimits fallback_ratio_limits(const MeasurePtr& mu, const Point& x, const Point& y,
                                  const CompareOptions& opts) {
  if (opts.depth < 8) throw UsageError("fallback depth too small");
  RatioLimits out;
  out.exact = false;
  bool have = false;
  const int tail_start = opts.depth / 2;
  for (int n = tail_start; n <= opts.depth; ++n) {
    const Surd r{rat_pow(opts.fallback_base, -n)};
    Mass mx = mu->ball_mass(x, r);
    Mass my = mu->ball_mass(y, r);
    if (my.hi.sign() == 0)
      throw UsageError("denominator point has zero mass at sampled radius");
    LimitValue up = my.lo.sign() == 0 ? LimitValue::inf()
                                      : LimitValue::of(mx.hi / my.lo);
    Surd lo_v = mx.lo / my.hi;
    if (!have) {
      out.lower = LimitValue::of(lo_v);
      out.upper = up;
      have = true;
    } else {
      if (lo_v < out.lower.value) out.lower = LimitValue::of(lo_v);
      if (up.infinite)
        out.upper = up;
      else if (!out.upper.infinite && up.value > out.upper.value)
        out.upper = up;
    }
  }
  out.window_lo = Surd(rat_pow(opts.fallback_base, -opts.depth));
  out.window_hi = Surd(rat_pow(opts.fallback_base, -tail_start));
  return out;
}

}  // namespace

std::string relation_name(Relation r) {
  switch (r) {
    case Relation::StrictlyLess: return "StrictlyLess";
    case Relation::StrictlyGreater: return "StrictlyGreater";
    case Relation::Equivalent: return "Equivalent";
    case Relation::Incomparable: return "Incomparable";
  }
  return "?";
}

ComparisonVerdict compare_at_radius(const MeasurePtr& mu, const Point& x,
                                    const Point& y, const Surd& r) {
  if (r.sign() <= 0) throw UsageError("fixed-radius comparison needs r > 0");
  Mass mx = mu->ball_mass(x, r);
  Mass my = mu->ball_mass(y, r);
  auto ord = order_masses(mx, my);
  if (!ord)
    throw UndecidableError("mass enclosures overlap at radius " + r.to_string(), mx, my);
  ComparisonVerdict out;
  out.masses = std::make_pair(mx, my);
  out.relation = *ord < 0   ? Relation::StrictlyLess
                 : *ord > 0 ? Relation::StrictlyGreater
                            : Relation::Equivalent;
  return out;
}

RatioLimits ratio_limits(const MeasurePtr& mu, const Point& x, const Point& y,
                         const CompareOptions& opts) {
  if (!mu->support_contains(x) || !mu->support_contains(y))
    throw UsageError("ratio limits need both points in the support");
  auto mx = mu->small_ball_model(x);
  auto my = mu->small_ball_model(y);
  if (auto exact = exact_ratio_limits(mx, my)) {
    RatioLimits out;
    out.lower = exact->liminf;
    out.upper = exact->limsup;
    out.window_lo = Surd(Rat(0));
    out.window_hi = exact->window_hi;
    out.exact = true;
    return out;
  }
  if (!opts.allow_fallback)
    throw UnsupportedError("no exact small-ball models for this pair");
  return fallback_ratio_limits(mu, x, y, opts);
}

ComparisonVerdict compare_limit(const MeasurePtr& mu, const Point& x, const Point& y,
                                const CompareOptions& opts) {
  const bool sx = mu->support_contains(x);
  const bool sy = mu->support_contains(y);
  ComparisonVerdict out;
  if (!sx && !sy) {
    out.relation = Relation::Equivalent;
    return out;
  }
  if (!sx) {
    out.relation = Relation::StrictlyLess;
    return out;
  }
  if (!sy) {
    out.relation = Relation::StrictlyGreater;
    return out;
  }
  RatioLimits rl = ratio_limits(mu, x, y, opts);
  out.limits = rl;
  if (rl.exact) {
    const bool le = !rl.upper.infinite && rl.upper.value <= kOne;
    const bool ge = rl.lower.infinite || rl.lower.value >= kOne;
    out.relation = le && ge   ? Relation::Equivalent
                   : le       ? Relation::StrictlyLess
                   : ge       ? Relation::StrictlyGreater
                              : Relation::Incomparable;
    return out;
  }
  // conservative classification from sampled enclosures: strict verdicts only
  if (!rl.upper.infinite && rl.upper.value < kOne) {
    out.relation = Relation::StrictlyLess;
    return out;
  }
  if (rl.lower.value > kOne) {
    out.relation = Relation::StrictlyGreater;
    return out;
  }
  throw UndecidableError("sampled ratio hull straddles 1 without exact backing",
                         Mass(rl.lower.value),
                         rl.upper.infinite ? Mass(rl.lower.value) : Mass(rl.upper.value));
}

bool compare_liminf_relation(const MeasurePtr& mu, const Point& x, const Point& y) {
  auto mx = mu->small_ball_model(x);
  auto my = mu->small_ball_model(y);
  auto dec = eventually_le(mx, my);
  if (!dec)
    throw UnsupportedError("liminf relation needs exact small-ball models");
  return *dec;
}

bool compare_limsup_relation(const MeasurePtr& mu, const Point& x, const Point& y) {
  auto mx = mu->small_ball_model(x);
  auto my = mu->small_ball_model(y);
  auto dec = recurrently_le(mx, my);
  if (!dec)
    throw UnsupportedError("limsup relation needs exact small-ball models");
  return *dec;
}

RelationFn relation_at_radius(const MeasurePtr& mu, const Surd& r) {
  return [mu, r](const Point& a, const Point& b) {
    auto v = compare_at_radius(mu, a, b, r);
    return v.relation != Relation::StrictlyGreater;
  };
}

RelationFn relation_limit(const MeasurePtr& mu, const CompareOptions& opts) {
  return [mu, opts](const Point& a, const Point& b) {
    auto v = compare_limit(mu, a, b, opts);
    return v.relation == Relation::StrictlyLess || v.relation == Relation::Equivalent;
  };
}

RelationFn relation_liminf(const MeasurePtr& mu) {
  return [mu](const Point& a, const Point& b) {
    return compare_liminf_relation(mu, a, b);
  };
}

RelationFn relation_limsup(const MeasurePtr& mu) {
  return [mu](const Point& a, const Point& b) {
    return compare_limsup_relation(mu, a, b);
  };
}

std::vector<std::array<Point, 3>> transitivity_audit(const RelationFn& rel,
                                                     const std::vector<Point>& pts) {
  if (pts.size() < 3) throw UsageError("transitivity audit needs >= 3 points");
  const size_t n = pts.size();
  std::vector<std::vector<bool>> R(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) R[i][j] = i == j ? true : rel(pts[i], pts[j]);
  std::vector<std::array<Point, 3>> out;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j || !R[i][j]) continue;
      for (size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (R[j][k] && !R[i][k]) out.push_back({pts[i], pts[j], pts[k]});
      }
    }
  return out;
}

MaximalGreatest maximal_and_greatest(const MeasurePtr& mu,
                                     const std::vector<Point>& candidates,
                                     OrderMode mode, const Surd& r,
                                     const CompareOptions& opts) {
  if (candidates.empty()) throw UsageError("empty candidate set");
  const size_t n = candidates.size();
  // le[i][j]: candidate i precedes candidate j
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, true));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      Relation rel = mode == OrderMode::AtRadius
                         ? compare_at_radius(mu, candidates[i], candidates[j], r).relation
                         : compare_limit(mu, candidates[i], candidates[j], opts).relation;
      le[i][j] = rel == Relation::StrictlyLess || rel == Relation::Equivalent;
    }
  }
  MaximalGreatest out;
  for (size_t i = 0; i < n; ++i) {
    bool maximal = true, greatest = true;
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (le[i][j] && !le[j][i]) maximal = false;  // strictly dominated
      if (!le[j][i]) greatest = false;
    }
    if (maximal) out.maximal.push_back(candidates[i]);
    if (greatest) out.greatest.push_back(candidates[i]);
  }
  return out;
}

EssentialTotalityReport essential_totality_check(const MeasurePtr& mu,
                                                 const std::vector<Point>& chain,
                                                 const std::vector<Point>& complement,
                                                 const CompareOptions& opts) {
  if (chain.empty()) throw UsageError("essential totality needs a nonempty chain");
  EssentialTotalityReport out;
  // (a) chain elements pairwise comparable
  for (size_t i = 0; i < chain.size(); ++i) {
    for (size_t j = i + 1; j < chain.size(); ++j) {
      auto v = compare_limit(mu, chain[i], chain[j], opts);
      if (v.relation == Relation::Incomparable) {
        out.pass = false;
        out.failed_condition = "a";
        out.witness = {chain[i], chain[j]};
        out.note = "chain elements are incomparable";
        return out;
      }
    }
  }
  // (b) every complement point is dominated by every chain element
  for (const auto& xp : complement) {
    for (const auto& e : chain) {
      auto v = compare_limit(mu, xp, e, opts);
      if (v.relation != Relation::StrictlyLess && v.relation != Relation::Equivalent) {
        out.pass = false;
        out.failed_condition = "b";
        out.witness = {xp, e};
        out.note = "complement point is not dominated by a chain element";
        return out;
      }
    }
  }
  // (c) every complement point strictly below some chain element
  for (const auto& xp : complement) {
    bool in_chain = false;
    for (const auto& e : chain)
      if (point_equal(xp, e)) in_chain = true;
    bool strict = false;
    for (const auto& e : chain) {
      auto v = compare_limit(mu, xp, e, opts);
      if (v.relation == Relation::StrictlyLess) {
        strict = true;
        break;
      }
    }
    if (!strict) {
      out.pass = false;
      out.failed_condition = "c";
      out.witness = {xp};
      out.note = in_chain ? "complement point coincides with a chain element; "
                            "no point strictly dominates itself (vacuous sample)"
                          : "no chain element strictly dominates this point";
      return out;
    }
  }
  return out;
}

}  // namespace modelab
