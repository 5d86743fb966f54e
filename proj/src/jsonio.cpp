#include "jsonio.hpp"

namespace modelab {

Json scalar_to_json(const Surd& v) {
  Json j;
  j["rat"] = rat_to_string(v.rat());
  j["surd"] = rat_to_string(v.surd_part());
  j["base"] = rat_to_string(v.base());
  j["dec"] = v.to_decimal(30);
  return j;
}

Surd scalar_from_json(const Json& j) {
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return Surd(Rat(j.get<long>()));
  Rat rat = rat_from_string(j.at("rat").get<std::string>());
  Rat surd = rat_from_string(j.value("surd", "0"));
  if (surd == 0) return Surd(rat);
  Rat base = rat_from_string(j.at("base").get<std::string>());
  return Surd(rat, surd, base);
}

Json mass_to_json(const Mass& m) {
  Json j;
  j["lo"] = scalar_to_json(m.lo);
  j["hi"] = scalar_to_json(m.hi);
  j["exact"] = m.exact();
  return j;
}

Json point_to_json(const Point& p) {
  Json j;
  if (auto* s = std::get_if<Surd>(&p)) {
    j["kind"] = "real";
    j["value"] = scalar_to_json(*s);
  } else if (auto* i = std::get_if<IndexPoint>(&p)) {
    j["kind"] = "index";
    j["value"] = i->index;
  } else {
    const auto& t = std::get<TwoLevelPoint>(p);
    j["kind"] = "two_level";
    j["xi"] = scalar_to_json(t.xi);
    j["k"] = t.k;
    j["m"] = t.m;
  }
  return j;
}

Point point_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "real") return Point(scalar_from_json(j.at("value")));
  if (kind == "index") return Point(IndexPoint{j.at("value").get<long>()});
  if (kind == "two_level")
    return Point(TwoLevelPoint{scalar_from_json(j.at("xi")), j.at("k").get<long>(),
                               j.at("m").get<long>()});
  throw UsageError("unknown point kind: " + kind);
}

Json profile_to_json(const SelfSimilarProfile& p) {
  Json j;
  j["base"] = rat_to_string(p.base);
  j["period"] = p.period;
  j["kappa"] = scalar_to_json(p.kappa);
  j["step"] = p.step;
  j["exact_tail"] = p.exact_tail;
  Json knots = Json::array();
  for (const auto& [b, g] : p.knots)
    knots.push_back(Json::array({scalar_to_json(b), scalar_to_json(g)}));
  j["knots"] = std::move(knots);
  return j;
}

SelfSimilarProfile profile_from_json(const Json& j) {
  SelfSimilarProfile p;
  p.base = rat_from_string(j.at("base").get<std::string>());
  p.period = j.at("period").get<long>();
  p.kappa = scalar_from_json(j.at("kappa"));
  p.step = j.value("step", false);
  p.exact_tail = j.value("exact_tail", true);
  for (const auto& kn : j.at("knots"))
    p.knots.emplace_back(scalar_from_json(kn.at(0)), scalar_from_json(kn.at(1)));
  p.validate();
  return p;
}

namespace {

Json poly_to_json(const Poly& p) {
  Json arr = Json::array();
  for (const auto& c : p.coeff()) arr.push_back(scalar_to_json(c));
  return arr;
}

Poly poly_from_json(const Json& j) {
  std::vector<Surd> c;
  for (const auto& e : j) c.push_back(scalar_from_json(e));
  return Poly(std::move(c));
}

Json space_to_json(const SpacePtr& sp) {
  Json j;
  switch (sp->kind()) {
    case MetricSpace::Kind::RealLine:
      j["kind"] = "real_line";
      break;
    case MetricSpace::Kind::Finite: {
      j["kind"] = "finite";
      auto fm = std::static_pointer_cast<const FiniteMetricSpace>(sp);
      Json table = Json::array();
      for (const auto& row : fm->table()) {
        Json r = Json::array();
        for (const auto& d : row) r.push_back(scalar_to_json(d));
        table.push_back(std::move(r));
      }
      j["table"] = std::move(table);
      break;
    }
    case MetricSpace::Kind::Countable:
      j["kind"] = "countable";
      j["name"] = sp->name();
      break;
    case MetricSpace::Kind::TwoLevel:
      j["kind"] = "two_level";
      break;
  }
  return j;
}

SpacePtr space_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "real_line") return RealLineSpace::instance();
  if (kind == "finite") {
    std::vector<std::vector<Surd>> table;
    for (const auto& row : j.at("table")) {
      std::vector<Surd> r;
      for (const auto& d : row) r.push_back(scalar_from_json(d));
      table.push_back(std::move(r));
    }
    return std::make_shared<FiniteMetricSpace>(std::move(table));
  }
  if (kind == "countable") {
    const std::string name = j.at("name").get<std::string>();
    if (name == "doubly-spaced-discrete") return doubly_spaced_discrete_space();
    throw UsageError("unknown countable space: " + name);
  }
  if (kind == "two_level") return TwoLevelSpace::instance();
  throw UsageError("unknown space kind: " + kind);
}

}  // namespace

Json AtomicMeasure::to_json() const {
  Json j;
  j["schema"] = kMeasureSchema;
  j["variant"] = "atomic";
  j["space"] = space_to_json(space_);
  Json atoms = Json::array();
  for (const auto& a : atoms_) {
    Json e;
    e["point"] = point_to_json(a.point);
    e["mass"] = scalar_to_json(a.mass);
    atoms.push_back(std::move(e));
  }
  j["atoms"] = std::move(atoms);
  j["z"] = scalar_to_json(z_);
  return j;
}

Json DoublySpacedGeometricMeasure::to_json() const {
  Json j;
  j["schema"] = kMeasureSchema;
  j["variant"] = "doubly_spaced_geometric";
  j["count"] = enumeration_count_;
  return j;
}

Json PiecewisePolyDensity::to_json() const {
  Json j;
  j["schema"] = kMeasureSchema;
  j["variant"] = "piecewise_poly_density";
  Json bps = Json::array();
  for (const auto& b : breakpoints_) bps.push_back(scalar_to_json(b));
  j["breakpoints"] = std::move(bps);
  Json pieces = Json::array();
  for (const auto& p : pieces_) pieces.push_back(poly_to_json(p));
  j["pieces"] = std::move(pieces);
  j["z"] = scalar_to_json(z_);
  return j;
}

Json RadialMeasure::to_json() const {
  Json j;
  j["schema"] = kMeasureSchema;
  j["variant"] = "radial";
  j["center"] = scalar_to_json(center_);
  j["profile"] = profile_to_json(profile_);
  Json head = Json::array();
  for (const auto& [t, v] : head_)
    head.push_back(Json::array({scalar_to_json(t), scalar_to_json(v)}));
  j["head"] = std::move(head);
  j["support_radius"] = scalar_to_json(support_radius_);
  j["total"] = scalar_to_json(total_);
  j["label"] = label_;
  return j;
}

Json RadialAtomCluster::to_json() const {
  Json j;
  j["schema"] = kMeasureSchema;
  j["variant"] = "radial_atom_cluster";
  j["center"] = scalar_to_json(center_);
  j["profile"] = profile_to_json(profile_);
  j["sides"] = sides_ == Sides::Both ? "both" : sides_ == Sides::Left ? "left" : "right";
  j["label"] = label_;
  return j;
}

Json SumMeasure::to_json() const {
  Json j;
  j["schema"] = kMeasureSchema;
  j["variant"] = "sum";
  Json comps = Json::array();
  for (const auto& c : components_) comps.push_back(c->to_json());
  j["components"] = std::move(comps);
  j["tail_bound"] = scalar_to_json(tail_bound_);
  j["z"] = scalar_to_json(z_);
  return j;
}

Json TwoLevelMeasure::to_json() const {
  Json j;
  j["schema"] = kMeasureSchema;
  j["variant"] = "two_level";
  j["sigma"] = rat_to_string(sigma_);
  j["enum_k"] = enum_k_;
  j["enum_m"] = enum_m_;
  return j;
}

Json TwoBranchPolyMeasure::to_json() const {
  Json j;
  j["schema"] = kMeasureSchema;
  j["variant"] = "two_branch_poly";
  Json bumps = Json::array();
  for (const auto& b : bumps_) {
    Json e;
    e["center"] = scalar_to_json(b.center);
    e["density"] = poly_to_json(b.density);
    e["w_exact"] = scalar_to_json(b.w_exact);
    e["w_lo"] = scalar_to_json(b.w_lo);
    e["w_hi"] = scalar_to_json(b.w_hi);
    bumps.push_back(std::move(e));
  }
  j["bumps"] = std::move(bumps);
  j["z"] = scalar_to_json(z_);
  return j;
}

MeasurePtr measure_from_json(const Json& j) {
  if (j.value("schema", "") != kMeasureSchema)
    throw UsageError("unknown or missing measure schema");
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "atomic") {
    SpacePtr sp = space_from_json(j.at("space"));
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.push_back(Atom{point_from_json(a.at("point")), scalar_from_json(a.at("mass"))});
    return std::make_shared<AtomicMeasure>(sp, std::move(atoms),
                                           scalar_from_json(j.at("z")));
  }
  if (variant == "doubly_spaced_geometric")
    return std::make_shared<DoublySpacedGeometricMeasure>(j.at("count").get<long>());
  if (variant == "piecewise_poly_density") {
    std::vector<Surd> bps;
    for (const auto& b : j.at("breakpoints")) bps.push_back(scalar_from_json(b));
    std::vector<Poly> pieces;
    for (const auto& p : j.at("pieces")) pieces.push_back(poly_from_json(p));
    return std::make_shared<PiecewisePolyDensity>(std::move(bps), std::move(pieces),
                                                  scalar_from_json(j.at("z")));
  }
  if (variant == "radial") {
    std::vector<std::pair<Surd, Surd>> head;
    for (const auto& h : j.at("head"))
      head.emplace_back(scalar_from_json(h.at(0)), scalar_from_json(h.at(1)));
    return std::make_shared<RadialMeasure>(
        scalar_from_json(j.at("center")), profile_from_json(j.at("profile")),
        std::move(head), scalar_from_json(j.at("support_radius")),
        scalar_from_json(j.at("total")), j.value("label", ""));
  }
  if (variant == "radial_atom_cluster") {
    const std::string s = j.at("sides").get<std::string>();
    auto sides = s == "both"   ? RadialAtomCluster::Sides::Both
                 : s == "left" ? RadialAtomCluster::Sides::Left
                               : RadialAtomCluster::Sides::Right;
    return std::make_shared<RadialAtomCluster>(scalar_from_json(j.at("center")),
                                               profile_from_json(j.at("profile")),
                                               sides, j.value("label", ""));
  }
  if (variant == "sum") {
    std::vector<MeasurePtr> comps;
    for (const auto& c : j.at("components")) comps.push_back(measure_from_json(c));
    return std::make_shared<SumMeasure>(std::move(comps),
                                        scalar_from_json(j.at("tail_bound")),
                                        scalar_from_json(j.at("z")));
  }
  if (variant == "two_level")
    return std::make_shared<TwoLevelMeasure>(
        rat_from_string(j.at("sigma").get<std::string>()), j.at("enum_k").get<long>(),
        j.at("enum_m").get<long>());
  if (variant == "two_branch_poly") {
    std::vector<TwoBranchPolyMeasure::Bump> bumps;
    for (const auto& b : j.at("bumps")) {
      bumps.push_back(TwoBranchPolyMeasure::Bump{
          scalar_from_json(b.at("center")), poly_from_json(b.at("density")),
          scalar_from_json(b.at("w_exact")), scalar_from_json(b.at("w_lo")),
          scalar_from_json(b.at("w_hi"))});
    }
    if (bumps.size() != 2) throw UsageError("two_branch_poly needs two bumps");
    return std::make_shared<TwoBranchPolyMeasure>(bumps[0], bumps[1],
                                                  scalar_from_json(j.at("z")));
  }
  throw UsageError("unknown measure variant: " + variant);
}

Json ratio_limits_to_json(const RatioLimits& rl) {
  Json j;
  j["liminf"] = rl.lower.infinite ? Json("inf") : scalar_to_json(rl.lower.value);
  j["limsup"] = rl.upper.infinite ? Json("inf") : scalar_to_json(rl.upper.value);
  j["window"] = Json::array({scalar_to_json(rl.window_lo), scalar_to_json(rl.window_hi)});
  j["exact"] = rl.exact;
  return j;
}

Json verdict_to_json(const ComparisonVerdict& v) {
  Json j;
  j["relation"] = relation_name(v.relation);
  if (v.limits) {
    Json rl = ratio_limits_to_json(*v.limits);
    for (auto& [k, val] : rl.items()) j[k] = val;
  }
  if (v.masses) {
    j["mass_x"] = mass_to_json(v.masses->first);
    j["mass_y"] = mass_to_json(v.masses->second);
  }
  return j;
}

Json mode_report_to_json(const ModeReport& r) {
  Json j;
  j["r"] = scalar_to_json(r.r);
  j["M_r"] = mass_to_json(r.M_r);
  j["attained"] = r.attained == ModeReport::Attained::Yes      ? "yes"
                  : r.attained == ModeReport::Attained::No     ? "no"
                                                               : "unknown";
  Json maxs = Json::array();
  for (const auto& m : r.maximisers) maxs.push_back(point_to_json(m));
  j["maximisers"] = std::move(maxs);
  j["all_points_maximise"] = r.all_points_maximise;
  if (!r.witness_prefix.empty()) {
    Json w = Json::array();
    for (const auto& [p, m] : r.witness_prefix) {
      Json e;
      e["point"] = point_to_json(p);
      e["mass"] = scalar_to_json(m);
      w.push_back(std::move(e));
    }
    j["witness_prefix"] = std::move(w);
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json amf_to_json(const AmfRecord& a) {
  Json j = Json::array();
  for (size_t i = 0; i < a.radii.size(); ++i) {
    Json e;
    e["r"] = scalar_to_json(a.radii[i]);
    e["point"] = point_to_json(a.points[i]);
    e["eps"] = scalar_to_json(a.eps[i]);
    e["achieved_ratio"] = mass_to_json(a.achieved[i]);
    j.push_back(std::move(e));
  }
  return j;
}

}  // namespace modelab
