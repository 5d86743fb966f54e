#include "metric.hpp"

#include <sstream>

namespace modelab {

std::string point_to_string(const Point& p) {
  if (auto* s = std::get_if<Surd>(&p)) return s->to_string();
  if (auto* i = std::get_if<IndexPoint>(&p)) return "#" + std::to_string(i->index);
  const auto& t = std::get<TwoLevelPoint>(p);
  std::ostringstream os;
  os << "(" << t.xi.to_string() << "," << t.k << "," << t.m << ")";
  return os.str();
}

bool point_equal(const Point& a, const Point& b) {
  if (a.index() != b.index()) return false;
  if (auto* s = std::get_if<Surd>(&a)) return *s == std::get<Surd>(b);
  if (auto* i = std::get_if<IndexPoint>(&a))
    return i->index == std::get<IndexPoint>(b).index;
  const auto& x = std::get<TwoLevelPoint>(a);
  const auto& y = std::get<TwoLevelPoint>(b);
  return x.k == y.k && x.m == y.m && x.xi == y.xi;
}

Surd RealLineSpace::distance(const Point& a, const Point& b) const {
  return abs(std::get<Surd>(a) - std::get<Surd>(b));
}

SpacePtr RealLineSpace::instance() {
  static SpacePtr sp = std::make_shared<RealLineSpace>();
  return sp;
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::vector<Surd>> table)
    : table_(std::move(table)) {
  const size_t n = table_.size();
  for (size_t i = 0; i < n; ++i) {
    if (table_[i].size() != n) throw UsageError("distance table is not square");
    if (table_[i][i].sign() != 0) throw UsageError("nonzero diagonal distance");
    for (size_t j = 0; j < n; ++j)
      if (table_[i][j] != table_[j][i]) throw UsageError("asymmetric distance table");
  }
}

Surd FiniteMetricSpace::distance(const Point& a, const Point& b) const {
  long i = std::get<IndexPoint>(a).index, j = std::get<IndexPoint>(b).index;
  if (!contains(a) || !contains(b)) throw UsageError("point outside finite space");
  return table_[i][j];
}

bool FiniteMetricSpace::contains(const Point& p) const {
  auto* i = std::get_if<IndexPoint>(&p);
  return i && i->index >= 0 && static_cast<size_t>(i->index) < table_.size();
}

Surd CountableSpace::distance(const Point& a, const Point& b) const {
  if (!contains(a) || !contains(b)) throw UsageError("point outside countable space");
  return rule_(std::get<IndexPoint>(a).index, std::get<IndexPoint>(b).index);
}

bool CountableSpace::contains(const Point& p) const {
  auto* i = std::get_if<IndexPoint>(&p);
  return i && i->index >= min_index_;
}

Surd doubly_spaced_discrete(long k, long l) {
  if (k == l) return Surd(Rat(0));
  long lo = std::min(k, l), hi = std::max(k, l);
  if (lo % 2 == 1 && hi == lo + 1) return Surd(Rat(2));
  return Surd(Rat(1));
}

SpacePtr doubly_spaced_discrete_space() {
  static SpacePtr sp = std::make_shared<CountableSpace>(
      "doubly-spaced-discrete", &doubly_spaced_discrete, 1);
  return sp;
}

Surd TwoLevelSpace::half_width(long k, long m) {
  return Surd(rat_pow(Rat(2), -(k + m + 1)));
}

Surd TwoLevelSpace::distance(const Point& a, const Point& b) const {
  if (!contains(a) || !contains(b)) throw UsageError("point outside two-level space");
  const auto& x = std::get<TwoLevelPoint>(a);
  const auto& y = std::get<TwoLevelPoint>(b);
  if (x.m != y.m) return Surd(Rat(2));
  if (x.k != y.k)
    return Surd(rat_pow(Rat(2), -x.m)) * doubly_spaced_discrete(x.k, y.k);
  return abs(x.xi - y.xi);
}

bool TwoLevelSpace::contains(const Point& p) const {
  auto* t = std::get_if<TwoLevelPoint>(&p);
  if (!t || t->k < 1 || t->m < 1) return false;
  return abs(t->xi) <= half_width(t->k, t->m);
}

SpacePtr TwoLevelSpace::instance() {
  static SpacePtr sp = std::make_shared<TwoLevelSpace>();
  return sp;
}

}  // namespace modelab
