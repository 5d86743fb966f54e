#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "exact.hpp"

namespace modelab {

// A point in one of the supported spaces: a coordinate on the real line, an
// indexed point of a finite/countable space, or a (xi, k, m) triple of the
// two-scale product space.
struct IndexPoint {
  long index = 0;
};
struct TwoLevelPoint {
  Surd xi;
  long k = 1;
  long m = 1;
};
using Point = std::variant<Surd, IndexPoint, TwoLevelPoint>;

std::string point_to_string(const Point& p);
bool point_equal(const Point& a, const Point& b);

class MetricSpace {
 public:
  enum class Kind { RealLine, Finite, Countable, TwoLevel };

  virtual ~MetricSpace() = default;
  virtual Kind kind() const = 0;
  virtual Surd distance(const Point& a, const Point& b) const = 0;
  virtual bool contains(const Point& p) const = 0;
  virtual std::string name() const = 0;
};
using SpacePtr = std::shared_ptr<const MetricSpace>;

class RealLineSpace final : public MetricSpace {
 public:
  Kind kind() const override { return Kind::RealLine; }
  Surd distance(const Point& a, const Point& b) const override;
  bool contains(const Point& p) const override { return std::holds_alternative<Surd>(p); }
  std::string name() const override { return "real-line"; }
  static SpacePtr instance();
};

class FiniteMetricSpace final : public MetricSpace {
 public:
  // table must be symmetric with zero diagonal; the triangle inequality is the
  // caller's responsibility and is property-tested on samples.
  explicit FiniteMetricSpace(std::vector<std::vector<Surd>> table);
  Kind kind() const override { return Kind::Finite; }
  Surd distance(const Point& a, const Point& b) const override;
  bool contains(const Point& p) const override;
  std::string name() const override { return "finite"; }
  size_t size() const { return table_.size(); }
  const std::vector<std::vector<Surd>>& table() const { return table_; }

 private:
  std::vector<std::vector<Surd>> table_;
};

// Countable space with a distance rule on indices.
class CountableSpace final : public MetricSpace {
 public:
  using Rule = std::function<Surd(long, long)>;
  CountableSpace(std::string name, Rule rule, long min_index = 1)
      : name_(std::move(name)), rule_(std::move(rule)), min_index_(min_index) {}
  Kind kind() const override { return Kind::Countable; }
  Surd distance(const Point& a, const Point& b) const override;
  bool contains(const Point& p) const override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Rule rule_;
  long min_index_;
};

// Doubly-spaced variant of the discrete metric on the positive integers:
// distance 2 between each odd number and its successor, 1 otherwise.
Surd doubly_spaced_discrete(long k, long l);
SpacePtr doubly_spaced_discrete_space();

// Product-style space of line segments indexed by (k, m); |xi| <= 2^(-k-m-1).
class TwoLevelSpace final : public MetricSpace {
 public:
  Kind kind() const override { return Kind::TwoLevel; }
  Surd distance(const Point& a, const Point& b) const override;
  bool contains(const Point& p) const override;
  std::string name() const override { return "two-level"; }
  static Surd half_width(long k, long m);
  static SpacePtr instance();
};

}  // namespace modelab
