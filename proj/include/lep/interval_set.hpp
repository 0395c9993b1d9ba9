#pragma once

#include <utility>
#include <vector>

namespace lep {

/// A finite union of disjoint intervals of the real line, kept sorted.
/// Endpoint openness is not tracked: every consumer integrates against a
/// measure without atoms.
class IntervalSet {
 public:
  using Interval = std::pair<double, double>;

  IntervalSet() = default;
  IntervalSet(double lo, double hi) { add(lo, hi); }
  static IntervalSet from(std::vector<Interval> pieces);

  /// Adds [lo, hi] (ignored when hi <= lo) and merges overlaps.
  void add(double lo, double hi);

  bool empty() const { return pieces_.empty(); }
  const std::vector<Interval>& pieces() const { return pieces_; }
  bool contains(double x) const;

  /// Total length.
  double length() const;
  /// Integral of (1 + slope * x) over the set.
  double integrate_linear(double slope) const;
  /// Integral of x over the set.
  double first_moment() const;

  IntervalSet clipped(double lo, double hi) const;

  friend IntervalSet operator|(const IntervalSet& a, const IntervalSet& b);
  friend IntervalSet operator&(const IntervalSet& a, const IntervalSet& b);
  friend IntervalSet operator-(const IntervalSet& a, const IntervalSet& b);
  friend IntervalSet operator^(const IntervalSet& a, const IntervalSet& b);
  bool operator==(const IntervalSet&) const = default;

 private:
  std::vector<Interval> pieces_;
};

}  // namespace lep
