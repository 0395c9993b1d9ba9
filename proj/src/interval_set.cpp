#include "lep/interval_set.hpp"

#include <algorithm>

namespace lep {

IntervalSet IntervalSet::from(std::vector<Interval> pieces) {
  std::sort(pieces.begin(), pieces.end());
  IntervalSet out;
  for (const auto& [lo, hi] : pieces) {
    if (!(hi > lo)) continue;
    if (!out.pieces_.empty() && lo <= out.pieces_.back().second) {
      out.pieces_.back().second = std::max(out.pieces_.back().second, hi);
    } else {
      out.pieces_.emplace_back(lo, hi);
    }
  }
  return out;
}

void IntervalSet::add(double lo, double hi) {
  if (!(hi > lo)) return;
  if (pieces_.empty() || lo > pieces_.back().second) {
    pieces_.emplace_back(lo, hi);
    return;
  }
  auto all = pieces_;
  all.emplace_back(lo, hi);
  *this = from(std::move(all));
}

bool IntervalSet::contains(double x) const {
  for (const auto& [lo, hi] : pieces_) {
    if (x < lo) return false;
    if (x <= hi) return true;
  }
  return false;
}

double IntervalSet::length() const {
  double total = 0.0;
  for (const auto& [lo, hi] : pieces_) total += hi - lo;
  return total;
}

double IntervalSet::integrate_linear(double slope) const {
  double total = 0.0;
  for (const auto& [lo, hi] : pieces_) total += (hi - lo) + 0.5 * slope * (hi * hi - lo * lo);
  return total;
}

double IntervalSet::first_moment() const {
  double total = 0.0;
  for (const auto& [lo, hi] : pieces_) total += 0.5 * (hi * hi - lo * lo);
  return total;
}

IntervalSet IntervalSet::clipped(double lo, double hi) const {
  IntervalSet out;
  for (const auto& [a, b] : pieces_) {
    const double l = std::max(a, lo);
    const double h = std::min(b, hi);
    if (h > l) out.pieces_.emplace_back(l, h);
  }
  return out;
}

IntervalSet operator|(const IntervalSet& a, const IntervalSet& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  auto all = a.pieces_;
  all.insert(all.end(), b.pieces_.begin(), b.pieces_.end());
  return IntervalSet::from(std::move(all));
}

IntervalSet operator&(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.pieces_.size() && j < b.pieces_.size()) {
    const double lo = std::max(a.pieces_[i].first, b.pieces_[j].first);
    const double hi = std::min(a.pieces_[i].second, b.pieces_[j].second);
    if (hi > lo) out.pieces_.emplace_back(lo, hi);
    if (a.pieces_[i].second < b.pieces_[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

IntervalSet operator-(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  std::size_t j = 0;
  for (auto [lo, hi] : a.pieces_) {
    while (j < b.pieces_.size() && b.pieces_[j].second <= lo) ++j;
    std::size_t k = j;
    double cur = lo;
    while (k < b.pieces_.size() && b.pieces_[k].first < hi) {
      if (b.pieces_[k].first > cur) out.pieces_.emplace_back(cur, b.pieces_[k].first);
      cur = std::max(cur, b.pieces_[k].second);
      if (cur >= hi) break;
      ++k;
    }
    if (cur < hi) out.pieces_.emplace_back(cur, hi);
  }
  return out;
}

IntervalSet operator^(const IntervalSet& a, const IntervalSet& b) { return (a - b) | (b - a); }

}  // namespace lep
