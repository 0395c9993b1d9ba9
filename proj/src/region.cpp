#include "lep/region.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "lep/errors.hpp"

namespace lep {

namespace {

constexpr int kSectionSamples = 512;
constexpr int kBisectionSteps = 40;

/// Locates {s in [lo, hi] : g(s)} from a uniform sample refined by
/// bisection at every sign change. Features narrower than the sample
/// spacing can be missed.
IntervalSet sample_section(const std::function<bool(double)>& g, double lo, double hi, int n) {
  IntervalSet out;
  const double h = (hi - lo) / n;
  bool prev = g(lo);
  double start = lo;
  double prev_s = lo;
  for (int k = 1; k <= n; ++k) {
    const double s = (k == n) ? hi : lo + h * k;
    const bool cur = g(s);
    if (cur != prev) {
      double a = prev_s;
      double b = s;
      for (int it = 0; it < kBisectionSteps; ++it) {
        const double m = 0.5 * (a + b);
        if (g(m) == prev) {
          a = m;
        } else {
          b = m;
        }
      }
      const double edge = 0.5 * (a + b);
      if (prev) {
        out.add(start, edge);
      } else {
        start = edge;
      }
      prev = cur;
    }
    prev_s = s;
  }
  if (prev) out.add(start, hi);
  return out;
}

IntervalSet apply(CylinderRegion::Op op, const IntervalSet& a, const IntervalSet& b) {
  switch (op) {
    case CylinderRegion::Op::Union:
      return a | b;
    case CylinderRegion::Op::Intersection:
      return a & b;
    case CylinderRegion::Op::Difference:
      return a - b;
    case CylinderRegion::Op::SymmetricDifference:
      return a ^ b;
  }
  return {};
}

bool apply(CylinderRegion::Op op, bool a, bool b) {
  switch (op) {
    case CylinderRegion::Op::Union:
      return a || b;
    case CylinderRegion::Op::Intersection:
      return a && b;
    case CylinderRegion::Op::Difference:
      return a && !b;
    case CylinderRegion::Op::SymmetricDifference:
      return a != b;
  }
  return false;
}

IntervalSet band_section(double f) {
  if (f > 0.0) return IntervalSet{0.0, std::min(f, 1.0)};
  if (f < 0.0) return IntervalSet{std::max(f, -1.0), 0.0};
  return {};
}

bool band_contains(double f, double s) { return (s > 0.0 && s <= f) || (s > f && s <= 0.0); }

}  // namespace

struct BandNode {
  BoundaryFunction f;
};

struct SBandNode {
  IntervalSet s;
  std::optional<IntervalSet> theta;
};

struct GridNode {
  Raster raster;
};

struct TauNode {
  ConvexBody body;
  double eps;
  AmbientSet member;

  bool in_image(double theta, double s) const {
    if (s < 0.0 && !body.is_disc() && -s * eps > local_reach(body, theta)) return false;
    return true;
  }
};

struct CompositeNode {
  CylinderRegion::Op op;
  CylinderRegion lhs;
  CylinderRegion rhs;
};

struct CylinderRegion::Node {
  std::variant<BandNode, SBandNode, GridNode, TauNode, CompositeNode> v;
};

// ---------------------------------------------------------------- Raster

Raster::Raster(std::size_t n_theta, std::size_t n_s, double perimeter)
    : n_theta_(n_theta), n_s_(n_s), perimeter_(perimeter) {
  if (n_theta == 0 || n_s == 0 || !(perimeter > 0.0)) {
    throw std::invalid_argument("raster needs a positive resolution and perimeter");
  }
  bits_.assign((n_theta * n_s + 63) / 64, 0);
}

bool Raster::get(std::size_t i, std::size_t j) const {
  const std::size_t k = i * n_s_ + j;
  return (bits_[k >> 6] >> (k & 63)) & 1u;
}

void Raster::set(std::size_t i, std::size_t j, bool value) {
  const std::size_t k = i * n_s_ + j;
  const std::uint64_t mask = std::uint64_t{1} << (k & 63);
  if (value) {
    bits_[k >> 6] |= mask;
  } else {
    bits_[k >> 6] &= ~mask;
  }
}

std::size_t Raster::column_of(double theta) const {
  double t = std::fmod(theta, perimeter_);
  if (t < 0.0) t += perimeter_;
  const auto i = static_cast<std::size_t>(t / cell_theta());
  return std::min(i, n_theta_ - 1);
}

std::size_t Raster::row_of(double s) const {
  const double pos = (std::clamp(s, -1.0, 1.0) + 1.0) / cell_s();
  return std::min(static_cast<std::size_t>(pos), n_s_ - 1);
}

IntervalSet Raster::column_section(std::size_t i) const {
  IntervalSet out;
  std::size_t j = 0;
  while (j < n_s_) {
    if (!get(i, j)) {
      ++j;
      continue;
    }
    const std::size_t start = j;
    while (j < n_s_ && get(i, j)) ++j;
    out.add(-1.0 + cell_s() * static_cast<double>(start), -1.0 + cell_s() * static_cast<double>(j));
  }
  return out;
}

std::size_t Raster::count() const {
  std::size_t total = 0;
  for (auto w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t Raster::count_xor(const Raster& other) const {
  if (other.n_theta_ != n_theta_ || other.n_s_ != n_s_) {
    throw std::invalid_argument("raster resolutions differ");
  }
  std::size_t total = 0;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    total += static_cast<std::size_t>(std::popcount(bits_[k] ^ other.bits_[k]));
  }
  return total;
}

Raster Raster::rasterize(const CylinderRegion& region, std::size_t n_theta, std::size_t n_s,
                         double perimeter) {
  Raster r(n_theta, n_s, perimeter);
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double theta = r.theta_mid(i);
    for (std::size_t j = 0; j < n_s; ++j) {
      bool in = false;
      try {
        in = region.contains(theta, r.s_mid(j));
      } catch (const NormalUndefinedAtCorner&) {
        in = false;
      }
      if (in) r.set(i, j, true);
    }
  }
  return r;
}

// -------------------------------------------------------- CylinderRegion

CylinderRegion CylinderRegion::band(BoundaryFunction f, double perimeter) {
  if (!f) throw std::invalid_argument("band needs a boundary function");
  constexpr int kProbe = 4096;
  for (int k = 0; k < kProbe; ++k) {
    const double v = f(perimeter * (k + 0.5) / kProbe);
    if (!(std::abs(v) <= 1.0 + 1e-12)) {
      throw std::invalid_argument("band function leaves [-1, 1]");
    }
  }
  return CylinderRegion(std::make_shared<const Node>(Node{BandNode{std::move(f)}}));
}

CylinderRegion CylinderRegion::band_clamped(BoundaryFunction f) {
  if (!f) throw std::invalid_argument("band needs a boundary function");
  BoundaryFunction g = [f = std::move(f)](double t) { return std::clamp(f(t), -1.0, 1.0); };
  return CylinderRegion(std::make_shared<const Node>(Node{BandNode{std::move(g)}}));
}

CylinderRegion CylinderRegion::sband(IntervalSet s, std::optional<IntervalSet> theta) {
  return CylinderRegion(
      std::make_shared<const Node>(Node{SBandNode{s.clipped(-1.0, 1.0), std::move(theta)}}));
}

CylinderRegion CylinderRegion::grid(Raster raster) {
  return CylinderRegion(std::make_shared<const Node>(Node{GridNode{std::move(raster)}}));
}

CylinderRegion CylinderRegion::tau_image(const ConvexBody& body, double eps, AmbientSet member) {
  require_eps(body, eps);
  if (!member) throw std::invalid_argument("tau_image needs a membership predicate");
  return CylinderRegion(
      std::make_shared<const Node>(Node{TauNode{body, eps, std::move(member)}}));
}

CylinderRegion CylinderRegion::combine(Op op, const CylinderRegion& a, const CylinderRegion& b) {
  return CylinderRegion(std::make_shared<const Node>(Node{CompositeNode{op, a, b}}));
}

CylinderRegion operator|(const CylinderRegion& a, const CylinderRegion& b) {
  return CylinderRegion::combine(CylinderRegion::Op::Union, a, b);
}
CylinderRegion operator&(const CylinderRegion& a, const CylinderRegion& b) {
  return CylinderRegion::combine(CylinderRegion::Op::Intersection, a, b);
}
CylinderRegion operator-(const CylinderRegion& a, const CylinderRegion& b) {
  return CylinderRegion::combine(CylinderRegion::Op::Difference, a, b);
}
CylinderRegion operator^(const CylinderRegion& a, const CylinderRegion& b) {
  return CylinderRegion::combine(CylinderRegion::Op::SymmetricDifference, a, b);
}

CylinderRegion::Kind CylinderRegion::kind() const {
  return static_cast<Kind>(node_->v.index());
}

const BoundaryFunction* CylinderRegion::band_function() const {
  const auto* b = std::get_if<BandNode>(&node_->v);
  return b ? &b->f : nullptr;
}

const IntervalSet* CylinderRegion::sband_intervals() const {
  const auto* b = std::get_if<SBandNode>(&node_->v);
  return (b && !b->theta) ? &b->s : nullptr;
}

bool CylinderRegion::contains(double theta, double s) const {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BandNode>) {
          return band_contains(n.f(theta), s);
        } else if constexpr (std::is_same_v<T, SBandNode>) {
          return n.s.contains(s) && (!n.theta || n.theta->contains(theta));
        } else if constexpr (std::is_same_v<T, GridNode>) {
          return n.raster.get(n.raster.column_of(theta), n.raster.row_of(s));
        } else if constexpr (std::is_same_v<T, TauNode>) {
          if (!n.in_image(theta, s)) return false;
          return n.member(unmagnify(n.body, n.eps, {theta, s}));
        } else {
          return apply(n.op, n.lhs.contains(theta, s), n.rhs.contains(theta, s));
        }
      },
      node_->v);
}

bool CylinderRegion::contains(const LocalPoint& p) const {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TauNode>) {
          return n.member(p.ambient);
        } else if constexpr (std::is_same_v<T, CompositeNode>) {
          return apply(n.op, n.lhs.contains(p), n.rhs.contains(p));
        } else {
          return contains(p.cyl.theta, p.cyl.s);
        }
      },
      node_->v);
}

IntervalSet CylinderRegion::section(double theta) const {
  return std::visit(
      [&](const auto& n) -> IntervalSet {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BandNode>) {
          return band_section(n.f(theta));
        } else if constexpr (std::is_same_v<T, SBandNode>) {
          if (n.theta && !n.theta->contains(theta)) return {};
          return n.s;
        } else if constexpr (std::is_same_v<T, GridNode>) {
          return n.raster.column_section(n.raster.column_of(theta));
        } else if constexpr (std::is_same_v<T, TauNode>) {
          auto g = [&](double s) {
            if (!n.in_image(theta, s)) return false;
            try {
              return n.member(unmagnify(n.body, n.eps, {theta, s}));
            } catch (const NormalUndefinedAtCorner&) {
              return false;
            }
          };
          return sample_section(g, -1.0, 1.0, kSectionSamples);
        } else {
          return apply(n.op, n.lhs.section(theta), n.rhs.section(theta));
        }
      },
      node_->v);
}

IntervalSet CylinderRegion::corner_section(const Corner& corner, double phi) const {
  return std::visit(
      [&](const auto& n) -> IntervalSet {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TauNode>) {
          const Vec2 u{std::cos(phi), std::sin(phi)};
          auto g = [&](double s) { return s > 0.0 && n.member(corner.vertex + u * (s * n.eps)); };
          return sample_section(g, 0.0, 1.0, kSectionSamples / 2);
        } else if constexpr (std::is_same_v<T, CompositeNode>) {
          return apply(n.op, n.lhs.corner_section(corner, phi), n.rhs.corner_section(corner, phi));
        } else {
          return section(corner.theta).clipped(0.0, 1.0);
        }
      },
      node_->v);
}

bool CylinderRegion::depends_on_normal() const {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TauNode>) {
          return true;
        } else if constexpr (std::is_same_v<T, CompositeNode>) {
          return n.lhs.depends_on_normal() || n.rhs.depends_on_normal();
        } else {
          return false;
        }
      },
      node_->v);
}

void CylinderRegion::collect_breakpoints(std::vector<double>& out) const {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SBandNode>) {
          if (n.theta) {
            for (const auto& [lo, hi] : n.theta->pieces()) {
              out.push_back(lo);
              out.push_back(hi);
            }
          }
        } else if constexpr (std::is_same_v<T, GridNode>) {
          for (std::size_t i = 0; i <= n.raster.n_theta(); ++i) {
            out.push_back(n.raster.cell_theta() * static_cast<double>(i));
          }
        } else if constexpr (std::is_same_v<T, CompositeNode>) {
          n.lhs.collect_breakpoints(out);
          n.rhs.collect_breakpoints(out);
        }
      },
      node_->v);
}

}  // namespace lep
