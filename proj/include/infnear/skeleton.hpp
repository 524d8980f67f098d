#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infnear/errors.hpp"

namespace infnear {

/// Position of a point in the admissible order of its cluster. Index 0 is the
/// origin O.
struct PointId {
  std::size_t index = 0;

  friend auto operator<=>(const PointId&, const PointId&) = default;
};

inline constexpr std::size_t kMissingTarget = std::numeric_limits<std::size_t>::max();

/// One infinitely near point. `proximities[0]` is the parent (the point in
/// whose first neighbourhood this point lies); a second entry makes the point
/// satellite. The origin has no proximities.
struct RawPoint {
  std::string tag;
  std::vector<std::size_t> proximities;
};

struct Diagnostic {
  std::size_t point = 0;
  std::string rule;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Unweighted cluster of infinitely near points with its proximity structure.
///
/// The point list is kept in insertion order, which must be admissible
/// (parents and proximity targets before the points proximate to them).
/// A skeleton may be built from raw data that violates the cluster axioms;
/// `validate` lists the violations and every algorithm calls `require_valid`
/// first.
class ClusterSkeleton {
 public:
  ClusterSkeleton() = default;

  static ClusterSkeleton with_origin(std::string tag = "O") {
    ClusterSkeleton s;
    s.points_.push_back(RawPoint{std::move(tag), {}});
    s.reindex();
    return s;
  }

  /// No validation; use `validate` afterwards.
  static ClusterSkeleton from_raw(std::vector<RawPoint> points) {
    ClusterSkeleton s;
    s.points_ = std::move(points);
    s.reindex();
    return s;
  }

  PointId add_free(PointId parent, std::string tag = {}) {
    check_existing(parent);
    return push(std::move(tag), {parent.index});
  }

  /// Satellite point in the first neighbourhood of `parent`, also proximate to
  /// `other` (which must be a proximity target of `parent`).
  PointId add_satellite(PointId parent, PointId other, std::string tag = {}) {
    check_existing(parent);
    check_existing(other);
    return push(std::move(tag), {parent.index, other.index});
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  const std::vector<RawPoint>& raw() const { return points_; }
  const std::string& tag(PointId p) const { return points_.at(p.index).tag; }

  std::optional<PointId> find(std::string_view tag) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (points_[i].tag == tag) return PointId{i};
    return std::nullopt;
  }

  PointId at_tag(std::string_view tag) const {
    auto p = find(tag);
    if (!p) throw InputError("unknown point '" + std::string(tag) + "'");
    return *p;
  }

  bool is_origin(PointId p) const { return points_.at(p.index).proximities.empty(); }

  PointId parent(PointId p) const {
    const auto& prox = points_.at(p.index).proximities;
    if (prox.empty()) throw InputError("the origin has no parent");
    return PointId{prox.front()};
  }

  /// Points `p` is proximate to, parent first.
  std::vector<PointId> proximities(PointId p) const {
    std::vector<PointId> out;
    for (auto q : points_.at(p.index).proximities) out.push_back(PointId{q});
    return out;
  }

  /// Points proximate to `q`, in admissible order.
  const std::vector<std::size_t>& proximate_to(PointId q) const { return proximate_to_.at(q.index); }

  /// r_q: number of points of the cluster proximate to q.
  std::size_t proximate_count(PointId q) const { return proximate_to_.at(q.index).size(); }

  bool is_proximate(PointId p, PointId q) const {
    const auto& prox = points_.at(p.index).proximities;
    return std::find(prox.begin(), prox.end(), q.index) != prox.end();
  }

  bool is_satellite(PointId p) const { return points_.at(p.index).proximities.size() == 2; }
  bool is_free(PointId p) const { return points_.at(p.index).proximities.size() == 1; }

  /// p >= q: p is infinitely near or equal to q (q lies on p's parent path).
  bool infinitely_near_or_equal(PointId p, PointId q) const {
    std::size_t cur = p.index;
    while (true) {
      if (cur == q.index) return true;
      const auto& prox = points_[cur].proximities;
      if (prox.empty() || prox.front() >= cur) return false;
      cur = prox.front();
    }
  }

  bool infinitely_near(PointId p, PointId q) const { return p != q && infinitely_near_or_equal(p, q); }

  /// Ancestors of p in the parent tree, origin first, p included.
  std::vector<PointId> predecessors(PointId p) const {
    std::vector<PointId> out;
    std::size_t cur = p.index;
    out.push_back(PointId{cur});
    while (!points_[cur].proximities.empty()) {
      cur = points_[cur].proximities.front();
      out.push_back(PointId{cur});
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::vector<PointId> children(PointId p) const {
    std::vector<PointId> out;
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (!points_[i].proximities.empty() && points_[i].proximities.front() == p.index) out.push_back(PointId{i});
    return out;
  }

  /// Cluster axioms. Empty result iff the skeleton is a valid single-origin
  /// cluster in admissible order.
  std::vector<Diagnostic> validate() const {
    std::vector<Diagnostic> out;
    auto report = [&](std::size_t p, std::string rule, std::string msg) {
      out.push_back(Diagnostic{p, std::move(rule), std::move(msg)});
    };
    if (points_.empty()) {
      report(0, "empty-cluster", "a cluster needs an origin");
      return out;
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j)
        if (!points_[i].tag.empty() && points_[i].tag == points_[j].tag)
          report(i, "duplicate-tag", "tag '" + points_[i].tag + "' already used");
    }
    if (!points_[0].proximities.empty()) report(0, "origin-first", "the first point must be the origin");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      const auto& prox = points_[i].proximities;
      const std::string name = label(i);
      if (prox.empty()) {
        report(i, "single-origin", name + " has no parent; only one origin is allowed");
        continue;
      }
      if (prox.size() > 2) report(i, "too-many-proximities", name + " is proximate to more than two points");
      bool structural_ok = prox.size() <= 2;
      for (auto q : prox) {
        if (q == kMissingTarget || q >= points_.size()) {
          report(i, "proximity-target-missing", name + " is proximate to a point not in the cluster");
          structural_ok = false;
        } else if (q >= i) {
          report(i, "admissible-order", name + " is proximate to " + label(q) + ", which does not precede it");
          structural_ok = false;
        }
      }
      if (prox.size() == 2 && prox[0] == prox[1]) {
        report(i, "duplicate-proximity", name + " lists the same proximity target twice");
        structural_ok = false;
      }
      if (!structural_ok || prox.size() != 2) continue;
      const auto& parent_prox = points_[prox[0]].proximities;
      if (std::find(parent_prox.begin(), parent_prox.end(), prox[1]) == parent_prox.end())
        report(i, "proximity-inheritance",
               name + " is proximate to " + label(prox[1]) + " but its parent " + label(prox[0]) + " is not");
      for (std::size_t j = 1; j < i; ++j) {
        const auto& other = points_[j].proximities;
        if (other.size() == 2 && other[0] == prox[0] && other[1] == prox[1]) {
          report(i, "duplicate-satellite", name + " is the same point as " + label(j));
          break;
        }
      }
    }
    return out;
  }

  bool is_valid() const { return validate().empty(); }

  void require_valid() const {
    auto diags = validate();
    if (!diags.empty()) throw InputError("invalid cluster: " + diags.front().message);
  }

  friend bool operator==(const ClusterSkeleton& a, const ClusterSkeleton& b) {
    if (a.points_.size() != b.points_.size()) return false;
    for (std::size_t i = 0; i < a.points_.size(); ++i)
      if (a.points_[i].tag != b.points_[i].tag || a.points_[i].proximities != b.points_[i].proximities) return false;
    return true;
  }

  std::string label(std::size_t i) const {
    if (i < points_.size() && !points_[i].tag.empty()) return points_[i].tag;
    return "#" + std::to_string(i);
  }
  std::string label(PointId p) const { return label(p.index); }

 private:
  std::vector<RawPoint> points_;
  std::vector<std::vector<std::size_t>> proximate_to_;

  void check_existing(PointId p) const {
    if (p.index >= points_.size()) throw InputError("point index out of range");
  }

  PointId push(std::string tag, std::vector<std::size_t> prox) {
    if (tag.empty()) tag = "x" + std::to_string(points_.size());
    points_.push_back(RawPoint{std::move(tag), std::move(prox)});
    reindex();
    return PointId{points_.size() - 1};
  }

  void reindex() {
    proximate_to_.assign(points_.size(), {});
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (auto q : points_[i].proximities)
        if (q < points_.size() && q != i) proximate_to_[q].push_back(i);
  }
};

/// Square integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t n) : n_(n), data_(n * n, 0) {}

  std::size_t size() const { return n_; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::vector<std::int64_t> row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * n_), data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_)};
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  IntMatrix transposed() const {
    IntMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  std::vector<std::int64_t> apply(std::span<const std::int64_t> x) const {
    std::vector<std::int64_t> y(n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  /// Inverse of a unit lower triangular matrix by forward substitution; the
  /// result is integral.
  IntMatrix unit_lower_inverse() const {
    IntMatrix inv(n_);
    for (std::size_t col = 0; col < n_; ++col) {
      for (std::size_t i = 0; i < n_; ++i) {
        std::int64_t acc = i == col ? 1 : 0;
        for (std::size_t k = 0; k < i; ++k) acc -= (*this)(i, k) * inv(k, col);
        inv(i, col) = acc;  // unit diagonal
      }
    }
    return inv;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> data_;
};

/// P[p][p] = 1, P[p][q] = -1 iff p is proximate to q.
inline IntMatrix proximity_matrix(const ClusterSkeleton& k) {
  k.require_valid();
  IntMatrix m = IntMatrix::identity(k.size());
  for (std::size_t p = 0; p < k.size(); ++p)
    for (auto q : k.raw()[p].proximities) m(p, q) = -1;
  return m;
}

/// p is proximate to q and no point of the cluster infinitely near to p is
/// proximate to q.
inline bool is_mK_proximate(const ClusterSkeleton& k, PointId p, PointId q) {
  if (!k.is_proximate(p, q)) return false;
  for (auto r : k.proximate_to(q))
    if (r != p.index && k.infinitely_near(PointId{r}, p)) return false;
  return true;
}

inline std::size_t mK_proximity_count(const ClusterSkeleton& k, PointId p) {
  std::size_t n = 0;
  for (auto q : k.proximities(p))
    if (is_mK_proximate(k, p, q)) ++n;
  return n;
}

inline bool is_mK_free(const ClusterSkeleton& k, PointId p) { return mK_proximity_count(k, p) == 1; }
inline bool is_mK_satellite(const ClusterSkeleton& k, PointId p) { return mK_proximity_count(k, p) == 2; }

/// Sub-skeleton on a predecessor- and proximity-closed subset of points.
struct Restriction {
  ClusterSkeleton skeleton;
  std::vector<PointId> to_parent;  ///< new index -> index in the source skeleton
  std::vector<std::optional<PointId>> from_parent;
};

inline Restriction restrict_to(const ClusterSkeleton& k, const std::vector<bool>& keep) {
  Restriction r;
  r.from_parent.assign(k.size(), std::nullopt);
  std::vector<RawPoint> pts;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!keep.at(i)) continue;
    RawPoint rp{k.raw()[i].tag, {}};
    for (auto q : k.raw()[i].proximities) {
      if (!r.from_parent[q]) throw InputError("restriction is not closed under proximity");
      rp.proximities.push_back(r.from_parent[q]->index);
    }
    r.from_parent[i] = PointId{pts.size()};
    r.to_parent.push_back(PointId{i});
    pts.push_back(std::move(rp));
  }
  r.skeleton = ClusterSkeleton::from_raw(std::move(pts));
  return r;
}

/// Smallest superset of `mask` closed under parents and proximity targets.
inline std::vector<bool> proximity_closure(const ClusterSkeleton& k, std::vector<bool> mask) {
  for (std::size_t i = k.size(); i-- > 0;) {
    if (!mask[i]) continue;
    for (auto q : k.raw()[i].proximities) mask[q] = true;
  }
  return mask;
}

/// Reorders points into a canonical admissible order: depth-first from the
/// origin, children sorted by subtree size and then by tag. Two skeletons that
/// differ only by an order-preserving relabelling of the same tagged points
/// have equal canonical forms. The returned permutation maps new -> old.
inline std::vector<PointId> canonical_order(const ClusterSkeleton& k) {
  k.require_valid();
  const std::size_t n = k.size();
  std::vector<std::vector<std::size_t>> kids(n);
  for (std::size_t i = 1; i < n; ++i) kids[k.raw()[i].proximities.front()].push_back(i);
  std::vector<std::size_t> subtree(n, 1);
  for (std::size_t i = n; i-- > 1;) subtree[k.raw()[i].proximities.front()] += subtree[i];
  for (auto& c : kids)
    std::sort(c.begin(), c.end(), [&](std::size_t a, std::size_t b) {
      if (subtree[a] != subtree[b]) return subtree[a] < subtree[b];
      return k.raw()[a].tag < k.raw()[b].tag;
    });
  std::vector<PointId> order;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    auto cur = stack.back();
    stack.pop_back();
    order.push_back(PointId{cur});
    for (auto it = kids[cur].rbegin(); it != kids[cur].rend(); ++it) stack.push_back(*it);
  }
  return order;
}

inline ClusterSkeleton permuted(const ClusterSkeleton& k, const std::vector<PointId>& new_to_old) {
  std::vector<std::size_t> old_to_new(k.size());
  for (std::size_t i = 0; i < new_to_old.size(); ++i) old_to_new[new_to_old[i].index] = i;
  std::vector<RawPoint> pts;
  for (auto old : new_to_old) {
    RawPoint rp{k.raw()[old.index].tag, {}};
    for (auto q : k.raw()[old.index].proximities) rp.proximities.push_back(old_to_new[q]);
    pts.push_back(std::move(rp));
  }
  return ClusterSkeleton::from_raw(std::move(pts));
}

inline ClusterSkeleton canonical_form(const ClusterSkeleton& k) { return permuted(k, canonical_order(k)); }

}  // namespace infnear
