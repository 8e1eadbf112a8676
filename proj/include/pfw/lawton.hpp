#pragma once

// Reduced Lawton systems on a finite support: which k in A Z^d generate a
// non-trivial equation sum_n h_n conj(h_{n+k}) = delta_{0k}, and a canonical
// choice of one generator per distinct equation.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pfw/encode.hpp"
#include "pfw/error.hpp"
#include "pfw/intlat.hpp"

namespace pfw {

/// Finite, non-empty set of lattice points of one dimension, kept sorted.
class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(std::vector<LatticePoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw Error(Errc::InvalidInput, "support set is empty");
    const std::size_t d = points_.front().dim();
    if (d == 0) throw Error(Errc::InvalidInput, "support points have dimension 0");
    for (const auto& p : points_)
      if (p.dim() != d) {
        throw Error(Errc::DimensionMismatch, "support point " + p.str() + " is not of dimension " +
                                                 std::to_string(d));
      }
    std::sort(points_.begin(), points_.end());
    auto dup = std::adjacent_find(points_.begin(), points_.end());
    if (dup != points_.end()) throw Error(Errc::InvalidInput, "duplicate support point " + dup->str());
  }

  std::size_t dim() const { return points_.front().dim(); }
  std::size_t size() const { return points_.size(); }
  const std::vector<LatticePoint>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  bool contains(const LatticePoint& p) const {
    return std::binary_search(points_.begin(), points_.end(), p);
  }
  bool is_subset_of(const SupportSet& other) const {
    return std::includes(other.points_.begin(), other.points_.end(), points_.begin(), points_.end());
  }

  friend bool operator==(const SupportSet& a, const SupportSet& b) { return a.points_ == b.points_; }

 private:
  std::vector<LatticePoint> points_;
};

using IndexPair = std::pair<LatticePoint, LatticePoint>;

struct Equation {
  LatticePoint k;
  std::vector<IndexPair> pairs;  // (n, n + k), sorted by n
  int rhs = 0;
};

struct ReducedSystem {
  SupportSet support;
  DilationMatrix matrix;
  std::vector<LatticePoint> index_set;  // canonical generators, ascending sigma
  std::map<LatticePoint, Equation> equations;
  int window_exponent = 1;  // N whose window (-2^N, 2^N)^d holds the adapted differences

  const Equation& equation(const LatticePoint& k) const {
    auto it = equations.find(k);
    if (it == equations.end()) throw Error(Errc::DomainMismatch, "no equation generated by " + k.str());
    return it->second;
  }
};

namespace detail {

inline void require_dim(const SupportSet& s, const DilationMatrix& a) {
  if (s.dim() != a.dim()) {
    throw Error(Errc::DimensionMismatch, "support of dimension " + std::to_string(s.dim()) +
                                             " with a " + std::to_string(a.dim()) + "x" +
                                             std::to_string(a.dim()) + " matrix");
  }
}

inline std::vector<IndexPair> pairs_for(const SupportSet& support, const LatticePoint& k) {
  std::vector<IndexPair> pairs;
  for (const auto& n : support) {
    LatticePoint m = n + k;
    if (support.contains(m)) pairs.emplace_back(n, std::move(m));
  }
  return pairs;
}

/// Rightmost nonzero coordinate positive (or the zero vector).
inline bool has_canonical_sign(const LatticePoint& adapted) {
  for (auto it = adapted.coords().rbegin(); it != adapted.coords().rend(); ++it) {
    if (*it > 0) return true;
    if (*it < 0) return false;
  }
  return true;
}

}  // namespace detail

/// The equation generated by k, or nullopt when it is trivial.
inline std::optional<Equation> generated_equation(const SupportSet& support, const DilationMatrix& a,
                                                  const LatticePoint& k) {
  detail::require_dim(support, a);
  if (!in_AZd(a, k)) throw Error(Errc::NotInAZd, k.str() + " is not in A Z^d");
  auto pairs = detail::pairs_for(support, k);
  if (pairs.empty()) return std::nullopt;
  return Equation{k, std::move(pairs), k.is_zero() ? 1 : 0};
}

inline bool equations_equal_up_to_conjugation(const Equation& e1, const Equation& e2) {
  std::vector<IndexPair> a = e1.pairs, b = e2.pairs;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a == b) return true;
  for (auto& p : b) std::swap(p.first, p.second);
  std::sort(b.begin(), b.end());
  return a == b;
}

inline ReducedSystem build_reduced_system(const SupportSet& support, const DilationMatrix& a) {
  detail::require_dim(support, a);
  const AdaptedChart& chart = a.chart();

  std::set<LatticePoint> generators;
  std::vector<LatticePoint> adapted_differences;
  for (const auto& n : support)
    for (const auto& m : support) {
      LatticePoint k = m - n;
      if (!chart.contains(k)) continue;
      LatticePoint ka = chart.to_adapted(k);
      if (!detail::has_canonical_sign(ka)) continue;
      if (generators.insert(k).second) adapted_differences.push_back(std::move(ka));
    }

  const int N = minimal_open_exponent(adapted_differences);
  const EncodingParams params(static_cast<int>(a.dim()), N);
  std::vector<std::pair<Int, LatticePoint>> keyed;
  keyed.reserve(generators.size());
  for (const auto& k : generators) keyed.emplace_back(sigma(params, chart.to_adapted(k)), k);
  std::sort(keyed.begin(), keyed.end());

  ReducedSystem sys{support, a, {}, {}, N};
  for (auto& [key, k] : keyed) {
    sys.equations.emplace(k, Equation{k, detail::pairs_for(support, k), k.is_zero() ? 1 : 0});
    sys.index_set.push_back(std::move(k));
  }
  return sys;
}

/// The unique part of parent's index set that indexes the system on `sub`.
inline std::vector<LatticePoint> restrict_index_set(const ReducedSystem& parent, const SupportSet& sub) {
  if (sub.dim() != parent.support.dim() || !sub.is_subset_of(parent.support)) {
    throw Error(Errc::NotSubset, "sub-support is not contained in the parent support");
  }
  std::vector<LatticePoint> out;
  for (const auto& k : parent.index_set)
    if (!detail::pairs_for(sub, k).empty()) out.push_back(k);
  return out;
}

}  // namespace pfw
