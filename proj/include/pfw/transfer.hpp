#pragma once

// Moving a finite scaling filter between dilation matrices of any dimension
// through an explicit isomorphism of reduced Lawton systems:
//
//   d -> 1 : shift the support into [0, 2^N)^d (adapted chart), encode with theta
//   1 -> s : shift min to 0, decode with theta^{-1} in the target's chart
//   d -> s : composition of the two
//
// Every constructed witness is re-checked with verify_isomorphism before it is
// returned.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfw/encode.hpp"
#include "pfw/error.hpp"
#include "pfw/filter.hpp"
#include "pfw/intlat.hpp"
#include "pfw/lawton.hpp"

namespace pfw {

/// theta on supports, eta on index sets.
struct IsoMap {
  std::map<LatticePoint, LatticePoint> theta;
  std::map<LatticePoint, LatticePoint> eta;

  static IsoMap identity(const ReducedSystem& sys) {
    IsoMap iso;
    for (const auto& n : sys.support) iso.theta.emplace(n, n);
    for (const auto& k : sys.index_set) iso.eta.emplace(k, k);
    return iso;
  }

  /// second after first.
  static IsoMap compose(const IsoMap& first, const IsoMap& second) {
    IsoMap out;
    for (const auto& [a, b] : first.theta) {
      auto it = second.theta.find(b);
      if (it == second.theta.end()) throw Error(Errc::DomainMismatch, "theta composition at " + b.str());
      out.theta.emplace(a, it->second);
    }
    for (const auto& [a, b] : first.eta) {
      auto it = second.eta.find(b);
      if (it == second.eta.end()) throw Error(Errc::DomainMismatch, "eta composition at " + b.str());
      out.eta.emplace(a, it->second);
    }
    return out;
  }

  IsoMap inverse() const {
    IsoMap out;
    for (const auto& [a, b] : theta)
      if (!out.theta.emplace(b, a).second) throw Error(Errc::DomainMismatch, "theta is not injective");
    for (const auto& [a, b] : eta)
      if (!out.eta.emplace(b, a).second) throw Error(Errc::DomainMismatch, "eta is not injective");
    return out;
  }
};

struct TransferReport {
  ReducedSystem source;
  ReducedSystem target;
  IsoMap iso;
  LatticePoint shift_used;         // source-side translation removed before encoding
  int n_used = 0;                  // window exponent of the d -> 1 leg (0 if absent)
  std::optional<int> n_prime_used; // window exponent of the 1 -> s leg
  Filter source_filter;
  Filter target_filter;
};

/// Translates the support by -n0, n0 the coordinatewise minimum. Returns the
/// translated filter and n0.
inline std::pair<Filter, LatticePoint> shift_normalize(const Filter& filter) {
  LatticePoint n0 = filter.coeffs().begin()->first;
  for (const auto& [n, c] : filter.coeffs())
    for (std::size_t j = 0; j < n.dim(); ++j) n0[j] = std::min(n0[j], n[j]);
  std::vector<std::pair<LatticePoint, Coeff>> shifted;
  shifted.reserve(filter.coeffs().size());
  for (const auto& [n, c] : filter.coeffs()) shifted.emplace_back(n - n0, c);
  return {Filter(filter.matrix(), shifted), n0};
}

/// Definition-level check: theta(sysA.support) = sysB.support, eta(index set A)
/// = index set B, both bijective, and each equation of A maps pairwise under
/// theta onto the equation of B at eta(k), up to transposition.
inline bool verify_isomorphism(const ReducedSystem& sys_a, const ReducedSystem& sys_b, const IsoMap& iso) {
  {
    std::vector<LatticePoint> keys;
    for (const auto& [n, m] : iso.theta) keys.push_back(n);
    if (keys != sys_a.support.points()) {
      throw Error(Errc::DomainMismatch, "theta domain differs from the source support");
    }
    std::set<LatticePoint> index_keys, index_a(sys_a.index_set.begin(), sys_a.index_set.end());
    for (const auto& [k, l] : iso.eta) index_keys.insert(k);
    if (index_keys != index_a) throw Error(Errc::DomainMismatch, "eta domain differs from the source index set");
  }

  std::set<LatticePoint> theta_image, eta_image;
  for (const auto& [n, m] : iso.theta) theta_image.insert(m);
  for (const auto& [k, l] : iso.eta) eta_image.insert(l);
  if (theta_image.size() != iso.theta.size() || eta_image.size() != iso.eta.size()) return false;
  if (!std::equal(theta_image.begin(), theta_image.end(), sys_b.support.begin(), sys_b.support.end()) ||
      theta_image.size() != sys_b.support.size()) {
    return false;
  }
  if (eta_image != std::set<LatticePoint>(sys_b.index_set.begin(), sys_b.index_set.end())) return false;

  for (const auto& k : sys_a.index_set) {
    const LatticePoint& l = iso.eta.at(k);
    const Equation& src = sys_a.equation(k);
    Equation mapped{l, {}, l.is_zero() ? 1 : 0};
    mapped.pairs.reserve(src.pairs.size());
    for (const auto& [n, nk] : src.pairs) mapped.pairs.emplace_back(iso.theta.at(n), iso.theta.at(nk));
    const Equation& dst = sys_b.equation(l);
    if (src.rhs != dst.rhs) return false;
    if (!equations_equal_up_to_conjugation(mapped, dst)) return false;
  }
  return true;
}

namespace detail {

inline void require_witness(const ReducedSystem& a, const ReducedSystem& b, const IsoMap& iso) {
  if (!verify_isomorphism(a, b, iso)) throw std::logic_error("constructed isomorphism witness failed");
}

inline LatticePoint scalar_point(Int v) { return LatticePoint(std::vector<Int>{std::move(v)}); }

}  // namespace detail

/// d -> 1: an isomorphic filter for the 1x1 matrix [2].
inline TransferReport to_one_d(const Filter& filter) {
  const DilationMatrix& a = filter.matrix();
  const AdaptedChart& chart = a.chart();
  const std::size_t d = a.dim();

  std::map<LatticePoint, LatticePoint> adapted;
  for (const auto& [n, c] : filter.coeffs()) adapted.emplace(n, chart.to_adapted(n));
  LatticePoint n0 = adapted.begin()->second;
  for (const auto& [n, p] : adapted)
    for (std::size_t j = 0; j < d; ++j) n0[j] = std::min(n0[j], p[j]);

  std::vector<LatticePoint> shifted;
  for (auto& [n, p] : adapted) {
    p -= n0;
    shifted.push_back(p);
  }
  const int N = minimal_support_exponent(shifted);
  const EncodingParams params(static_cast<int>(d), N);

  IsoMap iso;
  std::vector<std::pair<LatticePoint, Coeff>> coeffs;
  for (const auto& [n, c] : filter.coeffs()) {
    LatticePoint m = detail::scalar_point(theta(params, adapted.at(n)));
    iso.theta.emplace(n, m);
    coeffs.emplace_back(std::move(m), c);
  }
  ReducedSystem source = build_reduced_system(filter.support(), a);
  for (const auto& k : source.index_set)
    iso.eta.emplace(k, detail::scalar_point(eta(params, chart.to_adapted(k))));

  Filter target_filter(DilationMatrix::dyadic_1d(), coeffs);
  ReducedSystem target = build_reduced_system(target_filter.support(), target_filter.matrix());
  detail::require_witness(source, target, iso);
  return {std::move(source), std::move(target), std::move(iso), chart.from_adapted(n0), N,
          std::nullopt, filter, std::move(target_filter)};
}

/// 1 -> s: an isomorphic filter for the s x s matrix `b`.
inline TransferReport from_one_d(const Filter& filter1, const DilationMatrix& b) {
  if (filter1.dim() != 1) {
    throw Error(Errc::NotOneDimensional, "source filter has dimension " + std::to_string(filter1.dim()));
  }
  const AdaptedChart& chart = b.chart();
  const std::size_t s = b.dim();

  const Int m0 = filter1.coeffs().begin()->first[0];
  const Int largest = filter1.coeffs().rbegin()->first[0] - m0;
  int N = 1;
  if (s == 1) {
    while (pow2(static_cast<unsigned>(N)) <= largest) ++N;
  } else {
    while (pow2(static_cast<unsigned>(N + 1)) - 1 < largest) ++N;
  }
  const EncodingParams params(static_cast<int>(s), N);

  IsoMap iso;
  std::vector<std::pair<LatticePoint, Coeff>> coeffs;
  for (const auto& [m, c] : filter1.coeffs()) {
    auto pa = theta_inverse(params, m[0] - m0);
    if (!pa) throw std::logic_error("value " + Int(m[0] - m0).str() + " outside the encoded window");
    LatticePoint n = chart.from_adapted(*pa);
    iso.theta.emplace(m, n);
    coeffs.emplace_back(std::move(n), c);
  }

  Filter target_filter(b, coeffs);
  ReducedSystem source = build_reduced_system(filter1.support(), filter1.matrix());
  ReducedSystem target = build_reduced_system(target_filter.support(), b);
  std::map<LatticePoint, LatticePoint> eta_back;
  for (const auto& k : target.index_set)
    eta_back.emplace(detail::scalar_point(eta(params, chart.to_adapted(k))), k);
  for (const auto& l : source.index_set) {
    auto it = eta_back.find(l);
    if (it == eta_back.end()) throw std::logic_error("index " + l.str() + " has no preimage under eta");
    iso.eta.emplace(l, it->second);
  }
  detail::require_witness(source, target, iso);
  return {std::move(source), std::move(target), std::move(iso), detail::scalar_point(m0), 0, N,
          filter1, std::move(target_filter)};
}

/// d -> s through the 1-dimensional filter.
inline TransferReport transfer(const Filter& filter_a, const DilationMatrix& b) {
  TransferReport down = to_one_d(filter_a);
  TransferReport up = from_one_d(down.target_filter, b);
  IsoMap iso = IsoMap::compose(down.iso, up.iso);
  detail::require_witness(down.source, up.target, iso);
  return {std::move(down.source), std::move(up.target), std::move(iso), std::move(down.shift_used),
          down.n_used, up.n_prime_used, filter_a, std::move(up.target_filter)};
}

}  // namespace pfw
