#pragma once

// Lattice-to-integer encodings on bounded windows of Z^d. Every point handled
// here is expressed in the adapted chart of some dilation matrix, where the
// dilated lattice is exactly {(x, 2n)}.
//
//   sigma(n)  = sum_j n_j * 4^{(j-1)N}                   (injective on (-2^N, 2^N)^d)
//   f(x, y)   = floor(y/2) * 2^{(2d-3)N+2} + 2 sigma(x) + (y mod 2)
//   theta = f restricted to the support window [0, 2^N)^d
//   eta   = f restricted to the index window {(x, 2j) : sigma >= 0} in (-2^N, 2^N)^d
//
// For d = 1 all three maps are the identity on Z.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfw/error.hpp"
#include "pfw/intlat.hpp"

namespace pfw {

struct EncodingParams {
  int d = 1;
  int N = 1;

  EncodingParams() = default;
  EncodingParams(int dim, int window_exponent) : d(dim), N(window_exponent) {
    if (d < 1) throw Error(Errc::InvalidInput, "dimension must be >= 1");
    if (N < 1) throw Error(Errc::InvalidInput, "window exponent N must be >= 1");
  }

  /// 4^{(j-1)N}, j = 1..d.
  Int base_weight(int j) const { return pow2(static_cast<unsigned>(2 * (j - 1) * N)); }

  /// 2^{(2d-3)N+2}; defined for d >= 2.
  Int row_stride() const {
    if (d < 2) throw Error(Errc::DimensionTooSmall, "row stride needs d >= 2");
    return pow2(static_cast<unsigned>((2 * d - 3) * N + 2));
  }

  /// 2^N, the half-width of the encoding window.
  Int window() const { return pow2(static_cast<unsigned>(N)); }
};

namespace detail {

inline void require_dim(const EncodingParams& params, const LatticePoint& p, int expected) {
  if (static_cast<int>(p.dim()) != expected) {
    throw Error(Errc::DimensionMismatch, "point " + p.str() + " has dimension " +
                                             std::to_string(p.dim()) + ", expected " +
                                             std::to_string(expected));
  }
  (void)params;
}

inline Int sigma_prefix(const EncodingParams& params, const LatticePoint& n, std::size_t count) {
  Int s = 0;
  for (std::size_t j = 0; j < count; ++j) s += n[j] * params.base_weight(static_cast<int>(j) + 1);
  return s;
}

inline bool in_open_window(const EncodingParams& params, const LatticePoint& p) {
  const Int w = params.window();
  for (const Int& c : p)
    if (c <= -w || c >= w) return false;
  return true;
}

}  // namespace detail

/// Base-4^N positional value of n.
inline Int sigma(const EncodingParams& params, const LatticePoint& n) {
  detail::require_dim(params, n, params.d);
  return detail::sigma_prefix(params, n, n.dim());
}

/// The flattening f_{d,N}; requires d >= 2.
inline Int f(const EncodingParams& params, const LatticePoint& p) {
  if (params.d < 2) throw Error(Errc::DimensionTooSmall, "f is defined for d >= 2");
  detail::require_dim(params, p, params.d);
  const Int& y = p.back();
  Int value = floor_div(y, Int(2)) * params.row_stride() +
              2 * detail::sigma_prefix(params, p, p.dim() - 1);
  if (!is_even(y)) value += 1;
  return value;
}

inline bool in_support_window(const EncodingParams& params, const LatticePoint& n) {
  if (static_cast<int>(n.dim()) != params.d) return false;
  const Int w = params.window();
  for (const Int& c : n)
    if (c < 0 || c >= w) return false;
  return true;
}

inline bool in_index_window(const EncodingParams& params, const LatticePoint& k) {
  if (static_cast<int>(k.dim()) != params.d) return false;
  if (!detail::in_open_window(params, k) || !is_even(k.back())) return false;
  return detail::sigma_prefix(params, k, k.dim()) >= 0;
}

/// f on the support window [0, 2^N)^d.
inline Int theta(const EncodingParams& params, const LatticePoint& n) {
  detail::require_dim(params, n, params.d);
  if (!in_support_window(params, n)) {
    throw Error(Errc::OutOfDomain, "theta: " + n.str() + " violates 0 <= n_j < 2^N = " +
                                       params.window().str());
  }
  return params.d == 1 ? n[0] : f(params, n);
}

/// f on the index window.
inline Int eta(const EncodingParams& params, const LatticePoint& k) {
  detail::require_dim(params, k, params.d);
  if (!detail::in_open_window(params, k)) {
    throw Error(Errc::OutOfDomain, "eta: " + k.str() + " violates |k_j| < 2^N = " +
                                       params.window().str());
  }
  if (!is_even(k.back())) {
    throw Error(Errc::OutOfDomain, "eta: " + k.str() + " has an odd last coordinate");
  }
  if (sigma(params, k) < 0) throw Error(Errc::OutOfDomain, "eta: " + k.str() + " has sigma < 0");
  return params.d == 1 ? k[0] : f(params, k);
}

/// Inverse of theta; nullopt when m is not in theta([0, 2^N)^d).
inline std::optional<LatticePoint> theta_inverse(const EncodingParams& params, const Int& m) {
  LatticePoint n(static_cast<std::size_t>(params.d));
  if (params.d == 1) {
    n[0] = m;
    if (!in_support_window(params, n)) return std::nullopt;
    return n;
  }
  if (m < 0) return std::nullopt;
  const Int stride = params.row_stride();
  const Int q = m / stride;
  Int r = m % stride;
  const bool odd = !is_even(r);
  Int s = r / 2;
  const Int digit_base = params.base_weight(2);
  for (int j = 0; j + 1 < params.d; ++j) {
    n[static_cast<std::size_t>(j)] = s % digit_base;
    s /= digit_base;
  }
  if (s != 0) return std::nullopt;
  n[static_cast<std::size_t>(params.d - 1)] = 2 * q + (odd ? 1 : 0);
  if (!in_support_window(params, n)) return std::nullopt;
  return n;
}

/// f(n + k) == theta(n) + eta(k).
inline bool additivity_check(const EncodingParams& params, const LatticePoint& n,
                             const LatticePoint& k) {
  const Int lhs = params.d == 1 ? Int((n + k)[0]) : f(params, n + k);
  return lhs == theta(params, n) + eta(params, k);
}

struct IndexWindow {
  EncodingParams params;
  std::vector<LatticePoint> support;  // [0, 2^N)^d, lexicographic
  std::vector<LatticePoint> index;    // E_{d,N}, lexicographic
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 20;

namespace detail {

// Visits every point of [lo, hi)^d in lexicographic order.
template <typename Visit>
void for_each_in_box(int dim, long long lo, long long hi, Visit&& visit) {
  std::vector<long long> c(static_cast<std::size_t>(dim), lo);
  if (lo >= hi) return;
  for (;;) {
    LatticePoint p(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) p[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
    visit(p);
    int j = dim - 1;
    while (j >= 0 && ++c[static_cast<std::size_t>(j)] == hi) {
      c[static_cast<std::size_t>(j)] = lo;
      --j;
    }
    if (j < 0) return;
  }
}

inline void check_budget(const EncodingParams& params, std::uint64_t budget) {
  // (2^{N+1} - 1)^d points are scanned for the index window.
  const Int count = pow(Int(2) * params.window() - 1, static_cast<unsigned>(params.d));
  if (count > budget) {
    throw Error(Errc::WindowTooLarge, "window for d=" + std::to_string(params.d) + ", N=" +
                                          std::to_string(params.N) + " has " + count.str() +
                                          " points, budget " + std::to_string(budget));
  }
}

}  // namespace detail

inline IndexWindow index_window(const EncodingParams& params,
                                std::uint64_t budget = kDefaultEnumerationBudget) {
  detail::check_budget(params, budget);
  IndexWindow w{params, {}, {}};
  const long long half = to_int64(params.window());
  detail::for_each_in_box(params.d, 0, half, [&](const LatticePoint& p) { w.support.push_back(p); });
  detail::for_each_in_box(params.d, -half + 1, half, [&](const LatticePoint& p) {
    if (in_index_window(params, p)) w.index.push_back(p);
  });
  return w;
}

/// theta applied to the whole support window, sorted ascending.
inline std::vector<Int> encoded_support(const IndexWindow& w) {
  std::vector<Int> out;
  out.reserve(w.support.size());
  for (const auto& n : w.support) out.push_back(theta(w.params, n));
  std::sort(out.begin(), out.end());
  return out;
}

/// eta applied to the whole index window, sorted ascending.
inline std::vector<Int> encoded_index(const IndexWindow& w) {
  std::vector<Int> out;
  out.reserve(w.index.size());
  for (const auto& k : w.index) out.push_back(eta(w.params, k));
  std::sort(out.begin(), out.end());
  return out;
}

/// Smallest N >= 1 with every point inside [0, 2^N)^d; points must be nonnegative.
template <typename Range>
int minimal_support_exponent(const Range& points) {
  Int largest = 0;
  for (const LatticePoint& p : points)
    for (const Int& c : p) {
      if (c < 0) throw Error(Errc::OutOfDomain, "point " + p.str() + " has a negative coordinate");
      largest = std::max(largest, c);
    }
  int N = 1;
  while (pow2(static_cast<unsigned>(N)) <= largest) ++N;
  return N;
}

/// Smallest N >= 1 with every point inside (-2^N, 2^N)^d.
template <typename Range>
int minimal_open_exponent(const Range& points) {
  Int largest = 0;
  for (const LatticePoint& p : points)
    for (const Int& c : p) largest = std::max(largest, Int(abs(c)));
  int N = 1;
  while (pow2(static_cast<unsigned>(N)) <= largest) ++N;
  return N;
}

}  // namespace pfw
