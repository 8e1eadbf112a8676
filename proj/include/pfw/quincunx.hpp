#pragma once

// Coefficients of the quincunx Shannon-type scaling function (Fourier
// transform = indicator of [-pi, pi]^2, A = [[1,1],[-1,1]]):
//
//   s(m, n) = sqrt(2) / (4 pi^2) * integral over |t1| + |t2| <= pi of cos(m t1 + n t2)
//
// With u = t1 + t2, v = t1 - t2 the diamond becomes the square [-pi, pi]^2 and
// the integral separates: (1/2) I((m+n)/2) I((m-n)/2), I(x) = int_{-pi}^{pi} cos(x u) du.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pfw/error.hpp"
#include "pfw/intlat.hpp"
#include "pfw/lawton.hpp"

namespace pfw::quincunx {

inline IntMatrix matrix() { return IntMatrix{{1, 1}, {-1, 1}}; }

namespace detail {

// int_{-pi}^{pi} cos(h u / 2) du for an integer h (x = h/2), using the exact
// value of sin(pi x) at integers and half-integers.
inline double half_integer_cos_integral(std::int64_t h) {
  if (h == 0) return 2.0 * std::numbers::pi;
  if (h % 2 == 0) return 0.0;
  // sin(pi h / 2) = (-1)^{(h-1)/2} for odd h
  const std::int64_t e = (h - 1) / 2;  // exact, h - 1 is even
  const double sine = (e % 2 == 0) ? 1.0 : -1.0;
  return 2.0 * sine / (static_cast<double>(h) / 2.0);
}

}  // namespace detail

/// Closed separable evaluation.
inline double shannon_coeff(std::int64_t m, std::int64_t n) {
  const double prefactor = std::numbers::sqrt2 / (4.0 * std::numbers::pi * std::numbers::pi);
  return prefactor * 0.5 * detail::half_integer_cos_integral(m + n) *
         detail::half_integer_cos_integral(m - n);
}

/// Independent oracle: nested adaptive Gauss-Kronrod over the diamond.
inline double shannon_coeff_quadrature(std::int64_t m, std::int64_t n) {
  using boost::math::quadrature::gauss_kronrod;
  const double pi = std::numbers::pi;
  const double mm = static_cast<double>(m), nn = static_cast<double>(n);
  auto inner = [&](double t1) {
    const double half = pi - std::abs(t1);
    if (half <= 0.0) return 0.0;
    auto g = [&](double t2) { return std::cos(mm * t1 + nn * t2); };
    return gauss_kronrod<double, 31>::integrate(g, -half, half, 15, 1e-14);
  };
  const double left = gauss_kronrod<double, 31>::integrate(inner, -pi, 0.0, 15, 1e-14);
  const double right = gauss_kronrod<double, 31>::integrate(inner, 0.0, pi, 15, 1e-14);
  return std::numbers::sqrt2 / (4.0 * pi * pi) * (left + right);
}

inline constexpr double kZeroThreshold = 1e-9;

struct PatternEntry {
  std::int64_t m;
  std::int64_t n;
  double s;
};

struct PatternReport {
  std::int64_t half_width = 0;
  std::vector<PatternEntry> entries;  // row-major over [-W, W]^2
  double min_odd_magnitude = 0.0;     // over m + n odd
  double max_even_magnitude = 0.0;    // over m + n even, (m, n) != 0
  bool odd_all_nonzero = false;
  bool even_all_vanish = false;
};

inline PatternReport support_pattern(std::int64_t half_width, double threshold = kZeroThreshold) {
  if (half_width < 1) throw Error(Errc::InvalidInput, "half width must be >= 1");
  PatternReport r;
  r.half_width = half_width;
  r.min_odd_magnitude = std::numeric_limits<double>::infinity();
  for (std::int64_t m = -half_width; m <= half_width; ++m)
    for (std::int64_t n = -half_width; n <= half_width; ++n) {
      const double s = shannon_coeff(m, n);
      r.entries.push_back({m, n, s});
      if ((m + n) % 2 != 0) r.min_odd_magnitude = std::min(r.min_odd_magnitude, std::abs(s));
      else if (m != 0 || n != 0) r.max_even_magnitude = std::max(r.max_even_magnitude, std::abs(s));
    }
  r.odd_all_nonzero = r.min_odd_magnitude > threshold;
  r.even_all_vanish = r.max_even_magnitude < threshold;
  return r;
}

/// Window points where the coefficient is numerically nonzero.
inline SupportSet nonzero_support(const PatternReport& pattern, double threshold = kZeroThreshold) {
  std::vector<LatticePoint> pts;
  for (const auto& e : pattern.entries)
    if (std::abs(e.s) > threshold) pts.push_back(LatticePoint{e.m, e.n});
  return SupportSet(std::move(pts));
}

/// Whether the support contains every even-sum point of [-W, W]^2, i.e. the
/// window of the sublattice {m + n even}.
inline bool sublattice_premise(const SupportSet& support, std::int64_t half_width) {
  if (support.dim() != 2) {
    throw Error(Errc::DimensionMismatch, "sublattice premise needs a 2-dimensional support, got " +
                                             std::to_string(support.dim()));
  }
  for (std::int64_t m = -half_width; m <= half_width; ++m)
    for (std::int64_t n = -half_width; n <= half_width; ++n)
      if ((m + n) % 2 == 0 && !support.contains(LatticePoint{m, n})) return false;
  return true;
}

/// Translate of a support by -shift.
inline SupportSet shifted(const SupportSet& support, const LatticePoint& shift) {
  std::vector<LatticePoint> pts;
  for (const auto& p : support) pts.push_back(p - shift);
  return SupportSet(std::move(pts));
}

}  // namespace pfw::quincunx
