#pragma once

// Numerical residuals of a filter against its reduced Lawton system, and a
// frequency-domain cross-check |m0(xi)|^2 + |m0(xi + zeta)|^2 = 1.
//
// All sums go through a correctly rounded accumulator, so a residual depends
// only on the multiset of its terms. A transferred filter (same coefficients,
// reindexed pairs) therefore reproduces its source residuals bit for bit.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "pfw/filter.hpp"
#include "pfw/intlat.hpp"
#include "pfw/lawton.hpp"

namespace pfw {

/// Correctly rounded floating-point sum (Shewchuk's nonoverlapping partials).
class ExactSum {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  double value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    // Round-half-even correction when the tail has the same sign as lo.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      const double yr = x - hi;
      if (y == yr) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

inline constexpr double kSolutionTolerance = 1e-10;

struct ResidualReport {
  std::map<LatticePoint, double> residuals;  // k -> |sum_n h_n conj(h_{n+k}) - delta_{0k}|
  double sum_residual = 0.0;                 // |sum_n h_n - sqrt 2|
  double max_residual = 0.0;

  bool is_solution(double tol = kSolutionTolerance) const { return max_residual <= tol; }
};

inline double equation_residual(const Filter& filter, const Equation& eq) {
  ExactSum re, im;
  for (const auto& [n, nk] : eq.pairs) {
    const Coeff& a = filter.at(n);
    const Coeff& b = filter.at(nk);
    // a * conj(b)
    re.add(a.real() * b.real());
    re.add(a.imag() * b.imag());
    im.add(a.imag() * b.real());
    im.add(-(a.real() * b.imag()));
  }
  if (eq.rhs != 0) re.add(-static_cast<double>(eq.rhs));
  return std::hypot(re.value(), im.value());
}

inline ResidualReport lawton_residuals(const Filter& filter, const ReducedSystem& system) {
  ResidualReport report;
  for (const auto& k : system.index_set) {
    const double r = equation_residual(filter, system.equation(k));
    report.residuals.emplace(k, r);
    report.max_residual = std::max(report.max_residual, r);
  }
  ExactSum re, im;
  for (const auto& [n, c] : filter.coeffs()) {
    re.add(c.real());
    im.add(c.imag());
  }
  re.add(-std::numbers::sqrt2);
  report.sum_residual = std::hypot(re.value(), im.value());
  report.max_residual = std::max(report.max_residual, report.sum_residual);
  return report;
}

inline ResidualReport lawton_residuals(const Filter& filter) {
  return lawton_residuals(filter, build_reduced_system(filter.support(), filter.matrix()));
}

inline constexpr std::uint64_t kQmfSeed = 20240611;

/// zeta = 2 pi (A^T)^{-1} q for a lattice point q outside A^T Z^d.
inline std::vector<double> qmf_shift(const DilationMatrix& a) {
  const IntMatrix at = a.matrix().transpose();
  const AdaptedChart chart_t(at);
  const LatticePoint q = chart_t.coset_rep();
  const IntMatrix adj = at.adjugate();
  const double det = at.determinant().convert_to<double>();
  const LatticePoint num = adj * q;
  std::vector<double> zeta(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    zeta[i] = 2.0 * std::numbers::pi * num[i].convert_to<double>() / det;
  return zeta;
}

/// max over sampled xi of | |m0(xi)|^2 + |m0(xi + zeta)|^2 - 1 |,
/// m0(xi) = 2^{-1/2} sum_n h_n exp(-i n . xi).
inline double qmf_check(const Filter& filter, std::size_t samples, std::uint64_t seed = kQmfSeed) {
  const std::size_t d = filter.dim();
  const std::vector<double> zeta = qmf_shift(filter.matrix());
  std::vector<std::pair<std::vector<double>, Coeff>> taps;
  for (const auto& [n, c] : filter.coeffs()) {
    std::vector<double> nd(d);
    for (std::size_t j = 0; j < d; ++j) nd[j] = n[j].convert_to<double>();
    taps.emplace_back(std::move(nd), c);
  }
  auto m0 = [&](const std::vector<double>& xi) {
    Coeff acc = 0.0;
    for (const auto& [n, c] : taps) {
      double phase = 0.0;
      for (std::size_t j = 0; j < d; ++j) phase += n[j] * xi[j];
      acc += c * std::polar(1.0, -phase);
    }
    return acc * (std::numbers::sqrt2 / 2.0);
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  std::vector<double> xi(d), shifted(d);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < d; ++j) {
      xi[j] = angle(rng);
      shifted[j] = xi[j] + zeta[j];
    }
    const double dev = std::norm(m0(xi)) + std::norm(m0(shifted)) - 1.0;
    worst = std::max(worst, std::abs(dev));
  }
  return worst;
}

}  // namespace pfw
