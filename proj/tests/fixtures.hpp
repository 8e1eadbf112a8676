#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "pfw/filter.hpp"
#include "pfw/intlat.hpp"

namespace fixtures {

using pfw::Coeff;
using pfw::DilationMatrix;
using pfw::Filter;
using pfw::IntMatrix;
using pfw::LatticePoint;

inline const double kHaar = std::numbers::sqrt2 / 2.0;

inline std::array<double, 4> d4_coeffs() {
  const double s3 = std::sqrt(3.0), r = 4.0 * std::numbers::sqrt2;
  return {(1 + s3) / r, (3 + s3) / r, (3 - s3) / r, (1 - s3) / r};
}

inline IntMatrix quincunx() { return IntMatrix{{1, 1}, {-1, 1}}; }
inline IntMatrix swap_two() { return IntMatrix{{0, 2}, {1, 0}}; }
inline IntMatrix cyclic_three() { return IntMatrix{{0, 0, 2}, {1, 0, 0}, {0, 1, 0}}; }

inline std::vector<DilationMatrix> targets() {
  return {DilationMatrix::dyadic_1d(), DilationMatrix(quincunx()), DilationMatrix(swap_two()),
          DilationMatrix(cyclic_three())};
}

inline Filter haar1d() { return Filter(DilationMatrix::dyadic_1d(), {{LatticePoint{0}, kHaar}, {LatticePoint{1}, kHaar}}); }

inline Filter d4_1d() {
  const auto h = d4_coeffs();
  std::vector<std::pair<LatticePoint, Coeff>> c;
  for (long long i = 0; i < 4; ++i) c.emplace_back(LatticePoint{i}, h[static_cast<std::size_t>(i)]);
  return Filter(DilationMatrix::dyadic_1d(), c);
}

/// 1/sqrt 2 at 0 and at the coset representative (0, 1).
inline Filter quincunx_haar() {
  return Filter(DilationMatrix(quincunx()), {{LatticePoint{0, 0}, kHaar}, {LatticePoint{0, 1}, kHaar}});
}

/// Daubechies-4 carried onto the quincunx lattice; adapted support {0,1}^2.
inline Filter quincunx_d4() {
  const auto h = d4_coeffs();
  return Filter(DilationMatrix(quincunx()), {{LatticePoint{0, 0}, h[0]},
                                             {LatticePoint{0, 1}, h[1]},
                                             {LatticePoint{1, -1}, h[2]},
                                             {LatticePoint{1, 0}, h[3]}});
}

inline std::vector<Filter> bundled() { return {haar1d(), d4_1d(), quincunx_haar(), quincunx_d4()}; }

}  // namespace fixtures
