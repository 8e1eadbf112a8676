#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pfw/error.hpp"
#include "pfw/intlat.hpp"
#include "pfw/lawton.hpp"

namespace pfw {

using Coeff = std::complex<double>;

/// A finitely supported scaling filter {h_n} for a dilation matrix, in
/// standard coordinates. Exact zeros are dropped on construction so the
/// stored support is the nonzero set.
class Filter {
 public:
  Filter() = default;
  Filter(DilationMatrix matrix, const std::vector<std::pair<LatticePoint, Coeff>>& coeffs)
      : matrix_(std::move(matrix)) {
    for (const auto& [n, c] : coeffs) {
      if (n.dim() != matrix_.dim()) {
        throw Error(Errc::DimensionMismatch, "coefficient index " + n.str() + " has dimension " +
                                                 std::to_string(n.dim()) + ", matrix has dimension " +
                                                 std::to_string(matrix_.dim()));
      }
      if (coeffs_.count(n)) throw Error(Errc::InvalidInput, "duplicate coefficient index " + n.str());
      if (c == Coeff(0.0, 0.0)) {
        ++dropped_zeros_;
        continue;
      }
      coeffs_.emplace(n, c);
    }
    if (coeffs_.empty()) throw Error(Errc::InvalidInput, "filter has no nonzero coefficients");
  }
  Filter(DilationMatrix matrix, std::initializer_list<std::pair<LatticePoint, Coeff>> coeffs)
      : Filter(std::move(matrix), std::vector<std::pair<LatticePoint, Coeff>>(coeffs)) {}
  Filter(DilationMatrix matrix, const std::map<LatticePoint, Coeff>& coeffs)
      : Filter(std::move(matrix), std::vector<std::pair<LatticePoint, Coeff>>(coeffs.begin(), coeffs.end())) {}

  std::size_t dim() const { return matrix_.dim(); }
  const DilationMatrix& matrix() const { return matrix_; }
  const std::map<LatticePoint, Coeff>& coeffs() const { return coeffs_; }
  std::size_t dropped_zeros() const { return dropped_zeros_; }

  SupportSet support() const {
    std::vector<LatticePoint> pts;
    pts.reserve(coeffs_.size());
    for (const auto& [n, c] : coeffs_) pts.push_back(n);
    return SupportSet(std::move(pts));
  }

  const Coeff& at(const LatticePoint& n) const {
    auto it = coeffs_.find(n);
    if (it == coeffs_.end()) throw Error(Errc::DomainMismatch, n.str() + " is not in the support");
    return it->second;
  }

  friend bool operator==(const Filter& a, const Filter& b) {
    return a.matrix_ == b.matrix_ && a.coeffs_ == b.coeffs_;
  }
  friend std::ostream& operator<<(std::ostream& os, const Filter& f) {
    os << f.matrix_.matrix() << " {";
    const char* sep = "";
    for (const auto& [n, c] : f.coeffs_) {
      os << sep << n << ": " << c;
      sep = ", ";
    }
    return os << "}";
  }

 private:
  DilationMatrix matrix_;
  std::map<LatticePoint, Coeff> coeffs_;
  std::size_t dropped_zeros_ = 0;
};

}  // namespace pfw
