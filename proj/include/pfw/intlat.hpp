#pragma once

// Exact integer lattice algebra: lattice points, integer matrices, the Smith
// normal form of a dyadic matrix, and the adapted coordinate chart in which
// A Z^d = {(x, 2n)}.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "pfw/error.hpp"

namespace pfw {

using Int = boost::multiprecision::cpp_int;

/// floor(a / b) for b != 0.
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  Int r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline bool is_even(const Int& a) { return (a % 2) == 0; }

inline std::int64_t to_int64(const Int& a) {
  if (a > std::numeric_limits<std::int64_t>::max() ||
      a < std::numeric_limits<std::int64_t>::min()) {
    throw Error(Errc::Overflow, "integer " + a.str() + " does not fit in 64 bits");
  }
  return a.convert_to<std::int64_t>();
}

inline Int pow2(unsigned e) { return Int(1) << e; }

class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::size_t dim) : coords_(dim) {}
  explicit LatticePoint(std::vector<Int> coords) : coords_(std::move(coords)) {}
  LatticePoint(std::initializer_list<long long> coords) {
    coords_.reserve(coords.size());
    for (long long c : coords) coords_.emplace_back(c);
  }

  static LatticePoint zero(std::size_t dim) { return LatticePoint(dim); }
  static LatticePoint unit(std::size_t dim, std::size_t j) {
    LatticePoint p(dim);
    p[j] = 1;
    return p;
  }

  std::size_t dim() const { return coords_.size(); }
  const Int& operator[](std::size_t j) const { return coords_[j]; }
  Int& operator[](std::size_t j) { return coords_[j]; }
  const std::vector<Int>& coords() const { return coords_; }
  const Int& back() const { return coords_.back(); }

  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Int& c) { return c == 0; });
  }

  LatticePoint& operator+=(const LatticePoint& o) {
    check_dim(o);
    for (std::size_t j = 0; j < dim(); ++j) coords_[j] += o.coords_[j];
    return *this;
  }
  LatticePoint& operator-=(const LatticePoint& o) {
    check_dim(o);
    for (std::size_t j = 0; j < dim(); ++j) coords_[j] -= o.coords_[j];
    return *this;
  }
  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) { return a += b; }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) { return a -= b; }
  friend LatticePoint operator-(LatticePoint a) {
    for (auto& c : a.coords_) c = -c;
    return a;
  }

  friend bool operator==(const LatticePoint& a, const LatticePoint& b) {
    return a.coords_ == b.coords_;
  }
  friend bool operator!=(const LatticePoint& a, const LatticePoint& b) { return !(a == b); }
  /// Lexicographic; points of different dimension order by dimension first.
  friend bool operator<(const LatticePoint& a, const LatticePoint& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return std::lexicographical_compare(a.coords_.begin(), a.coords_.end(), b.coords_.begin(),
                                        b.coords_.end());
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t j = 0; j < dim(); ++j) {
      if (j) s += ",";
      s += coords_[j].str();
    }
    return s + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const LatticePoint& p) { return os << p.str(); }

 private:
  void check_dim(const LatticePoint& o) const {
    if (o.dim() != dim()) {
      throw Error(Errc::DimensionMismatch, "points of dimension " + std::to_string(dim()) +
                                               " and " + std::to_string(o.dim()));
    }
  }

  std::vector<Int> coords_;
};

/// Square integer matrix with exact entries, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) : dim_(rows.size()) {
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
      if (row.size() != dim_) throw Error(Errc::InvalidInput, "matrix is not square");
      for (long long v : row) data_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t dim) {
    IntMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
    return m;
  }
  static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows) {
    IntMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) {
        throw Error(Errc::InvalidInput, "matrix row " + std::to_string(i) + " has " +
                                            std::to_string(rows[i].size()) + " entries, expected " +
                                            std::to_string(rows.size()));
      }
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t dim() const { return dim_; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  Int& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }

  LatticePoint column(std::size_t j) const {
    LatticePoint c(dim_);
    for (std::size_t i = 0; i < dim_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  IntMatrix transpose() const {
    IntMatrix t(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.dim_ != b.dim_) throw Error(Errc::DimensionMismatch, "matrix product");
    IntMatrix c(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < a.dim_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend LatticePoint operator*(const IntMatrix& a, const LatticePoint& p) {
    if (a.dim_ != p.dim()) {
      throw Error(Errc::DimensionMismatch, "matrix of dimension " + std::to_string(a.dim_) +
                                               " applied to point of dimension " +
                                               std::to_string(p.dim()));
    }
    LatticePoint r(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i)
      for (std::size_t j = 0; j < a.dim_; ++j) r[i] += a(i, j) * p[j];
    return r;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.dim_ == b.dim_ && a.data_ == b.data_;
  }

  /// Fraction-free Gaussian elimination (Bareiss); exact.
  Int determinant() const {
    if (dim_ == 0) return 1;
    std::vector<Int> m = data_;
    const std::size_t n = dim_;
    auto at = [&](std::size_t i, std::size_t j) -> Int& { return m[i * n + j]; };
    Int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (at(k, k) == 0) {
        std::size_t swap = k + 1;
        while (swap < n && at(swap, k) == 0) ++swap;
        if (swap == n) return 0;
        for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(swap, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
        }
      }
      prev = at(k, k);
    }
    return sign * at(n - 1, n - 1);
  }

  /// adj(A) with A * adj(A) = det(A) * I.
  IntMatrix adjugate() const {
    IntMatrix adj(dim_);
    if (dim_ == 1) {
      adj(0, 0) = 1;
      return adj;
    }
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        IntMatrix minor(dim_ - 1);
        for (std::size_t r = 0, mr = 0; r < dim_; ++r) {
          if (r == i) continue;
          for (std::size_t c = 0, mc = 0; c < dim_; ++c) {
            if (c == j) continue;
            minor(mr, mc++) = (*this)(r, c);
          }
          ++mr;
        }
        Int cof = minor.determinant();
        adj(j, i) = ((i + j) % 2 == 0) ? cof : Int(-cof);
      }
    }
    return adj;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < dim_; ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < dim_; ++j) s += (j ? "," : "") + (*this)(i, j).str();
      s += "]";
    }
    return s + "]";
  }
  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) { return os << m.str(); }

 private:
  std::size_t dim_ = 0;
  std::vector<Int> data_;
};

struct SnfFactorization {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
};

namespace detail {

// Reduces a nonsingular square matrix to diagonal form D = L * A * R while
// accumulating U = L^{-1}, V = R^{-1} so that A = U * D * V throughout.
// Pivot: smallest nonzero |entry| of the trailing block, lowest row then
// lowest column on ties; rows are cleared before columns.
inline SnfFactorization smith_decompose(const IntMatrix& a) {
  const std::size_t n = a.dim();
  IntMatrix m = a;
  IntMatrix u = IntMatrix::identity(n);
  IntMatrix v = IntMatrix::identity(n);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(m(i, c), m(j, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(u(r, i), u(r, j));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < n; ++r) std::swap(m(r, i), m(r, j));
    for (std::size_t c = 0; c < n; ++c) std::swap(v(i, c), v(j, c));
  };
  // row_i += q * row_j
  auto add_row = [&](std::size_t i, std::size_t j, const Int& q) {
    for (std::size_t c = 0; c < n; ++c) m(i, c) += q * m(j, c);
    for (std::size_t r = 0; r < n; ++r) u(r, j) -= q * u(r, i);
  };
  // col_j += q * col_i
  auto add_col = [&](std::size_t j, std::size_t i, const Int& q) {
    for (std::size_t r = 0; r < n; ++r) m(r, j) += q * m(r, i);
    for (std::size_t c = 0; c < n; ++c) v(i, c) -= q * v(j, c);
  };

  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      std::optional<std::pair<std::size_t, std::size_t>> pivot;
      Int best;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (m(i, j) == 0) continue;
          Int mag = abs(m(i, j));
          if (!pivot || mag < best) {
            best = mag;
            pivot = {i, j};
          }
        }
      if (!pivot) throw Error(Errc::NotDyadic, "matrix is singular");
      swap_rows(t, pivot->first);
      swap_cols(t, pivot->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (m(i, t) == 0) continue;
        add_row(i, t, -floor_div(m(i, t), m(t, t)));
        if (m(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (m(t, j) == 0) continue;
        add_col(j, t, -floor_div(m(t, j), m(t, t)));
        if (m(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility of the trailing block by the pivot.
      std::optional<std::size_t> bad_row;
      for (std::size_t i = t + 1; i < n && !bad_row; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (m(i, j) % m(t, t) != 0) {
            bad_row = i;
            break;
          }
      if (bad_row) {
        add_row(t, *bad_row, Int(1));
        continue;
      }
      break;
    }
    if (m(t, t) < 0) {
      for (std::size_t c = 0; c < n; ++c) m(t, c) = -m(t, c);
      for (std::size_t r = 0; r < n; ++r) u(r, t) = -u(r, t);
    }
  }
  return {std::move(u), std::move(m), std::move(v)};
}

}  // namespace detail

/// A = U D V with D = diag(1, ..., 1, 2). Throws NotDyadic unless |det A| = 2.
inline SnfFactorization smith_normal_form(const IntMatrix& a) {
  if (a.dim() == 0) throw Error(Errc::InvalidInput, "empty matrix");
  Int det = a.determinant();
  if (abs(det) != 2) throw Error(Errc::NotDyadic, "|det A| = " + Int(abs(det)).str() + ", expected 2");
  return detail::smith_decompose(a);
}

/// Coefficients c_0..c_d (ascending) of det(lambda I - A), via Faddeev-LeVerrier.
inline std::vector<Int> characteristic_polynomial(const IntMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<Int> c(n + 1);
  c[n] = 1;
  IntMatrix mk(n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix next = a * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    IntMatrix amk = a * mk;
    Int trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += amk(i, i);
    c[n - k] = -trace / static_cast<long long>(k);
  }
  return c;
}

inline constexpr double kExpansiveBand = 1e-9;

/// Smallest root modulus of the characteristic polynomial (companion-matrix
/// eigenvalues in double precision).
inline double min_root_modulus(const std::vector<Int>& charpoly) {
  const std::size_t n = charpoly.size() - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < n; ++i) companion(i, n - 1) = -charpoly[i].convert_to<double>();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    best = std::min(best, std::abs(solver.eigenvalues()[i]));
  return best;
}

/// True iff every eigenvalue of `a` has modulus > 1. A root modulus inside
/// the band 1 +- 1e-9 is resolved only when it is certified exactly as one of
/// +-1, +-i (then false); otherwise Inconclusive is thrown.
inline bool is_expansive(const IntMatrix& a) {
  if (a.dim() == 0) throw Error(Errc::InvalidInput, "empty matrix");
  const std::vector<Int> p = characteristic_polynomial(a);
  const double m = min_root_modulus(p);
  if (m > 1.0 + kExpansiveBand) return true;
  if (m < 1.0 - kExpansiveBand) return false;

  Int at_one = 0, at_minus_one = 0, re_i = 0, im_i = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    at_one += p[k];
    at_minus_one += (k % 2 == 0) ? p[k] : Int(-p[k]);
    const bool neg = (k / 2) % 2 == 1;
    if (k % 2 == 0) re_i += neg ? Int(-p[k]) : p[k];
    else im_i += neg ? Int(-p[k]) : p[k];
  }
  if (at_one == 0 || at_minus_one == 0 || (re_i == 0 && im_i == 0)) return false;
  throw Error(Errc::Inconclusive,
              "root modulus " + std::to_string(m) + " within 1e-9 of the unit circle");
}

/// Coordinates adapted to a dyadic matrix A = U D V: the columns of U form a
/// basis in which A Z^d is exactly the set of points with even last
/// coordinate. Valid for any |det| = 2 matrix; expansiveness is not needed.
class AdaptedChart {
 public:
  AdaptedChart() = default;
  explicit AdaptedChart(IntMatrix a)
      : a_(std::move(a)), snf_(smith_normal_form(a_)), det_(a_.determinant()), adj_(a_.adjugate()) {
    const Int det_u = snf_.U.determinant();
    u_inv_ = snf_.U.adjugate();
    if (det_u == -1) {
      for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) u_inv_(i, j) = -u_inv_(i, j);
    }
    coset_rep_ = snf_.U.column(dim() - 1);
  }

  std::size_t dim() const { return a_.dim(); }
  const IntMatrix& matrix() const { return a_; }
  const SnfFactorization& snf() const { return snf_; }
  const IntMatrix& adapted_basis() const { return snf_.U; }
  const IntMatrix& adapted_basis_inverse() const { return u_inv_; }
  const LatticePoint& coset_rep() const { return coset_rep_; }

  LatticePoint from_adapted(const LatticePoint& c) const { return snf_.U * c; }
  LatticePoint to_adapted(const LatticePoint& p) const { return u_inv_ * p; }

  /// Membership in A Z^d by parity of the last adapted coordinate.
  bool contains(const LatticePoint& p) const { return is_even(to_adapted(p).back()); }

  /// Membership in A Z^d by solving A x = p over the rationals:
  /// x = adj(A) p / det(A) must be integral.
  bool contains_rational(const LatticePoint& p) const {
    const LatticePoint num = adj_ * p;
    return std::all_of(num.begin(), num.end(), [&](const Int& c) { return c % det_ == 0; });
  }

 private:
  IntMatrix a_;
  SnfFactorization snf_;
  Int det_;
  IntMatrix adj_;
  IntMatrix u_inv_;
  LatticePoint coset_rep_;
};

/// An expansive dyadic integer matrix together with its adapted chart.
class DilationMatrix {
 public:
  DilationMatrix() = default;

  /// Throws NotDyadic, NotExpansive or Inconclusive.
  explicit DilationMatrix(IntMatrix a) : chart_(std::move(a)) {
    if (!is_expansive(chart_.matrix())) {
      throw Error(Errc::NotExpansive, "matrix " + chart_.matrix().str() + " is not expansive");
    }
  }

  static DilationMatrix dyadic_1d() { return DilationMatrix(IntMatrix{{2}}); }

  std::size_t dim() const { return chart_.dim(); }
  const IntMatrix& matrix() const { return chart_.matrix(); }
  const SnfFactorization& snf() const { return chart_.snf(); }
  const IntMatrix& adapted_basis() const { return chart_.adapted_basis(); }
  const LatticePoint& coset_rep() const { return chart_.coset_rep(); }
  const AdaptedChart& chart() const { return chart_; }

  friend bool operator==(const DilationMatrix& a, const DilationMatrix& b) {
    return a.matrix() == b.matrix();
  }

 private:
  AdaptedChart chart_;
};

inline void require_dim(const DilationMatrix& a, const LatticePoint& p) {
  if (a.dim() != p.dim()) {
    throw Error(Errc::DimensionMismatch, "point " + p.str() + " has dimension " +
                                             std::to_string(p.dim()) + ", matrix has dimension " +
                                             std::to_string(a.dim()));
  }
}

inline bool in_AZd(const DilationMatrix& a, const LatticePoint& k) {
  require_dim(a, k);
  return a.chart().contains(k);
}

inline LatticePoint to_adapted(const DilationMatrix& a, const LatticePoint& p) {
  require_dim(a, p);
  return a.chart().to_adapted(p);
}

inline LatticePoint from_adapted(const DilationMatrix& a, const LatticePoint& c) {
  require_dim(a, c);
  return a.chart().from_adapted(c);
}

}  // namespace pfw
