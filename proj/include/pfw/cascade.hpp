#pragma once

// Cascade iteration phi <- sqrt(2) sum_n s_n phi(A . - n) started from the
// indicator of [0,1)^d. A level-K iterate is constant on every cell
// A^{-K}(j + [0,1)^d), j in Z^d, so it is stored exactly as a sparse map from
// cell index to value:
//
//   value_{K+1}(j) = sqrt(2) sum_n s_n value_K(j - A^K n).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pfw/error.hpp"
#include "pfw/filter.hpp"
#include "pfw/intlat.hpp"
#include "pfw/verify.hpp"

namespace pfw {

using Cell = std::vector<std::int64_t>;

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(Errc::Overflow, "cell index addition overflows int64");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(Errc::Overflow, "cell index product overflows int64");
  return r;
}

/// Row-major d x d int64 matrix with overflow-checked products.
struct SmallMatrix {
  std::size_t dim = 0;
  std::vector<std::int64_t> a;

  static SmallMatrix from(const IntMatrix& m) {
    SmallMatrix s{m.dim(), std::vector<std::int64_t>(m.dim() * m.dim())};
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j) s.a[i * s.dim + j] = to_int64(m(i, j));
    return s;
  }
  static SmallMatrix identity(std::size_t d) {
    SmallMatrix s{d, std::vector<std::int64_t>(d * d, 0)};
    for (std::size_t i = 0; i < d; ++i) s.a[i * d + i] = 1;
    return s;
  }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return a[i * dim + j]; }

  SmallMatrix operator*(const SmallMatrix& o) const {
    SmallMatrix r{dim, std::vector<std::int64_t>(dim * dim, 0)};
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t j = 0; j < dim; ++j)
          r.a[i * dim + j] = checked_add(r.a[i * dim + j], checked_mul((*this)(i, k), o(k, j)));
    return r;
  }
  Cell apply(const Cell& v) const {
    Cell r(dim, 0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) r[i] = checked_add(r[i], checked_mul((*this)(i, j), v[j]));
    return r;
  }
};

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

inline constexpr std::size_t kDefaultCellBudget = 5'000'000;

struct CascadeGrid {
  IntMatrix matrix;
  int level = 0;
  std::map<Cell, Coeff> cells;

  double cell_volume() const { return std::ldexp(1.0, -level); }

  /// The indicator of [0,1)^d: a single level-0 cell.
  static CascadeGrid unit_cube(const IntMatrix& a) {
    CascadeGrid g{a, 0, {}};
    g.cells.emplace(Cell(a.dim(), 0), Coeff(1.0, 0.0));
    return g;
  }

  Coeff value(const Cell& j) const {
    auto it = cells.find(j);
    return it == cells.end() ? Coeff(0.0, 0.0) : it->second;
  }

  /// sum_j value(j) * 2^{-K}
  Coeff integral() const {
    ExactSum re, im;
    for (const auto& [j, v] : cells) {
      re.add(v.real());
      im.add(v.imag());
    }
    return Coeff(re.value(), im.value()) * cell_volume();
  }

  std::size_t dim() const { return matrix.dim(); }
};

namespace detail {

inline SmallMatrix matrix_power(const IntMatrix& a, int k) {
  const SmallMatrix base = SmallMatrix::from(a);
  SmallMatrix p = SmallMatrix::identity(a.dim());
  for (int i = 0; i < k; ++i) p = base * p;
  return p;
}

inline Cell to_cell(const LatticePoint& n) {
  Cell c(n.dim());
  for (std::size_t j = 0; j < n.dim(); ++j) c[j] = to_int64(n[j]);
  return c;
}

}  // namespace detail

inline CascadeGrid cascade_step(const CascadeGrid& grid, const Filter& filter,
                                std::size_t cell_budget = kDefaultCellBudget) {
  if (!(grid.matrix == filter.matrix().matrix())) {
    throw Error(Errc::DomainMismatch, "grid and filter use different dilation matrices");
  }
  const detail::SmallMatrix power = detail::matrix_power(grid.matrix, grid.level);
  std::vector<std::pair<Cell, Coeff>> taps;
  for (const auto& [n, s] : filter.coeffs())
    // sqrt(2) * s written as s / (1/sqrt 2): exact for s = 1/sqrt 2.
    taps.emplace_back(power.apply(detail::to_cell(n)), s / (std::numbers::sqrt2 / 2.0));

  CascadeGrid next{grid.matrix, grid.level + 1, {}};
  for (const auto& [j, v] : grid.cells) {
    for (const auto& [offset, w] : taps) {
      Cell target(j.size());
      for (std::size_t i = 0; i < j.size(); ++i) target[i] = detail::checked_add(j[i], offset[i]);
      auto it = next.cells.find(target);
      if (it == next.cells.end()) {
        if (next.cells.size() >= cell_budget) {
          throw Error(Errc::LevelBudgetExceeded, "level " + std::to_string(next.level) +
                                                     " exceeds the cell budget of " +
                                                     std::to_string(cell_budget));
        }
        next.cells.emplace(std::move(target), w * v);
      } else {
        it->second += w * v;
      }
    }
  }
  std::erase_if(next.cells, [](const auto& kv) { return kv.second == Coeff(0.0, 0.0); });
  return next;
}

namespace detail {

// Offsets r with A^{-1}(r + 1/2) in [0,1)^d: the fine cells whose centers lie
// in a coarse cell are exactly A i + r. There are |det A| = 2 of them.
inline std::vector<Cell> refinement_offsets(const IntMatrix& a) {
  const std::size_t d = a.dim();
  const SmallMatrix adj = SmallMatrix::from(a.adjugate());
  const std::int64_t den = 2 * to_int64(a.determinant());
  std::int64_t reach = 1;
  for (std::size_t i = 0; i < d; ++i) {
    std::int64_t row = 0;
    for (std::size_t j = 0; j < d; ++j) row += std::abs(to_int64(a(i, j)));
    reach = std::max(reach, row + 1);
  }
  std::vector<Cell> out;
  Cell r(d, -reach);
  for (;;) {
    Cell twice(d);
    for (std::size_t i = 0; i < d; ++i) twice[i] = 2 * r[i] + 1;
    const Cell num = adj.apply(twice);
    if (std::all_of(num.begin(), num.end(), [&](std::int64_t x) { return floor_div(x, den) == 0; }))
      out.push_back(r);
    std::size_t i = d;
    while (i > 0 && ++r[i - 1] > reach) r[--i] = -reach;
    if (i == 0) break;
  }
  return out;
}

}  // namespace detail

/// Sampled L2 distance between consecutive levels: the coarse iterate is
/// read at the center of every fine cell.
inline double level_difference(const CascadeGrid& coarse, const CascadeGrid& fine) {
  if (fine.level != coarse.level + 1) throw Error(Errc::InvalidInput, "levels are not consecutive");
  const IntMatrix& a = coarse.matrix;
  const detail::SmallMatrix adj = detail::SmallMatrix::from(a.adjugate());
  const detail::SmallMatrix amat = detail::SmallMatrix::from(a);
  const std::int64_t den = 2 * to_int64(a.determinant());
  const std::size_t d = a.dim();

  std::map<Cell, bool> visit;
  for (const auto& [j, v] : fine.cells) visit.emplace(j, true);
  const auto offsets = detail::refinement_offsets(a);
  for (const auto& [i, v] : coarse.cells) {
    const Cell base = amat.apply(i);
    for (const auto& r : offsets) {
      Cell j(d);
      for (std::size_t t = 0; t < d; ++t) j[t] = detail::checked_add(base[t], r[t]);
      visit.emplace(std::move(j), true);
    }
  }

  ExactSum acc;
  Cell twice(d);
  for (const auto& [j, unused] : visit) {
    for (std::size_t t = 0; t < d; ++t) twice[t] = detail::checked_add(detail::checked_mul(2, j[t]), 1);
    Cell parent = adj.apply(twice);
    for (auto& x : parent) x = detail::floor_div(x, den);
    acc.add(std::norm(fine.value(j) - coarse.value(parent)));
  }
  return std::sqrt(acc.value() * fine.cell_volume());
}

struct CascadeRun {
  CascadeGrid grid;
  std::vector<double> differences;  // differences[k]: level k vs level k+1
  std::vector<Coeff> integrals;     // integrals[k]: level k
  std::vector<std::size_t> cells;   // cells[k]: stored cells at level k
  bool filter_is_solution = true;
  bool converged = false;
};

/// Iterates until max_level or until a level difference falls below tol.
inline CascadeRun run_cascade(const Filter& filter, int max_level, double tol,
                              std::size_t cell_budget = kDefaultCellBudget) {
  CascadeRun run{CascadeGrid::unit_cube(filter.matrix().matrix()), {}, {}, {}, true, false};
  run.filter_is_solution = lawton_residuals(filter).is_solution();
  run.integrals.push_back(run.grid.integral());
  run.cells.push_back(run.grid.cells.size());
  while (run.grid.level < max_level) {
    CascadeGrid next = cascade_step(run.grid, filter, cell_budget);
    run.differences.push_back(level_difference(run.grid, next));
    run.grid = std::move(next);
    run.integrals.push_back(run.grid.integral());
    run.cells.push_back(run.grid.cells.size());
    if (run.differences.back() < tol) {
      run.converged = true;
      break;
    }
  }
  return run;
}

/// G(m) = 2^{-K} sum_j value(j) conj(value(j - A^K m)) ~ <phi, phi(. - m)>.
inline std::map<LatticePoint, Coeff> translate_gram(const CascadeGrid& grid,
                                                   const std::vector<LatticePoint>& window) {
  const detail::SmallMatrix power = detail::matrix_power(grid.matrix, grid.level);
  std::map<LatticePoint, Coeff> out;
  for (const auto& m : window) {
    if (m.dim() != grid.dim()) throw Error(Errc::DimensionMismatch, "gram shift " + m.str());
    const Cell shift = power.apply(detail::to_cell(m));
    ExactSum re, im;
    Cell src(grid.dim());
    for (const auto& [j, v] : grid.cells) {
      for (std::size_t t = 0; t < j.size(); ++t) src[t] = detail::checked_add(j[t], -shift[t]);
      const Coeff p = v * std::conj(grid.value(src));
      re.add(p.real());
      im.add(p.imag());
    }
    out.emplace(m, Coeff(re.value(), im.value()) * grid.cell_volume());
  }
  return out;
}

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  bool contains(const std::vector<double>& t) const {
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] < lo[i] || t[i] > hi[i]) return false;
    return true;
  }
};

/// Box containing the support of every cascade iterate, padded by 1.
///
/// The level-K support lies in A^{-K}[0,1]^d + sum_{j=1..K} A^{-j} hull(supp s).
/// Bounding boxes of Minkowski sums add, so the union over K is bounded by
/// (union of the boxes of A^{-K}[0,1]^d) + (hull of the partial sums of the
/// boxes of A^{-j} hull(supp s)); both converge because A^{-1} is a contraction
/// in some norm.
inline Box support_bounding_box(const Filter& filter) {
  const std::size_t d = filter.dim();
  Eigen::MatrixXd a(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = filter.matrix().matrix()(i, j).convert_to<double>();
  const Eigen::MatrixXd inv = a.inverse();

  Eigen::VectorXd h_lo = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::infinity());
  Eigen::VectorXd h_hi = -h_lo;
  for (const auto& [n, c] : filter.coeffs())
    for (std::size_t j = 0; j < d; ++j) {
      h_lo[j] = std::min(h_lo[j], n[j].convert_to<double>());
      h_hi[j] = std::max(h_hi[j], n[j].convert_to<double>());
    }
  const Eigen::VectorXd h_mid = (h_lo + h_hi) / 2, h_half = (h_hi - h_lo) / 2;
  const Eigen::VectorXd c_mid = Eigen::VectorXd::Constant(d, 0.5), c_half = c_mid;

  auto image_box = [](const Eigen::MatrixXd& p, const Eigen::VectorXd& mid, const Eigen::VectorXd& half) {
    Eigen::VectorXd m = p * mid, w = p.cwiseAbs() * half;
    return std::pair{Eigen::VectorXd(m - w), Eigen::VectorXd(m + w)};
  };

  Eigen::VectorXd sum_lo = Eigen::VectorXd::Zero(d), sum_hi = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd part_lo = sum_lo, part_hi = sum_hi;
  Eigen::VectorXd cube_lo = Eigen::VectorXd::Zero(d), cube_hi = Eigen::VectorXd::Ones(d);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d);
  for (int j = 1; j <= 100000; ++j) {
    p = inv * p;
    auto [lo, hi] = image_box(p, h_mid, h_half);
    sum_lo += lo;
    sum_hi += hi;
    part_lo = part_lo.cwiseMin(sum_lo);
    part_hi = part_hi.cwiseMax(sum_hi);
    auto [clo, chi] = image_box(p, c_mid, c_half);
    cube_lo = cube_lo.cwiseMin(clo);
    cube_hi = cube_hi.cwiseMax(chi);
    const double scale = p.cwiseAbs().maxCoeff() * (1.0 + h_lo.cwiseAbs().maxCoeff() + h_hi.cwiseAbs().maxCoeff());
    if (scale < 1e-16) break;
  }
  Box box{std::vector<double>(d), std::vector<double>(d)};
  for (std::size_t i = 0; i < d; ++i) {
    box.lo[i] = part_lo[i] + cube_lo[i] - 1.0;
    box.hi[i] = part_hi[i] + cube_hi[i] + 1.0;
  }
  return box;
}

/// Center of cell j at the grid's level: A^{-K}(j + 1/2).
inline std::vector<double> cell_center(const CascadeGrid& grid, const Cell& j) {
  const std::size_t d = grid.dim();
  Eigen::MatrixXd a(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) a(r, c) = grid.matrix(r, c).convert_to<double>();
  Eigen::VectorXd t(d);
  for (std::size_t r = 0; r < d; ++r) t[r] = static_cast<double>(j[r]) + 0.5;
  const auto lu = a.partialPivLu();
  for (int k = 0; k < grid.level; ++k) t = lu.solve(t);
  return std::vector<double>(t.data(), t.data() + d);
}

}  // namespace pfw
