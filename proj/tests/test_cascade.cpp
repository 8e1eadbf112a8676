#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pfw/cascade.hpp"
#include "pfw/transfer.hpp"

using namespace pfw;

namespace {

std::vector<LatticePoint> gram_window_1d(long long r) {
  std::vector<LatticePoint> w;
  for (long long m = -r; m <= r; ++m) w.push_back(LatticePoint{m});
  return w;
}

}  // namespace

TEST(Cascade, HaarIsAFixedPoint) {
  const Filter h = fixtures::haar1d();
  CascadeGrid g = CascadeGrid::unit_cube(h.matrix().matrix());
  for (int k = 1; k <= 10; ++k) {
    CascadeGrid next = cascade_step(g, h);
    EXPECT_EQ(level_difference(g, next), 0.0);
    ASSERT_EQ(next.cells.size(), std::size_t{1} << k);
    for (const auto& [j, v] : next.cells) {
      EXPECT_EQ(v, Coeff(1.0));
      EXPECT_GE(j[0], 0);
      EXPECT_LT(j[0], 1 << k);
    }
    g = std::move(next);
  }
}

TEST(Cascade, QuincunxHaarIsATile) {
  const Filter h = fixtures::quincunx_haar();
  const CascadeRun run = run_cascade(h, 10, 0.0);
  ASSERT_EQ(run.grid.level, 10);
  EXPECT_EQ(run.grid.cells.size(), std::size_t{1} << 10);
  for (const auto& [j, v] : run.grid.cells) EXPECT_EQ(v, Coeff(1.0));
  // The tile is fractal, so cell approximations of its indicator keep
  // changing support; the difference shrinks but never vanishes.
  for (std::size_t k = 4; k < run.differences.size(); ++k) EXPECT_LT(run.differences[k], run.differences[k - 1]);
  EXPECT_LT(run.differences.back(), 0.6);
  const auto g = translate_gram(run.grid, {LatticePoint{0, 0}, h.matrix().coset_rep(), LatticePoint{1, 1}});
  EXPECT_EQ(g.at(LatticePoint{0, 0}), Coeff(1.0));
  EXPECT_EQ(g.at(h.matrix().coset_rep()), Coeff(0.0));
}

TEST(Cascade, IntegralIsConserved) {
  for (const Filter& f : fixtures::bundled()) {
    const int levels = f.dim() == 1 ? 12 : 10;
    const CascadeRun run = run_cascade(f, levels, 0.0);
    ASSERT_EQ(run.integrals.size(), static_cast<std::size_t>(levels) + 1);
    for (const Coeff& c : run.integrals) EXPECT_LT(std::abs(c - Coeff(1.0)), 1e-9);
  }
  for (const Filter& f : fixtures::bundled())
    for (const DilationMatrix& b : fixtures::targets()) {
      const Filter g = transfer(f, b).target_filter;
      const CascadeRun run = run_cascade(g, b.dim() == 3 ? 7 : 8, 0.0);
      for (const Coeff& c : run.integrals) EXPECT_LT(std::abs(c - Coeff(1.0)), 1e-9);
    }
}

TEST(Cascade, Daubechies4Converges) {
  const CascadeRun run = run_cascade(fixtures::d4_1d(), 12, 0.0);
  ASSERT_EQ(run.differences.size(), 12u);
  EXPECT_LT(run.differences.back(), 1e-3);
  for (std::size_t k = 1; k < run.differences.size(); ++k) EXPECT_LT(run.differences[k], run.differences[k - 1]);
  const auto g = translate_gram(run.grid, gram_window_1d(3));
  EXPECT_LT(std::abs(g.at(LatticePoint{0}) - Coeff(1.0)), 1e-2);
  for (long long m : {-3, -2, -1, 1, 2, 3}) EXPECT_LT(std::abs(g.at(LatticePoint{m})), 1e-2) << m;
}

TEST(Cascade, QuincunxD4Decreases) {
  const CascadeRun run = run_cascade(fixtures::quincunx_d4(), 10, 0.0);
  ASSERT_EQ(run.differences.size(), 10u);
  // Early levels may wobble; the tail must settle downwards.
  for (std::size_t k = 5; k < run.differences.size(); ++k) EXPECT_LT(run.differences[k], run.differences[k - 1]);
}

TEST(Cascade, HaarGramIsExact) {
  const CascadeRun run = run_cascade(fixtures::haar1d(), 6, 0.0);
  ASSERT_EQ(run.cells.size(), 7u);
  for (std::size_t k = 0; k < run.cells.size(); ++k) EXPECT_EQ(run.cells[k], std::size_t{1} << k);
  const auto g = translate_gram(run.grid, gram_window_1d(2));
  EXPECT_EQ(g.at(LatticePoint{0}), Coeff(1.0));
  EXPECT_EQ(g.at(LatticePoint{1}), Coeff(0.0));
  EXPECT_EQ(g.at(LatticePoint{-2}), Coeff(0.0));
}

TEST(Cascade, StopsAtTolerance) {
  const CascadeRun run = run_cascade(fixtures::haar1d(), 12, 1e-12);
  EXPECT_TRUE(run.converged);
  EXPECT_EQ(run.grid.level, 1);
}

TEST(Cascade, SupportStaysInBoundingBox) {
  for (const Filter& f : fixtures::bundled()) {
    const Box box = support_bounding_box(f);
    const int levels = f.dim() == 1 ? 12 : 10;
    CascadeGrid g = CascadeGrid::unit_cube(f.matrix().matrix());
    for (int k = 0; k < levels; ++k) {
      g = cascade_step(g, f);
      for (const auto& [j, v] : g.cells) ASSERT_TRUE(box.contains(cell_center(g, j))) << k;
    }
  }
}

TEST(Cascade, BoundingBoxKnownCases) {
  // Filter support [0, L] bounds every level by [0, L + 1]; padded by 1.
  const Box b = support_bounding_box(fixtures::haar1d());
  EXPECT_NEAR(b.lo[0], -1.0, 1e-9);
  EXPECT_NEAR(b.hi[0], 3.0, 1e-9);
  const Box d4 = support_bounding_box(fixtures::d4_1d());
  EXPECT_NEAR(d4.lo[0], -1.0, 1e-9);
  EXPECT_NEAR(d4.hi[0], 5.0, 1e-9);
}

TEST(Cascade, LevelDifferenceByHand) {
  const IntMatrix two{{2}};
  CascadeGrid coarse = CascadeGrid::unit_cube(two);
  CascadeGrid fine{two, 1, {}};
  fine.cells[{0}] = 2.0;  // 2 on [0, 1/2), 0 on [1/2, 1)
  EXPECT_DOUBLE_EQ(level_difference(coarse, fine), 1.0);
  EXPECT_THROW(level_difference(fine, coarse), Error);
}

TEST(Cascade, RefinementOffsets) {
  for (const DilationMatrix& b : fixtures::targets())
    EXPECT_EQ(detail::refinement_offsets(b.matrix()).size(), 2u) << b.matrix().str();
}

TEST(Cascade, CellCenters) {
  CascadeGrid g{IntMatrix{{2}}, 3, {}};
  EXPECT_DOUBLE_EQ(cell_center(g, {0})[0], 1.0 / 16.0);
  EXPECT_DOUBLE_EQ(cell_center(g, {-1})[0], -1.0 / 16.0);
}

TEST(Cascade, Budget) {
  try {
    run_cascade(fixtures::d4_1d(), 12, 0.0, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::LevelBudgetExceeded);
  }
}

TEST(Cascade, MatrixMismatch) {
  const CascadeGrid g = CascadeGrid::unit_cube(fixtures::swap_two());
  try {
    cascade_step(g, fixtures::quincunx_haar());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DomainMismatch);
  }
}

TEST(Cascade, FlagsNonSolutions) {
  const Filter f(DilationMatrix::dyadic_1d(), {{LatticePoint{0}, 1.0}, {LatticePoint{1}, 0.5}});
  EXPECT_FALSE(run_cascade(f, 2, 0.0).filter_is_solution);
  EXPECT_TRUE(run_cascade(fixtures::d4_1d(), 2, 0.0).filter_is_solution);
}
