// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pfw/pfw.hpp"

using namespace pfw;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects the first few failure messages.
class Tally {
 public:
  void check(bool cond, const std::string& what) {
    ++checks_;
    if (cond) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream os;
    os << summary << " (" << checks_ << " checks";
    if (failures_) os << ", " << failures_ << " failed: " << notes_;
    os << ")";
    return {failures_ == 0, os.str()};
  }

 private:
  long long checks_ = 0;
  long long failures_ = 0;
  std::string notes_;
};

std::vector<IntMatrix> suite_matrices() {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> dim(1, 4);
  std::vector<IntMatrix> out;
  for (int i = 0; i < 200; ++i) out.push_back(oracle::random_dyadic(rng, static_cast<std::size_t>(dim(rng))));
  return out;
}

std::vector<long long> to_ll(const LatticePoint& p) { return oracle::coords(p); }

// ---- 1 -----------------------------------------------------------------------
Outcome snf_suite(const std::vector<IntMatrix>& mats) {
  Tally t;
  for (const IntMatrix& a : mats) {
    const SnfFactorization s = smith_normal_form(a);
    t.check(s.U * s.D * s.V == a, "UDV != A for " + a.str());
    t.check(abs(oracle::laplace_det(s.U)) == 1, "|det U| != 1 for " + a.str());
    t.check(abs(oracle::laplace_det(s.V)) == 1, "|det V| != 1 for " + a.str());
    IntMatrix d = IntMatrix::identity(a.dim());
    d(a.dim() - 1, a.dim() - 1) = 2;
    t.check(s.D == d, "D shape for " + a.str());
  }
  return t.outcome(std::to_string(mats.size()) + " random dyadic matrices, d in 1..4, entries in [-9,9]");
}

// ---- 2 -----------------------------------------------------------------------
Outcome chart_suite(const std::vector<IntMatrix>& mats) {
  Tally t;
  long long points = 0;
  for (const IntMatrix& a : mats) {
    const std::size_t d = a.dim();
    const AdaptedChart chart(a);
    // Independent membership: adj(A) p == 0 mod det(A), in 64-bit.
    const IntMatrix adj = a.adjugate();
    const long long det = oracle::laplace_det(a).convert_to<long long>();
    std::vector<long long> adj64;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) adj64.push_back(adj(i, j).convert_to<long long>());
    auto member = [&](const std::vector<long long>& p) {
      for (std::size_t i = 0; i < d; ++i) {
        long long s = 0;
        for (std::size_t j = 0; j < d; ++j) s += adj64[i * d + j] * p[j];
        if (s % det != 0) return false;
      }
      return true;
    };
    const std::vector<long long> rep = to_ll(chart.coset_rep());
    std::vector<long long> p(d, -8), q(d);
    for (;;) {
      ++points;
      for (std::size_t i = 0; i < d; ++i) q[i] = p[i] - rep[i];
      const bool in = member(p);
      const LatticePoint lp(std::vector<Int>(p.begin(), p.end()));
      const bool parity = is_even(chart.to_adapted(lp).back());
      if (in == member(q)) t.check(false, "partition fails at " + lp.str());
      if (parity != in) t.check(false, "parity chart fails at " + lp.str());
      std::size_t i = d;
      while (i > 0 && ++p[i - 1] > 8) p[--i] = -8;
      if (i == 0) break;
    }
    t.check(true, "");
  }
  return t.outcome(std::to_string(points) + " points in [-8,8]^d over all suite matrices");
}

// ---- 3 -----------------------------------------------------------------------
std::vector<LatticePoint> open_box(int d, long long half) {
  std::vector<LatticePoint> out;
  std::vector<long long> c(static_cast<std::size_t>(d), -half + 1);
  for (;;) {
    out.emplace_back(std::vector<Int>(c.begin(), c.end()));
    int i = d;
    while (i > 0 && ++c[static_cast<std::size_t>(i - 1)] > half - 1) c[static_cast<std::size_t>(--i)] = -half + 1;
    if (i == 0) break;
  }
  return out;
}

Outcome encoding_suite() {
  Tally t;
  for (int d = 1; d <= 3; ++d)
    for (int N = 1; N <= 2; ++N) {
      const EncodingParams params(d, N);
      std::set<Int> sig, fs;
      for (const auto& p : open_box(d, 1LL << N)) {
        const Int s = sigma(params, p);
        t.check(sig.insert(s).second, "sigma collision at " + p.str());
        int sign = 0;
        for (std::size_t j = p.dim(); j-- > 0;)
          if (p[j] != 0) {
            sign = p[j] > 0 ? 1 : -1;
            break;
          }
        t.check(s.sign() == sign, "sigma sign law at " + p.str());
        t.check(s == oracle::sigma(N, to_ll(p)), "sigma value at " + p.str());
        if (d >= 2) {
          const Int v = f(params, p);
          t.check(fs.insert(v).second, "f collision at " + p.str());
          t.check(v == oracle::f(N, to_ll(p)), "f value at " + p.str());
        }
      }
    }

  std::mt19937_64 rng(43);
  std::uniform_int_distribution<long long> coord(-1000, 1000);
  std::uniform_int_distribution<int> dim(2, 4), expo(1, 6);
  for (int i = 0; i < 10000; ++i) {
    const int d = dim(rng), N = expo(rng);
    const EncodingParams params(d, N);
    const EncodingParams lower(d - 1, N);
    const auto du = static_cast<std::size_t>(d);
    LatticePoint x(du), z(du), zd(du - 1);
    for (std::size_t j = 0; j + 1 < du; ++j) {
      x[j] = coord(rng);
      z[j] = coord(rng);
      zd[j] = z[j];
    }
    const long long y = coord(rng), jj = coord(rng);
    x[du - 1] = y;
    const Int stride = params.row_stride();
    t.check(f(params, x + z) - f(params, x) == 2 * sigma(lower, zd), "f shift identity, first d-1 coordinates");
    LatticePoint x2 = x, x1 = x;
    x2[du - 1] += 2 * jj;
    x1[du - 1] += 1;
    t.check(f(params, x2) - f(params, x) == jj * stride, "f shift identity, even last step");
    t.check(f(params, x1) - f(params, x) == (y % 2 == 0 ? Int(1) : Int(stride - 1)), "f shift identity, unit last step");
  }

  for (int d = 1; d <= 3; ++d)
    for (int N = 1; N <= 2; ++N) {
      const IndexWindow w = index_window(EncodingParams(d, N));
      for (const auto& n : w.support)
        for (const auto& k : w.index) t.check(additivity_check(w.params, n, k), "additivity " + n.str() + k.str());
    }
  return t.outcome("sigma/f injectivity and sign law, 10^4 random shift-identity tuples, exhaustive additivity");
}

// ---- 4 -----------------------------------------------------------------------
Outcome index_set_suite() {
  Tally t;
  const IntMatrix two{{2}};
  for (const IntMatrix& m : {fixtures::quincunx(), fixtures::swap_two()}) {
    const AdaptedChart chart(m);
    for (int N = 1; N <= 2; ++N) {
      const EncodingParams params(2, N);
      const IndexWindow w = index_window(params);
      std::vector<LatticePoint> support, index;
      for (const auto& n : w.support) support.push_back(chart.from_adapted(n));
      for (const auto& k : w.index) index.push_back(chart.from_adapted(k));
      const auto verdict = oracle::check_index_set(SupportSet(support), m, index);
      t.check(verdict.nontrivial, "E not non-trivial, N=" + std::to_string(N));
      t.check(verdict.distinct, "E not distinct, N=" + std::to_string(N));
      t.check(verdict.complete, "E not complete, N=" + std::to_string(N));

      std::vector<LatticePoint> support1, index1;
      for (const auto& n : w.support) support1.push_back(LatticePoint{theta(params, n).convert_to<long long>()});
      for (const auto& k : w.index) index1.push_back(LatticePoint{eta(params, k).convert_to<long long>()});
      t.check(oracle::check_index_set(SupportSet(support1), two, index1).ok(),
              "eta(E) is not an index set on Lambda_1, N=" + std::to_string(N));
    }
  }
  return t.outcome("E_{2,N}, N <= 2, for two matrices against brute force; eta(E_{2,N}) on Lambda_{1,N}");
}

// ---- 5 and 6 -----------------------------------------------------------------
std::vector<double> residual_values(const ResidualReport& r) {
  std::vector<double> v;
  for (const auto& [k, x] : r.residuals) v.push_back(x);
  v.push_back(r.sum_residual);
  std::sort(v.begin(), v.end());
  return v;
}

Outcome transfer_suite() {
  Tally t;
  int reports = 0;
  for (const Filter& f : fixtures::bundled())
    for (const DilationMatrix& b : fixtures::targets()) {
      const TransferReport r = transfer(f, b);
      ++reports;
      const std::string tag = "source dim " + std::to_string(f.dim()) + " -> " + b.matrix().str();
      t.check(verify_isomorphism(r.source, r.target, r.iso), "witness rejected " + tag);
      t.check(residual_values(lawton_residuals(r.source_filter, r.source)) ==
                  residual_values(lawton_residuals(r.target_filter, r.target)),
              "residual multiset changed " + tag);
      if (f.dim() == 1) {
        const TransferReport up = from_one_d(f, b);
        const TransferReport down = to_one_d(up.target_filter);
        t.check(down.target_filter == f, "1D round trip " + tag);
      }
    }
  return t.outcome(std::to_string(reports) + " transfer reports, 4 filters x 4 targets");
}

Outcome residual_suite() {
  Tally t;
  const double haar = lawton_residuals(fixtures::haar1d()).max_residual;
  const double d4 = lawton_residuals(fixtures::d4_1d()).max_residual;
  t.check(haar < 1e-15, "Haar max_residual " + io::format_double(haar));
  t.check(d4 < 1e-12, "D4 max_residual " + io::format_double(d4));
  double worst_qmf = 0.0;
  for (const Filter& f : fixtures::bundled()) {
    worst_qmf = std::max(worst_qmf, qmf_check(f, 1024));
    const ResidualReport src = lawton_residuals(f);
    for (const DilationMatrix& b : fixtures::targets()) {
      const TransferReport r = transfer(f, b);
      const ResidualReport dst = lawton_residuals(r.target_filter, r.target);
      for (const auto& [k, x] : src.residuals)
        t.check(dst.residuals.at(r.iso.eta.at(k)) == x, "residual at " + k.str() + " not bit-identical");
      t.check(dst.sum_residual == src.sum_residual, "sum residual not bit-identical");
      t.check(dst.max_residual == src.max_residual, "max residual not bit-identical");
      worst_qmf = std::max(worst_qmf, qmf_check(r.target_filter, 1024));
    }
  }
  t.check(worst_qmf < 1e-10, "qmf deviation " + io::format_double(worst_qmf));
  return t.outcome("Haar " + io::format_double(haar) + ", D4 " + io::format_double(d4) + ", worst qmf " +
                   io::format_double(worst_qmf) + " (seed " + std::to_string(kQmfSeed) + ")");
}

// ---- 7 -----------------------------------------------------------------------
Outcome cascade_suite() {
  Tally t;
  const CascadeRun haar = run_cascade(fixtures::haar1d(), 12, 0.0);
  for (double d : haar.differences) t.check(d == 0.0, "Haar difference " + io::format_double(d));
  t.check(haar.differences.size() == 12, "Haar levels");

  const CascadeRun d4 = run_cascade(fixtures::d4_1d(), 12, 0.0);
  const double last = d4.differences.back();
  t.check(last < 1e-3, "D4 K=12 difference " + io::format_double(last));
  std::vector<LatticePoint> window;
  for (long long m = -3; m <= 3; ++m) window.push_back(LatticePoint{m});
  const auto g = translate_gram(d4.grid, window);
  double gram_err = std::abs(g.at(LatticePoint{0}) - Coeff(1.0));
  for (long long m = 1; m <= 3; ++m) {
    gram_err = std::max(gram_err, std::abs(g.at(LatticePoint{m})));
    gram_err = std::max(gram_err, std::abs(g.at(LatticePoint{-m})));
  }
  t.check(gram_err < 1e-2, "D4 Gram error " + io::format_double(gram_err));

  double worst_integral = 0.0;
  for (const Filter& f : fixtures::bundled()) {
    const CascadeRun run = run_cascade(f, 12, 0.0);
    for (const Coeff& c : run.integrals) worst_integral = std::max(worst_integral, std::abs(c - Coeff(1.0)));
  }
  t.check(worst_integral < 1e-9, "integral drift " + io::format_double(worst_integral));
  return t.outcome("D4 K=12 difference " + io::format_double(last) + ", Gram error " +
                   io::format_double(gram_err) + ", integral drift " + io::format_double(worst_integral));
}

// ---- 8 -----------------------------------------------------------------------
Outcome quincunx_suite() {
  Tally t;
  const double s00 = quincunx::shannon_coeff(0, 0), s10 = quincunx::shannon_coeff(1, 0);
  t.check(std::abs(s00 - 0.70710678) <= 1e-8, "s(0,0) = " + io::format_double(s00));
  t.check(std::abs(s10 - 0.28658869) <= 1e-6, "s(1,0) = " + io::format_double(s10) + ", expected 0.28658869 +- 1e-6");
  t.check(std::abs(quincunx::shannon_coeff_quadrature(1, 0) - s10) <= 1e-10, "quadrature disagrees at (1,0)");
  const quincunx::PatternReport p = quincunx::support_pattern(3);
  for (const auto& e : p.entries) {
    const bool odd = (e.m + e.n) % 2 != 0;
    if (odd) t.check(std::abs(e.s) > 0.01, "odd point vanishes");
    else if (e.m != 0 || e.n != 0) t.check(std::abs(e.s) < 1e-9, "even point nonzero");
  }
  const SupportSet support = quincunx::nonzero_support(quincunx::support_pattern(4));
  t.check(quincunx::sublattice_premise(quincunx::shifted(support, LatticePoint{1, 0}), 3), "premise false");
  return t.outcome("s(0,0) " + io::format_double(s00) + ", s(1,0) " + io::format_double(s10) +
                   ", W=3 min odd |s| " + io::format_double(p.min_odd_magnitude));
}

}  // namespace

int main() {
  const std::vector<IntMatrix> mats = suite_matrices();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"SNF suite", [&] { return snf_suite(mats); }},
      {"partition and chart suite", [&] { return chart_suite(mats); }},
      {"encoding suite", encoding_suite},
      {"index-set suite", index_set_suite},
      {"transfer suite", transfer_suite},
      {"residual quantities", residual_suite},
      {"cascade quantities", cascade_suite},
      {"quincunx suite", quincunx_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.ok) ++failed;
    std::printf("[%s] criterion %zu, %s: %s [%.2fs]\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
