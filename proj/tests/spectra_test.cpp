#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "pleijel/spectra.hpp"

using namespace pleijel;
using namespace pleijel::spectra;

namespace {

constexpr double kPi = std::numbers::pi;

// Zeros of J_nu below x_max by sign scan of libstdc++'s cyl_bessel_j.
std::vector<double> scan_zeros(double nu, double x_max) {
  std::vector<double> out;
  const double step = 1e-3;
  double a = std::max(nu, step);
  double fa = std::cyl_bessel_j(nu, a);
  for (double b = a + step; b <= x_max + step; b += step) {
    const double fb = std::cyl_bessel_j(nu, b);
    if ((fa < 0) != (fb < 0)) {
      double l = a, h = b;
      for (int i = 0; i < 80; ++i) {
        const double m = 0.5 * (l + h);
        if ((std::cyl_bessel_j(nu, m) < 0) == (fa < 0)) {
          l = m;
        } else {
          h = m;
        }
      }
      const double z = 0.5 * (l + h);
      if (z <= x_max) out.push_back(z);
    }
    a = b;
    fa = fb;
  }
  return out;
}

// (lambda, multiplicity) for the Dirichlet disk by brute force over nu <= 20, k <= 10.
std::vector<std::pair<double, int>> brute_force_disk(double lambda_max) {
  std::vector<std::pair<double, int>> out;
  for (int nu = 0; nu <= 20; ++nu) {
    const auto zs = scan_zeros(nu, std::sqrt(lambda_max));
    for (std::size_t k = 0; k < zs.size() && k < 10; ++k) {
      out.emplace_back(zs[k] * zs[k], nu == 0 ? 1 : 2);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(DomainSpec, Validation) {
  EXPECT_THROW(DomainSpec::orthotope({1.0}), DomainError);
  EXPECT_THROW(DomainSpec::orthotope({1.0, -1.0}), DomainError);
  EXPECT_THROW(DomainSpec::sector(0.0), DomainError);
  EXPECT_THROW(DomainSpec::sector(7.0), DomainError);
  EXPECT_NO_THROW(DomainSpec::sector(2.0 * kPi));
  EXPECT_THROW(DomainSpec::annulus(1.0), DomainError);
  EXPECT_THROW(DomainSpec::annular_sector(0.5, -1.0), DomainError);
}

TEST(DomainSpec, Volumes) {
  EXPECT_DOUBLE_EQ(DomainSpec::orthotope({2.0, 3.0, 0.5}).volume(), 3.0);
  EXPECT_DOUBLE_EQ(DomainSpec::disk().volume(), kPi);
  EXPECT_DOUBLE_EQ(DomainSpec::sector(1.2).volume(), 0.6);
  EXPECT_DOUBLE_EQ(DomainSpec::annulus(0.5).volume(), kPi * 0.75);
  EXPECT_DOUBLE_EQ(DomainSpec::annular_sector(0.5, 1.2).volume(), 0.6 * 0.75);
}

TEST(NodalCount, Examples) {
  EXPECT_EQ(nodal_count(DomainSpec::disk(), {0, 3}), 3);
  EXPECT_EQ(nodal_count(DomainSpec::disk(), {4, 2}), 16);
  EXPECT_EQ(nodal_count(DomainSpec::orthotope({1.0, 1.3, 2.0}), {2, 3, 5}), 30);
  EXPECT_EQ(nodal_count(DomainSpec::disk(), {0, 2}, BoundaryCondition::neumann), 3);
  EXPECT_EQ(nodal_count(DomainSpec::disk(), {3, 2}, BoundaryCondition::neumann), 12);
  EXPECT_EQ(nodal_count(DomainSpec::sector(1.0), {3, 4}), 12);
  EXPECT_EQ(nodal_count(DomainSpec::annulus(0.3), {2, 5}), 20);
  EXPECT_EQ(nodal_count(DomainSpec::annular_sector(0.3, 2.0), {2, 5}), 10);
}

TEST(NodalCount, InvalidModes) {
  EXPECT_THROW((void)nodal_count(DomainSpec::disk(), {0}), DomainError);
  EXPECT_THROW((void)nodal_count(DomainSpec::disk(), {1, 0}), DomainError);
  EXPECT_THROW((void)nodal_count(DomainSpec::sector(1.0), {0, 1}), DomainError);
  EXPECT_THROW((void)nodal_count(DomainSpec::orthotope({1.0, 1.0}), {1, 2, 3}), DomainError);
  EXPECT_THROW((void)nodal_count(DomainSpec::annulus(0.5), {0, 1}, BoundaryCondition::neumann),
               DomainError);
}

TEST(Weyl, Examples) {
  EXPECT_NEAR(weyl_count(DomainSpec::disk(), 1000.0), 250.0, 1e-10);
  EXPECT_NEAR(weyl_count(DomainSpec::orthotope({1.0, 1.0}), 300.0), 300.0 / (4.0 * kPi), 1e-12);
  EXPECT_NEAR(weyl_count(DomainSpec::annulus(0.5), 1000.0), 187.5, 1e-10);
  EXPECT_NEAR(weyl_count(DomainSpec::sector(0.7), 500.0), 500.0 * 0.7 / (8.0 * kPi), 1e-11);
  // unit cube: (2 pi)^-3 (4 pi / 3) lambda^{3/2}
  EXPECT_NEAR(weyl_count(DomainSpec::orthotope({1.0, 1.0, 1.0}), 400.0),
              4.0 * kPi / 3.0 * 8000.0 / std::pow(2.0 * kPi, 3), 1e-10);
  EXPECT_THROW((void)weyl_count(DomainSpec::disk(), 0.0), DomainError);
}

TEST(Enumerate, DiskFirstRecords) {
  const auto recs = enumerate(DomainSpec::disk(), 60.0);
  ASSERT_GE(recs.size(), 6U);
  const std::vector<std::pair<long, long>> modes = {{0, 1}, {1, 1}, {2, 1}, {0, 2}, {3, 1}, {1, 2}};
  const std::vector<int> mult = {1, 2, 2, 1, 2, 2};
  for (std::size_t i = 0; i < 6; ++i) {
    ASSERT_EQ(recs[i].modes.size(), 1U);
    EXPECT_EQ(recs[i].modes[0].indices, (ModeIndices{modes[i].first, modes[i].second}));
    EXPECT_EQ(recs[i].multiplicity, mult[i]);
  }
  EXPECT_NEAR(recs[0].lambda, 5.783185962946784, 1e-11);
  EXPECT_NEAR(recs[1].lambda, 14.681970642123893, 1e-10);
}

TEST(Enumerate, DiskMatchesBruteForce) {
  const double lambda_max = 150.0;
  const auto oracle = brute_force_disk(lambda_max);
  const auto modes = raw_modes(DomainSpec::disk(), lambda_max);
  ASSERT_EQ(modes.size(), oracle.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    EXPECT_NEAR(modes[i].lambda, oracle[i].first, 1e-9 * oracle[i].first) << i;
    EXPECT_EQ(modes[i].multiplicity, oracle[i].second) << i;
  }
}

TEST(Enumerate, SquareMergesSymmetricPairs) {
  const auto recs = enumerate(DomainSpec::orthotope({1.0, 1.0}), 50.0);
  ASSERT_EQ(recs.size(), 2U);
  EXPECT_NEAR(recs[0].lambda, 2.0 * kPi * kPi, 1e-12);
  EXPECT_EQ(recs[0].multiplicity, 1);
  EXPECT_NEAR(recs[1].lambda, 5.0 * kPi * kPi, 1e-12);
  EXPECT_EQ(recs[1].multiplicity, 2);
  ASSERT_EQ(recs[1].modes.size(), 2U);
  EXPECT_EQ(recs[1].modes[0].indices, (ModeIndices{1, 2}));
  EXPECT_EQ(recs[1].modes[1].indices, (ModeIndices{2, 1}));
}

TEST(Enumerate, HalfDiskIsDiskWithoutRadialModes) {
  // alpha = pi makes the sector orders the integers nu >= 1, each once.
  const auto sector = raw_modes(DomainSpec::sector(kPi), 400.0);
  std::vector<ModeEntry> disk;
  for (const auto& m : raw_modes(DomainSpec::disk(), 400.0)) {
    if (m.indices[0] >= 1) disk.push_back(m);
  }
  ASSERT_EQ(sector.size(), disk.size());
  for (std::size_t i = 0; i < sector.size(); ++i) {
    EXPECT_EQ(sector[i].indices, disk[i].indices);
    EXPECT_DOUBLE_EQ(sector[i].lambda, disk[i].lambda);
    EXPECT_EQ(sector[i].multiplicity, 1);
  }
  const auto small = enumerate(DomainSpec::sector(kPi), 40.0);
  ASSERT_EQ(small.size(), 2U);
}

TEST(Enumerate, SectorPiOverMMatchesDiskOrders) {
  for (int m : {2, 3, 5}) {
    const auto sector = raw_modes(DomainSpec::sector(kPi / m), 1000.0);
    std::vector<double> want;
    for (const auto& d : raw_modes(DomainSpec::disk(), 1000.0)) {
      if (d.indices[0] > 0 && d.indices[0] % m == 0) want.push_back(d.lambda);
    }
    ASSERT_EQ(sector.size(), want.size()) << m;
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_NEAR(sector[i].lambda, want[i], 1e-12 * want[i]);
      EXPECT_DOUBLE_EQ(sector[i].order, static_cast<double>(sector[i].indices[0] * m));
    }
  }
}

TEST(Enumerate, AnnulusRecordsAreCrossZeros) {
  const double r = 0.5;
  const auto modes = raw_modes(DomainSpec::annulus(r), 2000.0);
  ASSERT_FALSE(modes.empty());
  for (const auto& m : modes) {
    const auto z = crossprod::cross_zero(special::Order(double(m.indices[0])),
                                         special::ZeroIndex(m.indices[1]),
                                         crossprod::AnnulusRadius(r));
    EXPECT_NEAR(m.lambda, z.a * z.a, 1e-10 * m.lambda);
    EXPECT_EQ(m.multiplicity, m.indices[0] == 0 ? 1 : 2);
  }
  // annular sector alpha = pi: orders nu >= 1 once each
  const auto half = raw_modes(DomainSpec::annular_sector(r, kPi), 2000.0);
  long with_mult = 0;
  for (const auto& m : modes) {
    if (m.indices[0] > 0) ++with_mult;
  }
  EXPECT_EQ(static_cast<long>(half.size()), with_mult);
}

TEST(Enumerate, CompleteInK) {
  // the next zero of every family lies above lambda_max
  const double lambda_max = 800.0;
  const auto modes = raw_modes(DomainSpec::disk(), lambda_max);
  long top_nu = 0;
  for (const auto& m : modes) top_nu = std::max(top_nu, m.indices[0]);
  for (long nu = 0; nu <= top_nu + 1; ++nu) {
    long kmax = 0;
    for (const auto& m : modes) {
      if (m.indices[0] == nu) kmax = std::max(kmax, m.indices[1]);
    }
    const double next =
        special::bessel_zero(special::Order(double(nu)), special::ZeroIndex(kmax + 1));
    EXPECT_GT(next * next, lambda_max) << nu;
  }
}

TEST(Enumerate, MergeSplitRoundTrip) {
  for (const auto& d : {DomainSpec::disk(), DomainSpec::orthotope({1.0, 1.0}),
                        DomainSpec::orthotope({1.0, 2.0, 2.0}), DomainSpec::annulus(0.3)}) {
    const auto raw = raw_modes(d, 600.0);
    const auto again = split_records(merge_modes(raw));
    ASSERT_EQ(raw.size(), again.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      EXPECT_EQ(raw[i].indices, again[i].indices);
      EXPECT_EQ(raw[i].lambda, again[i].lambda);
      EXPECT_EQ(raw[i].multiplicity, again[i].multiplicity);
    }
  }
}

TEST(Enumerate, WorkerCountDoesNotMatter) {
  const auto one = raw_modes(DomainSpec::annulus(0.2), 3000.0, BoundaryCondition::dirichlet, 1);
  const auto four = raw_modes(DomainSpec::annulus(0.2), 3000.0, BoundaryCondition::dirichlet, 4);
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].indices, four[i].indices);
    EXPECT_EQ(one[i].lambda, four[i].lambda);
  }
}

TEST(Enumerate, Errors) {
  EXPECT_THROW((void)enumerate(DomainSpec::disk(), 5.0), DomainError);
  EXPECT_THROW((void)enumerate(DomainSpec::disk(), -1.0), DomainError);
  EXPECT_THROW((void)enumerate(DomainSpec::sector(1.0), 100.0, BoundaryCondition::neumann),
               DomainError);
  EXPECT_THROW((void)enumerate(DomainSpec::orthotope({1.0, 1.0, 1.0}), 1e8), CapExceeded);
}

TEST(Enumerate, WeylCountingWithinFivePercent) {
  for (const auto& d : {DomainSpec::disk(), DomainSpec::annulus(0.5)}) {
    const auto recs = enumerate(d, 1e4);
    const double rel =
        static_cast<double>(count_with_multiplicity(recs, 1e4)) / weyl_count(d, 1e4) - 1.0;
    EXPECT_LE(std::abs(rel), 0.05) << d.name();
  }
}

TEST(Trace, DiskBeginning) {
  const auto t = ratio_trace(DomainSpec::disk(), 100.0);
  ASSERT_GE(t.rows.size(), 3U);
  EXPECT_EQ(t.rows[0].n, 1);
  EXPECT_EQ(t.rows[0].mu, 1);
  EXPECT_DOUBLE_EQ(t.rows[0].ratio, 1.0);
  EXPECT_DOUBLE_EQ(t.rows[0].running_sup, 1.0);
  EXPECT_EQ(t.rows[1].mu, 2);
  EXPECT_EQ(t.rows[2].mu, 2);
  EXPECT_EQ(t.rows[1].n, 2);
  EXPECT_EQ(t.rows[2].n, 3);
  EXPECT_DOUBLE_EQ(t.rows[1].lambda, t.rows[2].lambda);
}

TEST(Trace, Invariants) {
  for (const auto& d : {DomainSpec::disk(), DomainSpec::sector(1.0), DomainSpec::annulus(0.4),
                        DomainSpec::orthotope({1.0, std::pow(2.0, 0.25)})}) {
    const auto t = ratio_trace(d, 3000.0);
    ASSERT_FALSE(t.rows.empty());
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
      EXPECT_EQ(t.rows[i].n, t.rows[i - 1].n + 1);
      EXPECT_GE(t.rows[i].lambda, t.rows[i - 1].lambda);
      EXPECT_GE(t.rows[i].running_sup, t.rows[i - 1].running_sup);
      EXPECT_LE(t.rows[i].ratio, t.rows[i].running_sup);
      EXPECT_LE(t.rows[i].mu, t.rows[i].n);  // Courant
    }
    EXPECT_EQ(t.rows.back().n,
              count_with_multiplicity(enumerate(d, 3000.0), 3000.0));
  }
}

TEST(Trace, TailRatiosBelowPlanarBound) {
  // The Pleijel bound constrains only large n; the window starts at 1e3.
  const auto t = ratio_trace(DomainSpec::disk(), 1e4, BoundaryCondition::dirichlet, 1e3);
  ASSERT_FALSE(t.rows.empty());
  EXPECT_GT(t.rows.front().n, 1);
  for (const auto& row : t.rows) EXPECT_LE(row.ratio, 0.6916602 + 1e-6);
}

TEST(Trace, WindowKeepsGlobalIndex) {
  const auto full = ratio_trace(DomainSpec::disk(), 2000.0);
  const auto tail = ratio_trace(DomainSpec::disk(), 2000.0, BoundaryCondition::dirichlet, 1000.0);
  ASSERT_FALSE(tail.rows.empty());
  const auto first = std::find_if(full.rows.begin(), full.rows.end(),
                                  [](const TraceRow& r) { return r.lambda >= 1000.0; });
  ASSERT_NE(first, full.rows.end());
  EXPECT_EQ(tail.rows.front().n, first->n);
  EXPECT_EQ(tail.rows.back().n, full.rows.back().n);
  EXPECT_THROW((void)ratio_trace(DomainSpec::disk(), 100.0, BoundaryCondition::dirichlet, 200.0),
               DomainError);
}

TEST(Trace, NeumannDisk) {
  const auto t = ratio_trace(DomainSpec::disk(), 200.0, BoundaryCondition::neumann);
  ASSERT_GE(t.rows.size(), 3U);
  EXPECT_EQ(t.rows[0].lambda, 0.0);
  EXPECT_EQ(t.rows[0].mu, 1);
  // next are the two copies of j'_{1,1}
  EXPECT_NEAR(t.rows[1].lambda, 1.8411837813406593 * 1.8411837813406593, 1e-10);
  EXPECT_EQ(t.rows[1].mu, 2);
  EXPECT_EQ(t.rows[2].mu, 2);
  for (const auto& row : t.rows) {
    if (row.mode.size() == 2 && row.mode[0] == 0) {
      EXPECT_EQ(row.mu, row.mode[1] + 1);
    }
  }
}

TEST(Trace, RectangleMaximizerIsBalanced) {
  const std::vector<double> a = {1.0, std::pow(2.0, 0.25)};
  const double lambda_max = 2e4;
  const auto t =
      ratio_trace(DomainSpec::orthotope(a), lambda_max, BoundaryCondition::dirichlet, 0.9 * lambda_max);
  ASSERT_FALSE(t.rows.empty());
  EXPECT_FALSE(t.merged);
  const auto best = std::find_if(t.rows.begin(), t.rows.end(),
                                 [&](const TraceRow& r) { return r.ratio == t.final_sup(); });
  ASSERT_NE(best, t.rows.end());
  const double q = (best->mode[0] / a[0]) / (best->mode[1] / a[1]);
  EXPECT_LE(std::abs(q - 1.0), 0.1);
}

TEST(NearDegeneracies, AnnulusPaperCrossing) {
  const auto rep = near_degeneracies(DomainSpec::annulus(0.044951), 50.0, 1e-3);
  bool found = false;
  for (const auto& p : rep.pairs) {
    if ((p.mode_a == ModeIndices{3, 1} && p.mode_b == ModeIndices{0, 2}) ||
        (p.mode_a == ModeIndices{0, 2} && p.mode_b == ModeIndices{3, 1})) {
      found = true;
      EXPECT_NEAR(p.lambda_a, 40.7064, 1e-2);
      EXPECT_GE(p.gap, 0.0);
    }
  }
  EXPECT_TRUE(found);
}

TEST(NearDegeneracies, QuarterDiskHasNone) {
  EXPECT_TRUE(near_degeneracies(DomainSpec::sector(kPi / 2.0), 200.0, 1e-9).pairs.empty());
}

TEST(NearDegeneracies, SquareHasSome) {
  const auto rep = near_degeneracies(DomainSpec::orthotope({1.0, 1.0}), 50.0, 1e-9);
  ASSERT_FALSE(rep.pairs.empty());
  EXPECT_EQ(rep.pairs[0].mode_a, (ModeIndices{1, 2}));
  EXPECT_EQ(rep.pairs[0].mode_b, (ModeIndices{2, 1}));
}
