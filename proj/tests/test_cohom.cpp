#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "hodgelim/cohom.hpp"
#include "hodgelim/sampling.hpp"
#include "oracles.hpp"
#include "random_util.hpp"

using namespace hodgelim;

namespace {

TwoTermComplex line_complex(std::vector<int> c0, std::vector<int> c1, PolyMatrix d) { return {std::move(c0), std::move(c1), std::move(d)}; }

long rr_chi(const std::vector<int>& d) {
  long s = 0;
  for (int x : d) s += x + 1;
  return s;
}

// Kostov-generic rank-2 systems on four points whose limit is the trivial
// filtration.
std::vector<FuchsianSystem> pvi_systems(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<FuchsianSystem> out;
  for (int it = 0; it < 400 && out.size() < count; ++it) {
    FuchsianSystem s = random_system(rng, 2, 4);
    if (iterate_to_partial_oper(s).filtration.length() == 1) out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(HyperDims, LineBundleTable) {
  EXPECT_EQ(hyper_dims(line_complex({-1}, {}, PolyMatrix(0, 1))), (HyperDims{0, 0, 0}));
  EXPECT_EQ(hyper_dims(line_complex({-2}, {}, PolyMatrix(0, 1))), (HyperDims{0, 1, 0}));
  PolyMatrix id(1, 1);
  id(0, 0) = Poly(Rat(1));
  EXPECT_EQ(hyper_dims(line_complex({0}, {0}, id)), (HyperDims{0, 0, 0}));
  EXPECT_EQ(hyper_dims(line_complex({}, {-2}, PolyMatrix(1, 0))), (HyperDims{0, 0, 1}));
  EXPECT_EQ(hyper_dims(line_complex({2}, {}, PolyMatrix(0, 1))), (HyperDims{3, 0, 0}));
  EXPECT_EQ(hyper_dims(line_complex({}, {1}, PolyMatrix(1, 0))), (HyperDims{0, 2, 0}));
  // multiplication by t: O -> O(1) has cokernel a skyscraper
  PolyMatrix t(1, 1);
  t(0, 0) = Poly{Rat(0), Rat(1)};
  EXPECT_EQ(hyper_dims(line_complex({0}, {1}, t)), (HyperDims{0, 1, 0}));
}

TEST(HyperDims, RejectsDegreeViolation) {
  PolyMatrix t(1, 1);
  t(0, 0) = Poly{Rat(0), Rat(1)};
  EXPECT_THROW(hyper_dims(line_complex({0}, {0}, t)), std::invalid_argument);
}

TEST(HyperDims, RandomComplexesMatchOracles) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> deg(-5, 3), size(0, 3);
  for (int it = 0; it < 100; ++it) {
    std::vector<int> c0(static_cast<std::size_t>(size(rng))), c1(static_cast<std::size_t>(size(rng)));
    for (auto& x : c0) x = deg(rng);
    for (auto& x : c1) x = deg(rng);
    PolyMatrix d(c1.size(), c0.size());
    for (std::size_t i = 0; i < c1.size(); ++i)
      for (std::size_t j = 0; j < c0.size(); ++j)
        if (c1[i] >= c0[j]) d(i, j) = gen::random_poly(rng, c1[i] - c0[j]);
    const TwoTermComplex c{c0, c1, d};
    const HyperDims h = hyper_dims(c);
    EXPECT_EQ(h.euler(), rr_chi(c0) - rr_chi(c1));
    EXPECT_EQ(h.h0, oracle::kernel_sections_dim(d, c0));
    std::vector<int> dual1;
    for (int x : c1) dual1.push_back(-x - 2);
    EXPECT_EQ(h.h2, oracle::kernel_sections_dim(d.transpose(), dual1));
    EXPECT_GE(h.h1, 0);
  }
}

TEST(EndComplex, RequiresPoints) {
  FuchsianSystem s;
  s.rank = 1;
  s.residues = {};
  EXPECT_THROW(total_end_complex(s), std::invalid_argument);
  HodgeSystem e;
  e.levels = {{SplitBundle::trivial(1), ParabolicData{}}};
  EXPECT_THROW(graded_end_complex(e, 0), std::invalid_argument);
}

TEST(EndComplex, InvalidP) {
  const FuchsianSystem s = fixtures::f1();
  const GTFiltration F = GTFiltration::trivial(2);
  EXPECT_THROW(parabolic_end_complex(s, F, 2), std::invalid_argument);
  EXPECT_THROW(parabolic_end_complex(s, F, -1), std::invalid_argument);
  EXPECT_NO_THROW(parabolic_end_complex(s, F, 1));
}

TEST(EndComplex, F1SplittingTypes) {
  // full flags at 0 and 1 each cut one condition, the trivial flag at 2 none
  const TotalEndComplex t = total_end_complex(fixtures::f1());
  EXPECT_EQ(t.c0.size(), 4u);
  EXPECT_EQ(t.c1.size(), 4u);
  EXPECT_EQ(rr_chi(t.c0), 4 - 2);
  EXPECT_EQ(rr_chi(t.c1), 4 + 4 - 2);
  EXPECT_EQ(t.c0, (std::vector<int>{0, 0, -1, -1}));
  // e1 spans an invariant line: projection onto it is a flat endomorphism
  EXPECT_GE(t.dims.h0, 2);
  const TotalEndComplex st = total_end_complex(fixtures::f1(), {true, false});
  // strongly parabolic at the trivial flag kills the whole fiber
  EXPECT_EQ(rr_chi(st.c1), 4 + 4 - 3 - 3 - 4);
}

TEST(EndComplex, GradedRanksAddUp) {
  std::mt19937_64 rng(7);
  int multi = 0;
  for (int it = 0; it < 12; ++it) {
    const std::size_t r = 2 + static_cast<std::size_t>(it % 2);
    const FuchsianSystem s = random_system(rng, r, 3 + static_cast<std::size_t>(it % 3));
    const PartialOper po = iterate_to_partial_oper(s);
    const HodgeSystem& e = po.limit;
    const long m = static_cast<long>(e.levels.size());
    multi += m > 1;
    std::size_t c0 = 0, c1 = 0;
    for (long p = -(m - 1); p <= m; ++p) {
      const TwoTermComplex c = graded_end_complex(e, p);
      c0 += c.c0.size();
      c1 += c.c1.size();
    }
    EXPECT_EQ(c0, r * r);
    EXPECT_EQ(c1, r * r);
  }
  EXPECT_GT(multi, 0);
}

TEST(DefDims, PainleveSix) {
  const auto systems = pvi_systems(3, 5);
  ASSERT_EQ(systems.size(), 3u);
  for (const auto& s : systems) {
    const GTFiltration F = GTFiltration::trivial(2);
    const DefDims d = graded_def_dims(s, F, true);
    EXPECT_EQ(d.total, (HyperDims{1, 2, 1}));
    EXPECT_EQ(d.trace_free, (HyperDims{0, 2, 0}));
    EXPECT_EQ(d.graded_h1_sum(), d.total.h1);
    EXPECT_EQ(d.graded_h1(0), d.graded_h1(1));
    EXPECT_EQ(2 * d.graded_h1(1), d.total.h1);
    // parabolic Riemann-Roch with generic full flags: r(r-1)/2 conditions in
    // C0 and r(r+1)/2 in C1 at every point
    const long r = 2, k = 4;
    const long chi = (r * r - k * r * (r - 1) / 2) - (r * r * (k - 1) - k * r * (r + 1) / 2);
    EXPECT_EQ(d.total.h1, 2 - chi);

    const DefDims def = graded_def_dims(s, F, false);
    EXPECT_EQ(def.total, (HyperDims{1, 9, 0}));
    EXPECT_EQ(def.graded_h1_sum(), def.total.h1);
  }
}

TEST(DefDims, RequiresGrStability) {
  EXPECT_THROW(graded_def_dims(fixtures::f1(), GTFiltration::trivial(2)), GrStabilityError);
}

TEST(DefDims, OperFixtureSymmetry) {
  for (const HodgeSystem& e : {fixtures::weighted_oper(), fixtures::weighted_oper4()}) {
    ASSERT_TRUE(is_stable(e));
    std::vector<HyperDims> h;
    for (long p = -1; p <= 2; ++p) h.push_back(hyper_dims(graded_end_complex(e, p, {true, false})));
    // index p + 1; Serre duality pairs Gr^p with Gr^{1-p}
    for (long p = -1; p <= 2; ++p) {
      const auto& a = h[static_cast<std::size_t>(p + 1)];
      const auto& b = h[static_cast<std::size_t>(2 - p)];
      EXPECT_EQ(a.h1, b.h1);
      EXPECT_EQ(a.h0, b.h2);
    }
  }
  std::vector<long> h1;
  for (long p = -1; p <= 2; ++p) h1.push_back(hyper_dims(graded_end_complex(fixtures::weighted_oper4(), p, {true, false})).h1);
  EXPECT_EQ(h1, (std::vector<long>{0, 1, 1, 0}));
}

TEST(EndComplex, StrongVariantNeedsStronglyParabolicTheta) {
  EXPECT_THROW(graded_end_complex(fixtures::oper(), 1, {true, false}), std::invalid_argument);
  EXPECT_NO_THROW(graded_end_complex(fixtures::oper(), 1));
}

TEST(DefDims, SymmetryOnRandomLimits) {
  std::mt19937_64 rng(19);
  int checked = 0, multi = 0;
  for (int it = 0; it < 20; ++it) {
    const std::size_t r = 2 + static_cast<std::size_t>(it % 2);
    const FuchsianSystem s = random_system(rng, r, 3 + static_cast<std::size_t>(it % 3));
    const PartialOper po = iterate_to_partial_oper(s);
    if (!is_stable(po.limit)) continue;
    const DefDims d = graded_def_dims(s, po.filtration, true);
    ++checked;
    multi += po.limit.levels.size() > 1;
    long upper = 0;
    for (const auto& g : d.graded) {
      EXPECT_EQ(g.dims.h1, d.graded_h1(1 - g.p)) << "p = " << g.p;
      if (g.p >= 1) upper += g.dims.h1;
    }
    EXPECT_EQ(d.graded_h1_sum(), d.total.h1);
    EXPECT_EQ(2 * upper, d.total.h1);
    EXPECT_EQ(d.trace_free.h0, 0);
    EXPECT_EQ(d.trace_free.h2, 0);
  }
  EXPECT_GT(checked, 5);
  EXPECT_GT(multi, 0);
}
