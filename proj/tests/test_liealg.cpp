#include <gtest/gtest.h>

#include "dynlax/liealg.hpp"
#include "dynlax/random.hpp"

using namespace dynlax;

namespace {

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

}  // namespace

TEST(BuildAlgebra, Sl2) {
  auto alg = build_algebra(Series::A, 1);
  EXPECT_EQ(alg->num_roots(), 2u);
  EXPECT_EQ(alg->dim(), 3);
  const std::size_t a = alg->simple(0);
  const Mat h = to_matrix(*alg, cartan_element(*alg, alg->coroot(a)));
  Mat expected(2, 2);
  expected << 1, 0, 0, -1;
  EXPECT_LT((h - expected).norm(), 1e-14);
  // H_alpha from the commutator of the elementary matrices
  const Mat e = alg->root_vectors[a], f = alg->root_vectors[alg->negative_of[a]];
  EXPECT_LT((commutator(e, f) - expected).norm(), 1e-14);
}

TEST(BuildAlgebra, Sl3CartanData) {
  auto alg = build_algebra(Series::A, 2);
  EXPECT_EQ(alg->num_roots(), 6u);
  Eigen::Matrix2i a;
  a << 2, -1, -1, 2;
  EXPECT_EQ(alg->cartan_matrix, Eigen::MatrixXi(a));
  Eigen::Matrix2d c;
  c << 2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3;
  EXPECT_LT((alg->cartan_inverse - c).norm(), 1e-14);
  EXPECT_LT((alg->cartan_matrix.cast<double>() * alg->cartan_inverse - Mat::Identity(2, 2)).norm(), 1e-12);
}

TEST(BuildAlgebra, RootOrderIsHeightThenLex) {
  auto alg = build_algebra(Series::A, 3);
  EXPECT_EQ(root_key(*alg, 0), "1,0,0");
  EXPECT_EQ(root_key(*alg, 1), "0,1,0");
  EXPECT_EQ(root_key(*alg, 2), "0,0,1");
  EXPECT_EQ(root_key(*alg, 3), "1,1,0");
  EXPECT_EQ(root_key(*alg, 5), "1,1,1");
  EXPECT_EQ(root_key(*alg, 6), "-1,0,0");
}

TEST(BuildAlgebra, UnsupportedSeries) {
  EXPECT_THROW(build_algebra(Series::E, 8), UnsupportedAlgebra);
  EXPECT_THROW(build_algebra(Series::A, 0), UnsupportedAlgebra);
  EXPECT_THROW(parse_series("Q"), UnsupportedAlgebra);
}

class AlgebraInvariants : public ::testing::TestWithParam<int> {};

TEST_P(AlgebraInvariants, StructuralIdentities) {
  auto alg = build_algebra(Series::A, GetParam());
  const auto& A = *alg;
  for (std::size_t a = 0; a < A.num_roots(); ++a) {
    const GElement ea = root_element(A, a);
    const GElement fa = root_element(A, A.negative_of[a]);
    EXPECT_NEAR(form(A, ea, fa), 1.0, 0.0);
    if (A.roots[a].positive) {
      const GElement h = bracket(A, ea, fa);
      EXPECT_LT((h - cartan_element(A, A.coroot(a))).norm(), 1e-14);
    }
    for (int k = 0; k < A.rank; ++k) {
      // [x_k, e_a] = a(x_k) e_a and (H_a, x_k) = a(x_k)
      CartanPoint xk = CartanPoint::zero(A.rank);
      xk[k] = 1.0;
      const GElement br = bracket(A, cartan_element(A, xk), ea);
      EXPECT_LT((br - A.alpha(a, xk) * ea).norm(), 1e-14);
      EXPECT_NEAR(form(A, cartan_element(A, A.coroot(a)), cartan_element(A, xk)), A.alpha(a, xk), 1e-12);
    }
    for (std::size_t b = 0; b < A.num_roots(); ++b) {
      const double nab = A.structure_constants(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      const double nba = A.structure_constants(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a));
      EXPECT_EQ(nab, -nba);
      const int c = A.sum_index(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      const GElement br = bracket(A, ea, root_element(A, b));
      if (c >= 0) {
        EXPECT_NE(nab, 0.0);
      } else if (b != A.negative_of[a]) {
        EXPECT_EQ(br.norm(), 0.0);
      }
    }
  }
  for (int i = 0; i < A.rank; ++i)
    for (int j = 0; j < A.rank; ++j)
      EXPECT_NEAR((A.h_basis[static_cast<std::size_t>(i)] * A.h_basis[static_cast<std::size_t>(j)]).trace(),
                  i == j ? 1.0 : 0.0, 1e-14);
}

TEST_P(AlgebraInvariants, BracketMatchesCommutatorAndFormIsInvariant) {
  auto alg = build_algebra(Series::A, GetParam());
  const auto& A = *alg;
  Rng rng(17 + static_cast<std::uint64_t>(GetParam()));
  for (int n = 0; n < 200; ++n) {
    const GElement x = random_element(A, rng), y = random_element(A, rng), z = random_element(A, rng);
    const Mat mx = to_matrix(A, x), my = to_matrix(A, y);
    EXPECT_LT((to_matrix(A, bracket(A, x, y)) - commutator(mx, my)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((from_matrix(A, mx) - x).max_abs(), 1e-12);
    EXPECT_NEAR(form(A, x, y), (mx * my).trace(), 1e-12);
    EXPECT_LT(std::abs(form(A, bracket(A, x, y), z) + form(A, y, bracket(A, x, z))), 1e-10);
    const GElement jac = bracket(A, bracket(A, x, y), z) + bracket(A, bracket(A, y, z), x) +
                         bracket(A, bracket(A, z, x), y);
    EXPECT_LT(jac.max_abs(), 1e-10);
    EXPECT_EQ((project_h(x) + project_h_perp(x) - x).max_abs(), 0.0);
  }
}

INSTANTIATE_TEST_SUITE_P(Ranks, AlgebraInvariants, ::testing::Values(1, 2, 3, 4));

TEST(Projections, CartanAndRootParts) {
  auto alg = build_algebra(Series::A, 2);
  const GElement h = cartan_element(*alg, CartanPoint(Vec::Constant(2, 0.7)));
  EXPECT_EQ((project_h(h) - h).max_abs(), 0.0);
  EXPECT_EQ(project_h_perp(h).max_abs(), 0.0);
  const GElement e = root_element(*alg, 3);
  EXPECT_EQ(project_h(e).max_abs(), 0.0);
  EXPECT_EQ((project_h_perp(e) - e).max_abs(), 0.0);
}

TEST(Bracket, MismatchedAlgebraIsDimensionError) {
  auto a2 = build_algebra(Series::A, 2);
  auto a3 = build_algebra(Series::A, 3);
  EXPECT_THROW(bracket(*a2, zero_element(*a2), zero_element(*a3)), DimensionError);
}

TEST(WeylVector, LevelsAreHeights) {
  for (int rank = 1; rank <= 4; ++rank) {
    auto alg = build_algebra(Series::A, rank);
    const CartanPoint w = weyl_vector_w(*alg);
    for (std::size_t a = 0; a < alg->num_roots(); ++a) {
      int height = 0;
      for (int c : alg->roots[a].coords) height += c;
      EXPECT_NEAR(alg->alpha(a, w), height, 1e-12);
    }
  }
  auto sl3 = build_algebra(Series::A, 2);
  EXPECT_NEAR(sl3->alpha(sl3->root_index({1, 1}), weyl_vector_w(*sl3)), 2.0, 1e-12);
}

TEST(TorusAdjoint, MatchesMatrixConjugation) {
  auto alg = build_algebra(Series::A, 3);
  Rng rng(3);
  const CartanPoint h = random_cartan(*alg, rng);
  const GElement x = random_element(*alg, rng);
  EXPECT_LT((torus_adjoint(*alg, h, x) - adjoint(*alg, torus_element(*alg, h), x)).max_abs(), 1e-12);
}
