#include <doctest.h>

#include "bgpc/checkers.hpp"
#include "bgpc/instances.hpp"
#include "bgpc/transgroup.hpp"
#include "suites.hpp"
#include "test_util.hpp"

using namespace bgpc;
using testutil::maxabs;

TEST_CASE("build_G") {
  RandomStream rng(1);
  const CMatrix A = random_orthonormal_columns(6, 2, rng);
  const CMatrix Aperp = orthonormal_complement(A);
  const CMatrix Y = testutil::gaussian(6, 2, rng, true);
  const CMatrix G = build_G(Aperp.adjoint(), Y);
  CHECK(G.rows() == 8);
  CHECK(G.cols() == 6);

  // Independent assembly: vec(A_perp^* diag(x) Y), column by column.
  const CVector x = testutil::gaussian_vec(6, rng, true);
  const CMatrix M = Aperp.adjoint() * x.asDiagonal() * Y;
  CVector vec(M.size());
  for (Eigen::Index c = 0; c < M.cols(); ++c) vec.segment(c * M.rows(), M.rows()) = M.col(c);
  CHECK(maxabs(CMatrix(G * x - vec)) < 1e-12);

  const CMatrix G1 = build_G(Aperp.adjoint(), Y.leftCols(1));
  CHECK(maxabs(G1 - CMatrix(Aperp.adjoint() * Y.col(0).asDiagonal())) == 0.0);

  const auto inst = random_subspace(10, 4, 3, 5);
  const CMatrix P = orthonormal_complement(inst.basis.materialize());
  const CVector inv = inst.lambda0.cwiseInverse();
  CHECK(maxabs(CMatrix(build_G(P.adjoint(), inst.Y) * inv)) < 1e-9);

  CHECK_THROWS_AS(build_G(Aperp.adjoint(), testutil::gaussian(5, 2, rng)), DimensionError);
}

TEST_CASE("algorithm1 examples") {
  const auto good = random_subspace(10, 3, 3, 1);
  const CMatrix A = good.basis.materialize();
  const auto r = algorithm1(A, good.Y);
  CHECK(r.identifiable);
  CHECK(r.g_ranks.at("A") == 9);
  // The null space of G is one-dimensional: an independent SVD sees exactly one tiny singular value.
  const CMatrix G = build_G(orthonormal_complement(A).adjoint(), good.Y);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
  const auto sv = svd.singularValues();
  CHECK(sv(sv.size() - 1) < 1e-10 * sv(0));
  CHECK(sv(sv.size() - 2) > 1e-6 * sv(0));

  const auto f8 = counterexample(CounterexampleKind::SubspaceF8);
  const auto r8 = algorithm1(f8.instance.basis.materialize(), f8.instance.Y);
  CHECK_FALSE(r8.identifiable);
  CHECK_FALSE(r8.reason.empty());

  const auto thin = random_subspace(10, 8, 2, 1);
  CHECK_FALSE(algorithm1(thin.basis.materialize(), thin.Y).identifiable);

  CMatrix Y = good.Y;
  Y.row(3).setZero();
  CHECK_THROWS_AS(algorithm1(A, Y), PreconditionError);
  CMatrix deficient = A;
  deficient.col(2) = deficient.col(1);
  CHECK_THROWS_AS(algorithm1(deficient, good.Y), RankError);
}

TEST_CASE("algorithm2 examples") {
  const auto contiguous = random_jointsparse(10, 5, 5, IndexSet(10, {1, 2, 3, 4, 5}), 1);
  CHECK(algorithm2(contiguous.Y, *contiguous.support, 5).identifiable);

  const auto periodic = random_jointsparse(10, 4, 4, IndexSet(10, {1, 2, 6, 7}), 1);
  const auto rp = algorithm2(periodic.Y, *periodic.support, 4);
  CHECK_FALSE(rp.identifiable);
  CHECK(rp.failing_support.has_value());
  CHECK_FALSE(rp.reason.empty());

  const auto rank3 = counterexample(CounterexampleKind::JointSparseRank3_7);
  const auto r3 = algorithm2(rank3.instance.Y, rank3.instance.effective_support(), 4);
  CHECK_FALSE(r3.identifiable);
  Algorithm2Options diag;
  diag.diagnose = true;
  const auto full = algorithm2(rank3.instance.Y, rank3.instance.effective_support(), 4, {}, diag);
  CHECK_FALSE(full.identifiable);
  CHECK(full.g_ranks.size() == binomial(7, 4));
  // The alien support {1,3,5,7} admits a solution.
  CHECK(full.g_ranks.at("{1,3,5,7}") <= 6);

  CHECK_THROWS_AS(algorithm2(contiguous.Y, *contiguous.support, 4), ParameterError);
  Algorithm2Options tight;
  tight.max_supports = 10;
  CHECK_THROWS_AS(algorithm2(contiguous.Y, *contiguous.support, 5, {}, tight), GuardError);
}

TEST_CASE("verdicts are invariant under the ambiguity group and under scaling of Y") {
  RandomStream rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 6 + trial % 4;
    const int k = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - 1)));
    const int N = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - 1)));
    const Complex c = suites::random_sigma(rng) * 1e3;

    const auto sub = random_subspace(n, k, N, 7, static_cast<std::uint64_t>(trial));
    const CMatrix A = sub.basis.materialize();
    TransformParams tp;
    tp.sigma = suites::random_sigma(rng);
    const auto moved = apply_transform(group::Scaling{}, tp, {sub.lambda0, sub.X0});
    const CMatrix Y2 = moved.lambda.asDiagonal() * A * moved.X;
    const bool v = algorithm1(A, sub.Y).identifiable;
    CHECK(algorithm1(A, Y2).identifiable == v);
    CHECK(algorithm1(A, CMatrix(c * sub.Y)).identifiable == v);

    const auto js = random_jointsparse(n, k, N, std::nullopt, 7, static_cast<std::uint64_t>(trial));
    tp.shift = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    const auto mv = apply_transform(group::DftShiftScale{}, tp, {js.lambda0, js.X0});
    const CMatrix Yj = mv.lambda.asDiagonal() * dft(n) * mv.X;
    const bool vj = algorithm2(js.Y, *js.support, k).identifiable;
    CHECK(algorithm2(Yj, js.support->shifted(tp.shift), k).identifiable == vj);
    CHECK(algorithm2(CMatrix(c * js.Y), *js.support, k).identifiable == vj);
  }
}

TEST_CASE("sufficient conditions imply True and necessary-bound violations imply False") {
  const auto sub = suites::subspace_oracles(100, 11);
  CAPTURE(sub.sufficient_implies_true.first_failure);
  CAPTURE(sub.necessary_violation_implies_false.first_failure);
  CHECK(sub.sufficient_implies_true.ok());
  CHECK(sub.necessary_violation_implies_false.ok());
  const auto js = suites::jointsparse_oracles(100, 12);
  CAPTURE(js.sufficient_implies_true.first_failure);
  CAPTURE(js.necessary_violation_implies_false.first_failure);
  CHECK(js.sufficient_implies_true.ok());
  CHECK(js.necessary_violation_implies_false.ok());
}
