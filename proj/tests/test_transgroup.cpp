#include <doctest.h>

#include "bgpc/instances.hpp"
#include "bgpc/transgroup.hpp"
#include "suites.hpp"
#include "test_util.hpp"

using namespace bgpc;
using testutil::maxabs;

namespace {

GainSignalPair random_pair(int n, int rows, int N, RandomStream& rng) {
  return {testutil::safe_gains(n, rng), testutil::gaussian(rows, N, rng, true)};
}

double measurement_gap(const CMatrix& A, const GainSignalPair& a, const GainSignalPair& b) {
  return maxabs(CMatrix(a.lambda.asDiagonal() * (A * a.X)) - CMatrix(b.lambda.asDiagonal() * (A * b.X)));
}

TransformParams random_params(const GroupKind& kind, int n, RandomStream& rng) {
  TransformParams p;
  p.sigma = suites::random_sigma(rng);
  p.shift = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
  if (const auto side = exact_sqrt(n))
    p.shift2d = {static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(*side))),
                 static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(*side)))};
  // The GammaOf setup uses the identity basis, where any non-vanishing gamma is a member.
  if (std::holds_alternative<group::GammaOf>(kind)) p.gamma = testutil::safe_gains(n, rng);
  return p;
}

struct Setup {
  std::string name;
  GroupKind kind;
  CMatrix A;
};

CMatrix tall_basis() {
  RandomStream r(3);
  return random_orthonormal_columns(7, 3, r);
}

std::vector<Setup> setups() {
  return {{"scaling", group::Scaling{}, tall_basis()},
          {"dft", group::DftShiftScale{}, dft(7)},
          {"dft2", group::Dft2dShiftScale{}, dft2(9)},
          {"gamma_of_identity", group::GammaOf{identity(5)}, identity(5)}};
}

}  // namespace

TEST_CASE("is_generalized_permutation") {
  CHECK(is_generalized_permutation(identity(5)));
  RandomStream rng(1);
  const CVector g = testutil::safe_gains(6, rng);
  CHECK(is_generalized_permutation(g.asDiagonal().toDenseMatrix()));
  CMatrix perm = CMatrix::Zero(4, 4);
  perm(0, 2) = 3;
  perm(1, 0) = Complex(0, 2);
  perm(2, 3) = -1;
  perm(3, 1) = 0.5;
  CHECK(is_generalized_permutation(perm));
  CVector c = CVector::Zero(7);
  c(0) = 1;
  c(1) = 2;
  CHECK_FALSE(is_generalized_permutation(circulant(c)));
  CMatrix singular = identity(3);
  singular(2, 2) = 0;
  CHECK_FALSE(is_generalized_permutation(singular));
  CMatrix leak = identity(3);
  leak(0, 1) = 1e-3;
  CHECK_FALSE(is_generalized_permutation(leak));
}

TEST_CASE("gamma_member examples") {
  RandomStream rng(2);
  CHECK(gamma_member(identity(6), testutil::safe_gains(6, rng)));

  const CMatrix F = dft(8);
  CHECK(gamma_member(F, CVector(2.0 * std::sqrt(8.0) * F.col(2))));
  CHECK_FALSE(gamma_member(F, CVector(3.0 * (F.col(0) + F.col(1)))));

  const Complex sigma(0.3, -1.2);
  CVector h(4);
  h << 1, 1, -1, 1;
  CHECK(gamma_member(haar4(), CVector(sigma * h)));
  h << 1, 2, 1, 1;
  CHECK_FALSE(gamma_member(haar4(), CVector(sigma * h)));
  CHECK_THROWS_AS(gamma_member(CMatrix::Zero(3, 3), CVector::Ones(3)), RankError);
}

TEST_CASE("gamma_closed_form_member examples") {
  CHECK(gamma_closed_form_member(ClosedFormKind::FdInv, CVector::Constant(6, 3.0)));
  CHECK(gamma_closed_form_member(ClosedFormKind::Dft, CVector::Ones(8)));
  CVector h(4);
  h << 1, 1, 1, -1;
  CHECK(gamma_closed_form_member(ClosedFormKind::Haar4, h));
  CHECK(gamma_member(haar4(), h));
}

TEST_CASE("closed-form and numeric membership agree on every basis") {
  for (const auto& b : suites::gamma_bases()) {
    CAPTURE(b.label);
    const auto r = suites::gamma_agreement(b.kind, b.n, 200, 2024);
    CAPTURE(r.agreement.first_failure);
    CHECK(r.agreement.ok());
    CHECK(r.members_accepted.ok());
    CHECK(r.nonmembers_rejected.ok());
  }
}

TEST_CASE("orbit_equivalent examples") {
  RandomStream rng(4);
  SUBCASE("scaling") {
    const auto p = random_pair(6, 2, 3, rng);
    const GainSignalPair q{2.0 * p.lambda, p.X / 2.0};
    const auto v = orbit_equivalent(group::Scaling{}, p, q);
    REQUIRE(v.equivalent);
    REQUIRE(v.witness);
    CHECK(std::abs(v.witness->sigma - Complex(2.0)) < 1e-12);
  }
  SUBCASE("dft shift") {
    const int n = 8;
    const auto p = random_pair(n, n, 2, rng);
    const Complex sigma(0.7, 0.4);
    const CVector gamma = sigma * std::sqrt(double(n)) * CVector(dft(n).col(1));
    const GainSignalPair q{p.lambda.cwiseQuotient(gamma), sigma * circshift_rows(p.X, 1)};
    CHECK(measurement_gap(dft(n), p, q) < 1e-10);
    const auto v = orbit_equivalent(group::DftShiftScale{}, p, q);
    REQUIRE(v.equivalent);
    REQUIRE(v.witness);
    CHECK(v.witness->shift == 1);
    CHECK(std::abs(v.witness->sigma - sigma) < 1e-10);
  }
  SUBCASE("rank-3 pair under Gamma(F)") {
    const auto ce = counterexample(CounterexampleKind::JointSparseRank3_7);
    const auto v = orbit_equivalent(group::GammaOf{dft(7)}, {ce.instance.lambda0, ce.instance.X0}, ce.pair1);
    CHECK_FALSE(v.equivalent);
    CHECK(measurement_gap(dft(7), {ce.instance.lambda0, ce.instance.X0}, ce.pair1) < 1e-9);
  }
  SUBCASE("vanishing gains are rejected") {
    auto p = random_pair(5, 5, 2, rng);
    p.lambda(2) = 0;
    CHECK_THROWS_AS(orbit_equivalent(group::GammaOf{identity(5)}, p, p), DegenerateInputError);
  }
}

TEST_CASE("apply_transform identities and measurement invariance") {
  RandomStream rng(5);
  const auto p = random_pair(7, 7, 3, rng);
  const auto same = apply_transform(group::Scaling{}, TransformParams{}, p);
  CHECK(maxabs(CMatrix(same.X - p.X)) == 0.0);
  const auto same2 = apply_transform(group::DftShiftScale{}, TransformParams{}, p);
  CHECK(maxabs(CMatrix(same2.X - p.X)) < 1e-12);
  CHECK(maxabs(CVector(same2.lambda - p.lambda)) < 1e-12);

  TransformParams zero;
  zero.sigma = 0;
  CHECK_THROWS_AS(apply_transform(group::Scaling{}, zero, p), ParameterError);

  for (const auto& s : setups()) {
    CAPTURE(s.name);
    const int n = static_cast<int>(s.A.rows());
    for (int trial = 0; trial < 50; ++trial) {
      const auto q = random_pair(n, static_cast<int>(s.A.cols()), 3, rng);
      const auto t = apply_transform(s.kind, random_params(s.kind, n, rng), q);
      CHECK(measurement_gap(s.A, q, t) < 1e-9 * std::max(1.0, maxabs(CMatrix(q.lambda.asDiagonal() * s.A * q.X))));
    }
  }
}

TEST_CASE("group axioms: identity, inverses and composition stay in the group") {
  RandomStream rng(6);
  for (const auto& s : setups()) {
    CAPTURE(s.name);
    const int n = static_cast<int>(s.A.rows());
    const int rows = static_cast<int>(s.A.cols());
    for (int trial = 0; trial < 30; ++trial) {
      const auto p = random_pair(n, rows, 2, rng);
      const auto t1 = random_params(s.kind, n, rng);
      const auto t2 = random_params(s.kind, n, rng);
      const auto t3 = random_params(s.kind, n, rng);

      const auto a = apply_transform(s.kind, t1, p);
      const auto ab = apply_transform(s.kind, t2, a);
      const auto abc = apply_transform(s.kind, t3, ab);

      // Composition is again a single group element.
      const auto v2 = orbit_equivalent(s.kind, p, ab);
      REQUIRE(v2.equivalent);
      const auto direct = apply_transform(s.kind, *v2.witness, p);
      CHECK(maxabs(CMatrix(direct.X - ab.X)) < 1e-9 * std::max(1.0, maxabs(ab.X)));
      CHECK(maxabs(CVector(direct.lambda - ab.lambda)) < 1e-9 * std::max(1.0, max_abs(ab.lambda)));

      // Associativity: (t3 t2) t1 and t3 (t2 t1) reach the same pair.
      const auto v32 = orbit_equivalent(s.kind, a, abc);
      REQUIRE(v32.equivalent);
      const auto alt = apply_transform(s.kind, *v32.witness, a);
      CHECK(maxabs(CMatrix(alt.X - abc.X)) < 1e-8 * std::max(1.0, maxabs(abc.X)));

      // Inverse element brings the pair back.
      const auto back = orbit_equivalent(s.kind, a, p);
      REQUIRE(back.equivalent);
      const auto restored = apply_transform(s.kind, *back.witness, a);
      CHECK(maxabs(CMatrix(restored.X - p.X)) < 1e-9 * std::max(1.0, maxabs(p.X)));
      CHECK(maxabs(CVector(restored.lambda - p.lambda)) < 1e-9 * std::max(1.0, max_abs(p.lambda)));
    }
  }
}

TEST_CASE("orbit_equivalent is an equivalence relation with faithful witnesses") {
  RandomStream rng(7);
  for (const auto& s : setups()) {
    CAPTURE(s.name);
    const int n = static_cast<int>(s.A.rows());
    const int rows = static_cast<int>(s.A.cols());
    for (int trial = 0; trial < 30; ++trial) {
      const auto p0 = random_pair(n, rows, 2, rng);
      const auto p1 = apply_transform(s.kind, random_params(s.kind, n, rng), p0);
      const auto p2 = apply_transform(s.kind, random_params(s.kind, n, rng), p1);
      CHECK(orbit_equivalent(s.kind, p0, p0).equivalent);
      CHECK(orbit_equivalent(s.kind, p0, p1).equivalent);
      CHECK(orbit_equivalent(s.kind, p1, p0).equivalent);
      CHECK(orbit_equivalent(s.kind, p1, p2).equivalent);
      const auto v = orbit_equivalent(s.kind, p0, p2);
      REQUIRE(v.equivalent);
      REQUIRE(v.witness);
      const auto w = apply_transform(s.kind, *v.witness, p0);
      CHECK(maxabs(CMatrix(w.X - p2.X)) < 1e-9 * std::max(1.0, maxabs(p2.X)));

      const auto other = random_pair(n, rows, 2, rng);
      CHECK_FALSE(orbit_equivalent(s.kind, p0, other).equivalent);
    }
  }
}
