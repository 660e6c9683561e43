#include <doctest.h>

#include <filesystem>

#include "bgpc/conditions.hpp"
#include "bgpc/instance_io.hpp"
#include "bgpc/instances.hpp"
#include "test_util.hpp"

using namespace bgpc;
using testutil::maxabs;

namespace {

double construction_gap(const ProblemInstance& inst) {
  return maxabs(CMatrix(inst.Y - CMatrix(inst.lambda0.asDiagonal() * inst.basis.materialize() * inst.X0)));
}

bool identical(const ProblemInstance& a, const ProblemInstance& b) {
  return a.model == b.model && a.n == b.n && a.m_or_s == b.m_or_s && a.N == b.N && a.lambda0 == b.lambda0 &&
         a.X0 == b.X0 && a.Y == b.Y && a.support == b.support && a.seed == b.seed &&
         a.basis.materialize() == b.basis.materialize();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "bgpc_test_instances";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("random_subspace") {
  const auto a = random_subspace(10, 3, 3, 1);
  const auto b = random_subspace(10, 3, 3, 1);
  CHECK(identical(a, b));
  CHECK_FALSE(identical(a, random_subspace(10, 3, 3, 2)));
  const CMatrix A = a.basis.materialize();
  CHECK(maxabs(CMatrix(A.adjoint() * A - identity(3))) < 1e-10);
  CHECK(construction_gap(a) < 1e-12);
  // Real-valued draws by default.
  CHECK(a.X0.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.lambda0.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(random_subspace(5, 5, 2, 1), DimensionError);
  DrawOptions cx;
  cx.complex_entries = true;
  CHECK(random_subspace(6, 2, 2, 1, 0, cx).X0.imag().cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("random_jointsparse") {
  const auto p = random_jointsparse(10, 4, 4, IndexSet(10, {1, 2, 6, 7}), 3);
  CHECK(is_periodic(*p.support));
  CHECK(p.effective_support() == IndexSet(10, {1, 2, 6, 7}));
  for (int i : {3, 4, 5, 8, 9, 10}) CHECK(p.X0.row(i - 1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(construction_gap(p) < 1e-12);

  const auto u1 = random_jointsparse(10, 5, 3, std::nullopt, 8);
  const auto u2 = random_jointsparse(10, 5, 3, std::nullopt, 8);
  CHECK(*u1.support == *u2.support);
  CHECK(identical(u1, u2));

  const auto dense = random_jointsparse(6, 6, 2, IndexSet::universe(6), 1);
  CHECK(dense.effective_support() == IndexSet::universe(6));

  CHECK_THROWS_AS(random_jointsparse(10, 3, 3, IndexSet(10, {1, 2}), 1), ParameterError);
  CHECK_THROWS_AS(random_jointsparse(10, 0, 3, std::nullopt, 1), ParameterError);
  CHECK_THROWS_AS(random_jointsparse(10, 11, 3, std::nullopt, 1), ParameterError);
}

TEST_CASE("other generators satisfy the construction identity") {
  CHECK(construction_gap(random_jointsparse_2d(36, 3, 3, std::nullopt, 1)) < 1e-12);
  CHECK(construction_gap(random_piecewise(8, 3, 3, std::nullopt, 1)) < 1e-12);
  const auto sp = random_sparse(BasisDescriptor::dft(6), 20, 0.3, 1);
  CHECK(construction_gap(sp) < 1e-12);
  CHECK(sp.m_or_s == count_nonzeros(sp.X0));
}

TEST_CASE("bernoulli_gaussian") {
  CHECK_THROWS_AS(bernoulli_gaussian(6, 10, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(bernoulli_gaussian(6, 10, 1.0, 1), ParameterError);
  const CMatrix B = bernoulli_gaussian(6, 200, 0.1, 4);
  CHECK(B == bernoulli_gaussian(6, 200, 0.1, 4));
  const double frac = static_cast<double>((B.array() != Complex(0.0)).count()) / static_cast<double>(B.size());
  CHECK(std::abs(frac - 0.1) <= 0.02);
  // Across seeds the nonzero fraction stays inside the 3-sigma band.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const CMatrix C = bernoulli_gaussian(6, 200, 0.1, seed);
    const double f = static_cast<double>((C.array() != Complex(0.0)).count()) / 1200.0;
    CHECK(std::abs(f - 0.1) <= 0.0261);
  }
}

TEST_CASE("counter-example constructions") {
  for (auto kind : {CounterexampleKind::SubspaceF8, CounterexampleKind::JointSparseDegenerate7,
                    CounterexampleKind::JointSparseRank3_7, CounterexampleKind::Periodic}) {
    const auto ce = counterexample(kind);
    CAPTURE(ce.name);
    const CMatrix A = ce.instance.basis.materialize();
    const CMatrix Y1 = ce.pair1.lambda.asDiagonal() * A * ce.pair1.X;
    CHECK(maxabs(CMatrix(Y1 - ce.instance.Y)) < 1e-9);
    CHECK(construction_gap(ce.instance) < 1e-12);
    CHECK(ce.instance.lambda0.cwiseAbs().minCoeff() >= 1e-3);
    CHECK(ce.pair1.lambda.cwiseAbs().minCoeff() > 0.0);
    CHECK_FALSE(orbit_equivalent(ce.group, {ce.instance.lambda0, ce.instance.X0}, ce.pair1).equivalent);
  }

  const auto f8 = counterexample(CounterexampleKind::SubspaceF8);
  CMatrix top = CMatrix::Zero(4, 2);
  top(0, 0) = top(1, 1) = 1;
  CHECK(f8.instance.X0 == top);
  CMatrix bottom = CMatrix::Zero(4, 2);
  bottom(2, 0) = bottom(3, 1) = 1;
  CHECK(f8.pair1.X == bottom);
  const CVector gamma = 2.0 * std::sqrt(2.0) * CVector(dft(8).col(2));
  CHECK(maxabs(CVector(f8.instance.lambda0 - gamma.cwiseProduct(f8.pair1.lambda))) < 1e-12);

  const auto r3 = counterexample(CounterexampleKind::JointSparseRank3_7);
  CHECK(r3.pair1.X(2, 0) == Complex(-889.0));
  CHECK(r3.pair1.X(4, 0) == Complex(-444.5));

  const auto deg = counterexample(CounterexampleKind::JointSparseDegenerate7);
  CHECK(deg.instance.m_or_s == 4);
  CHECK(deg.instance.effective_support() == IndexSet(7, {1, 2, 3, 4}));

  const auto per = counterexample(CounterexampleKind::Periodic);
  CHECK(per.instance.effective_support() == IndexSet(10, {1, 2, 6, 7}));
  // X1 = P X0 with P = circulant(e1 + 2 e6).
  CVector c = CVector::Zero(10);
  c(0) = 1;
  c(5) = 2;
  CHECK(maxabs(CMatrix(per.pair1.X - circulant(c) * per.instance.X0)) < 1e-12);

  CHECK(identical(counterexample(CounterexampleKind::Periodic, 5).instance,
                  counterexample(CounterexampleKind::Periodic, 5).instance));
  CHECK_THROWS_AS(counterexample(CounterexampleKind::Periodic, 1, PeriodicSpec{IndexSet(10, {1, 2, 6, 7}), 3, 4}),
                  ParameterError);
}

TEST_CASE("instance JSON round trip") {
  const std::vector<ProblemInstance> cases = {
      random_subspace(10, 3, 3, 1),
      random_jointsparse(10, 4, 4, IndexSet(10, {1, 2, 6, 7}), 2),
      random_jointsparse_2d(16, 3, 3, std::nullopt, 3),
      random_piecewise(8, 3, 3, std::nullopt, 4),
      random_sparse(BasisDescriptor::haar4(), 6, 0.5, 5),
      counterexample(CounterexampleKind::SubspaceF8).instance,
      counterexample(CounterexampleKind::JointSparseDegenerate7).instance,
      counterexample(CounterexampleKind::JointSparseRank3_7).instance,
  };
  for (const auto& inst : cases) {
    CAPTURE(to_string(inst.model));
    const auto j = instance_to_json(inst);
    const auto back = instance_from_json(nlohmann::json::parse(j.dump()));
    CHECK(identical(inst, back));
    CHECK(instance_to_json(back).dump() == j.dump());
    const auto path = scratch(to_string(inst.model) + ".json");
    save_instance(inst, path);
    CHECK(identical(load_instance(path), inst));
  }
  // Rational constants survive exactly.
  const auto r3 = counterexample(CounterexampleKind::JointSparseRank3_7).instance;
  CHECK(instance_from_json(instance_to_json(r3)).X0(3, 1) == Complex(-28.5));
}

TEST_CASE("instance JSON errors") {
  auto j = instance_to_json(random_subspace(6, 2, 2, 1));
  auto broken = j;
  broken["schema_version"] = 99;
  CHECK_THROWS_AS(instance_from_json(broken), SchemaError);
  broken = j;
  broken.erase("X0");
  CHECK_THROWS_AS(instance_from_json(broken), SchemaError);
  broken = j;
  broken["model"] = "nope";
  CHECK_THROWS_AS(instance_from_json(broken), Error);
  broken = j;
  broken["Y"][0][0][0] = 1e6;
  CHECK_THROWS_AS(instance_from_json(broken), SchemaError);
  broken = j;
  broken["lambda0"][0] = "x";
  CHECK_THROWS_AS(instance_from_json(broken), SchemaError);
  broken = j;
  broken["N"] = 5;
  CHECK_THROWS_AS(instance_from_json(broken), SchemaError);
  const auto path = scratch("garbage.json");
  write_text_file(path, "{not json");
  CHECK_THROWS_AS(load_instance(path), SchemaError);
  CHECK_THROWS_AS(load_instance(scratch("missing.json")), Error);
}

TEST_CASE("make_instance validates model structure") {
  RandomStream rng(1);
  const CVector lambda = testutil::safe_gains(6, rng);
  CMatrix X = testutil::gaussian(6, 2, rng);
  CHECK_THROWS(make_instance(Model::JointSparse, 2, BasisDescriptor::dft(6), lambda, X));
  X.bottomRows(4).setZero();
  CHECK_NOTHROW(make_instance(Model::JointSparse, 2, BasisDescriptor::dft(6), lambda, X));
  CHECK_THROWS(make_instance(Model::Subspace, 6, BasisDescriptor::identity(6), lambda, X));
}
