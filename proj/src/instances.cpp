#include "bgpc/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bgpc/conditions.hpp"

namespace bgpc {

namespace {

constexpr double kCounterexampleMinGain = 1e-3;

Complex draw(RandomStream& rng, bool complex_entries) {
  if (!complex_entries) return {rng.normal(), 0.0};
  const double re = rng.normal();
  const double im = rng.normal();
  return Complex(re, im) / std::sqrt(2.0);
}

CVector draw_gains(int n, RandomStream& rng, DrawOptions opt) {
  CVector g(n);
  for (int i = 0; i < n; ++i) {
    Complex v;
    do {
      v = draw(rng, opt.complex_entries);
    } while (std::abs(v) < opt.min_gain);
    g(i) = v;
  }
  return g;
}

CMatrix draw_matrix(int rows, int cols, RandomStream& rng, bool complex_entries) {
  CMatrix M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = draw(rng, complex_entries);
  return M;
}

CMatrix supported_rows(int n, const IndexSet& J, int N, RandomStream& rng, bool complex_entries) {
  CMatrix X = CMatrix::Zero(n, N);
  for (int j : J.members())
    for (int c = 0; c < N; ++c) X(j - 1, c) = draw(rng, complex_entries);
  return X;
}

void check_counts(int n, int s, int N) {
  if (n < 1 || N < 1) throw ParameterError("generator needs n >= 1 and N >= 1");
  if (s < 1 || s > n) throw ParameterError("support size s must satisfy 1 <= s <= n");
}

}  // namespace

std::string to_string(Model m) {
  switch (m) {
    case Model::Subspace: return "subspace";
    case Model::JointSparse: return "jointsparse";
    case Model::JointSparse2d: return "jointsparse2d";
    case Model::Piecewise: return "piecewise";
    case Model::Sparse: return "sparse";
  }
  return "?";
}

Model model_from_string(const std::string& s) {
  for (auto m : {Model::Subspace, Model::JointSparse, Model::JointSparse2d, Model::Piecewise, Model::Sparse})
    if (to_string(m) == s) return m;
  throw SchemaError("unknown model '" + s + "'");
}

std::string to_string(BasisDescriptor::Kind k) {
  using K = BasisDescriptor::Kind;
  switch (k) {
    case K::Dense: return "dense";
    case K::Dft: return "dft";
    case K::DftColumns: return "dft_columns";
    case K::Dft2: return "dft2";
    case K::FdInvDft: return "fd_inv_dft";
    case K::Identity: return "identity";
    case K::Haar4: return "haar4";
  }
  return "?";
}

BasisDescriptor::Kind basis_kind_from_string(const std::string& s) {
  using K = BasisDescriptor::Kind;
  for (auto k : {K::Dense, K::Dft, K::DftColumns, K::Dft2, K::FdInvDft, K::Identity, K::Haar4})
    if (to_string(k) == s) return k;
  throw SchemaError("unknown basis kind '" + s + "'");
}

BasisDescriptor BasisDescriptor::dense_matrix(CMatrix A) {
  BasisDescriptor b;
  b.kind = Kind::Dense;
  b.n = static_cast<int>(A.rows());
  b.dense = std::move(A);
  return b;
}

BasisDescriptor BasisDescriptor::dft(int n) {
  BasisDescriptor b;
  b.kind = Kind::Dft;
  b.n = n;
  return b;
}

BasisDescriptor BasisDescriptor::dft_columns(int n, std::vector<int> columns, Complex scale) {
  BasisDescriptor b;
  b.kind = Kind::DftColumns;
  b.n = n;
  b.columns = std::move(columns);
  b.scale = scale;
  return b;
}

BasisDescriptor BasisDescriptor::dft2(int n) {
  BasisDescriptor b;
  b.kind = Kind::Dft2;
  b.n = n;
  return b;
}

BasisDescriptor BasisDescriptor::fd_inv_dft(int n) {
  BasisDescriptor b;
  b.kind = Kind::FdInvDft;
  b.n = n;
  return b;
}

BasisDescriptor BasisDescriptor::identity(int n) {
  BasisDescriptor b;
  b.kind = Kind::Identity;
  b.n = n;
  return b;
}

BasisDescriptor BasisDescriptor::haar4() {
  BasisDescriptor b;
  b.kind = Kind::Haar4;
  b.n = 4;
  return b;
}

CMatrix BasisDescriptor::materialize() const {
  switch (kind) {
    case Kind::Dense: return dense;
    case Kind::Dft: return bgpc::dft(n);
    case Kind::DftColumns: {
      const CMatrix F = bgpc::dft(n);
      CMatrix A(n, static_cast<Eigen::Index>(columns.size()));
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] < 1 || columns[c] > n) throw SchemaError("dft_columns: column index out of range");
        A.col(static_cast<Eigen::Index>(c)) = scale * F.col(columns[c] - 1);
      }
      return A;
    }
    case Kind::Dft2: return bgpc::dft2(n);
    case Kind::FdInvDft: return CMatrix(bgpc::dft(n) * finite_diff_inv(n));
    case Kind::Identity: return bgpc::identity(n);
    case Kind::Haar4: return bgpc::haar4();
  }
  throw SchemaError("unknown basis kind");
}

IndexSet ProblemInstance::effective_support(const Tolerance& tol) const {
  if (support) return *support;
  return row_support(X0, tol);
}

GroupKind ProblemInstance::ambiguity_group() const {
  switch (model) {
    case Model::Subspace:
    case Model::Piecewise: return group::Scaling{};
    case Model::JointSparse: return group::DftShiftScale{};
    case Model::JointSparse2d: return group::Dft2dShiftScale{};
    case Model::Sparse: return group::GammaOf{basis.materialize()};
  }
  throw ParameterError("unknown model");
}

void validate_instance(const ProblemInstance& inst) {
  const CMatrix A = inst.basis.materialize();
  const auto n = A.rows();
  require_finite(A, "basis");
  require_finite(inst.X0, "X0");
  require_finite(CMatrix(inst.lambda0), "lambda0");
  if (inst.n != n || inst.lambda0.size() != n || inst.X0.rows() != A.cols() || inst.X0.cols() != inst.N || inst.N < 1)
    throw DimensionError("instance shapes are inconsistent with the basis");

  switch (inst.model) {
    case Model::Subspace:
      if (A.cols() >= n) throw DimensionError("subspace model needs a tall basis (n > m)");
      if (inst.m_or_s != A.cols()) throw ParameterError("subspace model: m does not match the basis");
      break;
    case Model::JointSparse:
    case Model::JointSparse2d:
    case Model::Piecewise: {
      const auto want = inst.model == Model::JointSparse ? BasisDescriptor::Kind::Dft
                        : inst.model == Model::JointSparse2d ? BasisDescriptor::Kind::Dft2
                                                             : BasisDescriptor::Kind::FdInvDft;
      if (inst.basis.kind != want)
        throw ParameterError(to_string(inst.model) + " model needs basis '" + to_string(want) + "'");
      const IndexSet rows = row_support(inst.X0);
      if (inst.support) {
        if (inst.support->n() != n || inst.support->size() != inst.m_or_s)
          throw ParameterError("declared support does not have size s");
        for (int j : rows.members())
          if (!inst.support->contains(j)) throw ParameterError("X0 has a nonzero row outside the declared support");
      } else if (rows.size() > inst.m_or_s) {
        throw ParameterError("X0 has more than s nonzero rows");
      }
      break;
    }
    case Model::Sparse:
      if (A.cols() != n) throw DimensionError("sparse model needs a square basis");
      if (count_nonzeros(inst.X0) > inst.m_or_s) throw ParameterError("X0 has more than s nonzero entries");
      break;
  }

  const CMatrix expected = inst.lambda0.asDiagonal() * (A * inst.X0);
  if (inst.Y.rows() != expected.rows() || inst.Y.cols() != expected.cols())
    throw DimensionError("measurement shape does not match");
  if (max_abs(CMatrix(inst.Y - expected)) > kConstructionTol * std::max(1.0, max_abs(expected)))
    throw SchemaError("measurement violates Y = diag(lambda0) A X0");
}

ProblemInstance make_instance(Model model, int m_or_s, BasisDescriptor basis, CVector lambda0, CMatrix X0,
                              std::optional<std::uint64_t> seed, std::optional<IndexSet> support) {
  ProblemInstance inst;
  inst.model = model;
  inst.m_or_s = m_or_s;
  const CMatrix A = basis.materialize();
  inst.n = static_cast<int>(A.rows());
  inst.N = static_cast<int>(X0.cols());
  inst.basis = std::move(basis);
  inst.lambda0 = std::move(lambda0);
  inst.X0 = std::move(X0);
  inst.support = std::move(support);
  inst.seed = seed;
  inst.rng = kRngName;
  if (inst.X0.rows() != A.cols() || inst.lambda0.size() != A.rows())
    throw DimensionError("make_instance: lambda0, A, X0 shapes are inconsistent");
  inst.Y = inst.lambda0.asDiagonal() * (A * inst.X0);
  validate_instance(inst);
  return inst;
}

CMatrix random_orthonormal_columns(int n, int m, RandomStream& rng, bool complex_entries) {
  if (m < 1 || m > n) throw DimensionError("random_orthonormal_columns needs 1 <= m <= n");
  const CMatrix G = draw_matrix(n, n, rng, complex_entries);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase of each column so that Q is Haar distributed.
  for (int j = 0; j < n; ++j) {
    const double a = std::abs(R(j, j));
    if (a > 0.0) Q.col(j) *= R(j, j) / a;
  }
  return Q.leftCols(m);
}

ProblemInstance random_subspace(int n, int m, int N, std::uint64_t seed, std::uint64_t stream, DrawOptions opt) {
  if (m < 1 || m >= n) throw DimensionError("random_subspace needs n > m >= 1");
  if (N < 1) throw ParameterError("random_subspace needs N >= 1");
  RandomStream rng(seed, stream);
  CMatrix A = random_orthonormal_columns(n, m, rng, opt.complex_entries);
  CVector lambda0 = draw_gains(n, rng, opt);
  CMatrix X0 = draw_matrix(m, N, rng, opt.complex_entries);
  return make_instance(Model::Subspace, m, BasisDescriptor::dense_matrix(std::move(A)), std::move(lambda0),
                       std::move(X0), seed);
}

IndexSet random_support(int n, int s, RandomStream& rng) {
  if (s < 0 || s > n) throw ParameterError("random_support: bad size");
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < s; ++i) {
    const auto j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(s));
  return IndexSet(n, std::move(pool));
}

namespace {

ProblemInstance random_supported(Model model, BasisDescriptor basis, int n, int s, int N,
                                 std::optional<IndexSet> J, std::uint64_t seed, std::uint64_t stream,
                                 DrawOptions opt) {
  check_counts(n, s, N);
  if (J && (J->n() != n || J->size() != s)) throw ParameterError("explicit support must have size s in {1..n}");
  RandomStream rng(seed, stream);
  const IndexSet support = J ? *J : random_support(n, s, rng);
  CVector lambda0 = draw_gains(n, rng, opt);
  CMatrix X0 = supported_rows(n, support, N, rng, opt.complex_entries);
  return make_instance(model, s, std::move(basis), std::move(lambda0), std::move(X0), seed, support);
}

}  // namespace

ProblemInstance random_jointsparse(int n, int s, int N, std::optional<IndexSet> J, std::uint64_t seed,
                                   std::uint64_t stream, DrawOptions opt) {
  return random_supported(Model::JointSparse, BasisDescriptor::dft(n), n, s, N, std::move(J), seed, stream, opt);
}

ProblemInstance random_jointsparse_2d(int n, int s, int N, std::optional<IndexSet> J, std::uint64_t seed,
                                      std::uint64_t stream, DrawOptions opt) {
  if (!exact_sqrt(n)) throw DimensionError("random_jointsparse_2d: n must be a perfect square");
  return random_supported(Model::JointSparse2d, BasisDescriptor::dft2(n), n, s, N, std::move(J), seed, stream, opt);
}

ProblemInstance random_piecewise(int n, int s, int N, std::optional<IndexSet> J, std::uint64_t seed,
                                 std::uint64_t stream, DrawOptions opt) {
  return random_supported(Model::Piecewise, BasisDescriptor::fd_inv_dft(n), n, s, N, std::move(J), seed, stream,
                          opt);
}

CMatrix bernoulli_gaussian(int n, int N, double theta, std::uint64_t seed, std::uint64_t stream) {
  if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("bernoulli_gaussian needs 0 < theta < 1");
  if (n < 1 || N < 1) throw ParameterError("bernoulli_gaussian needs n, N >= 1");
  RandomStream rng(seed, stream);
  CMatrix X = CMatrix::Zero(n, N);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < N; ++j) {
      const bool on = rng.bernoulli(theta);
      const double g = rng.normal();
      if (on) X(i, j) = g;
    }
  return X;
}

ProblemInstance random_sparse(BasisDescriptor basis, int N, double theta, std::uint64_t seed, std::uint64_t stream) {
  const CMatrix A = basis.materialize();
  const auto n = static_cast<int>(A.rows());
  CMatrix X0 = bernoulli_gaussian(n, N, theta, seed, stream);
  RandomStream rng(seed, derive_stream({stream, 0x6761696eULL}));
  CVector lambda0 = draw_gains(n, rng, {});
  const int s = count_nonzeros(X0);
  return make_instance(Model::Sparse, s, std::move(basis), std::move(lambda0), std::move(X0), seed);
}

std::string to_string(CounterexampleKind k) {
  switch (k) {
    case CounterexampleKind::SubspaceF8: return "subspace_f8";
    case CounterexampleKind::JointSparseDegenerate7: return "jointsparse_degenerate7";
    case CounterexampleKind::JointSparseRank3_7: return "jointsparse_rank3_7";
    case CounterexampleKind::Periodic: return "periodic";
  }
  return "?";
}

namespace {

// lambda1 = lambda0 ./ gamma with gamma = sqrt(n) F c; X1 = circulant(c) X0.
Counterexample circulant_pair(std::string name, int s, const CMatrix& X0, const CVector& c, RandomStream& rng,
                              std::optional<IndexSet> support) {
  const auto n = static_cast<int>(X0.rows());
  const CVector gamma = std::sqrt(static_cast<double>(n)) * (dft(n) * c);
  if (gamma.cwiseAbs().minCoeff() <= 1e-9) throw ParameterError(name + ": gamma vanishes");
  CVector lambda0 = draw_gains(n, rng, {false, kCounterexampleMinGain});
  Counterexample ce{std::move(name),
                    make_instance(Model::JointSparse, s, BasisDescriptor::dft(n), lambda0, X0, std::nullopt,
                                  std::move(support)),
                    {lambda0.cwiseQuotient(gamma), circulant(c) * X0},
                    group::DftShiftScale{}};
  return ce;
}

}  // namespace

Counterexample counterexample(CounterexampleKind kind, std::uint64_t seed, PeriodicSpec periodic) {
  RandomStream rng(seed, static_cast<std::uint64_t>(kind));
  Counterexample ce;
  switch (kind) {
    case CounterexampleKind::SubspaceF8: {
      const int n = 8;
      const double scale = 2.0 * std::sqrt(2.0);
      const CVector gamma = scale * dft(n).col(2);
      const CVector lambda1 = draw_gains(n, rng, {false, kCounterexampleMinGain});
      CMatrix X0 = CMatrix::Zero(4, 2);
      X0(0, 0) = 1.0;
      X0(1, 1) = 1.0;
      CMatrix X1 = CMatrix::Zero(4, 2);
      X1(2, 0) = 1.0;
      X1(3, 1) = 1.0;
      ce = Counterexample{to_string(kind),
                          make_instance(Model::Subspace, 4, BasisDescriptor::dft_columns(n, {1, 2, 3, 4}, scale),
                                        gamma.cwiseProduct(lambda1), std::move(X0)),
                          {lambda1, std::move(X1)},
                          group::Scaling{}};
      break;
    }
    case CounterexampleKind::JointSparseDegenerate7: {
      CMatrix X0 = CMatrix::Zero(7, 3);
      X0(0, 0) = X0(1, 1) = X0(2, 2) = 1.0;
      CVector c = CVector::Zero(7);
      c(0) = 1.0;
      c(1) = 2.0;
      ce = circulant_pair(to_string(kind), 4, X0, c, rng, IndexSet(7, {1, 2, 3, 4}));
      break;
    }
    case CounterexampleKind::JointSparseRank3_7: {
      CMatrix X0 = CMatrix::Zero(7, 3);
      X0.topRows(4) << 1, 3, 2,
                       2, 1, 3,
                       3, 2, 1,
                       -29, -28.5, -17.5;
      CVector c(7);
      c << 2, 16, 1, 8, 0.5, 4, 32;
      ce = circulant_pair(to_string(kind), 4, X0, c, rng, std::nullopt);
      break;
    }
    case CounterexampleKind::Periodic: {
      const IndexSet& J = periodic.J;
      const int n = J.n();
      const auto p = periods(J);
      if (std::find(p.begin(), p.end(), periodic.period) == p.end())
        throw ParameterError("periodic counterexample: " + std::to_string(periodic.period) + " is not a period of " +
                             J.to_string());
      const CMatrix X0 = supported_rows(n, J, periodic.N, rng, false);
      CVector c = CVector::Zero(n);
      c(0) = 1.0;
      c(periodic.period) = 2.0;
      ce = circulant_pair(to_string(kind), J.size(), X0, c, rng, std::nullopt);
      break;
    }
  }
  ce.instance.seed = seed;
  return ce;
}

}  // namespace bgpc
