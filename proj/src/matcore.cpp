#include "bgpc/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bgpc {

double Tolerance::rel_for(Eigen::Index rows, Eigen::Index cols) const {
  if (rel) return *rel;
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * 64.0;
}

void validate(const Tolerance& tol) {
  if ((tol.rel && !(*tol.rel >= 0.0)) || !(tol.abs >= 0.0))
    throw ParameterError("tolerance cutoffs must be nonnegative");
}

void require_finite(const CMatrix& M, const char* what) {
  if (!M.allFinite()) throw ParameterError(std::string(what) + " has non-finite entries");
}

Eigen::VectorXd singular_values(const CMatrix& M) {
  if (M.size() == 0) throw DimensionError("singular values of an empty matrix");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues();
}

int numerical_rank(const CMatrix& M, const Tolerance& tol) {
  validate(tol);
  if (M.size() == 0) throw DimensionError("rank of an empty matrix");
  const Eigen::VectorXd sv = singular_values(M);
  const double smax = sv(0);
  if (smax <= tol.abs) return 0;
  const double cut = tol.rel_for(M.rows(), M.cols()) * smax;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

CMatrix orthonormal_complement(const CMatrix& A, const Tolerance& tol) {
  const auto n = A.rows();
  const auto m = A.cols();
  if (m == 0 || n <= m)
    throw DimensionError("orthonormal_complement needs n > m >= 1, got " + std::to_string(n) + "x" +
                         std::to_string(m));
  if (numerical_rank(A, tol) < m) throw RankError("orthonormal_complement: A is rank deficient");

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  return Q.rightCols(n - m);
}

CMatrix dft(int n) {
  if (n < 1) throw DimensionError("dft: n must be >= 1");
  CMatrix F(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      // Reduce j*k mod n first so large products keep full phase accuracy.
      const int e = static_cast<int>((static_cast<long long>(j) * k) % n);
      const double phase = -2.0 * std::numbers::pi * e / n;
      F(j, k) = std::polar(scale, phase);
    }
  }
  return F;
}

std::optional<int> exact_sqrt(int n) {
  if (n < 1) return std::nullopt;
  int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (r * r == n) return r;
  return std::nullopt;
}

CMatrix dft2(int n) {
  const auto side = exact_sqrt(n);
  if (!side) throw DimensionError("dft2: n = " + std::to_string(n) + " is not a perfect square");
  const CMatrix F = dft(*side);
  return kron(F, F);
}

CMatrix finite_diff(int n) {
  if (n < 1) throw DimensionError("finite_diff: n must be >= 1");
  CMatrix D = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    D(i, i) = 1.0;
    if (i > 0) D(i, i - 1) = -1.0;
  }
  return D;
}

CMatrix finite_diff_inv(int n) {
  if (n < 1) throw DimensionError("finite_diff_inv: n must be >= 1");
  CMatrix L = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) L(i, j) = 1.0;
  return L;
}

CMatrix haar4() {
  CMatrix H(4, 4);
  H << 1, 1, 1, 1,
       1, 1, -1, -1,
       1, -1, 0, 0,
       0, 0, 1, -1;
  return H;
}

CMatrix identity(int n) {
  if (n < 1) throw DimensionError("identity: n must be >= 1");
  return CMatrix::Identity(n, n);
}

CMatrix special_matrix(SpecialKind kind, int n) {
  switch (kind) {
    case SpecialKind::Dft: return dft(n);
    case SpecialKind::Dft2: return dft2(n);
    case SpecialKind::FiniteDiff: return finite_diff(n);
    case SpecialKind::FiniteDiffInv: return finite_diff_inv(n);
    case SpecialKind::Haar4: return haar4();
    case SpecialKind::Identity: return identity(n);
  }
  throw ParameterError("unknown special matrix kind");
}

CMatrix circulant(std::span<const Complex> c) {
  const auto n = static_cast<Eigen::Index>(c.size());
  if (n == 0) throw DimensionError("circulant of an empty vector");
  CMatrix C(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) C(i, j) = c[static_cast<std::size_t>(((i - j) % n + n) % n)];
  return C;
}

CMatrix circulant(const CVector& c) { return circulant(std::span<const Complex>(c.data(), c.size())); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix K(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      K.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return K;
}

CMatrix diag(const CVector& v) {
  CMatrix D = CMatrix::Zero(v.size(), v.size());
  D.diagonal() = v;
  return D;
}

double max_abs(const CMatrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

double max_abs(const CVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

CMatrix circshift_rows(const CMatrix& X, int shift) {
  const auto n = X.rows();
  CMatrix out(n, X.cols());
  if (n == 0) return out;
  for (Eigen::Index j = 0; j < n; ++j) out.row(j) = X.row(((j - shift) % n + n) % n);
  return out;
}

}  // namespace bgpc
