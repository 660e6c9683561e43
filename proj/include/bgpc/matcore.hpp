#pragma once

#include <complex>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "bgpc/errors.hpp"

namespace bgpc {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. Carrier for A, X, Y, P and G.
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;

/// Cutoffs for rank decisions and for "is this entry zero".
///
/// `rel` is a cutoff relative to the largest singular value. When it is not set,
/// the cutoff is max(rows, cols) * eps * 64 for the matrix being ranked.
/// `abs` is an absolute cutoff on entry moduli (and on sigma_max).
struct Tolerance {
  std::optional<double> rel;
  double abs = 1e-12;

  double rel_for(Eigen::Index rows, Eigen::Index cols) const;
};

/// Throws ParameterError if a cutoff is negative.
void validate(const Tolerance& tol);

/// Throws ParameterError if M contains NaN or Inf.
void require_finite(const CMatrix& M, const char* what);

/// Number of singular values above tol.rel * sigma_max; 0 when sigma_max <= tol.abs.
int numerical_rank(const CMatrix& M, const Tolerance& tol = {});

/// Singular values in decreasing order.
Eigen::VectorXd singular_values(const CMatrix& M);

/// Orthonormal basis of the orthogonal complement of range(A), as an n x (n - m) matrix.
/// A must be n x m with n > m and full column rank.
CMatrix orthonormal_complement(const CMatrix& A, const Tolerance& tol = {});

enum class SpecialKind { Dft, Dft2, FiniteDiff, FiniteDiffInv, Haar4, Identity };

/// Normalized DFT: F(j, k) = exp(-2 pi i j k / n) / sqrt(n), 0-based j, k.
CMatrix dft(int n);
/// F ⊗ F with F the sqrt(n)-point DFT; n must be a perfect square.
CMatrix dft2(int n);
/// Lower bidiagonal: +1 on the diagonal, -1 on the subdiagonal.
CMatrix finite_diff(int n);
/// Lower triangular matrix of ones (inverse of finite_diff).
CMatrix finite_diff_inv(int n);
CMatrix haar4();
CMatrix identity(int n);

/// Dispatches on kind. `n` is ignored for Haar4.
CMatrix special_matrix(SpecialKind kind, int n);

/// Square root of n when n is a perfect square, otherwise nullopt.
std::optional<int> exact_sqrt(int n);

/// n x n matrix whose first column is c and each further column is the
/// circular downshift of the previous one: C(i, j) = c((i - j) mod n).
CMatrix circulant(std::span<const Complex> c);
CMatrix circulant(const CVector& c);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// diag(v) as a dense matrix.
CMatrix diag(const CVector& v);

/// Largest entry modulus (0 for an empty matrix).
double max_abs(const CMatrix& M);
double max_abs(const CVector& v);

/// Row j of the result is row (j - shift) mod n of X, i.e. a circular downshift.
CMatrix circshift_rows(const CMatrix& X, int shift);

}  // namespace bgpc
