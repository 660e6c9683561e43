#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "bgpc/matcore.hpp"

namespace bgpc {

/// Gain vector gamma (or the entrywise ratio lambda0 ./ lambda1).
using GammaVector = CVector;

/// A candidate solution (lambda, X) of diag(lambda) A X = Y.
struct GainSignalPair {
  CVector lambda;
  CMatrix X;
};

namespace group {
/// (lambda, X) -> (sigma lambda, X / sigma)
struct Scaling {};
/// lambda ./ gamma with gamma = sigma sqrt(n) F(:, k); X -> sigma * circular shift of X.
struct DftShiftScale {};
/// Same with F ⊗ F and 2D circular shifts (vertical index fastest).
struct Dft2dShiftScale {};
/// General group of an invertible square basis A.
struct GammaOf {
  CMatrix basis;
};
}  // namespace group

using GroupKind = std::variant<group::Scaling, group::DftShiftScale, group::Dft2dShiftScale, group::GammaOf>;

std::string group_name(const GroupKind& kind);

/// Parameters of one group element. `shift` is the 0-based circular downshift
/// (k - 1 for the column F(:, k)); `shift2d` is (vertical, horizontal).
struct TransformParams {
  Complex sigma{1.0, 0.0};
  int shift = 0;
  std::pair<int, int> shift2d{0, 0};
  std::optional<GammaVector> gamma;
};

struct OrbitVerdict {
  bool equivalent = false;
  std::optional<TransformParams> witness;
  std::string detail;
};

/// Exactly one entry per row and per column above the cutoff, each dominating the
/// rest of its row/column by a factor of at least 1e6, and P invertible.
/// The entry cutoff is tol.abs * max(1, max|P|).
bool is_generalized_permutation(const CMatrix& P, const Tolerance& tol = {});

/// A^{-1} diag(gamma) A
CMatrix conjugated_diagonal(const CMatrix& basis, const GammaVector& gamma);

/// gamma in Gamma(A): A^{-1} diag(gamma) A is a generalized permutation.
bool gamma_member(const CMatrix& basis, const GammaVector& gamma, const Tolerance& tol = {});

enum class ClosedFormKind { Identity, Dft, Dft2, FdInv, Haar4 };

/// Relative residual used when matching gamma against a printed closed form.
inline constexpr double kClosedFormRelTol = 1e-9;

/// Membership decided from the closed-form description of Gamma for each basis:
///   Identity: gamma non-vanishing
///   Dft:      gamma = sigma sqrt(n) F(:, k)
///   Dft2:     gamma = sigma sqrt(n) (F ⊗ F)(:, k)
///   FdInv:    gamma = sigma (1, ..., 1)   (basis F D^{-1})
///   Haar4:    gamma = sigma (1, 1, ±1, ±1)
bool gamma_closed_form_member(ClosedFormKind kind, const GammaVector& gamma, const Tolerance& tol = {});

/// Basis matrix matching a closed-form kind at size n (FdInv -> F D^{-1}).
CMatrix closed_form_basis(ClosedFormKind kind, int n);

/// Relative residual for witness verification.
inline constexpr double kWitnessRelTol = 1e-9;

/// Is pair1 in the orbit of pair0 under the group?
OrbitVerdict orbit_equivalent(const GroupKind& kind, const GainSignalPair& pair0, const GainSignalPair& pair1,
                              const Tolerance& tol = {});

/// The gain vector gamma a group element acts with (lambda -> lambda ./ gamma).
GammaVector transform_gamma(const GroupKind& kind, const TransformParams& params, int n);

/// Applies T(lambda, X) = (lambda ./ gamma, A^{-1} diag(gamma) A X); Scaling is
/// (sigma lambda, X / sigma).
GainSignalPair apply_transform(const GroupKind& kind, const TransformParams& params, const GainSignalPair& pair,
                               const Tolerance& tol = {});

}  // namespace bgpc
