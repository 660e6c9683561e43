#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bgpc/indexsets.hpp"
#include "bgpc/matcore.hpp"

namespace bgpc {

struct Clause {
  std::string name;
  bool passed = false;
  std::string diagnostic;
};

/// Verdict of a condition evaluator. `satisfied` is true iff every clause passed.
struct ConditionReport {
  bool satisfied = false;
  std::vector<Clause> clauses;

  void add(std::string name, bool passed, std::string diagnostic = {});
  const Clause* find(const std::string& name) const;
};

/// Largest n for which the 2^(n-1) - 1 row bipartitions are enumerated.
inline constexpr int kDecomposableMaxRows = 20;

/// True iff some nonempty proper row subset J gives
/// rank(A) = rank(A(J, :)) + rank(A(J^c, :)).
bool row_space_decomposable(const CMatrix& A, const Tolerance& tol = {});

/// Rows whose largest entry modulus exceeds tol.abs, as a 1-based support.
IndexSet row_support(const CMatrix& X, const Tolerance& tol = {});

/// Number of entries with modulus above tol.abs * max(1, max|X|).
int count_nonzeros(const CMatrix& X, const Tolerance& tol = {});

/// Subspace model: lambda0 non-vanishing, X0 full row rank, A full column rank and
/// not row-space decomposable.
ConditionReport sufficient_subspace(const CVector& lambda0, const CMatrix& X0, const CMatrix& A,
                                    const Tolerance& tol = {});

/// DFT basis, joint sparsity: lambda0 non-vanishing, exactly s nonzero rows with
/// rank s, support not periodic. When `s` is not given the support size is used.
ConditionReport sufficient_jointsparse(const CVector& lambda0, const CMatrix& X0, std::optional<int> s = {},
                                       const Tolerance& tol = {});

/// Same for the 2D DFT with the support in index-pair form.
ConditionReport sufficient_jointsparse_2d(const CVector& lambda0, const CMatrix& X0, std::optional<int> s = {},
                                          const Tolerance& tol = {});

/// Basis F D^{-1}: lambda0 non-vanishing, exactly s nonzero rows with rank s,
/// 1 not in J, {1} ∪ J friendly. Requires n >= 4.
ConditionReport sufficient_piecewise(const CVector& lambda0, const CMatrix& X0, std::optional<int> s = {},
                                     const Tolerance& tol = {}, EnumerationGuard guard = {});

/// ceil((n - 1) / (n - k)) for 1 <= k < n, with k = m or s.
int necessary_N(int n, int k);

/// Universal sparsity condition. Clauses 1 and 3 are decided; clause 2 (every
/// invertible P with ||P X0||_0 <= ||X0||_0 is a generalized permutation) is only
/// ever reported as "not falsified" after `trials` randomized attempts.
ConditionReport universal_sparsity_report(const CVector& lambda0, const CMatrix& X0, const CMatrix& A,
                                          std::optional<int> s, const Tolerance& tol, std::uint64_t trials,
                                          std::uint64_t seed);

}  // namespace bgpc
