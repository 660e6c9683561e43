#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "bgpc/indexsets.hpp"
#include "bgpc/matcore.hpp"

namespace bgpc {

struct CheckReport {
  bool identifiable = false;
  /// Rank of each G matrix that was assembled, keyed by the support (Algorithm 2)
  /// or by "A" (Algorithm 1). Algorithm 2 only records every support under diagnose.
  std::map<std::string, int> g_ranks;
  std::optional<IndexSet> failing_support;
  std::string reason;
};

/// Stack of the blocks A_perp^* diag(Y(:, c)) for c = 1..N, where `annihilator`
/// is A_perp^* ((n - k) x n). The result G satisfies G x = vec(A_perp^* diag(x) Y).
CMatrix build_G(const CMatrix& annihilator, const CMatrix& Y);

/// Throws PreconditionError if some row of Y has max modulus <= tol.abs.
void require_no_zero_rows(const CMatrix& Y, const Tolerance& tol);

/// Subspace model decider: identifiable up to scaling iff rank(G) >= n - 1.
CheckReport algorithm1(const CMatrix& A, const CMatrix& Y, const Tolerance& tol = {});

struct Algorithm2Options {
  /// Evaluate every support and keep all ranks instead of stopping at the first failure.
  bool diagnose = false;
  /// Refuse when C(n, s) exceeds this.
  std::uint64_t max_supports = 1'000'000;
};

/// DFT basis with joint sparsity: enumerates every support J' with |J'| = s.
/// Not identifiable if some rank(G_J') <= n - 2, or rank(G_J') = n - 1 for a J'
/// that is not a circular shift of J.
CheckReport algorithm2(const CMatrix& Y, const IndexSet& J, int s, const Tolerance& tol = {},
                       Algorithm2Options options = {});

}  // namespace bgpc
