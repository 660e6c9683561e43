#include "bgpc/checkers.hpp"

#include <vector>

namespace bgpc {

CMatrix build_G(const CMatrix& annihilator, const CMatrix& Y) {
  const auto k = annihilator.rows();
  const auto n = annihilator.cols();
  if (Y.rows() != n) throw DimensionError("build_G: annihilator has " + std::to_string(n) + " columns but Y has " +
                                          std::to_string(Y.rows()) + " rows");
  if (Y.cols() == 0 || k == 0) throw DimensionError("build_G: empty block");
  CMatrix G(k * Y.cols(), n);
  for (Eigen::Index c = 0; c < Y.cols(); ++c)
    G.middleRows(c * k, k) = annihilator * Y.col(c).asDiagonal();
  return G;
}

void require_no_zero_rows(const CMatrix& Y, const Tolerance& tol) {
  if (Y.rows() == 0 || Y.cols() == 0) throw DimensionError("measurement is empty");
  for (Eigen::Index i = 0; i < Y.rows(); ++i)
    if (Y.row(i).cwiseAbs().maxCoeff() <= tol.abs)
      throw PreconditionError("measurement row " + std::to_string(i + 1) + " is zero");
}

CheckReport algorithm1(const CMatrix& A, const CMatrix& Y, const Tolerance& tol) {
  const auto n = static_cast<int>(A.rows());
  if (Y.rows() != n) throw DimensionError("algorithm1: A and Y disagree on n");
  require_no_zero_rows(Y, tol);
  const CMatrix Aperp = orthonormal_complement(A, tol);
  const CMatrix G = build_G(Aperp.adjoint(), Y);
  const int r = numerical_rank(G, tol);

  CheckReport rep;
  rep.g_ranks["A"] = r;
  rep.identifiable = r >= n - 1;
  rep.reason = rep.identifiable ? "rank(G) = n - 1: null space spanned by 1 ./ lambda0"
                                : "rank(G) <= n - 2: a second non-vanishing null vector yields another solution";
  return rep;
}

CheckReport algorithm2(const CMatrix& Y, const IndexSet& J, int s, const Tolerance& tol, Algorithm2Options options) {
  const auto n = static_cast<int>(Y.rows());
  if (J.n() != n) throw DimensionError("algorithm2: support universe does not match Y");
  if (J.size() != s) throw ParameterError("algorithm2: |J| = " + std::to_string(J.size()) + " but s = " +
                                          std::to_string(s));
  if (s < 1 || s >= n) throw ParameterError("algorithm2 needs 1 <= s < n");
  if (n > 63) throw GuardError("algorithm2: n too large for support enumeration");
  if (binomial(n, s) > options.max_supports)
    throw GuardError("algorithm2: C(" + std::to_string(n) + ", " + std::to_string(s) + ") supports exceed the guard");
  require_no_zero_rows(Y, tol);

  const CMatrix F = dft(n);
  CheckReport rep;
  rep.identifiable = true;
  std::vector<Eigen::Index> comp;

  for_each_subset(n, s, [&](std::uint64_t mask) {
    const IndexSet Jp = IndexSet::from_mask(n, mask);
    comp.clear();
    for (int i = 0; i < n; ++i)
      if (!(mask >> i & 1U)) comp.push_back(i);
    CMatrix annihilator(static_cast<Eigen::Index>(comp.size()), n);
    for (std::size_t r = 0; r < comp.size(); ++r)
      annihilator.row(static_cast<Eigen::Index>(r)) = F.col(comp[r]).adjoint();

    const int r = numerical_rank(build_G(annihilator, Y), tol);
    if (options.diagnose) rep.g_ranks[Jp.to_string()] = r;

    std::string failure;
    if (r <= n - 2) failure = "rank(G_J') <= n - 2 for J' = " + Jp.to_string();
    else if (r == n - 1 && !is_shift_of(Jp, J))
      failure = "rank(G_J') = n - 1 for J' = " + Jp.to_string() + ", not a shift of J: alien solution";

    if (!failure.empty() && rep.identifiable) {
      rep.identifiable = false;
      rep.failing_support = Jp;
      rep.g_ranks[Jp.to_string()] = r;
      rep.reason = failure;
    }
    return rep.identifiable || options.diagnose;
  });

  if (rep.identifiable) rep.reason = "every rank-(n-1) support is a circular shift of J";
  return rep;
}

}  // namespace bgpc
