#include "bgpc/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bgpc/rng.hpp"
#include "bgpc/transgroup.hpp"

namespace bgpc {

namespace {

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

CMatrix select_rows(const CMatrix& A, std::uint64_t mask) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    if (mask >> i & 1U) rows.push_back(i);
  CMatrix out(static_cast<Eigen::Index>(rows.size()), A.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = A.row(rows[r]);
  return out;
}

void add_non_vanishing(ConditionReport& rep, const CVector& lambda0, const Tolerance& tol) {
  const double m = lambda0.size() ? lambda0.cwiseAbs().minCoeff() : 0.0;
  std::ostringstream os;
  os << "min |lambda0| = " << m;
  rep.add("lambda0_non_vanishing", lambda0.size() > 0 && m > tol.abs, os.str());
}

// Clause "exactly s nonzero rows and rank s". Returns the support.
IndexSet add_support_rank(ConditionReport& rep, const CMatrix& X0, std::optional<int> s, const Tolerance& tol) {
  const IndexSet J = row_support(X0, tol);
  const int target = s.value_or(J.size());
  const int r = J.empty() ? 0 : numerical_rank(X0, tol);
  std::ostringstream os;
  os << "support " << J.to_string() << " (" << J.size() << " rows), rank " << r << ", s = " << target;
  rep.add("exact_support_full_rank", J.size() == target && r == target && target > 0, os.str());
  return J;
}

CMatrix random_candidate(int kind, const CMatrix& X0, RandomStream& rng, const Tolerance& tol) {
  const auto n = static_cast<int>(X0.rows());
  CMatrix P = CMatrix::Identity(n, n);
  const auto i = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
  auto j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - 1)));
  if (j >= i) ++j;
  const double cut = tol.abs * std::max(1.0, max_abs(X0));

  switch (kind) {
    case 0: {
      // row_i += alpha row_j, alpha chosen to cancel one shared nonzero when possible
      std::vector<Eigen::Index> shared;
      for (Eigen::Index c = 0; c < X0.cols(); ++c)
        if (std::abs(X0(i, c)) > cut && std::abs(X0(j, c)) > cut) shared.push_back(c);
      Complex alpha;
      if (!shared.empty()) {
        const auto c = shared[rng.uniform_int(shared.size())];
        alpha = -X0(i, c) / X0(j, c);
      } else {
        alpha = Complex(rng.normal(), rng.normal());
      }
      P(i, j) = alpha;
      break;
    }
    case 1: {
      // plane rotation mixing rows i and j
      const double t = (0.05 + 0.9 * rng.uniform()) * std::numbers::pi / 2.0;
      P(i, i) = std::cos(t);
      P(i, j) = -std::sin(t);
      P(j, i) = std::sin(t);
      P(j, j) = std::cos(t);
      break;
    }
    case 2: {
      // sparse perturbation of the identity
      bool any = false;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          if (r != c && rng.bernoulli(1.0 / n)) {
            P(r, c) = rng.normal();
            any = true;
          }
      if (!any) P(i, j) = rng.normal();
      break;
    }
    default: {
      // two-tap circulant
      CVector c = CVector::Zero(n);
      c(0) = 1.0;
      c(1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - 1)))) = 2.0;
      P = circulant(c);
      break;
    }
  }
  return P;
}

}  // namespace

void ConditionReport::add(std::string name, bool passed, std::string diagnostic) {
  clauses.push_back({std::move(name), passed, std::move(diagnostic)});
  satisfied = std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.passed; });
}

const Clause* ConditionReport::find(const std::string& name) const {
  for (const auto& c : clauses)
    if (c.name == name) return &c;
  return nullptr;
}

bool row_space_decomposable(const CMatrix& A, const Tolerance& tol) {
  const auto n = static_cast<int>(A.rows());
  if (A.size() == 0) throw DimensionError("row_space_decomposable: empty matrix");
  if (n > kDecomposableMaxRows)
    throw GuardError("row_space_decomposable: " + std::to_string(n) + " rows exceed the enumeration guard");
  if (n == 1) return false;
  const int total = numerical_rank(A, tol);
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  // Row 1 always sits in J, so each bipartition is visited once.
  for (std::uint64_t rest = 0; rest < (std::uint64_t{1} << (n - 1)); ++rest) {
    const std::uint64_t J = (rest << 1) | 1U;
    if (J == full) continue;
    if (numerical_rank(select_rows(A, J), tol) + numerical_rank(select_rows(A, full & ~J), tol) == total)
      return true;
  }
  return false;
}

IndexSet row_support(const CMatrix& X, const Tolerance& tol) {
  std::vector<int> rows;
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    if (X.cols() > 0 && X.row(i).cwiseAbs().maxCoeff() > tol.abs) rows.push_back(static_cast<int>(i) + 1);
  return IndexSet(static_cast<int>(std::max<Eigen::Index>(X.rows(), 1)), std::move(rows));
}

int count_nonzeros(const CMatrix& X, const Tolerance& tol) {
  const double cut = tol.abs * std::max(1.0, max_abs(X));
  int c = 0;
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      if (std::abs(X(i, j)) > cut) ++c;
  return c;
}

ConditionReport sufficient_subspace(const CVector& lambda0, const CMatrix& X0, const CMatrix& A,
                                    const Tolerance& tol) {
  if (lambda0.size() != A.rows() || X0.rows() != A.cols())
    throw DimensionError("sufficient_subspace: lambda0, A, X0 shapes are inconsistent");
  ConditionReport rep;
  add_non_vanishing(rep, lambda0, tol);

  const int rx = numerical_rank(X0, tol);
  rep.add("X0_full_row_rank", rx == X0.rows(), "rank " + std::to_string(rx) + " of " + std::to_string(X0.rows()));

  const int ra = numerical_rank(A, tol);
  const bool full_col = ra == A.cols();
  const bool decomposable = row_space_decomposable(A, tol);
  rep.add("A_nonseparable_full_rank", full_col && !decomposable,
          "rank(A) = " + std::to_string(ra) + ", row space " + (decomposable ? "decomposable" : "not decomposable"));
  return rep;
}

ConditionReport sufficient_jointsparse(const CVector& lambda0, const CMatrix& X0, std::optional<int> s,
                                       const Tolerance& tol) {
  if (lambda0.size() != X0.rows()) throw DimensionError("sufficient_jointsparse: lambda0 and X0 disagree on n");
  ConditionReport rep;
  add_non_vanishing(rep, lambda0, tol);
  const IndexSet J = add_support_rank(rep, X0, s, tol);
  if (J.empty()) {
    rep.add("support_not_periodic", false, "empty support");
  } else {
    const auto p = periods(J);
    rep.add("support_not_periodic", p.empty(), p.empty() ? "no period" : "periods {" + join(p) + "}");
  }
  return rep;
}

ConditionReport sufficient_jointsparse_2d(const CVector& lambda0, const CMatrix& X0, std::optional<int> s,
                                          const Tolerance& tol) {
  if (lambda0.size() != X0.rows()) throw DimensionError("sufficient_jointsparse_2d: lambda0 and X0 disagree on n");
  if (!exact_sqrt(static_cast<int>(X0.rows())))
    throw DimensionError("sufficient_jointsparse_2d: n is not a perfect square");
  ConditionReport rep;
  add_non_vanishing(rep, lambda0, tol);
  const IndexSet J = add_support_rank(rep, X0, s, tol);
  if (J.empty()) {
    rep.add("support_not_periodic_2d", false, "empty support");
  } else {
    const auto p = periods_2d(IndexPairSet::from_linear(J));
    std::ostringstream os;
    if (p.empty()) os << "no period";
    else {
      os << "periods {";
      for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << '(' << p[i].first << ',' << p[i].second << ')';
      os << '}';
    }
    rep.add("support_not_periodic_2d", p.empty(), os.str());
  }
  return rep;
}

ConditionReport sufficient_piecewise(const CVector& lambda0, const CMatrix& X0, std::optional<int> s,
                                     const Tolerance& tol, EnumerationGuard guard) {
  if (lambda0.size() != X0.rows()) throw DimensionError("sufficient_piecewise: lambda0 and X0 disagree on n");
  const auto n = static_cast<int>(X0.rows());
  if (n < 4) throw PreconditionError("sufficient_piecewise needs n >= 4");
  ConditionReport rep;
  add_non_vanishing(rep, lambda0, tol);
  const IndexSet J = add_support_rank(rep, X0, s, tol);
  rep.add("one_not_in_support", !J.contains(1), J.contains(1) ? "1 is in the support" : "");
  const IndexSet J1 = J.with(1);
  const bool friendly = is_friendly(J1, guard);
  rep.add("one_union_support_friendly", friendly, J1.to_string() + (friendly ? " is friendly" : " is not friendly"));
  return rep;
}

int necessary_N(int n, int k) {
  if (k < 1 || k >= n) throw ParameterError("necessary_N needs 1 <= k < n");
  return (n - 1 + (n - k) - 1) / (n - k);
}

ConditionReport universal_sparsity_report(const CVector& lambda0, const CMatrix& X0, const CMatrix& A,
                                          std::optional<int> s, const Tolerance& tol, std::uint64_t trials,
                                          std::uint64_t seed) {
  if (A.rows() != A.cols() || A.rows() == 0) throw DimensionError("universal_sparsity_report: A must be square");
  if (numerical_rank(A, tol) < A.rows()) throw RankError("universal_sparsity_report: A is singular");
  if (X0.rows() != A.rows() || lambda0.size() != A.rows())
    throw DimensionError("universal_sparsity_report: shapes are inconsistent");

  ConditionReport rep;
  add_non_vanishing(rep, lambda0, tol);

  const int base = count_nonzeros(X0, tol);
  const auto n = static_cast<int>(X0.rows());
  std::optional<std::uint64_t> hit;
  int hit_count = 0;
  if (n >= 2) {
    for (std::uint64_t t = 0; t < trials && !hit; ++t) {
      RandomStream rng(seed, t);
      const CMatrix P = random_candidate(static_cast<int>(t % 4), X0, rng, tol);
      if (numerical_rank(P, tol) < n || is_generalized_permutation(P, tol)) continue;
      const int c = count_nonzeros(CMatrix(P * X0), tol);
      if (c <= base) {
        hit = t;
        hit_count = c;
      }
    }
  }
  std::ostringstream os;
  if (hit)
    os << "falsified at trial " << *hit << ": non-generalized-permutation P gives ||P X0||_0 = " << hit_count
       << " <= " << base;
  else
    os << "consistent: not falsified in " << trials << " randomized attempts (not verified)";
  rep.add("most_sparse_row_basis", !hit, os.str());

  std::ostringstream os3;
  os3 << "||X0||_0 = " << base;
  if (s) os3 << ", s = " << *s;
  rep.add("sparsity_level", !s || *s == base, os3.str());
  return rep;
}

}  // namespace bgpc
