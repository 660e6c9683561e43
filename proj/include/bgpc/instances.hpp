#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bgpc/indexsets.hpp"
#include "bgpc/matcore.hpp"
#include "bgpc/rng.hpp"
#include "bgpc/transgroup.hpp"

namespace bgpc {

enum class Model { Subspace, JointSparse, JointSparse2d, Piecewise, Sparse };

std::string to_string(Model m);
Model model_from_string(const std::string& s);

/// Description of the known matrix A. Structured kinds are regenerated on load;
/// Dense carries the matrix itself.
struct BasisDescriptor {
  enum class Kind { Dense, Dft, DftColumns, Dft2, FdInvDft, Identity, Haar4 };

  Kind kind = Kind::Dense;
  int n = 0;
  /// DftColumns: 1-based column indices of F(n) to keep.
  std::vector<int> columns;
  /// DftColumns: multiplier applied to the selected columns.
  Complex scale{1.0, 0.0};
  /// Dense only.
  CMatrix dense;

  static BasisDescriptor dense_matrix(CMatrix A);
  static BasisDescriptor dft(int n);
  static BasisDescriptor dft_columns(int n, std::vector<int> columns, Complex scale);
  static BasisDescriptor dft2(int n);
  static BasisDescriptor fd_inv_dft(int n);
  static BasisDescriptor identity(int n);
  static BasisDescriptor haar4();

  CMatrix materialize() const;
};

std::string to_string(BasisDescriptor::Kind k);
BasisDescriptor::Kind basis_kind_from_string(const std::string& s);

/// Entry tolerance of the construction identity Y = diag(lambda0) A X0.
inline constexpr double kConstructionTol = 1e-12;

struct ProblemInstance {
  Model model = Model::Subspace;
  int n = 0;
  /// m for the subspace model, s for the sparsity models (||X0||_0 for Sparse).
  int m_or_s = 0;
  int N = 0;
  BasisDescriptor basis;
  CVector lambda0;
  CMatrix X0;
  CMatrix Y;
  /// Declared joint support when it differs from the nonzero rows of X0
  /// (degenerate constructions). Optional.
  std::optional<IndexSet> support;
  std::optional<std::uint64_t> seed;
  std::string rng;

  /// Support to hand to the checkers: the declared one, else the nonzero rows of X0.
  IndexSet effective_support(const Tolerance& tol = {}) const;
  GroupKind ambiguity_group() const;
};

/// Builds Y and checks shapes, model structure and the construction identity.
ProblemInstance make_instance(Model model, int m_or_s, BasisDescriptor basis, CVector lambda0, CMatrix X0,
                              std::optional<std::uint64_t> seed = {}, std::optional<IndexSet> support = {});

/// Throws if the instance breaks the construction identity or its model structure.
void validate_instance(const ProblemInstance& inst);

/// Draw options for the random generators.
struct DrawOptions {
  /// Complex Gaussian entries (real and imaginary parts N(0, 1/2)) instead of real N(0, 1).
  bool complex_entries = false;
  /// Gains with modulus below this are redrawn.
  double min_gain = 0.0;
};

/// First m columns of a Haar-distributed orthogonal (unitary) n x n matrix.
CMatrix random_orthonormal_columns(int n, int m, RandomStream& rng, bool complex_entries = false);

ProblemInstance random_subspace(int n, int m, int N, std::uint64_t seed, std::uint64_t stream = 0,
                                DrawOptions opt = {});

/// Support drawn uniformly among size-s subsets when J is not given.
ProblemInstance random_jointsparse(int n, int s, int N, std::optional<IndexSet> J, std::uint64_t seed,
                                   std::uint64_t stream = 0, DrawOptions opt = {});
ProblemInstance random_jointsparse_2d(int n, int s, int N, std::optional<IndexSet> J, std::uint64_t seed,
                                      std::uint64_t stream = 0, DrawOptions opt = {});
ProblemInstance random_piecewise(int n, int s, int N, std::optional<IndexSet> J, std::uint64_t seed,
                                 std::uint64_t stream = 0, DrawOptions opt = {});
/// Sparse model with a Bernoulli-Gaussian X0 over an invertible basis.
ProblemInstance random_sparse(BasisDescriptor basis, int N, double theta, std::uint64_t seed,
                              std::uint64_t stream = 0);

/// Uniformly random size-s subset of {1..n}.
IndexSet random_support(int n, int s, RandomStream& rng);

/// Entrywise Bernoulli(theta) mask times N(0, 1); 0 < theta < 1.
CMatrix bernoulli_gaussian(int n, int N, double theta, std::uint64_t seed, std::uint64_t stream = 0);

enum class CounterexampleKind { SubspaceF8, JointSparseDegenerate7, JointSparseRank3_7, Periodic };

std::string to_string(CounterexampleKind k);

struct PeriodicSpec {
  IndexSet J = IndexSet(10, {1, 2, 6, 7});
  int period = 5;
  int N = 4;
};

/// An instance together with a second pair producing the same measurement that is
/// not in its orbit.
struct Counterexample {
  std::string name;
  ProblemInstance instance;
  GainSignalPair pair1;
  GroupKind group;
};

/// Free entries (gains left generic) are drawn from `seed` and redrawn while
/// their modulus is below 1e-3.
Counterexample counterexample(CounterexampleKind kind, std::uint64_t seed = 1, PeriodicSpec periodic = {});

}  // namespace bgpc
