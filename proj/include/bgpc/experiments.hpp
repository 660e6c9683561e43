#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bgpc/checkers.hpp"
#include "bgpc/conditions.hpp"
#include "bgpc/instances.hpp"

namespace bgpc {

enum class SweepModel { Subspace, JointSparse };

std::string to_string(SweepModel m);
SweepModel sweep_model_from_string(const std::string& s);

/// Largest n accepted by sweeps.
inline constexpr int kSweepMaxN = 14;

struct SweepOptions {
  SweepModel model = SweepModel::Subspace;
  int n = 10;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  Tolerance tol;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct SweepCell {
  int k = 0;  // m or s
  int N = 0;
  std::uint64_t trials = 0;
  std::uint64_t identifiable = 0;
  /// Trials whose draw was rejected by a checker precondition; counted as not identifiable.
  std::uint64_t errors = 0;
};

struct SweepGrid {
  SweepModel model = SweepModel::Subspace;
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  /// Row-major over k = 1..n-1, then N = 1..n-1.
  std::vector<SweepCell> cells;

  std::string axis1() const { return model == SweepModel::Subspace ? "m" : "s"; }
  const SweepCell& at(int k, int N) const;
};

/// One trial per (k, N, t) on the stream derive_stream({k, N, t}) under `seed`.
SweepGrid run_sweep(const SweepOptions& opt);

/// Header "<m|s>,N,trials,identifiable,ratio", LF line endings.
std::string sweep_csv(const SweepGrid& grid);

/// Heatmap: N on the x axis, m (or s) on the y axis growing upward, one grayscale
/// rect per cell (white = all identifiable), the curve N = (n-1)/(n-k) and the line N = k.
std::string sweep_svg(const SweepGrid& grid);

struct CensusOptions {
  int n = 10;
  int s = 5;
  int N = 2;
  std::uint64_t trials_per_support = 3;
  std::uint64_t seed = 0;
  Tolerance tol;
  std::uint64_t max_supports = 1'000'000;
  unsigned threads = 0;
};

struct SupportVerdict {
  IndexSet canonical = IndexSet(1, {});
  /// Number of distinct circular shifts of the support.
  int orbit_size = 0;
  bool periodic = false;
  std::uint64_t identifiable_trials = 0;
  bool good = false;
};

struct CensusResult {
  int n = 0, s = 0, N = 0;
  std::uint64_t trials_per_support = 0;
  std::uint64_t seed = 0;
  std::vector<SupportVerdict> supports;
  /// Counts over all supports of size s (each canonical class weighted by its orbit).
  std::uint64_t nonperiodic = 0;
  std::uint64_t good_nonperiodic = 0;

  double good_fraction() const;
};

/// A support is good when every trial on it is identifiable by the joint-sparse decider.
CensusResult run_census(const CensusOptions& opt);
nlohmann::json census_json(const CensusResult& r);

struct CounterexampleCheck {
  double residual = 0.0;
  bool measurement_equal = false;
  bool orbit_equivalent = true;
  bool checker_identifiable = true;
  std::string checker;
  std::string detail;

  bool passed() const { return measurement_equal && !orbit_equivalent && !checker_identifiable; }
};

/// Measurement residual bound for a second pair.
inline constexpr double kCounterexampleResidual = 1e-9;

/// Recomputes every check from the instance and the claimed second pair.
CounterexampleCheck verify_counterexample(const ProblemInstance& inst, const GainSignalPair& pair1,
                                          const Tolerance& tol = {});

/// Transcript: name, instance file, group, lambda1, X1 and the recorded checks.
nlohmann::json counterexample_transcript(const Counterexample& ce, const CounterexampleCheck& check,
                                         const std::string& instance_file);

/// Re-verifies a transcript against its instance; the stored outcome is not trusted.
CounterexampleCheck verify_transcript(const ProblemInstance& inst, const nlohmann::json& transcript,
                                      const Tolerance& tol = {});

struct EmittedCounterexample {
  std::string name;
  std::filesystem::path instance_file;
  std::filesystem::path transcript_file;
  CounterexampleCheck check;
};

/// Writes <name>.instance.json and <name>.verify.json for each construction.
std::vector<EmittedCounterexample> emit_counterexamples(const std::filesystem::path& dir, std::uint64_t seed = 1,
                                                        const Tolerance& tol = {});

struct CheckOptions {
  Tolerance tol;
  bool diagnose = false;
  /// Randomized attempts for the sparse model's falsifier.
  std::uint64_t falsifier_trials = 1000;
  std::uint64_t seed = 0;
};

struct CheckOutcome {
  /// identifiable | not_identifiable | undetermined | not_falsified
  std::string verdict;
  int exit_code = 2;
  nlohmann::json report;
};

/// Exact deciders for subspace and jointsparse; sufficient and necessary
/// conditions alone for the other models.
CheckOutcome run_check(const ProblemInstance& inst, const CheckOptions& opt);

}  // namespace bgpc
