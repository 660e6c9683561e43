#include "bgpc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "bgpc/instance_io.hpp"
#include "bgpc/report.hpp"

namespace bgpc {

using nlohmann::json;

namespace {

// Runs fn(i) for i in [0, count) on a small pool; fn must only write to slot i.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard lock(mu);
        if (next >= count || first_error) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

int orbit_size(const IndexSet& J) {
  for (int p = 1; p < J.n(); ++p)
    if (J.shifted(p) == J) return p;
  return J.n();
}

}  // namespace

std::string to_string(SweepModel m) { return m == SweepModel::Subspace ? "subspace" : "jointsparse"; }

SweepModel sweep_model_from_string(const std::string& s) {
  if (s == "subspace") return SweepModel::Subspace;
  if (s == "jointsparse") return SweepModel::JointSparse;
  throw ParameterError("sweep model must be subspace or jointsparse, got '" + s + "'");
}

const SweepCell& SweepGrid::at(int k, int N) const {
  if (k < 1 || k >= n || N < 1 || N >= n) throw ParameterError("sweep cell out of range");
  return cells[static_cast<std::size_t>((k - 1) * (n - 1) + (N - 1))];
}

SweepGrid run_sweep(const SweepOptions& opt) {
  validate(opt.tol);
  if (opt.n < 2) throw ParameterError("sweep needs n >= 2");
  if (opt.n > kSweepMaxN) throw GuardError("sweep n = " + std::to_string(opt.n) + " exceeds the guard " +
                                           std::to_string(kSweepMaxN));
  if (opt.trials == 0) throw ParameterError("sweep needs at least one trial");

  SweepGrid grid;
  grid.model = opt.model;
  grid.n = opt.n;
  grid.trials = opt.trials;
  grid.seed = opt.seed;
  const int n = opt.n;
  for (int k = 1; k < n; ++k)
    for (int N = 1; N < n; ++N) grid.cells.push_back({k, N, opt.trials, 0, 0});

  parallel_for(grid.cells.size(), opt.threads, [&](std::size_t i) {
    SweepCell& cell = grid.cells[i];
    for (std::uint64_t t = 0; t < opt.trials; ++t) {
      const auto stream = derive_stream({static_cast<std::uint64_t>(cell.k), static_cast<std::uint64_t>(cell.N), t});
      try {
        bool ok;
        if (opt.model == SweepModel::Subspace) {
          const auto inst = random_subspace(n, cell.k, cell.N, opt.seed, stream);
          ok = algorithm1(inst.basis.materialize(), inst.Y, opt.tol).identifiable;
        } else {
          const auto inst = random_jointsparse(n, cell.k, cell.N, std::nullopt, opt.seed, stream);
          ok = algorithm2(inst.Y, *inst.support, cell.k, opt.tol).identifiable;
        }
        if (ok) ++cell.identifiable;
      } catch (const PreconditionError&) {
        ++cell.errors;
      } catch (const RankError&) {
        ++cell.errors;
      }
    }
  });
  return grid;
}

std::string sweep_csv(const SweepGrid& grid) {
  std::string out = grid.axis1() + ",N,trials,identifiable,ratio\n";
  for (const auto& c : grid.cells) {
    out += std::to_string(c.k) + "," + std::to_string(c.N) + "," + std::to_string(c.trials) + "," +
           std::to_string(c.identifiable) + "," + ratio_string(c.identifiable, c.trials) + "\n";
  }
  return out;
}

std::string sweep_svg(const SweepGrid& grid) {
  const int n = grid.n;
  const double cs = 40.0, left = 70.0, top = 40.0;
  const double w = left + (n - 1) * cs + 30.0, h = top + (n - 1) * cs + 60.0;
  // Continuous axis coordinates: cell N spans [N - 0.5, N + 0.5].
  auto x_of = [&](double N) { return left + (N - 0.5) * cs; };
  auto y_of = [&](double k) { return top + (n - 0.5 - k) * cs; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\"" << fmt(h) << "\">\n";
  s << "<title>" << to_string(grid.model) << " n=" << n << " trials=" << grid.trials << " seed=" << grid.seed
    << "</title>\n";
  for (const auto& c : grid.cells) {
    const double r = static_cast<double>(c.identifiable) / static_cast<double>(c.trials);
    const int g = static_cast<int>(std::lround(255.0 * r));
    s << "<rect class=\"cell\" x=\"" << fmt(x_of(c.N - 0.5)) << "\" y=\"" << fmt(y_of(c.k + 0.5)) << "\" width=\""
      << fmt(cs) << "\" height=\"" << fmt(cs) << "\" fill=\"rgb(" << g << "," << g << "," << g << ")\" data-"
      << grid.axis1() << "=\"" << c.k << "\" data-N=\"" << c.N << "\" data-ratio=\""
      << ratio_string(c.identifiable, c.trials) << "\"/>\n";
  }

  // N = (n - 1) / (n - k), clipped to the plotted range.
  s << "<polyline class=\"necessary-bound\" fill=\"none\" stroke=\"red\" stroke-width=\"2\" points=\"";
  const double N_max = n - 0.5;
  bool first = true;
  for (int step = 0; step <= 400; ++step) {
    const double k = 0.5 + (n - 1.0) * step / 400.0;
    const double N = (n - 1.0) / (n - k);
    if (N > N_max) break;
    s << (first ? "" : " ") << fmt(x_of(N)) << "," << fmt(y_of(k));
    first = false;
  }
  s << "\"/>\n";
  s << "<line class=\"sufficient-bound\" x1=\"" << fmt(x_of(0.5)) << "\" y1=\"" << fmt(y_of(0.5)) << "\" x2=\""
    << fmt(x_of(N_max)) << "\" y2=\"" << fmt(y_of(N_max)) << "\" stroke=\"blue\" stroke-width=\"2\"/>\n";

  for (int N = 1; N < n; ++N)
    s << "<text x=\"" << fmt(x_of(N)) << "\" y=\"" << fmt(y_of(0.5) + 16) << "\" text-anchor=\"middle\">" << N
      << "</text>\n";
  for (int k = 1; k < n; ++k)
    s << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(y_of(k) + 5) << "\" text-anchor=\"end\">" << k
      << "</text>\n";
  s << "<text x=\"" << fmt(x_of(n / 2.0)) << "\" y=\"" << fmt(y_of(0.5) + 40) << "\" text-anchor=\"middle\">N</text>\n";
  s << "<text x=\"20\" y=\"" << fmt(y_of(n / 2.0)) << "\" text-anchor=\"middle\">" << grid.axis1() << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

double CensusResult::good_fraction() const {
  return nonperiodic == 0 ? 0.0 : static_cast<double>(good_nonperiodic) / static_cast<double>(nonperiodic);
}

CensusResult run_census(const CensusOptions& opt) {
  validate(opt.tol);
  const int n = opt.n, s = opt.s;
  if (n < 2 || n > 63) throw ParameterError("census needs 2 <= n <= 63");
  if (s < 1 || s >= n) throw ParameterError("census needs 1 <= s < n");
  if (opt.N < 1) throw ParameterError("census needs N >= 1");
  if (opt.trials_per_support == 0) throw ParameterError("census needs at least one trial per support");
  if (binomial(n, s) > opt.max_supports)
    throw GuardError("census: C(" + std::to_string(n) + ", " + std::to_string(s) + ") supports exceed the guard");

  CensusResult r;
  r.n = n;
  r.s = s;
  r.N = opt.N;
  r.trials_per_support = opt.trials_per_support;
  r.seed = opt.seed;
  for_each_subset(n, s, [&](std::uint64_t mask) {
    const IndexSet J = IndexSet::from_mask(n, mask);
    if (canonical_shift(J) == J) {
      SupportVerdict v;
      v.canonical = J;
      v.orbit_size = orbit_size(J);
      v.periodic = is_periodic(J);
      r.supports.push_back(std::move(v));
    }
    return true;
  });

  parallel_for(r.supports.size(), opt.threads, [&](std::size_t i) {
    SupportVerdict& v = r.supports[i];
    const std::uint64_t mask = v.canonical.mask();
    for (std::uint64_t t = 0; t < opt.trials_per_support; ++t) {
      const auto inst = random_jointsparse(n, s, opt.N, v.canonical, opt.seed, derive_stream({mask, t}));
      if (algorithm2(inst.Y, v.canonical, s, opt.tol).identifiable) ++v.identifiable_trials;
    }
    v.good = v.identifiable_trials == opt.trials_per_support;
  });

  for (const auto& v : r.supports) {
    if (v.periodic) continue;
    r.nonperiodic += static_cast<std::uint64_t>(v.orbit_size);
    if (v.good) r.good_nonperiodic += static_cast<std::uint64_t>(v.orbit_size);
  }
  return r;
}

json census_json(const CensusResult& r) {
  json supports = json::array();
  std::uint64_t classes = 0, good_classes = 0;
  for (const auto& v : r.supports) {
    supports.push_back({{"support", v.canonical.members()},
                        {"orbit_size", v.orbit_size},
                        {"periodic", v.periodic},
                        {"identifiable_trials", v.identifiable_trials},
                        {"good", v.good}});
    if (!v.periodic) {
      ++classes;
      if (v.good) ++good_classes;
    }
  }
  json j;
  j["n"] = r.n;
  j["s"] = r.s;
  j["N"] = r.N;
  j["trials_per_support"] = r.trials_per_support;
  j["seed"] = r.seed;
  j["rng"] = kRngName;
  j["supports"] = supports;
  j["summary"] = {{"nonperiodic_supports", r.nonperiodic},
                  {"good_nonperiodic_supports", r.good_nonperiodic},
                  {"good_fraction", r.good_fraction()},
                  {"nonperiodic_classes", classes},
                  {"good_nonperiodic_classes", good_classes}};
  return j;
}

CounterexampleCheck verify_counterexample(const ProblemInstance& inst, const GainSignalPair& pair1,
                                          const Tolerance& tol) {
  CounterexampleCheck c;
  const CMatrix A = inst.basis.materialize();
  if (pair1.lambda.size() != inst.n || pair1.X.rows() != A.cols() || pair1.X.cols() != inst.N)
    throw DimensionError("second pair does not match the instance dimensions");

  const CMatrix Y1 = pair1.lambda.asDiagonal() * (A * pair1.X);
  c.residual = max_abs(CMatrix(Y1 - inst.Y));
  c.measurement_equal = std::isfinite(c.residual) && c.residual < kCounterexampleResidual;

  try {
    const auto verdict = orbit_equivalent(inst.ambiguity_group(), {inst.lambda0, inst.X0}, pair1, tol);
    c.orbit_equivalent = verdict.equivalent;
    c.detail = verdict.detail;
  } catch (const DegenerateInputError& e) {
    // A vanishing gain cannot be reached from a non-vanishing one.
    c.orbit_equivalent = false;
    c.detail = e.what();
  }

  switch (inst.model) {
    case Model::Subspace:
      c.checker = "algorithm1";
      c.checker_identifiable = algorithm1(A, inst.Y, tol).identifiable;
      break;
    case Model::JointSparse:
      c.checker = "algorithm2";
      c.checker_identifiable = algorithm2(inst.Y, inst.effective_support(tol), inst.m_or_s, tol).identifiable;
      break;
    default: throw ParameterError("no exact checker for model " + to_string(inst.model));
  }
  return c;
}

json counterexample_transcript(const Counterexample& ce, const CounterexampleCheck& check,
                               const std::string& instance_file) {
  json j;
  j["schema_version"] = kInstanceSchemaVersion;
  j["name"] = ce.name;
  j["instance_file"] = instance_file;
  j["group"] = group_name(ce.group);
  j["lambda1"] = vector_to_json(ce.pair1.lambda);
  j["X1"] = matrix_to_json(ce.pair1.X);
  j["checks"] = {{"measurement_residual", check.residual},
                 {"measurement_equal", check.measurement_equal},
                 {"orbit_equivalent", check.orbit_equivalent},
                 {"checker", check.checker},
                 {"checker_identifiable", check.checker_identifiable},
                 {"passed", check.passed()}};
  return j;
}

CounterexampleCheck verify_transcript(const ProblemInstance& inst, const json& transcript, const Tolerance& tol) {
  if (!transcript.is_object() || !transcript.contains("lambda1") || !transcript.contains("X1"))
    throw SchemaError("transcript needs lambda1 and X1");
  GainSignalPair pair1{vector_from_json(transcript["lambda1"]), matrix_from_json(transcript["X1"])};
  return verify_counterexample(inst, pair1, tol);
}

std::vector<EmittedCounterexample> emit_counterexamples(const std::filesystem::path& dir, std::uint64_t seed,
                                                        const Tolerance& tol) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());

  std::vector<EmittedCounterexample> out;
  for (auto kind : {CounterexampleKind::SubspaceF8, CounterexampleKind::JointSparseDegenerate7,
                    CounterexampleKind::JointSparseRank3_7, CounterexampleKind::Periodic}) {
    const Counterexample ce = counterexample(kind, seed);
    EmittedCounterexample e;
    e.name = ce.name;
    e.instance_file = dir / (ce.name + ".instance.json");
    e.transcript_file = dir / (ce.name + ".verify.json");
    e.check = verify_counterexample(ce.instance, ce.pair1, tol);
    save_instance(ce.instance, e.instance_file);
    write_text_file(e.transcript_file,
                    dump(counterexample_transcript(ce, e.check, e.instance_file.filename().string())));
    out.push_back(std::move(e));
  }
  return out;
}

CheckOutcome run_check(const ProblemInstance& inst, const CheckOptions& opt) {
  validate(opt.tol);
  const int n = inst.n, k = inst.m_or_s;
  json rep;
  rep["model"] = to_string(inst.model);
  rep["n"] = n;
  rep["m_or_s"] = k;
  rep["N"] = inst.N;

  std::optional<bool> bound_ok;
  if (inst.model != Model::Sparse && k >= 1 && k < n) {
    const int need = necessary_N(n, k);
    bound_ok = inst.N >= need;
    rep["necessary_bound"] = {{"required_N", need}, {"N", inst.N}, {"satisfied", *bound_ok}};
  } else {
    rep["necessary_bound"] = nullptr;
  }

  const CMatrix A = inst.basis.materialize();
  std::optional<ConditionReport> cond;
  try {
    switch (inst.model) {
      case Model::Subspace: cond = sufficient_subspace(inst.lambda0, inst.X0, A, opt.tol); break;
      case Model::JointSparse: cond = sufficient_jointsparse(inst.lambda0, inst.X0, k, opt.tol); break;
      case Model::JointSparse2d: cond = sufficient_jointsparse_2d(inst.lambda0, inst.X0, k, opt.tol); break;
      case Model::Piecewise: cond = sufficient_piecewise(inst.lambda0, inst.X0, k, opt.tol); break;
      case Model::Sparse:
        cond = universal_sparsity_report(inst.lambda0, inst.X0, A, k, opt.tol, opt.falsifier_trials, opt.seed);
        break;
    }
    rep["sufficient_condition"] = to_json(*cond);
  } catch (const GuardError& e) {
    rep["sufficient_condition"] = {{"error", e.what()}};
  }

  CheckOutcome out;
  std::optional<CheckReport> checker;
  if (inst.model == Model::Subspace) {
    checker = algorithm1(A, inst.Y, opt.tol);
    rep["checker"] = "algorithm1";
  } else if (inst.model == Model::JointSparse) {
    Algorithm2Options a2;
    a2.diagnose = opt.diagnose;
    checker = algorithm2(inst.Y, inst.effective_support(opt.tol), k, opt.tol, a2);
    rep["checker"] = "algorithm2";
  } else {
    rep["checker"] = nullptr;
  }

  if (checker) {
    rep["checker_report"] = to_json(*checker);
    out.verdict = checker->identifiable ? "identifiable" : "not_identifiable";
    out.exit_code = checker->identifiable ? 0 : 1;
    rep["reason"] = checker->reason;
  } else if (cond && cond->satisfied) {
    out.verdict = inst.model == Model::Sparse ? "not_falsified" : "identifiable";
    out.exit_code = 0;
    rep["reason"] = "sufficient condition satisfied";
  } else if (bound_ok && !*bound_ok) {
    out.verdict = "not_identifiable";
    out.exit_code = 1;
    rep["reason"] = "N below the necessary bound";
  } else {
    out.verdict = "undetermined";
    out.exit_code = 1;
    rep["reason"] = "sufficient condition not met and necessary bound satisfied";
  }
  rep["verdict"] = out.verdict;
  out.report = std::move(rep);
  return out;
}

}  // namespace bgpc
