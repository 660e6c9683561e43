// bgpc: identifiability checks, sweeps, census and counter-examples for
// blind gain and phase calibration.
#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "bgpc/experiments.hpp"
#include "bgpc/instance_io.hpp"

namespace {

constexpr int kExitError = 2;

struct TolFlags {
  std::optional<double> rel;
  double abs = 1e-12;

  bgpc::Tolerance get() const {
    bgpc::Tolerance t;
    t.rel = rel;
    t.abs = abs;
    return t;
  }
};

void add_tol(CLI::App* cmd, TolFlags& t) {
  cmd->add_option("--tol-rel", t.rel, "Relative singular value cutoff (default max(rows, cols) * eps * 64)");
  cmd->add_option("--tol-abs", t.abs, "Absolute cutoff")->capture_default_str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    bgpc::write_text_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identifiability of blind gain and phase calibration"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "Decide identifiability of an instance file");
  std::string check_file, check_out;
  bool diagnose = false;
  std::uint64_t check_seed = 0, falsifier_trials = 1000;
  TolFlags check_tol;
  check->add_option("instance", check_file, "Instance JSON")->required();
  check->add_option("--out", check_out, "Write the JSON report here instead of stdout");
  check->add_flag("--diagnose", diagnose, "Keep the rank of every support (joint sparsity)");
  check->add_option("--seed", check_seed, "Seed of the sparse-model falsifier");
  check->add_option("--trials", falsifier_trials, "Falsifier attempts for the sparse model")->capture_default_str();
  add_tol(check, check_tol);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Phase-transition sweep over (m or s, N)");
  std::string sweep_model = "subspace", sweep_out, sweep_svg_path;
  int sweep_n = 10;
  std::uint64_t sweep_trials = 100, sweep_seed = 0;
  unsigned sweep_threads = 0;
  TolFlags sweep_tol;
  sweep->add_option("--model", sweep_model, "subspace | jointsparse")->capture_default_str();
  sweep->add_option("--n", sweep_n, "Length n")->capture_default_str();
  sweep->add_option("--trials", sweep_trials, "Trials per cell")->capture_default_str();
  sweep->add_option("--seed", sweep_seed, "Seed")->capture_default_str();
  sweep->add_option("--out", sweep_out, "CSV output (stdout if omitted)");
  sweep->add_option("--svg", sweep_svg_path, "SVG heatmap output");
  sweep->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");
  add_tol(sweep, sweep_tol);

  // census
  auto* census = app.add_subcommand("census", "Good supports among the non-periodic ones");
  int census_n = 10, census_s = 5, census_N = 2;
  std::uint64_t census_trials = 3, census_seed = 0;
  unsigned census_threads = 0;
  std::string census_out;
  TolFlags census_tol;
  census->add_option("--n", census_n, "Length n")->capture_default_str();
  census->add_option("--s", census_s, "Support size s")->capture_default_str();
  census->add_option("--N", census_N, "Number of columns N")->capture_default_str();
  census->add_option("--trials", census_trials, "Trials per support")->capture_default_str();
  census->add_option("--seed", census_seed, "Seed")->capture_default_str();
  census->add_option("--out", census_out, "JSON output (stdout if omitted)");
  census->add_option("--threads", census_threads, "Worker threads (0 = all cores)");
  add_tol(census, census_tol);

  // counterexamples
  auto* cex = app.add_subcommand("counterexamples", "Emit or re-verify the explicit non-identifiable constructions");
  std::string cex_out, cex_verify;
  std::uint64_t cex_seed = 1;
  TolFlags cex_tol;
  auto* cex_out_opt = cex->add_option("--out", cex_out, "Directory to write instance and transcript files");
  auto* cex_verify_opt =
      cex->add_option("--verify", cex_verify, "Re-verify every *.verify.json transcript in this directory");
  cex_out_opt->excludes(cex_verify_opt);
  cex->add_option("--seed", cex_seed, "Seed for the generic free entries")->capture_default_str();
  add_tol(cex, cex_tol);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random instance file");
  std::string gen_model = "subspace", gen_out;
  int gen_n = 10, gen_m = 3, gen_s = 0, gen_N = 3;
  double gen_theta = 0.1;
  std::uint64_t gen_seed = 0;
  std::vector<int> gen_support;
  gen->add_option("--model", gen_model, "subspace | jointsparse | jointsparse2d | piecewise | sparse")
      ->capture_default_str();
  gen->add_option("--n", gen_n, "Length n (a perfect square for jointsparse2d)")->capture_default_str();
  gen->add_option("--m", gen_m, "Subspace dimension m")->capture_default_str();
  gen->add_option("--s", gen_s, "Support size s");
  gen->add_option("--N", gen_N, "Number of columns N")->capture_default_str();
  gen->add_option("--support", gen_support, "Explicit 1-based support, e.g. 1,2,6,7")->delimiter(',');
  gen->add_option("--theta", gen_theta, "Bernoulli rate for the sparse model")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Instance file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*check) {
      bgpc::CheckOptions opt;
      opt.tol = check_tol.get();
      opt.diagnose = diagnose;
      opt.seed = check_seed;
      opt.falsifier_trials = falsifier_trials;
      const auto inst = bgpc::load_instance(check_file);
      const auto outcome = bgpc::run_check(inst, opt);
      emit(bgpc::dump(outcome.report), check_out);
      return outcome.exit_code;
    }
    if (*sweep) {
      bgpc::SweepOptions opt;
      opt.model = bgpc::sweep_model_from_string(sweep_model);
      opt.n = sweep_n;
      opt.trials = sweep_trials;
      opt.seed = sweep_seed;
      opt.tol = sweep_tol.get();
      opt.threads = sweep_threads;
      const auto grid = bgpc::run_sweep(opt);
      // Render everything before writing so a failure leaves no partial output.
      const std::string csv = bgpc::sweep_csv(grid);
      const std::string svg = sweep_svg_path.empty() ? std::string() : bgpc::sweep_svg(grid);
      emit(csv, sweep_out);
      if (!sweep_svg_path.empty()) bgpc::write_text_file(sweep_svg_path, svg);
      return 0;
    }
    if (*census) {
      bgpc::CensusOptions opt;
      opt.n = census_n;
      opt.s = census_s;
      opt.N = census_N;
      opt.trials_per_support = census_trials;
      opt.seed = census_seed;
      opt.tol = census_tol.get();
      opt.threads = census_threads;
      emit(bgpc::dump(bgpc::census_json(bgpc::run_census(opt))), census_out);
      return 0;
    }
    if (*cex) {
      if (!cex_verify.empty()) {
        bool all = true;
        int seen = 0;
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(cex_verify)) {
          const auto name = entry.path().filename().string();
          if (name.size() > 12 && name.ends_with(".verify.json")) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& path : files) {
          const auto transcript = nlohmann::json::parse(bgpc::read_text_file(path));
          const auto inst = bgpc::load_instance(path.parent_path() / transcript.at("instance_file").get<std::string>());
          const auto c = bgpc::verify_transcript(inst, transcript, cex_tol.get());
          std::cout << (c.passed() ? "PASS " : "FAIL ") << path.filename().string() << " residual=" << c.residual
                    << " orbit_equivalent=" << c.orbit_equivalent << " " << c.checker
                    << "_identifiable=" << c.checker_identifiable << "\n";
          all = all && c.passed();
          ++seen;
        }
        if (seen == 0) throw bgpc::Error("no *.verify.json files in " + cex_verify);
        return all ? 0 : 1;
      }
      if (cex_out.empty()) throw bgpc::ParameterError("counterexamples needs --out or --verify");
      bool all = true;
      for (const auto& e : bgpc::emit_counterexamples(cex_out, cex_seed, cex_tol.get())) {
        std::cout << (e.check.passed() ? "PASS " : "FAIL ") << e.name << " residual=" << e.check.residual << "\n";
        all = all && e.check.passed();
      }
      return all ? 0 : 1;
    }
    if (*gen) {
      const auto model = bgpc::model_from_string(gen_model);
      std::optional<bgpc::IndexSet> J;
      if (!gen_support.empty()) J = bgpc::IndexSet(gen_n, gen_support);
      const int s = gen_s > 0 ? gen_s : (J ? J->size() : gen_m);
      bgpc::ProblemInstance inst;
      switch (model) {
        case bgpc::Model::Subspace: inst = bgpc::random_subspace(gen_n, gen_m, gen_N, gen_seed); break;
        case bgpc::Model::JointSparse: inst = bgpc::random_jointsparse(gen_n, s, gen_N, J, gen_seed); break;
        case bgpc::Model::JointSparse2d: inst = bgpc::random_jointsparse_2d(gen_n, s, gen_N, J, gen_seed); break;
        case bgpc::Model::Piecewise: inst = bgpc::random_piecewise(gen_n, s, gen_N, J, gen_seed); break;
        case bgpc::Model::Sparse:
          inst = bgpc::random_sparse(bgpc::BasisDescriptor::dft(gen_n), gen_N, gen_theta, gen_seed);
          break;
      }
      emit(bgpc::dump(bgpc::instance_to_json(inst)), gen_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "bgpc: error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
