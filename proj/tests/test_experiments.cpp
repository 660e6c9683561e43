#include <doctest.h>

#include <regex>
#include <sstream>

#include "bgpc/experiments.hpp"
#include "bgpc/instance_io.hpp"
#include "bgpc/report.hpp"

using namespace bgpc;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "bgpc_test_experiments" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("ratio_string is the exact quotient") {
  CHECK(ratio_string(0, 100) == "0.0");
  CHECK(ratio_string(100, 100) == "1.0");
  CHECK(ratio_string(99, 100) == "0.99");
  CHECK(ratio_string(1, 3) == "0.3333333333333333");
  CHECK(std::stod(ratio_string(2, 3)) == 2.0 / 3.0);
  CHECK_THROWS_AS(ratio_string(1, 0), ParameterError);
}

TEST_CASE("subspace sweep: frontier at the necessary bound, monotone in N") {
  SweepOptions opt;
  opt.n = 7;
  opt.trials = 10;
  opt.seed = 3;
  const auto grid = run_sweep(opt);
  CHECK(grid.cells.size() == 36);
  for (const auto& c : grid.cells) {
    CHECK(c.identifiable <= c.trials);
    CHECK(c.errors == 0);
    const bool above = c.N >= necessary_N(7, c.k);
    CHECK(c.identifiable == (above ? c.trials : 0));
  }
  for (int k = 1; k < 7; ++k)
    for (int N = 2; N < 7; ++N) CHECK(grid.at(k, N).identifiable >= grid.at(k, N - 1).identifiable);
}

TEST_CASE("sweep CSV format and determinism") {
  SweepOptions opt;
  opt.model = SweepModel::JointSparse;
  opt.n = 6;
  opt.trials = 4;
  opt.seed = 9;
  const auto csv = sweep_csv(run_sweep(opt));
  CHECK(csv == sweep_csv(run_sweep(opt)));
  opt.threads = 3;
  CHECK(csv == sweep_csv(run_sweep(opt)));
  CHECK(csv.find('\r') == std::string::npos);
  const auto ls = lines(csv);
  REQUIRE(ls.size() == 26);
  CHECK(ls[0] == "s,N,trials,identifiable,ratio");
  const std::regex row(R"((\d+),(\d+),(\d+),(\d+),([0-9.e-]+))");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    std::smatch m;
    REQUIRE(std::regex_match(ls[i], m, row));
    const auto trials = std::stoull(m[3]), ok = std::stoull(m[4]);
    CHECK(m[5] == ratio_string(ok, trials));
    // Left of the necessary bound nothing is identifiable.
    if (std::stoi(m[2]) < necessary_N(6, std::stoi(m[1]))) CHECK(ok == 0);
  }
}

TEST_CASE("sweep guard and parameters") {
  SweepOptions opt;
  opt.n = 15;
  CHECK_THROWS_AS(run_sweep(opt), GuardError);
  opt.n = 5;
  opt.trials = 0;
  CHECK_THROWS_AS(run_sweep(opt), ParameterError);
  CHECK_THROWS_AS(sweep_model_from_string("piecewise"), ParameterError);
}

TEST_CASE("SVG overlay: zero cells lie left of the curve, full cells never do") {
  SweepOptions opt;
  opt.n = 8;
  opt.trials = 5;
  opt.seed = 1;
  const auto grid = run_sweep(opt);
  const auto svg = sweep_svg(grid);
  CHECK(svg.find("<polyline class=\"necessary-bound\"") != std::string::npos);
  CHECK(svg.find("<line class=\"sufficient-bound\"") != std::string::npos);
  const std::regex cell(R"re(<rect class="cell"[^>]*data-m="(\d+)" data-N="(\d+)" data-ratio="([^"]+)")re");
  int cells = 0;
  for (std::sregex_iterator it(svg.begin(), svg.end(), cell), end; it != end; ++it) {
    ++cells;
    const int k = std::stoi((*it)[1]);
    const int N = std::stoi((*it)[2]);
    const double curve = (8.0 - 1.0) / (8.0 - k);
    if ((*it)[3] == "0.0") CHECK(N < curve);
    if ((*it)[3] == "1.0") CHECK(N >= curve);
  }
  CHECK(cells == 49);
  CHECK(svg == sweep_svg(run_sweep(opt)));
}

TEST_CASE("census on a small case") {
  CensusOptions opt;
  opt.n = 8;
  opt.s = 4;
  opt.N = 4;
  opt.trials_per_support = 2;
  opt.seed = 5;
  const auto r = run_census(opt);
  // Every size-4 support appears exactly once through its canonical representative.
  std::uint64_t covered = 0;
  for (const auto& v : r.supports) {
    CHECK(canonical_shift(v.canonical) == v.canonical);
    CHECK(v.identifiable_trials <= opt.trials_per_support);
    covered += static_cast<std::uint64_t>(v.orbit_size);
    if (v.periodic) CHECK(v.identifiable_trials == 0);
  }
  CHECK(covered == binomial(8, 4));
  // s = N with generic draws: every non-periodic support is good.
  CHECK(r.good_fraction() == 1.0);
  CHECK(census_json(r).dump() == census_json(run_census(opt)).dump());

  opt.max_supports = 10;
  CHECK_THROWS_AS(run_census(opt), GuardError);
}

TEST_CASE("counter-example emission, idempotence and tamper detection") {
  const auto dir = scratch_dir("cex");
  const auto first = emit_counterexamples(dir);
  REQUIRE(first.size() == 4);
  std::vector<std::string> contents;
  for (const auto& e : first) {
    CAPTURE(e.name);
    CHECK(e.check.passed());
    CHECK(e.check.residual < kCounterexampleResidual);
    contents.push_back(read_text_file(e.instance_file) + read_text_file(e.transcript_file));
  }
  const auto second = emit_counterexamples(dir);
  for (std::size_t i = 0; i < second.size(); ++i)
    CHECK(read_text_file(second[i].instance_file) + read_text_file(second[i].transcript_file) == contents[i]);

  for (const auto& e : first) {
    const auto inst = load_instance(e.instance_file);
    auto transcript = nlohmann::json::parse(read_text_file(e.transcript_file));
    CHECK(verify_transcript(inst, transcript).passed());
    transcript["lambda1"][0][0] = transcript["lambda1"][0][0].get<double>() * 1.01 + 0.01;
    const auto tampered = verify_transcript(inst, transcript);
    CHECK_FALSE(tampered.passed());
    CHECK_FALSE(tampered.measurement_equal);
  }
}

TEST_CASE("run_check verdicts and exit codes") {
  CheckOptions opt;
  const auto good = run_check(random_subspace(10, 3, 3, 1), opt);
  CHECK(good.exit_code == 0);
  CHECK(good.verdict == "identifiable");
  CHECK(good.report["sufficient_condition"]["satisfied"] == true);
  CHECK(good.report["necessary_bound"]["required_N"] == 2);

  const auto f8 = run_check(counterexample(CounterexampleKind::SubspaceF8).instance, opt);
  CHECK(f8.exit_code == 1);
  CHECK(f8.verdict == "not_identifiable");
  CHECK(f8.report["reason"].get<std::string>().find("rank(G) <= n - 2") != std::string::npos);

  const auto per = run_check(counterexample(CounterexampleKind::Periodic).instance, opt);
  CHECK(per.exit_code == 1);
  CHECK(per.report["checker_report"]["failing_support"].is_array());

  const auto pw = run_check(random_piecewise(6, 2, 2, IndexSet(6, {2, 3}), 1), opt);
  CHECK(pw.exit_code == 0);
  const auto pw_thin = run_check(random_piecewise(6, 4, 1, IndexSet(6, {2, 3, 4, 5}), 1), opt);
  CHECK(pw_thin.verdict == "not_identifiable");
  CHECK(pw_thin.exit_code == 1);

  opt.falsifier_trials = 200;
  const auto sp = run_check(random_sparse(BasisDescriptor::dft(6), 60, 0.2, 1), opt);
  CHECK(sp.verdict == "not_falsified");
  CHECK(sp.exit_code == 0);

  auto inst = random_subspace(6, 2, 2, 1);
  inst.Y.row(2).setZero();
  CHECK_THROWS_AS(run_check(inst, opt), PreconditionError);
}
