// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "cli.hpp"
#include "trajattack/attack.hpp"
#include "trajattack/constraints.hpp"
#include "trajattack/eval.hpp"
#include "trajattack/generator.hpp"
#include "trajattack/oracle/oracle.hpp"
#include "trajattack/targets.hpp"
#include "trajattack/training.hpp"

using namespace trajattack;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  fmt::print("criterion {:2d} {}: {}\n", criterion, pass ? "PASS" : "FAIL", detail);
  std::fflush(stdout);
  failures += !pass;
}

KinematicBounds disabled() {
  KinematicBounds b;
  for (Quantity q : kAllQuantities) b[q].enabled = false;
  return b;
}

Trajectory random_past(std::mt19937_64& rng, int states) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec2> pts(static_cast<std::size_t>(states));
  Vec2 p(10.0 * g(rng), 10.0 * g(rng));
  const Vec2 v(3.0 * g(rng), 3.0 * g(rng));
  for (auto& s : pts) {
    s = p + 0.3 * Vec2(g(rng), g(rng));
    p += v;
  }
  return Trajectory(pts, 0.5);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Trained MLP and 100-scenario lateral-shift suite shared by criteria 4, 6,
// 7 and 8, with P = 6 and F = 6.
struct LearnedSuite {
  PredictorSpec spec;
  std::vector<Scenario> test;
  std::vector<Trajectory> targets;
  SuiteSetup setup;
  MetricsReport k100;
  double train_seconds = 0.0;
  double validation_ade = 0.0;
};

GenConfig learned_gen(int count, std::uint64_t seed) {
  GenConfig gen;
  gen.count = count;
  gen.past = 6;
  gen.future = 6;
  gen.noise = 0.1;
  gen.seed = seed;
  return gen;
}

const LearnedSuite& learned_suite() {
  static std::optional<LearnedSuite> suite;
  if (suite) return *suite;
  LearnedSuite s;
  const auto train = generate_synthetic_dataset(learned_gen(1000, 1));
  const auto start = Clock::now();
  TrainConfig tc;
  tc.seed = 1;
  const TrainResult trained = train_mlp(train, tc);
  s.train_seconds = seconds_since(start);
  s.validation_ade = trained.curve.back().validation_ade;
  s.spec = trained.spec;
  s.test = generate_synthetic_dataset(learned_gen(100, 2));
  for (const auto& sc : s.test) s.targets.push_back(make_target(LateralShift{1.0}, sc));
  s.setup.bounds = compute_bounds(train);
  s.setup.position_radius = 1.0;
  s.setup.weights = make_weights(WeightKind::Exponential, 0.7, 6);
  s.setup.attack.seed = 2024;
  s.k100 = attack_suite(s.spec, s.test, s.targets, s.setup);
  suite = std::move(s);
  return *suite;
}

// ------------------------------------------------------------------ criteria

void criterion2() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::normal_distribution<double> g(0.0, 1.5);
  double worst = 0.0;
  const int draws = 150;
  for (int trial = 0; trial < draws; ++trial) {
    const int p = 1 + trial % 6;
    const int f = 1 + (trial * 7) % 12;
    const std::vector<int> hidden = trial % 3 ? std::vector<int>{16, 16} : std::vector<int>{32};
    const auto spec = make_mlp(p, f, hidden, 1000 + trial);
    const Trajectory past = random_past(rng, p + 1);
    Eigen::VectorXd y = predict(spec, past).coords();
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += g(rng);
    const Trajectory target(y, past.dt());
    const auto w = make_weights(trial % 2 ? WeightKind::Uniform : WeightKind::Exponential, u(rng), f);
    Perturbation delta = Perturbation::zeros(static_cast<std::size_t>(p + 1));
    for (Eigen::Index i = 0; i < delta.coords.size(); ++i) delta.coords[i] = 0.1 * g(rng);
    const auto lg = loss_gradient(spec, past, delta, target, w);
    const Eigen::VectorXd fd = oracle::fd_loss_gradient(spec, past, delta.coords, target, w.weights, 1e-5);
    worst = std::max(worst, (lg.gradient - fd).norm() / fd.norm());
  }
  report(2, worst <= 1e-4,
         fmt::format("{} mlp draws, max relative error {:.3g} (limit 1e-4), {:.1f} s", draws, worst,
                     seconds_since(start)));
}

void criterion3() {
  const auto start = Clock::now();
  int cases = 0, within = 0, feasible = 0, projected = 0;
  double worst_gap = 0.0;
  for (int states = 2; states <= 4; ++states) {
    GenConfig gen;
    gen.count = 80;
    gen.past = states - 1;
    gen.future = 3;
    gen.seed = 30 + static_cast<std::uint64_t>(states);
    const auto data = generate_synthetic_dataset(gen);
    const auto bounds = compute_bounds(data);
    std::mt19937_64 rng(40 + static_cast<std::uint64_t>(states));
    std::normal_distribution<double> g(0.0, 0.6);
    for (const auto& s : data) {
      const ConstraintSet cs(s.past, bounds, 1.0);
      Perturbation delta = Perturbation::zeros(s.past.size());
      for (Eigen::Index i = 0; i < delta.coords.size(); ++i) delta.coords[i] = g(rng);
      const auto theta = project_line_search(cs, delta, 20);
      const double sum = std::accumulate(theta.begin(), theta.end(), 0.0);
      const double best = oracle::brute_force_theta(cs, delta.coords, 20).sum;
      ++cases;
      feasible += is_feasible(cs, apply(s.past, scale(delta, theta)));
      within += sum >= best - 1.0 / 20 - 1e-12;
      projected += sum < static_cast<double>(theta.size());
      worst_gap = std::max(worst_gap, best - sum);
    }
  }
  const double elapsed = seconds_since(start);
  report(3, within == cases && feasible == cases && elapsed < 60.0,
         fmt::format("{} cases (P+1 in 2..4, {} needed projection), {} within 1/G, {} feasible, worst gap {:.3g}, "
                     "{:.1f} s (limit 60)",
                     cases, projected, within, feasible, worst_gap, elapsed));
}

void criterion4() {
  const auto& learned = learned_suite();
  int checked = 0, ok = 0;
  auto check = [&](const std::vector<Scenario>& data, const MetricsReport& suite, const SuiteSetup& setup) {
    for (std::size_t i = 0; i < suite.rows.size(); ++i) {
      const auto it = std::find_if(data.begin(), data.end(),
                                   [&](const Scenario& s) { return s.id == suite.rows[i].scenario_id; });
      const ConstraintSet cs(it->past, setup.bounds, setup.position_radius);
      const Trajectory& adv = suite.results[i].adversarial;
      ++checked;
      ok += is_feasible(cs, adv) && oracle::reference_feasible(cs, adv);
    }
    return suite.failures.size();
  };
  std::size_t failed = check(learned.test, learned.k100, learned.setup);

  // Speed-up targets on the default generator stress the kinematic bands.
  GenConfig gen;
  gen.count = 100;
  gen.seed = 4;
  const auto data = generate_synthetic_dataset(gen);
  const auto cv = make_constant_velocity(gen.past, gen.future, gen.dt);
  std::vector<Trajectory> targets;
  for (const auto& s : data) targets.push_back(make_target(Speedup{1.5}, s));
  SuiteSetup setup;
  setup.bounds = compute_bounds(data);
  setup.weights = make_weights(WeightKind::Exponential, 0.7, gen.future);
  setup.attack.seed = 4;
  const auto cv_report = attack_suite(cv, data, targets, setup);
  std::size_t projected = 0;
  for (const auto& r : cv_report.results) projected += !r.projection_events.empty();
  failed += check(data, cv_report, setup);
  report(4, ok == checked && failed == 0 && checked == 200,
           fmt::format("{}/{} attack results feasible (radius 1 m, mu +- 3 sigma bands; learned lateral-shift "
                       "suite + constant-velocity speed-up suite, {} runs projected), {} suite failures",
                       ok, checked, projected, failed));
}

void criterion5() {
  const auto start = Clock::now();
  GenConfig gen;
  gen.count = 100;
  gen.seed = 77;
  const auto data = generate_synthetic_dataset(gen);
  const auto cv = make_constant_velocity(gen.past, gen.future, gen.dt);
  const auto w = make_weights(WeightKind::Exponential, 0.7, gen.future);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 0.15);
  int strict = 0, with_tau = 0, reachable = 0;
  std::vector<double> finals;
  AttackConfig cfg;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Scenario& s = data[i];
    // A target the predictor produces for some perturbed input is reachable.
    Perturbation truth = Perturbation::zeros(s.past.size());
    for (Eigen::Index j = 0; j < truth.coords.size(); ++j) truth.coords[j] = g(rng);
    const Trajectory target = predict(cv, apply(s.past, truth));
    const auto opt = oracle::linear_attack_optimum(cv, s.past, target, w.weights);
    reachable += opt.loss < 1e-10;
    const ConstraintSet cs(s.past, disabled(), 100.0);
    cfg.seed = i;
    const auto r = run_attack(cv, target, cs, w, cfg);
    finals.push_back(r.final_loss);
    strict += std::abs(r.final_loss - opt.loss) <= 1e-3;
    // Early stopping at tau caps how close a run gets to J* = 0.
    with_tau += r.final_loss <= std::max(opt.loss, cfg.tau) + 1e-3;
  }
  const double elapsed = seconds_since(start);
  report(5, with_tau >= 95 && elapsed < 60.0,
         fmt::format("{}/100 within 1e-3 of max(J*, tau) (need 95); {}/100 within 1e-3 of J* itself; "
                     "{} targets with J* < 1e-10; median final {:.4f} m; {:.1f} s (limit 60)",
                     with_tau, strict, reachable, median(finals), elapsed));
}

void criterion6() {
  const auto& s = learned_suite();
  const double ratio = s.k100.mean_j_bar() / s.k100.mean_j_zero();
  const double med = s.k100.median_j_bar();
  report(6, ratio <= 0.2 && med <= 0.25 && s.k100.failures.empty(),
         fmt::format("mean J_bar {:.4f} m vs J(0) {:.4f} m, ratio {:.3f} (limit 0.20); median J_bar {:.4f} m "
                     "(limit 0.25); mlp validation ADE {:.3f} m, trained in {:.0f} s",
                     s.k100.mean_j_bar(), s.k100.mean_j_zero(), ratio, med, s.validation_ade,
                     s.train_seconds));
}

void criterion7() {
  const auto& s = learned_suite();
  SuiteSetup setup = s.setup;
  setup.attack.max_iterations = 10;
  const auto adam10 = attack_suite(s.spec, s.test, s.targets, setup);
  setup.attack.optimizer = OptimizerKind::GradientDescent;
  const auto gd10 = attack_suite(s.spec, s.test, s.targets, setup);
  int non_increasing = 0;
  for (std::size_t i = 0; i < adam10.rows.size(); ++i) non_increasing += s.k100.rows[i].j_bar <= adam10.rows[i].j_bar;
  const bool rows_match = adam10.rows.size() == s.k100.rows.size();
  report(7, adam10.mean_j_bar() <= gd10.mean_j_bar() && rows_match &&
                non_increasing == static_cast<int>(adam10.rows.size()),
         fmt::format("K_max=10: Adam J_bar {:.4f} m vs gradient descent {:.4f} m (medians {:.4f} / {:.4f}); "
                     "J_bar(100) <= J_bar(10) on {}/{} scenarios; suite J_bar {:.4f} -> {:.4f} m",
                     adam10.mean_j_bar(), gd10.mean_j_bar(), adam10.median_j_bar(), gd10.median_j_bar(),
                     non_increasing, adam10.rows.size(), adam10.mean_j_bar(), s.k100.mean_j_bar()));
}

void criterion8() {
  const auto& s = learned_suite();
  const auto zero = noise_robustness(s.spec, s.test, s.targets, s.setup, {0.0, 8});
  bool exact = zero.rows.size() == s.k100.rows.size();
  for (std::size_t i = 0; exact && i < zero.rows.size(); ++i) {
    const auto& r = zero.rows[i];
    exact = r.noisy_clean == s.test[i].past && r.noisy_clean_j == r.clean_j &&
            r.noisy_adversarial_j == s.k100.rows[i].j_bar && r.noisy_clean_j_acc == r.clean_j_acc &&
            zero.attack.results[i].adversarial == s.k100.results[i].adversarial;
  }
  const auto noisy = noise_robustness(s.spec, s.test, s.targets, s.setup, {0.02, 8});
  const auto again = noise_robustness(s.spec, s.test, s.targets, s.setup, {0.02, 8});
  bool deterministic = noisy.rows.size() == again.rows.size();
  for (std::size_t i = 0; deterministic && i < noisy.rows.size(); ++i) {
    deterministic = noisy.rows[i].noisy_adversarial == again.rows[i].noisy_adversarial &&
                    noisy.rows[i].noisy_clean == again.rows[i].noisy_clean;
  }
  report(8, exact && deterministic && noisy.mean_noisy_adversarial_j <= noisy.mean_noisy_clean_j,
         fmt::format("radius 0 reproduces noiseless results: {}; seeded rerun identical: {}; radius 0.02 mean step: "
                     "noisy-adversarial J {:.4f} m vs noisy-clean J {:.4f} m (clean {:.4f}, adversarial {:.4f})",
                     exact ? "yes" : "no", deterministic ? "yes" : "no", noisy.mean_noisy_adversarial_j,
                     noisy.mean_noisy_clean_j, noisy.mean_clean_j, noisy.mean_adversarial_j));
}

int shell(const std::string& cmd, const fs::path& log) {
  const int status = std::system((cmd + " >> " + log.string() + " 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion9() {
  const fs::path dir = fs::temp_directory_path() / "trajattack_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path log = dir / "log.txt";
  const std::string cli = TRAJATTACK_CLI_PATH;
  const std::string data = (dir / "gen" / "dataset.jsonl").string();
  const std::string common = " --data " + data + " --predictor " + (dir / "train" / "predictor.json").string() +
                             " --bounds " + (dir / "stats" / "bounds.json").string() + " --kmax 10";
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen", "--seed 7 gen --count 20 --past 4 --future 6"},
      {"stats", "stats --data " + data},
      {"train", "--seed 3 train --data " + data + " --epochs 5 --hidden 16,16"},
      {"attack", "--seed 5 --threads 2 attack" + common},
      {"eval", "--seed 5 --threads 2 eval" + common + " --target speedup"},
      {"noise-eval", "--seed 5 noise-eval" + common},
  };
  int ran = 0, reproduced = 0;
  std::string bad;
  for (const auto& [name, args] : commands) {
    if (shell(cli + " " + args + " --out " + (dir / name).string(), log) != 0) {
      bad += " " + name + "(run)";
      continue;
    }
    ++ran;
    const fs::path again = dir / (name + "-replay");
    const int code = shell(cli + " replay --manifest " + (dir / name / "manifest.json").string() + " --out " +
                               again.string(),
                           log);
    if (code == 0 && trajattack::cli::differing_outputs(dir / name, again).empty()) {
      ++reproduced;
    } else {
      bad += " " + name;
    }
  }
  report(9, reproduced == static_cast<int>(commands.size()),
         fmt::format("{}/{} commands ran, {} reproduced byte-identically via replay (wall_time_s and manifest "
                     "timestamps excluded){}",
                     ran, commands.size(), reproduced, bad.empty() ? "" : "; failed:" + bad));
}

void criterion10() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> alphas = {1e-6, 1e-3, 0.5, 0.7, 0.999999};
  for (int i = 0; i < 100; ++i) {
    double a = u(rng);
    if (a > 0.0) alphas.push_back(a);
    alphas.push_back(std::pow(10.0, -6.0 * u(rng)) * (1.0 - 1e-12));
  }
  long cases = 0, ok = 0;
  double worst_sum = 0.0;
  for (int f = 1; f <= 50; ++f) {
    for (double a : alphas) {
      for (WeightKind kind : {WeightKind::Uniform, WeightKind::Exponential}) {
        const auto w = make_weights(kind, a, f);
        const double sum = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
        bool good = w.weights.size() == static_cast<std::size_t>(f) && std::abs(sum - 1.0) <= 1e-12;
        for (std::size_t j = 0; j < w.weights.size(); ++j) {
          good = good && w.weights[j] >= 0.0 && w.weights[j] <= 1.0;
          if (kind == WeightKind::Exponential && j > 0) good = good && w.weights[j - 1] < w.weights[j];
        }
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        ++cases;
        ok += good;
      }
    }
  }
  report(10, ok == cases,
         fmt::format("{}/{} weight vectors valid (F 1..50, {} alphas in (0,1)); max |sum - 1| {:.3g}", ok, cases,
                     alphas.size(), worst_sum));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<std::pair<int, void (*)()>> all = {
      {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5}, {6, criterion6},
      {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
  for (const auto& [n, fn] : all) {
    if (only.empty() || only.count(n)) fn();
  }
  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
