#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "trajattack/attack.hpp"
#include "trajattack/constraints.hpp"
#include "trajattack/dataset_io.hpp"
#include "trajattack/errors.hpp"
#include "trajattack/eval.hpp"
#include "trajattack/generator.hpp"
#include "trajattack/noise.hpp"
#include "trajattack/predictor_io.hpp"
#include "trajattack/report_io.hpp"
#include "trajattack/targets.hpp"
#include "trajattack/training.hpp"

namespace trajattack::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kManifestName = "manifest.json";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingFile : public Error {
 public:
  using Error::Error;
};

void require_file(const std::string& path, const std::string& what) {
  if (!fs::is_regular_file(path)) {
    throw MissingFile(what + " file '" + path + "' does not exist");
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path, const std::string& what) {
  require_file(path, what);
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": invalid JSON: " + e.what());
  }
}

std::string utc_now() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                     fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

/// Flags whose values are file system paths; recorded as absolute paths so
/// a manifest replays from any working directory.
const std::set<std::string> kPathFlags = {"--data", "--predictor", "--bounds", "--target-file", "--out"};

std::vector<std::string> absolute_paths(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    const auto eq = a.find('=');
    if (eq != std::string::npos && kPathFlags.count(a.substr(0, eq))) {
      out.push_back(a.substr(0, eq + 1) + fs::absolute(a.substr(eq + 1)).lexically_normal().string());
    } else if (kPathFlags.count(a) && i + 1 < args.size()) {
      out.push_back(a);
      const std::string& v = args[++i];
      out.push_back(a == "--predictor" && v == "constant_velocity"
                        ? v
                        : fs::absolute(v).lexically_normal().string());
    } else {
      out.push_back(a);
    }
  }
  return out;
}

/// One command's inputs, outputs and resolved configuration; written out as
/// the run manifest.
class Run {
 public:
  Run(std::string command, const std::vector<std::string>& args, std::uint64_t seed, int threads,
      std::string out_dir)
      : command_(std::move(command)),
        args_(absolute_paths(args)),
        seed_(seed),
        threads_(threads),
        out_dir_(std::move(out_dir)),
        started_at_(utc_now()),
        rng_(seed) {}

  ordered_json& config() { return config_; }

  /// Draws the next sub-seed from the command's single generator.
  std::uint64_t next_seed() { return rng_(); }

  void input(const std::string& path) { inputs_.push_back(fs::absolute(path).lexically_normal()); }

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(out_dir_);
    const fs::path path = out_dir_ / name;
    for (const fs::path& in : inputs_) {
      if (fs::exists(path) && fs::equivalent(path, in)) {
        throw Error("refusing to overwrite input file '" + in.string() + "'");
      }
    }
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw Error("failed writing '" + path.string() + "'");
    outputs_.push_back(name);
  }

  void finish() {
    ordered_json doc;
    doc["command"] = command_;
    doc["args"] = args_;
    doc["tool_version"] = kToolVersion;
    doc["seed"] = seed_;
    doc["threads"] = threads_;
    doc["config"] = config_;
    doc["inputs"] = ordered_json::array();
    for (const fs::path& p : inputs_) {
      doc["inputs"].push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
    }
    doc["outputs"] = ordered_json::array();
    for (const std::string& name : outputs_) {
      doc["outputs"].push_back({{"file", name}, {"sha256", sha256_file(out_dir_ / name)}});
    }
    doc["started_at"] = started_at_;
    doc["finished_at"] = utc_now();
    std::ofstream out(out_dir_ / kManifestName, std::ios::binary);
    out << doc.dump(2) << '\n';
    if (!out) throw Error("failed writing the run manifest");
  }

 private:
  std::string command_;
  std::vector<std::string> args_;
  std::uint64_t seed_;
  int threads_;
  fs::path out_dir_;
  std::string started_at_;
  std::mt19937_64 rng_;
  ordered_json config_ = ordered_json::object();
  std::vector<fs::path> inputs_;
  std::vector<std::string> outputs_;
};

template <class F>
std::string to_text(F&& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

// Options shared by attack, eval and noise-eval.
struct AttackOptions {
  std::string data;
  std::string predictor;
  std::string bounds;
  bool no_kinematics = false;
  std::string target = "lateral_shift";
  double target_distance = 1.0;
  double target_factor = 1.5;
  std::string target_file;
  std::string optimizer = "adam";
  std::string schedule;
  double step = AttackConfig{}.initial_step;
  double tau = AttackConfig{}.tau;
  int kmax = AttackConfig{}.max_iterations;
  std::string init = "random";
  double init_scale = AttackConfig{}.init_scale;
  int grid = AttackConfig{}.projection_grid;
  long projection_budget = AttackConfig{}.projection_budget;
  double radius = 1.0;
  std::string weights = "exponential";
  double alpha = 0.7;
  std::string out;
};

void add_attack_options(CLI::App* sub, AttackOptions& o) {
  sub->add_option("--data", o.data, "Scenario dataset (JSON lines)")->required();
  sub->add_option("--predictor", o.predictor,
                  "Predictor JSON, or 'constant_velocity' for the built-in baseline")
      ->required();
  sub->add_option("--bounds", o.bounds, "Kinematic bounds JSON; computed from --data if omitted");
  sub->add_flag("--no-kinematics", o.no_kinematics, "Enforce only the position radius");
  sub->add_option("--target", o.target, "Target family")
      ->check(CLI::IsMember({"lateral_shift", "speedup", "prediction", "file"}))
      ->capture_default_str();
  sub->add_option("--target-distance", o.target_distance, "lateral_shift offset, m")->capture_default_str();
  sub->add_option("--target-factor", o.target_factor, "speedup factor")->capture_default_str();
  sub->add_option("--target-file", o.target_file, "Target spec JSON for --target file");
  sub->add_option("--optimizer", o.optimizer)
      ->check(CLI::IsMember({"adam", "gradient_descent", "gd"}))
      ->capture_default_str();
  sub->add_option("--step", o.step, "Initial step size epsilon_0, m")->capture_default_str();
  sub->add_option("--schedule", o.schedule, "Step schedule (default depends on the optimizer)")
      ->check(CLI::IsMember({"constant", "inverse_sqrt"}));
  sub->add_option("--tau", o.tau, "Stop once the loss is at most tau, m")->capture_default_str();
  sub->add_option("--kmax", o.kmax, "Iteration cap")->capture_default_str();
  sub->add_option("--init", o.init)->check(CLI::IsMember({"random", "zero"}))->capture_default_str();
  sub->add_option("--init-scale", o.init_scale)->capture_default_str();
  sub->add_option("--grid", o.grid, "Projection resolution G")->capture_default_str();
  sub->add_option("--projection-budget", o.projection_budget)->capture_default_str();
  sub->add_option("--radius", o.radius, "Position radius around each nominal state, m")
      ->capture_default_str();
  sub->add_option("--weights", o.weights)
      ->check(CLI::IsMember({"exponential", "uniform"}))
      ->capture_default_str();
  sub->add_option("--alpha", o.alpha, "Exponential weight base")->capture_default_str();
  sub->add_option("--out", o.out, "Output directory")->required();
}

struct AttackInputs {
  std::vector<Scenario> data;
  PredictorSpec spec;
  std::vector<Trajectory> targets;
  SuiteSetup setup;
};

std::vector<Scenario> load_dataset(Run& run, const std::string& path) {
  require_file(path, "dataset");
  run.input(path);
  auto data = read_dataset(fs::path(path));
  if (data.empty()) throw Error("dataset '" + path + "' has no scenarios");
  return data;
}

AttackInputs prepare_attack(Run& run, const AttackOptions& o, int threads) {
  AttackInputs in;
  in.data = load_dataset(run, o.data);
  const auto [p, f] = uniform_horizons(in.data);

  if (o.predictor == "constant_velocity") {
    in.spec = make_constant_velocity(static_cast<int>(p), static_cast<int>(f), in.data.front().past.dt());
  } else {
    require_file(o.predictor, "predictor");
    run.input(o.predictor);
    in.spec = load_predictor(o.predictor);
  }
  if (static_cast<std::size_t>(in.spec.past) != p || static_cast<std::size_t>(in.spec.future) != f) {
    throw HorizonMismatch(fmt::format("predictor expects P={}, F={} but the dataset has P={}, F={}",
                                      in.spec.past, in.spec.future, p, f));
  }

  TargetSpec target = LateralShift{o.target_distance};
  if (o.target == "speedup") target = Speedup{o.target_factor};
  if (o.target == "file") {
    if (o.target_file.empty()) throw UsageError("--target file needs --target-file");
    target = target_spec_from_json(read_json(o.target_file, "target"));
    run.input(o.target_file);
  }
  for (const Scenario& s : in.data) {
    in.targets.push_back(o.target == "prediction" ? predict(in.spec, s.past) : make_target(target, s));
  }

  std::string bounds_source = "dataset";
  if (o.no_kinematics) {
    for (Quantity q : kAllQuantities) in.setup.bounds[q].enabled = false;
    bounds_source = "disabled";
  } else if (!o.bounds.empty()) {
    in.setup.bounds = bounds_from_json(read_json(o.bounds, "bounds"));
    run.input(o.bounds);
    bounds_source = "file";
  } else {
    in.setup.bounds = compute_bounds(in.data);
  }
  in.setup.position_radius = o.radius;
  in.setup.threads = threads;

  AttackConfig& cfg = in.setup.attack;
  try {
    in.setup.weights = make_weights(weight_kind_from_string(o.weights), o.alpha, static_cast<int>(f));
    cfg.optimizer = optimizer_from_string(o.optimizer);
    if (!o.schedule.empty()) cfg.schedule = schedule_from_string(o.schedule);
    cfg.initial_step = o.step;
    cfg.tau = o.tau;
    cfg.max_iterations = o.kmax;
    cfg.init = init_from_string(o.init);
    cfg.init_scale = o.init_scale;
    cfg.projection_grid = o.grid;
    cfg.projection_budget = o.projection_budget;
    cfg.seed = run.next_seed();
    validate(cfg);
    if (!(o.radius > 0.0)) throw std::invalid_argument("radius must be > 0");
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  auto& c = run.config();
  c["predictor"] = o.predictor == "constant_velocity" ? "constant_velocity" : "file";
  c["P"] = p;
  c["F"] = f;
  c["target"] = o.target == "prediction" ? ordered_json{{"kind", "prediction"}}
                                         : ordered_json(target_spec_to_json(target));
  c["bounds_source"] = bounds_source;
  c["bounds"] = bounds_to_json(in.setup.bounds);
  c["position_radius"] = o.radius;
  c["weights"] = {{"kind", to_string(in.setup.weights.kind)},
                  {"alpha", in.setup.weights.alpha},
                  {"values", in.setup.weights.weights}};
  c["attack"] = config_to_json(cfg);
  return in;
}

void report_failures(const MetricsReport& report, std::ostream& err) {
  for (const SuiteFailure& f : report.failures) {
    fmt::print(err, "warning: scenario '{}' failed: {}\n", f.scenario_id, f.message);
  }
}

// ---------------------------------------------------------------- commands

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  bool json_errors = false;
};

int cmd_gen(const std::vector<std::string>& args, const Globals& g, GenConfig cfg, const std::string& out_dir,
            std::ostream& out) {
  Run run("gen", args, g.seed, g.threads, out_dir);
  cfg.seed = run.next_seed();
  auto& c = run.config();
  c["count"] = cfg.count;
  c["P"] = cfg.past;
  c["F"] = cfg.future;
  c["dt"] = cfg.dt;
  c["speed_min"] = cfg.speed_min;
  c["speed_max"] = cfg.speed_max;
  c["accel_max"] = cfg.accel_max;
  c["turn_rate"] = cfg.turn_rate;
  c["lane_change_rate"] = cfg.lane_change_rate;
  c["max_yaw_rate"] = cfg.max_yaw_rate;
  c["lane_width"] = cfg.lane_width;
  c["noise"] = cfg.noise;
  c["generator_seed"] = cfg.seed;
  std::vector<Scenario> data;
  try {
    data = generate_synthetic_dataset(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  run.write("dataset.jsonl", to_text([&](std::ostream& s) { write_dataset(data, s); }));
  run.finish();
  fmt::print(out, "wrote {} scenarios to {}\n", data.size(), (fs::path(out_dir) / "dataset.jsonl").string());
  return 0;
}

int cmd_train(const std::vector<std::string>& args, const Globals& g, const std::string& data_path,
              TrainConfig cfg, const std::string& out_dir, std::ostream& out) {
  Run run("train", args, g.seed, g.threads, out_dir);
  const auto data = load_dataset(run, data_path);
  cfg.seed = run.next_seed();
  auto& c = run.config();
  c["hidden"] = cfg.hidden;
  c["learning_rate"] = cfg.learning_rate;
  c["epochs"] = cfg.epochs;
  c["batch_size"] = cfg.batch_size;
  c["validation_fraction"] = cfg.validation_fraction;
  c["training_seed"] = cfg.seed;
  const TrainResult result = train_mlp(data, cfg);
  run.write("predictor.json", predictor_to_json(result.spec).dump() + "\n");
  run.write("curve.csv", to_text([&](std::ostream& s) {
              s << "epoch,train_mse,validation_mse,validation_ade\n";
              for (const EpochStats& e : result.curve) {
                fmt::print(s, "{},{},{},{}\n", e.epoch, e.train_mse, e.validation_mse, e.validation_ade);
              }
            }));
  run.finish();
  fmt::print(out, "trained {} epochs; validation ADE {} m\n", result.curve.size(),
             result.curve.empty() ? 0.0 : result.curve.back().validation_ade);
  return 0;
}

int cmd_stats(const std::vector<std::string>& args, const Globals& g, const std::string& data_path,
              double multiplier, bool one_sided, const std::string& out_dir, std::ostream& out) {
  Run run("stats", args, g.seed, g.threads, out_dir);
  const auto data = load_dataset(run, data_path);
  KinematicBounds bounds;
  try {
    bounds = compute_bounds(data, multiplier);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  bounds.two_sided = !one_sided;
  run.config()["multiplier"] = multiplier;
  run.config()["two_sided"] = bounds.two_sided;
  run.write("bounds.json", dump(bounds_to_json(bounds)));
  run.finish();
  fmt::print(out, "bounds from {} scenarios written to {}\n", data.size(),
             (fs::path(out_dir) / "bounds.json").string());
  return 0;
}

int cmd_attack(const std::vector<std::string>& args, const Globals& g, const AttackOptions& o,
               std::ostream& out, std::ostream& err) {
  Run run("attack", args, g.seed, g.threads, o.out);
  const AttackInputs in = prepare_attack(run, o, g.threads);
  const MetricsReport report = attack_suite(in.spec, in.data, in.targets, in.setup);
  report_failures(report, err);

  std::vector<Scenario> adversarial;
  ordered_json results = ordered_json::array();
  std::size_t reached = 0;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    const auto& res = report.results[i];
    const auto it = std::find_if(in.data.begin(), in.data.end(),
                                 [&](const Scenario& s) { return s.id == row.scenario_id; });
    adversarial.push_back(Scenario{row.scenario_id, res.adversarial, it->future_truth});
    ordered_json entry{{"scenario_id", row.scenario_id}};
    const nlohmann::json body = result_to_json(res);
    for (auto& [key, value] : body.items()) entry[key] = value;
    results.push_back(std::move(entry));
    reached += res.final_loss <= in.setup.attack.tau;
  }
  ordered_json failures = ordered_json::array();
  for (const auto& f : report.failures) failures.push_back({{"scenario_id", f.scenario_id}, {"message", f.message}});

  run.write("adversarial.jsonl", to_text([&](std::ostream& s) { write_dataset(adversarial, s); }));
  run.write("results.json", dump(ordered_json{{"results", results}, {"failures", failures}}));
  run.finish();
  fmt::print(out, "attacked {} scenarios ({} failed); {} reached tau; mean J_bar {} m\n", report.rows.size(),
             report.failures.size(), reached, report.mean_j_bar());
  return 0;
}

int cmd_eval(const std::vector<std::string>& args, const Globals& g, const AttackOptions& o,
             std::ostream& out, std::ostream& err) {
  Run run("eval", args, g.seed, g.threads, o.out);
  const AttackInputs in = prepare_attack(run, o, g.threads);
  const MetricsReport report = attack_suite(in.spec, in.data, in.targets, in.setup);
  report_failures(report, err);
  run.write("metrics.csv", to_text([&](std::ostream& s) { write_metrics_csv(report, s); }));
  run.write("metrics.json", dump(metrics_to_json(report)));
  run.write("trace.csv", to_text([&](std::ostream& s) { write_trace_csv(report, s); }));
  run.finish();
  fmt::print(out, "J_acc_nom {} m, J_GY {} m, J_bar {} m over {} scenarios ({} failed)\n",
             report.mean_j_acc_nom(), report.mean_j_gy(), report.mean_j_bar(), report.rows.size(),
             report.failures.size());
  return 0;
}

int cmd_noise_eval(const std::vector<std::string>& args, const Globals& g, const AttackOptions& o,
                   double radius_factor, std::ostream& out, std::ostream& err) {
  Run run("noise-eval", args, g.seed, g.threads, o.out);
  const AttackInputs in = prepare_attack(run, o, g.threads);
  if (!(radius_factor >= 0.0)) throw UsageError("--radius-factor must be >= 0");
  const NoiseConfig nc{radius_factor, run.next_seed()};
  run.config()["noise"] = {{"radius_factor", nc.radius_factor}, {"seed", nc.seed}};
  const NoiseReport report = noise_robustness(in.spec, in.data, in.targets, in.setup, nc);
  report_failures(report.attack, err);
  run.write("noise.csv", to_text([&](std::ostream& s) { write_noise_csv(report, s); }));
  run.write("noise.json", dump(noise_to_json(report)));
  run.finish();
  fmt::print(out, "clean J {} m, noisy clean J {} m, adversarial J {} m, noisy adversarial J {} m\n",
             report.mean_clean_j, report.mean_noisy_clean_j, report.mean_adversarial_j,
             report.mean_noisy_adversarial_j);
  return 0;
}

int cmd_replay(const std::string& manifest_path, const std::string& out_dir, std::ostream& out,
               std::ostream& err) {
  const nlohmann::json manifest = read_json(manifest_path, "manifest");
  for (const char* key : {"command", "args", "inputs", "config"}) {
    if (!manifest.contains(key)) throw SchemaError(key, "missing field");
  }
  for (const auto& in : manifest["inputs"]) {
    const std::string path = in.at("path").get<std::string>();
    require_file(path, "recorded input");
    if (sha256_file(path) != in.at("sha256").get<std::string>()) {
      throw Error("input '" + path + "' changed since the recorded run");
    }
  }

  std::vector<std::string> args = manifest["args"].get<std::vector<std::string>>();
  const std::string target = fs::absolute(out_dir).lexically_normal().string();
  bool replaced = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out" && i + 1 < args.size()) {
      args[i + 1] = target;
      replaced = true;
    } else if (args[i].rfind("--out=", 0) == 0) {
      args[i] = "--out=" + target;
      replaced = true;
    }
  }
  if (!replaced) throw SchemaError("args", "no --out argument to redirect");
  const fs::path original = fs::path(manifest_path).parent_path();
  if (fs::exists(target) && fs::equivalent(target, original.empty() ? fs::path(".") : original)) {
    throw UsageError("replay output directory must differ from the recorded one");
  }

  const int code = run(args, out, err);
  if (code != 0) return code;

  std::vector<std::string> differing = differing_outputs(original.empty() ? fs::path(".") : original, target);
  const nlohmann::json again = nlohmann::json::parse(read_file(fs::path(target) / kManifestName));
  if (again["config"] != manifest["config"]) differing.push_back(std::string(kManifestName) + ":config");
  if (!differing.empty()) {
    std::string list;
    for (const auto& d : differing) list += (list.empty() ? "" : ", ") + d;
    throw Error("replay differs from the recorded run in: " + list);
  }
  fmt::print(out, "replay of '{}' reproduced every output\n", manifest["command"].get<std::string>());
  return 0;
}

// --------------------------------------------------------------- comparison

std::string mask_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string result;
  int column = -1;
  bool header = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (header) {
      const auto it = std::find(cells.begin(), cells.end(), "wall_time_s");
      if (it != cells.end()) column = static_cast<int>(it - cells.begin());
      header = false;
    } else if (column >= 0 && column < static_cast<int>(cells.size())) {
      cells[static_cast<std::size_t>(column)].clear();
    }
    for (std::size_t i = 0; i < cells.size(); ++i) result += (i ? "," : "") + cells[i];
    result += '\n';
  }
  return result;
}

void strip_wall_time(nlohmann::json& doc) {
  if (doc.is_object()) {
    doc.erase("wall_time_s");
    for (auto& [key, value] : doc.items()) strip_wall_time(value);
  } else if (doc.is_array()) {
    for (auto& value : doc) strip_wall_time(value);
  }
}

std::string comparable(const fs::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".csv") return mask_csv(text);
  if (path.extension() == ".json") {
    nlohmann::json doc = nlohmann::json::parse(text);
    strip_wall_time(doc);
    return doc.dump();
  }
  return text;
}

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 15];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::vector<std::string> differing_outputs(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.is_regular_file() && entry.path().filename() != kManifestName) {
      names.push_back(entry.path().filename().string());
    }
  }
  for (const auto& entry : fs::directory_iterator(b)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name != kManifestName &&
        std::find(names.begin(), names.end(), name) == names.end()) {
      names.push_back(name);
    }
  }
  std::sort(names.begin(), names.end());
  std::vector<std::string> differing;
  for (const std::string& name : names) {
    if (!fs::exists(a / name) || !fs::exists(b / name) || comparable(a / name) != comparable(b / name)) {
      differing.push_back(name);
    }
  }
  return differing;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Targeted adversarial attacks on trajectory predictors", "trajattack_cli"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed of the command's random generator")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for scenario-level parallelism")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--json-errors", g.json_errors, "Print diagnostics on stderr as JSON");

  GenConfig gen_cfg;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic scenario dataset");
  gen->add_option("--count", gen_cfg.count)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--past", gen_cfg.past, "P; scenarios hold P + 1 past states")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen->add_option("--future", gen_cfg.future, "F")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--dt", gen_cfg.dt, "Sampling period, s")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--speed-min", gen_cfg.speed_min)->capture_default_str();
  gen->add_option("--speed-max", gen_cfg.speed_max)->capture_default_str();
  gen->add_option("--accel-max", gen_cfg.accel_max)->capture_default_str();
  gen->add_option("--turn-rate", gen_cfg.turn_rate)->capture_default_str();
  gen->add_option("--lane-change-rate", gen_cfg.lane_change_rate)->capture_default_str();
  gen->add_option("--noise", gen_cfg.noise, "Position noise amplitude, m")->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->required();

  TrainConfig train_cfg;
  std::string train_data, train_out;
  auto* train = app.add_subcommand("train", "Train an MLP predictor");
  train->add_option("--data", train_data)->required();
  train->add_option("--hidden", train_cfg.hidden, "Hidden layer widths")->delimiter(',')->capture_default_str();
  train->add_option("--epochs", train_cfg.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--lr", train_cfg.learning_rate)->capture_default_str();
  train->add_option("--batch-size", train_cfg.batch_size)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--validation-fraction", train_cfg.validation_fraction)
      ->check(CLI::Range(0.0, 0.9))
      ->capture_default_str();
  train->add_option("--out", train_out, "Output directory")->required();

  std::string stats_data, stats_out;
  double multiplier = 3.0;
  bool one_sided = false;
  auto* stats = app.add_subcommand("stats", "Kinematic bounds of a dataset");
  stats->add_option("--data", stats_data)->required();
  stats->add_option("--multiplier", multiplier, "Band half-width in standard deviations")
      ->capture_default_str();
  stats->add_flag("--one-sided", one_sided, "Enforce only the upper end of each band");
  stats->add_option("--out", stats_out, "Output directory")->required();

  AttackOptions attack_opts, eval_opts, noise_opts;
  auto* attack = app.add_subcommand("attack", "Attack every scenario; write adversarial inputs");
  add_attack_options(attack, attack_opts);
  auto* eval = app.add_subcommand("eval", "Attack every scenario; write the metrics report");
  add_attack_options(eval, eval_opts);
  double radius_factor = NoiseConfig{}.radius_factor;
  auto* noise = app.add_subcommand("noise-eval", "Random-noise robustness on clean and adversarial inputs");
  add_attack_options(noise, noise_opts);
  noise->add_option("--radius-factor", radius_factor, "Noise disc radius over the mean step length")
      ->capture_default_str();

  std::string manifest_path, replay_out;
  auto* replay = app.add_subcommand("replay", "Re-run a recorded command and compare its outputs");
  replay->add_option("--manifest", manifest_path)->required();
  replay->add_option("--out", replay_out, "Directory for the re-run's outputs")->required();

  const bool json_errors = std::find(args.begin(), args.end(), "--json-errors") != args.end();
  auto fail = [&](const std::string& kind, const std::string& message, int code) {
    if (json_errors) {
      err << nlohmann::json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
    } else {
      fmt::print(err, "error [{}]: {}\n", kind, message);
    }
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    if (json_errors) return fail("usage", e.what(), 2);
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(args, g, gen_cfg, gen_out, out);
    if (train->parsed()) return cmd_train(args, g, train_data, train_cfg, train_out, out);
    if (stats->parsed()) return cmd_stats(args, g, stats_data, multiplier, one_sided, stats_out, out);
    if (attack->parsed()) return cmd_attack(args, g, attack_opts, out, err);
    if (eval->parsed()) return cmd_eval(args, g, eval_opts, out, err);
    if (noise->parsed()) return cmd_noise_eval(args, g, noise_opts, radius_factor, out, err);
    if (replay->parsed()) return cmd_replay(manifest_path, replay_out, out, err);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), 2);
  } catch (const MissingFile& e) {
    return fail("missing_file", e.what(), 1);
  } catch (const SchemaError& e) {
    return fail("schema_mismatch", e.what(), 1);
  } catch (const HorizonMismatch& e) {
    return fail("horizon_mismatch", e.what(), 1);
  } catch (const ParseError& e) {
    return fail("parse_error", e.what(), 1);
  } catch (const std::exception& e) {
    return fail("runtime_error", e.what(), 1);
  }
  return fail("usage", "no command given", 2);
}

}  // namespace trajattack::cli
