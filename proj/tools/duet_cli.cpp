// duet: fit, predict, cv, tune and bench subcommands.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "duet/duet.hpp"

namespace fs = std::filesystem;
using namespace duet;

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Raised for problems in what the user asked for, as opposed to failures
// while computing it.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + g17(v[i]);
  return s;
}

struct Options {
  std::string manifest;
  std::vector<std::string> methods;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::vector<double> betas;
  std::vector<double> gammas;
  std::string params;
  std::size_t folds = 5;
  std::size_t rounds = 3;
  std::uint64_t seed = 42;
  long k_ndcg = 100;
  std::string out = "duet-out";
  bool deterministic = false;
  unsigned threads = 0;
  std::string grid_file;
  double mix_alpha = 0.5;
  std::string score_mode;
  // predict
  std::string model;
  std::size_t top_k = 10;
  // tune
  bool resume = false;
  bool nested = false;
  std::size_t inner_folds = 3;
  std::size_t inner_rounds = 1;
  // bench
  std::size_t users = 1482;
  std::size_t items = 1408;
  double density = 9881.0 / (1482.0 * 1408.0);
  std::vector<std::size_t> sweep{200, 400, 800, 1600};
  bool no_sweep = false;
};

// Resolved settings shared by every command; echoed to config.txt.
class Run {
 public:
  Run(std::string command, const Options& o) : command_(std::move(command)), o_(o) {
    threads_ = o.deterministic ? 1u
               : o.threads     ? o.threads
                               : std::max(1u, std::thread::hardware_concurrency());
    std::error_code ec;
    fs::create_directories(o.out, ec);
    if (ec) throw UsageError("cannot create output directory " + o.out + ": " + ec.message());
    log_.open(fs::path(o.out) / "run.log", std::ios::trunc);
    if (!log_) throw UsageError("cannot write to output directory " + o.out);
    set("command", command_);
    set("version", kVersion);
    set("out", o.out);
    set("deterministic", o.deterministic ? "true" : "false");
    set("threads", std::to_string(threads_));
  }

  unsigned threads() const { return threads_; }
  const Options& options() const { return o_; }
  fs::path path(const std::string& name) const { return fs::path(o_.out) / name; }

  void set(const std::string& key, const std::string& value) { config_.emplace_back(key, value); }

  void write_config() const {
    std::ofstream out(path("config.txt"), std::ios::trunc);
    for (const auto& [k, v] : config_) out << k << " = " << v << '\n';
  }

  void log(const std::string& line) {
    log_ << line << '\n';
    log_.flush();
  }
  void stage(const std::string& name, double seconds) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", seconds);
    log("stage " + name + " " + buf + " s");
  }

 private:
  std::string command_;
  const Options& o_;
  unsigned threads_ = 1;
  std::vector<std::pair<std::string, std::string>> config_;
  std::ofstream log_;
};

void warn(std::string_view m) { std::cerr << "warning: " << m << '\n'; }

Dataset load(Run& run) {
  const auto& o = run.options();
  if (o.manifest.empty()) throw UsageError("--manifest is required");
  if (!fs::exists(o.manifest)) throw UsageError("manifest not found: " + o.manifest);
  const auto t0 = Clock::now();
  Dataset d;
  try {
    d = load_dataset(load_manifest(o.manifest), warn);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  run.stage("load", since(t0));
  run.set("manifest", o.manifest);
  run.log("dimensions users=" + std::to_string(d.x.n_users()) +
          " items=" + std::to_string(d.x.n_items()) + " positives=" + std::to_string(d.x.nnz()) +
          " item_sides=" + std::to_string(d.item_sides.size()) +
          " user_sides=" + std::to_string(d.user_sides.size()));
  return d;
}

// Side weights come from --beta/--gamma, else the manifest's per-side
// weight, else 1.
std::vector<double> side_weights(const std::vector<double>& flags,
                                 const std::vector<SideEntry>& entries, const char* flag) {
  if (!flags.empty()) {
    if (flags.size() != entries.size()) {
      throw UsageError(std::string("--") + flag + " given " + std::to_string(flags.size()) +
                       " times for " + std::to_string(entries.size()) + " side matrices");
    }
    return flags;
  }
  std::vector<double> w;
  for (const auto& e : entries) w.push_back(e.weight.value_or(1.0));
  return w;
}

Hyperparams resolve_hyperparams(Run& run, const Dataset& d, std::optional<Method>* method_out) {
  const auto& o = run.options();
  Hyperparams hp;
  if (!o.params.empty()) {
    try {
      const ParamsFile pf = read_params(o.params);
      hp = pf.hyperparams;
      if (method_out && pf.method && o.methods.empty()) *method_out = pf.method;
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    run.set("params", o.params);
  } else {
    hp.betas = side_weights(o.betas, d.manifest.item_sides, "beta");
    hp.gammas = side_weights(o.gammas, d.manifest.user_sides, "gamma");
  }
  if (o.lambda1) hp.lambda1 = *o.lambda1;
  if (o.lambda2) hp.lambda2 = *o.lambda2;
  if (o.lambda1 && !o.lambda2) hp.lambda2 = hp.lambda1;
  if (o.lambda2 && !o.lambda1) hp.lambda1 = hp.lambda2;
  hp.tie_lambdas = hp.lambda1 == hp.lambda2;
  if (!o.params.empty() && !o.betas.empty()) hp.betas = side_weights(o.betas, d.manifest.item_sides, "beta");
  if (!o.params.empty() && !o.gammas.empty()) hp.gammas = side_weights(o.gammas, d.manifest.user_sides, "gamma");
  try {
    hp.validate(d.item_sides.size(), d.user_sides.size());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  run.set("lambda1", g17(hp.lambda1));
  run.set("lambda2", g17(hp.lambda2));
  run.set("betas", join(hp.betas));
  run.set("gammas", join(hp.gammas));
  return hp;
}

Method parse_method_flag(const std::string& name) {
  try {
    return parse_method(name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::vector<Method> resolve_methods(Run& run, std::optional<Method> fallback) {
  std::vector<Method> methods;
  for (const auto& m : run.options().methods) methods.push_back(parse_method_flag(m));
  if (methods.empty()) methods.push_back(fallback.value_or(Method::kDuet));
  std::string names;
  for (Method m : methods) names += (names.empty() ? "" : ",") + std::string(to_string(m));
  run.set("method", names);
  return methods;
}

void check_sides_used(Method method, const Dataset& d) {
  if (!uses_side_information(method) && (!d.item_sides.empty() || !d.user_sides.empty())) {
    warn(std::string("method ") + std::string(to_string(method)) +
         " ignores the side matrices listed in the manifest");
  }
}

FoldPlan resolve_plan(Run& run, const InteractionMatrix& x) {
  const auto& o = run.options();
  run.set("folds", std::to_string(o.folds));
  run.set("rounds", std::to_string(o.rounds));
  run.set("seed", std::to_string(o.seed));
  return make_folds(x, o.folds, o.rounds, o.seed);
}

CvOptions resolve_cv_options(Run& run) {
  const auto& o = run.options();
  if (o.k_ndcg <= 0) throw UsageError("--k-ndcg must be positive");
  if (!(o.mix_alpha >= 0.0 && o.mix_alpha <= 1.0)) throw UsageError("--mix-alpha must lie in [0, 1]");
  run.set("k_ndcg", std::to_string(o.k_ndcg));
  run.set("mix_alpha", g17(o.mix_alpha));
  CvOptions cv;
  cv.k_ndcg = o.k_ndcg;
  cv.mix_alpha = o.mix_alpha;
  cv.threads = run.threads();
  return cv;
}

void log_timings(Run& run, const FitTimings& t) {
  run.stage("gram", t.gram_seconds);
  run.stage("factorize", t.factorize_seconds);
  run.stage("assemble", t.assemble_seconds);
}

int cmd_fit(Run& run) {
  const Dataset d = load(run);
  std::optional<Method> from_params;
  const Hyperparams hp = resolve_hyperparams(run, d, &from_params);
  const Method method = resolve_methods(run, from_params).front();
  check_sides_used(method, d);
  run.write_config();

  FitTimings t;
  FitOptions fo;
  fo.threads = run.threads();
  const WeightModel model = fit_method(d.x, d.item_sides, d.user_sides, hp, method, fo, &t);
  log_timings(run, t);
  const auto t0 = Clock::now();
  save_model(model, run.path("model.duet"));
  run.stage("save", since(t0));
  std::cout << "model written to " << run.path("model.duet").string() << '\n';
  return kExitOk;
}

int cmd_predict(Run& run) {
  const auto& o = run.options();
  if (o.model.empty()) throw UsageError("--model is required");
  if (!fs::exists(o.model)) throw UsageError("model not found: " + o.model);
  if (o.top_k == 0) throw UsageError("--top-k must be positive");
  const Dataset d = load(run);
  const WeightModel model = load_model(o.model);
  if ((model.item_weights() && model.item_weights()->rows() != d.x.n_items()) ||
      (model.user_weights() && model.user_weights()->rows() != d.x.n_users())) {
    throw Error(ErrorCode::kDimensionMismatch, "model dimensions do not match the dataset");
  }
  if (model.fingerprint() != training_fingerprint(d.x, d.item_sides, d.user_sides) &&
      model.fingerprint() != training_fingerprint(d.x, {}, {})) {
    warn("model was trained on different data than this manifest describes");
  }
  ScoreMode mode = model.item_weights() && model.user_weights() ? ScoreMode::kAveraged
                   : model.item_weights()                       ? ScoreMode::kItemOnly
                                                                : ScoreMode::kUserOnly;
  if (!o.score_mode.empty()) {
    try {
      mode = parse_score_mode(o.score_mode);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  run.set("model", o.model);
  run.set("score_mode", std::string(to_string(mode)));
  run.set("mix_alpha", g17(o.mix_alpha));
  run.set("top_k", std::to_string(o.top_k));
  run.write_config();

  const auto t0 = Clock::now();
  const ScoreMatrix s = predict(d.x, model, mode, o.mix_alpha);
  run.stage("predict", since(t0));

  // Per user, the top-k unobserved items by score (ties by item index).
  std::ofstream out(run.path("predictions.tsv"), std::ios::trunc);
  out << "user\titem\tscore\trank\n";
  std::vector<std::uint32_t> order(d.x.n_items());
  for (std::size_t u = 0; u < d.x.n_users(); ++u) {
    order.clear();
    for (std::uint32_t i = 0; i < d.x.n_items(); ++i) {
      if (!d.x.contains(u, i)) order.push_back(i);
    }
    const std::size_t k = std::min(o.top_k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                        const double sa = s.scores(u, a), sb = s.scores(u, b);
                        return sa != sb ? sa > sb : a < b;
                      });
    for (std::size_t r = 0; r < k; ++r) {
      out << d.x.user_labels()[u] << '\t' << d.x.item_labels()[order[r]] << '\t'
          << g17(s.scores(u, order[r])) << '\t' << r + 1 << '\n';
    }
  }
  std::cout << "predictions written to " << run.path("predictions.tsv").string() << '\n';
  return kExitOk;
}

int cmd_cv(Run& run) {
  const Dataset d = load(run);
  std::optional<Method> from_params;
  const Hyperparams hp = resolve_hyperparams(run, d, &from_params);
  const auto methods = resolve_methods(run, from_params);
  const CvOptions cv = resolve_cv_options(run);
  const FoldPlan plan = resolve_plan(run, d.x);
  run.write_config();

  std::vector<MetricReport> reports;
  for (Method m : methods) {
    check_sides_used(m, d);
    const auto t0 = Clock::now();
    reports.push_back(run_cv(d.x, d.item_sides, d.user_sides, hp, plan, m, cv));
    run.stage("cv_" + std::string(to_string(m)), since(t0));
  }
  {
    std::ofstream csv(run.path("cv.csv"), std::ios::trunc);
    write_report_csv(csv, reports);
  }
  std::ostringstream summary;
  summary << format_summary_table(reports);
  for (std::size_t a = 0; a < reports.size(); ++a) {
    for (std::size_t b = a + 1; b < reports.size(); ++b) {
      for (Metric metric : {Metric::kAupr, Metric::kNdcg, Metric::kPrec50, Metric::kPrec100}) {
        summary << "welch_t_test " << to_string(metric) << ' ' << reports[a].method << " vs "
                << reports[b].method << ": ";
        try {
          const auto t = welch_t_test(reports[a].samples(metric), reports[b].samples(metric));
          char buf[96];
          std::snprintf(buf, sizeof buf, "t = %.4f, df = %.2f, p = %.4g", t.t, t.df, t.p);
          summary << buf << '\n';
        } catch (const Error& e) {
          summary << "undefined (" << e.what() << ")\n";
        }
      }
    }
  }
  std::ofstream(run.path("summary.txt"), std::ios::trunc) << summary.str();
  std::cout << summary.str();
  return kExitOk;
}

int cmd_tune(Run& run) {
  const auto& o = run.options();
  const Dataset d = load(run);
  const auto methods = resolve_methods(run, std::nullopt);
  if (methods.size() != 1) throw UsageError("tune takes a single --method");
  const Method method = methods.front();
  GridSpec grid;
  if (!o.grid_file.empty()) {
    std::ifstream in(o.grid_file);
    if (!in) throw UsageError("grid file not found: " + o.grid_file);
    try {
      grid = parse_grid(in);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    run.set("grid_file", o.grid_file);
  }
  run.set("grid.lambda", join(grid.lambda_values));
  run.set("grid.beta", join(grid.beta_values));
  run.set("grid.gamma", join(grid.gamma_values));
  run.set("grid.objective", std::string(to_string(grid.objective)));
  run.set("grid.tie_lambdas", grid.tie_lambdas ? "true" : "false");
  run.set("nested", o.nested ? "true" : "false");
  const CvOptions cv = resolve_cv_options(run);
  const FoldPlan plan = resolve_plan(run, d.x);
  run.write_config();
  const std::size_t ni = d.item_sides.size(), nu = d.user_sides.size();

  if (o.nested) {
    run.set("inner_folds", std::to_string(o.inner_folds));
    run.set("inner_rounds", std::to_string(o.inner_rounds));
    run.write_config();
    const auto t0 = Clock::now();
    const auto r = nested_cv(d.x, d.item_sides, d.user_sides, grid, plan, o.inner_folds,
                             o.inner_rounds, method, cv);
    run.stage("nested_cv", since(t0));
    std::ofstream csv(run.path("nested_cv.csv"), std::ios::trunc);
    write_report_csv(csv, std::vector{r.report});
    std::ofstream chosen(run.path("nested_choices.csv"), std::ios::trunc);
    write_audit_header(chosen, ni, nu);
    for (const auto& p : r.chosen) write_audit_row(chosen, {p, 0, 0, std::nullopt}, ni, nu);
    std::cout << format_summary_table(std::vector{r.report});
    return kExitOk;
  }

  const fs::path audit_path = run.path("audit.csv");
  std::vector<GridResult> done;
  if (o.resume && fs::exists(audit_path)) {
    std::ifstream in(audit_path);
    done = read_audit(in);
    run.log("resume " + std::to_string(done.size()) + " completed grid points");
  }
  // Rewrite the audit from the resumed rows so a truncated tail is dropped.
  std::ofstream audit(audit_path, std::ios::trunc);
  write_audit_header(audit, ni, nu);
  for (const auto& r : done) write_audit_row(audit, r, ni, nu);
  audit.flush();

  const auto t0 = Clock::now();
  const auto result = grid_search(d.x, d.item_sides, d.user_sides, grid, plan, method, cv, done,
                                  [&](const GridResult& r) {
                                    write_audit_row(audit, r, ni, nu);
                                    audit.flush();
                                  });
  run.stage("grid_search", since(t0));
  run.log("fits_executed " + std::to_string(result.fits_executed));
  {
    std::ofstream best(run.path("best_params.txt"), std::ios::trunc);
    write_params(best, result.best, method);
  }
  const GridResult* best_row = nullptr;
  for (const auto& r : result.table) {
    if (r.point == result.best_point) best_row = &r;
  }
  std::printf("best lambda1=%s lambda2=%s beta=%s gamma=%s %s=%.6f\n",
              g17(result.best_point.lambda1).c_str(), g17(result.best_point.lambda2).c_str(),
              g17(result.best_point.beta).c_str(), g17(result.best_point.gamma).c_str(),
              std::string(to_string(grid.objective)).c_str(), best_row ? best_row->objective_mean : 0.0);
  std::printf("fits executed: %zu\n", result.fits_executed);
  return kExitOk;
}

int cmd_bench(Run& run) {
  const auto& o = run.options();
  if (o.users == 0 || o.items == 0) throw UsageError("bench dimensions must be positive");
  if (!(o.density > 0.0 && o.density <= 1.0)) throw UsageError("--density must lie in (0, 1]");
  for (std::size_t n : o.sweep) {
    if (n == 0) throw UsageError("sweep sizes must be positive");
  }
  run.set("seed", std::to_string(o.seed));

  struct Case {
    std::string label;
    InteractionMatrix x;
    std::vector<SideMatrix> items, users;
  };
  auto synth = [&](std::size_t users, std::size_t items) {
    PlantedBlocksSpec spec;
    spec.n_users = users;
    spec.n_items = items;
    spec.density = o.density;
    spec.seed = o.seed;
    auto data = make_planted_blocks(spec);
    Case c{"synthetic", data.x, {}, {}};
    c.items.push_back(validate_side_matrix(data.item_similarity.values, SideRole::kItemSide,
                                           data.x.n_items(), data.x.n_users()));
    c.users.push_back(validate_side_matrix(data.user_similarity.values, SideRole::kUserSide,
                                           data.x.n_items(), data.x.n_users()));
    return c;
  };

  std::vector<Case> cases;
  Hyperparams hp;
  if (!o.manifest.empty()) {
    Dataset d = load(run);
    hp = resolve_hyperparams(run, d, nullptr);
    cases.push_back({"dataset", d.x, d.item_sides, d.user_sides});
  } else {
    run.set("users", std::to_string(o.users));
    run.set("items", std::to_string(o.items));
    run.set("density", g17(o.density));
    hp.lambda1 = o.lambda1.value_or(100.0);
    hp.lambda2 = o.lambda2.value_or(hp.lambda1);
    hp.tie_lambdas = hp.lambda1 == hp.lambda2;
    hp.betas = {o.betas.empty() ? 1.0 : o.betas.front()};
    hp.gammas = {o.gammas.empty() ? 1.0 : o.gammas.front()};
    try {
      hp.validate(1, 1);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    cases.push_back(synth(o.users, o.items));
    run.set("lambda1", g17(hp.lambda1));
    run.set("lambda2", g17(hp.lambda2));
    run.set("betas", join(hp.betas));
    run.set("gammas", join(hp.gammas));
  }
  std::vector<std::size_t> sweep = o.no_sweep ? std::vector<std::size_t>{} : o.sweep;
  std::sort(sweep.begin(), sweep.end());
  std::string sizes;
  for (std::size_t n : sweep) sizes += (sizes.empty() ? "" : ",") + std::to_string(n);
  run.set("sweep", sizes);
  run.write_config();

  std::ofstream csv(run.path("bench.csv"), std::ios::trunc);
  csv << "case,n_users,n_items,nnz,gram_seconds,factorize_seconds,assemble_seconds,total_seconds\n";
  auto time_case = [&](const Case& c, const Hyperparams& h) {
    FitTimings t;
    FitOptions fo;
    fo.threads = run.threads();
    const auto t0 = Clock::now();
    fit_duet(c.x, c.items, c.users, h, fo, &t);
    const double wall = since(t0);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%.6f,%.6f,%.6f,%.6f\n", c.label.c_str(),
                  c.x.n_users(), c.x.n_items(), c.x.nnz(), t.gram_seconds, t.factorize_seconds,
                  t.assemble_seconds, wall);
    csv << buf;
    csv.flush();
    run.log(std::string("bench ") + buf);
    std::printf("%-9s %5zu x %-5zu total %.3f s (gram %.3f, factorize %.3f, assemble %.3f)\n",
                c.label.c_str(), c.x.n_users(), c.x.n_items(), wall, t.gram_seconds,
                t.factorize_seconds, t.assemble_seconds);
  };
  time_case(cases.front(), hp);
  Hyperparams sweep_hp = hp;
  sweep_hp.betas = {sweep_hp.betas.empty() ? 1.0 : sweep_hp.betas.front()};
  sweep_hp.gammas = {sweep_hp.gammas.empty() ? 1.0 : sweep_hp.gammas.front()};
  for (std::size_t n : sweep) {
    Case c = synth(n, n);
    c.label = "sweep";
    time_case(c, sweep_hp);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-regularized shallow autoencoder for sparse matrix completion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--manifest", o.manifest, "Dataset manifest");
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    sub->add_flag("--deterministic", o.deterministic, "Force sequential execution");
    sub->add_option("--threads", o.threads, "Worker threads (default: all cores)")
        ->envname("DUET_THREADS")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  };
  auto hyper = [&](CLI::App* sub) {
    sub->add_option("--lambda1", o.lambda1, "Item-side L2 penalty");
    sub->add_option("--lambda2", o.lambda2, "User-side L2 penalty");
    sub->add_option("--beta", o.betas, "Item-side matrix weight (repeatable, manifest order)");
    sub->add_option("--gamma", o.gammas, "User-side matrix weight (repeatable, manifest order)");
    sub->add_option("--params", o.params, "Hyperparameter file written by tune");
  };
  auto evaluation = [&](CLI::App* sub) {
    sub->add_option("--folds", o.folds, "Folds per round")->capture_default_str();
    sub->add_option("--rounds", o.rounds, "CV rounds")->capture_default_str();
    sub->add_option("--k-ndcg", o.k_ndcg, "NDCG cutoff")->capture_default_str();
    sub->add_option("--mix-alpha", o.mix_alpha, "Weight of UX in averaged scores")
        ->capture_default_str();
  };

  auto* fit = app.add_subcommand("fit", "Fit a model and write model.duet");
  common(fit);
  hyper(fit);
  fit->add_option("--method", o.methods, "ease_item | ease_user | ease_dual | duet")
      ->expected(0, 1);

  auto* pred = app.add_subcommand("predict", "Score unobserved cells with a saved model");
  common(pred);
  pred->add_option("--model", o.model, "Model file");
  pred->add_option("--top-k", o.top_k, "Items per user")->capture_default_str();
  pred->add_option("--score-mode", o.score_mode, "item_only | user_only | averaged");
  pred->add_option("--mix-alpha", o.mix_alpha, "Weight of UX in averaged scores")
      ->capture_default_str();

  auto* cv = app.add_subcommand("cv", "Repeated k-fold cross-validation");
  common(cv);
  hyper(cv);
  evaluation(cv);
  cv->add_option("--method", o.methods, "Method (repeat to compare)");

  auto* tune = app.add_subcommand("tune", "Grid search with CV");
  common(tune);
  evaluation(tune);
  tune->add_option("--method", o.methods, "Method to tune")->expected(0, 1);
  tune->add_option("--grid-file", o.grid_file, "Grid definition");
  tune->add_flag("--resume", o.resume, "Skip points already in the output audit.csv");
  tune->add_flag("--nested", o.nested, "Tune inside each outer fold");
  tune->add_option("--inner-folds", o.inner_folds, "Folds of the inner plan")->capture_default_str();
  tune->add_option("--inner-rounds", o.inner_rounds, "Rounds of the inner plan")
      ->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Time DUET fits");
  common(bench);
  hyper(bench);
  bench->add_option("--users", o.users, "Synthetic users")->capture_default_str();
  bench->add_option("--items", o.items, "Synthetic items")->capture_default_str();
  bench->add_option("--density", o.density, "Synthetic density")->capture_default_str();
  bench->add_option("--sweep", o.sweep, "Square sizes for the sweep")->capture_default_str();
  bench->add_flag("--no-sweep", o.no_sweep, "Only time the main case");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    Run run(chosen->get_name(), o);
    if (chosen == fit) return cmd_fit(run);
    if (chosen == pred) return cmd_predict(run);
    if (chosen == cv) return cmd_cv(run);
    if (chosen == tune) return cmd_tune(run);
    return cmd_bench(run);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << chosen->help();
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
