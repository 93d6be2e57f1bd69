// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Training-heavy criteria fan independent runs out over a small
// thread pool; every run owns its output directory.
//
//   grip_acceptance [--work-dir DIR] [--jobs N] [--only name[,name...]]
//
// Criteria:
//   grid-shortcut      constrained-demo grid: shortcut found only by grip
//   maze-improvement   constrained maze: grip at most 0.9x proximity length
//   ooc-behavior       grip exploits out-of-constraint actions, bc does not
//   pretrain-fit       decay-target fit and rank correlation after pretrain
//   interpolation      log-space interpolation identities
//   mask-schedule      annealed mask empirics at {0, H/2, H}
//   gradient-check     analytic vs finite-difference gradients, all shapes
//   telescoping        per-episode reward sums telescope
//   variant-reduction  grip with features off equals proximity exactly
//   reproducibility    snapshot relaunch reproduces metrics.csv bytes
//   masking-ablation   mask schedule never hurts final maze success

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "grip/config.hpp"
#include "grip/confidence.hpp"
#include "grip/csv.hpp"
#include "grip/error.hpp"
#include "grip/evaluate.hpp"
#include "grip/experiments.hpp"
#include "grip/experts.hpp"
#include "grip/grip_loss.hpp"
#include "grip/rollout.hpp"
#include "grip/train.hpp"
#include "grip/variants.hpp"

namespace {

using namespace grip;

constexpr int kSeeds = 4;

struct Context {
  std::filesystem::path work;
  int jobs = 2;
};

void run_parallel(std::vector<std::function<void()>> tasks, int jobs) {
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::mutex error_mutex;
  std::vector<std::string> errors;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          tasks[i]();
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          errors.emplace_back(e.what());
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (!errors.empty()) {
    std::string joined;
    for (const auto& e : errors) joined += e + "; ";
    throw TrainingError("parallel runs failed: " + joined);
  }
}

std::string file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("missing file " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

// ---- experiment configurations (tolerances and budgets pinned here) ----

ExperimentConfig grid_base(const Context& ctx) {
  ExperimentConfig cfg = ExperimentConfig::defaults_for("grid");
  cfg.demos_path = (ctx.work / "demos_grid.jsonl").string();
  cfg.ppo.iterations = 300;       // budget cap from the shortcut criterion
  cfg.ppo.rollout_size = 2048;
  cfg.eval_episodes = 160;
  return cfg;
}

ExperimentConfig maze_base(const Context& ctx) {
  ExperimentConfig cfg = ExperimentConfig::defaults_for("maze");
  cfg.demos_path = (ctx.work / "demos_maze.jsonl").string();
  cfg.proximity.decay = 0.99;     // decay horizon matched to ~230-step demos
  cfg.proximity.epochs_per_iter = 2.0;
  cfg.ppo.iterations = 250;
  cfg.ppo.rollout_size = 2048;
  cfg.eval_episodes = 160;
  return cfg;
}

void ensure_demos(const ExperimentConfig& cfg) {
  if (!std::filesystem::exists(cfg.demos_path)) {
    save_dataset(cfg.demos_path, generate_dataset(cfg.dataset_request()));
  }
}

// Trains (once) and evaluates one variant/seed combination; results are
// cached on disk so criteria can share runs.
EvalReport trained_eval(const ExperimentConfig& base, const std::string& variant,
                        int seed, const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / "eval.csv")) {
    ExperimentConfig cfg = base;
    cfg.variant = variant;
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.out_dir = dir.string();
    if (!std::filesystem::exists(dir / "policy.ckpt")) run_variant(cfg);
    evaluate_run(dir, cfg.eval_episodes, derive_seed(cfg.seed, "acceptance-eval"));
  }
  return read_eval_csv(dir / "eval.csv");
}

struct Criterion {
  std::string name;
  std::function<bool(const Context&, std::string&)> run;
};

// ---- grid-shortcut -----------------------------------------------------

void train_grid_pool(const Context& ctx) {
  ExperimentConfig base = grid_base(ctx);
  ensure_demos(base);
  std::vector<std::function<void()>> tasks;
  for (int seed = 0; seed < kSeeds; ++seed) {
    for (std::string variant : {"grip", "proximity", "bc"}) {
      tasks.push_back([=, &ctx] {
        trained_eval(grid_base(ctx), variant, seed,
                     ctx.work / ("grid_" + variant + "_s" + std::to_string(seed)));
      });
    }
  }
  run_parallel(std::move(tasks), ctx.jobs);
}

bool grid_shortcut(const Context& ctx, std::string& detail) {
  train_grid_pool(ctx);
  int passing = 0;
  std::ostringstream out;
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto dir = [&](const std::string& v) {
      return ctx.work / ("grid_" + v + "_s" + std::to_string(seed));
    };
    EvalReport grip = trained_eval(grid_base(ctx), "grip", seed, dir("grip"));
    EvalReport prox = trained_eval(grid_base(ctx), "proximity", seed, dir("proximity"));
    EvalReport bc = trained_eval(grid_base(ctx), "bc", seed, dir("bc"));
    bool ok = grip.mean_length <= 9.0 && grip.success_rate >= 0.95 &&
              prox.mean_length >= 13.0 && bc.mean_length >= 13.0;
    passing += ok ? 1 : 0;
    out << "seed " << seed << ": grip " << grip.mean_length << "/"
        << grip.success_rate << ", prox " << prox.mean_length << ", bc "
        << bc.mean_length << (ok ? " ok" : " FAIL") << "; ";
  }
  detail = out.str() + std::to_string(passing) + "/4 seeds";
  return passing >= 3;
}

// ---- maze-improvement --------------------------------------------------

void train_maze_pool(const Context& ctx) {
  ExperimentConfig base = maze_base(ctx);
  ensure_demos(base);
  std::vector<std::function<void()>> tasks;
  for (int seed = 0; seed < kSeeds; ++seed) {
    for (std::string variant : {"grip", "proximity"}) {
      tasks.push_back([=, &ctx] {
        trained_eval(maze_base(ctx), variant, seed,
                     ctx.work / ("maze_" + variant + "_s" + std::to_string(seed)));
      });
    }
  }
  run_parallel(std::move(tasks), ctx.jobs);
}

bool maze_improvement(const Context& ctx, std::string& detail) {
  train_maze_pool(ctx);
  int passing = 0;
  std::ostringstream out;
  for (int seed = 0; seed < kSeeds; ++seed) {
    EvalReport grip = trained_eval(
        maze_base(ctx), "grip", seed,
        ctx.work / ("maze_grip_s" + std::to_string(seed)));
    EvalReport prox = trained_eval(
        maze_base(ctx), "proximity", seed,
        ctx.work / ("maze_proximity_s" + std::to_string(seed)));
    bool ok = grip.mean_length <= 0.9 * prox.mean_length &&
              grip.success_rate >= 0.8 && prox.success_rate >= 0.8;
    passing += ok ? 1 : 0;
    out << "seed " << seed << ": grip " << grip.mean_length << "/"
        << grip.success_rate << " vs prox " << prox.mean_length << "/"
        << prox.success_rate << (ok ? " ok" : " FAIL") << "; ";
  }
  detail = out.str() + std::to_string(passing) + "/4 seeds";
  return passing >= 3;
}

// ---- ooc-behavior ------------------------------------------------------

bool ooc_behavior(const Context& ctx, std::string& detail) {
  train_grid_pool(ctx);
  int grip_pass = 0, bc_pass = 0;
  std::ostringstream out;
  for (int seed = 0; seed < kSeeds; ++seed) {
    EvalReport grip = trained_eval(
        grid_base(ctx), "grip", seed,
        ctx.work / ("grid_grip_s" + std::to_string(seed)));
    EvalReport bc = trained_eval(grid_base(ctx), "bc", seed,
                                 ctx.work / ("grid_bc_s" + std::to_string(seed)));
    grip_pass += grip.mean_ooc_ratio >= 0.95 && grip.success_rate >= 0.95 ? 1 : 0;
    bc_pass += bc.mean_ooc_ratio <= 0.05 ? 1 : 0;
    out << "seed " << seed << ": grip ooc " << grip.mean_ooc_ratio << " bc ooc "
        << bc.mean_ooc_ratio << "; ";
  }
  detail = out.str() + "grip " + std::to_string(grip_pass) + "/4, bc " +
           std::to_string(bc_pass) + "/4";
  return grip_pass >= 3 && bc_pass >= 3;
}

// ---- pretrain-fit ------------------------------------------------------

bool pretrain_fit(const Context& ctx, std::string& detail) {
  // Tight fit on the grid demonstration.
  ExperimentConfig gcfg = grid_base(ctx);
  ensure_demos(gcfg);
  DemoDataset grid_demos = load_dataset(gcfg.demos_path);
  ProximityEnsemble ens(256, gcfg.proximity_options(), observation_scale(gcfg.env),
                        derive_seed(11, "ensemble"));
  PretrainOptions opt;
  opt.epochs = gcfg.proximity.pretrain_epochs;
  opt.batch_size = gcfg.proximity.batch_size;
  opt.learning_rate = gcfg.proximity.learning_rate;
  pretrain(ens, grid_demos, opt, derive_seed(11, "pretrain"));
  double mse = 0.0;
  int n = 0;
  for (const Trajectory& traj : grid_demos.trajectories) {
    auto targets = expert_targets(traj, ens.decay());
    for (std::size_t t = 0; t < targets.size(); ++t) {
      double err = ens.mean_predict(traj.states[t]) - targets[t];
      mse += err * err;
      n += 1;
    }
  }
  mse /= n;

  // Rank correlation on held-out maze demonstrations.
  ExperimentConfig mcfg = maze_base(ctx);
  ensure_demos(mcfg);
  DemoDataset maze_demos = load_dataset(mcfg.demos_path);
  DemoDataset train_split = maze_demos;
  train_split.trajectories.assign(maze_demos.trajectories.begin(),
                                  maze_demos.trajectories.end() - 10);
  ProximityEnsemble mens(6, mcfg.proximity_options(), observation_scale(mcfg.env),
                         derive_seed(12, "ensemble"));
  PretrainOptions mopt;
  mopt.epochs = mcfg.proximity.pretrain_epochs;
  mopt.batch_size = mcfg.proximity.batch_size;
  mopt.learning_rate = mcfg.proximity.learning_rate;
  pretrain(mens, train_split, mopt, derive_seed(12, "pretrain"));
  std::vector<double> preds, targets;
  for (std::size_t k = maze_demos.trajectories.size() - 10;
       k < maze_demos.trajectories.size(); ++k) {
    const Trajectory& traj = maze_demos.trajectories[k];
    auto t = expert_targets(traj, mens.decay());
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      preds.push_back(mens.mean_predict(traj.states[i]));
      targets.push_back(t[i]);
    }
  }
  // Spearman rank correlation.
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> out(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      double rank = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k2 = i; k2 <= j; ++k2) out[order[k2]] = rank;
      i = j + 1;
    }
    return out;
  };
  std::vector<double> ra = ranks(preds), rb = ranks(targets);
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= static_cast<double>(ra.size());
  mb /= static_cast<double>(rb.size());
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  double spearman = cov / std::sqrt(va * vb);

  std::ostringstream out;
  out << "grid mse " << mse << " (< 1e-3), maze spearman " << spearman
      << " (> 0.9)";
  detail = out.str();
  return mse < 1e-3 && spearman > 0.9;
}

// ---- interpolation -----------------------------------------------------

bool interpolation_unit(const Context&, std::string& detail) {
  bool ok = true;
  ok &= std::abs(interpolate_target(3.0, 3.0, 4, 10, 0.9) - 0.729) < 1e-9;
  ok &= std::abs(interpolate_target(10.0, 0.0, 5, 10, 0.95) -
                 0.7737809374999999) < 1e-9;
  ok &= std::abs(interpolate_target(10.0, 0.0, 5, 10, 0.95) -
                 std::pow(0.95, 5.0)) < 1e-12;
  // Constant-endpoint identity, exact across every interior index.
  for (int t = 1; t < 10; ++t) {
    ok &= interpolate_target(3.0, 3.0, t, 10, 0.9) == std::pow(0.9, 3.0);
  }
  // Endpoint limits: the grid of local indices converges to the anchors.
  ok &= interpolate_target(7.0, 2.0, 1, 1000000, 0.95) ==
        std::pow(0.95, 7.0 + (2.0 - 7.0) * 1e-6);
  detail = ok ? "all identities hold" : "identity violated";
  return ok;
}

// ---- mask-schedule -----------------------------------------------------

bool mask_schedule(const Context&, std::string& detail) {
  ProximityEnsemble::Options opt;
  opt.members = 1;
  opt.hidden = {4};
  ProximityEnsemble ens(2, opt, {}, 1);
  std::vector<double> state{0.0, 0.0};
  const int horizon = 300;
  const int draws = 20000;
  bool ok = true;
  std::ostringstream out;
  for (int iteration : {0, horizon / 2, horizon}) {
    double p = mask_probability(iteration, horizon);
    Rng mask_rng(derive_seed(7, "acceptance-mask", iteration));
    std::vector<ConfidentTerm> term{{state, 0.5, true}};
    int masked = 0;
    for (int i = 0; i < draws; ++i) {
      masked += grip_loss(ens, {}, {}, term, {}, p, mask_rng, nullptr, nullptr).masked;
    }
    double fraction = static_cast<double>(masked) / draws;
    double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / draws);
    bool within = std::abs(fraction - p) <= 3.0 * sigma + 1e-9;
    ok &= within;
    out << "iter " << iteration << ": " << fraction << " vs " << p << "; ";
  }
  detail = out.str();
  return ok;
}

// ---- gradient-check ----------------------------------------------------

bool gradient_check(const Context&, std::string& detail) {
  struct Shape {
    nn::MlpSpec spec;
    const char* name;
  };
  std::vector<Shape> shapes{
      {{256, {64, 64}, 8, nn::Activation::kRelu, 0.0, nn::OutputSquash::kNone},
       "grid actor"},
      {{256, {64, 64}, 1, nn::Activation::kRelu, 0.0, nn::OutputSquash::kNone},
       "grid critic"},
      {{6, {64, 64}, 2, nn::Activation::kTanh, 0.0, nn::OutputSquash::kNone},
       "maze actor"},
      {{6, {64, 64}, 1, nn::Activation::kTanh, 0.0, nn::OutputSquash::kNone},
       "maze critic"},
      {{256, {64, 64, 64}, 1, nn::Activation::kRelu, 0.0,
        nn::OutputSquash::kSigmoid},
       "grid progress"},
      {{6, {64, 64, 64}, 1, nn::Activation::kTanh, 0.0,
        nn::OutputSquash::kSigmoid},
       "maze progress"},
  };
  double worst = 0.0;
  std::string worst_name;
  for (const Shape& shape : shapes) {
    Rng rng(derive_seed(3, "acceptance-grad", static_cast<std::uint64_t>(
                                                  shape.spec.input_dim)));
    auto params = nn::init_params(shape.spec, rng);
    std::vector<double> x(static_cast<std::size_t>(shape.spec.input_dim));
    for (double& v : x) v = uniform(rng, -1.0, 1.0);
    std::vector<double> upstream(static_cast<std::size_t>(shape.spec.output_dim));
    for (double& v : upstream) v = uniform(rng, -1.0, 1.0);
    nn::ForwardTrace trace;
    nn::forward(shape.spec, params, x, false, nullptr, &trace);
    std::vector<double> grad(shape.spec.param_count(), 0.0);
    nn::backward(shape.spec, params, trace, upstream, grad);
    // Central differences on a deterministic subsample of parameters (the
    // full 20k-parameter sweep would be minutes; 600 coordinates per shape
    // cover every layer).
    double h = 1e-5;
    std::size_t stride = std::max<std::size_t>(1, params.size() / 600);
    for (std::size_t i = 0; i < params.size(); i += stride) {
      double keep = params[i];
      params[i] = keep + h;
      auto hi = nn::forward(shape.spec, params, x, false, nullptr);
      params[i] = keep - h;
      auto lo = nn::forward(shape.spec, params, x, false, nullptr);
      params[i] = keep;
      double fd = 0.0;
      for (std::size_t o = 0; o < upstream.size(); ++o) {
        fd += upstream[o] * (hi[o] - lo[o]);
      }
      fd /= 2.0 * h;
      double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-6});
      double err = std::abs(fd - grad[i]) / denom;
      if (err > worst) {
        worst = err;
        worst_name = shape.name;
      }
    }
  }
  std::ostringstream out;
  out << "max relative error " << worst << " (" << worst_name << ", < 1e-4)";
  detail = out.str();
  return worst < 1e-4;
}

// ---- telescoping -------------------------------------------------------

bool telescoping(const Context& ctx, std::string& detail) {
  double worst = 0.0;
  for (const std::string& env_id : {std::string("grid"), std::string("maze")}) {
    ExperimentConfig cfg = env_id == "grid" ? grid_base(ctx) : maze_base(ctx);
    ProximityEnsemble ens(env_id == "grid" ? 256 : 6, cfg.proximity_options(),
                          observation_scale(cfg.env), derive_seed(5, "ens"));
    Policy policy(env_id == "grid" ? 256 : 6, cfg.action_spec(),
                  cfg.policy_options(), observation_scale(cfg.env),
                  derive_seed(5, "policy"));
    auto workers = make_workers(cfg.env, 1, derive_seed(5, "envs"));
    RolloutBuffer buffer = collect_rollouts(policy, ens, workers, 4096, 5, 0);
    for (const RolloutEpisode& episode : buffer.episodes) {
      double sum = 0.0;
      for (double r : episode.rewards) sum += r;
      double direct = ens.mean_predict(episode.states.back()) -
                      ens.mean_predict(episode.states.front());
      worst = std::max(worst, std::abs(sum - direct));
    }
  }
  std::ostringstream out;
  out << "max telescoping defect " << worst << " (< 1e-9)";
  detail = out.str();
  return worst < 1e-9;
}

// ---- variant-reduction -------------------------------------------------

bool variant_reduction(const Context& ctx, std::string& detail) {
  ExperimentConfig base = grid_base(ctx);
  ensure_demos(base);
  base.ppo.iterations = 10;
  base.ppo.rollout_size = 512;
  base.proximity.pretrain_epochs = 50;
  base.seed = 31;

  ExperimentConfig prox = base;
  prox.variant = "proximity";
  prox.out_dir = (ctx.work / "reduction_proximity").string();
  train(prox);

  ExperimentConfig reduced = base;
  reduced.variant = "grip";
  reduced.confidence.enabled = 0;
  reduced.proximity.train_dropout = 0;
  reduced.out_dir = (ctx.work / "reduction_grip").string();
  train(reduced);

  CsvTable a = read_csv(std::filesystem::path(prox.out_dir) / "metrics.csv");
  CsvTable b = read_csv(std::filesystem::path(reduced.out_dir) / "metrics.csv");
  bool ok = a.rows.size() == b.rows.size();
  for (const char* col :
       {"proximity_loss_e", "proximity_loss_conf", "proximity_loss_unconf"}) {
    int idx = a.column(col);
    for (std::size_t r = 0; ok && r < a.rows.size(); ++r) {
      ok &= a.rows[r][static_cast<std::size_t>(idx)] ==
            b.rows[r][static_cast<std::size_t>(idx)];
    }
  }
  detail = ok ? "loss columns identical over 10 iterations"
              : "loss columns diverge";
  return ok;
}

// ---- reproducibility ---------------------------------------------------

bool reproducibility(const Context& ctx, std::string& detail) {
  ExperimentConfig cfg = grid_base(ctx);
  ensure_demos(cfg);
  cfg.variant = "grip";
  cfg.ppo.iterations = 5;
  cfg.ppo.rollout_size = 512;
  cfg.proximity.pretrain_epochs = 50;
  cfg.seed = 17;
  cfg.out_dir = (ctx.work / "repro_a").string();
  train(cfg);

  ExperimentConfig relaunch = ExperimentConfig::load(
      std::filesystem::path(cfg.out_dir) / "config.snapshot.json");
  relaunch.out_dir = (ctx.work / "repro_b").string();
  train(relaunch);

  bool ok = file_bytes(ctx.work / "repro_a" / "metrics.csv") ==
            file_bytes(ctx.work / "repro_b" / "metrics.csv");
  detail = ok ? "metrics.csv byte-identical" : "metrics.csv differs";
  return ok;
}

// ---- masking-ablation --------------------------------------------------

bool masking_ablation_criterion(const Context& ctx, std::string& detail) {
  train_maze_pool(ctx);  // masked arm: the maze grip runs
  ExperimentConfig base = maze_base(ctx);
  std::vector<std::function<void()>> tasks;
  for (int seed = 0; seed < kSeeds; ++seed) {
    tasks.push_back([=, &ctx] {
      ExperimentConfig cfg = maze_base(ctx);
      cfg.confidence.mask_override = 0.0;  // interpolation always trusted
      trained_eval(cfg, "grip", seed,
                   ctx.work / ("maze_unmasked_s" + std::to_string(seed)));
    });
  }
  run_parallel(std::move(tasks), ctx.jobs);

  int passing = 0;
  std::ostringstream out;
  for (int seed = 0; seed < kSeeds; ++seed) {
    EvalReport masked = trained_eval(
        maze_base(ctx), "grip", seed,
        ctx.work / ("maze_grip_s" + std::to_string(seed)));
    ExperimentConfig ucfg = maze_base(ctx);
    ucfg.confidence.mask_override = 0.0;
    EvalReport unmasked = trained_eval(
        ucfg, "grip", seed, ctx.work / ("maze_unmasked_s" + std::to_string(seed)));
    bool ok = masked.success_rate >= unmasked.success_rate;
    passing += ok ? 1 : 0;
    out << "seed " << seed << ": masked " << masked.success_rate
        << " vs unmasked " << unmasked.success_rate << (ok ? " ok" : " FAIL")
        << "; ";
  }
  detail = out.str() + std::to_string(passing) + "/4 seeds";
  return passing >= 3;
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  ctx.work = std::filesystem::temp_directory_path() / "grip_acceptance";
  std::string only;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--work-dir" && i + 1 < argc) ctx.work = argv[++i];
    else if (arg == "--jobs" && i + 1 < argc) ctx.jobs = std::stoi(argv[++i]);
    else if (arg == "--only" && i + 1 < argc) only = argv[++i];
    else {
      std::cerr << "unknown argument: " << arg << "\n";
      return 2;
    }
  }
  std::filesystem::create_directories(ctx.work);

  std::vector<Criterion> criteria{
      {"gradient-check", gradient_check},
      {"interpolation", interpolation_unit},
      {"mask-schedule", mask_schedule},
      {"telescoping", telescoping},
      {"pretrain-fit", pretrain_fit},
      {"variant-reduction", variant_reduction},
      {"reproducibility", reproducibility},
      {"grid-shortcut", grid_shortcut},
      {"ooc-behavior", ooc_behavior},
      {"maze-improvement", maze_improvement},
      {"masking-ablation", masking_ablation_criterion},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    if (!only.empty() && only.find(criterion.name) == std::string::npos) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(ctx, detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%-18s %s  (%s)\n", criterion.name.c_str(),
                ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
