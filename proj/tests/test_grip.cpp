#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "grip/confidence.hpp"
#include "grip/error.hpp"
#include "grip/grip_loss.hpp"
#include "test_util.hpp"

using namespace grip;

TEST_SUITE_BEGIN("grip");

namespace {

ProximityEnsemble small_ensemble(int obs_dim, int members, std::uint64_t seed,
                                 double dropout = 0.0) {
  ProximityEnsemble::Options opt;
  opt.members = members;
  opt.hidden = {8, 8};
  opt.dropout_rate = dropout;
  opt.activation = nn::Activation::kTanh;
  return ProximityEnsemble(obs_dim, opt, {}, seed);
}

ProximityEnsemble constant_ensemble(const std::vector<double>& outputs) {
  ProximityEnsemble ens = small_ensemble(2, static_cast<int>(outputs.size()), 1);
  const nn::MlpSpec& spec = ens.member_spec();
  for (int k = 0; k < ens.members(); ++k) {
    auto& params = ens.mutable_member_params(k);
    std::fill(params.begin(), params.end(), 0.0);
    double y = outputs[static_cast<std::size_t>(k)];
    params[spec.bias_offset(spec.layer_count() - 1)] = std::log(y / (1.0 - y));
  }
  return ens;
}

ConfidenceConfig ensemble_cfg() {
  ConfidenceConfig cfg;
  cfg.enabled = true;
  cfg.mode = ConfidenceMode::kEnsemble;
  return cfg;
}

}  // namespace

TEST_CASE("equal member outputs have zero variance") {
  ProximityEnsemble ens = constant_ensemble({0.4, 0.4, 0.4});
  CHECK(estimate_variance(ens, std::vector<double>{0.0, 0.0}, ensemble_cfg(),
                          nullptr) == doctest::Approx(0.0).epsilon(1e-18));
}

TEST_CASE("members at 0 and 1 have population variance 0.25") {
  // Outputs cannot be exactly 0/1 through a sigmoid; drive them to within
  // double precision of the extremes with huge biases.
  ProximityEnsemble ens = small_ensemble(2, 2, 1);
  const nn::MlpSpec& spec = ens.member_spec();
  for (int k = 0; k < 2; ++k) {
    auto& params = ens.mutable_member_params(k);
    std::fill(params.begin(), params.end(), 0.0);
    params[spec.bias_offset(spec.layer_count() - 1)] = k == 0 ? -60.0 : 60.0;
  }
  CHECK(estimate_variance(ens, std::vector<double>{0.0, 0.0}, ensemble_cfg(),
                          nullptr) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("variance is invariant to member ordering") {
  ProximityEnsemble a = constant_ensemble({0.2, 0.5, 0.9});
  ProximityEnsemble b = constant_ensemble({0.9, 0.2, 0.5});
  std::vector<double> s{0.0, 0.0};
  CHECK(estimate_variance(a, s, ensemble_cfg(), nullptr) ==
        doctest::Approx(estimate_variance(b, s, ensemble_cfg(), nullptr))
            .epsilon(1e-15));
}

TEST_CASE("mc-dropout variance uses stochastic passes of member zero") {
  ProximityEnsemble ens = small_ensemble(2, 1, 5, 0.5);
  ConfidenceConfig cfg;
  cfg.mode = ConfidenceMode::kMcDropout;
  cfg.mcd_passes = 16;
  Rng rng(3);
  double var = estimate_variance(ens, std::vector<double>{0.4, -0.2}, cfg, &rng);
  CHECK(var >= 0.0);
  // Dropout-on passes differ, so the variance is almost surely positive.
  CHECK(var > 0.0);
}

TEST_CASE("nearest-rank percentile: 95 of 1..100 is 95, 100 is the max") {
  std::vector<double> values;
  for (int i = 1; i <= 100; ++i) values.push_back(i);
  CHECK(nearest_rank_percentile(values, 95.0) == 95.0);
  CHECK(nearest_rank_percentile(values, 100.0) == 100.0);
  CHECK(nearest_rank_percentile({7.0}, 50.0) == 7.0);
}

TEST_CASE("threshold of identical expert variances is zero") {
  ProximityEnsemble ens = constant_ensemble({0.4, 0.4});
  std::vector<std::vector<double>> states{{0, 0}, {1, 1}, {2, 2}};
  std::vector<StateView> views(states.begin(), states.end());
  CHECK(expert_threshold(ens, views, ensemble_cfg(), nullptr) ==
        doctest::Approx(0.0).epsilon(1e-18));
}

TEST_CASE("empty expert set is a config error") {
  ProximityEnsemble ens = constant_ensemble({0.4, 0.4});
  std::vector<StateView> none;
  CHECK_THROWS_AS(expert_threshold(ens, none, ensemble_cfg(), nullptr), ConfigError);
}

TEST_CASE("interpolation with equal endpoints is constant") {
  for (int t = 1; t < 10; ++t) {
    CHECK(interpolate_target(3.0, 3.0, t, 10, 0.9) ==
          doctest::Approx(0.729).epsilon(1e-12));
  }
}

TEST_CASE("interpolation midpoint of 10 to 0 at decay 0.95") {
  CHECK(interpolate_target(10.0, 0.0, 5, 10, 0.95) ==
        doctest::Approx(0.77378).epsilon(1e-5));
  CHECK(interpolate_target(10.0, 0.0, 5, 10, 0.95) ==
        doctest::Approx(std::pow(0.95, 5.0)).epsilon(1e-12));
}

TEST_CASE("interpolation approaches the endpoint values") {
  double rho_start = 7.0, rho_end = 2.0, decay = 0.95;
  int t_sub = 1000;
  CHECK(interpolate_target(rho_start, rho_end, 1, t_sub, decay) ==
        doctest::Approx(std::pow(decay, rho_start)).epsilon(1e-3));
  CHECK(interpolate_target(rho_start, rho_end, t_sub - 1, t_sub, decay) ==
        doctest::Approx(std::pow(decay, rho_end)).epsilon(1e-3));
}

TEST_CASE("interpolated targets are monotone toward the goal-side anchor") {
  double prev = 0.0;
  for (int t = 1; t < 12; ++t) {
    double f = interpolate_target(9.0, 1.0, t, 12, 0.95);
    if (t > 1) CHECK(f > prev);
    prev = f;
  }
}

TEST_CASE("interpolation rejects out-of-range arguments") {
  CHECK_THROWS_AS(interpolate_target(1, 2, 0, 5, 0.95), ContractViolation);
  CHECK_THROWS_AS(interpolate_target(1, 2, 5, 5, 0.95), ContractViolation);
  CHECK_THROWS_AS(interpolate_target(1, 2, 1, 5, 1.0), ContractViolation);
  CHECK_THROWS_AS(
      interpolate_target(std::numeric_limits<double>::infinity(), 2, 1, 5, 0.95),
      ContractViolation);
}

TEST_CASE("mask schedule: 1 at the start, half way at H/2, 0 from H on") {
  CHECK(mask_probability(0, 100) == 1.0);
  CHECK(mask_probability(50, 100) == 0.5);
  CHECK(mask_probability(100, 100) == 0.0);
  CHECK(mask_probability(250, 100) == 0.0);
  CHECK(mask_probability(5, 0) == 0.0);  // zero horizon: fully decayed
}

TEST_CASE("empirical masked fraction tracks the schedule within binomial noise") {
  ProximityEnsemble ens = constant_ensemble({0.5});
  std::vector<std::vector<double>> state{{0.0, 0.0}};
  const int horizon = 100;
  const int draws = 20000;
  for (int iteration : {0, 50, 100}) {
    double p = mask_probability(iteration, horizon);
    Rng mask_rng(900 + iteration);
    int masked = 0;
    std::vector<ConfidentTerm> terms{{state[0], 0.7, true}};
    for (int i = 0; i < draws; ++i) {
      GripLossStats stats = grip_loss(ens, {}, {}, terms, {}, p, mask_rng,
                                      nullptr, nullptr);
      masked += stats.masked;
    }
    double fraction = static_cast<double>(masked) / draws;
    double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / draws);
    CHECK(std::abs(fraction - p) <= 3.0 * sigma + 1e-9);
  }
}

TEST_CASE("annotation: nothing confident leaves every state unconfident") {
  ProximityEnsemble ens = constant_ensemble({0.2, 0.8});  // variance 0.09
  std::vector<std::vector<double>> states(5, std::vector<double>{0.0, 0.0});
  auto notes = annotate_rollout(states, ens, 1e-6, ensemble_cfg(), 100.0, nullptr);
  for (const auto& note : notes) CHECK(note.role == StateRole::kUnconfident);
}

namespace {

// Two members that agree exactly on input 0 and split apart as |x| grows:
// f_pm(x) = sigmoid(b +- v * tanh(x)). Feeding x_t = 5 - |t - 5| puts zero
// variance at t = 0 and t = 10 and positive variance strictly between.
ProximityEnsemble endpoint_agree_ensemble(double bias, double spread) {
  ProximityEnsemble::Options opt;
  opt.members = 2;
  opt.hidden = {1};
  opt.activation = nn::Activation::kTanh;
  ProximityEnsemble ens(1, opt, {}, 1);
  const nn::MlpSpec& spec = ens.member_spec();
  for (int k = 0; k < 2; ++k) {
    auto& params = ens.mutable_member_params(k);
    std::fill(params.begin(), params.end(), 0.0);
    params[spec.weight_offset(0)] = 1.0;
    params[spec.weight_offset(1)] = k == 0 ? spread : -spread;
    params[spec.bias_offset(1)] = bias;
  }
  return ens;
}

}  // namespace

TEST_CASE("annotation: anchors at 0 and 10 of an 11-state trajectory") {
  ProximityEnsemble ens = endpoint_agree_ensemble(-1.0, 0.8);
  std::vector<std::vector<double>> states;
  for (int t = 0; t <= 10; ++t) {
    states.push_back({5.0 - std::abs(t - 5.0)});  // 0 only at t = 0 and 10
  }
  auto notes = annotate_rollout(states, ens, 1e-12, ensemble_cfg(), 100.0, nullptr);
  REQUIRE(notes[0].role == StateRole::kAnchor);
  REQUIRE(notes[10].role == StateRole::kAnchor);
  int intermediates = 0;
  for (std::size_t t = 1; t < 10; ++t) {
    CHECK(notes[t].role == StateRole::kIntermediate);
    intermediates += notes[t].role == StateRole::kIntermediate;
  }
  CHECK(intermediates == 9);
  // Equal endpoint means give equal log-distances, so every interpolated
  // target equals the shared anchor value (t_sub = 10 cancels).
  double anchor_value = notes[0].target;
  CHECK(anchor_value == doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-9));
  for (std::size_t t = 1; t < 10; ++t) {
    CHECK(notes[t].target == doctest::Approx(anchor_value).epsilon(1e-9));
  }
}

TEST_CASE("annotation partitions every state into exactly one role") {
  ProximityEnsemble ens = small_ensemble(1, 3, 7);
  std::vector<std::vector<double>> states;
  for (int t = 0; t <= 10; ++t) states.push_back({0.37 * t - 1.1});
  double threshold =
      estimate_variance(ens, states[0], ensemble_cfg(), nullptr);
  auto notes = annotate_rollout(states, ens, threshold, ensemble_cfg(), 100.0,
                                nullptr);
  int anchors = 0, intermediates = 0, unconfident = 0;
  for (const auto& note : notes) {
    anchors += note.role == StateRole::kAnchor;
    intermediates += note.role == StateRole::kIntermediate;
    unconfident += note.role == StateRole::kUnconfident;
  }
  CHECK(anchors + intermediates + unconfident == 11);
  CHECK(anchors >= 1);
}

TEST_CASE("adjacent anchors produce no intermediates") {
  ProximityEnsemble ens = constant_ensemble({0.5, 0.5});
  std::vector<std::vector<double>> states(4, std::vector<double>{0.0, 0.0});
  // Everything is an anchor (zero variance): consecutive anchors, no gaps.
  auto notes = annotate_rollout(states, ens, 0.0, ensemble_cfg(), 100.0, nullptr);
  for (const auto& note : notes) CHECK(note.role == StateRole::kAnchor);
}

TEST_CASE("anchor log-distance is the clamped preimage of the mean") {
  ProximityEnsemble ens = constant_ensemble({0.6, 0.6});
  std::vector<std::vector<double>> states{{0.0, 0.0}};
  auto notes = annotate_rollout(states, ens, 1.0, ensemble_cfg(), 50.0, nullptr);
  REQUIRE(notes[0].role == StateRole::kAnchor);
  double expected_rho = std::log(0.6) / std::log(ens.decay());
  CHECK(notes[0].rho == doctest::Approx(expected_rho).epsilon(1e-9));
  CHECK(notes[0].target == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("anchor log-distance saturates at the clamp floor") {
  ProximityEnsemble ens = constant_ensemble({1e-9, 1e-9});
  std::vector<std::vector<double>> states{{0.0, 0.0}};
  double rho_max = 20.0;
  auto notes = annotate_rollout(states, ens, 1.0, ensemble_cfg(), rho_max, nullptr);
  REQUIRE(notes[0].role == StateRole::kAnchor);
  CHECK(notes[0].rho == doctest::Approx(rho_max).epsilon(1e-9));
}

TEST_CASE("combined loss: mask probability one zero-targets every intermediate") {
  ProximityEnsemble ens = constant_ensemble({0.5});
  std::vector<std::vector<double>> s{{0, 0}, {1, 1}};
  std::vector<ConfidentTerm> terms{{s[0], 0.9, true}, {s[1], 0.9, true}};
  Rng rng(1);
  GripLossStats stats = grip_loss(ens, {}, {}, terms, {}, 1.0, rng, nullptr, nullptr);
  CHECK(stats.masked == 2);
  // Zero targets against prediction 0.5: mean squared prediction = 0.25.
  CHECK(stats.loss_confident == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("combined loss: unmasked intermediates matching their targets cost zero") {
  ProximityEnsemble ens = constant_ensemble({0.5});
  std::vector<std::vector<double>> s{{0, 0}, {1, 1}};
  std::vector<ConfidentTerm> terms{{s[0], 0.5, true}, {s[1], 0.5, true}};
  Rng rng(1);
  GripLossStats stats = grip_loss(ens, {}, {}, terms, {}, 0.0, rng, nullptr, nullptr);
  CHECK(stats.masked == 0);
  CHECK(stats.loss_confident == doctest::Approx(0.0).epsilon(1e-18));
}

TEST_CASE("combined loss equals an independent sum of its three terms") {
  ProximityEnsemble ens = small_ensemble(2, 3, 15);
  Rng data_rng(2);
  std::vector<std::vector<double>> estates, cstates, ustates;
  std::vector<double> etargets;
  std::vector<ConfidentTerm> terms;
  for (int i = 0; i < 6; ++i) {
    estates.push_back({uniform(data_rng, -1, 1), uniform(data_rng, -1, 1)});
    etargets.push_back(uniform01(data_rng));
    cstates.push_back({uniform(data_rng, -1, 1), uniform(data_rng, -1, 1)});
    ustates.push_back({uniform(data_rng, -1, 1), uniform(data_rng, -1, 1)});
  }
  for (int i = 0; i < 6; ++i) {
    terms.push_back({cstates[static_cast<std::size_t>(i)], uniform01(data_rng),
                     i % 2 == 0});
  }
  std::vector<StateView> eviews(estates.begin(), estates.end());
  std::vector<StateView> uviews(ustates.begin(), ustates.end());

  double p = 0.6;
  Rng mask_a(77), mask_b(77);
  GripLossStats stats =
      grip_loss(ens, eviews, etargets, terms, uviews, p, mask_a, nullptr, nullptr);

  // Independent recomputation, drawing the same mask realization.
  std::vector<double> eff_targets;
  for (const ConfidentTerm& term : terms) {
    double target = term.target;
    if (term.maskable && bernoulli(mask_b, p)) target = 0.0;
    eff_targets.push_back(target);
  }
  double e = 0, c = 0, u = 0;
  for (int k = 0; k < ens.members(); ++k) {
    for (std::size_t i = 0; i < estates.size(); ++i) {
      double d = ens.member_forward(k, estates[i], false, nullptr) - etargets[i];
      e += d * d;
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
      double d = ens.member_forward(k, cstates[i], false, nullptr) - eff_targets[i];
      c += d * d;
    }
    for (std::size_t i = 0; i < ustates.size(); ++i) {
      double d = ens.member_forward(k, ustates[i], false, nullptr);
      u += d * d;
    }
  }
  double denom = 3.0 * 6.0;
  CHECK(stats.loss_expert == doctest::Approx(e / denom).epsilon(1e-12));
  CHECK(stats.loss_confident == doctest::Approx(c / denom).epsilon(1e-12));
  CHECK(stats.loss_unconfident == doctest::Approx(u / denom).epsilon(1e-12));
  CHECK(stats.total() ==
        doctest::Approx((e + c + u) / denom).epsilon(1e-12));
}

TEST_CASE("with no rollout states the combined gradient is the expert gradient") {
  ProximityEnsemble ens = small_ensemble(2, 2, 5);
  std::vector<std::vector<double>> estates{{0.1, 0.9}, {-0.4, 0.2}};
  std::vector<double> etargets{0.8, 0.3};
  std::vector<StateView> eviews(estates.begin(), estates.end());

  auto g1 = make_ensemble_grads(ens);
  Rng rng(1);
  grip_loss(ens, eviews, etargets, {}, {}, 0.5, rng, nullptr, &g1);
  auto g2 = make_ensemble_grads(ens);
  expert_loss(ens, eviews, etargets, nullptr, &g2);
  CHECK(g1 == g2);  // exact
}

TEST_CASE("reward difference is invariant to a constant shift of member outputs") {
  // The reward is a difference of means, so shifting every member's output
  // by the same constant cancels. Emulate the shift on raw outputs.
  std::vector<double> outs_s{0.2, 0.4, 0.3};
  std::vector<double> outs_next{0.5, 0.6, 0.7};
  auto mean = [](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
  };
  double base = mean(outs_next) - mean(outs_s);
  for (double shift : {-0.1, 0.05, 0.2}) {
    std::vector<double> shifted_s = outs_s, shifted_next = outs_next;
    for (double& v : shifted_s) v += shift;
    for (double& v : shifted_next) v += shift;
    CHECK(mean(shifted_next) - mean(shifted_s) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_SUITE_END();
