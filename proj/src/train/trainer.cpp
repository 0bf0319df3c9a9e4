#include "tta/train/trainer.hpp"

#include <chrono>
#include <fstream>

#include "tta/eval/match.hpp"
#include "tta/eval/net_controller.hpp"
#include "tta/reward/reward.hpp"
#include "tta/train/rollout.hpp"
#include "tta/util/files.hpp"

namespace tta::train {

namespace fs = std::filesystem;

namespace {

void write_json_atomic(const fs::path& path, const nlohmann::json& doc) {
  util::write_file_atomic(path, doc.dump(2) + "\n");
}

nlohmann::json settings_of(const TrainConfig& c, const reward::RewardTerms& terms,
                           const policy::PolicySpec& spec) {
  return {{"profile", c.profile},
          {"reward_terms", reward::terms_to_json(terms)},
          {"schedule", schedule_to_json(c.schedule)},
          {"ppo", ppo_to_json(c.ppo)},
          {"policy_spec", policy::spec_to_json(spec)},
          {"seed", c.seed},
          {"eval_matches", c.eval_matches}};
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// Win rate of the agent against the built-in AI, alternating sides.
nlohmann::json evaluate_against_builtin(std::shared_ptr<const env::Roster> roster,
                                        policy::PolicyNet& net, int matches, std::uint64_t seed) {
  if (matches <= 0) return {{"matches", 0}, {"win_rate", 0.0}};
  eval::NetController agent(net, "agent");
  eval::BuiltinAiController builtin(roster);
  std::vector<eval::MatchSetup> left, right;
  for (int m = 0; m < matches; ++m) {
    const int c = m % roster->size();
    eval::MatchSetup s{c, c, derive_seed(seed, static_cast<std::uint64_t>(m))};
    (m % 2 == 0 ? left : right).push_back(s);
  }
  int wins = 0, specials = 0;
  for (const auto& r : eval::run_matches(roster, agent, builtin, left)) {
    wins += r.stats.won_by(env::Side::Left);
    specials += r.stats.sides[0].special_moves;
  }
  for (const auto& r : eval::run_matches(roster, builtin, agent, right)) {
    wins += r.stats.won_by(env::Side::Right);
    specials += r.stats.sides[1].special_moves;
  }
  net->eval();
  return {{"opponent", "builtin"},
          {"matches", matches},
          {"wins", wins},
          {"win_rate", static_cast<double>(wins) / matches},
          {"special_moves_per_round", static_cast<double>(specials) / matches}};
}

}  // namespace

std::int64_t rollouts_per_iteration(const HybridSchedule& s, const PPOConfig& p) {
  const std::int64_t per = static_cast<std::int64_t>(s.num_envs) * p.n_steps;
  return (s.steps_per_iteration + per - 1) / per;
}

nlohmann::json load_manifest(const fs::path& run_dir) {
  std::ifstream in(run_dir / "manifest.json");
  if (!in) throw TrainError("no run manifest in " + run_dir.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw TrainError("malformed run manifest: " + std::string(e.what()));
  }
}

PolicyPool pool_from_manifest(const nlohmann::json& manifest) {
  return PolicyPool::from_json(manifest.at("pool"));
}

PolicyPool train(const TrainConfig& cfg_in, const env::Roster& roster_ref) {
  TrainConfig cfg = cfg_in;
  cfg.schedule.validate();
  cfg.ppo.validate();
  if (cfg.iterations < 1) throw std::invalid_argument("iterations must be positive");
  if (cfg.out_dir.empty()) throw std::invalid_argument("an output directory is required");
  if (cfg.spec.scalar_dim == 0) cfg.spec.scalar_dim = env::scalar_dim(roster_ref.size());
  cfg.spec.validate();
  const auto terms = reward::load_profile(cfg.profile);
  auto roster = std::make_shared<const env::Roster>(roster_ref);

  fs::create_directories(cfg.out_dir / "pool");
  const auto settings = settings_of(cfg, terms, cfg.spec);

  nlohmann::json manifest;
  PolicyPool pool;
  policy::PolicyNet net{nullptr};
  const fs::path manifest_path = cfg.out_dir / "manifest.json";
  const fs::path optimizer_path = cfg.out_dir / "optimizer.pt";
  if (fs::exists(manifest_path)) {
    manifest = load_manifest(cfg.out_dir);
    if (manifest.at("settings") != settings)
      throw TrainError("run directory " + cfg.out_dir.string() + " holds a run with different settings");
    pool = pool_from_manifest(manifest);
  } else {
    manifest = {{"format_version", kManifestFormatVersion},
                {"settings", settings},
                {"notes",
                 {{"discount_gamma",
                   "the published 'PPO gamma 0.1' is read as the clip range; discount_gamma is the "
                   "GAE/return discount"}}},
                {"pool", nlohmann::json::array()},
                {"iterations", nlohmann::json::array()}};
  }
  manifest["iterations_planned"] = std::max(cfg.iterations, manifest.value("iterations_planned", 0));

  if (pool.empty()) {
    net = policy::make_policy(cfg.spec, derive_seed(cfg.seed, 0xA11));
  } else {
    net = policy::load_checkpoint(cfg.out_dir / pool.entries().back().path, &cfg.spec);
  }
  torch::optim::Adam optimizer(net->parameters(), torch::optim::AdamOptions(cfg.ppo.lr_initial).eps(1e-5));
  if (!pool.empty() && fs::exists(optimizer_path)) torch::load(optimizer, optimizer_path.string());

  const std::int64_t rollouts = rollouts_per_iteration(cfg.schedule, cfg.ppo);
  const std::int64_t per_rollout = static_cast<std::int64_t>(cfg.schedule.num_envs) * cfg.ppo.n_steps;
  const std::int64_t total_steps = rollouts * per_rollout * cfg.iterations;

  RolloutCollector collector(roster, terms, cfg.schedule, cfg.out_dir);
  for (int it = pool.size() + 1; it <= cfg.iterations; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng task_rng(derive_seed(cfg.seed, 1, static_cast<std::uint64_t>(it)));
    auto tasks = assign_tasks(cfg.schedule, pool, roster->size(), task_rng);
    nlohmann::json task_log = nlohmann::json::array();
    for (const auto& t : tasks) task_log.push_back(task_to_json(t));
    collector.begin(tasks, pool, derive_seed(cfg.seed, 2, static_cast<std::uint64_t>(it)));

    nlohmann::json updates = nlohmann::json::array();
    std::vector<double> episode_rewards;
    int episodes = 0, wins = 0, specials = 0;
    for (std::int64_t r = 0; r < rollouts; ++r) {
      const std::int64_t done_steps = ((it - 1) * rollouts + r) * per_rollout;
      const auto c0 = std::chrono::steady_clock::now();
      auto buffer = collector.collect(net, cfg.ppo);
      const auto c1 = std::chrono::steady_clock::now();
      const double progress = static_cast<double>(done_steps + per_rollout) / static_cast<double>(total_steps);
      const auto stats = ppo_update(net, optimizer, buffer, cfg.ppo, progress,
                                    derive_seed(cfg.seed, 3, static_cast<std::uint64_t>(it) * 100000 + r));
      double reward_sum = 0;
      for (double x : buffer.rewards) reward_sum += x;
      auto entry = stats_to_json(stats);
      entry["timesteps"] = done_steps + per_rollout;
      entry["reward_sum"] = reward_sum;
      entry["collect_seconds"] = std::chrono::duration<double>(c1 - c0).count();
      entry["update_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - c1).count();
      updates.push_back(entry);
      for (const auto& ep : collector.take_episodes()) {
        episode_rewards.push_back(ep.reward);
        ++episodes;
        wins += ep.won;
        specials += ep.special_moves;
      }
      if (cfg.on_progress)
        cfg.on_progress({{"iteration", it}, {"rollout", r + 1}, {"of", rollouts}, {"update", entry}});
    }

    const auto eval = evaluate_against_builtin(roster, net, cfg.eval_matches,
                                               derive_seed(cfg.seed, 4, static_cast<std::uint64_t>(it)));
    const std::string stem = checkpoint_stem(it, eval.at("win_rate").get<double>());
    const std::string rel = "pool/" + stem + ".ckpt";
    const std::int64_t timesteps = static_cast<std::int64_t>(it) * rollouts * per_rollout;
    policy::save_checkpoint(net, cfg.out_dir / rel,
                            {{"iteration", it}, {"profile", cfg.profile}, {"eval", eval},
                             {"timesteps", timesteps}, {"seed", cfg.seed}});
    torch::save(optimizer, optimizer_path.string());

    PoolEntry entry{it, rel, cfg.profile, eval};
    pool.append(entry);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json record = {
        {"iteration", it},
        {"timesteps", timesteps},
        {"tasks", task_log},
        {"updates", updates},
        {"episodes",
         {{"count", episodes},
          {"mean_reward", mean(episode_rewards)},
          {"win_rate", episodes ? static_cast<double>(wins) / episodes : 0.0},
          {"special_moves_per_episode", episodes ? static_cast<double>(specials) / episodes : 0.0}}},
        {"eval", eval},
        {"checkpoint", rel},
        {"seconds", seconds}};
    manifest["iterations"].push_back(record);
    manifest["pool"] = pool.to_json();
    write_json_atomic(manifest_path, manifest);
    if (cfg.on_progress) cfg.on_progress({{"iteration", it}, {"completed", record}});
  }
  return pool;
}

}  // namespace tta::train
