// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any criterion fails. Usage: tta_acceptance [--runs DIR] [--only NAME]...

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "../common/oracles.hpp"
#include "../common/profile_table.hpp"
#include "../common/random_inputs.hpp"
#include "../common/special_table.hpp"
#include "tta/archive/archive.hpp"
#include "tta/env/game.hpp"
#include "tta/eval/harness.hpp"
#include "tta/eval/net_controller.hpp"
#include "tta/gm/playing_data.hpp"
#include "tta/llm/hyperagent.hpp"
#include "tta/policy/distribution.hpp"
#include "tta/policy/policy_net.hpp"
#include "tta/train/schedule.hpp"
#include "tta/train/trainer.hpp"
#include "tta/util/files.hpp"

using namespace tta;
namespace fs = std::filesystem;

namespace {

const fs::path kData = TTA_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

using Check = std::function<void(Outcome&)>;

// --- reward ---

env::StepInfo random_info(std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> dmg(1, 40);
  env::StepInfo i;
  i.damage_dealt = coin(rng) ? dmg(rng) : 0;
  i.damage_taken = coin(rng) ? dmg(rng) : 0;
  const int split = std::uniform_int_distribution<int>(0, i.damage_dealt)(rng);
  i.damage_dealt_special = coin(rng) ? split : 0;
  i.damage_dealt_projectile = coin(rng) ? i.damage_dealt - split : 0;
  i.special_move_triggered = coin(rng);
  i.projectile_triggered = coin(rng);
  i.regular_attack_triggered = coin(rng);
  i.jump_triggered = coin(rng);
  i.in_air = coin(rng);
  i.vulnerable_frames = std::uniform_int_distribution<int>(0, 4)(rng);
  i.distance_norm = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  i.round_over = coin(rng);
  if (i.round_over) i.won = coin(rng);
  return i;
}

void reward_oracle(Outcome& o) {
  std::mt19937_64 rng(20240);
  std::uniform_real_distribution<double> v(-50.0, 50.0);
  double worst = 0.0;
  for (int n = 0; n < 10000; ++n) {
    const auto info = random_info(rng);
    std::array<double, 15> a;
    for (auto& x : a) x = v(rng);
    const auto terms = reward::from_array(a);
    const double got = reward::compute(info, terms).reward;
    const double want = testing::reward_oracle(info, terms);
    worst = std::max(worst, std::abs(got - want) / std::max({1.0, std::abs(got), std::abs(want)}));
  }
  o.require(worst <= 1e-12, "randomized pairs");
  o.detail << "10000 pairs, max rel err " << worst << "; ";
  int fields = 0, mismatched = 0;
  const auto table = testing::published_profiles();
  for (const auto& [name, expected] : table) {
    const auto got = reward::to_array(reward::load_profile(name));
    const auto want = reward::to_array(expected);
    for (std::size_t k = 0; k < got.size(); ++k, ++fields) mismatched += got[k] != want[k];
  }
  o.require(table.size() == 7 && mismatched == 0, "profile table");
  o.detail << table.size() << " profiles, " << fields << " fields, " << mismatched << " mismatched";
}

// --- environment ---

std::vector<std::uint64_t> script_hashes(std::uint64_t seed, int steps, int lc, int rc) {
  const auto& roster = env::default_roster();
  testing::InputScript a(seed), b(seed ^ 0x9E3779B97F4A7C15ull);
  auto s = env::reset_state(roster, lc, rc);
  std::vector<std::uint64_t> out;
  out.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    if (s.done) s = env::reset_state(roster, lc, rc);
    s = env::step(roster, s, a.next(), b.next()).state;
    out.push_back(env::state_hash(s));
  }
  return out;
}

void env_determinism(Outcome& o) {
  int differing = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int lc = seed % 4, rc = (seed / 4) % 4;
    differing += script_hashes(seed, 1000, lc, rc) != script_hashes(seed, 1000, lc, rc);
  }
  o.require(differing == 0, "replay hashes");
  o.detail << "100 scripts x 1000 steps, " << differing << " differing; ";

  const auto& roster = env::default_roster();
  std::mt19937_64 rng(5);
  int checked = 0, broken = 0;
  for (std::uint64_t seed = 0; checked < 10000; ++seed) {
    testing::InputScript a(seed), b(seed + 100000);
    auto s = env::reset_state(roster, rng() % 4, rng() % 4);
    while (!s.done && checked < 10000) {
      const auto ia = a.next(), ib = b.next();
      const auto t = env::step(roster, s, ia, ib);
      const auto tm = env::step(roster, testing::mirror_oracle(s), ib.mirrored(), ia.mirrored());
      broken += !(tm.state == testing::mirror_oracle(t.state) && tm.info[0] == t.info[1] && tm.info[1] == t.info[0]);
      s = t.state;
      ++checked;
    }
  }
  o.require(broken == 0, "side symmetry");
  o.detail << checked << " symmetry steps, " << broken << " broken";
}

// --- special moves ---

void special_parser(Outcome& o) {
  const auto& roster = env::default_roster();
  const auto table = testing::special_case_table();
  int wrong = 0;
  for (const auto& c : table) {
    if (testing::classify(roster, c) != c.expected) {
      ++wrong;
      o.detail << "'" << c.label << "' misclassified; ";
    }
  }
  o.require(table.size() == 12 && wrong == 0, "case table");
  o.detail << table.size() << " cases, " << wrong << " wrong";
}

// --- policy ---

policy::PolicySpec probe_spec() {
  policy::PolicySpec s;
  s.image_size = 36;
  s.cnn_channels = {2, 3, 3};
  s.cnn_feature_dim = 6;
  s.rnn_hidden_dim = 5;
  s.rnn_layers = 2;
  s.rnn_dropout = 0.0;
  s.history_length = 9;
  s.scalar_dim = 4;
  s.actor_layers = {8, 7};
  s.critic_layers = {6};
  return s;
}

void policy_math(Outcome& o) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(0.01f, 0.99f);
  double worst_sum = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<float> p(12);
    for (auto& x : p) x = u(rng);
    double total = 0.0;
    for (int m = 0; m < 4096; ++m)
      total += std::exp(policy::bernoulli_log_prob(p, env::ButtonVector::from_mask(static_cast<std::uint16_t>(m))));
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
  }
  o.require(worst_sum <= 1e-6, "enumeration");
  o.detail << "10 distributions x 4096 actions, max |sum-1| " << worst_sum << "; ";

  const auto spec = probe_spec();
  auto net = policy::make_policy(spec, 6);
  net->to(torch::kFloat64);
  net->eval();
  torch::manual_seed(6);
  const std::int64_t n = 3;
  policy::ObservationBatch b;
  b.image = torch::randint(0, 256, {n, spec.image_channels, spec.image_size, spec.image_size}, torch::kUInt8);
  b.scalars = torch::rand({n, spec.scalar_dim});
  b.history = torch::randint(0, 2, {n, spec.history_length, env::kNumButtons}).to(torch::kFloat32);
  b.history_valid = torch::full({n}, spec.history_length, torch::kInt64);
  b = b.to(torch::kFloat64);
  const auto acts = torch::randint(0, 2, {n, 12}).to(torch::kFloat64);
  const auto objective = [&] {
    const auto ev = net->evaluate_actions(b, acts);
    return ev.log_prob.sum() + 0.5 * ev.value.sum();
  };
  net->zero_grad();
  objective().backward();
  double worst_rel = 0.0;
  int checked = 0;
  for (auto& item : net->named_parameters(true)) {
    auto& param = item.value();
    const auto grad = param.grad().clone().view({-1});
    auto flat = param.data().view({-1});
    for (int k = 0; k < 3; ++k) {
      const auto idx = static_cast<std::int64_t>(rng() % flat.numel());
      const double orig = flat[idx].item<double>();
      const double eps = 1e-6;
      double up, down;
      {
        torch::NoGradGuard g;
        flat[idx] = orig + eps;
        up = objective().item<double>();
        flat[idx] = orig - eps;
        down = objective().item<double>();
        flat[idx] = orig;
      }
      const double numeric = (up - down) / (2 * eps);
      const double analytic = grad[idx].item<double>();
      worst_rel = std::max(worst_rel, std::abs(numeric - analytic) /
                                          std::max({std::abs(numeric), std::abs(analytic), 1e-6}));
      ++checked;
    }
  }
  o.require(worst_rel <= 1e-4, "finite differences");
  o.detail << checked << " gradient entries, max rel err " << worst_rel;
}

// --- scheduler ---

void scheduler(Outcome& o) {
  train::HybridSchedule s;
  train::PolicyPool pool;
  for (int i = 1; i <= 5; ++i) pool.append({i, "pool/" + std::to_string(i) + "_0.ckpt", "default", {}});
  train::Rng rng(4);
  const int per_iter = s.num_envs;
  const int want_sp = static_cast<int>(std::lround(s.self_play_ratio * per_iter));
  int bad_iters = 0, flips = 0, total = 0;
  while (total < 10000) {
    const auto tasks = train::assign_tasks(s, pool, env::default_roster().size(), rng);
    int sp = 0;
    for (const auto& t : tasks) {
      sp += t.mode == train::TaskMode::SelfPlay;
      flips += t.flipped;
      ++total;
    }
    bad_iters += sp != want_sp || static_cast<int>(tasks.size()) != per_iter;
  }
  o.require(want_sp == 8 && bad_iters == 0, "task mix");
  const double rate = static_cast<double>(flips) / total;
  const double half = 2.576 * std::sqrt(0.25 / total);
  o.require(std::abs(rate - 0.5) <= half, "flip rate");
  o.detail << "mix " << want_sp << "/" << per_iter - want_sp << " in every iteration (" << bad_iters
           << " off); flip rate " << rate << " over " << total << " (99% CI +-" << half << "); ";

  const auto before = pool.entries();
  pool.append({6, "pool/6_0.ckpt", "default", {}});
  bool prefix = pool.size() == 6;
  for (std::size_t i = 0; prefix && i < before.size(); ++i) prefix = pool.at(static_cast<int>(i)) == before[i];
  o.require(prefix, "append-only pool");
  o.detail << "pool append keeps prefix: " << (prefix ? "yes" : "no");
}

// --- directional training ---

struct TrainedAgent {
  fs::path checkpoint;
  std::int64_t timesteps = 0;
};

std::optional<TrainedAgent> trained_agent(const fs::path& run) {
  if (!fs::exists(run / "manifest.json")) return std::nullopt;
  const auto manifest = train::load_manifest(run);
  const auto pool = train::pool_from_manifest(manifest);
  if (pool.size() == 0) return std::nullopt;
  TrainedAgent t;
  t.checkpoint = run / pool.at(pool.size() - 1).path;
  for (const auto& it : manifest.at("iterations")) t.timesteps = std::max<std::int64_t>(t.timesteps, it.value("timesteps", 0));
  return t;
}

void directional(Outcome& o, const fs::path& runs) {
  constexpr std::int64_t kMinSteps = 200000;
  std::map<std::string, TrainedAgent> agents;
  for (const char* p : {"default", "special_move", "coward"}) {
    const auto a = trained_agent(runs / p);
    if (!a) {
      o.require(false, std::string("no trained ") + p + " run under " + runs.string());
      continue;
    }
    o.require(a->timesteps >= kMinSteps, std::string(p) + " run has " + std::to_string(a->timesteps) + " steps");
    agents[p] = *a;
  }
  if (agents.size() != 3) return;

  auto roster = std::make_shared<env::Roster>(env::default_roster());
  const auto controller = [](const TrainedAgent& a, const std::string& name) {
    return eval::NetController(policy::load_checkpoint(a.checkpoint), name);
  };
  auto def = controller(agents["default"], "default");
  auto spm = controller(agents["special_move"], "special_move");
  auto cow = controller(agents["coward"], "coward");
  eval::RandomController random;
  eval::BuiltinAiController builtin(roster);

  // (a) default vs uniform random, 50 matches, sides and characters swept.
  const auto vs_random = eval::behavior_metrics(eval::play_rounds(roster, def, {&random}, 50, 11));
  o.require(vs_random.win_rate >= 0.8, "(a) win rate vs random");
  o.detail << "(a) default vs random " << vs_random.win_rate << " over 50 (need >= 0.8); ";

  // (b), (c): the same opponents and seeds for every agent.
  const std::vector<eval::Controller*> opponents{&builtin, &random};
  const int rounds = 96;
  const auto m_def = eval::behavior_metrics(eval::play_rounds(roster, def, opponents, rounds, 12));
  const auto m_spm = eval::behavior_metrics(eval::play_rounds(roster, spm, opponents, rounds, 12));
  const auto m_cow = eval::behavior_metrics(eval::play_rounds(roster, cow, opponents, rounds, 12));
  const double ratio = m_def.special_moves_per_round > 0
                           ? m_spm.special_moves_per_round / m_def.special_moves_per_round
                           : (m_spm.special_moves_per_round > 0 ? INFINITY : 0.0);
  o.require(ratio >= 1.5, "(b) special-move ratio");
  o.detail << "(b) specials/round special_move " << m_spm.special_moves_per_round << " vs default "
           << m_def.special_moves_per_round << " ratio " << ratio << " (need >= 1.5); ";
  o.require(m_cow.mean_distance_norm > m_def.mean_distance_norm, "(c) coward distance");
  o.detail << "(c) mean distance coward " << m_cow.mean_distance_norm << " vs default " << m_def.mean_distance_norm;
}

// --- selector metrics ---

void llm_metrics(Outcome& o) {
  const auto set = llm::FixtureSet::load(kData / "llm_fixtures" / "bench");
  const auto expected = nlohmann::json::parse(util::read_file(kData / "llm_fixtures" / "bench" / "expected.json"));
  std::vector<std::string> texts;
  for (const auto& [_, t] : set.fixtures) texts.push_back(t);
  llm::ScriptedClient client(texts);
  const auto r = llm::benchmark(client, "prompt", static_cast<int>(texts.size()));
  o.require(r.n == 20, "fixture count");
  o.require(r.json_in_output_rate == expected["json_in_output_rate"].get<double>(), "json_in_output rate");
  o.require(r.format_correctness_rate == expected["format_correctness_rate"].get<double>(), "format rate");
  o.detail << "json_in_output " << r.json_in_output_rate << ", format_correctness " << r.format_correctness_rate
           << " on " << r.n << " fixtures; ";

  std::vector<std::string> uniform;
  for (const char* t : {"projectile_type", "coward_type", "air_type", "newbie_type"})
    for (int i = 0; i < 5; ++i) uniform.push_back(t);
  const auto h = llm::shannon_entropy_bits(uniform);
  o.require(h && *h == 2.0, "uniform entropy");
  o.detail << "uniform-over-4 entropy " << (h ? *h : -1.0) << " bits; ";

  auto manifest = archive::ArchiveManifest::parse(util::read_file(kData / "archive" / "example_archive.json"));
  auto& e = manifest.type_entry("aggressive_type");
  e.suggested_characters = {"Ryu", "Ken", "EHonda", "Zangief"};
  e.agent_models.push_back({"agent_models/agents_archive/aggressive_type/1_0.22", "8/10-(Hard)"});
  const auto v = llm::validate(
      llm::parse_output(util::read_file(kData / "llm_fixtures" / "single" / "output_example.txt")), manifest);
  const llm::SelectionResult want{"aggressive_type", "agent_models/agents_archive/aggressive_type/1_0.22", "Honda"};
  const bool exact = std::holds_alternative<llm::SelectionResult>(v) && std::get<llm::SelectionResult>(v) == want;
  o.require(exact, "output example");
  o.detail << "output example parses to " << (exact ? llm::selection_to_json(want).dump() : "something else");
}

// --- schemas ---

std::vector<std::string> keys_of(const nlohmann::ordered_json& j) {
  std::vector<std::string> out;
  for (const auto& [k, _] : j.items()) out.push_back(k);
  return out;
}

void schema_fidelity(Outcome& o) {
  const auto& roster = env::default_roster();
  const auto example = nlohmann::ordered_json::parse(util::read_file(kData / "gm" / "playing_data_example.json"));
  const auto fresh = gm::fresh_playing_data("Ryu", roster).to_json();
  o.require(keys_of(fresh) == keys_of(example), "playing data keys");
  o.require(keys_of(fresh["the_last_opponents"]) == keys_of(example["the_last_opponents"]), "last opponent keys");
  o.require(keys_of(fresh["faced_agents_times"]) == keys_of(example["faced_agents_times"]), "agent type keys");
  o.require(fresh.contains("player's_feedback"), "player's_feedback key");

  const auto text = util::read_file(kData / "archive" / "example_archive.json");
  const auto manifest = archive::ArchiveManifest::parse(text);
  const auto raw = nlohmann::ordered_json::parse(text);
  const auto ours = manifest.to_json();
  bool same = keys_of(ours) == keys_of(raw);
  for (const auto& [type, entry] : raw.items()) {
    same = same && keys_of(ours[type]) == keys_of(entry);
    for (std::size_t i = 0; same && i < entry["agent_models"].size(); ++i)
      same = keys_of(ours[type]["agent_models"][i]) == keys_of(entry["agent_models"][i]);
  }
  o.require(same && manifest.dump() == text, "archive keys");
  o.detail << "playing data " << keys_of(fresh).size() << " keys, archive round-trip byte-identical: "
           << (manifest.dump() == text ? "yes" : "no") << "; ";

  auto d = gm::fresh_playing_data("Ryu", roster);
  const auto add = [&](gm::MatchWinner w) {
    gm::MatchSummary m;
    m.opponent = {"projectile_type", "Ryu", "agent_models/agents_archive/projectile_type/2_0.2", "6/10-(Medium)"};
    m.winner = w;
    d = gm::update_playing_data(d, m);
  };
  for (auto w : {gm::MatchWinner::Player, gm::MatchWinner::Agent, gm::MatchWinner::Player, gm::MatchWinner::Player,
                 gm::MatchWinner::Player, gm::MatchWinner::Player})
    add(w);
  const auto wr = d.to_json()["win_rate"].dump();
  o.require(wr == "0.8333333333333334", "5W/1L win rate");
  o.detail << "5W/1L win_rate " << wr;
}

// --- questionnaire ---

void enjoyability(Outcome& o) {
  const auto schema = eval::QuestionnaireSchema::load(kData / "questionnaire" / "schema.json");
  const auto scores = eval::score_questionnaire_file(schema, kData / "questionnaire" / "responses_example.jsonl");
  const auto expected = nlohmann::json::parse(util::read_file(kData / "questionnaire" / "expected.json"));
  int compared = 0, wrong = 0;
  for (const auto& [group, e] : expected.items()) {
    const int n = e["respondents"].get<int>();
    wrong += scores.respondents.at(group) != n;
    for (const auto& [metric, sum] : e["sums"].items()) {
      ++compared;
      wrong += scores.means.at(group).at(metric) != sum.get<double>() / n;
    }
  }
  o.require(compared == 8 && wrong == 0, "group means");
  o.detail << compared << " group means, " << wrong << " wrong; ";

  auto doc = nlohmann::json::parse(util::read_file(kData / "questionnaire" / "schema.json"));
  doc["metrics"][0]["answers"]["neutral"] = 2;
  bool rejected = false;
  try {
    eval::QuestionnaireSchema::from_json(doc);
  } catch (const eval::QuestionnaireError&) {
    rejected = true;
  }
  bool unknown_rejected = false;
  try {
    eval::score_questionnaire(schema, R"({"respondent": "x", "group": "control", "answers": {"overall_enjoyability": "great", "difficulty_suitability": "neutral", "diversity_and_expectation": "neutral", "preferred_group": "neutral"}})");
  } catch (const eval::QuestionnaireError&) {
    unknown_rejected = true;
  }
  o.require(rejected && unknown_rejected, "scoring map");
  o.detail << "non-{3,2,1,0} map rejected: " << (rejected ? "yes" : "no")
           << ", unknown label rejected: " << (unknown_rejected ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string runs = TTA_ACCEPTANCE_RUNS;
  if (const char* env = std::getenv("TTA_ACCEPTANCE_RUNS")) runs = env;
  std::vector<std::string> only;
  app.add_option("--runs", runs, "Directory holding default/, special_move/ and coward/ training runs")
      ->capture_default_str();
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, Check>> checks = {
      {"reward_oracle", reward_oracle},
      {"env_determinism", env_determinism},
      {"special_move_parser", special_parser},
      {"policy_math", policy_math},
      {"hybrid_scheduler", scheduler},
      {"directional_training", [&](Outcome& o) { directional(o, runs); }},
      {"llmha_metrics", llm_metrics},
      {"schema_fidelity", schema_fidelity},
      {"enjoyability_scorer", enjoyability},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      check(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << std::fixed << std::setprecision(2) << secs
              << " s) " << std::defaultfloat << o.detail.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
