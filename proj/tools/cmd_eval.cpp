#include <iostream>

#include "commands.hpp"
#include "tta/eval/harness.hpp"

namespace tta::cli {

namespace {

struct AgentArgs {
  std::string agent;
  std::vector<std::string> opponents{"builtin", "random"};
  int rounds = 100;
  std::uint64_t seed = 1;
  bool deterministic = false;
  std::string out;
};

std::vector<eval::RoundSample> play(const AgentArgs& a) {
  auto roster = std::make_shared<env::Roster>(env::default_roster());
  auto agent = make_controller(a.agent, roster, a.deterministic);
  std::vector<std::shared_ptr<eval::Controller>> owned;
  std::vector<eval::Controller*> opponents;
  for (const auto& o : a.opponents) {
    owned.push_back(make_controller(o, roster, a.deterministic));
    opponents.push_back(owned.back().get());
  }
  return eval::play_rounds(roster, *agent, opponents, a.rounds, a.seed);
}

void add_agent_options(CLI::App* cmd, AgentArgs& a) {
  cmd->add_option("--agent", a.agent, "Checkpoint or built-in controller")->required();
  cmd->add_option("--opponents", a.opponents, "Opponent controllers")->capture_default_str();
  cmd->add_option("--rounds", a.rounds, "Rounds to play")->capture_default_str();
  cmd->add_option("--seed", a.seed, "Seed")->capture_default_str();
  cmd->add_flag("--deterministic", a.deterministic, "Threshold network actions instead of sampling");
  cmd->add_option("--out", a.out, "Write the JSON report here instead of stdout");
}

}  // namespace

void add_eval_command(CLI::App& app) {
  auto* cmd = app.add_subcommand("eval", "Evaluate agents");
  cmd->require_subcommand(1);

  struct H2hArgs {
    std::string a, b, out;
    int per_character = 25;
    std::uint64_t seed = 1;
    bool deterministic = false;
  };
  auto h = std::make_shared<H2hArgs>();
  auto* h2h = cmd->add_subcommand("h2h", "Mirror-match series between two agents");
  h2h->add_option("--a", h->a, "First agent")->required();
  h2h->add_option("--b", h->b, "Second agent")->required();
  h2h->add_option("--matches-per-character", h->per_character, "Matches per roster character")
      ->capture_default_str();
  h2h->add_option("--seed", h->seed, "Seed")->capture_default_str();
  h2h->add_flag("--deterministic", h->deterministic, "Threshold network actions instead of sampling");
  h2h->add_option("--out", h->out, "Write the JSON report here instead of stdout");
  h2h->callback([h] {
    auto roster = std::make_shared<env::Roster>(env::default_roster());
    auto a = make_controller(h->a, roster, h->deterministic);
    auto b = make_controller(h->b, roster, h->deterministic);
    const auto r = eval::run_series(roster, *a, *b, h->per_character, h->seed);
    emit(eval::series_to_json(r, *roster).dump(2), h->out);
  });

  auto sm = std::make_shared<AgentArgs>();
  auto* special = cmd->add_subcommand("special-moves", "Special moves per round");
  add_agent_options(special, *sm);
  special->callback([sm] {
    const auto rounds = play(*sm);
    emit(nlohmann::json{{"agent", sm->agent},
                        {"rounds", rounds.size()},
                        {"special_moves_per_round", eval::special_moves_per_round(rounds)}}
             .dump(2),
         sm->out);
  });

  auto bm = std::make_shared<AgentArgs>();
  auto* behavior = cmd->add_subcommand("behavior", "Distance, projectile and special-move statistics");
  add_agent_options(behavior, *bm);
  behavior->callback([bm] {
    auto j = eval::behavior_to_json(eval::behavior_metrics(play(*bm)));
    j["agent"] = bm->agent;
    emit(j.dump(2), bm->out);
  });

  struct ScoreArgs {
    std::string schema, responses, out;
  };
  auto s = std::make_shared<ScoreArgs>();
  auto* score = cmd->add_subcommand("score", "Score enjoyability questionnaire responses");
  score->add_option("--schema", s->schema, "Questionnaire schema JSON")->required()->check(CLI::ExistingFile);
  score->add_option("--responses", s->responses, "Responses, one JSON object per line")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--out", s->out, "Write the JSON report here instead of stdout");
  score->callback([s] {
    const auto schema = eval::QuestionnaireSchema::load(s->schema);
    emit(eval::scores_to_json(eval::score_questionnaire_file(schema, s->responses)).dump(2), s->out);
  });
}

}  // namespace tta::cli
