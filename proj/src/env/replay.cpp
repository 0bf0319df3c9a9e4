#include "tta/env/replay.hpp"

#include <fstream>

namespace tta::env {

nlohmann::json replay_to_json(const Replay& r) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& [l, rr] : r.inputs) inputs.push_back({l, rr});
  return {{"spec_version", kReplaySpecVersion},
          {"left_character", r.left_character},
          {"right_character", r.right_character},
          {"agent_side", std::string(to_string(r.agent_side))},
          {"frame_skip", r.frame_skip},
          {"inputs", inputs}};
}

Replay replay_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("spec_version").get<int>() != kReplaySpecVersion)
      throw EnvError("unsupported replay spec_version");
    Replay r;
    r.left_character = doc.at("left_character").get<int>();
    r.right_character = doc.at("right_character").get<int>();
    r.agent_side = doc.at("agent_side").get<std::string>() == "right" ? Side::Right : Side::Left;
    r.frame_skip = doc.at("frame_skip").get<int>();
    for (const auto& pair : doc.at("inputs")) {
      const auto l = pair.at(0).get<std::uint16_t>();
      const auto rr = pair.at(1).get<std::uint16_t>();
      if (l > ButtonVector::kAllMask || rr > ButtonVector::kAllMask)
        throw EnvError("replay input mask exceeds 12 bits");
      r.inputs.emplace_back(l, rr);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw EnvError(std::string("malformed replay: ") + e.what());
  }
}

void save_replay(const Replay& replay, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw EnvError("cannot write replay " + path.string());
  out << replay_to_json(replay).dump() << '\n';
}

Replay load_replay(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw EnvError("cannot open replay " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw EnvError("replay " + path.string() + " is not valid JSON");
  }
  return replay_from_json(doc);
}

std::vector<Transition> simulate(const Roster& roster, const Replay& replay) {
  std::vector<Transition> out;
  out.reserve(replay.inputs.size());
  GameState s = reset_state(roster, replay.left_character, replay.right_character);
  for (const auto& [l, r] : replay.inputs) {
    out.push_back(step(roster, s, ButtonVector::from_mask(l), ButtonVector::from_mask(r),
                       replay.frame_skip));
    s = out.back().state;
  }
  return out;
}

}  // namespace tta::env
