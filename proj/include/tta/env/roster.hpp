#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/env/buttons.hpp"

namespace tta::env {

struct NormalAttack {
  Button button = Button::LP;
  int startup = 0;
  int active = 0;
  int recovery = 0;
  int damage = 0;
  int reach = 0;
};

enum class TriggerClass { Punch, Kick };

struct SpecialMove {
  std::string name;
  std::vector<int> motion;  // facing-relative direction codes, in order
  TriggerClass trigger = TriggerClass::Punch;
  int charge_frames = 0;    // > 0 marks a charge move (back held at least this long)
  int damage = 0;
  int startup = 0;
  int active = 0;
  int recovery_frames = 1;
  int invincibility_frames = 0;
  int reach = 0;
  int vertical_reach = 0;
  int forward_speed = 0;    // travel during active frames
  bool grab = false;        // unblockable, grounded targets only
  bool spawns_projectile = false;
  int projectile_speed = 0;
};

struct CharacterSpec {
  int character_id = 0;
  std::string name;
  std::vector<std::string> aliases;
  int max_hp = 0;
  int walk_speed = 0;
  int jump_impulse = 0;
  int jump_speed_x = 0;
  std::vector<NormalAttack> normals;  // one per attack button, LP..HK
  std::vector<SpecialMove> specials;  // detection priority = declaration order

  const NormalAttack& normal_for(Button b) const;
};

class RosterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kRosterSpecVersion = 1;

class Roster {
 public:
  explicit Roster(std::vector<CharacterSpec> characters);

  int size() const { return static_cast<int>(characters_.size()); }
  bool valid(int character_id) const { return character_id >= 0 && character_id < size(); }
  const CharacterSpec& at(int character_id) const;
  const std::vector<CharacterSpec>& characters() const { return characters_; }

  /// Name or alias lookup, case-sensitive.
  std::optional<int> find(std::string_view name) const;
  std::vector<std::string> names() const;

  int max_reach() const;
  int max_recovery_frames() const;

 private:
  std::vector<CharacterSpec> characters_;
};

/// The four built-in archetypes: Ryu (quarter-circle projectile), Ken
/// (dragon-punch anti-air), EHonda (charge), Zangief (command grab).
const Roster& default_roster();

nlohmann::json roster_to_json(const Roster& roster);
Roster roster_from_json(const nlohmann::json& doc);
Roster load_roster(const std::filesystem::path& path);

}  // namespace tta::env
