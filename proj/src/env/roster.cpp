#include "tta/env/roster.hpp"

#include <algorithm>
#include <fstream>

#include "tta/env/config.hpp"

namespace tta::env {

namespace {

std::vector<NormalAttack> standard_normals(int speed_penalty, int damage_bonus) {
  // button, startup, active, recovery, damage, reach
  return {
      {Button::LP, 3 + speed_penalty, 2, 5, 6 + damage_bonus, 50},
      {Button::MP, 5 + speed_penalty, 3, 9, 10 + damage_bonus, 60},
      {Button::HP, 7 + speed_penalty, 3, 15, 16 + damage_bonus, 66},
      {Button::LK, 3 + speed_penalty, 2, 6, 6 + damage_bonus, 56},
      {Button::MK, 5 + speed_penalty, 3, 10, 10 + damage_bonus, 66},
      {Button::HK, 8 + speed_penalty, 3, 16, 16 + damage_bonus, 74},
  };
}

SpecialMove hadouken() {
  SpecialMove m;
  m.name = "hadouken";
  m.motion = {2, 3, 6};
  m.damage = 16;
  m.startup = 10;
  m.active = 2;
  m.recovery_frames = 24;
  m.spawns_projectile = true;
  m.projectile_speed = 4;
  return m;
}

Roster build_default() {
  std::vector<CharacterSpec> chars;

  CharacterSpec ryu;
  ryu.character_id = 0;
  ryu.name = "Ryu";
  ryu.max_hp = config::kMaxHp;
  ryu.walk_speed = 2;
  ryu.jump_impulse = 11;
  ryu.jump_speed_x = 3;
  ryu.normals = standard_normals(0, 0);
  ryu.specials.push_back(hadouken());
  {
    SpecialMove tatsu;
    tatsu.name = "tatsumaki";
    tatsu.motion = {2, 1, 4};
    tatsu.trigger = TriggerClass::Kick;
    tatsu.damage = 14;
    tatsu.startup = 6;
    tatsu.active = 12;
    tatsu.recovery_frames = 18;
    tatsu.reach = 52;
    tatsu.vertical_reach = config::kDefaultVerticalReach;
    tatsu.forward_speed = 3;
    ryu.specials.push_back(tatsu);
  }
  chars.push_back(ryu);

  CharacterSpec ken;
  ken.character_id = 1;
  ken.name = "Ken";
  ken.max_hp = config::kMaxHp;
  ken.walk_speed = 2;
  ken.jump_impulse = 11;
  ken.jump_speed_x = 3;
  ken.normals = standard_normals(0, 0);
  {
    SpecialMove dp;
    dp.name = "shoryuken";
    dp.motion = {6, 2, 3};
    dp.damage = 24;
    dp.startup = 3;
    dp.active = 10;
    dp.recovery_frames = 28;
    dp.invincibility_frames = 8;
    dp.reach = 50;
    dp.vertical_reach = 110;
    ken.specials.push_back(dp);
  }
  ken.specials.push_back(hadouken());
  chars.push_back(ken);

  CharacterSpec honda;
  honda.character_id = 2;
  honda.name = "EHonda";
  honda.aliases = {"Honda", "E.Honda"};
  honda.max_hp = config::kMaxHp;
  honda.walk_speed = 2;
  honda.jump_impulse = 10;
  honda.jump_speed_x = 3;
  honda.normals = standard_normals(1, 1);
  {
    SpecialMove headbutt;
    headbutt.name = "sumo_headbutt";
    headbutt.motion = {6};
    headbutt.charge_frames = config::kChargeFrames;
    headbutt.damage = 20;
    headbutt.startup = 4;
    headbutt.active = 16;
    headbutt.recovery_frames = 22;
    headbutt.invincibility_frames = 4;
    headbutt.reach = 45;
    headbutt.vertical_reach = config::kDefaultVerticalReach;
    headbutt.forward_speed = 6;
    honda.specials.push_back(headbutt);
  }
  chars.push_back(honda);

  CharacterSpec gief;
  gief.character_id = 3;
  gief.name = "Zangief";
  gief.max_hp = config::kMaxHp;
  gief.walk_speed = 1;
  gief.jump_impulse = 10;
  gief.jump_speed_x = 2;
  gief.normals = standard_normals(1, 2);
  {
    SpecialMove grab;
    grab.name = "spinning_piledriver";
    grab.motion = {4, 2, 6};
    grab.damage = 30;
    grab.startup = 2;
    grab.active = 2;
    grab.recovery_frames = 30;
    grab.reach = 55;
    grab.vertical_reach = 10;
    grab.grab = true;
    gief.specials.push_back(grab);
  }
  chars.push_back(gief);

  return Roster(std::move(chars));
}

void validate(const CharacterSpec& c) {
  auto fail = [&](const std::string& what) {
    throw RosterError("character '" + c.name + "': " + what);
  };
  if (c.name.empty()) fail("empty name");
  if (c.max_hp <= 0) fail("max_hp must be positive");
  if (c.normals.size() != 6) fail("expected 6 normal attacks (LP..HK)");
  for (std::size_t i = 0; i < c.normals.size(); ++i) {
    const auto& n = c.normals[i];
    if (static_cast<int>(n.button) != static_cast<int>(Button::LP) + static_cast<int>(i))
      fail("normals must be listed in button order LP..HK");
    if (n.damage <= 0) fail("normal damage must be positive");
    if (n.active <= 0) fail("normal active frames must be positive");
  }
  for (const auto& m : c.specials) {
    if (m.damage <= 0) fail("special '" + m.name + "' damage must be positive");
    if (m.recovery_frames < 1) fail("special '" + m.name + "' needs recovery_frames >= 1");
    if (m.motion.empty()) fail("special '" + m.name + "' has an empty motion");
    for (int d : m.motion)
      if (d < 1 || d > 9) fail("special '" + m.name + "' has an invalid direction code");
    if (m.active <= 0) fail("special '" + m.name + "' active frames must be positive");
    if (m.spawns_projectile && m.projectile_speed <= 0)
      fail("special '" + m.name + "' projectile speed must be positive");
    if (m.charge_frames < 0) fail("special '" + m.name + "' negative charge_frames");
  }
}

const char* trigger_name(TriggerClass t) { return t == TriggerClass::Punch ? "punch" : "kick"; }

TriggerClass trigger_from(const std::string& s) {
  if (s == "punch") return TriggerClass::Punch;
  if (s == "kick") return TriggerClass::Kick;
  throw RosterError("unknown trigger class '" + s + "'");
}

Button button_from(const std::string& s) {
  for (int i = 0; i < kNumButtons; ++i)
    if (kButtonNames[i] == s) return static_cast<Button>(i);
  throw RosterError("unknown button '" + s + "'");
}

}  // namespace

const NormalAttack& CharacterSpec::normal_for(Button b) const {
  return normals.at(static_cast<int>(b) - static_cast<int>(Button::LP));
}

Roster::Roster(std::vector<CharacterSpec> characters) : characters_(std::move(characters)) {
  if (characters_.empty()) throw RosterError("roster is empty");
  for (std::size_t i = 0; i < characters_.size(); ++i) {
    if (characters_[i].character_id != static_cast<int>(i))
      throw RosterError("character ids must be 0..n-1 in order");
    validate(characters_[i]);
  }
}

const CharacterSpec& Roster::at(int character_id) const {
  if (!valid(character_id))
    throw RosterError("unknown character id " + std::to_string(character_id));
  return characters_[character_id];
}

std::optional<int> Roster::find(std::string_view name) const {
  for (const auto& c : characters_) {
    if (c.name == name) return c.character_id;
    for (const auto& a : c.aliases)
      if (a == name) return c.character_id;
  }
  return std::nullopt;
}

std::vector<std::string> Roster::names() const {
  std::vector<std::string> out;
  for (const auto& c : characters_) out.push_back(c.name);
  return out;
}

int Roster::max_reach() const {
  int r = 0;
  for (const auto& c : characters_) {
    for (const auto& n : c.normals) r = std::max(r, n.reach);
    for (const auto& s : c.specials) r = std::max(r, s.reach);
  }
  return r;
}

int Roster::max_recovery_frames() const {
  int r = 0;
  for (const auto& c : characters_)
    for (const auto& s : c.specials) r = std::max(r, s.recovery_frames);
  return r;
}

const Roster& default_roster() {
  static const Roster roster = build_default();
  return roster;
}

nlohmann::json roster_to_json(const Roster& roster) {
  nlohmann::json chars = nlohmann::json::array();
  for (const auto& c : roster.characters()) {
    nlohmann::json normals = nlohmann::json::array();
    for (const auto& n : c.normals) {
      normals.push_back({{"button", std::string(kButtonNames[static_cast<int>(n.button)])},
                         {"startup", n.startup},
                         {"active", n.active},
                         {"recovery", n.recovery},
                         {"damage", n.damage},
                         {"reach", n.reach}});
    }
    nlohmann::json specials = nlohmann::json::array();
    for (const auto& m : c.specials) {
      specials.push_back({{"name", m.name},
                          {"motion", m.motion},
                          {"trigger", trigger_name(m.trigger)},
                          {"charge_frames", m.charge_frames},
                          {"damage", m.damage},
                          {"startup", m.startup},
                          {"active", m.active},
                          {"recovery_frames", m.recovery_frames},
                          {"invincibility_frames", m.invincibility_frames},
                          {"reach", m.reach},
                          {"vertical_reach", m.vertical_reach},
                          {"forward_speed", m.forward_speed},
                          {"grab", m.grab},
                          {"spawns_projectile", m.spawns_projectile},
                          {"projectile_speed", m.projectile_speed}});
    }
    chars.push_back({{"character_id", c.character_id},
                     {"name", c.name},
                     {"aliases", c.aliases},
                     {"max_hp", c.max_hp},
                     {"walk_speed", c.walk_speed},
                     {"jump_impulse", c.jump_impulse},
                     {"jump_speed_x", c.jump_speed_x},
                     {"normals", normals},
                     {"specials", specials}});
  }
  return {{"spec_version", kRosterSpecVersion}, {"characters", chars}};
}

Roster roster_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.contains("spec_version")) throw RosterError("roster document lacks spec_version");
    if (doc.at("spec_version").get<int>() != kRosterSpecVersion)
      throw RosterError("unsupported roster spec_version " + doc.at("spec_version").dump());
    std::vector<CharacterSpec> chars;
    for (const auto& jc : doc.at("characters")) {
      CharacterSpec c;
      c.character_id = jc.at("character_id").get<int>();
      c.name = jc.at("name").get<std::string>();
      c.aliases = jc.value("aliases", std::vector<std::string>{});
      c.max_hp = jc.at("max_hp").get<int>();
      c.walk_speed = jc.at("walk_speed").get<int>();
      c.jump_impulse = jc.at("jump_impulse").get<int>();
      c.jump_speed_x = jc.at("jump_speed_x").get<int>();
      for (const auto& jn : jc.at("normals")) {
        NormalAttack n;
        n.button = button_from(jn.at("button").get<std::string>());
        n.startup = jn.at("startup").get<int>();
        n.active = jn.at("active").get<int>();
        n.recovery = jn.at("recovery").get<int>();
        n.damage = jn.at("damage").get<int>();
        n.reach = jn.at("reach").get<int>();
        c.normals.push_back(n);
      }
      for (const auto& jm : jc.at("specials")) {
        SpecialMove m;
        m.name = jm.at("name").get<std::string>();
        m.motion = jm.at("motion").get<std::vector<int>>();
        m.trigger = trigger_from(jm.at("trigger").get<std::string>());
        m.charge_frames = jm.at("charge_frames").get<int>();
        m.damage = jm.at("damage").get<int>();
        m.startup = jm.at("startup").get<int>();
        m.active = jm.at("active").get<int>();
        m.recovery_frames = jm.at("recovery_frames").get<int>();
        m.invincibility_frames = jm.at("invincibility_frames").get<int>();
        m.reach = jm.at("reach").get<int>();
        m.vertical_reach = jm.at("vertical_reach").get<int>();
        m.forward_speed = jm.at("forward_speed").get<int>();
        m.grab = jm.at("grab").get<bool>();
        m.spawns_projectile = jm.at("spawns_projectile").get<bool>();
        m.projectile_speed = jm.at("projectile_speed").get<int>();
        c.specials.push_back(m);
      }
      chars.push_back(std::move(c));
    }
    return Roster(std::move(chars));
  } catch (const nlohmann::json::exception& e) {
    throw RosterError(std::string("malformed roster document: ") + e.what());
  }
}

Roster load_roster(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RosterError("cannot open roster file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw RosterError("roster file " + path.string() + " is not valid JSON: " + e.what());
  }
  return roster_from_json(doc);
}

}  // namespace tta::env
