#include "tta/llm/output.hpp"

#include <cctype>

namespace tta::llm {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// End (exclusive) of the balanced block opening at `open`, or npos.
std::size_t block_end(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false, escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

void erase_all(std::string& s, std::string_view what) {
  for (auto at = s.find(what); at != std::string::npos; at = s.find(what, at)) s.erase(at, what.size());
}

std::string trim(std::string s) {
  std::size_t a = 0, b = s.size();
  while (a < b && is_space(s[a])) ++a;
  while (b > a && is_space(s[b - 1])) --b;
  return s.substr(a, b - a);
}

const nlohmann::json* string_field(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get_ref<const std::string&>().empty()) return nullptr;
  return &*it;
}

}  // namespace

ParsedOutput parse_output(std::string_view text) {
  ParsedOutput out;
  out.raw = std::string(text);
  std::size_t i = 0;
  while ((i = text.find('{', i)) != std::string_view::npos) {
    const auto end = block_end(text, i);
    if (end == std::string_view::npos) {
      ++i;
      continue;
    }
    auto value = nlohmann::json::parse(text.substr(i, end - i), nullptr, false);
    if (!value.is_discarded() && value.is_object()) out.json_blocks.push_back({i, end, std::move(value)});
    i = end;
  }
  std::string before(text.substr(0, out.json_blocks.empty() ? text.size() : out.json_blocks.front().begin));
  erase_all(before, "</think>");
  erase_all(before, "<think>");
  out.reasoning = trim(std::move(before));
  bool in_word = false;
  for (char c : text) {
    if (is_space(c)) in_word = false;
    else if (!in_word) {
      in_word = true;
      ++out.word_count;
    }
  }
  return out;
}

nlohmann::ordered_json selection_to_json(const SelectionResult& s) {
  nlohmann::ordered_json j;
  j["chosen_agent_type"] = s.chosen_agent_type;
  j["chosen_agent_model_path"] = s.chosen_agent_model_path;
  j["chosen_agent_character"] = s.chosen_agent_character;
  return j;
}

archive::Selection to_archive_selection(const SelectionResult& s) {
  return {s.chosen_agent_type, s.chosen_agent_model_path, s.chosen_agent_character};
}

std::string to_string(Failure f) {
  switch (f) {
    case Failure::NoJson: return "no_json";
    case Failure::MissingField: return "missing_field";
    case Failure::UnknownPath: return "unknown_path";
    case Failure::TypeMismatch: return "type_mismatch";
    case Failure::UnknownCharacter: return "unknown_character";
    case Failure::Transport: return "transport";
  }
  return "unknown";
}

std::variant<SelectionResult, Failure> validate(const ParsedOutput& parsed, const archive::ArchiveManifest& manifest,
                                                const env::Roster& roster) {
  if (parsed.json_blocks.empty()) return Failure::NoJson;
  const auto& obj = parsed.json_blocks.back().value;
  const auto* type = string_field(obj, "chosen_agent_type");
  const auto* path = string_field(obj, "chosen_agent_model_path");
  const auto* character = string_field(obj, "chosen_agent_character");
  if (!type || !path || !character) return Failure::MissingField;
  SelectionResult s{type->get<std::string>(), path->get<std::string>(), character->get<std::string>()};
  if (const auto f = archive::check_selection(manifest, roster, to_archive_selection(s))) {
    switch (*f) {
      case archive::ResolveFailure::UnknownPath: return Failure::UnknownPath;
      case archive::ResolveFailure::UnknownType:
      case archive::ResolveFailure::TypeMismatch: return Failure::TypeMismatch;
      case archive::ResolveFailure::UnknownCharacter: return Failure::UnknownCharacter;
    }
  }
  return s;
}

}  // namespace tta::llm
