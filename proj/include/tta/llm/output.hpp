#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/archive/archive.hpp"

namespace tta::llm {

struct JsonBlock {
  std::size_t begin = 0;  // byte offsets into the raw text, end exclusive
  std::size_t end = 0;
  nlohmann::json value;   // always an object
};

struct ParsedOutput {
  std::string raw;
  std::string reasoning;  // text before the first block, think tags stripped, trimmed
  std::vector<JsonBlock> json_blocks;
  int word_count = 0;     // whitespace-delimited tokens of the whole text
};

/// Finds every balanced top-level brace block (braces inside JSON strings are
/// ignored) that parses as a JSON object. Never throws.
ParsedOutput parse_output(std::string_view text);

struct SelectionResult {
  std::string chosen_agent_type;
  std::string chosen_agent_model_path;
  std::string chosen_agent_character;
  bool operator==(const SelectionResult&) const = default;
};

nlohmann::ordered_json selection_to_json(const SelectionResult& s);
archive::Selection to_archive_selection(const SelectionResult& s);

enum class Failure { NoJson, MissingField, UnknownPath, TypeMismatch, UnknownCharacter, Transport };
std::string to_string(Failure f);

/// The last block is the answer; all three fields must be non-empty strings
/// and resolve against the manifest and roster.
std::variant<SelectionResult, Failure> validate(const ParsedOutput& parsed, const archive::ArchiveManifest& manifest,
                                                const env::Roster& roster = env::default_roster());

}  // namespace tta::llm
