#include "tta/llm/prompt.hpp"

namespace tta::llm {

const std::string& base_template() {
  static const std::string text =
      R"(You are a "Hyper Game-Playing Agent" large language model. Your goal is to choose the next opponent, which is a trained deep reinforecement learning (DRL) model, for a human player in video game, Street Fighter II, in order to enhance their overall enjoyment. You must make a decision that balances difficulty, the player's recent performance, diversity of opponents, and other factors described below.

1) First, you should follow the Principles for Opponent Selection:
{SELECTION_PRINCIPLES}

2) Second, you should follow the Output Format Requirements:
{OUTPUT_FORMAT_REQUIREMENT}

3) Third, you should understand and utilize the Playing Data Overview:
{PLAYING_DATA}

4) Fourth, you should select an opponents from the Agent Archive.
Be aware, it is the model decides the difficulty but not suggested character for that model. The suggested characters means those characters are suitable for the corresponding type.
The dictionary below is the Agent Archive (It is stored in a dictionary format):
{ARCHIVE_INFO}

5) Here is an Q&A example for your reference:
{FEW_SHOT_EXAMPLES}


(Explicitly instruct the model to respond in valid JSON format, containing mandatory fields:
  - "chosen_agent_type"
  - "chosen_agent_model_path"
  - "chosen_agent_character"
)
Important Note:
1. Output only the Chain of Thought reasoning and one JSON object in your answer.Do not include any additional contents.
2. Include the three required fields: "chosen_agent_type", "chosen_agent_model_path", and "chosen_character".
3. You should include Chain of Thought reasoning parts, but they mush be OUTSIDE of and BEFORE the JSON object. Make sure your Chain of Thought Reasoning is concise. THE LENGTH OF YOUR TOTAL OUTPUT SHOULD NOT BE MORE THEN 300 WORDS!!!

Now, based on the data and guidelines above, please provide your final decision in strict format:)";
  return text;
}

const std::string& selection_principles() {
  static const std::string text =
      R"(a). Difficulty Adjustment (the most important):

   - If the player's win rate is very low or they are on a losing streak, choose an easier opponent.

   - If the player’s win rate is high or they are on a winning streak, choose a stronger opponent.

   - Overall, try to make the player wins, but still challenging.

b). Opponent Diversity:

   - Prefer an agent type and character that the player has not yet faced or has faced only a few times.

   - Rotate among different play styles (defensive, projectile-heavy, rushdown, etc.) so the player experiences variety.

c. Player Behaviors:

   - If the player rarely uses special moves (e.g., < 2 per match), assume they are a beginner and avoid overwhelming them with advanced AI.

   - If the player often uses combos or advanced techniques, they are more skilled; pick a challenging agent to maintain fun.

d). Agent/Character Features:

   - When possible, select agents that demonstrate distinct strategies (e.g., projectile spamming, grappling, or strong aerial attacks).

   - Avoid repeatedly using the same type/character unless necessary for balancing difficulty.

e). CONSIDER PLAYER'S FEEDBACK:

    LAST BUT NOT LEAST, IT IS THE MOST IMPORTANT Check "player's_feedback" and "the_last_opponents" in the provided "playing_data" dictionary. If they provided any feedback, consider how they feel and what they suggest.)";
  return text;
}

const std::string& output_format_requirement() {
  static const std::string text =
      R"(Please respond in strict JSON format with the following mandatory fields:

- "chosen_agent_type" (string)
- "chosen_agent_model_path" (string)
- "chosen_agent_character" (string)

All the three above must be present inside of the JSON object. You should include Chain of Thought reasoning parts, but they mush be OUTSIDE of and BEFORE the JSON object. Make sure your Chain of Thought Reasoning is concise. THE LENGTH OF YOUR TOTAL OUTPUT SHOULD NOT BE MORE THEN 300 WORDS!!!
Only output the Chain of Thought reasoning and one JSON object in your final answer, do not include any additional contents.)";
  return text;
}

const std::string& icl_example_full() {
  static const std::string text =
      R"((This is the begining of In-context learning texts)

The Question Asked by User:

You are a "Hyper Game-Playing Agent" large language model. Your goal is to choose the next opponent for human players to make the game-playing more enjoyable to human players.
(The playing data and archives are omitted in this example.)

The Ideal Answer for the Question:
### Reasoning
(BE AWARE! THE DATA MENTIONED IN THE EXAMPLE IS NOT TRUE DATA, JUST AN EXAMPLE!!)
The player's overall win rate is 0.38 with an average of 1.5 special moves per match, indicating a beginner. To avoid overwhelming them, lower-score AIs are preferable.

They've already faced Ryu, Balrog, Ken, Sagat, Chunli, and EHonda, so we should consider new types/characters. "Projectile_type" with a -0.17 score is weaker, and Sagat is an available character the player hasn't fought much.
Thus, "lstm_projectile2" controlling Sagat is a suitable choice for balanced difficulty and novelty.

### JSON
{
    "chosen_agent_type": "projectile_type",
    "chosen_agent_model_path": "agent_models/agents_archive/projectile_type/lstm_projectile2",
    "chosen_agent_character": "Sagat"
}
(This is the end of In-context learning texts))";
  return text;
}

const std::string& icl_example_simplified() {
  static const std::string text =
      R"((This is the begining of In-context learning texts)

The Question Asked by User:

You are a "Hyper Game-Playing Agent" large language model. Your goal is to choose the next opponent for human players to make the game-playing more enjoyable to human players.
(The playing data and archives are omitted in this example.)

The Ideal Answer for the Question:
(Your reasoning ... ...)
###json
{
    "chosen_agent_type": "projectile_type",
    "chosen_agent_model_path": "agent_models/agents_archive/projectile_typee/lstm_projectile2",
    "chosen_agent_character": "Sagat"
}

(This is the end of In-context learning texts))";
  return text;
}

}  // namespace tta::llm
