#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "wtown/engine/types.hpp"

namespace wtown {

// Field names follow schema/game_record.schema.json. Keys are emitted in
// sorted order so that a record serializes to the same bytes everywhere.

void to_json(nlohmann::json& j, const PlayerId& id);
void from_json(const nlohmann::json& j, PlayerId& id);
void to_json(nlohmann::json& j, const PersonaText& p);
void from_json(const nlohmann::json& j, PersonaText& p);
void to_json(nlohmann::json& j, const PlayerSpec& p);
void from_json(const nlohmann::json& j, PlayerSpec& p);
void to_json(nlohmann::json& j, const PlayerState& p);
void from_json(const nlohmann::json& j, PlayerState& p);
void to_json(nlohmann::json& j, const GameConfig& c);
void from_json(const nlohmann::json& j, GameConfig& c);
void to_json(nlohmann::json& j, const Bid& b);
void from_json(const nlohmann::json& j, Bid& b);
void to_json(nlohmann::json& j, const Winner& w);
void from_json(const nlohmann::json& j, Winner& w);
void to_json(nlohmann::json& j, const RoundRecord& r);
void from_json(const nlohmann::json& j, RoundRecord& r);
void to_json(nlohmann::json& j, const ExperimentLabel& e);
void from_json(const nlohmann::json& j, ExperimentLabel& e);
void to_json(nlohmann::json& j, const GameRecord& g);
void from_json(const nlohmann::json& j, GameRecord& g);

class SchemaError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One record per line, no trailing newline.
std::string to_json_line(const GameRecord& record);

// Throws SchemaError on malformed input or an unsupported schema_version.
GameRecord parse_game_record(const std::string& line);

std::vector<GameRecord> read_jsonl(std::istream& in);
std::vector<GameRecord> read_jsonl_file(const std::string& path);

}  // namespace wtown
