#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "teamlogic/model.hpp"
#include "teamlogic/semantics.hpp"

namespace teamlogic {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Model model_from_json(const nlohmann::json& j, bool allow_unit = false);
nlohmann::json model_to_json(const Model& m);
Team team_from_json(const Model& m, const nlohmann::json& j);
nlohmann::json team_to_json(const Model& m, const Team& x);

nlohmann::json read_json_file(const std::string& path);
Model load_model(const std::string& path, bool allow_unit = false);
Team load_team(const Model& m, const std::string& path);

// A self-contained example: model, team, formula and the expected verdicts.
struct Fixture {
    std::string name;
    Model model;
    Team team;
    std::string formula;
    std::map<Mode, std::string> expect;
    nlohmann::json raw;
};

Fixture load_fixture(const std::string& path, bool allow_unit = false);

}  // namespace teamlogic
