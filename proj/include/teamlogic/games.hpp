#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teamlogic/model.hpp"
#include "teamlogic/semantics.hpp"
#include "teamlogic/syntax.hpp"

namespace teamlogic {

enum class Player { I, II };

struct UnsupportedAtom : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ArenaTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One syntactic occurrence of a subformula, with the variables in scope.
struct Instance {
    Path path;
    FormulaPtr formula;
    std::vector<std::string> vars;
    std::vector<int> children;
};

struct Position {
    int instance = 0;
    Tuple values;
    friend auto operator<=>(const Position&, const Position&) = default;
};

struct Arena {
    std::vector<Instance> instances;
    std::vector<Position> positions;
    std::vector<int> initial;
    std::vector<std::vector<int>> successors;
    std::vector<Player> turn;
    std::vector<char> terminal;
    std::vector<char> winning;  // terminals only: II wins

    const FormulaPtr& formula(int p) const { return instances[static_cast<std::size_t>(positions[static_cast<std::size_t>(p)].instance)].formula; }
    Assignment assignment(int p) const;
};

Arena build_arena(const Model& m, const Team& x, const FormulaPtr& f, std::size_t max_positions = 20000);

// Player II's choices: position id to a nonempty set of successor ids.
using Strategy = std::map<int, std::vector<int>>;

using Play = std::vector<int>;
std::vector<Play> plays_following(const Arena& a, const Strategy& tau);
bool is_uniform(const Model& m, const Arena& a, const Strategy& tau);
bool is_winning(const Arena& a, const Strategy& tau);
bool is_deterministic(const Strategy& tau);

// Throws BudgetExceeded when the search does not finish within the budget.
std::optional<Strategy> find_uniform_winning(const Model& m, const Arena& a, bool deterministic, Budget b = {});

std::string render_position(const Model& m, const Arena& a, int p);
std::vector<std::string> render_strategy(const Model& m, const Arena& a, const Strategy& tau);

}  // namespace teamlogic
