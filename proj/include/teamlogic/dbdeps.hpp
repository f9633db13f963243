#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "teamlogic/model.hpp"

namespace teamlogic {

struct DBError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DBRelation {
    std::vector<std::string> attributes;
    std::set<std::vector<std::string>> tuples;

    int index(const std::string& attr) const;
    std::vector<std::string> project(const std::vector<std::string>& row, const std::vector<std::string>& attrs) const;
};

DBRelation parse_csv(const std::string& text);
DBRelation load_csv(const std::string& path);
std::string to_csv(const DBRelation& r);
// Columns named after the team variables, values are domain labels.
DBRelation relation_of_team(const Model& m, const Team& x);

// A(x, y) or x = y inside a tgd/egd; arguments are variables.
struct DAtom {
    bool equality = false;
    std::string rel;
    std::vector<std::string> args;
    friend bool operator==(const DAtom&, const DAtom&) = default;
    friend auto operator<=>(const DAtom&, const DAtom&) = default;
};

struct Dependency {
    enum class Kind { Ind, Exd, Fd, Tgd, Egd };
    Kind kind = Kind::Ind;
    std::vector<std::string> xs, ys;  // ind/exd tuples; fd determinant and the single dependent in ys
    std::vector<DAtom> body, head;
    std::vector<std::string> exists;

    static Dependency ind(std::vector<std::string> a, std::vector<std::string> b);
    static Dependency exd(std::vector<std::string> a, std::vector<std::string> b);
    static Dependency fd(std::vector<std::string> a, std::string b);
    friend bool operator==(const Dependency&, const Dependency&) = default;
    friend auto operator<=>(const Dependency&, const Dependency&) = default;
};

Dependency parse_dependency(const std::string& text);
std::string render(const Dependency& d);

struct Violation {
    std::vector<std::vector<std::string>> rows;
};

// Tgd/egd variables range over the active domain plus `universe`.
std::optional<Violation> find_violation(const DBRelation& r, const Dependency& d,
                                        const std::vector<std::string>& universe = {});
bool check_dependency(const DBRelation& r, const Dependency& d, const std::vector<std::string>& universe = {});

enum class AxiomSystem { IncOnly, IncExc };
AxiomSystem parse_system(const std::string& s);

struct Derivation {
    std::string rule;  // premise, I1, I2, I3, E1, E2, E3, IE1, IE2
    Dependency conclusion;
    std::vector<int> pi;  // 1-based, for I2 and E2
    std::vector<Derivation> children;

    int height() const;
    int size() const;
};

std::string render(const Derivation& d);

// Breadth-first saturation by derivation height; tuples are restricted to the
// attributes of premises and goal and to the largest width among them.
std::optional<Derivation> derive(const std::vector<Dependency>& premises, const Dependency& goal, AxiomSystem system,
                                 int depth);

// Re-checks every node against its axiom schema; returns an error message or "".
std::string verify(const Derivation& d, const std::vector<Dependency>& premises, AxiomSystem system);

struct ImplicationResult {
    bool implied = true;
    std::optional<DBRelation> counterexample;
    std::uint64_t relations = 0;
};

// Bounded search for a relation over {0..universe_size-1} with at most
// max_tuples tuples that satisfies the premises and violates the goal.
ImplicationResult semantic_implies(const std::vector<Dependency>& premises, const Dependency& goal, int universe_size,
                                   int max_tuples, std::uint64_t max_relations = 50'000'000);

}  // namespace teamlogic
