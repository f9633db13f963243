#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "teamlogic/syntax.hpp"

namespace teamlogic {

using Elem = int;
using Tuple = std::vector<Elem>;
using TupleSet = std::set<Tuple>;

struct Function {
    int arity = 0;
    std::vector<Elem> table;  // indexed by the mixed-radix code of the arguments
};

// Finite structure. Elements are the indices into `domain`; labels are kept for I/O.
class Model {
public:
    Model() = default;
    explicit Model(std::vector<std::string> domain, bool allow_unit = false);

    int size() const { return static_cast<int>(domain_.size()); }
    const std::vector<std::string>& domain() const { return domain_; }
    const std::string& label(Elem e) const { return domain_.at(e); }
    Elem element(const std::string& label) const;

    void set_constant(const std::string& name, Elem e);
    void set_relation(const std::string& name, int arity, TupleSet tuples);
    void set_function(const std::string& name, int arity, std::vector<Elem> table);
    void set_function(const std::string& name, const std::map<Tuple, Elem>& graph, int arity);

    const std::map<std::string, Elem>& constants() const { return constants_; }
    const std::map<std::string, std::pair<int, TupleSet>>& relations() const { return relations_; }
    const std::map<std::string, Function>& functions() const { return functions_; }

    Elem constant(const std::string& name) const;
    bool holds(const std::string& rel, const Tuple& args) const;
    Elem apply(const std::string& fn, const Tuple& args) const;
    std::size_t code(const Tuple& args) const;

    Signature signature() const;

private:
    std::vector<std::string> domain_;
    std::map<std::string, Elem> index_;
    std::map<std::string, Elem> constants_;
    std::map<std::string, std::pair<int, TupleSet>> relations_;
    std::map<std::string, Function> functions_;
    void check_fresh(const std::string& name) const;
};

using Assignment = std::map<std::string, Elem>;

// A set of assignments over a common ordered variable tuple. Rows are kept
// sorted and duplicate-free.
struct Team {
    std::vector<std::string> vars;
    std::vector<Tuple> rows;

    Team() = default;
    Team(std::vector<std::string> v, std::vector<Tuple> r);

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
    int column(const std::string& v) const;
    Assignment assignment(std::size_t i) const;
    void normalize();
    friend bool operator==(const Team&, const Team&) = default;
};

Team empty_assignment_team();

Elem eval_term(const Model& m, const Assignment& s, const Term& t);
Team restrict(const Team& x, const std::set<std::string>& v);
Team extend_universal(const Team& x, const std::string& var, const Model& m);
Team extend_function(const Team& x, const std::string& var, const std::vector<Elem>& choice);
Team extend_function(const Team& x, const std::string& var, const std::function<Elem(const Assignment&)>& f);
Team extend_multifunction(const Team& x, const std::string& var, const std::vector<std::vector<Elem>>& choice);
TupleSet team_relation(const Model& m, const Team& x, const Terms& ts);
std::vector<Team> enumerate_teams(const Model& m, const std::vector<std::string>& vars, int max_rows);
void for_each_team(const Model& m, const std::vector<std::string>& vars, int max_rows,
                   const std::function<void(const Team&)>& fn);

// Tarski satisfaction of a first-order formula by a single assignment.
bool tarski(const Model& m, const Assignment& s, const FormulaPtr& f);

std::string render_assignment(const Model& m, const Team& x, std::size_t row);
std::string render_team(const Model& m, const Team& x);

}  // namespace teamlogic
