#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace teamlogic {

struct Term {
    enum class Kind { Var, Const, App };
    Kind kind = Kind::Var;
    std::string name;
    std::vector<Term> args;

    static Term var(std::string n) { return {Kind::Var, std::move(n), {}}; }
    static Term constant(std::string n) { return {Kind::Const, std::move(n), {}}; }
    static Term app(std::string f, std::vector<Term> a) { return {Kind::App, std::move(f), std::move(a)}; }

    bool is_var() const { return kind == Kind::Var; }
    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
};

using Terms = std::vector<Term>;

Terms vars(const std::vector<std::string>& names);

enum class Kind { Lit, Dep, Indep, Incl, Excl, Equi, Or, And, Exists, Forall };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable AST node. Literals carry either an equality (rel empty, two args)
// or a relational atom. Quantifier bodies live in `left`.
struct Formula {
    Kind kind = Kind::Lit;
    bool positive = true;
    std::string rel;
    Terms args;
    Terms t1, t2, t3;
    std::string var;
    FormulaPtr left, right;

    bool is_eq() const { return kind == Kind::Lit && rel.empty(); }
    bool is_binary() const { return kind == Kind::Or || kind == Kind::And; }
    bool is_quant() const { return kind == Kind::Exists || kind == Kind::Forall; }
    bool is_dependency_atom() const {
        return kind == Kind::Dep || kind == Kind::Indep || kind == Kind::Incl || kind == Kind::Excl ||
               kind == Kind::Equi;
    }
    const FormulaPtr& body() const { return left; }
};

FormulaPtr eq(Term a, Term b, bool positive = true);
FormulaPtr neq(Term a, Term b);
FormulaPtr rel(std::string name, Terms args, bool positive = true);
FormulaPtr dep(Terms ts);
FormulaPtr indep(Terms a, Terms b, Terms c);
FormulaPtr incl(Terms a, Terms b);
FormulaPtr excl(Terms a, Terms b);
FormulaPtr equi(Terms a, Terms b);
FormulaPtr lor(FormulaPtr a, FormulaPtr b);
FormulaPtr land(FormulaPtr a, FormulaPtr b);
FormulaPtr exists(std::string v, FormulaPtr body);
FormulaPtr forall(std::string v, FormulaPtr body);
FormulaPtr exists(const std::vector<std::string>& vs, FormulaPtr body);
FormulaPtr forall(const std::vector<std::string>& vs, FormulaPtr body);
// Left-nested conjunction/disjunction; empty input is an error.
FormulaPtr land_all(const std::vector<FormulaPtr>& fs);
FormulaPtr lor_all(const std::vector<FormulaPtr>& fs);
// Componentwise tuple equality (conjunction) and its dual (disjunction).
FormulaPtr tuple_eq(const Terms& a, const Terms& b);
FormulaPtr tuple_neq(const Terms& a, const Terms& b);

bool equal(const FormulaPtr& a, const FormulaPtr& b);

struct Signature {
    std::map<std::string, int> relations;
    std::map<std::string, int> functions;
    std::set<std::string> constants;

    bool declares(const std::string& name) const {
        return relations.count(name) || functions.count(name) || constants.count(name);
    }
    void check_unique() const;
};

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

// Names not declared in sig are rejected unless `infer` is set, in which case
// relation and function symbols are added to sig as they are encountered.
FormulaPtr parse(const std::string& text, const Signature& sig);
FormulaPtr parse_infer(const std::string& text, Signature& sig);
Term parse_term(const std::string& text, const Signature& sig);

std::string render(const FormulaPtr& f);
std::string render(const Term& t);
std::string render(const Terms& ts, const char* sep = ", ");

std::set<std::string> free_variables(const FormulaPtr& f);
void term_variables(const Term& t, std::set<std::string>& out);
std::set<std::string> term_variables(const Terms& ts);
// Every identifier occurring in f: variables (bound or free) and symbol names.
std::set<std::string> all_names(const FormulaPtr& f);
std::vector<std::string> fresh_vars(const FormulaPtr& f, int count);
std::vector<std::string> fresh_vars(const std::set<std::string>& taken, int count);

using Path = std::vector<std::uint8_t>;
std::string render_path(const Path& p);
std::vector<std::pair<Path, FormulaPtr>> subformula_instances(const FormulaPtr& f);

bool is_first_order(const FormulaPtr& f);
// NNF dual of a first-order formula; throws on dependency atoms.
FormulaPtr negate(const FormulaPtr& f);
// Capture-avoiding substitution of variables by terms.
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, Term>& sub);
Term substitute(const Term& t, const std::map<std::string, Term>& sub);
// Flattened operands of a left/right nested chain of `k`.
void flatten(const FormulaPtr& f, Kind k, std::vector<FormulaPtr>& out);

}  // namespace teamlogic
