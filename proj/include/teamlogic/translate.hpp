#pragma once

#include <set>
#include <string>
#include <vector>

#include "teamlogic/syntax.hpp"

namespace teamlogic {

struct TranslationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Hands out "_v<i>" names that avoid everything registered so far.
class NameSupply {
public:
    NameSupply() = default;
    explicit NameSupply(const FormulaPtr& f) : taken_(all_names(f)) {}
    explicit NameSupply(std::set<std::string> taken) : taken_(std::move(taken)) {}
    void reserve(const FormulaPtr& f);
    void reserve(const Terms& ts);
    std::vector<std::string> take(int count);
    std::string take() { return take(1)[0]; }

private:
    std::set<std::string> taken_;
};

FormulaPtr const_pushout(const FormulaPtr& f);
FormulaPtr const_normal_form(const FormulaPtr& f);
FormulaPtr const_sentence_collapse(const FormulaPtr& f);

// Atom translations. Without a supply, fresh names avoid the atom's own names.
FormulaPtr dep_to_indep(const Terms& ts);
FormulaPtr dep_to_exc(const Terms& ts, NameSupply* names = nullptr);
FormulaPtr exc_to_dep(const Terms& t1s, const Terms& t2s, NameSupply* names = nullptr);
FormulaPtr equi_to_inc(const Terms& t1s, const Terms& t2s);
FormulaPtr inc_to_equi(const Terms& t1s, const Terms& t2s, NameSupply* names = nullptr);
FormulaPtr inc_to_indep(const Terms& t1s, const Terms& t2s, NameSupply* names = nullptr);
// With expand_dep the four dependence atoms are rewritten through dep_to_exc.
FormulaPtr indep_to_ie(const Terms& t1s, const Terms& t2s, const Terms& t3s, NameSupply* names = nullptr,
                       bool expand_dep = false);

using AtomSet = std::set<Kind>;
AtomSet parse_atom_set(const std::string& text);  // e.g. "incl,excl"
// Rewrites every dependency atom whose kind is outside target.
FormulaPtr compile(const FormulaPtr& f, const AtomSet& target);

// Holds iff no tuple reachable from a through psi-steps equals b.
FormulaPtr tc_sentence(const FormulaPtr& psi, const std::vector<std::string>& xs, const std::vector<std::string>& ys,
                       const Terms& a, const Terms& b);
// tc_sentence for psi := y = S(S(x)) from the constant 0 to the constant e.
FormulaPtr odd_cardinality_sentence();

}  // namespace teamlogic
