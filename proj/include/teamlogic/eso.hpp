#pragma once

#include <memory>
#include <string>
#include <vector>

#include "teamlogic/semantics.hpp"

namespace teamlogic {

struct SOSymbol {
    std::string name;
    int arity = 0;
    bool function = false;
    // Optional upper bound for relation symbols: the extension is contained in
    // {bound_vars : bound}. The matrix enforces the same containment; the bound
    // only narrows the search.
    FormulaPtr bound;
    std::vector<std::string> bound_vars;
};

// exists prefix . matrix, with one free relation symbol a_name of arity a_arity.
struct ESOFormula {
    std::vector<SOSymbol> prefix;
    std::string a_name = "A";
    int a_arity = 0;
    FormulaPtr matrix;
};

std::string render(const ESOFormula& phi);

// Lax-semantics translation: M |=_X f iff M |= phi(Rel_vs(X)).
ESOFormula ie_to_eso(const FormulaPtr& f, const std::vector<std::string>& vs);

struct EsoStats {
    std::uint64_t candidates = 0;  // interpretations tried, or search decisions when grounding
};

// Ground grounds the matrix over the domain and searches for a satisfying
// propositional assignment; Enumerate tries every interpretation of the prefix.
enum class EsoMethod { Ground, Enumerate };

bool eval_eso(const Model& m, const ESOFormula& phi, const TupleSet& a, Budget b = {}, EsoStats* stats = nullptr,
              EsoMethod method = EsoMethod::Ground);

// Grounds phi once and decides it for many interpretations of A.
class EsoChecker {
public:
    EsoChecker(const Model& m, const ESOFormula& phi);
    ~EsoChecker();
    EsoChecker(const EsoChecker&) = delete;
    EsoChecker& operator=(const EsoChecker&) = delete;

    bool holds(const TupleSet& a, Budget b = {}, EsoStats* stats = nullptr);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct SkolemNF {
    int a_arity = 0;
    std::vector<std::string> xs, ys;
    std::vector<std::pair<std::string, std::vector<std::string>>> fns;
    FormulaPtr psi;
};

// "A/1 ; x: x ; y: ; f1: (x) ; f2: (x) ; psi: f1(x) = f2(x)"
SkolemNF parse_skolemnf(const std::string& text);
std::string render(const SkolemNF& nf);
void validate(const SkolemNF& nf);

// exists f . forall x y . ((A(x) <-> f1(x) = f2(x)) /\ psi)
ESOFormula skolemnf_to_eso(const SkolemNF& nf);
// Equivalent to skolemnf_to_eso on nonempty teams over vs.
FormulaPtr skolemnf_to_ie(const SkolemNF& nf, const std::vector<std::string>& vs, bool expand_dep = false);

}  // namespace teamlogic
