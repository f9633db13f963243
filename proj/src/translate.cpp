#include "teamlogic/translate.hpp"

#include <algorithm>
#include <sstream>

namespace teamlogic {

namespace {

void term_names(const Term& t, std::set<std::string>& out) {
    out.insert(t.name);
    for (const auto& a : t.args) term_names(a, out);
}

std::set<std::string> names_of(std::initializer_list<const Terms*> groups) {
    std::set<std::string> out;
    for (const auto* g : groups)
        for (const auto& t : *g) term_names(t, out);
    return out;
}

FormulaPtr rebuild(const FormulaPtr& f, FormulaPtr l, FormulaPtr r) {
    auto g = std::make_shared<Formula>(*f);
    g->left = std::move(l);
    g->right = std::move(r);
    return g;
}

Terms concat(std::initializer_list<const Terms*> parts) {
    Terms out;
    for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
}

bool is_constancy(const FormulaPtr& f) { return f->kind == Kind::Dep && f->t1.size() == 1; }

// Replaces the first constancy atom in preorder by z = t.
FormulaPtr replace_first_constancy(const FormulaPtr& f, const std::string& z, bool& done) {
    if (done) return f;
    if (is_constancy(f)) {
        done = true;
        return eq(Term::var(z), f->t1[0]);
    }
    if (f->is_binary()) {
        auto l = replace_first_constancy(f->left, z, done);
        auto r = replace_first_constancy(f->right, z, done);
        return rebuild(f, l, r);
    }
    if (f->is_quant()) return rebuild(f, replace_first_constancy(f->left, z, done), nullptr);
    return f;
}

void check_constancy_logic(const FormulaPtr& f) {
    if (f->is_dependency_atom() && !is_constancy(f))
        throw TranslationError("not a constancy logic formula: contains " + render(f));
    if (f->left) check_constancy_logic(f->left);
    if (f->right) check_constancy_logic(f->right);
}

NameSupply& supply(NameSupply* given, std::initializer_list<const Terms*> groups, NameSupply& own) {
    if (given) return *given;
    own = NameSupply(names_of(groups));
    return own;
}

}  // namespace

void NameSupply::reserve(const FormulaPtr& f) {
    auto n = all_names(f);
    taken_.insert(n.begin(), n.end());
}

void NameSupply::reserve(const Terms& ts) {
    for (const auto& t : ts) term_names(t, taken_);
}

std::vector<std::string> NameSupply::take(int count) {
    auto out = fresh_vars(taken_, count);
    taken_.insert(out.begin(), out.end());
    return out;
}

FormulaPtr const_pushout(const FormulaPtr& f) {
    std::string z = fresh_vars(f, 1)[0];
    bool done = false;
    auto body = replace_first_constancy(f, z, done);
    if (!done) throw TranslationError("no constancy atom to push out");
    return exists(z, land(dep({Term::var(z)}), body));
}

FormulaPtr const_normal_form(const FormulaPtr& f) {
    check_constancy_logic(f);
    NameSupply names(f);
    std::vector<std::string> zs;
    FormulaPtr body = f;
    while (true) {
        bool done = false;
        replace_first_constancy(body, "", done);
        if (!done) break;
        std::string z = names.take();
        done = false;
        body = replace_first_constancy(body, z, done);
        zs.push_back(z);
    }
    if (zs.empty()) return f;
    std::vector<FormulaPtr> parts;
    for (const auto& z : zs) parts.push_back(dep({Term::var(z)}));
    parts.push_back(body);
    return exists(zs, land_all(parts));
}

FormulaPtr const_sentence_collapse(const FormulaPtr& f) {
    if (!free_variables(f).empty()) throw TranslationError("not a sentence");
    std::vector<std::string> zs;
    FormulaPtr cur = f;
    while (cur->kind == Kind::Exists) {
        zs.push_back(cur->var);
        cur = cur->left;
    }
    std::vector<FormulaPtr> conj;
    flatten(cur, Kind::And, conj);
    std::vector<FormulaPtr> kept;
    bool dropped = false;
    for (const auto& c : conj) {
        if (is_constancy(c) && c->t1[0].is_var() && std::find(zs.begin(), zs.end(), c->t1[0].name) != zs.end()) {
            dropped = true;
            continue;
        }
        if (!is_first_order(c)) throw TranslationError("not in constancy normal form: " + render(c));
        kept.push_back(c);
    }
    if (!dropped) return f;
    FormulaPtr psi = kept.empty() ? eq(Term::var(zs[0]), Term::var(zs[0])) : land_all(kept);
    return exists(zs, psi);
}

FormulaPtr dep_to_indep(const Terms& ts) {
    if (ts.empty()) throw TranslationError("dep needs at least one term");
    Terms det(ts.begin(), ts.end() - 1);
    return indep(det, {ts.back()}, {ts.back()});
}

FormulaPtr dep_to_exc(const Terms& ts, NameSupply* names) {
    if (ts.empty()) throw TranslationError("dep needs at least one term");
    NameSupply own;
    NameSupply& ns = supply(names, {&ts}, own);
    Term z = Term::var(ns.take());
    Terms det(ts.begin(), ts.end() - 1);
    Terms left = det, right = det;
    left.push_back(z);
    right.push_back(ts.back());
    return forall(z.name, lor(eq(z, ts.back()), excl(left, right)));
}

FormulaPtr exc_to_dep(const Terms& t1s, const Terms& t2s, NameSupply* names) {
    if (t1s.size() != t2s.size() || t1s.empty()) throw TranslationError("excl needs two tuples of the same positive width");
    NameSupply own;
    NameSupply& ns = supply(names, {&t1s, &t2s}, own);
    auto zn = ns.take(static_cast<int>(t1s.size()));
    auto un = ns.take(2);
    Terms z = vars(zn);
    Term u1 = Term::var(un[0]), u2 = Term::var(un[1]);
    auto d1 = z, d2 = z;
    d1.push_back(u1);
    d2.push_back(u2);
    auto body = land_all({dep(d1), dep(d2),
                          lor(land(eq(u1, u2), tuple_neq(z, t1s)), land(neq(u1, u2), tuple_neq(z, t2s)))});
    return forall(zn, exists(un, body));
}

FormulaPtr equi_to_inc(const Terms& t1s, const Terms& t2s) {
    if (t1s.size() != t2s.size()) throw TranslationError("equi needs two tuples of the same width");
    return land(incl(t1s, t2s), incl(t2s, t1s));
}

FormulaPtr inc_to_equi(const Terms& t1s, const Terms& t2s, NameSupply* names) {
    if (t1s.size() != t2s.size()) throw TranslationError("incl needs two tuples of the same width");
    NameSupply own;
    NameSupply& ns = supply(names, {&t1s, &t2s}, own);
    auto un = ns.take(2);
    auto zn = ns.take(static_cast<int>(t1s.size()));
    Terms z = vars(zn);
    auto body = land(equi(t2s, z), lor(neq(Term::var(un[0]), Term::var(un[1])), tuple_eq(z, t1s)));
    return forall(un, exists(zn, body));
}

FormulaPtr inc_to_indep(const Terms& t1s, const Terms& t2s, NameSupply* names) {
    if (t1s.size() != t2s.size()) throw TranslationError("incl needs two tuples of the same width");
    NameSupply own;
    NameSupply& ns = supply(names, {&t1s, &t2s}, own);
    auto vn = ns.take(2);
    auto zn = ns.take(static_cast<int>(t1s.size()));
    Term v1 = Term::var(vn[0]), v2 = Term::var(vn[1]);
    Terms z = vars(zn);
    auto a = land(tuple_neq(z, t1s), tuple_neq(z, t2s));
    auto b = land(neq(v1, v2), tuple_neq(z, t2s));
    auto c = land(lor(eq(v1, v2), tuple_eq(z, t2s)), indep({}, z, {v1, v2}));
    std::vector<std::string> all = vn;
    all.insert(all.end(), zn.begin(), zn.end());
    return forall(all, lor_all({a, b, c}));
}

FormulaPtr indep_to_ie(const Terms& t1s, const Terms& t2s, const Terms& t3s, NameSupply* names, bool expand_dep) {
    NameSupply own;
    NameSupply& ns = supply(names, {&t1s, &t2s, &t3s}, own);
    auto pn = ns.take(static_cast<int>(t1s.size()));
    auto qn = ns.take(static_cast<int>(t2s.size()));
    auto rn = ns.take(static_cast<int>(t3s.size()));
    auto un = ns.take(4);
    Terms p = vars(pn), q = vars(qn), r = vars(rn);
    std::vector<Term> u;
    for (const auto& n : un) u.push_back(Term::var(n));
    Terms pqr = concat({&p, &q, &r});
    std::vector<FormulaPtr> parts;
    for (const auto& ui : u) {
        Terms d = pqr;
        d.push_back(ui);
        parts.push_back(expand_dep ? dep_to_exc(d, &ns) : dep(d));
    }
    Terms pq = concat({&p, &q}), pr = concat({&p, &r});
    Terms t12 = concat({&t1s, &t2s}), t13 = concat({&t1s, &t3s}), t123 = concat({&t1s, &t2s, &t3s});
    auto a = land(neq(u[0], u[1]), excl(pq, t12));
    auto b = land_all({eq(u[0], u[1]), neq(u[2], u[3]), excl(pr, t13)});
    auto c = land_all({eq(u[0], u[1]), eq(u[2], u[3]), incl(pqr, t123)});
    parts.push_back(lor_all({a, b, c}));
    std::vector<std::string> all = pn;
    all.insert(all.end(), qn.begin(), qn.end());
    all.insert(all.end(), rn.begin(), rn.end());
    auto body = exists(un, land_all(parts));
    return all.empty() ? body : forall(all, body);
}

AtomSet parse_atom_set(const std::string& text) {
    static const std::map<std::string, Kind> kinds = {
        {"dep", Kind::Dep}, {"indep", Kind::Indep}, {"incl", Kind::Incl}, {"excl", Kind::Excl}, {"equi", Kind::Equi}};
    AtomSet out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (item.empty()) continue;
        auto it = kinds.find(item);
        if (it == kinds.end()) throw TranslationError("unknown atom kind " + item);
        out.insert(it->second);
    }
    return out;
}

namespace {

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Dep: return "dep";
        case Kind::Indep: return "indep";
        case Kind::Incl: return "incl";
        case Kind::Excl: return "excl";
        case Kind::Equi: return "equi";
        default: return "literal";
    }
}

enum class Rule { DepExc, DepIndep, ExcDep, EquiInc, IncEqui, IncIndep, IndepIe };

struct RuleInfo {
    Rule rule;
    AtomSet outputs;
};

const std::vector<RuleInfo>& rules_for(Kind k) {
    static const std::map<Kind, std::vector<RuleInfo>> table = {
        {Kind::Dep, {{Rule::DepExc, {Kind::Excl}}, {Rule::DepIndep, {Kind::Indep}}}},
        {Kind::Excl, {{Rule::ExcDep, {Kind::Dep}}}},
        {Kind::Equi, {{Rule::EquiInc, {Kind::Incl}}}},
        {Kind::Incl, {{Rule::IncEqui, {Kind::Equi}}, {Rule::IncIndep, {Kind::Indep}}}},
        {Kind::Indep, {{Rule::IndepIe, {Kind::Dep, Kind::Excl, Kind::Incl}}}},
    };
    return table.at(k);
}

bool solvable(Kind k, const AtomSet& target, std::set<Kind> visiting) {
    if (target.count(k)) return true;
    if (visiting.count(k)) return false;
    visiting.insert(k);
    for (const auto& r : rules_for(k)) {
        bool ok = true;
        for (Kind o : r.outputs) ok = ok && solvable(o, target, visiting);
        if (ok) return true;
    }
    return false;
}

Rule choose(Kind k, const AtomSet& target) {
    for (const auto& r : rules_for(k)) {
        bool ok = true;
        for (Kind o : r.outputs) ok = ok && solvable(o, target, {k});
        if (ok) return r.rule;
    }
    std::string t;
    for (Kind o : target) t += std::string(t.empty() ? "" : ",") + kind_name(o);
    bool downward = !target.count(Kind::Incl) && !target.count(Kind::Equi) && !target.count(Kind::Indep);
    if ((k == Kind::Incl || k == Kind::Equi) && downward)
        throw TranslationError(std::string(kind_name(k)) +
                               " atoms are not downward closed; inclusion logic is union closed, dependence logic is "
                               "downward closed, so no translation into {" + t + "} exists");
    throw TranslationError(std::string("no translation path from ") + kind_name(k) + " to {" + t + "}");
}

FormulaPtr compile_rec(const FormulaPtr& f, const AtomSet& target, NameSupply& ns) {
    if (f->is_binary()) return rebuild(f, compile_rec(f->left, target, ns), compile_rec(f->right, target, ns));
    if (f->is_quant()) return rebuild(f, compile_rec(f->left, target, ns), nullptr);
    if (!f->is_dependency_atom() || target.count(f->kind)) return f;
    FormulaPtr out;
    switch (choose(f->kind, target)) {
        case Rule::DepExc: out = dep_to_exc(f->t1, &ns); break;
        case Rule::DepIndep: out = dep_to_indep(f->t1); break;
        case Rule::ExcDep: out = exc_to_dep(f->t1, f->t2, &ns); break;
        case Rule::EquiInc: out = equi_to_inc(f->t1, f->t2); break;
        case Rule::IncEqui: out = inc_to_equi(f->t1, f->t2, &ns); break;
        case Rule::IncIndep: out = inc_to_indep(f->t1, f->t2, &ns); break;
        case Rule::IndepIe: out = indep_to_ie(f->t1, f->t2, f->t3, &ns); break;
    }
    return compile_rec(out, target, ns);
}

}  // namespace

FormulaPtr compile(const FormulaPtr& f, const AtomSet& target) {
    NameSupply ns(f);
    return compile_rec(f, target, ns);
}

FormulaPtr tc_sentence(const FormulaPtr& psi, const std::vector<std::string>& xs, const std::vector<std::string>& ys,
                       const Terms& a, const Terms& b) {
    if (!is_first_order(psi)) throw TranslationError("tc_sentence needs a first-order psi");
    if (xs.size() != ys.size() || a.size() != xs.size() || b.size() != xs.size() || xs.empty())
        throw TranslationError("tc_sentence: tuple widths differ");
    NameSupply ns(psi);
    ns.reserve(a);
    ns.reserve(b);
    for (const auto& v : xs) ns.reserve({Term::var(v)});
    for (const auto& v : ys) ns.reserve({Term::var(v)});
    auto zn = ns.take(static_cast<int>(xs.size()));
    auto wn = ns.take(static_cast<int>(ys.size()));
    std::map<std::string, Term> sub;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sub.emplace(xs[i], Term::var(zn[i]));
        sub.emplace(ys[i], Term::var(wn[i]));
    }
    auto step = substitute(negate(psi), sub);
    Terms z = vars(zn), w = vars(wn);
    return exists(zn, land_all({incl(a, z), tuple_neq(z, b), forall(wn, lor(step, incl(w, z)))}));
}

FormulaPtr odd_cardinality_sentence() {
    Signature sig;
    sig.functions = {{"S", 1}};
    sig.constants = {"0", "e"};
    auto psi = parse("y = S(S(x))", sig);
    return tc_sentence(psi, {"x"}, {"y"}, {Term::constant("0")}, {Term::constant("e")});
}

}  // namespace teamlogic
