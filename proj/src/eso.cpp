#include "teamlogic/eso.hpp"

#include <functional>
#include <optional>
#include <sstream>

#include "teamlogic/equiv.hpp"
#include "teamlogic/translate.hpp"

namespace teamlogic {

namespace {

Terms tvars(const std::vector<std::string>& names) { return vars(names); }

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

FormulaPtr forall_maybe(const std::vector<std::string>& vs, FormulaPtr body) {
    return vs.empty() ? body : forall(vs, std::move(body));
}

FormulaPtr exists_maybe(const std::vector<std::string>& vs, FormulaPtr body) {
    return vs.empty() ? body : exists(vs, std::move(body));
}

// Renames every bound variable to a fresh name.
FormulaPtr rename_bound(const FormulaPtr& f, std::map<std::string, Term> sub, NameSupply& ns) {
    auto ren = [&](const Terms& ts) {
        Terms out;
        for (const auto& t : ts) out.push_back(substitute(t, sub));
        return out;
    };
    auto g = std::make_shared<Formula>(*f);
    switch (f->kind) {
        case Kind::Or:
        case Kind::And:
            g->left = rename_bound(f->left, sub, ns);
            g->right = rename_bound(f->right, sub, ns);
            return g;
        case Kind::Exists:
        case Kind::Forall: {
            std::string v = ns.take();
            sub[f->var] = Term::var(v);
            g->var = v;
            g->left = rename_bound(f->left, sub, ns);
            return g;
        }
        default:
            g->args = ren(f->args);
            g->t1 = ren(f->t1);
            g->t2 = ren(f->t2);
            g->t3 = ren(f->t3);
            return g;
    }
}

struct EsoBuilder {
    NameSupply& vars_ns;
    std::set<std::string> taken_symbols;
    std::vector<SOSymbol> prefix;
    int next = 0;

    std::string symbol() {
        while (true) {
            std::string s = "_e" + std::to_string(next++);
            if (taken_symbols.insert(s).second) return s;
        }
    }

    struct Ctx {
        std::vector<std::string> vars;
        std::string rel;
        std::vector<std::string> rel_args;
    };

    FormulaPtr rho(const Ctx& c, const std::map<std::string, Term>& sub = {}, bool positive = true) {
        Terms args;
        for (const auto& v : c.rel_args) args.push_back(substitute(Term::var(v), sub));
        return rel(c.rel, args, positive);
    }

    FormulaPtr tau(const FormulaPtr& f, const Ctx& c) {
        switch (f->kind) {
            case Kind::Lit: return forall_maybe(c.vars, lor(rho(c, {}, false), f));
            case Kind::Incl:
            case Kind::Excl: {
                auto primed = vars_ns.take(static_cast<int>(c.vars.size()));
                std::map<std::string, Term> sub;
                for (std::size_t i = 0; i < c.vars.size(); ++i) sub[c.vars[i]] = Term::var(primed[i]);
                Terms t2;
                for (const auto& t : f->t2) t2.push_back(substitute(t, sub));
                if (f->kind == Kind::Incl) {
                    FormulaPtr body = rho(c, sub);
                    if (!f->t1.empty()) body = land(body, tuple_eq(f->t1, t2));
                    return forall_maybe(c.vars, lor(rho(c, {}, false), exists_maybe(primed, body)));
                }
                std::vector<FormulaPtr> parts{rho(c, {}, false), rho(c, sub, false)};
                if (!f->t1.empty()) parts.push_back(tuple_neq(f->t1, t2));
                return forall_maybe(cat(c.vars, primed), lor_all(parts));
            }
            case Kind::And: return land(tau(f->left, c), tau(f->right, c));
            case Kind::Or: {
                Ctx s{c.vars, symbol(), c.vars}, t{c.vars, symbol(), c.vars};
                for (const auto* x : {&s, &t})
                    prefix.push_back({x->rel, static_cast<int>(c.vars.size()), false, rho(c), c.vars});
                auto cover = forall_maybe(c.vars, lor_all({rho(c, {}, false), rho(s), rho(t)}));
                auto in_s = forall_maybe(c.vars, lor(rho(s, {}, false), rho(c)));
                auto in_t = forall_maybe(c.vars, lor(rho(t, {}, false), rho(c)));
                return land_all({cover, in_s, in_t, tau(f->left, s), tau(f->right, t)});
            }
            case Kind::Exists: {
                auto wide = cat(c.vars, {f->var});
                Ctx q{wide, symbol(), wide};
                prefix.push_back({q.rel, static_cast<int>(wide.size()), false, rho(c), wide});
                auto cover = forall_maybe(c.vars, lor(rho(c, {}, false), exists(f->var, rho(q))));
                auto within = forall(wide, lor(rho(q, {}, false), rho(c)));
                return land_all({cover, within, tau(f->left, q)});
            }
            case Kind::Forall: return tau(f->left, Ctx{cat(c.vars, {f->var}), c.rel, c.rel_args});
            default:
                throw TranslationError("ie_to_eso handles first-order literals, incl and excl only; compile " +
                                       render(f) + " first");
        }
    }
};

// Tarski evaluation over the model plus second-order interpretations.
struct Interp {
    const Model& m;
    std::map<std::string, const TupleSet*> rels;
    std::map<std::string, const std::vector<Elem>*> fns;

    Elem term(const Term& t, const Assignment& s) const {
        switch (t.kind) {
            case Term::Kind::Var: {
                auto it = s.find(t.name);
                if (it == s.end()) throw std::invalid_argument("unassigned variable " + t.name);
                return it->second;
            }
            case Term::Kind::Const: return m.constant(t.name);
            case Term::Kind::App: {
                Tuple args;
                for (const auto& a : t.args) args.push_back(term(a, s));
                auto it = fns.find(t.name);
                if (it == fns.end()) return m.apply(t.name, args);
                return (*it->second)[m.code(args)];
            }
        }
        return 0;
    }

    bool sat(const FormulaPtr& f, Assignment& s) const {
        switch (f->kind) {
            case Kind::Lit: {
                bool v;
                if (f->is_eq()) {
                    v = term(f->args[0], s) == term(f->args[1], s);
                } else {
                    Tuple args;
                    for (const auto& a : f->args) args.push_back(term(a, s));
                    auto it = rels.find(f->rel);
                    v = it == rels.end() ? m.holds(f->rel, args) : it->second->count(args) > 0;
                }
                return v == f->positive;
            }
            case Kind::Or: return sat(f->left, s) || sat(f->right, s);
            case Kind::And: return sat(f->left, s) && sat(f->right, s);
            case Kind::Exists:
            case Kind::Forall: {
                auto saved = s.find(f->var) == s.end() ? std::optional<Elem>{} : std::optional<Elem>{s[f->var]};
                bool want = f->kind == Kind::Exists;
                bool result = !want;
                for (Elem e = 0; e < m.size(); ++e) {
                    s[f->var] = e;
                    if (sat(f->left, s) == want) {
                        result = want;
                        break;
                    }
                }
                if (saved) s[f->var] = *saved;
                else s.erase(f->var);
                return result;
            }
            default: throw std::invalid_argument("second-order matrix must be first order");
        }
    }
};

std::vector<Tuple> all_tuples(int size, int arity) {
    std::vector<Tuple> out;
    Tuple t(static_cast<std::size_t>(arity), 0);
    while (true) {
        out.push_back(t);
        int i = arity - 1;
        while (i >= 0 && ++t[static_cast<std::size_t>(i)] == size) t[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
    }
    return out;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',' || ch == ' ' || ch == '(' || ch == ')' || ch == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\n");
    if (a == std::string::npos) return "";
    return s.substr(a, s.find_last_not_of(" \t\n") - a + 1);
}

std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
    return out;
}

Term replace_apps(const Term& t, const std::map<std::string, std::string>& fn_var,
                  const std::map<std::string, Term>& sub) {
    if (t.kind == Term::Kind::App) {
        auto it = fn_var.find(t.name);
        if (it != fn_var.end()) return Term::var(it->second);
        Term out = t;
        for (auto& a : out.args) a = replace_apps(a, fn_var, sub);
        return out;
    }
    return substitute(t, sub);
}

FormulaPtr replace_apps(const FormulaPtr& f, const std::map<std::string, std::string>& fn_var,
                        const std::map<std::string, Term>& sub) {
    auto g = std::make_shared<Formula>(*f);
    if (f->is_binary()) {
        g->left = replace_apps(f->left, fn_var, sub);
        g->right = replace_apps(f->right, fn_var, sub);
        return g;
    }
    for (auto& a : g->args) a = replace_apps(a, fn_var, sub);
    return g;
}

void check_apps(const Term& t, const std::map<std::string, std::vector<std::string>>& fns) {
    if (t.kind == Term::Kind::App) {
        auto it = fns.find(t.name);
        if (it != fns.end()) {
            if (t.args != vars(it->second))
                throw std::invalid_argument("skolem function " + t.name + " must occur only as " + t.name + "(" +
                                            join(it->second) + ")");
            return;
        }
    }
    for (const auto& a : t.args) check_apps(a, fns);
}

void check_psi(const FormulaPtr& f, const std::map<std::string, std::vector<std::string>>& fns) {
    if (f->is_quant() || f->is_dependency_atom()) throw std::invalid_argument("psi must be quantifier-free first order");
    if (f->is_binary()) {
        check_psi(f->left, fns);
        check_psi(f->right, fns);
        return;
    }
    if (f->rel == "A") throw std::invalid_argument("psi must not mention A");
    for (const auto& a : f->args) check_apps(a, fns);
}

// Propositional search over the grounded matrix: watched literals, chronological backtracking.
class Dpll {
public:
    explicit Dpll(int vars) : val_(static_cast<std::size_t>(vars), -1), watch_(2 * static_cast<std::size_t>(vars)) {}

    int add_var() {
        val_.push_back(-1);
        watch_.resize(watch_.size() + 2);
        return static_cast<int>(val_.size()) - 1;
    }

    void add_clause(std::vector<int> c) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        for (std::size_t i = 1; i < c.size(); ++i)
            if (c[i] == (c[i - 1] ^ 1)) return;
        if (c.empty()) {
            empty_ = true;
            return;
        }
        if (c.size() == 1) {
            units_.push_back(c[0]);
            return;
        }
        clauses_.push_back(std::move(c));
        auto& cl = clauses_.back();
        watch_[static_cast<std::size_t>(cl[0])].push_back(static_cast<int>(clauses_.size()) - 1);
        watch_[static_cast<std::size_t>(cl[1])].push_back(static_cast<int>(clauses_.size()) - 1);
    }

    // Branches on variables below `decide` only; once they are all set, `leaf`
    // decides whether the assignment extends to a model.
    bool solve(const std::vector<int>& assumptions, int decide, const std::function<bool(const std::vector<signed char>&)>& leaf,
               const std::function<void()>& tick) {
        undo(0);
        levels_.clear();
        if (empty_) return false;
        for (int u : units_)
            if (!assign(u)) return false;
        for (int u : assumptions)
            if (!assign(u)) return false;
        auto limit = static_cast<std::size_t>(decide);
        while (true) {
            bool ok = propagate();
            if (ok) {
                std::size_t next = 0;
                while (next < limit && val_[next] >= 0) ++next;
                if (next < limit) {
                    tick();
                    levels_.push_back({trail_.size(), false});
                    assign(static_cast<int>(2 * next + 1));
                    continue;
                }
                if (leaf(val_)) return true;
            }
            if (!backtrack()) return false;
        }
    }

private:
    struct Level {
        std::size_t start;
        bool flipped;
    };
    std::vector<signed char> val_;  // per variable: -1 unknown, 0 false, 1 true
    std::vector<std::vector<int>> watch_;
    std::vector<std::vector<int>> clauses_;
    std::vector<int> units_, trail_;
    std::vector<Level> levels_;
    std::size_t head_ = 0;
    bool empty_ = false;

    // Literal 2v is v, 2v+1 is not v.
    int value(int lit) const {
        auto v = val_[static_cast<std::size_t>(lit >> 1)];
        return v < 0 ? -1 : (v ^ (lit & 1));
    }

    bool assign(int lit) {
        int v = value(lit);
        if (v >= 0) return v == 1;
        val_[static_cast<std::size_t>(lit >> 1)] = static_cast<signed char>(1 ^ (lit & 1));
        trail_.push_back(lit);
        return true;
    }

    bool propagate() {
        while (head_ < trail_.size()) {
            int falsified = trail_[head_++] ^ 1;
            auto& ws = watch_[static_cast<std::size_t>(falsified)];
            for (std::size_t i = 0; i < ws.size();) {
                auto& c = clauses_[static_cast<std::size_t>(ws[i])];
                if (c[0] == falsified) std::swap(c[0], c[1]);
                if (value(c[0]) == 1) {
                    ++i;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k)
                    if (value(c[k]) != 0) {
                        std::swap(c[1], c[k]);
                        watch_[static_cast<std::size_t>(c[1])].push_back(ws[i]);
                        ws[i] = ws.back();
                        ws.pop_back();
                        moved = true;
                        break;
                    }
                if (moved) continue;
                if (!assign(c[0])) return false;
                ++i;
            }
        }
        return true;
    }

    bool backtrack() {
        while (!levels_.empty() && levels_.back().flipped) {
            undo(levels_.back().start);
            levels_.pop_back();
        }
        if (levels_.empty()) return false;
        auto& lvl = levels_.back();
        int lit = trail_[lvl.start];
        undo(lvl.start);
        lvl.flipped = true;
        assign(lit ^ 1);
        return true;
    }

    void undo(std::size_t to) {
        while (trail_.size() > to) {
            val_[static_cast<std::size_t>(trail_.back() >> 1)] = -1;
            trail_.pop_back();
        }
        head_ = std::min(head_, to);
    }
};

// Grounds the first-order matrix over the domain. Node 0 is false, 1 is true;
// other nodes are literals or and/or over children.
class Grounder {
public:
    Grounder(const Model& m, const ESOFormula& phi) : m_(m) {
        int next = 0;
        std::vector<SOSymbol> symbols = phi.prefix;
        symbols.push_back({phi.a_name, phi.a_arity, false, nullptr, {}});
        for (const auto& sym : symbols) {
            std::size_t cells = 1;
            for (int i = 0; i < sym.arity; ++i) cells *= static_cast<std::size_t>(m.size());
            so_[sym.name] = {sym.function, sym.arity, next};
            next += static_cast<int>(cells) * (sym.function ? m.size() : 1);
        }
        vars_ = next;
        nodes_.push_back({Node::False, 0, {}});
        nodes_.push_back({Node::True, 0, {}});
    }

    int ground(const FormulaPtr& f, std::vector<Elem>& env) {
        switch (f->kind) {
            case Kind::Lit: return f->is_eq() ? equality(f, env) : relation(f, env);
            case Kind::And:
            case Kind::Or: {
                bool conj = f->kind == Kind::And;
                int l = ground(f->left, env);
                if (l == (conj ? 0 : 1)) return l;
                return junction(conj, {l, ground(f->right, env)});
            }
            case Kind::Exists:
            case Kind::Forall: {
                bool conj = f->kind == Kind::Forall;
                int slot = slot_of(f->var);
                Elem saved = env[static_cast<std::size_t>(slot)];
                std::vector<int> kids;
                for (Elem e = 0; e < m_.size(); ++e) {
                    env[static_cast<std::size_t>(slot)] = e;
                    int k = ground(f->left, env);
                    if (k == (conj ? 0 : 1)) {
                        env[static_cast<std::size_t>(slot)] = saved;
                        return k;
                    }
                    kids.push_back(k);
                }
                env[static_cast<std::size_t>(slot)] = saved;
                return junction(conj, std::move(kids));
            }
            default: throw std::invalid_argument("second-order matrix must be first order");
        }
    }

    void prepare(const FormulaPtr& f) { collect_slots(f); }
    std::size_t slots() const { return slot_.size(); }
    int base_of(const std::string& rel) const { return so_.at(rel).base; }
    int symbol_vars() const { return vars_; }

    // Value of the ground formula once every symbol variable is set.
    bool eval(int root, const std::vector<signed char>& val) const {
        if (root <= 1) return root == 1;
        std::vector<char> v(nodes_.size(), 0);
        v[1] = 1;
        for (std::size_t n = 2; n <= static_cast<std::size_t>(root); ++n) {
            const auto& node = nodes_[n];
            switch (node.kind) {
                case Node::Lit: v[n] = (val[static_cast<std::size_t>(node.lit >> 1)] ^ (node.lit & 1)) == 1; break;
                case Node::And:
                    v[n] = std::all_of(node.kids.begin(), node.kids.end(), [&](int k) { return v[static_cast<std::size_t>(k)]; });
                    break;
                case Node::Or:
                    v[n] = std::any_of(node.kids.begin(), node.kids.end(), [&](int k) { return v[static_cast<std::size_t>(k)]; });
                    break;
                default: break;
            }
        }
        return v[static_cast<std::size_t>(root)];
    }

    Dpll cnf(int root) {
        Dpll s(vars_);
        if (root <= 1) {
            if (root == 0) s.add_clause({});
            return s;
        }
        for (const auto& [name, info] : so_) {
            if (!info.function) continue;
            std::size_t cells = 1;
            for (int i = 0; i < info.arity; ++i) cells *= static_cast<std::size_t>(m_.size());
            for (std::size_t c = 0; c < cells; ++c) {
                std::vector<int> some;
                for (Elem v = 0; v < m_.size(); ++v) some.push_back(2 * fn_var(info, c, v));
                s.add_clause(some);
                for (std::size_t i = 0; i < some.size(); ++i)
                    for (std::size_t j = i + 1; j < some.size(); ++j) s.add_clause({some[i] | 1, some[j] | 1});
            }
        }
        std::vector<int> lit_of(nodes_.size(), -1);
        for (std::size_t n = 2; n < nodes_.size(); ++n) {
            const auto& node = nodes_[n];
            if (node.kind == Node::Lit) {
                lit_of[n] = node.lit;
                continue;
            }
            int x = 2 * s.add_var();
            lit_of[n] = x;
            if (node.kind == Node::And) {
                for (int k : node.kids) s.add_clause({x | 1, lit_of[static_cast<std::size_t>(k)]});
            } else {
                std::vector<int> c = {x | 1};
                for (int k : node.kids) c.push_back(lit_of[static_cast<std::size_t>(k)]);
                s.add_clause(c);
            }
        }
        s.add_clause({lit_of[static_cast<std::size_t>(root)]});
        return s;
    }

private:
    struct Node {
        enum Kind { False, True, Lit, And, Or } kind;
        int lit;
        std::vector<int> kids;
    };
    struct SoInfo {
        bool function;
        int arity;
        int base;
    };
    // One alternative value of a term, valid under the listed function-cell literals.
    struct Alt {
        std::vector<int> conds;
        Elem value;
    };

    const Model& m_;
    std::map<std::string, SoInfo> so_;
    std::map<std::string, int> slot_;
    int vars_ = 0;
    std::vector<Node> nodes_;
    std::map<int, int> lit_node_;

    void collect_slots(const FormulaPtr& f) {
        for (const auto& v : all_names(f)) slot_.emplace(v, static_cast<int>(slot_.size()));
    }

    int slot_of(const std::string& v) const {
        auto it = slot_.find(v);
        if (it == slot_.end()) throw std::invalid_argument("unassigned variable " + v);
        return it->second;
    }

    int fn_var(const SoInfo& info, std::size_t cell, Elem v) const {
        return info.base + static_cast<int>(cell) * m_.size() + v;
    }

    int lit_node(int lit) {
        auto [it, fresh] = lit_node_.emplace(lit, static_cast<int>(nodes_.size()));
        if (fresh) nodes_.push_back({Node::Lit, lit, {}});
        return it->second;
    }

    int junction(bool conj, std::vector<int> kids) {
        std::vector<int> keep;
        for (int k : kids) {
            if (k == (conj ? 0 : 1)) return k;
            if (k != (conj ? 1 : 0)) keep.push_back(k);
        }
        if (keep.empty()) return conj ? 1 : 0;
        if (keep.size() == 1) return keep[0];
        nodes_.push_back({conj ? Node::And : Node::Or, 0, std::move(keep)});
        return static_cast<int>(nodes_.size()) - 1;
    }

    std::vector<Alt> term(const Term& t, const std::vector<Elem>& env) const {
        switch (t.kind) {
            case Term::Kind::Var: return {{{}, env[static_cast<std::size_t>(slot_of(t.name))]}};
            case Term::Kind::Const: return {{{}, m_.constant(t.name)}};
            case Term::Kind::App: break;
        }
        auto it = so_.find(t.name);
        std::vector<Alt> out;
        for_combos(t.args, env, [&](const std::vector<int>& conds, const Tuple& args) {
            if (it == so_.end()) {
                out.push_back({conds, m_.apply(t.name, args)});
                return;
            }
            for (Elem v = 0; v < m_.size(); ++v) {
                auto c = conds;
                c.push_back(2 * fn_var(it->second, m_.code(args), v));
                out.push_back({std::move(c), v});
            }
        });
        return out;
    }

    void for_combos(const Terms& ts, const std::vector<Elem>& env,
                    const std::function<void(const std::vector<int>&, const Tuple&)>& fn) const {
        std::vector<std::vector<Alt>> alts;
        for (const auto& t : ts) alts.push_back(term(t, env));
        std::vector<int> conds;
        Tuple vals;
        std::function<void(std::size_t)> go = [&](std::size_t i) {
            if (i == alts.size()) {
                fn(conds, vals);
                return;
            }
            for (const auto& alt : alts[i]) {
                auto n = conds.size();
                conds.insert(conds.end(), alt.conds.begin(), alt.conds.end());
                vals.push_back(alt.value);
                go(i + 1);
                vals.pop_back();
                conds.resize(n);
            }
        };
        go(0);
    }

    int guarded(const std::vector<int>& conds, int body) {
        std::vector<int> kids;
        for (int c : conds) kids.push_back(lit_node(c));
        kids.push_back(body);
        return junction(true, std::move(kids));
    }

    int equality(const FormulaPtr& f, const std::vector<Elem>& env) {
        std::vector<int> alts;
        for_combos(f->args, env, [&](const std::vector<int>& conds, const Tuple& v) {
            alts.push_back(guarded(conds, (v[0] == v[1]) == f->positive ? 1 : 0));
        });
        return junction(false, std::move(alts));
    }

    int relation(const FormulaPtr& f, const std::vector<Elem>& env) {
        auto it = so_.find(f->rel);
        std::vector<int> alts;
        for_combos(f->args, env, [&](const std::vector<int>& conds, const Tuple& v) {
            int body;
            if (it != so_.end()) {
                int var = it->second.base + static_cast<int>(m_.code(v));
                body = lit_node(2 * var + (f->positive ? 0 : 1));
            } else {
                body = m_.holds(f->rel, v) == f->positive ? 1 : 0;
            }
            alts.push_back(guarded(conds, body));
        });
        return junction(false, std::move(alts));
    }
};

}  // namespace

std::string render(const ESOFormula& phi) {
    std::ostringstream out;
    out << phi.a_name << "/" << phi.a_arity << " ; exists";
    for (std::size_t i = 0; i < phi.prefix.size(); ++i) {
        const auto& s = phi.prefix[i];
        out << (i ? ", " : " ") << (s.function ? "fun " : "rel ") << s.name << "/" << s.arity;
    }
    out << " ; " << render(phi.matrix);
    return out.str();
}

ESOFormula ie_to_eso(const FormulaPtr& f, const std::vector<std::string>& vs) {
    std::set<std::string> vset(vs.begin(), vs.end());
    if (vset.size() != vs.size()) throw TranslationError("repeated variable in team tuple");
    for (const auto& v : free_variables(f))
        if (!vset.count(v)) throw TranslationError("free variable " + v + " missing from the team tuple");
    NameSupply ns(f);
    ns.reserve(tvars(vs));
    auto g = rename_bound(f, {}, ns);
    auto names = all_names(f);
    names.insert(vs.begin(), vs.end());
    EsoBuilder b{ns, names, {}, 0};
    ESOFormula out;
    out.a_arity = static_cast<int>(vs.size());
    out.a_name = names.count("A") ? b.symbol() : "A";
    b.taken_symbols.insert(out.a_name);
    out.matrix = b.tau(g, EsoBuilder::Ctx{vs, out.a_name, vs});
    out.prefix = std::move(b.prefix);
    return out;
}

namespace {

bool eval_enumerate(const Model& m, const ESOFormula& phi, const TupleSet& a, Budget budget, EsoStats* stats) {
    for (const auto& t : a)
        if (static_cast<int>(t.size()) != phi.a_arity) throw std::invalid_argument("tuple arity differs from A");
    std::vector<FormulaPtr> conj;
    flatten(phi.matrix, Kind::And, conj);
    std::map<std::string, std::size_t> level_of;
    for (std::size_t i = 0; i < phi.prefix.size(); ++i) level_of[phi.prefix[i].name] = i + 1;
    std::vector<std::vector<FormulaPtr>> at(phi.prefix.size() + 1);
    for (const auto& c : conj) {
        auto sig = signature_of(c);
        std::size_t lvl = 0;
        for (const auto& [n, _] : sig.relations)
            if (level_of.count(n)) lvl = std::max(lvl, level_of[n]);
        for (const auto& [n, _] : sig.functions)
            if (level_of.count(n)) lvl = std::max(lvl, level_of[n]);
        at[lvl].push_back(c);
    }
    Interp in{m, {}, {}};
    in.rels[phi.a_name] = &a;
    std::vector<TupleSet> rel_val(phi.prefix.size());
    std::vector<std::vector<Elem>> fn_val(phi.prefix.size());
    std::uint64_t used = 0;
    auto tick = [&] {
        if (stats) ++stats->candidates;
        if (++used > budget.max_nodes) throw BudgetExceeded(used);
    };
    auto holds_level = [&](std::size_t lvl) {
        Assignment s;
        for (const auto& c : at[lvl])
            if (!in.sat(c, s)) return false;
        return true;
    };
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (!holds_level(i)) return false;
        if (i == phi.prefix.size()) return true;
        const auto& sym = phi.prefix[i];
        if (sym.function) {
            std::size_t cells = all_tuples(m.size(), sym.arity).size();
            auto& table = fn_val[i];
            table.assign(cells, 0);
            in.fns[sym.name] = &table;
            while (true) {
                tick();
                if (go(i + 1)) return true;
                std::size_t k = 0;
                while (k < cells && ++table[k] == m.size()) table[k++] = 0;
                if (k == cells) break;
            }
            in.fns.erase(sym.name);
            return false;
        }
        std::vector<Tuple> cand;
        for (const auto& t : all_tuples(m.size(), sym.arity)) {
            if (!sym.bound) {
                cand.push_back(t);
                continue;
            }
            Assignment s;
            for (std::size_t j = 0; j < t.size(); ++j) s[sym.bound_vars[j]] = t[j];
            if (in.sat(sym.bound, s)) cand.push_back(t);
        }
        if (cand.size() > 40) throw BudgetExceeded(used);
        auto& val = rel_val[i];
        in.rels[sym.name] = &val;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cand.size()); ++mask) {
            tick();
            val.clear();
            for (std::size_t j = 0; j < cand.size(); ++j)
                if (mask >> j & 1) val.insert(cand[j]);
            if (go(i + 1)) return true;
        }
        in.rels.erase(sym.name);
        return false;
    };
    return go(0);
}

}  // namespace

bool eval_eso(const Model& m, const ESOFormula& phi, const TupleSet& a, Budget budget, EsoStats* stats,
              EsoMethod method) {
    for (const auto& t : a)
        if (static_cast<int>(t.size()) != phi.a_arity) throw std::invalid_argument("tuple arity differs from A");
    if (method == EsoMethod::Enumerate) return eval_enumerate(m, phi, a, budget, stats);
    return EsoChecker(m, phi).holds(a, budget, stats);
}

struct EsoChecker::Impl {
    const Model& m;
    int a_arity;
    std::optional<Grounder> grounder;
    int root = 0;
    int a_base = 0;
    std::optional<Dpll> solver;
};

EsoChecker::EsoChecker(const Model& m, const ESOFormula& phi) : impl_(std::make_unique<Impl>(Impl{m, phi.a_arity})) {
    auto& g = impl_->grounder.emplace(m, phi);
    g.prepare(phi.matrix);
    std::vector<Elem> env(g.slots(), 0);
    impl_->root = g.ground(phi.matrix, env);
    impl_->a_base = g.base_of(phi.a_name);
    impl_->solver.emplace(g.cnf(impl_->root));
}

EsoChecker::~EsoChecker() = default;

bool EsoChecker::holds(const TupleSet& a, Budget budget, EsoStats* stats) {
    for (const auto& t : a)
        if (static_cast<int>(t.size()) != impl_->a_arity) throw std::invalid_argument("tuple arity differs from A");
    std::uint64_t used = 0;
    auto tick = [&] {
        if (stats) ++stats->candidates;
        if (++used > budget.max_nodes) throw BudgetExceeded(used);
    };
    std::size_t cells = all_tuples(impl_->m.size(), impl_->a_arity).size();
    std::vector<char> member(cells, 0);
    for (const auto& t : a) member[impl_->m.code(t)] = 1;
    std::vector<int> facts;
    for (std::size_t c = 0; c < cells; ++c) facts.push_back(2 * (impl_->a_base + static_cast<int>(c)) + (member[c] ? 0 : 1));
    const auto& g = *impl_->grounder;
    int root = impl_->root;
    return impl_->solver->solve(facts, g.symbol_vars(), [&](const std::vector<signed char>& val) { return g.eval(root, val); },
                                tick);
}

SkolemNF parse_skolemnf(const std::string& text) {
    auto p = text.find("psi:");
    if (p == std::string::npos) throw std::invalid_argument("normal form lacks a psi: section");
    SkolemNF nf;
    std::stringstream head(text.substr(0, p));
    std::string item;
    bool first = true;
    Signature sig;
    while (std::getline(head, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        if (first) {
            first = false;
            auto slash = item.find('/');
            if (slash == std::string::npos || trim(item.substr(0, slash)) != "A")
                throw std::invalid_argument("normal form must start with A/<arity>");
            nf.a_arity = std::stoi(item.substr(slash + 1));
            continue;
        }
        auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("malformed normal form section: " + item);
        std::string key = trim(item.substr(0, colon));
        auto names = split_names(item.substr(colon + 1));
        if (key == "x") nf.xs = names;
        else if (key == "y") nf.ys = names;
        else nf.fns.emplace_back(key, names);
    }
    for (const auto& [f, w] : nf.fns) sig.functions[f] = static_cast<int>(w.size());
    nf.psi = parse_infer(text.substr(p + 4), sig);
    validate(nf);
    return nf;
}

std::string render(const SkolemNF& nf) {
    std::string out = "A/" + std::to_string(nf.a_arity) + " ; x: " + join(nf.xs) + " ; y: " + join(nf.ys);
    for (const auto& [f, w] : nf.fns) out += " ; " + f + ": (" + join(w) + ")";
    return out + " ; psi: " + render(nf.psi);
}

void validate(const SkolemNF& nf) {
    if (nf.fns.size() < 2) throw std::invalid_argument("normal form needs at least two skolem functions");
    if (static_cast<int>(nf.xs.size()) != nf.a_arity) throw std::invalid_argument("x tuple must have the arity of A");
    if (nf.fns[0].second != nf.xs || nf.fns[1].second != nf.xs)
        throw std::invalid_argument("the first two skolem functions must take exactly the x tuple");
    std::set<std::string> xy(nf.xs.begin(), nf.xs.end());
    xy.insert(nf.ys.begin(), nf.ys.end());
    if (xy.size() != nf.xs.size() + nf.ys.size()) throw std::invalid_argument("x and y variables must be distinct");
    std::map<std::string, std::vector<std::string>> fns;
    for (const auto& [f, w] : nf.fns) {
        if (!fns.emplace(f, w).second) throw std::invalid_argument("skolem function declared twice: " + f);
        if (xy.count(f) || f == "A") throw std::invalid_argument("skolem function name clashes: " + f);
        for (const auto& v : w)
            if (!xy.count(v)) throw std::invalid_argument("skolem argument " + v + " is not an x or y variable");
    }
    if (!nf.psi) throw std::invalid_argument("normal form lacks psi");
    check_psi(nf.psi, fns);
    for (const auto& v : free_variables(nf.psi))
        if (!xy.count(v)) throw std::invalid_argument("psi mentions unquantified variable " + v);
}

ESOFormula skolemnf_to_eso(const SkolemNF& nf) {
    validate(nf);
    ESOFormula out;
    out.a_arity = nf.a_arity;
    for (const auto& [f, w] : nf.fns) out.prefix.push_back({f, static_cast<int>(w.size()), true, nullptr, {}});
    Terms x = tvars(nf.xs);
    Term f1 = Term::app(nf.fns[0].first, x), f2 = Term::app(nf.fns[1].first, x);
    auto body = land_all({lor(rel("A", x, false), eq(f1, f2)), lor(rel("A", x), neq(f1, f2)), nf.psi});
    out.matrix = forall_maybe(cat(nf.xs, nf.ys), body);
    return out;
}

FormulaPtr skolemnf_to_ie(const SkolemNF& nf, const std::vector<std::string>& vs, bool expand_dep) {
    validate(nf);
    if (static_cast<int>(vs.size()) != nf.a_arity) throw TranslationError("team tuple must have the arity of A");
    NameSupply ns(nf.psi);
    ns.reserve(tvars(vs));
    ns.reserve(tvars(nf.xs));
    ns.reserve(tvars(nf.ys));
    std::set<std::string> vset(vs.begin(), vs.end());
    std::map<std::string, Term> sub;
    auto rename = [&](const std::vector<std::string>& in) {
        std::vector<std::string> out;
        for (const auto& v : in) {
            if (vset.count(v)) {
                auto fresh = ns.take();
                sub[v] = Term::var(fresh);
                out.push_back(fresh);
            } else {
                out.push_back(v);
            }
        }
        return out;
    };
    auto xs = rename(nf.xs), ys = rename(nf.ys);
    auto zs = ns.take(static_cast<int>(nf.fns.size()));
    std::map<std::string, std::string> fn_var;
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < nf.fns.size(); ++i) {
        fn_var[nf.fns[i].first] = zs[i];
        Terms d;
        for (const auto& w : nf.fns[i].second) d.push_back(substitute(Term::var(w), sub));
        d.push_back(Term::var(zs[i]));
        parts.push_back(expand_dep ? dep_to_exc(d, &ns) : dep(d));
    }
    Terms v = tvars(vs), x = tvars(xs);
    Term z1 = Term::var(zs[0]), z2 = Term::var(zs[1]);
    parts.push_back(lor(land(incl(x, v), eq(z1, z2)), land(excl(v, x), neq(z1, z2))));
    parts.push_back(replace_apps(nf.psi, fn_var, sub));
    return forall_maybe(cat(xs, ys), exists(zs, land_all(parts)));
}

}  // namespace teamlogic
