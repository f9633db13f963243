#include "teamlogic/semantics.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>

namespace teamlogic {

std::string to_string(Mode m) { return m == Mode::Lax ? "lax" : "strict"; }

Mode parse_mode(const std::string& s) {
    if (s == "lax") return Mode::Lax;
    if (s == "strict") return Mode::Strict;
    throw std::invalid_argument("unknown mode " + s);
}

std::string Verdict::str() const {
    switch (kind) {
        case Kind::Sat: return "sat";
        case Kind::Unsat: return "unsat";
        case Kind::BudgetExceeded: return "budget_exceeded(" + std::to_string(nodes) + ")";
    }
    return "";
}

namespace {

Closure join(Closure a, Closure b) {
    if (a == Closure::FirstOrder) return b;
    if (b == Closure::FirstOrder) return a;
    if (a == b) return a;
    return Closure::General;
}

}  // namespace

Closure closure_class(const FormulaPtr& f, Mode mode) {
    switch (f->kind) {
        case Kind::Lit: return Closure::FirstOrder;
        case Kind::Dep:
        case Kind::Excl: return Closure::Downward;
        case Kind::Incl:
        case Kind::Equi: return mode == Mode::Lax ? Closure::Union : Closure::General;
        case Kind::Indep: return Closure::General;
        case Kind::Or:
        case Kind::And: return join(closure_class(f->left, mode), closure_class(f->right, mode));
        case Kind::Exists:
        case Kind::Forall: return closure_class(f->left, mode);
    }
    return Closure::General;
}

namespace {

using E = std::uint16_t;

// Flat, sorted, duplicate-free row storage.
struct Rows {
    int w = 0;
    std::size_t n = 0;
    std::vector<E> d;

    const E* row(std::size_t i) const { return d.data() + i * static_cast<std::size_t>(w); }
    void push(const E* r) {
        d.insert(d.end(), r, r + w);
        ++n;
    }
    void normalize() {
        if (w == 0) {
            n = std::min<std::size_t>(n, 1);
            return;
        }
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        auto less = [&](std::size_t a, std::size_t b) {
            return std::lexicographical_compare(row(a), row(a) + w, row(b), row(b) + w);
        };
        std::sort(idx.begin(), idx.end(), less);
        std::vector<E> out;
        out.reserve(d.size());
        std::size_t m = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (k && std::equal(row(idx[k]), row(idx[k]) + w, row(idx[k - 1]))) continue;
            out.insert(out.end(), row(idx[k]), row(idx[k]) + w);
            ++m;
        }
        d.swap(out);
        n = m;
    }
    bool contains(const E* r) const {
        if (w == 0) return n > 0;
        std::size_t lo = 0, hi = n;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            const E* x = row(mid);
            if (std::lexicographical_compare(x, x + w, r, r + w)) lo = mid + 1;
            else hi = mid;
        }
        return lo < n && std::equal(r, r + w, row(lo));
    }
    std::string key(int id) const {
        std::string k(sizeof(int) + d.size() * sizeof(E) + 1, '\0');
        std::memcpy(k.data(), &id, sizeof(int));
        if (!d.empty()) std::memcpy(k.data() + sizeof(int), d.data(), d.size() * sizeof(E));
        k.back() = static_cast<char>(n > 0);
        return k;
    }
};

Rows select(const Rows& x, const std::vector<char>& keep) {
    Rows out;
    out.w = x.w;
    for (std::size_t i = 0; i < x.n; ++i)
        if (keep[i]) out.push(x.row(i));
    return out;
}

struct CTerm {
    enum class K { Col, Const, App };
    K k = K::Col;
    int v = 0;
    std::vector<CTerm> args;
};

struct Node {
    Kind kind = Kind::Lit;
    FormulaPtr src;
    std::vector<std::string> layout;
    bool positive = true;
    int rel = -1;
    std::vector<CTerm> args, t1, t2, t3;
    int col = -1;
    int l = -1, r = -1;
    int w = 0;
    int cw = 0;
    bool fo = false;
    Closure cls[2] = {Closure::General, Closure::General};
    std::vector<int> hoist_dc, hoist_other, hoist_sub;
    int flag = -1;
};

struct FlagBlock {
    int k = 0;
    std::vector<CTerm> det;
    std::vector<std::vector<E>> patterns;
    int rest = -1;
    int width = 0;
    std::vector<int> hoist_dc, hoist_other, hoist_sub;
};

struct RelTab {
    int arity = 0;
    bool bits = false;
    std::vector<char> bitmap;
    std::set<Tuple> tuples;
};

}  // namespace

struct Evaluator::Impl {
    const Model& m;
    Mode mode;
    EvalOptions opt;
    int dom;
    std::vector<std::string> root_vars;
    std::vector<Node> nodes;
    std::vector<FlagBlock> flags;
    std::vector<RelTab> rels;
    std::map<std::string, int> rel_index;
    std::vector<const Function*> fns;
    std::map<std::string, int> fn_index;
    int root = -1;
    int maxw = 0;
    std::uint64_t used = 0, limit = 0;
    std::unordered_map<std::string, char> memo;
    std::unordered_map<std::string, Rows> maxmemo;

    Impl(const Model& model, const FormulaPtr& f, std::vector<std::string> vars, Mode md, EvalOptions o)
        : m(model), mode(md), opt(o), dom(model.size()), root_vars(std::move(vars)) {
        for (const auto& [name, r] : m.relations()) {
            RelTab t;
            t.arity = r.first;
            std::size_t cells = 1;
            bool small = true;
            for (int i = 0; i < t.arity; ++i) {
                cells *= static_cast<std::size_t>(dom);
                if (cells > (1u << 22)) small = false;
            }
            t.bits = small;
            if (small) {
                t.bitmap.assign(cells, 0);
                for (const auto& tup : r.second) t.bitmap[m.code(tup)] = 1;
            } else {
                t.tuples = r.second;
            }
            rel_index[name] = static_cast<int>(rels.size());
            rels.push_back(std::move(t));
        }
        for (const auto& [name, fn] : m.functions()) {
            fn_index[name] = static_cast<int>(fns.size());
            fns.push_back(&fn);
        }
        std::set<std::string> seen(root_vars.begin(), root_vars.end());
        if (seen.size() != root_vars.size()) throw std::invalid_argument("team has repeated variables");
        auto layout = root_vars;
        root = compile(f, layout);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].kind == Kind::Exists) prepare_exists(static_cast<int>(i));
    }

    // ------------------------------------------------------------ compile

    CTerm cterm(const Term& t, const std::vector<std::string>& layout) {
        CTerm c;
        switch (t.kind) {
            case Term::Kind::Var: {
                auto it = std::find(layout.begin(), layout.end(), t.name);
                if (it == layout.end()) throw std::invalid_argument("free variable outside team domain: " + t.name);
                c.k = CTerm::K::Col;
                c.v = static_cast<int>(it - layout.begin());
                break;
            }
            case Term::Kind::Const:
                c.k = CTerm::K::Const;
                c.v = m.constant(t.name);
                break;
            case Term::Kind::App: {
                auto it = fn_index.find(t.name);
                if (it == fn_index.end()) throw std::invalid_argument("unknown function " + t.name);
                if (fns[static_cast<std::size_t>(it->second)]->arity != static_cast<int>(t.args.size()))
                    throw std::invalid_argument("arity mismatch for " + t.name);
                c.k = CTerm::K::App;
                c.v = it->second;
                for (const auto& a : t.args) c.args.push_back(cterm(a, layout));
                break;
            }
        }
        return c;
    }

    std::vector<CTerm> cterms(const Terms& ts, const std::vector<std::string>& layout) {
        std::vector<CTerm> out;
        for (const auto& t : ts) out.push_back(cterm(t, layout));
        return out;
    }

    int compile(const FormulaPtr& f, const std::vector<std::string>& layout) {
        int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        maxw = std::max(maxw, static_cast<int>(layout.size()));
        Node nd;
        nd.kind = f->kind;
        nd.src = f;
        nd.layout = layout;
        nd.w = static_cast<int>(layout.size());
        nd.fo = is_first_order(f);
        nd.cls[0] = closure_class(f, Mode::Lax);
        nd.cls[1] = closure_class(f, Mode::Strict);
        switch (f->kind) {
            case Kind::Lit:
                nd.positive = f->positive;
                if (!f->is_eq()) {
                    auto it = rel_index.find(f->rel);
                    if (it == rel_index.end()) throw std::invalid_argument("unknown relation " + f->rel);
                    if (rels[static_cast<std::size_t>(it->second)].arity != static_cast<int>(f->args.size()))
                        throw std::invalid_argument("arity mismatch for " + f->rel);
                    nd.rel = it->second;
                }
                nd.args = cterms(f->args, layout);
                break;
            case Kind::Dep:
            case Kind::Indep:
            case Kind::Incl:
            case Kind::Excl:
            case Kind::Equi:
                nd.t1 = cterms(f->t1, layout);
                nd.t2 = cterms(f->t2, layout);
                nd.t3 = cterms(f->t3, layout);
                break;
            case Kind::Or:
            case Kind::And:
                nd.l = compile(f->left, layout);
                nd.r = compile(f->right, layout);
                break;
            case Kind::Exists:
            case Kind::Forall: {
                auto child = layout;
                auto it = std::find(child.begin(), child.end(), f->var);
                if (it == child.end()) {
                    child.push_back(f->var);
                    nd.col = static_cast<int>(child.size()) - 1;
                } else {
                    nd.col = static_cast<int>(it - child.begin());
                }
                nd.cw = static_cast<int>(child.size());
                nd.l = compile(f->left, child);
                break;
            }
        }
        nodes[static_cast<std::size_t>(id)] = std::move(nd);
        return id;
    }

    void collect_hoisted(int id, std::set<std::string> rebound, std::vector<int>& dc, std::vector<int>& other) {
        const Node& nd = nodes[static_cast<std::size_t>(id)];
        switch (nd.kind) {
            case Kind::And:
                collect_hoisted(nd.l, rebound, dc, other);
                collect_hoisted(nd.r, rebound, dc, other);
                return;
            case Kind::Exists:
            case Kind::Forall:
                rebound.insert(nd.src->var);
                collect_hoisted(nd.l, rebound, dc, other);
                return;
            case Kind::Dep:
            case Kind::Excl:
            case Kind::Incl:
            case Kind::Equi:
            case Kind::Indep: {
                for (const auto& v : free_variables(nd.src))
                    if (rebound.count(v)) return;
                (nd.kind == Kind::Dep || nd.kind == Kind::Excl ? dc : other).push_back(id);
                return;
            }
            default: return;
        }
    }

    static bool flag_uses_ok(const FormulaPtr& f, const std::set<std::string>& block,
                             std::vector<std::pair<std::string, std::string>>& links) {
        if (f->kind == Kind::Lit) {
            std::set<std::string> vs;
            for (const auto& a : f->args) term_variables(a, vs);
            bool touches = false;
            for (const auto& v : vs)
                if (block.count(v)) touches = true;
            if (!touches) return true;
            if (!f->is_eq()) return false;
            const auto& a = f->args[0];
            const auto& b = f->args[1];
            if (!a.is_var() || !b.is_var() || !block.count(a.name) || !block.count(b.name)) return false;
            links.emplace_back(a.name, b.name);
            return true;
        }
        if (f->is_dependency_atom()) {
            for (const auto& v : free_variables(f))
                if (block.count(v)) return false;
            return true;
        }
        if (f->is_quant() && block.count(f->var)) return false;
        if (f->left && !flag_uses_ok(f->left, block, links)) return false;
        if (f->right && !flag_uses_ok(f->right, block, links)) return false;
        return true;
    }

    // Blocks of fresh existentials whose variables are pinned by dependence
    // atoms with one shared determiner and otherwise only compared with each
    // other: only the equality pattern per determiner class matters.
    bool analyze_flags(int id) {
        const Node& head = nodes[static_cast<std::size_t>(id)];
        std::vector<std::string> block;
        int cur = id;
        while (nodes[static_cast<std::size_t>(cur)].kind == Kind::Exists) {
            block.push_back(nodes[static_cast<std::size_t>(cur)].src->var);
            cur = nodes[static_cast<std::size_t>(cur)].l;
        }
        std::set<std::string> bset(block.begin(), block.end());
        if (bset.size() != block.size()) return false;
        for (const auto& v : block)
            if (std::find(head.layout.begin(), head.layout.end(), v) != head.layout.end()) return false;
        const Node& body = nodes[static_cast<std::size_t>(cur)];
        std::vector<FormulaPtr> conj;
        flatten(body.src, Kind::And, conj);
        std::optional<Terms> det;
        std::set<std::string> pinned;
        std::vector<FormulaPtr> rest;
        std::vector<std::pair<std::string, std::string>> links;
        for (const auto& c : conj) {
            if (c->kind == Kind::Dep && c->t1.back().is_var() && bset.count(c->t1.back().name)) {
                Terms d(c->t1.begin(), c->t1.end() - 1);
                for (const auto& v : term_variables(d))
                    if (bset.count(v)) return false;
                if (det && *det != d) return false;
                det = d;
                pinned.insert(c->t1.back().name);
                continue;
            }
            if (!flag_uses_ok(c, bset, links)) return false;
            rest.push_back(c);
        }
        if (pinned != bset) return false;

        std::map<std::string, std::string> parent;
        for (const auto& v : block) parent[v] = v;
        std::function<std::string(const std::string&)> find = [&](const std::string& v) {
            return parent[v] == v ? v : parent[v] = find(parent[v]);
        };
        for (const auto& [a, b] : links) parent[find(a)] = find(b);
        std::map<std::string, std::vector<int>> comps;
        for (std::size_t i = 0; i < block.size(); ++i) comps[find(block[i])].push_back(static_cast<int>(i));

        FlagBlock fb;
        fb.k = static_cast<int>(block.size());
        fb.patterns = {std::vector<E>(block.size(), 0)};
        for (const auto& [rep, members] : comps) {
            std::vector<std::vector<E>> rgs;
            std::vector<E> cur_vals;
            std::function<void(std::size_t, int)> gen = [&](std::size_t i, int maxv) {
                if (i == members.size()) {
                    rgs.push_back(cur_vals);
                    return;
                }
                for (int v = 0; v <= std::min(maxv + 1, dom - 1); ++v) {
                    cur_vals.push_back(static_cast<E>(v));
                    gen(i + 1, std::max(maxv, v));
                    cur_vals.pop_back();
                }
            };
            gen(0, -1);
            std::vector<std::vector<E>> next;
            for (const auto& p : fb.patterns)
                for (const auto& g : rgs) {
                    auto q = p;
                    for (std::size_t j = 0; j < members.size(); ++j) q[static_cast<std::size_t>(members[j])] = g[j];
                    next.push_back(q);
                }
            fb.patterns = std::move(next);
        }
        fb.det = cterms(*det, head.layout);
        fb.width = body.w;
        if (!rest.empty()) {
            auto body_layout = body.layout;
            fb.rest = compile(land_all(rest), body_layout);
            collect_hoisted(fb.rest, {}, fb.hoist_dc, fb.hoist_other);
            collect_sub(fb.rest, {}, fb.hoist_sub);
        }
        nodes[static_cast<std::size_t>(id)].flag = static_cast<int>(flags.size());
        flags.push_back(std::move(fb));
        return true;
    }

    // Downward-closed conjuncts that are not atoms; checked on partial witness
    // teams. Strict mode stops at universal quantifiers, which copy rows.
    void collect_sub(int id, std::set<std::string> rebound, std::vector<int>& out) {
        const Node& nd = nodes[static_cast<std::size_t>(id)];
        if (nd.kind == Kind::Lit || nd.src->is_dependency_atom() || nd.fo) return;
        if (nd.kind != Kind::And && cls(id) == Closure::Downward) {
            for (const auto& v : free_variables(nd.src))
                if (rebound.count(v)) return;
            out.push_back(id);
            return;
        }
        switch (nd.kind) {
            case Kind::And:
                collect_sub(nd.l, rebound, out);
                collect_sub(nd.r, rebound, out);
                return;
            case Kind::Forall:
                if (mode == Mode::Strict) return;
                [[fallthrough]];
            case Kind::Exists:
                rebound.insert(nd.src->var);
                collect_sub(nd.l, rebound, out);
                return;
            default: return;
        }
    }

    bool sub_ok(const std::vector<int>& ids, const std::vector<E>& data, int w, std::size_t count) {
        for (int a : ids) {
            const Node& c = nodes[static_cast<std::size_t>(a)];
            Rows y;
            y.w = c.w;
            y.n = count;
            if (c.w == w) {
                y.d.assign(data.begin(), data.begin() + static_cast<long>(count * static_cast<std::size_t>(w)));
            } else {
                y.d.assign(count * static_cast<std::size_t>(c.w), 0);
                for (std::size_t i = 0; i < count; ++i)
                    std::copy(data.begin() + static_cast<long>(i * static_cast<std::size_t>(w)),
                              data.begin() + static_cast<long>((i + 1) * static_cast<std::size_t>(w)),
                              y.d.begin() + static_cast<long>(i * static_cast<std::size_t>(c.w)));
            }
            y.normalize();
            if (!sat(a, y)) return false;
        }
        return true;
    }

    void prepare_exists(int id) {
        std::vector<int> dc, other;
        collect_hoisted(nodes[static_cast<std::size_t>(id)].l, {}, dc, other);
        nodes[static_cast<std::size_t>(id)].hoist_dc = dc;
        nodes[static_cast<std::size_t>(id)].hoist_other = other;
        std::vector<int> sub;
        collect_sub(nodes[static_cast<std::size_t>(id)].l, {}, sub);
        nodes[static_cast<std::size_t>(id)].hoist_sub = sub;
        analyze_flags(id);
    }

    // ------------------------------------------------------------ basics

    void tick() {
        if (++used > limit) throw BudgetExceeded(used);
    }

    Closure cls(int id) const { return nodes[static_cast<std::size_t>(id)].cls[mode == Mode::Lax ? 0 : 1]; }

    E eval(const CTerm& t, const E* row) const {
        switch (t.k) {
            case CTerm::K::Col: return row[t.v];
            case CTerm::K::Const: return static_cast<E>(t.v);
            case CTerm::K::App: {
                const Function* f = fns[static_cast<std::size_t>(t.v)];
                std::size_t c = 0;
                for (const auto& a : t.args) c = c * static_cast<std::size_t>(dom) + eval(a, row);
                return static_cast<E>(f->table[c]);
            }
        }
        return 0;
    }

    void eval_tuple(const std::vector<CTerm>& ts, const E* row, std::vector<E>& out) const {
        out.clear();
        for (const auto& t : ts) out.push_back(eval(t, row));
    }

    bool lit_true(const Node& nd, const E* row) const {
        bool v;
        if (nd.rel < 0) {
            v = eval(nd.args[0], row) == eval(nd.args[1], row);
        } else {
            const RelTab& t = rels[static_cast<std::size_t>(nd.rel)];
            if (t.bits) {
                std::size_t c = 0;
                for (const auto& a : nd.args) c = c * static_cast<std::size_t>(dom) + eval(a, row);
                v = t.bitmap[c] != 0;
            } else {
                Tuple tup;
                for (const auto& a : nd.args) tup.push_back(eval(a, row));
                v = t.tuples.count(tup) > 0;
            }
        }
        return v == nd.positive;
    }

    // Truth of the formula with every dependency atom read as true.
    bool skel(int id, E* row) const {
        const Node& nd = nodes[static_cast<std::size_t>(id)];
        switch (nd.kind) {
            case Kind::Lit: return lit_true(nd, row);
            case Kind::Or: return skel(nd.l, row) || skel(nd.r, row);
            case Kind::And: return skel(nd.l, row) && skel(nd.r, row);
            case Kind::Exists:
            case Kind::Forall: {
                E old = row[nd.col];
                bool res = nd.kind == Kind::Forall;
                for (int v = 0; v < dom; ++v) {
                    row[nd.col] = static_cast<E>(v);
                    bool s = skel(nd.l, row);
                    if (s != res) {
                        res = s;
                        break;
                    }
                }
                row[nd.col] = old;
                return res;
            }
            default: return true;
        }
    }

    std::vector<char> skel_mask(int id, const Rows& x) const {
        std::vector<char> out(x.n);
        std::vector<E> buf(static_cast<std::size_t>(maxw) + 1);
        for (std::size_t i = 0; i < x.n; ++i) {
            std::copy(x.row(i), x.row(i) + x.w, buf.begin());
            out[i] = skel(id, buf.data());
        }
        return out;
    }

    Rows extend_all(const Node& nd, const Rows& x) const {
        Rows out;
        out.w = nd.cw;
        std::vector<E> buf(static_cast<std::size_t>(nd.cw));
        for (std::size_t i = 0; i < x.n; ++i) {
            std::copy(x.row(i), x.row(i) + x.w, buf.begin());
            for (int v = 0; v < dom; ++v) {
                buf[static_cast<std::size_t>(nd.col)] = static_cast<E>(v);
                out.push(buf.data());
            }
        }
        out.normalize();
        return out;
    }

    // ------------------------------------------------------------ atoms

    using TupleVec = std::vector<std::vector<E>>;

    TupleVec tuples(const std::vector<CTerm>& ts, const Rows& x) const {
        TupleVec out(x.n);
        for (std::size_t i = 0; i < x.n; ++i) eval_tuple(ts, x.row(i), out[i]);
        return out;
    }

    bool atom_holds(const Node& nd, const Rows& x) const {
        switch (nd.kind) {
            case Kind::Lit:
                for (std::size_t i = 0; i < x.n; ++i)
                    if (!lit_true(nd, x.row(i))) return false;
                return true;
            case Kind::Dep: {
                std::vector<CTerm> det(nd.t1.begin(), nd.t1.end() - 1);
                std::map<std::vector<E>, E> fn;
                std::vector<E> k;
                for (std::size_t i = 0; i < x.n; ++i) {
                    eval_tuple(det, x.row(i), k);
                    E v = eval(nd.t1.back(), x.row(i));
                    auto [it, fresh] = fn.emplace(k, v);
                    if (!fresh && it->second != v) return false;
                }
                return true;
            }
            case Kind::Indep: {
                std::set<std::vector<E>> all;
                TupleVec a = tuples(nd.t1, x), b = tuples(nd.t2, x), c = tuples(nd.t3, x);
                for (std::size_t i = 0; i < x.n; ++i) {
                    auto t = a[i];
                    t.insert(t.end(), b[i].begin(), b[i].end());
                    t.insert(t.end(), c[i].begin(), c[i].end());
                    all.insert(t);
                }
                for (std::size_t i = 0; i < x.n; ++i)
                    for (std::size_t j = 0; j < x.n; ++j) {
                        if (a[i] != a[j]) continue;
                        auto t = a[i];
                        t.insert(t.end(), b[i].begin(), b[i].end());
                        t.insert(t.end(), c[j].begin(), c[j].end());
                        if (!all.count(t)) return false;
                    }
                return true;
            }
            case Kind::Incl:
            case Kind::Excl:
            case Kind::Equi: {
                TupleVec a = tuples(nd.t1, x), b = tuples(nd.t2, x);
                std::set<std::vector<E>> sa(a.begin(), a.end()), sb(b.begin(), b.end());
                if (nd.kind == Kind::Equi) return sa == sb;
                for (const auto& t : sa) {
                    bool in = sb.count(t) > 0;
                    if (nd.kind == Kind::Incl ? !in : in) return false;
                }
                return true;
            }
            default: throw std::logic_error("atom_holds on a connective");
        }
    }

    // Checks a downward-closed atom on rows [0, count) of `data`, looking only
    // at pairs that involve a row at index >= from.
    bool dc_incremental(const Node& nd, const std::vector<E>& data, int w, std::size_t from, std::size_t count) const {
        std::vector<E> a, b;
        auto row = [&](std::size_t i) { return data.data() + i * static_cast<std::size_t>(w); };
        if (nd.kind == Kind::Dep) {
            std::vector<CTerm> det(nd.t1.begin(), nd.t1.end() - 1);
            for (std::size_t i = from; i < count; ++i) {
                eval_tuple(det, row(i), a);
                E vi = eval(nd.t1.back(), row(i));
                for (std::size_t j = 0; j < i; ++j) {
                    eval_tuple(det, row(j), b);
                    if (a == b && vi != eval(nd.t1.back(), row(j))) return false;
                }
            }
            return true;
        }
        std::vector<E> a2, b2;
        for (std::size_t i = from; i < count; ++i) {
            eval_tuple(nd.t1, row(i), a);
            eval_tuple(nd.t2, row(i), a2);
            for (std::size_t j = 0; j <= i; ++j) {
                eval_tuple(nd.t1, row(j), b);
                eval_tuple(nd.t2, row(j), b2);
                if (a == b2 || b == a2) return false;
            }
        }
        return true;
    }

    bool hoisted_other_ok(const std::vector<int>& ids, const Rows& y) const {
        for (int a : ids)
            if (!atom_holds(nodes[static_cast<std::size_t>(a)], y)) return false;
        return true;
    }

    // ------------------------------------------------------------ satisfaction

    bool sat(int id, const Rows& x) {
        if (x.n == 0) return true;
        tick();
        const Node& nd = nodes[static_cast<std::size_t>(id)];
        if (opt.fast_paths && nd.fo && nd.kind != Kind::Lit) {
            auto mask = skel_mask(id, x);
            return std::all_of(mask.begin(), mask.end(), [](char c) { return c != 0; });
        }
        switch (nd.kind) {
            case Kind::Lit:
            case Kind::Dep:
            case Kind::Indep:
            case Kind::Incl:
            case Kind::Excl:
            case Kind::Equi: return atom_holds(nd, x);
            case Kind::And: return sat(nd.l, x) && sat(nd.r, x);
            case Kind::Forall: return sat(nd.l, extend_all(nd, x));
            case Kind::Or:
            case Kind::Exists: {
                std::string key = x.key(id);
                auto it = memo.find(key);
                if (it != memo.end()) return it->second != 0;
                bool v;
                if (!opt.fast_paths) v = nd.kind == Kind::Or ? or_reference(nd, x) : exists_reference(nd, x);
                else if (mode == Mode::Lax && cls(id) == Closure::Union) v = maxsub(id, x).n == x.n;
                else v = nd.kind == Kind::Or ? or_fast(nd, x) : exists_fast(id, x);
                memo[key] = v ? 1 : 0;
                return v;
            }
        }
        return false;
    }

    // Largest subteam of x satisfying a union-closed formula (lax only).
    Rows maxsub(int id, const Rows& x) {
        if (x.n == 0) return x;
        tick();
        const Node& nd = nodes[static_cast<std::size_t>(id)];
        if (nd.fo) return select(x, skel_mask(id, x));
        std::string key = x.key(id);
        auto it = maxmemo.find(key);
        if (it != maxmemo.end()) return it->second;
        Rows out;
        switch (nd.kind) {
            case Kind::Incl:
            case Kind::Equi: {
                std::vector<char> alive(x.n, 1);
                TupleVec a = tuples(nd.t1, x), b = tuples(nd.t2, x);
                bool changed = true;
                while (changed) {
                    changed = false;
                    std::set<std::vector<E>> sa, sb;
                    for (std::size_t i = 0; i < x.n; ++i)
                        if (alive[i]) {
                            sa.insert(a[i]);
                            sb.insert(b[i]);
                        }
                    for (std::size_t i = 0; i < x.n; ++i) {
                        if (!alive[i]) continue;
                        bool bad = !sb.count(a[i]) || (nd.kind == Kind::Equi && !sa.count(b[i]));
                        if (bad) {
                            alive[i] = 0;
                            changed = true;
                        }
                    }
                }
                out = select(x, alive);
                break;
            }
            case Kind::And: {
                out = x;
                while (true) {
                    Rows next = maxsub(nd.r, maxsub(nd.l, out));
                    bool stable = next.n == out.n;
                    out = std::move(next);
                    if (stable) break;
                }
                break;
            }
            case Kind::Or: {
                Rows a = maxsub(nd.l, x), b = maxsub(nd.r, x);
                std::vector<char> keep(x.n, 0);
                for (std::size_t i = 0; i < x.n; ++i) keep[i] = a.contains(x.row(i)) || b.contains(x.row(i));
                out = select(x, keep);
                break;
            }
            case Kind::Exists:
            case Kind::Forall: {
                out = x;
                std::vector<E> buf(static_cast<std::size_t>(nd.cw));
                while (true) {
                    Rows wit = maxsub(nd.l, extend_all(nd, out));
                    std::vector<char> keep(out.n, 0);
                    for (std::size_t i = 0; i < out.n; ++i) {
                        std::copy(out.row(i), out.row(i) + out.w, buf.begin());
                        bool any = false, all = true;
                        for (int v = 0; v < dom; ++v) {
                            buf[static_cast<std::size_t>(nd.col)] = static_cast<E>(v);
                            bool in = wit.contains(buf.data());
                            any = any || in;
                            all = all && in;
                        }
                        keep[i] = nd.kind == Kind::Exists ? any : all;
                    }
                    Rows next = select(out, keep);
                    bool stable = next.n == out.n;
                    out = std::move(next);
                    if (stable) break;
                }
                break;
            }
            default: throw std::logic_error("maxsub on a formula that is not union closed");
        }
        maxmemo[key] = out;
        return out;
    }

    // ------------------------------------------------------------ disjunction

    bool or_fast(const Node& nd, const Rows& x) {
        auto eL = skel_mask(nd.l, x), eR = skel_mask(nd.r, x);
        std::vector<char> fL(x.n), fR(x.n), both(x.n);
        for (std::size_t i = 0; i < x.n; ++i) {
            if (!eL[i] && !eR[i]) return false;
            fL[i] = eL[i] && !eR[i];
            fR[i] = eR[i] && !eL[i];
            both[i] = eL[i] && eR[i];
        }
        Closure cL = cls(nd.l), cR = cls(nd.r);
        auto unite = [&](const std::vector<char>& a, const std::vector<char>& b) {
            std::vector<char> out(x.n);
            for (std::size_t i = 0; i < x.n; ++i) out[i] = a[i] || b[i];
            return out;
        };
        std::vector<std::size_t> bidx;
        for (std::size_t i = 0; i < x.n; ++i)
            if (both[i]) bidx.push_back(i);

        // One flat side: it can absorb every row eligible for it.
        if (cL == Closure::FirstOrder || cR == Closure::FirstOrder) {
            bool left_flat = cL == Closure::FirstOrder;
            int other = left_flat ? nd.r : nd.l;
            const auto& forced = left_flat ? fR : fL;
            Closure co = left_flat ? cR : cL;
            if (co == Closure::FirstOrder || co == Closure::Downward) return sat(other, select(x, forced));
            if (mode == Mode::Lax && co == Closure::Union) {
                Rows zmax = maxsub(other, select(x, unite(forced, both)));
                for (std::size_t i = 0; i < x.n; ++i)
                    if (forced[i] && !zmax.contains(x.row(i))) return false;
                return true;
            }
            return subsets_search(other, x, forced, bidx);
        }
        if (mode == Mode::Lax) {
            if (cL == Closure::Union && cR == Closure::Union) {
                Rows a = maxsub(nd.l, select(x, eL)), b = maxsub(nd.r, select(x, eR));
                for (std::size_t i = 0; i < x.n; ++i)
                    if (!a.contains(x.row(i)) && !b.contains(x.row(i))) return false;
                return true;
            }
            if (cL == Closure::Union || cR == Closure::Union) {
                bool left_u = cL == Closure::Union;
                int u = left_u ? nd.l : nd.r, o = left_u ? nd.r : nd.l;
                const auto& eU = left_u ? eL : eR;
                const auto& eO = left_u ? eR : eL;
                Rows umax = maxsub(u, select(x, eU));
                std::vector<char> rest(x.n), opt_rows(x.n, 0);
                for (std::size_t i = 0; i < x.n; ++i) {
                    bool in = umax.contains(x.row(i));
                    rest[i] = !in;
                    if (!in && !eO[i]) return false;
                    opt_rows[i] = in && eO[i];
                }
                if (cls(o) == Closure::Downward) return sat(o, select(x, rest));
                std::vector<std::size_t> oidx;
                for (std::size_t i = 0; i < x.n; ++i)
                    if (opt_rows[i]) oidx.push_back(i);
                return subsets_search(o, x, rest, oidx);
            }
            if (cL == Closure::Downward || cR == Closure::Downward) return partition_search(nd, x, fL, fR, bidx);
            return cover_search(nd, x, fL, fR, bidx);
        }
        return partition_search(nd, x, fL, fR, bidx);
    }

    // Some Z with base <= Z <= base + opt satisfies the formula.
    bool subsets_search(int id, const Rows& x, const std::vector<char>& base, const std::vector<std::size_t>& opt) {
        std::vector<char> cur = base;
        std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
            tick();
            if (k == opt.size()) return sat(id, select(x, cur));
            if (go(k + 1)) return true;
            cur[opt[k]] = 1;
            bool r = go(k + 1);
            cur[opt[k]] = 0;
            return r;
        };
        return go(0);
    }

    bool partition_search(const Node& nd, const Rows& x, const std::vector<char>& fL, const std::vector<char>& fR,
                          const std::vector<std::size_t>& bidx) {
        bool dl = cls(nd.l) != Closure::General && cls(nd.l) != Closure::Union;
        bool dr = cls(nd.r) != Closure::General && cls(nd.r) != Closure::Union;
        std::vector<char> L = fL, R = fR;
        if (dl && !sat(nd.l, select(x, L))) return false;
        if (dr && !sat(nd.r, select(x, R))) return false;
        std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
            tick();
            if (k == bidx.size()) return sat(nd.l, select(x, L)) && sat(nd.r, select(x, R));
            std::size_t i = bidx[k];
            for (int side = 0; side < 2; ++side) {
                auto& s = side == 0 ? L : R;
                s[i] = 1;
                bool ok = side == 0 ? (!dl || sat(nd.l, select(x, L))) : (!dr || sat(nd.r, select(x, R)));
                if (ok && go(k + 1)) {
                    s[i] = 0;
                    return true;
                }
                s[i] = 0;
            }
            return false;
        };
        return go(0);
    }

    // Lax split with both sides unrestricted: tabulate both sides over all
    // subsets of the shared rows, then look for a covering pair.
    bool cover_search(const Node& nd, const Rows& x, const std::vector<char>& fL, const std::vector<char>& fR,
                      const std::vector<std::size_t>& bidx) {
        std::size_t k = bidx.size();
        if (k > 20) {
            std::vector<char> L = fL, R = fR;
            std::function<bool(std::size_t)> go = [&](std::size_t j) -> bool {
                tick();
                if (j == k) return sat(nd.l, select(x, L)) && sat(nd.r, select(x, R));
                std::size_t i = bidx[j];
                for (int c = 1; c <= 3; ++c) {
                    L[i] = (c & 1) != 0;
                    R[i] = (c & 2) != 0;
                    if (go(j + 1)) return true;
                }
                L[i] = fL[i];
                R[i] = fR[i];
                return false;
            };
            return go(0);
        }
        std::size_t full = (std::size_t{1} << k) - 1;
        std::vector<char> up(full + 1, 0);
        auto with = [&](const std::vector<char>& base, std::size_t mask) {
            auto s = base;
            for (std::size_t j = 0; j < k; ++j)
                if (mask >> j & 1) s[bidx[j]] = 1;
            return select(x, s);
        };
        for (std::size_t mask = 0; mask <= full; ++mask) up[mask] = sat(nd.r, with(fR, mask));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t mask = 0; mask <= full; ++mask)
                if (!(mask >> j & 1) && up[mask | (std::size_t{1} << j)]) up[mask] = 1;
        for (std::size_t mask = 0; mask <= full; ++mask) {
            tick();
            if (up[full ^ mask] && sat(nd.l, with(fL, mask))) return true;
        }
        return false;
    }

    bool or_reference(const Node& nd, const Rows& x) {
        std::size_t n = x.n;
        if (n > 24) throw BudgetExceeded(used);
        std::size_t full = (std::size_t{1} << n) - 1;
        auto sub = [&](std::size_t mask) {
            std::vector<char> keep(n);
            for (std::size_t i = 0; i < n; ++i) keep[i] = (mask >> i & 1) != 0;
            return select(x, keep);
        };
        std::vector<char> sl(full + 1), sr(full + 1);
        for (std::size_t mask = 0; mask <= full; ++mask) {
            sl[mask] = sat(nd.l, sub(mask));
            sr[mask] = sat(nd.r, sub(mask));
        }
        if (mode == Mode::Strict) {
            for (std::size_t mask = 0; mask <= full; ++mask)
                if (sl[mask] && sr[full ^ mask]) return true;
            return false;
        }
        for (std::size_t a = 0; a <= full; ++a) {
            if (!sl[a]) continue;
            for (std::size_t b = 0; b <= full; ++b) {
                tick();
                if (sr[b] && (a | b) == full) return true;
            }
        }
        return false;
    }

    // ------------------------------------------------------------ existential

    bool exists_reference(const Node& nd, const Rows& x) {
        Rows ext = extend_all(nd, x);
        std::vector<E> buf(static_cast<std::size_t>(nd.cw));
        std::vector<std::vector<std::size_t>> of(x.n);
        for (std::size_t i = 0; i < x.n; ++i) {
            std::copy(x.row(i), x.row(i) + x.w, buf.begin());
            for (int v = 0; v < dom; ++v) {
                buf[static_cast<std::size_t>(nd.col)] = static_cast<E>(v);
                for (std::size_t j = 0; j < ext.n; ++j)
                    if (std::equal(buf.begin(), buf.end(), ext.row(j))) of[i].push_back(j);
            }
        }
        if (mode == Mode::Lax) {
            if (ext.n > 24) throw BudgetExceeded(used);
            std::size_t full = (std::size_t{1} << ext.n) - 1;
            for (std::size_t mask = 1; mask <= full; ++mask) {
                tick();
                bool cover = true;
                for (std::size_t i = 0; i < x.n && cover; ++i)
                    cover = std::any_of(of[i].begin(), of[i].end(), [&](std::size_t j) { return (mask >> j & 1) != 0; });
                if (!cover) continue;
                std::vector<char> keep(ext.n);
                for (std::size_t j = 0; j < ext.n; ++j) keep[j] = (mask >> j & 1) != 0;
                if (sat(nd.l, select(ext, keep))) return true;
            }
            return false;
        }
        std::vector<int> choice(x.n, 0);
        while (true) {
            tick();
            Rows y;
            y.w = nd.cw;
            for (std::size_t i = 0; i < x.n; ++i) {
                std::copy(x.row(i), x.row(i) + x.w, buf.begin());
                buf[static_cast<std::size_t>(nd.col)] = static_cast<E>(choice[i]);
                y.push(buf.data());
            }
            y.normalize();
            if (sat(nd.l, y)) return true;
            std::size_t i = 0;
            while (i < x.n && ++choice[i] == dom) choice[i++] = 0;
            if (i == x.n) return false;
        }
    }

    bool exists_fast(int id, const Rows& x) {
        const Node& nd = nodes[static_cast<std::size_t>(id)];
        if (nd.flag >= 0) return flag_search(nd, flags[static_cast<std::size_t>(nd.flag)], x);
        std::vector<E> buf(static_cast<std::size_t>(maxw) + 1);
        std::vector<std::vector<E>> elig(x.n);
        for (std::size_t i = 0; i < x.n; ++i) {
            std::copy(x.row(i), x.row(i) + x.w, buf.begin());
            for (int v = 0; v < dom; ++v) {
                buf[static_cast<std::size_t>(nd.col)] = static_cast<E>(v);
                if (skel(nd.l, buf.data())) elig[i].push_back(static_cast<E>(v));
            }
            if (elig[i].empty()) return false;
        }
        Closure cb = cls(nd.l);
        if (cb == Closure::FirstOrder) return true;
        if (mode == Mode::Lax && cb == Closure::Union) {
            Rows ext;
            ext.w = nd.cw;
            for (std::size_t i = 0; i < x.n; ++i) {
                std::copy(x.row(i), x.row(i) + x.w, buf.begin());
                for (E v : elig[i]) {
                    buf[static_cast<std::size_t>(nd.col)] = v;
                    ext.push(buf.data());
                }
            }
            ext.normalize();
            Rows wit = maxsub(nd.l, ext);
            for (std::size_t i = 0; i < x.n; ++i) {
                std::copy(x.row(i), x.row(i) + x.w, buf.begin());
                bool any = false;
                for (E v : elig[i]) {
                    buf[static_cast<std::size_t>(nd.col)] = v;
                    if (wit.contains(buf.data())) {
                        any = true;
                        break;
                    }
                }
                if (!any) return false;
            }
            return true;
        }
        bool sets = mode == Mode::Lax && cb == Closure::General;
        // Per-row witness options: singletons, or all nonempty subsets smallest first.
        std::vector<std::vector<std::vector<E>>> options(x.n);
        for (std::size_t i = 0; i < x.n; ++i) {
            std::size_t k = elig[i].size();
            if (!sets) {
                for (E v : elig[i]) options[i].push_back({v});
                continue;
            }
            std::vector<std::size_t> masks;
            for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) masks.push_back(mask);
            std::stable_sort(masks.begin(), masks.end(), [](std::size_t a, std::size_t b) {
                return __builtin_popcountll(a) < __builtin_popcountll(b);
            });
            for (auto mask : masks) {
                std::vector<E> s;
                for (std::size_t j = 0; j < k; ++j)
                    if (mask >> j & 1) s.push_back(elig[i][j]);
                options[i].push_back(s);
            }
        }
        std::vector<E> data;
        std::size_t count = 0;
        int cw = nd.cw;
        std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
            tick();
            if (i == x.n) {
                Rows y;
                y.w = cw;
                y.d = data;
                y.n = count;
                y.normalize();
                return hoisted_other_ok(nd.hoist_other, y) && sat(nd.l, y);
            }
            for (const auto& opt : options[i]) {
                std::size_t before = count;
                for (E v : opt) {
                    std::copy(x.row(i), x.row(i) + x.w, buf.begin());
                    buf[static_cast<std::size_t>(nd.col)] = v;
                    data.insert(data.end(), buf.begin(), buf.begin() + cw);
                    ++count;
                }
                bool ok = true;
                for (int a : nd.hoist_dc)
                    if (!dc_incremental(nodes[static_cast<std::size_t>(a)], data, cw, before, count)) {
                        ok = false;
                        break;
                    }
                ok = ok && sub_ok(nd.hoist_sub, data, cw, count);
                if (ok && go(i + 1)) return true;
                data.resize(before * static_cast<std::size_t>(cw));
                count = before;
            }
            return false;
        };
        return go(0);
    }

    bool flag_search(const Node& nd, const FlagBlock& fb, const Rows& x) {
        std::map<std::vector<E>, std::size_t> class_of;
        std::vector<std::size_t> cls_row(x.n);
        std::vector<E> k;
        for (std::size_t i = 0; i < x.n; ++i) {
            eval_tuple(fb.det, x.row(i), k);
            cls_row[i] = class_of.emplace(k, class_of.size()).first->second;
        }
        std::size_t C = class_of.size();
        std::vector<std::vector<std::size_t>> members(C);
        for (std::size_t i = 0; i < x.n; ++i) members[cls_row[i]].push_back(i);
        int w = fb.width;
        std::vector<E> data;
        std::size_t count = 0;
        std::vector<E> buf(static_cast<std::size_t>(w));
        std::function<bool(std::size_t)> go = [&](std::size_t c) -> bool {
            tick();
            if (c == C) {
                if (fb.rest < 0) return true;
                Rows y;
                y.w = w;
                y.d = data;
                y.n = count;
                y.normalize();
                return hoisted_other_ok(fb.hoist_other, y) && sat(fb.rest, y);
            }
            for (const auto& p : fb.patterns) {
                std::size_t before = count;
                for (auto i : members[c]) {
                    std::copy(x.row(i), x.row(i) + x.w, buf.begin());
                    std::copy(p.begin(), p.end(), buf.begin() + nd.w);
                    data.insert(data.end(), buf.begin(), buf.end());
                    ++count;
                }
                bool ok = true;
                for (int a : fb.hoist_dc)
                    if (!dc_incremental(nodes[static_cast<std::size_t>(a)], data, w, before, count)) {
                        ok = false;
                        break;
                    }
                ok = ok && sub_ok(fb.hoist_sub, data, w, count);
                if (ok && go(c + 1)) return true;
                data.resize(before * static_cast<std::size_t>(w));
                count = before;
            }
            return false;
        };
        return go(0);
    }

    Rows to_rows(const Team& x) const {
        if (x.vars != root_vars) throw std::invalid_argument("team variables differ from the compiled layout");
        Rows r;
        r.w = static_cast<int>(x.vars.size());
        for (const auto& row : x.rows) {
            std::vector<E> t;
            for (Elem e : row) {
                if (e < 0 || e >= dom) throw std::invalid_argument("team element outside domain");
                t.push_back(static_cast<E>(e));
            }
            r.push(t.data());
        }
        r.normalize();
        return r;
    }
};

Evaluator::Evaluator(const Model& m, FormulaPtr f, std::vector<std::string> team_vars, Mode mode, EvalOptions opt)
    : impl_(std::make_unique<Impl>(m, f, std::move(team_vars), mode, opt)) {}

Evaluator::~Evaluator() = default;

bool Evaluator::holds(const Team& x, Budget b) {
    Rows r = impl_->to_rows(x);
    impl_->used = 0;
    impl_->limit = b.max_nodes;
    return impl_->sat(impl_->root, r);
}

Verdict Evaluator::run(const Team& x, Budget b) {
    try {
        bool v = holds(x, b);
        return {v ? Verdict::Kind::Sat : Verdict::Kind::Unsat, impl_->used};
    } catch (const BudgetExceeded& e) {
        return {Verdict::Kind::BudgetExceeded, e.nodes};
    }
}

Verdict satisfies(const Model& m, const Team& x, const FormulaPtr& f, Mode mode, Budget b, EvalOptions opt) {
    for (const auto& v : free_variables(f))
        if (x.column(v) < 0) throw std::invalid_argument("free variable outside team domain: " + v);
    Evaluator ev(m, f, x.vars, mode, opt);
    return ev.run(x, b);
}

Verdict satisfies_sentence(const Model& m, const FormulaPtr& f, Mode mode, Budget b, EvalOptions opt) {
    if (!free_variables(f).empty()) throw std::invalid_argument("formula has free variables");
    return satisfies(m, empty_assignment_team(), f, mode, b, opt);
}

namespace {

std::vector<Tuple> values(const Model& m, const Team& x, const Terms& ts) {
    std::vector<Tuple> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto s = x.assignment(i);
        Tuple t;
        for (const auto& term : ts) t.push_back(eval_term(m, s, term));
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

bool check_dependence(const Model& m, const Team& x, const Terms& ts) {
    if (ts.empty()) throw std::invalid_argument("dep: needs at least one term");
    Terms det(ts.begin(), ts.end() - 1);
    auto a = values(m, x, det);
    auto b = values(m, x, {ts.back()});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[i] == a[j] && b[i] != b[j]) return false;
    return true;
}

bool check_independence(const Model& m, const Team& x, const Terms& t1s, const Terms& t2s, const Terms& t3s) {
    auto a = values(m, x, t1s), b = values(m, x, t2s), c = values(m, x, t3s);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[i] != a[j]) continue;
            bool found = false;
            for (std::size_t k = 0; k < a.size() && !found; ++k)
                found = a[k] == a[i] && b[k] == b[i] && c[k] == c[j];
            if (!found) return false;
        }
    return true;
}

bool check_inclusion(const Model& m, const Team& x, const Terms& t1s, const Terms& t2s) {
    if (t1s.size() != t2s.size()) throw std::invalid_argument("incl: tuples of different width");
    auto a = team_relation(m, x, t1s), b = team_relation(m, x, t2s);
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool check_exclusion(const Model& m, const Team& x, const Terms& t1s, const Terms& t2s) {
    if (t1s.size() != t2s.size()) throw std::invalid_argument("excl: tuples of different width");
    auto a = team_relation(m, x, t1s), b = team_relation(m, x, t2s);
    for (const auto& t : a)
        if (b.count(t)) return false;
    return true;
}

bool check_equiextension(const Model& m, const Team& x, const Terms& t1s, const Terms& t2s) {
    if (t1s.size() != t2s.size()) throw std::invalid_argument("equi: tuples of different width");
    return team_relation(m, x, t1s) == team_relation(m, x, t2s);
}

}  // namespace teamlogic
