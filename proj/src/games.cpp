#include "teamlogic/games.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace teamlogic {

Assignment Arena::assignment(int p) const {
    const Position& pos = positions[static_cast<std::size_t>(p)];
    const auto& vs = instances[static_cast<std::size_t>(pos.instance)].vars;
    Assignment s;
    for (std::size_t i = 0; i < vs.size(); ++i) s[vs[i]] = pos.values[i];
    return s;
}

namespace {

int add_instance(Arena& a, const FormulaPtr& f, Path path, std::vector<std::string> vs) {
    if (f->kind == Kind::Dep || f->kind == Kind::Indep || f->kind == Kind::Equi)
        throw UnsupportedAtom("game semantics covers FO literals, incl and excl only; translate " + render(f) +
                              " first (compile to incl/excl)");
    int id = static_cast<int>(a.instances.size());
    a.instances.push_back({path, f, vs, {}});
    std::vector<int> kids;
    if (f->is_binary()) {
        for (std::uint8_t i = 0; i < 2; ++i) {
            Path p = path;
            p.push_back(i);
            kids.push_back(add_instance(a, i == 0 ? f->left : f->right, p, vs));
        }
    } else if (f->is_quant()) {
        auto child = vs;
        if (std::find(child.begin(), child.end(), f->var) == child.end()) child.push_back(f->var);
        Path p = path;
        p.push_back(0);
        kids.push_back(add_instance(a, f->left, p, child));
    }
    a.instances[static_cast<std::size_t>(id)].children = kids;
    return id;
}

Tuple eval_all(const Model& m, const Assignment& s, const Terms& ts) {
    Tuple t;
    for (const auto& term : ts) t.push_back(eval_term(m, s, term));
    return t;
}

std::vector<char> reachable(const Arena& a, const Strategy& tau) {
    std::vector<char> seen(a.positions.size(), 0);
    std::vector<int> stack(a.initial.begin(), a.initial.end());
    while (!stack.empty()) {
        int p = stack.back();
        stack.pop_back();
        if (seen[static_cast<std::size_t>(p)]) continue;
        seen[static_cast<std::size_t>(p)] = 1;
        if (a.terminal[static_cast<std::size_t>(p)]) continue;
        if (a.turn[static_cast<std::size_t>(p)] == Player::II) {
            auto it = tau.find(p);
            if (it == tau.end() || it->second.empty())
                throw std::invalid_argument("strategy undefined at a reachable position");
            const auto& succ = a.successors[static_cast<std::size_t>(p)];
            for (int q : it->second) {
                if (std::find(succ.begin(), succ.end(), q) == succ.end())
                    throw std::invalid_argument("strategy chooses a non-successor");
                stack.push_back(q);
            }
        } else {
            for (int q : a.successors[static_cast<std::size_t>(p)]) stack.push_back(q);
        }
    }
    return seen;
}

}  // namespace

Arena build_arena(const Model& m, const Team& x, const FormulaPtr& f, std::size_t max_positions) {
    for (const auto& v : free_variables(f))
        if (x.column(v) < 0) throw std::invalid_argument("free variable outside team domain: " + v);
    Arena a;
    add_instance(a, f, {}, x.vars);
    std::map<Position, int> index;
    std::deque<int> queue;
    auto intern = [&](Position pos) {
        auto it = index.find(pos);
        if (it != index.end()) return it->second;
        if (a.positions.size() >= max_positions)
            throw ArenaTooLarge("arena exceeds " + std::to_string(max_positions) + " positions");
        int id = static_cast<int>(a.positions.size());
        index.emplace(pos, id);
        a.positions.push_back(std::move(pos));
        a.successors.emplace_back();
        a.turn.push_back(Player::I);
        a.terminal.push_back(0);
        a.winning.push_back(0);
        queue.push_back(id);
        return id;
    };
    for (const auto& row : x.rows) a.initial.push_back(intern({0, row}));
    while (!queue.empty()) {
        int p = queue.front();
        queue.pop_front();
        Position pos = a.positions[static_cast<std::size_t>(p)];
        const Instance& inst = a.instances[static_cast<std::size_t>(pos.instance)];
        const FormulaPtr& g = inst.formula;
        std::vector<int> succ;
        switch (g->kind) {
            case Kind::Or:
            case Kind::And:
                for (int c : inst.children) succ.push_back(intern({c, pos.values}));
                a.turn[static_cast<std::size_t>(p)] = g->kind == Kind::Or ? Player::II : Player::I;
                break;
            case Kind::Exists:
            case Kind::Forall: {
                int c = inst.children[0];
                const auto& cv = a.instances[static_cast<std::size_t>(c)].vars;
                auto col = static_cast<std::size_t>(std::find(cv.begin(), cv.end(), g->var) - cv.begin());
                for (Elem e = 0; e < m.size(); ++e) {
                    Tuple t = pos.values;
                    if (col == t.size()) t.push_back(e);
                    else t[col] = e;
                    succ.push_back(intern({c, t}));
                }
                a.turn[static_cast<std::size_t>(p)] = g->kind == Kind::Exists ? Player::II : Player::I;
                break;
            }
            default:
                a.terminal[static_cast<std::size_t>(p)] = 1;
                a.winning[static_cast<std::size_t>(p)] = g->kind == Kind::Lit ? tarski(m, a.assignment(p), g) : 1;
        }
        a.successors[static_cast<std::size_t>(p)] = succ;
    }
    return a;
}

std::vector<Play> plays_following(const Arena& a, const Strategy& tau) {
    reachable(a, tau);
    std::vector<Play> out;
    Play cur;
    std::function<void(int)> go = [&](int p) {
        cur.push_back(p);
        if (a.terminal[static_cast<std::size_t>(p)]) {
            out.push_back(cur);
        } else {
            const auto& next = a.turn[static_cast<std::size_t>(p)] == Player::II ? tau.at(p) : a.successors[static_cast<std::size_t>(p)];
            for (int q : next) go(q);
        }
        cur.pop_back();
    };
    for (int p : a.initial) go(p);
    return out;
}

bool is_winning(const Arena& a, const Strategy& tau) {
    auto seen = reachable(a, tau);
    for (std::size_t p = 0; p < seen.size(); ++p)
        if (seen[p] && a.terminal[p] && !a.winning[p]) return false;
    return true;
}

bool is_deterministic(const Strategy& tau) {
    return std::all_of(tau.begin(), tau.end(), [](const auto& kv) { return kv.second.size() == 1; });
}

bool is_uniform(const Model& m, const Arena& a, const Strategy& tau) {
    auto seen = reachable(a, tau);
    std::map<int, std::set<Tuple>> left, right;
    for (std::size_t p = 0; p < seen.size(); ++p) {
        if (!seen[p] || !a.terminal[p]) continue;
        const FormulaPtr& g = a.formula(static_cast<int>(p));
        if (g->kind != Kind::Incl && g->kind != Kind::Excl) continue;
        auto s = a.assignment(static_cast<int>(p));
        int inst = a.positions[p].instance;
        left[inst].insert(eval_all(m, s, g->t1));
        right[inst].insert(eval_all(m, s, g->t2));
    }
    for (const auto& [inst, l] : left) {
        const auto& r = right[inst];
        bool inclusion = a.instances[static_cast<std::size_t>(inst)].formula->kind == Kind::Incl;
        for (const auto& t : l)
            if (inclusion != (r.count(t) > 0)) return false;
    }
    return true;
}

namespace {

class Search {
public:
    Search(const Model& m, const Arena& a, bool det, Budget b) : m_(m), a_(a), det_(det), limit_(b.max_nodes) {
        std::size_t n = a.positions.size();
        t1_.resize(n);
        t2_.resize(n);
        kind_.assign(n, Kind::Lit);
        for (std::size_t p = 0; p < n; ++p) {
            if (!a.terminal[p]) continue;
            const FormulaPtr& g = a.formula(static_cast<int>(p));
            kind_[p] = g->kind;
            if (g->kind == Kind::Incl || g->kind == Kind::Excl) {
                auto s = a.assignment(static_cast<int>(p));
                t1_[p] = eval_all(m, s, g->t1);
                t2_[p] = eval_all(m, s, g->t2);
                has_excl_ = has_excl_ || g->kind == Kind::Excl;
            }
        }
    }

    std::optional<Strategy> run() {
        if (!greatest_fixpoint()) return std::nullopt;
        if (!det_ && !has_excl_) {
            Strategy tau;
            for (int p : reach(alive_))
                if (!a_.terminal[static_cast<std::size_t>(p)] && a_.turn[static_cast<std::size_t>(p)] == Player::II)
                    tau[p] = alive_successors(p);
            return tau;
        }
        reached_.assign(a_.positions.size(), 0);
        for (int p : a_.initial)
            if (!add(p)) return std::nullopt;
        if (!search()) return std::nullopt;
        return tau_;
    }

private:
    const Model& m_;
    const Arena& a_;
    bool det_;
    std::uint64_t limit_, used_ = 0;
    bool has_excl_ = false;
    std::vector<Tuple> t1_, t2_;
    std::vector<Kind> kind_;
    std::vector<char> alive_;
    std::vector<char> reached_;
    std::vector<int> trail_;
    std::map<int, std::map<Tuple, int>> left_, right_;
    struct ByPosition {
        const Arena* a;
        bool operator()(int p, int q) const { return a->positions[static_cast<std::size_t>(p)] < a->positions[static_cast<std::size_t>(q)]; }
    };
    std::set<int, ByPosition> pending_{ByPosition{&a_}};
    Strategy tau_;

    void tick() {
        if (++used_ > limit_) throw BudgetExceeded(used_);
    }

    std::vector<int> alive_successors(int p) const {
        std::vector<int> out;
        for (int q : a_.successors[static_cast<std::size_t>(p)])
            if (alive_[static_cast<std::size_t>(q)]) out.push_back(q);
        return out;
    }

    std::vector<int> reach(const std::vector<char>& alive) const {
        std::vector<char> seen(a_.positions.size(), 0);
        std::vector<int> out, stack;
        for (int p : a_.initial)
            if (alive[static_cast<std::size_t>(p)]) stack.push_back(p);
        while (!stack.empty()) {
            int p = stack.back();
            stack.pop_back();
            if (seen[static_cast<std::size_t>(p)]) continue;
            seen[static_cast<std::size_t>(p)] = 1;
            out.push_back(p);
            for (int q : a_.successors[static_cast<std::size_t>(p)])
                if (alive[static_cast<std::size_t>(q)]) stack.push_back(q);
        }
        return out;
    }

    // Positions from which II can still win once inclusion witnesses are
    // required to be reachable inside the surviving region.
    bool greatest_fixpoint() {
        std::size_t n = a_.positions.size();
        alive_.assign(n, 1);
        for (std::size_t p = 0; p < n; ++p)
            if (a_.terminal[p] && !a_.winning[p]) alive_[p] = 0;
        while (true) {
            bool changed = true;
            while (changed) {
                changed = false;
                for (std::size_t p = n; p-- > 0;) {
                    if (!alive_[p] || a_.terminal[p]) continue;
                    tick();
                    const auto& succ = a_.successors[p];
                    bool ok = a_.turn[p] == Player::II
                                  ? std::any_of(succ.begin(), succ.end(), [&](int q) { return alive_[static_cast<std::size_t>(q)] != 0; })
                                  : std::all_of(succ.begin(), succ.end(), [&](int q) { return alive_[static_cast<std::size_t>(q)] != 0; });
                    if (!ok) {
                        alive_[p] = 0;
                        changed = true;
                    }
                }
            }
            for (int p : a_.initial)
                if (!alive_[static_cast<std::size_t>(p)]) return false;
            std::map<int, std::set<Tuple>> supply;
            for (int p : reach(alive_))
                if (kind_[static_cast<std::size_t>(p)] == Kind::Incl)
                    supply[a_.positions[static_cast<std::size_t>(p)].instance].insert(t2_[static_cast<std::size_t>(p)]);
            bool removed = false;
            for (std::size_t p = 0; p < n; ++p) {
                if (!alive_[p] || kind_[p] != Kind::Incl) continue;
                if (!supply[a_.positions[p].instance].count(t1_[p])) {
                    alive_[p] = 0;
                    removed = true;
                }
            }
            if (!removed) return true;
        }
    }

    bool add(int p) {
        auto up = static_cast<std::size_t>(p);
        if (reached_[up]) return true;
        reached_[up] = 1;
        trail_.push_back(p);
        if (a_.terminal[up]) {
            if (kind_[up] != Kind::Excl) return true;
            int inst = a_.positions[up].instance;
            auto& l = left_[inst];
            auto& r = right_[inst];
            bool clash = t1_[up] == t2_[up] || r.count(t1_[up]) || l.count(t2_[up]);
            ++l[t1_[up]];
            ++r[t2_[up]];
            return !clash;
        }
        if (a_.turn[up] == Player::II) {
            pending_.insert(p);
            return true;
        }
        for (int q : a_.successors[up])
            if (!add(q)) return false;
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            int p = trail_.back();
            trail_.pop_back();
            auto up = static_cast<std::size_t>(p);
            reached_[up] = 0;
            if (kind_[up] == Kind::Excl && a_.terminal[up]) {
                int inst = a_.positions[up].instance;
                if (--left_[inst][t1_[up]] == 0) left_[inst].erase(t1_[up]);
                if (--right_[inst][t2_[up]] == 0) right_[inst].erase(t2_[up]);
            }
            if (!a_.terminal[up] && a_.turn[up] == Player::II) {
                pending_.erase(p);
                tau_.erase(p);
            }
        }
    }

    bool inclusions_witnessed() const {
        std::map<int, std::set<Tuple>> supply;
        for (int p : trail_)
            if (kind_[static_cast<std::size_t>(p)] == Kind::Incl && a_.terminal[static_cast<std::size_t>(p)])
                supply[a_.positions[static_cast<std::size_t>(p)].instance].insert(t2_[static_cast<std::size_t>(p)]);
        for (int p : trail_)
            if (kind_[static_cast<std::size_t>(p)] == Kind::Incl && a_.terminal[static_cast<std::size_t>(p)] &&
                !supply[a_.positions[static_cast<std::size_t>(p)].instance].count(t1_[static_cast<std::size_t>(p)]))
                return false;
        return true;
    }

    bool search() {
        tick();
        if (pending_.empty()) return inclusions_witnessed();
        int p = *pending_.begin();
        pending_.erase(pending_.begin());
        auto opts = alive_successors(p);
        std::vector<std::vector<int>> choices;
        if (det_) {
            for (int q : opts) choices.push_back({q});
        } else {
            std::size_t k = opts.size();
            std::vector<std::size_t> masks;
            for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) masks.push_back(mask);
            std::stable_sort(masks.begin(), masks.end(),
                             [](std::size_t x, std::size_t y) { return __builtin_popcountll(x) < __builtin_popcountll(y); });
            for (auto mask : masks) {
                std::vector<int> c;
                for (std::size_t j = 0; j < k; ++j)
                    if (mask >> j & 1) c.push_back(opts[j]);
                choices.push_back(c);
            }
        }
        for (const auto& c : choices) {
            std::size_t mark = trail_.size();
            bool ok = true;
            for (int q : c)
                if (!add(q)) {
                    ok = false;
                    break;
                }
            if (ok) {
                tau_[p] = c;
                if (search()) return true;
            }
            undo(mark);
        }
        tau_.erase(p);
        pending_.insert(p);
        return false;
    }
};

}  // namespace

std::optional<Strategy> find_uniform_winning(const Model& m, const Arena& a, bool deterministic, Budget b) {
    return Search(m, a, deterministic, b).run();
}

std::string render_position(const Model& m, const Arena& a, int p) {
    const Position& pos = a.positions[static_cast<std::size_t>(p)];
    const Instance& inst = a.instances[static_cast<std::size_t>(pos.instance)];
    std::string s = render_path(inst.path) + " |";
    for (std::size_t i = 0; i < inst.vars.size(); ++i) s += (i ? "," : " ") + inst.vars[i] + "=" + m.label(pos.values[i]);
    return s;
}

std::vector<std::string> render_strategy(const Model& m, const Arena& a, const Strategy& tau) {
    std::vector<std::pair<Position, std::string>> lines;
    for (const auto& [p, succ] : tau) {
        std::string line = render_position(m, a, p) + " ->";
        for (std::size_t i = 0; i < succ.size(); ++i) line += (i ? " ; " : " ") + render_position(m, a, succ[i]);
        lines.emplace_back(a.positions[static_cast<std::size_t>(p)], line);
    }
    std::sort(lines.begin(), lines.end());
    std::vector<std::string> out;
    for (auto& l : lines) out.push_back(std::move(l.second));
    return out;
}

}  // namespace teamlogic
