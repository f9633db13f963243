#include "teamlogic/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace teamlogic {

Model::Model(std::vector<std::string> domain, bool allow_unit) : domain_(std::move(domain)) {
    if (domain_.empty()) throw std::invalid_argument("model domain is empty");
    if (domain_.size() < 2 && !allow_unit)
        throw std::invalid_argument("model domain needs at least two elements");
    for (std::size_t i = 0; i < domain_.size(); ++i)
        if (!index_.emplace(domain_[i], static_cast<Elem>(i)).second)
            throw std::invalid_argument("duplicate domain element " + domain_[i]);
}

Elem Model::element(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw std::invalid_argument("unknown domain element " + label);
    return it->second;
}

void Model::check_fresh(const std::string& name) const {
    if (constants_.count(name) || relations_.count(name) || functions_.count(name))
        throw std::invalid_argument("symbol declared twice: " + name);
}

void Model::set_constant(const std::string& name, Elem e) {
    check_fresh(name);
    if (e < 0 || e >= size()) throw std::invalid_argument("constant outside domain: " + name);
    constants_[name] = e;
}

void Model::set_relation(const std::string& name, int arity, TupleSet tuples) {
    check_fresh(name);
    for (const auto& t : tuples) {
        if (static_cast<int>(t.size()) != arity) throw std::invalid_argument("relation tuple of wrong arity: " + name);
        for (auto e : t)
            if (e < 0 || e >= size()) throw std::invalid_argument("relation tuple outside domain: " + name);
    }
    relations_[name] = {arity, std::move(tuples)};
}

void Model::set_function(const std::string& name, int arity, std::vector<Elem> table) {
    check_fresh(name);
    std::size_t expected = 1;
    for (int i = 0; i < arity; ++i) expected *= static_cast<std::size_t>(size());
    if (table.size() != expected) throw std::invalid_argument("function is not total: " + name);
    for (auto e : table)
        if (e < 0 || e >= size()) throw std::invalid_argument("function value outside domain: " + name);
    functions_[name] = {arity, std::move(table)};
}

void Model::set_function(const std::string& name, const std::map<Tuple, Elem>& graph, int arity) {
    std::size_t n = 1;
    for (int i = 0; i < arity; ++i) n *= static_cast<std::size_t>(size());
    std::vector<Elem> table(n, -1);
    for (const auto& [args, v] : graph) {
        if (static_cast<int>(args.size()) != arity) throw std::invalid_argument("function entry of wrong arity: " + name);
        table[code(args)] = v;
    }
    if (std::find(table.begin(), table.end(), -1) != table.end())
        throw std::invalid_argument("function is not total: " + name);
    set_function(name, arity, std::move(table));
}

Elem Model::constant(const std::string& name) const {
    auto it = constants_.find(name);
    if (it == constants_.end()) throw std::invalid_argument("unknown constant " + name);
    return it->second;
}

bool Model::holds(const std::string& rel, const Tuple& args) const {
    auto it = relations_.find(rel);
    if (it == relations_.end()) throw std::invalid_argument("unknown relation " + rel);
    if (static_cast<int>(args.size()) != it->second.first) throw std::invalid_argument("arity mismatch for " + rel);
    return it->second.second.count(args) > 0;
}

std::size_t Model::code(const Tuple& args) const {
    std::size_t c = 0;
    for (auto e : args) {
        if (e < 0 || e >= size()) throw std::invalid_argument("argument outside domain");
        c = c * static_cast<std::size_t>(size()) + static_cast<std::size_t>(e);
    }
    return c;
}

Elem Model::apply(const std::string& fn, const Tuple& args) const {
    auto it = functions_.find(fn);
    if (it == functions_.end()) throw std::invalid_argument("unknown function " + fn);
    if (static_cast<int>(args.size()) != it->second.arity) throw std::invalid_argument("arity mismatch for " + fn);
    return it->second.table[code(args)];
}

Signature Model::signature() const {
    Signature sig;
    for (const auto& [n, r] : relations_) sig.relations[n] = r.first;
    for (const auto& [n, f] : functions_) sig.functions[n] = f.arity;
    for (const auto& [n, c] : constants_) sig.constants.insert(n);
    return sig;
}

Team::Team(std::vector<std::string> v, std::vector<Tuple> r) : vars(std::move(v)), rows(std::move(r)) {
    std::set<std::string> seen(vars.begin(), vars.end());
    if (seen.size() != vars.size()) throw std::invalid_argument("team has repeated variables");
    for (const auto& row : rows)
        if (row.size() != vars.size()) throw std::invalid_argument("team row of wrong width");
    normalize();
}

int Team::column(const std::string& v) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == v) return static_cast<int>(i);
    return -1;
}

Assignment Team::assignment(std::size_t i) const {
    Assignment s;
    for (std::size_t c = 0; c < vars.size(); ++c) s[vars[c]] = rows[i][c];
    return s;
}

void Team::normalize() {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

Team empty_assignment_team() { return Team({}, {Tuple{}}); }

Elem eval_term(const Model& m, const Assignment& s, const Term& t) {
    switch (t.kind) {
        case Term::Kind::Var: {
            auto it = s.find(t.name);
            if (it == s.end()) throw std::invalid_argument("unbound variable " + t.name);
            return it->second;
        }
        case Term::Kind::Const: return m.constant(t.name);
        case Term::Kind::App: {
            Tuple args;
            for (const auto& a : t.args) args.push_back(eval_term(m, s, a));
            return m.apply(t.name, args);
        }
    }
    return -1;
}

Team restrict(const Team& x, const std::set<std::string>& v) {
    std::vector<int> cols;
    std::vector<std::string> vs;
    for (const auto& name : v)
        if (x.column(name) < 0) throw std::invalid_argument("restriction variable not in team: " + name);
    for (std::size_t c = 0; c < x.vars.size(); ++c)
        if (v.count(x.vars[c])) {
            cols.push_back(static_cast<int>(c));
            vs.push_back(x.vars[c]);
        }
    std::vector<Tuple> rows;
    for (const auto& r : x.rows) {
        Tuple t;
        for (int c : cols) t.push_back(r[c]);
        rows.push_back(std::move(t));
    }
    return Team(vs, rows);
}

namespace {

// Column for var after extension, appending it when new.
std::pair<std::vector<std::string>, int> extended_vars(const Team& x, const std::string& var) {
    auto vs = x.vars;
    int col = x.column(var);
    if (col < 0) {
        vs.push_back(var);
        col = static_cast<int>(vs.size()) - 1;
    }
    return {vs, col};
}

Tuple with(const Tuple& r, int col, Elem e) {
    Tuple t = r;
    if (col == static_cast<int>(t.size())) t.push_back(e);
    else t[col] = e;
    return t;
}

}  // namespace

Team extend_universal(const Team& x, const std::string& var, const Model& m) {
    auto [vs, col] = extended_vars(x, var);
    std::vector<Tuple> rows;
    for (const auto& r : x.rows)
        for (Elem e = 0; e < m.size(); ++e) rows.push_back(with(r, col, e));
    return Team(vs, rows);
}

Team extend_function(const Team& x, const std::string& var, const std::vector<Elem>& choice) {
    if (choice.size() != x.rows.size()) throw std::invalid_argument("witness function undefined on some row");
    auto [vs, col] = extended_vars(x, var);
    std::vector<Tuple> rows;
    for (std::size_t i = 0; i < x.rows.size(); ++i) rows.push_back(with(x.rows[i], col, choice[i]));
    return Team(vs, rows);
}

Team extend_function(const Team& x, const std::string& var, const std::function<Elem(const Assignment&)>& f) {
    std::vector<Elem> choice;
    for (std::size_t i = 0; i < x.rows.size(); ++i) choice.push_back(f(x.assignment(i)));
    return extend_function(x, var, choice);
}

Team extend_multifunction(const Team& x, const std::string& var, const std::vector<std::vector<Elem>>& choice) {
    if (choice.size() != x.rows.size()) throw std::invalid_argument("witness function undefined on some row");
    auto [vs, col] = extended_vars(x, var);
    std::vector<Tuple> rows;
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        if (choice[i].empty()) throw std::invalid_argument("empty witness set");
        for (Elem e : choice[i]) rows.push_back(with(x.rows[i], col, e));
    }
    return Team(vs, rows);
}

TupleSet team_relation(const Model& m, const Team& x, const Terms& ts) {
    TupleSet out;
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        auto s = x.assignment(i);
        Tuple t;
        for (const auto& term : ts) t.push_back(eval_term(m, s, term));
        out.insert(std::move(t));
    }
    return out;
}

void for_each_team(const Model& m, const std::vector<std::string>& vars, int max_rows,
                   const std::function<void(const Team&)>& fn) {
    std::vector<Tuple> all;
    Tuple cur(vars.size(), 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) total *= static_cast<std::size_t>(m.size());
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t c = k;
        for (std::size_t i = vars.size(); i-- > 0;) {
            cur[i] = static_cast<Elem>(c % static_cast<std::size_t>(m.size()));
            c /= static_cast<std::size_t>(m.size());
        }
        all.push_back(cur);
    }
    int limit = std::min<int>(max_rows, static_cast<int>(all.size()));
    for (int k = 0; k <= limit; ++k) {
        std::vector<std::size_t> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
        while (true) {
            std::vector<Tuple> rows;
            for (auto i : idx) rows.push_back(all[i]);
            fn(Team(vars, rows));
            int i = k - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == all.size() - static_cast<std::size_t>(k - i)) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

std::vector<Team> enumerate_teams(const Model& m, const std::vector<std::string>& vars, int max_rows) {
    std::vector<Team> out;
    for_each_team(m, vars, max_rows, [&](const Team& t) { out.push_back(t); });
    return out;
}

bool tarski(const Model& m, const Assignment& s, const FormulaPtr& f) {
    switch (f->kind) {
        case Kind::Lit: {
            bool v;
            if (f->is_eq()) {
                v = eval_term(m, s, f->args[0]) == eval_term(m, s, f->args[1]);
            } else {
                Tuple args;
                for (const auto& a : f->args) args.push_back(eval_term(m, s, a));
                v = m.holds(f->rel, args);
            }
            return v == f->positive;
        }
        case Kind::Or: return tarski(m, s, f->left) || tarski(m, s, f->right);
        case Kind::And: return tarski(m, s, f->left) && tarski(m, s, f->right);
        case Kind::Exists:
        case Kind::Forall: {
            Assignment t = s;
            for (Elem e = 0; e < m.size(); ++e) {
                t[f->var] = e;
                bool v = tarski(m, t, f->left);
                if (f->kind == Kind::Exists && v) return true;
                if (f->kind == Kind::Forall && !v) return false;
            }
            return f->kind == Kind::Forall;
        }
        default: throw std::invalid_argument("tarski: dependency atoms have no single-assignment semantics");
    }
}

std::string render_assignment(const Model& m, const Team& x, std::size_t row) {
    std::string out;
    for (std::size_t c = 0; c < x.vars.size(); ++c) {
        if (c) out += ",";
        out += x.vars[c] + "=" + m.label(x.rows[row][c]);
    }
    return out;
}

std::string render_team(const Model& m, const Team& x) {
    std::string out = "{";
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        if (i) out += " ; ";
        out += "(" + render_assignment(m, x, i) + ")";
    }
    return out + "}";
}

}  // namespace teamlogic
