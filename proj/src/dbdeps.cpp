#include "teamlogic/dbdeps.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace teamlogic {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, s.find_last_not_of(" \t\r\n") - a + 1);
}

std::vector<std::string> split(const std::string& s, const std::string& sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto p = s.find(sep, start);
        out.push_back(trim(s.substr(start, p == std::string::npos ? std::string::npos : p - start)));
        if (p == std::string::npos) break;
        start = p + sep.size();
    }
    return out;
}

bool is_ident(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::vector<std::string> attr_list(const std::string& s, bool allow_empty) {
    if (trim(s).empty()) {
        if (allow_empty) return {};
        throw DBError("empty attribute list");
    }
    auto out = split(s, ",");
    for (const auto& a : out)
        if (!is_ident(a)) throw DBError("bad attribute name '" + a + "'");
    return out;
}

std::string join(const std::vector<std::string>& xs, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
    return out;
}

DAtom parse_datom(const std::string& text) {
    std::string t = trim(text);
    auto eqp = t.find('=');
    if (eqp != std::string::npos) {
        DAtom a{true, "", {trim(t.substr(0, eqp)), trim(t.substr(eqp + 1))}};
        for (const auto& v : a.args)
            if (!is_ident(v)) throw DBError("dependency terms must be variables: '" + v + "'");
        return a;
    }
    auto open = t.find('(');
    if (open == std::string::npos || t.back() != ')') throw DBError("malformed atom '" + t + "'");
    DAtom a{false, trim(t.substr(0, open)), attr_list(t.substr(open + 1, t.size() - open - 2), true)};
    if (!is_ident(a.rel)) throw DBError("malformed atom '" + t + "'");
    for (const auto& v : a.args)
        if (!is_ident(v)) throw DBError("dependency terms must be variables: '" + v + "'");
    return a;
}

std::vector<DAtom> parse_conj(const std::string& text) {
    std::vector<DAtom> out;
    std::string s = text;
    for (std::size_t p; (p = s.find("/\\")) != std::string::npos;) s.replace(p, 2, "&");
    for (const auto& part : split(s, "&")) out.push_back(parse_datom(part));
    return out;
}

std::string render_atoms(const std::vector<DAtom>& as) {
    std::string out;
    for (std::size_t i = 0; i < as.size(); ++i) {
        out += i ? " & " : "";
        out += as[i].equality ? as[i].args[0] + " = " + as[i].args[1] : as[i].rel + "(" + join(as[i].args) + ")";
    }
    return out;
}

void check_widths(const Dependency& d) {
    if ((d.kind == Dependency::Kind::Ind || d.kind == Dependency::Kind::Exd) && d.xs.size() != d.ys.size())
        throw DBError("dependency tuples differ in width: " + render(d));
}

void validate_generating(const Dependency& d) {
    std::set<std::string> rels, bound, ex(d.exists.begin(), d.exists.end());
    for (const auto& a : d.body) {
        if (!a.equality) rels.insert(a.rel);
        bound.insert(a.args.begin(), a.args.end());
    }
    for (const auto& v : d.exists)
        if (bound.count(v)) throw DBError("existential variable " + v + " also occurs in the body");
    for (const auto& a : d.head) {
        if (!a.equality) rels.insert(a.rel);
        for (const auto& v : a.args)
            if (!bound.count(v) && !ex.count(v)) throw DBError("head variable " + v + " is not bound");
    }
    if (rels.size() > 1) throw DBError("dependency mentions more than one relation symbol");
    if (d.kind == Dependency::Kind::Egd && (d.head.size() != 1 || !d.head[0].equality))
        throw DBError("egd head must be one equality");
}

using Row = std::vector<std::string>;

// Valuations of variables that make every relation atom a tuple of r and every
// equality true; unconstrained variables range over dom.
bool search_valuations(const DBRelation& r, const std::vector<DAtom>& atoms, const std::vector<std::string>& free_vars,
                       const std::vector<std::string>& dom, std::map<std::string, std::string>& val,
                       std::vector<Row>& used, const std::function<bool()>& on_match) {
    std::vector<const DAtom*> rel_atoms, eqs;
    for (const auto& a : atoms) (a.equality ? eqs : rel_atoms).push_back(&a);
    std::function<bool(std::size_t)> rel_step, var_step;
    std::vector<std::string> rest;
    std::function<bool(std::size_t)> go_vars = [&](std::size_t i) -> bool {
        if (i == rest.size()) {
            for (const auto* e : eqs)
                if (val.at(e->args[0]) != val.at(e->args[1])) return false;
            return on_match();
        }
        for (const auto& v : dom) {
            val[rest[i]] = v;
            if (go_vars(i + 1)) return true;
        }
        val.erase(rest[i]);
        return false;
    };
    std::function<bool(std::size_t)> go_rel = [&](std::size_t i) -> bool {
        if (i == rel_atoms.size()) {
            rest.clear();
            for (const auto& v : free_vars)
                if (!val.count(v)) rest.push_back(v);
            return go_vars(0);
        }
        const DAtom& a = *rel_atoms[i];
        if (a.args.size() != r.attributes.size())
            throw DBError("atom " + a.rel + " has arity " + std::to_string(a.args.size()) + ", relation has " +
                          std::to_string(r.attributes.size()));
        for (const auto& t : r.tuples) {
            std::vector<std::string> newly;
            bool ok = true;
            for (std::size_t j = 0; j < t.size() && ok; ++j) {
                auto it = val.find(a.args[j]);
                if (it == val.end()) {
                    val[a.args[j]] = t[j];
                    newly.push_back(a.args[j]);
                } else if (it->second != t[j]) {
                    ok = false;
                }
            }
            if (ok) {
                used.push_back(t);
                if (go_rel(i + 1)) return true;
                used.pop_back();
            }
            for (const auto& v : newly) val.erase(v);
        }
        return false;
    };
    return go_rel(0);
}

std::optional<Violation> generating_violation(const DBRelation& r, const Dependency& d,
                                              const std::vector<std::string>& universe) {
    std::set<std::string> dom_set(universe.begin(), universe.end());
    for (const auto& t : r.tuples) dom_set.insert(t.begin(), t.end());
    std::vector<std::string> dom(dom_set.begin(), dom_set.end());
    std::vector<std::string> body_vars;
    for (const auto& a : d.body)
        for (const auto& v : a.args)
            if (std::find(body_vars.begin(), body_vars.end(), v) == body_vars.end()) body_vars.push_back(v);
    std::map<std::string, std::string> val;
    std::vector<Row> used;
    std::optional<Violation> found;
    search_valuations(r, d.body, body_vars, dom, val, used, [&]() {
        if (d.kind == Dependency::Kind::Egd) {
            if (val.at(d.head[0].args[0]) == val.at(d.head[0].args[1])) return false;
        } else {
            auto inner = val;
            std::vector<Row> inner_used;
            if (search_valuations(r, d.head, d.exists, dom, inner, inner_used, [] { return true; })) return false;
        }
        found = Violation{used};
        return true;
    });
    return found;
}

}  // namespace

int DBRelation::index(const std::string& attr) const {
    auto it = std::find(attributes.begin(), attributes.end(), attr);
    if (it == attributes.end()) throw DBError("unknown attribute " + attr);
    return static_cast<int>(it - attributes.begin());
}

std::vector<std::string> DBRelation::project(const Row& row, const std::vector<std::string>& attrs) const {
    Row out;
    for (const auto& a : attrs) out.push_back(row[static_cast<std::size_t>(index(a))]);
    return out;
}

DBRelation parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    DBRelation r;
    bool header = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cells = split(line, ",");
        if (header) {
            for (const auto& c : cells)
                if (!is_ident(c)) throw DBError("bad attribute name '" + c + "' in CSV header");
            std::set<std::string> seen(cells.begin(), cells.end());
            if (seen.size() != cells.size()) throw DBError("repeated attribute in CSV header");
            r.attributes = cells;
            header = false;
            continue;
        }
        if (cells.size() != r.attributes.size()) throw DBError("CSV row has the wrong number of fields: " + line);
        r.tuples.insert(cells);
    }
    if (header) throw DBError("CSV has no header row");
    return r;
}

DBRelation load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DBError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

std::string to_csv(const DBRelation& r) {
    std::string out = join(r.attributes) + "\n";
    for (const auto& t : r.tuples) out += join(t) + "\n";
    return out;
}

DBRelation relation_of_team(const Model& m, const Team& x) {
    DBRelation r;
    r.attributes = x.vars;
    for (const auto& row : x.rows) {
        Row t;
        for (Elem e : row) t.push_back(m.label(e));
        r.tuples.insert(t);
    }
    return r;
}

Dependency Dependency::ind(std::vector<std::string> a, std::vector<std::string> b) {
    Dependency d;
    d.kind = Kind::Ind;
    d.xs = std::move(a);
    d.ys = std::move(b);
    check_widths(d);
    return d;
}

Dependency Dependency::exd(std::vector<std::string> a, std::vector<std::string> b) {
    Dependency d = ind(std::move(a), std::move(b));
    d.kind = Kind::Exd;
    return d;
}

Dependency Dependency::fd(std::vector<std::string> a, std::string b) {
    Dependency d;
    d.kind = Kind::Fd;
    d.xs = std::move(a);
    d.ys = {std::move(b)};
    return d;
}

Dependency parse_dependency(const std::string& text) {
    std::string t = trim(text);
    auto inner = [&](std::size_t skip) {
        if (t.back() != ')') throw DBError("missing ')' in " + t);
        return t.substr(skip, t.size() - skip - 1);
    };
    if (t.rfind("incl(", 0) == 0 || t.rfind("excl(", 0) == 0) {
        auto parts = split(inner(5), ";");
        if (parts.size() != 2) throw DBError("expected two tuples separated by ';' in " + t);
        auto a = attr_list(parts[0], false), b = attr_list(parts[1], false);
        return t[0] == 'i' ? Dependency::ind(a, b) : Dependency::exd(a, b);
    }
    if (t.rfind("fd(", 0) == 0) {
        auto parts = split(inner(3), "->");
        if (parts.size() != 2) throw DBError("expected '->' in " + t);
        auto b = attr_list(parts[1], false);
        if (b.size() != 1) throw DBError("fd has exactly one dependent attribute: " + t);
        return Dependency::fd(attr_list(parts[0], true), b[0]);
    }
    bool tgd = t.rfind("tgd:", 0) == 0, egd = t.rfind("egd:", 0) == 0;
    if (!tgd && !egd) throw DBError("unknown dependency '" + t + "'");
    auto parts = split(t.substr(4), "->");
    if (parts.size() != 2) throw DBError("expected '->' in " + t);
    Dependency d;
    d.kind = tgd ? Dependency::Kind::Tgd : Dependency::Kind::Egd;
    d.body = parse_conj(parts[0]);
    std::string head = parts[1];
    if (head.rfind("exists ", 0) == 0) {
        if (egd) throw DBError("egd head cannot quantify");
        auto dot = head.find('.');
        if (dot == std::string::npos) throw DBError("expected '.' after existential variables in " + t);
        std::istringstream vs(head.substr(7, dot - 7));
        for (std::string v; vs >> v;) {
            if (!is_ident(v)) throw DBError("bad variable " + v);
            d.exists.push_back(v);
        }
        head = head.substr(dot + 1);
    }
    d.head = parse_conj(head);
    validate_generating(d);
    return d;
}

std::string render(const Dependency& d) {
    switch (d.kind) {
        case Dependency::Kind::Ind: return "incl(" + join(d.xs) + " ; " + join(d.ys) + ")";
        case Dependency::Kind::Exd: return "excl(" + join(d.xs) + " ; " + join(d.ys) + ")";
        case Dependency::Kind::Fd: return "fd(" + join(d.xs) + " -> " + d.ys[0] + ")";
        case Dependency::Kind::Tgd:
            return "tgd: " + render_atoms(d.body) + " -> " +
                   (d.exists.empty() ? "" : "exists " + join(d.exists, " ") + " . ") + render_atoms(d.head);
        case Dependency::Kind::Egd: return "egd: " + render_atoms(d.body) + " -> " + render_atoms(d.head);
    }
    return "";
}

std::optional<Violation> find_violation(const DBRelation& r, const Dependency& d,
                                        const std::vector<std::string>& universe) {
    switch (d.kind) {
        case Dependency::Kind::Ind:
        case Dependency::Kind::Exd: {
            check_widths(d);
            std::map<Row, Row> ys;
            for (const auto& t : r.tuples) ys.emplace(r.project(t, d.ys), t);
            for (const auto& t : r.tuples) {
                auto it = ys.find(r.project(t, d.xs));
                if (d.kind == Dependency::Kind::Ind && it == ys.end()) return Violation{{t}};
                if (d.kind == Dependency::Kind::Exd && it != ys.end()) return Violation{{t, it->second}};
            }
            return std::nullopt;
        }
        case Dependency::Kind::Fd: {
            std::map<Row, Row> seen;
            int y = r.index(d.ys[0]);
            for (const auto& t : r.tuples) {
                auto [it, fresh] = seen.emplace(r.project(t, d.xs), t);
                if (!fresh && it->second[static_cast<std::size_t>(y)] != t[static_cast<std::size_t>(y)])
                    return Violation{{it->second, t}};
            }
            return std::nullopt;
        }
        default: return generating_violation(r, d, universe);
    }
}

bool check_dependency(const DBRelation& r, const Dependency& d, const std::vector<std::string>& universe) {
    return !find_violation(r, d, universe);
}

AxiomSystem parse_system(const std::string& s) {
    if (s == "inc-only") return AxiomSystem::IncOnly;
    if (s == "inc-exc") return AxiomSystem::IncExc;
    throw DBError("unknown axiom system '" + s + "' (expected inc-only or inc-exc)");
}

int Derivation::height() const {
    int h = 0;
    for (const auto& c : children) h = std::max(h, c.height());
    return h + 1;
}

int Derivation::size() const {
    int n = 1;
    for (const auto& c : children) n += c.size();
    return n;
}

std::string render(const Derivation& d) {
    std::ostringstream out;
    std::function<void(const Derivation&, int)> go = [&](const Derivation& n, int indent) {
        out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << render(n.conclusion) << "  [" << n.rule;
        if (!n.pi.empty()) {
            out << " pi=(";
            for (std::size_t i = 0; i < n.pi.size(); ++i) out << (i ? "," : "") << n.pi[i];
            out << ")";
        }
        out << "]\n";
        for (const auto& c : n.children) go(c, indent + 1);
    };
    go(d, 0);
    return out.str();
}

namespace {

using Tup = std::vector<std::string>;

void all_tuples(const std::vector<std::string>& attrs, std::size_t width, std::vector<Tup>& out) {
    Tup t(width);
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == width) {
            out.push_back(t);
            return;
        }
        for (const auto& a : attrs) {
            t[i] = a;
            go(i + 1);
        }
    };
    go(0);
}

std::vector<std::vector<int>> maps(int m, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> p(static_cast<std::size_t>(m), 1);
    while (true) {
        out.push_back(p);
        int i = m - 1;
        while (i >= 0 && ++p[static_cast<std::size_t>(i)] > n) p[static_cast<std::size_t>(i--)] = 1;
        if (i < 0) break;
    }
    return out;
}

Tup apply_pi(const Tup& x, const std::vector<int>& pi) {
    Tup out;
    for (int i : pi) out.push_back(x[static_cast<std::size_t>(i - 1)]);
    return out;
}

void check_derivable(const Dependency& d, AxiomSystem system) {
    if (d.kind == Dependency::Kind::Fd || d.kind == Dependency::Kind::Tgd || d.kind == Dependency::Kind::Egd)
        throw DBError("derive handles inclusion and exclusion dependencies only; implication with functional "
                      "dependencies is undecidable in combination with inclusions");
    if (d.kind == Dependency::Kind::Exd && system == AxiomSystem::IncOnly)
        throw DBError("exclusion dependency " + render(d) + " needs --system inc-exc");
    check_widths(d);
}

struct Node {
    std::string rule;
    std::vector<int> pi;
    std::vector<Dependency> from;
};

}  // namespace

std::optional<Derivation> derive(const std::vector<Dependency>& premises, const Dependency& goal, AxiomSystem system,
                                 int depth) {
    if (depth <= 0) throw DBError("depth must be positive");
    check_derivable(goal, system);
    std::set<std::string> attr_set;
    std::size_t width = goal.xs.size();
    for (const auto* d : {&goal}) attr_set.insert(d->xs.begin(), d->xs.end()), attr_set.insert(d->ys.begin(), d->ys.end());
    for (const auto& p : premises) {
        check_derivable(p, system);
        attr_set.insert(p.xs.begin(), p.xs.end());
        attr_set.insert(p.ys.begin(), p.ys.end());
        width = std::max(width, p.xs.size());
    }
    std::vector<std::string> attrs(attr_set.begin(), attr_set.end());
    std::vector<std::vector<Tup>> tuples(width + 1);
    for (std::size_t w = 1; w <= width; ++w) all_tuples(attrs, w, tuples[w]);

    std::map<Dependency, Node> known;
    std::vector<Dependency> frontier;
    auto add = [&](const Dependency& d, Node n, std::vector<Dependency>& into) {
        if (known.emplace(d, std::move(n)).second) into.push_back(d);
    };
    for (const auto& p : premises) add(p, {"premise", {}, {}}, frontier);
    for (std::size_t w = 1; w <= width; ++w)
        for (const auto& x : tuples[w]) add(Dependency::ind(x, x), {"I1", {}, {}}, frontier);
    bool exc = system == AxiomSystem::IncExc;
    for (int h = 2; h <= depth && !known.count(goal); ++h) {
        std::vector<Dependency> next;
        std::vector<Dependency> facts;
        for (const auto& [d, _] : known) facts.push_back(d);
        std::map<Tup, std::vector<Dependency>> ind_by_lhs, ind_by_rhs;
        for (const auto& d : facts)
            if (d.kind == Dependency::Kind::Ind) {
                ind_by_lhs[d.xs].push_back(d);
                ind_by_rhs[d.ys].push_back(d);
            }
        for (const auto& d : facts) {
            std::size_t n = d.xs.size();
            if (d.kind == Dependency::Kind::Ind) {
                for (std::size_t m = 1; m <= width; ++m)
                    for (const auto& pi : maps(static_cast<int>(m), static_cast<int>(n)))
                        add(Dependency::ind(apply_pi(d.xs, pi), apply_pi(d.ys, pi)), {"I2", pi, {d}}, next);
                for (const auto& e : ind_by_lhs[d.ys]) add(Dependency::ind(d.xs, e.ys), {"I3", {}, {d, e}}, next);
                continue;
            }
            if (!exc) continue;
            add(Dependency::exd(d.ys, d.xs), {"E1", {}, {d}}, next);
            // E2: widen d = x_pi | y_pi to x | y.
            for (std::size_t w = 1; w <= width; ++w)
                for (const auto& pi : maps(static_cast<int>(n), static_cast<int>(w))) {
                    Tup x(w), y(w);
                    std::vector<char> fixed(w, 0);
                    bool ok = true;
                    for (std::size_t i = 0; i < n && ok; ++i) {
                        auto j = static_cast<std::size_t>(pi[i] - 1);
                        if (fixed[j] && (x[j] != d.xs[i] || y[j] != d.ys[i])) ok = false;
                        x[j] = d.xs[i];
                        y[j] = d.ys[i];
                        fixed[j] = 1;
                    }
                    if (!ok) continue;
                    std::vector<std::size_t> open;
                    for (std::size_t j = 0; j < w; ++j)
                        if (!fixed[j]) open.push_back(j);
                    std::function<void(std::size_t)> fill = [&](std::size_t k) {
                        if (k == open.size()) {
                            add(Dependency::exd(x, y), {"E2", pi, {d}}, next);
                            return;
                        }
                        for (const auto& a : attrs)
                            for (const auto& b : attrs) {
                                x[open[k]] = a;
                                y[open[k]] = b;
                                fill(k + 1);
                            }
                    };
                    fill(0);
                }
            if (d.xs == d.ys) {
                for (std::size_t w = 1; w <= width; ++w)
                    for (const auto& y : tuples[w])
                        for (const auto& z : tuples[w]) {
                            add(Dependency::exd(y, z), {"E3", {}, {d}}, next);
                            add(Dependency::ind(y, z), {"IE1", {}, {d}}, next);
                        }
            }
            // IE2: x | y, z ⊆ x, w ⊆ y  =>  z | w
            for (const auto& zx : ind_by_rhs[d.xs])
                for (const auto& wy : ind_by_rhs[d.ys]) add(Dependency::exd(zx.xs, wy.xs), {"IE2", {}, {d, zx, wy}}, next);
        }
        if (next.empty()) break;
    }
    if (!known.count(goal)) return std::nullopt;
    std::function<Derivation(const Dependency&)> build = [&](const Dependency& d) {
        const Node& n = known.at(d);
        Derivation out{n.rule, d, n.pi, {}};
        for (const auto& c : n.from) out.children.push_back(build(c));
        return out;
    };
    return build(goal);
}

std::string verify(const Derivation& d, const std::vector<Dependency>& premises, AxiomSystem system) {
    const auto& c = d.conclusion;
    auto kids = d.children.size();
    auto fail = [&](const std::string& why) { return render(c) + " [" + d.rule + "]: " + why; };
    auto is_ind = [](const Dependency& x) { return x.kind == Dependency::Kind::Ind; };
    auto is_exd = [](const Dependency& x) { return x.kind == Dependency::Kind::Exd; };
    if ((c.kind != Dependency::Kind::Ind && c.kind != Dependency::Kind::Exd) || c.xs.size() != c.ys.size() ||
        c.xs.empty())
        return fail("not an inclusion or exclusion dependency of matching widths");
    bool inc_rule = d.rule == "premise" || d.rule == "I1" || d.rule == "I2" || d.rule == "I3";
    if (!inc_rule && system == AxiomSystem::IncOnly) return fail("rule not in the inclusion-only system");
    auto pi_ok = [&](std::size_t n) {
        if (d.pi.empty()) return false;
        return std::all_of(d.pi.begin(), d.pi.end(), [&](int i) { return i >= 1 && static_cast<std::size_t>(i) <= n; });
    };
    std::string err;
    if (d.rule == "premise") {
        if (kids) return fail("premise with children");
        if (std::find(premises.begin(), premises.end(), c) == premises.end()) return fail("not among the premises");
    } else if (d.rule == "I1") {
        if (kids || !is_ind(c) || c.xs != c.ys) return fail("I1 concludes x ⊆ x from nothing");
    } else if (d.rule == "I2") {
        if (kids != 1 || !is_ind(c) || !is_ind(d.children[0].conclusion)) return fail("I2 needs one inclusion");
        const auto& p = d.children[0].conclusion;
        if (!pi_ok(p.xs.size()) || apply_pi(p.xs, d.pi) != c.xs || apply_pi(p.ys, d.pi) != c.ys)
            return fail("conclusion is not the pi-projection of the premise");
    } else if (d.rule == "I3") {
        if (kids != 2 || !is_ind(c)) return fail("I3 needs two inclusions");
        const auto &a = d.children[0].conclusion, &b = d.children[1].conclusion;
        if (!is_ind(a) || !is_ind(b) || a.ys != b.xs || a.xs != c.xs || b.ys != c.ys)
            return fail("premises do not chain to the conclusion");
    } else if (d.rule == "E1") {
        const auto& p = d.children.at(0).conclusion;
        if (kids != 1 || !is_exd(c) || !is_exd(p) || p.xs != c.ys || p.ys != c.xs) return fail("E1 swaps one exclusion");
    } else if (d.rule == "E2") {
        if (kids != 1 || !is_exd(c) || !is_exd(d.children[0].conclusion)) return fail("E2 needs one exclusion");
        const auto& p = d.children[0].conclusion;
        if (!pi_ok(c.xs.size()) || d.pi.size() != p.xs.size() || apply_pi(c.xs, d.pi) != p.xs ||
            apply_pi(c.ys, d.pi) != p.ys)
            return fail("premise is not the pi-projection of the conclusion");
    } else if (d.rule == "E3" || d.rule == "IE1") {
        if (kids != 1) return fail("needs one premise");
        const auto& p = d.children[0].conclusion;
        if (!is_exd(p) || p.xs != p.ys) return fail("premise must be x | x");
        if (d.rule == "E3" ? !is_exd(c) : !is_ind(c)) return fail("wrong conclusion kind");
    } else if (d.rule == "IE2") {
        if (kids != 3 || !is_exd(c)) return fail("IE2 needs x | y, z ⊆ x, w ⊆ y");
        const auto &xy = d.children[0].conclusion, &zx = d.children[1].conclusion, &wy = d.children[2].conclusion;
        if (!is_exd(xy) || !is_ind(zx) || !is_ind(wy) || zx.ys != xy.xs || wy.ys != xy.ys || zx.xs != c.xs ||
            wy.xs != c.ys)
            return fail("premises do not match the IE2 schema");
    } else {
        return fail("unknown rule");
    }
    for (const auto& k : d.children)
        if (auto e = verify(k, premises, system); !e.empty()) return e;
    return "";
}

ImplicationResult semantic_implies(const std::vector<Dependency>& premises, const Dependency& goal, int universe_size,
                                   int max_tuples, std::uint64_t max_relations) {
    if (universe_size <= 0 || max_tuples < 0) throw DBError("bounds must be positive");
    std::set<std::string> attr_set;
    auto collect = [&](const Dependency& d) {
        attr_set.insert(d.xs.begin(), d.xs.end());
        attr_set.insert(d.ys.begin(), d.ys.end());
        for (const auto* as : {&d.body, &d.head})
            for (const auto& a : *as)
                if (!a.equality) throw DBError("semantic_implies handles incl, excl and fd only");
    };
    for (const auto& p : premises) collect(p);
    collect(goal);
    DBRelation r;
    r.attributes.assign(attr_set.begin(), attr_set.end());
    std::vector<std::string> labels;
    for (int i = 0; i < universe_size; ++i) labels.push_back(std::to_string(i));
    std::vector<Tup> all;
    all_tuples(labels, r.attributes.size(), all);
    std::uint64_t total = 0, c = 1;
    for (int k = 0; k <= max_tuples && static_cast<std::size_t>(k) <= all.size(); ++k) {
        total += c;
        if (total > max_relations) throw DBError("semantic_implies bounds exceed the relation budget");
        c = c * (all.size() - static_cast<std::size_t>(k)) / static_cast<std::size_t>(k + 1);
    }
    ImplicationResult res;
    for (int k = 0; k <= max_tuples && static_cast<std::size_t>(k) <= all.size(); ++k) {
        std::vector<std::size_t> idx(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        while (true) {
            ++res.relations;
            r.tuples.clear();
            for (auto i : idx) r.tuples.insert(all[i]);
            bool premises_hold = std::all_of(premises.begin(), premises.end(),
                                             [&](const Dependency& p) { return check_dependency(r, p); });
            if (premises_hold && !check_dependency(r, goal)) {
                res.implied = false;
                res.counterexample = r;
                return res;
            }
            int i = k - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == all.size() - static_cast<std::size_t>(k - i)) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return res;
}

}  // namespace teamlogic
