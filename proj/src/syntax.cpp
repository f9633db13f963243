#include "teamlogic/syntax.hpp"

#include <cctype>
#include <sstream>

namespace teamlogic {

Terms vars(const std::vector<std::string>& names) {
    Terms out;
    for (const auto& n : names) out.push_back(Term::var(n));
    return out;
}

namespace {

std::shared_ptr<Formula> node(Kind k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
}

void require_same_width(const Terms& a, const Terms& b, const char* what) {
    if (a.size() != b.size()) throw std::invalid_argument(std::string(what) + ": tuples of different width");
    if (a.empty()) throw std::invalid_argument(std::string(what) + ": empty tuples");
}

}  // namespace

FormulaPtr eq(Term a, Term b, bool positive) {
    auto f = node(Kind::Lit);
    f->positive = positive;
    f->args = {std::move(a), std::move(b)};
    return f;
}

FormulaPtr neq(Term a, Term b) { return eq(std::move(a), std::move(b), false); }

FormulaPtr rel(std::string name, Terms args, bool positive) {
    if (name.empty()) throw std::invalid_argument("relation name is empty");
    auto f = node(Kind::Lit);
    f->positive = positive;
    f->rel = std::move(name);
    f->args = std::move(args);
    return f;
}

FormulaPtr dep(Terms ts) {
    if (ts.empty()) throw std::invalid_argument("dep: needs at least one term");
    auto f = node(Kind::Dep);
    f->t1 = std::move(ts);
    return f;
}

FormulaPtr indep(Terms a, Terms b, Terms c) {
    auto f = node(Kind::Indep);
    f->t1 = std::move(a);
    f->t2 = std::move(b);
    f->t3 = std::move(c);
    return f;
}

FormulaPtr incl(Terms a, Terms b) {
    require_same_width(a, b, "incl");
    auto f = node(Kind::Incl);
    f->t1 = std::move(a);
    f->t2 = std::move(b);
    return f;
}

FormulaPtr excl(Terms a, Terms b) {
    require_same_width(a, b, "excl");
    auto f = node(Kind::Excl);
    f->t1 = std::move(a);
    f->t2 = std::move(b);
    return f;
}

FormulaPtr equi(Terms a, Terms b) {
    require_same_width(a, b, "equi");
    auto f = node(Kind::Equi);
    f->t1 = std::move(a);
    f->t2 = std::move(b);
    return f;
}

FormulaPtr lor(FormulaPtr a, FormulaPtr b) {
    auto f = node(Kind::Or);
    f->left = std::move(a);
    f->right = std::move(b);
    return f;
}

FormulaPtr land(FormulaPtr a, FormulaPtr b) {
    auto f = node(Kind::And);
    f->left = std::move(a);
    f->right = std::move(b);
    return f;
}

FormulaPtr exists(std::string v, FormulaPtr body) {
    auto f = node(Kind::Exists);
    f->var = std::move(v);
    f->left = std::move(body);
    return f;
}

FormulaPtr forall(std::string v, FormulaPtr body) {
    auto f = node(Kind::Forall);
    f->var = std::move(v);
    f->left = std::move(body);
    return f;
}

FormulaPtr exists(const std::vector<std::string>& vs, FormulaPtr body) {
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = exists(*it, body);
    return body;
}

FormulaPtr forall(const std::vector<std::string>& vs, FormulaPtr body) {
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = forall(*it, body);
    return body;
}

FormulaPtr land_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) throw std::invalid_argument("empty conjunction");
    FormulaPtr acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = land(acc, fs[i]);
    return acc;
}

FormulaPtr lor_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) throw std::invalid_argument("empty disjunction");
    FormulaPtr acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = lor(acc, fs[i]);
    return acc;
}

FormulaPtr tuple_eq(const Terms& a, const Terms& b) {
    require_same_width(a, b, "tuple equality");
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < a.size(); ++i) parts.push_back(eq(a[i], b[i]));
    return land_all(parts);
}

FormulaPtr tuple_neq(const Terms& a, const Terms& b) {
    require_same_width(a, b, "tuple disequality");
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < a.size(); ++i) parts.push_back(neq(a[i], b[i]));
    return lor_all(parts);
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::Lit:
            return a->positive == b->positive && a->rel == b->rel && a->args == b->args;
        case Kind::Dep:
        case Kind::Indep:
        case Kind::Incl:
        case Kind::Excl:
        case Kind::Equi:
            return a->t1 == b->t1 && a->t2 == b->t2 && a->t3 == b->t3;
        case Kind::Or:
        case Kind::And:
            return equal(a->left, b->left) && equal(a->right, b->right);
        case Kind::Exists:
        case Kind::Forall:
            return a->var == b->var && equal(a->left, b->left);
    }
    return false;
}

void Signature::check_unique() const {
    std::set<std::string> seen;
    auto add = [&](const std::string& n) {
        if (!seen.insert(n).second) throw std::invalid_argument("symbol declared twice: " + n);
    };
    for (const auto& [n, a] : relations) add(n);
    for (const auto& [n, a] : functions) add(n);
    for (const auto& n : constants) add(n);
}

// ---------------------------------------------------------------- parser

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Semi, Dot, Eq, Neq, Tilde, Or, And, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (ident_char(c)) {
            while (i < s.size() && ident_char(s[i])) ++i;
            out.push_back({Tok::Ident, s.substr(start, i - start), start});
            continue;
        }
        auto two = s.substr(i, 2);
        if (two == "\\/") {
            out.push_back({Tok::Or, two, start});
            i += 2;
        } else if (two == "/\\") {
            out.push_back({Tok::And, two, start});
            i += 2;
        } else if (two == "!=") {
            out.push_back({Tok::Neq, two, start});
            i += 2;
        } else {
            Tok k;
            switch (c) {
                case '(': k = Tok::LParen; break;
                case ')': k = Tok::RParen; break;
                case ',': k = Tok::Comma; break;
                case ';': k = Tok::Semi; break;
                case '.': k = Tok::Dot; break;
                case '=': k = Tok::Eq; break;
                case '~': k = Tok::Tilde; break;
                default: throw ParseError(std::string("unexpected character '") + c + "'", i);
            }
            out.push_back({k, std::string(1, c), start});
            ++i;
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

const std::set<std::string> kKeywords = {"exists", "forall", "dep", "indep", "incl", "excl", "equi"};

class Parser {
public:
    Parser(const std::string& text, Signature& sig, bool infer) : toks_(lex(text)), sig_(sig), infer_(infer) {}

    FormulaPtr formula_all() {
        auto f = disj();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

    Term term_all() {
        auto t = term();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return t;
    }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;
    Signature& sig_;
    bool infer_;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
    Token next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }
    bool accept(Tok k) {
        if (peek().kind == k) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(Tok k, const char* what) {
        if (!accept(k)) fail(std::string("expected ") + what);
    }

    FormulaPtr disj() {
        auto f = conj();
        while (accept(Tok::Or)) f = lor(f, conj());
        return f;
    }

    FormulaPtr conj() {
        auto f = unit();
        while (accept(Tok::And)) f = land(f, unit());
        return f;
    }

    FormulaPtr unit() {
        const Token& t = peek();
        if (t.kind == Tok::Ident && (t.text == "exists" || t.text == "forall")) {
            bool ex = t.text == "exists";
            next();
            std::vector<std::string> vs;
            while (peek().kind == Tok::Ident) {
                const auto& v = peek().text;
                if (kKeywords.count(v)) fail("keyword used as variable");
                if (sig_.declares(v)) fail("symbol '" + v + "' used as a bound variable");
                vs.push_back(v);
                next();
            }
            if (vs.empty()) fail("expected variable after quantifier");
            expect(Tok::Dot, "'.'");
            auto body = unit();
            return ex ? exists(vs, body) : forall(vs, body);
        }
        if (accept(Tok::LParen)) {
            auto f = disj();
            expect(Tok::RParen, "')'");
            return f;
        }
        return atom();
    }

    Terms termlist(bool allow_empty) {
        Terms ts;
        auto k = peek().kind;
        if (k == Tok::RParen || k == Tok::Semi) {
            if (!allow_empty) fail("expected term");
            return ts;
        }
        ts.push_back(term());
        while (accept(Tok::Comma)) ts.push_back(term());
        return ts;
    }

    FormulaPtr dependency_atom(const std::string& kw, std::size_t pos) {
        expect(Tok::LParen, "'('");
        FormulaPtr f;
        try {
            if (kw == "dep") {
                f = dep(termlist(false));
            } else if (kw == "indep") {
                auto a = termlist(true);
                expect(Tok::Semi, "';'");
                auto b = termlist(true);
                expect(Tok::Semi, "';'");
                auto c = termlist(true);
                f = indep(a, b, c);
            } else {
                auto a = termlist(false);
                expect(Tok::Semi, "';'");
                auto b = termlist(false);
                if (a.size() != b.size()) throw ParseError(kw + ": tuples of different width", pos);
                f = kw == "incl" ? incl(a, b) : kw == "excl" ? excl(a, b) : equi(a, b);
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), pos);
        }
        expect(Tok::RParen, "')'");
        return f;
    }

    FormulaPtr atom() {
        const Token start = peek();
        if (accept(Tok::Tilde)) {
            if (peek().kind == Tok::Ident && kKeywords.count(peek().text) && peek().text != "exists" &&
                peek().text != "forall")
                throw ParseError("negated dependency atom", start.pos);
            auto f = atom();
            if (f->kind != Kind::Lit) throw ParseError("negated dependency atom", start.pos);
            auto g = std::make_shared<Formula>(*f);
            g->positive = !g->positive;
            return g;
        }
        if (start.kind == Tok::Ident && kKeywords.count(start.text) && peek(1).kind == Tok::LParen) {
            next();
            return dependency_atom(start.text, start.pos);
        }
        if (start.kind == Tok::Ident && peek(1).kind == Tok::LParen) {
            auto rit = sig_.relations.find(start.text);
            bool is_rel = rit != sig_.relations.end();
            if (!is_rel && !sig_.functions.count(start.text) && !infer_)
                throw ParseError("undeclared symbol '" + start.text + "'", start.pos);
            if (is_rel || infer_) {
                std::size_t save = i_;
                next();
                next();
                Terms args = termlist(false);
                expect(Tok::RParen, "')'");
                auto k = peek().kind;
                bool looks_term = k == Tok::Eq || k == Tok::Neq;
                if (is_rel || (!looks_term && !sig_.functions.count(start.text))) {
                    if (is_rel) {
                        if (rit->second != static_cast<int>(args.size()))
                            throw ParseError("arity mismatch for relation '" + start.text + "'", start.pos);
                    } else {
                        if (sig_.constants.count(start.text))
                            throw ParseError("constant used as relation", start.pos);
                        sig_.relations[start.text] = static_cast<int>(args.size());
                    }
                    return rel(start.text, args);
                }
                i_ = save;
            }
        }
        Term a = term();
        if (accept(Tok::Eq)) return eq(a, term());
        if (accept(Tok::Neq)) return neq(a, term());
        fail("expected '=' or '!='");
    }

    Term term() {
        const Token t = peek();
        if (t.kind != Tok::Ident) fail("expected term");
        if (kKeywords.count(t.text)) fail("keyword '" + t.text + "' used as term");
        next();
        if (accept(Tok::LParen)) {
            Terms args = termlist(false);
            expect(Tok::RParen, "')'");
            auto fit = sig_.functions.find(t.text);
            if (fit == sig_.functions.end()) {
                if (!infer_ || sig_.relations.count(t.text) || sig_.constants.count(t.text))
                    throw ParseError("undeclared function '" + t.text + "'", t.pos);
                sig_.functions[t.text] = static_cast<int>(args.size());
            } else if (fit->second != static_cast<int>(args.size())) {
                throw ParseError("arity mismatch for function '" + t.text + "'", t.pos);
            }
            return Term::app(t.text, args);
        }
        if (sig_.constants.count(t.text)) return Term::constant(t.text);
        if (sig_.functions.count(t.text) || sig_.relations.count(t.text))
            throw ParseError("symbol '" + t.text + "' used as a variable", t.pos);
        return Term::var(t.text);
    }
};

}  // namespace

FormulaPtr parse(const std::string& text, const Signature& sig) {
    Signature copy = sig;
    return Parser(text, copy, false).formula_all();
}

FormulaPtr parse_infer(const std::string& text, Signature& sig) { return Parser(text, sig, true).formula_all(); }

Term parse_term(const std::string& text, const Signature& sig) {
    Signature copy = sig;
    return Parser(text, copy, false).term_all();
}

// ---------------------------------------------------------------- render

std::string render(const Term& t) {
    if (t.kind != Term::Kind::App) return t.name;
    return t.name + "(" + render(t.args, ",") + ")";
}

std::string render(const Terms& ts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out += sep;
        out += render(ts[i]);
    }
    return out;
}

namespace {

void render_into(const FormulaPtr& f, std::string& out);

void render_child(const FormulaPtr& c, bool paren, std::string& out) {
    if (paren) out += "(";
    render_into(c, out);
    if (paren) out += ")";
}

void render_into(const FormulaPtr& f, std::string& out) {
    switch (f->kind) {
        case Kind::Lit:
            if (f->is_eq()) {
                out += render(f->args[0]) + (f->positive ? " = " : " != ") + render(f->args[1]);
            } else {
                if (!f->positive) out += "~";
                out += f->rel + "(" + render(f->args, ",") + ")";
            }
            return;
        case Kind::Dep:
            out += "dep(" + render(f->t1, ",") + ")";
            return;
        case Kind::Indep:
            out += "indep(" + render(f->t1) + " ; " + render(f->t2) + " ; " + render(f->t3) + ")";
            return;
        case Kind::Incl:
        case Kind::Excl:
        case Kind::Equi: {
            const char* kw = f->kind == Kind::Incl ? "incl(" : f->kind == Kind::Excl ? "excl(" : "equi(";
            out += kw + render(f->t1) + " ; " + render(f->t2) + ")";
            return;
        }
        case Kind::Or:
        case Kind::And:
            render_child(f->left, f->left->is_binary() && f->left->kind != f->kind, out);
            out += f->kind == Kind::Or ? " \\/ " : " /\\ ";
            render_child(f->right, f->right->is_binary(), out);
            return;
        case Kind::Exists:
        case Kind::Forall: {
            out += f->kind == Kind::Exists ? "exists" : "forall";
            const Formula* cur = f.get();
            FormulaPtr body = f->left;
            out += " " + cur->var;
            while (body->kind == f->kind) {
                out += " " + body->var;
                body = body->left;
            }
            out += " . ";
            render_child(body, body->is_binary(), out);
            return;
        }
    }
}

}  // namespace

std::string render(const FormulaPtr& f) {
    std::string out;
    render_into(f, out);
    return out;
}

// ---------------------------------------------------------------- variables

void term_variables(const Term& t, std::set<std::string>& out) {
    if (t.kind == Term::Kind::Var) out.insert(t.name);
    for (const auto& a : t.args) term_variables(a, out);
}

std::set<std::string> term_variables(const Terms& ts) {
    std::set<std::string> out;
    for (const auto& t : ts) term_variables(t, out);
    return out;
}

namespace {

void free_into(const FormulaPtr& f, std::set<std::string>& out) {
    switch (f->kind) {
        case Kind::Lit:
            for (const auto& t : f->args) term_variables(t, out);
            return;
        case Kind::Dep:
        case Kind::Indep:
        case Kind::Incl:
        case Kind::Excl:
        case Kind::Equi:
            for (const auto* ts : {&f->t1, &f->t2, &f->t3})
                for (const auto& t : *ts) term_variables(t, out);
            return;
        case Kind::Or:
        case Kind::And:
            free_into(f->left, out);
            free_into(f->right, out);
            return;
        case Kind::Exists:
        case Kind::Forall: {
            std::set<std::string> inner;
            free_into(f->left, inner);
            inner.erase(f->var);
            out.insert(inner.begin(), inner.end());
            return;
        }
    }
}

void term_names(const Term& t, std::set<std::string>& out) {
    out.insert(t.name);
    for (const auto& a : t.args) term_names(a, out);
}

void names_into(const FormulaPtr& f, std::set<std::string>& out) {
    if (!f->rel.empty()) out.insert(f->rel);
    if (!f->var.empty()) out.insert(f->var);
    for (const auto* ts : {&f->args, &f->t1, &f->t2, &f->t3})
        for (const auto& t : *ts) term_names(t, out);
    if (f->left) names_into(f->left, out);
    if (f->right) names_into(f->right, out);
}

}  // namespace

std::set<std::string> free_variables(const FormulaPtr& f) {
    std::set<std::string> out;
    free_into(f, out);
    return out;
}

std::set<std::string> all_names(const FormulaPtr& f) {
    std::set<std::string> out;
    names_into(f, out);
    return out;
}

std::vector<std::string> fresh_vars(const std::set<std::string>& taken, int count) {
    std::vector<std::string> out;
    for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
        std::string v = "_v" + std::to_string(i);
        if (!taken.count(v)) out.push_back(v);
    }
    return out;
}

std::vector<std::string> fresh_vars(const FormulaPtr& f, int count) { return fresh_vars(all_names(f), count); }

// ---------------------------------------------------------------- structure

std::string render_path(const Path& p) {
    std::string out = "@";
    for (auto step : p) out += step ? ".1" : ".0";
    return out;
}

namespace {

void instances_into(const FormulaPtr& f, Path& path, std::vector<std::pair<Path, FormulaPtr>>& out) {
    out.emplace_back(path, f);
    if (f->left) {
        path.push_back(0);
        instances_into(f->left, path, out);
        path.pop_back();
    }
    if (f->right) {
        path.push_back(1);
        instances_into(f->right, path, out);
        path.pop_back();
    }
}

}  // namespace

std::vector<std::pair<Path, FormulaPtr>> subformula_instances(const FormulaPtr& f) {
    std::vector<std::pair<Path, FormulaPtr>> out;
    Path p;
    instances_into(f, p, out);
    return out;
}

bool is_first_order(const FormulaPtr& f) {
    if (f->is_dependency_atom()) return false;
    if (f->left && !is_first_order(f->left)) return false;
    if (f->right && !is_first_order(f->right)) return false;
    return true;
}

FormulaPtr negate(const FormulaPtr& f) {
    switch (f->kind) {
        case Kind::Lit: {
            auto g = std::make_shared<Formula>(*f);
            g->positive = !f->positive;
            return g;
        }
        case Kind::Or: return land(negate(f->left), negate(f->right));
        case Kind::And: return lor(negate(f->left), negate(f->right));
        case Kind::Exists: return forall(f->var, negate(f->left));
        case Kind::Forall: return exists(f->var, negate(f->left));
        default: throw std::invalid_argument("cannot negate a dependency atom");
    }
}

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
    if (t.kind == Term::Kind::Var) {
        auto it = sub.find(t.name);
        return it == sub.end() ? t : it->second;
    }
    if (t.kind == Term::Kind::Const) return t;
    Terms args;
    for (const auto& a : t.args) args.push_back(substitute(a, sub));
    return Term::app(t.name, args);
}

namespace {

Terms subst_all(const Terms& ts, const std::map<std::string, Term>& sub) {
    Terms out;
    for (const auto& t : ts) out.push_back(substitute(t, sub));
    return out;
}

}  // namespace

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, Term>& sub) {
    if (sub.empty()) return f;
    switch (f->kind) {
        case Kind::Lit:
        case Kind::Dep:
        case Kind::Indep:
        case Kind::Incl:
        case Kind::Excl:
        case Kind::Equi: {
            auto g = std::make_shared<Formula>(*f);
            g->args = subst_all(f->args, sub);
            g->t1 = subst_all(f->t1, sub);
            g->t2 = subst_all(f->t2, sub);
            g->t3 = subst_all(f->t3, sub);
            return g;
        }
        case Kind::Or: return lor(substitute(f->left, sub), substitute(f->right, sub));
        case Kind::And: return land(substitute(f->left, sub), substitute(f->right, sub));
        case Kind::Exists:
        case Kind::Forall: {
            auto inner = sub;
            inner.erase(f->var);
            std::set<std::string> incoming;
            auto fv = free_variables(f->left);
            for (const auto& [v, t] : inner)
                if (fv.count(v)) term_variables(t, incoming);
            std::string bound = f->var;
            if (incoming.count(bound)) {
                std::set<std::string> taken = all_names(f);
                taken.insert(incoming.begin(), incoming.end());
                for (const auto& [v, t] : inner) taken.insert(v);
                bound = fresh_vars(taken, 1)[0];
                inner[f->var] = Term::var(bound);
            }
            auto body = substitute(f->left, inner);
            return f->kind == Kind::Exists ? exists(bound, body) : forall(bound, body);
        }
    }
    return f;
}

void flatten(const FormulaPtr& f, Kind k, std::vector<FormulaPtr>& out) {
    if (f->kind == k) {
        flatten(f->left, k, out);
        flatten(f->right, k, out);
    } else {
        out.push_back(f);
    }
}

}  // namespace teamlogic
