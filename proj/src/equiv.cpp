#include "teamlogic/equiv.hpp"

#include <sstream>

namespace teamlogic {

namespace {

void collect(const Term& t, Signature& sig) {
    if (t.kind == Term::Kind::Const) sig.constants.insert(t.name);
    if (t.kind == Term::Kind::App) sig.functions[t.name] = static_cast<int>(t.args.size());
    for (const auto& a : t.args) collect(a, sig);
}

void collect(const FormulaPtr& f, Signature& sig) {
    if (f->kind == Kind::Lit && !f->is_eq()) sig.relations[f->rel] = static_cast<int>(f->args.size());
    for (const auto* ts : {&f->args, &f->t1, &f->t2, &f->t3})
        for (const auto& t : *ts) collect(t, sig);
    if (f->left) collect(f->left, sig);
    if (f->right) collect(f->right, sig);
}

std::uint64_t power(std::uint64_t b, std::uint64_t e, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) {
        if (r > cap / std::max<std::uint64_t>(b, 1)) return cap + 1;
        r *= b;
    }
    return r;
}

}  // namespace

Signature signature_of(const FormulaPtr& f) {
    Signature sig;
    collect(f, sig);
    return sig;
}

Signature merge(const Signature& a, const Signature& b) {
    Signature out = a;
    for (const auto& [k, v] : b.relations) out.relations[k] = v;
    for (const auto& [k, v] : b.functions) out.functions[k] = v;
    out.constants.insert(b.constants.begin(), b.constants.end());
    return out;
}

std::uint64_t count_models(const Signature& sig, int size) {
    const std::uint64_t cap = std::uint64_t(1) << 62;
    std::uint64_t n = static_cast<std::uint64_t>(size);
    std::uint64_t total = power(n, sig.constants.size(), cap);
    auto mul = [&](std::uint64_t f) { total = (total > cap / std::max<std::uint64_t>(f, 1)) ? cap + 1 : total * f; };
    for (const auto& [_, k] : sig.relations) mul(power(2, power(n, static_cast<std::uint64_t>(k), 62), cap));
    for (const auto& [_, k] : sig.functions) mul(power(n, power(n, static_cast<std::uint64_t>(k), 62), cap));
    return total;
}

void for_each_model(const Signature& sig, int size, const std::function<void(const Model&)>& fn,
                    std::uint64_t max_models) {
    std::uint64_t total = count_models(sig, size);
    if (total > max_models) throw BudgetExceeded(total);
    std::vector<std::string> labels;
    for (int i = 0; i < size; ++i) labels.push_back(std::to_string(i));

    // One digit per constant, per relation tuple, per function argument code.
    struct Slot {
        int kind;
        std::string name;
        int arity;
        std::size_t cells;
    };
    std::vector<Slot> slots;
    for (const auto& c : sig.constants) slots.push_back({0, c, 0, 1});
    for (const auto& [r, k] : sig.relations)
        slots.push_back({1, r, k, static_cast<std::size_t>(power(static_cast<std::uint64_t>(size), k, 1u << 20))});
    for (const auto& [f, k] : sig.functions)
        slots.push_back({2, f, k, static_cast<std::size_t>(power(static_cast<std::uint64_t>(size), k, 1u << 20))});
    std::vector<int> radix;
    for (const auto& s : slots)
        for (std::size_t i = 0; i < s.cells; ++i) radix.push_back(s.kind == 1 ? 2 : size);
    std::vector<int> digit(radix.size(), 0);

    auto decode = [&](std::size_t code, int arity) {
        Tuple t(static_cast<std::size_t>(arity));
        for (int i = arity; i-- > 0;) {
            t[static_cast<std::size_t>(i)] = static_cast<Elem>(code % static_cast<std::size_t>(size));
            code /= static_cast<std::size_t>(size);
        }
        return t;
    };

    while (true) {
        Model m(labels, true);
        std::size_t pos = 0;
        for (const auto& s : slots) {
            if (s.kind == 0) {
                m.set_constant(s.name, digit[pos]);
            } else if (s.kind == 1) {
                TupleSet ts;
                for (std::size_t i = 0; i < s.cells; ++i)
                    if (digit[pos + i]) ts.insert(decode(i, s.arity));
                m.set_relation(s.name, s.arity, ts);
            } else {
                std::vector<Elem> table(digit.begin() + static_cast<long>(pos),
                                        digit.begin() + static_cast<long>(pos + s.cells));
                m.set_function(s.name, s.arity, table);
            }
            pos += s.cells;
        }
        fn(m);
        std::size_t i = 0;
        while (i < digit.size() && ++digit[i] == radix[i]) digit[i++] = 0;
        if (i == digit.size()) break;
    }
}

EquivResult check_equivalent(const FormulaPtr& f, const FormulaPtr& g, const EquivOptions& opt) {
    EquivResult res;
    auto fv = free_variables(f);
    auto gv = free_variables(g);
    fv.insert(gv.begin(), gv.end());
    std::vector<std::string> vars(fv.begin(), fv.end());
    Signature sig = merge(signature_of(f), signature_of(g));
    try {
        for (int size = opt.min_domain; size <= opt.max_domain && !res.counterexample; ++size) {
            for_each_model(
                sig, size,
                [&](const Model& m) {
                    if (res.counterexample) return;
                    Evaluator ef(m, f, vars, opt.mode), eg(m, g, vars, opt.mode);
                    for_each_team(m, vars, opt.max_rows, [&](const Team& x) {
                        if (res.counterexample || (opt.nonempty_only && x.empty())) return;
                        ++res.instances;
                        Verdict a = ef.run(x, opt.budget), b = eg.run(x, opt.budget);
                        if (a.exceeded()) throw BudgetExceeded(a.nodes);
                        if (b.exceeded()) throw BudgetExceeded(b.nodes);
                        if (a.sat() != b.sat()) res.counterexample = Counterexample{m, x, a, b};
                    });
                },
                opt.max_models);
        }
    } catch (const BudgetExceeded&) {
        res.exceeded = true;
        return res;
    }
    res.equivalent = !res.counterexample;
    return res;
}

std::string render_counterexample(const Counterexample& c) {
    std::ostringstream out;
    out << "domain {";
    for (int i = 0; i < c.model.size(); ++i) out << (i ? "," : "") << c.model.label(i);
    out << "}";
    for (const auto& [k, v] : c.model.constants()) out << " " << k << "=" << c.model.label(v);
    for (const auto& [r, def] : c.model.relations()) {
        out << " " << r << "={";
        bool first = true;
        for (const auto& t : def.second) {
            out << (first ? "" : ",") << "(";
            for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << c.model.label(t[i]);
            out << ")";
            first = false;
        }
        out << "}";
    }
    for (const auto& [fn, def] : c.model.functions()) {
        out << " " << fn << "=[";
        for (std::size_t i = 0; i < def.table.size(); ++i) out << (i ? "," : "") << c.model.label(def.table[i]);
        out << "]";
    }
    out << " team " << render_team(c.model, c.team) << ": " << c.left.str() << " vs " << c.right.str();
    return out.str();
}

}  // namespace teamlogic
