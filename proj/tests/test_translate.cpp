#include <gtest/gtest.h>

#include "teamlogic/equiv.hpp"
#include "teamlogic/translate.hpp"

using namespace teamlogic;

namespace {

FormulaPtr p(const std::string& text) {
    Signature sig;
    return parse_infer(text, sig);
}

Terms ts(std::initializer_list<const char*> names) {
    Terms out;
    for (const char* n : names) out.push_back(Term::var(n));
    return out;
}

EquivResult equiv(const FormulaPtr& f, const FormulaPtr& g, int rows, Mode mode = Mode::Lax) {
    EquivOptions opt;
    opt.max_rows = rows;
    opt.mode = mode;
    opt.budget.max_nodes = 200'000'000;
    return check_equivalent(f, g, opt);
}

void expect_equiv(const FormulaPtr& f, const FormulaPtr& g, int rows, Mode mode = Mode::Lax) {
    auto r = equiv(f, g, rows, mode);
    EXPECT_FALSE(r.exceeded) << render(f);
    EXPECT_TRUE(r.equivalent) << render(f) << " vs " << render(g) << ": "
                              << (r.counterexample ? render_counterexample(*r.counterexample) : "");
    EXPECT_GT(r.instances, 0u);
}

bool only_reserved_fresh(const FormulaPtr& in, const FormulaPtr& out) {
    auto before = all_names(in);
    for (const auto& n : all_names(out))
        if (!before.count(n) && n.rfind("_v", 0) != 0) return false;
    auto fi = free_variables(in);
    for (const auto& v : free_variables(out))
        if (!fi.count(v)) return false;
    return true;
}

}  // namespace

TEST(Constancy, Pushout) {
    EXPECT_EQ(render(const_pushout(p("dep(x) /\\ R(x)"))), "exists _v0 . (dep(_v0) /\\ (_v0 = x /\\ R(x)))");
    EXPECT_EQ(render(const_pushout(p("dep(x)"))), "exists _v0 . (dep(_v0) /\\ _v0 = x)");
    EXPECT_THROW(const_pushout(p("x = y")), TranslationError);
    for (const char* text : {"dep(x) /\\ R(x)", "dep(x) \\/ dep(y)", "forall y . (dep(x) \\/ R(y))", "dep(x) /\\ dep(y)"}) {
        auto f = p(text);
        expect_equiv(f, const_pushout(f), 3);
        expect_equiv(f, const_pushout(f), 3, Mode::Strict);
    }
}

TEST(Constancy, NormalForm) {
    EXPECT_EQ(render(const_normal_form(p("dep(x) /\\ dep(y)"))),
              "exists _v0 _v1 . (dep(_v0) /\\ dep(_v1) /\\ (_v0 = x /\\ _v1 = y))");
    auto fo = p("x = y \\/ R(x)");
    EXPECT_TRUE(equal(const_normal_form(fo), fo));
    EXPECT_THROW(const_normal_form(p("dep(x,y)")), TranslationError);
    for (const char* text : {"dep(x) /\\ dep(y)", "dep(x) \\/ (R(y) /\\ dep(y))", "exists y . (dep(y) /\\ R(y)) \\/ dep(x)"}) {
        auto f = p(text);
        expect_equiv(f, const_normal_form(f), 3);
    }
}

TEST(Constancy, SentenceCollapse) {
    EXPECT_EQ(render(const_sentence_collapse(p("exists z . (dep(z) /\\ R(z))"))), "exists z . R(z)");
    auto plain = p("exists z . R(z)");
    EXPECT_TRUE(equal(const_sentence_collapse(plain), plain));
    EXPECT_THROW(const_sentence_collapse(p("exists z . (dep(z) /\\ R(x))")), TranslationError);
    EXPECT_THROW(const_sentence_collapse(p("exists z . (dep(z) /\\ exists y . dep(y))")), TranslationError);
    for (const char* text : {"dep(x) \\/ forall y . R(y)", "forall y . exists x . (dep(x) /\\ R(x,y))"}) {
        auto sentence = const_normal_form(p(text));
        if (!free_variables(sentence).empty()) continue;
        auto collapsed = const_sentence_collapse(sentence);
        EXPECT_TRUE(is_first_order(collapsed));
        EquivOptions opt;
        opt.min_domain = 1;
        opt.max_domain = 3;
        opt.max_rows = 1;
        auto r = check_equivalent(sentence, collapsed, opt);
        EXPECT_TRUE(r.equivalent) << text;
    }
}

TEST(Atoms, DisplayedForms) {
    EXPECT_EQ(render(dep_to_indep(ts({"x", "y"}))), "indep(x ; y ; y)");
    EXPECT_EQ(render(dep_to_indep(ts({"x"}))), "indep( ; x ; x)");
    EXPECT_EQ(render(dep_to_exc(ts({"x", "y"}))), "forall _v0 . (_v0 = y \\/ excl(x, _v0 ; x, y))");
    EXPECT_EQ(render(dep_to_exc(ts({"x"}))), "forall _v0 . (_v0 = x \\/ excl(_v0 ; x))");
    EXPECT_EQ(render(exc_to_dep(ts({"x"}), ts({"y"}))),
              "forall _v0 . exists _v1 _v2 . (dep(_v0,_v1) /\\ dep(_v0,_v2) /\\ ((_v1 = _v2 /\\ _v0 != x) \\/ "
              "(_v1 != _v2 /\\ _v0 != y)))");
    EXPECT_EQ(render(equi_to_inc(ts({"x"}), ts({"y"}))), "incl(x ; y) /\\ incl(y ; x)");
    EXPECT_EQ(render(inc_to_equi(ts({"x"}), ts({"y"}))),
              "forall _v0 _v1 . exists _v2 . (equi(y ; _v2) /\\ (_v0 != _v1 \\/ _v2 = x))");
    EXPECT_EQ(render(inc_to_indep(ts({"x"}), ts({"y"}))),
              "forall _v0 _v1 _v2 . ((_v2 != x /\\ _v2 != y) \\/ (_v0 != _v1 /\\ _v2 != y) \\/ "
              "((_v0 = _v1 \\/ _v2 = y) /\\ indep( ; _v2 ; _v0, _v1)))");
    auto ie = indep_to_ie(ts({"x"}), ts({"y"}), ts({"z"}));
    EXPECT_EQ(render(ie),
              "forall _v0 _v1 _v2 . exists _v3 _v4 _v5 _v6 . (dep(_v0,_v1,_v2,_v3) /\\ dep(_v0,_v1,_v2,_v4) /\\ "
              "dep(_v0,_v1,_v2,_v5) /\\ dep(_v0,_v1,_v2,_v6) /\\ ((_v3 != _v4 /\\ excl(_v0, _v1 ; x, y)) \\/ "
              "(_v3 = _v4 /\\ _v5 != _v6 /\\ excl(_v0, _v2 ; x, z)) \\/ (_v3 = _v4 /\\ _v5 = _v6 /\\ "
              "incl(_v0, _v1, _v2 ; x, y, z))))");
}

TEST(Atoms, WidthMismatchRejected) {
    EXPECT_THROW(exc_to_dep(ts({"x"}), ts({"y", "z"})), TranslationError);
    EXPECT_THROW(inc_to_equi(ts({"x"}), ts({"y", "z"})), TranslationError);
    EXPECT_THROW(equi_to_inc(ts({"x", "y"}), ts({"z"})), TranslationError);
    EXPECT_THROW(dep_to_exc({}), TranslationError);
}

TEST(Atoms, FreshNamesAvoidInputs) {
    auto out = dep_to_exc({Term::var("_v0"), Term::var("y")});
    EXPECT_EQ(render(out), "forall _v1 . (_v1 = y \\/ excl(_v0, _v1 ; _v0, y))");
    for (auto f : {dep_to_exc(ts({"x", "y"})), exc_to_dep(ts({"x"}), ts({"y"})), inc_to_equi(ts({"x"}), ts({"y"})),
                   inc_to_indep(ts({"x"}), ts({"y"})), indep_to_ie(ts({"x"}), ts({"y"}), ts({"z"}))})
        EXPECT_TRUE(only_reserved_fresh(p("R(x,y,z)"), f)) << render(f);
}

TEST(Equivalence, DepToIndep) {
    for (auto atom : {dep(ts({"x", "y"})), dep(ts({"x"})), dep(ts({"x", "y", "z"}))}) {
        auto t = dep_to_indep(atom->t1);
        expect_equiv(atom, t, 4);
        expect_equiv(atom, t, 4, Mode::Strict);
    }
}

TEST(Equivalence, DepToExc) {
    for (auto atom : {dep(ts({"x", "y"})), dep(ts({"x"})), dep(ts({"y", "x"}))}) {
        auto t = dep_to_exc(atom->t1);
        expect_equiv(atom, t, 4);
        expect_equiv(atom, t, 4, Mode::Strict);
    }
}

TEST(Equivalence, ExcToDep) {
    expect_equiv(excl(ts({"x"}), ts({"y"})), exc_to_dep(ts({"x"}), ts({"y"})), 4);
    expect_equiv(excl(ts({"x"}), ts({"y"})), exc_to_dep(ts({"x"}), ts({"y"})), 4, Mode::Strict);
    expect_equiv(excl(ts({"x", "y"}), ts({"y", "x"})), exc_to_dep(ts({"x", "y"}), ts({"y", "x"})), 3);
}

TEST(Equivalence, EquiAndIncl) {
    expect_equiv(equi(ts({"x"}), ts({"y"})), equi_to_inc(ts({"x"}), ts({"y"})), 4);
    expect_equiv(equi(ts({"x", "y"}), ts({"y", "x"})), equi_to_inc(ts({"x", "y"}), ts({"y", "x"})), 4);
    expect_equiv(incl(ts({"x"}), ts({"y"})), inc_to_equi(ts({"x"}), ts({"y"})), 4);
    expect_equiv(incl(ts({"x", "y"}), ts({"y", "x"})), inc_to_equi(ts({"x", "y"}), ts({"y", "x"})), 3);
}

TEST(Equivalence, InclToIndep) {
    expect_equiv(incl(ts({"x"}), ts({"y"})), inc_to_indep(ts({"x"}), ts({"y"})), 2);
    auto empty = Team({"x", "y"}, {});
    Model m({"0", "1"});
    EXPECT_TRUE(satisfies(m, empty, inc_to_indep(ts({"x"}), ts({"y"})), Mode::Lax).sat());
}

TEST(Equivalence, IndepToIe) {
    auto atom = indep(ts({"x"}), ts({"y"}), ts({"z"}));
    expect_equiv(atom, indep_to_ie(ts({"x"}), ts({"y"}), ts({"z"})), 2);
    expect_equiv(indep({}, ts({"x"}), ts({"y"})), indep_to_ie({}, ts({"x"}), ts({"y"})), 3);
}

TEST(Equivalence, IndepToIeExpanded) {
    auto f = indep_to_ie({}, ts({"x"}), ts({"y"}), nullptr, true);
    EXPECT_TRUE(compile(f, {Kind::Incl, Kind::Excl}) == f || equal(compile(f, {Kind::Incl, Kind::Excl}), f));
    expect_equiv(indep({}, ts({"x"}), ts({"y"})), f, 2);
}

TEST(Equivalence, FastPathsAgreeWithReference) {
    // Same shape as the independence translation body, small enough for literal enumeration.
    auto f = p("exists u v . (dep(x,u) /\\ dep(x,v) /\\ ((u != v /\\ excl(x ; y)) \\/ (u = v /\\ incl(x ; y))))");
    auto g = p("forall q . exists u . (forall z . (z = u \\/ excl(q, z ; q, u)) /\\ ((u = q /\\ incl(q ; x)) \\/ (u != q /\\ excl(q ; y))))");
    Model m({"0", "1"});
    for (const auto& [h, rows] : {std::pair{f, 3}, std::pair{g, 2}})
        for (Mode mode : {Mode::Lax, Mode::Strict})
            for_each_team(m, {"x", "y"}, rows, [&](const Team& x) {
                auto fast = satisfies(m, x, h, mode);
                auto ref = satisfies(m, x, h, mode, Budget{1'000'000'000}, EvalOptions{false});
                ASSERT_FALSE(ref.exceeded());
                EXPECT_EQ(fast.sat(), ref.sat()) << render(h) << " " << render_team(m, x);
            });
}

TEST(Compile, RewritesOutOfTargetAtoms) {
    auto f = p("dep(x,y) /\\ incl(x ; y)");
    auto g = compile(f, parse_atom_set("incl,excl"));
    EXPECT_EQ(render(g), "forall _v0 . (_v0 = y \\/ excl(x, _v0 ; x, y)) /\\ incl(x ; y)");
    expect_equiv(f, g, 3);
    auto fo = p("x = y \\/ R(x)");
    EXPECT_TRUE(equal(compile(fo, parse_atom_set("dep")), fo));
    try {
        compile(p("incl(x ; y)"), parse_atom_set("dep,excl"));
        FAIL();
    } catch (const TranslationError& e) {
        EXPECT_NE(std::string(e.what()).find("union closed"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("downward closed"), std::string::npos);
    }
    EXPECT_THROW(parse_atom_set("incl,bogus"), TranslationError);
}

TEST(Compile, ChainsAndPreservesLaxVerdicts) {
    struct Case {
        const char* text;
        const char* target;
        int rows;
    };
    for (auto c : std::vector<Case>{{"excl(x ; y) \\/ x = y", "dep", 3},
                                    {"equi(x ; y) /\\ dep(y)", "incl,excl", 3},
                                    {"exists z . (incl(z ; x) /\\ z != y)", "indep", 2},
                                    {"indep( ; x ; y) \\/ x = y", "incl,excl", 1},
                                    {"dep(x,y) \\/ excl(x ; y)", "indep", 2}}) {
        auto f = p(c.text);
        auto target = parse_atom_set(c.target);
        auto g = compile(f, target);
        for (const auto& [_, sub] : subformula_instances(g))
            if (sub->is_dependency_atom()) EXPECT_TRUE(target.count(sub->kind)) << render(g);
        EXPECT_TRUE(only_reserved_fresh(f, g));
        expect_equiv(f, g, c.rows);
    }
}

TEST(TransitiveClosure, CycleAndPaths) {
    Signature sig;
    sig.relations = {{"E", 2}};
    auto psi = parse("E(x,y)", sig);
    Model m({"0", "1", "2", "3"});
    m.set_relation("E", 2, {{0, 1}, {1, 2}, {2, 0}});
    m.set_constant("c", 0);
    m.set_constant("d", 3);
    EXPECT_TRUE(satisfies_sentence(m, tc_sentence(psi, {"x"}, {"y"}, {Term::constant("c")}, {Term::constant("c")}),
                                   Mode::Lax)
                    .unsat());
    EXPECT_TRUE(satisfies_sentence(m, tc_sentence(psi, {"x"}, {"y"}, {Term::constant("c")}, {Term::constant("d")}),
                                   Mode::Lax)
                    .sat());
    EXPECT_THROW(tc_sentence(p("dep(x,y)"), {"x"}, {"y"}, {Term::constant("c")}, {Term::constant("d")}),
                 TranslationError);
    EXPECT_THROW(tc_sentence(psi, {"x"}, {"y", "z"}, {Term::constant("c")}, {Term::constant("d")}), TranslationError);
}

TEST(TransitiveClosure, AgreesWithReachabilityOnSmallGraphs) {
    Signature sig;
    sig.relations = {{"E", 2}};
    auto psi = parse("E(x,y)", sig);
    auto s = tc_sentence(psi, {"x"}, {"y"}, {Term::constant("a")}, {Term::constant("b")});
    for (int mask = 0; mask < 512; mask += 7) {
        Model m({"0", "1", "2"});
        TupleSet edges;
        for (int i = 0; i < 9; ++i)
            if (mask >> i & 1) edges.insert({i / 3, i % 3});
        m.set_relation("E", 2, edges);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                Model mm = m;
                mm.set_constant("a", a);
                mm.set_constant("b", b);
                std::vector<bool> seen(3, false);
                std::vector<int> stack;
                for (const auto& e : edges)
                    if (e[0] == a && !seen[e[1]]) seen[e[1]] = true, stack.push_back(e[1]);
                while (!stack.empty()) {
                    int u = stack.back();
                    stack.pop_back();
                    for (const auto& e : edges)
                        if (e[0] == u && !seen[e[1]]) seen[e[1]] = true, stack.push_back(e[1]);
                }
                // The sentence also rules out b = a itself, since a ⊆ z.
                bool reach = seen[b] || a == b;
                EXPECT_EQ(satisfies_sentence(mm, s, Mode::Lax).sat(), !reach) << mask << " " << a << " " << b;
            }
    }
}

TEST(TransitiveClosure, OddCardinalityWrapper) {
    auto s = odd_cardinality_sentence();
    EXPECT_TRUE(free_variables(s).empty());
    EXPECT_EQ(render(s), "exists _v0 . (incl(0 ; _v0) /\\ _v0 != e /\\ forall _v1 . (_v1 != S(S(_v0)) \\/ incl(_v1 ; _v0)))");
}
