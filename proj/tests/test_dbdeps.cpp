#include <gtest/gtest.h>

#include <fstream>

#include "json.hpp"
#include "teamlogic/dbdeps.hpp"
#include "teamlogic/semantics.hpp"

using namespace teamlogic;
using nlohmann::json;

namespace {

json load_json(const std::string& name) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
    return json::parse(in);
}

std::vector<Dependency> deps(const json& j) {
    std::vector<Dependency> out;
    for (const auto& s : j) out.push_back(parse_dependency(s.get<std::string>()));
    return out;
}

DBRelation rel(std::vector<std::string> attrs, std::set<std::vector<std::string>> tuples) {
    return DBRelation{std::move(attrs), std::move(tuples)};
}

Terms vars(std::initializer_list<const char*> ns) {
    Terms out;
    for (const auto* n : ns) out.push_back(Term::var(n));
    return out;
}

}  // namespace

TEST(Csv, ParsesHeaderAndRows) {
    auto r = load_csv(std::string(FIXTURE_DIR) + "/family.csv");
    EXPECT_EQ(r.attributes, (std::vector<std::string>{"Person", "Father", "Mother"}));
    EXPECT_EQ(r.tuples.size(), 8u);
    EXPECT_EQ(parse_csv(to_csv(r)).tuples, r.tuples);
    EXPECT_THROW(parse_csv("A,B\n1\n"), DBError);
    EXPECT_THROW(parse_csv("A,A\n1,2\n"), DBError);
    EXPECT_THROW(parse_csv(""), DBError);
}

TEST(Dependency, ParseRenderRoundTrip) {
    for (std::string s : {"incl(A,B ; C,D)", "excl(A ; B)", "fd(A,B -> C)", "fd( -> C)",
                          "tgd: A(x,y) & A(y,z) -> exists w . A(x,w)", "egd: A(x,y) & A(x,z) -> y = z"})
        EXPECT_EQ(render(parse_dependency(s)), s == "fd( -> C)" ? "fd( -> C)" : s);
    EXPECT_THROW(parse_dependency("incl(A,B ; C)"), DBError);
    EXPECT_THROW(parse_dependency("egd: A(x,y) -> y = q"), DBError);
    EXPECT_THROW(parse_dependency("tgd: A(x) & B(x) -> A(x)"), DBError);
    EXPECT_THROW(parse_dependency("tgd: A(x) -> exists x . A(x)"), DBError);
    EXPECT_THROW(parse_dependency("tgd: A(f(x)) -> A(x)"), DBError);
    EXPECT_THROW(parse_dependency("mvd(A ; B)"), DBError);
}

TEST(Check, FamilyInclusions) {
    auto r = load_csv(std::string(FIXTURE_DIR) + "/family.csv");
    EXPECT_TRUE(check_dependency(r, parse_dependency("incl(Father ; Person)")));
    EXPECT_TRUE(check_dependency(r, parse_dependency("incl(Mother ; Person)")));
    EXPECT_FALSE(check_dependency(r, parse_dependency("incl(Person ; Father)")));
    EXPECT_TRUE(check_dependency(r, parse_dependency("excl(Father ; Mother)")));
    EXPECT_TRUE(check_dependency(r, parse_dependency("fd(Person -> Father)")));
    EXPECT_THROW(check_dependency(r, parse_dependency("incl(Uncle ; Person)")), DBError);
}

TEST(Check, FdAndItsEgdEncoding) {
    auto r = rel({"x", "y"}, {{"0", "1"}, {"0", "2"}});
    auto v = find_violation(r, Dependency::fd({"x"}, "y"));
    ASSERT_TRUE(v);
    EXPECT_EQ(v->rows.size(), 2u);
    EXPECT_FALSE(check_dependency(r, parse_dependency("egd: A(x,y1) & A(x,y2) -> y1 = y2")));
    EXPECT_TRUE(check_dependency(rel({"x", "y"}, {{"0", "1"}, {"1", "1"}}),
                                 parse_dependency("egd: A(x,y1) & A(x,y2) -> y1 = y2")));
    EXPECT_THROW(check_dependency(r, parse_dependency("egd: A(x,y,z) & A(x,u,v) -> y = u")), DBError);
}

TEST(Check, IndependenceTgd) {
    auto indep = parse_dependency("tgd: A(x,y1) & A(x2,y2) -> A(x,y2)");
    EXPECT_TRUE(check_dependency(rel({"x", "y"}, {{"0", "0"}, {"0", "1"}, {"1", "0"}, {"1", "1"}}), indep));
    auto diag = rel({"x", "y"}, {{"0", "0"}, {"1", "1"}});
    auto v = find_violation(diag, indep);
    ASSERT_TRUE(v);
    EXPECT_EQ(v->rows.size(), 2u);
    auto ex = parse_dependency("tgd: A(x,y) -> exists w . A(y,w)");
    EXPECT_FALSE(check_dependency(rel({"x", "y"}, {{"0", "1"}}), ex));
    EXPECT_TRUE(check_dependency(rel({"x", "y"}, {{"0", "1"}, {"1", "1"}}), ex));
}

TEST(Check, UniverseWidensTgdValuations) {
    // z occurs only in an equality, so it ranges over the domain.
    auto d = parse_dependency("tgd: A(x) & z = z -> A(z)");
    auto r = rel({"x"}, {{"a"}});
    EXPECT_TRUE(check_dependency(r, d));
    EXPECT_FALSE(check_dependency(r, d, {"a", "b"}));
}

TEST(Bridge, TeamAtomsMatchDependencies) {
    Model m({"0", "1"});
    int n = 0;
    for_each_team(m, {"x", "y", "z"}, 4, [&](const Team& x) {
        auto r = relation_of_team(m, x);
        EXPECT_EQ(check_dependence(m, x, vars({"x", "y", "z"})), check_dependency(r, Dependency::fd({"x", "y"}, "z")));
        EXPECT_EQ(check_dependence(m, x, vars({"z"})), check_dependency(r, Dependency::fd({}, "z")));
        EXPECT_EQ(check_inclusion(m, x, vars({"x", "y"}), vars({"y", "z"})),
                  check_dependency(r, Dependency::ind({"x", "y"}, {"y", "z"})));
        EXPECT_EQ(check_exclusion(m, x, vars({"x"}), vars({"z"})), check_dependency(r, Dependency::exd({"x"}, {"z"})));
        EXPECT_EQ(check_dependence(m, x, vars({"x", "y"})),
                  check_dependency(r, parse_dependency("egd: A(x,y1,z1) & A(x,y2,z2) -> y1 = y2")));
        EXPECT_EQ(check_independence(m, x, {}, vars({"x"}), vars({"y"})),
                  check_dependency(r, parse_dependency("tgd: A(x1,y1,z1) & A(x2,y2,z2) -> exists w . A(x1,y2,w)")));
        ++n;
    });
    EXPECT_GT(n, 100);
}

TEST(Derive, FixtureDerivations) {
    for (const auto& c : load_json("incexc-derivations.json")) {
        SCOPED_TRACE(c["name"].get<std::string>());
        auto ps = deps(c["premises"]);
        auto sys = parse_system(c["system"]);
        auto d = derive(ps, parse_dependency(c["goal"]), sys, 6);
        ASSERT_TRUE(d);
        EXPECT_EQ(d->rule, c["rule"].get<std::string>());
        if (c.contains("pi")) EXPECT_EQ(d->pi, c["pi"].get<std::vector<int>>());
        EXPECT_EQ(verify(*d, ps, sys), "");
    }
}

TEST(Derive, ShapesOfSmallDerivations) {
    auto d = derive({}, parse_dependency("incl(x ; x)"), AxiomSystem::IncOnly, 1);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->size(), 1);
    auto t = derive(deps(json{"incl(x ; y)", "incl(y ; z)"}), parse_dependency("incl(x ; z)"), AxiomSystem::IncOnly, 6);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->height(), 2);
    EXPECT_EQ(render(*t), "incl(x ; z)  [I3]\n  incl(x ; y)  [premise]\n  incl(y ; z)  [premise]\n");
    EXPECT_FALSE(derive(deps(json{"incl(x ; y)"}), parse_dependency("incl(y ; x)"), AxiomSystem::IncOnly, 6));
}

TEST(Derive, RejectsOutOfScopePremises) {
    auto goal = parse_dependency("incl(x ; y)");
    EXPECT_THROW(derive(deps(json{"fd(x -> y)"}), goal, AxiomSystem::IncOnly, 6), DBError);
    EXPECT_THROW(derive(deps(json{"excl(x ; z)"}), goal, AxiomSystem::IncOnly, 6), DBError);
    EXPECT_THROW(derive({}, goal, AxiomSystem::IncOnly, 0), DBError);
    EXPECT_THROW(parse_system("armstrong"), DBError);
}

TEST(Verify, RejectsTamperedDerivations) {
    auto ps = deps(json{"excl(x ; y)", "incl(z ; x)", "incl(w ; y)"});
    auto d = *derive(ps, parse_dependency("excl(z ; w)"), AxiomSystem::IncExc, 6);
    EXPECT_EQ(verify(d, ps, AxiomSystem::IncExc), "");
    EXPECT_NE(verify(d, ps, AxiomSystem::IncOnly), "");
    auto bad = d;
    bad.conclusion = parse_dependency("excl(w ; z)");
    EXPECT_NE(verify(bad, ps, AxiomSystem::IncExc), "");
    bad = d;
    std::swap(bad.children[1], bad.children[2]);
    EXPECT_NE(verify(bad, ps, AxiomSystem::IncExc), "");
    bad = d;
    bad.children[0].rule = "I1";
    EXPECT_NE(verify(bad, ps, AxiomSystem::IncExc), "");
    EXPECT_NE(verify(d, {}, AxiomSystem::IncExc), "");

    auto pr = deps(json{"incl(x,y ; u,v)"});
    auto p = *derive(pr, parse_dependency("incl(y ; v)"), AxiomSystem::IncOnly, 6);
    p.pi = {1};
    EXPECT_NE(verify(p, pr, AxiomSystem::IncOnly), "");
}

TEST(SemanticImplies, SmallCases) {
    EXPECT_TRUE(semantic_implies(deps(json{"incl(x ; y)", "incl(y ; z)"}), parse_dependency("incl(x ; z)"), 3, 3).implied);
    EXPECT_TRUE(semantic_implies({}, parse_dependency("incl(x ; x)"), 2, 3).implied);
    auto r = semantic_implies(deps(json{"incl(x ; y)"}), parse_dependency("incl(y ; x)"), 2, 2);
    ASSERT_FALSE(r.implied);
    ASSERT_TRUE(r.counterexample);
    EXPECT_EQ(r.counterexample->tuples.size(), 2u);
    EXPECT_TRUE(check_dependency(*r.counterexample, parse_dependency("incl(x ; y)")));
    EXPECT_FALSE(check_dependency(*r.counterexample, parse_dependency("incl(y ; x)")));
    EXPECT_THROW(semantic_implies({}, parse_dependency("incl(x ; y)"), 0, 2), DBError);
    EXPECT_THROW(semantic_implies({}, parse_dependency("incl(a,b,c ; c,b,a)"), 5, 6, 1000), DBError);
}

TEST(SemanticImplies, AgreesWithDerivationsOnFixtureList) {
    auto j = load_json("incexc-implications.json");
    ASSERT_EQ(j["implications"].size(), 50u);
    ASSERT_EQ(j["non_implications"].size(), 10u);
    for (const auto& c : j["implications"]) {
        auto ps = deps(c["premises"]);
        auto goal = parse_dependency(c["goal"]);
        auto sys = parse_system(c["system"]);
        SCOPED_TRACE(c["goal"].get<std::string>());
        auto d = derive(ps, goal, sys, 6);
        ASSERT_TRUE(d);
        EXPECT_EQ(verify(*d, ps, sys), "");
        EXPECT_TRUE(semantic_implies(ps, goal, 3, 3).implied);
    }
    for (const auto& c : j["non_implications"]) {
        auto ps = deps(c["premises"]);
        auto goal = parse_dependency(c["goal"]);
        SCOPED_TRACE(c["goal"].get<std::string>());
        auto r = semantic_implies(ps, goal, 3, 3);
        ASSERT_FALSE(r.implied);
        for (const auto& p : ps) EXPECT_TRUE(check_dependency(*r.counterexample, p));
        EXPECT_FALSE(check_dependency(*r.counterexample, goal));
        EXPECT_FALSE(derive(ps, goal, parse_system(c["system"]), 6));
    }
}

TEST(SemanticImplies, DerivationsAreSound) {
    // Every derivable instance over two attributes is semantically valid.
    std::vector<Dependency> atoms;
    for (std::string a : {"a", "b"})
        for (std::string b : {"a", "b"}) {
            atoms.push_back(Dependency::ind({a}, {b}));
            atoms.push_back(Dependency::exd({a}, {b}));
            atoms.push_back(Dependency::ind({a, b}, {b, a}));
            atoms.push_back(Dependency::exd({a, b}, {b, a}));
        }
    int found = 0;
    for (const auto& p : atoms)
        for (const auto& g : atoms) {
            auto d = derive({p}, g, AxiomSystem::IncExc, 5);
            if (!d) continue;
            ++found;
            EXPECT_EQ(verify(*d, {p}, AxiomSystem::IncExc), "");
            EXPECT_TRUE(semantic_implies({p}, g, 3, 3).implied) << render(p) << " => " << render(g);
        }
    EXPECT_GT(found, 20);
}
