#include <gtest/gtest.h>

#include "teamlogic/io.hpp"
#include "teamlogic/model.hpp"

using namespace teamlogic;

namespace {

Model bits() { return Model({"0", "1"}); }

Team team(std::vector<std::string> vs, std::vector<Tuple> rows) { return Team(std::move(vs), std::move(rows)); }

}  // namespace

TEST(Model, RejectsSmallOrDuplicateDomains) {
    EXPECT_THROW(Model(std::vector<std::string>{}), std::invalid_argument);
    EXPECT_THROW(Model({"a"}), std::invalid_argument);
    EXPECT_NO_THROW(Model({"a"}, true));
    EXPECT_THROW(Model({"a", "a"}), std::invalid_argument);
}

TEST(Model, NamesUniqueAcrossKinds) {
    Model m = bits();
    m.set_constant("c", 0);
    EXPECT_THROW(m.set_relation("c", 1, {}), std::invalid_argument);
    EXPECT_THROW(m.set_function("c", 1, {0, 1}), std::invalid_argument);
}

TEST(Model, FunctionsAreTotal) {
    Model m = bits();
    EXPECT_THROW(m.set_function("f", 1, {0}), std::invalid_argument);
    EXPECT_THROW(m.set_function("f", std::map<Tuple, Elem>{{{0}, 1}}, 1), std::invalid_argument);
}

TEST(EvalTerm, SuccessorTable) {
    Model m({"0", "1", "2"});
    m.set_function("S", 1, {1, 2, 2});
    m.set_constant("c", 0);
    Assignment s{{"x", 0}};
    EXPECT_EQ(eval_term(m, s, Term::app("S", {Term::app("S", {Term::var("x")})})), 2);
    EXPECT_EQ(eval_term(m, s, Term::var("x")), 0);
    EXPECT_EQ(eval_term(m, s, Term::constant("c")), 0);
    EXPECT_THROW(eval_term(m, s, Term::var("y")), std::invalid_argument);
}

TEST(Team, SetSemantics) {
    auto x = team({"x"}, {{1}, {0}, {1}});
    EXPECT_EQ(x.size(), 2u);
    EXPECT_EQ(x.rows[0], Tuple{0});
    EXPECT_THROW(team({"x", "x"}, {}), std::invalid_argument);
    EXPECT_THROW(team({"x"}, {{0, 1}}), std::invalid_argument);
}

TEST(Restrict, Examples) {
    EXPECT_EQ(restrict(team({"x", "y"}, {{0, 1}, {1, 0}}), {"x"}), team({"x"}, {{0}, {1}}));
    EXPECT_EQ(restrict(team({"x", "y"}, {{0, 1}, {0, 2}}), {"x"}), team({"x"}, {{0}}));
    EXPECT_EQ(restrict(team({"y", "z", "u"}, {{0, 1, 0}, {0, 1, 1}}), {"y", "z"}), team({"y", "z"}, {{0, 1}}));
    EXPECT_THROW(restrict(team({"x"}, {{0}}), {"y"}), std::invalid_argument);
}

TEST(Extend, Universal) {
    auto m = bits();
    EXPECT_EQ(extend_universal(team({"y"}, {{0}}), "x", m), team({"y", "x"}, {{0, 0}, {0, 1}}));
    EXPECT_TRUE(extend_universal(team({"y"}, {}), "x", m).empty());
    EXPECT_EQ(extend_universal(empty_assignment_team(), "x", m), team({"x"}, {{0}, {1}}));
    EXPECT_EQ(extend_universal(team({"x"}, {{0}}), "x", m), team({"x"}, {{0}, {1}}));
}

TEST(Extend, Function) {
    EXPECT_EQ(extend_function(team({"y"}, {{0}, {1}}), "x", std::vector<Elem>{0, 0}), team({"y", "x"}, {{0, 0}, {1, 0}}));
    EXPECT_EQ(extend_function(team({"y", "z"}, {{0, 1}}), "x", [](const Assignment&) { return 0; }),
              team({"y", "z", "x"}, {{0, 1, 0}}));
    EXPECT_TRUE(extend_function(team({"y"}, {}), "x", std::vector<Elem>{}).empty());
    EXPECT_THROW(extend_function(team({"y"}, {{0}}), "x", std::vector<Elem>{}), std::invalid_argument);
}

TEST(Extend, Multifunction) {
    EXPECT_EQ(extend_multifunction(team({"y", "z"}, {{0, 1}}), "x", {{0, 1}}),
              team({"y", "z", "x"}, {{0, 1, 0}, {0, 1, 1}}));
    EXPECT_THROW(extend_multifunction(team({"y"}, {{0}}), "x", {{}}), std::invalid_argument);
    EXPECT_TRUE(extend_multifunction(team({"y"}, {}), "x", {}).empty());
    auto x = team({"y"}, {{0}, {1}});
    EXPECT_EQ(extend_multifunction(x, "x", {{1}, {0}}), extend_function(x, "x", std::vector<Elem>{1, 0}));
}

TEST(TeamRelation, Projections) {
    auto m = bits();
    auto x = team({"x", "y"}, {{0, 1}, {1, 0}});
    EXPECT_EQ(team_relation(m, x, vars({"x"})), (TupleSet{{0}, {1}}));
    EXPECT_EQ(team_relation(m, x, vars({"x", "y"})), (TupleSet{{0, 1}, {1, 0}}));
}

TEST(Enumerate, Counts) {
    auto m = bits();
    EXPECT_EQ(enumerate_teams(m, {"x"}, 2).size(), 4u);
    EXPECT_EQ(enumerate_teams(m, {"x", "y"}, 4).size(), 16u);
    auto zero = enumerate_teams(m, {}, 1);
    ASSERT_EQ(zero.size(), 2u);
    EXPECT_TRUE(zero[0].empty());
    EXPECT_EQ(zero[1], empty_assignment_team());
    std::set<std::vector<Tuple>> seen;
    for (const auto& t : enumerate_teams(Model({"a", "b", "c"}), {"x", "y"}, 3)) seen.insert(t.rows);
    EXPECT_EQ(seen.size(), 1u + 9u + 36u + 84u);
}

TEST(Property, TeamPrimitives) {
    Model m({"0", "1", "2"});
    for (const auto& x : enumerate_teams(m, {"x", "y"}, 3)) {
        EXPECT_EQ(restrict(x, {"x", "y"}), x);
        auto u = extend_universal(x, "z", m);
        EXPECT_LE(u.size(), x.size() * 3);
        if (!x.empty()) EXPECT_EQ(restrict(u, {"x", "y"}), x);
        std::vector<Elem> choice;
        std::vector<std::vector<Elem>> sets;
        for (std::size_t i = 0; i < x.size(); ++i) {
            choice.push_back(static_cast<Elem>((i * 7) % 3));
            sets.push_back({choice.back()});
        }
        auto f = extend_function(x, "z", choice);
        EXPECT_LE(f.size(), x.size());
        EXPECT_EQ(extend_multifunction(x, "z", sets), f);
        auto ry = restrict(x, {"y"});
        TupleSet proj(ry.rows.begin(), ry.rows.end());
        EXPECT_EQ(team_relation(m, x, vars({"y"})), proj);
    }
}

TEST(Tarski, Quantifiers) {
    Model m({"0", "1", "2"});
    m.set_relation("E", 2, {{0, 1}, {1, 2}});
    Signature sig = m.signature();
    EXPECT_TRUE(tarski(m, {{"x", 0}}, parse("exists y . E(x, y)", sig)));
    EXPECT_FALSE(tarski(m, {{"x", 2}}, parse("exists y . E(x, y)", sig)));
    EXPECT_TRUE(tarski(m, {}, parse("forall x . (x = x)", sig)));
}

TEST(Io, ModelRoundTrip) {
    auto j = nlohmann::json::parse(R"({"domain": ["0","1"], "constants": {"c":"0"},
        "functions": {"S": {"0":"1","1":"0"}, "g": {"0,0":"0","0,1":"1","1,0":"1","1,1":"0"}},
        "relations": {"R": [["0","1"]], "P": {"arity": 1, "tuples": []}}})");
    Model m = model_from_json(j);
    EXPECT_EQ(m.apply("S", {0}), 1);
    EXPECT_EQ(m.apply("g", {1, 0}), 1);
    EXPECT_TRUE(m.holds("R", {0, 1}));
    EXPECT_FALSE(m.holds("P", {0}));
    Model back = model_from_json(model_to_json(m));
    EXPECT_EQ(model_to_json(back), model_to_json(m));
    EXPECT_THROW(model_from_json(nlohmann::json::parse(R"({"domain": ["0"]})")), std::invalid_argument);
    EXPECT_THROW(model_from_json(nlohmann::json::parse(R"({"domain": ["0","1"], "constants": {"c":"7"}})")),
                 std::invalid_argument);
}

TEST(Io, TeamFile) {
    Model m = bits();
    auto x = team_from_json(m, nlohmann::json::parse(R"({"vars": ["x","y"], "rows": [["0","1"],["1","0"]]})"));
    EXPECT_EQ(x, team({"x", "y"}, {{0, 1}, {1, 0}}));
    EXPECT_EQ(render_team(m, x), "{(x=0,y=1) ; (x=1,y=0)}");
    EXPECT_EQ(team_from_json(m, team_to_json(m, x)), x);
}
