#include <gtest/gtest.h>

#include "corpus.hpp"
#include "teamlogic/games.hpp"
#include "teamlogic/io.hpp"

using namespace teamlogic;

namespace {

Team team(std::vector<std::string> vs, std::vector<Tuple> rows) { return Team(std::move(vs), std::move(rows)); }

Model with_c() {
    Model m({"0", "1"});
    m.set_constant("c", 0);
    return m;
}

int count_terminals(const Arena& a) { return static_cast<int>(std::count(a.terminal.begin(), a.terminal.end(), 1)); }

}  // namespace

TEST(Arena, SingleLiteral) {
    Model m({"0", "1"});
    auto a = build_arena(m, team({"x", "y"}, {{0, 0}}), parse("x = y", {}));
    ASSERT_EQ(a.positions.size(), 1u);
    EXPECT_TRUE(a.terminal[0]);
    EXPECT_TRUE(a.winning[0]);
    auto plays = plays_following(a, {});
    ASSERT_EQ(plays.size(), 1u);
    EXPECT_EQ(plays[0].size(), 1u);
}

TEST(Arena, ExistentialWitness) {
    Model m = with_c();
    auto a = build_arena(m, empty_assignment_team(), parse("exists x . x = c", m.signature()));
    ASSERT_EQ(a.initial.size(), 1u);
    int p = a.initial[0];
    EXPECT_EQ(a.turn[static_cast<std::size_t>(p)], Player::II);
    ASSERT_EQ(a.successors[static_cast<std::size_t>(p)].size(), 2u);
    int wins = 0;
    for (int q : a.successors[static_cast<std::size_t>(p)]) wins += a.winning[static_cast<std::size_t>(q)];
    EXPECT_EQ(wins, 1);
    EXPECT_EQ(plays_following(a, {{p, a.successors[static_cast<std::size_t>(p)]}}).size(), 2u);
    EXPECT_EQ(plays_following(a, {{p, {a.successors[static_cast<std::size_t>(p)][0]}}}).size(), 1u);
    auto tau = find_uniform_winning(m, a, true);
    ASSERT_TRUE(tau);
    ASSERT_EQ(tau->at(p).size(), 1u);
    EXPECT_EQ(a.assignment(tau->at(p)[0]).at("x"), 0);
    EXPECT_EQ(render_strategy(m, a, *tau), (std::vector<std::string>{"@ | -> @.0 | x=0"}));
}

TEST(Arena, LaxStrictDisjunction) {
    auto fx = load_fixture(std::string(FIXTURE_DIR) + "/lax-vs-strict-disjunction.json");
    auto f = parse(fx.formula, fx.model.signature());
    auto a = build_arena(fx.model, fx.team, f);
    EXPECT_EQ(a.initial.size(), 3u);
    EXPECT_EQ(count_terminals(a), 6);
    auto lax = find_uniform_winning(fx.model, a, false);
    ASSERT_TRUE(lax);
    EXPECT_TRUE(is_uniform(fx.model, a, *lax));
    EXPECT_TRUE(is_winning(a, *lax));
    EXPECT_FALSE(find_uniform_winning(fx.model, a, true));
}

TEST(Arena, DependenceAtomNeedsTranslation) {
    Model m({"0", "1"});
    EXPECT_THROW(build_arena(m, team({"x"}, {{0}}), parse("dep(x)", {})), UnsupportedAtom);
    EXPECT_THROW(build_arena(m, team({"x"}, {{0}}), parse("equi(x ; x)", {})), UnsupportedAtom);
}

TEST(Arena, PositionCap) {
    Model m({"0", "1"});
    EXPECT_THROW(build_arena(m, empty_assignment_team(), parse("forall a b c d . a = b", {}), 10), ArenaTooLarge);
}

TEST(Uniformity, AtomsAlone) {
    Model m({"0", "1"});
    auto ok = build_arena(m, team({"x", "y"}, {{0, 1}, {1, 0}}), parse("incl(x ; y)", {}));
    EXPECT_TRUE(is_uniform(m, ok, {}));
    auto bad = build_arena(m, team({"x", "y"}, {{0, 1}}), parse("incl(x ; y)", {}));
    EXPECT_FALSE(is_uniform(m, bad, {}));
    auto clash = build_arena(m, team({"x", "y"}, {{0, 0}}), parse("excl(x ; y)", {}));
    EXPECT_FALSE(is_uniform(m, clash, {}));
    EXPECT_FALSE(find_uniform_winning(m, clash, false));
}

TEST(Strategy, PartialIsRejected) {
    Model m = with_c();
    auto a = build_arena(m, empty_assignment_team(), parse("exists x . x = c", m.signature()));
    EXPECT_THROW(plays_following(a, {}), std::invalid_argument);
}

namespace {

void agree_on(const Model& m, const std::vector<FormulaPtr>& fs, const std::vector<Team>& teams, std::size_t stride) {
    std::size_t k = 0;
    for (const auto& f : fs) {
        Evaluator lax(m, f, teams[0].vars, Mode::Lax);
        Evaluator strict(m, f, teams[0].vars, Mode::Strict);
        for (const auto& x : teams) {
            if (k++ % stride) continue;
            auto a = build_arena(m, x, f);
            auto nd = find_uniform_winning(m, a, false);
            auto det = find_uniform_winning(m, a, true);
            ASSERT_EQ(nd.has_value(), lax.holds(x)) << render(f) << " " << render_team(m, x);
            ASSERT_EQ(det.has_value(), strict.holds(x)) << render(f) << " " << render_team(m, x);
            for (const auto* tau : {nd ? &*nd : nullptr, det ? &*det : nullptr}) {
                if (!tau) continue;
                ASSERT_TRUE(is_uniform(m, a, *tau));
                ASSERT_TRUE(is_winning(a, *tau));
            }
            if (det) ASSERT_TRUE(is_deterministic(*det));
        }
    }
}

}  // namespace

TEST(Property, GameAgreesWithTeamSemantics) {
    Model m({"0", "1"});
    agree_on(m, corpus::spine(corpus::ie_atoms(), 2), enumerate_teams(m, {"x", "y"}, 3), 3);
}

TEST(Property, GameAgreesOnDeeperFormulas) {
    Model m({"0", "1", "2"});
    auto fs = corpus::spine(corpus::ie_atoms(), 3);
    std::vector<FormulaPtr> sample;
    for (std::size_t i = 0; i < fs.size(); i += 97) sample.push_back(fs[i]);
    agree_on(m, sample, enumerate_teams(m, {"x", "y"}, 2), 5);
}
