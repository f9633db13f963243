#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>

#include "json.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string first() const { return out.substr(0, out.find('\n')); }
};

std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

Run run(const std::vector<std::string>& args) {
    std::string cmd = CLI_PATH;
    for (const auto& a : args) cmd += " " + quote(a);
    cmd += " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fx(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST(Check, LaxAndStrictVerdicts) {
    auto lax = run({"check", "--fixture", fx("lax-vs-strict-disjunction.json"), "--mode", "lax"});
    EXPECT_EQ(lax.code, 0);
    EXPECT_EQ(lax.first(), "sat");
    EXPECT_NE(lax.out.find("mode lax"), std::string::npos);
    auto strict = run({"check", "--fixture", fx("lax-vs-strict-disjunction.json"), "--mode", "strict"});
    EXPECT_EQ(strict.code, 1);
    EXPECT_EQ(strict.first(), "unsat");
}

TEST(Check, UsageErrors) {
    EXPECT_EQ(run({"check", "--fixture", fx("lax-vs-strict-disjunction.json"), "--team", fx("missing.json")}).code, 2);
    EXPECT_EQ(run({"check", "x = x"}).code, 2);
    EXPECT_EQ(run({"check", "--fixture", fx("lax-vs-strict-disjunction.json"), "incl(x ; w)"}).code, 2);
    EXPECT_EQ(run({"check", "--fixture", fx("lax-vs-strict-disjunction.json"), "x = "}).code, 2);
    EXPECT_EQ(run({"check", "--fixture", fx("lax-vs-strict-disjunction.json"), "--mode", "sloppy"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}

TEST(Check, BudgetExceeded) {
    auto r = run({"check", "--fixture", fx("lax-vs-strict-disjunction.json"), "--mode", "strict", "--budget", "1",
                  "exists u . (incl(x ; u) \\/ incl(y ; u))"});
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(r.first(), "budget exceeded");
}

TEST(Check, JsonReport) {
    auto r = run({"check", "--fixture", fx("lax-vs-strict-existential.json"), "--mode", "strict", "--json"});
    EXPECT_EQ(r.code, 1);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["verdict"], "unsat");
    EXPECT_EQ(j["mode"], "strict");
    EXPECT_EQ(j["exit"], 1);
}

TEST(Check, OutputIsStable) {
    std::vector<std::string> args = {"check", "--fixture", fx("strict-nonlocal-existential.json"), "--mode", "strict"};
    auto a = run(args);
    auto withThreads = args;
    withThreads.insert(withThreads.end(), {"--threads", "4"});
    EXPECT_EQ(a.out, run(args).out);
    EXPECT_EQ(a.out, run(withThreads).out);
}

TEST(Game, StrategiesMatchVerdicts) {
    auto nondet = run({"game", "--fixture", fx("lax-vs-strict-disjunction.json")});
    EXPECT_EQ(nondet.code, 0);
    EXPECT_EQ(nondet.first(), "strategy");
    auto det = run({"game", "--fixture", fx("lax-vs-strict-disjunction.json"), "--deterministic"});
    EXPECT_EQ(det.code, 1);
    EXPECT_EQ(det.first(), "none");
}

TEST(Game, DependenceAtomNeedsCompile) {
    auto r = run({"game", "--fixture", fx("lax-vs-strict-disjunction.json"), "dep(x,y)"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(run({"game", "--fixture", fx("lax-vs-strict-disjunction.json"), "dep(x,y)", "--compile"}).code, 0);
}

TEST(Game, AgreesWithCheck) {
    for (std::string f : {"incl(x ; y) \\/ incl(y ; z)", "excl(x ; y)", "incl(x ; y)", "exists u . incl(u ; x)",
                          "forall u . (u = x \\/ excl(u ; y))", "excl(x, y ; y, x) /\\ incl(z ; z)"}) {
        for (std::string mode : {"lax", "strict"}) {
            SCOPED_TRACE(f + " " + mode);
            auto c = run({"check", "--fixture", fx("lax-vs-strict-disjunction.json"), "--mode", mode, f});
            std::vector<std::string> g = {"game", "--fixture", fx("lax-vs-strict-disjunction.json"), f};
            if (mode == "strict") g.push_back("--deterministic");
            EXPECT_EQ(c.code, run(g).code);
        }
    }
}

TEST(Translate, Rules) {
    auto r = run({"translate", "--rule", "dep2exc", "dep(x,y)"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "forall _v0 . (_v0 = y \\/ excl(x, _v0 ; x, y))\n");
    EXPECT_EQ(run({"translate", "--rule", "equi2inc", "equi(x;y)"}).out, "incl(x ; y) /\\ incl(y ; x)\n");
    EXPECT_EQ(run({"translate", "--rule", "equi2inc", "dep(x,y)"}).code, 2);
    EXPECT_EQ(run({"translate", "--rule", "frobnicate", "dep(x,y)"}).code, 2);
    EXPECT_EQ(run({"translate", "--compile", "incl,excl", "dep(x,y)"}).out, r.out);
    EXPECT_EQ(run({"translate", "--compile", "dep", "incl(x ; y)"}).code, 2);
    auto snf = run({"translate", "--rule", "snf2ie", "--file", fx("skolem-any-equalizer.snf")});
    EXPECT_EQ(snf.code, 0);
    EXPECT_NE(snf.out.find("incl(x ; v)"), std::string::npos);
    auto eso = run({"translate", "--rule", "ie2eso", "x = y", "--vars", "x,y"});
    EXPECT_EQ(eso.out, "A/2 ; exists ; forall x y . (~A(x,y) \\/ x = y)\n");
}

TEST(Equiv, VerdictsAndCounterexample) {
    auto r = run({"equiv", "dep(x,y)", "forall _v0 . (_v0 = y \\/ excl(x, _v0 ; x, y))", "--domains", "2..2",
                  "--max-rows", "3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.first(), "equivalent");
    auto c = run({"equiv", "incl(x;y)", "incl(y;x)", "--domains", "2..2", "--max-rows", "2"});
    EXPECT_EQ(c.code, 1);
    EXPECT_EQ(c.first(), "counterexample");
    EXPECT_NE(c.out.find("x=0,y=1"), std::string::npos);
    auto j = nlohmann::json::parse(run({"equiv", "incl(x;y)", "incl(y;x)", "--max-rows", "2", "--json"}).out);
    EXPECT_EQ(j["verdict"], "counterexample");
    EXPECT_EQ(run({"equiv", "excl(x ; y)", "excl(x ; y)", "--domains", "1..3", "--max-rows", "2"}).code, 0);
    EXPECT_EQ(run({"equiv", "x = y", "x = y", "--domains", "three"}).code, 2);
}

TEST(Derive, TransitivityAndRejections) {
    auto r = run({"derive", "--premise", "incl(x ; y)", "--premise", "incl(y ; z)", "--goal", "incl(x ; z)"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "derived\nheight 2\nincl(x ; z)  [I3]\n  incl(x ; y)  [premise]\n  incl(y ; z)  [premise]\n");
    EXPECT_EQ(run({"derive", "--premise", "fd(x -> y)", "--goal", "incl(x ; y)"}).code, 2);
    auto none = run({"derive", "--premise", "incl(x ; y)", "--goal", "incl(y ; x)", "--system", "inc-only"});
    EXPECT_EQ(none.code, 1);
    EXPECT_EQ(none.first(), "none");
}

TEST(DbCheck, FdViolationWithWitness) {
    auto r = run({"dbcheck", "--relation", fx("fd-violation.csv"), "--dep", "fd(A -> B)"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out, "violated fd(A -> B)\n  (A:0, B:1)\n  (A:0, B:2)\n");
    auto ok = run({"dbcheck", "--relation", fx("family.csv"), "--dep", "incl(Father ; Person)", "--dep",
                   "egd: A(p,f1,m1) & A(p,f2,m2) -> f1 = f2"});
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(run({"dbcheck", "--relation", fx("family.csv"), "--dep", "incl(Uncle ; Person)"}).code, 2);
}
