#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "teamlogic/dbdeps.hpp"
#include "teamlogic/equiv.hpp"
#include "teamlogic/eso.hpp"
#include "teamlogic/games.hpp"
#include "teamlogic/io.hpp"
#include "teamlogic/translate.hpp"

using namespace teamlogic;
using nlohmann::json;

namespace {

enum Exit { kSat = 0, kUnsat = 1, kUsage = 2, kBudget = 3 };

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Report {
    json j = json::object();
    std::vector<std::string> lines;
    int code = kSat;
};

struct Options {
    std::string model, team, fixture, mode = "lax", formula;
    std::uint64_t budget = 10'000'000;
    bool json_out = false, allow_unit = false;
    int threads = 1;

    // game
    bool deterministic = false, compile_game = false;
    // translate
    std::string rule, compile_to, input_file, vars, xs, ys, from, to;
    bool expand_dep = false;
    // equiv
    std::string second, domains = "2..2";
    int max_rows = 3;
    bool nonempty = false;
    // derive
    std::vector<std::string> premises;
    std::string goal, system = "inc-exc";
    int depth = 6;
    // dbcheck
    std::string relation, universe;
    std::vector<std::string> deps;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        auto a = item.find_first_not_of(' '), b = item.find_last_not_of(' ');
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

struct Context {
    Model model;
    Team team;
    FormulaPtr formula;
};

Context load_context(const Options& o) {
    Context c;
    std::string text = o.formula;
    if (!o.fixture.empty()) {
        auto fx = load_fixture(o.fixture, o.allow_unit);
        c.model = fx.model;
        c.team = fx.team;
        if (text.empty()) text = fx.formula;
    } else if (!o.model.empty()) {
        c.model = load_model(o.model, o.allow_unit);
        c.team = empty_assignment_team();
    } else {
        throw UsageError("one of --model or --fixture is required");
    }
    if (!o.team.empty()) c.team = load_team(c.model, o.team);
    if (text.empty()) throw UsageError("no formula given");
    c.formula = parse(text, c.model.signature());
    for (const auto& v : free_variables(c.formula))
        if (c.team.column(v) < 0) throw UsageError("free variable " + v + " is not a team variable");
    return c;
}

void verdict_report(Report& r, const Verdict& v, Mode mode) {
    r.j["verdict"] = v.exceeded() ? "budget_exceeded" : v.str();
    r.j["mode"] = to_string(mode);
    r.j["nodes"] = v.nodes;
    r.lines = {v.exceeded() ? "budget exceeded" : v.str(), "mode " + to_string(mode), "nodes " + std::to_string(v.nodes)};
    r.code = v.sat() ? kSat : v.unsat() ? kUnsat : kBudget;
}

Report cmd_check(const Options& o) {
    auto c = load_context(o);
    Mode mode = parse_mode(o.mode);
    Report r;
    r.j["command"] = "check";
    verdict_report(r, satisfies(c.model, c.team, c.formula, mode, Budget{o.budget}), mode);
    return r;
}

Report cmd_game(const Options& o) {
    auto c = load_context(o);
    auto f = o.compile_game ? compile(c.formula, {Kind::Incl, Kind::Excl}) : c.formula;
    Report r;
    r.j["command"] = "game";
    r.j["deterministic"] = o.deterministic;
    auto arena = build_arena(c.model, c.team, f);
    r.j["positions"] = arena.positions.size();
    auto tau = find_uniform_winning(c.model, arena, o.deterministic, Budget{o.budget});
    if (!tau) {
        r.j["verdict"] = "none";
        r.lines = {"none"};
        r.code = kUnsat;
        return r;
    }
    auto lines = render_strategy(c.model, arena, *tau);
    r.j["verdict"] = "strategy";
    r.j["strategy"] = lines;
    r.lines = {"strategy"};
    r.lines.insert(r.lines.end(), lines.begin(), lines.end());
    return r;
}

const FormulaPtr& expect_atom(const FormulaPtr& f, Kind k, const std::string& rule) {
    if (f->kind != k) throw TranslationError("rule " + rule + " expects a single atom of the matching kind, got " + render(f));
    return f;
}

std::vector<std::string> default_vars(const FormulaPtr& f, const std::string& given) {
    if (!given.empty()) return split_list(given);
    auto fv = free_variables(f);
    return {fv.begin(), fv.end()};
}

Terms terms(const std::string& s) {
    Signature sig;
    Terms out;
    for (const auto& t : split_list(s)) out.push_back(parse_term(t, sig));
    return out;
}

Report cmd_translate(const Options& o) {
    std::string text = o.input_file.empty() ? o.formula : read_file(o.input_file);
    if (text.empty()) throw UsageError("no input given");
    Report r;
    r.j["command"] = "translate";
    std::string out;
    auto formula = [&]() {
        Signature sig;
        return parse_infer(text, sig);
    };
    if (!o.compile_to.empty()) {
        if (!o.rule.empty()) throw UsageError("--rule and --compile are exclusive");
        r.j["compile"] = o.compile_to;
        out = render(compile(formula(), parse_atom_set(o.compile_to)));
    } else {
        const std::string& rule = o.rule;
        r.j["rule"] = rule;
        if (rule == "snf2ie") {
            auto nf = parse_skolemnf(text);
            std::vector<std::string> vs = split_list(o.vars);
            if (vs.empty())
                for (int i = 0; i < nf.a_arity; ++i) vs.push_back(nf.a_arity == 1 ? "v" : "v" + std::to_string(i + 1));
            out = render(skolemnf_to_ie(nf, vs, o.expand_dep));
        } else {
            auto f = formula();
            if (rule == "dep2exc") out = render(dep_to_exc(expect_atom(f, Kind::Dep, rule)->t1));
            else if (rule == "dep2indep") out = render(dep_to_indep(expect_atom(f, Kind::Dep, rule)->t1));
            else if (rule == "exc2dep") out = render(exc_to_dep(expect_atom(f, Kind::Excl, rule)->t1, f->t2));
            else if (rule == "equi2inc") out = render(equi_to_inc(expect_atom(f, Kind::Equi, rule)->t1, f->t2));
            else if (rule == "inc2equi") out = render(inc_to_equi(expect_atom(f, Kind::Incl, rule)->t1, f->t2));
            else if (rule == "inc2indep") out = render(inc_to_indep(expect_atom(f, Kind::Incl, rule)->t1, f->t2));
            else if (rule == "indep2ie")
                out = render(indep_to_ie(expect_atom(f, Kind::Indep, rule)->t1, f->t2, f->t3, nullptr, o.expand_dep));
            else if (rule == "const-pushout") out = render(const_pushout(f));
            else if (rule == "const-nf") out = render(const_normal_form(f));
            else if (rule == "const-collapse") out = render(const_sentence_collapse(f));
            else if (rule == "tc") {
                if (o.xs.empty() || o.ys.empty() || o.from.empty() || o.to.empty())
                    throw UsageError("rule tc needs --xs, --ys, --from and --to");
                out = render(tc_sentence(f, split_list(o.xs), split_list(o.ys), terms(o.from), terms(o.to)));
            } else if (rule == "ie2eso") out = render(ie_to_eso(f, default_vars(f, o.vars)));
            else throw UsageError("unknown rule '" + rule + "'");
        }
    }
    r.j["output"] = out;
    r.lines = {out};
    return r;
}

std::pair<int, int> parse_domains(const std::string& s) {
    auto p = s.find("..");
    try {
        if (p == std::string::npos) {
            int n = std::stoi(s);
            return {n, n};
        }
        return {std::stoi(s.substr(0, p)), std::stoi(s.substr(p + 2))};
    } catch (const std::logic_error&) {
        throw UsageError("--domains expects a..b, got '" + s + "'");
    }
}

Report cmd_equiv(const Options& o) {
    Signature sig;
    auto f = parse_infer(o.formula, sig);
    auto g = parse_infer(o.second, sig);
    EquivOptions eo;
    std::tie(eo.min_domain, eo.max_domain) = parse_domains(o.domains);
    if (eo.min_domain < 1 || eo.max_domain < eo.min_domain) throw UsageError("bad --domains range");
    eo.max_rows = o.max_rows;
    eo.mode = parse_mode(o.mode);
    eo.budget = Budget{o.budget};
    eo.nonempty_only = o.nonempty;
    auto res = check_equivalent(f, g, eo);
    Report r;
    r.j["command"] = "equiv";
    r.j["instances"] = res.instances;
    if (res.exceeded) {
        r.j["verdict"] = "budget_exceeded";
        r.lines = {"budget exceeded", "instances " + std::to_string(res.instances)};
        r.code = kBudget;
    } else if (res.equivalent) {
        r.j["verdict"] = "equivalent";
        r.lines = {"equivalent", "instances " + std::to_string(res.instances)};
    } else {
        const auto& c = *res.counterexample;
        r.j["verdict"] = "counterexample";
        r.j["counterexample"] = {{"model", model_to_json(c.model)},
                                 {"team", team_to_json(c.model, c.team)},
                                 {"left", c.left.str()},
                                 {"right", c.right.str()}};
        r.lines = {"counterexample"};
        std::stringstream ss(render_counterexample(c));
        for (std::string line; std::getline(ss, line);) r.lines.push_back(line);
        r.code = kUnsat;
    }
    return r;
}

Report cmd_derive(const Options& o) {
    if (o.goal.empty()) throw UsageError("--goal is required");
    std::vector<Dependency> ps;
    for (const auto& p : o.premises) ps.push_back(parse_dependency(p));
    auto goal = parse_dependency(o.goal);
    auto sys = parse_system(o.system);
    Report r;
    r.j["command"] = "derive";
    r.j["system"] = o.system;
    auto d = derive(ps, goal, sys, o.depth);
    if (!d) {
        r.j["verdict"] = "none";
        r.lines = {"none"};
        r.code = kUnsat;
        return r;
    }
    if (auto err = verify(*d, ps, sys); !err.empty()) throw std::logic_error("derivation failed verification: " + err);
    auto text = render(*d);
    r.j["verdict"] = "derived";
    r.j["height"] = d->height();
    r.j["derivation"] = text;
    r.lines = {"derived", "height " + std::to_string(d->height())};
    std::stringstream ss(text);
    for (std::string line; std::getline(ss, line);) r.lines.push_back(line);
    return r;
}

std::string render_row(const DBRelation& rel, const std::vector<std::string>& row) {
    std::string out = "(";
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? ", " : "") + rel.attributes[i] + ":" + row[i];
    return out + ")";
}

Report cmd_dbcheck(const Options& o) {
    if (o.relation.empty()) throw UsageError("--relation is required");
    if (o.deps.empty()) throw UsageError("at least one --dep is required");
    auto rel = load_csv(o.relation);
    std::vector<std::string> universe;
    if (!o.universe.empty()) {
        std::stringstream ss(read_file(o.universe));
        for (std::string v; ss >> v;) universe.push_back(v);
    }
    Report r;
    r.j["command"] = "dbcheck";
    r.j["results"] = json::array();
    for (const auto& text : o.deps) {
        auto d = parse_dependency(text);
        auto v = find_violation(rel, d, universe);
        json entry = {{"dependency", render(d)}, {"holds", !v}};
        r.lines.push_back((v ? "violated " : "holds ") + render(d));
        if (v) {
            r.code = kUnsat;
            entry["witness"] = v->rows;
            for (const auto& row : v->rows) r.lines.push_back("  " + render_row(rel, row));
        }
        r.j["results"].push_back(entry);
    }
    r.j["verdict"] = r.code == kSat ? "holds" : "violated";
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Team semantics toolkit: model checking, games, translations and dependency reasoning"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--mode", o.mode, "lax or strict")->check(CLI::IsMember({"lax", "strict"}));
        sub->add_option("--budget", o.budget, "search node budget")->check(CLI::PositiveNumber);
        sub->add_flag("--json", o.json_out, "print one JSON object");
        sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    };
    auto evaluation = [&](CLI::App* sub) {
        common(sub);
        sub->add_option("formula", o.formula, "formula text");
        sub->add_option("--model", o.model, "model JSON file");
        sub->add_option("--team", o.team, "team JSON file");
        sub->add_option("--fixture", o.fixture, "fixture JSON with model, team and formula");
        sub->add_flag("--allow-unit-domain", o.allow_unit, "accept a one-element domain");
    };

    auto* check = app.add_subcommand("check", "evaluate a formula on a team");
    evaluation(check);

    auto* game = app.add_subcommand("game", "search for a uniform winning strategy");
    evaluation(game);
    game->add_flag("--deterministic", o.deterministic, "restrict to deterministic strategies");
    game->add_flag("--compile", o.compile_game, "rewrite dep, indep and equi atoms into incl and excl first");

    auto* translate = app.add_subcommand("translate", "apply a translation rule");
    common(translate);
    translate->add_option("formula", o.formula, "formula, atom or normal form text");
    translate->add_option("--file", o.input_file, "read the input from a file");
    translate->add_option("--rule", o.rule, "dep2exc, exc2dep, dep2indep, inc2indep, equi2inc, inc2equi, indep2ie, "
                                            "const-pushout, const-nf, const-collapse, tc, ie2eso, snf2ie");
    translate->add_option("--compile", o.compile_to, "target atom set, e.g. incl,excl");
    translate->add_flag("--expand-dep", o.expand_dep, "rewrite generated dep atoms through dep2exc");
    translate->add_option("--vars", o.vars, "team variables for ie2eso and snf2ie");
    translate->add_option("--xs", o.xs, "tc source variables");
    translate->add_option("--ys", o.ys, "tc target variables");
    translate->add_option("--from", o.from, "tc start terms");
    translate->add_option("--to", o.to, "tc end terms");

    auto* equiv = app.add_subcommand("equiv", "compare two formulas on all small models and teams");
    common(equiv);
    equiv->add_option("first", o.formula)->required();
    equiv->add_option("second", o.second)->required();
    equiv->add_option("--domains", o.domains, "domain sizes a..b");
    equiv->add_option("--max-rows", o.max_rows, "largest team size")->check(CLI::NonNegativeNumber);
    equiv->add_flag("--nonempty", o.nonempty, "skip the empty team");

    auto* derive_cmd = app.add_subcommand("derive", "search for a derivation of a dependency");
    common(derive_cmd);
    derive_cmd->add_option("--premise", o.premises, "premise dependency (repeatable)");
    derive_cmd->add_option("--goal", o.goal, "dependency to derive");
    derive_cmd->add_option("--system", o.system, "inc-only or inc-exc");
    derive_cmd->add_option("--depth", o.depth, "largest derivation height")->check(CLI::PositiveNumber);

    auto* dbcheck = app.add_subcommand("dbcheck", "check dependencies on a CSV relation");
    common(dbcheck);
    dbcheck->add_option("--relation", o.relation, "CSV file with a header row");
    dbcheck->add_option("--dep", o.deps, "dependency (repeatable)");
    dbcheck->add_option("--universe", o.universe, "file of extra values for tgd/egd variables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    Report r;
    try {
        if (*check) r = cmd_check(o);
        else if (*game) r = cmd_game(o);
        else if (*translate) r = cmd_translate(o);
        else if (*equiv) r = cmd_equiv(o);
        else if (*derive_cmd) r = cmd_derive(o);
        else r = cmd_dbcheck(o);
    } catch (const BudgetExceeded& e) {
        r.j = {{"verdict", "budget_exceeded"}, {"nodes", e.nodes}};
        r.lines = {"budget exceeded", "nodes " + std::to_string(e.nodes)};
        r.code = kBudget;
    } catch (const ArenaTooLarge& e) {
        r.j = {{"verdict", "budget_exceeded"}, {"error", e.what()}};
        r.lines = {"budget exceeded", e.what()};
        r.code = kBudget;
    } catch (const std::logic_error& e) {
        if (o.json_out) std::cout << json{{"error", e.what()}}.dump() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::runtime_error& e) {
        if (o.json_out) std::cout << json{{"error", e.what()}}.dump() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    if (o.json_out) {
        r.j["exit"] = r.code;
        std::cout << r.j.dump() << "\n";
    } else {
        for (const auto& line : r.lines) std::cout << line << "\n";
    }
    return r.code;
}
