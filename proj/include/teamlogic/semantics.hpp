#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "teamlogic/model.hpp"
#include "teamlogic/syntax.hpp"

namespace teamlogic {

enum class Mode { Lax, Strict };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct Budget {
    std::uint64_t max_nodes = 10'000'000;
};

struct Verdict {
    enum class Kind { Sat, Unsat, BudgetExceeded };
    Kind kind = Kind::Unsat;
    std::uint64_t nodes = 0;

    bool sat() const { return kind == Kind::Sat; }
    bool unsat() const { return kind == Kind::Unsat; }
    bool exceeded() const { return kind == Kind::BudgetExceeded; }
    std::string str() const;
};

struct BudgetExceeded : std::runtime_error {
    std::uint64_t nodes;
    explicit BudgetExceeded(std::uint64_t n) : std::runtime_error("budget exceeded"), nodes(n) {}
};

struct EvalOptions {
    // When false every connective is evaluated by literal enumeration of
    // splits and witness sets; only memoization is kept.
    bool fast_paths = true;
};

// Evaluates one formula against many teams over the same variable tuple,
// sharing the memo table between runs.
class Evaluator {
public:
    Evaluator(const Model& m, FormulaPtr f, std::vector<std::string> team_vars, Mode mode, EvalOptions opt = {});
    ~Evaluator();
    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;

    Verdict run(const Team& x, Budget b = {});
    // Throws BudgetExceeded instead of returning a verdict.
    bool holds(const Team& x, Budget b = {});

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Verdict satisfies(const Model& m, const Team& x, const FormulaPtr& f, Mode mode, Budget b = {}, EvalOptions opt = {});
Verdict satisfies_sentence(const Model& m, const FormulaPtr& f, Mode mode, Budget b = {}, EvalOptions opt = {});

bool check_dependence(const Model& m, const Team& x, const Terms& ts);
bool check_independence(const Model& m, const Team& x, const Terms& t1s, const Terms& t2s, const Terms& t3s);
bool check_inclusion(const Model& m, const Team& x, const Terms& t1s, const Terms& t2s);
bool check_exclusion(const Model& m, const Team& x, const Terms& t1s, const Terms& t2s);
bool check_equiextension(const Model& m, const Team& x, const Terms& t1s, const Terms& t2s);

enum class Closure { FirstOrder, Downward, Union, General };
// Closure class guaranteed by the atom families occurring in f under the mode.
Closure closure_class(const FormulaPtr& f, Mode mode);

}  // namespace teamlogic
