#pragma once

#include <functional>
#include <optional>
#include <string>

#include "teamlogic/semantics.hpp"

namespace teamlogic {

// Relation, function and constant symbols occurring in f, with their arities.
Signature signature_of(const FormulaPtr& f);
Signature merge(const Signature& a, const Signature& b);

// Every structure over sig with domain {0..size-1}; throws BudgetExceeded when
// the number of structures exceeds max_models.
void for_each_model(const Signature& sig, int size, const std::function<void(const Model&)>& fn,
                    std::uint64_t max_models = 1'000'000);
std::uint64_t count_models(const Signature& sig, int size);

struct EquivOptions {
    int min_domain = 2;
    int max_domain = 2;
    int max_rows = 3;
    Mode mode = Mode::Lax;
    Budget budget{};
    bool nonempty_only = false;
    std::uint64_t max_models = 1'000'000;
};

struct Counterexample {
    Model model;
    Team team;
    Verdict left, right;
};

struct EquivResult {
    bool equivalent = false;
    bool exceeded = false;
    std::uint64_t instances = 0;
    std::optional<Counterexample> counterexample;
};

// Compares verdicts of f and g on every model and every team over the union of
// their free variables within the given bounds.
EquivResult check_equivalent(const FormulaPtr& f, const FormulaPtr& g, const EquivOptions& opt = {});

std::string render_counterexample(const Counterexample& c);

}  // namespace teamlogic
