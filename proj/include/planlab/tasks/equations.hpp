#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "planlab/core/environment.hpp"
#include "planlab/core/rational.hpp"
#include "planlab/core/rng.hpp"

namespace planlab::tasks::equations {

using core::rational;

struct unsolvable : std::runtime_error {
    explicit unsolvable(const std::string& what) : std::runtime_error(what) {}
};

struct generation_failed : std::runtime_error {
    explicit generation_failed(const std::string& what) : std::runtime_error(what) {}
};

// One equation: a single variable on the left, an arithmetic expression over
// variables and integer constants on the right (+ - * / with the usual
// precedence). Arithmetic is exact rational throughout.
struct equation {
    std::string lhs;
    std::string rhs;  // e.g. "x1 * 2", "x2 - x3 + x4"

    [[nodiscard]] std::vector<std::string> rhs_variables() const;  // with multiplicity
    [[nodiscard]] rational evaluate(const std::map<std::string, rational>& values) const;
};

struct equation_system {
    std::vector<std::string> variables;
    std::map<std::string, rational> known;
    std::vector<equation> equations;
    std::string target;
};

// Throws std::invalid_argument when an invariant fails (duplicate LHS
// definitions, unknowns that never appear on an LHS, undeclared variables).
void validate_system(const equation_system& system);

struct firing {
    std::size_t equation_index;
    std::string variable;
    rational value;
};

struct solve_result {
    rational value;
    std::vector<firing> order;
    long long op_count{0};  // primitive-operation counter, linear in total equation length
};

// Ready-queue forward chaining: fires any equation whose right side is fully
// known, propagating counts of unresolved variables per equation.
solve_result forward_chain_solve(const equation_system& system);

struct generation_params {
    std::size_t n_variables{4};
    long long k_range{20};                            // every value stays within [0, k_range]
    std::vector<double> rule_mix{0.3, 0.3, 0.15, 0.15, 0.1};  // multiplier, difference,
                                                              // product, sum, current-amount
};

// Random solvable system built from the five general rule templates; the
// stored oracle answer comes from the generation-time forward pass.
struct generated_task {
    equation_system system;
    rational answer;
};
generated_task generate_equation_task(const generation_params& params, core::rng& rng);

std::string system_to_json(const equation_system& system);
equation_system system_from_json(const std::string& json_text);

// One line per derivation, final line "So the answer is <value>."
std::string emit_cot_trace(const equation_system& system);

std::unique_ptr<core::environment> make_environment(equation_system system);

}  // namespace planlab::tasks::equations
