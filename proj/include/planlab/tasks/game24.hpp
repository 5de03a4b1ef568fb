#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "planlab/core/environment.hpp"
#include "planlab/core/rational.hpp"

namespace planlab::tasks::game24 {

using core::rational;

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct broken_provenance : std::runtime_error {
    explicit broken_provenance(const std::string& what) : std::runtime_error(what) {}
};

// One reduction: combine two numbers of the current multiset with an
// arithmetic operation. Operands are values in the order they are rendered.
struct action {
    rational a;
    rational b;
    char op{'+'};

    [[nodiscard]] rational result() const;
    [[nodiscard]] std::string render() const;          // exact: "14 / 2 = 7"
    [[nodiscard]] std::string render_display() const;  // prompt-style 2-decimal numbers
};

action parse_action(const std::string& text);

// Operand source: an original input number or the output of an earlier step.
struct operand_source {
    bool from_input{true};
    std::size_t step_index{0};  // meaningful when !from_input
};

struct step {
    action act;
    operand_source a_src;
    operand_source b_src;
};

struct solution {
    std::vector<step> steps;
    std::string expression;  // evaluates exactly to the target, uses each input once
};

// Multiset state helpers; canonical form is the exact renders of the sorted
// values joined by single spaces ("4 6 12").
std::vector<rational> sorted_numbers(std::vector<rational> numbers);
std::string render_state(const std::vector<rational>& sorted);
std::string render_state_display(const std::vector<rational>& sorted);
std::vector<rational> parse_state(const std::string& text);

// All legal (pair, op) combinations, deduplicated over equal-value operand
// pairs, division by zero excluded, in canonical (lexicographic) order.
std::vector<action> propose_actions_joint(const std::vector<rational>& numbers);

// Stage 1 of the decomposed proposal: positional pairs of the sorted multiset
// rendered with brackets ("(1) (2) 7 10"), ordered by gap then start index.
struct pair_selection {
    std::size_t i{0};
    std::size_t j{0};
    std::string bracketed;
};
std::vector<pair_selection> propose_pairs(const std::vector<rational>& numbers);

// Stage 2: at most 6 operator actions for one selected pair, in the
// demonstration order (+, *, a/b, b/a, b-a, a-b).
std::vector<action> propose_actions_for_pair(const std::vector<rational>& numbers,
                                             const pair_selection& pair);

// Exhaustive DFS over action sequences with exact arithmetic; first solution
// in canonical action order, or nullopt. 2 <= n <= 4.
std::optional<solution> brute_force_solve(const std::vector<rational>& numbers,
                                          const rational& target = rational(24));

// Number of successful leaf sequences in the canonical enumeration; 0 means
// unsolvable, 1 identifies single-line instances used for the hard suite.
long long solution_path_count(const std::vector<rational>& numbers,
                              const rational& target = rational(24));

// Substitution procedure: replace operands by the producing step's
// parenthesized expression, inputs stay literal, top level unparenthesized.
std::string assemble_expression(const std::vector<step>& steps);

// Infers operand provenance for steps given only values (as recorded in a
// trajectory); throws broken_provenance when no consistent assignment exists.
std::vector<step> infer_provenance(const std::vector<rational>& inputs,
                                   const std::vector<action>& actions);

// True iff the expression evaluates exactly to the target and its literal
// multiset equals the input multiset.
bool verify_expression(const std::vector<rational>& numbers, const std::string& expr,
                       const rational& target = rational(24));

std::unique_ptr<core::environment> make_environment(std::vector<rational> numbers,
                                                    rational target = rational(24));

}  // namespace planlab::tasks::game24
