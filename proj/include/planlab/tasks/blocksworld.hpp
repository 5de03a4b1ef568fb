#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "planlab/core/environment.hpp"

namespace planlab::tasks::blocksworld {

using bigint = boost::multiprecision::cpp_int;

struct precondition_violated : std::runtime_error {
    precondition_violated(const std::string& action, const std::string& proposition)
        : std::runtime_error("cannot " + action + ": " + proposition + " does not hold"),
          proposition_name(proposition) {}
    std::string proposition_name;
};

struct malformed_description : std::runtime_error {
    explicit malformed_description(const std::string& what) : std::runtime_error(what) {}
};

struct unreachable : std::runtime_error {
    explicit unreachable(const std::string& what) : std::runtime_error(what) {}
};

// Clause order in rendered descriptions follows this fixed color order.
const std::vector<std::string>& color_palette();

// Physical state: stacks listed bottom-to-top and kept canonical (sorted by
// bottom block), plus an optional held block. Blocks are palette indices.
struct state {
    std::vector<std::vector<int>> stacks;
    std::optional<int> holding;

    void canonicalize();
    [[nodiscard]] bool is_clear(int block) const;
    [[nodiscard]] bool on_table(int block) const;
    [[nodiscard]] std::optional<int> below_of(int block) const;   // block it sits on
    [[nodiscard]] std::vector<int> blocks() const;                // sorted
    friend bool operator==(const state&, const state&) = default;
};

enum class schema { pick_up, put_down, stack, unstack };

struct action {
    schema kind{schema::pick_up};
    int x{0};
    int y{0};  // used by stack/unstack

    [[nodiscard]] std::string render() const;  // "unstack the orange block from on top of the blue block"
};

action parse_action(const std::string& text);

// Grounded actions for K blocks number 2K + 2K(K-1) = 2K^2.
std::vector<action> grounded_actions(int block_count);

struct proposal {
    action act;
    std::vector<std::string> satisfied_preconditions;  // named propositions
};

// Exactly the grounded actions whose preconditions hold, each with the named
// propositions that license it, in canonical (lexicographic) order.
std::vector<proposal> applicable_with_reasons(const state& s);

// Add/delete effects applied atomically; throws precondition_violated with
// the violated proposition named.
state apply(const state& s, const action& a);

struct goal_constraints {
    std::vector<std::pair<int, int>> on_pairs;  // (x, y): x on top of y

    // Rejects self-pairs, duplicate "above"/"below" claims, and cycles.
    static goal_constraints make(std::vector<std::pair<int, int>> pairs);
};

bool goal_satisfied(const state& s, const goal_constraints& goal);

state parse_state(const std::string& text);
std::string render_state(const state& s);

std::string render_goal(const goal_constraints& goal);
goal_constraints parse_goal(const std::string& text);

std::string render_plan(const std::vector<action>& plan);  // lines + "[PLAN END]"
std::vector<action> parse_plan(const std::string& text);

// Exact K! * 2^(K-1): ordered hand-empty stack descriptions for K blocks.
bigint count_state_descriptions(int block_count);

struct description_census {
    bigint hand_empty;
    bigint holding;
};
// Explicit enumeration of ordered stack descriptions (and, separately, the
// held-block variants). Intended for K <= 7.
description_census enumerate_state_descriptions(int block_count);

// Tabular description-length sizes for this task. The two direct-table
// exponents (cubic and quadratic in K) are both reported; callers pick the
// one matching the predictor they account for.
struct dl_table_sizes {
    bigint direct_bits_cubic;     // K! * K^3 * 2^(K-1) * ceil(log2 K)
    bigint policy_bits_quadratic; // K! * K^2 * 2^(K-1) * ceil(log2 K)
};
dl_table_sizes table_sizes(int block_count);

// Shortest plan via breadth-first search over canonical physical states
// (K <= 8), ties broken by canonical action order; empty when the goal
// already holds.
std::vector<action> optimal_plan(const state& init, const goal_constraints& goal);

std::unique_ptr<core::environment> make_environment(state init, goal_constraints goal);

}  // namespace planlab::tasks::blocksworld
