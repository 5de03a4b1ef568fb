#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace planlab::core {

// States and actions cross module boundaries as canonical strings. Each task
// defines its canonicalization; equality of canonical strings is state
// equality, which keeps search-node deduplication representation-independent.
using state_key = std::string;
using action_key = std::string;

enum class task_kind { equations, multihop_qa, mwis, routes, game24, blocksworld };

std::string task_kind_name(task_kind k);
task_kind task_kind_from_name(const std::string& name);

struct unknown_state : std::runtime_error {
    explicit unknown_state(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by apply_action when a precondition is violated; names the
// precondition so the error taxonomy can distinguish proposal mistakes
// from transition mistakes.
struct inapplicable_action : std::runtime_error {
    inapplicable_action(const std::string& action, const std::string& precondition)
        : std::runtime_error("inapplicable action '" + action + "': requires " + precondition),
          violated_precondition(precondition) {}
    std::string violated_precondition;
};

struct trajectory_step {
    action_key action;
    state_key next_state;
    // Candidate set recorded by the engine at proposal time (empty when the
    // producing mode does not propose, e.g. direct answers).
    std::vector<action_key> proposed;
};

struct trajectory {
    state_key initial_state;
    std::vector<trajectory_step> steps;
    std::optional<std::string> answer;

    [[nodiscard]] const state_key& final_state() const {
        return steps.empty() ? initial_state : steps.back().next_state;
    }
};

enum class failure_kind { bad_action, bad_transition, goal_unsatisfied, bad_answer };

std::string failure_kind_name(failure_kind k);

struct verdict {
    bool valid{true};
    std::optional<std::size_t> failure_index;
    std::optional<failure_kind> kind;

    static verdict ok() { return {}; }
    static verdict fail(failure_kind k, std::optional<std::size_t> index = std::nullopt) {
        verdict v;
        v.valid = false;
        v.kind = k;
        v.failure_index = index;
        return v;
    }
};

// A task instance: states, applicable actions, a pure transition, and a goal
// test. All implementations are immutable after construction and safe for
// unlimited concurrent readers.
class environment {
public:
    virtual ~environment() = default;

    [[nodiscard]] virtual task_kind kind() const = 0;
    [[nodiscard]] virtual state_key initial_state() const = 0;

    // Deterministic, duplicate-free, in canonical order (lexicographic over
    // the action's canonical rendering). Throws unknown_state on states that
    // fail the task's structural invariants.
    [[nodiscard]] virtual std::vector<action_key> applicable_actions(const state_key& state) const = 0;

    // Pure transition; throws inapplicable_action when a precondition fails.
    [[nodiscard]] virtual state_key apply_action(const state_key& state, const action_key& action) const = 0;

    [[nodiscard]] virtual bool is_goal(const state_key& state) const = 0;

    // Canonical serialization of the whole problem; the observation key a
    // direct predictor is trained on.
    [[nodiscard]] virtual std::string problem_key() const = 0;

    // Human-readable goal description; part of policy observations.
    [[nodiscard]] virtual std::string goal_text() const = 0;

    // Observation a step policy keys on. Defaults to the full state; tasks
    // with a smaller sufficient observation override (e.g. routes use only
    // the frontier city, not the whole path).
    [[nodiscard]] virtual std::string policy_observation(const state_key& state) const { return state; }

    // Canonical answer once the trajectory is complete; nullopt otherwise.
    [[nodiscard]] virtual std::optional<std::string> extract_answer(const trajectory& traj) const = 0;

    // Task verifier for a final answer string (exact value / valid route /
    // goal-reaching plan...). Never throws; malformed answers are just false.
    [[nodiscard]] virtual bool check_answer(const std::string& answer) const = 0;

    // Reference solution produced by the task's exact solver. Throws
    // std::runtime_error when the instance is unsolvable.
    [[nodiscard]] virtual trajectory oracle_trajectory() const = 0;
};

// Replays every step via apply_action, then checks the goal and, when an
// answer is present, the task verifier. Reports the first failure.
verdict validate_trajectory(const environment& env, const trajectory& traj);

}  // namespace planlab::core
