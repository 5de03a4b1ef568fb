#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "planlab/core/environment.hpp"
#include "planlab/engine/evaluator.hpp"
#include "planlab/engine/predictor.hpp"

namespace planlab::engine {

struct search_config {
    std::size_t beam_width{5};
    std::size_t max_depth{16};
    std::size_t sc_samples{1};
    std::uint64_t seed{0};
};

// answer == nullopt means the mode abstained.
struct direct_result {
    std::optional<std::string> answer;
};

struct cot_result {
    core::trajectory traj;
    std::optional<std::string> answer;
    bool reached_goal{false};
    bool depth_exceeded{false};
};

struct tot_result {
    core::trajectory traj;
    std::optional<std::string> answer;
    bool reached_goal{false};
    // Set when no goal was reached within budget and the trajectory/answer
    // are only the best-rated leaf's attempt.
    bool best_effort{false};
};

// Single lookup keyed on the whole problem; no intermediate states.
direct_result run_direct(const predictor& pred, const core::environment& env);

// Greedy rollout: policy picks an action, the predictor (not the oracle)
// supplies the next state. Stops on goal, abstain, or max_depth.
cot_result run_cot(const predictor& pred, const core::environment& env, const search_config& config);

// sc_samples independent rollouts with sub-seeds derived from config.seed;
// majority vote over canonical answers, ties to the smallest answer string.
struct cot_sc_result {
    std::optional<std::string> answer;
    std::vector<std::optional<std::string>> rollout_answers;
};
cot_sc_result run_cot_sc(const predictor& pred, const core::environment& env,
                         const search_config& config);

// Breadth-wise beam search: expand every beam state through the proposer,
// apply proposals through the environment, score children with the
// evaluator, keep the top beam_width by (rating, value, canonical state).
// Children equal to an already-expanded state are dropped.
tot_result run_tot(const predictor& proposer, const evaluator& eval, const core::environment& env,
                   const search_config& config);

enum class error_class { transition_error, proposal_error, missing_actions, answer_error };

std::string error_class_name(error_class e);

struct classified_error {
    std::size_t step_index;  // steps.size() for answer errors
    error_class kind;
};

// Per-step taxonomy: a proposal error references operands/preconditions the
// state does not supply; a transition error records a next state different
// from T(s, a); missing actions compares the recorded candidate set against
// the valid action set; an answer error is a valid search whose final answer
// fails the task verifier.
std::vector<classified_error> classify_errors(const core::environment& env,
                                              const core::trajectory& traj);

}  // namespace planlab::engine
