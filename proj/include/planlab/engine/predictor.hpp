#pragma once

#include <optional>
#include <string>

#include "planlab/core/environment.hpp"
#include "planlab/core/rng.hpp"

namespace planlab::engine {

// A learnable map from observation keys to values. predict is deterministic;
// sample is deterministic given the rng state (deterministic predictors
// simply ignore it). Returning nullopt is an explicit abstain, never a guess.
class predictor {
public:
    virtual ~predictor() = default;
    [[nodiscard]] virtual std::optional<std::string> predict(const std::string& key) const = 0;
    [[nodiscard]] virtual std::optional<std::string> sample(const std::string& key, core::rng& rng) const {
        (void)rng;
        return predict(key);
    }
};

// Observation keys shared between training and inference. Proposal values are
// newline-joined action lists.
std::string direct_key(const core::environment& env);
std::string policy_key(const core::environment& env, const core::state_key& state);
std::string transition_key(const core::environment& env, const core::state_key& state,
                           const core::action_key& action);
std::string proposal_key(const core::environment& env, const core::state_key& state);

}  // namespace planlab::engine
