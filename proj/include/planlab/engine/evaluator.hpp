#pragma once

#include <cstdint>
#include <optional>

#include "planlab/core/environment.hpp"
#include "planlab/core/rng.hpp"

namespace planlab::engine {

enum class rating { impossible = 0, maybe = 1, sure = 2 };

struct evaluation {
    rating r{rating::maybe};
    double value{0.0};  // tie-break in [0, 1]
};

// Scores a state for beam ranking; Impossible < Maybe < Sure.
class evaluator {
public:
    virtual ~evaluator() = default;
    [[nodiscard]] virtual evaluation score(const core::environment& env,
                                           const core::state_key& state) const = 0;
};

// Exhaustive goal-reachability check by bounded forward search over the
// environment's own transitions; distance doubles as the rank tie-break.
std::optional<int> goal_distance(const core::environment& env, const core::state_key& state,
                                 int max_depth, std::size_t node_cap = 200000);

// Perfect reachability oracle whose rating is flipped to a uniformly random
// other rating with probability epsilon. epsilon = 0 reproduces the oracle
// exactly; noise is a pure hash of (seed, state), so scoring stays
// deterministic and safe to call concurrently.
class noisy_oracle_evaluator final : public evaluator {
public:
    noisy_oracle_evaluator(double epsilon, std::uint64_t seed, int horizon = 24)
        : epsilon_(epsilon), seed_(seed), horizon_(horizon) {
        if (epsilon_ < 0.0 || epsilon_ > 1.0) throw std::invalid_argument("epsilon must be in [0, 1]");
    }

    [[nodiscard]] evaluation score(const core::environment& env,
                                   const core::state_key& state) const override;

private:
    double epsilon_;
    std::uint64_t seed_;
    int horizon_;
};

}  // namespace planlab::engine
