#include "planlab/engine/evaluator.hpp"

#include <deque>
#include <set>

namespace planlab::engine {

std::optional<int> goal_distance(const core::environment& env, const core::state_key& state,
                                 int max_depth, std::size_t node_cap) {
    try {
        if (env.is_goal(state)) return 0;
    } catch (const core::unknown_state&) {
        return std::nullopt;
    }
    std::deque<std::pair<core::state_key, int>> frontier{{state, 0}};
    std::set<core::state_key> seen{state};
    while (!frontier.empty()) {
        auto [cur, depth] = frontier.front();
        frontier.pop_front();
        if (depth >= max_depth) continue;
        std::vector<core::action_key> actions;
        try {
            actions = env.applicable_actions(cur);
        } catch (const core::unknown_state&) {
            continue;
        }
        for (const auto& a : actions) {
            core::state_key next = env.apply_action(cur, a);
            if (!seen.insert(next).second) continue;
            if (env.is_goal(next)) return depth + 1;
            if (seen.size() >= node_cap) return std::nullopt;
            frontier.emplace_back(next, depth + 1);
        }
    }
    return std::nullopt;
}

evaluation noisy_oracle_evaluator::score(const core::environment& env,
                                         const core::state_key& state) const {
    auto distance = goal_distance(env, state, horizon_);
    rating base = distance ? rating::sure : rating::impossible;
    double value = distance ? 1.0 / (1.0 + static_cast<double>(*distance)) : 0.0;

    rating r = base;
    if (epsilon_ > 0.0) {
        std::uint64_t h = core::hash_str(seed_, state);
        double u = static_cast<double>(h >> 11) * 0x1.0p-53;
        if (u < epsilon_) {
            // Flip to one of the two other ratings, uniformly.
            const rating others[2] = {base == rating::impossible ? rating::maybe : rating::impossible,
                                      base == rating::sure ? rating::maybe : rating::sure};
            r = others[core::mix64(h) & 1];
        }
    }
    return {r, value};
}

}  // namespace planlab::engine
