#include "planlab/core/environment.hpp"

#include <algorithm>

namespace planlab::core {

std::string task_kind_name(task_kind k) {
    switch (k) {
        case task_kind::equations: return "equations";
        case task_kind::multihop_qa: return "qa";
        case task_kind::mwis: return "mwis";
        case task_kind::routes: return "routes";
        case task_kind::game24: return "game24";
        case task_kind::blocksworld: return "blocksworld";
    }
    return "unknown";
}

task_kind task_kind_from_name(const std::string& name) {
    if (name == "equations") return task_kind::equations;
    if (name == "qa") return task_kind::multihop_qa;
    if (name == "mwis") return task_kind::mwis;
    if (name == "routes") return task_kind::routes;
    if (name == "game24") return task_kind::game24;
    if (name == "blocksworld") return task_kind::blocksworld;
    throw std::invalid_argument("unknown task: " + name);
}

std::string failure_kind_name(failure_kind k) {
    switch (k) {
        case failure_kind::bad_action: return "BadAction";
        case failure_kind::bad_transition: return "BadTransition";
        case failure_kind::goal_unsatisfied: return "GoalUnsatisfied";
        case failure_kind::bad_answer: return "BadAnswer";
    }
    return "unknown";
}

verdict validate_trajectory(const environment& env, const trajectory& traj) {
    state_key state = traj.initial_state;
    for (std::size_t i = 0; i < traj.steps.size(); ++i) {
        const auto& step = traj.steps[i];
        std::vector<action_key> legal;
        try {
            legal = env.applicable_actions(state);
        } catch (const unknown_state&) {
            // The previous step produced a structurally invalid state; blame it.
            return verdict::fail(failure_kind::bad_transition, i == 0 ? 0 : i - 1);
        }
        if (std::find(legal.begin(), legal.end(), step.action) == legal.end())
            return verdict::fail(failure_kind::bad_action, i);
        state_key expected = env.apply_action(state, step.action);
        if (expected != step.next_state)
            return verdict::fail(failure_kind::bad_transition, i);
        state = step.next_state;
    }
    bool goal = false;
    try {
        goal = env.is_goal(state);
    } catch (const unknown_state&) {
        goal = false;
    }
    if (!goal) return verdict::fail(failure_kind::goal_unsatisfied);
    if (traj.answer && !env.check_answer(*traj.answer))
        return verdict::fail(failure_kind::bad_answer);
    return verdict::ok();
}

}  // namespace planlab::core
