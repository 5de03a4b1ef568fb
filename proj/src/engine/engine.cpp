#include "planlab/engine/engine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "planlab/core/text.hpp"

namespace planlab::engine {

std::string direct_key(const core::environment& env) { return "direct|" + env.problem_key(); }

std::string policy_key(const core::environment& env, const core::state_key& state) {
    return "policy|" + core::task_kind_name(env.kind()) + "|" + env.goal_text() + "|" +
           env.policy_observation(state);
}

std::string transition_key(const core::environment& env, const core::state_key& state,
                           const core::action_key& action) {
    return "trans|" + core::task_kind_name(env.kind()) + "|" + state + "|" + action;
}

std::string proposal_key(const core::environment& env, const core::state_key& state) {
    return "propose|" + core::task_kind_name(env.kind()) + "|" + state;
}

direct_result run_direct(const predictor& pred, const core::environment& env) {
    return {pred.predict(direct_key(env))};
}

namespace {

cot_result rollout(const predictor& pred, const core::environment& env, const search_config& config,
                   std::uint64_t seed, bool sampled) {
    cot_result res;
    res.traj.initial_state = env.initial_state();
    core::state_key state = res.traj.initial_state;
    core::rng rng(seed);

    for (std::size_t depth = 0;; ++depth) {
        bool goal = false;
        try {
            goal = env.is_goal(state);
        } catch (const core::unknown_state&) {
            return res;  // a predicted state left the task's state space
        }
        if (goal) {
            res.reached_goal = true;
            res.answer = env.extract_answer(res.traj);
            return res;
        }
        if (depth >= config.max_depth) {
            res.depth_exceeded = true;
            return res;
        }
        auto action = sampled ? pred.sample(policy_key(env, state), rng)
                              : pred.predict(policy_key(env, state));
        if (!action) return res;  // abstain ends the rollout
        auto next = sampled ? pred.sample(transition_key(env, state, *action), rng)
                            : pred.predict(transition_key(env, state, *action));
        if (!next) return res;
        res.traj.steps.push_back({*action, *next, {}});
        state = *next;
    }
}

}  // namespace

cot_result run_cot(const predictor& pred, const core::environment& env, const search_config& config) {
    return rollout(pred, env, config, core::derive_seed(config.seed, 0), false);
}

cot_sc_result run_cot_sc(const predictor& pred, const core::environment& env,
                         const search_config& config) {
    cot_sc_result res;
    std::map<std::string, std::size_t> votes;
    for (std::size_t i = 0; i < config.sc_samples; ++i) {
        cot_result r = rollout(pred, env, config, core::derive_seed(config.seed, i), true);
        res.rollout_answers.push_back(r.answer);
        if (r.answer) votes[*r.answer] += 1;
    }
    // Majority over canonical answers; std::map iteration makes ties fall to
    // the smallest answer string.
    std::size_t best = 0;
    for (const auto& [answer, count] : votes) {
        if (count > best) {
            best = count;
            res.answer = answer;
        }
    }
    return res;
}

tot_result run_tot(const predictor& proposer, const evaluator& eval, const core::environment& env,
                   const search_config& config) {
    struct node {
        core::state_key state;
        std::size_t parent;  // index into arena; npos for root
        core::action_key action;
        std::vector<core::action_key> proposed;
        evaluation score;
    };
    constexpr std::size_t npos = static_cast<std::size_t>(-1);

    tot_result res;
    res.traj.initial_state = env.initial_state();

    auto build_trajectory = [&](const std::vector<node>& arena, std::size_t leaf) {
        std::vector<std::size_t> chain;
        for (std::size_t i = leaf; i != npos; i = arena[i].parent) chain.push_back(i);
        std::reverse(chain.begin(), chain.end());
        core::trajectory traj;
        traj.initial_state = env.initial_state();
        for (std::size_t i : chain)
            if (arena[i].parent != npos)  // root carries no action
                traj.steps.push_back({arena[i].action, arena[i].state, arena[i].proposed});
        return traj;
    };

    std::vector<node> arena;
    arena.push_back({res.traj.initial_state, npos, "", {}, {}});
    if (env.is_goal(res.traj.initial_state)) {
        res.reached_goal = true;
        res.answer = env.extract_answer(res.traj);
        return res;
    }

    std::set<core::state_key> expanded;
    std::vector<std::size_t> beam{0};

    for (std::size_t depth = 0; depth < config.max_depth; ++depth) {
        std::vector<std::size_t> children;
        for (std::size_t parent_index : beam) {
            const core::state_key parent_state = arena[parent_index].state;
            expanded.insert(parent_state);
            auto proposal_value = proposer.predict(proposal_key(env, parent_state));
            if (!proposal_value) continue;
            std::vector<core::action_key> candidates =
                proposal_value->empty() ? std::vector<core::action_key>{}
                                        : core::split(*proposal_value, "\n");
            for (const auto& action : candidates) {
                core::state_key next;
                try {
                    next = env.apply_action(parent_state, action);
                } catch (const std::exception&) {
                    continue;  // unusable proposal; classify_errors sees it via `proposed`
                }
                if (expanded.count(next)) continue;
                node child{next, parent_index, action, {}, {}};
                // Record the candidate set on the step itself for later
                // error classification.
                child.proposed = candidates;
                arena.push_back(child);
                std::size_t child_index = arena.size() - 1;
                if (env.is_goal(next)) {
                    res.traj = build_trajectory(arena, child_index);
                    res.reached_goal = true;
                    res.answer = env.extract_answer(res.traj);
                    return res;
                }
                children.push_back(child_index);
            }
        }
        if (children.empty()) break;
        for (std::size_t c : children) arena[c].score = eval.score(env, arena[c].state);
        std::sort(children.begin(), children.end(), [&](std::size_t a, std::size_t b) {
            const auto& na = arena[a];
            const auto& nb = arena[b];
            if (na.score.r != nb.score.r) return na.score.r > nb.score.r;
            if (na.score.value != nb.score.value) return na.score.value > nb.score.value;
            return na.state < nb.state;
        });
        // Drop duplicate states inside one generation, keep the best-ranked.
        std::set<core::state_key> kept_states;
        std::vector<std::size_t> next_beam;
        for (std::size_t c : children) {
            if (next_beam.size() >= config.beam_width) break;
            if (!kept_states.insert(arena[c].state).second) continue;
            next_beam.push_back(c);
        }
        beam = std::move(next_beam);
    }

    // Budget exhausted: report the best leaf's attempt and flag it.
    res.best_effort = true;
    if (!beam.empty()) {
        res.traj = build_trajectory(arena, beam.front());
        res.answer = env.extract_answer(res.traj);
    }
    return res;
}

std::string error_class_name(error_class e) {
    switch (e) {
        case error_class::transition_error: return "TransitionError";
        case error_class::proposal_error: return "ProposalError";
        case error_class::missing_actions: return "MissingActions";
        case error_class::answer_error: return "AnswerError";
    }
    return "unknown";
}

std::vector<classified_error> classify_errors(const core::environment& env,
                                              const core::trajectory& traj) {
    std::vector<classified_error> out;
    core::state_key state = traj.initial_state;
    bool states_valid = true;

    for (std::size_t i = 0; i < traj.steps.size(); ++i) {
        const auto& step = traj.steps[i];
        std::vector<core::action_key> valid;
        bool state_ok = true;
        try {
            valid = env.applicable_actions(state);
        } catch (const core::unknown_state&) {
            state_ok = false;
        }
        if (state_ok) {
            if (!step.proposed.empty()) {
                std::set<core::action_key> proposed(step.proposed.begin(), step.proposed.end());
                for (const auto& a : valid) {
                    if (!proposed.count(a)) {
                        out.push_back({i, error_class::missing_actions});
                        break;
                    }
                }
            }
            if (std::find(valid.begin(), valid.end(), step.action) == valid.end()) {
                out.push_back({i, error_class::proposal_error});
                states_valid = false;
            } else {
                core::state_key expected = env.apply_action(state, step.action);
                if (expected != step.next_state) {
                    out.push_back({i, error_class::transition_error});
                    states_valid = false;
                }
            }
        }
        state = step.next_state;
    }

    if (states_valid && traj.answer && !env.check_answer(*traj.answer))
        out.push_back({traj.steps.size(), error_class::answer_error});
    return out;
}

}  // namespace planlab::engine
