#include "planlab/harness/runner.hpp"

#include <chrono>
#include <map>
#include <set>

#include "planlab/core/text.hpp"
#include "planlab/engine/evaluator.hpp"
#include "planlab/tasks/game24.hpp"

namespace planlab::harness {

namespace {

constexpr std::uint64_t fnv_offset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t fnv_prime = 0x100000001b3ULL;

std::string fnv_hex(const std::string& text) {
    std::uint64_t h = fnv_offset;
    for (unsigned char c : text) {
        h ^= c;
        h *= fnv_prime;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

nlohmann::json run_config::to_json() const {
    nlohmann::json j;
    j["schema"] = "planlab.config.v1";
    j["dataset"] = dataset_path;
    j["mode"] = mode;
    j["search"] = {{"beam_width", search.beam_width},
                   {"max_depth", search.max_depth},
                   {"sc_samples", search.sc_samples},
                   {"seed", search.seed}};
    j["epsilon"] = epsilon;
    j["train"] = {{"instances", train_instances}, {"seed", train_seed}};
    j["proposer"] = proposer;
    j["parallel"] = parallel;
    j["output"] = output;
    return j;
}

run_config run_config::from_json(const nlohmann::json& j) {
    run_config c;
    c.dataset_path = j.value("dataset", "");
    c.mode = j.value("mode", "oracle");
    if (j.contains("search")) {
        const auto& s = j.at("search");
        c.search.beam_width = s.value("beam_width", std::size_t{5});
        c.search.max_depth = s.value("max_depth", std::size_t{16});
        c.search.sc_samples = s.value("sc_samples", std::size_t{1});
        c.search.seed = s.value("seed", std::uint64_t{0});
    }
    c.epsilon = j.value("epsilon", 0.0);
    if (j.contains("train")) {
        c.train_instances = j.at("train").value("instances", std::size_t{0});
        c.train_seed = j.at("train").value("seed", std::uint64_t{0});
    }
    c.proposer = j.value("proposer", "oracle");
    c.parallel = j.value("parallel", true);
    c.output = j.value("output", "");
    return c;
}

std::string run_config::hash() const { return fnv_hex(to_json().dump()); }

std::string outcome_name(outcome o) {
    switch (o) {
        case outcome::correct: return "correct";
        case outcome::incorrect: return "incorrect";
        case outcome::abstain: return "abstain";
    }
    return "unknown";
}

nlohmann::json trajectory_to_json(const core::trajectory& traj) {
    nlohmann::json j;
    j["initial"] = traj.initial_state;
    auto steps = nlohmann::json::array();
    for (const auto& s : traj.steps) {
        nlohmann::json step;
        step["action"] = s.action;
        step["next"] = s.next_state;
        step["proposed"] = s.proposed;
        steps.push_back(step);
    }
    j["steps"] = steps;
    if (traj.answer)
        j["answer"] = *traj.answer;
    else
        j["answer"] = nullptr;
    return j;
}

core::trajectory trajectory_from_json(const nlohmann::json& j) {
    core::trajectory traj;
    traj.initial_state = j.at("initial").get<std::string>();
    for (const auto& s : j.at("steps")) {
        core::trajectory_step step;
        step.action = s.at("action").get<std::string>();
        step.next_state = s.at("next").get<std::string>();
        step.proposed = s.at("proposed").get<std::vector<std::string>>();
        traj.steps.push_back(std::move(step));
    }
    if (!j.at("answer").is_null()) traj.answer = j.at("answer").get<std::string>();
    return traj;
}

nlohmann::json run_record::to_json() const {
    nlohmann::json j;
    j["schema"] = "planlab.run.v1";
    j["config_hash"] = config_hash;
    j["instance_id"] = instance_id;
    j["outcome"] = outcome_name(result);
    if (answer)
        j["answer"] = *answer;
    else
        j["answer"] = nullptr;
    j["error_classes"] = error_classes;
    j["trajectory"] = trajectory_to_json(traj);
    j["wall_ms"] = wall_ms;
    return j;
}

std::optional<std::string> oracle_predictor::predict(const std::string& key) const {
    const std::string task = core::task_kind_name(env_.kind());
    const std::string propose_prefix = "propose|" + task + "|";
    const std::string trans_prefix = "trans|" + task + "|";
    if (core::starts_with(key, propose_prefix)) {
        core::state_key state = key.substr(propose_prefix.size());
        try {
            return core::join(env_.applicable_actions(state), "\n");
        } catch (const core::unknown_state&) {
            return std::nullopt;
        }
    }
    if (core::starts_with(key, trans_prefix)) {
        // trans|<task>|<state>|<action>; the state itself never contains '|'
        // for tasks routed through this oracle.
        auto rest = key.substr(trans_prefix.size());
        auto bar = rest.rfind('|');
        if (bar == std::string::npos) return std::nullopt;
        try {
            return env_.apply_action(rest.substr(0, bar), rest.substr(bar + 1));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

learners::tabular_predictor train_demo_predictor(const std::vector<instance_json>& demos,
                                                 bool decomposed_proposals) {
    learners::tabular_predictor table;
    // Demonstrations can disagree on a key (two games sharing a state but
    // solved differently); the first demonstration wins, deterministically.
    auto insert = [&table](const std::string& k, const std::string& v) {
        try {
            table.insert(k, v);
        } catch (const learners::conflicting_examples&) {
        }
    };
    for (const auto& demo : demos) {
        auto env = make_environment(demo);
        core::trajectory traj;
        try {
            traj = env->oracle_trajectory();
        } catch (const std::exception&) {
            continue;  // unsolvable demo contributes nothing
        }
        if (traj.answer) insert(engine::direct_key(*env), *traj.answer);
        core::state_key state = traj.initial_state;
        for (const auto& step : traj.steps) {
            insert(engine::policy_key(*env, state), step.action);
            insert(engine::transition_key(*env, state, step.action), step.next_state);
            if (decomposed_proposals && env->kind() == core::task_kind::game24) {
                // Stage tables: operator expansions keyed on the value pair,
                // reusable across states.
                auto nums = tasks::game24::parse_state(state);
                for (const auto& pair : tasks::game24::propose_pairs(nums)) {
                    std::vector<std::string> acts;
                    for (const auto& a : tasks::game24::propose_actions_for_pair(nums, pair))
                        acts.push_back(a.render());
                    insert("g24ops|" + nums[pair.i].str() + "|" + nums[pair.j].str(),
                           core::join(acts, "\n"));
                }
            } else {
                insert(engine::proposal_key(*env, state), core::join(step.proposed, "\n"));
            }
            state = step.next_state;
        }
    }
    return table;
}

namespace {

// Rebuilds joint proposals from learned per-pair operator tables.
class decomposed_g24_proposer final : public engine::predictor {
public:
    explicit decomposed_g24_proposer(const learners::tabular_predictor& table) : table_(table) {}

    std::optional<std::string> predict(const std::string& key) const override {
        const std::string prefix = "propose|game24|";
        if (!core::starts_with(key, prefix)) return table_.predict(key);
        std::vector<tasks::game24::rational> nums;
        try {
            nums = tasks::game24::parse_state(key.substr(prefix.size()));
        } catch (const std::exception&) {
            return std::nullopt;
        }
        std::set<std::string> actions;
        bool any = false;
        for (const auto& pair : tasks::game24::propose_pairs(nums)) {
            auto ops = table_.predict("g24ops|" + nums[pair.i].str() + "|" + nums[pair.j].str());
            if (!ops) continue;
            any = true;
            for (const auto& a : core::split(*ops, "\n")) actions.insert(a);
        }
        if (!any) return std::nullopt;
        return core::join({actions.begin(), actions.end()}, "\n");
    }

private:
    const learners::tabular_predictor& table_;
};

run_record run_instance(const run_config& config, const instance_json& instance,
                        const learners::tabular_predictor& trained) {
    run_record rec;
    rec.config_hash = config.hash();
    rec.instance_id = instance.at("id").get<std::size_t>();
    const auto t0 = std::chrono::steady_clock::now();

    auto env = make_environment(instance);
    engine::search_config search = config.search;
    search.seed = core::derive_seed(config.search.seed, rec.instance_id);

    try {
        if (config.mode == "oracle") {
            rec.traj = env->oracle_trajectory();
            rec.answer = rec.traj.answer;
        } else if (config.mode == "direct") {
            rec.answer = engine::run_direct(trained, *env).answer;
        } else if (config.mode == "cot") {
            auto res = engine::run_cot(trained, *env, search);
            rec.traj = res.traj;
            rec.answer = res.answer;
        } else if (config.mode == "cot-sc") {
            auto res = engine::run_cot_sc(trained, *env, search);
            rec.answer = res.answer;
        } else if (config.mode == "tot" || config.mode == "tot-decomp") {
            engine::noisy_oracle_evaluator eval(config.epsilon,
                                                core::derive_seed(search.seed, 0xe5a1), 24);
            oracle_predictor live(*env);
            decomposed_g24_proposer decomposed(trained);
            const engine::predictor* proposer = &live;
            if (config.proposer == "trained")
                proposer = config.mode == "tot-decomp"
                               ? static_cast<const engine::predictor*>(&decomposed)
                               : static_cast<const engine::predictor*>(&trained);
            auto res = engine::run_tot(*proposer, eval, *env, search);
            rec.traj = res.traj;
            rec.answer = res.reached_goal ? res.answer : std::nullopt;
        } else {
            throw data_error("unknown mode: " + config.mode);
        }
    } catch (const data_error&) {
        throw;
    } catch (const std::exception&) {
        // Partial failures stay per-instance; the batch keeps going.
        rec.result = outcome::abstain;
    }

    if (rec.answer)
        rec.result = env->check_answer(*rec.answer) ? outcome::correct : outcome::incorrect;
    else
        rec.result = outcome::abstain;

    if (!rec.traj.steps.empty() || !rec.traj.initial_state.empty()) {
        for (const auto& err : engine::classify_errors(*env, rec.traj))
            rec.error_classes.push_back(engine::error_class_name(err.kind) + "@" +
                                        std::to_string(err.step_index));
    }

    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

}  // namespace

batch_result run_batch(const run_config& config, const std::vector<instance_json>& instances) {
    learners::tabular_predictor trained;
    if (config.mode != "oracle" && config.train_instances > 0) {
        generate_params demo_params;
        demo_params.task = core::task_kind_from_name(instances.empty()
                                                         ? std::string("mwis")
                                                         : instances.front().at("task").get<std::string>());
        demo_params.count = config.train_instances;
        demo_params.seed = config.train_seed;
        trained = train_demo_predictor(generate_dataset(demo_params), config.mode == "tot-decomp");
    }

    std::vector<run_record> records(instances.size());
#if defined(PLANLAB_HAVE_OPENMP)
    if (config.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(instances.size()); ++i)
            records[static_cast<std::size_t>(i)] =
                run_instance(config, instances[static_cast<std::size_t>(i)], trained);
    } else
#endif
    {
        for (std::size_t i = 0; i < instances.size(); ++i)
            records[i] = run_instance(config, instances[i], trained);
    }

    std::size_t correct = 0, incorrect = 0, abstain = 0;
    std::map<std::string, std::size_t> error_histogram;
    double wall_total = 0.0;
    for (const auto& r : records) {
        if (r.result == outcome::correct) ++correct;
        if (r.result == outcome::incorrect) ++incorrect;
        if (r.result == outcome::abstain) ++abstain;
        for (const auto& e : r.error_classes)
            error_histogram[e.substr(0, e.find('@'))] += 1;
        wall_total += r.wall_ms;
    }

    batch_result res;
    res.records = std::move(records);
    res.summary["schema"] = "planlab.summary.v1";
    res.summary["config_hash"] = config.hash();
    res.summary["mode"] = config.mode;
    res.summary["instances"] = instances.size();
    res.summary["accuracy"] =
        instances.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(instances.size());
    res.summary["abstain_rate"] =
        instances.empty() ? 0.0 : static_cast<double>(abstain) / static_cast<double>(instances.size());
    res.summary["incorrect"] = incorrect;
    res.summary["error_histogram"] = error_histogram;
    res.summary["mean_wall_ms"] =
        instances.empty() ? 0.0 : wall_total / static_cast<double>(instances.size());
    return res;
}

}  // namespace planlab::harness
