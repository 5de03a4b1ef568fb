#include "planlab/harness/trace.hpp"

#include "planlab/core/text.hpp"
#include "planlab/tasks/blocksworld.hpp"
#include "planlab/tasks/equations.hpp"
#include "planlab/tasks/game24.hpp"
#include "planlab/tasks/mwis.hpp"
#include "planlab/tasks/qa.hpp"
#include "planlab/tasks/routes.hpp"

namespace planlab::harness {

namespace {

std::string game24_trace(const instance_json& instance) {
    namespace g24 = tasks::game24;
    std::vector<g24::rational> nums;
    for (const auto& s : instance.at("numbers")) nums.push_back(g24::rational::parse(s.get<std::string>()));
    nums = g24::sorted_numbers(nums);
    auto target = g24::rational::parse(instance.at("target").get<std::string>());
    auto sol = g24::brute_force_solve(nums, target);
    std::string out = "Input: " + g24::render_state_display(nums) + "\n";
    if (!sol) return out + "Answer: None.\n";
    out += "Steps:\n";
    auto current = nums;
    for (const auto& step : sol->steps) {
        // Recompute the remainder to render the "(left: ...)" tail.
        std::vector<g24::rational> next;
        bool took_a = false, took_b = false;
        for (const auto& v : current) {
            if (!took_a && v == step.act.a) {
                took_a = true;
            } else if (!took_b && v == step.act.b) {
                took_b = true;
            } else {
                next.push_back(v);
            }
        }
        next.push_back(step.act.result());
        next = g24::sorted_numbers(next);
        out += step.act.render_display() + " (left: " + g24::render_state_display(next) + ")\n";
        current = next;
    }
    out += "Answer: " + sol->expression + " = " + target.str_rounded2() + "\n";
    return out;
}

std::string blocksworld_trace(const instance_json& instance) {
    namespace bw = tasks::blocksworld;
    auto init = bw::parse_state(instance.at("init").get<std::string>());
    auto goal = bw::parse_goal(instance.at("goal").get<std::string>());
    auto plan = bw::optimal_plan(init, goal);
    std::string out = "Initial state: " + bw::render_state(init) + "\n";
    out += "Goal: " + bw::render_goal(goal) + "\n";
    out += bw::render_plan(plan) + "\n";
    bw::state s = init;
    for (const auto& a : plan) {
        s = bw::apply(s, a);
        if (!s.holding) out += "State: " + bw::render_state(s) + "\n";
    }
    return out;
}

std::string qa_trace(const instance_json& instance) {
    std::vector<tasks::qa::triplet> triplets;
    for (const auto& t : instance.at("triplets"))
        triplets.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
    tasks::qa::composed_query query;
    for (const auto& t : instance.at("query").at("triplets"))
        query.triplets.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
    query.answer_slot = instance.at("query").at("answer_slot").get<std::string>();
    tasks::qa::knowledge_graph graph(triplets);
    auto res = tasks::qa::qa_solve(graph, query);
    std::string out;
    for (const auto& step : res.steps)
        out += "(" + step.matched.head + ", " + step.matched.relation + ", " + step.matched.tail +
               ") => " + step.slot + " = " + step.entity + "\n";
    out += "The answer is " + res.answer + ".\n";
    return out;
}

}  // namespace

std::string emit_instance_trace(const instance_json& instance, const std::string& style) {
    const std::string task = instance.at("task").get<std::string>();
    if (task == "mwis") {
        auto input = instance.at("input").get<std::vector<long long>>();
        auto s = style == "explicit" ? tasks::mwis::trace_style::explicit_values
                                     : tasks::mwis::trace_style::implicit;
        return tasks::mwis::emit_trace(input, s);
    }
    if (task == "routes") {
        auto graph = tasks::routes::ingest_graph(instance.at("graph").dump());
        auto trace = tasks::routes::emit_tot_linear_trace(graph, instance.at("from").get<std::string>(),
                                                          instance.at("to").get<std::string>());
        return trace.text();
    }
    if (task == "game24") return game24_trace(instance);
    if (task == "equations")
        return tasks::equations::emit_cot_trace(
            tasks::equations::system_from_json(instance.at("system").dump()));
    if (task == "blocksworld") return blocksworld_trace(instance);
    if (task == "qa") return qa_trace(instance);
    throw data_error("no trace emitter for task: " + task);
}

}  // namespace planlab::harness
