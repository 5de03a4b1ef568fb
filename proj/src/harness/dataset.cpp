#include "planlab/harness/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "planlab/core/text.hpp"
#include "planlab/tasks/blocksworld.hpp"
#include "planlab/tasks/equations.hpp"
#include "planlab/tasks/game24.hpp"
#include "planlab/tasks/mwis.hpp"
#include "planlab/tasks/qa.hpp"
#include "planlab/tasks/routes.hpp"

namespace planlab::harness {

namespace {

namespace bw = tasks::blocksworld;
namespace g24 = tasks::game24;

instance_json generate_mwis(const generate_params& p, core::rng& rng, std::size_t id) {
    const int n = static_cast<int>(rng.next_int(p.size_min, p.size_max));
    std::vector<long long> input;
    input.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) input.push_back(rng.next_int(p.value_min, p.value_max));
    auto sol = tasks::mwis::dp_solve(input);
    instance_json j;
    j["schema"] = "planlab.mwis.v1";
    j["task"] = "mwis";
    j["id"] = id;
    j["input"] = input;
    j["oracle_marks"] = tasks::mwis::render_marks(sol.marks);
    j["oracle_sum"] = sol.sum;
    return j;
}

std::vector<g24::rational> random_game(core::rng& rng) {
    std::vector<g24::rational> nums;
    for (int i = 0; i < 4; ++i) nums.emplace_back(rng.next_int(1, 13));
    return g24::sorted_numbers(nums);
}

instance_json game24_record(const std::vector<g24::rational>& nums, std::size_t id) {
    instance_json j;
    j["schema"] = "planlab.game24.v1";
    j["task"] = "game24";
    j["id"] = id;
    std::vector<std::string> rendered;
    for (const auto& v : nums) rendered.push_back(v.str());
    j["numbers"] = rendered;
    j["target"] = "24";
    auto sol = g24::brute_force_solve(nums);
    j["solvable"] = sol.has_value();
    if (sol)
        j["oracle_expression"] = sol->expression;
    else
        j["oracle_expression"] = nullptr;
    return j;
}

std::vector<instance_json> generate_game24(const generate_params& p, core::rng& rng) {
    std::vector<instance_json> out;
    if (!p.hard_only) {
        std::set<std::string> seen;
        while (out.size() < p.count) {
            auto nums = random_game(rng);
            if (!seen.insert(g24::render_state(nums)).second) continue;
            if (!g24::brute_force_solve(nums)) continue;  // suite keeps solvable games
            out.push_back(game24_record(nums, out.size()));
        }
        return out;
    }
    // Hard suite: scan a fixed pool of random solvable games and keep those
    // with the fewest solution paths.
    struct candidate {
        std::vector<g24::rational> nums;
        long long paths;
    };
    std::vector<candidate> pool;
    std::set<std::string> seen;
    const std::size_t scan = std::max<std::size_t>(p.count * 20, 1000);
    while (pool.size() < scan) {
        auto nums = random_game(rng);
        if (!seen.insert(g24::render_state(nums)).second) continue;
        long long paths = g24::solution_path_count(nums);
        if (paths == 0) continue;
        pool.push_back({nums, paths});
    }
    std::stable_sort(pool.begin(), pool.end(),
                     [](const candidate& a, const candidate& b) { return a.paths < b.paths; });
    for (std::size_t i = 0; i < p.count && i < pool.size(); ++i)
        out.push_back(game24_record(pool[i].nums, i));
    return out;
}

std::string city_name(int index) {
    std::string n = std::to_string(index + 1);
    while (n.size() < 2) n = "0" + n;
    return "City " + n;
}

instance_json generate_route(const generate_params& p, core::rng& rng, std::size_t id) {
    const int n = std::max(3, static_cast<int>(rng.next_int(p.cities / 2, p.cities)));
    std::vector<std::string> cities;
    for (int i = 0; i < n; ++i) cities.push_back(city_name(i));
    std::vector<std::pair<std::string, std::string>> edges;
    std::set<std::pair<int, int>> used;
    // Random spanning tree keeps the graph connected, then sparse extras.
    for (int i = 1; i < n; ++i) {
        int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i)));
        used.insert({std::min(i, j), std::max(i, j)});
    }
    const int extras = n / 2;
    for (int e = 0; e < extras; ++e) {
        int a = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        int b = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        if (a == b) continue;
        used.insert({std::min(a, b), std::max(a, b)});
    }
    for (const auto& [a, b] : used) edges.emplace_back(cities[static_cast<std::size_t>(a)],
                                                       cities[static_cast<std::size_t>(b)]);
    tasks::routes::flight_graph graph(cities, edges, false);
    int from = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    int to = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    auto route = tasks::routes::bfs_route(graph, cities[static_cast<std::size_t>(from)],
                                          cities[static_cast<std::size_t>(to)]);

    instance_json j;
    j["schema"] = "planlab.routes.v1";
    j["task"] = "routes";
    j["id"] = id;
    j["graph"] = nlohmann::json::parse(tasks::routes::graph_to_json(graph));
    j["from"] = cities[static_cast<std::size_t>(from)];
    j["to"] = cities[static_cast<std::size_t>(to)];
    j["oracle_route"] = route ? nlohmann::json(tasks::routes::render_route(*route)) : nullptr;
    return j;
}

instance_json generate_equations(const generate_params& p, core::rng& rng, std::size_t id) {
    tasks::equations::generation_params gp;
    gp.n_variables = static_cast<std::size_t>(rng.next_int(p.size_min, p.size_max));
    gp.k_range = p.k_range;
    auto task = tasks::equations::generate_equation_task(gp, rng);
    instance_json j;
    j["schema"] = "planlab.equations.v1";
    j["task"] = "equations";
    j["id"] = id;
    j["system"] = nlohmann::json::parse(tasks::equations::system_to_json(task.system));
    j["oracle_answer"] = task.answer.str();
    return j;
}

instance_json generate_qa(const generate_params& p, core::rng& rng, std::size_t id) {
    const int hops = std::max(1, static_cast<int>(rng.next_int(std::max(1, p.hops - 1), p.hops + 1)));
    auto entity = [&](int k) { return "Entity " + std::to_string(k); };
    auto relation = [&](int k) { return "relation " + std::to_string(k); };

    std::vector<tasks::qa::triplet> triplets;
    nlohmann::json query_triplets = nlohmann::json::array();
    int next_entity = 0;
    std::string head = entity(next_entity++);
    std::string prev_slot;
    for (int h = 0; h < hops; ++h) {
        std::string rel = relation(static_cast<int>(rng.next_int(1, 6)));
        std::string tail = entity(next_entity++);
        triplets.push_back({head, rel, tail});
        std::string slot = h + 1 == hops ? "ans" : "s" + std::to_string(h + 1);
        query_triplets.push_back({h == 0 ? head : "{" + prev_slot + "}", rel, "{" + slot + "}"});
        prev_slot = slot;
        head = tail;
    }
    // Distractor triplets whose heads never collide with the chain.
    const int distractors = static_cast<int>(rng.next_int(2, 5));
    for (int d = 0; d < distractors; ++d) {
        std::string a = entity(next_entity++);
        std::string b = entity(next_entity++);
        triplets.push_back({a, relation(static_cast<int>(rng.next_int(1, 6))), b});
    }

    tasks::qa::knowledge_graph graph(triplets);
    tasks::qa::composed_query query;
    for (const auto& t : query_triplets)
        query.triplets.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
    query.answer_slot = "ans";
    auto res = tasks::qa::qa_solve(graph, query);

    instance_json j;
    j["schema"] = "planlab.qa.v1";
    j["task"] = "qa";
    j["id"] = id;
    auto trips = nlohmann::json::array();
    for (const auto& t : triplets) trips.push_back({t.head, t.relation, t.tail});
    j["triplets"] = trips;
    j["entity_aliases"] = nlohmann::json::object();
    j["relation_aliases"] = nlohmann::json::object();
    j["query"] = {{"triplets", query_triplets}, {"answer_slot", "ans"}};
    j["oracle_answer"] = res.answer;
    return j;
}

bw::state random_bw_state(int blocks, core::rng& rng) {
    std::vector<int> order;
    for (int b = 0; b < blocks; ++b) order.push_back(b);
    for (int i = blocks - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(i + 1)))]);
    bw::state s;
    std::vector<int> stack{order[0]};
    for (int i = 1; i < blocks; ++i) {
        if (rng.next_bool()) {
            s.stacks.push_back(stack);
            stack = {order[static_cast<std::size_t>(i)]};
        } else {
            stack.push_back(order[static_cast<std::size_t>(i)]);
        }
    }
    s.stacks.push_back(stack);
    s.canonicalize();
    return s;
}

instance_json generate_blocksworld(const generate_params& p, core::rng& rng, std::size_t id) {
    bw::state init = random_bw_state(p.blocks, rng);
    bw::goal_constraints goal;
    while (true) {
        std::vector<std::pair<int, int>> pairs;
        int n_pairs = static_cast<int>(rng.next_int(1, 3));
        for (int i = 0; i < n_pairs; ++i)
            pairs.emplace_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.blocks))),
                               static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.blocks))));
        try {
            goal = bw::goal_constraints::make(pairs);
            break;
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
    auto plan = bw::optimal_plan(init, goal);
    instance_json j;
    j["schema"] = "planlab.blocksworld.v1";
    j["task"] = "blocksworld";
    j["id"] = id;
    j["init"] = bw::render_state(init);
    j["goal"] = bw::render_goal(goal);
    j["oracle_plan"] = bw::render_plan(plan);
    j["oracle_length"] = plan.size();
    return j;
}

}  // namespace

std::vector<instance_json> generate_dataset(const generate_params& params) {
    core::rng rng(params.seed);
    std::vector<instance_json> out;
    if (params.task == core::task_kind::game24) return generate_game24(params, rng);
    for (std::size_t i = 0; i < params.count; ++i) {
        switch (params.task) {
            case core::task_kind::mwis: out.push_back(generate_mwis(params, rng, i)); break;
            case core::task_kind::routes: out.push_back(generate_route(params, rng, i)); break;
            case core::task_kind::equations: out.push_back(generate_equations(params, rng, i)); break;
            case core::task_kind::multihop_qa: out.push_back(generate_qa(params, rng, i)); break;
            case core::task_kind::blocksworld: out.push_back(generate_blocksworld(params, rng, i)); break;
            case core::task_kind::game24: break;  // handled above
        }
    }
    return out;
}

std::unique_ptr<core::environment> make_environment(const instance_json& instance) {
    const std::string task = instance.at("task").get<std::string>();
    try {
        if (task == "mwis")
            return tasks::mwis::make_environment(instance.at("input").get<std::vector<long long>>());
        if (task == "game24") {
            std::vector<g24::rational> nums;
            for (const auto& s : instance.at("numbers"))
                nums.push_back(g24::rational::parse(s.get<std::string>()));
            return g24::make_environment(nums, g24::rational::parse(instance.at("target").get<std::string>()));
        }
        if (task == "routes") {
            auto graph = tasks::routes::ingest_graph(instance.at("graph").dump());
            return tasks::routes::make_environment(std::move(graph),
                                                   instance.at("from").get<std::string>(),
                                                   instance.at("to").get<std::string>());
        }
        if (task == "equations") {
            auto system = tasks::equations::system_from_json(instance.at("system").dump());
            return tasks::equations::make_environment(std::move(system));
        }
        if (task == "qa") {
            std::vector<tasks::qa::triplet> triplets;
            for (const auto& t : instance.at("triplets"))
                triplets.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
            std::map<std::string, std::string> entity_aliases, relation_aliases;
            for (auto it = instance.at("entity_aliases").begin(); it != instance.at("entity_aliases").end(); ++it)
                entity_aliases[it.key()] = it.value().get<std::string>();
            for (auto it = instance.at("relation_aliases").begin();
                 it != instance.at("relation_aliases").end(); ++it)
                relation_aliases[it.key()] = it.value().get<std::string>();
            tasks::qa::composed_query query;
            for (const auto& t : instance.at("query").at("triplets"))
                query.triplets.push_back(
                    {t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
            query.answer_slot = instance.at("query").at("answer_slot").get<std::string>();
            return tasks::qa::make_environment(
                tasks::qa::knowledge_graph(std::move(triplets), entity_aliases, relation_aliases),
                std::move(query));
        }
        if (task == "blocksworld") {
            auto init = bw::parse_state(instance.at("init").get<std::string>());
            auto goal = bw::parse_goal(instance.at("goal").get<std::string>());
            return bw::make_environment(std::move(init), std::move(goal));
        }
    } catch (const nlohmann::json::exception& e) {
        throw data_error("bad instance record: " + std::string(e.what()));
    }
    throw data_error("unknown task in instance record: " + task);
}

void verify_instance(const instance_json& instance) {
    auto env = make_environment(instance);
    const std::string task = instance.at("task").get<std::string>();
    if (task == "game24" && !instance.at("solvable").get<bool>()) return;
    auto traj = env->oracle_trajectory();
    auto verdict = core::validate_trajectory(*env, traj);
    if (!verdict.valid)
        throw data_error("oracle trajectory fails validation for instance " +
                         std::to_string(instance.at("id").get<long long>()));
    if (!traj.answer || !env->check_answer(*traj.answer))
        throw data_error("oracle answer fails the verifier for instance " +
                         std::to_string(instance.at("id").get<long long>()));
}

std::string to_jsonl(const std::vector<instance_json>& instances) {
    std::string out;
    for (const auto& j : instances) out += j.dump() + "\n";
    return out;
}

std::vector<instance_json> from_jsonl(const std::string& text) {
    std::vector<instance_json> out;
    for (const auto& line : core::split(text, "\n")) {
        if (core::trim(line).empty()) continue;
        out.push_back(nlohmann::json::parse(line));
    }
    return out;
}

std::vector<instance_json> load_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open dataset: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_jsonl(text);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write file: " + path);
    out << content;
}

}  // namespace planlab::harness
