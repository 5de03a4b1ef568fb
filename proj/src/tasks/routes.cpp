#include "planlab/tasks/routes.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>

#include "json.hpp"
#include "planlab/core/text.hpp"

namespace planlab::tasks::routes {

namespace {

std::string render_list(const std::vector<std::string>& items) {
    return "[" + core::join(items, ", ") + "]";
}

std::string render_path(const std::vector<std::string>& path) { return core::join(path, "-"); }

}  // namespace

flight_graph::flight_graph(std::vector<std::string> cities,
                           const std::vector<std::pair<std::string, std::string>>& edges,
                           bool directed)
    : cities_(std::move(cities)), directed_(directed) {
    std::sort(cities_.begin(), cities_.end());
    if (std::adjacent_find(cities_.begin(), cities_.end()) != cities_.end())
        throw schema_error("duplicate city declaration");
    for (const auto& c : cities_) adjacency_[c];
    for (const auto& [a, b] : edges) {
        if (!adjacency_.count(a)) throw unknown_city(a + " (in edge)");
        if (!adjacency_.count(b)) throw unknown_city(b + " (in edge)");
        if (a == b) throw schema_error("self-loop on " + a);
        adjacency_[a].push_back(b);
        if (!directed_) adjacency_[b].push_back(a);
    }
    for (auto& [_, nbrs] : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
}

const std::vector<std::string>& flight_graph::neighbors(const std::string& city) const {
    auto it = adjacency_.find(city);
    if (it == adjacency_.end()) throw unknown_city(city);
    return it->second;
}

flight_graph ingest_graph(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw schema_error(std::string("graph is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("cities") || !j.contains("edges"))
        throw schema_error("graph needs 'cities' and 'edges'");
    std::vector<std::string> cities;
    for (const auto& c : j.at("cities")) {
        if (!c.is_string()) throw schema_error("city names must be strings");
        cities.push_back(c.get<std::string>());
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw schema_error("edges must be [a, b] pairs");
        edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    bool directed = j.value("directed", false);
    return {std::move(cities), edges, directed};
}

flight_graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open graph file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return ingest_graph(text);
}

std::string graph_to_json(const flight_graph& graph) {
    nlohmann::json j;
    j["cities"] = graph.cities();
    auto edges = nlohmann::json::array();
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& c : graph.cities()) {
        for (const auto& n : graph.neighbors(c)) {
            std::pair<std::string, std::string> key =
                graph.directed() ? std::make_pair(c, n) : std::make_pair(std::min(c, n), std::max(c, n));
            if (seen.insert(key).second) edges.push_back(nlohmann::json::array({key.first, key.second}));
        }
    }
    j["edges"] = edges;
    j["directed"] = graph.directed();
    return j.dump();
}

std::optional<std::vector<std::string>> bfs_route(const flight_graph& graph,
                                                  const std::string& from, const std::string& to) {
    if (!graph.has_city(from)) throw unknown_city(from);
    if (!graph.has_city(to)) throw unknown_city(to);
    if (from == to) return std::vector<std::string>{from};
    std::deque<std::vector<std::string>> queue;
    std::set<std::string> seen{from};
    queue.push_back({from});
    while (!queue.empty()) {
        auto path = queue.front();
        queue.pop_front();
        for (const auto& next : graph.neighbors(path.back())) {
            if (seen.count(next)) continue;
            auto extended = path;
            extended.push_back(next);
            if (next == to) return extended;
            seen.insert(next);
            queue.push_back(std::move(extended));
        }
    }
    return std::nullopt;
}

std::string bfs_trace::text() const { return core::join(lines, "\n") + "\n"; }

bfs_trace emit_tot_linear_trace(const flight_graph& graph, const std::string& from,
                                const std::string& to) {
    if (!graph.has_city(from)) throw unknown_city(from);
    if (!graph.has_city(to)) throw unknown_city(to);

    bfs_trace trace;
    std::deque<std::vector<std::string>> queue;
    queue.push_back({from});
    std::set<std::string> explored_set;
    bool first = true;

    auto queue_render = [&]() {
        std::vector<std::string> paths;
        for (const auto& p : queue) paths.push_back(render_path(p));
        return render_list(paths);
    };

    while (!queue.empty()) {
        auto path = queue.front();
        if (first)
            trace.lines.push_back("The queue is " + queue_render() + ". Take the first path, " +
                                  render_path(path) + ", from the queue.");
        else
            trace.lines.push_back("Take the first path, " + render_path(path) + ", from the queue.");
        first = false;
        queue.pop_front();
        const std::string& current = path.back();

        explored_set.insert(current);
        trace.explored.push_back(current);
        trace.lines.push_back("The current city is " + current +
                              ", which is not in the explored list. Thus, put the current city "
                              "into the explored list. The explored list is " +
                              render_list(trace.explored));

        // Degenerate query: the start is already the goal.
        if (current == to) {
            trace.lines.push_back("The goal city is " + to + ". Since " + to +
                                  " is in the found, and the current selected path is " +
                                  render_path(path) + ", the route is " + render_path(path) + ".");
            trace.route = path;
            trace.lines.push_back("Answer: " + render_path(trace.route));
            return trace;
        }

        std::set<std::string> frontier;
        for (const auto& p : queue) frontier.insert(p.back());
        std::vector<std::string> proposals;
        for (const auto& next : graph.neighbors(current))
            if (!explored_set.count(next) && !frontier.count(next)) proposals.push_back(next);

        trace.lines.push_back("The current city is " + current + " and the goal is " + to +
                              ". For the next step, the promising cities to go to are " +
                              render_list(proposals) + ".");

        if (std::find(proposals.begin(), proposals.end(), to) != proposals.end()) {
            auto route = path;
            route.push_back(to);
            trace.lines.push_back("The goal city is " + to + ". Since " + to +
                                  " is in the found, and the current selected path is " +
                                  render_path(path) + ", the route is " + render_path(route) + ".");
            trace.route = route;
            trace.lines.push_back("Answer: " + render_path(route));
            return trace;
        }

        for (const auto& next : proposals) {
            auto extended = path;
            extended.push_back(next);
            queue.push_back(std::move(extended));
        }
        trace.lines.push_back("Puting those cities into the queue. The queue is " + queue_render() +
                              ".");
        std::vector<std::string> snapshot;
        for (const auto& p : queue) snapshot.push_back(render_path(p));
        trace.queue_snapshots.push_back(snapshot);
    }
    throw no_route(from, to);
}

namespace {

std::optional<std::vector<std::string>> bracket_list(const std::string& line) {
    auto open = line.find('[');
    auto close = line.rfind(']');
    if (open == std::string::npos || close == std::string::npos || close < open) return std::nullopt;
    std::string body = line.substr(open + 1, close - open - 1);
    if (body.empty()) return std::vector<std::string>{};
    return core::split(body, ", ");
}

}  // namespace

bool replay_trace(const flight_graph& graph, const bfs_trace& trace) {
    std::deque<std::vector<std::string>> queue;
    std::vector<std::string> explored;
    std::vector<std::string> last_proposals;
    std::vector<std::string> current_path;
    std::vector<std::string> claimed_route;
    bool started = false;

    auto in_explored = [&](const std::string& c) {
        return std::find(explored.begin(), explored.end(), c) != explored.end();
    };

    for (const auto& line : trace.lines) {
        if (core::starts_with(line, "The queue is ") && line.find("Take the first path") != std::string::npos) {
            auto open = line.find('[');
            auto close = line.find(']');
            auto initial = core::split(line.substr(open + 1, close - open - 1), ", ");
            if (started || initial.size() != 1) return false;
            queue.push_back({initial[0]});
            started = true;
            auto tag = line.find("Take the first path, ");
            auto end = line.find(", from the queue.");
            std::string taken = line.substr(tag + 21, end - tag - 21);
            if (queue.empty() || render_path(queue.front()) != taken) return false;
            current_path = queue.front();
            queue.pop_front();
        } else if (core::starts_with(line, "Take the first path, ")) {
            auto end = line.find(", from the queue.");
            std::string taken = line.substr(21, end - 21);
            if (queue.empty() || render_path(queue.front()) != taken) return false;  // FIFO
            current_path = queue.front();
            queue.pop_front();
        } else if (line.find("put the current city into the explored list") != std::string::npos) {
            const std::string& city = current_path.back();
            if (in_explored(city)) return false;  // explored list is append-only, no repeats
            explored.push_back(city);
            auto claimed = bracket_list(line);
            if (!claimed || *claimed != explored) return false;
        } else if (line.find("the promising cities to go to are") != std::string::npos) {
            auto claimed = bracket_list(line);
            if (!claimed) return false;
            std::set<std::string> frontier;
            for (const auto& p : queue) frontier.insert(p.back());
            const auto& nbrs = graph.neighbors(current_path.back());
            std::vector<std::string> expect;
            for (const auto& n : nbrs)
                if (!in_explored(n) && !frontier.count(n)) expect.push_back(n);
            if (*claimed != expect) return false;
            last_proposals = *claimed;
        } else if (core::starts_with(line, "Puting those cities into the queue.")) {
            for (const auto& c : last_proposals) {
                auto extended = current_path;
                extended.push_back(c);
                queue.push_back(extended);
            }
            auto claimed = bracket_list(line);
            if (!claimed) return false;
            std::vector<std::string> actual;
            for (const auto& p : queue) actual.push_back(render_path(p));
            if (*claimed != actual) return false;
        } else if (core::starts_with(line, "The goal city is ")) {
            auto tag = line.find("the route is ");
            if (tag == std::string::npos) return false;
            std::string route_text = line.substr(tag + 13);
            if (!route_text.empty() && route_text.back() == '.') route_text.pop_back();
            claimed_route = core::split(route_text, "-");
            bool goal_is_current = current_path.back() == claimed_route.back();
            bool goal_proposed = std::find(last_proposals.begin(), last_proposals.end(),
                                           claimed_route.back()) != last_proposals.end();
            if (!goal_is_current && !goal_proposed) return false;
            auto expect = current_path;
            if (!goal_is_current) expect.push_back(claimed_route.back());
            if (claimed_route != expect) return false;
        } else if (core::starts_with(line, "Answer: ")) {
            if (render_path(claimed_route) != line.substr(8)) return false;
        } else {
            return false;  // unrecognized line
        }
    }
    if (claimed_route.empty() || claimed_route != trace.route) return false;
    auto oracle = bfs_route(graph, trace.route.front(), trace.route.back());
    return oracle && *oracle == trace.route;
}

std::optional<std::vector<std::string>> parse_route(const std::string& text) {
    std::string body = core::trim(text);
    if (core::starts_with(body, "Answer:")) body = core::trim(body.substr(7));
    if (!body.empty() && body.back() == '.') body = core::trim(body.substr(0, body.size() - 1));
    if (body.empty()) throw malformed_route("empty route text");
    if (body == "None") return std::nullopt;
    auto cities = core::split(body, "-");
    for (const auto& c : cities)
        if (core::trim(c).empty()) throw malformed_route("empty city in route: " + text);
    return cities;
}

std::string render_route(const std::vector<std::string>& route) { return render_path(route); }

// =====================
// environment adapter
// =====================

namespace {

class routes_env final : public core::environment {
public:
    routes_env(flight_graph graph, std::string from, std::string to)
        : graph_(std::move(graph)), from_(std::move(from)), to_(std::move(to)) {
        if (!graph_.has_city(from_)) throw unknown_city(from_);
        if (!graph_.has_city(to_)) throw unknown_city(to_);
    }

    core::task_kind kind() const override { return core::task_kind::routes; }

    core::state_key initial_state() const override { return from_; }

    std::vector<core::action_key> applicable_actions(const core::state_key& state) const override {
        auto path = parse_checked(state);
        std::vector<core::action_key> out;
        for (const auto& n : graph_.neighbors(path.back()))
            if (std::find(path.begin(), path.end(), n) == path.end()) out.push_back(n);
        return out;
    }

    core::state_key apply_action(const core::state_key& state, const core::action_key& action) const override {
        auto path = parse_checked(state);
        const auto& nbrs = graph_.neighbors(path.back());
        if (std::find(nbrs.begin(), nbrs.end(), action) == nbrs.end())
            throw core::inapplicable_action(action, "a direct flight from " + path.back());
        if (std::find(path.begin(), path.end(), action) != path.end())
            throw core::inapplicable_action(action, "a city not already on the path");
        return state + "-" + action;
    }

    bool is_goal(const core::state_key& state) const override {
        return parse_checked(state).back() == to_;
    }

    std::string problem_key() const override { return "routes|" + from_ + "|" + to_; }

    std::string goal_text() const override { return "reach " + to_; }

    std::string policy_observation(const core::state_key& state) const override {
        // The next-hop table keys on (current city, goal), not the whole path.
        return parse_checked(state).back();
    }

    std::optional<std::string> extract_answer(const core::trajectory& traj) const override {
        auto path = parse_checked(traj.final_state());
        if (path.back() != to_) return std::nullopt;
        return render_path(path);
    }

    bool check_answer(const std::string& answer) const override {
        std::optional<std::vector<std::string>> route;
        try {
            route = parse_route(answer);
        } catch (const malformed_route&) {
            return false;
        }
        if (!route) return !bfs_route(graph_, from_, to_).has_value();
        if (route->front() != from_ || route->back() != to_) return false;
        for (std::size_t i = 0; i + 1 < route->size(); ++i) {
            if (!graph_.has_city((*route)[i])) return false;
            const auto& nbrs = graph_.neighbors((*route)[i]);
            if (std::find(nbrs.begin(), nbrs.end(), (*route)[i + 1]) == nbrs.end()) return false;
        }
        return true;
    }

    core::trajectory oracle_trajectory() const override {
        auto route = bfs_route(graph_, from_, to_);
        if (!route) throw std::runtime_error("no route from " + from_ + " to " + to_);
        core::trajectory traj;
        traj.initial_state = initial_state();
        core::state_key state = traj.initial_state;
        for (std::size_t i = 1; i < route->size(); ++i) {
            auto proposals = applicable_actions(state);
            core::state_key next = apply_action(state, (*route)[i]);
            traj.steps.push_back({(*route)[i], next, proposals});
            state = next;
        }
        traj.answer = render_path(*route);
        return traj;
    }

private:
    std::vector<std::string> parse_checked(const core::state_key& state) const {
        if (state.empty()) throw core::unknown_state("empty route state");
        auto path = core::split(state, "-");
        std::set<std::string> seen;
        if (path.front() != from_) throw core::unknown_state("path must start at " + from_);
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (!graph_.has_city(path[i])) throw core::unknown_state("unknown city on path: " + path[i]);
            if (!seen.insert(path[i]).second) throw core::unknown_state("path revisits " + path[i]);
            if (i > 0) {
                const auto& nbrs = graph_.neighbors(path[i - 1]);
                if (std::find(nbrs.begin(), nbrs.end(), path[i]) == nbrs.end())
                    throw core::unknown_state("path uses a missing edge " + path[i - 1] + "-" + path[i]);
            }
        }
        return path;
    }

    flight_graph graph_;
    std::string from_;
    std::string to_;
};

}  // namespace

std::unique_ptr<core::environment> make_environment(flight_graph graph, std::string from,
                                                    std::string to) {
    return std::make_unique<routes_env>(std::move(graph), std::move(from), std::move(to));
}

}  // namespace planlab::tasks::routes
