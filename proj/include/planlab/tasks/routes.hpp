#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "planlab/core/environment.hpp"

namespace planlab::tasks::routes {

struct unknown_city : std::runtime_error {
    explicit unknown_city(const std::string& name) : std::runtime_error("unknown city: " + name) {}
};

struct no_route : std::runtime_error {
    no_route(const std::string& from, const std::string& to)
        : std::runtime_error("no route from " + from + " to " + to) {}
};

struct malformed_route : std::runtime_error {
    explicit malformed_route(const std::string& what) : std::runtime_error(what) {}
};

struct schema_error : std::runtime_error {
    explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

// City adjacency; neighbor lists are kept sorted and duplicate-free, edges
// undirected unless declared directed, self-loops rejected.
class flight_graph {
public:
    flight_graph() = default;
    flight_graph(std::vector<std::string> cities,
                 const std::vector<std::pair<std::string, std::string>>& edges, bool directed = false);

    [[nodiscard]] const std::vector<std::string>& cities() const { return cities_; }
    [[nodiscard]] bool directed() const { return directed_; }
    [[nodiscard]] bool has_city(const std::string& name) const { return adjacency_.count(name) > 0; }
    [[nodiscard]] const std::vector<std::string>& neighbors(const std::string& city) const;

private:
    std::vector<std::string> cities_;
    std::map<std::string, std::vector<std::string>> adjacency_;
    bool directed_{false};
};

// Loads the documented JSON schema {"cities": [...], "edges": [[a,b],...],
// "directed": bool}; throws schema_error / unknown_city on violations.
flight_graph ingest_graph(const std::string& json_text);
flight_graph load_graph(const std::string& path);
std::string graph_to_json(const flight_graph& graph);

// Shortest route by hop count; neighbor expansion in lexicographic order;
// from == to yields the single-city route.
std::optional<std::vector<std::string>> bfs_route(const flight_graph& graph,
                                                  const std::string& from, const std::string& to);

// Line-by-line linearization of the BFS run (queue of full paths, explored
// list). The line templates are normative.
struct bfs_trace {
    std::vector<std::string> lines;
    std::vector<std::vector<std::string>> queue_snapshots;  // after each enqueue block
    std::vector<std::string> explored;                      // append order
    std::vector<std::string> route;

    [[nodiscard]] std::string text() const;
};

bfs_trace emit_tot_linear_trace(const flight_graph& graph, const std::string& from,
                                const std::string& to);

// Replays a trace's lines as a queue/explored state machine against the
// graph; false when any line breaks FIFO order, re-explores a city, proposes
// a non-neighbor, or the final answer does not follow from the run.
bool replay_trace(const flight_graph& graph, const bfs_trace& trace);

// "Dublin-London-Sydney." -> the 3 cities; "None." -> nullopt.
std::optional<std::vector<std::string>> parse_route(const std::string& text);

std::string render_route(const std::vector<std::string>& route);

std::unique_ptr<core::environment> make_environment(flight_graph graph, std::string from,
                                                    std::string to);

}  // namespace planlab::tasks::routes
