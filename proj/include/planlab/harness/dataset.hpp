#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "planlab/core/environment.hpp"
#include "planlab/core/rng.hpp"

namespace planlab::harness {

struct data_error : std::runtime_error {
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// One dataset line: a task instance with its oracle answer embedded.
using instance_json = nlohmann::json;

struct generate_params {
    core::task_kind task{core::task_kind::mwis};
    std::size_t count{100};
    std::uint64_t seed{0};
    // task-specific knobs (defaults follow the desk-scale suite)
    int size_min{4};
    int size_max{6};
    long long value_min{-100};
    long long value_max{100};
    int blocks{4};
    int cities{20};
    int hops{3};
    long long k_range{20};
    bool hard_only{false};  // game24: keep instances with the fewest solution paths
};

std::vector<instance_json> generate_dataset(const generate_params& params);

// Rebuilds the task environment described by one dataset line.
std::unique_ptr<core::environment> make_environment(const instance_json& instance);

// Self-check: the embedded oracle answer is reproduced by the task's solver
// and the oracle trajectory replays cleanly. Throws data_error on failure.
void verify_instance(const instance_json& instance);

std::string to_jsonl(const std::vector<instance_json>& instances);
std::vector<instance_json> from_jsonl(const std::string& text);
std::vector<instance_json> load_jsonl_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace planlab::harness
