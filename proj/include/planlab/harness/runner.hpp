#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "planlab/engine/engine.hpp"
#include "planlab/harness/dataset.hpp"
#include "planlab/learners/tabular.hpp"

namespace planlab::harness {

struct run_config {
    std::string dataset_path;
    std::string mode{"oracle"};  // oracle | direct | cot | cot-sc | tot | tot-decomp
    engine::search_config search;
    double epsilon{0.0};
    std::size_t train_instances{0};
    std::uint64_t train_seed{0};
    std::string proposer{"oracle"};  // oracle | trained
    bool parallel{true};
    std::string output;

    [[nodiscard]] nlohmann::json to_json() const;
    static run_config from_json(const nlohmann::json& j);
    [[nodiscard]] std::string hash() const;  // deterministic over the full config
};

enum class outcome { correct, incorrect, abstain };
std::string outcome_name(outcome o);

struct run_record {
    std::string config_hash;
    std::size_t instance_id{0};
    outcome result{outcome::abstain};
    std::optional<std::string> answer;
    std::vector<std::string> error_classes;  // "TransitionError@2"
    core::trajectory traj;
    double wall_ms{0.0};

    [[nodiscard]] nlohmann::json to_json() const;
};

nlohmann::json trajectory_to_json(const core::trajectory& traj);
core::trajectory trajectory_from_json(const nlohmann::json& j);

struct batch_result {
    std::vector<run_record> records;
    nlohmann::json summary;
};

// Executes the configured mode per instance. Instances may run in parallel;
// records come back in instance-id order either way, and every field except
// wall_ms is byte-deterministic for a fixed (config, seeds).
batch_result run_batch(const run_config& config, const std::vector<instance_json>& instances);

// Memorizing predictor built from demonstration instances of the same task:
// policy, transition, proposal and direct entries along each oracle path.
// Conflicting keys keep the first demonstration's value.
learners::tabular_predictor train_demo_predictor(const std::vector<instance_json>& demos,
                                                 bool decomposed_proposals);

// Live proposer/predictor backed by the environment itself.
class oracle_predictor final : public engine::predictor {
public:
    explicit oracle_predictor(const core::environment& env) : env_(env) {}
    [[nodiscard]] std::optional<std::string> predict(const std::string& key) const override;

private:
    const core::environment& env_;
};

}  // namespace planlab::harness
