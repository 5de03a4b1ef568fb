// Command-line front end: dataset generation, engine runs, learning curves,
// dataset verification, and demonstration-format traces.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "planlab/harness/dataset.hpp"
#include "planlab/harness/runner.hpp"
#include "planlab/harness/trace.hpp"
#include "planlab/learners/experiment.hpp"

namespace {

using namespace planlab;

int cmd_generate(const std::string& task, std::size_t count, std::uint64_t seed, int size_min,
                 int size_max, int blocks, int cities, long long k_range, bool hard,
                 const std::string& out) {
    harness::generate_params params;
    params.task = core::task_kind_from_name(task);
    params.count = count;
    params.seed = seed;
    params.size_min = size_min;
    params.size_max = size_max;
    params.blocks = blocks;
    params.cities = cities;
    params.k_range = k_range;
    params.hard_only = hard;
    auto dataset = harness::generate_dataset(params);
    for (const auto& instance : dataset) harness::verify_instance(instance);
    std::string text = harness::to_jsonl(dataset);
    if (out.empty())
        std::cout << text;
    else
        harness::write_file(out, text);
    std::cerr << "generated " << dataset.size() << " instances\n";
    return 0;
}

int cmd_run(const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) throw harness::data_error("cannot open config: " + config_path);
    nlohmann::json cj = nlohmann::json::parse(in);
    auto config = harness::run_config::from_json(cj);
    auto instances = harness::load_jsonl_file(config.dataset_path);
    auto result = harness::run_batch(config, instances);
    std::string records;
    for (const auto& r : result.records) records += r.to_json().dump() + "\n";
    if (!config.output.empty()) harness::write_file(config.output, records);
    std::cout << result.summary.dump(2) << "\n";
    return 0;
}

int cmd_curves(int n, long long k, const std::vector<std::size_t>& grid, bool with_full,
               const std::vector<std::uint64_t>& seeds, std::size_t heldout, bool serial,
               const std::string& out) {
    learners::experiment_spec spec;
    spec.n_variables = n;
    spec.k_values = k;
    spec.sample_grid = grid;
    if (with_full) spec.sample_grid.push_back(learners::full_domain_marker);
    spec.seeds = seeds;
    spec.heldout_size = heldout;
    spec.parallel = !serial;
    auto records = learners::sample_complexity_experiment(spec);
    std::string jsonl = learners::curve_to_jsonl(records);
    if (out.empty())
        std::cout << jsonl;
    else
        harness::write_file(out, jsonl);

    // Plain-text table on stderr for quick reading.
    std::cerr << "learner      samples    seed  accuracy  abstain\n";
    for (const auto& r : records) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-11s %8zu %7llu   %0.4f   %0.4f\n", r.learner.c_str(),
                      r.samples, static_cast<unsigned long long>(r.seed), r.accuracy, r.abstain_rate);
        std::cerr << line;
    }
    return 0;
}

int cmd_verify(const std::string& path) {
    auto instances = harness::load_jsonl_file(path);
    for (const auto& instance : instances) harness::verify_instance(instance);
    std::cout << "ok: " << instances.size() << " instances verified\n";
    return 0;
}

int cmd_trace(const std::string& path, std::size_t id, const std::string& style) {
    auto instances = harness::load_jsonl_file(path);
    for (const auto& instance : instances) {
        if (instance.at("id").get<std::size_t>() != id) continue;
        std::cout << harness::emit_instance_trace(instance, style);
        return 0;
    }
    throw harness::data_error("instance id not found: " + std::to_string(id));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic reasoning-task laboratory"};
    app.require_subcommand(1);

    std::string task = "mwis", out, config_path, dataset_path, style = "implicit";
    std::size_t count = 100, id = 0, heldout = 500;
    std::uint64_t seed = 0;
    int size_min = 4, size_max = 6, blocks = 4, cities = 20, n_vars = 4;
    long long k_range = 20, k_values = 10;
    bool hard = false, with_full = false, serial = false;
    std::vector<std::size_t> grid = {0, 50, 100, 200, 400, 800, 1600, 3200, 6400, 12800, 25600, 51200};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

    auto* gen = app.add_subcommand("generate", "generate a dataset with embedded oracle answers");
    gen->add_option("--task", task, "mwis|game24|routes|equations|qa|blocksworld")->required();
    gen->add_option("--count", count);
    gen->add_option("--seed", seed);
    gen->add_option("--size-min", size_min);
    gen->add_option("--size-max", size_max);
    gen->add_option("--blocks", blocks);
    gen->add_option("--cities", cities);
    gen->add_option("--k-range", k_range);
    gen->add_flag("--hard", hard, "game24: keep instances with the fewest solution paths");
    gen->add_option("--out", out);

    auto* run = app.add_subcommand("run", "run a configured mode over a dataset");
    run->add_option("config", config_path, "JSON config file")->required();

    auto* curves = app.add_subcommand("curves", "sample-complexity curves for the equation family");
    curves->add_option("--variables", n_vars);
    curves->add_option("--values", k_values);
    curves->add_option("--grid", grid);
    curves->add_flag("--full", with_full, "append a full-domain grid point");
    curves->add_option("--seeds", seeds);
    curves->add_option("--heldout", heldout);
    curves->add_flag("--serial", serial);
    curves->add_option("--out", out);

    auto* verify = app.add_subcommand("verify", "re-verify a dataset against the task oracles");
    verify->add_option("dataset", dataset_path)->required();

    auto* trace = app.add_subcommand("trace", "emit demonstration-format text for one instance");
    trace->add_option("dataset", dataset_path)->required();
    trace->add_option("--id", id);
    trace->add_option("--style", style, "mwis: implicit|explicit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(task, count, seed, size_min, size_max, blocks, cities, k_range, hard, out);
        if (run->parsed()) return cmd_run(config_path);
        if (curves->parsed())
            return cmd_curves(n_vars, k_values, grid, with_full, seeds, heldout, serial, out);
        if (verify->parsed()) return cmd_verify(dataset_path);
        if (trace->parsed()) return cmd_trace(dataset_path, id, style);
    } catch (const planlab::harness::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
