// Compares the serial reference batch path against the OpenMP one on the
// same workload and checks that their record streams agree (wall times
// excepted).

#include <chrono>
#include <iostream>

#include "planlab/harness/dataset.hpp"
#include "planlab/harness/runner.hpp"

using namespace planlab;

namespace {

double run_timed(const harness::run_config& config, const std::vector<harness::instance_json>& data,
                 std::vector<harness::run_record>* out) {
    auto t0 = std::chrono::steady_clock::now();
    auto result = harness::run_batch(config, data);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    *out = std::move(result.records);
    return ms;
}

std::string strip_wall(const harness::run_record& r) {
    auto j = r.to_json();
    j["wall_ms"] = 0.0;
    return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t count = argc > 1 ? std::stoul(argv[1]) : 300;

    harness::generate_params params;
    params.task = core::task_kind::game24;
    params.count = count;
    params.seed = 99;
    auto data = harness::generate_dataset(params);

    harness::run_config config;
    config.mode = "tot";
    config.search.beam_width = 5;
    config.search.max_depth = 8;
    config.epsilon = 0.0;

    std::vector<harness::run_record> serial_records, parallel_records;
    config.parallel = false;
    double serial_ms = run_timed(config, data, &serial_records);
    config.parallel = true;
    double parallel_ms = run_timed(config, data, &parallel_records);

    bool identical = serial_records.size() == parallel_records.size();
    for (std::size_t i = 0; identical && i < serial_records.size(); ++i)
        identical = strip_wall(serial_records[i]) == strip_wall(parallel_records[i]);

    std::cout << "instances: " << data.size() << "\n";
    std::cout << "serial:   " << serial_ms << " ms\n";
    std::cout << "parallel: " << parallel_ms << " ms\n";
    std::cout << "speedup:  " << (parallel_ms > 0 ? serial_ms / parallel_ms : 0.0) << "x\n";
    std::cout << "records identical: " << (identical ? "yes" : "NO") << "\n";
    return identical ? 0 : 1;
}
