#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "planlab/learners/equation_family.hpp"

namespace planlab::learners {

struct curve_record {
    std::string learner;  // "direct" | "decomposed"
    std::size_t samples{0};
    std::uint64_t seed{0};
    double accuracy{0.0};
    double abstain_rate{0.0};
    // Accuracy with abstains replaced by a uniform guess over K values.
    double guess_adjusted_accuracy{0.0};
    bigint dl_bits{0};
};

struct experiment_spec {
    int n_variables{4};
    long long k_values{10};
    std::vector<std::size_t> sample_grid;  // 0 entries allowed; SIZE_MAX = full domain
    std::vector<std::uint64_t> seeds;
    std::size_t heldout_size{500};
    bool parallel{true};
};

constexpr std::size_t full_domain_marker = static_cast<std::size_t>(-1);

// For each (seed, grid point): draw demonstrations (a per-seed stream, so
// larger grid points extend smaller ones), train both learners, evaluate on
// a held-out set. Deterministic per (spec, seeds) regardless of thread count.
std::vector<curve_record> sample_complexity_experiment(const experiment_spec& spec);

std::string curve_to_jsonl(const std::vector<curve_record>& records);

// Smallest grid point at which the learner reaches the accuracy threshold;
// SIZE_MAX when never reached.
std::size_t smallest_reaching(const std::vector<curve_record>& records, const std::string& learner,
                              std::uint64_t seed, double threshold);

}  // namespace planlab::learners
