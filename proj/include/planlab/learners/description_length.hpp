#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

namespace planlab::learners {

using bigint = boost::multiprecision::cpp_int;

// Exact bits-of-description ledger for one table.
struct dl_account {
    bigint entries{0};
    unsigned bits_per_entry{0};
    bigint total_bits{0};  // always entries * bits_per_entry
};

dl_account make_account(bigint entries, unsigned bits_per_entry);

unsigned bits_for_values(long long k);  // ceil(log2 k), k >= 1

struct policy_spec {
    unsigned observed_variables{0};  // binary observation key of M variables
    unsigned value_bits{1};
};

struct dl_spec {
    long long k{2};                      // values per variable
    std::optional<unsigned> direct_arity;  // N for a direct K^N table
    std::vector<unsigned> action_arities;  // a_i for decomposed transition tables
    unsigned value_bits{0};                // 0 = default ceil(log2 K)
    std::optional<policy_spec> policy;
};

struct dl_report {
    dl_account direct;                    // present when direct_arity set
    dl_account transitions;               // sum over K^{a_i} tables (uniform bits)
    std::optional<dl_account> policy;     // 2^M table
    bigint grand_total_bits{0};
};

// Exact entry counts, no asymptotics: direct K^N entries; decomposed
// sum of K^{a_i} entries plus the policy table. Results are big integers,
// never silently wrapped.
dl_report description_length(const dl_spec& spec);

struct occam_bound_input {
    double h_bits{0.0};       // |h|, prefix-free description length in bits
    long long m{1};           // sample count
    double delta{0.05};       // confidence, in (0, 1)
    double empirical_loss{0.0};
};

// L_S + sqrt((|h| + ln(2/delta)) / (2m)) at double precision.
double occam_bound(const occam_bound_input& input);

}  // namespace planlab::learners
