#include "planlab/learners/description_length.hpp"

#include <cmath>
#include <stdexcept>

namespace planlab::learners {

dl_account make_account(bigint entries, unsigned bits_per_entry) {
    dl_account a;
    a.entries = std::move(entries);
    a.bits_per_entry = bits_per_entry;
    a.total_bits = a.entries * bits_per_entry;
    return a;
}

unsigned bits_for_values(long long k) {
    if (k < 1) throw std::invalid_argument("value count must be >= 1");
    unsigned bits = 1;
    while ((1LL << bits) < k) ++bits;
    return bits;
}

namespace {

bigint ipow(long long base, unsigned exp) {
    bigint r = 1;
    for (unsigned i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

dl_report description_length(const dl_spec& spec) {
    if (spec.k < 1) throw std::invalid_argument("K must be >= 1");
    const unsigned bits = spec.value_bits != 0 ? spec.value_bits : bits_for_values(spec.k);

    dl_report report;
    if (spec.direct_arity) report.direct = make_account(ipow(spec.k, *spec.direct_arity), bits);

    bigint transition_entries = 0;
    for (unsigned a : spec.action_arities) transition_entries += ipow(spec.k, a);
    report.transitions = make_account(transition_entries, bits);

    if (spec.policy) {
        report.policy =
            make_account(bigint(1) << spec.policy->observed_variables, spec.policy->value_bits);
    }

    report.grand_total_bits = report.direct.total_bits + report.transitions.total_bits +
                              (report.policy ? report.policy->total_bits : bigint(0));
    return report;
}

double occam_bound(const occam_bound_input& input) {
    if (!(input.delta > 0.0 && input.delta < 1.0))
        throw std::domain_error("delta must lie in (0, 1)");
    if (input.m < 1) throw std::domain_error("sample count must be >= 1");
    if (input.h_bits < 0.0) throw std::domain_error("description length must be nonnegative");
    return input.empirical_loss +
           std::sqrt((input.h_bits + std::log(2.0 / input.delta)) / (2.0 * static_cast<double>(input.m)));
}

}  // namespace planlab::learners
