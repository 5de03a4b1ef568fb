#include "planlab/learners/experiment.hpp"

#include <algorithm>

#include "json.hpp"
#include "planlab/core/rng.hpp"

namespace planlab::learners {

namespace {

struct cell_result {
    curve_record direct_rec;
    curve_record decomposed_rec;
};

cell_result run_cell(const experiment_spec& spec, const equation_family& family,
                     std::uint64_t seed, std::size_t samples,
                     const std::vector<family_instance>& heldout) {
    std::vector<family_instance> demos;
    if (samples == full_domain_marker) {
        demos = family.enumerate_domain();
    } else {
        core::rng rng(core::derive_seed(seed, 0x7261696e));  // training stream
        demos.reserve(samples);
        for (std::size_t i = 0; i < samples; ++i) demos.push_back(family.sample(rng));
    }

    // Duplicate demonstrations may repeat keys with identical values; the
    // tabular insert tolerates exact repeats.
    direct_family_learner direct = train_direct(family, demos);
    decomposed_family_learner decomposed = train_decomposed(family, demos);

    const std::size_t reported_samples = samples == full_domain_marker ? demos.size() : samples;
    auto evaluate = [&](auto&& answer_fn, const bigint& dl, const std::string& name) {
        std::size_t correct = 0, abstained = 0;
        for (const auto& inst : heldout) {
            auto got = answer_fn(inst);
            if (!got) {
                ++abstained;
            } else if (*got == family.oracle_answer(inst)) {
                ++correct;
            }
        }
        curve_record rec;
        rec.learner = name;
        rec.samples = reported_samples;
        rec.seed = seed;
        rec.accuracy = static_cast<double>(correct) / static_cast<double>(heldout.size());
        rec.abstain_rate = static_cast<double>(abstained) / static_cast<double>(heldout.size());
        rec.guess_adjusted_accuracy =
            rec.accuracy + rec.abstain_rate / static_cast<double>(family.value_range());
        rec.dl_bits = dl;
        return rec;
    };

    cell_result res;
    res.direct_rec = evaluate([&](const family_instance& i) { return direct.answer(i); },
                              direct.dl_bits(family.value_range()), "direct");
    res.decomposed_rec = evaluate([&](const family_instance& i) { return decomposed.answer(i, family); },
                                  decomposed.dl_bits(family.value_range()), "decomposed");
    return res;
}

}  // namespace

std::vector<curve_record> sample_complexity_experiment(const experiment_spec& spec) {
    equation_family family(spec.n_variables, spec.k_values);

    struct cell {
        std::uint64_t seed;
        std::size_t samples;
    };
    std::vector<cell> cells;
    for (auto seed : spec.seeds)
        for (auto samples : spec.sample_grid) cells.push_back({seed, samples});

    // Held-out sets are per seed and independent of the training stream.
    std::vector<std::vector<family_instance>> heldout_by_seed(spec.seeds.size());
    for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
        core::rng rng(core::derive_seed(spec.seeds[s], 0x74657374));
        for (std::size_t i = 0; i < spec.heldout_size; ++i)
            heldout_by_seed[s].push_back(family.sample(rng));
    }
    auto heldout_for = [&](std::uint64_t seed) -> const std::vector<family_instance>& {
        for (std::size_t s = 0; s < spec.seeds.size(); ++s)
            if (spec.seeds[s] == seed) return heldout_by_seed[s];
        throw std::logic_error("seed not found");
    };

    std::vector<cell_result> results(cells.size());
#if defined(PLANLAB_HAVE_OPENMP)
    if (spec.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(cells.size()); ++i) {
            const auto& c = cells[static_cast<std::size_t>(i)];
            results[static_cast<std::size_t>(i)] =
                run_cell(spec, family, c.seed, c.samples, heldout_for(c.seed));
        }
    } else
#endif
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
            results[i] = run_cell(spec, family, cells[i].seed, cells[i].samples, heldout_for(cells[i].seed));
    }

    std::vector<curve_record> records;
    records.reserve(cells.size() * 2);
    for (const auto& r : results) {
        records.push_back(r.direct_rec);
        records.push_back(r.decomposed_rec);
    }
    return records;
}

std::string curve_to_jsonl(const std::vector<curve_record>& records) {
    std::string out;
    for (const auto& r : records) {
        nlohmann::json j;
        j["schema"] = "planlab.curve.v1";
        j["learner"] = r.learner;
        j["samples"] = r.samples;
        j["seed"] = r.seed;
        j["accuracy"] = r.accuracy;
        j["abstain_rate"] = r.abstain_rate;
        j["guess_adjusted_accuracy"] = r.guess_adjusted_accuracy;
        j["dl_bits"] = r.dl_bits.str();
        out += j.dump() + "\n";
    }
    return out;
}

std::size_t smallest_reaching(const std::vector<curve_record>& records, const std::string& learner,
                              std::uint64_t seed, double threshold) {
    std::size_t best = static_cast<std::size_t>(-1);
    for (const auto& r : records)
        if (r.learner == learner && r.seed == seed && r.accuracy >= threshold)
            best = std::min(best, r.samples);
    return best;
}

}  // namespace planlab::learners
