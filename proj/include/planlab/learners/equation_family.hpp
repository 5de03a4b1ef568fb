#pragma once

#include <optional>
#include <string>
#include <vector>

#include "planlab/core/rng.hpp"
#include "planlab/learners/description_length.hpp"
#include "planlab/learners/tabular.hpp"

namespace planlab::learners {

// Synthetic equation-chain family with a finite, enumerable domain. Each
// instance fixes a chain structure x2..xN, each variable defined by one action
// from a small shared library, plus the given value of x1. Arithmetic wraps
// modulo K so every value stays inside [0, K); component tables therefore
// have exactly K^{a_i} possible keys.
struct family_equation {
    std::string action_id;       // "add1".."add3", "mul2", "mul3", "sum", "diff"
    std::vector<int> inputs;     // variable indices, 0-based
};

struct family_instance {
    std::vector<family_equation> equations;  // equations[i] defines variable i+1
    long long given{0};                      // value of x1

    [[nodiscard]] std::string problem_key() const;
};

class equation_family {
public:
    equation_family(int n_variables, long long k_values);

    [[nodiscard]] int variables() const { return n_; }
    [[nodiscard]] long long value_range() const { return k_; }

    [[nodiscard]] family_instance sample(core::rng& rng) const;
    [[nodiscard]] std::vector<family_instance> enumerate_domain() const;
    [[nodiscard]] std::size_t domain_size() const;

    [[nodiscard]] long long oracle_answer(const family_instance& inst) const;
    [[nodiscard]] std::vector<long long> oracle_values(const family_instance& inst) const;

    // Action arities of the library, for description-length accounting.
    [[nodiscard]] std::vector<unsigned> action_arities() const;

    // Training views of one demonstration.
    [[nodiscard]] std::pair<std::string, std::string> direct_example(const family_instance& inst) const;
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> cot_examples(
        const family_instance& inst) const;

    [[nodiscard]] long long apply_action(const std::string& action_id,
                                         const std::vector<long long>& inputs) const;

private:
    int n_;
    long long k_;
};

// Answers by memorized whole-problem lookup.
struct direct_family_learner {
    tabular_predictor table;
    [[nodiscard]] std::optional<long long> answer(const family_instance& inst) const;
    [[nodiscard]] bigint dl_bits(long long k) const;
};

// Answers by composing a policy table over observed-variable bitmasks with
// one transition table per action, abstaining on the first miss.
struct decomposed_family_learner {
    tabular_predictor policy;
    tabular_predictor transitions;
    [[nodiscard]] std::optional<long long> answer(const family_instance& inst,
                                                  const equation_family& family) const;
    [[nodiscard]] bigint dl_bits(long long k) const;
};

direct_family_learner train_direct(const equation_family& family,
                                   const std::vector<family_instance>& demos);
decomposed_family_learner train_decomposed(const equation_family& family,
                                           const std::vector<family_instance>& demos);

}  // namespace planlab::learners
