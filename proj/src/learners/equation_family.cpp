#include "planlab/learners/equation_family.hpp"

#include <stdexcept>

#include "planlab/core/text.hpp"
#include "planlab/learners/description_length.hpp"

namespace planlab::learners {

namespace {

const std::vector<std::string>& unary_actions() {
    static const std::vector<std::string> acts = {"add1", "add2", "add3", "mul2", "mul3"};
    return acts;
}

const std::vector<std::string>& binary_actions() {
    static const std::vector<std::string> acts = {"sum", "diff"};
    return acts;
}

std::string render_equation(const family_equation& eq) {
    std::vector<std::string> vars;
    for (int v : eq.inputs) vars.push_back("x" + std::to_string(v + 1));
    return eq.action_id + "(" + core::join(vars, ",") + ")";
}

// All equations that may define variable `index` (0-based), i.e. draw inputs
// from variables 0..index-1.
std::vector<family_equation> choices_for(int index) {
    std::vector<family_equation> out;
    for (const auto& a : unary_actions())
        for (int v = 0; v < index; ++v) out.push_back({a, {v}});
    if (index >= 2)
        for (const auto& a : binary_actions())
            for (int u = 0; u < index; ++u)
                for (int v = 0; v < index; ++v)
                    if (u != v) out.push_back({a, {u, v}});
    return out;
}

}  // namespace

std::string family_instance::problem_key() const {
    std::string key = "eqfam|x1=" + std::to_string(given);
    for (std::size_t i = 0; i < equations.size(); ++i)
        key += "|x" + std::to_string(i + 2) + "=" + render_equation(equations[i]);
    return key;
}

equation_family::equation_family(int n_variables, long long k_values) : n_(n_variables), k_(k_values) {
    if (n_ < 2) throw std::invalid_argument("family needs at least 2 variables");
    if (k_ < 2) throw std::invalid_argument("family needs at least 2 values");
}

long long equation_family::apply_action(const std::string& action_id,
                                        const std::vector<long long>& inputs) const {
    auto wrap = [&](long long v) { return ((v % k_) + k_) % k_; };
    if (action_id == "add1") return wrap(inputs.at(0) + 1);
    if (action_id == "add2") return wrap(inputs.at(0) + 2);
    if (action_id == "add3") return wrap(inputs.at(0) + 3);
    if (action_id == "mul2") return wrap(inputs.at(0) * 2);
    if (action_id == "mul3") return wrap(inputs.at(0) * 3);
    if (action_id == "sum") return wrap(inputs.at(0) + inputs.at(1));
    if (action_id == "diff") return wrap(inputs.at(0) - inputs.at(1));
    throw std::invalid_argument("unknown action: " + action_id);
}

family_instance equation_family::sample(core::rng& rng) const {
    family_instance inst;
    inst.given = rng.next_int(0, k_ - 1);
    for (int i = 1; i < n_; ++i) {
        auto choices = choices_for(i);
        inst.equations.push_back(choices[rng.next_below(choices.size())]);
    }
    return inst;
}

std::vector<family_instance> equation_family::enumerate_domain() const {
    std::vector<family_instance> out;
    std::vector<std::vector<family_equation>> layers;
    for (int i = 1; i < n_; ++i) layers.push_back(choices_for(i));
    std::vector<std::size_t> pick(layers.size(), 0);
    while (true) {
        for (long long given = 0; given < k_; ++given) {
            family_instance inst;
            inst.given = given;
            for (std::size_t i = 0; i < layers.size(); ++i) inst.equations.push_back(layers[i][pick[i]]);
            out.push_back(std::move(inst));
        }
        std::size_t level = 0;
        while (level < layers.size()) {
            if (++pick[level] < layers[level].size()) break;
            pick[level] = 0;
            ++level;
        }
        if (level == layers.size()) return out;
    }
}

std::size_t equation_family::domain_size() const {
    std::size_t total = static_cast<std::size_t>(k_);
    for (int i = 1; i < n_; ++i) total *= choices_for(i).size();
    return total;
}

std::vector<long long> equation_family::oracle_values(const family_instance& inst) const {
    std::vector<long long> values{((inst.given % k_) + k_) % k_};
    for (const auto& eq : inst.equations) {
        std::vector<long long> args;
        for (int v : eq.inputs) args.push_back(values.at(static_cast<std::size_t>(v)));
        values.push_back(apply_action(eq.action_id, args));
    }
    return values;
}

long long equation_family::oracle_answer(const family_instance& inst) const {
    return oracle_values(inst).back();
}

std::vector<unsigned> equation_family::action_arities() const {
    std::vector<unsigned> arities(unary_actions().size(), 1);
    arities.insert(arities.end(), binary_actions().size(), 2);
    return arities;
}

std::pair<std::string, std::string> equation_family::direct_example(const family_instance& inst) const {
    return {inst.problem_key(), std::to_string(oracle_answer(inst))};
}

std::vector<std::pair<std::string, std::string>> equation_family::cot_examples(
    const family_instance& inst) const {
    std::vector<std::pair<std::string, std::string>> out;
    auto values = oracle_values(inst);
    std::string observed(static_cast<std::size_t>(n_), '0');
    observed[0] = '1';
    for (std::size_t i = 0; i < inst.equations.size(); ++i) {
        // Policy keys on which variables are observed, not their values.
        out.emplace_back("eqfam-policy|observed=" + observed, std::to_string(i));
        const auto& eq = inst.equations[i];
        std::vector<std::string> args;
        for (int v : eq.inputs) args.push_back(std::to_string(values[static_cast<std::size_t>(v)]));
        out.emplace_back("eqfam-trans|" + eq.action_id + "|" + core::join(args, ","),
                         std::to_string(values[i + 1]));
        observed[i + 1] = '1';
    }
    return out;
}

std::optional<long long> direct_family_learner::answer(const family_instance& inst) const {
    auto v = table.predict(inst.problem_key());
    if (!v) return std::nullopt;
    return std::stoll(*v);
}

bigint direct_family_learner::dl_bits(long long k) const {
    return bigint(table.entries()) * bits_for_values(k);
}

std::optional<long long> decomposed_family_learner::answer(const family_instance& inst,
                                                           const equation_family& family) const {
    const int n = family.variables();
    std::vector<std::optional<long long>> values(static_cast<std::size_t>(n));
    values[0] = ((inst.given % family.value_range()) + family.value_range()) % family.value_range();
    std::string observed(static_cast<std::size_t>(n), '0');
    observed[0] = '1';
    for (int step = 0; step < n - 1; ++step) {
        auto pick = policy.predict("eqfam-policy|observed=" + observed);
        if (!pick) return std::nullopt;
        auto eq_index = static_cast<std::size_t>(std::stoul(*pick));
        if (eq_index >= inst.equations.size()) return std::nullopt;
        const auto& eq = inst.equations[eq_index];
        std::vector<std::string> args;
        for (int v : eq.inputs) {
            if (!values[static_cast<std::size_t>(v)]) return std::nullopt;
            args.push_back(std::to_string(*values[static_cast<std::size_t>(v)]));
        }
        auto out = transitions.predict("eqfam-trans|" + eq.action_id + "|" + core::join(args, ","));
        if (!out) return std::nullopt;
        values[eq_index + 1] = std::stoll(*out);
        observed[eq_index + 1] = '1';
    }
    return values[static_cast<std::size_t>(n - 1)];
}

bigint decomposed_family_learner::dl_bits(long long k) const {
    return bigint(transitions.entries() + policy.entries()) * bits_for_values(k);
}

direct_family_learner train_direct(const equation_family& family,
                                   const std::vector<family_instance>& demos) {
    direct_family_learner learner;
    for (const auto& inst : demos) {
        auto [k, v] = family.direct_example(inst);
        learner.table.insert(k, v);
    }
    return learner;
}

decomposed_family_learner train_decomposed(const equation_family& family,
                                           const std::vector<family_instance>& demos) {
    decomposed_family_learner learner;
    for (const auto& inst : demos) {
        for (const auto& [k, v] : family.cot_examples(inst)) {
            if (core::starts_with(k, "eqfam-policy|"))
                learner.policy.insert(k, v);
            else
                learner.transitions.insert(k, v);
        }
    }
    return learner;
}

}  // namespace planlab::learners
