#include "planlab/learners/tabular.hpp"

#include "planlab/core/rng.hpp"

namespace planlab::learners {

std::uint64_t tabular_predictor::content_hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto& [k, v] : table_) {
        h = core::mix64(h ^ core::hash_str(1, k));
        h = core::mix64(h ^ core::hash_str(2, v));
    }
    return h;
}

tabular_predictor train_tabular(const std::vector<std::pair<std::string, std::string>>& examples) {
    tabular_predictor p;
    for (const auto& [k, v] : examples) p.insert(k, v);
    return p;
}

}  // namespace planlab::learners
