#pragma once

#include <map>
#include <string>
#include <vector>

#include "planlab/engine/predictor.hpp"

namespace planlab::learners {

struct conflicting_examples : std::runtime_error {
    explicit conflicting_examples(const std::string& key)
        : std::runtime_error("conflicting training examples for key: " + key), key(key) {}
    std::string key;
};

// Exact memorization: predict returns the trained value or abstains.
// Retraining on the same multiset of examples yields an identical table.
class tabular_predictor final : public engine::predictor {
public:
    tabular_predictor() = default;

    [[nodiscard]] std::optional<std::string> predict(const std::string& key) const override {
        auto it = table_.find(key);
        if (it == table_.end()) return std::nullopt;
        return it->second;
    }

    void insert(const std::string& key, const std::string& value) {
        auto [it, fresh] = table_.emplace(key, value);
        if (!fresh && it->second != value) throw conflicting_examples(key);
    }

    [[nodiscard]] std::size_t entries() const { return table_.size(); }
    [[nodiscard]] const std::map<std::string, std::string>& table() const { return table_; }

    // Order-independent content hash.
    [[nodiscard]] std::uint64_t content_hash() const;

private:
    std::map<std::string, std::string> table_;
};

tabular_predictor train_tabular(const std::vector<std::pair<std::string, std::string>>& examples);

}  // namespace planlab::learners
