#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "planlab/core/environment.hpp"

namespace planlab::tasks::qa {

struct unanswerable : std::runtime_error {
    explicit unanswerable(const std::string& what) : std::runtime_error(what) {}
};

// Raised (never silently resolved) when more than one graph triplet matches a
// query triplet.
struct ambiguous_match : std::runtime_error {
    explicit ambiguous_match(const std::string& what) : std::runtime_error(what) {}
};

struct triplet {
    std::string head;
    std::string relation;
    std::string tail;
};

// Relation triplets plus alias tables; matching is exact after
// canonicalization (case fold, then alias lookup).
class knowledge_graph {
public:
    knowledge_graph() = default;
    knowledge_graph(std::vector<triplet> triplets, std::map<std::string, std::string> entity_aliases = {},
                    std::map<std::string, std::string> relation_aliases = {});

    [[nodiscard]] const std::vector<triplet>& triplets() const { return triplets_; }
    [[nodiscard]] std::string canonical_entity(const std::string& name) const;
    [[nodiscard]] std::string canonical_relation(const std::string& name) const;

private:
    std::vector<triplet> triplets_;  // deduplicated after canonicalization
    std::map<std::string, std::string> entity_aliases_;
    std::map<std::string, std::string> relation_aliases_;
};

// Conjunction of template triplets with {slot} placeholders; an element may
// be a literal, a bare slot, or a composite template ("{a} and {b}"). The
// construction validates that the triplets resolve one new slot at a time.
struct composed_query {
    std::vector<std::array<std::string, 3>> triplets;
    std::string answer_slot;
};

void validate_query(const composed_query& query);

struct resolution_step {
    std::size_t triplet_index;
    triplet matched;
    std::string slot;
    std::string entity;
};

struct qa_result {
    std::string answer;
    std::vector<resolution_step> steps;
};

// Forward chaining over query triplets: repeatedly resolve a triplet with
// two known elements and one unknown slot against the graph.
qa_result qa_solve(const knowledge_graph& graph, const composed_query& query);

// Token-level F1 after lowercasing and punctuation stripping.
double qa_f1(const std::string& predicted, const std::string& gold);

std::unique_ptr<core::environment> make_environment(knowledge_graph graph, composed_query query);

}  // namespace planlab::tasks::qa
