#include "planlab/tasks/qa.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "planlab/core/text.hpp"

namespace planlab::tasks::qa {

namespace {

// Slots are "{name}" spans; returns the names in appearance order.
std::vector<std::string> slots_of(const std::string& tmpl) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while ((pos = tmpl.find('{', pos)) != std::string::npos) {
        auto close = tmpl.find('}', pos);
        if (close == std::string::npos) throw std::invalid_argument("unterminated slot in: " + tmpl);
        out.push_back(tmpl.substr(pos + 1, close - pos - 1));
        pos = close + 1;
    }
    return out;
}

bool is_bare_slot(const std::string& tmpl) {
    return tmpl.size() > 2 && tmpl.front() == '{' && tmpl.back() == '}' &&
           tmpl.find('{', 1) == std::string::npos;
}

std::string render_template(const std::string& tmpl, const std::map<std::string, std::string>& bindings) {
    std::string out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        if (tmpl[pos] != '{') {
            out += tmpl[pos++];
            continue;
        }
        auto close = tmpl.find('}', pos);
        const std::string slot = tmpl.substr(pos + 1, close - pos - 1);
        out += bindings.at(slot);
        pos = close + 1;
    }
    return out;
}

bool fully_bound(const std::string& tmpl, const std::map<std::string, std::string>& bindings) {
    for (const auto& s : slots_of(tmpl))
        if (!bindings.count(s)) return false;
    return true;
}

}  // namespace

knowledge_graph::knowledge_graph(std::vector<triplet> triplets,
                                 std::map<std::string, std::string> entity_aliases,
                                 std::map<std::string, std::string> relation_aliases) {
    for (const auto& [k, v] : entity_aliases) entity_aliases_[core::lowercase(k)] = core::lowercase(v);
    for (const auto& [k, v] : relation_aliases)
        relation_aliases_[core::lowercase(k)] = core::lowercase(v);
    std::set<std::string> seen;
    for (auto& t : triplets) {
        std::string key =
            canonical_entity(t.head) + "\x1f" + canonical_relation(t.relation) + "\x1f" + canonical_entity(t.tail);
        if (seen.insert(key).second) triplets_.push_back(std::move(t));
    }
}

std::string knowledge_graph::canonical_entity(const std::string& name) const {
    std::string folded = core::lowercase(core::trim(name));
    auto it = entity_aliases_.find(folded);
    return it == entity_aliases_.end() ? folded : it->second;
}

std::string knowledge_graph::canonical_relation(const std::string& name) const {
    std::string folded = core::lowercase(core::trim(name));
    auto it = relation_aliases_.find(folded);
    return it == relation_aliases_.end() ? folded : it->second;
}

void validate_query(const composed_query& query) {
    std::set<std::string> all_slots;
    for (const auto& t : query.triplets)
        for (const auto& element : t)
            for (const auto& s : slots_of(element)) all_slots.insert(s);
    if (!all_slots.count(query.answer_slot))
        throw std::invalid_argument("answer slot never appears in the query");

    // The unknown-dependency structure must admit an order that binds exactly
    // one new slot per triplet (connected, acyclic).
    std::map<std::string, std::string> bound;
    std::vector<bool> used(query.triplets.size(), false);
    for (std::size_t round = 0; round < query.triplets.size(); ++round) {
        bool progressed = false;
        for (std::size_t i = 0; i < query.triplets.size() && !progressed; ++i) {
            if (used[i]) continue;
            int unbound = 0;
            std::string binder;
            bool binder_bare = false;
            for (const auto& element : query.triplets[i]) {
                if (fully_bound(element, bound)) continue;
                ++unbound;
                binder_bare = is_bare_slot(element);
                binder = binder_bare ? slots_of(element)[0] : "";
            }
            if (unbound == 1 && binder_bare) {
                bound[binder] = "?";
                used[i] = true;
                progressed = true;
            }
        }
        if (!progressed) throw std::invalid_argument("query triplets do not chain to a solution");
    }
}

qa_result qa_solve(const knowledge_graph& graph, const composed_query& query) {
    validate_query(query);
    qa_result result;
    std::map<std::string, std::string> bound;
    std::vector<bool> used(query.triplets.size(), false);

    for (std::size_t round = 0; round < query.triplets.size(); ++round) {
        // Lowest-index triplet with exactly one unknown, which must be a bare slot.
        std::size_t pick = query.triplets.size();
        int unknown_pos = -1;
        for (std::size_t i = 0; i < query.triplets.size() && pick == query.triplets.size(); ++i) {
            if (used[i]) continue;
            int unbound = 0, pos = -1;
            for (int e = 0; e < 3; ++e) {
                if (fully_bound(query.triplets[i][e], bound)) continue;
                ++unbound;
                pos = e;
            }
            if (unbound == 1 && is_bare_slot(query.triplets[i][pos])) {
                pick = i;
                unknown_pos = pos;
            }
        }
        if (pick == query.triplets.size()) throw unanswerable("no resolvable triplet remains");

        const auto& qt = query.triplets[pick];
        const std::string slot = slots_of(qt[unknown_pos])[0];
        std::vector<triplet> matches;
        for (const auto& gt : graph.triplets()) {
            auto matches_element = [&](int e, const std::string& graph_value, bool entity) {
                if (e == unknown_pos) return true;
                std::string want = render_template(qt[e], bound);
                return entity ? graph.canonical_entity(want) == graph.canonical_entity(graph_value)
                              : graph.canonical_relation(want) == graph.canonical_relation(graph_value);
            };
            if (matches_element(0, gt.head, true) && matches_element(1, gt.relation, false) &&
                matches_element(2, gt.tail, true))
                matches.push_back(gt);
        }
        if (matches.empty())
            throw unanswerable("no graph triplet matches query triplet " + std::to_string(pick));
        if (matches.size() > 1) {
            std::vector<std::string> shown;
            for (const auto& m : matches) shown.push_back("(" + m.head + ", " + m.relation + ", " + m.tail + ")");
            throw ambiguous_match("query triplet " + std::to_string(pick) + " matches " +
                                  std::to_string(matches.size()) + " graph triplets: " +
                                  core::join(shown, " "));
        }
        const triplet& m = matches[0];
        const std::string entity = unknown_pos == 0 ? m.head : unknown_pos == 1 ? m.relation : m.tail;
        bound[slot] = entity;
        used[pick] = true;
        result.steps.push_back({pick, m, slot, entity});
    }
    result.answer = bound.at(query.answer_slot);
    return result;
}

double qa_f1(const std::string& predicted, const std::string& gold) {
    auto tokens = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : core::lowercase(s)) {
            if (std::isalnum(static_cast<unsigned char>(c))) {
                cur += c;
            } else if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        }
        if (!cur.empty()) out.push_back(cur);
        return out;
    };
    auto p = tokens(predicted);
    auto g = tokens(gold);
    if (p.empty() || g.empty()) return p.empty() && g.empty() ? 1.0 : 0.0;
    std::map<std::string, int> gold_counts;
    for (const auto& t : g) gold_counts[t] += 1;
    int overlap = 0;
    for (const auto& t : p) {
        auto it = gold_counts.find(t);
        if (it != gold_counts.end() && it->second > 0) {
            ++overlap;
            --it->second;
        }
    }
    if (overlap == 0) return 0.0;
    double precision = static_cast<double>(overlap) / static_cast<double>(p.size());
    double recall = static_cast<double>(overlap) / static_cast<double>(g.size());
    return 2.0 * precision * recall / (precision + recall);
}

// =====================
// environment adapter
// =====================

namespace {

class qa_env final : public core::environment {
public:
    qa_env(knowledge_graph graph, composed_query query)
        : graph_(std::move(graph)), query_(std::move(query)) {
        validate_query(query_);
    }

    core::task_kind kind() const override { return core::task_kind::multihop_qa; }

    core::state_key initial_state() const override { return ""; }

    std::vector<core::action_key> applicable_actions(const core::state_key& state) const override {
        auto bound = parse_checked(state);
        std::vector<core::action_key> out;
        for (std::size_t i = 0; i < query_.triplets.size(); ++i)
            if (ready(i, bound)) out.push_back("resolve " + std::to_string(i));
        return out;
    }

    core::state_key apply_action(const core::state_key& state, const core::action_key& action) const override {
        auto bound = parse_checked(state);
        if (!core::starts_with(action, "resolve "))
            throw core::inapplicable_action(action, "an action of the form 'resolve <index>'");
        std::size_t i = std::stoul(action.substr(8));
        if (i >= query_.triplets.size() || !ready(i, bound))
            throw core::inapplicable_action(action, "a triplet with exactly one unknown slot");
        auto [slot, entity] = resolve(i, bound);
        bound[slot] = entity;
        return render(bound);
    }

    bool is_goal(const core::state_key& state) const override {
        return parse_checked(state).count(query_.answer_slot) > 0;
    }

    std::string problem_key() const override {
        std::vector<std::string> parts;
        for (const auto& t : query_.triplets) parts.push_back("(" + t[0] + ", " + t[1] + ", " + t[2] + ")");
        return "qa|" + core::join(parts, " ") + "|" + query_.answer_slot;
    }

    std::string goal_text() const override { return "bind " + query_.answer_slot; }

    std::optional<std::string> extract_answer(const core::trajectory& traj) const override {
        auto bound = parse_checked(traj.final_state());
        auto it = bound.find(query_.answer_slot);
        if (it == bound.end()) return std::nullopt;
        return it->second;
    }

    bool check_answer(const std::string& answer) const override {
        try {
            return graph_.canonical_entity(answer) ==
                   graph_.canonical_entity(qa_solve(graph_, query_).answer);
        } catch (const std::exception&) {
            return false;
        }
    }

    core::trajectory oracle_trajectory() const override {
        auto res = qa_solve(graph_, query_);
        core::trajectory traj;
        traj.initial_state = initial_state();
        core::state_key state = traj.initial_state;
        for (const auto& step : res.steps) {
            auto proposals = applicable_actions(state);
            std::string action = "resolve " + std::to_string(step.triplet_index);
            core::state_key next = apply_action(state, action);
            traj.steps.push_back({action, next, proposals});
            state = next;
        }
        traj.answer = res.answer;
        return traj;
    }

private:
    bool ready(std::size_t i, const std::map<std::string, std::string>& bound) const {
        int unbound = 0, pos = -1;
        for (int e = 0; e < 3; ++e) {
            if (fully_bound(query_.triplets[i][e], bound)) continue;
            ++unbound;
            pos = e;
        }
        return unbound == 1 && is_bare_slot(query_.triplets[i][pos]);
    }

    std::pair<std::string, std::string> resolve(std::size_t i,
                                                const std::map<std::string, std::string>& bound) const {
        const auto& qt = query_.triplets[i];
        int unknown_pos = -1;
        for (int e = 0; e < 3; ++e)
            if (!fully_bound(qt[e], bound)) unknown_pos = e;
        std::vector<triplet> matches;
        for (const auto& gt : graph_.triplets()) {
            auto ok = [&](int e, const std::string& graph_value, bool entity) {
                if (e == unknown_pos) return true;
                std::string want = render_template(qt[e], bound);
                return entity ? graph_.canonical_entity(want) == graph_.canonical_entity(graph_value)
                              : graph_.canonical_relation(want) == graph_.canonical_relation(graph_value);
            };
            if (ok(0, gt.head, true) && ok(1, gt.relation, false) && ok(2, gt.tail, true))
                matches.push_back(gt);
        }
        if (matches.size() != 1)
            throw core::inapplicable_action("resolve " + std::to_string(i),
                                            "exactly one matching graph triplet (found " +
                                                std::to_string(matches.size()) + ")");
        const triplet& m = matches[0];
        std::string entity = unknown_pos == 0 ? m.head : unknown_pos == 1 ? m.relation : m.tail;
        return {slots_of(qt[unknown_pos])[0], entity};
    }

    static std::string render(const std::map<std::string, std::string>& bound) {
        std::vector<std::string> parts;
        for (const auto& [slot, entity] : bound) parts.push_back(slot + "=" + entity);
        return core::join(parts, "|");
    }

    std::map<std::string, std::string> parse_checked(const core::state_key& state) const {
        std::map<std::string, std::string> bound;
        if (state.empty()) return bound;
        for (const auto& part : core::split(state, "|")) {
            auto eq = part.find('=');
            if (eq == std::string::npos) throw core::unknown_state("malformed qa state: " + state);
            bound[part.substr(0, eq)] = part.substr(eq + 1);
        }
        return bound;
    }

    knowledge_graph graph_;
    composed_query query_;
};

}  // namespace

std::unique_ptr<core::environment> make_environment(knowledge_graph graph, composed_query query) {
    return std::make_unique<qa_env>(std::move(graph), std::move(query));
}

}  // namespace planlab::tasks::qa
