#include "planlab/tasks/blocksworld.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "planlab/core/text.hpp"

namespace planlab::tasks::blocksworld {

const std::vector<std::string>& color_palette() {
    static const std::vector<std::string> palette = {"red",    "blue",  "orange", "yellow",
                                                     "white",  "purple", "cyan",  "brown",
                                                     "black",  "magenta", "green", "silver"};
    return palette;
}

namespace {

const std::string& color(int block) {
    const auto& palette = color_palette();
    if (block < 0 || block >= static_cast<int>(palette.size()))
        throw std::invalid_argument("block id out of palette range");
    return palette[static_cast<std::size_t>(block)];
}

int color_index(const std::string& name) {
    const auto& palette = color_palette();
    for (std::size_t i = 0; i < palette.size(); ++i)
        if (palette[i] == name) return static_cast<int>(i);
    throw malformed_description("unknown block color: " + name);
}

std::string blk(int b) { return "the " + color(b) + " block"; }

std::string join_clauses(const std::vector<std::string>& clauses) {
    if (clauses.empty()) return "";
    if (clauses.size() == 1) return clauses[0];
    std::string out;
    for (std::size_t i = 0; i + 1 < clauses.size(); ++i) {
        if (i) out += ", ";
        out += clauses[i];
    }
    return out + " and " + clauses.back();
}

std::string prop_clear(int b) { return "Clear(" + color(b) + ")"; }
std::string prop_on_table(int b) { return "OnTable(" + color(b) + ")"; }
std::string prop_holding(int b) { return "Holding(" + color(b) + ")"; }
std::string prop_on(int x, int y) { return "On(" + color(x) + ", " + color(y) + ")"; }

}  // namespace

void state::canonicalize() {
    for (const auto& st : stacks)
        if (st.empty()) throw malformed_description("empty stack in state");
    std::sort(stacks.begin(), stacks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

bool state::is_clear(int block) const {
    for (const auto& st : stacks)
        if (st.back() == block) return true;
    return false;
}

bool state::on_table(int block) const {
    for (const auto& st : stacks)
        if (st.front() == block) return true;
    return false;
}

std::optional<int> state::below_of(int block) const {
    for (const auto& st : stacks)
        for (std::size_t i = 1; i < st.size(); ++i)
            if (st[i] == block) return st[i - 1];
    return std::nullopt;
}

std::vector<int> state::blocks() const {
    std::vector<int> out;
    for (const auto& st : stacks) out.insert(out.end(), st.begin(), st.end());
    if (holding) out.push_back(*holding);
    std::sort(out.begin(), out.end());
    return out;
}

std::string action::render() const {
    switch (kind) {
        case schema::pick_up: return "pick up " + blk(x);
        case schema::put_down: return "put down " + blk(x);
        case schema::stack: return "stack " + blk(x) + " on top of " + blk(y);
        case schema::unstack: return "unstack " + blk(x) + " from on top of " + blk(y);
    }
    return "";
}

action parse_action(const std::string& text) {
    std::string t = core::lowercase(core::trim(text));
    if (!t.empty() && t.back() == '.') t = core::trim(t.substr(0, t.size() - 1));
    auto read_color = [&](std::size_t pos, std::size_t* after) {
        const std::string marker = "the ";
        if (t.compare(pos, marker.size(), marker) != 0)
            throw malformed_description("malformed action: " + text);
        auto end = t.find(" block", pos + marker.size());
        if (end == std::string::npos) throw malformed_description("malformed action: " + text);
        *after = end + 6;
        return color_index(t.substr(pos + marker.size(), end - pos - marker.size()));
    };
    std::size_t after = 0;
    if (core::starts_with(t, "pick up ")) {
        int x = read_color(8, &after);
        return {schema::pick_up, x, 0};
    }
    if (core::starts_with(t, "put down ")) {
        int x = read_color(9, &after);
        return {schema::put_down, x, 0};
    }
    if (core::starts_with(t, "stack ")) {
        int x = read_color(6, &after);
        const std::string mid = " on top of ";
        if (t.compare(after, mid.size(), mid) != 0) throw malformed_description("malformed action: " + text);
        int y = read_color(after + mid.size(), &after);
        return {schema::stack, x, y};
    }
    if (core::starts_with(t, "unstack ")) {
        int x = read_color(8, &after);
        const std::string mid = " from on top of ";
        if (t.compare(after, mid.size(), mid) != 0) throw malformed_description("malformed action: " + text);
        int y = read_color(after + mid.size(), &after);
        return {schema::unstack, x, y};
    }
    throw malformed_description("unknown action schema: " + text);
}

std::vector<action> grounded_actions(int block_count) {
    std::vector<action> out;
    for (int x = 0; x < block_count; ++x) {
        out.push_back({schema::pick_up, x, 0});
        out.push_back({schema::put_down, x, 0});
        for (int y = 0; y < block_count; ++y) {
            if (x == y) continue;
            out.push_back({schema::stack, x, y});
            out.push_back({schema::unstack, x, y});
        }
    }
    return out;
}

std::vector<proposal> applicable_with_reasons(const state& s) {
    std::vector<proposal> out;
    auto blocks = s.blocks();
    for (int x : blocks) {
        if (s.holding && *s.holding == x) {
            out.push_back({{schema::put_down, x, 0}, {prop_holding(x)}});
            for (int y : blocks) {
                if (y == x || !s.is_clear(y)) continue;
                out.push_back({{schema::stack, x, y}, {prop_holding(x), prop_clear(y)}});
            }
            continue;
        }
        if (s.holding) continue;  // hand busy: nothing else is applicable
        if (!s.is_clear(x)) continue;
        if (s.on_table(x)) {
            out.push_back({{schema::pick_up, x, 0}, {prop_on_table(x), prop_clear(x), "HandEmpty"}});
        } else {
            int y = *s.below_of(x);
            out.push_back({{schema::unstack, x, y}, {prop_on(x, y), prop_clear(x), "HandEmpty"}});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const proposal& a, const proposal& b) { return a.act.render() < b.act.render(); });
    return out;
}

state apply(const state& s, const action& a) {
    const std::string name = a.render();
    state next = s;
    switch (a.kind) {
        case schema::pick_up: {
            if (s.holding) throw precondition_violated(name, "HandEmpty");
            if (!s.on_table(a.x)) throw precondition_violated(name, prop_on_table(a.x));
            if (!s.is_clear(a.x)) throw precondition_violated(name, prop_clear(a.x));
            std::erase_if(next.stacks, [&](const auto& st) { return st.front() == a.x; });
            next.holding = a.x;
            break;
        }
        case schema::put_down: {
            if (!s.holding || *s.holding != a.x) throw precondition_violated(name, prop_holding(a.x));
            next.holding.reset();
            next.stacks.push_back({a.x});
            break;
        }
        case schema::stack: {
            if (!s.holding || *s.holding != a.x) throw precondition_violated(name, prop_holding(a.x));
            if (a.x == a.y) throw precondition_violated(name, "distinct blocks");
            if (!s.is_clear(a.y)) throw precondition_violated(name, prop_clear(a.y));
            next.holding.reset();
            for (auto& st : next.stacks)
                if (st.back() == a.y) st.push_back(a.x);
            break;
        }
        case schema::unstack: {
            if (s.holding) throw precondition_violated(name, "HandEmpty");
            auto below = s.below_of(a.x);
            if (!below || *below != a.y) throw precondition_violated(name, prop_on(a.x, a.y));
            if (!s.is_clear(a.x)) throw precondition_violated(name, prop_clear(a.x));
            for (auto& st : next.stacks)
                if (st.back() == a.x) st.pop_back();
            next.holding = a.x;
            break;
        }
    }
    next.canonicalize();
    return next;
}

goal_constraints goal_constraints::make(std::vector<std::pair<int, int>> pairs) {
    std::set<int> uppers, lowers;
    std::map<int, int> above;  // y -> x stacked on it
    for (const auto& [x, y] : pairs) {
        if (x == y) throw std::invalid_argument("a block cannot rest on itself");
        if (!uppers.insert(x).second) throw std::invalid_argument("block constrained onto two targets");
        if (!lowers.insert(y).second) throw std::invalid_argument("two blocks constrained onto one target");
    }
    for (const auto& [x, y] : pairs) above[y] = x;
    for (const auto& [x, y] : pairs) {
        // Walk upward from x; meeting y again means a cycle.
        int cur = x;
        std::set<int> seen{y};
        while (above.count(cur)) {
            cur = above[cur];
            if (!seen.insert(cur).second) throw std::invalid_argument("cyclic goal constraints");
        }
    }
    goal_constraints g;
    g.on_pairs = std::move(pairs);
    return g;
}

bool goal_satisfied(const state& s, const goal_constraints& goal) {
    for (const auto& [x, y] : goal.on_pairs) {
        auto below = s.below_of(x);
        if (!below || *below != y) return false;
    }
    return true;
}

std::string render_state(const state& s) {
    state canon = s;
    canon.canonicalize();
    std::vector<std::string> clauses;
    auto blocks = canon.blocks();
    for (int b : blocks)
        if (canon.is_clear(b)) clauses.push_back(blk(b) + " is clear");
    if (canon.holding) {
        clauses.push_back(blk(*canon.holding) + " is in the hand");
        clauses.push_back("the hand is holding " + blk(*canon.holding));
    } else {
        clauses.push_back("the hand is empty");
    }
    for (int b : blocks) {
        auto below = canon.below_of(b);
        if (below) clauses.push_back(blk(b) + " is on top of " + blk(*below));
    }
    for (int b : blocks)
        if (canon.on_table(b)) clauses.push_back(blk(b) + " is on the table");
    return join_clauses(clauses);
}

namespace {

int clause_color(const std::string& clause, const std::string& prefix, const std::string& suffix) {
    return color_index(clause.substr(prefix.size(), clause.size() - prefix.size() - suffix.size()));
}

}  // namespace

state parse_state(const std::string& text) {
    std::string t = core::trim(text);
    if (core::starts_with(t, "I have that, ")) t = t.substr(13);
    if (!t.empty() && t.back() == '.') t = t.substr(0, t.size() - 1);
    // Normalize " and "...-joined clause lists onto plain commas.
    std::string norm;
    for (std::size_t i = 0; i < t.size();) {
        if (t.compare(i, 9, " and the ") == 0) {
            norm += ", the ";
            i += 9;
        } else {
            norm += t[i++];
        }
    }

    std::set<int> clear_claims, table_blocks;
    std::map<int, int> on;  // x sits on on[x]
    std::optional<int> holding;
    bool hand_empty_seen = false;

    for (auto& raw : core::split(norm, ",")) {
        std::string clause = core::trim(raw);
        if (clause.empty()) continue;
        if (clause == "the hand is empty") {
            hand_empty_seen = true;
        } else if (clause.ends_with(" is clear")) {
            clear_claims.insert(clause_color(clause, "the ", " block is clear"));
        } else if (clause.ends_with(" is on the table")) {
            table_blocks.insert(clause_color(clause, "the ", " block is on the table"));
        } else if (clause.ends_with(" is in the hand")) {
            holding = clause_color(clause, "the ", " block is in the hand");
        } else if (core::starts_with(clause, "the hand is holding ")) {
            int b = clause_color(clause, "the hand is holding the ", " block");
            if (holding && *holding != b) throw malformed_description("two different held blocks");
            holding = b;
        } else if (clause.find(" is on top of ") != std::string::npos) {
            auto mid = clause.find(" block is on top of the ");
            if (!core::starts_with(clause, "the ") || mid == std::string::npos ||
                !clause.ends_with(" block"))
                throw malformed_description("malformed clause: " + clause);
            int x = color_index(clause.substr(4, mid - 4));
            int y = color_index(clause.substr(mid + 24, clause.size() - mid - 24 - 6));
            if (on.count(x)) throw malformed_description("block placed on two supports");
            on[x] = y;
        } else {
            throw malformed_description("unrecognized clause: " + clause);
        }
    }
    if (hand_empty_seen && holding) throw malformed_description("hand both empty and holding");

    // Rebuild stacks from the table up.
    std::map<int, int> above;
    std::set<int> supports;
    for (const auto& [x, y] : on) {
        if (!supports.insert(y).second) throw malformed_description("two blocks on one support");
        above[y] = x;
    }
    state s;
    s.holding = holding;
    std::set<int> placed;
    for (int base : table_blocks) {
        std::vector<int> st{base};
        if (!placed.insert(base).second) throw malformed_description("block on table twice");
        int cur = base;
        while (above.count(cur)) {
            cur = above[cur];
            if (!placed.insert(cur).second) throw malformed_description("cyclic stack description");
            st.push_back(cur);
        }
        s.stacks.push_back(std::move(st));
    }
    for (const auto& [x, y] : on)
        if (!placed.count(x) || !placed.count(y))
            throw malformed_description("stacked block never reaches the table");
    if (holding && placed.count(*holding))
        throw malformed_description("held block also placed");
    // Clear claims must match the geometry exactly.
    std::set<int> actual_clear;
    for (const auto& st : s.stacks) actual_clear.insert(st.back());
    if (clear_claims != actual_clear) throw malformed_description("clear clauses disagree with stacks");
    s.canonicalize();
    return s;
}

std::string render_goal(const goal_constraints& goal) {
    std::vector<std::string> clauses;
    for (const auto& [x, y] : goal.on_pairs) clauses.push_back(blk(x) + " is on top of " + blk(y));
    return join_clauses(clauses);
}

goal_constraints parse_goal(const std::string& text) {
    std::string t = core::trim(text);
    if (!t.empty() && t.back() == '.') t = t.substr(0, t.size() - 1);
    std::string norm;
    for (std::size_t i = 0; i < t.size();) {
        if (t.compare(i, 9, " and the ") == 0) {
            norm += ", the ";
            i += 9;
        } else {
            norm += t[i++];
        }
    }
    std::vector<std::pair<int, int>> pairs;
    for (auto& raw : core::split(norm, ",")) {
        std::string clause = core::trim(raw);
        if (clause.empty()) continue;
        auto mid = clause.find(" block is on top of the ");
        if (!core::starts_with(clause, "the ") || mid == std::string::npos || !clause.ends_with(" block"))
            throw malformed_description("malformed goal clause: " + clause);
        int x = color_index(clause.substr(4, mid - 4));
        int y = color_index(clause.substr(mid + 24, clause.size() - mid - 24 - 6));
        pairs.emplace_back(x, y);
    }
    return goal_constraints::make(std::move(pairs));
}

std::string render_plan(const std::vector<action>& plan) {
    std::string out;
    for (const auto& a : plan) out += a.render() + "\n";
    out += "[PLAN END]";
    return out;
}

std::vector<action> parse_plan(const std::string& text) {
    std::vector<action> plan;
    for (auto& raw : core::split(text, "\n")) {
        std::string line = core::trim(raw);
        if (line.empty()) continue;
        if (line == "[PLAN END]") break;
        plan.push_back(parse_action(line));
    }
    return plan;
}

bigint count_state_descriptions(int block_count) {
    if (block_count < 1) throw std::invalid_argument("need at least one block");
    bigint factorial = 1;
    for (int i = 2; i <= block_count; ++i) factorial *= i;
    // Term-wise sum of C(K-1, k); must reproduce 2^(K-1) exactly.
    bigint stackings = 0;
    bigint binom = 1;
    for (int k = 0; k <= block_count - 1; ++k) {
        stackings += binom;
        binom = binom * (block_count - 1 - k) / (k + 1);
    }
    bigint power = bigint(1) << (block_count - 1);
    if (stackings != power) throw std::logic_error("binomial sum disagrees with 2^(K-1)");
    return factorial * stackings;
}

namespace {

bigint enumerate_orderings(std::vector<int> remaining) {
    if (remaining.empty()) return 1;
    bigint total = 0;
    // Choose the first stack: every ordered sequence of a nonempty subset.
    std::sort(remaining.begin(), remaining.end());
    const std::size_t n = remaining.size();
    std::vector<int> chosen;
    // Enumerate ordered selections via permutation of subsets.
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> subset;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) subset.push_back(remaining[i]);
        std::sort(subset.begin(), subset.end());
        do {
            std::vector<int> rest;
            for (std::size_t i = 0; i < n; ++i)
                if (!(mask & (1u << i))) rest.push_back(remaining[i]);
            total += enumerate_orderings(rest);
        } while (std::next_permutation(subset.begin(), subset.end()));
    }
    return total;
}

}  // namespace

description_census enumerate_state_descriptions(int block_count) {
    if (block_count < 1 || block_count > 7)
        throw std::invalid_argument("explicit enumeration intended for 1..7 blocks");
    std::vector<int> blocks;
    for (int i = 0; i < block_count; ++i) blocks.push_back(i);
    description_census census;
    census.hand_empty = enumerate_orderings(blocks);
    census.holding = 0;
    for (int held = 0; held < block_count; ++held) {
        std::vector<int> rest;
        for (int b : blocks)
            if (b != held) rest.push_back(b);
        census.holding += enumerate_orderings(rest);
    }
    return census;
}

dl_table_sizes table_sizes(int block_count) {
    bigint states = count_state_descriptions(block_count);
    int bits_per_block = 1;
    while ((1 << bits_per_block) < block_count) ++bits_per_block;
    bigint k = block_count;
    dl_table_sizes sizes;
    sizes.direct_bits_cubic = states * k * k * k * bits_per_block;
    sizes.policy_bits_quadratic = states * k * k * bits_per_block;
    return sizes;
}

std::vector<action> optimal_plan(const state& init, const goal_constraints& goal) {
    state start = init;
    start.canonicalize();
    if (start.blocks().size() > 8) throw std::invalid_argument("optimal planning capped at 8 blocks");
    if (goal_satisfied(start, goal)) return {};

    std::map<std::string, std::pair<std::string, action>> parent;  // state -> (prev, action)
    std::deque<state> frontier{start};
    parent[render_state(start)] = {"", {}};
    while (!frontier.empty()) {
        state cur = frontier.front();
        frontier.pop_front();
        std::string cur_key = render_state(cur);
        for (const auto& prop : applicable_with_reasons(cur)) {
            state next = apply(cur, prop.act);
            std::string key = render_state(next);
            if (parent.count(key)) continue;
            parent[key] = {cur_key, prop.act};
            if (goal_satisfied(next, goal)) {
                std::vector<action> plan{prop.act};
                std::string walk = cur_key;
                while (walk != render_state(start)) {
                    auto& [prev, act] = parent[walk];
                    plan.push_back(act);
                    walk = prev;
                }
                std::reverse(plan.begin(), plan.end());
                return plan;
            }
            frontier.push_back(next);
        }
    }
    throw unreachable("goal unreachable from the given state");
}

// =====================
// environment adapter
// =====================

namespace {

class blocksworld_env final : public core::environment {
public:
    blocksworld_env(state init, goal_constraints goal) : init_(std::move(init)), goal_(std::move(goal)) {
        init_.canonicalize();
    }

    core::task_kind kind() const override { return core::task_kind::blocksworld; }

    core::state_key initial_state() const override { return render_state(init_); }

    std::vector<core::action_key> applicable_actions(const core::state_key& key) const override {
        state s = parse_checked(key);
        std::vector<core::action_key> out;
        for (const auto& prop : applicable_with_reasons(s)) out.push_back(prop.act.render());
        return out;
    }

    core::state_key apply_action(const core::state_key& key, const core::action_key& action_text) const override {
        state s = parse_checked(key);
        action a{};
        try {
            a = parse_action(action_text);
        } catch (const malformed_description& e) {
            throw core::inapplicable_action(action_text, e.what());
        }
        try {
            return render_state(apply(s, a));
        } catch (const precondition_violated& e) {
            throw core::inapplicable_action(action_text, e.proposition_name);
        }
    }

    bool is_goal(const core::state_key& key) const override {
        return goal_satisfied(parse_checked(key), goal_);
    }

    std::string problem_key() const override {
        return "blocksworld|" + render_state(init_) + "|goal: " + render_goal(goal_);
    }

    std::string goal_text() const override { return render_goal(goal_); }

    std::optional<std::string> extract_answer(const core::trajectory& traj) const override {
        if (!is_goal(traj.final_state())) return std::nullopt;
        std::vector<action> plan;
        try {
            for (const auto& st : traj.steps) plan.push_back(parse_action(st.action));
        } catch (const malformed_description&) {
            return std::nullopt;
        }
        return render_plan(plan);
    }

    bool check_answer(const std::string& answer) const override {
        try {
            state s = init_;
            for (const auto& a : parse_plan(answer)) s = apply(s, a);
            return goal_satisfied(s, goal_);
        } catch (const std::exception&) {
            return false;
        }
    }

    core::trajectory oracle_trajectory() const override {
        auto plan = optimal_plan(init_, goal_);
        core::trajectory traj;
        traj.initial_state = initial_state();
        core::state_key cur = traj.initial_state;
        for (const auto& a : plan) {
            auto proposals = applicable_actions(cur);
            core::state_key next = apply_action(cur, a.render());
            traj.steps.push_back({a.render(), next, proposals});
            cur = next;
        }
        traj.answer = render_plan(plan);
        return traj;
    }

private:
    state parse_checked(const core::state_key& key) const {
        state s;
        try {
            s = parse_state(key);
        } catch (const malformed_description& e) {
            throw core::unknown_state(e.what());
        }
        if (s.blocks() != init_.blocks())
            throw core::unknown_state("state does not conserve the block set");
        return s;
    }

    state init_;
    goal_constraints goal_;
};

}  // namespace

std::unique_ptr<core::environment> make_environment(state init, goal_constraints goal) {
    return std::make_unique<blocksworld_env>(std::move(init), std::move(goal));
}

}  // namespace planlab::tasks::blocksworld
