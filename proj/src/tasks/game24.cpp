#include "planlab/tasks/game24.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "planlab/core/text.hpp"

namespace planlab::tasks::game24 {

rational action::result() const {
    switch (op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        default: throw parse_error(std::string("unknown operator: ") + op);
    }
}

std::string action::render() const {
    return a.str() + " " + op + " " + b.str() + " = " + result().str();
}

std::string action::render_display() const {
    return a.str_rounded2() + " " + op + " " + b.str_rounded2() + " = " + result().str_rounded2();
}

action parse_action(const std::string& text) {
    // "a op b = c"; the claimed result must match the exact value.
    auto eq = text.find(" = ");
    if (eq == std::string::npos) throw parse_error("action missing '=': " + text);
    auto lhs = core::split(text.substr(0, eq), " ");
    if (lhs.size() != 3 || lhs[1].size() != 1) throw parse_error("malformed action: " + text);
    action act{rational::parse(lhs[0]), rational::parse(lhs[2]), lhs[1][0]};
    if (act.op != '+' && act.op != '-' && act.op != '*' && act.op != '/')
        throw parse_error("unknown operator in action: " + text);
    return act;
}

std::vector<rational> sorted_numbers(std::vector<rational> numbers) {
    std::sort(numbers.begin(), numbers.end());
    return numbers;
}

std::string render_state(const std::vector<rational>& sorted) {
    std::vector<std::string> parts;
    parts.reserve(sorted.size());
    for (const auto& v : sorted) parts.push_back(v.str());
    return core::join(parts, " ");
}

std::string render_state_display(const std::vector<rational>& sorted) {
    std::vector<std::string> parts;
    parts.reserve(sorted.size());
    for (const auto& v : sorted) parts.push_back(v.str_rounded2());
    return core::join(parts, " ");
}

std::vector<rational> parse_state(const std::string& text) {
    std::vector<rational> out;
    if (core::trim(text).empty()) return out;
    for (const auto& tok : core::split(core::trim(text), " ")) out.push_back(rational::parse(tok));
    return out;
}

std::vector<action> propose_actions_joint(const std::vector<rational>& numbers) {
    auto nums = sorted_numbers(numbers);
    if (nums.size() < 2) return {};
    std::set<std::string> seen;
    std::vector<action> out;
    auto add = [&](const action& act) {
        if (seen.insert(act.render()).second) out.push_back(act);
    };
    for (std::size_t i = 0; i < nums.size(); ++i) {
        for (std::size_t j = i + 1; j < nums.size(); ++j) {
            const rational& x = nums[i];
            const rational& y = nums[j];
            add({x, y, '+'});
            add({x, y, '*'});
            add({x, y, '-'});
            add({y, x, '-'});
            if (!y.is_zero()) add({x, y, '/'});
            if (!x.is_zero()) add({y, x, '/'});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const action& p, const action& q) { return p.render() < q.render(); });
    return out;
}

std::vector<pair_selection> propose_pairs(const std::vector<rational>& numbers) {
    auto nums = sorted_numbers(numbers);
    std::vector<pair_selection> out;
    if (nums.size() < 2) return out;
    // Demonstration order: adjacent pairs first, then widening gaps.
    for (std::size_t gap = 1; gap < nums.size(); ++gap) {
        for (std::size_t i = 0; i + gap < nums.size(); ++i) {
            const std::size_t j = i + gap;
            std::vector<std::string> parts;
            for (std::size_t k = 0; k < nums.size(); ++k) {
                std::string v = nums[k].str_rounded2();
                parts.push_back(k == i || k == j ? "(" + v + ")" : v);
            }
            out.push_back({i, j, core::join(parts, " ")});
        }
    }
    return out;
}

std::vector<action> propose_actions_for_pair(const std::vector<rational>& numbers,
                                             const pair_selection& pair) {
    auto nums = sorted_numbers(numbers);
    if (pair.i >= nums.size() || pair.j >= nums.size() || pair.i == pair.j)
        throw std::invalid_argument("pair selection out of range");
    const rational a = nums[pair.i];
    const rational b = nums[pair.j];
    std::vector<action> out;
    std::set<std::string> seen;
    auto add = [&](const action& act) {
        if (seen.insert(act.render()).second) out.push_back(act);
    };
    add({a, b, '+'});
    add({a, b, '*'});
    if (!b.is_zero()) add({a, b, '/'});
    if (!a.is_zero()) add({b, a, '/'});
    add({b, a, '-'});
    add({a, b, '-'});
    return out;
}

namespace {

// Working item during search/assembly: a value plus the expression producing
// it; composite items get parenthesized when consumed.
struct item {
    rational value;
    std::string expr;
    bool composite{false};
};

std::string wrap(const item& it) { return it.composite ? "(" + it.expr + ")" : it.expr; }

bool dfs_solve(std::vector<item>& items, const rational& target, std::vector<step>& steps,
               std::vector<action>& actions_out, std::string& expr_out) {
    if (items.size() == 1) {
        if (items[0].value == target) {
            expr_out = items[0].expr;
            return true;
        }
        return false;
    }
    std::vector<rational> values;
    values.reserve(items.size());
    for (const auto& it : items) values.push_back(it.value);
    for (const auto& act : propose_actions_joint(values)) {
        // Consume the first items carrying the operand values.
        std::size_t ai = items.size(), bi = items.size();
        for (std::size_t k = 0; k < items.size(); ++k) {
            if (ai == items.size() && items[k].value == act.a) {
                ai = k;
            } else if (bi == items.size() && items[k].value == act.b) {
                bi = k;
            }
        }
        if (ai == items.size() || bi == items.size()) continue;
        item produced{act.result(), wrap(items[ai]) + " " + act.op + " " + wrap(items[bi]), true};
        std::vector<item> next;
        next.reserve(items.size() - 1);
        for (std::size_t k = 0; k < items.size(); ++k)
            if (k != ai && k != bi) next.push_back(items[k]);
        next.push_back(produced);
        std::sort(next.begin(), next.end(),
                  [](const item& p, const item& q) { return p.value < q.value; });
        actions_out.push_back(act);
        if (dfs_solve(next, target, steps, actions_out, expr_out)) return true;
        actions_out.pop_back();
    }
    return false;
}

long long dfs_count(std::vector<rational> values, const rational& target) {
    std::sort(values.begin(), values.end());
    if (values.size() == 1) return values[0] == target ? 1 : 0;
    long long total = 0;
    for (const auto& act : propose_actions_joint(values)) {
        std::vector<rational> next;
        bool took_a = false, took_b = false;
        for (const auto& v : values) {
            if (!took_a && v == act.a) {
                took_a = true;
            } else if (!took_b && v == act.b) {
                took_b = true;
            } else {
                next.push_back(v);
            }
        }
        if (!took_a || !took_b) continue;
        next.push_back(act.result());
        total += dfs_count(std::move(next), target);
    }
    return total;
}

}  // namespace

std::optional<solution> brute_force_solve(const std::vector<rational>& numbers,
                                          const rational& target) {
    if (numbers.size() < 2 || numbers.size() > 4)
        throw std::invalid_argument("brute force handles 2..4 numbers");
    std::vector<item> items;
    for (const auto& v : sorted_numbers(numbers)) items.push_back({v, v.str(), false});
    std::vector<step> steps;
    std::vector<action> actions;
    std::string expr;
    if (!dfs_solve(items, target, steps, actions, expr)) return std::nullopt;
    solution sol;
    sol.steps = infer_provenance(numbers, actions);
    sol.expression = expr;
    return sol;
}

long long solution_path_count(const std::vector<rational>& numbers, const rational& target) {
    if (numbers.size() < 2 || numbers.size() > 4)
        throw std::invalid_argument("solution count handles 2..4 numbers");
    return dfs_count(numbers, target);
}

std::string assemble_expression(const std::vector<step>& steps) {
    if (steps.empty()) throw broken_provenance("no steps to assemble");
    std::vector<std::string> exprs(steps.size());
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const step& st = steps[k];
        auto operand = [&](const operand_source& src, const rational& value) -> std::string {
            if (src.from_input) return value.str();
            if (src.step_index >= k) throw broken_provenance("step consumes a later step's output");
            return "(" + exprs[src.step_index] + ")";
        };
        exprs[k] = operand(st.a_src, st.act.a) + " " + st.act.op + " " + operand(st.b_src, st.act.b);
    }
    return exprs.back();
}

namespace {

struct source_pool {
    std::vector<rational> values;
    std::vector<bool> from_input;
    std::vector<std::size_t> step_index;
    std::vector<bool> used;
};

// Assign each operand to an unconsumed source of equal value such that, at
// the end, every input and every intermediate output has been consumed
// exactly once (the final output excepted). Tiny backtracking search.
bool assign(source_pool& pool, const std::vector<action>& actions, std::size_t step_i,
            int operand_i, std::vector<step>& out) {
    if (step_i == actions.size()) {
        std::size_t unused = 0;
        for (bool u : pool.used)
            if (!u) ++unused;
        return unused == 0;
    }
    const action& act = actions[step_i];
    const rational want = operand_i == 0 ? act.a : act.b;
    for (std::size_t k = 0; k < pool.values.size(); ++k) {
        if (pool.used[k] || pool.values[k] != want) continue;
        pool.used[k] = true;
        operand_source src{pool.from_input[k], pool.step_index[k]};
        if (operand_i == 0) {
            out[step_i].act = act;
            out[step_i].a_src = src;
            bool ok = assign(pool, actions, step_i, 1, out);
            if (ok) return true;
        } else {
            out[step_i].b_src = src;
            // The step's output becomes available; the final step's output
            // stays marked used (nothing consumes it).
            pool.values.push_back(act.result());
            pool.from_input.push_back(false);
            pool.step_index.push_back(step_i);
            pool.used.push_back(step_i + 1 == actions.size());
            bool ok = assign(pool, actions, step_i + 1, 0, out);
            if (ok) return true;
            pool.values.pop_back();
            pool.from_input.pop_back();
            pool.step_index.pop_back();
            pool.used.pop_back();
        }
        pool.used[k] = false;
    }
    return false;
}

}  // namespace

std::vector<step> infer_provenance(const std::vector<rational>& inputs,
                                   const std::vector<action>& actions) {
    source_pool pool;
    for (const auto& v : sorted_numbers(inputs)) {
        pool.values.push_back(v);
        pool.from_input.push_back(true);
        pool.step_index.push_back(0);
        pool.used.push_back(false);
    }
    std::vector<step> out(actions.size());
    if (!assign(pool, actions, 0, 0, out))
        throw broken_provenance("a step consumes a value no prior step or input supplies");
    return out;
}

// =====================
// expression verifier
// =====================

namespace {

struct expr_parser {
    const std::string& text;
    std::size_t pos{0};
    std::vector<rational> literals;

    void skip_ws() {
        while (pos < text.size() && text[pos] == ' ') ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    rational parse_expr() {
        rational v = parse_term();
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos;
                v = v + parse_term();
            } else if (c == '-') {
                ++pos;
                v = v - parse_term();
            } else {
                return v;
            }
        }
    }

    rational parse_term() {
        rational v = parse_factor();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos;
                v = v * parse_factor();
            } else if (c == '/') {
                ++pos;
                rational d = parse_factor();
                if (d.is_zero()) throw parse_error("division by zero in expression");
                v = v / d;
            } else {
                return v;
            }
        }
    }

    rational parse_factor() {
        skip_ws();
        if (eat('(')) {
            rational v = parse_expr();
            if (!eat(')')) throw parse_error("missing ')' in expression");
            return v;
        }
        if (eat('-')) return -parse_factor();
        std::size_t start = pos;
        while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
            ++pos;
        if (pos == start) throw parse_error("expected number at position " + std::to_string(start));
        rational v = rational::parse(text.substr(start, pos - start));
        literals.push_back(v);
        return v;
    }
};

}  // namespace

bool verify_expression(const std::vector<rational>& numbers, const std::string& expr,
                       const rational& target) {
    std::string body = core::trim(expr);
    // Tolerate a trailing "= 24" on answer lines.
    auto eq = body.rfind(" = ");
    if (eq != std::string::npos) {
        try {
            if (rational::parse(core::trim(body.substr(eq + 3))) == target)
                body = core::trim(body.substr(0, eq));
        } catch (const std::exception&) {
            // not a value suffix; parse the whole string
        }
    }
    expr_parser p{body};
    rational value;
    try {
        value = p.parse_expr();
        p.skip_ws();
        if (p.pos != body.size()) return false;
    } catch (const std::exception&) {
        return false;
    }
    if (value != target) return false;
    return sorted_numbers(p.literals) == sorted_numbers(numbers);
}

// =====================
// environment adapter
// =====================

namespace {

class game24_env final : public core::environment {
public:
    game24_env(std::vector<rational> numbers, rational target)
        : numbers_(sorted_numbers(std::move(numbers))), target_(target) {}

    core::task_kind kind() const override { return core::task_kind::game24; }

    core::state_key initial_state() const override { return render_state(numbers_); }

    std::vector<core::action_key> applicable_actions(const core::state_key& state) const override {
        auto nums = parse_checked(state);
        std::vector<core::action_key> out;
        for (const auto& act : propose_actions_joint(nums)) out.push_back(act.render());
        return out;
    }

    core::state_key apply_action(const core::state_key& state, const core::action_key& action_text) const override {
        auto nums = parse_checked(state);
        action act = parse_action(action_text);
        if (act.op == '/' && act.b.is_zero())
            throw core::inapplicable_action(action_text, "nonzero divisor");
        // The rendered result is part of the action; it must be the exact value.
        if (action_text != act.render())
            throw core::inapplicable_action(action_text, "canonical action rendering");
        bool took_a = false, took_b = false;
        std::vector<rational> next;
        for (const auto& v : nums) {
            if (!took_a && v == act.a) {
                took_a = true;
            } else if (!took_b && v == act.b) {
                took_b = true;
            } else {
                next.push_back(v);
            }
        }
        if (!took_a || !took_b)
            throw core::inapplicable_action(action_text, "both operands present in the state");
        next.push_back(act.result());
        return render_state(sorted_numbers(next));
    }

    bool is_goal(const core::state_key& state) const override {
        auto nums = parse_checked(state);
        return nums.size() == 1 && nums[0] == target_;
    }

    std::string problem_key() const override {
        return "game24|" + render_state(numbers_) + "|" + target_.str();
    }

    std::string goal_text() const override { return "reach " + target_.str(); }

    std::optional<std::string> extract_answer(const core::trajectory& traj) const override {
        if (!is_goal(traj.final_state())) return std::nullopt;
        std::vector<action> actions;
        actions.reserve(traj.steps.size());
        try {
            for (const auto& st : traj.steps) actions.push_back(parse_action(st.action));
            return assemble_expression(infer_provenance(numbers_, actions));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    bool check_answer(const std::string& answer) const override {
        return verify_expression(numbers_, answer, target_);
    }

    core::trajectory oracle_trajectory() const override {
        auto sol = brute_force_solve(numbers_, target_);
        if (!sol) throw std::runtime_error("instance is unsolvable: " + render_state(numbers_));
        core::trajectory traj;
        traj.initial_state = initial_state();
        core::state_key state = traj.initial_state;
        for (const auto& st : sol->steps) {
            auto proposals = applicable_actions(state);
            core::state_key next = apply_action(state, st.act.render());
            traj.steps.push_back({st.act.render(), next, proposals});
            state = next;
        }
        traj.answer = sol->expression;
        return traj;
    }

private:
    std::vector<rational> parse_checked(const core::state_key& state) const {
        std::vector<rational> nums;
        try {
            nums = parse_state(state);
        } catch (const std::exception&) {
            throw core::unknown_state("malformed game24 state: " + state);
        }
        if (nums.empty() || nums.size() > numbers_.size())
            throw core::unknown_state("game24 state size out of range: " + state);
        if (sorted_numbers(nums) != nums)
            throw core::unknown_state("game24 state not in canonical order: " + state);
        return nums;
    }

    std::vector<rational> numbers_;
    rational target_;
};

}  // namespace

std::unique_ptr<core::environment> make_environment(std::vector<rational> numbers, rational target) {
    return std::make_unique<game24_env>(std::move(numbers), target);
}

}  // namespace planlab::tasks::game24
