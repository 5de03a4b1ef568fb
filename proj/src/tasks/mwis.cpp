#include "planlab/tasks/mwis.hpp"

#include <algorithm>
#include <cassert>

#include "planlab/core/text.hpp"

namespace planlab::tasks::mwis {

namespace {

void require_size(const std::vector<long long>& input) {
    if (input.size() < 2) throw std::invalid_argument("mwis input needs at least 2 elements");
}

std::string num(long long v) { return std::to_string(v); }

}  // namespace

solution dp_solve(const std::vector<long long>& input) {
    require_size(input);
    const std::size_t n = input.size();
    solution s;
    s.dp.assign(n, 0);
    s.dp[n - 1] = std::max(input[n - 1], 0LL);
    s.dp[n - 2] = std::max({input[n - 1], input[n - 2], 0LL});
    for (std::size_t i = n - 2; i-- > 0;)
        s.dp[i] = std::max({s.dp[i + 1], input[i] + s.dp[i + 2], 0LL});

    bool can_access_next_item = true;
    s.marks.reserve(n);
    for (std::size_t i = 0; i + 2 < n; ++i) {
        if (s.dp[i] == input[i] + s.dp[i + 2] && can_access_next_item) {
            s.marks.push_back(1);
            can_access_next_item = false;
        } else {
            s.marks.push_back(2);
            can_access_next_item = true;
        }
    }
    if (s.dp[n - 2] == input[n - 2] && can_access_next_item) {
        s.marks.push_back(1);
        can_access_next_item = false;
    } else {
        s.marks.push_back(2);
        can_access_next_item = true;
    }
    if (s.dp[n - 1] == input[n - 1] && can_access_next_item)
        s.marks.push_back(1);
    else
        s.marks.push_back(2);

    for (std::size_t i = 0; i < n; ++i)
        if (s.marks[i] == 1) s.sum += input[i];
    return s;
}

solution brute_force(const std::vector<long long>& input) {
    require_size(input);
    const std::size_t n = input.size();
    if (n > 24) throw too_large("brute force capped at n = 24, got " + std::to_string(n));

    long long best_sum = 0;  // empty selection always allowed
    std::vector<int> best_marks(n, 2);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (mask & (mask << 1)) continue;  // adjacent pair selected
        long long sum = 0;
        std::vector<int> marks(n, 2);
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                sum += input[i];
                marks[i] = 1;
            }
        if (sum > best_sum || (sum == best_sum && marks < best_marks)) {
            best_sum = sum;
            best_marks = marks;
        }
    }
    solution s = dp_solve(input);  // reuse dp values for the dp field
    s.marks = best_marks;
    s.sum = best_sum;
    return s;
}

std::string render_marks(const std::vector<int>& marks) {
    std::string out = "[";
    for (std::size_t i = 0; i < marks.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(marks[i]);
    }
    return out + "]";
}

std::string render_input(const std::vector<long long>& input) {
    std::string out = "[";
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (i) out += ", ";
        out += num(input[i]);
    }
    return out + "]";
}

namespace {

// dp fill line for position i, given already-computed suffix values.
std::string dp_line(const std::vector<long long>& in, const std::vector<long long>& dp,
                    std::size_t i, trace_style style) {
    const std::size_t n = in.size();
    std::string s = "dp[" + num(static_cast<long long>(i)) + "] = ";
    if (i == n - 1) {
        s += "max(input[" + num(static_cast<long long>(i)) + "], 0) = max(" + num(in[i]) + ", 0) = " + num(dp[i]);
    } else if (i == n - 2) {
        s += "max(input[" + num(static_cast<long long>(i)) + "], input[" + num(static_cast<long long>(i + 1)) +
             "], 0) = max(" + num(in[i]) + ", " + num(in[i + 1]) + ", 0) = " + num(dp[i]);
    } else {
        s += "max(dp[" + num(static_cast<long long>(i + 1)) + "], input[" + num(static_cast<long long>(i)) +
             "] + dp[" + num(static_cast<long long>(i + 2)) + "], 0) = max(" + num(dp[i + 1]) + ", " +
             num(in[i]) + " + " + num(dp[i + 2]) + ", 0)";
        if (style == trace_style::explicit_values)
            s += " = max(" + num(dp[i + 1]) + ", " + num(in[i] + dp[i + 2]) + ", 0)";
        s += " = " + num(dp[i]);
    }
    return s;
}

// Reconstruction line for position i. `can` is the flag before the decision;
// `last` suppresses the trailing update sentence on the final line.
std::string recon_line(const std::vector<long long>& in, const std::vector<long long>& dp,
                       std::size_t i, bool can, trace_style style) {
    const std::size_t n = in.size();
    const bool last = (i == n - 1);
    const std::string idx = num(static_cast<long long>(i));
    const bool pair_form = i + 2 < n;
    const bool identity = pair_form ? dp[i] == in[i] + dp[i + 2] : dp[i] == in[i];
    const bool selected = identity && can;

    std::string out;
    if (style == trace_style::implicit) {
        if (pair_form) {
            const std::string expr = "input[" + idx + "] + dp[" + num(static_cast<long long>(i + 2)) + "]";
            const std::string vals = num(in[i]) + " + " + num(dp[i + 2]);
            if (selected)
                out = "Since dp[" + idx + "] == " + expr + " (" + num(dp[i]) + " == " + vals +
                      ") and can_use_next_item == True, we store output[" + idx + "] = 1.";
            else
                out = "Since dp[" + idx + "] != " + expr + " (" + num(dp[i]) + " != " + vals +
                      ") or can_use_next_item == False, we store output[" + idx + "] = 2.";
        } else {
            if (selected)
                out = "Since dp[" + idx + "] == input[" + idx + "] (" + num(dp[i]) + " == " + num(in[i]) +
                      ") and can_use_next_item == True, we store output[" + idx + "] = 1.";
            else
                out = "Since dp[" + idx + "] != input[" + idx + "] (" + num(dp[i]) + " != " + num(in[i]) +
                      ") or can_use_next_item == False, we store output[" + idx + "] = 2.";
        }
    } else {
        // Explicit style: operand values are restated, and a line never prints
        // an identity that is numerically false.
        if (!can) {
            out = "Since can_use_next_item == False, we store output[" + idx + "] = 2.";
        } else if (pair_form) {
            const std::string k2 = num(static_cast<long long>(i + 2));
            const long long sum = in[i] + dp[i + 2];
            out = "Since dp[" + idx + "]=" + num(dp[i]) + ", input[" + idx + "]=" + num(in[i]) +
                  ", dp[" + k2 + "]=" + num(dp[i + 2]) + ", input[" + idx + "] + dp[" + k2 + "] = " + num(sum);
            if (identity)
                out += " == " + num(dp[i]) + " = dp[" + idx + "] and can_use_next_item == True, we store output[" +
                       idx + "] = 1.";
            else
                out += " != " + num(dp[i]) + " = dp[" + idx + "], we store output[" + idx + "] = 2.";
        } else {
            out = "Since dp[" + idx + "] = " + num(dp[i]) + ", input[" + idx + "] = " + num(in[i]) + ", dp[" +
                  idx + "] ";
            if (identity)
                out += "== input[" + idx + "] and can_use_next_item == True, we store output[" + idx + "] = 1.";
            else
                out += "!= input[" + idx + "], we store output[" + idx + "] = 2.";
        }
    }
    if (!last) {
        if (selected)
            out += " We update can_use_next_item = False.";
        else
            out += " We update can_use_next_item = True.";
    }
    return out;
}

}  // namespace

std::string emit_trace(const std::vector<long long>& input, trace_style style) {
    const solution sol = dp_solve(input);
    const std::size_t n = input.size();

    std::string out = "Let's solve input = " + render_input(input) + ".\n\n";
    if (style == trace_style::explicit_values) {
        out += "There are " + std::to_string(n) +
               " numbers in the input sequence, so we will use a list of size " + std::to_string(n) +
               " to store the dynamic programming values. We initialize all values to 0.\n";
    }
    for (std::size_t i = n; i-- > 0;) out += dp_line(input, sol.dp, i, style) + "\n";
    out +=
        "\nFinally, we reconstruct the lexicographically smallest subsequence that fulfills the "
        "task objective by selecting numbers as follows. We store the result on a list named "
        "\"output\".\n\n";
    out += "Let can_use_next_item = True.\n";
    bool can = true;
    for (std::size_t i = 0; i < n; ++i) {
        out += recon_line(input, sol.dp, i, can, style) + "\n";
        can = (sol.marks[i] == 1) ? false : true;
    }
    out += "\nReconstructing all together, output=" + render_marks(sol.marks) + ".\n";
    return out;
}

std::vector<int> parse_trace_marks(const std::string& trace) {
    const std::string tag = "output=[";
    auto pos = trace.rfind(tag);
    if (pos == std::string::npos) throw std::invalid_argument("trace has no output line");
    auto end = trace.find(']', pos);
    if (end == std::string::npos) throw std::invalid_argument("unterminated output list");
    std::vector<int> marks;
    for (const auto& tok : core::split(trace.substr(pos + tag.size(), end - pos - tag.size()), ", "))
        marks.push_back(std::stoi(tok));
    return marks;
}

long long aux_max(const std::vector<long long>& values) {
    if (values.empty()) throw std::invalid_argument("max of empty list");
    return *std::max_element(values.begin(), values.end());
}

long long aux_rain_water(const std::vector<long long>& heights) {
    const std::size_t n = heights.size();
    if (n == 0) return 0;
    std::vector<long long> pre(n), suf(n);
    pre[0] = heights[0];
    for (std::size_t i = 1; i < n; ++i) pre[i] = std::max(pre[i - 1], heights[i]);
    suf[n - 1] = heights[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) suf[i] = std::max(suf[i + 1], heights[i]);
    long long total = 0;
    for (std::size_t i = 0; i < n; ++i) total += std::max(0LL, std::min(pre[i], suf[i]) - heights[i]);
    return total;
}

core::rational aux_fixed_formula(const std::vector<core::rational>& v) {
    if (v.size() != 7) throw std::invalid_argument("fixed formula takes 7 values");
    if (v[3].is_zero() || v[4].is_zero() || v[5].is_zero())
        throw core::division_by_zero("fixed formula requires nonzero v4, v5, v6");
    const core::rational term =
        v[0] * v[1] + v[0] * v[2] + v[0] * v[2] / v[4] + v[0] * v[1] / v[3];
    return term * v[6] / v[5];
}

// =====================
// environment adapter
// =====================

namespace {

struct progress {
    std::vector<long long> dp_filled;  // in fill order: dp[n-1] first
    std::vector<int> marks;
    bool can{true};
};

std::string render_progress(const progress& p) {
    std::vector<std::string> dp, out;
    dp.reserve(p.dp_filled.size());
    for (long long v : p.dp_filled) dp.push_back(std::to_string(v));
    for (int m : p.marks) out.push_back(std::to_string(m));
    return "dp=[" + core::join(dp, ",") + "]|out=[" + core::join(out, ",") + "]|can=" +
           (p.can ? "1" : "0");
}

progress parse_progress(const core::state_key& s) {
    progress p;
    auto dp_open = s.find("dp=[");
    auto dp_close = s.find("]|out=[");
    auto out_close = s.find("]|can=");
    if (dp_open != 0 || dp_close == std::string::npos || out_close == std::string::npos ||
        out_close + 6 >= s.size())
        throw core::unknown_state("malformed mwis state: " + s);
    std::string dp_part = s.substr(4, dp_close - 4);
    std::string out_part = s.substr(dp_close + 7, out_close - dp_close - 7);
    if (!dp_part.empty())
        for (const auto& tok : core::split(dp_part, ",")) p.dp_filled.push_back(std::stoll(tok));
    if (!out_part.empty())
        for (const auto& tok : core::split(out_part, ",")) p.marks.push_back(std::stoi(tok));
    p.can = s.substr(out_close + 6) == "1";
    return p;
}

class mwis_env final : public core::environment {
public:
    explicit mwis_env(std::vector<long long> input) : input_(std::move(input)) {
        require_size(input_);
    }

    core::task_kind kind() const override { return core::task_kind::mwis; }

    core::state_key initial_state() const override { return render_progress({}); }

    std::vector<core::action_key> applicable_actions(const core::state_key& state) const override {
        progress p = parse_progress(state);
        validate(p);
        auto next = next_line(p);
        if (!next) return {};
        return {*next};
    }

    core::state_key apply_action(const core::state_key& state, const core::action_key& action) const override {
        progress p = parse_progress(state);
        validate(p);
        auto next = next_line(p);
        if (!next || *next != action)
            throw core::inapplicable_action(action, "action must be the next derivation line");
        return render_progress(advance(p));
    }

    bool is_goal(const core::state_key& state) const override {
        progress p = parse_progress(state);
        validate(p);
        return p.marks.size() == input_.size();
    }

    std::string problem_key() const override { return "mwis|" + render_input(input_); }

    std::string goal_text() const override { return "non-adjacent subsequence with maximum sum"; }

    std::optional<std::string> extract_answer(const core::trajectory& traj) const override {
        progress p = parse_progress(traj.final_state());
        if (p.marks.size() != input_.size()) return std::nullopt;
        return render_marks(p.marks);
    }

    bool check_answer(const std::string& answer) const override {
        return answer == render_marks(dp_solve(input_).marks);
    }

    core::trajectory oracle_trajectory() const override {
        core::trajectory traj;
        traj.initial_state = initial_state();
        core::state_key state = traj.initial_state;
        while (!is_goal(state)) {
            auto actions = applicable_actions(state);
            assert(actions.size() == 1);
            core::state_key next = apply_action(state, actions[0]);
            traj.steps.push_back({actions[0], next, actions});
            state = next;
        }
        traj.answer = extract_answer(traj);
        return traj;
    }

private:
    void validate(const progress& p) const {
        const std::size_t n = input_.size();
        if (p.dp_filled.size() > n || p.marks.size() > n)
            throw core::unknown_state("mwis progress out of range");
        if (!p.marks.empty() && p.dp_filled.size() != n)
            throw core::unknown_state("mwis reconstruction before dp fill complete");
    }

    // dp values indexed naturally from the fill-order list.
    long long dp_at(const progress& p, std::size_t i) const {
        return p.dp_filled[input_.size() - 1 - i];
    }

    std::optional<std::string> next_line(const progress& p) const {
        const std::size_t n = input_.size();
        if (p.dp_filled.size() < n) {
            // Recompute the pending dp cell from the recorded (possibly
            // perturbed) suffix so replays stay internally consistent.
            const std::size_t i = n - 1 - p.dp_filled.size();
            std::vector<long long> dp(n, 0);
            for (std::size_t j = 0; j < p.dp_filled.size(); ++j) dp[n - 1 - j] = p.dp_filled[j];
            long long v;
            if (i == n - 1)
                v = std::max(input_[i], 0LL);
            else if (i == n - 2)
                v = std::max({input_[i + 1], input_[i], 0LL});
            else
                v = std::max({dp[i + 1], input_[i] + dp[i + 2], 0LL});
            dp[i] = v;
            return dp_line(input_, dp, i, trace_style::implicit);
        }
        if (p.marks.size() == n) return std::nullopt;
        std::vector<long long> dp(n, 0);
        for (std::size_t j = 0; j < n; ++j) dp[n - 1 - j] = p.dp_filled[j];
        return recon_line(input_, dp, p.marks.size(), p.can, trace_style::implicit);
    }

    progress advance(const progress& p) const {
        const std::size_t n = input_.size();
        progress q = p;
        if (p.dp_filled.size() < n) {
            const std::size_t i = n - 1 - p.dp_filled.size();
            long long v;
            if (i == n - 1)
                v = std::max(input_[i], 0LL);
            else if (i == n - 2)
                v = std::max({input_[i + 1], input_[i], 0LL});
            else
                v = std::max({dp_at(p, i + 1), input_[i] + dp_at(p, i + 2), 0LL});
            q.dp_filled.push_back(v);
            return q;
        }
        const std::size_t i = p.marks.size();
        const bool identity =
            (i + 2 < n) ? dp_at(p, i) == input_[i] + dp_at(p, i + 2) : dp_at(p, i) == input_[i];
        if (identity && p.can) {
            q.marks.push_back(1);
            q.can = false;
        } else {
            q.marks.push_back(2);
            q.can = true;
        }
        return q;
    }

    std::vector<long long> input_;
};

}  // namespace

std::unique_ptr<core::environment> make_environment(std::vector<long long> input) {
    return std::make_unique<mwis_env>(std::move(input));
}

}  // namespace planlab::tasks::mwis
