#include "planlab/tasks/equations.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include "json.hpp"
#include "planlab/core/text.hpp"

namespace planlab::tasks::equations {

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct token {
    enum class kind { variable, literal, op } k;
    std::string name;
    rational value;
    char op{'\0'};
};

std::vector<token> tokenize(const std::string& rhs) {
    std::vector<token> out;
    std::size_t i = 0;
    while (i < rhs.size()) {
        char c = rhs[i];
        if (c == ' ') {
            ++i;
        } else if (c == '+' || c == '-' || c == '*' || c == '/') {
            out.push_back({token::kind::op, "", rational(0), c});
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < rhs.size() && (std::isdigit(static_cast<unsigned char>(rhs[i])) || rhs[i] == '.'))
                ++i;
            out.push_back({token::kind::literal, "", rational::parse(rhs.substr(start, i - start)), '\0'});
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < rhs.size() && is_ident_char(rhs[i])) ++i;
            out.push_back({token::kind::variable, rhs.substr(start, i - start), rational(0), '\0'});
        } else {
            throw std::invalid_argument("bad character in expression: " + rhs);
        }
    }
    if (out.empty()) throw std::invalid_argument("empty right-hand side");
    return out;
}

}  // namespace

std::vector<std::string> equation::rhs_variables() const {
    std::vector<std::string> vars;
    for (const auto& t : tokenize(rhs))
        if (t.k == token::kind::variable) vars.push_back(t.name);
    return vars;
}

rational equation::evaluate(const std::map<std::string, rational>& values) const {
    auto toks = tokenize(rhs);
    auto value_of = [&](const token& t) -> rational {
        if (t.k == token::kind::literal) return t.value;
        auto it = values.find(t.name);
        if (it == values.end()) throw unsolvable("variable not yet known: " + t.name);
        return it->second;
    };
    // Two-level precedence over a flat operator chain.
    std::vector<rational> terms;
    std::vector<char> adds;
    std::size_t i = 0;
    auto read_term = [&]() {
        rational v = value_of(toks[i]);
        ++i;
        while (i + 1 < toks.size() + 1 && i < toks.size() && toks[i].k == token::kind::op &&
               (toks[i].op == '*' || toks[i].op == '/')) {
            char op = toks[i].op;
            ++i;
            if (i >= toks.size() || toks[i].k == token::kind::op)
                throw std::invalid_argument("dangling operator in: " + rhs);
            rational r = value_of(toks[i]);
            ++i;
            if (op == '*') {
                v = v * r;
            } else {
                if (r.is_zero())
                    throw core::division_by_zero("division by zero evaluating '" + lhs + " = " + rhs + "'");
                v = v / r;
            }
        }
        return v;
    };
    terms.push_back(read_term());
    while (i < toks.size()) {
        if (toks[i].k != token::kind::op || (toks[i].op != '+' && toks[i].op != '-'))
            throw std::invalid_argument("expected + or - in: " + rhs);
        adds.push_back(toks[i].op);
        ++i;
        if (i >= toks.size()) throw std::invalid_argument("dangling operator in: " + rhs);
        terms.push_back(read_term());
    }
    rational v = terms[0];
    for (std::size_t k = 0; k < adds.size(); ++k)
        v = adds[k] == '+' ? v + terms[k + 1] : v - terms[k + 1];
    return v;
}

void validate_system(const equation_system& system) {
    std::set<std::string> declared(system.variables.begin(), system.variables.end());
    if (declared.size() != system.variables.size())
        throw std::invalid_argument("duplicate variable declaration");
    if (!declared.count(system.target)) throw std::invalid_argument("undeclared target variable");
    std::set<std::string> defined;
    for (const auto& [name, _] : system.known)
        if (!declared.count(name)) throw std::invalid_argument("known value for undeclared " + name);
    for (const auto& eq : system.equations) {
        if (!declared.count(eq.lhs)) throw std::invalid_argument("undeclared LHS " + eq.lhs);
        if (!defined.insert(eq.lhs).second)
            throw std::invalid_argument("variable defined by two equations: " + eq.lhs);
        for (const auto& v : eq.rhs_variables())
            if (!declared.count(v)) throw std::invalid_argument("undeclared RHS variable " + v);
    }
    for (const auto& name : system.variables)
        if (!system.known.count(name) && !defined.count(name))
            throw std::invalid_argument("unknown without a defining equation: " + name);
}

solve_result forward_chain_solve(const equation_system& system) {
    validate_system(system);
    const std::size_t m = system.equations.size();
    solve_result res;

    std::vector<long long> numvars(m, 0);
    std::vector<std::string> lhslist(m);
    std::map<std::string, std::vector<std::size_t>> equationlist;  // rhs occurrences
    std::map<std::string, rational> values = system.known;

    for (std::size_t i = 0; i < m; ++i) {
        lhslist[i] = system.equations[i].lhs;
        res.op_count += 1;
        for (const auto& v : system.equations[i].rhs_variables()) {
            res.op_count += 1;
            if (values.count(v)) continue;  // already known from the input
            numvars[i] += 1;
            equationlist[v].push_back(i);
        }
    }

    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < m; ++i) {
        res.op_count += 1;
        if (numvars[i] == 0) ready.push_back(i);
    }

    while (!ready.empty()) {
        const std::size_t i = ready.front();
        ready.pop_front();
        res.op_count += 1;
        const std::string& next_var = lhslist[i];
        if (values.count(next_var)) continue;  // redundantly derivable; first firing wins
        rational v;
        try {
            v = system.equations[i].evaluate(values);
        } catch (const core::division_by_zero&) {
            throw core::division_by_zero("division by zero in equation '" + system.equations[i].lhs +
                                         " = " + system.equations[i].rhs + "'");
        }
        res.op_count += static_cast<long long>(system.equations[i].rhs_variables().size()) + 1;
        values[next_var] = v;
        res.order.push_back({i, next_var, v});
        auto it = equationlist.find(next_var);
        if (it == equationlist.end()) continue;
        for (std::size_t k : it->second) {
            res.op_count += 1;
            if (--numvars[k] == 0) ready.push_back(k);
        }
    }

    auto it = values.find(system.target);
    if (it == values.end())
        throw unsolvable("queue exhausted before target '" + system.target + "' resolved");
    res.value = it->second;
    return res;
}

generated_task generate_equation_task(const generation_params& params, core::rng& rng) {
    if (params.k_range < 2 || params.n_variables < 2)
        throw std::invalid_argument("need K >= 2 and N >= 2");
    const long long K = params.k_range;
    const std::size_t N = params.n_variables;

    for (int attempt = 0; attempt < 200; ++attempt) {
        equation_system sys;
        std::map<std::string, rational> values;
        for (std::size_t i = 1; i <= N; ++i) sys.variables.push_back("x" + std::to_string(i));

        const std::size_t n_given = 1 + static_cast<std::size_t>(rng.next_below(std::max<std::size_t>(1, N / 2)));
        for (std::size_t i = 0; i < n_given; ++i) {
            rational v(rng.next_int(0, K));
            sys.known[sys.variables[i]] = v;
            values[sys.variables[i]] = v;
        }

        bool ok = true;
        for (std::size_t i = n_given; i < N && ok; ++i) {
            const std::string& lhs = sys.variables[i];
            bool placed = false;
            for (int tries = 0; tries < 40 && !placed; ++tries) {
                double total = 0;
                for (double w : params.rule_mix) total += w;
                double pick = rng.next_unit() * total;
                int rule = 0;
                for (double w : params.rule_mix) {
                    if (pick < w) break;
                    pick -= w;
                    ++rule;
                }
                auto earlier = [&]() { return sys.variables[rng.next_below(i)]; };
                std::string rhs;
                switch (rule) {
                    case 0:  // amount = amount * multiplier
                        rhs = earlier() + " * " + std::to_string(rng.next_int(2, 3));
                        break;
                    case 1:  // amount = amount + difference
                        rhs = earlier() + " + " + std::to_string(rng.next_int(1, 5));
                        break;
                    case 2:  // total = count * amount-per-unit
                        rhs = earlier() + " * " + earlier();
                        break;
                    case 3: {  // total = sum of components
                        int comps = static_cast<int>(rng.next_int(2, 3));
                        std::vector<std::string> parts;
                        for (int c = 0; c < comps; ++c) parts.push_back(earlier());
                        rhs = core::join(parts, " + ");
                        break;
                    }
                    default:  // current = initial - given + received
                        rhs = earlier() + " - " + earlier() + " + " + earlier();
                        break;
                }
                equation eq{lhs, rhs};
                rational v;
                try {
                    v = eq.evaluate(values);
                } catch (const std::exception&) {
                    continue;
                }
                if (v < rational(0) || v > rational(K)) continue;
                values[lhs] = v;
                sys.equations.push_back(eq);
                placed = true;
            }
            if (!placed) ok = false;
        }
        if (!ok) continue;
        sys.target = sys.variables[N - 1];
        validate_system(sys);
        return {sys, values[sys.target]};
    }
    throw generation_failed("could not generate a bounded system after 200 attempts");
}

std::string system_to_json(const equation_system& system) {
    nlohmann::json j;
    j["schema"] = "planlab.equations.v1";
    j["variables"] = system.variables;
    nlohmann::json known = nlohmann::json::object();
    for (const auto& [name, v] : system.known) known[name] = v.str();
    j["known"] = known;
    auto eqs = nlohmann::json::array();
    for (const auto& eq : system.equations) eqs.push_back({{"lhs", eq.lhs}, {"rhs", eq.rhs}});
    j["equations"] = eqs;
    j["target"] = system.target;
    return j.dump();
}

equation_system system_from_json(const std::string& json_text) {
    auto j = nlohmann::json::parse(json_text);
    equation_system sys;
    sys.variables = j.at("variables").get<std::vector<std::string>>();
    for (auto it = j.at("known").begin(); it != j.at("known").end(); ++it)
        sys.known[it.key()] = rational::parse(it.value().get<std::string>());
    for (const auto& e : j.at("equations"))
        sys.equations.push_back({e.at("lhs").get<std::string>(), e.at("rhs").get<std::string>()});
    sys.target = j.at("target").get<std::string>();
    validate_system(sys);
    return sys;
}

std::string emit_cot_trace(const equation_system& system) {
    auto res = forward_chain_solve(system);
    std::string out;
    for (const auto& [name, v] : system.known) out += name + " = " + v.str() + "\n";
    std::map<std::string, rational> values = system.known;
    for (const auto& f : res.order) {
        const equation& eq = system.equations[f.equation_index];
        // Restate the rule with values substituted, one line per derivation.
        auto toks = core::split(eq.rhs, " ");
        for (auto& t : toks) {
            auto it = values.find(t);
            if (it != values.end()) t = it->second.str();
        }
        out += eq.lhs + " = " + eq.rhs + " = " + core::join(toks, " ") + " = " + f.value.str() + "\n";
        values[f.variable] = f.value;
    }
    out += "So the answer is " + res.value.str() + ".\n";
    return out;
}

// =====================
// environment adapter
// =====================

namespace {

class equations_env final : public core::environment {
public:
    explicit equations_env(equation_system system) : system_(std::move(system)) {
        validate_system(system_);
    }

    core::task_kind kind() const override { return core::task_kind::equations; }

    core::state_key initial_state() const override { return render(system_.known); }

    std::vector<core::action_key> applicable_actions(const core::state_key& state) const override {
        auto values = parse_checked(state);
        std::vector<core::action_key> out;
        for (std::size_t i = 0; i < system_.equations.size(); ++i)
            if (ready(i, values)) out.push_back("fire " + system_.equations[i].lhs);
        return out;
    }

    core::state_key apply_action(const core::state_key& state, const core::action_key& action) const override {
        auto values = parse_checked(state);
        if (!core::starts_with(action, "fire "))
            throw core::inapplicable_action(action, "an action of the form 'fire <variable>'");
        const std::string lhs = action.substr(5);
        for (std::size_t i = 0; i < system_.equations.size(); ++i) {
            if (system_.equations[i].lhs != lhs) continue;
            if (!ready(i, values))
                throw core::inapplicable_action(action, "all right-hand-side variables known");
            values[lhs] = system_.equations[i].evaluate(values);
            return render(values);
        }
        throw core::inapplicable_action(action, "an equation defining " + lhs);
    }

    bool is_goal(const core::state_key& state) const override {
        return parse_checked(state).count(system_.target) > 0;
    }

    std::string problem_key() const override { return "equations|" + system_to_json(system_); }

    std::string goal_text() const override { return "value of " + system_.target; }

    std::string policy_observation(const core::state_key& state) const override {
        // Which variables are observed, not their values.
        auto values = parse_checked(state);
        std::vector<std::string> names;
        for (const auto& [name, _] : values) names.push_back(name);
        return "observed:" + core::join(names, ",");
    }

    std::optional<std::string> extract_answer(const core::trajectory& traj) const override {
        auto values = parse_checked(traj.final_state());
        auto it = values.find(system_.target);
        if (it == values.end()) return std::nullopt;
        return it->second.str();
    }

    bool check_answer(const std::string& answer) const override {
        try {
            return rational::parse(core::trim(answer)) == forward_chain_solve(system_).value;
        } catch (const std::exception&) {
            return false;
        }
    }

    core::trajectory oracle_trajectory() const override {
        auto res = forward_chain_solve(system_);
        core::trajectory traj;
        traj.initial_state = initial_state();
        core::state_key state = traj.initial_state;
        for (const auto& f : res.order) {
            auto proposals = applicable_actions(state);
            std::string action = "fire " + f.variable;
            core::state_key next = apply_action(state, action);
            traj.steps.push_back({action, next, proposals});
            state = next;
            if (f.variable == system_.target) break;
        }
        traj.answer = res.value.str();
        return traj;
    }

private:
    bool ready(std::size_t i, const std::map<std::string, rational>& values) const {
        if (values.count(system_.equations[i].lhs)) return false;
        for (const auto& v : system_.equations[i].rhs_variables())
            if (!values.count(v)) return false;
        return true;
    }

    static std::string render(const std::map<std::string, rational>& values) {
        std::vector<std::string> parts;
        for (const auto& [name, v] : values) parts.push_back(name + "=" + v.str());
        return core::join(parts, ";");
    }

    std::map<std::string, rational> parse_checked(const core::state_key& state) const {
        std::map<std::string, rational> values;
        if (state.empty()) return values;
        for (const auto& part : core::split(state, ";")) {
            auto eq = part.find('=');
            if (eq == std::string::npos) throw core::unknown_state("malformed equations state: " + state);
            std::string name = part.substr(0, eq);
            bool declared = std::find(system_.variables.begin(), system_.variables.end(), name) !=
                            system_.variables.end();
            if (!declared) throw core::unknown_state("undeclared variable in state: " + name);
            try {
                values[name] = rational::parse(part.substr(eq + 1));
            } catch (const std::exception&) {
                throw core::unknown_state("malformed value in state: " + part);
            }
        }
        return values;
    }

    equation_system system_;
};

}  // namespace

std::unique_ptr<core::environment> make_environment(equation_system system) {
    return std::make_unique<equations_env>(std::move(system));
}

}  // namespace planlab::tasks::equations
