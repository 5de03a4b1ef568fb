#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "planlab/core/environment.hpp"
#include "planlab/core/rational.hpp"

namespace planlab::tasks::mwis {

// Maximum-weight independent set on a path: best non-adjacent subsequence sum.
// Marks use 1 = chosen, 2 = not chosen, matching the task's answer format.

struct too_large : std::runtime_error {
    explicit too_large(const std::string& what) : std::runtime_error(what) {}
};

struct solution {
    std::vector<int> marks;        // over {1,2}
    std::vector<long long> dp;     // suffix dp values, never negative
    long long sum{0};
};

// Right-to-left dp with max(..., 0) clamping, then a greedy left-to-right
// reconstruction gated by can_access_next_item. Requires n >= 2 (the dp base
// cases need two cells); singleton inputs are rejected rather than
// special-cased.
solution dp_solve(const std::vector<long long>& input);

// Independent oracle: enumerate all independent subsets (n <= 24), maximize
// the sum with the empty set allowed, tie-break to the lexicographically
// smallest mark array.
solution brute_force(const std::vector<long long>& input);

enum class trace_style { implicit, explicit_values };

// Per-instance reasoning text in the task's two demonstration styles. Line
// templates are normative; the explicit style restates every operand so each
// printed arithmetic identity is numerically true.
std::string emit_trace(const std::vector<long long>& input, trace_style style);

// Reads the marks back from a trace's final "Reconstructing all together,
// output=[...]" line.
std::vector<int> parse_trace_marks(const std::string& trace);

std::string render_marks(const std::vector<int>& marks);                  // "[1, 2, 2, 2]"
std::string render_input(const std::vector<long long>& input);            // "[1, 1, -5, -1]"

// Auxiliary exact oracles for fixed small functions.
long long aux_max(const std::vector<long long>& values);
long long aux_rain_water(const std::vector<long long>& heights);
// (v1*v2 + v1*v3 + v1*v3/v5 + v1*v2/v4) * v7 / v6, exact rational arithmetic;
// v4, v5, v6 must be nonzero.
core::rational aux_fixed_formula(const std::vector<core::rational>& v);

// Environment over the dp computation: each state is a prefix of the
// implicit-style trace and has exactly one applicable action, the next line.
std::unique_ptr<core::environment> make_environment(std::vector<long long> input);

}  // namespace planlab::tasks::mwis
