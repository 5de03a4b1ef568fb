#pragma once

#include <string>

#include "planlab/harness/dataset.hpp"

namespace planlab::harness {

// Demonstration-format text for one dataset instance. Styles: mwis accepts
// "implicit"/"explicit"; routes emits the linearized BFS; game24 the step
// list plus assembled answer; blocksworld the plan with intermediate state
// descriptions; equations and qa their derivation lines.
std::string emit_instance_trace(const instance_json& instance, const std::string& style);

}  // namespace planlab::harness
