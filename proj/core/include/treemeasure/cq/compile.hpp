#pragma once

#include "treemeasure/cq/pattern.hpp"
#include "treemeasure/rational.hpp"
#include "treemeasure/safety/automaton.hpp"

#include <functional>
#include <vector>

namespace treemeasure::cq {

/// Largest pattern (vertex count) accepted by the compiler.
inline constexpr std::size_t kMaxCompiledVertices = 10;

/// Safety automaton for a rooted firm pattern. A state (d, H, P) at a node of
/// depth d says which vertices map to the node itself (H) and which to strict
/// descendants (P); `top` accepts everything. Obligations must be discharged
/// by depth |p| - 1.
safety::SafetyAutomaton compile_pattern_to_safety(const Pattern& p);

/// Measure of a Boolean combination of safety languages, read off the joint
/// powerset types of full trees of height depth - 1.
Rational joint_depth_measure(const std::vector<safety::SafetyAutomaton>& automata,
                             const std::function<bool(const std::vector<bool>&)>& combine, unsigned depth);

}  // namespace treemeasure::cq
