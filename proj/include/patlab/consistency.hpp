#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "patlab/tau_structures.hpp"
#include "patlab/trees.hpp"

namespace patlab {

// Least level whose splitting beats n parameters: minimal k with f(k) > n.
// Always <= n when it exists inside the table.
int kstar(const GrowthFunction& f, int n);

// Positive Q-side type: a fresh Q-vertex related to parameters whose leaves
// are listed (repeats allowed).
struct QTypeInstance {
    GrowthFunction f;
    int k = 0;
    std::vector<TreeNode> param_leaves;
};

// Positive P-side type: a fresh P-vertex related from parameters carrying
// the listed subtree labels.
struct PTypeInstance {
    GrowthFunction f;
    int k = 0;
    std::vector<MaxSubtree> param_subtrees;
};

// Consistent exactly when the parameter leaves carry no full splitting at
// any level below k.
bool consistent_q_type(const QTypeInstance& t);

// Returns the least witness leaf lying inside every parameter subtree, or
// nothing.  With no parameters the least leaf of the level is returned.
std::optional<TreeNode> consistent_p_type(const PTypeInstance& t);

enum class TypeShape { Q, P };

using ExtensionWitness = std::variant<TreeNode, MaxSubtree>;

// Independent route to the same questions: scan every candidate label for a
// fresh element connected to the given parameters and accept the first one
// whose one-point extension passes check_axioms.  Shape Q scans maximal
// subtrees for a new Q-element over P-parameters; shape P scans leaves for
// a new P-element under Q-parameters.
std::optional<ExtensionWitness> witness_extension_oracle(const TauStructure& m, TypeShape shape,
                                                         const std::vector<int>& param_ids);

} // namespace patlab
