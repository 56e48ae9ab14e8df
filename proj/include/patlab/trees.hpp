#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "patlab/errors.hpp"

namespace patlab {

// Splitting schedule for the trees: a node at level l has at(l)+1 immediate
// successors.  The table is finite, strictly increasing, and at(l) >= l+1,
// so the splitting always outruns the level.
struct GrowthFunction {
    std::vector<int> values;

    GrowthFunction() = default;
    explicit GrowthFunction(std::vector<int> v);

    int max_depth() const { return static_cast<int>(values.size()); }
    int at(int level) const;
    bool operator==(const GrowthFunction&) const = default;
};

// at(level) + 1.
int successor_count(const GrowthFunction& f, int level);

// A node is the sequence of successor choices from the root; level = length.
// Serialized with dot-separated entries: "" is the root, "0.2" is <0,2>.
struct TreeNode {
    std::vector<int> entries;

    int level() const { return static_cast<int>(entries.size()); }
    TreeNode prefix(int j) const;
    TreeNode child(int value) const;
    bool is_prefix_of(const TreeNode& other) const;

    std::string str() const;
    static TreeNode parse(const std::string& s);

    auto operator<=>(const TreeNode&) const = default;
};

bool node_valid(const GrowthFunction& f, const TreeNode& node);

// Number of nodes at level k: product of successor counts below k.
unsigned long long level_size(const GrowthFunction& f, int k);

// All level-k nodes in lexicographic order, without repetition.
std::vector<TreeNode> enumerate_level(const GrowthFunction& f, int k);

// Looks for a node of level < k all of whose immediate successors have an
// extension among `leaves` (which must all sit at level k).  Returns the
// first such node in (level, lex) order, or nothing.
std::optional<TreeNode> has_full_splitting(const GrowthFunction& f, int k,
                                           const std::vector<TreeNode>& leaves);

// Subtree of levels <= depth that keeps, at every kept internal node, all
// but one immediate successor; maximal with no full splitting.  Nodes are
// sorted, unique, and closed under initial segment.
struct MaxSubtree {
    int depth = 0;
    std::vector<TreeNode> nodes;

    bool contains(const TreeNode& node) const;
    auto operator<=>(const MaxSubtree&) const = default;
};

// Checks the defining clauses at depth k: nonempty, prefix-closed, nodes no
// deeper than k, and every kept node of level < k keeps exactly at(level)
// of its at(level)+1 successors (for k = 0: the root alone).
bool is_k_maximal(const GrowthFunction& f, int k, const std::vector<TreeNode>& nodes);

// Closed form: with n_0 = 1 and n_{l+1} = n_l * at(l) kept nodes per level,
// the count is the product over l < k of (at(l)+1)^{n_l}.
unsigned long long kmax_subtree_count(const GrowthFunction& f, int k);

// Complete, duplicate-free enumeration in omission-choice order.
std::vector<MaxSubtree> enumerate_maximal_subtrees(const GrowthFunction& f, int k,
                                                   unsigned long long guard = 1ull << 20);

// nodes(s) subset of nodes(t).
bool subtree_extends(const MaxSubtree& s, const MaxSubtree& t);

// The level-depth members of s.
std::vector<TreeNode> leaves_of(const MaxSubtree& s);

// Proper nonempty family of level-depth leaves whose complement contains no
// full splitting; avoiding it keeps any positive R-type consistent.
struct BlockingSet {
    int depth = 0;
    std::vector<TreeNode> leaf_set;
    auto operator<=>(const BlockingSet&) const = default;
};

bool is_blocking(const GrowthFunction& f, int k, const std::vector<TreeNode>& b);

// Exhaustive over all subsets of level k; refuses levels wider than 24.
std::vector<BlockingSet> enumerate_blocking(const GrowthFunction& f, int k);

// A maximal subtree whose leaves absorb the complement of b; exists iff b
// is blocking (improper or empty b yields nothing).
std::optional<MaxSubtree> blocking_complement_subtree(const GrowthFunction& f, int k,
                                                      const BlockingSet& b);

// Branch-density condition, kept separate from is_blocking: every member's
// prefixes have all their successor slots extended inside the family.  At
// finite depth this is neither implied by nor implies the blocking
// property, so it is exposed for comparison only.
bool dense_everywhere(const GrowthFunction& f, int k, const std::vector<TreeNode>& b);

} // namespace patlab
