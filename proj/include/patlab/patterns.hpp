#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "patlab/algebra.hpp"
#include "patlab/trees.hpp"

namespace patlab {

// Finite index sets are bitmasks over the pattern's indices.
using IndexSet = std::uint32_t;

// Monotone family of algebra elements over the subsets of [index_count]
// with at most `cap` members, all containing a distinguished atom.  The
// distinguished atom's principal filter stands in for the ultrafilter: an
// element is "large" exactly when it contains that atom.
struct PossibilityPattern {
    Context ctx;
    int index_count = 0;
    int cap = 0;
    std::map<IndexSet, BAElement> entries;
    std::uint64_t distinguished_atom = 0;

    const BAElement& at(IndexSet u) const;
};

bool is_possibility_pattern(const PossibilityPattern& p);

// One element per index; the induced entry of a set is the meet over its
// members, so the family is multiplicative by construction.
struct Refinement {
    Context ctx;
    std::map<int, BAElement> per_index;

    BAElement induced(IndexSet u) const;
};

// True when every stored entry of p dominates the induced entry.
bool refines(const Refinement& r, const PossibilityPattern& p);

// First stored set whose entry fails to dominate, or nothing.
std::optional<IndexSet> refines_witness(const Refinement& r, const PossibilityPattern& p);

// Q-side pattern: one partition per (index, tree level), sized by the
// splitting, so each atom hands every index a level-`depth` leaf.  An
// entry holds the atoms where the leaves of its indices carry no full
// splitting.  The distinguished atom is all-zero (every index on the
// leftmost branch).
struct TfPattern {
    GrowthFunction f;
    int depth = 0;
    int index_count = 0;
    PossibilityPattern pattern;
    std::vector<TreeNode> leaf_table;  // level-`depth` leaves, lex order

    int partition_of(int index, int level) const { return index * depth + level; }
    TreeNode leaf_of(std::uint64_t atom, int index) const;
    // Atoms whose index-th leaf extends the given node.
    BAElement cone(int index, const TreeNode& node) const;
};

TfPattern build_tf_pattern(const GrowthFunction& f, int depth, int n, int cap = -1);

// First stored set u (smallest mask) where the meet of the candidate
// generators escapes the entry, together with a witness atom; nothing if
// the candidates induce a genuine refinement.  Candidates must sit below
// their singleton entries.
std::optional<std::pair<IndexSet, std::uint64_t>> collision_certificate(
    const TfPattern& tf, const std::map<int, FIFunc>& candidates);

// Exhaustive search over the product of per-index candidate pools, in pool
// order; returns the first choice whose induced family refines p with all
// stored entries nonzero (and containing the distinguished atom when
// required).
std::optional<Refinement> search_multiplicative_refinement(
    const PossibilityPattern& p, const std::map<int, std::vector<FIFunc>>& pools,
    bool require_distinguished = true, std::uint64_t guard = 1ull << 22);

// Every partial assignment fixing exactly the index's own partitions, i.e.
// deciding its full leaf.  Pairwise incompatible and a maximal antichain;
// unions across indices decide the stored entries.
std::vector<FIFunc> build_leaf_support(const TfPattern& tf, int index);

// Default candidate pool for an index: all partial assignments over its
// own partitions (including the empty one).
std::vector<FIFunc> default_candidate_pool(const TfPattern& tf, int index);

struct TfRefinement {
    TfPattern extended;               // same pattern rebuilt over the wider algebra
    Refinement refinement;
    int fresh_partition = 0;          // one cell per blocking set
    std::vector<BlockingSet> blocking;
};

// Refinement via blocking sets: a fresh partition picks a blocking set to
// avoid, and an index survives on a cell only where its decided leaf stays
// outside that blocking set.  The intersections then avoid full splittings
// outright, so the induced family refines the pattern.
TfRefinement build_tf_refinement(const TfPattern& tf, const std::vector<BlockingSet>& blocking);

// P-side pattern: one partition per index, sized by the count of maximal
// subtrees, so each atom hands every index a depth-`depth` subtree.  An
// entry holds the atoms where the subtrees of its indices share a leaf.
struct DualPattern {
    GrowthFunction f;
    int depth = 0;
    int index_count = 0;
    PossibilityPattern pattern;
    std::vector<MaxSubtree> subtree_table;

    int partition_of(int index) const { return index; }
    const MaxSubtree& subtree_of(std::uint64_t atom, int index) const;
};

DualPattern build_tf_dual_pattern(const GrowthFunction& f, int depth, int n, int cap = -1);

struct DualRefinement {
    DualPattern extended;
    Refinement refinement;
    int fresh_partition = 0;          // one cell per enumerated leaf
    std::vector<TreeNode> leaf_enum;
};

// Dual construction: the fresh partition commits to a leaf, and an index
// survives on a cell only where its decided subtree contains that leaf, so
// every intersection inherits a common leaf.
DualRefinement build_tf_dual_refinement(const DualPattern& dp, const std::vector<TreeNode>& leaf_enum);

} // namespace patlab
