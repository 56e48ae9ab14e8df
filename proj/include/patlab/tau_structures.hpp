#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "patlab/trees.hpp"

namespace patlab {

// A finite model of the depth-k universal theory: the universe splits into
// P-elements carrying a level-k leaf each and Q-elements carrying a
// k-maximal subtree each, with R-edges from Q to P allowed only when the
// leaf sits inside the subtree.  Labels are total, so the predicate
// partitions are determined by them; what remains to check is the id
// disjointness and the edge axioms.
struct TauStructure {
    GrowthFunction f;
    int level = 0;
    std::map<int, TreeNode> p_elems;
    std::map<int, MaxSubtree> q_elems;
    std::set<std::pair<int, int>> edges;  // (q id, p id)
};

enum class ViolationKind { PartitionError, EdgeOutsideSubtree, FullSplittingCovered };

std::string to_string(ViolationKind k);

// Each violation carries enough to re-check the failed axiom instance.
struct Violation {
    ViolationKind kind;
    int q_id = -1;
    int p_id = -1;
    std::string detail;
};

std::vector<Violation> check_axioms(const TauStructure& m);

// Deterministic in the seed; edges are sampled only among legal pairs, so
// the output always passes check_axioms.
TauStructure random_structure(const GrowthFunction& f, int k, int n_p, int n_q, double density,
                              std::uint64_t seed);

// Glue m and n over a shared part given as (m id, n id) pairs; the shared
// part must agree on sorts, labels, and induced edges.  Ids of m survive;
// elements private to n are renumbered above them.
TauStructure amalgamate(const TauStructure& m, const TauStructure& n,
                        const std::vector<std::pair<int, int>>& shared);

// One-level lift: every leaf label gains one entry, every subtree label
// extends to depth k+1, edges and ids survive, and the depth-k facts are
// untouched.  Backtracks over Q omission choices in descending degree
// order; reports nothing if the search exhausts (it also gives up past a
// node budget rather than thrash).
std::optional<TauStructure> lift_structure(const TauStructure& m);

} // namespace patlab
