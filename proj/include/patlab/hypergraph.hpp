#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "patlab/patterns.hpp"

namespace patlab {

// (k+1)-uniform hypergraph with the legality target of the generic
// (n+1)-free structure: no n+1 vertices may carry all their (k+1)-subsets
// as edges.  A near-forbidden set is one vertex short of that.
struct Hypergraph {
    int vertex_count = 0;
    int n = 0;  // forbidden configuration has n+1 vertices
    int k = 0;  // edges have k+1 vertices
    std::set<std::vector<int>> edges;  // sorted (k+1)-subsets
};

void validate_hypergraph(const Hypergraph& h);

bool is_legal(const Hypergraph& h);

// All n-subsets every (k+1)-subset of which is an edge.  Requires legality.
std::vector<std::vector<int>> near_forbidden(const Hypergraph& h);

// A conjunction of positive edge formulas indexed by k-subsets is
// consistent unless some near-forbidden set has all its k-subsets listed.
bool consistent_type_tnk(const Hypergraph& h, const std::vector<std::vector<int>>& v);

// Chosen near-forbidden members; member i owns partition i of the pattern
// algebra (a private size-2 partition whose cell 0 plays the member's
// generator).
struct NearForbiddenFamily {
    std::vector<std::vector<int>> members;
};

NearForbiddenFamily full_near_forbidden_family(const Hypergraph& h);

struct TnkPattern {
    Hypergraph graph;
    NearForbiddenFamily family;
    std::vector<std::vector<int>> formula_index;  // k-subsets of the vertices, lex
    std::vector<IndexSet> member_formula_mask;    // per member: its k-subsets as a mask
    PossibilityPattern pattern;
};

// Entry of a formula set s: everything except the cell-0 generators of the
// members whose k-subsets are all listed in s.  The distinguished atom
// assigns every member cell 1, so all member generators are small.
// Entries are stored for formula sets of size <= cap (default: the number
// of k-subsets of one member).
TnkPattern build_tnk_pattern(const Hypergraph& h, const NearForbiddenFamily& family, int cap = -1);

// Atom-wise semantic audit: on each atom drop the sub-edges of every member
// the atom pushes off cell 0, then compare entry membership against the
// type consistency over the modified graph, for every stored formula set.
// Exact when the family lists every near-forbidden set and members do not
// share (k+1)-subsets (always true for n = k+1).
bool verify_pattern_semantics(const TnkPattern& tp);

// Union of the partial-assignment domains of the per-formula elements; a
// member is traced when its partition shows up under one of its own
// k-subsets.  Checks that every member is traced.
bool support_trace_check(const TnkPattern& tp, const Refinement& r);

// All per-formula element choices (arbitrary algebra elements, containing
// the distinguished atom when required) whose induced family refines the
// stored entries with nothing vanishing.
std::vector<Refinement> enumerate_tnk_refinements(const TnkPattern& tp,
                                                  bool require_distinguished = true,
                                                  std::uint64_t guard = 1ull << 22);

// Control map harvested from a refinement: each k-subset controls the
// members whose partition its element mentions, plus itself.
std::map<std::vector<int>, std::set<int>> control_map_from_refinement(const TnkPattern& tp,
                                                                      const Refinement& r);

// First member no k-subset of which controls it, or nothing.  F must be
// total on the k-subsets and satisfy v inside F(v).
std::optional<std::vector<int>> free_set_escape(
    const NearForbiddenFamily& family, int vertex_count, int k,
    const std::map<std::vector<int>, std::set<int>>& f);

// Seeded sampler: throws target_edges random (k+1)-subsets at the graph and
// removes one edge per violation until legal.
Hypergraph random_legal_hypergraph(int vertex_count, int n, int k, int target_edges,
                                   std::uint64_t seed);

std::vector<std::vector<int>> k_subsets(int vertex_count, int k);

} // namespace patlab
