#pragma once

#include <json.hpp>

#include "patlab/algebra.hpp"
#include "patlab/hypergraph.hpp"
#include "patlab/patterns.hpp"
#include "patlab/tau_structures.hpp"
#include "patlab/trees.hpp"

namespace patlab {

using json = nlohmann::json;

// Readers validate shape and re-check the domain invariants; all failures
// surface as SchemaError.

GrowthFunction growth_from_json(const json& j);
json growth_to_json(const GrowthFunction& f);

TreeNode node_from_json(const json& j);  // string form, "" for the root
json node_to_json(const TreeNode& n);

MaxSubtree subtree_from_json(const json& j);  // array of node strings
json subtree_to_json(const MaxSubtree& s);

json blocking_to_json(const BlockingSet& b);

TauStructure structure_from_json(const json& j);
json structure_to_json(const TauStructure& m);

json violations_to_json(const std::vector<Violation>& v);

FIFunc fifunc_from_json(const json& j);  // object {"0":1,"3":2}
json fifunc_to_json(const FIFunc& h);

Context context_from_json(const json& j);  // {"sizes":[...]}
json context_to_json(const Context& ctx);

// Elements travel as FI-normal forms, never as raw atom sets.
BAElement element_from_json(const Context& ctx, const json& j);
json element_to_json(const BAElement& a);

json pattern_to_json(const PossibilityPattern& p);
PossibilityPattern pattern_from_json(const json& j);

json refinement_to_json(const Refinement& r);
Refinement refinement_from_json(const Context& ctx, const json& j);

Hypergraph hypergraph_from_json(const json& j);
json hypergraph_to_json(const Hypergraph& h);

std::string subset_key(IndexSet u);      // "", "0", "0,2"
IndexSet subset_from_key(const std::string& key);

json atom_to_json(const Context& ctx, std::uint64_t atom);  // total assignment

} // namespace patlab
