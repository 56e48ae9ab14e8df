#include "patlab/consistency.hpp"

#include <algorithm>
#include <set>

namespace patlab {

int kstar(const GrowthFunction& f, int n) {
    for (int k = 0; k < f.max_depth(); ++k)
        if (f.values[k] > n) return k;
    fail("OutOfTable", "no level with f(k) > " + std::to_string(n) + " inside the table");
}

bool consistent_q_type(const QTypeInstance& t) {
    return !has_full_splitting(t.f, t.k, t.param_leaves).has_value();
}

std::optional<TreeNode> consistent_p_type(const PTypeInstance& t) {
    if (t.k < 0 || t.k > t.f.max_depth()) fail("LevelOutOfRange", "level " + std::to_string(t.k));
    for (const auto& s : t.param_subtrees)
        if (s.depth != t.k || !is_k_maximal(t.f, t.k, s.nodes))
            fail("SchemaError", "parameter label is not a depth-" + std::to_string(t.k) +
                                    " maximal subtree");
    if (t.param_subtrees.empty()) {
        TreeNode least;
        least.entries.assign(t.k, 0);
        return least;
    }
    // A leaf lies in every subtree iff it is a common leaf; prefixes follow
    // from closure under initial segment.
    std::vector<TreeNode> common = leaves_of(t.param_subtrees.front());
    for (std::size_t i = 1; i < t.param_subtrees.size() && !common.empty(); ++i) {
        const auto other = leaves_of(t.param_subtrees[i]);
        std::vector<TreeNode> next;
        std::set_intersection(common.begin(), common.end(), other.begin(), other.end(),
                              std::back_inserter(next));
        common = std::move(next);
    }
    if (common.empty()) return std::nullopt;
    return common.front();
}

std::optional<ExtensionWitness> witness_extension_oracle(const TauStructure& m, TypeShape shape,
                                                         const std::vector<int>& param_ids) {
    int fresh = 0;
    for (const auto& [id, _] : m.p_elems) fresh = std::max(fresh, id + 1);
    for (const auto& [id, _] : m.q_elems) fresh = std::max(fresh, id + 1);

    if (shape == TypeShape::Q) {
        for (int id : param_ids)
            if (!m.p_elems.count(id))
                fail("UnknownId", "P parameter " + std::to_string(id) + " not in the structure");
        for (const auto& s : enumerate_maximal_subtrees(m.f, m.level)) {
            TauStructure ext = m;
            ext.q_elems.emplace(fresh, s);
            for (int id : param_ids) ext.edges.emplace(fresh, id);
            if (check_axioms(ext).empty()) return ExtensionWitness{s};
        }
        return std::nullopt;
    }

    for (int id : param_ids)
        if (!m.q_elems.count(id))
            fail("UnknownId", "Q parameter " + std::to_string(id) + " not in the structure");
    for (const auto& leaf : enumerate_level(m.f, m.level)) {
        TauStructure ext = m;
        ext.p_elems.emplace(fresh, leaf);
        for (int id : param_ids) ext.edges.emplace(id, fresh);
        if (check_axioms(ext).empty()) return ExtensionWitness{leaf};
    }
    return std::nullopt;
}

} // namespace patlab
