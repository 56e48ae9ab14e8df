#include "patlab/tau_structures.hpp"

#include <algorithm>
#include <random>

namespace patlab {

std::string to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::PartitionError: return "PartitionError";
        case ViolationKind::EdgeOutsideSubtree: return "EdgeOutsideSubtree";
        case ViolationKind::FullSplittingCovered: return "FullSplittingCovered";
    }
    return "?";
}

std::vector<Violation> check_axioms(const TauStructure& m) {
    if (m.level < 0 || m.level > m.f.max_depth())
        fail("SchemaError", "structure level outside the growth table");
    std::vector<Violation> out;

    for (const auto& [id, leaf] : m.p_elems) {
        if (m.q_elems.count(id))
            out.push_back({ViolationKind::PartitionError, id, id,
                           "id " + std::to_string(id) + " appears in both sorts"});
        if (leaf.level() != m.level || !node_valid(m.f, leaf))
            out.push_back({ViolationKind::PartitionError, -1, id,
                           "leaf label " + leaf.str() + " is not a level-" +
                               std::to_string(m.level) + " node"});
    }
    for (const auto& [id, s] : m.q_elems) {
        if (s.depth != m.level || !is_k_maximal(m.f, m.level, s.nodes))
            out.push_back({ViolationKind::PartitionError, id, -1,
                           "subtree label of " + std::to_string(id) + " is not depth-" +
                               std::to_string(m.level) + " maximal"});
    }

    for (const auto& [q, p] : m.edges) {
        auto qi = m.q_elems.find(q);
        auto pi = m.p_elems.find(p);
        if (qi == m.q_elems.end() || pi == m.p_elems.end()) {
            out.push_back({ViolationKind::PartitionError, q, p, "edge endpoint missing"});
            continue;
        }
        if (!qi->second.contains(pi->second))
            out.push_back({ViolationKind::EdgeOutsideSubtree, q, p,
                           "leaf " + pi->second.str() + " outside the subtree of " +
                               std::to_string(q)});
    }

    for (const auto& [q, s] : m.q_elems) {
        std::vector<TreeNode> neighbor_leaves;
        for (const auto& [eq, ep] : m.edges) {
            if (eq != q) continue;
            auto pi = m.p_elems.find(ep);
            if (pi != m.p_elems.end() && pi->second.level() == m.level &&
                node_valid(m.f, pi->second))
                neighbor_leaves.push_back(pi->second);
        }
        if (auto node = has_full_splitting(m.f, m.level, neighbor_leaves))
            out.push_back({ViolationKind::FullSplittingCovered, q, -1,
                           "neighbors of " + std::to_string(q) + " cover every successor of " +
                               node->str()});
    }
    return out;
}

namespace {

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
    return bound == 0 ? 0 : rng() % bound;
}

double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

} // namespace

TauStructure random_structure(const GrowthFunction& f, int k, int n_p, int n_q, double density,
                              std::uint64_t seed) {
    if (k < 0 || k > f.max_depth()) fail("LevelOutOfRange", "level " + std::to_string(k));
    if (n_p < 0 || n_q < 0) fail("SchemaError", "element counts must be nonnegative");
    if (!(density >= 0.0 && density <= 1.0)) fail("SchemaError", "density must lie in [0,1]");

    const auto leaves = enumerate_level(f, k);
    const auto subtrees = enumerate_maximal_subtrees(f, k);
    std::mt19937_64 rng(seed);

    TauStructure m{f, k, {}, {}, {}};
    for (int i = 0; i < n_p; ++i)
        m.p_elems.emplace(i, leaves[static_cast<std::size_t>(draw(rng, leaves.size()))]);
    for (int i = 0; i < n_q; ++i)
        m.q_elems.emplace(n_p + i, subtrees[static_cast<std::size_t>(draw(rng, subtrees.size()))]);

    for (const auto& [q, s] : m.q_elems)
        for (const auto& [p, leaf] : m.p_elems)
            if (s.contains(leaf) && draw_unit(rng) < density) m.edges.emplace(q, p);
    return m;
}

namespace {

enum class Sort { P, Q };

struct SharedEntry { Sort sort; int m_id; int n_id; };

} // namespace

TauStructure amalgamate(const TauStructure& m, const TauStructure& n,
                        const std::vector<std::pair<int, int>>& shared) {
    if (!(m.f == n.f) || m.level != n.level)
        fail("SharedPartMismatch", "structures disagree on growth function or level");

    std::map<int, int> n_to_m;
    std::vector<SharedEntry> entries;
    for (const auto& [mid, nid] : shared) {
        Sort sort;
        if (m.p_elems.count(mid) && n.p_elems.count(nid)) {
            if (!(m.p_elems.at(mid) == n.p_elems.at(nid)))
                fail("SharedPartMismatch", "shared P element " + std::to_string(mid) +
                                               " carries different leaves");
            sort = Sort::P;
        } else if (m.q_elems.count(mid) && n.q_elems.count(nid)) {
            if (!(m.q_elems.at(mid) == n.q_elems.at(nid)))
                fail("SharedPartMismatch", "shared Q element " + std::to_string(mid) +
                                               " carries different subtrees");
            sort = Sort::Q;
        } else {
            fail("SharedPartMismatch", "shared pair (" + std::to_string(mid) + "," +
                                           std::to_string(nid) + ") has no common sort");
        }
        if (!n_to_m.emplace(nid, mid).second)
            fail("SharedPartMismatch", "correspondence reuses an id of the second structure");
        entries.push_back({sort, mid, nid});
    }
    std::set<int> m_used;
    for (const auto& e : entries)
        if (!m_used.insert(e.m_id).second)
            fail("SharedPartMismatch", "correspondence reuses an id of the first structure");

    // Induced edges on the shared part must agree.
    for (const auto& a : entries)
        for (const auto& b : entries) {
            if (a.sort != Sort::Q || b.sort != Sort::P) continue;
            const bool in_m = m.edges.count({a.m_id, b.m_id}) > 0;
            const bool in_n = n.edges.count({a.n_id, b.n_id}) > 0;
            if (in_m != in_n)
                fail("SharedPartMismatch", "edge (" + std::to_string(a.m_id) + "," +
                                               std::to_string(b.m_id) +
                                               ") differs between the two structures");
        }

    TauStructure out = m;
    int next_id = 0;
    for (const auto& [id, _] : m.p_elems) next_id = std::max(next_id, id + 1);
    for (const auto& [id, _] : m.q_elems) next_id = std::max(next_id, id + 1);

    for (const auto& [id, leaf] : n.p_elems)
        if (!n_to_m.count(id)) {
            out.p_elems.emplace(next_id, leaf);
            n_to_m.emplace(id, next_id++);
        }
    for (const auto& [id, s] : n.q_elems)
        if (!n_to_m.count(id)) {
            out.q_elems.emplace(next_id, s);
            n_to_m.emplace(id, next_id++);
        }
    for (const auto& [q, p] : n.edges) out.edges.emplace(n_to_m.at(q), n_to_m.at(p));
    return out;
}

namespace {

struct OmissionVar {
    int q;
    TreeNode leaf;
    std::vector<int> p_neighbors;  // P elements attached to q at this leaf
};

} // namespace

std::optional<TauStructure> lift_structure(const TauStructure& m) {
    const int k = m.level;
    if (k + 1 > m.f.max_depth())
        fail("LevelOutOfRange", "growth table too short to lift past level " + std::to_string(k));
    if (!check_axioms(m).empty())
        fail("SchemaError", "structure fails its axioms; refusing to lift");
    const int top = m.f.values[k];  // successor values 0..top at level k

    // Q elements in descending degree order, each contributing one omission
    // variable per leaf of its subtree.
    std::vector<int> q_order;
    std::map<int, int> degree;
    for (const auto& [q, _] : m.q_elems) degree[q] = 0;
    for (const auto& [q, p] : m.edges) ++degree[q];
    for (const auto& [q, _] : m.q_elems) q_order.push_back(q);
    std::sort(q_order.begin(), q_order.end(), [&](int a, int b) {
        return degree[a] != degree[b] ? degree[a] > degree[b] : a < b;
    });

    std::vector<OmissionVar> vars;
    for (int q : q_order) {
        for (const auto& leaf : leaves_of(m.q_elems.at(q))) {
            OmissionVar v{q, leaf, {}};
            for (const auto& [eq, ep] : m.edges)
                if (eq == q && m.p_elems.at(ep) == leaf) v.p_neighbors.push_back(ep);
            vars.push_back(std::move(v));
        }
    }

    // forbidden[p] = omission values of the adjacent subtrees at leaf(p);
    // the extension of p must dodge all of them.
    std::map<int, std::map<int, int>> forbidden;  // p -> value -> multiplicity
    for (const auto& [p, _] : m.p_elems) forbidden[p] = {};

    std::vector<int> choice(vars.size(), -1);
    const long long budget = 1ll << 20;
    long long steps = 0;

    std::size_t v = 0;
    while (v < vars.size()) {
        if (++steps > budget) return std::nullopt;
        int next = choice[v] + 1;
        // undo the previous value of this variable, if any
        if (choice[v] >= 0)
            for (int p : vars[v].p_neighbors) {
                auto& count = forbidden[p][choice[v]];
                if (--count == 0) forbidden[p].erase(choice[v]);
            }
        bool placed = false;
        for (int val = next; val <= top; ++val) {
            bool ok = true;
            for (int p : vars[v].p_neighbors) {
                const auto& fb = forbidden[p];
                if (!fb.count(val) && static_cast<int>(fb.size()) == top) { ok = false; break; }
            }
            if (!ok) continue;
            choice[v] = val;
            for (int p : vars[v].p_neighbors) ++forbidden[p][val];
            placed = true;
            break;
        }
        if (placed) { ++v; continue; }
        choice[v] = -1;
        if (v == 0) return std::nullopt;
        --v;
    }

    TauStructure out{m.f, k + 1, {}, {}, m.edges};
    for (const auto& [p, leaf] : m.p_elems) {
        int ext = 0;
        const auto& fb = forbidden[p];
        while (fb.count(ext)) ++ext;
        out.p_elems.emplace(p, leaf.child(ext));
    }
    std::map<int, std::map<TreeNode, int>> omit;
    for (std::size_t i = 0; i < vars.size(); ++i) omit[vars[i].q][vars[i].leaf] = choice[i];
    for (const auto& [q, s] : m.q_elems) {
        MaxSubtree lifted;
        lifted.depth = k + 1;
        lifted.nodes = s.nodes;
        for (const auto& leaf : leaves_of(s)) {
            const int om = omit.count(q) && omit[q].count(leaf) ? omit[q][leaf] : 0;
            for (int val = 0; val <= top; ++val)
                if (val != om) lifted.nodes.push_back(leaf.child(val));
        }
        std::sort(lifted.nodes.begin(), lifted.nodes.end());
        out.q_elems.emplace(q, std::move(lifted));
    }
    return out;
}

} // namespace patlab
