#include "patlab/patterns.hpp"

#include <algorithm>
#include <bit>

namespace patlab {

const BAElement& PossibilityPattern::at(IndexSet u) const {
    auto it = entries.find(u);
    if (it == entries.end()) fail("UnknownId", "no stored entry for index set " + std::to_string(u));
    return it->second;
}

bool is_possibility_pattern(const PossibilityPattern& p) {
    auto root = p.entries.find(0);
    if (root == p.entries.end() || !(root->second == one(p.ctx))) return false;
    for (const auto& [u, b] : p.entries) {
        if (!atom_in(b, p.distinguished_atom)) return false;
        for (const auto& [v, c] : p.entries)
            if ((u & v) == u && !leq(c, b)) return false;  // u subset of v
    }
    return true;
}

BAElement Refinement::induced(IndexSet u) const {
    BAElement acc = one(ctx);
    for (int i = 0; u >> i; ++i) {
        if (!((u >> i) & 1)) continue;
        auto it = per_index.find(i);
        if (it == per_index.end())
            fail("UnknownId", "refinement has no element for index " + std::to_string(i));
        acc = meet(acc, it->second);
    }
    return acc;
}

std::optional<IndexSet> refines_witness(const Refinement& r, const PossibilityPattern& p) {
    if (!r.ctx || !p.ctx || !(*r.ctx == *p.ctx))
        fail("ContextMismatch", "refinement and pattern live in different algebras");
    for (const auto& [u, b] : p.entries)
        if (!leq(r.induced(u), b)) return u;
    return std::nullopt;
}

bool refines(const Refinement& r, const PossibilityPattern& p) {
    return !refines_witness(r, p).has_value();
}

TreeNode TfPattern::leaf_of(std::uint64_t atom, int index) const {
    TreeNode leaf;
    leaf.entries.reserve(static_cast<std::size_t>(depth));
    for (int k = 0; k < depth; ++k)
        leaf.entries.push_back(pattern.ctx->value_at(atom, partition_of(index, k)));
    return leaf;
}

BAElement TfPattern::cone(int index, const TreeNode& node) const {
    FIFunc h;
    for (int k = 0; k < node.level(); ++k) h.assignments[partition_of(index, k)] = node.entries[k];
    return generator(pattern.ctx, h);
}

namespace {

PossibilityPattern tf_entries_over(const Context& ctx, const GrowthFunction& f, int depth, int n,
                                   int cap, std::uint64_t distinguished) {
    PossibilityPattern p;
    p.ctx = ctx;
    p.index_count = n;
    p.cap = cap;
    p.distinguished_atom = distinguished;

    // leaves are read straight off the atom's coordinates
    std::vector<TreeNode> leaves;
    for (IndexSet u = 0; u < (1u << n); ++u) {
        if (std::popcount(u) > cap) continue;
        boost::dynamic_bitset<> bits(ctx->atom_count);
        for (std::uint64_t a = 0; a < ctx->atom_count; ++a) {
            leaves.clear();
            for (int i = 0; i < n; ++i) {
                if (!((u >> i) & 1)) continue;
                TreeNode leaf;
                for (int k = 0; k < depth; ++k)
                    leaf.entries.push_back(ctx->value_at(a, i * depth + k));
                leaves.push_back(std::move(leaf));
            }
            if (!has_full_splitting(f, depth, leaves).has_value()) bits.set(a);
        }
        p.entries.emplace(u, BAElement{ctx, std::move(bits)});
    }
    return p;
}

} // namespace

TfPattern build_tf_pattern(const GrowthFunction& f, int depth, int n, int cap) {
    if (depth < 1 || depth > f.max_depth())
        fail("LevelOutOfRange", "pattern depth " + std::to_string(depth));
    if (n < 1 || n > 31) fail("SchemaError", "index count must lie in 1..31");
    if (cap < 0) cap = n;

    std::vector<int> sizes;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < depth; ++k) sizes.push_back(f.values[k] + 1);
    Context ctx = make_context(std::move(sizes));

    TfPattern tf;
    tf.f = f;
    tf.depth = depth;
    tf.index_count = n;
    tf.leaf_table = enumerate_level(f, depth);
    tf.pattern = tf_entries_over(ctx, f, depth, n, cap, 0);
    return tf;
}

std::optional<std::pair<IndexSet, std::uint64_t>> collision_certificate(
    const TfPattern& tf, const std::map<int, FIFunc>& candidates) {
    const auto& p = tf.pattern;
    std::map<int, BAElement> gens;
    for (int i = 0; i < p.index_count; ++i) {
        auto it = candidates.find(i);
        if (it == candidates.end())
            fail("UnknownId", "no candidate for index " + std::to_string(i));
        BAElement g = generator(p.ctx, it->second);
        if (!leq(g, p.at(1u << i)))
            fail("CandidateNotBelowSingleton",
                 "candidate for index " + std::to_string(i) + " escapes its singleton entry");
        gens.emplace(i, std::move(g));
    }
    for (const auto& [u, b] : p.entries) {
        if (u == 0) continue;
        BAElement acc = one(p.ctx);
        for (int i = 0; i < p.index_count; ++i)
            if ((u >> i) & 1) acc = meet(acc, gens.at(i));
        if (!leq(acc, b)) {
            boost::dynamic_bitset<> outside = acc.atoms & ~b.atoms;
            return std::make_pair(u, static_cast<std::uint64_t>(outside.find_first()));
        }
    }
    return std::nullopt;
}

std::optional<Refinement> search_multiplicative_refinement(
    const PossibilityPattern& p, const std::map<int, std::vector<FIFunc>>& pools,
    bool require_distinguished, std::uint64_t guard) {
    std::vector<const std::vector<FIFunc>*> pool;
    for (int i = 0; i < p.index_count; ++i) {
        auto it = pools.find(i);
        if (it == pools.end() || it->second.empty())
            fail("UnknownId", "no candidate pool for index " + std::to_string(i));
        pool.push_back(&it->second);
    }
    std::uint64_t total = 1;
    for (const auto* v : pool) {
        if (total > guard / v->size())
            refuse("SearchSpaceTooLarge", "candidate product exceeds the guard");
        total *= v->size();
    }

    std::vector<std::size_t> pick(pool.size(), 0);
    for (;;) {
        std::map<int, BAElement> elems;
        for (int i = 0; i < p.index_count; ++i)
            elems.emplace(i, generator(p.ctx, (*pool[i])[pick[i]]));
        Refinement r{p.ctx, std::move(elems)};
        bool ok = true;
        for (const auto& [u, b] : p.entries) {
            BAElement ind = r.induced(u);
            if (!leq(ind, b) || is_zero(ind) ||
                (require_distinguished && !atom_in(ind, p.distinguished_atom))) {
                ok = false;
                break;
            }
        }
        if (ok) return r;
        int i = static_cast<int>(pick.size()) - 1;
        while (i >= 0 && pick[i] + 1 == pool[i]->size()) pick[i--] = 0;
        if (i < 0) break;
        ++pick[i];
    }
    return std::nullopt;
}

std::vector<FIFunc> build_leaf_support(const TfPattern& tf, int index) {
    if (index < 0 || index >= tf.index_count)
        fail("UnknownId", "index " + std::to_string(index));
    std::vector<FIFunc> out;
    out.reserve(tf.leaf_table.size());
    for (const auto& leaf : tf.leaf_table) {
        FIFunc h;
        for (int k = 0; k < tf.depth; ++k)
            h.assignments[tf.partition_of(index, k)] = leaf.entries[k];
        out.push_back(std::move(h));
    }
    return out;
}

std::vector<FIFunc> default_candidate_pool(const TfPattern& tf, int index) {
    if (index < 0 || index >= tf.index_count)
        fail("UnknownId", "index " + std::to_string(index));
    // Odometer over per-level choices: -1 leaves the level free.
    std::vector<int> choice(static_cast<std::size_t>(tf.depth), -1);
    std::vector<FIFunc> out;
    for (;;) {
        FIFunc h;
        for (int k = 0; k < tf.depth; ++k)
            if (choice[static_cast<std::size_t>(k)] >= 0)
                h.assignments[tf.partition_of(index, k)] = choice[static_cast<std::size_t>(k)];
        out.push_back(std::move(h));
        int k = tf.depth - 1;
        while (k >= 0 && choice[static_cast<std::size_t>(k)] == tf.f.values[k])
            choice[static_cast<std::size_t>(k--)] = -1;
        if (k < 0) break;
        ++choice[static_cast<std::size_t>(k)];
    }
    return out;
}

TfRefinement build_tf_refinement(const TfPattern& tf, const std::vector<BlockingSet>& blocking) {
    if (blocking.empty())
        fail("NoBlockingSets", "depth " + std::to_string(tf.depth) + " offers no blocking sets");
    if (blocking.size() < 2)
        fail("NoBlockingSets", "need at least two blocking sets for the fresh partition");
    for (const auto& b : blocking)
        if (b.depth != tf.depth || !is_blocking(tf.f, tf.depth, b.leaf_set))
            fail("SchemaError", "a provided set is not a depth-" + std::to_string(tf.depth) +
                                    " blocking set");

    const TreeNode& zero_leaf = tf.leaf_table.front();
    int distinguished_cell = -1;
    for (std::size_t e = 0; e < blocking.size(); ++e)
        if (!std::binary_search(blocking[e].leaf_set.begin(), blocking[e].leaf_set.end(),
                                zero_leaf)) {
            distinguished_cell = static_cast<int>(e);
            break;
        }
    if (distinguished_cell < 0)
        fail("NoBlockingSets", "every blocking set contains the all-zero leaf");

    const int fresh = tf.index_count * tf.depth;
    Context ctx = extend_context(tf.pattern.ctx, {static_cast<int>(blocking.size())});

    TfRefinement out;
    out.fresh_partition = fresh;
    out.blocking = blocking;
    out.extended = tf;
    out.extended.pattern = tf_entries_over(
        ctx, tf.f, tf.depth, tf.index_count, tf.pattern.cap,
        static_cast<std::uint64_t>(distinguished_cell) * ctx->strides[fresh]);

    // survive(zeta, eps): the leaf decided by the zeta-th support function
    // stays outside the eps-th blocking set.
    std::map<int, BAElement> per_index;
    for (int i = 0; i < tf.index_count; ++i) {
        BAElement acc = zero(ctx);
        const auto support = build_leaf_support(out.extended, i);
        for (std::size_t zeta = 0; zeta < support.size(); ++zeta) {
            const TreeNode& leaf = tf.leaf_table[zeta];
            for (std::size_t eps = 0; eps < blocking.size(); ++eps) {
                if (std::binary_search(blocking[eps].leaf_set.begin(),
                                       blocking[eps].leaf_set.end(), leaf))
                    continue;
                FIFunc h = support[zeta];
                h.assignments[fresh] = static_cast<int>(eps);
                acc = join(acc, generator(ctx, h));
            }
        }
        per_index.emplace(i, meet(acc, out.extended.pattern.at(1u << i)));
    }
    out.refinement = Refinement{ctx, std::move(per_index)};
    return out;
}

const MaxSubtree& DualPattern::subtree_of(std::uint64_t atom, int index) const {
    return subtree_table[static_cast<std::size_t>(
        pattern.ctx->value_at(atom, partition_of(index)))];
}

DualPattern build_tf_dual_pattern(const GrowthFunction& f, int depth, int n, int cap) {
    if (depth < 1 || depth > f.max_depth())
        fail("LevelOutOfRange", "pattern depth " + std::to_string(depth));
    if (n < 1 || n > 31) fail("SchemaError", "index count must lie in 1..31");
    if (cap < 0) cap = n;

    DualPattern dp;
    dp.f = f;
    dp.depth = depth;
    dp.index_count = n;
    dp.subtree_table = enumerate_maximal_subtrees(f, depth);

    const auto leaf_table = enumerate_level(f, depth);
    std::vector<boost::dynamic_bitset<>> leafset(dp.subtree_table.size(),
                                                 boost::dynamic_bitset<>(leaf_table.size()));
    for (std::size_t s = 0; s < dp.subtree_table.size(); ++s)
        for (std::size_t l = 0; l < leaf_table.size(); ++l)
            if (dp.subtree_table[s].contains(leaf_table[l])) leafset[s].set(l);

    Context ctx = make_context(std::vector<int>(static_cast<std::size_t>(n),
                                                static_cast<int>(dp.subtree_table.size())));
    PossibilityPattern p;
    p.ctx = ctx;
    p.index_count = n;
    p.cap = cap;
    p.distinguished_atom = 0;
    for (IndexSet u = 0; u < (1u << n); ++u) {
        if (std::popcount(u) > cap) continue;
        boost::dynamic_bitset<> bits(ctx->atom_count);
        for (std::uint64_t a = 0; a < ctx->atom_count; ++a) {
            boost::dynamic_bitset<> common(leaf_table.size());
            common.set();
            for (int i = 0; i < n; ++i)
                if ((u >> i) & 1) common &= leafset[static_cast<std::size_t>(ctx->value_at(a, i))];
            if (common.any()) bits.set(a);
        }
        p.entries.emplace(u, BAElement{ctx, std::move(bits)});
    }
    dp.pattern = std::move(p);
    return dp;
}

DualRefinement build_tf_dual_refinement(const DualPattern& dp,
                                        const std::vector<TreeNode>& leaf_enum) {
    if (leaf_enum.size() < 2)
        fail("NoCommonLeaf", "leaf enumeration too small to form the fresh partition");
    for (const auto& leaf : leaf_enum)
        if (leaf.level() != dp.depth || !node_valid(dp.f, leaf))
            fail("SchemaError", "leaf " + leaf.str() + " is not a level-" +
                                    std::to_string(dp.depth) + " node");

    const auto base_leaves = leaves_of(dp.subtree_table.front());
    int distinguished_cell = -1;
    for (std::size_t e = 0; e < leaf_enum.size(); ++e)
        if (std::binary_search(base_leaves.begin(), base_leaves.end(), leaf_enum[e])) {
            distinguished_cell = static_cast<int>(e);
            break;
        }
    if (distinguished_cell < 0)
        fail("NoCommonLeaf", "no enumerated leaf lies in the first subtree");

    const int fresh = dp.index_count;
    Context ctx = extend_context(dp.pattern.ctx, {static_cast<int>(leaf_enum.size())});

    DualRefinement out;
    out.fresh_partition = fresh;
    out.leaf_enum = leaf_enum;
    out.extended = dp;
    {
        // rebuild the entries over the wider algebra
        DualPattern rebuilt = dp;
        PossibilityPattern p;
        p.ctx = ctx;
        p.index_count = dp.index_count;
        p.cap = dp.pattern.cap;
        p.distinguished_atom = static_cast<std::uint64_t>(distinguished_cell) * ctx->strides[fresh];
        const auto leaf_table = enumerate_level(dp.f, dp.depth);
        std::vector<boost::dynamic_bitset<>> leafset(dp.subtree_table.size(),
                                                     boost::dynamic_bitset<>(leaf_table.size()));
        for (std::size_t s = 0; s < dp.subtree_table.size(); ++s)
            for (std::size_t l = 0; l < leaf_table.size(); ++l)
                if (dp.subtree_table[s].contains(leaf_table[l])) leafset[s].set(l);
        for (const auto& [u, _] : dp.pattern.entries) {
            boost::dynamic_bitset<> bits(ctx->atom_count);
            for (std::uint64_t a = 0; a < ctx->atom_count; ++a) {
                boost::dynamic_bitset<> common(leaf_table.size());
                common.set();
                for (int i = 0; i < dp.index_count; ++i)
                    if ((u >> i) & 1)
                        common &= leafset[static_cast<std::size_t>(ctx->value_at(a, i))];
                if (common.any()) bits.set(a);
            }
            p.entries.emplace(u, BAElement{ctx, std::move(bits)});
        }
        rebuilt.pattern = std::move(p);
        out.extended = std::move(rebuilt);
    }

    // include(zeta, eps): the zeta-th subtree contains the eps-th leaf.
    std::map<int, BAElement> per_index;
    for (int i = 0; i < dp.index_count; ++i) {
        BAElement acc = zero(ctx);
        for (std::size_t zeta = 0; zeta < dp.subtree_table.size(); ++zeta) {
            for (std::size_t eps = 0; eps < leaf_enum.size(); ++eps) {
                if (!dp.subtree_table[zeta].contains(leaf_enum[eps])) continue;
                FIFunc h;
                h.assignments[dp.partition_of(i)] = static_cast<int>(zeta);
                h.assignments[fresh] = static_cast<int>(eps);
                acc = join(acc, generator(ctx, h));
            }
        }
        per_index.emplace(i, meet(acc, out.extended.pattern.at(1u << i)));
    }
    out.refinement = Refinement{ctx, std::move(per_index)};
    return out;
}

} // namespace patlab
