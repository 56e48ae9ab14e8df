#include "patlab/trees.hpp"

#include <algorithm>
#include <set>

namespace patlab {

GrowthFunction::GrowthFunction(std::vector<int> v) : values(std::move(v)) {
    if (values.empty())
        fail("SchemaError", "growth function table must be nonempty");
    for (std::size_t l = 0; l < values.size(); ++l) {
        if (values[l] < static_cast<int>(l) + 1)
            fail("SchemaError", "growth function needs f(l) >= l+1 at level " + std::to_string(l));
        if (l > 0 && values[l] <= values[l - 1])
            fail("SchemaError", "growth function must be strictly increasing");
    }
}

int GrowthFunction::at(int level) const {
    if (level < 0 || level >= max_depth())
        fail("LevelOutOfRange", "level " + std::to_string(level) + " outside table of length " +
                                    std::to_string(max_depth()));
    return values[level];
}

int successor_count(const GrowthFunction& f, int level) { return f.at(level) + 1; }

TreeNode TreeNode::prefix(int j) const {
    if (j < 0 || j > level())
        fail("LevelOutOfRange", "prefix length " + std::to_string(j) + " of node " + str());
    return TreeNode{std::vector<int>(entries.begin(), entries.begin() + j)};
}

TreeNode TreeNode::child(int value) const {
    TreeNode c = *this;
    c.entries.push_back(value);
    return c;
}

bool TreeNode::is_prefix_of(const TreeNode& other) const {
    if (level() > other.level()) return false;
    return std::equal(entries.begin(), entries.end(), other.entries.begin());
}

std::string TreeNode::str() const {
    std::string out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(entries[i]);
    }
    return out;
}

TreeNode TreeNode::parse(const std::string& s) {
    TreeNode n;
    if (s.empty()) return n;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t dot = s.find('.', pos);
        std::string part = s.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            fail("SchemaError", "bad tree node literal \"" + s + "\"");
        n.entries.push_back(std::stoi(part));
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return n;
}

bool node_valid(const GrowthFunction& f, const TreeNode& node) {
    if (node.level() > f.max_depth()) return false;
    for (int l = 0; l < node.level(); ++l)
        if (node.entries[l] < 0 || node.entries[l] > f.values[l]) return false;
    return true;
}

unsigned long long level_size(const GrowthFunction& f, int k) {
    if (k < 0 || k > f.max_depth())
        fail("LevelOutOfRange", "level " + std::to_string(k));
    unsigned long long n = 1;
    for (int l = 0; l < k; ++l) {
        unsigned long long w = static_cast<unsigned long long>(f.values[l]) + 1;
        if (n > (1ull << 62) / w)
            refuse("TooLarge", "level size overflows at level " + std::to_string(l));
        n *= w;
    }
    return n;
}

std::vector<TreeNode> enumerate_level(const GrowthFunction& f, int k) {
    unsigned long long n = level_size(f, k);
    if (n > (1ull << 24))
        refuse("TooLarge", "level " + std::to_string(k) + " has " + std::to_string(n) + " nodes");
    std::vector<TreeNode> out;
    out.reserve(static_cast<std::size_t>(n));
    TreeNode cur;
    cur.entries.assign(k, 0);
    for (;;) {
        out.push_back(cur);
        int l = k - 1;
        while (l >= 0 && cur.entries[l] == f.values[l]) cur.entries[l--] = 0;
        if (l < 0) break;
        ++cur.entries[l];
    }
    return out;
}

namespace {

// Distinct prefixes of the leaves at each level j <= k, sorted.
std::vector<std::vector<TreeNode>> prefix_table(int k, const std::vector<TreeNode>& leaves) {
    std::vector<std::vector<TreeNode>> table(k + 1);
    for (int j = 0; j <= k; ++j) {
        std::set<TreeNode> at;
        for (const auto& leaf : leaves) at.insert(leaf.prefix(j));
        table[j].assign(at.begin(), at.end());
    }
    return table;
}

} // namespace

std::optional<TreeNode> has_full_splitting(const GrowthFunction& f, int k,
                                           const std::vector<TreeNode>& leaves) {
    if (k < 0 || k > f.max_depth())
        fail("LevelOutOfRange", "level " + std::to_string(k));
    for (const auto& leaf : leaves) {
        if (leaf.level() != k)
            fail("MixedLevels", "leaf " + leaf.str() + " is not at level " + std::to_string(k));
        if (!node_valid(f, leaf))
            fail("SchemaError", "leaf " + leaf.str() + " invalid for the growth function");
    }
    if (leaves.empty()) return std::nullopt;
    auto prefixes = prefix_table(k, leaves);
    for (int j = 0; j + 1 <= k; ++j) {
        for (const auto& node : prefixes[j]) {
            bool full = true;
            for (int v = 0; v <= f.values[j] && full; ++v)
                full = std::binary_search(prefixes[j + 1].begin(), prefixes[j + 1].end(),
                                          node.child(v));
            if (full) return node;
        }
    }
    return std::nullopt;
}

bool MaxSubtree::contains(const TreeNode& node) const {
    return std::binary_search(nodes.begin(), nodes.end(), node);
}

bool is_k_maximal(const GrowthFunction& f, int k, const std::vector<TreeNode>& nodes) {
    if (k < 0 || k > f.max_depth())
        fail("LevelOutOfRange", "depth " + std::to_string(k));
    std::set<TreeNode> s(nodes.begin(), nodes.end());
    if (s.empty()) return false;
    for (const auto& n : s) {
        if (!node_valid(f, n) || n.level() > k) return false;
        if (n.level() > 0 && !s.count(n.prefix(n.level() - 1))) return false;
    }
    if (k == 0) return s.size() == 1;
    for (const auto& n : s) {
        if (n.level() == k) continue;
        int kept = 0;
        for (int v = 0; v <= f.values[n.level()]; ++v) kept += s.count(n.child(v)) ? 1 : 0;
        if (kept != f.values[n.level()]) return false;
    }
    return true;
}

unsigned long long kmax_subtree_count(const GrowthFunction& f, int k) {
    if (k < 0 || k > f.max_depth())
        fail("LevelOutOfRange", "depth " + std::to_string(k));
    unsigned long long total = 1, frontier = 1;
    for (int l = 0; l < k; ++l) {
        unsigned long long w = static_cast<unsigned long long>(f.values[l]) + 1;
        for (unsigned long long i = 0; i < frontier; ++i) {
            if (total > (1ull << 62) / w)
                refuse("TooLarge", "subtree count overflows at depth " + std::to_string(l));
            total *= w;
        }
        frontier *= static_cast<unsigned long long>(f.values[l]);
    }
    return total;
}

namespace {

void enum_kmax_rec(const GrowthFunction& f, int k, int j, const std::vector<TreeNode>& frontier,
                   std::vector<TreeNode>& acc, std::vector<MaxSubtree>& out) {
    if (j == k) {
        MaxSubtree s;
        s.depth = k;
        s.nodes = acc;
        std::sort(s.nodes.begin(), s.nodes.end());
        out.push_back(std::move(s));
        return;
    }
    const int m = f.values[j];
    std::vector<int> omit(frontier.size(), 0);
    for (;;) {
        const std::size_t base = acc.size();
        std::vector<TreeNode> next;
        next.reserve(frontier.size() * static_cast<std::size_t>(m));
        for (std::size_t i = 0; i < frontier.size(); ++i)
            for (int v = 0; v <= m; ++v)
                if (v != omit[i]) next.push_back(frontier[i].child(v));
        acc.insert(acc.end(), next.begin(), next.end());
        enum_kmax_rec(f, k, j + 1, next, acc, out);
        acc.resize(base);
        int i = static_cast<int>(frontier.size()) - 1;
        while (i >= 0 && omit[i] == m) omit[i--] = 0;
        if (i < 0) break;
        ++omit[i];
    }
}

} // namespace

std::vector<MaxSubtree> enumerate_maximal_subtrees(const GrowthFunction& f, int k,
                                                   unsigned long long guard) {
    unsigned long long count = kmax_subtree_count(f, k);
    if (count > guard)
        refuse("TooLarge", std::to_string(count) + " maximal subtrees at depth " +
                               std::to_string(k));
    std::vector<MaxSubtree> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<TreeNode> acc{TreeNode{}};
    enum_kmax_rec(f, k, 0, {TreeNode{}}, acc, out);
    return out;
}

bool subtree_extends(const MaxSubtree& s, const MaxSubtree& t) {
    if (s.depth > t.depth) fail("LevelOutOfRange", "extension must not decrease depth");
    return std::includes(t.nodes.begin(), t.nodes.end(), s.nodes.begin(), s.nodes.end());
}

std::vector<TreeNode> leaves_of(const MaxSubtree& s) {
    std::vector<TreeNode> out;
    for (const auto& n : s.nodes)
        if (n.level() == s.depth) out.push_back(n);
    return out;
}

namespace {

std::vector<TreeNode> checked_leaf_set(const GrowthFunction& f, int k,
                                       const std::vector<TreeNode>& b) {
    std::set<TreeNode> set;
    for (const auto& leaf : b) {
        if (leaf.level() != k)
            fail("MixedLevels", "leaf " + leaf.str() + " is not at level " + std::to_string(k));
        if (!node_valid(f, leaf))
            fail("SchemaError", "leaf " + leaf.str() + " invalid for the growth function");
        set.insert(leaf);
    }
    return {set.begin(), set.end()};
}

} // namespace

bool is_blocking(const GrowthFunction& f, int k, const std::vector<TreeNode>& b) {
    auto set = checked_leaf_set(f, k, b);
    unsigned long long total = level_size(f, k);
    if (set.empty() || set.size() >= total) return false;
    std::vector<TreeNode> complement;
    for (const auto& leaf : enumerate_level(f, k))
        if (!std::binary_search(set.begin(), set.end(), leaf)) complement.push_back(leaf);
    return !has_full_splitting(f, k, complement).has_value();
}

std::vector<BlockingSet> enumerate_blocking(const GrowthFunction& f, int k) {
    unsigned long long total = level_size(f, k);
    if (total > 24)
        refuse("TooLarge", "level " + std::to_string(k) + " has " + std::to_string(total) +
                               " leaves; subset enumeration capped at 24");
    const auto leaves = enumerate_level(f, k);
    const unsigned n = static_cast<unsigned>(leaves.size());
    std::vector<BlockingSet> out;
    for (unsigned long long mask = 1; n > 0 && mask + 1 < (1ull << n); ++mask) {
        std::vector<TreeNode> in, complement;
        for (unsigned i = 0; i < n; ++i)
            ((mask >> i) & 1 ? in : complement).push_back(leaves[i]);
        if (!has_full_splitting(f, k, complement).has_value())
            out.push_back(BlockingSet{k, std::move(in)});
    }
    return out;
}

std::optional<MaxSubtree> blocking_complement_subtree(const GrowthFunction& f, int k,
                                                      const BlockingSet& b) {
    auto set = checked_leaf_set(f, k, b.leaf_set);
    unsigned long long total = level_size(f, k);
    if (set.empty() || set.size() >= total) return std::nullopt;
    std::vector<TreeNode> complement;
    for (const auto& leaf : enumerate_level(f, k))
        if (!std::binary_search(set.begin(), set.end(), leaf)) complement.push_back(leaf);
    for (const auto& s : enumerate_maximal_subtrees(f, k)) {
        auto ls = leaves_of(s);
        if (std::includes(ls.begin(), ls.end(), complement.begin(), complement.end())) return s;
    }
    return std::nullopt;
}

bool dense_everywhere(const GrowthFunction& f, int k, const std::vector<TreeNode>& b) {
    auto set = checked_leaf_set(f, k, b);
    for (const auto& leaf : set) {
        for (int j = 0; j < k; ++j) {
            const TreeNode stem = leaf.prefix(j);
            for (int v = 0; v <= f.values[j]; ++v) {
                const TreeNode target = stem.child(v);
                bool extended = false;
                for (const auto& other : set)
                    if (target.is_prefix_of(other)) { extended = true; break; }
                if (!extended) return false;
            }
        }
    }
    return true;
}

} // namespace patlab
