#include "patlab/algebra.hpp"

#include <algorithm>

namespace patlab {

AlgebraContext::AlgebraContext(std::vector<int> partition_sizes) : sizes(std::move(partition_sizes)) {
    strides.reserve(sizes.size());
    for (int m : sizes) {
        if (m < 2) fail("SchemaError", "partition size must be at least 2, got " + std::to_string(m));
        strides.push_back(atom_count);
        if (atom_count > kAtomGuard / static_cast<std::uint64_t>(m))
            refuse("TooLarge", "atom universe exceeds 2^24");
        atom_count *= static_cast<std::uint64_t>(m);
    }
}

Context make_context(std::vector<int> partition_sizes) {
    return std::make_shared<const AlgebraContext>(std::move(partition_sizes));
}

Context extend_context(const Context& ctx, const std::vector<int>& extra_sizes) {
    std::vector<int> sizes = ctx->sizes;
    sizes.insert(sizes.end(), extra_sizes.begin(), extra_sizes.end());
    return make_context(std::move(sizes));
}

bool FIFunc::compatible_with(const FIFunc& other) const {
    auto it = assignments.begin();
    auto jt = other.assignments.begin();
    while (it != assignments.end() && jt != other.assignments.end()) {
        if (it->first < jt->first) ++it;
        else if (jt->first < it->first) ++jt;
        else if (it->second != jt->second) return false;
        else { ++it; ++jt; }
    }
    return true;
}

FIFunc FIFunc::merged_with(const FIFunc& other) const {
    FIFunc out = *this;
    out.assignments.insert(other.assignments.begin(), other.assignments.end());
    return out;
}

bool FIFunc::subsumes(const FIFunc& other) const {
    return std::includes(assignments.begin(), assignments.end(), other.assignments.begin(),
                         other.assignments.end());
}

namespace {

void check_fi(const Context& ctx, const FIFunc& h) {
    for (const auto& [j, v] : h.assignments) {
        if (j < 0 || j >= ctx->partitions())
            fail("InvalidAssignment", "partition " + std::to_string(j) + " does not exist");
        if (v < 0 || v >= ctx->sizes[j])
            fail("InvalidAssignment", "value " + std::to_string(v) + " out of range for partition " +
                                          std::to_string(j));
    }
}

void check_same_ctx(const BAElement& a, const BAElement& b) {
    if (!a.ctx || !b.ctx || !(*a.ctx == *b.ctx))
        fail("ContextMismatch", "operands come from different algebras");
}

} // namespace

BAElement zero(const Context& ctx) { return {ctx, boost::dynamic_bitset<>(ctx->atom_count)}; }

BAElement one(const Context& ctx) {
    boost::dynamic_bitset<> bits(ctx->atom_count);
    bits.set();
    return {ctx, std::move(bits)};
}

BAElement atom_element(const Context& ctx, std::uint64_t atom) {
    if (atom >= ctx->atom_count) fail("InvalidAssignment", "atom index out of range");
    boost::dynamic_bitset<> bits(ctx->atom_count);
    bits.set(atom);
    return {ctx, std::move(bits)};
}

BAElement generator(const Context& ctx, const FIFunc& h) {
    check_fi(ctx, h);
    boost::dynamic_bitset<> bits(ctx->atom_count);
    for (std::uint64_t a = 0; a < ctx->atom_count; ++a) {
        bool in = true;
        for (const auto& [j, v] : h.assignments)
            if (ctx->value_at(a, j) != v) { in = false; break; }
        if (in) bits.set(a);
    }
    return {ctx, std::move(bits)};
}

BAElement meet(const BAElement& a, const BAElement& b) {
    check_same_ctx(a, b);
    return {a.ctx, a.atoms & b.atoms};
}

BAElement join(const BAElement& a, const BAElement& b) {
    check_same_ctx(a, b);
    return {a.ctx, a.atoms | b.atoms};
}

BAElement complement(const BAElement& a) { return {a.ctx, ~a.atoms}; }

bool leq(const BAElement& a, const BAElement& b) {
    check_same_ctx(a, b);
    return a.atoms.is_subset_of(b.atoms);
}

bool is_zero(const BAElement& a) { return a.atoms.none(); }

bool atom_in(const BAElement& a, std::uint64_t atom) {
    return atom < a.atoms.size() && a.atoms.test(atom);
}

namespace {

// True when `cur` (a subset of the cube fixed so far) is invariant under
// changing coordinate j, i.e. the restriction does not depend on j.
bool independent_of(const BAElement& cur, int j) {
    const auto& ctx = *cur.ctx;
    for (std::uint64_t a = cur.atoms.find_first(); a != boost::dynamic_bitset<>::npos;
         a = cur.atoms.find_next(a))
        for (int v = 0; v < ctx.sizes[j]; ++v)
            if (!cur.atoms.test(ctx.with_value(a, j, v))) return false;
    return true;
}

void dnf_rec(const BAElement& cur, const BAElement& cube, FIFunc& h, int j,
             std::vector<FIFunc>& out) {
    if (is_zero(cur)) return;
    if (cur == cube) {
        out.push_back(h);
        return;
    }
    // cur is a proper nonempty part of the cube, so some coordinate >= j
    // still matters: skipped coordinates stay invariant under later meets,
    // hence j < partitions() here.
    const auto& ctx = *cur.ctx;
    if (independent_of(cur, j)) {
        dnf_rec(cur, cube, h, j + 1, out);
        return;
    }
    for (int v = 0; v < ctx.sizes[j]; ++v) {
        h.assignments[j] = v;
        BAElement slice_cube = meet(cube, generator(cur.ctx, FIFunc{{{j, v}}}));
        BAElement slice = meet(cur, slice_cube);
        dnf_rec(slice, slice_cube, h, j + 1, out);
        h.assignments.erase(j);
    }
}

} // namespace

std::vector<FIFunc> to_fi_dnf(const BAElement& a) {
    std::vector<FIFunc> out;
    FIFunc h;
    dnf_rec(a, one(a.ctx), h, 0, out);
    return out;
}

BAElement from_fi_dnf(const Context& ctx, const std::vector<FIFunc>& cubes) {
    BAElement out = zero(ctx);
    for (const auto& h : cubes) out = join(out, generator(ctx, h));
    return out;
}

namespace {

bool union_is_function(const std::vector<FIFunc>& family, const std::vector<std::size_t>& pick) {
    for (std::size_t i = 0; i < pick.size(); ++i)
        for (std::size_t j = i + 1; j < pick.size(); ++j)
            if (!family[pick[i]].compatible_with(family[pick[j]])) return false;
    return true;
}

std::uint64_t choose_count(std::size_t n, std::size_t m, std::uint64_t cap) {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < m; ++i) {
        c = c * (n - i) / (i + 1);
        if (c > cap) return cap + 1;
    }
    return c;
}

} // namespace

std::optional<std::vector<FIFunc>> compatible_subfamily(const std::vector<FIFunc>& family, int m,
                                                        std::uint64_t exhaustive_guard) {
    if (m < 0) fail("SchemaError", "subfamily size must be nonnegative");
    if (m == 0) return std::vector<FIFunc>{};
    if (static_cast<std::size_t>(m) > family.size()) return std::nullopt;

    const std::size_t n = family.size();
    if (choose_count(n, static_cast<std::size_t>(m), exhaustive_guard) <= exhaustive_guard) {
        std::vector<std::size_t> pick(static_cast<std::size_t>(m));
        for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
        for (;;) {
            if (union_is_function(family, pick)) {
                std::vector<FIFunc> out;
                for (auto i : pick) out.push_back(family[i]);
                return out;
            }
            // next lexicographic combination
            int i = m - 1;
            while (i >= 0 && pick[i] == n - static_cast<std::size_t>(m - i)) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
        }
        return std::nullopt;
    }

    // Beyond the guard: greedy pass seeded at each start index in turn,
    // keeping members compatible with everything chosen so far.  May miss
    // solutions; never returns an unverified one.
    for (std::size_t start = 0; start < n; ++start) {
        std::vector<std::size_t> pick{start};
        for (std::size_t i = 0; i < n && pick.size() < static_cast<std::size_t>(m); ++i) {
            if (i == start) continue;
            bool ok = true;
            for (auto p : pick)
                if (!family[i].compatible_with(family[p])) { ok = false; break; }
            if (ok) pick.push_back(i);
        }
        if (pick.size() == static_cast<std::size_t>(m) && union_is_function(family, pick)) {
            std::sort(pick.begin(), pick.end());
            std::vector<FIFunc> out;
            for (auto i : pick) out.push_back(family[i]);
            return out;
        }
    }
    return std::nullopt;
}

} // namespace patlab
