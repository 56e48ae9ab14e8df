#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "patlab/errors.hpp"

namespace patlab {

inline constexpr std::uint64_t kAtomGuard = 1ull << 24;

// Finite free Boolean algebra generated by independent partitions.  Atoms
// are total cell choices, indexed in mixed radix with partition 0 varying
// fastest; every element is a union of atoms.
struct AlgebraContext {
    std::vector<int> sizes;             // one entry per partition, each >= 2
    std::vector<std::uint64_t> strides;
    std::uint64_t atom_count = 1;

    explicit AlgebraContext(std::vector<int> partition_sizes);

    int partitions() const { return static_cast<int>(sizes.size()); }
    int value_at(std::uint64_t atom, int j) const {
        return static_cast<int>(atom / strides[j] % static_cast<std::uint64_t>(sizes[j]));
    }
    std::uint64_t with_value(std::uint64_t atom, int j, int v) const {
        return atom + (static_cast<std::uint64_t>(v) - value_at(atom, j)) * strides[j];
    }
    bool operator==(const AlgebraContext& o) const { return sizes == o.sizes; }
};

using Context = std::shared_ptr<const AlgebraContext>;

Context make_context(std::vector<int> partition_sizes);
Context extend_context(const Context& ctx, const std::vector<int>& extra_sizes);

// Finite partial choice of one cell per partition.  Two of these are
// compatible exactly when they agree on their common domain.
struct FIFunc {
    std::map<int, int> assignments;

    bool compatible_with(const FIFunc& other) const;
    FIFunc merged_with(const FIFunc& other) const;  // union of the graphs
    bool subsumes(const FIFunc& other) const;        // other is a subfunction
    auto operator<=>(const FIFunc&) const = default;
};

struct BAElement {
    Context ctx;
    boost::dynamic_bitset<> atoms;

    bool operator==(const BAElement& o) const { return atoms == o.atoms; }
};

BAElement zero(const Context& ctx);
BAElement one(const Context& ctx);
BAElement atom_element(const Context& ctx, std::uint64_t atom);

// All total assignments extending h; nonzero for every valid h.
BAElement generator(const Context& ctx, const FIFunc& h);

BAElement meet(const BAElement& a, const BAElement& b);
BAElement join(const BAElement& a, const BAElement& b);
BAElement complement(const BAElement& a);
bool leq(const BAElement& a, const BAElement& b);
bool is_zero(const BAElement& a);

bool atom_in(const BAElement& a, std::uint64_t atom);

// Pairwise-incompatible partial assignments whose generators union to
// exactly `a`.  Each emitted domain only contains partitions the element
// actually depends on along that branch; no canonical form is promised.
std::vector<FIFunc> to_fi_dnf(const BAElement& a);

BAElement from_fi_dnf(const Context& ctx, const std::vector<FIFunc>& cubes);

// m members whose assignment union is a function, or nothing.  Exhaustive
// while the number of m-subsets stays below the guard, a greedy
// sunflower-style pass beyond it (which may miss solutions; any returned
// sublist is verified compatible).
std::optional<std::vector<FIFunc>> compatible_subfamily(const std::vector<FIFunc>& family,
                                                        int m,
                                                        std::uint64_t exhaustive_guard = 1ull << 21);

} // namespace patlab
