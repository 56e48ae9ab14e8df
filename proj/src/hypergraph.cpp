#include "patlab/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <random>

namespace patlab {

namespace {

// All size-m subsets of 0..n-1 in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int m) {
    std::vector<std::vector<int>> out;
    if (m < 0 || m > n) return out;
    std::vector<int> pick(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) pick[static_cast<std::size_t>(i)] = i;
    for (;;) {
        out.push_back(pick);
        int i = m - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - m + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

std::vector<std::vector<int>> subsets_of(const std::vector<int>& w, int m) {
    std::vector<std::vector<int>> out;
    for (const auto& idx : combinations(static_cast<int>(w.size()), m)) {
        std::vector<int> sub;
        sub.reserve(idx.size());
        for (int i : idx) sub.push_back(w[static_cast<std::size_t>(i)]);
        out.push_back(std::move(sub));
    }
    return out;
}

bool all_subedges_present(const Hypergraph& h, const std::vector<int>& w) {
    for (const auto& u : subsets_of(w, h.k + 1))
        if (!h.edges.count(u)) return false;
    return true;
}

} // namespace

std::vector<std::vector<int>> k_subsets(int vertex_count, int k) {
    return combinations(vertex_count, k);
}

void validate_hypergraph(const Hypergraph& h) {
    if (h.k < 1 || h.n < h.k + 1)
        fail("SchemaError", "need k >= 1 and n >= k+1");
    if (h.vertex_count < 0) fail("SchemaError", "negative vertex count");
    for (const auto& e : h.edges) {
        if (static_cast<int>(e.size()) != h.k + 1)
            fail("SchemaError", "edge arity must be k+1");
        if (!std::is_sorted(e.begin(), e.end()) ||
            std::adjacent_find(e.begin(), e.end()) != e.end())
            fail("SchemaError", "edges must be sorted vertex sets without repeats");
        for (int v : e)
            if (v < 0 || v >= h.vertex_count) fail("SchemaError", "edge vertex out of range");
    }
}

bool is_legal(const Hypergraph& h) {
    validate_hypergraph(h);
    for (const auto& w : combinations(h.vertex_count, h.n + 1))
        if (all_subedges_present(h, w)) return false;
    return true;
}

std::vector<std::vector<int>> near_forbidden(const Hypergraph& h) {
    if (!is_legal(h)) fail("IllegalGraph", "graph contains a forbidden configuration");
    std::vector<std::vector<int>> out;
    for (const auto& w : combinations(h.vertex_count, h.n))
        if (all_subedges_present(h, w)) out.push_back(w);
    return out;
}

bool consistent_type_tnk(const Hypergraph& h, const std::vector<std::vector<int>>& v) {
    std::set<std::vector<int>> listed(v.begin(), v.end());
    for (const auto& sub : listed) {
        if (static_cast<int>(sub.size()) != h.k)
            fail("SchemaError", "type formulas must be indexed by k-subsets");
        if (!std::is_sorted(sub.begin(), sub.end()))
            fail("SchemaError", "k-subsets must be sorted");
    }
    for (const auto& w : near_forbidden(h)) {
        bool covered = true;
        for (const auto& sub : subsets_of(w, h.k))
            if (!listed.count(sub)) { covered = false; break; }
        if (covered) return false;
    }
    return true;
}

NearForbiddenFamily full_near_forbidden_family(const Hypergraph& h) {
    return NearForbiddenFamily{near_forbidden(h)};
}

TnkPattern build_tnk_pattern(const Hypergraph& h, const NearForbiddenFamily& family, int cap) {
    const auto nf = near_forbidden(h);  // also validates legality
    std::set<std::vector<int>> nf_set(nf.begin(), nf.end());
    for (const auto& w : family.members)
        if (!nf_set.count(w))
            fail("SchemaError", "family member is not near-forbidden in the graph");
    if (family.members.size() > 24)
        refuse("ContextTooSmall", "cannot provide a partition per member past 24 members");

    TnkPattern tp;
    tp.graph = h;
    tp.family = family;
    tp.formula_index = combinations(h.vertex_count, h.k);
    if (tp.formula_index.size() > 31)
        refuse("TooLarge", "more than 31 formula indices");

    std::map<std::vector<int>, int> beta_of;
    for (std::size_t b = 0; b < tp.formula_index.size(); ++b) beta_of[tp.formula_index[b]] = static_cast<int>(b);
    for (const auto& w : family.members) {
        IndexSet mask = 0;
        for (const auto& sub : subsets_of(w, h.k)) mask |= 1u << beta_of.at(sub);
        tp.member_formula_mask.push_back(mask);
    }

    long long default_cap = 1;
    for (int i = 0; i < h.k; ++i) default_cap = default_cap * (h.n - i) / (i + 1);
    if (cap < 0) cap = static_cast<int>(default_cap);

    Context ctx = make_context(std::vector<int>(family.members.size(), 2));

    PossibilityPattern p;
    p.ctx = ctx;
    p.index_count = static_cast<int>(tp.formula_index.size());
    p.cap = cap;
    p.distinguished_atom = ctx->atom_count - 1;  // every member on cell 1

    std::uint64_t stored = 0;
    for (int size = 0; size <= cap && size <= p.index_count; ++size) {
        std::uint64_t c = 1;
        for (int i = 0; i < size; ++i)
            c = c * static_cast<std::uint64_t>(p.index_count - i) / static_cast<std::uint64_t>(i + 1);
        stored += c;
    }
    if (stored > (1ull << 20)) refuse("TooLarge", "too many stored formula sets");

    std::vector<BAElement> member_gen;
    for (std::size_t m = 0; m < family.members.size(); ++m)
        member_gen.push_back(generator(ctx, FIFunc{{{static_cast<int>(m), 0}}}));

    for (int size = 0; size <= cap && size <= p.index_count; ++size)
        for (const auto& positions : combinations(p.index_count, size)) {
            IndexSet s = 0;
            for (int pos : positions) s |= 1u << pos;
            BAElement b = one(ctx);
            for (std::size_t m = 0; m < family.members.size(); ++m)
                if ((tp.member_formula_mask[m] & s) == tp.member_formula_mask[m])
                    b = meet(b, complement(member_gen[m]));
            p.entries.emplace(s, std::move(b));
        }
    tp.pattern = std::move(p);
    return tp;
}

bool verify_pattern_semantics(const TnkPattern& tp) {
    const auto& ctx = *tp.pattern.ctx;
    std::map<std::vector<int>, int> beta_of;
    for (std::size_t b = 0; b < tp.formula_index.size(); ++b)
        beta_of[tp.formula_index[b]] = static_cast<int>(b);

    // Near-forbidden sets of the unmodified graph, recomputed from the edge
    // set rather than taken from the builder's bookkeeping.  Removing edges
    // only shrinks this list, so on each atom a candidate survives exactly
    // when no removed member owns one of its sub-edges.
    const auto cand = near_forbidden(tp.graph);
    if (tp.family.members.size() > 63) refuse("TooLarge", "too many family members");
    std::vector<IndexSet> cand_cover;
    std::vector<std::uint64_t> killed_by(cand.size(), 0);
    for (std::size_t c = 0; c < cand.size(); ++c) {
        IndexSet mask = 0;
        for (const auto& sub : subsets_of(cand[c], tp.graph.k)) mask |= 1u << beta_of.at(sub);
        cand_cover.push_back(mask);
        std::set<std::vector<int>> subedges;
        for (auto& u : subsets_of(cand[c], tp.graph.k + 1)) subedges.insert(std::move(u));
        for (std::size_t m = 0; m < tp.family.members.size(); ++m)
            for (const auto& u : subsets_of(tp.family.members[m], tp.graph.k + 1))
                if (subedges.count(u)) killed_by[c] |= 1ull << m;
    }

    for (std::uint64_t atom = 0; atom < ctx.atom_count; ++atom) {
        std::uint64_t removed = 0;
        for (std::size_t m = 0; m < tp.family.members.size(); ++m)
            if (ctx.value_at(atom, static_cast<int>(m)) != 0) removed |= 1ull << m;
        std::vector<IndexSet> covers;
        for (std::size_t c = 0; c < cand.size(); ++c)
            if ((killed_by[c] & removed) == 0) covers.push_back(cand_cover[c]);
        for (const auto& [s, b] : tp.pattern.entries) {
            bool consistent = true;
            for (IndexSet cover : covers)
                if ((cover & s) == cover) { consistent = false; break; }
            if (consistent != atom_in(b, atom)) return false;
        }
    }
    return true;
}

bool support_trace_check(const TnkPattern& tp, const Refinement& r) {
    if (!refines(r, tp.pattern))
        fail("NotARefinement", "family does not refine the pattern");
    for (const auto& [s, _] : tp.pattern.entries)
        if (is_zero(r.induced(s)))
            fail("NotARefinement", "an induced entry vanishes");

    std::vector<std::set<int>> mention(tp.formula_index.size());
    for (std::size_t beta = 0; beta < tp.formula_index.size(); ++beta) {
        auto it = r.per_index.find(static_cast<int>(beta));
        if (it == r.per_index.end())
            fail("NotARefinement", "missing element for formula index " + std::to_string(beta));
        for (const auto& cube : to_fi_dnf(it->second))
            for (const auto& [j, _] : cube.assignments) mention[beta].insert(j);
    }
    for (std::size_t m = 0; m < tp.family.members.size(); ++m) {
        bool traced = false;
        for (std::size_t beta = 0; beta < tp.formula_index.size() && !traced; ++beta)
            if ((tp.member_formula_mask[m] >> beta) & 1)
                traced = mention[beta].count(static_cast<int>(m)) > 0;
        if (!traced) return false;
    }
    return true;
}

namespace {

std::vector<Refinement> enumerate_refinements_impl(const TnkPattern& tp,
                                                   bool require_distinguished,
                                                   std::uint64_t guard) {
    const auto& p = tp.pattern;
    const std::uint64_t atoms = p.ctx->atom_count;
    if (atoms > 20) refuse("SearchSpaceTooLarge", "too many atoms for element enumeration");

    // every element of the algebra, as an atom mask; optionally only the
    // ones containing the distinguished atom
    std::vector<std::uint64_t> elements;
    for (std::uint64_t mask = 1; mask < (1ull << atoms); ++mask) {
        if (require_distinguished && !((mask >> p.distinguished_atom) & 1)) continue;
        elements.push_back(mask);
    }

    std::uint64_t total = 1;
    for (int i = 0; i < p.index_count; ++i) {
        if (total > guard / elements.size())
            refuse("SearchSpaceTooLarge", "per-formula element product exceeds the guard");
        total *= elements.size();
    }

    auto to_element = [&](std::uint64_t mask) {
        boost::dynamic_bitset<> bits(atoms);
        for (std::uint64_t a = 0; a < atoms; ++a)
            if ((mask >> a) & 1) bits.set(a);
        return BAElement{p.ctx, std::move(bits)};
    };

    std::vector<Refinement> out;
    std::vector<std::size_t> pick(static_cast<std::size_t>(p.index_count), 0);
    for (;;) {
        std::map<int, BAElement> per_index;
        for (int i = 0; i < p.index_count; ++i)
            per_index.emplace(i, to_element(elements[pick[static_cast<std::size_t>(i)]]));
        Refinement r{p.ctx, std::move(per_index)};
        bool ok = true;
        for (const auto& [u, b] : p.entries) {
            BAElement ind = r.induced(u);
            if (!leq(ind, b) || is_zero(ind)) { ok = false; break; }
        }
        if (ok) out.push_back(std::move(r));
        int i = p.index_count - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] + 1 == elements.size())
            pick[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
    }
    return out;
}

} // namespace

std::vector<Refinement> enumerate_tnk_refinements(const TnkPattern& tp, bool require_distinguished,
                                                  std::uint64_t guard) {
    return enumerate_refinements_impl(tp, require_distinguished, guard);
}

std::map<std::vector<int>, std::set<int>> control_map_from_refinement(const TnkPattern& tp,
                                                                      const Refinement& r) {
    std::map<std::vector<int>, std::set<int>> f;
    for (std::size_t beta = 0; beta < tp.formula_index.size(); ++beta) {
        const auto& v = tp.formula_index[beta];
        std::set<int> controlled(v.begin(), v.end());
        auto it = r.per_index.find(static_cast<int>(beta));
        if (it != r.per_index.end()) {
            std::set<int> mentioned;
            for (const auto& cube : to_fi_dnf(it->second))
                for (const auto& [j, _] : cube.assignments) mentioned.insert(j);
            for (std::size_t m = 0; m < tp.family.members.size(); ++m)
                if (mentioned.count(static_cast<int>(m)))
                    controlled.insert(tp.family.members[m].begin(), tp.family.members[m].end());
        }
        f[v] = std::move(controlled);
    }
    return f;
}

std::optional<std::vector<int>> free_set_escape(
    const NearForbiddenFamily& family, int vertex_count, int k,
    const std::map<std::vector<int>, std::set<int>>& f) {
    for (const auto& v : combinations(vertex_count, k)) {
        auto it = f.find(v);
        if (it == f.end()) fail("FNotExpansive", "control map not total on the k-subsets");
        for (int x : v)
            if (!it->second.count(x)) fail("FNotExpansive", "control map must contain its argument");
    }
    for (const auto& w : family.members) {
        bool controlled = false;
        for (const auto& v : subsets_of(w, k)) {
            const auto& fv = f.at(v);
            if (std::all_of(w.begin(), w.end(), [&](int x) { return fv.count(x) > 0; })) {
                controlled = true;
                break;
            }
        }
        if (!controlled) return w;
    }
    return std::nullopt;
}

Hypergraph random_legal_hypergraph(int vertex_count, int n, int k, int target_edges,
                                   std::uint64_t seed) {
    Hypergraph h;
    h.vertex_count = vertex_count;
    h.n = n;
    h.k = k;
    validate_hypergraph(h);
    const auto all = combinations(vertex_count, k + 1);
    if (all.empty()) return h;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < target_edges; ++i)
        h.edges.insert(all[static_cast<std::size_t>(rng() % all.size())]);
    // prune: remove one edge per forbidden configuration until legal
    for (;;) {
        bool violated = false;
        for (const auto& w : combinations(vertex_count, n + 1)) {
            if (!all_subedges_present(h, w)) continue;
            h.edges.erase(subsets_of(w, k + 1).front());
            violated = true;
            break;
        }
        if (!violated) break;
    }
    return h;
}

} // namespace patlab
