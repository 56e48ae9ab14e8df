#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "patlab/tau_structures.hpp"

using namespace patlab;

namespace {

TreeNode node(const std::string& s) { return TreeNode::parse(s); }

MaxSubtree subtree(int depth, const std::vector<std::string>& strs) {
    MaxSubtree s;
    s.depth = depth;
    for (const auto& str : strs) s.nodes.push_back(node(str));
    std::sort(s.nodes.begin(), s.nodes.end());
    return s;
}

bool has_kind(const std::vector<Violation>& v, ViolationKind kind) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

// Quantifier-free facts at the structure's own level: labels and edges.
struct Facts {
    std::map<int, TreeNode> leaves;
    std::map<int, MaxSubtree> subtrees;
    std::set<std::pair<int, int>> edges;
    bool operator==(const Facts&) const = default;
};

Facts facts_at_level(const TauStructure& m, int level) {
    Facts f;
    for (const auto& [id, leaf] : m.p_elems) f.leaves.emplace(id, leaf.prefix(level));
    for (const auto& [id, s] : m.q_elems) {
        MaxSubtree cut;
        cut.depth = level;
        for (const auto& n : s.nodes)
            if (n.level() <= level) cut.nodes.push_back(n);
        std::sort(cut.nodes.begin(), cut.nodes.end());
        f.subtrees.emplace(id, std::move(cut));
    }
    f.edges = m.edges;
    return f;
}

} // namespace

TEST_CASE("axiom checking on hand-built structures") {
    GrowthFunction f({1});
    TauStructure ok{f, 1, {{0, node("1")}}, {{1, subtree(1, {"", "1"})}}, {{1, 0}}};
    CHECK(check_axioms(ok).empty());

    TauStructure outside{f, 1, {{0, node("1")}}, {{1, subtree(1, {"", "0"})}}, {{1, 0}}};
    auto v = check_axioms(outside);
    CHECK(has_kind(v, ViolationKind::EdgeOutsideSubtree));

    // a Q element adjacent to both root cones: the splitting axiom fires
    TauStructure split{f,
                       1,
                       {{0, node("0")}, {1, node("1")}},
                       {{2, subtree(1, {"", "0"})}},
                       {{2, 0}, {2, 1}}};
    auto w = check_axioms(split);
    CHECK(has_kind(w, ViolationKind::FullSplittingCovered));
    // at this depth the same edges necessarily leave the subtree too
    CHECK(has_kind(w, ViolationKind::EdgeOutsideSubtree));

    TauStructure clash{f, 1, {{0, node("1")}}, {{0, subtree(1, {"", "1"})}}, {}};
    CHECK(has_kind(check_axioms(clash), ViolationKind::PartitionError));

    TauStructure badlabel{f, 1, {{0, node("1.0")}}, {}, {}};
    CHECK(has_kind(check_axioms(badlabel), ViolationKind::PartitionError));

    TauStructure notmax{f, 1, {}, {{0, subtree(1, {""})}}, {}};
    CHECK(has_kind(check_axioms(notmax), ViolationKind::PartitionError));

    TauStructure dangling{f, 1, {{0, node("1")}}, {}, {{5, 0}}};
    CHECK(has_kind(check_axioms(dangling), ViolationKind::PartitionError));
}

TEST_CASE("violations are re-checkable instances") {
    GrowthFunction f({1});
    TauStructure outside{f, 1, {{0, node("1")}}, {{1, subtree(1, {"", "0"})}}, {{1, 0}}};
    for (const auto& v : check_axioms(outside)) {
        if (v.kind != ViolationKind::EdgeOutsideSubtree) continue;
        CHECK(outside.edges.count({v.q_id, v.p_id}));
        CHECK_FALSE(outside.q_elems.at(v.q_id).contains(outside.p_elems.at(v.p_id)));
    }
}

TEST_CASE("random structures always satisfy the axioms") {
    GrowthFunction f({1, 2, 4});
    TauStructure empty = random_structure(f, 1, 0, 0, 0.5, 123);
    CHECK(empty.p_elems.empty());
    CHECK(check_axioms(empty).empty());

    TauStructure no_edges = random_structure(f, 2, 8, 8, 0.0, 9);
    CHECK(no_edges.edges.empty());

    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        int k = 1 + static_cast<int>(seed % 3);
        auto m = random_structure(f, k, 1 + seed % 12, 1 + (seed / 3) % 12, 0.5, seed);
        CHECK(check_axioms(m).empty());
    }
}

TEST_CASE("random structures are reproducible for a fixed seed") {
    GrowthFunction f({1, 2});
    auto a = random_structure(f, 2, 6, 6, 0.5, 77);
    auto b = random_structure(f, 2, 6, 6, 0.5, 77);
    CHECK(a.p_elems == b.p_elems);
    CHECK(a.q_elems == b.q_elems);
    CHECK(a.edges == b.edges);
    auto c = random_structure(f, 2, 6, 6, 0.5, 78);
    CHECK((a.p_elems != c.p_elems || a.q_elems != c.q_elems || a.edges != c.edges));
}

TEST_CASE("amalgamation") {
    GrowthFunction f({1, 2});
    auto m = random_structure(f, 2, 4, 3, 0.6, 5);

    SUBCASE("gluing a structure to itself along everything returns it") {
        std::vector<std::pair<int, int>> full;
        for (const auto& [id, _] : m.p_elems) full.emplace_back(id, id);
        for (const auto& [id, _] : m.q_elems) full.emplace_back(id, id);
        auto glued = amalgamate(m, m, full);
        CHECK(glued.p_elems == m.p_elems);
        CHECK(glued.q_elems == m.q_elems);
        CHECK(glued.edges == m.edges);
    }

    SUBCASE("disjoint union is legal") {
        auto n = random_structure(f, 2, 3, 4, 0.6, 6);
        auto joined = amalgamate(m, n, {});
        CHECK(joined.p_elems.size() == m.p_elems.size() + n.p_elems.size());
        CHECK(joined.q_elems.size() == m.q_elems.size() + n.q_elems.size());
        CHECK(joined.edges.size() == m.edges.size() + n.edges.size());
        CHECK(check_axioms(joined).empty());
    }

    SUBCASE("label disagreement is rejected") {
        GrowthFunction f1({1});
        TauStructure a{f1, 1, {{0, node("0")}}, {}, {}};
        TauStructure b{f1, 1, {{0, node("1")}}, {}, {}};
        CHECK_THROWS_WITH_AS(amalgamate(a, b, {{0, 0}}), doctest::Contains("SharedPartMismatch"),
                             error);
    }

    SUBCASE("induced edge disagreement is rejected") {
        GrowthFunction f1({1});
        TauStructure a{f1, 1, {{0, node("1")}}, {{1, subtree(1, {"", "1"})}}, {{1, 0}}};
        TauStructure b = a;
        b.edges.clear();
        CHECK_THROWS_WITH_AS(amalgamate(a, b, {{0, 0}, {1, 1}}),
                             doctest::Contains("SharedPartMismatch"), error);
    }

    SUBCASE("level mismatch is rejected") {
        auto n = random_structure(f, 1, 2, 2, 0.5, 7);
        CHECK_THROWS_AS(amalgamate(m, n, {}), error);
    }
}

TEST_CASE("amalgamation closure over randomized trials") {
    GrowthFunction f({1, 2, 4});
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        int k = 1 + static_cast<int>(seed % 2);
        auto m = random_structure(f, k, 3 + seed % 4, 3 + seed % 3, 0.5, seed);
        auto n = random_structure(f, k, 3 + (seed + 1) % 4, 3 + (seed + 1) % 3, 0.5, seed + 1000);
        // share the elements with equal labels, greedily paired off
        std::vector<std::pair<int, int>> shared;
        std::set<int> used;
        for (const auto& [mid, leaf] : m.p_elems)
            for (const auto& [nid, nleaf] : n.p_elems) {
                if (used.count(nid) || !(leaf == nleaf)) continue;
                // edges on shared parts must agree; P elements carry no
                // edges between themselves, but a later Q pairing could
                // clash, so share only P elements here
                shared.emplace_back(mid, nid);
                used.insert(nid);
                break;
            }
        auto joined = amalgamate(m, n, shared);
        CHECK(check_axioms(joined).empty());
    }
}

TEST_CASE("lifting one level") {
    GrowthFunction f({1, 2, 4});

    SUBCASE("edgeless structures lift coordinate-wise") {
        auto m = random_structure(f, 1, 5, 5, 0.0, 3);
        auto lifted = lift_structure(m);
        REQUIRE(lifted.has_value());
        CHECK(lifted->level == 2);
        CHECK(check_axioms(*lifted).empty());
    }

    SUBCASE("a single Q with few neighbors lifts by pigeonhole") {
        TauStructure m{f, 1, {{0, node("0")}}, {{1, subtree(1, {"", "0"})}}, {{1, 0}}};
        auto lifted = lift_structure(m);
        REQUIRE(lifted.has_value());
        CHECK(check_axioms(*lifted).empty());
        CHECK(lifted->edges == m.edges);
    }

    SUBCASE("random structures lift and preserve the lower-level facts") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            int k = 1 + static_cast<int>(seed % 2);
            auto m = random_structure(f, k, 1 + seed % 6, 1 + (seed / 2) % 5, 0.6, seed);
            auto lifted = lift_structure(m);
            REQUIRE(lifted.has_value());
            CHECK(lifted->level == k + 1);
            CHECK(check_axioms(*lifted).empty());
            CHECK(facts_at_level(*lifted, k) == facts_at_level(m, k));
        }
    }

    SUBCASE("lifting past the table is refused") {
        auto m = random_structure(f, 3, 2, 2, 0.5, 4);
        CHECK_THROWS_AS(lift_structure(m), error);
    }

    SUBCASE("an illegal structure is rejected up front") {
        GrowthFunction f1({1, 2});
        TauStructure bad{f1, 1, {{0, node("1")}}, {{1, subtree(1, {"", "0"})}}, {{1, 0}}};
        CHECK_THROWS_AS(lift_structure(bad), error);
    }
}
