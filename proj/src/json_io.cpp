#include "patlab/json_io.hpp"

#include <algorithm>

namespace patlab {

namespace {

[[noreturn]] void bad(const std::string& what) { fail("SchemaError", what); }

const json& expect(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

int expect_int(const json& j, const char* key) {
    const json& v = expect(j, key);
    if (!v.is_number_integer()) bad(std::string("field \"") + key + "\" must be an integer");
    return v.get<int>();
}

} // namespace

GrowthFunction growth_from_json(const json& j) {
    if (!j.is_array() || j.empty()) bad("growth function must be a nonempty array");
    std::vector<int> values;
    for (const auto& v : j) {
        if (!v.is_number_integer()) bad("growth function entries must be integers");
        values.push_back(v.get<int>());
    }
    return GrowthFunction(std::move(values));
}

json growth_to_json(const GrowthFunction& f) { return json(f.values); }

TreeNode node_from_json(const json& j) {
    if (!j.is_string()) bad("tree node must be a string like \"0.2\"");
    return TreeNode::parse(j.get<std::string>());
}

json node_to_json(const TreeNode& n) { return json(n.str()); }

MaxSubtree subtree_from_json(const json& j) {
    if (!j.is_array() || j.empty()) bad("subtree must be a nonempty array of node strings");
    MaxSubtree s;
    for (const auto& v : j) s.nodes.push_back(node_from_json(v));
    std::sort(s.nodes.begin(), s.nodes.end());
    s.nodes.erase(std::unique(s.nodes.begin(), s.nodes.end()), s.nodes.end());
    for (const auto& n : s.nodes) s.depth = std::max(s.depth, n.level());
    return s;
}

json subtree_to_json(const MaxSubtree& s) {
    json out = json::array();
    for (const auto& n : s.nodes) out.push_back(n.str());
    return out;
}

json blocking_to_json(const BlockingSet& b) {
    json leaves = json::array();
    for (const auto& n : b.leaf_set) leaves.push_back(n.str());
    return json{{"depth", b.depth}, {"leaves", std::move(leaves)}};
}

TauStructure structure_from_json(const json& j) {
    TauStructure m;
    m.f = growth_from_json(expect(j, "f"));
    m.level = expect_int(j, "k");
    const json& p = expect(j, "P");
    const json& q = expect(j, "Q");
    const json& r = expect(j, "R");
    if (!p.is_array() || !q.is_array() || !r.is_array()) bad("P, Q, R must be arrays");
    for (const auto& e : p) {
        int id = expect_int(e, "id");
        if (!m.p_elems.emplace(id, node_from_json(expect(e, "leaf"))).second)
            bad("duplicate P id " + std::to_string(id));
    }
    for (const auto& e : q) {
        int id = expect_int(e, "id");
        MaxSubtree s = subtree_from_json(expect(e, "s"));
        s.depth = m.level;
        if (!m.q_elems.emplace(id, std::move(s)).second)
            bad("duplicate Q id " + std::to_string(id));
    }
    for (const auto& e : r) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            bad("R entries must be [qId, pId] pairs");
        m.edges.emplace(e[0].get<int>(), e[1].get<int>());
    }
    return m;
}

json structure_to_json(const TauStructure& m) {
    json p = json::array(), q = json::array(), r = json::array();
    for (const auto& [id, leaf] : m.p_elems) p.push_back({{"id", id}, {"leaf", leaf.str()}});
    for (const auto& [id, s] : m.q_elems) q.push_back({{"id", id}, {"s", subtree_to_json(s)}});
    for (const auto& [qi, pi] : m.edges) r.push_back(json::array({qi, pi}));
    return json{{"f", growth_to_json(m.f)}, {"k", m.level}, {"P", std::move(p)},
                {"Q", std::move(q)}, {"R", std::move(r)}};
}

json violations_to_json(const std::vector<Violation>& v) {
    json out = json::array();
    for (const auto& viol : v)
        out.push_back({{"kind", to_string(viol.kind)},
                       {"q", viol.q_id},
                       {"p", viol.p_id},
                       {"detail", viol.detail}});
    return out;
}

FIFunc fifunc_from_json(const json& j) {
    if (!j.is_object()) bad("partial assignment must be an object like {\"0\":1}");
    FIFunc h;
    for (const auto& [key, value] : j.items()) {
        if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
            bad("partition keys must be decimal strings");
        if (!value.is_number_integer()) bad("assigned values must be integers");
        h.assignments[std::stoi(key)] = value.get<int>();
    }
    return h;
}

json fifunc_to_json(const FIFunc& h) {
    json out = json::object();
    for (const auto& [j, v] : h.assignments) out[std::to_string(j)] = v;
    return out;
}

Context context_from_json(const json& j) {
    const json& sizes = expect(j, "sizes");
    if (!sizes.is_array() || sizes.empty()) bad("context sizes must be a nonempty array");
    std::vector<int> s;
    for (const auto& v : sizes) {
        if (!v.is_number_integer()) bad("partition sizes must be integers");
        s.push_back(v.get<int>());
    }
    return make_context(std::move(s));
}

json context_to_json(const Context& ctx) { return json{{"sizes", ctx->sizes}}; }

BAElement element_from_json(const Context& ctx, const json& j) {
    if (!j.is_array()) bad("element must be an array of partial assignments");
    std::vector<FIFunc> cubes;
    for (const auto& v : j) cubes.push_back(fifunc_from_json(v));
    return from_fi_dnf(ctx, cubes);
}

json element_to_json(const BAElement& a) {
    json out = json::array();
    for (const auto& cube : to_fi_dnf(a)) out.push_back(fifunc_to_json(cube));
    return out;
}

std::string subset_key(IndexSet u) {
    std::string key;
    for (int i = 0; u >> i; ++i) {
        if (!((u >> i) & 1)) continue;
        if (!key.empty()) key += ',';
        key += std::to_string(i);
    }
    return key;
}

IndexSet subset_from_key(const std::string& key) {
    IndexSet u = 0;
    std::size_t pos = 0;
    while (pos < key.size()) {
        std::size_t comma = key.find(',', pos);
        std::string part =
            key.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            bad("bad subset key \"" + key + "\"");
        int i = std::stoi(part);
        if (i < 0 || i > 30) bad("subset member out of range in \"" + key + "\"");
        u |= 1u << i;
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return u;
}

json atom_to_json(const Context& ctx, std::uint64_t atom) {
    json out = json::object();
    for (int j = 0; j < ctx->partitions(); ++j) out[std::to_string(j)] = ctx->value_at(atom, j);
    return out;
}

json pattern_to_json(const PossibilityPattern& p) {
    json entries = json::object();
    for (const auto& [u, b] : p.entries) entries[subset_key(u)] = element_to_json(b);
    return json{{"ctx", context_to_json(p.ctx)},
                {"indices", p.index_count},
                {"cap", p.cap},
                {"entries", std::move(entries)},
                {"distinguished", atom_to_json(p.ctx, p.distinguished_atom)}};
}

PossibilityPattern pattern_from_json(const json& j) {
    PossibilityPattern p;
    p.ctx = context_from_json(expect(j, "ctx"));
    p.index_count = expect_int(j, "indices");
    p.cap = expect_int(j, "cap");
    const json& entries = expect(j, "entries");
    if (!entries.is_object()) bad("entries must map subset keys to elements");
    for (const auto& [key, value] : entries.items())
        p.entries.emplace(subset_from_key(key), element_from_json(p.ctx, value));
    FIFunc total = fifunc_from_json(expect(j, "distinguished"));
    if (static_cast<int>(total.assignments.size()) != p.ctx->partitions())
        bad("distinguished atom must assign every partition");
    std::uint64_t atom = 0;
    for (const auto& [part, v] : total.assignments) {
        if (part < 0 || part >= p.ctx->partitions() || v < 0 || v >= p.ctx->sizes[part])
            bad("distinguished atom out of range");
        atom += static_cast<std::uint64_t>(v) * p.ctx->strides[part];
    }
    p.distinguished_atom = atom;
    return p;
}

json refinement_to_json(const Refinement& r) {
    json per = json::object();
    for (const auto& [i, b] : r.per_index) per[std::to_string(i)] = element_to_json(b);
    return json{{"ctx", context_to_json(r.ctx)}, {"per_index", std::move(per)}};
}

Refinement refinement_from_json(const Context& ctx, const json& j) {
    Refinement r;
    r.ctx = ctx;
    const json& per = expect(j, "per_index");
    if (!per.is_object()) bad("per_index must map indices to elements");
    for (const auto& [key, value] : per.items()) {
        if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
            bad("refinement keys must be decimal indices");
        r.per_index.emplace(std::stoi(key), element_from_json(ctx, value));
    }
    return r;
}

Hypergraph hypergraph_from_json(const json& j) {
    Hypergraph h;
    h.n = expect_int(j, "n");
    h.k = expect_int(j, "k");
    h.vertex_count = expect_int(j, "vertices");
    const json& edges = expect(j, "edges");
    if (!edges.is_array()) bad("edges must be an array");
    for (const auto& e : edges) {
        if (!e.is_array()) bad("each edge must be an array of vertices");
        std::vector<int> edge;
        for (const auto& v : e) {
            if (!v.is_number_integer()) bad("edge vertices must be integers");
            edge.push_back(v.get<int>());
        }
        std::sort(edge.begin(), edge.end());
        h.edges.insert(std::move(edge));
    }
    validate_hypergraph(h);
    return h;
}

json hypergraph_to_json(const Hypergraph& h) {
    json edges = json::array();
    for (const auto& e : h.edges) edges.push_back(e);
    return json{{"n", h.n}, {"k", h.k}, {"vertices", h.vertex_count}, {"edges", std::move(edges)}};
}

} // namespace patlab
