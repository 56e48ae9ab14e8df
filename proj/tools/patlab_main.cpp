// Batch command surface over the workbench library: enumeration, axiom
// checking, pattern building, refinement search, report emission.  Every
// verb is a pure function of (params, seed); reports are byte-stable apart
// from the wall-clock field.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "patlab/consistency.hpp"
#include "patlab/json_io.hpp"
#include "patlab/report.hpp"

namespace {

using patlab::json;

json tree_enum(const json& params) {
    auto f = patlab::growth_from_json(params.at("f"));
    int k = params.at("k").get<int>();
    auto nodes = patlab::enumerate_level(f, k);
    json out;
    out["count"] = nodes.size();
    json succ = json::array();
    for (int l = 0; l < k; ++l) succ.push_back(patlab::successor_count(f, l));
    out["successor_counts"] = std::move(succ);
    if (nodes.size() <= 4096) {
        json list = json::array();
        for (const auto& n : nodes) list.push_back(n.str());
        out["nodes"] = std::move(list);
    }
    return out;
}

json s_enum(const json& params) {
    auto f = patlab::growth_from_json(params.at("f"));
    int k = params.at("k").get<int>();
    json out;
    out["count"] = patlab::kmax_subtree_count(f, k);
    auto subtrees = patlab::enumerate_maximal_subtrees(f, k);
    if (subtrees.size() <= 512) {
        json list = json::array();
        for (const auto& s : subtrees) list.push_back(patlab::subtree_to_json(s));
        out["subtrees"] = std::move(list);
    }
    return out;
}

json blocking_enum(const json& params) {
    auto f = patlab::growth_from_json(params.at("f"));
    int k = params.at("k").get<int>();
    auto sets = patlab::enumerate_blocking(f, k);
    json out;
    out["count"] = sets.size();
    if (sets.size() <= 4096) {
        json list = json::array();
        for (const auto& b : sets) list.push_back(patlab::blocking_to_json(b));
        out["sets"] = std::move(list);
    }
    return out;
}

json tf_check(const json& params) {
    auto m = patlab::structure_from_json(params.at("structure"));
    auto violations = patlab::check_axioms(m);
    return json{{"ok", violations.empty()}, {"violations", patlab::violations_to_json(violations)}};
}

json tf_gen(const json& params, std::uint64_t seed) {
    auto f = patlab::growth_from_json(params.at("f"));
    auto m = patlab::random_structure(f, params.at("k").get<int>(), params.at("nP").get<int>(),
                                      params.at("nQ").get<int>(),
                                      params.at("density").get<double>(), seed);
    auto violations = patlab::check_axioms(m);
    return json{{"structure", patlab::structure_to_json(m)},
                {"violations", patlab::violations_to_json(violations)}};
}

json tf_amalgamate(const json& params) {
    auto m = patlab::structure_from_json(params.at("M"));
    auto n = patlab::structure_from_json(params.at("N"));
    std::vector<std::pair<int, int>> shared;
    for (const auto& pair : params.at("shared")) {
        if (!pair.is_array() || pair.size() != 2)
            patlab::fail("SchemaError", "shared entries must be [mId, nId] pairs");
        shared.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
    auto joined = patlab::amalgamate(m, n, shared);
    return json{{"structure", patlab::structure_to_json(joined)},
                {"ok", patlab::check_axioms(joined).empty()}};
}

json tf_lift(const json& params) {
    auto m = patlab::structure_from_json(params.at("structure"));
    auto lifted = patlab::lift_structure(m);
    json out;
    out["found"] = lifted.has_value();
    out["structure"] = lifted ? patlab::structure_to_json(*lifted) : json(nullptr);
    return out;
}

json type_check(const json& params) {
    auto f = patlab::growth_from_json(params.at("f"));
    int k = params.at("k").get<int>();
    const std::string shape = params.at("shape").get<std::string>();
    if (shape == "Q") {
        patlab::QTypeInstance t{f, k, {}};
        for (const auto& leaf : params.at("leaves")) t.param_leaves.push_back(patlab::node_from_json(leaf));
        bool ok = patlab::consistent_q_type(t);
        json out{{"consistent", ok}};
        if (!ok)
            out["splitting_node"] = patlab::has_full_splitting(f, k, t.param_leaves)->str();
        return out;
    }
    if (shape == "P") {
        patlab::PTypeInstance t{f, k, {}};
        for (const auto& s : params.at("subtrees")) {
            auto sub = patlab::subtree_from_json(s);
            sub.depth = k;
            t.param_subtrees.push_back(std::move(sub));
        }
        auto witness = patlab::consistent_p_type(t);
        return json{{"consistent", witness.has_value()},
                    {"witness", witness ? json(witness->str()) : json(nullptr)}};
    }
    patlab::fail("SchemaError", "shape must be \"Q\" or \"P\"");
}

json ba_eval(const json& params) {
    auto ctx = patlab::context_from_json(params);
    const std::string op = params.at("op").get<std::string>();
    auto arg = [&](const char* key) { return patlab::element_from_json(ctx, params.at(key)); };
    if (op == "meet") return json{{"result", patlab::element_to_json(meet(arg("a"), arg("b")))}};
    if (op == "join") return json{{"result", patlab::element_to_json(join(arg("a"), arg("b")))}};
    if (op == "complement")
        return json{{"result", patlab::element_to_json(complement(arg("a")))}};
    if (op == "leq") return json{{"result", patlab::leq(arg("a"), arg("b"))}};
    if (op == "is_zero") return json{{"result", patlab::is_zero(arg("a"))}};
    if (op == "generator")
        return json{{"result", patlab::element_to_json(
                                   generator(ctx, patlab::fifunc_from_json(params.at("h"))))}};
    if (op == "dnf") return json{{"result", patlab::element_to_json(arg("a"))}};
    if (op == "compatible-subfamily") {
        std::vector<patlab::FIFunc> family;
        for (const auto& h : params.at("family")) family.push_back(patlab::fifunc_from_json(h));
        auto found = patlab::compatible_subfamily(family, params.at("m").get<int>());
        json out{{"found", found.has_value()}};
        if (found) {
            json list = json::array();
            for (const auto& h : *found) list.push_back(patlab::fifunc_to_json(h));
            out["subfamily"] = std::move(list);
        }
        return out;
    }
    patlab::fail("SchemaError", "unknown algebra op \"" + op + "\"");
}

int param_cap(const json& params) {
    return params.contains("cap") ? params.at("cap").get<int>() : -1;
}

json pattern_build(const json& params) {
    auto f = patlab::growth_from_json(params.at("f"));
    int depth = params.at("depth").get<int>();
    int n = params.at("n").get<int>();
    const std::string kind = params.at("kind").get<std::string>();
    if (kind == "tf") {
        auto tf = patlab::build_tf_pattern(f, depth, n, param_cap(params));
        return json{{"pattern", patlab::pattern_to_json(tf.pattern)},
                    {"is_pattern", patlab::is_possibility_pattern(tf.pattern)},
                    {"scheme", json{{"kind", "tf"}, {"partitions_per_index", depth}}}};
    }
    if (kind == "tf-dual") {
        auto dp = patlab::build_tf_dual_pattern(f, depth, n, param_cap(params));
        json table = json::array();
        for (const auto& s : dp.subtree_table) table.push_back(patlab::subtree_to_json(s));
        return json{{"pattern", patlab::pattern_to_json(dp.pattern)},
                    {"is_pattern", patlab::is_possibility_pattern(dp.pattern)},
                    {"scheme", json{{"kind", "tf-dual"}, {"subtree_table", std::move(table)}}}};
    }
    patlab::fail("SchemaError", "kind must be \"tf\" or \"tf-dual\"");
}

json pattern_verify(const json& params) {
    auto p = patlab::pattern_from_json(params.at("pattern"));
    json out{{"is_pattern", patlab::is_possibility_pattern(p)}};
    if (params.contains("refinement")) {
        auto r = patlab::refinement_from_json(p.ctx, params.at("refinement"));
        auto witness = patlab::refines_witness(r, p);
        out["refines"] = !witness.has_value();
        out["witness"] = witness ? json(patlab::subset_key(*witness)) : json(nullptr);
    }
    return out;
}

json refine_build(const json& params) {
    auto f = patlab::growth_from_json(params.at("f"));
    int depth = params.at("depth").get<int>();
    int n = params.at("n").get<int>();
    const std::string which = params.at("case").get<std::string>();
    const patlab::PossibilityPattern* pattern = nullptr;
    patlab::Refinement refinement;
    json extra;
    patlab::TfRefinement built_q;
    patlab::DualRefinement built_p;
    if (which == "blocking") {
        auto tf = patlab::build_tf_pattern(f, depth, n, param_cap(params));
        built_q = patlab::build_tf_refinement(tf, patlab::enumerate_blocking(f, depth));
        pattern = &built_q.extended.pattern;
        refinement = built_q.refinement;
        extra = json{{"blocking_sets", built_q.blocking.size()},
                     {"fresh_partition", built_q.fresh_partition}};
    } else if (which == "dual") {
        auto dp = patlab::build_tf_dual_pattern(f, depth, n, param_cap(params));
        built_p = patlab::build_tf_dual_refinement(dp, patlab::enumerate_level(f, depth));
        pattern = &built_p.extended.pattern;
        refinement = built_p.refinement;
        extra = json{{"leaf_enum", built_p.leaf_enum.size()},
                     {"fresh_partition", built_p.fresh_partition}};
    } else {
        patlab::fail("SchemaError", "case must be \"blocking\" or \"dual\"");
    }
    bool nonzero = true;
    for (const auto& [u, _] : pattern->entries)
        if (patlab::is_zero(refinement.induced(u))) nonzero = false;
    return json{{"pattern", patlab::pattern_to_json(*pattern)},
                {"refinement", patlab::refinement_to_json(refinement)},
                {"refines", patlab::refines(refinement, *pattern)},
                {"nonzero", nonzero},
                {"scheme", std::move(extra)}};
}

json refine_search(const json& params) {
    auto f = patlab::growth_from_json(params.at("f"));
    int depth = params.at("depth").get<int>();
    int n = params.at("n").get<int>();
    auto tf = patlab::build_tf_pattern(f, depth, n, param_cap(params));
    std::map<int, std::vector<patlab::FIFunc>> pools;
    if (params.contains("pools")) {
        for (const auto& [key, list] : params.at("pools").items()) {
            std::vector<patlab::FIFunc> pool;
            for (const auto& h : list) pool.push_back(patlab::fifunc_from_json(h));
            pools[std::stoi(key)] = std::move(pool);
        }
    } else {
        for (int i = 0; i < n; ++i) pools[i] = patlab::default_candidate_pool(tf, i);
    }
    bool require_distinguished = !params.contains("require_distinguished") ||
                                 params.at("require_distinguished").get<bool>();
    auto found = patlab::search_multiplicative_refinement(tf.pattern, pools, require_distinguished);
    json out{{"found", found.has_value()}};
    out["refinement"] = found ? patlab::refinement_to_json(*found) : json(nullptr);

    std::uint64_t combos = 1;
    for (const auto& [_, pool] : pools) combos *= pool.size();
    if (!found && combos <= 64) {
        // small enough to show the obstruction for every choice
        json certs = json::array();
        std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
        for (;;) {
            std::map<int, patlab::FIFunc> candidates;
            for (int i = 0; i < n; ++i) candidates[i] = pools[i][pick[static_cast<std::size_t>(i)]];
            json cert;
            auto collision = patlab::collision_certificate(tf, candidates);
            if (collision)
                cert = json{{"set", patlab::subset_key(collision->first)},
                            {"atom", patlab::atom_to_json(tf.pattern.ctx, collision->second)}};
            else
                cert = json(nullptr);
            certs.push_back(std::move(cert));
            int i = n - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] + 1 == pools[i].size())
                pick[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
            ++pick[static_cast<std::size_t>(i)];
        }
        out["certificates"] = std::move(certs);
    }
    return out;
}

patlab::NearForbiddenFamily family_from_params(const patlab::Hypergraph& h, const json& params) {
    if (!params.contains("family")) return patlab::full_near_forbidden_family(h);
    patlab::NearForbiddenFamily family;
    for (const auto& w : params.at("family")) {
        std::vector<int> member;
        for (const auto& v : w) member.push_back(v.get<int>());
        std::sort(member.begin(), member.end());
        family.members.push_back(std::move(member));
    }
    return family;
}

json tnk_check(const json& params) {
    auto h = patlab::hypergraph_from_json(params.at("graph"));
    json out{{"legal", patlab::is_legal(h)}};
    if (out["legal"].get<bool>()) {
        json nf = json::array();
        for (const auto& w : patlab::near_forbidden(h)) nf.push_back(w);
        out["near_forbidden"] = std::move(nf);
    } else {
        out["near_forbidden"] = json(nullptr);
    }
    return out;
}

json tnk_pattern(const json& params) {
    auto h = patlab::hypergraph_from_json(params.at("graph"));
    auto tp = patlab::build_tnk_pattern(h, family_from_params(h, params), param_cap(params));
    json masks = json::array();
    for (auto mask : tp.member_formula_mask) masks.push_back(patlab::subset_key(mask));
    return json{{"pattern", patlab::pattern_to_json(tp.pattern)},
                {"member_formula_sets", std::move(masks)},
                {"semantics_ok", patlab::verify_pattern_semantics(tp)}};
}

json tnk_trace(const json& params) {
    auto h = patlab::hypergraph_from_json(params.at("graph"));
    auto tp = patlab::build_tnk_pattern(h, family_from_params(h, params), param_cap(params));
    bool require_distinguished = !params.contains("require_distinguished") ||
                                 params.at("require_distinguished").get<bool>();
    auto refinements = patlab::enumerate_tnk_refinements(tp, require_distinguished);
    bool all_traced = true;
    for (const auto& r : refinements)
        if (!patlab::support_trace_check(tp, r)) all_traced = false;
    return json{{"refinements", refinements.size()}, {"all_traced", all_traced}};
}

json escape_probe(const json& params) {
    auto h = patlab::hypergraph_from_json(params.at("graph"));
    auto tp = patlab::build_tnk_pattern(h, family_from_params(h, params), param_cap(params));
    std::map<std::vector<int>, std::set<int>> control;
    bool have_control = false;
    if (params.contains("control")) {
        for (const auto& [key, verts] : params.at("control").items()) {
            std::vector<int> v;
            for (std::size_t pos = 0; pos < key.size();) {
                std::size_t comma = key.find(',', pos);
                v.push_back(std::stoi(key.substr(pos, comma - pos)));
                pos = comma == std::string::npos ? key.size() : comma + 1;
            }
            std::sort(v.begin(), v.end());
            std::set<int> c;
            for (const auto& x : verts) c.insert(x.get<int>());
            control[v] = std::move(c);
        }
        have_control = true;
    } else {
        auto refinements = patlab::enumerate_tnk_refinements(tp, true);
        if (!refinements.empty()) {
            control = patlab::control_map_from_refinement(tp, refinements.front());
            have_control = true;
        }
    }
    json out{{"have_control", have_control}};
    if (have_control) {
        auto escaped = patlab::free_set_escape(tp.family, h.vertex_count, h.k, control);
        out["escaped"] = escaped ? json(*escaped) : json(nullptr);
    }
    return out;
}

json dispatch(const std::string& verb, const json& params, std::uint64_t seed) {
    if (verb == "tree-enum") return tree_enum(params);
    if (verb == "s-enum") return s_enum(params);
    if (verb == "blocking") return blocking_enum(params);
    if (verb == "tf-check") return tf_check(params);
    if (verb == "tf-gen") return tf_gen(params, seed);
    if (verb == "tf-amalgamate") return tf_amalgamate(params);
    if (verb == "tf-lift") return tf_lift(params);
    if (verb == "type-check") return type_check(params);
    if (verb == "ba-eval") return ba_eval(params);
    if (verb == "pattern-build") return pattern_build(params);
    if (verb == "pattern-verify") return pattern_verify(params);
    if (verb == "refine-build") return refine_build(params);
    if (verb == "refine-search") return refine_search(params);
    if (verb == "tnk-check") return tnk_check(params);
    if (verb == "tnk-pattern") return tnk_pattern(params);
    if (verb == "tnk-trace") return tnk_trace(params);
    if (verb == "escape-probe") return escape_probe(params);
    patlab::fail("SchemaError", "unknown verb " + verb);
}

const std::vector<std::pair<std::string, std::string>> kVerbs = {
    {"tree-enum", "enumerate a tree level"},
    {"s-enum", "enumerate the maximal subtrees of a depth"},
    {"blocking", "enumerate the blocking sets of a depth"},
    {"tf-check", "check a structure against the axioms"},
    {"tf-gen", "generate a random legal structure"},
    {"tf-amalgamate", "glue two structures over a shared part"},
    {"tf-lift", "lift a structure one level"},
    {"type-check", "decide consistency of a positive type"},
    {"ba-eval", "evaluate algebra operations on normal forms"},
    {"pattern-build", "build a tree-derived possibility pattern"},
    {"pattern-verify", "check pattern laws and refinement domination"},
    {"refine-build", "run a refinement construction and audit it"},
    {"refine-search", "search candidate pools for a refinement"},
    {"tnk-check", "check hypergraph legality and near-forbidden sets"},
    {"tnk-pattern", "build a hypergraph pattern and audit its semantics"},
    {"tnk-trace", "enumerate refinements and trace their supports"},
    {"escape-probe", "probe the control map for escaping members"}};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for tree patterns, finite structures and refinements"};
    app.require_subcommand(1);

    std::string input_path, out_path, format = "json";
    std::uint64_t seed = 0;
    int jobs = 1;
    std::vector<CLI::App*> subs;
    for (const auto& [verb, what] : kVerbs) {
        auto* sub = app.add_subcommand(verb, what);
        sub->add_option("--input", input_path, "parameter JSON file (default: stdin)");
        sub->add_option("--seed", seed, "64-bit seed");
        sub->add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", out_path, "write the report here instead of stdout");
        sub->add_option("--jobs", jobs, "search parallelism hint (results never depend on it)")
            ->check(CLI::PositiveNumber);
        subs.push_back(sub);
    }
    CLI11_PARSE(app, argc, argv);

    CLI::App* chosen = nullptr;
    for (auto* sub : subs)
        if (sub->parsed()) chosen = sub;
    if (!chosen) return 2;
    const std::string verb = chosen->get_name();
    const bool seed_given = chosen->count("--seed") > 0;

    try {
        std::string raw;
        if (!input_path.empty()) {
            std::ifstream in(input_path);
            if (!in) patlab::fail("SchemaError", "cannot open " + input_path);
            std::stringstream ss;
            ss << in.rdbuf();
            raw = ss.str();
        } else {
            std::stringstream ss;
            ss << std::cin.rdbuf();
            raw = ss.str();
        }
        json params;
        try {
            params = raw.empty() ? json::object() : json::parse(raw);
        } catch (const json::parse_error& e) {
            patlab::fail("SchemaError", std::string("parameter JSON: ") + e.what());
        }

        json canonical{{"verb", verb}, {"params", params}};
        canonical["seed"] = seed_given ? json(seed) : json(nullptr);

        patlab::RunReport report;
        report.verb = verb;
        report.input_digest = patlab::digest_hex(canonical.dump());
        if (seed_given || verb == "tf-gen") report.seed = seed;

        const auto start = std::chrono::steady_clock::now();
        report.results = dispatch(verb, params, seed);
        report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();

        const std::string text = patlab::emit_report(report, format);
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            out << text;
        } else {
            std::cout << text;
        }
        return 0;
    } catch (const patlab::size_guard_error& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const patlab::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: SchemaError: " << e.what() << "\n";
        return 2;
    }
}
