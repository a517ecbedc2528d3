// polyhom command-line front end.
// Exit codes: 0 success, 1 verification failure (report on the output), 2 usage, IO or parse error.

#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "polyhom/binding.hpp"
#include "polyhom/chain.hpp"
#include "polyhom/hurewicz.hpp"
#include "polyhom/json_io.hpp"
#include "polyhom/selftest.hpp"
#include "polyhom/tower.hpp"

using nlohmann::json;
using namespace polyhom;

namespace {

struct RunConfig {
    std::size_t arity = 2;
    std::string group = "2";
    std::size_t vertices = 0;
    std::uint64_t seed = 1;
    std::string in, out;
    std::string format = "json";
    bool quick = false;
    bool inject_fault = false;
    bool do_scramble = false;
    std::string plant;
    std::string tower;
    std::string base;
    std::vector<int> only;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Result {
    int code = 0;
    json report;
    std::string text;
};

json load_input(const RunConfig& rc) {
    if (rc.in.empty()) {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return parse_json_text(ss.str());
    }
    return parse_json_text(read_text_file(rc.in));
}

Result from_report(const AxiomReport& r, json extra = json::object()) {
    Result res;
    res.code = r.passed() ? 0 : 1;
    res.report = r.to_json();
    res.report.update(extra);
    res.text = r.to_text();
    return res;
}

std::vector<Vertex> vertex_range(std::size_t count) {
    std::vector<Vertex> I(count);
    for (std::size_t v = 0; v < count; ++v) I[v] = static_cast<Vertex>(v);
    return I;
}

Result cmd_gen(const RunConfig& rc) {
    const std::size_t vertices = rc.vertices ? rc.vertices : rc.arity + 2;
    if (rc.arity < 1) throw UsageError("--arity must be at least 1");
    if (vertices < rc.arity + 1) throw UsageError("--vertices must be at least arity + 1");
    Result res;
    if (!rc.tower.empty()) {
        std::vector<std::int64_t> orders;
        std::stringstream ss(rc.tower);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
                throw UsageError("bad --tower \"" + rc.tower + "\"");
            orders.push_back(std::stoll(part));
        }
        const PolyTower T = standard_tower(orders, vertex_range(vertices), rc.arity);
        res.report = tower_to_json(T);
        res.text = "tower of " + std::to_string(T.poset.nodes.size()) + " nodes";
        return res;
    }
    const FinAbelianGroup G = parse_group_spec(rc.group);
    Polygroupoid H = standard(G, vertices, rc.arity);
    if (rc.plant == "horn-duplicate") H = plant_horn_duplicate(H);
    else if (rc.plant == "non-associative") H = plant_non_associative(G, vertices, rc.arity);
    else if (!rc.plant.empty()) throw UsageError("unknown --plant \"" + rc.plant + "\"");
    if (rc.do_scramble) H = scramble(H, rc.seed);
    res.report = polygroupoid_to_json(H);
    res.text = "arity " + std::to_string(rc.arity) + " polygroupoid over " + G.to_string() + " on " +
               std::to_string(vertices) + " vertices";
    return res;
}

Result cmd_scramble(const RunConfig& rc) {
    const Polygroupoid H = scramble(polygroupoid_from_json(load_input(rc)), rc.seed);
    return {0, polygroupoid_to_json(H), "scrambled with seed " + std::to_string(rc.seed)};
}

Result cmd_check(const RunConfig& rc) { return from_report(check_axioms(polygroupoid_from_json(load_input(rc)))); }

Result cmd_associativity(const RunConfig& rc) {
    return from_report(check_associativity(polygroupoid_from_json(load_input(rc))));
}

Result cmd_extract(const RunConfig& rc) {
    const Polygroupoid H = polygroupoid_from_json(load_input(rc));
    try {
        const Extraction ex = rc.base.empty() ? extract(H) : extract(H, parse_config_key(rc.base));
        const AxiomReport r = verify_action(H, ex.action);
        Result res = from_report(r, {{"group", group_to_json(ex.group)}, {"action", action_to_json(H, ex.action)}});
        res.text = "binding group " + ex.group.to_string() + "\n" + res.text;
        return res;
    } catch (const ExtractionError& e) {
        return {1, {{"passed", false}, {"error", e.what()}, {"witness", e.witness()}},
                std::string("extraction failed: ") + e.what()};
    }
}

Result cmd_verdict(const RunConfig& rc) {
    const Polygroupoid H = polygroupoid_from_json(load_input(rc));
    VerdictOptions vo;
    vo.seed = rc.seed;
    const Verdict v = verdict(H, vo);
    Result res;
    res.code = v.passed() ? 0 : 1;
    res.report = v.to_json();
    std::string summary;
    if (v.pocket_group && v.group)
        summary = "pocket_group " + std::string(v.isomorphic ? "≅ " : "≇ ") + v.group->to_string();
    res.report["summary"] = summary;
    res.text = v.stages.to_text() + (summary.empty() ? "" : summary + "\n");
    if (v.pocket_group) res.text += "pocket group " + v.pocket_group->to_string() + "\n";
    return res;
}

Result cmd_homology(const RunConfig& rc) {
    const json j = load_input(rc);
    FinAbelianGroup H;
    try {
        if (j.contains("supports")) {
            std::vector<std::vector<Vertex>> supports = j.at("supports").get<std::vector<std::vector<Vertex>>>();
            H = family_homology(SimplexFamily::from_supports(supports), j.at("dim").get<std::size_t>());
        } else {
            H = homology(matrix_from_json(j.at("d_n")), matrix_from_json(j.at("d_np1")));
        }
    } catch (const HomologyError& e) {
        return {1, {{"passed", false}, {"error", e.what()}, {"column", e.column()}}, e.what()};
    } catch (const json::exception& e) {
        throw FormatError(e.what());
    }
    return {0, {{"passed", true}, {"homology", group_to_json(H)}}, "H = " + H.to_string()};
}

bool is_group_tower(const json& j) { return j.is_object() && j.contains("groups"); }

Result cmd_tower_check(const RunConfig& rc) {
    const json j = load_input(rc);
    if (is_group_tower(j)) return from_report(check_tower(group_tower_from_json(j)));
    return from_report(check_tower(tower_from_json(j)));
}

Result cmd_tower_limit(const RunConfig& rc) {
    const json j = load_input(rc);
    GroupTower GT;
    if (is_group_tower(j)) {
        GT = group_tower_from_json(j);
    } else {
        const PolyTower T = tower_from_json(j);
        const AxiomReport r = check_tower(T);
        if (!r.passed()) return from_report(r);
        try {
            GT = group_tower(T, extract_actions(T));
        } catch (const ExtractionError& e) {
            return {1, {{"passed", false}, {"error", e.what()}, {"witness", e.witness()}}, e.what()};
        } catch (const InducedHomError& e) {
            return {1, {{"passed", false}, {"error", e.what()}, {"witness", e.witness()}}, e.what()};
        }
    }
    const AxiomReport r = check_tower(GT);
    if (!r.passed()) return from_report(r);
    const InverseLimit L = inverse_limit(GT);
    json proj = json::object();
    for (const auto& [u, p] : L.projections) proj[u] = hom_to_json(p);
    std::string text = "inverse limit " + L.group.to_string();
    return {0, {{"passed", true}, {"limit", group_to_json(L.group)}, {"projections", proj}, {"group_tower", group_tower_to_json(GT)}}, text};
}

Result cmd_selftest(const RunConfig& rc) {
    SelftestOptions opt;
    opt.quick = rc.quick;
    opt.inject_fault = rc.inject_fault;
    opt.seed = rc.seed;
    opt.only = rc.only;
    const auto results = run_selftest(opt);
    Result res;
    res.code = all_passed(results) ? 0 : 1;
    json list = json::array();
    for (const auto& r : results) {
        json c = r.to_json();
        c.erase("seconds");
        list.push_back(c);
        res.text += r.line(false) + "\n";
        if (!r.passed && !r.witness.is_null()) res.text += "  witness: " + r.witness.dump() + "\n";
    }
    json failed = json::array();
    for (const auto& r : results)
        if (!r.passed) failed.push_back(r.id);
    res.report = {{"passed", res.code == 0}, {"criteria", list}, {"failed", failed}};
    return res;
}

void emit(const RunConfig& rc, const Result& res) {
    std::string body;
    if (rc.format == "text") {
        body = res.text;
        if (body.empty() || body.back() != '\n') body += '\n';
    } else {
        body = res.report.dump(2) + "\n";
    }
    if (rc.out.empty()) std::cout << body;
    else write_text_file(rc.out, body);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite polygroupoids, binding groups and their homology"};
    app.require_subcommand(1);
    RunConfig rc;

    auto io = [&rc](CLI::App* sub, bool input) {
        if (input) sub->add_option("--in", rc.in, "input JSON file (standard input when absent)");
        sub->add_option("--out", rc.out, "output file (standard output when absent)");
        sub->add_option("--format", rc.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    };

    auto* gen = app.add_subcommand("gen", "standard polygroupoid or tower");
    gen->add_option("--arity", rc.arity, "n");
    gen->add_option("--group", rc.group, "comma-separated orders, e.g. 2,4");
    gen->add_option("--vertices", rc.vertices, "vertex count (default arity + 2)");
    gen->add_option("--seed", rc.seed, "seed used by --scramble");
    gen->add_flag("--scramble", rc.do_scramble, "relabel elements and vertices");
    gen->add_option("--plant", rc.plant, "horn-duplicate or non-associative");
    gen->add_option("--tower", rc.tower, "cyclic orders of a reduction tower, e.g. 8,4,2");
    io(gen, false);

    auto* scr = app.add_subcommand("scramble", "relabel an instance");
    scr->add_option("--seed", rc.seed);
    io(scr, true);

    auto* check = app.add_subcommand("check", "polygroupoid axioms");
    io(check, true);
    auto* assoc = app.add_subcommand("associativity", "associativity grids");
    io(assoc, true);
    auto* ext = app.add_subcommand("extract", "binding group and its action");
    ext->add_option("--base", rc.base, "n-configuration, e.g. 0,1");
    io(ext, true);
    auto* ver = app.add_subcommand("verdict", "epsilon homomorphism stages and pocket group");
    ver->add_option("--seed", rc.seed, "sampling seed");
    io(ver, true);
    auto* hom = app.add_subcommand("homology", "homology of {d_n, d_np1} or {supports, dim}");
    io(hom, true);
    auto* tc = app.add_subcommand("tower-check", "tower axioms");
    io(tc, true);
    auto* tl = app.add_subcommand("tower-limit", "inverse limit of a tower");
    io(tl, true);

    auto* st = app.add_subcommand("selftest", "acceptance sweep");
    st->add_flag("--quick", rc.quick, "reduced grid");
    st->add_option("--seed", rc.seed);
    st->add_option("--only", rc.only, "criterion ids");
#ifdef POLYHOM_TEST_HOOKS
    st->add_flag("--inject-fault", rc.inject_fault, "plant a fault so the sweep fails");
#endif
    io(st, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Result res;
        if (*gen) res = cmd_gen(rc);
        else if (*scr) res = cmd_scramble(rc);
        else if (*check) res = cmd_check(rc);
        else if (*assoc) res = cmd_associativity(rc);
        else if (*ext) res = cmd_extract(rc);
        else if (*ver) res = cmd_verdict(rc);
        else if (*hom) res = cmd_homology(rc);
        else if (*tc) res = cmd_tower_check(rc);
        else if (*tl) res = cmd_tower_limit(rc);
        else res = cmd_selftest(rc);
        emit(rc, res);
        return res.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 2;
}
