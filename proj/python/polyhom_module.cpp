// Python bindings. Structured values cross the boundary as JSON text; the
// package __init__ turns them into dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polyhom/binding.hpp"
#include "polyhom/hurewicz.hpp"
#include "polyhom/json_io.hpp"
#include "polyhom/selftest.hpp"
#include "polyhom/tower.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace polyhom;

namespace {

json in(const std::string& text) { return parse_json_text(text); }
std::string out(const json& j) { return j.dump(); }

json report(const AxiomReport& r) { return r.to_json(); }

FinAbelianGroup group_of(const std::vector<std::int64_t>& orders) { return FinAbelianGroup::from_orders(orders); }

std::vector<Vertex> vertex_range(std::size_t count) {
    std::vector<Vertex> I(count);
    for (std::size_t v = 0; v < count; ++v) I[v] = static_cast<Vertex>(v);
    return I;
}

}  // namespace

PYBIND11_MODULE(_polyhom, m) {
    m.doc() = "finite polygroupoids, binding groups and their homology";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> extraction_error;
    extraction_error.call_once_and_store_result(
        [&]() { return py::exception<ExtractionError>(m, "ExtractionError", PyExc_ValueError); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ExtractionError& e) {
            py::set_error(extraction_error.get_stored(), py::make_tuple(e.what(), e.witness().dump()));
        } catch (const InducedHomError& e) {
            py::set_error(PyExc_ValueError, py::make_tuple(e.what(), e.witness().dump()));
        }
    });
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

    m.def("standard", [](const std::vector<std::int64_t>& orders, std::size_t vertices, std::size_t arity) {
        return out(polygroupoid_to_json(standard(group_of(orders), vertices, arity)));
    });
    m.def("scramble", [](const std::string& h, std::uint64_t seed) {
        return out(polygroupoid_to_json(scramble(polygroupoid_from_json(in(h)), seed)));
    });
    m.def("plant", [](const std::string& h, const std::string& kind, const std::vector<std::int64_t>& orders) {
        const Polygroupoid H = polygroupoid_from_json(in(h));
        if (kind == "horn-duplicate") return out(polygroupoid_to_json(plant_horn_duplicate(H)));
        if (kind == "non-associative")
            return out(polygroupoid_to_json(plant_non_associative(group_of(orders), H.vertices().size(), H.arity())));
        throw std::invalid_argument("unknown fault \"" + kind + "\"");
    });
    m.def("check_axioms", [](const std::string& h) { return out(report(check_axioms(polygroupoid_from_json(in(h))))); });
    m.def("check_associativity",
          [](const std::string& h) { return out(report(check_associativity(polygroupoid_from_json(in(h))))); });
    m.def("count_horn_fillers", [](const std::string& h) {
        const HornCount c = count_horn_fillers(polygroupoid_from_json(in(h)));
        return std::make_pair(c.horns, c.exactly_one);
    });
    m.def("extract", [](const std::string& h, const std::string& base) {
        const Polygroupoid H = polygroupoid_from_json(in(h));
        const Extraction ex = base.empty() ? extract(H) : extract(H, parse_config_key(base));
        return out(action_to_json(H, ex.action));
    });
    m.def("verify_action", [](const std::string& h, const std::string& action) {
        const Polygroupoid H = polygroupoid_from_json(in(h));
        return out(report(verify_action(H, action_from_json(H, in(action)))));
    });
    m.def("verdict", [](const std::string& h, std::uint64_t seed) {
        VerdictOptions vo;
        vo.seed = seed;
        return out(verdict(polygroupoid_from_json(in(h)), vo).to_json());
    });
    m.def("homology", [](const std::string& d_n, const std::string& d_np1) {
        return out(group_to_json(homology(matrix_from_json(in(d_n)), matrix_from_json(in(d_np1)))));
    });
    m.def("smith_normal_form", [](const std::string& a) {
        const SmithForm S = snf(matrix_from_json(in(a)));
        return out({{"U", matrix_to_json(S.U)}, {"D", matrix_to_json(S.D)}, {"V", matrix_to_json(S.V)}, {"rank", S.rank}});
    });
    m.def("iso_check", [](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
        return iso_check(group_of(a), group_of(b));
    });
    m.def("group", [](const std::vector<std::int64_t>& orders) { return out(group_to_json(group_of(orders))); });
    m.def("standard_tower", [](const std::vector<std::int64_t>& orders, std::size_t vertices, std::size_t arity) {
        return out(tower_to_json(standard_tower(orders, vertex_range(vertices), arity)));
    });
    m.def("check_tower", [](const std::string& t) {
        const json j = in(t);
        if (j.contains("groups")) return out(report(check_tower(group_tower_from_json(j))));
        return out(report(check_tower(tower_from_json(j))));
    });
    m.def("inverse_limit", [](const std::string& t) {
        const json j = in(t);
        const GroupTower GT = j.contains("groups") ? group_tower_from_json(j) : [&] {
            const PolyTower T = tower_from_json(j);
            return group_tower(T, extract_actions(T));
        }();
        return out(group_to_json(inverse_limit(GT).group));
    });
    m.def("selftest", [](bool quick, std::vector<int> only) {
        SelftestOptions opt;
        opt.quick = quick;
        opt.only = std::move(only);
        json list = json::array();
        for (const auto& r : run_selftest(opt)) list.push_back(r.to_json());
        return out(list);
    });
}
