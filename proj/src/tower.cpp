#include "polyhom/tower.hpp"

#include <algorithm>
#include <set>

#include "polyhom/json_io.hpp"

namespace polyhom {

using nlohmann::json;

namespace {

json edge_json(const Edge& e) { return json::array({e.first, e.second}); }

Edge edge_from(const json& j) { return {j.at(0).get<std::string>(), j.at(1).get<std::string>()}; }

std::string edge_key(const Edge& e) { return e.first + "," + e.second; }

Edge parse_edge_key(const std::string& key) {
    const auto comma = key.find(',');
    if (comma == std::string::npos || key.find(',', comma + 1) != std::string::npos)
        throw FormatError("edge key \"" + key + "\" must be \"u,v\"");
    return {key.substr(0, comma), key.substr(comma + 1)};
}

std::set<Edge> edge_set(const DirectedPoset& J) { return {J.leq.begin(), J.leq.end()}; }

// (u, v, w) with u <= v <= w
template <class F>
void for_each_triple(const DirectedPoset& J, F&& f) {
    const auto E = edge_set(J);
    for (const auto& [u, v] : J.leq)
        for (const auto& w : J.nodes)
            if (E.count({v, w})) f(u, v, w);
}

}  // namespace

bool DirectedPoset::less_equal(const Node& u, const Node& v) const {
    return std::find(leq.begin(), leq.end(), Edge{u, v}) != leq.end();
}

DirectedPoset DirectedPoset::chain(std::size_t m) {
    DirectedPoset J;
    for (std::size_t i = 0; i < m; ++i) J.nodes.push_back("u" + std::to_string(i));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i <= j; ++i) J.leq.push_back({J.nodes[j], J.nodes[i]});
    return J;
}

AxiomReport check_poset(const DirectedPoset& J) {
    AxiomReport r;
    auto fail = [&](const std::string& rule, json nodes) {
        r.fail("poset", rule, {{"rule", rule}, {"nodes", std::move(nodes)}});
        return r;
    };
    if (J.nodes.empty()) return fail("no nodes", json::array());
    const std::set<Node> N(J.nodes.begin(), J.nodes.end());
    if (N.size() != J.nodes.size()) return fail("duplicate node", J.nodes);
    for (const auto& u : J.nodes)
        if (u.empty() || u.find(',') != std::string::npos) return fail("node names must be nonempty without commas", {u});
    for (const auto& e : J.leq)
        if (!N.count(e.first) || !N.count(e.second)) return fail("unknown node", edge_json(e));
    const auto E = edge_set(J);
    for (const auto& u : J.nodes)
        if (!E.count({u, u})) return fail("reflexive", {u});
    for (const auto& [u, v] : J.leq)
        if (u != v && E.count({v, u})) return fail("antisymmetric", {u, v});
    std::optional<json> bad;
    for_each_triple(J, [&](const Node& u, const Node& v, const Node& w) {
        if (!bad && !E.count({u, w})) bad = json{u, v, w};
    });
    if (bad) return fail("transitive", *bad);
    for (const auto& u : J.nodes)
        for (const auto& v : J.nodes) {
            bool bounded = false;
            for (const auto& w : J.nodes) bounded = bounded || (E.count({u, w}) && E.count({v, w}));
            if (!bounded) return fail("directed", {u, v});
        }
    r.pass("poset", std::to_string(J.nodes.size()) + " nodes, " + std::to_string(J.leq.size()) + " relations");
    return r;
}

// ---------------------------------------------------------------- group towers

namespace {

std::optional<json> bond_shape_defect(const GroupTower& T, const Edge& e) {
    auto it = T.chi.find(e);
    if (it == T.chi.end()) return json{{"edge", edge_json(e)}, {"problem", "missing"}};
    auto gu = T.groups.find(e.first), gv = T.groups.find(e.second);
    if (gu == T.groups.end() || gv == T.groups.end()) return json{{"edge", edge_json(e)}, {"problem", "missing group"}};
    if (!(it->second.source() == gv->second) || !(it->second.target() == gu->second))
        return json{{"edge", edge_json(e)}, {"problem", "source or target"}};
    if (!it->second.respects_orders()) return json{{"edge", edge_json(e)}, {"problem", "not well defined"}};
    return std::nullopt;
}

}  // namespace

AxiomReport check_tower(const GroupTower& T) {
    AxiomReport r = check_poset(T.poset);
    if (!r.passed()) return r;
    for (const auto& e : T.poset.leq)
        if (auto bad = bond_shape_defect(T, e)) {
            r.fail("bond-shape", "bond " + edge_key(e) + " is malformed", *bad);
            return r;
        }
    r.pass("bond-shape");

    std::optional<Edge> bad_edge;
    for (const auto& e : T.poset.leq)
        if (!T.chi.at(e).is_surjective()) {
            bad_edge = e;
            break;
        }
    if (bad_edge)
        r.fail("surjective", "bond " + edge_key(*bad_edge) + " is not surjective", {{"edge", edge_json(*bad_edge)}});
    else
        r.pass("surjective");

    std::optional<Node> bad_node;
    for (const auto& u : T.poset.nodes)
        if (!(T.chi.at({u, u}) == GroupHom::identity(T.groups.at(u)))) {
            bad_node = u;
            break;
        }
    if (bad_node)
        r.fail("identity", "bond " + *bad_node + "," + *bad_node + " is not the identity", {{"node", *bad_node}});
    else
        r.pass("identity");

    std::optional<json> bad;
    std::size_t triples = 0;
    for_each_triple(T.poset, [&](const Node& u, const Node& v, const Node& w) {
        ++triples;
        if (!bad && !(T.chi.at({u, v}).compose(T.chi.at({v, w})) == T.chi.at({u, w})))
            bad = json{{"edges", json::array({edge_json({u, v}), edge_json({v, w})})}};
    });
    if (bad)
        r.fail("functorial", "bonds do not compose", *bad);
    else
        r.pass("functorial", std::to_string(triples) + " composable pairs");
    return r;
}

bool tower_counterexample_refails(const GroupTower& T, const Check& failed) {
    if (failed.passed) return false;
    const json& cx = failed.counterexample;
    try {
        if (failed.name == "poset") return !check_poset(T.poset).passed();
        if (failed.name == "bond-shape") return bond_shape_defect(T, edge_from(cx.at("edge"))).has_value();
        if (failed.name == "surjective") {
            const Edge e = edge_from(cx.at("edge"));
            return !bond_shape_defect(T, e) && !T.chi.at(e).is_surjective();
        }
        if (failed.name == "identity") {
            const Node u = cx.at("node").get<std::string>();
            return !(T.chi.at({u, u}) == GroupHom::identity(T.groups.at(u)));
        }
        if (failed.name == "functorial") {
            const Edge a = edge_from(cx.at("edges").at(0)), b = edge_from(cx.at("edges").at(1));
            if (a.second != b.first) return false;
            return !(T.chi.at(a).compose(T.chi.at(b)) == T.chi.at({a.first, b.second}));
        }
    } catch (const std::exception&) {
        return false;
    }
    return false;
}

// ---------------------------------------------------------------- inverse limit

InverseLimit inverse_limit(const GroupTower& T) {
    const auto& nodes = T.poset.nodes;
    std::map<Node, std::size_t> offset;
    std::size_t N = 0;
    for (const auto& u : nodes) {
        const auto& G = T.groups.at(u);
        if (!G.is_finite()) throw std::invalid_argument("inverse limits need finite groups");
        offset[u] = N;
        N += G.rank();
    }
    // thread conditions: chi_{v,u}(x_v) - x_u = 0 in G_u, one row per coordinate of G_u
    std::vector<std::vector<Integer>> rows;
    std::vector<Integer> moduli;
    for (const auto& e : T.poset.leq) {
        if (e.first == e.second) continue;
        const auto& [u, v] = e;
        const GroupHom& chi = T.chi.at(e);
        const auto& du = T.groups.at(u).invariant_factors();
        for (std::size_t t = 0; t < du.size(); ++t) {
            std::vector<Integer> row(N, 0);
            for (std::size_t k = 0; k < T.groups.at(v).rank(); ++k) row[offset[v] + k] += chi.matrix()[t][k];
            row[offset[u] + t] -= 1;
            rows.push_back(std::move(row));
            moduli.push_back(du[t]);
        }
    }
    // lattice L of integer lifts of threads: x with A x in D Z^m
    IntMatrix B;
    if (rows.empty()) {
        B = IntMatrix::identity(N);
    } else {
        const std::size_t m = rows.size();
        IntMatrix C(m, N + m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < N; ++k) C(i, k) = rows[i][k];
            C(i, N + i) = moduli[i];
        }
        const IntMatrix K = kernel_basis(C);
        B = IntMatrix(N, K.cols());
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < K.cols(); ++c) B(r, c) = K(r, c);
        if (rank(B) != N) throw std::logic_error("thread lattice has the wrong rank");
    }
    // threads = L / (orders lattice), written in the basis B
    std::vector<std::vector<Integer>> rel;
    for (const auto& u : nodes) {
        const auto& du = T.groups.at(u).invariant_factors();
        for (std::size_t k = 0; k < du.size(); ++k) {
            std::vector<Integer> target(N, 0);
            target[offset[u] + k] = du[k];
            auto y = image_solve(B, target);
            if (!y) throw std::logic_error("order lattice escapes the thread lattice");
            rel.push_back(std::move(*y));
        }
    }
    const Presentation P = present(IntMatrix::from_rows(rel, B.cols()), B.cols());

    InverseLimit out;
    out.group = P.group;
    const std::size_t r = P.group.rank();
    for (const auto& u : nodes) {
        const auto& Gu = T.groups.at(u);
        std::vector<std::vector<std::int64_t>> mat(Gu.rank(), std::vector<std::int64_t>(r, 0));
        for (std::size_t t = 0; t < r; ++t) {
            const std::vector<Integer> x = B * P.from_coords.row(t);
            std::vector<std::int64_t> xu(Gu.rank());
            for (std::size_t k = 0; k < Gu.rank(); ++k) {
                Integer v = x[offset[u] + k] % Gu.invariant_factors()[k];
                xu[k] = static_cast<std::int64_t>(v);
            }
            const GroupElement img = Gu.reduce(xu);
            for (std::size_t k = 0; k < Gu.rank(); ++k) mat[k][t] = img[k];
        }
        out.projections.emplace(u, GroupHom(out.group, Gu, std::move(mat)));
    }
    return out;
}

std::vector<std::map<Node, GroupElement>> enumerate_threads(const GroupTower& T) {
    const auto& nodes = T.poset.nodes;
    std::vector<std::vector<GroupElement>> els;
    for (const auto& u : nodes) els.push_back(T.groups.at(u).elements());
    std::vector<std::map<Node, GroupElement>> out;
    std::vector<std::size_t> idx(nodes.size(), 0);
    for (;;) {
        std::map<Node, GroupElement> x;
        for (std::size_t i = 0; i < nodes.size(); ++i) x[nodes[i]] = els[i][idx[i]];
        bool thread = true;
        for (const auto& e : T.poset.leq)
            if (!(T.chi.at(e).apply(x.at(e.second)) == x.at(e.first))) {
                thread = false;
                break;
            }
        if (thread) out.push_back(std::move(x));
        std::size_t p = 0;
        while (p < idx.size() && ++idx[p] == els[p].size()) idx[p++] = 0;
        if (p == idx.size()) break;
    }
    return out;
}

// ---------------------------------------------------------------- polygroupoid towers

namespace {

bool is_top(const Polygroupoid& H, ElemId e) { return H.element(e).sort == H.arity(); }

std::optional<json> rho_shape_defect(const PolyTower& T, const Edge& e) {
    auto it = T.rho.find(e);
    if (it == T.rho.end()) return json{{"edge", edge_json(e)}, {"problem", "missing"}};
    const Polygroupoid& Hu = T.nodes.at(e.first);
    const Polygroupoid& Hv = T.nodes.at(e.second);
    if (it->second.size() != Hv.size()) return json{{"edge", edge_json(e)}, {"problem", "length"}};
    for (ElemId x = 0; x < Hv.size(); ++x) {
        const ElemId y = it->second[x];
        const bool ok = is_top(Hv, x) ? (y < Hu.size() && is_top(Hu, y) && Hu.element(y).config == Hv.element(x).config)
                                      : y == kNoElem;
        if (!ok) return json{{"edge", edge_json(e)}, {"element", Hv.id(x)}};
    }
    return std::nullopt;
}

std::optional<json> surjective_defect(const PolyTower& T, const Edge& e) {
    const Polygroupoid& Hu = T.nodes.at(e.first);
    const Polygroupoid& Hv = T.nodes.at(e.second);
    std::set<ElemId> image;
    for (ElemId x = 0; x < Hv.size(); ++x)
        if (is_top(Hv, x)) image.insert(T.rho.at(e)[x]);
    for (ElemId y = 0; y < Hu.size(); ++y)
        if (is_top(Hu, y) && !image.count(y)) return json{{"edge", edge_json(e)}, {"missing", Hu.id(y)}};
    return std::nullopt;
}

std::optional<json> pi_defect(const PolyTower& T, const Edge& e, ElemId x) {
    const Polygroupoid& Hu = T.nodes.at(e.first);
    const Polygroupoid& Hv = T.nodes.at(e.second);
    if (Hu.ids(Hu.element(T.rho.at(e)[x]).pi) != Hv.ids(Hv.element(x).pi))
        return json{{"edge", edge_json(e)}, {"element", Hv.id(x)}};
    return std::nullopt;
}

Tuple rho_image(const PolyTower& T, const Edge& e, const Tuple& t) {
    Tuple out;
    for (ElemId x : t) out.push_back(T.rho.at(e)[x]);
    return out;
}

}  // namespace

AxiomReport check_tower(const PolyTower& T) {
    AxiomReport r = check_poset(T.poset);
    if (!r.passed()) return r;
    {
        std::optional<json> bad;
        std::size_t arity = 0;
        std::vector<Vertex> vertices;
        for (const auto& u : T.poset.nodes) {
            auto it = T.nodes.find(u);
            if (it == T.nodes.end()) {
                bad = json{{"node", u}, {"check", "missing"}};
                break;
            }
            const Polygroupoid& H = it->second;
            if (u == T.poset.nodes.front()) {
                arity = H.arity();
                vertices = H.vertices();
            } else if (H.arity() != arity || H.vertices() != vertices) {
                bad = json{{"node", u}, {"check", "shape"}};
                break;
            }
            AxiomReport a = check_axioms(H);
            if (a.passed()) a.merge(check_associativity(H));
            if (const Check* f = a.first_failure()) {
                bad = json{{"node", u}, {"check", f->name}, {"counterexample", f->counterexample}};
                break;
            }
        }
        if (bad) {
            r.fail("node-axioms", "node " + bad->at("node").get<std::string>() + " fails " +
                                      bad->at("check").get<std::string>(),
                   *bad);
            return r;
        }
        r.pass("node-axioms", std::to_string(T.poset.nodes.size()) + " polygroupoids");
    }
    for (const auto& e : T.poset.leq)
        if (auto bad = rho_shape_defect(T, e)) {
            r.fail("rho-shape", "projection " + edge_key(e) + " is malformed", *bad);
            return r;
        }
    r.pass("rho-shape");

    auto first_defect = [&](const std::string& name, const std::string& what, auto&& probe) {
        for (const auto& e : T.poset.leq)
            if (auto bad = probe(e)) {
                r.fail(name, what + " on " + edge_key(e), *bad);
                return;
            }
        r.pass(name);
    };
    first_defect("surjective", "projection is not onto", [&](const Edge& e) { return surjective_defect(T, e); });
    first_defect("identity", "projection is not the identity", [&](const Edge& e) -> std::optional<json> {
        if (e.first != e.second) return std::nullopt;
        const auto& map = T.rho.at(e);
        for (ElemId x = 0; x < map.size(); ++x)
            if (map[x] != kNoElem && map[x] != x) return json{{"node", e.first}, {"element", T.nodes.at(e.first).id(x)}};
        return std::nullopt;
    });
    {
        std::optional<json> bad;
        for_each_triple(T.poset, [&](const Node& u, const Node& v, const Node& w) {
            if (bad) return;
            const auto& uv = T.rho.at({u, v});
            const auto& vw = T.rho.at({v, w});
            const auto& uw = T.rho.at({u, w});
            for (ElemId x = 0; x < uw.size(); ++x)
                if (uw[x] != kNoElem && uv[vw[x]] != uw[x]) {
                    bad = json{{"edges", json::array({edge_json({u, v}), edge_json({v, w})})}, {"element", T.nodes.at(w).id(x)}};
                    return;
                }
        });
        if (bad)
            r.fail("functorial", "projections do not compose", *bad);
        else
            r.pass("functorial");
    }
    first_defect("pi-commutes", "projection moves a boundary", [&](const Edge& e) -> std::optional<json> {
        const Polygroupoid& Hv = T.nodes.at(e.second);
        for (ElemId x = 0; x < Hv.size(); ++x)
            if (is_top(Hv, x))
                if (auto bad = pi_defect(T, e, x)) return bad;
        return std::nullopt;
    });
    {
        std::optional<json> bad;
        std::size_t checked = 0;
        for (const auto& e : T.poset.leq) {
            const Polygroupoid& Hu = T.nodes.at(e.first);
            const Polygroupoid& Hv = T.nodes.at(e.second);
            for (const Tuple& t : Hv.q()) {
                ++checked;
                if (!Hu.has_q(rho_image(T, e, t))) {
                    bad = json{{"edge", edge_json(e)}, {"tuple", Hv.ids(t)}};
                    break;
                }
            }
            if (bad) break;
        }
        if (bad)
            r.fail("q-coherence", "projection of a Q tuple leaves Q", *bad);
        else
            r.pass("q-coherence", std::to_string(checked) + " tuples");
    }
    return r;
}

bool tower_counterexample_refails(const PolyTower& T, const Check& failed) {
    if (failed.passed) return false;
    const json& cx = failed.counterexample;
    try {
        if (failed.name == "poset") return !check_poset(T.poset).passed();
        if (failed.name == "node-axioms") {
            const Node u = cx.at("node").get<std::string>();
            auto it = T.nodes.find(u);
            if (it == T.nodes.end()) return true;
            if (!cx.contains("counterexample")) return !check_tower(T).passed();
            return counterexample_refails(it->second, Check{cx.at("check").get<std::string>(), false, "",
                                                            cx.at("counterexample")});
        }
        if (failed.name == "rho-shape") return rho_shape_defect(T, edge_from(cx.at("edge"))).has_value();
        const auto check_shape = [&](const Edge& e) { return !rho_shape_defect(T, e); };
        if (failed.name == "surjective") {
            const Edge e = edge_from(cx.at("edge"));
            if (!check_shape(e)) return false;
            const Polygroupoid& Hv = T.nodes.at(e.second);
            const ElemId y = T.nodes.at(e.first).at(cx.at("missing").get<std::string>());
            for (ElemId x = 0; x < Hv.size(); ++x)
                if (is_top(Hv, x) && T.rho.at(e)[x] == y) return false;
            return true;
        }
        if (failed.name == "identity") {
            const Node u = cx.at("node").get<std::string>();
            const ElemId x = T.nodes.at(u).at(cx.at("element").get<std::string>());
            return check_shape({u, u}) && T.rho.at({u, u})[x] != x;
        }
        if (failed.name == "functorial") {
            const Edge a = edge_from(cx.at("edges").at(0)), b = edge_from(cx.at("edges").at(1));
            const Edge c{a.first, b.second};
            if (a.second != b.first || !check_shape(a) || !check_shape(b) || !check_shape(c)) return false;
            const ElemId x = T.nodes.at(b.second).at(cx.at("element").get<std::string>());
            return T.rho.at(a)[T.rho.at(b)[x]] != T.rho.at(c)[x];
        }
        if (failed.name == "pi-commutes") {
            const Edge e = edge_from(cx.at("edge"));
            if (!check_shape(e)) return false;
            return pi_defect(T, e, T.nodes.at(e.second).at(cx.at("element").get<std::string>())).has_value();
        }
        if (failed.name == "q-coherence") {
            const Edge e = edge_from(cx.at("edge"));
            if (!check_shape(e)) return false;
            const Polygroupoid& Hv = T.nodes.at(e.second);
            const Tuple t = Hv.lookup(cx.at("tuple").get<std::vector<std::string>>());
            return Hv.has_q(t) && !T.nodes.at(e.first).has_q(rho_image(T, e, t));
        }
    } catch (const std::exception&) {
        return false;
    }
    return false;
}

// ---------------------------------------------------------------- induced homs

GroupHom induced_hom(const PolyTower& T, const Edge& edge, const ActionTable& act_u, const ActionTable& act_v) {
    if (!T.poset.less_equal(edge.first, edge.second)) throw std::invalid_argument(edge_key(edge) + " is not a relation");
    if (auto bad = rho_shape_defect(T, edge)) throw InducedHomError("projection " + edge_key(edge) + " is malformed", *bad);
    const Polygroupoid& Hu = T.nodes.at(edge.first);
    const Polygroupoid& Hv = T.nodes.at(edge.second);
    const auto& rho = T.rho.at(edge);
    const FinAbelianGroup& Gu = act_u.group;
    const FinAbelianGroup& Gv = act_v.group;

    ElemId w0 = kNoElem;
    for (ElemId x = 0; x < Hv.size() && w0 == kNoElem; ++x)
        if (is_top(Hv, x)) w0 = x;
    if (w0 == kNoElem) throw std::invalid_argument("node " + edge.second + " has no top-sort elements");

    const auto gu = Gu.elements();
    auto solve = [&](ElemId from, ElemId to) -> std::optional<GroupElement> {
        for (const auto& d : gu)
            if (act_u.act(d, from) == to) return d;
        return std::nullopt;
    };
    std::vector<std::vector<std::int64_t>> mat(Gu.rank(), std::vector<std::int64_t>(Gv.rank(), 0));
    for (std::size_t k = 0; k < Gv.rank(); ++k) {
        std::vector<std::int64_t> ek(Gv.rank(), 0);
        ek[k] = 1;
        const GroupElement g(ek);
        auto d = solve(rho[w0], rho[act_v.act(g, w0)]);
        if (!d)
            throw InducedHomError("no group element of " + edge.first + " matches the projection",
                                  {{"edge", edge_json(edge)}, {"gamma", g.coords()}, {"witnesses", {Hv.id(w0)}}});
        for (std::size_t i = 0; i < Gu.rank(); ++i) mat[i][k] = (*d)[i];
    }
    GroupHom chi(Gv, Gu, std::move(mat));
    if (!chi.respects_orders())
        throw InducedHomError("induced map is not a homomorphism", {{"edge", edge_json(edge)}, {"witnesses", {Hv.id(w0)}}});
    for (const auto& g : Gv.elements()) {
        const GroupElement cg = chi.apply(g);
        for (ElemId w = 0; w < Hv.size(); ++w) {
            if (!is_top(Hv, w)) continue;
            if (act_u.act(cg, rho[w]) != rho[act_v.act(g, w)])
                throw InducedHomError("induced map depends on the witness",
                                      {{"edge", edge_json(edge)},
                                       {"gamma", g.coords()},
                                       {"witnesses", {Hv.id(w0), Hv.id(w)}}});
        }
    }
    (void)Hu;
    return chi.canonical();
}

GroupTower group_tower(const PolyTower& T, const std::map<Node, ActionTable>& acts) {
    GroupTower G;
    G.poset = T.poset;
    for (const auto& u : T.poset.nodes) G.groups[u] = acts.at(u).group;
    for (const auto& e : T.poset.leq) G.chi.emplace(e, induced_hom(T, e, acts.at(e.first), acts.at(e.second)));
    return G;
}

std::map<Node, ActionTable> extract_actions(const PolyTower& T) {
    std::map<Node, ActionTable> out;
    for (const auto& [u, H] : T.nodes) out[u] = extract(H).action;
    return out;
}

std::map<Node, ActionTable> translation_actions(const PolyTower& T, const std::map<Node, FinAbelianGroup>& groups) {
    std::map<Node, ActionTable> out;
    for (const auto& [u, H] : T.nodes) out[u] = translation_action(H, groups.at(u));
    return out;
}

// ---------------------------------------------------------------- standard towers

GroupTower chain_group_tower(const std::vector<FinAbelianGroup>& groups, const std::vector<GroupHom>& bonds) {
    if (groups.empty()) throw std::invalid_argument("a tower needs at least one group");
    if (bonds.size() + 1 != groups.size()) throw std::invalid_argument("need one bond between consecutive groups");
    for (std::size_t i = 0; i < bonds.size(); ++i) {
        if (!(bonds[i].source() == groups[i]) || !(bonds[i].target() == groups[i + 1]))
            throw std::invalid_argument("bond " + std::to_string(i) + " does not connect consecutive groups");
        if (!bonds[i].respects_orders() || !bonds[i].is_surjective())
            throw std::invalid_argument("bond " + std::to_string(i) + " is not a surjective homomorphism");
    }
    GroupTower T;
    T.poset = DirectedPoset::chain(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) T.groups[T.poset.nodes[i]] = groups[i];
    for (std::size_t i = 0; i < groups.size(); ++i) {
        GroupHom h = GroupHom::identity(groups[i]);
        for (std::size_t j = i; j < groups.size(); ++j) {
            if (j > i) h = bonds[j - 1].compose(h);
            T.chi.emplace(Edge{T.poset.nodes[j], T.poset.nodes[i]}, h);
        }
    }
    return T;
}

std::vector<GroupHom> reduction_bonds(const std::vector<std::int64_t>& cyclic_orders) {
    std::vector<GroupHom> out;
    for (std::size_t i = 0; i + 1 < cyclic_orders.size(); ++i) {
        const auto a = cyclic_orders[i], b = cyclic_orders[i + 1];
        if (a < 1 || b < 1 || a % b != 0)
            throw std::invalid_argument("each order must divide the previous one: " + std::to_string(a) + ", " +
                                        std::to_string(b));
        const auto A = FinAbelianGroup::cyclic(a), B = FinAbelianGroup::cyclic(b);
        out.emplace_back(A, B, std::vector<std::vector<std::int64_t>>(B.rank(), std::vector<std::int64_t>(A.rank(), 1)));
    }
    return out;
}

PolyTower standard_tower(const std::vector<FinAbelianGroup>& groups, const std::vector<GroupHom>& bonds,
                         const std::vector<Vertex>& vertices, std::size_t n) {
    const GroupTower GT = chain_group_tower(groups, bonds);
    PolyTower T;
    T.poset = GT.poset;
    for (std::size_t i = 0; i < groups.size(); ++i) T.nodes.emplace(T.poset.nodes[i], standard(groups[i], vertices, n));
    for (const auto& e : T.poset.leq) {
        const Polygroupoid& Hu = T.nodes.at(e.first);
        const Polygroupoid& Hv = T.nodes.at(e.second);
        const auto& Gu = GT.groups.at(e.first);
        const auto& Gv = GT.groups.at(e.second);
        const GroupHom& chi = GT.chi.at(e);
        std::vector<ElemId> map(Hv.size(), kNoElem);
        for (const auto& c : Hv.configs(n))
            for (const auto& g : Gv.elements())
                map[Hv.at(standard_id(Gv, c, g))] = Hu.at(standard_id(Gu, c, chi.apply(g)));
        T.rho.emplace(e, std::move(map));
    }
    return T;
}

PolyTower standard_tower(const std::vector<std::int64_t>& cyclic_orders, const std::vector<Vertex>& vertices,
                         std::size_t n) {
    std::vector<FinAbelianGroup> groups;
    for (auto d : cyclic_orders) groups.push_back(FinAbelianGroup::cyclic(d));
    return standard_tower(groups, reduction_bonds(cyclic_orders), vertices, n);
}

// ---------------------------------------------------------------- threads of fiber elements

AxiomReport check_thread_action(const PolyTower& T, const std::map<Node, ActionTable>& acts, const Config& z,
                                const GroupTower& groups, const InverseLimit& limit) {
    AxiomReport r;
    const auto& nodes = T.poset.nodes;
    std::vector<const std::vector<ElemId>*> fibers;
    for (const auto& u : nodes) fibers.push_back(&T.nodes.at(u).fiber(z));
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (fibers[i]->empty()) throw std::invalid_argument("node " + nodes[i] + " has no fiber over " + config_key(z));

    std::map<Node, std::size_t> pos;
    for (std::size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = i;
    auto is_thread = [&](const std::vector<ElemId>& w) {
        for (const auto& e : T.poset.leq)
            if (T.rho.at(e)[w[pos[e.second]]] != w[pos[e.first]]) return false;
        return true;
    };
    std::vector<std::vector<ElemId>> threads;
    std::vector<std::size_t> idx(nodes.size(), 0);
    for (;;) {
        std::vector<ElemId> w(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = (*fibers[i])[idx[i]];
        if (is_thread(w)) threads.push_back(std::move(w));
        std::size_t p = 0;
        while (p < idx.size() && ++idx[p] == fibers[p]->size()) idx[p++] = 0;
        if (p == idx.size()) break;
    }
    auto thread_json = [&](const std::vector<ElemId>& w) {
        json j = json::object();
        for (std::size_t i = 0; i < nodes.size(); ++i) j[nodes[i]] = T.nodes.at(nodes[i]).id(w[i]);
        return j;
    };

    const auto limit_elements = limit.group.elements();
    auto move = [&](const GroupElement& x, const std::vector<ElemId>& w) {
        std::vector<ElemId> out(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const GroupElement gu = limit.projections.at(nodes[i]).apply(x);
            if (!(acts.at(nodes[i]).group == groups.groups.at(nodes[i])))
                throw std::invalid_argument("action group of node " + nodes[i] + " differs from the tower group");
            out[i] = acts.at(nodes[i]).act(gu, w[i]);
        }
        return out;
    };

    std::optional<json> bad;
    std::map<std::vector<ElemId>, std::size_t> index;
    for (std::size_t t = 0; t < threads.size(); ++t) index[threads[t]] = t;
    std::vector<std::vector<int>> hits(threads.size(), std::vector<int>(threads.size(), 0));
    for (std::size_t t = 0; t < threads.size() && !bad; ++t)
        for (const auto& x : limit_elements) {
            const auto y = move(x, threads[t]);
            auto it = index.find(y);
            if (it == index.end()) {
                bad = json{{"thread", thread_json(threads[t])}, {"gamma", x.coords()}};
                break;
            }
            ++hits[t][it->second];
        }
    if (bad) {
        r.fail("thread-closure", "the limit moves a thread off the threads", *bad);
        return r;
    }
    r.pass("thread-closure", std::to_string(threads.size()) + " threads over " + config_key(z));
    for (std::size_t a = 0; a < threads.size() && !bad; ++a)
        for (std::size_t b = 0; b < threads.size(); ++b)
            if (hits[a][b] != 1) {
                bad = json{{"threads", {thread_json(threads[a]), thread_json(threads[b])}}, {"elements", hits[a][b]}};
                break;
            }
    if (bad)
        r.fail("thread-regularity", "threads are not a torsor under the limit", *bad);
    else
        r.pass("thread-regularity", limit.group.to_string() + " acts simply transitively");
    return r;
}

PolyTower tamper_rho(const PolyTower& T, const Edge& edge, ElemId e, ElemId target) {
    PolyTower out = T;
    out.rho.at(edge).at(e) = target;
    return out;
}

// ---------------------------------------------------------------- json

json poset_to_json(const DirectedPoset& J) {
    json leq = json::array();
    for (const auto& e : J.leq) leq.push_back(edge_json(e));
    return {{"nodes", J.nodes}, {"leq", leq}};
}

DirectedPoset poset_from_json(const json& j) {
    DirectedPoset J;
    J.nodes = j.at("nodes").get<std::vector<std::string>>();
    for (const auto& e : j.at("leq")) J.leq.push_back(edge_from(e));
    return J;
}

json tower_to_json(const PolyTower& T) {
    json nodes = json::object();
    for (const auto& [u, H] : T.nodes) nodes[u] = polygroupoid_to_json(H);
    json rho = json::object();
    for (const auto& [e, map] : T.rho) {
        const Polygroupoid& Hu = T.nodes.at(e.first);
        const Polygroupoid& Hv = T.nodes.at(e.second);
        json m = json::object();
        for (ElemId x = 0; x < map.size(); ++x)
            if (map[x] != kNoElem) m[Hv.id(x)] = Hu.id(map[x]);
        rho[edge_key(e)] = m;
    }
    return {{"poset", poset_to_json(T.poset)}, {"nodes", nodes}, {"rho", rho}};
}

PolyTower tower_from_json(const json& j) {
    try {
        PolyTower T;
        T.poset = poset_from_json(j.at("poset"));
        for (const auto& [u, h] : j.at("nodes").items()) T.nodes.emplace(u, polygroupoid_from_json(h));
        for (const auto& [key, m] : j.at("rho").items()) {
            const Edge e = parse_edge_key(key);
            auto hu = T.nodes.find(e.first), hv = T.nodes.find(e.second);
            if (hu == T.nodes.end() || hv == T.nodes.end()) throw FormatError("rho " + key + " names an unknown node");
            std::vector<ElemId> map(hv->second.size(), kNoElem);
            for (const auto& [from, to] : m.items()) map[hv->second.at(from)] = hu->second.at(to.get<std::string>());
            T.rho.emplace(e, std::move(map));
        }
        return T;
    } catch (const json::exception& e) {
        throw FormatError(std::string("tower JSON: ") + e.what());
    }
}

json hom_to_json(const GroupHom& h) {
    return {{"source", group_to_json(h.source())}, {"target", group_to_json(h.target())}, {"matrix", h.matrix()}};
}

json group_tower_to_json(const GroupTower& T) {
    json groups = json::object();
    for (const auto& [u, G] : T.groups) groups[u] = group_to_json(G);
    json chi = json::object();
    for (const auto& [e, h] : T.chi) chi[edge_key(e)] = h.matrix();
    return {{"poset", poset_to_json(T.poset)}, {"groups", groups}, {"chi", chi}};
}

GroupTower group_tower_from_json(const json& j) {
    try {
        GroupTower T;
        T.poset = poset_from_json(j.at("poset"));
        for (const auto& [u, g] : j.at("groups").items()) T.groups[u] = group_from_json(g);
        for (const auto& [key, m] : j.at("chi").items()) {
            const Edge e = parse_edge_key(key);
            auto gu = T.groups.find(e.first), gv = T.groups.find(e.second);
            if (gu == T.groups.end() || gv == T.groups.end()) throw FormatError("chi " + key + " names an unknown node");
            T.chi.emplace(e, GroupHom(gv->second, gu->second, m.get<std::vector<std::vector<std::int64_t>>>()));
        }
        return T;
    } catch (const json::exception& e) {
        throw FormatError(std::string("group tower JSON: ") + e.what());
    }
}

}  // namespace polyhom
