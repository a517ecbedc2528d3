#include "polyhom/hurewicz.hpp"

#include <algorithm>
#include <set>

#include "polyhom/json_io.hpp"
#include "polyhom/rng.hpp"

namespace polyhom {

using nlohmann::json;

Tuple SimplexDatum::embedded(const ActionTable& act) const {
    Tuple t(faces.size());
    for (std::size_t i = 0; i < faces.size(); ++i) t[i] = embedded(act, i);
    return t;
}

AbstractFace default_face(const Polygroupoid& H, const Config& c) {
    const auto& f = H.fiber(c);
    if (f.empty()) throw std::invalid_argument("no fiber over " + config_key(c));
    return {config_key(c), c, f.front()};
}

SimplexDatum make_simplex(const Polygroupoid& H, const Config& vertices, const std::vector<GroupElement>& twists) {
    if (vertices.size() != H.arity() + 1) throw std::invalid_argument("a simplex needs n+1 vertices");
    if (twists.size() != vertices.size()) throw std::invalid_argument("one twist per face expected");
    SimplexDatum g;
    g.vertices = vertices;
    for (std::size_t i = 0; i < vertices.size(); ++i) g.faces.push_back(default_face(H, drop_vertex(vertices, i)));
    g.twists = twists;
    return g;
}

CoSimplexDatum make_cosimplex(const Polygroupoid& H, const Config& vertices,
                              const std::map<std::pair<std::size_t, std::size_t>, GroupElement>& twists) {
    if (vertices.size() != H.arity() + 2) throw std::invalid_argument("a cosimplex needs n+2 vertices");
    CoSimplexDatum h;
    h.vertices = vertices;
    for (std::size_t j = 1; j < vertices.size(); ++j)
        for (std::size_t i = 0; i < j; ++i) {
            auto it = twists.find({i, j});
            if (it == twists.end())
                throw std::invalid_argument("missing twist for pair " + std::to_string(i) + "," + std::to_string(j));
            h.pairs[{i, j}] = {default_face(H, drop_vertex(drop_vertex(vertices, j), i)), it->second};
        }
    return h;
}

std::optional<std::string> simplex_defect(const Polygroupoid& H, const ActionTable& act, const SimplexDatum& g) {
    const std::size_t n = H.arity();
    if (g.vertices.size() != n + 1) return "expected " + std::to_string(n + 1) + " vertices";
    if (!std::is_sorted(g.vertices.begin(), g.vertices.end()) ||
        std::adjacent_find(g.vertices.begin(), g.vertices.end()) != g.vertices.end())
        return "vertices must be sorted and distinct";
    if (g.faces.size() != n + 1 || g.twists.size() != n + 1) return "expected one face and one twist per vertex";
    for (std::size_t i = 0; i <= n; ++i) {
        const auto& f = g.faces[i];
        if (f.config != drop_vertex(g.vertices, i)) return "face " + std::to_string(i) + " lies over the wrong configuration";
        if (f.selector >= H.size() || H.element(f.selector).config != f.config || H.element(f.selector).sort != n)
            return "selector of face " + std::to_string(i) + " is not in its fiber";
        if (!act.group.contains(g.twists[i])) return "twist " + std::to_string(i) + " is not a group element";
    }
    if (auto w = compatibility_witness(H, g.embedded(act)))
        return "embedded faces " + std::to_string(w->first) + " and " + std::to_string(w->second) + " are incompatible";
    return std::nullopt;
}

namespace {

// Group indices gamma with Q(t_0, ..., t_{n-1}, gamma.t_n).
std::vector<std::size_t> epsilon_candidates(const Polygroupoid& H, const ActionTable& act, Tuple t) {
    std::vector<std::size_t> out;
    const ElemId last = t.back();
    for (std::size_t g = 0; g < act.table.size(); ++g) {
        t.back() = act.table[g][last];
        if (H.has_q(t)) out.push_back(g);
    }
    return out;
}

json coords_list(const std::vector<GroupElement>& gs) {
    json out = json::array();
    for (const auto& g : gs) out.push_back(g.coords());
    return out;
}

}  // namespace

GroupElement epsilon(const Polygroupoid& H, const ActionTable& act, const SimplexDatum& g) {
    if (auto d = simplex_defect(H, act, g)) throw HurewiczError(*d, simplex_to_json(H, g));
    const auto found = epsilon_candidates(H, act, g.embedded(act));
    if (found.size() != 1)
        throw HurewiczError(std::to_string(found.size()) + " group elements complete the simplex",
                            {{"simplex", simplex_to_json(H, g)}, {"solutions", found.size()}});
    return act.group.element(found[0]);
}

GroupElement epsilon(const Polygroupoid& H, const ActionTable& act,
                     const std::vector<std::pair<std::int64_t, SimplexDatum>>& chain) {
    const auto& G = act.group;
    GroupElement sum = G.zero();
    for (const auto& [k, g] : chain) sum = G.add(sum, G.scale(epsilon(H, act, g), k));
    return sum;
}

SimplexDatum co_face(const CoSimplexDatum& h, std::size_t j) {
    if (j >= h.vertices.size()) throw std::out_of_range("co_face index out of range");
    SimplexDatum g;
    g.vertices = drop_vertex(h.vertices, j);
    for (std::size_t k = 0; k + 1 < h.vertices.size(); ++k) {
        const std::size_t m = k < j ? k : k + 1;
        const auto& e = h.pairs.at({std::min(j, m), std::max(j, m)});
        g.faces.push_back(e.face);
        g.twists.push_back(e.twist);
    }
    return g;
}

bool check_boundary_zero(const Polygroupoid& H, const ActionTable& act, const CoSimplexDatum& h) {
    const auto& G = act.group;
    GroupElement sum = G.zero();
    for (std::size_t j = 0; j < h.vertices.size(); ++j) {
        const GroupElement e = epsilon(H, act, co_face(h, j));
        sum = j % 2 == 0 ? G.add(sum, e) : G.sub(sum, e);
    }
    return sum.is_zero();
}

std::optional<std::vector<GroupElement>> natural_iso(const FinAbelianGroup& G, const SimplexDatum& g,
                                                     const SimplexDatum& g2) {
    if (g.vertices != g2.vertices || g.faces != g2.faces || g.twists.size() != g2.twists.size() ||
        g.twists.size() != g.faces.size())
        throw std::invalid_argument("simplices do not share vertices and faces");
    std::vector<GroupElement> delta;
    GroupElement s = G.zero();
    for (std::size_t i = 0; i < g.twists.size(); ++i) {
        delta.push_back(G.sub(g2.twists[i], g.twists[i]));
        s = i % 2 == 0 ? G.add(s, delta.back()) : G.sub(s, delta.back());
    }
    if (!s.is_zero()) return std::nullopt;
    return delta;
}

SimplexDatum twist_by(const FinAbelianGroup& G, const SimplexDatum& g, const GroupElement& gamma) {
    SimplexDatum out = g;
    out.twists.back() = G.sub(out.twists.back(), gamma);
    return out;
}

// ---------------------------------------------------------------- json

namespace {

json face_to_json(const Polygroupoid& H, const AbstractFace& f) {
    return {{"id", f.id}, {"config", config_key(f.config)}, {"selector", H.id(f.selector)}};
}

AbstractFace face_from_json(const Polygroupoid& H, const json& j) {
    return {j.at("id").get<std::string>(), parse_config_key(j.at("config").get<std::string>()),
            H.at(j.at("selector").get<std::string>())};
}

GroupElement element_from_json(const FinAbelianGroup& G, const json& j) {
    auto coords = j.get<std::vector<std::int64_t>>();
    if (coords.size() != G.rank()) throw FormatError("group element has the wrong number of coordinates");
    return G.reduce(std::move(coords));
}

std::string pair_key(std::size_t i, std::size_t j) { return std::to_string(i) + "," + std::to_string(j); }

}  // namespace

json simplex_to_json(const Polygroupoid& H, const SimplexDatum& g) {
    json faces = json::array();
    for (const auto& f : g.faces) faces.push_back(face_to_json(H, f));
    return {{"vertices", g.vertices}, {"faces", faces}, {"twists", coords_list(g.twists)}};
}

SimplexDatum simplex_from_json(const Polygroupoid& H, const FinAbelianGroup& G, const json& j) {
    try {
        SimplexDatum g;
        g.vertices = j.at("vertices").get<Config>();
        for (const auto& f : j.at("faces")) g.faces.push_back(face_from_json(H, f));
        for (const auto& t : j.at("twists")) g.twists.push_back(element_from_json(G, t));
        return g;
    } catch (const json::exception& e) {
        throw FormatError(std::string("simplex JSON: ") + e.what());
    }
}

json cosimplex_to_json(const Polygroupoid& H, const CoSimplexDatum& h) {
    json pairs = json::object();
    for (const auto& [ij, e] : h.pairs)
        pairs[pair_key(ij.first, ij.second)] = {{"face", face_to_json(H, e.face)}, {"twist", e.twist.coords()}};
    return {{"vertices", h.vertices}, {"pairs", pairs}};
}

CoSimplexDatum cosimplex_from_json(const Polygroupoid& H, const FinAbelianGroup& G, const json& j) {
    try {
        CoSimplexDatum h;
        h.vertices = j.at("vertices").get<Config>();
        for (std::size_t b = 1; b < h.vertices.size(); ++b)
            for (std::size_t a = 0; a < b; ++a) {
                const json& e = j.at("pairs").at(pair_key(a, b));
                h.pairs[{a, b}] = {face_from_json(H, e.at("face")), element_from_json(G, e.at("twist"))};
            }
        return h;
    } catch (const json::exception& e) {
        throw FormatError(std::string("cosimplex JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------- verdict

json Verdict::to_json() const {
    json stages_json = json::object();
    for (const auto& c : stages.checks()) {
        json s{{"passed", c.passed}, {"detail", c.detail}};
        if (!c.passed) s["witness"] = c.counterexample;
        stages_json[c.name] = s;
    }
    json j{{"passed", passed()}, {"stages", stages_json}, {"isomorphic", isomorphic}};
    j["group"] = group ? group_to_json(*group) : json(nullptr);
    j["pocket_group"] = pocket_group ? group_to_json(*pocket_group) : json(nullptr);
    return j;
}

namespace {

struct Pairs {
    std::vector<std::pair<std::size_t, std::size_t>> list;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;

    explicit Pairs(std::size_t k) {
        for (std::size_t j = 1; j < k; ++j)
            for (std::size_t i = 0; i < j; ++i) {
                index[{i, j}] = list.size();
                list.push_back({i, j});
            }
    }
};

std::vector<GroupElement> random_twists(Rng& rng, const FinAbelianGroup& G, std::size_t count) {
    std::vector<GroupElement> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(G.element(rng.below(G.order())));
    return out;
}

std::string plural(std::size_t k, const std::string& what) {
    if (k == 1) return "1 " + what;
    if (what.back() == 'y') return std::to_string(k) + " " + what.substr(0, what.size() - 1) + "ies";
    if (what.size() > 2 && what.compare(what.size() - 2, 2, "ex") == 0)
        return std::to_string(k) + " " + what.substr(0, what.size() - 2) + "ices";
    return std::to_string(k) + " " + what + "s";
}

void stage_axioms(const Polygroupoid& H, AxiomReport& out) {
    AxiomReport r = check_axioms(H);
    if (r.passed()) r.merge(check_associativity(H));
    if (const Check* bad = r.first_failure()) {
        out.fail("axioms", bad->name + ": " + bad->detail, {{"check", bad->name}, {"counterexample", bad->counterexample}});
        return;
    }
    out.pass("axioms", plural(r.checks().size(), "check") + " passed");
}

std::optional<Extraction> stage_extract(const Polygroupoid& H, AxiomReport& out) {
    try {
        Extraction ex = extract(H);
        const AxiomReport r = verify_action(H, ex.action);
        if (const Check* bad = r.first_failure()) {
            out.fail("extract", bad->name + ": " + bad->detail, {{"check", bad->name}, {"counterexample", bad->counterexample}});
            return std::nullopt;
        }
        out.pass("extract", "binding group " + ex.group.to_string() + ", action verified");
        return ex;
    } catch (const ExtractionError& e) {
        out.fail("extract", e.what(), {{"extraction", e.witness()}});
    } catch (const std::invalid_argument& e) {
        out.fail("extract", e.what(), {{"extraction", nullptr}});
    }
    return std::nullopt;
}

// epsilon of the co_faces of one cosimplex given by embedded pair elements;
// false with `why` set when some co_face has no unique completion
bool boundary_sum(const Polygroupoid& H, const ActionTable& act, const Pairs& P, std::size_t k,
                  const std::vector<ElemId>& emb, std::vector<std::size_t>& eps, std::size_t& sum, std::size_t& skipped,
                  const std::vector<std::vector<std::size_t>>& add, const std::vector<std::size_t>& neg) {
    eps.assign(k, 0);
    sum = 0;
    Tuple t(k - 1);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t q = 0; q + 1 < k; ++q) {
            const std::size_t m = q < j ? q : q + 1;
            t[q] = emb[P.index.at({std::min(j, m), std::max(j, m)})];
        }
        if (!is_compatible(H, t)) {
            ++skipped;
            return true;
        }
        const auto c = epsilon_candidates(H, act, t);
        if (c.size() != 1) return false;
        eps[j] = c[0];
        sum = add[sum][j % 2 == 0 ? c[0] : neg[c[0]]];
    }
    return true;
}

void stage_well_defined(const Polygroupoid& H, const ActionTable& act, const VerdictOptions& opt, AxiomReport& out) {
    const FinAbelianGroup& G = act.group;
    const std::size_t k = H.arity() + 2;
    const auto windows = subsets(H.vertices(), k);
    if (windows.empty()) {
        out.pass("well_defined", "no (n+2)-configurations");
        return;
    }
    const Pairs P(k);
    const std::size_t order = G.order();
    std::size_t total = 1;
    bool exhaustive = true;
    for (std::size_t p = 0; p < P.list.size() && exhaustive; ++p) {
        total *= order;
        if (total > opt.exhaustive_limit) exhaustive = false;
    }
    const std::size_t per_window = exhaustive ? total : (opt.samples + windows.size() - 1) / windows.size();

    const auto els = G.elements();
    std::vector<std::vector<std::size_t>> add(order, std::vector<std::size_t>(order));
    std::vector<std::size_t> neg(order);
    for (std::size_t a = 0; a < order; ++a) {
        neg[a] = G.index_of(G.negate(els[a]));
        for (std::size_t b = 0; b < order; ++b) add[a][b] = G.index_of(G.add(els[a], els[b]));
    }

    Rng rng(opt.seed);
    std::size_t checked = 0, skipped = 0;
    std::vector<std::size_t> tw(P.list.size()), eps;
    std::vector<ElemId> emb(P.list.size());
    for (const auto& w : windows) {
        std::vector<ElemId> sel;
        for (const auto& [i, j] : P.list) sel.push_back(default_face(H, drop_vertex(drop_vertex(w, j), i)).selector);
        std::fill(tw.begin(), tw.end(), 0);
        for (std::size_t s = 0; s < per_window; ++s) {
            if (exhaustive) {
                if (s > 0) {
                    std::size_t p = 0;
                    while (p < tw.size() && ++tw[p] == order) tw[p++] = 0;
                }
            } else {
                for (auto& x : tw) x = rng.below(order);
            }
            for (std::size_t p = 0; p < tw.size(); ++p) emb[p] = act.table[tw[p]][sel[p]];
            std::size_t sum = 0;
            const std::size_t skipped_before = skipped;
            const bool ok = boundary_sum(H, act, P, k, emb, eps, sum, skipped, add, neg);
            if (skipped != skipped_before) continue;
            ++checked;
            if (!ok || sum != 0) {
                std::map<std::pair<std::size_t, std::size_t>, GroupElement> twists;
                for (std::size_t p = 0; p < tw.size(); ++p) twists[P.list[p]] = els[tw[p]];
                json witness{{"cosimplex", cosimplex_to_json(H, make_cosimplex(H, w, twists))}};
                if (ok) {
                    json e = json::array();
                    for (auto x : eps) e.push_back(els[x].coords());
                    witness["epsilons"] = e;
                }
                out.fail("well_defined", ok ? "epsilon does not vanish on a boundary" : "epsilon undefined on a face",
                         witness);
                return;
            }
        }
    }
    if (checked == 0) {
        out.fail("well_defined", "no compatible cosimplex was found", {{"skipped", skipped}});
        return;
    }
    out.pass("well_defined", plural(checked, "boundary") + (exhaustive ? " (exhaustive)" : " (sampled)") + " over " +
                                 plural(windows.size(), "configuration") +
                                 (skipped ? ", " + std::to_string(skipped) + " incompatible skipped" : ""));
}

// epsilon of g, or nullopt when its embedded tuple is not compatible
std::optional<GroupElement> epsilon_if_compatible(const Polygroupoid& H, const ActionTable& act, const SimplexDatum& g) {
    if (!is_compatible(H, g.embedded(act))) return std::nullopt;
    return epsilon(H, act, g);
}

std::vector<std::vector<GroupElement>> all_twists(const FinAbelianGroup& G, std::size_t slots) {
    std::vector<std::vector<GroupElement>> out;
    const auto els = G.elements();
    std::vector<std::size_t> idx(slots, 0);
    for (;;) {
        std::vector<GroupElement> t;
        for (auto i : idx) t.push_back(els[i]);
        out.push_back(std::move(t));
        std::size_t p = 0;
        while (p < slots && ++idx[p] == els.size()) idx[p++] = 0;
        if (p == slots) break;
    }
    return out;
}

void stage_injective(const Polygroupoid& H, const ActionTable& act, const VerdictOptions& opt, AxiomReport& out) {
    const FinAbelianGroup& G = act.group;
    const std::size_t k = H.arity() + 1;
    const auto variants = all_twists(G, k);
    Rng rng(opt.seed + 1);
    std::size_t compared = 0;
    for (const auto& c : subsets(H.vertices(), k)) {
        std::vector<std::vector<GroupElement>> bases{std::vector<GroupElement>(k, G.zero())};
        for (int b = 0; b < 3; ++b) bases.push_back(random_twists(rng, G, k));
        for (const auto& bt : bases) {
            const SimplexDatum g = make_simplex(H, c, bt);
            const auto e = epsilon_if_compatible(H, act, g);
            if (!e) continue;
            for (const auto& vt : variants) {
                const SimplexDatum g2 = make_simplex(H, c, vt);
                const auto e2 = epsilon_if_compatible(H, act, g2);
                if (!e2) continue;
                ++compared;
                const bool iso = natural_iso(G, g, g2).has_value();
                if ((*e == *e2) != iso) {
                    out.fail("injective", "epsilon equality disagrees with natural isomorphism",
                             {{"simplices", {simplex_to_json(H, g), simplex_to_json(H, g2)}},
                              {"epsilons", {e->coords(), e2->coords()}},
                              {"natural_iso", iso}});
                    return;
                }
            }
        }
    }
    if (compared == 0) {
        out.fail("injective", "no compatible simplex pair was found", json::object());
        return;
    }
    out.pass("injective", plural(compared, "simplex pair") + " compared");
}

void stage_surjective(const Polygroupoid& H, const ActionTable& act, const VerdictOptions& opt, AxiomReport& out) {
    const FinAbelianGroup& G = act.group;
    const std::size_t k = H.arity() + 1;
    const auto els = G.elements();
    Rng rng(opt.seed + 2);
    std::size_t bases = 0;
    for (const auto& c : subsets(H.vertices(), k)) {
        for (const auto& bt : {std::vector<GroupElement>(k, G.zero()), random_twists(rng, G, k)}) {
            const SimplexDatum g = make_simplex(H, c, bt);
            const auto e = epsilon_if_compatible(H, act, g);
            if (!e) continue;
            ++bases;
            std::set<GroupElement> reached;
            for (const auto& gamma : els) {
                const SimplexDatum g2 = twist_by(G, g, gamma);
                const auto e2 = epsilon_if_compatible(H, act, g2);
                const GroupElement diff = e2 ? G.sub(*e2, *e) : G.zero();
                if (!e2 || !(diff == gamma)) {
                    json w{{"simplex", simplex_to_json(H, g)}, {"gamma", gamma.coords()}};
                    if (e2) w["difference"] = diff.coords();
                    out.fail("surjective", e2 ? "twisting by gamma does not shift epsilon by gamma"
                                              : "twisted simplex is incompatible",
                             w);
                    return;
                }
                reached.insert(diff);
            }
            if (reached.size() != els.size()) {
                out.fail("surjective", "twists miss part of the group", {{"simplex", simplex_to_json(H, g)}});
                return;
            }
        }
    }
    if (bases == 0) {
        out.fail("surjective", "no compatible simplex was found", json::object());
        return;
    }
    out.pass("surjective", "every group element is reached from " + plural(bases, "simplex"));
}

std::optional<FinAbelianGroup> stage_pocket_group(const Polygroupoid& H, const ActionTable& act, AxiomReport& out) {
    const FinAbelianGroup& G = act.group;
    const std::size_t k = H.arity() + 1;
    const std::size_t r = G.rank();
    const auto& d = G.invariant_factors();
    const Config c = subsets(H.vertices(), k).front();
    const SimplexDatum g = make_simplex(H, c, std::vector<GroupElement>(k, G.zero()));

    // G^{n+1}: generator (slot i, factor f) is column i*r + f
    std::vector<std::vector<Integer>> rows;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t f = 0; f < r; ++f) {
            std::vector<Integer> row(k * r, 0);
            row[i * r + f] = d[f];
            rows.push_back(row);
        }
    // pockets whose twists differ by the same basis vector on adjacent faces are
    // naturally isomorphic
    for (std::size_t i = 0; i + 1 < k; ++i)
        for (std::size_t f = 0; f < r; ++f) {
            std::vector<std::int64_t> e(r, 0);
            e[f] = 1;
            std::vector<GroupElement> t(k, G.zero());
            t[i] = t[i + 1] = GroupElement(e);
            if (!natural_iso(G, g, make_simplex(H, c, t))) {
                out.fail("pocket_group", "adjacent twist pair is not a natural isomorphism",
                         {{"twists", coords_list(t)}});
                return std::nullopt;
            }
            std::vector<Integer> row(k * r, 0);
            row[i * r + f] = 1;
            row[(i + 1) * r + f] = 1;
            rows.push_back(row);
        }
    const FinAbelianGroup pocket = quotient_group(IntMatrix::from_rows(rows, k * r));

    // the relations generate every natural isomorphism: compare orders
    const std::size_t cells = [&] {
        std::size_t x = 1;
        for (std::size_t i = 0; i < k; ++i) x *= G.order();
        return x;
    }();
    if (cells <= 100000) {
        std::size_t trivial = 0;
        for (const auto& t : all_twists(G, k)) trivial += natural_iso(G, g, make_simplex(H, c, t)).has_value();
        if (trivial * pocket.order() != cells) {
            out.fail("pocket_group", "natural isomorphisms are not generated by adjacent pairs",
                     {{"pocket_group", group_to_json(pocket)}, {"trivial_pockets", trivial}});
            return std::nullopt;
        }
    }
    if (!iso_check(pocket, G)) {
        out.fail("pocket_group", "pocket group " + pocket.to_string() + " differs from " + G.to_string(),
                 {{"pocket_group", group_to_json(pocket)}, {"group", group_to_json(G)}});
        return pocket;
    }
    out.pass("pocket_group", pocket.to_string());
    return pocket;
}

}  // namespace

Verdict verdict(const Polygroupoid& H, const VerdictOptions& options) {
    Verdict v;
    stage_axioms(H, v.stages);
    if (!v.stages.passed()) return v;
    auto ex = stage_extract(H, v.stages);
    if (!ex) return v;
    v.group = ex->group;
    stage_well_defined(H, ex->action, options, v.stages);
    stage_injective(H, ex->action, options, v.stages);
    stage_surjective(H, ex->action, options, v.stages);
    v.pocket_group = stage_pocket_group(H, ex->action, v.stages);
    v.isomorphic = v.pocket_group && iso_check(*v.pocket_group, *v.group);
    return v;
}

bool verdict_witness_refails(const Polygroupoid& H, const Check& failed) {
    if (failed.passed) return false;
    const json& w = failed.counterexample;
    try {
        if (failed.name == "axioms")
            return counterexample_refails(H, Check{w.at("check").get<std::string>(), false, "", w.at("counterexample")});
        if (failed.name == "extract") {
            if (w.contains("extraction")) {
                try {
                    extract(H);
                    return false;
                } catch (const std::invalid_argument&) {
                    return true;
                }
            }
            const Extraction ex = extract(H);
            return action_counterexample_refails(
                H, ex.action, Check{w.at("check").get<std::string>(), false, "", w.at("counterexample")});
        }
        const Extraction ex = extract(H);
        const FinAbelianGroup& G = ex.group;
        if (failed.name == "well_defined") {
            const CoSimplexDatum h = cosimplex_from_json(H, G, w.at("cosimplex"));
            try {
                return !check_boundary_zero(H, ex.action, h);
            } catch (const HurewiczError&) {
                return true;
            }
        }
        if (failed.name == "injective") {
            const SimplexDatum g = simplex_from_json(H, G, w.at("simplices").at(0));
            const SimplexDatum g2 = simplex_from_json(H, G, w.at("simplices").at(1));
            return (epsilon(H, ex.action, g) == epsilon(H, ex.action, g2)) != natural_iso(G, g, g2).has_value();
        }
        if (failed.name == "surjective") {
            const SimplexDatum g = simplex_from_json(H, G, w.at("simplex"));
            const GroupElement gamma = G.reduce(w.at("gamma").get<std::vector<std::int64_t>>());
            try {
                return !(G.sub(epsilon(H, ex.action, twist_by(G, g, gamma)), epsilon(H, ex.action, g)) == gamma);
            } catch (const HurewiczError&) {
                return true;
            }
        }
        if (failed.name == "pocket_group") return !verdict(H).passed();
    } catch (const std::exception&) {
        return false;
    }
    return false;
}

}  // namespace polyhom
