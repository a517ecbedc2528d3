#include "polyhom/binding.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "polyhom/json_io.hpp"

namespace polyhom {

using nlohmann::json;

namespace {

class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // the smaller root wins, so the partition does not depend on merge order
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

  private:
    std::vector<std::size_t> parent_;
};

std::size_t position_of(const Config& c, Vertex v) {
    return static_cast<std::size_t>(std::find(c.begin(), c.end(), v) - c.begin());
}

json pair_json(const Polygroupoid& H, const TransportClasses& tc, std::size_t pair) {
    const std::size_t m = tc.fiber.size();
    return json::array({H.id(tc.fiber[pair / m]), H.id(tc.fiber[pair % m])});
}

void validate_top_config(const Polygroupoid& H, const Config& z) {
    if (z.size() != H.arity())
        throw std::invalid_argument("expected a configuration of " + std::to_string(H.arity()) + " vertices");
    if (H.fiber(z).empty()) throw std::invalid_argument("no fiber over " + config_key(z));
}

// (n+1)-configuration -> indices into H.q()
std::map<Config, std::vector<std::size_t>> q_by_config(const Polygroupoid& H) {
    std::map<Config, std::vector<std::size_t>> out;
    for (std::size_t k = 0; k < H.q().size(); ++k)
        if (auto c = H.tuple_config(H.q()[k])) out[*c].push_back(k);
    return out;
}

// index arithmetic on a finite group
struct IndexGroup {
    std::size_t order = 0;
    std::vector<std::vector<std::size_t>> add;
    std::vector<std::size_t> neg;

    explicit IndexGroup(const FinAbelianGroup& G) : order(G.order()), add(order, std::vector<std::size_t>(order)), neg(order) {
        const auto els = G.elements();
        for (std::size_t a = 0; a < order; ++a) {
            neg[a] = G.index_of(G.negate(els[a]));
            for (std::size_t b = 0; b < order; ++b) add[a][b] = G.index_of(G.add(els[a], els[b]));
        }
    }

    // sum over 0-based slots k of (-1)^(k+1) g_k
    std::size_t signed_sum(const std::vector<std::size_t>& g) const {
        std::size_t s = 0;
        for (std::size_t k = 0; k < g.size(); ++k) s = add[s][k % 2 == 0 ? neg[g[k]] : g[k]];
        return s;
    }
};

}  // namespace

TransportClasses transport_classes(const Polygroupoid& H, const Config& z) {
    validate_top_config(H, z);
    TransportClasses tc;
    tc.z = z;
    tc.fiber = H.fiber(z);
    const std::size_t m = tc.fiber.size();
    std::map<ElemId, std::size_t> pos;
    for (std::size_t a = 0; a < m; ++a) pos[tc.fiber[a]] = a;

    UnionFind uf(m * m);
    // all pairs generated by the same (u, u') are identified
    std::map<std::pair<ElemId, ElemId>, std::size_t> first;
    for (Vertex v : H.vertices()) {
        if (std::binary_search(z.begin(), z.end(), v)) continue;
        Config c = z;
        c.insert(std::upper_bound(c.begin(), c.end(), v), v);
        const std::size_t open = position_of(c, v);
        std::vector<Tuple> horns;
        for_each_horn(H, c, open, [&](const Tuple& w) { horns.push_back(w); });
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (j == open) continue;
            const auto& alternatives = H.fiber(drop_vertex(c, j));
            for (const Tuple& w : horns) {
                auto x = H.unique_filler(w, open);
                if (!x) continue;
                for (ElemId u2 : alternatives) {
                    Tuple w2 = w;
                    w2[j] = u2;
                    if (!is_partially_compatible(H, w2, open)) continue;
                    auto x2 = H.unique_filler(w2, open);
                    if (!x2) continue;
                    const std::size_t pair = pos.at(*x) * m + pos.at(*x2);
                    auto [it, fresh] = first.emplace(std::make_pair(w[j], u2), pair);
                    if (!fresh) uf.unite(it->second, pair);
                }
            }
        }
    }

    tc.class_of.assign(m * m, 0);
    std::map<std::size_t, std::size_t> number;
    for (std::size_t p = 0; p < m * m; ++p) {
        auto [it, fresh] = number.emplace(uf.find(p), number.size());
        tc.class_of[p] = it->second;
    }
    tc.count = number.size();
    return tc;
}

Extraction extract(const Polygroupoid& H, const Config& z) {
    if (H.vertices().size() < H.arity() + 1) throw std::invalid_argument("extraction needs at least n+1 vertices");
    TransportClasses tc = transport_classes(H, z);
    const std::size_t m = tc.fiber.size();
    auto cls = [&](std::size_t a, std::size_t b) { return tc.class_of[a * m + b]; };

    const std::size_t zero = cls(0, 0);
    for (std::size_t p = 0; p < m * m; ++p) {
        const bool diagonal = p / m == p % m;
        if (diagonal != (tc.class_of[p] == zero))
            throw ExtractionError("the identity class is not the diagonal",
                                  {{"pairs", json::array({pair_json(H, tc, 0), pair_json(H, tc, p)})}});
    }

    // step[K][a] = b with (a, b) in class K
    std::vector<std::vector<std::size_t>> step(tc.count, std::vector<std::size_t>(m, m));
    for (std::size_t p = 0; p < m * m; ++p) {
        auto& slot = step[tc.class_of[p]][p / m];
        if (slot != m)
            throw ExtractionError("a class holds two pairs with the same first entry",
                                  {{"pairs", json::array({pair_json(H, tc, (p / m) * m + slot), pair_json(H, tc, p)})}});
        slot = p % m;
    }
    for (std::size_t K = 0; K < tc.count; ++K)
        for (std::size_t a = 0; a < m; ++a)
            if (step[K][a] == m) {
                std::size_t some = 0;
                while (tc.class_of[some] != K) ++some;
                throw ExtractionError("a class has no pair starting at " + H.id(tc.fiber[a]),
                                      {{"pairs", json::array({pair_json(H, tc, some)})}, {"start", H.id(tc.fiber[a])}});
            }

    // [(w,w')] + [(w',w'')] = [(w,w'')], independent of w
    std::vector<std::vector<std::size_t>> add(tc.count, std::vector<std::size_t>(tc.count));
    for (std::size_t K = 0; K < tc.count; ++K)
        for (std::size_t L = 0; L < tc.count; ++L) {
            add[K][L] = cls(0, step[L][step[K][0]]);
            for (std::size_t a = 1; a < m; ++a) {
                const std::size_t b = step[K][a], c = step[L][b];
                if (cls(a, c) != add[K][L])
                    throw ExtractionError("the difference law is not well defined",
                                          {{"pairs", json::array({pair_json(H, tc, a * m + b), pair_json(H, tc, b * m + c),
                                                      pair_json(H, tc, a * m + c)})},
                                           {"expected_class_of", pair_json(H, tc, step[L][step[K][0]])}});
            }
        }

    TableGroup tg;
    try {
        tg = group_from_table(add, zero);
    } catch (const std::invalid_argument& e) {
        throw ExtractionError(std::string("transport classes do not form an abelian group: ") + e.what(),
                              {{"z", config_key(z)}});
    }

    Extraction out;
    out.group = tg.group;
    out.classes = tc;
    const std::size_t order = out.group.order();
    out.class_group_index.resize(tc.count);
    for (std::size_t K = 0; K < tc.count; ++K) out.class_group_index[K] = out.group.index_of(tg.coords[K]);
    IndexGroup ig(out.group);

    ActionTable& act = out.action;
    act.group = out.group;
    act.table.assign(order, std::vector<ElemId>(H.size(), kNoElem));
    for (std::size_t K = 0; K < tc.count; ++K)
        for (std::size_t a = 0; a < m; ++a) act.table[out.class_group_index[K]][tc.fiber[a]] = tc.fiber[step[K][a]];

    // carry the action across each (n+1)-configuration: with gamma at slot j and
    // delta at slot i, the law asks delta = -(-1)^(i+j) gamma
    const auto by_config = q_by_config(H);
    std::set<Config> known{z};
    std::deque<Config> queue{z};
    while (!queue.empty()) {
        const Config a = queue.front();
        queue.pop_front();
        for (Vertex v : H.vertices()) {
            if (std::binary_search(a.begin(), a.end(), v)) continue;
            Config c = a;
            c.insert(std::upper_bound(c.begin(), c.end(), v), v);
            const std::size_t i = position_of(c, v);
            auto qit = by_config.find(c);
            for (std::size_t j = 0; j < c.size(); ++j) {
                if (j == i) continue;
                const Config b = drop_vertex(c, j);
                if (known.count(b)) continue;
                if (qit == by_config.end())
                    throw ExtractionError("no Q tuples over " + config_key(c), {{"config", config_key(c)}});
                for (std::size_t k : qit->second) {
                    const Tuple& t = H.q()[k];
                    for (std::size_t g = 0; g < order; ++g) {
                        const std::size_t delta = (i + j) % 2 == 0 ? ig.neg[g] : g;
                        Tuple moved = t;
                        moved[i] = act.table[delta][t[i]];
                        auto y = H.unique_filler(moved, j);
                        if (!y)
                            throw ExtractionError("no unique filler while carrying the action",
                                                  {{"tuple", H.ids(t)}, {"slot", j + 1}});
                        ElemId& cell = act.table[g][t[j]];
                        if (cell == kNoElem) {
                            cell = *y;
                        } else if (cell != *y) {
                            throw ExtractionError("the carried action depends on the witness tuple",
                                                  {{"element", H.id(t[j])},
                                                   {"gamma", out.group.element(g).coords()},
                                                   {"images", {H.id(cell), H.id(*y)}},
                                                   {"tuple", H.ids(t)}});
                        }
                    }
                }
                for (ElemId e : H.fiber(b))
                    for (std::size_t g = 0; g < order; ++g)
                        if (act.table[g][e] == kNoElem)
                            throw ExtractionError(H.id(e) + " lies in no Q tuple over " + config_key(c),
                                                  {{"element", H.id(e)}, {"config", config_key(c)}});
                known.insert(b);
                queue.push_back(b);
            }
        }
    }
    for (const auto& b : H.configs(H.arity()))
        if (!known.count(b))
            throw ExtractionError("the action cannot reach " + config_key(b), {{"config", config_key(b)}});
    return out;
}

Extraction extract(const Polygroupoid& H) {
    if (H.vertices().size() < H.arity()) throw std::invalid_argument("too few vertices");
    return extract(H, Config(H.vertices().begin(), H.vertices().begin() + static_cast<std::ptrdiff_t>(H.arity())));
}

ActionTable translation_action(const Polygroupoid& H, const FinAbelianGroup& G) {
    ActionTable act;
    act.group = G;
    const auto els = G.elements();
    act.table.assign(els.size(), std::vector<ElemId>(H.size(), kNoElem));
    for (const auto& c : H.configs(H.arity())) {
        for (std::size_t x = 0; x < els.size(); ++x) {
            const ElemId e = H.at(standard_id(G, c, els[x]));
            for (std::size_t g = 0; g < els.size(); ++g)
                act.table[g][e] = H.at(standard_id(G, c, G.add(els[g], els[x])));
        }
    }
    return act;
}

// ---------------------------------------------------------------- verification

namespace {

bool is_top(const Polygroupoid& H, ElemId e) { return H.element(e).sort == H.arity(); }

std::optional<json> shape_defect(const Polygroupoid& H, const ActionTable& act) {
    if (!act.group.is_finite()) return json{{"group", act.group.to_string()}};
    if (act.table.size() != act.group.order()) return json{{"rows", act.table.size()}, {"order", act.group.order()}};
    for (std::size_t g = 0; g < act.table.size(); ++g) {
        if (act.table[g].size() != H.size()) return json{{"gamma", act.group.element(g).coords()}, {"columns", act.table[g].size()}};
        for (ElemId e = 0; e < H.size(); ++e) {
            const ElemId y = act.table[g][e];
            const bool ok = is_top(H, e) ? (y < H.size() && H.element(y).config == H.element(e).config) : y == kNoElem;
            if (!ok) return json{{"gamma", act.group.element(g).coords()}, {"element", H.id(e)}};
        }
    }
    return std::nullopt;
}

bool law_fails(const Polygroupoid& H, const ActionTable& act, const IndexGroup& ig, const Tuple& t,
               const std::vector<std::size_t>& gammas, bool& in_q, bool& sum_zero) {
    Tuple moved(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) moved[k] = act.table[gammas[k]][t[k]];
    in_q = H.has_q(moved);
    sum_zero = ig.signed_sum(gammas) == 0;
    return in_q != sum_zero;
}

std::vector<std::size_t> gamma_indices(const FinAbelianGroup& G, const json& list) {
    std::vector<std::size_t> out;
    for (const auto& g : list) out.push_back(G.index_of(G.reduce(g.get<std::vector<std::int64_t>>())));
    return out;
}

}  // namespace

AxiomReport verify_action(const Polygroupoid& H, const ActionTable& act) {
    AxiomReport r;
    if (auto bad = shape_defect(H, act)) {
        r.fail("action-shape", "action table does not fit the polygroupoid", *bad);
        return r;
    }
    r.pass("action-shape");
    const FinAbelianGroup& G = act.group;
    const std::size_t order = G.order();
    const IndexGroup ig(G);
    std::vector<ElemId> top;
    for (ElemId e = 0; e < H.size(); ++e)
        if (is_top(H, e)) top.push_back(e);

    {
        std::optional<json> bad;
        for (ElemId e : top)
            if (act.table[0][e] != e) {
                bad = json{{"element", H.id(e)}, {"image", H.id(act.table[0][e])}};
                break;
            }
        if (bad)
            r.fail("action-identity", "0 moves an element", *bad);
        else
            r.pass("action-identity");
    }
    {
        std::optional<json> bad;
        for (std::size_t g = 0; g < order && !bad; ++g)
            for (std::size_t h = 0; h < order && !bad; ++h)
                for (ElemId e : top)
                    if (act.table[ig.add[g][h]][e] != act.table[g][act.table[h][e]]) {
                        bad = json{{"gammas", {G.element(g).coords(), G.element(h).coords()}}, {"element", H.id(e)}};
                        break;
                    }
        if (bad)
            r.fail("action-composition", "(g+h).w differs from g.(h.w)", *bad);
        else
            r.pass("action-composition", std::to_string(order * order * top.size()) + " products");
    }
    {
        std::optional<json> bad;
        for (ElemId e : top) {
            std::map<ElemId, std::size_t> seen;
            for (std::size_t g = 0; g < order && !bad; ++g) {
                auto [it, fresh] = seen.emplace(act.table[g][e], g);
                if (!fresh)
                    bad = json{{"element", H.id(e)},
                               {"gammas", {G.element(it->second).coords(), G.element(g).coords()}},
                               {"image", H.id(act.table[g][e])}};
            }
            if (!bad)
                for (ElemId y : H.fiber(H.element(e).config))
                    if (!seen.count(y)) {
                        bad = json{{"element", H.id(e)}, {"target", H.id(y)}};
                        break;
                    }
            if (bad) break;
        }
        if (bad)
            r.fail("regularity", "some fiber is not a torsor", *bad);
        else
            r.pass("regularity", std::to_string(top.size()) + " elements");
    }
    {
        std::optional<json> bad;
        std::size_t checked = 0;
        for (const Tuple& t : H.q()) {
            std::vector<std::size_t> gammas(t.size(), 0);
            for (;;) {
                bool in_q = false, sum_zero = false;
                ++checked;
                if (law_fails(H, act, ig, t, gammas, in_q, sum_zero)) {
                    json gs = json::array();
                    for (auto g : gammas) gs.push_back(G.element(g).coords());
                    bad = json{{"tuple", H.ids(t)}, {"gammas", gs}, {"in_q", in_q}, {"sum_zero", sum_zero}};
                    break;
                }
                std::size_t k = 0;
                while (k < gammas.size() && ++gammas[k] == order) gammas[k++] = 0;
                if (k == gammas.size()) break;
            }
            if (bad) break;
        }
        if (bad)
            r.fail("action-law", "Q(g.w) disagrees with the alternating sum", *bad);
        else
            r.pass("action-law", std::to_string(checked) + " twisted tuples");
    }
    return r;
}

bool action_counterexample_refails(const Polygroupoid& H, const ActionTable& act, const Check& failed) {
    if (failed.passed) return false;
    const json& cx = failed.counterexample;
    try {
        if (failed.name == "action-shape") return shape_defect(H, act).has_value();
        if (shape_defect(H, act)) return false;
        const FinAbelianGroup& G = act.group;
        if (failed.name == "action-identity") {
            const ElemId e = H.at(cx.at("element").get<std::string>());
            return act.table[0][e] != e;
        }
        if (failed.name == "action-composition") {
            const auto g = gamma_indices(G, cx.at("gammas"));
            const ElemId e = H.at(cx.at("element").get<std::string>());
            const std::size_t sum = G.index_of(G.add(G.element(g.at(0)), G.element(g.at(1))));
            return act.table[sum][e] != act.table[g[0]][act.table[g[1]][e]];
        }
        if (failed.name == "regularity") {
            const ElemId e = H.at(cx.at("element").get<std::string>());
            if (cx.contains("target")) {
                const ElemId y = H.at(cx.at("target").get<std::string>());
                for (std::size_t g = 0; g < act.table.size(); ++g)
                    if (act.table[g][e] == y) return false;
                return true;
            }
            const auto g = gamma_indices(G, cx.at("gammas"));
            return g.at(0) != g.at(1) && act.table[g[0]][e] == act.table[g[1]][e];
        }
        if (failed.name == "action-law") {
            const Tuple t = H.lookup(cx.at("tuple").get<std::vector<std::string>>());
            const auto gammas = gamma_indices(G, cx.at("gammas"));
            if (!H.has_q(t) || gammas.size() != t.size()) return false;
            bool in_q = false, sum_zero = false;
            return law_fails(H, act, IndexGroup(G), t, gammas, in_q, sum_zero);
        }
    } catch (const std::exception&) {
        return false;
    }
    return false;
}

json action_to_json(const Polygroupoid& H, const ActionTable& act) {
    json action = json::object();
    const auto els = act.group.elements();
    for (const auto& c : H.configs(H.arity())) {
        json per = json::object();
        for (ElemId e : H.fiber(c)) {
            json row = json::object();
            for (std::size_t g = 0; g < els.size(); ++g) row[els[g].key()] = H.id(act.table[g][e]);
            per[H.id(e)] = row;
        }
        action[config_key(c)] = per;
    }
    return {{"group", group_to_json(act.group)}, {"action", action}};
}

ActionTable action_from_json(const Polygroupoid& H, const json& j) {
    try {
        ActionTable act;
        act.group = group_from_json(j.at("group"));
        const auto els = act.group.elements();
        std::map<std::string, std::size_t> index;
        for (std::size_t g = 0; g < els.size(); ++g) index[els[g].key()] = g;
        act.table.assign(els.size(), std::vector<ElemId>(H.size(), kNoElem));
        for (const auto& [ck, per] : j.at("action").items()) {
            for (const auto& [id, row] : per.items()) {
                const ElemId e = H.at(id);
                if (config_key(H.element(e).config) != ck)
                    throw FormatError("action entry " + id + " is filed under " + ck);
                for (const auto& [gk, target] : row.items()) {
                    auto it = index.find(gk);
                    if (it == index.end()) throw FormatError("unknown group element \"" + gk + "\"");
                    act.table[it->second][e] = H.at(target.get<std::string>());
                }
            }
        }
        return act;
    } catch (const json::exception& e) {
        throw FormatError(std::string("action JSON: ") + e.what());
    }
}

ActionTable tamper_action(const ActionTable& act, std::size_t g, ElemId e, ElemId target) {
    ActionTable out = act;
    auto& row = out.table.at(g);
    const ElemId old = row.at(e);
    for (ElemId x = 0; x < row.size(); ++x)
        if (row[x] == target) {
            row[x] = old;
            break;
        }
    row[e] = target;
    return out;
}

}  // namespace polyhom
