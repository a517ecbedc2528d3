#include "doctest.h"

#include "polyhom/rng.hpp"
#include "polyhom/tower.hpp"

using namespace polyhom;

namespace {

FinAbelianGroup Z(std::int64_t n) { return FinAbelianGroup::cyclic(n); }

GroupTower z8_chain() { return chain_group_tower({Z(8), Z(4), Z(2)}, reduction_bonds({8, 4, 2})); }

// top, two middle nodes, bottom
GroupTower diamond(const FinAbelianGroup& top, const FinAbelianGroup& mid, const FinAbelianGroup& bottom) {
    GroupTower T;
    T.poset.nodes = {"t", "a", "b", "z"};
    for (const auto& u : T.poset.nodes) T.poset.leq.push_back({u, u});
    for (const auto& [u, v] : std::vector<Edge>{{"a", "t"}, {"b", "t"}, {"z", "t"}, {"z", "a"}, {"z", "b"}})
        T.poset.leq.push_back({u, v});
    T.groups = {{"t", top}, {"a", mid}, {"b", mid}, {"z", bottom}};
    auto ones = [](const FinAbelianGroup& s, const FinAbelianGroup& t) {
        return GroupHom(s, t, std::vector<std::vector<std::int64_t>>(t.rank(), std::vector<std::int64_t>(s.rank(), 1)));
    };
    for (const auto& u : T.poset.nodes) T.chi.emplace(Edge{u, u}, GroupHom::identity(T.groups.at(u)));
    T.chi.emplace(Edge{"a", "t"}, ones(top, mid));
    T.chi.emplace(Edge{"b", "t"}, ones(top, mid));
    T.chi.emplace(Edge{"z", "t"}, ones(top, bottom));
    T.chi.emplace(Edge{"z", "a"}, ones(mid, bottom));
    T.chi.emplace(Edge{"z", "b"}, ones(mid, bottom));
    return T;
}

}  // namespace

TEST_CASE("poset axioms") {
    CHECK(check_poset(DirectedPoset::chain(3)).passed());
    DirectedPoset J = DirectedPoset::chain(2);
    J.leq.erase(J.leq.begin());
    CHECK_FALSE(check_poset(J).passed());

    DirectedPoset two{{"a", "b"}, {{"a", "a"}, {"b", "b"}}};
    const auto r = check_poset(two);
    CHECK_FALSE(r.passed());
    CHECK(r.find("poset")->counterexample.at("rule") == "directed");

    DirectedPoset cyc{{"a", "b"}, {{"a", "a"}, {"b", "b"}, {"a", "b"}, {"b", "a"}}};
    CHECK(check_poset(cyc).find("poset")->counterexample.at("rule") == "antisymmetric");
}

TEST_CASE("group tower checks") {
    CHECK(check_tower(z8_chain()).passed());
    CHECK(check_tower(diamond(Z(4), Z(2), Z(2))).passed());

    auto T = z8_chain();
    // doubling Z/4 -> Z/2 is the zero map
    T.chi.erase({"u2", "u1"});
    T.chi.emplace(Edge{"u2", "u1"}, GroupHom(Z(4), Z(2), {{2}}));
    const auto r = check_tower(T);
    CHECK_FALSE(r.passed());
    const Check* s = r.find("surjective");
    REQUIRE(s != nullptr);
    CHECK_FALSE(s->passed);
    CHECK(s->counterexample.at("edge") == nlohmann::json::array({"u2", "u1"}));
    for (const auto& c : r.checks())
        if (!c.passed) {
            CHECK(tower_counterexample_refails(T, c));
            CHECK_FALSE(tower_counterexample_refails(z8_chain(), c));
        }
}

TEST_CASE("inverse limits") {
    const auto L = inverse_limit(z8_chain());
    CHECK(iso_check(L.group, Z(8)));
    CHECK(L.projections.at("u0").is_surjective());
    CHECK(L.projections.at("u2").is_surjective());

    GroupTower single;
    single.poset = DirectedPoset::chain(1);
    single.groups["u0"] = Z(6);
    single.chi.emplace(Edge{"u0", "u0"}, GroupHom::identity(Z(6)));
    CHECK(iso_check(inverse_limit(single).group, Z(6)));

    CHECK(iso_check(inverse_limit(diamond(Z(4), Z(2), Z(2))).group, Z(4)));
}

TEST_CASE("inverse limit matches brute-force threads") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        // random divisor chains of cyclic groups and the diamond
        std::vector<std::int64_t> orders{static_cast<std::int64_t>(std::vector<int>{4, 6, 8, 12}[rng.below(4)])};
        while (orders.size() < 3) {
            std::vector<std::int64_t> divs;
            for (std::int64_t d = 1; d <= orders.back(); ++d)
                if (orders.back() % d == 0) divs.push_back(d);
            orders.push_back(divs[rng.below(divs.size())]);
        }
        const auto T = chain_group_tower({Z(orders[0]), Z(orders[1]), Z(orders[2])}, reduction_bonds(orders));
        REQUIRE(check_tower(T).passed());
        const auto L = inverse_limit(T);
        const auto threads = enumerate_threads(T);
        CHECK(L.group.order() == threads.size());
        CHECK(iso_check(L.group, Z(orders[0])));
        // projections are compatible with the bonds and land on threads
        for (const auto& x : L.group.elements()) {
            std::map<Node, GroupElement> t;
            for (const auto& [u, p] : L.projections) t[u] = p.apply(x);
            CHECK(std::find(threads.begin(), threads.end(), t) != threads.end());
        }
        for (const auto& e : T.poset.leq)
            CHECK(T.chi.at(e).compose(L.projections.at(e.second)) == L.projections.at(e.first));
    }
    const auto D = diamond(FinAbelianGroup::from_orders({2, 4}), Z(2), Z(2));
    REQUIRE(check_tower(D).passed());
    CHECK(inverse_limit(D).group.order() == enumerate_threads(D).size());
}

TEST_CASE("standard tower of Z/8, Z/4, Z/2") {
    const auto T = standard_tower({8, 4, 2}, {0, 1, 2, 3}, 2);
    const auto r = check_tower(T);
    CHECK(r.passed());
    CHECK(r.find("q-coherence")->passed);

    const std::map<Node, FinAbelianGroup> groups{{"u0", Z(8)}, {"u1", Z(4)}, {"u2", Z(2)}};
    const auto acts = translation_actions(T, groups);
    const auto GT = group_tower(T, acts);
    CHECK(check_tower(GT).passed());
    const auto expected = z8_chain();
    for (const auto& e : T.poset.leq) CHECK(GT.chi.at(e) == expected.chi.at(e));
    CHECK(GT.chi.at({"u0", "u0"}) == GroupHom::identity(Z(8)));

    const auto L = inverse_limit(GT);
    CHECK(iso_check(L.group, Z(8)));
    const auto thr = check_thread_action(T, acts, {0, 1}, GT, L);
    CHECK(thr.passed());
}

TEST_CASE("extracted actions induce a tower with the same limit") {
    const auto T = standard_tower({4, 2}, {0, 1, 2}, 2);
    const auto acts = extract_actions(T);
    const auto GT = group_tower(T, acts);
    CHECK(check_tower(GT).passed());
    // induced homs are functorial and surjective whatever coordinates extraction chose
    CHECK(iso_check(inverse_limit(GT).group, Z(4)));
    CHECK(check_thread_action(T, acts, {1, 2}, GT, inverse_limit(GT)).passed());
}

TEST_CASE("tampered rho is caught") {
    const auto T = standard_tower({4, 2}, {0, 1, 2, 3}, 2);
    const Edge e{"u1", "u0"};
    const auto& Hv = T.nodes.at("u0");
    const auto& Hu = T.nodes.at("u1");
    const ElemId x = Hv.at(standard_id(Z(4), {1, 3}, Z(4).reduce({1})));
    const ElemId wrong = Hu.at(standard_id(Z(2), {1, 3}, Z(2).reduce({0})));
    const auto bad = tamper_rho(T, e, x, wrong);

    const auto r = check_tower(bad);
    CHECK_FALSE(r.passed());
    CHECK_FALSE(r.find("q-coherence")->passed);
    for (const auto& c : r.checks())
        if (!c.passed) {
            CHECK(tower_counterexample_refails(bad, c));
            CHECK_FALSE(tower_counterexample_refails(T, c));
        }

    const std::map<Node, FinAbelianGroup> groups{{"u0", Z(4)}, {"u1", Z(2)}};
    const auto acts = translation_actions(bad, groups);
    try {
        induced_hom(bad, e, acts.at("u1"), acts.at("u0"));
        FAIL("expected an induced hom error");
    } catch (const InducedHomError& err) {
        const auto& w = err.witness().at("witnesses");
        REQUIRE(w.size() == 2);
        CHECK(w[0] != w[1]);
    }
    CHECK(induced_hom(T, e, acts.at("u1"), acts.at("u0")) == GroupHom(Z(4), Z(2), {{1}}));
}

TEST_CASE("tower JSON round trips") {
    const auto T = standard_tower({4, 2}, {0, 1, 2}, 2);
    const auto back = tower_from_json(tower_to_json(T));
    CHECK(back.rho == T.rho);
    CHECK(back.poset.leq == T.poset.leq);
    CHECK(check_tower(back).passed());

    const auto G = z8_chain();
    const auto gb = group_tower_from_json(group_tower_to_json(G));
    for (const auto& e : G.poset.leq) CHECK(gb.chi.at(e) == G.chi.at(e));
    CHECK_THROWS_AS(tower_from_json(nlohmann::json{{"poset", 1}}), FormatError);
}

TEST_CASE("non-composing bonds are rejected") {
    CHECK_THROWS_AS(reduction_bonds({4, 3}), std::invalid_argument);
    CHECK_THROWS_AS(chain_group_tower({Z(4), Z(2)}, {GroupHom(Z(4), Z(4), {{1}})}), std::invalid_argument);
    const auto single = standard_tower({3}, {0, 1, 2}, 2);
    CHECK(single.poset.nodes.size() == 1);
    CHECK(check_tower(single).passed());
}
