#include "doctest.h"

#include "polyhom/hurewicz.hpp"
#include "polyhom/rng.hpp"

using namespace polyhom;

namespace {

FinAbelianGroup Z(std::int64_t n) { return FinAbelianGroup::cyclic(n); }

// face i of a standard simplex whose embedded element has coordinate x
SimplexDatum coordinate_simplex(const Polygroupoid& H, const FinAbelianGroup& G, const Config& v,
                                const std::vector<std::int64_t>& x) {
    SimplexDatum g;
    g.vertices = v;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Config c = drop_vertex(v, i);
        g.faces.push_back({config_key(c), c, H.at(standard_id(G, c, G.reduce({x[i]})))});
        g.twists.push_back(G.zero());
    }
    return g;
}

// closed form on the standard model: epsilon = (-1)^n sum_k (-1)^(k+1) x_k
GroupElement epsilon_oracle(const FinAbelianGroup& G, const std::vector<GroupElement>& x) {
    const std::size_t n = x.size() - 1;
    GroupElement s = G.zero();
    for (std::size_t k = 0; k < x.size(); ++k) s = k % 2 == 0 ? G.sub(s, x[k]) : G.add(s, x[k]);
    return n % 2 == 0 ? s : G.negate(s);
}

std::vector<GroupElement> elems(const FinAbelianGroup& G, std::initializer_list<std::int64_t> xs) {
    std::vector<GroupElement> out;
    for (auto x : xs) out.push_back(G.reduce({x}));
    return out;
}

}  // namespace

TEST_CASE("epsilon on the standard model") {
    const auto G = Z(4);
    const auto H = standard(G, 4, 2);
    const auto act = translation_action(H, G);
    const auto g = coordinate_simplex(H, G, {0, 1, 2}, {1, 2, 3});
    CHECK(epsilon(H, act, g) == G.reduce({2}));
    CHECK(epsilon(H, act, coordinate_simplex(H, G, {0, 1, 2}, {0, 0, 0})).is_zero());

    // raising the last twist by -gamma raises epsilon by gamma
    auto g2 = g;
    g2.twists[2] = G.reduce({-1});
    CHECK(epsilon(H, act, g2) == G.reduce({3}));
}

TEST_CASE("epsilon agrees with the closed form") {
    Rng rng(11);
    for (std::size_t n : {2u, 3u}) {
        for (std::int64_t order : {2, 3, 4}) {
            const auto G = Z(order);
            const auto H = standard(G, n + 2, n);
            const auto act = translation_action(H, G);
            for (int trial = 0; trial < 40; ++trial) {
                Config v;
                for (Vertex x = 0; x < n + 2; ++x) v.push_back(x);
                v.erase(v.begin() + static_cast<std::ptrdiff_t>(rng.below(n + 2)));
                std::vector<GroupElement> tw;
                for (std::size_t i = 0; i <= n; ++i) tw.push_back(G.element(rng.below(G.order())));
                const auto g = make_simplex(H, v, tw);
                CHECK(epsilon(H, act, g) == epsilon_oracle(G, tw));
            }
        }
    }
}

TEST_CASE("epsilon is linear on chains") {
    const auto G = Z(4);
    const auto H = standard(G, 3, 2);
    const auto act = translation_action(H, G);
    const auto a = make_simplex(H, {0, 1, 2}, elems(G, {1, 0, 2}));
    const auto b = make_simplex(H, {0, 1, 2}, elems(G, {3, 3, 1}));
    const auto lhs = epsilon(H, act, {{2, a}, {-1, b}});
    CHECK(lhs == G.sub(G.scale(epsilon(H, act, a), 2), epsilon(H, act, b)));
}

TEST_CASE("malformed simplices are rejected") {
    const auto G = Z(2);
    const auto H = standard(G, 3, 2);
    const auto act = translation_action(H, G);
    auto g = make_simplex(H, {0, 1, 2}, elems(G, {0, 0, 0}));
    CHECK_FALSE(simplex_defect(H, act, g).has_value());
    auto bad = g;
    std::swap(bad.faces[0], bad.faces[1]);
    CHECK(simplex_defect(H, act, bad).has_value());
    CHECK_THROWS_AS(epsilon(H, act, bad), HurewiczError);
}

TEST_CASE("co_face bookkeeping") {
    const auto G = Z(4);
    const auto H = standard(G, 4, 2);
    std::map<std::pair<std::size_t, std::size_t>, GroupElement> tw;
    std::int64_t x = 0;
    for (std::size_t j = 1; j < 4; ++j)
        for (std::size_t i = 0; i < j; ++i) tw[{i, j}] = G.reduce({x++});
    const auto h = make_cosimplex(H, {0, 1, 2, 3}, tw);
    CHECK(co_face(h, 0).vertices == Config{1, 2, 3});
    // pair {1,2} is face 1 of both co_face(h,1) and co_face(h,2)
    CHECK(co_face(h, 1).faces[1] == co_face(h, 2).faces[1]);
    CHECK(co_face(h, 1).twists[1] == co_face(h, 2).twists[1]);
    // pair {0,3} is face 2 of co_face(h,0) and face 0 of co_face(h,3)
    CHECK(co_face(h, 0).faces[2] == co_face(h, 3).faces[0]);
    const auto act = translation_action(H, G);
    for (std::size_t j = 0; j < 4; ++j) CHECK_FALSE(simplex_defect(H, act, co_face(h, j)).has_value());
}

TEST_CASE("epsilon vanishes on every boundary of the standard model") {
    const auto G = Z(4);
    const auto H = standard(G, 4, 2);
    const auto act = translation_action(H, G);
    const auto els = G.elements();
    std::vector<std::size_t> idx(6, 0);
    std::size_t count = 0;
    for (;;) {
        std::map<std::pair<std::size_t, std::size_t>, GroupElement> tw;
        std::size_t p = 0;
        for (std::size_t j = 1; j < 4; ++j)
            for (std::size_t i = 0; i < j; ++i) tw[{i, j}] = els[idx[p++]];
        CHECK(check_boundary_zero(H, act, make_cosimplex(H, {0, 1, 2, 3}, tw)));
        ++count;
        p = 0;
        while (p < idx.size() && ++idx[p] == els.size()) idx[p++] = 0;
        if (p == idx.size()) break;
    }
    CHECK(count == 4096);
}

TEST_CASE("a non-associative Q breaks some boundary") {
    const auto G = Z(4);
    const auto H = twisted_standard(G, {0, 1, 2, 3}, 2, {{{0, 1, 2}, G.reduce({1})}});
    const auto act = translation_action(H, G);
    std::map<std::pair<std::size_t, std::size_t>, GroupElement> tw;
    for (std::size_t j = 1; j < 4; ++j)
        for (std::size_t i = 0; i < j; ++i) tw[{i, j}] = G.zero();
    CHECK_FALSE(check_boundary_zero(H, act, make_cosimplex(H, {0, 1, 2, 3}, tw)));
}

TEST_CASE("natural isomorphism certificates") {
    const auto G = Z(4);
    const auto H = standard(G, 3, 2);
    const auto act = translation_action(H, G);
    const auto g = make_simplex(H, {0, 1, 2}, elems(G, {0, 2, 1}));
    auto same = natural_iso(G, g, g);
    REQUIRE(same.has_value());
    for (const auto& d : *same) CHECK(d.is_zero());

    const auto g1 = make_simplex(H, {0, 1, 2}, elems(G, {1, 3, 1}));
    CHECK(natural_iso(G, g, g1).has_value());
    CHECK(epsilon(H, act, g) == epsilon(H, act, g1));

    const auto g2 = make_simplex(H, {0, 1, 2}, elems(G, {1, 2, 1}));
    CHECK_FALSE(natural_iso(G, g, g2).has_value());
    CHECK(G.sub(epsilon(H, act, g2), epsilon(H, act, g)) == G.reduce({-1}));

    const auto other = make_simplex(standard(G, 4, 2), {0, 1, 3}, elems(G, {0, 0, 0}));
    CHECK_THROWS_AS(natural_iso(G, g, other), std::invalid_argument);
}

TEST_CASE("epsilon equality matches natural isomorphism") {
    Rng rng(5);
    const auto G = FinAbelianGroup::from_orders({2, 2});
    const auto H = scramble(standard(G, 5, 3), 3);
    const auto act = extract(H).action;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<GroupElement> a, b;
        for (int i = 0; i < 4; ++i) {
            a.push_back(G.element(rng.below(4)));
            b.push_back(G.element(rng.below(4)));
        }
        const auto g = make_simplex(H, {0, 2, 3, 4}, a);
        const auto g2 = make_simplex(H, {0, 2, 3, 4}, b);
        CHECK((epsilon(H, act, g) == epsilon(H, act, g2)) == natural_iso(G, g, g2).has_value());
    }
}

TEST_CASE("twist_by shifts epsilon by gamma") {
    const auto G = Z(4);
    const auto H = standard(G, 3, 2);
    const auto act = translation_action(H, G);
    const auto g = coordinate_simplex(H, G, {0, 1, 2}, {1, 2, 3});
    CHECK(twist_by(G, g, G.zero()).twists == g.twists);
    CHECK(epsilon(H, act, twist_by(G, g, G.reduce({3}))) == G.reduce({1}));
    for (const auto& a : G.elements()) {
        CHECK(G.sub(epsilon(H, act, twist_by(G, g, a)), epsilon(H, act, g)) == a);
        for (const auto& b : G.elements())
            CHECK(twist_by(G, twist_by(G, g, a), b).twists == twist_by(G, g, G.add(a, b)).twists);
    }
}

TEST_CASE("simplex and cosimplex JSON round trip") {
    const auto G = Z(3);
    const auto H = standard(G, 4, 2);
    const auto g = make_simplex(H, {1, 2, 3}, elems(G, {2, 0, 1}));
    const auto back = simplex_from_json(H, G, simplex_to_json(H, g));
    CHECK(back.faces == g.faces);
    CHECK(back.twists == g.twists);
    std::map<std::pair<std::size_t, std::size_t>, GroupElement> tw;
    for (std::size_t j = 1; j < 4; ++j)
        for (std::size_t i = 0; i < j; ++i) tw[{i, j}] = G.reduce({static_cast<std::int64_t>(i + j)});
    const auto h = make_cosimplex(H, {0, 1, 2, 3}, tw);
    const auto hb = cosimplex_from_json(H, G, cosimplex_to_json(H, h));
    for (std::size_t j = 0; j < 4; ++j) CHECK(co_face(hb, j).twists == co_face(h, j).twists);
}

TEST_CASE("verdict on standard and scrambled models") {
    const auto G = Z(4);
    const auto v = verdict(standard(G, 4, 2));
    CHECK(v.passed());
    REQUIRE(v.pocket_group.has_value());
    CHECK(iso_check(*v.pocket_group, G));
    CHECK(v.stages.checks().size() == 6);
    CHECK(v.to_json().at("isomorphic") == true);

    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto s = verdict(scramble(standard(G, 4, 2), seed));
        CHECK(s.passed());
        CHECK(iso_check(*s.pocket_group, G));
    }
    const auto t = verdict(standard(FinAbelianGroup::trivial(), 4, 2));
    CHECK(t.passed());
    CHECK(t.pocket_group->is_trivial());
}

TEST_CASE("verdict samples boundaries for larger instances") {
    const auto v = verdict(standard(Z(3), 5, 3), {.exhaustive_limit = 100, .samples = 2000, .seed = 4});
    CHECK(v.passed());
    const Check* wd = v.stages.find("well_defined");
    REQUIRE(wd != nullptr);
    CHECK(wd->detail.find("sampled") != std::string::npos);
}

TEST_CASE("verdict stops at the axioms stage on a non-associative Q") {
    const auto G = Z(2);
    const auto H = twisted_standard(G, {0, 1, 2, 3}, 2, {{{0, 1, 2}, G.reduce({1})}});
    const auto v = verdict(H);
    CHECK_FALSE(v.passed());
    const Check* bad = v.stages.first_failure();
    REQUIRE(bad != nullptr);
    CHECK(bad->name == "axioms");
    CHECK(verdict_witness_refails(H, *bad));
    CHECK_FALSE(verdict_witness_refails(standard(G, 4, 2), *bad));
}
