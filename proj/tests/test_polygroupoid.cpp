#include "doctest.h"

#include "polyhom/polygroupoid.hpp"

using namespace polyhom;
using nlohmann::json;

namespace {

// Independent count of compatible (n+1)-tuples over the faces of every
// (n+1)-configuration, straight from the definition.
std::size_t count_compatible_top_tuples(const Polygroupoid& H) {
    std::size_t count = 0;
    for (const auto& c : subsets(H.vertices(), H.arity() + 1)) {
        std::vector<std::vector<ElemId>> dom;
        for (std::size_t i = 0; i < c.size(); ++i) dom.push_back(H.fiber(drop_vertex(c, i)));
        std::vector<std::size_t> idx(c.size(), 0);
        for (;;) {
            Tuple t;
            for (std::size_t i = 0; i < c.size(); ++i) t.push_back(dom[i][idx[i]]);
            if (is_compatible(H, t)) ++count;
            std::size_t i = 0;
            while (i < c.size() && ++idx[i] == dom[i].size()) idx[i++] = 0;
            if (i == c.size()) break;
        }
    }
    return count;
}

Polygroupoid with_q(const Polygroupoid& H, std::vector<std::vector<std::string>> q) {
    PolygroupoidData d = H.data();
    d.q = std::move(q);
    return Polygroupoid(d);
}

}  // namespace

TEST_CASE("standard Z/2 on three vertices") {
    auto H = standard(FinAbelianGroup::cyclic(2), 3, 2);
    CHECK(H.configs(2).size() == 3);
    for (const auto& c : H.configs(2)) CHECK(H.fiber(c).size() == 2);
    CHECK(H.q().size() == 4);
    CHECK(count_compatible_top_tuples(H) == 8);
    CHECK(check_axioms(H).passed());
    // the zero tuple is in Q, a single 1 is not
    CHECK(H.has_q(H.lookup({"1,2/0", "0,2/0", "0,1/0"})));
    CHECK_FALSE(H.has_q(H.lookup({"1,2/1", "0,2/0", "0,1/0"})));
    CHECK(H.has_q(H.lookup({"1,2/1", "0,2/1", "0,1/0"})));
}

TEST_CASE("trivial group gives all compatible tuples") {
    auto H = standard(FinAbelianGroup::trivial(), 4, 2);
    for (const auto& [c, es] : H.fibers()) CHECK(es.size() == 1);
    CHECK(H.q().size() == count_compatible_top_tuples(H));
    CHECK(H.q().size() == 4);
    CHECK(check_axioms(H).passed());
    CHECK(check_associativity(H).passed());
}

TEST_CASE("standard models satisfy the axioms and associativity") {
    struct Case {
        std::vector<std::int64_t> g;
        std::size_t vertices, n;
    };
    for (const auto& k : {Case{{4}, 4, 2}, Case{{2}, 5, 3}, Case{{2, 2}, 4, 2}, Case{{3}, 5, 2}, Case{{2}, 4, 3}}) {
        auto H = standard(FinAbelianGroup::from_orders(k.g), k.vertices, k.n);
        INFO("group " << FinAbelianGroup::from_orders(k.g).to_string() << " |I|=" << k.vertices << " n=" << k.n);
        CHECK(check_axioms(H).passed());
        auto a = check_associativity(H);
        CHECK(a.passed());
    }
    auto H = standard(FinAbelianGroup::cyclic(4), 4, 2);
    CHECK(check_associativity(H, {0, 1, 2, 3}).passed());
    CHECK_THROWS_AS(check_associativity(H, {0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(check_associativity(H, {0, 1, 3, 2}), std::invalid_argument);
}

TEST_CASE("standard rejects bad parameters") {
    CHECK_THROWS_AS(standard(FinAbelianGroup::cyclic(2), 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(standard(FinAbelianGroup({}, 1), 4, 2), std::invalid_argument);
}

TEST_CASE("compatibility") {
    auto H = standard(FinAbelianGroup::cyclic(2), 3, 2);
    CHECK(is_compatible(H, H.lookup({"1,2/1", "0,2/0", "0,1/1"})));
    CHECK_FALSE(is_compatible(H, H.lookup({"0/0", "0/0"})));
    CHECK(is_compatible(H, H.lookup({"0/0", "1/0"})));
    CHECK_THROWS_AS(is_compatible(H, H.lookup({"0/0", "0,1/0"})), std::invalid_argument);

    // pi_1(w_2) = 1 but pi_1(w_1) = 2
    auto w = compatibility_witness(H, H.lookup({"1,2/0", "0,1/0", "0,2/0"}));
    REQUIRE(w.has_value());
    CHECK(*w == std::make_pair<std::size_t, std::size_t>(1, 2));
    CHECK(is_partially_compatible(H, H.lookup({"1,2/0", "0,1/0", "0,1/0"}), 1));
}

TEST_CASE("planted horn duplicate is caught and re-checkable") {
    auto H = standard(FinAbelianGroup::cyclic(3), 3, 2);
    auto q = H.data().q;
    auto dup = q.front();
    dup.back() = dup.back() == "0,1/0" ? "0,1/1" : "0,1/0";
    q.push_back(dup);
    auto bad = with_q(H, q);
    auto r = check_axioms(bad);
    CHECK_FALSE(r.passed());
    const Check* c = r.find("horn-uniqueness");
    REQUIRE(c);
    CHECK_FALSE(c->passed);
    CHECK(c->counterexample["tuples"].size() == 2);
    CHECK(counterexample_refails(bad, *c));
    CHECK_FALSE(counterexample_refails(H, *c));
}

TEST_CASE("planted coherence fault") {
    auto H = standard(FinAbelianGroup::cyclic(2), 4, 3);
    PolygroupoidData d = H.data();
    d.pi["0,1,2/0"][0] = "0,3/0";  // wrong configuration
    Polygroupoid bad(d);
    auto r = check_axioms(bad);
    const Check* c = r.find("coherence");
    REQUIRE(c);
    CHECK_FALSE(c->passed);
    CHECK(c->counterexample["element"] == "0,1,2/0");
    CHECK(counterexample_refails(bad, *c));
}

TEST_CASE("Q outside compatible tuples is reported") {
    auto H = standard(FinAbelianGroup::cyclic(2), 3, 2);
    auto q = H.data().q;
    q.push_back({"0,1/0", "0,1/1", "0,2/0"});
    auto bad = with_q(H, q);
    auto r = check_axioms(bad);
    const Check* c = r.find("q-compatibility");
    REQUIRE(c);
    CHECK_FALSE(c->passed);
    CHECK(counterexample_refails(bad, *c));
}

TEST_CASE("constant defect: cancels for n = 2, breaks associativity for n = 3") {
    auto G = FinAbelianGroup::cyclic(4);
    auto one = G.reduce({1});
    for (std::size_t n : {2u, 3u}) {
        std::map<Config, GroupElement> defect;
        for (const auto& c : subsets({0, 1, 2, 3, 4}, n + 1)) defect[c] = one;
        auto H = twisted_standard(G, {0, 1, 2, 3, 4}, n, defect);
        CHECK(check_axioms(H).passed());
        CHECK(count_horn_fillers(H).exactly_one == count_horn_fillers(H).horns);
        auto a = check_associativity(H);
        // grid rows sum with signs (-1)^i, so a constant defect survives only for odd n+2
        CHECK(a.passed() == (n == 2));
        if (!a.passed()) CHECK(counterexample_refails(H, *a.first_failure()));
    }
}

TEST_CASE("defect on a single configuration breaks associativity for n = 2") {
    auto G = FinAbelianGroup::cyclic(3);
    auto H = twisted_standard(G, {0, 1, 2, 3}, 2, {{{0, 1, 2}, G.reduce({1})}});
    CHECK(check_axioms(H).passed());
    auto a = check_associativity(H);
    REQUIRE_FALSE(a.passed());
    CHECK(counterexample_refails(H, *a.first_failure()));
    CHECK_FALSE(counterexample_refails(standard(G, 4, 2), *a.first_failure()));
}

TEST_CASE("every horn of a standard model has exactly one filler") {
    for (std::size_t n : {2u, 3u})
        for (std::int64_t g : {2, 3, 4}) {
            auto H = standard(FinAbelianGroup::cyclic(g), n + 2, n);
            auto hc = count_horn_fillers(H);
            CHECK(hc.horns > 0);
            CHECK(hc.exactly_one == hc.horns);
        }
    // a missing Q tuple leaves horns without fillers
    auto H = standard(FinAbelianGroup::cyclic(2), 3, 2);
    auto q = H.data().q;
    q.pop_back();
    auto hc = count_horn_fillers(with_q(H, q));
    CHECK(hc.exactly_one < hc.horns);
    CHECK(hc.first_bad.has_value());
}

TEST_CASE("scramble is deterministic and preserves axioms") {
    auto H = standard(FinAbelianGroup::cyclic(4), 4, 2);
    auto a = polygroupoid_to_json(scramble(H, 11)).dump();
    auto b = polygroupoid_to_json(scramble(H, 11)).dump();
    CHECK(a == b);
    CHECK(a != polygroupoid_to_json(scramble(H, 12)).dump());

    auto defective = twisted_standard(FinAbelianGroup::cyclic(2), {0, 1, 2, 3, 4}, 3,
                                      {{{0, 1, 2, 3}, FinAbelianGroup::cyclic(2).reduce({1})}});
    const bool base_ok = check_associativity(defective).passed();
    CHECK_FALSE(base_ok);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto S = scramble(H, seed);
        CHECK(check_axioms(S).passed());
        CHECK(check_associativity(S).passed());
        CHECK(check_associativity(scramble(defective, seed)).passed() == base_ok);
    }
}

TEST_CASE("json round trip") {
    auto H = scramble(standard(FinAbelianGroup::cyclic(3), 4, 2), 5);
    json j = polygroupoid_to_json(H);
    auto again = polygroupoid_from_json(json::parse(j.dump()));
    CHECK(polygroupoid_to_json(again).dump() == j.dump());
    CHECK(j["fibers"]["0,1"].size() == 3);
    CHECK(j["pi"]["0,1/0"] == json::array({"1/0", "0/0"}));

    json broken = j;
    broken["Q"][0][0] = "nope";
    CHECK_THROWS_AS(polygroupoid_from_json(broken), FormatError);
    broken = j;
    broken.erase("Q");
    CHECK_THROWS_AS(polygroupoid_from_json(broken), FormatError);
    broken = j;
    broken["fibers"]["0,x"] = json::array();
    CHECK_THROWS_AS(polygroupoid_from_json(broken), FormatError);
}

TEST_CASE("induced automorphisms") {
    auto G = FinAbelianGroup::cyclic(3);
    auto H = standard(G, 4, 2);
    VertexPerm id{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    auto m = induced_automorphism(H, id);
    REQUIRE(m.image.has_value());
    for (ElemId e = 0; e < H.size(); ++e) CHECK((*m.image)[e] == e);

    VertexPerm swap{{0, 1}, {1, 0}, {2, 2}, {3, 3}};
    auto s = induced_automorphism(H, swap);
    REQUIRE(s.image.has_value());
    // lexicographically first: zero to zero, so every fiber map is g -> +g or g -> -g
    for (const auto& c : H.configs(2)) {
        const auto& src = H.fiber(c);
        const auto& dst = H.fiber(H.element((*s.image)[src[0]]).config);
        CHECK((*s.image)[src[0]] == dst[0]);
        const bool plus = (*s.image)[src[1]] == dst[1];
        for (std::size_t g = 0; g < 3; ++g) CHECK((*s.image)[src[g]] == dst[plus ? g : (3 - g) % 3]);
    }
    // compatibility is preserved by the image
    for (const auto& t : H.q()) {
        Tuple img;
        for (ElemId e : t) img.push_back((*s.image)[e]);
        std::sort(img.begin(), img.end(), [&](ElemId a, ElemId b) {
            return H.element(a).config > H.element(b).config;
        });
        CHECK(is_compatible(H, img));
        CHECK(H.has_q(img));
    }

    auto r = check_symmetric_system(H, {swap, VertexPerm{{0, 1}, {1, 2}, {2, 3}, {3, 0}}});
    CHECK(r.passed());
    CHECK(r.find("existence")->detail.find("24 permutations") == 0);
}

TEST_CASE("asymmetric Q has no induced map") {
    auto H = standard(FinAbelianGroup::cyclic(2), 4, 2);
    auto q = H.data().q;
    q.erase(q.begin());  // only the configuration 0,1,2 loses a tuple
    auto bad = with_q(H, q);
    auto m = induced_automorphism(bad, {{0, 0}, {1, 1}, {2, 3}, {3, 2}});
    CHECK_FALSE(m.image.has_value());
    CHECK(m.obstruction == "0,1,2");
    auto r = check_symmetric_system(bad, {{{0, 0}, {1, 1}, {2, 3}, {3, 2}}});
    CHECK_FALSE(r.passed());
}

TEST_CASE("induced maps on a scrambled model still cover and compose below the top") {
    auto H = scramble(standard(FinAbelianGroup::cyclic(4), 4, 2), 3);
    auto r = check_symmetric_system(H, {{{0, 1}, {1, 0}, {2, 2}, {3, 3}}, {{0, 0}, {1, 2}, {2, 3}, {3, 1}}});
    CHECK(r.passed());
}
