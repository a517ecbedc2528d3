#include "doctest.h"

#include "polyhom/chain.hpp"
#include "polyhom/rng.hpp"

using namespace polyhom;

namespace {

Chain random_chain(Rng& rng, const SimplexFamily& fam, std::size_t d) {
    Chain c(d);
    const auto& gens = fam.generators(d);
    for (int t = 0; t < 6; ++t) c.add(gens[rng.below(gens.size())], rng.between(-5, 5));
    return c;
}

}  // namespace

TEST_CASE("face_op and boundary on a full simplex") {
    auto fam = SimplexFamily::from_supports({{0, 1, 2}});
    SimplexGen g{{0, 1, 2}, ""};
    CHECK(face_op(fam, Chain::of(g), 0) == Chain::of({{1, 2}, ""}));
    CHECK(face_op(fam, Chain::of(g, 2), 1) == Chain::of({{0, 2}, ""}, 2));
    CHECK(boundary(fam, boundary(fam, Chain::of(g))).is_zero());

    SimplexGen e{{0, 1}, ""};
    Chain expect(0);
    expect.add({{1}, ""}, 1);
    expect.add({{0}, ""}, -1);
    CHECK(boundary(fam, Chain::of(e)) == expect);
    CHECK(boundary(fam, Chain(2)).is_zero());
    CHECK_THROWS_AS(boundary(fam, Chain::of({{0}, ""})), std::invalid_argument);
    CHECK_THROWS_AS(face_op(fam, Chain::of(g), 3), std::out_of_range);
}

TEST_CASE("face_op is linear on differences") {
    auto fam = SimplexFamily::colorings(3, 2, 2);
    SimplexGen g{{0, 1, 2}, "010"}, h{{0, 1, 2}, "011"};
    CHECK(face_op(fam, Chain::of(g) - Chain::of(h), 0) == Chain::of({{1, 2}, "10"}) - Chain::of({{1, 2}, "11"}));
}

TEST_CASE("boundary squared vanishes exhaustively up to dimension 4") {
    for (std::size_t arity : {1u, 2u}) {
        auto fam = SimplexFamily::colorings(5, 4, 2, arity);
        for (std::size_t d = 2; d <= 4; ++d)
            for (const auto& g : fam.generators(d)) REQUIRE(boundary(fam, boundary(fam, Chain::of(g))).is_zero());
    }
}

TEST_CASE("boundary squared vanishes on random chains and is linear") {
    auto fam = SimplexFamily::colorings(5, 4, 2, 2);
    Rng rng(42);
    for (int t = 0; t < 500; ++t) {
        std::size_t d = static_cast<std::size_t>(rng.between(2, 4));
        Chain a = random_chain(rng, fam, d), b = random_chain(rng, fam, d);
        CHECK(boundary(fam, boundary(fam, a)).is_zero());
        std::int64_t p = rng.between(-3, 3), q = rng.between(-3, 3);
        CHECK(boundary(fam, p * a + q * b) == p * boundary(fam, a) + q * boundary(fam, b));
    }
}

TEST_CASE("family validation rejects broken face maps") {
    std::vector<SimplexGen> gens{{{0}, ""}, {{1}, ""}, {{0, 1}, ""}};
    CHECK_THROWS_AS(SimplexFamily(gens, [](const SimplexGen&, std::size_t) { return SimplexGen{{0}, ""}; }),
                    std::invalid_argument);
    // identity violation: two labelled vertices, an edge whose faces disagree
    std::vector<SimplexGen> g2{{{0}, "a"}, {{0}, "b"}, {{1}, "a"}, {{2}, "a"},
                               {{0, 1}, "a"}, {{0, 2}, "a"}, {{1, 2}, "a"}, {{0, 1, 2}, "a"}};
    auto bad = [](const SimplexGen& g, std::size_t i) {
        Support s = g.support;
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
        std::string label = "a";
        if (g.support == Support{0, 1} && i == 1) label = "b";
        return SimplexGen{s, label};
    };
    CHECK_THROWS_AS(SimplexFamily(g2, bad), std::invalid_argument);
}

TEST_CASE("classify") {
    auto fam = SimplexFamily::colorings(3, 2, 2, 3);  // labels on the whole triangle only
    SimplexGen f{{0, 1, 2}, "0"}, g{{0, 1, 2}, "1"};
    auto pocket = classify(fam, Chain::of(f) - Chain::of(g), {});
    CHECK(pocket.cycle);
    CHECK(pocket.pocket);
    CHECK_FALSE(pocket.boundary);

    auto filled = SimplexFamily::from_supports({{0, 1, 2}});
    SimplexGen h{{0, 1, 2}, ""};
    Chain bh = boundary(filled, Chain::of(h));
    auto r = classify(filled, bh, {h});
    CHECK(r.boundary);
    CHECK(r.cycle);
    CHECK_FALSE(r.pocket);

    auto single = classify(filled, Chain::of({{0, 1}, ""}), {h});
    CHECK_FALSE(single.cycle);
    CHECK_FALSE(single.boundary);
    CHECK_FALSE(single.pocket);

    CHECK_FALSE(classify(filled, 2 * bh + Chain::of({{0, 1}, ""}), {h}).boundary);
    CHECK(classify(filled, 3 * bh, {h}).boundary);
}

TEST_CASE("boundaries are cycles") {
    auto fam = SimplexFamily::colorings(4, 3, 2, 2);
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
        std::vector<SimplexGen> cands;
        for (int k = 0; k < 3; ++k) cands.push_back(fam.generators(2)[rng.below(fam.generators(2).size())]);
        Chain c(1);
        for (const auto& h : cands) c += rng.between(-2, 2) * boundary(fam, Chain::of(h));
        auto r = classify(fam, c, cands);
        CHECK(r.boundary);
        CHECK(r.cycle);
    }
}

TEST_CASE("family homology of triangles") {
    auto hollow = SimplexFamily::from_supports({{0, 1}, {0, 2}, {1, 2}});
    auto h1 = family_homology(hollow, 1);
    CHECK(h1.free_rank() == 1);
    CHECK(h1.invariant_factors().empty());
    CHECK(family_homology(SimplexFamily::from_supports({{0, 1, 2}}), 1).is_trivial());
    CHECK(family_homology(hollow, 0).free_rank() == 1);
}

TEST_CASE("chain json round trip is sorted") {
    Chain c(1);
    c.add({{1, 2}, "b"}, 3);
    c.add({{0, 1}, "a"}, -1);
    auto j = chain_to_json(c);
    CHECK(j.dump() == R"({"dim":1,"terms":[{"coef":-1,"label":"a","support":[0,1]},{"coef":3,"label":"b","support":[1,2]}]})");
    CHECK(chain_from_json(j) == c);
    CHECK(c.support() == Support{0, 1, 2});
}
