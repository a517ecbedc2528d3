#include "doctest.h"

#include "polyhom/algebra.hpp"
#include "polyhom/rng.hpp"

using namespace polyhom;

namespace {

bool is_diagonal_chain(const IntMatrix& D) {
    Integer prev = 1;
    bool seen_zero = false;
    for (std::size_t r = 0; r < D.rows(); ++r)
        for (std::size_t c = 0; c < D.cols(); ++c) {
            if (r != c && D(r, c) != 0) return false;
        }
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) {
        const Integer& d = D(i, i);
        if (d < 0) return false;
        if (d == 0) {
            seen_zero = true;
            continue;
        }
        if (seen_zero || d % prev != 0) return false;
        prev = d;
    }
    return true;
}

IntMatrix random_matrix(Rng& rng, std::size_t max_dim, int bound) {
    const std::size_t r = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_dim)));
    const std::size_t c = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_dim)));
    IntMatrix A(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) A(i, j) = rng.between(-bound, bound);
    return A;
}

// Random unimodular matrix as a product of elementary operations.
IntMatrix random_unimodular(Rng& rng, std::size_t n) {
    IntMatrix M = IntMatrix::identity(n);
    for (int step = 0; step < 12 && n > 1; ++step) {
        std::size_t i = rng.below(n), j = rng.below(n);
        if (i == j) continue;
        Integer q = rng.between(-2, 2);
        for (std::size_t c = 0; c < n; ++c) M(i, c) += q * M(j, c);
    }
    return M;
}

// Index of the row lattice (0 when not full rank).
Integer lattice_index_oracle(const IntMatrix& rel) { return abs(determinant(rel)); }

}  // namespace

TEST_CASE("snf examples") {
    auto f = snf(IntMatrix{{2, 0}, {0, 3}});
    CHECK(f.D == (IntMatrix{{1, 0}, {0, 6}}));
    CHECK(snf(IntMatrix::identity(3)).D == IntMatrix::identity(3));
    CHECK(snf(IntMatrix(2, 2)).D == IntMatrix(2, 2));
    CHECK(snf(IntMatrix(2, 2)).rank == 0);
    CHECK(snf(IntMatrix(0, 3)).rank == 0);
}

TEST_CASE("snf identities on random matrices") {
    Rng rng(20240601);
    for (int t = 0; t < 500; ++t) {
        IntMatrix A = random_matrix(rng, 8, 9);
        SmithForm f = snf(A);
        REQUIRE(f.U * A * f.V == f.D);
        CHECK(abs(determinant(f.U)) == 1);
        CHECK(abs(determinant(f.V)) == 1);
        CHECK(f.U * f.U_inv == IntMatrix::identity(A.rows()));
        CHECK(f.V * f.V_inv == IntMatrix::identity(A.cols()));
        CHECK(is_diagonal_chain(f.D));
    }
}

TEST_CASE("snf diagonal product matches the determinant") {
    Rng rng(7);
    for (int t = 0; t < 100; ++t) {
        IntMatrix A(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) A(i, j) = rng.between(-6, 6);
        Integer prod = 1;
        for (const auto& d : snf(A).diagonal()) prod *= d;
        CHECK(prod == lattice_index_oracle(A));
    }
}

TEST_CASE("determinant") {
    CHECK(determinant(IntMatrix{{1, 2}, {3, 4}}) == -2);
    CHECK(determinant(IntMatrix{{0, 1}, {1, 0}}) == -1);
    CHECK(determinant(IntMatrix{{2, 0, 0}, {0, 3, 0}, {0, 0, 5}}) == 30);
    CHECK(determinant(IntMatrix{{1, 2}, {2, 4}}) == 0);
}

TEST_CASE("quotient_group examples") {
    CHECK(quotient_group(IntMatrix{{2}}) == FinAbelianGroup({2}));
    CHECK(quotient_group(IntMatrix{{2, 0}, {0, 3}}) == FinAbelianGroup({6}));
    auto free2 = quotient_group(IntMatrix(0, 2));
    CHECK(free2.free_rank() == 2);
    CHECK(free2.invariant_factors().empty());
    CHECK(quotient_group(IntMatrix{{2, 0}, {0, 4}}).to_string() == "Z/2 + Z/4");
}

TEST_CASE("homology of triangles") {
    // vertices 0,1,2; edges 01, 02, 12; d1 columns are edges
    IntMatrix d1{{-1, -1, 0}, {1, 0, -1}, {0, 1, 1}};
    auto hollow = homology(d1, IntMatrix(3, 0));
    CHECK(hollow.free_rank() == 1);
    CHECK(hollow.invariant_factors().empty());
    IntMatrix d2{{1}, {-1}, {1}};
    CHECK(homology(d1, d2).is_trivial());
    CHECK(homology(IntMatrix(1, 1), IntMatrix(1, 1)).free_rank() == 1);
}

TEST_CASE("homology rejects a non-complex with the column") {
    IntMatrix d1{{1, 0}, {0, 1}};
    IntMatrix d2{{0, 0}, {0, 1}};
    try {
        homology(d1, d2);
        FAIL("expected HomologyError");
    } catch (const HomologyError& e) {
        CHECK(e.column() == 1);
    }
    CHECK_THROWS_AS(homology(IntMatrix(1, 2), IntMatrix(3, 1)), std::invalid_argument);
}

TEST_CASE("homology invariant under change of basis") {
    Rng rng(99);
    for (int t = 0; t < 50; ++t) {
        const std::size_t k = 4;
        IntMatrix d2(k, 3), d1(2, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < 3; ++j) d2(i, j) = rng.between(-3, 3);
        // choose d1 with rows in the left kernel of d2
        IntMatrix K = kernel_basis(d2.transpose());
        for (std::size_t r = 0; r < 2 && r < K.cols(); ++r) {
            const std::int64_t scale = rng.between(1, 2);
            for (std::size_t c = 0; c < k; ++c) d1(r, c) = K(c, r) * scale;
        }
        auto h = homology(d1, d2);
        IntMatrix P = random_unimodular(rng, 2), M = random_unimodular(rng, k), N = random_unimodular(rng, 3);
        SmithForm fm = snf(M);
        IntMatrix M_inv = fm.V * fm.U;  // D = I for unimodular M
        auto h2 = homology(P * d1 * M_inv, M * d2 * N);
        CHECK(iso_check(h, h2));
    }
}

TEST_CASE("image_solve examples") {
    CHECK(*image_solve(IntMatrix{{2}}, {4}) == std::vector<Integer>{2});
    CHECK_FALSE(image_solve(IntMatrix{{2}}, {3}).has_value());
    CHECK(*image_solve(IntMatrix{{2, 0}, {0, 3}}, {2, 3}) == std::vector<Integer>{1, 1});
    CHECK_THROWS_AS(image_solve(IntMatrix{{2}}, {1, 2}), std::invalid_argument);
}

TEST_CASE("image_solve against box search") {
    Rng rng(5);
    const int N = 3;
    for (int t = 0; t < 200; ++t) {
        IntMatrix A(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) A(i, j) = rng.between(-3, 3);
        std::vector<Integer> b{rng.between(-4, 4), rng.between(-4, 4)};
        auto x = image_solve(A, b);
        if (x) {
            CHECK(A * *x == b);
        } else {
            for (int p = -N; p <= N; ++p)
                for (int q = -N; q <= N; ++q) CHECK_FALSE(A * std::vector<Integer>{p, q} == b);
        }
    }
}

TEST_CASE("kernel and column bases") {
    IntMatrix A{{1, 2, 3}, {2, 4, 6}};
    IntMatrix K = kernel_basis(A);
    CHECK(K.cols() == 2);
    CHECK((A * K).is_zero());
    IntMatrix B = column_basis(IntMatrix{{2, 4}, {0, 0}});
    CHECK(B.cols() == 1);
    CHECK(abs(B(0, 0)) == 2);
}

TEST_CASE("iso_check") {
    CHECK(iso_check(FinAbelianGroup({2, 4}), FinAbelianGroup({2, 4})));
    CHECK_FALSE(iso_check(FinAbelianGroup({8}), FinAbelianGroup({2, 4})));
    CHECK(iso_check(FinAbelianGroup::cyclic(6), FinAbelianGroup::from_orders({2, 3})));
    CHECK(FinAbelianGroup::from_orders({4, 2, 1}) == FinAbelianGroup({2, 4}));
    CHECK(FinAbelianGroup::from_orders({1}).is_trivial());
}

TEST_CASE("group invariants are validated") {
    CHECK_THROWS_AS(FinAbelianGroup({4, 2}), std::invalid_argument);
    CHECK_THROWS_AS(FinAbelianGroup({1}), std::invalid_argument);
    CHECK_THROWS_AS(FinAbelianGroup::from_orders({0}), std::invalid_argument);
}

TEST_CASE("element arithmetic and enumeration") {
    FinAbelianGroup G({2, 4});
    CHECK(G.order() == 8);
    auto els = G.elements();
    CHECK(els.size() == 8);
    for (std::size_t i = 0; i < els.size(); ++i) CHECK(G.index_of(els[i]) == i);
    auto a = G.reduce({1, 3});
    CHECK(G.add(a, a) == G.reduce({0, 2}));
    CHECK(G.add(a, G.negate(a)).is_zero());
    CHECK(G.scale(a, 4).is_zero());
    CHECK(a.key() == "1,3");
    CHECK(FinAbelianGroup().to_string() == "0");
}

TEST_CASE("group homs") {
    FinAbelianGroup Z8({8}), Z4({4}), Z2({2});
    GroupHom r84(Z8, Z4, {{1}}), r42(Z4, Z2, {{1}});
    CHECK(r84.respects_orders());
    CHECK(r84.is_surjective());
    CHECK(r42.compose(r84) == GroupHom(Z8, Z2, {{1}}));
    CHECK(GroupHom(Z8, Z4, {{2}}).respects_orders());
    CHECK_FALSE(GroupHom(Z8, Z4, {{2}}).is_surjective());
    CHECK_FALSE(GroupHom(Z4, Z8, {{1}}).respects_orders());
    CHECK(GroupHom(Z4, Z2, {{3}}) == r42);
    CHECK(r84.apply(Z8.reduce({7})) == Z4.reduce({3}));
}

TEST_CASE("group_from_table recovers cyclic and product groups") {
    for (std::int64_t n : {1, 2, 5, 6, 8}) {
        const auto N = static_cast<std::size_t>(n);
        std::vector<std::vector<std::size_t>> add(N, std::vector<std::size_t>(N));
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) add[a][b] = (a + b) % N;
        auto tg = group_from_table(add, 0);
        CHECK(iso_check(tg.group, FinAbelianGroup::cyclic(n)));
        // coordinates form a homomorphism
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) CHECK(tg.group.add(tg.coords[a], tg.coords[b]) == tg.coords[add[a][b]]);
    }
    // Z/2 x Z/4 via xor-ish table, zero placed at index 3
    FinAbelianGroup G({2, 4});
    std::vector<std::size_t> perm{3, 0, 1, 2, 4, 5, 6, 7};
    std::vector<std::size_t> inv(8);
    for (std::size_t i = 0; i < 8; ++i) inv[perm[i]] = i;
    std::vector<std::vector<std::size_t>> add(8, std::vector<std::size_t>(8));
    for (std::size_t a = 0; a < 8; ++a)
        for (std::size_t b = 0; b < 8; ++b)
            add[perm[a]][perm[b]] = perm[G.index_of(G.add(G.element(a), G.element(b)))];
    auto tg = group_from_table(add, perm[0]);
    CHECK(tg.group == G);
    CHECK(tg.coords[perm[0]].is_zero());
}

TEST_CASE("group_from_table rejects non-groups") {
    std::vector<std::vector<std::size_t>> bad{{0, 1}, {1, 1}};
    CHECK_THROWS_AS(group_from_table(bad, 0), std::invalid_argument);
    // non-abelian S3 multiplication
    std::vector<std::vector<std::size_t>> s3{{0, 1, 2, 3, 4, 5}, {1, 2, 0, 4, 5, 3}, {2, 0, 1, 5, 3, 4},
                                             {3, 5, 4, 0, 2, 1}, {4, 3, 5, 1, 0, 2}, {5, 4, 3, 2, 1, 0}};
    CHECK_THROWS_AS(group_from_table(s3, 0), std::invalid_argument);
}

TEST_CASE("big entries stay exact") {
    IntMatrix A{{1000000007, 0}, {0, 998244353}};
    auto f = snf(A);
    CHECK(f.D(1, 1) == Integer(1000000007) * 998244353);
    CHECK(f.U * A * f.V == f.D);
}
