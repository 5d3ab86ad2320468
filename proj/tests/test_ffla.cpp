#include <doctest.h>

#include <random>

#include "tilthall/ffla.hpp"

using namespace tilthall;

namespace {

FMatrix random_matrix(const Field& f, int r, int c, std::mt19937_64& rng) {
    std::uniform_int_distribution<Elem> d(0, f.q() - 1);
    FMatrix m(f, r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = d(rng);
    return m;
}

}  // namespace

TEST_CASE("field construction") {
    CHECK(Field::make(2).q() == 2);
    CHECK(Field::make(3).q() == 3);
    Field f4 = Field::make(2, 2);
    CHECK(f4.q() == 4);
    CHECK(f4.reduction() == std::vector<int>{1, 1, 1});
    CHECK_THROWS_AS(Field::make(4), Error);
    CHECK_THROWS_AS(Field::make(2, 21), Error);
}

TEST_CASE("F_4 multiplication against polynomial arithmetic") {
    // independent oracle: multiply coefficient pairs and reduce by x^2 = x + 1
    Field f = Field::make(2, 2);
    for (Elem a = 0; a < 4; ++a)
        for (Elem b = 0; b < 4; ++b) {
            int a0 = a & 1, a1 = a >> 1, b0 = b & 1, b1 = b >> 1;
            int c0 = a0 * b0, c1 = a0 * b1 + a1 * b0, c2 = a1 * b1;
            c0 += c2;
            c1 += c2;
            Elem want = Elem((c0 & 1) | ((c1 & 1) << 1));
            CHECK(f.mul(a, b) == want);
        }
}

TEST_CASE("field axioms, exhaustive for q <= 16") {
    for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {5, 1}, {2, 2}, {2, 3}, {3, 2}, {2, 4}, {7, 1}, {13, 1}}) {
        Field f = Field::make(p, e);
        const Elem q = f.q();
        CAPTURE(q);
        for (Elem a = 0; a < q; ++a) {
            CHECK(f.add(a, f.neg(a)) == 0);
            CHECK(f.mul(a, 1) == a);
            if (a) CHECK(f.mul(a, f.inv(a)) == 1);
            CHECK(f.pow(a, q) == a);
            for (Elem b = 0; b < q; ++b) {
                CHECK(f.add(a, b) == f.add(b, a));
                CHECK(f.mul(a, b) == f.mul(b, a));
                for (Elem c = 0; c < q; ++c) {
                    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                    CHECK(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
                    CHECK(f.add(a, f.add(b, c)) == f.add(f.add(a, b), c));
                }
            }
        }
    }
}

TEST_CASE("linear_solve modes") {
    Field f2 = Field::make(2), f3 = Field::make(3);
    CHECK(linear_solve(FMatrix::identity(f2, 3), SolveMode::Rank).rank == 3);
    CHECK(linear_solve(FMatrix(f3, 2, 3), SolveMode::Nullspace).matrix.cols() == 3);
    FMatrix a = FMatrix::from_rows(f2, {{1, 1}, {0, 1}});
    CHECK(linear_solve(a, SolveMode::Inverse).matrix == a);
    CHECK_THROWS_AS(inverse(FMatrix::from_rows(f2, {{1, 1}, {1, 1}})), Error);
    CHECK_THROWS_AS(inverse(FMatrix(f2, 2, 3)), Error);
    // second row is twice the first
    FMatrix sing = FMatrix::from_rows(f3, {{1, 2}, {2, 1}});
    CHECK_FALSE(solve(sing, FMatrix::column_vector(f3, {1, 0})).consistent);
    SolveResult u = solve(sing, FMatrix::column_vector(f3, {1, 2}));
    CHECK(u.consistent);
    CHECK(u.kernel.cols() == 1);
    CHECK(sing * u.particular == FMatrix::column_vector(f3, {1, 2}));
}

TEST_CASE("property: rank-nullity and inverses on random matrices") {
    std::mt19937_64 rng(11);
    for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        Field f = Field::make(p, e);
        for (int t = 0; t < 40; ++t) {
            int r = 1 + int(rng() % 6), c = 1 + int(rng() % 6);
            FMatrix m = random_matrix(f, r, c, rng);
            FMatrix k = nullspace(m);
            CHECK(rank(m) + k.cols() == c);
            CHECK((m * k).is_zero());
            FMatrix sq = random_matrix(f, r, r, rng);
            if (rank(sq) == r) {
                FMatrix inv = inverse(sq);
                CHECK(inv * sq == FMatrix::identity(f, r));
                CHECK(sq * inv == FMatrix::identity(f, r));
            }
            FMatrix x = random_matrix(f, c, 1, rng);
            SolveResult s = solve(m, m * x);
            REQUIRE(s.consistent);
            CHECK(m * s.particular == m * x);
        }
    }
}

TEST_CASE("subspace helpers") {
    Field f = Field::make(3);
    FMatrix a = FMatrix::from_rows(f, {{1, 0}, {0, 1}, {0, 0}});
    FMatrix b = FMatrix::from_rows(f, {{0}, {1}, {1}});
    CHECK(span_sum(a, b).cols() == 3);
    CHECK(span_intersection(a, b).cols() == 0);
    FMatrix c = FMatrix::from_rows(f, {{1}, {1}, {0}});
    CHECK(span_intersection(a, c).cols() == 1);
    CHECK(in_span(a, c));
    CHECK(coordinates(a, c) == FMatrix::column_vector(f, {1, 1}));
    CHECK(complement_basis(a, 3).cols() == 1);
    FMatrix m = FMatrix::from_rows(f, {{1, 2, 0}, {0, 1, 2}});
    CHECK(unflatten(flatten(m), 2, 3) == m);
}
