#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "koszulab/errors.hpp"
#include "koszulab/linalg.hpp"
#include "seed.hpp"

using namespace koszulab;

namespace {

// Plain dense Gauss-Jordan, used as an independent rank oracle.
std::size_t dense_rank(std::vector<std::vector<Rational>> a) {
    std::size_t r = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c] / a[r][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

std::vector<std::vector<Rational>> random_dense(std::mt19937_64& rng, int rows, int cols, double density) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> val(-3, 3);
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
    for (auto& row : a)
        for (auto& x : row)
            if (coin(rng) < density) x = make_rational(val(rng), 1 + (val(rng) + 3) % 3);
    return a;
}

// Builds a low-rank matrix as a product so that rank deficiency is common.
std::vector<std::vector<Rational>> random_low_rank(std::mt19937_64& rng, int rows, int cols, int inner) {
    auto l = random_dense(rng, rows, inner, 0.5);
    auto r = random_dense(rng, inner, cols, 0.5);
    std::vector<std::vector<Rational>> out(rows, std::vector<Rational>(cols));
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < inner; ++k)
            for (int j = 0; j < cols; ++j) out[i][j] += l[i][k] * r[k][j];
    return out;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-2/4") == make_rational(-1, 2));
    CHECK(to_string(parse_rational("6/3")) == "2");
    CHECK(to_string(make_rational(-3, 9)) == "-1/3");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("a/2"));
    CHECK_THROWS(parse_rational("1/-2"));
}

TEST_CASE("rank examples") {
    CHECK(rank(SparseMatrix::identity(3)) == 3);
    CHECK(rank(SparseMatrix(2, 3)) == 0);
    CHECK(rank(SparseMatrix::from_dense({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("kernel examples") {
    CHECK(kernel_basis(SparseMatrix::identity(2)).empty());

    auto k = kernel_basis(SparseMatrix::from_dense({{1, -1}}));
    REQUIRE(k.size() == 1);
    CHECK(k[0][0] == k[0][1]);
    CHECK(k[0][0] != 0);

    SparseMatrix m = SparseMatrix::from_dense({{1, 2}, {2, 4}});
    auto k2 = kernel_basis(m);
    REQUIRE(k2.size() == 1);
    for (const auto& x : m.apply(k2[0])) CHECK(x == 0);
}

TEST_CASE("homology examples") {
    // 0 -> Q --1--> Q -> 0
    auto h = homology({SparseMatrix::identity(1)});
    CHECK(h.at(0) == 0);
    CHECK(h.at(1) == 0);

    // 0 -> Q --0--> Q -> 0
    auto z = homology({SparseMatrix(1, 1)});
    CHECK(z.at(0) == 1);
    CHECK(z.at(1) == 1);

    // d o d != 0 is rejected.
    CHECK_THROWS_AS(homology({SparseMatrix::identity(1), SparseMatrix::identity(1)}), CompositionNotZero);
}

TEST_CASE("reduced echelon projection kills the row space") {
    SparseMatrix m = SparseMatrix::from_dense({{1, 1, 0, 2}, {0, 1, 1, 0}, {1, 2, 1, 2}});
    ReducedEchelon e(m);
    CHECK(e.rank() == 2);
    for (int r = 0; r < m.rows(); ++r) CHECK(e.reduce(m.row_vector(r)).empty());
    for (int p : e.pivot_columns()) CHECK(e.pivot_row(p).front().second == 1);
}

TEST_CASE("property: rank-nullity, kernel correctness and permutation invariance") {
    std::mt19937_64 rng(test_seed());
    std::uniform_int_distribution<int> dim(0, 9);
    for (int trial = 0; trial < 150; ++trial) {
        int rows = dim(rng), cols = dim(rng);
        auto dense = (trial % 2 == 0) ? random_dense(rng, rows, cols, 0.35)
                                      : random_low_rank(rng, rows, cols, 1 + trial % 4);
        SparseMatrix m = rows == 0 ? SparseMatrix(0, cols) : SparseMatrix::from_dense(dense);
        std::size_t r = rank(m);
        CHECK(r == dense_rank(dense));

        auto k = kernel_basis(m);
        CHECK(r + k.size() == static_cast<std::size_t>(cols));
        for (const auto& v : k)
            for (const auto& x : m.apply(v)) CHECK(x == 0);

        std::vector<int> rp(rows), cp(cols);
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(cp.begin(), cp.end(), 0);
        std::shuffle(rp.begin(), rp.end(), rng);
        std::shuffle(cp.begin(), cp.end(), rng);
        SparseMatrix shuffled(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) shuffled.set(rp[i], cp[j], m.get(i, j));
        CHECK(rank(shuffled) == r);
    }
}

TEST_CASE("property: homology equals nullity minus incoming rank") {
    std::mt19937_64 rng(test_seed() + 1);
    for (int trial = 0; trial < 40; ++trial) {
        // d1 * d0 = 0 by construction: d0 spans part of ker d1.
        auto d1 = random_low_rank(rng, 4, 6, 2);
        SparseMatrix D1 = SparseMatrix::from_dense(d1);
        auto ker = kernel_basis(D1);
        SparseMatrix D0(6, static_cast<int>(ker.size()));
        for (std::size_t j = 0; j < ker.size(); ++j)
            for (int i = 0; i < 6; ++i) D0.set(i, static_cast<int>(j), ker[j][i] * (j % 2 ? 1 : 2));
        auto h = homology({D0, D1});
        CHECK(h.at(0) == static_cast<long>(ker.size() - rank(D0)));
        CHECK(h.at(1) == static_cast<long>(6 - rank(D1) - rank(D0)));
        CHECK(h.at(2) == static_cast<long>(4 - rank(D1)));
    }
}
