#include "doctest.h"

#include <random>

#include "koszulab/errors.hpp"
#include "koszulab/twisted.hpp"
#include "seed.hpp"

using namespace koszulab;

namespace {

long binomial(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct Fixture {
    SpanEngine e{builtin("qpois_dual")};
    TwistedAlgebra a{e};
    TwistedRightModule mod{a};
};

// Product of two basis vectors followed by relabelling, in the algebra or
// module that owns the lower factor.
SparseVector times(DerivedCollection& lower, int lw, int lc, const SparseVector& x, int uw, int uc, int j) {
    std::map<int, Rational> acc;
    for (const auto& [i, c] : x)
        for (const auto& [q, y] : lower.multiply(lw, lc, i, uw, uc, j)) acc[q] += c * y;
    return from_map(acc);
}

}  // namespace

TEST_CASE("derived dimensions of qpois_dual") {
    Fixture f;
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; n <= 4; ++n) {
            CAPTURE(m);
            CAPTURE(n);
            CHECK(f.a.dim(m, n, 4) == (m == n && m >= 1 ? 1 : 0));
            CHECK(f.mod.dim(m, n, 4) == (n == m + 1 ? 1 : 0));
        }
}

TEST_CASE("weight-two presentation of the derived algebra") {
    Fixture f;
    const QuadraticCheck q = weight_two_check(f.a, 2, 2);
    CHECK(q.free == 4);
    CHECK(q.relations == 3);
    CHECK(q.algebra == 1);
    const QuadraticCheck qm = weight_two_check(f.mod, 1, 2);
    CHECK(qm.free == 2);
    CHECK(qm.relations == 1);
    CHECK(qm.algebra == 1);
}

TEST_CASE("derived product is associative and the action is compatible") {
    Fixture f;
    for (int w1 = 1; w1 <= 2; ++w1)
        for (int w2 = 1; w2 <= 2; ++w2)
            for (int w3 = 1; w1 + w2 + w3 <= 4; ++w3) {
                CAPTURE(w1);
                CAPTURE(w2);
                CAPTURE(w3);
                for (DerivedCollection* lower : {static_cast<DerivedCollection*>(&f.a), static_cast<DerivedCollection*>(&f.mod)}) {
                    // (x y) z against x (y z) on basis vectors of the single components.
                    const SparseVector xy = lower->multiply(w1, 0, 0, w2, 0, 0);
                    const SparseVector left = times(*lower, w1 + w2, 0, xy, w3, 0, 0);
                    const SparseVector yz = f.a.multiply(w2, 0, 0, w3, 0, 0);
                    std::map<int, Rational> acc;
                    for (const auto& [j, c] : yz)
                        for (const auto& [q, y] : lower->multiply(w1, 0, 0, w2 + w3, 0, j)) acc[q] += c * y;
                    CHECK(left == from_map(acc));
                    CHECK(left == SparseVector{{0, Rational(1)}});
                }
            }
}

TEST_CASE("inversion degree") {
    CHECK(inversion_degree(PartitionPair{{{1}, {2}}, {{1}, {2}}}) == 0);
    CHECK(inversion_degree(PartitionPair{{{2}, {1}}, {{1}, {2}}}) == 1);
    CHECK(inversion_degree(PartitionPair{{{2}, {1}}, {{2}, {1}}}) == 2);
    CHECK(inversion_degree(PartitionPair{{{2, 3}, {1}}, {{1, 3}, {2}}}) == 3);
    CHECK_NOTHROW(validate(PartitionPair{{{2}, {1}}, {{2}, {1}}}, 2));
    CHECK_THROWS_AS(validate(PartitionPair{{{1, 2}}, {{1}}}, 2), ArityMismatch);
    CHECK_THROWS_AS(validate(PartitionPair{{{1}, {1}}, {{1}, {2}}}, 2), ArityMismatch);
}

TEST_CASE("twisted bar examples") {
    Fixture f;
    const TwistedBarComplex one = bar_tw(f.a, 1);
    CHECK(one.complex.dims == std::vector<int>{1});
    CHECK(one.complex.homology.at(0) == 1);
    REQUIRE(one.basis[0].size() == 1);
    CHECK(one.basis[0][0].ins == std::vector<std::vector<int>>{{1}});

    const TwistedBarComplex two = bar_tw(f.a, 2);
    // Syzygy 0 holds the 4 two-piece chains, syzygy 1 the single piece.
    CHECK(two.complex.dims == std::vector<int>{4, 1});
    CHECK(rank(two.complex.differentials[0]) == 1);
    CHECK(two.complex.homology == HomologyProfile{{0, 3}, {1, 0}});
}

TEST_CASE("twisted bar complexes are concentrated in syzygy degree 0") {
    Fixture f;
    // Dimensions b_N of the dual coalgebra satisfy
    // sum_k (-1)^k C(N,k)^2 b_(N-k) = 0 for N >= 1.
    std::vector<long> b{1};
    for (int N = 1; N <= 4; ++N) {
        CAPTURE(N);
        const TwistedBarComplex c = bar_tw(f.a, N);
        CHECK(c.complex.positive_syzygies().empty());
        long next = 0;
        for (int k = 1; k <= N; ++k) next += (k % 2 ? 1 : -1) * binomial(N, k) * binomial(N, k) * b[N - k];
        b.push_back(next);
        CHECK(c.complex.homology.at(0) == b[N]);
        CHECK(bar_tw(f.a, N, &f.mod).complex.positive_syzygies().empty());
    }
}

TEST_CASE("partition path agrees with the generic path") {
    Fixture f;
    REQUIRE(partition_path_applies(f.a, &f.mod));
    for (int N = 1; N <= 4; ++N)
        for (TwistedRightModule* m : {static_cast<TwistedRightModule*>(nullptr), &f.mod}) {
            CAPTURE(N);
            CAPTURE(m != nullptr);
            const TwistedBarComplex g = bar_tw(f.a, N, m, TwistedPath::Generic);
            const TwistedBarComplex p = bar_tw(f.a, N, m, TwistedPath::Partition);
            CHECK(g.basis == p.basis);
            REQUIRE(g.complex.differentials.size() == p.complex.differentials.size());
            for (std::size_t s = 0; s < g.complex.differentials.size(); ++s)
                CHECK(g.complex.differentials[s] == p.complex.differentials[s]);
        }
}

TEST_CASE("the differential never increases the inversion degree") {
    Fixture f;
    for (TwistedRightModule* m : {static_cast<TwistedRightModule*>(nullptr), &f.mod}) {
        const TwistedBarComplex c = bar_tw(f.a, 4, m);
        for (std::size_t s = 0; s < c.complex.differentials.size(); ++s) {
            const SparseMatrix& d = c.complex.differentials[s];
            for (int r = 0; r < d.rows(); ++r)
                for (const auto& [col, x] : d.row(r))
                    CHECK(inversion_degree(c.basis[s + 1][r]) <= inversion_degree(c.basis[s][col]));
        }
    }
}

TEST_CASE("planar subcomplex") {
    const PlanarComplex one = planar_subcomplex(1);
    CHECK(one.complex.homology == HomologyProfile{{0, 1}});
    const PlanarComplex two = planar_subcomplex(2);
    CHECK(two.basis[0] == std::vector<std::vector<int>>{{1, 1}});
    CHECK(two.basis[1] == std::vector<std::vector<int>>{{2}});
    CHECK(two.complex.differentials[0].get(0, 0) == 1);
    for (int N = 1; N <= 6; ++N) {
        CAPTURE(N);
        const PlanarComplex p = planar_subcomplex(N);
        for (int k = 1; k <= N; ++k) CHECK(p.complex.dims[N - k] == binomial(N - 1, k - 1));
        for (const auto& [s, h] : p.complex.homology) CHECK(h == (N == 1 && s == 0 ? 1 : 0));
    }
}

TEST_CASE("planar subcomplex is the inversion-free part of the twisted bar complex") {
    Fixture f;
    for (int N = 1; N <= 4; ++N) {
        CAPTURE(N);
        const TwistedBarComplex tw = bar_tw(f.a, N);
        const PlanarComplex pl = planar_subcomplex(N);
        // Inversion-free chains, indexed by their block sizes.
        std::vector<std::map<std::vector<int>, int>> flat(N);
        for (int s = 0; s < N; ++s) {
            for (std::size_t i = 0; i < tw.basis[s].size(); ++i) {
                const TwistedChain& c = tw.basis[s][i];
                if (inversion_degree(c) != 0) continue;
                std::vector<int> sizes;
                for (const auto& in : c.ins) sizes.push_back(static_cast<int>(in.size()));
                flat[s][sizes] = static_cast<int>(i);
            }
            CHECK(flat[s].size() == pl.basis[s].size());
        }
        for (int s = 0; s + 1 < N; ++s) {
            const SparseMatrix& d = tw.complex.differentials[s];
            const SparseMatrix& e = pl.complex.differentials[s];
            for (std::size_t col = 0; col < pl.basis[s].size(); ++col)
                for (std::size_t row = 0; row < pl.basis[s + 1].size(); ++row)
                    CHECK(d.get(flat[s + 1].at(pl.basis[s + 1][row]), flat[s].at(pl.basis[s][col])) ==
                          e.get(static_cast<int>(row), static_cast<int>(col)));
        }
    }
}

TEST_CASE("random relabelling commutes with the derived product") {
    Fixture f;
    std::mt19937_64 rng(test_seed());
    for (int trial = 0; trial < 20; ++trial) {
        const int w1 = 1 + static_cast<int>(rng() % 2), w2 = 1 + static_cast<int>(rng() % 2);
        Perm p1 = identity_perm(w1), p2 = identity_perm(w2), q1 = identity_perm(w1), q2 = identity_perm(w2);
        std::shuffle(p1.begin(), p1.end(), rng);
        std::shuffle(p2.begin(), p2.end(), rng);
        std::shuffle(q1.begin(), q1.end(), rng);
        std::shuffle(q2.begin(), q2.end(), rng);
        // Relabel the factors, then multiply; against multiply, then relabel
        // by the block-diagonal permutation.
        const SparseVector x = f.a.act(w1, 0, 0, p1, q1);
        const SparseVector y = f.a.act(w2, 0, 0, p2, q2);
        SparseVector lhs;
        {
            std::map<int, Rational> acc;
            for (const auto& [i, a] : x)
                for (const auto& [j, b] : y)
                    for (const auto& [q, c] : f.a.multiply(w1, 0, i, w2, 0, j)) acc[q] += a * b * c;
            lhs = from_map(acc);
        }
        Perm pin = p1, pout = q1;
        for (int v : p2) pin.push_back(v + w1);
        for (int v : q2) pout.push_back(v + w1);
        std::map<int, Rational> acc;
        for (const auto& [q, c] : f.a.multiply(w1, 0, 0, w2, 0, 0))
            for (const auto& [r, d] : f.a.act(w1 + w2, 0, q, pin, pout)) acc[r] += c * d;
        CHECK(lhs == from_map(acc));
    }
}
