#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <thread>

#include "unipotent/fields.hpp"

using namespace unipotent;
using namespace unipotent::fields;

namespace {

using FPoly = upoly::Poly<FqField>;

FPoly int_poly(const FqField& K, std::vector<std::int64_t> c) {
    FPoly f;
    for (auto x : c) f.push_back(K.from_int(x));
    upoly::trim(K, f);
    return f;
}

// Brute-force root count over a small level.
std::vector<Fq> brute_roots(const FqField& K, const FPoly& f) {
    std::vector<Fq> out;
    for (std::uint64_t i = 0; i < K.order(); ++i)
        if (K.is_zero(upoly::eval(K, f, K.element(i)))) out.push_back(K.element(i));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(PrimeFieldTest, RejectsComposite) {
    EXPECT_THROW(PrimeField(9), InvalidArgument);
    EXPECT_THROW(PrimeField(101), InvalidArgument);
    EXPECT_NO_THROW(PrimeField(97));
}

TEST(FieldTowerTest, LcmOfRequestedDegrees) {
    FieldTower t(3);
    const auto a = t.level_containing_degree(3);
    EXPECT_EQ(t.level(a).degree, 3);
    const auto b = t.level_containing_degree(4);
    EXPECT_EQ(t.level(b).degree, 12);
    EXPECT_EQ(t.level_containing_degree(3), a);
    EXPECT_EQ(t.level_containing_degree(6), b);
}

TEST(FieldTowerTest, CubeRootsOfUnityOverF2) {
    FieldTower t(2);
    auto K = t.prime_field();
    const auto f = int_poly(K, {1, 1, 1});
    EXPECT_EQ(t.level(t.level_with_root(f, 0)).degree, 2);
    auto r = t.roots(f, 0);
    ASSERT_EQ(r.size(), 2u);
    auto L = t.field(r[0].level);
    EXPECT_EQ(L.degree(), 2);
    for (const auto& x : r) EXPECT_TRUE(L.is_zero(upoly::eval(L, int_poly(L, {1, 1, 1}), x)));
    EXPECT_NE(r[0], r[1]);
}

TEST(FieldTowerTest, DegreeCapIsEnforced) {
    FieldTower t(2, 6);
    EXPECT_THROW(t.level_containing_degree(7), CapExceeded);
    auto K = t.prime_field();
    // x^7 + x + 1 is irreducible over F_2.
    EXPECT_THROW(t.roots(int_poly(K, {1, 1, 0, 0, 0, 0, 0, 1}), 0), CapExceeded);
}

TEST(FieldTowerTest, RootOfTwistedPolynomialFoundByFactoring) {
    FieldTower t(3);
    auto K = t.field(t.level_containing_degree(2));
    Fq lambda;
    for (std::uint64_t i = 1; i < K.order(); ++i) {
        auto x = K.element(i);
        if (!K.eq(K.pow(x, 4), K.one()) && !K.eq(K.pow(x, 2), K.one())) {
            lambda = x;
            break;
        }
    }
    ASSERT_TRUE(K.eq(K.pow(lambda, 8), K.one()));
    // z - lambda z^3 has a root beyond 0 only once 1/lambda is a square.
    FPoly f{K.zero(), K.one(), K.zero(), K.neg(lambda)};
    f = upoly::sub(K, f, upoly::constant(K, K.zero()));
    const auto lvl = t.level_with_root(upoly::sub(K, upoly::Poly<FqField>{K.one(), K.zero(), K.neg(lambda)}, {}),
                                       K.index());
    // Oracle: smallest level in which brute force finds a root of 1 - lambda z^2.
    std::size_t expected = 0;
    for (std::size_t i = K.index();; ++i) {
        auto Li = t.field(i);
        FPoly g{Li.one(), Li.zero(), Li.neg(t.embed(lambda, i))};
        if (!brute_roots(Li, g).empty()) {
            expected = i;
            break;
        }
    }
    EXPECT_EQ(lvl, expected);
    auto all = t.roots(f, K.index());
    EXPECT_EQ(all.size(), 3u);
    auto L = t.field(all[0].level);
    FPoly fl;
    for (auto& c : f) fl.push_back(t.embed(c, L.index()));
    for (auto& r : all) EXPECT_TRUE(L.is_zero(upoly::eval(L, fl, r)));
}

TEST(FrobeniusTest, FixesPrimeField) {
    FieldTower t(5);
    auto K = t.prime_field();
    for (int a = 0; a < 5; ++a) EXPECT_EQ(t.frobenius(K.from_int(a), 5), K.from_int(a));
}

TEST(FrobeniusTest, GeneratorOfF4) {
    FieldTower t(2);
    auto K = t.field(t.level_containing_degree(2));
    const auto x = K.generator();
    // The only irreducible quadratic over F_2 is x^2 + x + 1.
    EXPECT_EQ(K.level().poly, (std::vector<std::uint32_t>{1, 1, 1}));
    EXPECT_EQ(K.frobenius(x, 1), K.add(x, K.one()));
}

TEST(FrobeniusTest, InversePair) {
    FieldTower t(7);
    auto K = t.field(t.level_containing_degree(5));
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        auto x = K.random(rng);
        EXPECT_EQ(K.frobenius(K.frobenius(x, 1), -1), x);
        EXPECT_EQ(K.frobenius(K.frobenius(x, -3), 3), x);
    }
}

TEST(FrobeniusTest, RingHomomorphismProperty) {
    for (std::int64_t p : {2, 3, 5}) {
        FieldTower t(p);
        auto K = t.field(t.level_containing_degree(6));
        std::mt19937_64 rng(p);
        for (int i = 0; i < 200; ++i) {
            auto x = K.random(rng), y = K.random(rng);
            EXPECT_EQ(K.frobenius(K.add(x, y), 1), K.add(K.frobenius(x, 1), K.frobenius(y, 1)));
            EXPECT_EQ(K.frobenius(K.mul(x, y), 1), K.mul(K.frobenius(x, 1), K.frobenius(y, 1)));
            // Oracle: direct exponentiation.
            EXPECT_EQ(K.frobenius(x, 1), K.pow(x, static_cast<std::uint64_t>(p)));
        }
    }
}

TEST(FrobeniusTest, FullPowerIsIdentityOnEveryLevel) {
    FieldTower t(3);
    t.level_containing_degree(2);
    t.level_containing_degree(6);
    t.level_containing_degree(12);
    std::mt19937_64 rng(3);
    for (std::size_t i = 0; i < t.num_levels(); ++i) {
        auto K = t.field(i);
        for (int j = 0; j < 20; ++j) {
            auto x = K.random(rng);
            EXPECT_EQ(K.frobenius(x, K.degree()), x);
            EXPECT_EQ(K.pow(x, K.order()), x);
        }
    }
}

TEST(FieldArithmeticTest, InverseAndAxioms) {
    FieldTower t(3);
    auto K = t.field(t.level_containing_degree(7));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto x = K.random(rng), y = K.random(rng), z = K.random(rng);
        EXPECT_EQ(K.mul(x, K.add(y, z)), K.add(K.mul(x, y), K.mul(x, z)));
        EXPECT_EQ(K.mul(K.mul(x, y), z), K.mul(x, K.mul(y, z)));
        if (!K.is_zero(x)) EXPECT_EQ(K.mul(x, K.inv(x)), K.one());
    }
}

TEST(EmbeddingTest, HomomorphismCommutingWithFrobenius) {
    FieldTower t(2);
    t.level_containing_degree(2);
    t.level_containing_degree(4);
    t.level_containing_degree(12);
    std::mt19937_64 rng(9);
    for (std::size_t i = 0; i + 1 < t.num_levels(); ++i) {
        for (std::size_t j = i + 1; j < t.num_levels(); ++j) {
            auto A = t.field(i), B = t.field(j);
            for (int n = 0; n < 30; ++n) {
                auto x = A.random(rng), y = A.random(rng);
                EXPECT_EQ(t.embed(A.add(x, y), j), B.add(t.embed(x, j), t.embed(y, j)));
                EXPECT_EQ(t.embed(A.mul(x, y), j), B.mul(t.embed(x, j), t.embed(y, j)));
                EXPECT_EQ(t.embed(A.frobenius(x, 1), j), B.frobenius(t.embed(x, j), 1));
            }
            // Path independence through every intermediate level.
            for (std::size_t k = i + 1; k < j; ++k) {
                auto x = A.random(rng);
                EXPECT_EQ(t.embed(t.embed(x, k), j), t.embed(x, j));
            }
        }
    }
}

TEST(RootsTest, SmallExamples) {
    FieldTower t(3);
    auto K = t.prime_field();
    auto r = t.roots(int_poly(K, {-1, 0, 1}), 0);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0], K.from_int(1));
    EXPECT_EQ(r[1], K.from_int(2));

    for (std::int64_t p : {2, 5, 7}) {
        FieldTower tp(p);
        auto Kp = tp.prime_field();
        std::vector<std::int64_t> c(p + 1, 0);
        c[1] = -1;
        c[p] = 1;
        auto rr = tp.roots(int_poly(Kp, c), 0);
        ASSERT_EQ(rr.size(), static_cast<std::size_t>(p));
        for (std::int64_t a = 0; a < p; ++a) EXPECT_EQ(rr[a], Kp.from_int(a));
    }
}

TEST(RootsTest, MultiplicitiesAndFullSplitting) {
    FieldTower t(5);
    auto K = t.prime_field();
    // (x-1)^3 (x^2 + 2) (x^3 + x + 1): splitting degree lcm(1, 2, 3) = 6.
    auto f = upoly::mul(K, upoly::mul(K, int_poly(K, {-1, 1}), upoly::mul(K, int_poly(K, {-1, 1}), int_poly(K, {-1, 1}))),
                        upoly::mul(K, int_poly(K, {2, 0, 1}), int_poly(K, {1, 1, 0, 1})));
    auto r = t.roots(f, 0);
    EXPECT_EQ(r.size(), 8u);
    auto L = t.field(r[0].level);
    EXPECT_EQ(L.degree(), 6);
    FPoly prod = upoly::constant(L, L.one());
    for (auto& x : r) prod = upoly::mul(L, prod, upoly::linear(L, x));
    FPoly fl;
    for (auto& c : f) fl.push_back(t.embed(c, L.index()));
    EXPECT_EQ(prod, upoly::monic(L, fl));
    EXPECT_TRUE(std::is_sorted(r.begin(), r.end()));
}

TEST(RootsTest, RandomPolynomialsAgainstBruteForce) {
    FieldTower t(3);
    auto K = t.field(t.level_containing_degree(2));
    t.level_containing_degree(4);
    std::mt19937_64 rng(21);
    for (int n = 0; n < 30; ++n) {
        FPoly f;
        for (int i = 0; i < 5; ++i) f.push_back(K.random(rng));
        f.push_back(K.one());
        auto lvl = t.level_with_root(f, K.index());
        for (std::size_t i = K.index(); i < lvl; ++i) {
            auto Li = t.field(i);
            FPoly g;
            for (auto& c : f) g.push_back(t.embed(c, i));
            EXPECT_TRUE(brute_roots(Li, g).empty());
        }
        auto Ll = t.field(lvl);
        FPoly g;
        for (auto& c : f) g.push_back(t.embed(c, lvl));
        if (Ll.degree() <= 8) EXPECT_EQ(brute_roots(Ll, g), t.roots_in_level(f, lvl));
    }
}

TEST(SerializationTest, RoundTripAndValidation) {
    FieldTower t(3);
    t.level_containing_degree(2);
    t.level_containing_degree(6);
    auto j = t.to_json();
    auto u = FieldTower::from_json(j);
    ASSERT_EQ(u->num_levels(), t.num_levels());
    for (std::size_t i = 0; i < t.num_levels(); ++i) {
        EXPECT_EQ(u->level(i).poly, t.level(i).poly);
        EXPECT_EQ(u->level(i).prev_generator_image, t.level(i).prev_generator_image);
    }
    auto x = t.field(2).generator();
    EXPECT_EQ(u->element_from_json(t.element_to_json(x)), x);
    EXPECT_EQ(t.level_descriptor(1)["degree"], 2);

    auto bad = j;
    bad["levels"][1]["poly"] = {2, 0, 1};  // x^2 - 1 is reducible
    EXPECT_THROW(FieldTower::from_json(bad), InvalidArgument);
}

TEST(SerializationTest, SameSeedSameTower) {
    FieldTower a(7), b(7);
    a.level_containing_degree(4);
    b.level_containing_degree(4);
    EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(ConcurrencyTest, ParallelReadersDuringExtension) {
    FieldTower t(2, 24);
    auto K = t.field(t.level_containing_degree(4));
    std::vector<std::thread> threads;
    std::vector<int> ok(4, 0);
    for (int w = 0; w < 4; ++w)
        threads.emplace_back([&, w] {
            t.level_containing_degree(w % 2 ? 8 : 12);
            std::mt19937_64 rng(w);
            auto x = K.random(rng);
            ok[w] = K.frobenius(x, 4) == x;
        });
    for (auto& th : threads) th.join();
    for (int v : ok) EXPECT_EQ(v, 1);
    for (std::size_t i = 1; i < t.num_levels(); ++i) EXPECT_EQ(t.level(i).degree % t.level(i - 1).degree, 0);
}
