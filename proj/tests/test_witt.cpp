#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "unipotent/galois_ring.hpp"
#include "unipotent/witt.hpp"

using namespace unipotent;
using namespace unipotent::witt;
using fields::FieldTower;
using fields::Fq;
using fields::FqField;

namespace {

// Independent oracle: Witt arithmetic on integer lifts through ghost components,
// inverting the ghost map exactly over Z, then reducing mod p.
std::vector<BigInt> ghost_of(const std::vector<BigInt>& a, std::int64_t p) {
    std::vector<BigInt> g;
    for (std::size_t n = 0; n < a.size(); ++n) {
        BigInt acc = 0;
        for (std::size_t i = 0; i <= n; ++i)
            acc += boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(i)) *
                   boost::multiprecision::pow(a[i], static_cast<unsigned>(ipow(p, static_cast<int>(n - i))));
        g.push_back(acc);
    }
    return g;
}

std::vector<BigInt> unghost(const std::vector<BigInt>& g, std::int64_t p) {
    std::vector<BigInt> a;
    for (std::size_t n = 0; n < g.size(); ++n) {
        BigInt rest = g[n];
        for (std::size_t i = 0; i < n; ++i)
            rest -= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(i)) *
                    boost::multiprecision::pow(a[i], static_cast<unsigned>(ipow(p, static_cast<int>(n - i))));
        BigInt d = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(n));
        EXPECT_EQ(rest % d, 0);
        a.push_back(rest / d);
    }
    return a;
}

std::vector<std::int64_t> oracle(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y,
                                 std::int64_t p, bool multiply) {
    std::vector<BigInt> X(x.begin(), x.end()), Y(y.begin(), y.end());
    auto gx = ghost_of(X, p), gy = ghost_of(Y, p);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] = multiply ? BigInt(gx[i] * gy[i]) : BigInt(gx[i] + gy[i]);
    auto a = unghost(gx, p);
    std::vector<std::int64_t> out;
    for (auto& c : a) {
        BigInt r = c % p;
        if (r < 0) r += p;
        out.push_back(static_cast<std::int64_t>(r));
    }
    return out;
}

std::vector<std::int64_t> as_ints(const FqField& k, const WittVector<FqField>& v) {
    std::vector<std::int64_t> out;
    for (auto& c : v.a) out.push_back(k.coeffs(c)[0]);
    return out;
}

}  // namespace

TEST(WittPolynomialsTest, GhostIdentitiesExact) {
    for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {5, 2}, {7, 2}}) {
        auto w = WittPolynomials::get(p, r);
        EXPECT_TRUE(w->verify_ghost_identities()) << "p=" << p << " r=" << r;
        EXPECT_TRUE(w->spot_check(4));
    }
}

TEST(WittPolynomialsTest, KnownLowDegreeShapes) {
    auto w = WittPolynomials::get(2, 2);
    // S_1 = -(x0 y0) over Z for p = 2, i.e. x1 + y1 - x0 y0.
    IntPoly expect(4);
    expect.add_term({0, 1, 0, 0}, 1);
    expect.add_term({0, 0, 0, 1}, 1);
    expect.add_term({1, 0, 1, 0}, -1);
    EXPECT_EQ(w->sum(1), expect);
}

TEST(WittPolynomialsTest, LengthCapAndSerialization) {
    EXPECT_THROW(WittPolynomials::get(2, 5), CapExceeded);
    EXPECT_NO_THROW(WittPolynomials::get(2, 5, 5));
    EXPECT_THROW(WittPolynomials::get(97, 3), CapExceeded);
    auto w = WittPolynomials::get(3, 2);
    auto back = WittPolynomials::from_json(w->to_json());
    EXPECT_EQ(back.sum(1), w->sum(1));
    EXPECT_EQ(back.product(1), w->product(1));
    EXPECT_TRUE(back.spot_check(3));

    auto dir = std::filesystem::temp_directory_path() / "unipotent_witt_cache_test";
    std::filesystem::remove_all(dir);
    auto file = dir / "witt_p3_r2.json";
    w->save(file);
    ASSERT_TRUE(std::filesystem::exists(file));
    std::ifstream in(file);
    auto loaded = WittPolynomials::from_json(nlohmann::json::parse(in));
    EXPECT_EQ(loaded.negation(1), w->negation(1));
    std::filesystem::remove_all(dir);

    auto bad = w->to_json();
    bad["version"] = 99;
    EXPECT_THROW(WittPolynomials::from_json(bad), InvalidArgument);
}

TEST(WittArithmeticTest, SpecExamplesAgainstIntegerOracle) {
    FieldTower t2(2);
    auto F2 = t2.prime_field();
    WittRing<FqField> W2(F2, 2);
    auto one = W2.teichmuller(F2.one());
    auto s = W2.add(one, one);
    EXPECT_EQ(as_ints(F2, s), oracle({1, 0}, {1, 0}, 2, false));
    EXPECT_EQ(as_ints(F2, s), (std::vector<std::int64_t>{0, 1}));

    FieldTower t3(3);
    auto F3 = t3.prime_field();
    WittRing<FqField> W3(F3, 2);
    auto one3 = W3.teichmuller(F3.one());
    auto three = W3.add(W3.add(one3, one3), one3);
    auto two_oracle = oracle({1, 0}, {1, 0}, 3, false);
    auto three_oracle = oracle(two_oracle, {1, 0}, 3, false);
    EXPECT_EQ(as_ints(F3, three), three_oracle);
    // 3 = V(1) in W(F_3).
    EXPECT_EQ(as_ints(F3, three), (std::vector<std::int64_t>{0, 1}));

    auto a = W3.from_components({F3.from_int(2), F3.from_int(1)});
    EXPECT_TRUE(W3.is_zero(W3.mul(a, W3.zero())));
}

TEST(WittArithmeticTest, RandomPrimeFieldVectorsMatchOracle) {
    std::mt19937_64 rng(1);
    for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 3}, {5, 2}}) {
        FieldTower t(p);
        auto K = t.prime_field();
        WittRing<FqField> W(K, r);
        std::uniform_int_distribution<int> d(0, p - 1);
        for (int n = 0; n < 40; ++n) {
            std::vector<std::int64_t> x(r), y(r);
            for (auto& c : x) c = d(rng);
            for (auto& c : y) c = d(rng);
            std::vector<Fq> xa, ya;
            for (int i = 0; i < r; ++i) {
                xa.push_back(K.from_int(x[i]));
                ya.push_back(K.from_int(y[i]));
            }
            auto X = W.from_components(xa), Y = W.from_components(ya);
            EXPECT_EQ(as_ints(K, W.add(X, Y)), oracle(x, y, p, false));
            EXPECT_EQ(as_ints(K, W.mul(X, Y)), oracle(x, y, p, true));
            EXPECT_TRUE(W.is_zero(W.add(X, W.neg(X))));
        }
    }
}

TEST(WittArithmeticTest, GhostHomomorphismOverZmod) {
    std::mt19937_64 rng(2);
    for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {3, 3}, {5, 2}}) {
        ZmodRing Z(p, r + 2);
        WittRing<ZmodRing> W(Z, r);
        for (int n = 0; n < 100; ++n) {
            WittVector<ZmodRing> x, y;
            for (int i = 0; i < r; ++i) {
                x.a.push_back(rng() % Z.modulus());
                y.a.push_back(rng() % Z.modulus());
            }
            auto gs = W.ghost(W.add(x, y)), gm = W.ghost(W.mul(x, y));
            auto gx = W.ghost(x), gy = W.ghost(y);
            for (int i = 0; i < r; ++i) {
                EXPECT_EQ(gs[i], Z.add(gx[i], gy[i]));
                EXPECT_EQ(gm[i], Z.mul(gx[i], gy[i]));
            }
        }
    }
}

TEST(WittArithmeticTest, RingAxiomsOverFqAndNilpotentRing) {
    std::mt19937_64 rng(3);
    FieldTower t(2);
    auto K = t.field(t.level_containing_degree(3));
    WittRing<FqField> W(K, 3);
    auto rnd = [&] {
        std::vector<Fq> a;
        for (int i = 0; i < 3; ++i) a.push_back(K.random(rng));
        return W.from_components(a);
    };
    for (int n = 0; n < 100; ++n) {
        auto x = rnd(), y = rnd(), z = rnd();
        EXPECT_EQ(W.add(x, y), W.add(y, x));
        EXPECT_EQ(W.add(W.add(x, y), z), W.add(x, W.add(y, z)));
        if (n < 30) {
            EXPECT_EQ(W.mul(x, W.add(y, z)), W.add(W.mul(x, y), W.mul(x, z)));
            EXPECT_EQ(W.mul(W.mul(x, y), z), W.mul(x, W.mul(y, z)));
        }
    }

    NilpotentPolyRing R(3, {"u", "v"}, {3, 9});
    WittRing<NilpotentPolyRing> WR(R, 2);
    auto rndR = [&] {
        std::vector<NilpotentPolyRing::elem> a;
        for (int i = 0; i < 2; ++i) {
            auto e = R.zero();
            for (auto& c : e) c = rng() % 3;
            a.push_back(e);
        }
        return WR.from_components(a);
    };
    for (int n = 0; n < 100; ++n) {
        auto x = rndR(), y = rndR(), z = rndR();
        EXPECT_EQ(WR.add(x, y), WR.add(y, x));
        EXPECT_EQ(WR.add(WR.add(x, y), z), WR.add(x, WR.add(y, z)));
    }
}

TEST(WittOperatorsTest, TeichmullerMultiplicative) {
    std::mt19937_64 rng(4);
    FieldTower t(3);
    auto K = t.field(t.level_containing_degree(2));
    WittRing<FqField> W(K, 3);
    EXPECT_TRUE(W.is_zero(W.teichmuller(K.zero())));
    for (int n = 0; n < 100; ++n) {
        auto x = K.random(rng), y = K.random(rng);
        EXPECT_EQ(W.mul(W.teichmuller(x), W.teichmuller(y)), W.teichmuller(K.mul(x, y)));
    }
}

TEST(WittOperatorsTest, FrobeniusVerschiebungRelations) {
    std::mt19937_64 rng(5);
    for (int p : {2, 3}) {
        FieldTower t(p);
        auto K = t.field(t.level_containing_degree(2));
        WittRing<FqField> W(K, 3);
        for (int n = 0; n < 100; ++n) {
            std::vector<Fq> a;
            for (int i = 0; i < 3; ++i) a.push_back(K.random(rng));
            auto x = W.from_components(a);
            const auto px = W.times_int(x, p);
            EXPECT_EQ(W.verschiebung(W.frobenius(x)), px);
            EXPECT_EQ(W.frobenius(W.verschiebung(x)), px);
            auto xx = K.random(rng);
            EXPECT_EQ(W.frobenius(W.teichmuller(xx)), W.teichmuller(K.pow(xx, p)));
        }
    }
    NilpotentPolyRing R(2, {"x"}, {2});
    WittRing<NilpotentPolyRing> WR(R, 3);
    EXPECT_TRUE(WR.is_zero(WR.frobenius(WR.teichmuller(R.var(0)))));
}

TEST(WfIdentityTest, ProductVanishes) {
    auto r23 = verify_wf_ring_identity(2, 3);
    EXPECT_TRUE(r23.pass);
    auto r32 = verify_wf_ring_identity(3, 2);
    EXPECT_TRUE(r32.pass);
    auto r22 = verify_wf_ring_identity(2, 2);
    EXPECT_TRUE(r22.pass);
    EXPECT_FALSE(r22.n_is_zero);
    EXPECT_TRUE(r22.n_first_component_zero);
    EXPECT_TRUE(r22.n_frobenius_zero);
    // n = (0, x y) for p = 2.
    EXPECT_EQ(r22.n_components[1], "x*y");
    EXPECT_THROW(verify_wf_ring_identity(2, 1), InvalidArgument);
}

TEST(GaloisRingTest, SigmaFixesIntegersAndHasOrderM) {
    FieldTower t(2);
    auto K = t.field(t.level_containing_degree(2));
    GaloisRing G(K, 2);
    ASSERT_EQ(G.order(), 16u);
    for (int a = 0; a < 4; ++a) EXPECT_EQ(G.sigma(G.from_int(a)), G.from_int(a));
    int moved = 0;
    for (std::uint64_t i = 0; i < G.order(); ++i) {
        auto x = G.element(i);
        EXPECT_EQ(G.sigma(G.sigma(x)), x);
        moved += G.sigma(x) != x;
    }
    EXPECT_GT(moved, 0);
}

TEST(GaloisRingTest, SigmaIsFrobeniusLiftAutomorphism) {
    std::mt19937_64 rng(6);
    for (auto [p, m, r] : std::vector<std::tuple<int, int, int>>{{2, 3, 4}, {3, 2, 3}, {3, 3, 2}, {5, 2, 3}}) {
        FieldTower t(p);
        auto K = t.field(t.level_containing_degree(m));
        GaloisRing G(K, r);
        for (int n = 0; n < 50; ++n) {
            auto x = G.random(rng), y = G.random(rng);
            EXPECT_EQ(G.sigma(G.add(x, y)), G.add(G.sigma(x), G.sigma(y)));
            EXPECT_EQ(G.sigma(G.mul(x, y)), G.mul(G.sigma(x), G.sigma(y)));
            EXPECT_EQ(G.reduce(G.sigma(x)), K.frobenius(G.reduce(x), 1));
            EXPECT_EQ(G.sigma(x, m), x);
            EXPECT_EQ(G.sigma(G.sigma(x, -1)), x);
            auto a = K.random(rng);
            EXPECT_EQ(G.reduce(G.teichmuller(a)), a);
            EXPECT_EQ(G.from_digits(G.digits(x)), x);
            if (G.is_unit(x)) EXPECT_EQ(G.mul(x, G.inv(x)), G.one());
        }
    }
}

TEST(GaloisRingTest, ConversionIsRingIsomorphismWithWittVectors) {
    std::mt19937_64 rng(7);
    for (auto [p, m, r] : std::vector<std::tuple<int, int, int>>{{2, 3, 3}, {3, 2, 2}, {2, 2, 4}, {5, 1, 2}}) {
        FieldTower t(p);
        auto K = t.field(t.level_containing_degree(m));
        GaloisRing G(K, r);
        WittRing<FqField> W(K, r);
        for (int n = 0; n < 30; ++n) {
            std::vector<Fq> a, b;
            for (int i = 0; i < r; ++i) {
                a.push_back(K.random(rng));
                b.push_back(K.random(rng));
            }
            auto x = W.from_components(a), y = W.from_components(b);
            auto gx = witt_to_galois(G, a), gy = witt_to_galois(G, b);
            EXPECT_EQ(galois_to_witt(G, gx), a);
            EXPECT_EQ(witt_to_galois(G, W.add(x, y).a), G.add(gx, gy));
            EXPECT_EQ(witt_to_galois(G, W.mul(x, y).a), G.mul(gx, gy));
            EXPECT_EQ(witt_to_galois(G, W.frobenius(x).a), G.sigma(gx));
            EXPECT_EQ(witt_to_galois(G, W.verschiebung(x).a), G.scale(G.sigma(gx, -1), p));
        }
    }
}
