#include <gtest/gtest.h>

#include <random>

#include "unipotent/semilinear.hpp"

using namespace unipotent;
using namespace unipotent::semilinear;

namespace {

FqMatrix random_matrix(const FqField& K, std::size_t d, std::mt19937_64& rng) {
    FqMatrix A = linalg::zeros(K, d, d);
    for (auto& x : A.data) x = K.random(rng);
    return A;
}

// Sparse-ish random operators so that nilpotent parts show up regularly.
FqMatrix random_mixed(const FqField& K, std::size_t d, std::mt19937_64& rng) {
    FqMatrix A = random_matrix(K, d, rng);
    std::uniform_int_distribution<int> coin(0, 2);
    for (auto& x : A.data)
        if (coin(rng) == 0) x = K.zero();
    return A;
}

Fq generator_of_units(const FqField& K) {
    const auto q = K.order();
    for (std::uint64_t i = 1; i < q; ++i) {
        auto x = K.element(i);
        bool ok = true;
        for (auto f : prime_factors(q - 1))
            if (K.pow(x, (q - 1) / f) == K.one()) ok = false;
        if (ok) return x;
    }
    throw std::logic_error("no generator");
}

// Brute-force count of F-fixed vectors in L^d.
std::uint64_t brute_fixed_count(const FqField& L, const FqMatrix& A) {
    const std::size_t d = A.rows;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= L.order();
    std::uint64_t count = 0;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<Fq> v(d);
        auto rest = idx;
        for (std::size_t i = 0; i < d; ++i) {
            v[i] = L.element(rest % L.order());
            rest /= L.order();
        }
        if (apply(L, A, v) == v) ++count;
    }
    return count;
}

}  // namespace

TEST(SplitTest, Examples) {
    FieldTower t(2);
    auto K = t.field(t.level_containing_degree(2));
    auto zero = make_operator(K.index(), linalg::zeros(K, 3, 3));
    auto s0 = ss_nilpotent_split(K, zero);
    EXPECT_EQ(s0.Vs.cols, 0u);
    EXPECT_EQ(s0.Vn.cols, 3u);
    EXPECT_EQ(s0.N, 1);

    auto id = make_operator(K.index(), linalg::identity(K, 3));
    auto s1 = ss_nilpotent_split(K, id);
    EXPECT_EQ(s1.Vs.cols, 3u);
    EXPECT_EQ(s1.Vn.cols, 0u);
    EXPECT_EQ(s1.N, 0);

    FqMatrix J = linalg::zeros(K, 2, 2);
    J(0, 1) = K.one();
    auto s2 = ss_nilpotent_split(K, make_operator(K.index(), J));
    EXPECT_EQ(s2.Vs.cols, 0u);
    EXPECT_EQ(s2.Vn.cols, 2u);
    EXPECT_EQ(s2.N, 2);
    EXPECT_THROW(make_operator(K.index(), linalg::zeros(K, 13, 13)), CapExceeded);
}

TEST(SplitTest, RandomOperatorInvariants) {
    std::mt19937_64 rng(10);
    for (int p : {2, 3, 5}) {
        FieldTower t(p);
        for (int m : {1, 2, 3}) {
            auto K = t.field(t.level_containing_degree(m));
            for (int n = 0; n < 30; ++n) {
                const std::size_t d = 1 + rng() % 6;
                auto T = make_operator(K.index(), random_mixed(K, d, rng));
                auto s = ss_nilpotent_split(K, T);
                EXPECT_EQ(s.Vs.cols + s.Vn.cols, d);
                EXPECT_EQ(linalg::rank(K, linalg::hconcat(K, s.Vs, s.Vn)), d);
                // Oracle: the image of F^d has already stabilized.
                EXPECT_EQ(s.Vs.cols, linalg::rank(K, iterate_matrix(K, T.A, static_cast<int>(d))));
                if (s.Vs.cols) {
                    auto M = restrict_to(K, T.A, s.Vs);
                    EXPECT_TRUE(linalg::inverse(K, M).has_value());
                }
                if (s.Vn.cols) {
                    auto AN = iterate_matrix(K, T.A, s.N);
                    EXPECT_TRUE(linalg::is_zero(K, linalg::multiply(K, AN, sigma(K, s.Vn, s.N))));
                }
                if (s.N > 0) {
                    auto prev = iterate_matrix(K, T.A, s.N - 1);
                    EXPECT_GT(linalg::rank(K, prev), s.Vs.cols);
                }
            }
        }
    }
}

TEST(FixedSpaceTest, IdentityOnF9Squared) {
    FieldTower t(3);
    auto K = t.field(t.level_containing_degree(2));
    auto T = make_operator(K.index(), linalg::identity(K, 2));
    auto fs = fixed_space(t, T, true);
    EXPECT_EQ(fs.base_fp_dim, 2u);
    EXPECT_EQ(fs.stabilized_dim, 2u);
    for (std::size_t c = 0; c < fs.basis.cols; ++c)
        for (std::size_t r = 0; r < 2; ++r) EXPECT_EQ(K.frobenius(fs.basis(r, c), 1), fs.basis(r, c));
}

TEST(FixedSpaceTest, NilpotentHasNoFixedVectors) {
    FieldTower t(2);
    auto K = t.field(t.level_containing_degree(2));
    FqMatrix J = linalg::zeros(K, 3, 3);
    J(0, 1) = K.generator();
    J(1, 2) = K.one();
    auto fs = fixed_space(t, make_operator(K.index(), J));
    EXPECT_EQ(fs.base_fp_dim, 0u);
    EXPECT_EQ(fs.stabilized_dim, 0u);
}

TEST(FixedSpaceTest, DiagonalGeneratorStabilizesAfterExtension) {
    FieldTower t(3);
    auto K = t.field(t.level_containing_degree(2));
    const auto lambda = generator_of_units(K);
    FqMatrix A = linalg::zeros(K, 1, 1);
    A(0, 0) = lambda;
    auto T = make_operator(K.index(), A);
    auto fs = fixed_space(t, T);
    EXPECT_LE(fs.base_fp_dim, 1u);
    EXPECT_EQ(fs.stabilized_dim, 1u);
    // Oracle: the fixed vectors are the roots of lambda x^3 - x; count them level by level.
    for (std::size_t lvl = K.index(); lvl <= fs.level; ++lvl) {
        auto L = t.field(lvl);
        upoly::Poly<FqField> f{L.zero(), L.neg(L.one()), L.zero(), t.embed(lambda, lvl)};
        const auto roots = t.roots_in_level(f, lvl);
        const std::uint64_t expect = lvl == fs.level ? 3 : (lvl == K.index() ? ipow(3, fs.base_fp_dim) : 0);
        if (lvl == fs.level || lvl == K.index()) EXPECT_EQ(roots.size(), expect);
    }
}

TEST(FixedSpaceTest, RandomOperatorsAgainstBruteForce) {
    std::mt19937_64 rng(12);
    for (int p : {2, 3}) {
        FieldTower t(p, 24);
        auto K = t.prime_field();
        for (int n = 0; n < 40; ++n) {
            const std::size_t d = 1 + rng() % 2;
            auto T = make_operator(0, random_mixed(K, d, rng));
            FixedSpace fs;
            try {
                fs = fixed_space(t, T);
            } catch (const CapExceeded&) {
                continue;
            }
            EXPECT_EQ(fs.stabilized_dim, fs.vs_dim);
            EXPECT_EQ(brute_fixed_count(K, T.A), static_cast<std::uint64_t>(ipow(p, fs.base_fp_dim)));
            auto L = t.field(fs.level);
            if (L.order() <= 4096 && d == 1)
                EXPECT_EQ(brute_fixed_count(L, embed(t, T.A, fs.level)), static_cast<std::uint64_t>(ipow(p, fs.stabilized_dim)));
        }
    }
}

TEST(FixedSpaceTest, StabilizedDimensionEqualsSemisimpleDimension) {
    std::mt19937_64 rng(13);
    int checked = 0, capped = 0;
    for (int p : {2, 3, 5}) {
        for (int n = 0; n < 40; ++n) {
            FieldTower t(p, 24);
            auto K = t.prime_field();
            const std::size_t d = 1 + rng() % 6;
            auto T = make_operator(0, random_mixed(K, d, rng));
            auto split = ss_nilpotent_split(K, T);
            // Independent prediction of the needed degree: order of F restricted to V_s.
            std::optional<int> order;
            if (split.Vs.cols) order = multiplicative_order(K, restrict_to(K, T.A, split.Vs), t.degree_cap());
            else order = 1;
            if (!order) {
                EXPECT_THROW(fixed_space(t, T), CapExceeded);
                ++capped;
                continue;
            }
            auto fs = fixed_space(t, T);
            EXPECT_EQ(fs.stabilized_dim, split.Vs.cols);
            EXPECT_EQ(t.level(fs.level).degree % *order, 0);
            auto L = t.field(fs.level);
            auto AL = embed(t, T.A, fs.level);
            for (std::size_t c = 0; c < fs.basis.cols; ++c) EXPECT_EQ(apply(L, AL, fs.basis.column(c)), fs.basis.column(c));
            ++checked;
        }
    }
    EXPECT_GT(checked, 40);
    RecordProperty("capped", capped);
}

TEST(TiltTest, Examples) {
    FieldTower t(3);
    auto K = t.field(t.level_containing_degree(2));
    auto nil = tilt_and_perfection(K, make_operator(K.index(), linalg::zeros(K, 2, 2)));
    EXPECT_EQ(nil.vs_dim, 0u);
    EXPECT_EQ(nil.rank, 0u);
    auto id = tilt_and_perfection(K, make_operator(K.index(), linalg::identity(K, 3)));
    EXPECT_EQ(id.rank, 3u);
    FqMatrix A = linalg::zeros(K, 3, 3);
    A(0, 0) = K.generator();
    A(1, 2) = K.one();
    auto mixed = tilt_and_perfection(K, make_operator(K.index(), A));
    EXPECT_EQ(mixed.vs_dim, 1u);
    EXPECT_EQ(mixed.rank, 1u);
    EXPECT_EQ(mixed.N, 2);

    std::mt19937_64 rng(14);
    for (int n = 0; n < 50; ++n) {
        auto T = make_operator(K.index(), random_mixed(K, 1 + rng() % 5, rng));
        auto w = tilt_and_perfection(K, T);
        EXPECT_EQ(w.rank, w.vs_dim);
    }
}

TEST(ColimTest, FixedTensorMatchesColimit) {
    FieldTower t(2);
    auto K = t.field(t.level_containing_degree(2));
    auto nil = colim_fixed_compare(t, make_operator(K.index(), linalg::zeros(K, 2, 2)));
    EXPECT_EQ(nil.fixed_dim, 0u);
    EXPECT_EQ(nil.colim_dim, 0u);
    EXPECT_TRUE(nil.is_isomorphism);
    auto id = colim_fixed_compare(t, make_operator(K.index(), linalg::identity(K, 3)));
    EXPECT_EQ(id.fixed_dim, 3u);
    EXPECT_TRUE(id.is_isomorphism);

    std::mt19937_64 rng(15);
    for (int p : {2, 3}) {
        FieldTower tp(p, 24);
        auto Kp = tp.prime_field();
        for (int n = 0; n < 30; ++n) {
            auto T = make_operator(0, random_mixed(Kp, 1 + rng() % 4, rng));
            try {
                auto c = colim_fixed_compare(tp, T);
                EXPECT_TRUE(c.is_isomorphism);
                EXPECT_EQ(c.colim_dim, ss_nilpotent_split(Kp, T).Vs.cols);
            } catch (const CapExceeded&) {
            }
        }
    }
}

TEST(SkewPolyTest, TwistRelationAndDegrees) {
    FieldTower t(3);
    auto K = t.field(t.level_containing_degree(4));
    SkewRing R(K);
    std::mt19937_64 rng(16);
    const auto F = R.monomial(K.one(), 1);
    auto rand_poly = [&](int deg) {
        std::vector<Fq> c;
        for (int i = 0; i <= deg; ++i) c.push_back(K.random(rng));
        if (K.is_zero(c.back())) c.back() = K.one();
        return R.from_coeffs(c);
    };
    for (int n = 0; n < 100; ++n) {
        const auto c = K.random(rng);
        EXPECT_EQ(R.mul(F, R.constant(c)), R.monomial(K.pow(c, 3), 1));
        auto f = rand_poly(rng() % 5), g = rand_poly(rng() % 5), h = rand_poly(rng() % 3);
        EXPECT_EQ(R.degree(R.mul(f, g)), R.degree(f) + R.degree(g));
        EXPECT_EQ(R.mul(R.mul(f, g), h), R.mul(f, R.mul(g, h)));
        EXPECT_EQ(R.mul(f, R.add(g, h)), R.add(R.mul(f, g), R.mul(f, h)));
    }
}

TEST(SkewPolyTest, DivisionIdentities) {
    std::mt19937_64 rng(17);
    for (int p : {2, 3, 5}) {
        FieldTower t(p);
        auto K = t.field(t.level_containing_degree(3));
        SkewRing R(K);
        for (int n = 0; n < 200; ++n) {
            std::vector<Fq> fc(1 + rng() % 8), gc(1 + rng() % 5);
            for (auto& x : fc) x = K.random(rng);
            for (auto& x : gc) x = K.random(rng);
            gc.back() = K.add(gc.back(), K.one());
            if (K.is_zero(gc.back())) gc.back() = K.one();
            auto f = R.from_coeffs(fc), g = R.from_coeffs(gc);
            auto [q, r] = R.divide_right(f, g);
            EXPECT_EQ(R.add(R.mul(q, g), r), f);
            EXPECT_LT(R.degree(r), R.degree(g));
            auto [q2, r2] = R.divide_left(f, g);
            EXPECT_EQ(R.add(R.mul(g, q2), r2), f);
            EXPECT_LT(R.degree(r2), R.degree(g));
        }
    }
}

TEST(SkewModuleTest, RanksAndTorsion) {
    FieldTower t(2);
    auto K = t.field(t.level_containing_degree(2));
    SkewRing R(K);
    SkewPolyModule free1{K.index(), 1, {}};
    auto i1 = skew_module_rank_and_torsion(K, free1);
    EXPECT_EQ(i1.free_rank, 1u);
    EXPECT_FALSE(i1.is_torsion);

    SkewPolyModule fn{K.index(), 1, {{R.monomial(K.one(), 3)}}};
    auto i2 = skew_module_rank_and_torsion(K, fn);
    EXPECT_TRUE(i2.is_torsion);
    EXPECT_EQ(i2.torsion_dim, 3u);

    SkewPolyModule f1{K.index(), 1, {{R.sub(R.monomial(K.one(), 1), R.one())}}};
    EXPECT_EQ(skew_module_rank_and_torsion(K, f1).torsion_dim, 1u);

    // Rows (F, 1) and (F^2, F^2 + 1) present k_sigma[F]/(F^3 - F^2 + F).
    SkewPolyModule two{K.index(), 2,
                       {{R.monomial(K.one(), 1), R.one()},
                        {R.monomial(K.one(), 2), R.add(R.monomial(K.one(), 2), R.one())}}};
    auto i3 = skew_module_rank_and_torsion(K, two);
    EXPECT_TRUE(i3.is_torsion);
    EXPECT_EQ(i3.torsion_dim, 3u);

    // A dependent pair leaves one free generator.
    SkewPolyModule dep{K.index(), 2,
                       {{R.monomial(K.one(), 1), R.one()}, {R.monomial(K.one(), 2), R.monomial(K.one(), 1)}}};
    auto i4 = skew_module_rank_and_torsion(K, dep);
    EXPECT_EQ(i4.free_rank, 1u);
    EXPECT_FALSE(i4.is_torsion);
}

TEST(SkewModuleTest, TorsionDimensionMatchesLinearAlgebra) {
    // For a single relation f of degree n, k_sigma[F]/(f) has dimension n; the action of F on
    // the basis 1, F, ..., F^{n-1} is a semilinear operator whose dimension must agree.
    std::mt19937_64 rng(18);
    FieldTower t(3);
    auto K = t.field(t.level_containing_degree(2));
    SkewRing R(K);
    for (int n = 0; n < 30; ++n) {
        std::vector<Fq> c(2 + rng() % 4);
        for (auto& x : c) x = K.random(rng);
        c.back() = K.one();
        auto f = R.from_coeffs(c);
        SkewPolyModule M{K.index(), 1, {{f}}};
        EXPECT_EQ(skew_module_rank_and_torsion(K, M).torsion_dim, static_cast<std::size_t>(R.degree(f)));
    }
}

TEST(ProfiniteTest, Presets) {
    FieldTower t(3);
    auto K = t.prime_field();
    EXPECT_FALSE(is_profinite(K, hom_module_preset(K, "G_a")));
    EXPECT_FALSE(is_profinite(K, hom_module_preset(K, "W", 3)));
    EXPECT_TRUE(is_profinite(K, hom_module_preset(K, "alpha_p")));
    for (int v = 1; v <= 4; ++v) EXPECT_TRUE(is_profinite(K, hom_module_preset(K, "alpha_p^v", v)));
    EXPECT_TRUE(is_profinite(K, hom_module_preset(K, "Z/p")));
    EXPECT_TRUE(is_profinite(K, hom_module_preset(K, "W_r", 3)));
    EXPECT_TRUE(is_profinite(K, hom_module_preset(K, "W_r[F]", 3)));
    EXPECT_THROW(hom_module_preset(K, "nonsense"), InvalidArgument);
}

TEST(SplitFieldTest, AgreesWithTowerWhenBothApply) {
    std::mt19937_64 rng(19);
    for (int p : {2, 3}) {
        for (int n = 0; n < 30; ++n) {
            FieldTower t(p, 24);
            auto K = t.prime_field();
            auto T = make_operator(0, random_mixed(K, 1 + rng() % 4, rng));
            FixedSpace fs;
            try {
                fs = fixed_space(t, T);
            } catch (const CapExceeded&) {
                continue;
            }
            auto cert = fixed_space_split_field(t, T);
            EXPECT_TRUE(cert.fixed_checked);
            EXPECT_EQ(cert.fixed_dim, fs.stabilized_dim);
            EXPECT_EQ(t.level(fs.level).degree % cert.degree, 0);
        }
    }
}

TEST(SplitFieldTest, SingerCycleNeedsLargeDegree) {
    // Companion matrix of a primitive cubic over F_3 has order 26; over F_3^6 a primitive sextic
    // gives order 728 = 8 * 7 * 13, far beyond the tower cap.
    FieldTower t(3, 24);
    auto K = t.prime_field();
    FqMatrix A = linalg::zeros(K, 6, 6);
    // x^6 + x + 2 is primitive over F_3.
    const std::int64_t c[6] = {2, 1, 0, 0, 0, 0};
    for (int i = 1; i < 6; ++i) A(i, i - 1) = K.one();
    for (int i = 0; i < 6; ++i) A(i, 5) = K.from_int(-c[i]);
    auto T = make_operator(0, A);
    EXPECT_THROW(fixed_space(t, T), CapExceeded);
    auto cert = fixed_space_split_field(t, T);
    EXPECT_EQ(cert.degree, 728);
    EXPECT_EQ(cert.factor_degrees, (std::vector<int>{8, 7, 13}));
    EXPECT_TRUE(cert.fixed_checked);
    EXPECT_EQ(cert.fixed_dim, 6u);
}
