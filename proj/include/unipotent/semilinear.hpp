#pragma once

// Frobenius-semilinear operators F(v) = A sigma(v) on k^d, their semisimple/nilpotent splitting,
// fixed spaces, and finitely presented modules over the twisted polynomial ring k_sigma[F].

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "unipotent/error.hpp"
#include "unipotent/fields.hpp"
#include "unipotent/linalg.hpp"

namespace unipotent::semilinear {

using fields::FieldTower;
using fields::Fq;
using fields::FqField;
using FqMatrix = Matrix<Fq>;

inline constexpr std::size_t kDefaultDimensionCap = 12;

struct SemilinearOperator {
    std::size_t level = 0;
    FqMatrix A;

    std::size_t dim() const { return A.rows; }
};

inline SemilinearOperator make_operator(std::size_t level, FqMatrix A, std::size_t cap = kDefaultDimensionCap) {
    if (A.rows != A.cols) detail::fail_invalid("semilinear operator: matrix must be square");
    if (A.rows > cap) detail::fail_cap("semilinear operator: dimension exceeds cap");
    for (const auto& x : A.data)
        if (x.level != level) detail::fail_invalid("semilinear operator: entries must live on the stated level");
    return {level, std::move(A)};
}

/// Entrywise sigma^k.
inline FqMatrix sigma(const FqField& K, const FqMatrix& A, std::int64_t k = 1) {
    FqMatrix B = A;
    for (auto& x : B.data) x = K.frobenius(x, k);
    return B;
}
inline std::vector<Fq> sigma(const FqField& K, std::vector<Fq> v, std::int64_t k = 1) {
    for (auto& x : v) x = K.frobenius(x, k);
    return v;
}

inline FqMatrix embed(const FieldTower& t, const FqMatrix& A, std::size_t level) {
    FqMatrix B = A;
    for (auto& x : B.data) x = t.embed(x, level);
    return B;
}

inline std::vector<Fq> apply(const FqField& K, const FqMatrix& A, const std::vector<Fq>& v) {
    return linalg::apply(K, A, sigma(K, v));
}

/// A_k = A sigma(A) ... sigma^{k-1}(A), so that F^k(v) = A_k sigma^k(v).
inline FqMatrix iterate_matrix(const FqField& K, const FqMatrix& A, int k) {
    FqMatrix out = linalg::identity(K, A.rows);
    for (int i = 0; i < k; ++i) out = linalg::multiply(K, out, sigma(K, A, i));
    return out;
}

/// Matrix M of F restricted to the F-stable span of the columns of B: B M = A sigma(B).
inline FqMatrix restrict_to(const FqField& K, const FqMatrix& A, const FqMatrix& B) {
    auto M = linalg::solve_matrix(K, B, linalg::multiply(K, A, sigma(K, B)));
    if (!M) detail::fail_check("restrict_to: subspace is not F-stable");
    return *M;
}

struct SsNilSplit {
    FqMatrix Vs;  // columns: basis of im F^N
    FqMatrix Vn;  // columns: basis of ker F^N
    int N = 0;
};

inline SsNilSplit ss_nilpotent_split(const FqField& K, const SemilinearOperator& T) {
    const std::size_t d = T.dim();
    FqMatrix Ak = linalg::identity(K, d);
    std::size_t rk = d;
    int N = 0;
    for (;;) {
        FqMatrix next = linalg::multiply(K, Ak, sigma(K, T.A, N));
        const std::size_t rn = linalg::rank(K, next);
        if (rn == rk) break;
        Ak = std::move(next);
        rk = rn;
        ++N;
    }
    SsNilSplit out;
    out.N = N;
    out.Vs = linalg::column_space(K, Ak);
    out.Vn = sigma(K, linalg::kernel(K, Ak), -N);
    return out;
}

/// F_p-basis of {v : A sigma(v) = v} over the field K.
inline FqMatrix fp_fixed_basis(const FqField& K, const FqMatrix& A) {
    const std::size_t d = A.rows;
    const int m = K.degree();
    PrimeField fp(K.p());
    Matrix<std::uint32_t> L = linalg::zeros(fp, d * m, d * m);
    Fq xj = K.one();
    for (int j = 0; j < m; ++j) {
        const Fq sj = K.frobenius(xj, 1);
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t col = i * m + j;
            for (std::size_t r = 0; r < d; ++r) {
                Fq val = K.mul(A(r, i), sj);
                if (r == i) val = K.sub(val, xj);
                const auto c = K.coeffs(val);
                for (int l = 0; l < m; ++l) L(r * m + l, col) = c[l];
            }
        }
        xj = K.mul(xj, K.generator());
    }
    auto ker = linalg::kernel(fp, L);
    FqMatrix out = linalg::zeros(K, d, ker.cols);
    for (std::size_t c = 0; c < ker.cols; ++c)
        for (std::size_t r = 0; r < d; ++r) {
            std::vector<std::uint32_t> coeffs(m);
            for (int l = 0; l < m; ++l) coeffs[l] = ker(r * m + l, c);
            out(r, c) = K.from_vector(coeffs);
        }
    return out;
}

struct FixedSpace {
    std::size_t base_level = 0;
    std::size_t base_fp_dim = 0;   // dim over F_p of the fixed space before extending
    std::size_t level = 0;         // level of the returned basis
    int needed_degree = 1;         // smallest field degree over F_p where the dimension stabilizes
    std::size_t stabilized_dim = 0;
    std::size_t vs_dim = 0;
    FqMatrix basis;                // F_p-basis of the fixed space at `level`

    nlohmann::json to_json() const {
        return {{"base_level", base_level},         {"base_fp_dim", base_fp_dim}, {"level", level},
                {"needed_degree", needed_degree},   {"stabilized_dim", stabilized_dim},
                {"vs_dim", vs_dim}};
    }
};

/// Smallest e >= 1 with M^e = I, searching up to `bound`; nullopt if larger.
inline std::optional<int> multiplicative_order(const FqField& K, const FqMatrix& M, int bound) {
    const auto I = linalg::identity(K, M.rows);
    FqMatrix P = M;
    for (int e = 1; e <= bound; ++e) {
        if (linalg::equal(K, P, I)) return e;
        P = linalg::multiply(K, P, M);
    }
    return std::nullopt;
}

/// Fixed space of F over the base level and over the first level where its F_p-dimension
/// reaches dim V_s. The needed degree is m * ord(N_s) where N_s = F^m restricted to V_s.
inline FixedSpace fixed_space(FieldTower& tower, const SemilinearOperator& T, bool stop_at_base = false) {
    const auto K = tower.field(T.level);
    FixedSpace out;
    out.base_level = T.level;
    auto base = fp_fixed_basis(K, T.A);
    out.base_fp_dim = base.cols;
    auto split = ss_nilpotent_split(K, T);
    out.vs_dim = split.Vs.cols;
    out.level = T.level;
    out.needed_degree = K.degree();
    out.basis = base;
    out.stabilized_dim = base.cols;
    if (stop_at_base || out.vs_dim == 0 || base.cols == out.vs_dim) return out;

    const int m = K.degree();
    const auto M = restrict_to(K, T.A, split.Vs);
    const auto Ns = iterate_matrix(K, M, m);
    const auto e = multiplicative_order(K, Ns, tower.degree_cap() / m);
    if (!e)
        detail::fail_cap("fixed_space: stabilization needs a field degree above the cap " +
                         std::to_string(tower.degree_cap()));
    out.needed_degree = m * *e;
    const auto lvl = tower.level_containing_degree(out.needed_degree);
    const auto L = tower.field(lvl);
    out.level = lvl;
    out.basis = fp_fixed_basis(L, embed(tower, T.A, lvl));
    out.stabilized_dim = out.basis.cols;
    if (out.stabilized_dim != out.vs_dim)
        detail::fail_check("fixed_space: F_p-dimension did not stabilize at dim V_s");
    return out;
}

/// Certificate that dim_{F_p} (V tensor L)^{F=id} = dim V_s for L = F_{p^D}, D = ord(F|V_s), when
/// D is beyond the tower cap. Only for operators over F_p. L is realized as the tensor product of
/// fields F_{p^{d_i}} for the prime-power factors d_i of D, which is a field because the d_i are
/// coprime; sigma acts factorwise and the fixed vectors are sum_j sigma^j(theta) M^j e_i for a
/// normal element theta, so no multiplication in L is ever needed.
struct SplitFieldCertificate {
    int degree = 0;
    std::vector<int> factor_degrees;
    std::size_t vs_dim = 0;
    std::size_t fixed_dim = 0;  // F_p-rank of the constructed F-fixed vectors
    bool fixed_checked = false;  // every constructed vector satisfies F v = v

    nlohmann::json to_json() const {
        return {{"degree", degree},   {"factor_degrees", factor_degrees}, {"vs_dim", vs_dim},
                {"fixed_dim", fixed_dim}, {"fixed_checked", fixed_checked}};
    }
};

namespace detail_semilinear {

struct FactorField {
    std::unique_ptr<FieldTower> tower;
    std::size_t level = 0;
    std::vector<std::vector<std::uint32_t>> orbit;  // sigma^j(theta), j < d
    Matrix<std::uint32_t> frob;                     // sigma on coefficient vectors
};

inline const FactorField& factor_field(std::uint32_t p, int d) {
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, int>, std::unique_ptr<FactorField>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{p, d}];
    if (slot) return *slot;
    auto f = std::make_unique<FactorField>();
    f->tower = std::make_unique<FieldTower>(p, std::max(d, 1));
    f->level = f->tower->level_containing_degree(d);
    const auto K = f->tower->field(f->level);
    PrimeField fp(p);
    f->frob = K.level().frobenius_powers.size() > 1 ? K.level().frobenius_powers[1] : linalg::identity(fp, 1);
    for (std::uint64_t idx = 1;; ++idx) {
        const Fq theta = K.element(idx);
        std::vector<std::vector<std::uint32_t>> orbit;
        Fq x = theta;
        for (int j = 0; j < d; ++j) {
            orbit.push_back(K.coeffs(x));
            x = K.frobenius(x, 1);
        }
        if (linalg::rank(fp, linalg::from_columns(fp, d, orbit)) == static_cast<std::size_t>(d)) {
            f->orbit = std::move(orbit);
            break;
        }
    }
    slot = std::move(f);
    return *slot;
}

inline std::vector<std::pair<std::uint64_t, int>> prime_power_factors(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, int>> out;
    for (auto q : prime_factors(n)) {
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        out.push_back({q, e});
    }
    return out;
}

}  // namespace detail_semilinear

inline SplitFieldCertificate fixed_space_split_field(const FieldTower& tower, const SemilinearOperator& T,
                                                     int degree_limit = 4096) {
    const auto K = tower.field(T.level);
    if (K.degree() != 1) detail::fail_invalid("fixed_space_split_field: operator must be defined over F_p");
    const std::uint32_t p = K.p();
    PrimeField fp(p);
    auto split = ss_nilpotent_split(K, T);
    SplitFieldCertificate cert;
    cert.vs_dim = split.Vs.cols;
    const std::size_t s = cert.vs_dim;
    if (s == 0) {
        cert.degree = 1;
        cert.fixed_checked = true;
        return cert;
    }
    const auto Mq = restrict_to(K, T.A, split.Vs);
    const auto e = multiplicative_order(K, Mq, degree_limit);
    if (!e) detail::fail_cap("fixed_space_split_field: order of F on V_s exceeds the degree limit");
    cert.degree = *e;

    // M over F_p as plain residues.
    Matrix<std::uint32_t> M = linalg::zeros(fp, s, s);
    for (std::size_t i = 0; i < s * s; ++i) M.data[i] = K.coeffs(Mq.data[i])[0];

    std::vector<const detail_semilinear::FactorField*> factors;
    std::size_t D = 1;
    for (auto [q, a] : detail_semilinear::prime_power_factors(static_cast<std::uint64_t>(*e))) {
        const int d = static_cast<int>(ipow(static_cast<std::int64_t>(q), a));
        cert.factor_degrees.push_back(d);
        factors.push_back(&detail_semilinear::factor_field(p, d));
        D *= static_cast<std::size_t>(d);
    }

    // sigma^j(theta) as a length-D vector: Kronecker product of the factor orbits.
    auto orbit_vector = [&](int j) {
        std::vector<std::uint32_t> v{1};
        for (std::size_t k = 0; k < factors.size(); ++k) {
            const auto& o = factors[k]->orbit[j % cert.factor_degrees[k]];
            std::vector<std::uint32_t> w(v.size() * o.size());
            for (std::size_t a = 0; a < v.size(); ++a)
                for (std::size_t b = 0; b < o.size(); ++b) w[a * o.size() + b] = (v[a] * o[b]) % p;
            v = std::move(w);
        }
        return v;
    };
    // sigma on L: apply each factor's Frobenius along its own axis.
    auto sigma_L = [&](std::vector<std::uint32_t> v) {
        std::size_t inner = D;
        std::size_t outer = 1;
        for (std::size_t k = 0; k < factors.size(); ++k) {
            const std::size_t d = static_cast<std::size_t>(cert.factor_degrees[k]);
            inner /= d;
            std::vector<std::uint32_t> w(D, 0);
            for (std::size_t o = 0; o < outer; ++o)
                for (std::size_t in = 0; in < inner; ++in)
                    for (std::size_t r = 0; r < d; ++r) {
                        std::uint64_t acc = 0;
                        for (std::size_t c = 0; c < d; ++c)
                            acc += std::uint64_t(factors[k]->frob(r, c)) * v[(o * d + c) * inner + in];
                        w[(o * d + r) * inner + in] = static_cast<std::uint32_t>(acc % p);
                    }
            v = std::move(w);
            outer *= d;
        }
        return v;
    };

    // v_i = sum_j sigma^j(theta) M^j e_i, stored as s coordinates in L.
    std::vector<std::vector<std::vector<std::uint32_t>>> vecs(s, std::vector<std::vector<std::uint32_t>>(s, std::vector<std::uint32_t>(D, 0)));
    Matrix<std::uint32_t> Mj = linalg::identity(fp, s);
    for (int j = 0; j < *e; ++j) {
        const auto th = orbit_vector(j);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t r = 0; r < s; ++r) {
                const auto c = Mj(r, i);
                if (!c) continue;
                auto& dst = vecs[i][r];
                for (std::size_t x = 0; x < D; ++x) dst[x] = (dst[x] + c * th[x]) % p;
            }
        Mj = linalg::multiply(fp, M, Mj);
    }

    cert.fixed_checked = true;
    for (std::size_t i = 0; i < s && cert.fixed_checked; ++i) {
        std::vector<std::vector<std::uint32_t>> sv;
        for (std::size_t r = 0; r < s; ++r) sv.push_back(sigma_L(vecs[i][r]));
        for (std::size_t r = 0; r < s && cert.fixed_checked; ++r) {
            std::vector<std::uint32_t> acc(D, 0);
            for (std::size_t c = 0; c < s; ++c) {
                if (!M(r, c)) continue;
                for (std::size_t x = 0; x < D; ++x) acc[x] = (acc[x] + M(r, c) * sv[c][x]) % p;
            }
            cert.fixed_checked = acc == vecs[i][r];
        }
    }
    Matrix<std::uint32_t> flat = linalg::zeros(fp, s * D, s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t r = 0; r < s; ++r)
            for (std::size_t x = 0; x < D; ++x) flat(r * D + x, i) = vecs[i][r][x];
    cert.fixed_dim = linalg::rank(fp, flat);
    return cert;
}

struct TiltWitness {
    int N = 0;
    FqMatrix inclusion;   // d x s: V_flat = V_s -> V
    FqMatrix projection;  // s x d: V -> V_perf = V_s, v -> coordinates of F^N(v) (sigma^N-semilinear)
    FqMatrix composite;   // s x s
    std::size_t rank = 0;
    std::size_t vs_dim = 0;
};

/// V_flat = lim_F V and V_perf = colim_F V realized at stage N; the composite V_flat -> V -> V_perf
/// is c -> C sigma^N(c) on V_s coordinates.
inline TiltWitness tilt_and_perfection(const FqField& K, const SemilinearOperator& T) {
    auto split = ss_nilpotent_split(K, T);
    TiltWitness w;
    w.N = split.N;
    w.vs_dim = split.Vs.cols;
    w.inclusion = split.Vs;
    const auto AN = iterate_matrix(K, T.A, split.N);
    if (w.vs_dim == 0) {
        w.projection = linalg::zeros(K, 0, T.dim());
        w.composite = linalg::zeros(K, 0, 0);
        return w;
    }
    auto P = linalg::solve_matrix(K, split.Vs, AN);
    if (!P) detail::fail_check("tilt_and_perfection: F^N does not land in V_s");
    w.projection = *P;
    w.composite = linalg::multiply(K, w.projection, sigma(K, w.inclusion, split.N));
    w.rank = linalg::rank(K, w.composite);
    return w;
}

struct ColimComparison {
    std::size_t level = 0;
    std::size_t fixed_dim = 0;
    std::size_t colim_dim = 0;
    std::size_t comparison_rank = 0;
    bool is_isomorphism = false;
};

/// V^{F=id} (x) k -> colim_F V = V_s, checked at the stabilized level.
inline ColimComparison colim_fixed_compare(FieldTower& tower, const SemilinearOperator& T) {
    auto fs = fixed_space(tower, T);
    const auto L = tower.field(fs.level);
    SemilinearOperator TL{fs.level, embed(tower, T.A, fs.level)};
    auto split = ss_nilpotent_split(L, TL);
    ColimComparison c;
    c.level = fs.level;
    c.fixed_dim = fs.stabilized_dim;
    c.colim_dim = split.Vs.cols;
    if (fs.basis.cols > 0) {
        auto coords = linalg::solve_matrix(L, split.Vs, fs.basis);
        if (!coords) detail::fail_check("colim_fixed_compare: fixed vectors outside V_s");
        c.comparison_rank = linalg::rank(L, *coords);
    }
    c.is_isomorphism = c.fixed_dim == c.colim_dim && c.comparison_rank == c.colim_dim;
    return c;
}

// ---------------------------------------------------------------------------------------------
// Twisted polynomials sum a_i F^i with F a = a^p F.

struct SkewPoly {
    std::vector<Fq> c;  // low to high, no trailing zeros
    bool operator==(const SkewPoly&) const = default;
};

class SkewRing {
public:
    explicit SkewRing(FqField K) : K_(K) {}
    const FqField& field() const { return K_; }

    SkewPoly zero() const { return {}; }
    SkewPoly constant(const Fq& a) const { return normalize({{a}}); }
    SkewPoly one() const { return constant(K_.one()); }
    /// a F^i
    SkewPoly monomial(const Fq& a, int i) const {
        SkewPoly f;
        f.c.assign(i + 1, K_.zero());
        f.c[i] = a;
        return normalize(std::move(f));
    }
    SkewPoly from_coeffs(std::vector<Fq> c) const { return normalize({std::move(c)}); }

    int degree(const SkewPoly& f) const { return static_cast<int>(f.c.size()) - 1; }
    bool is_zero(const SkewPoly& f) const { return f.c.empty(); }
    const Fq& lead(const SkewPoly& f) const { return f.c.back(); }

    SkewPoly add(const SkewPoly& a, const SkewPoly& b) const {
        SkewPoly r;
        r.c.assign(std::max(a.c.size(), b.c.size()), K_.zero());
        for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = K_.add(r.c[i], b.c[i]);
        return normalize(std::move(r));
    }
    SkewPoly neg(const SkewPoly& a) const {
        SkewPoly r = a;
        for (auto& x : r.c) x = K_.neg(x);
        return r;
    }
    SkewPoly sub(const SkewPoly& a, const SkewPoly& b) const { return add(a, neg(b)); }

    SkewPoly mul(const SkewPoly& a, const SkewPoly& b) const {
        if (a.c.empty() || b.c.empty()) return {};
        SkewPoly r;
        r.c.assign(a.c.size() + b.c.size() - 1, K_.zero());
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (K_.is_zero(a.c[i])) continue;
            for (std::size_t j = 0; j < b.c.size(); ++j)
                r.c[i + j] = K_.add(r.c[i + j], K_.mul(a.c[i], K_.frobenius(b.c[j], static_cast<std::int64_t>(i))));
        }
        return normalize(std::move(r));
    }

    /// f = q g + r with deg r < deg g.
    std::pair<SkewPoly, SkewPoly> divide_right(SkewPoly f, const SkewPoly& g) const {
        if (g.c.empty()) detail::fail_invalid("skew division by zero");
        SkewPoly q;
        const int k = degree(g);
        while (!f.c.empty() && degree(f) >= k) {
            const int s = degree(f) - k;
            const Fq coef = K_.mul(lead(f), K_.inv(K_.frobenius(lead(g), s)));
            const auto term = monomial(coef, s);
            q = add(q, term);
            f = sub(f, mul(term, g));
        }
        return {q, f};
    }

    /// f = g q + r with deg r < deg g.
    std::pair<SkewPoly, SkewPoly> divide_left(SkewPoly f, const SkewPoly& g) const {
        if (g.c.empty()) detail::fail_invalid("skew division by zero");
        SkewPoly q;
        const int k = degree(g);
        while (!f.c.empty() && degree(f) >= k) {
            const int s = degree(f) - k;
            const Fq coef = K_.frobenius(K_.mul(lead(f), K_.inv(lead(g))), -k);
            const auto term = monomial(coef, s);
            q = add(q, term);
            f = sub(f, mul(g, term));
        }
        return {q, f};
    }

    std::string to_string(const SkewPoly& f) const {
        if (f.c.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < f.c.size(); ++i) {
            if (K_.is_zero(f.c[i])) continue;
            if (!s.empty()) s += " + ";
            s += K_.to_string(f.c[i]);
            if (i == 1) s += "F";
            if (i > 1) s += "F^" + std::to_string(i);
        }
        return s;
    }

private:
    SkewPoly normalize(SkewPoly f) const {
        while (!f.c.empty() && K_.is_zero(f.c.back())) f.c.pop_back();
        return f;
    }
    FqField K_;
};

/// Left module k_sigma[F]^gens / (left span of the relation rows).
struct SkewPolyModule {
    std::size_t level = 0;
    std::size_t gens = 0;
    std::vector<std::vector<SkewPoly>> relations;
};

struct SkewModuleInfo {
    std::size_t free_rank = 0;
    std::size_t relation_rank = 0;
    bool is_torsion = false;
    std::optional<std::size_t> torsion_dim;  // dim over k, when torsion
    std::vector<std::vector<SkewPoly>> echelon;
};

/// Left row echelon form by Euclidean elimination (pivot: lowest degree, then lexicographic).
inline SkewModuleInfo skew_module_rank_and_torsion(const FqField& K, const SkewPolyModule& M) {
    SkewRing R(K);
    auto rows = M.relations;
    for (const auto& row : rows)
        if (row.size() != M.gens) detail::fail_invalid("skew module: relation length differs from generator count");
    std::size_t prow = 0;
    std::vector<int> pivot_degrees;
    for (std::size_t col = 0; col < M.gens && prow < rows.size(); ++col) {
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t i = prow; i < rows.size(); ++i) {
                const auto& e = rows[i][col];
                if (R.is_zero(e)) continue;
                if (!best) {
                    best = i;
                    continue;
                }
                const auto& b = rows[*best][col];
                if (R.degree(e) < R.degree(b) || (R.degree(e) == R.degree(b) && e.c < b.c)) best = i;
            }
            if (!best) break;
            std::swap(rows[prow], rows[*best]);
            bool others = false;
            for (std::size_t i = prow + 1; i < rows.size(); ++i) {
                if (R.is_zero(rows[i][col])) continue;
                auto [q, r] = R.divide_right(rows[i][col], rows[prow][col]);
                for (std::size_t j = 0; j < M.gens; ++j) rows[i][j] = R.sub(rows[i][j], R.mul(q, rows[prow][j]));
                others = others || !R.is_zero(rows[i][col]);
            }
            if (!others) {
                pivot_degrees.push_back(R.degree(rows[prow][col]));
                ++prow;
                break;
            }
        }
    }
    SkewModuleInfo info;
    info.relation_rank = prow;
    info.free_rank = M.gens - prow;
    info.is_torsion = info.free_rank == 0;
    if (info.is_torsion) {
        std::size_t dim = 0;
        for (int d : pivot_degrees) dim += static_cast<std::size_t>(d);
        info.torsion_dim = dim;
    }
    rows.resize(prow);
    info.echelon = rows;
    return info;
}

inline bool is_profinite(const FqField& K, const SkewPolyModule& hom_module) {
    return skew_module_rank_and_torsion(K, hom_module).is_torsion;
}

/// Hom(G, G_a) as a k_sigma[F]-module for the library's preset group schemes over F_p.
///   "G_a"          free of rank 1
///   "W"            Witt vector group scheme of length r (free of rank 1, generated by x_0)
///   "alpha_p^v"    F^v
///   "Z/p"          F - 1
///   "W_r"          constant group W_r(F_p) = Z/p^r: characters factor through Z/p, so F - 1
///   "W_r[F]"       Frobenius kernel of W_r: only x_0 is primitive and F x_0 = 0, so F
inline SkewPolyModule hom_module_preset(const FqField& K, const std::string& name, int param = 1) {
    SkewRing R(K);
    SkewPolyModule M;
    M.level = K.index();
    M.gens = 1;
    if (name == "G_a" || name == "W") return M;
    if (name == "alpha_p^v" || name == "alpha_p") {
        if (param < 1) detail::fail_invalid("alpha_{p^v} needs v >= 1");
        M.relations.push_back({R.monomial(K.one(), param)});
    } else if (name == "Z/p" || name == "W_r") {
        M.relations.push_back({R.sub(R.monomial(K.one(), 1), R.one())});
    } else if (name == "W_r[F]") {
        M.relations.push_back({R.monomial(K.one(), 1)});
    } else {
        detail::fail_invalid("unknown group scheme preset: " + name);
    }
    return M;
}

}  // namespace unipotent::semilinear
