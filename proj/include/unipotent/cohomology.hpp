#pragma once

// Minimal free resolutions of the residue field over finite-dimensional local F_p-algebras.
//
// b_i = rank of the i-th free module = dim Ext^i_A(k, k). For A = O(G^dual) this is dim H^i(BG, O).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "unipotent/error.hpp"
#include "unipotent/hopf.hpp"
#include "unipotent/linalg.hpp"
#include "unipotent/modular.hpp"

namespace unipotent::cohomology {

inline constexpr std::size_t kMaxAlgebraDim = 128;
inline constexpr int kMaxResolutionDegree = 10;
inline constexpr int kMaxOracleDim = 3;
inline constexpr int kMaxOracleDegree = 8;

using Vec = std::vector<std::uint32_t>;

namespace detail_cohomology {

/// Semi-echelon basis over F_p. Pivots are searched in [0, limit); rows are stored normalized.
class Echelon {
  public:
    Echelon(std::uint32_t p, std::size_t length, std::size_t limit) : p_(p), len_(length), limit_(limit) {}
    Echelon(std::uint32_t p, std::size_t length) : Echelon(p, length, length) {}

    void reduce(Vec& v) const {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const auto f = v[piv_[k]] % p_;
            if (!f) continue;
            const auto m = p_ - f;
            const auto* r = rows_[k].data();
            auto* w = v.data();
            for (std::size_t t = 0; t < len_; ++t) w[t] += m * r[t];
        }
        for (auto& x : v) x %= p_;
    }
    /// Returns true if v was independent (and is now stored).
    bool insert(Vec v) {
        reduce(v);
        std::size_t c = 0;
        while (c < limit_ && v[c] == 0) ++c;
        if (c == limit_) {
            last_residue_ = std::move(v);
            return false;
        }
        const auto inv = static_cast<std::uint32_t>(powmod(v[c], p_ - 2, p_));
        for (auto& x : v) x = x * inv % p_;
        rows_.push_back(std::move(v));
        piv_.push_back(c);
        return true;
    }
    bool contains(Vec v) const {
        reduce(v);
        return std::all_of(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(limit_), [](auto x) { return x == 0; });
    }
    std::size_t rank() const { return rows_.size(); }
    const Vec& last_residue() const { return last_residue_; }

  private:
    std::uint32_t p_;
    std::size_t len_, limit_;
    std::vector<Vec> rows_;
    std::vector<std::size_t> piv_;
    Vec last_residue_;
};

}  // namespace detail_cohomology

/// A finite-dimensional commutative local F_p-algebra with residue field F_p.
struct LocalAlgebra {
    std::uint32_t p = 2;
    std::size_t n = 1;
    std::string name;
    std::vector<std::uint32_t> mult;  // (a*n + b)*n + c
    Vec unit, augmentation;
    std::vector<Vec> ideal_generators;            // generate m as an ideal (a basis of m/m^2)
    std::optional<std::vector<std::int64_t>> exponents;  // set for k[x_1..x_s]/(x_i^{e_i})
    std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> prod;  // nonzeros of e_a e_b

    void index_products() {
        prod.assign(n * n, {});
        for (std::size_t ab = 0; ab < n * n; ++ab)
            for (std::size_t c = 0; c < n; ++c)
                if (auto v = mult[ab * n + c]) prod[ab].emplace_back(c, v);
    }
    Vec mul(const Vec& x, const Vec& y) const {
        Vec z(n, 0);
        for (std::size_t a = 0; a < n; ++a) {
            if (!x[a]) continue;
            for (std::size_t b = 0; b < n; ++b) {
                if (!y[b]) continue;
                const auto xy = x[a] * y[b] % p;
                for (auto [c, v] : prod[a * n + b]) z[c] = (z[c] + xy * v) % p;
            }
        }
        return z;
    }
    std::uint32_t augment(const Vec& x) const {
        std::uint32_t s = 0;
        for (std::size_t a = 0; a < n; ++a) s = (s + x[a] * augmentation[a]) % p;
        return s;
    }
    /// Componentwise a · v for v in A^b (length n*b).
    Vec act(const Vec& a, const Vec& v) const {
        Vec out(v.size(), 0);
        for (std::size_t t = 0; t * n < v.size(); ++t) {
            const Vec comp(v.begin() + static_cast<std::ptrdiff_t>(t * n), v.begin() + static_cast<std::ptrdiff_t>((t + 1) * n));
            const auto r = mul(a, comp);
            std::copy(r.begin(), r.end(), out.begin() + static_cast<std::ptrdiff_t>(t * n));
        }
        return out;
    }
    std::size_t embedding_dimension() const { return ideal_generators.size(); }
};

inline std::string variable_name(std::size_t i) {
    static const char* names[] = {"x", "y", "z", "w"};
    return i < 4 ? names[i] : "x" + std::to_string(i + 1);
}

/// k[x_1..x_s]/(x_1^{e_1}, ..., x_s^{e_s}) with each e_i a power of p; the monomial basis is mixed-radix.
inline LocalAlgebra presentation(std::uint32_t p, const std::vector<std::int64_t>& exps) {
    const PrimeField F(p);
    (void)F;
    std::size_t n = 1;
    for (auto e : exps) {
        if (e < 1 || !is_power_of(e, p)) detail::fail_invalid("presentation: exponents must be powers of p");
        n *= static_cast<std::size_t>(e);
        if (n > kMaxAlgebraDim) detail::fail_cap("presentation: algebra dimension exceeds 128");
    }
    LocalAlgebra A;
    A.p = p;
    A.n = n;
    A.exponents = exps;
    A.mult.assign(n * n * n, 0);
    auto decode = [&](std::size_t idx) {
        std::vector<std::int64_t> d(exps.size());
        for (std::size_t i = 0; i < exps.size(); ++i) {
            d[i] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(exps[i]));
            idx /= static_cast<std::size_t>(exps[i]);
        }
        return d;
    };
    for (std::size_t a = 0; a < n; ++a) {
        const auto da = decode(a);
        for (std::size_t b = 0; b < n; ++b) {
            const auto db = decode(b);
            std::size_t c = 0, stride = 1;
            bool zero = false;
            for (std::size_t i = 0; i < exps.size(); ++i) {
                const auto s = da[i] + db[i];
                if (s >= exps[i]) zero = true;
                c += static_cast<std::size_t>(s) * stride;
                stride *= static_cast<std::size_t>(exps[i]);
            }
            if (!zero) A.mult[(a * n + b) * n + c] = 1;
        }
    }
    A.unit.assign(n, 0);
    A.unit[0] = 1;
    A.augmentation = A.unit;
    std::size_t stride = 1;
    std::string vars, rels;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] > 1) {
            Vec x(n, 0);
            x[stride] = 1;
            A.ideal_generators.push_back(std::move(x));
        }
        stride *= static_cast<std::size_t>(exps[i]);
        vars += (i ? "," : "") + variable_name(i);
        rels += (i ? "," : "") + variable_name(i) + "^" + std::to_string(exps[i]);
    }
    A.name = exps.empty() ? "k" : "k[" + vars + "]/(" + rels + ")";
    A.index_products();
    return A;
}

/// The dual local algebra of a unipotent finite group scheme, with m/m^2 generators read off J_1 and J_2.
inline LocalAlgebra from_dual(const hopf::DualLocalAlgebra& D, std::string name = "dual") {
    if (D.n > kMaxAlgebraDim) detail::fail_cap("local algebra dimension exceeds 128");
    LocalAlgebra A;
    A.p = D.p;
    A.n = D.n;
    A.name = std::move(name);
    A.mult = D.mult;
    A.unit = D.unit;
    A.augmentation = D.augmentation;
    A.index_products();
    for (std::size_t a = 0; a < A.n; ++a)
        for (std::size_t b = 0; b < A.n; ++b)
            for (std::size_t c = 0; c < A.n; ++c)
                if (A.mult[(a * A.n + b) * A.n + c] != A.mult[(b * A.n + a) * A.n + c])
                    detail::fail_invalid("local algebra must be commutative");
    detail_cohomology::Echelon E(A.p, A.n);
    if (D.J.size() > 2)
        for (std::size_t j = 0; j < D.J[2].cols; ++j) E.insert(D.J[2].column(j));
    if (D.J.size() > 1)
        for (std::size_t j = 0; j < D.J[1].cols; ++j)
            if (E.insert(D.J[1].column(j))) A.ideal_generators.push_back(D.J[1].column(j));
    return A;
}

/// Named presets: trivial, alpha_p, alpha_p2 (k[x]/x^{p^2}), alpha_p_squared, alpha_p_cubed.
inline LocalAlgebra preset(const std::string& name, std::uint32_t p) {
    const auto P = static_cast<std::int64_t>(p);
    if (name == "trivial") return presentation(p, {});
    if (name == "alpha_p") return presentation(p, {P});
    if (name == "alpha_p2" || name == "alpha_{p^2}") return presentation(p, {P * P});
    if (name == "alpha_p_squared") return presentation(p, {P, P});
    if (name == "alpha_p_cubed") return presentation(p, {P, P, P});
    detail::fail_invalid("unknown local algebra preset: " + name);
}

struct Resolution {
    std::uint32_t p = 2;
    std::size_t n = 1;
    std::vector<std::size_t> betti;
    // differentials[i][j]: image of the j-th generator of F_{i+1} in F_i = A^{b_i}
    std::vector<std::vector<Vec>> differentials;
    bool minimal = true;
    bool exact = true;
    std::string failure;
};

struct ResolutionOptions {
    std::optional<std::uint64_t> shuffle_seed;  // randomize kernel bases before picking generators
};

namespace detail_cohomology {

/// Minimal generators of the submodule K (given by an F_p-basis) of A^b.
inline std::vector<Vec> minimal_generators(const LocalAlgebra& A, const std::vector<Vec>& K, std::size_t len) {
    Echelon E(A.p, len);
    for (const auto& x : A.ideal_generators)
        for (const auto& v : K) E.insert(A.act(x, v));
    std::vector<Vec> gens;
    for (const auto& v : K)
        if (E.insert(v)) gens.push_back(v);
    return gens;
}

inline void shuffle_basis(std::vector<Vec>& K, std::uint32_t p, std::mt19937_64& rng) {
    std::shuffle(K.begin(), K.end(), rng);
    std::uniform_int_distribution<std::uint32_t> coeff(0, p - 1);
    for (std::size_t i = 0; i < K.size(); ++i)
        for (std::size_t j = i + 1; j < K.size(); ++j) {
            const auto c = coeff(rng);
            if (!c) continue;
            for (std::size_t t = 0; t < K[i].size(); ++t) K[i][t] = (K[i][t] + c * K[j][t]) % p;
        }
}

/// d(v) for v in A^{b_src}, where gens are the images of the basis generators in A^{b_dst}.
inline Vec apply_differential(const LocalAlgebra& A, const std::vector<Vec>& gens, std::size_t dst_len, const Vec& v) {
    Vec out(dst_len, 0);
    for (std::size_t j = 0; j < gens.size(); ++j) {
        const Vec comp(v.begin() + static_cast<std::ptrdiff_t>(j * A.n), v.begin() + static_cast<std::ptrdiff_t>((j + 1) * A.n));
        if (std::all_of(comp.begin(), comp.end(), [](auto x) { return x == 0; })) continue;
        const auto img = A.act(comp, gens[j]);
        for (std::size_t t = 0; t < dst_len; ++t) out[t] = (out[t] + img[t]) % A.p;
    }
    return out;
}

}  // namespace detail_cohomology

/// Minimal resolution of k to homological degree D, checking minimality and exactness at every step.
inline Resolution minimal_resolution(const LocalAlgebra& A, int D, const ResolutionOptions& opt = {}) {
    using namespace detail_cohomology;
    if (D < 0 || D > kMaxResolutionDegree) detail::fail_cap("minimal_resolution: degree must be in 0..10");
    if (A.n > kMaxAlgebraDim) detail::fail_cap("minimal_resolution: algebra dimension exceeds 128");
    const auto n = A.n;
    const auto p = A.p;
    std::mt19937_64 rng(opt.shuffle_seed.value_or(0));
    Resolution R;
    R.p = p;
    R.n = n;
    R.betti.push_back(1);
    // K_0 = m = ker(augmentation) inside F_0 = A
    std::vector<Vec> K;
    {
        Echelon E(p, 1 + n, 1);
        for (std::size_t l = 0; l < n; ++l) {
            Vec v(1 + n, 0);
            v[0] = A.augmentation[l];
            v[1 + l] = 1;
            if (!E.insert(v)) K.emplace_back(E.last_residue().begin() + 1, E.last_residue().end());
        }
    }
    auto fail = [&](const std::string& what) {
        if (R.failure.empty()) R.failure = what;
    };
    for (int i = 0; i < D; ++i) {
        const auto b = R.betti.back();
        const auto len = n * b;
        if (opt.shuffle_seed) shuffle_basis(K, p, rng);
        auto gens = minimal_generators(A, K, len);
        for (const auto& g : gens)
            for (std::size_t t = 0; t < b; ++t) {
                const Vec comp(g.begin() + static_cast<std::ptrdiff_t>(t * n), g.begin() + static_cast<std::ptrdiff_t>((t + 1) * n));
                if (A.augment(comp) != 0) {
                    R.minimal = false;
                    fail("differential " + std::to_string(i + 1) + " has an entry outside m");
                }
            }
        if (i > 0)
            for (const auto& g : gens)
                if (auto img = apply_differential(A, R.differentials.back(), n * R.betti[R.betti.size() - 2], g);
                    std::any_of(img.begin(), img.end(), [](auto x) { return x != 0; })) {
                    R.exact = false;
                    fail("d_" + std::to_string(i) + " o d_" + std::to_string(i + 1) + " != 0");
                }
        const auto b1 = gens.size();
        R.betti.push_back(b1);
        R.differentials.push_back(gens);
        if (i + 1 == D) break;
        // kernel of d_{i+1}: A^{b1} -> A^{b} via the augmented echelon [d(col) | e_col]
        const auto len1 = n * b1;
        Echelon E(p, len + len1, len);
        std::vector<Vec> next;
        for (std::size_t j = 0; j < b1; ++j)
            for (std::size_t l = 0; l < n; ++l) {
                Vec e(n, 0);
                e[l] = 1;
                Vec v = A.act(e, gens[j]);
                v.resize(len + len1, 0);
                v[len + j * n + l] = 1;
                if (!E.insert(std::move(v))) next.emplace_back(E.last_residue().begin() + static_cast<std::ptrdiff_t>(len), E.last_residue().end());
            }
        // image of d_{i+1} must be all of K_i
        if (E.rank() != K.size()) {
            R.exact = false;
            fail("image of d_" + std::to_string(i + 1) + " has dimension " + std::to_string(E.rank()) + ", kernel has " + std::to_string(K.size()));
        }
        K = std::move(next);
    }
    while (static_cast<int>(R.betti.size()) <= D) R.betti.push_back(0);
    return R;
}

/// Coefficients of (1+t)^g / (1-t^2)^s through t^D.
inline std::vector<std::int64_t> genfunc_series(int g, int s, int D) {
    std::vector<std::int64_t> num(static_cast<std::size_t>(D + 1), 0), den(static_cast<std::size_t>(D + 1), 0), out(static_cast<std::size_t>(D + 1), 0);
    for (int k = 0; k <= std::min(g, D); ++k) num[static_cast<std::size_t>(k)] = binomial(g, k);
    for (int k = 0; 2 * k <= D; ++k) den[static_cast<std::size_t>(2 * k)] = s == 0 ? (k == 0) : binomial(k + s - 1, s - 1);
    for (int i = 0; i <= D; ++i)
        for (int j = 0; i + j <= D; ++j) out[static_cast<std::size_t>(i + j)] += num[static_cast<std::size_t>(i)] * den[static_cast<std::size_t>(j)];
    return out;
}

struct GenfuncReport {
    bool pass = true;
    int first_mismatch = -1;
    int g = 0, s = 0;
    std::vector<std::int64_t> expected;
    std::vector<std::size_t> betti;
};

inline GenfuncReport verify_genfunc(const std::vector<std::size_t>& betti, int g, int s) {
    GenfuncReport rep;
    rep.g = g;
    rep.s = s;
    rep.betti = betti;
    rep.expected = genfunc_series(g, s, static_cast<int>(betti.size()) - 1);
    for (std::size_t i = 0; i < betti.size(); ++i)
        if (static_cast<std::int64_t>(betti[i]) != rep.expected[i]) {
            rep.pass = false;
            rep.first_mismatch = static_cast<int>(i);
            break;
        }
    return rep;
}

/// For a presentation, g = s = number of non-trivial variables.
inline GenfuncReport verify_genfunc(const LocalAlgebra& A, int D) {
    if (!A.exponents) detail::fail_invalid("verify_genfunc: (g, s) must be supplied for algebras without a presentation");
    const auto v = static_cast<int>(A.embedding_dimension());
    return verify_genfunc(minimal_resolution(A, D).betti, v, v);
}

struct Ext1Report {
    bool pass = true;
    std::size_t b2 = 0;
    int g = 0, s = 0;
    std::int64_t expected = 0;
};

/// b_2 = C(g, 2) + s.
inline Ext1Report verify_ext1_formula(const LocalAlgebra& A) {
    if (!A.exponents) detail::fail_invalid("verify_ext1_formula: needs a presentation");
    Ext1Report rep;
    rep.g = rep.s = static_cast<int>(A.embedding_dimension());
    rep.b2 = minimal_resolution(A, 2).betti[2];
    rep.expected = binomial(rep.g, 2) + rep.s;
    rep.pass = static_cast<std::int64_t>(rep.b2) == rep.expected;
    return rep;
}

struct DualCriteria {
    bool noncommutative_fgl_dual = false;  // b_2 = 0
    bool commutative_fgl_dual = false;     // b_n = C(g, n) for all computed n
    bool lower_bound = true;               // b_n >= C(g, n)
    std::int64_t s_measured = 0;           // b_2 - C(g, 2)
};

inline DualCriteria fgl_dual_criteria(const std::vector<std::size_t>& betti, int g) {
    if (betti.size() < 4) detail::fail_invalid("fgl_dual_criteria: need the series through degree 3");
    DualCriteria c;
    c.noncommutative_fgl_dual = betti[2] == 0;
    c.commutative_fgl_dual = true;
    for (std::size_t k = 0; k < betti.size(); ++k) {
        const auto e = binomial(g, static_cast<std::int64_t>(k));
        if (static_cast<std::int64_t>(betti[k]) != e) c.commutative_fgl_dual = false;
        if (static_cast<std::int64_t>(betti[k]) < e) c.lower_bound = false;
    }
    c.s_measured = static_cast<std::int64_t>(betti[2]) - binomial(g, 2);
    return c;
}

struct NcOracleReport {
    bool pass = true;
    int first_failure_degree = -1;
    std::vector<std::size_t> kernel_dims, cokernel_dims;  // of A^g -> A per internal degree
    std::vector<std::size_t> ext_dims;
};

/// In the free associative algebra on g letters truncated above degree D, checks that
/// 0 -> A^g -> A -> k -> 0, (a_i) -> Σ a_i X_i, is exact in internal degrees < D.
inline NcOracleReport nc_resolution_oracle(int g, int D, std::uint32_t p = 2) {
    if (g < 0 || g > kMaxOracleDim) detail::fail_cap("nc_resolution_oracle: g must be in 0..3");
    if (D < 1 || D > kMaxOracleDegree) detail::fail_cap("nc_resolution_oracle: D must be in 1..8");
    NcOracleReport rep;
    const auto G = static_cast<std::size_t>(g);
    auto words = [&](int d) {
        std::size_t w = 1;
        for (int i = 0; i < d; ++i) w *= G;
        return w;
    };
    for (int d = 0; d < D; ++d) {
        // source: ⊕_i A_{d-1} u_i, target A_d; word w of length d-1 times X_i maps to w*g + i
        const std::size_t tgt = words(d), src = d == 0 ? 0 : G * words(d - 1);
        detail_cohomology::Echelon E(p, tgt + src, tgt);
        std::size_t kernel = 0;
        for (std::size_t i = 0; i < G && d > 0; ++i)
            for (std::size_t w = 0; w < words(d - 1); ++w) {
                Vec v(tgt + src, 0);
                v[w * G + i] = 1;
                v[tgt + i * words(d - 1) + w] = 1;
                if (!E.insert(std::move(v))) ++kernel;
            }
        const auto cokernel = tgt - E.rank();
        rep.kernel_dims.push_back(kernel);
        rep.cokernel_dims.push_back(cokernel);
        const bool ok = kernel == 0 && cokernel == (d == 0 ? 1u : 0u);
        if (!ok && rep.pass) {
            rep.pass = false;
            rep.first_failure_degree = d;
        }
    }
    // generators: 1 in homological degree 0, u_1..u_g in degree 1, and whatever the kernel of A^g -> A needs
    rep.ext_dims = {1, G, std::accumulate(rep.kernel_dims.begin(), rep.kernel_dims.end(), std::size_t{0})};
    for (int i = 3; i <= D; ++i) rep.ext_dims.push_back(0);
    return rep;
}

inline nlohmann::json to_json(const Resolution& R) {
    return {{"p", R.p}, {"dim", R.n}, {"betti", R.betti}, {"minimal", R.minimal}, {"exact", R.exact}, {"failure", R.failure}};
}

inline nlohmann::json to_json(const GenfuncReport& r) {
    return {{"pass", r.pass}, {"g", r.g}, {"s", r.s}, {"betti", r.betti}, {"expected", r.expected}, {"first_mismatch", r.first_mismatch}};
}

}  // namespace unipotent::cohomology
