#pragma once

// Truncated formal group laws.
//
// Commutative, 1-dimensional: F(x, y) = Σ c_ij x^i y^j over Z/p^N, kept for i + j <= D.
// Non-commutative, g-dimensional: F_i(X; Y) with X's (resp. Y's) non-commuting among themselves
// but every X_a commuting with every Y_b; monomials are pairs (X-word, Y-word).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "unipotent/error.hpp"
#include "unipotent/hopf.hpp"
#include "unipotent/modular.hpp"
#include "unipotent/zmod_linalg.hpp"

namespace unipotent::fgl {

inline constexpr int kMaxCommutativeDegree = 32;
inline constexpr int kMaxNonCommutativeDegree = 6;
inline constexpr int kMaxNonCommutativeDim = 3;

using Series = std::vector<std::int64_t>;  // univariate, index = exponent

/// Bivariate series truncated at total degree D, dense (D+1) x (D+1).
struct Series2 {
    int D = 0;
    std::vector<std::int64_t> c;
    Series2() = default;
    explicit Series2(int deg) : D(deg), c(static_cast<std::size_t>((deg + 1) * (deg + 1)), 0) {}
    std::int64_t& operator()(int i, int j) { return c[static_cast<std::size_t>(i * (D + 1) + j)]; }
    std::int64_t operator()(int i, int j) const { return c[static_cast<std::size_t>(i * (D + 1) + j)]; }
    bool operator==(const Series2&) const = default;
};

namespace series {

inline Series mul(const zmod::Ring& Z, const Series& a, const Series& b, int D) {
    Series z(static_cast<std::size_t>(D + 1), 0);
    for (int i = 0; i <= D && i < static_cast<int>(a.size()); ++i) {
        if (!a[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; i + j <= D && j < static_cast<int>(b.size()); ++j)
            if (b[static_cast<std::size_t>(j)])
                z[static_cast<std::size_t>(i + j)] =
                    mod(z[static_cast<std::size_t>(i + j)] + mulmod(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)], Z.n), Z.n);
    }
    return z;
}

inline Series2 mul(const zmod::Ring& Z, const Series2& a, const Series2& b) {
    const int D = a.D;
    Series2 z(D);
    for (int i = 0; i <= D; ++i)
        for (int j = 0; i + j <= D; ++j) {
            const auto x = a(i, j);
            if (!x) continue;
            for (int k = 0; i + j + k <= D; ++k)
                for (int l = 0; i + j + k + l <= D; ++l)
                    if (b(k, l)) z(i + k, j + l) = mod(z(i + k, j + l) + mulmod(x, b(k, l), Z.n), Z.n);
        }
    return z;
}

inline Series2 pow(const zmod::Ring& Z, Series2 a, std::uint64_t e) {
    Series2 r(a.D);
    r(0, 0) = 1 % Z.n;
    while (e) {
        if (e & 1) r = mul(Z, r, a);
        e >>= 1;
        if (e) a = mul(Z, a, a);
    }
    return r;
}

/// f(g(x)) for g(0) = 0.
inline Series compose(const zmod::Ring& Z, const Series& f, const Series& g, int D) {
    Series out(static_cast<std::size_t>(D + 1), 0), pw(static_cast<std::size_t>(D + 1), 0);
    pw[0] = 1 % Z.n;
    for (int k = 0; k <= D && k < static_cast<int>(f.size()); ++k) {
        if (f[static_cast<std::size_t>(k)])
            for (int i = 0; i <= D; ++i)
                out[static_cast<std::size_t>(i)] = mod(out[static_cast<std::size_t>(i)] + mulmod(f[static_cast<std::size_t>(k)], pw[static_cast<std::size_t>(i)], Z.n), Z.n);
        pw = mul(Z, pw, g, D);
    }
    return out;
}

/// Compositional inverse of φ = u x + ..., u a unit.
inline Series inverse(const zmod::Ring& Z, const Series& phi, int D) {
    if (phi.size() < 2 || Z.val(phi[1]) != 0) detail::fail_invalid("series inverse: linear coefficient must be a unit");
    const auto uinv = invmod(phi[1], Z.n);
    Series psi(static_cast<std::size_t>(D + 1), 0);
    psi[1] = uinv;
    for (int d = 2; d <= D; ++d) {
        const auto c = compose(Z, phi, psi, d);
        psi[static_cast<std::size_t>(d)] = mod(-mulmod(c[static_cast<std::size_t>(d)], uinv, Z.n), Z.n);
    }
    return psi;
}

/// Σ a_k G^k for a univariate a (a_0 = 0) and bivariate G with G(0,0) = 0.
inline Series2 apply(const zmod::Ring& Z, const Series& a, const Series2& G) {
    Series2 out(G.D), pw(G.D);
    pw(0, 0) = 1 % Z.n;
    for (int k = 0; k <= G.D && k < static_cast<int>(a.size()); ++k) {
        if (a[static_cast<std::size_t>(k)])
            for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = mod(out.c[i] + mulmod(a[static_cast<std::size_t>(k)], pw.c[i], Z.n), Z.n);
        pw = mul(Z, pw, G);
    }
    return out;
}

}  // namespace series

struct CommFGL {
    zmod::Ring Z;
    Series2 F;
    int degree() const { return F.D; }
};

struct FglReport {
    bool pass = true;
    std::string violated;  // "unit", "symmetry", "associativity"
    int degree = -1;       // lowest total degree where it fails
};

inline void check_degree(int D) {
    if (D < 1 || D > kMaxCommutativeDegree) detail::fail_cap("FGL truncation degree must be in 1.." + std::to_string(kMaxCommutativeDegree));
}

inline CommFGL additive(const zmod::Ring& Z, int D) {
    check_degree(D);
    CommFGL F{Z, Series2(D)};
    F.F(1, 0) = F.F(0, 1) = 1 % Z.n;
    return F;
}

inline CommFGL multiplicative(const zmod::Ring& Z, int D) {
    auto F = additive(Z, D);
    if (D >= 2) F.F(1, 1) = 1 % Z.n;
    return F;
}

/// F(G(x, y)) for univariate-in-the-first-slot composition: Σ c_ij A^i B^j with A, B bivariate.
inline Series2 evaluate(const CommFGL& F, const Series2& A, const Series2& B) {
    const auto& Z = F.Z;
    const int D = F.degree();
    std::vector<Series2> Ap{Series2(D)}, Bp{Series2(D)};
    Ap[0](0, 0) = Bp[0](0, 0) = 1 % Z.n;
    for (int i = 1; i <= D; ++i) {
        Ap.push_back(series::mul(Z, Ap.back(), A));
        Bp.push_back(series::mul(Z, Bp.back(), B));
    }
    Series2 out(D);
    for (int i = 0; i <= D; ++i)
        for (int j = 0; i + j <= D; ++j) {
            if (!F.F(i, j)) continue;
            const auto AB = series::mul(Z, Ap[static_cast<std::size_t>(i)], Bp[static_cast<std::size_t>(j)]);
            for (std::size_t t = 0; t < out.c.size(); ++t) out.c[t] = mod(out.c[t] + mulmod(F.F(i, j), AB.c[t], Z.n), Z.n);
        }
    return out;
}

/// Unit, symmetry and associativity modulo total degree > D.
inline FglReport check(const CommFGL& F) {
    const auto& Z = F.Z;
    const int D = F.degree();
    FglReport rep;
    auto fail = [&](const char* what, int deg) {
        if (rep.pass || deg < rep.degree) {
            if (rep.pass || rep.violated.empty()) rep.violated = what;
            rep.pass = false;
            rep.degree = deg;
        }
    };
    if (F.F(0, 0) != 0) fail("unit", 0);
    for (int i = 1; i <= D && rep.pass; ++i) {
        const std::int64_t want = i == 1 ? 1 % Z.n : 0;
        if (F.F(i, 0) != want || F.F(0, i) != want) fail("unit", i);
    }
    if (!rep.pass) return rep;
    for (int d = 2; d <= D && rep.pass; ++d)
        for (int i = 0; i <= d; ++i)
            if (F.F(i, d - i) != F.F(d - i, i)) {
                fail("symmetry", d);
                break;
            }
    if (!rep.pass) return rep;
    // F(F(x,y), z) = Σ_{i,k} c_ik F(x,y)^i z^k and F(x, F(y,z)) = Σ_{i,j} c_ij x^i F(y,z)^j.
    std::vector<Series2> Fp{Series2(D)};
    Fp[0](0, 0) = 1 % Z.n;
    for (int i = 1; i <= D; ++i) Fp.push_back(series::mul(Z, Fp.back(), F.F));
    const auto n1 = static_cast<std::size_t>(D + 1);
    std::vector<std::int64_t> L(n1 * n1 * n1, 0), R(n1 * n1 * n1, 0);
    auto at = [&](int a, int b, int k) { return (static_cast<std::size_t>(a) * n1 + static_cast<std::size_t>(b)) * n1 + static_cast<std::size_t>(k); };
    for (int i = 0; i <= D; ++i)
        for (int k = 0; i + k <= D; ++k) {
            if (const auto c = F.F(i, k))
                for (int a = 0; a + k <= D; ++a)
                    for (int b = 0; a + b + k <= D; ++b)
                        if (const auto v = Fp[static_cast<std::size_t>(i)](a, b)) L[at(a, b, k)] = mod(L[at(a, b, k)] + mulmod(c, v, Z.n), Z.n);
            if (const auto c = F.F(i, k))
                for (int b = 0; i + b <= D; ++b)
                    for (int l = 0; i + b + l <= D; ++l)
                        if (const auto v = Fp[static_cast<std::size_t>(k)](b, l)) R[at(i, b, l)] = mod(R[at(i, b, l)] + mulmod(c, v, Z.n), Z.n);
        }
    for (int d = 0; d <= D && rep.pass; ++d)
        for (int a = 0; a <= d && rep.pass; ++a)
            for (int b = 0; a + b <= d; ++b)
                if (L[at(a, b, d - a - b)] != R[at(a, b, d - a - b)]) {
                    fail("associativity", d);
                    break;
                }
    return rep;
}

/// [p](x), the p-fold F-sum of x with itself, truncated at D.
inline Series p_series(const CommFGL& F) {
    const auto& Z = F.Z;
    const int D = F.degree();
    Series x(static_cast<std::size_t>(D + 1), 0);
    if (D >= 1) x[1] = 1 % Z.n;
    Series s = x;
    for (std::int64_t k = 1; k < Z.p; ++k) {
        // F(x, s) = Σ c_ij x^i s^j
        Series out(static_cast<std::size_t>(D + 1), 0), sp(static_cast<std::size_t>(D + 1), 0);
        sp[0] = 1 % Z.n;
        for (int j = 0; j <= D; ++j) {
            for (int i = 0; i + j <= D; ++i) {
                const auto c = F.F(i, j);
                if (!c) continue;
                for (int t = 0; t + i <= D; ++t)
                    if (sp[static_cast<std::size_t>(t)])
                        out[static_cast<std::size_t>(t + i)] = mod(out[static_cast<std::size_t>(t + i)] + mulmod(c, sp[static_cast<std::size_t>(t)], Z.n), Z.n);
            }
            sp = series::mul(Z, sp, s, D);
        }
        s = std::move(out);
    }
    return s;
}

struct Height {
    bool exact = false;
    int value = 0;             // h, or the lower bound floor(log_p D)
    int leading_exponent = 0;  // exponent of the lowest term of [p](x) mod p, 0 if none
    std::string to_string() const { return exact ? std::to_string(value) : ">= " + std::to_string(value); }
};

inline CommFGL reduce_mod_p(const CommFGL& F) {
    CommFGL G{zmod::Ring(F.Z.p, 1), F.F};
    for (auto& c : G.F.c) c = mod(c, G.Z.n);
    return G;
}

/// Height from the lowest term u x^{p^h} of [p](x) over F_p.
inline Height height(const CommFGL& F) {
    const auto G = reduce_mod_p(F);
    const auto s = p_series(G);
    Height h;
    for (int e = 1; e < static_cast<int>(s.size()); ++e) {
        if (!s[static_cast<std::size_t>(e)]) continue;
        h.leading_exponent = e;
        if (!is_power_of(e, G.Z.p) || e == 1) detail::fail_check("height: unexpected leading exponent " + std::to_string(e));
        h.exact = true;
        for (std::int64_t q = 1; q < e; q *= G.Z.p) ++h.value;
        return h;
    }
    for (std::int64_t q = G.Z.p; q <= G.degree(); q *= G.Z.p) ++h.value;
    return h;
}

/// F^φ(x, y) = φ(F(φ^{-1}(x), φ^{-1}(y))).
inline CommFGL coordinate_change(const CommFGL& F, const Series& phi) {
    const auto& Z = F.Z;
    const int D = F.degree();
    const auto psi = series::inverse(Z, phi, D);
    Series2 A(D), B(D);
    for (int i = 1; i <= D; ++i) {
        A(i, 0) = psi[static_cast<std::size_t>(i)];
        B(0, i) = psi[static_cast<std::size_t>(i)];
    }
    return CommFGL{Z, series::apply(Z, phi, evaluate(F, A, B))};
}

/// The Lubin–Tate law for f = p x + x^{p^h}, solved degree by degree over Z/p^{N+D} and reported mod p^N.
inline CommFGL lubin_tate(std::int64_t p, int h, int D, int N = 1) {
    check_degree(D);
    if (!is_prime(p)) detail::fail_invalid("lubin_tate: p must be prime");
    if (h < 1 || N < 1) detail::fail_invalid("lubin_tate: h and N must be positive");
    const int M = N + D;
    if (static_cast<double>(M) * std::log2(static_cast<double>(p)) > 61.0) detail::fail_cap("lubin_tate: working modulus exceeds 2^61");
    const zmod::Ring Z(p, M);
    const auto q = static_cast<std::uint64_t>(ipow(p, h));
    Series f(static_cast<std::size_t>(D + 1), 0);
    f[1] = p;
    if (q <= static_cast<std::uint64_t>(D)) f[q] = 1;
    CommFGL F = additive(Z, D);
    for (int d = 2; d <= D; ++d) {
        // E = f(F) - F(f(x), f(y)) truncated at degree d
        Series2 Fd(d);
        for (int i = 0; i <= d; ++i)
            for (int j = 0; i + j <= d; ++j) Fd(i, j) = F.F(i, j);
        auto lhs = q <= static_cast<std::uint64_t>(d) ? series::pow(Z, Fd, q) : Series2(d);
        for (std::size_t t = 0; t < lhs.c.size(); ++t) lhs.c[t] = mod(lhs.c[t] + mulmod(p, Fd.c[t], Z.n), Z.n);
        std::vector<Series> fp{Series(static_cast<std::size_t>(d + 1), 0)};
        fp[0][0] = 1;
        for (int i = 1; i <= d; ++i) fp.push_back(series::mul(Z, fp.back(), f, d));
        Series2 rhs(d);
        for (int i = 0; i <= d; ++i)
            for (int j = 0; i + j <= d; ++j) {
                const auto c = Fd(i, j);
                if (!c) continue;
                for (int a = 0; a <= d; ++a) {
                    const auto u = fp[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
                    if (!u) continue;
                    const auto cu = mulmod(c, u, Z.n);
                    for (int b = 0; a + b <= d; ++b)
                        if (const auto v = fp[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)]) rhs(a, b) = mod(rhs(a, b) + mulmod(cu, v, Z.n), Z.n);
                }
            }
        const auto unit = invmod(mod(1 - ipow(p, d - 1), Z.n), Z.n);
        for (int i = 0; i <= d; ++i) {
            const int j = d - i;
            const auto e = mod(lhs(i, j) - rhs(i, j), Z.n);
            if (e % p != 0) detail::fail_check("lubin_tate: obstruction not divisible by p");
            // (p - p^d) Δ = -E
            F.F(i, j) = mod(-mulmod(e / p, unit, Z.n), Z.n);
        }
        for (int e = 0; e < d; ++e)
            for (int i = 0; i <= e; ++i)
                if (mod(lhs(i, e - i) - rhs(i, e - i), Z.n) != 0) detail::fail_check("lubin_tate: lower-degree defect");
    }
    CommFGL out{zmod::Ring(p, N), F.F};
    for (auto& c : out.F.c) c = mod(c, out.Z.n);
    return out;
}

/// k[t]/(t^{p^r}) with Δt = F(t ⊗ 1, 1 ⊗ t), for F over F_p with D >= 2(p^r - 1).
inline hopf::FiniteHopfAlgebra dual_level(const CommFGL& F, int r) {
    const auto& Z = F.Z;
    if (Z.R != 1) detail::fail_invalid("dual_level: the law must be over F_p");
    const std::int64_t n64 = ipow(Z.p, r);
    if (n64 > static_cast<std::int64_t>(hopf::kMaxDimension)) detail::fail_cap("dual_level: p^r exceeds 32");
    const int n = static_cast<int>(n64);
    if (F.degree() < 2 * (n - 1)) detail::fail_invalid("dual_level: truncation degree must be at least 2(p^r - 1)");
    const auto p = static_cast<std::uint32_t>(Z.p);
    hopf::FiniteHopfAlgebra H;
    H.p = p;
    H.n = static_cast<std::size_t>(n);
    H.name = "dual_level(r=" + std::to_string(r) + ")";
    const auto un = static_cast<std::size_t>(n);
    H.mult.assign(un * un * un, 0);
    H.comult.assign(un * un * un, 0);
    H.unit.assign(un, 0);
    H.counit.assign(un, 0);
    H.antipode.assign(un * un, 0);
    for (std::size_t a = 0; a < un; ++a) {
        H.basis_names.push_back("t^" + std::to_string(a));
        for (std::size_t b = 0; a + b < un; ++b) H.mult[(a * un + b) * un + a + b] = 1;
    }
    H.unit[0] = 1;
    H.counit[0] = 1;
    // box-truncated powers of F(x, y): exponents i, j < n
    auto boxmul = [&](const Series2& A, const Series2& B) {
        Series2 C(A.D);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!A(i, j)) continue;
                for (int k = 0; i + k < n; ++k)
                    for (int l = 0; j + l < n; ++l)
                        if (B(k, l)) C(i + k, j + l) = mod(C(i + k, j + l) + mulmod(A(i, j), B(k, l), Z.n), Z.n);
            }
        return C;
    };
    Series2 box(F.degree());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) box(i, j) = F.F(i, j);
    Series2 pw(F.degree());
    pw(0, 0) = 1;
    for (std::size_t k = 0; k < un; ++k) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                H.comult[(k * un + static_cast<std::size_t>(i)) * un + static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(pw(i, j));
        pw = boxmul(pw, box);
    }
    // formal inverse ι with F(x, ι(x)) = 0
    Series iota(static_cast<std::size_t>(n), 0);
    if (n > 1) iota[1] = mod(-1, Z.n);
    for (int d = 2; d < n; ++d) {
        Series out(static_cast<std::size_t>(d + 1), 0), ip(static_cast<std::size_t>(d + 1), 0);
        ip[0] = 1;
        Series trunc(iota.begin(), iota.begin() + d + 1);
        for (int j = 0; j <= d; ++j) {
            for (int i = 0; i + j <= d; ++i)
                if (F.F(i, j))
                    for (int t = 0; t + i <= d; ++t)
                        out[static_cast<std::size_t>(t + i)] = mod(out[static_cast<std::size_t>(t + i)] + mulmod(F.F(i, j), ip[static_cast<std::size_t>(t)], Z.n), Z.n);
            ip = series::mul(Z, ip, trunc, d);
        }
        iota[static_cast<std::size_t>(d)] = mod(-out[static_cast<std::size_t>(d)], Z.n);
    }
    Series sp(static_cast<std::size_t>(n), 0);
    sp[0] = 1;
    for (std::size_t k = 0; k < un; ++k) {
        for (std::size_t b = 0; b < un; ++b) H.antipode[b * un + k] = static_cast<std::uint32_t>(sp[b]);
        sp = series::mul(Z, sp, iota, n - 1);
    }
    return hopf::finalize(std::move(H));
}

inline nlohmann::json to_json(const CommFGL& F) {
    nlohmann::json coeffs = nlohmann::json::object();
    for (int i = 0; i <= F.degree(); ++i)
        for (int j = 0; i + j <= F.degree(); ++j)
            if (F.F(i, j)) coeffs[std::to_string(i) + "," + std::to_string(j)] = F.F(i, j);
    const std::string ring = F.Z.R == 1 ? "F_" + std::to_string(F.Z.p) : "Z/" + std::to_string(F.Z.p) + "^" + std::to_string(F.Z.R);
    return {{"g", 1}, {"D", F.degree()}, {"ring", ring}, {"coeffs", coeffs}};
}

inline nlohmann::json to_json(const zmod::Ring& Z, const Series& s) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i]) j[std::to_string(i)] = s[i];
    (void)Z;
    return j;
}

// ---- non-commutative laws ----

using Word = std::string;  // letters are bytes 0..g-1
using Key2 = std::pair<Word, Word>;
using Key3 = std::tuple<Word, Word, Word>;
using NcSeries2 = std::map<Key2, std::int64_t>;
using NcSeries3 = std::map<Key3, std::int64_t>;

struct NcFGL {
    zmod::Ring Z;
    int g = 1;
    int D = 1;
    std::vector<NcSeries2> F;  // F[i] for i < g
};

inline void check_nc_shape(int g, int D) {
    if (g < 1 || g > kMaxNonCommutativeDim) detail::fail_cap("non-commutative FGL: g must be in 1..3");
    if (D < 1 || D > kMaxNonCommutativeDegree) detail::fail_cap("non-commutative FGL: D must be in 1..6");
}

/// F_i = X_i + Y_i (+ X_i Y_i when `product` is set).
inline NcFGL nc_standard(const zmod::Ring& Z, int g, int D, bool product) {
    check_nc_shape(g, D);
    NcFGL F{Z, g, D, {}};
    for (int i = 0; i < g; ++i) {
        const Word w(1, static_cast<char>(i));
        NcSeries2 s;
        s[{w, ""}] = 1 % Z.n;
        s[{"", w}] = 1 % Z.n;
        if (product && D >= 2) s[{w, w}] = 1 % Z.n;
        F.F.push_back(std::move(s));
    }
    return F;
}

namespace detail_fgl {

inline std::size_t length(const Key3& k) { return std::get<0>(k).size() + std::get<1>(k).size() + std::get<2>(k).size(); }

inline NcSeries3 mul(const zmod::Ring& Z, const NcSeries3& a, const NcSeries3& b, int D) {
    NcSeries3 out;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) {
            if (length(ka) + length(kb) > static_cast<std::size_t>(D)) continue;
            Key3 k{std::get<0>(ka) + std::get<0>(kb), std::get<1>(ka) + std::get<1>(kb), std::get<2>(ka) + std::get<2>(kb)};
            auto& slot = out[k];
            slot = mod(slot + mulmod(va, vb, Z.n), Z.n);
        }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

inline void add_scaled(const zmod::Ring& Z, NcSeries3& acc, const NcSeries3& x, std::int64_t c) {
    for (const auto& [k, v] : x) {
        auto& slot = acc[k];
        slot = mod(slot + mulmod(v, c, Z.n), Z.n);
    }
    std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
}

/// F_i(A; B) where A_a, B_b are series in three variable groups.
inline NcSeries3 substitute(const NcFGL& F, std::size_t i, const std::vector<NcSeries3>& A, const std::vector<NcSeries3>& B) {
    const auto& Z = F.Z;
    NcSeries3 out;
    for (const auto& [key, c] : F.F[i]) {
        NcSeries3 term{{Key3{"", "", ""}, 1 % Z.n}};
        for (char a : key.first) term = mul(Z, term, A[static_cast<std::size_t>(a)], F.D);
        for (char b : key.second) term = mul(Z, term, B[static_cast<std::size_t>(b)], F.D);
        add_scaled(Z, out, term, c);
    }
    return out;
}

}  // namespace detail_fgl

inline FglReport check(const NcFGL& F) {
    const auto& Z = F.Z;
    FglReport rep;
    auto fail = [&](const std::string& what, int deg) {
        if (rep.pass) {
            rep.pass = false;
            rep.violated = what;
            rep.degree = deg;
        }
    };
    // F_i(X; 0) = F_i(0; X) = X_i
    for (int i = 0; i < F.g && rep.pass; ++i) {
        const Word w(1, static_cast<char>(i));
        for (const auto& [k, v] : F.F[static_cast<std::size_t>(i)]) {
            if (v == 0) continue;
            const bool xonly = k.second.empty(), yonly = k.first.empty();
            if ((xonly && k.first != w) || (yonly && k.second != w)) {
                fail("unit", static_cast<int>(k.first.size() + k.second.size()));
                break;
            }
        }
        const auto& s = F.F[static_cast<std::size_t>(i)];
        auto get = [&](const Key2& k) {
            auto it = s.find(k);
            return it == s.end() ? 0 : it->second;
        };
        if (rep.pass && (get({w, ""}) != 1 % Z.n || get({"", w}) != 1 % Z.n)) fail("unit", 1);
        // symmetry: F(X; Y) = F(Y; X) means c(u, v) = c(v, u)
        for (const auto& [k, v] : s)
            if (rep.pass && get({k.second, k.first}) != v) fail("symmetry", static_cast<int>(k.first.size() + k.second.size()));
    }
    if (!rep.pass) return rep;
    // associativity in k{{X; Y; Z}}
    std::vector<NcSeries3> X, Y, Zs, FXY, FYZ;
    for (int a = 0; a < F.g; ++a) {
        const Word w(1, static_cast<char>(a));
        X.push_back({{Key3{w, "", ""}, 1 % Z.n}});
        Y.push_back({{Key3{"", w, ""}, 1 % Z.n}});
        Zs.push_back({{Key3{"", "", w}, 1 % Z.n}});
    }
    for (int a = 0; a < F.g; ++a) {
        FXY.push_back(detail_fgl::substitute(F, static_cast<std::size_t>(a), X, Y));
        FYZ.push_back(detail_fgl::substitute(F, static_cast<std::size_t>(a), Y, Zs));
    }
    for (int i = 0; i < F.g && rep.pass; ++i) {
        const auto L = detail_fgl::substitute(F, static_cast<std::size_t>(i), FXY, Zs);
        const auto R = detail_fgl::substitute(F, static_cast<std::size_t>(i), X, FYZ);
        if (L == R) continue;
        int deg = F.D + 1;
        for (const auto& [k, v] : L) {
            auto it = R.find(k);
            if (it == R.end() || it->second != v) deg = std::min(deg, static_cast<int>(detail_fgl::length(k)));
        }
        for (const auto& [k, v] : R)
            if (!L.count(k)) deg = std::min(deg, static_cast<int>(detail_fgl::length(k)));
        fail("associativity", deg);
    }
    return rep;
}

inline nlohmann::json to_json(const NcFGL& F) {
    auto word = [](const Word& w) {
        std::string s;
        for (char c : w) s += static_cast<char>('0' + c);
        return s;
    };
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& s : F.F) {
        nlohmann::json m = nlohmann::json::object();
        for (const auto& [k, v] : s)
            if (v) m[word(k.first) + "|" + word(k.second)] = v;
        coeffs.push_back(m);
    }
    const std::string ring = F.Z.R == 1 ? "F_" + std::to_string(F.Z.p) : "Z/" + std::to_string(F.Z.p) + "^" + std::to_string(F.Z.R);
    return {{"g", F.g}, {"D", F.D}, {"ring", ring}, {"coeffs", coeffs}};
}

}  // namespace unipotent::fgl
