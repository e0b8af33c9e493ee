#pragma once

// Finite-dimensional Hopf algebras over F_p given by dense structure tensors.
//
// Layout (n = dimension, basis e_0..e_{n-1}):
//   mult[(a*n + b)*n + c]   coefficient of e_c in e_a e_b
//   comult[(c*n + a)*n + b] coefficient of e_a ⊗ e_b in Δ(e_c)
//   unit[a], counit[a], antipode[b*n + a] = coefficient of e_b in S(e_a)

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "unipotent/error.hpp"
#include "unipotent/linalg.hpp"
#include "unipotent/modular.hpp"
#include "unipotent/witt.hpp"

namespace unipotent::hopf {

inline constexpr std::size_t kMaxDimension = 32;

struct FiniteHopfAlgebra {
    std::uint32_t p = 2;
    std::size_t n = 0;
    std::string name;
    std::vector<std::uint32_t> mult, comult, unit, counit, antipode;
    std::vector<std::string> basis_names;

    std::uint32_t m(std::size_t a, std::size_t b, std::size_t c) const { return mult[(a * n + b) * n + c]; }
    std::uint32_t d(std::size_t c, std::size_t a, std::size_t b) const { return comult[(c * n + a) * n + b]; }
    std::uint32_t s(std::size_t b, std::size_t a) const { return antipode[b * n + a]; }
};

using Vec = std::vector<std::uint32_t>;

struct AxiomReport {
    bool pass = true;
    std::string first_failure;
    std::vector<std::pair<std::string, bool>> checks;
};

namespace detail_hopf {

struct Ctx {
    const FiniteHopfAlgebra& H;
    PrimeField F;
    std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> prod;  // nonzeros of e_a e_b

    explicit Ctx(const FiniteHopfAlgebra& h) : H(h), F(h.p), prod(h.n * h.n) {
        for (std::size_t ab = 0; ab < h.n * h.n; ++ab)
            for (std::size_t c = 0; c < h.n; ++c)
                if (auto v = h.mult[ab * h.n + c]) prod[ab].emplace_back(c, v);
    }
    std::size_t n() const { return H.n; }

    Vec mul(const Vec& x, const Vec& y) const {
        const auto n = H.n;
        Vec z(n, 0);
        for (std::size_t a = 0; a < n; ++a) {
            if (!x[a]) continue;
            for (std::size_t b = 0; b < n; ++b) {
                if (!y[b]) continue;
                const auto xy = F.mul(x[a], y[b]);
                for (auto [c, v] : prod[a * n + b]) z[c] = F.add(z[c], F.mul(xy, v));
            }
        }
        return z;
    }
    // elements of H ⊗ H are n*n vectors indexed a*n + b
    Vec delta(const Vec& x) const {
        const auto n = H.n;
        Vec z(n * n, 0);
        for (std::size_t c = 0; c < n; ++c) {
            if (!x[c]) continue;
            for (std::size_t i = 0; i < n * n; ++i)
                if (H.comult[c * n * n + i]) z[i] = F.add(z[i], F.mul(x[c], H.comult[c * n * n + i]));
        }
        return z;
    }
    Vec mul2(const Vec& x, const Vec& y) const {
        const auto n = H.n;
        std::vector<std::size_t> nx, ny;
        for (std::size_t i = 0; i < n * n; ++i) {
            if (x[i]) nx.push_back(i);
            if (y[i]) ny.push_back(i);
        }
        Vec z(n * n, 0);
        for (auto i : nx)
            for (auto j : ny) {
                const auto c = F.mul(x[i], y[j]);
                const auto& P1 = prod[(i / n) * n + j / n];
                const auto& P2 = prod[(i % n) * n + j % n];
                for (auto [u, mu] : P1)
                    for (auto [v, mv] : P2) z[u * n + v] = F.add(z[u * n + v], F.mul(c, F.mul(mu, mv)));
            }
        return z;
    }
    std::uint32_t eps(const Vec& x) const {
        std::uint32_t s = 0;
        for (std::size_t a = 0; a < H.n; ++a) s = F.add(s, F.mul(x[a], H.counit[a]));
        return s;
    }
    Vec S(const Vec& x) const {
        Vec z(H.n, 0);
        for (std::size_t a = 0; a < H.n; ++a) {
            if (!x[a]) continue;
            for (std::size_t b = 0; b < H.n; ++b) z[b] = F.add(z[b], F.mul(x[a], H.s(b, a)));
        }
        return z;
    }
    Vec e(std::size_t a) const {
        Vec v(H.n, 0);
        v[a] = 1;
        return v;
    }
    Vec scale(const Vec& x, std::uint32_t c) const {
        Vec z = x;
        for (auto& v : z) v = F.mul(v, c);
        return z;
    }
    Vec add(const Vec& x, const Vec& y) const {
        Vec z = x;
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = F.add(z[i], y[i]);
        return z;
    }
};

}  // namespace detail_hopf

inline void validate_shape(const FiniteHopfAlgebra& H) {
    const auto n = H.n;
    if (n == 0 || n > kMaxDimension) detail::fail_cap("Hopf algebra dimension must be in 1..32");
    if (H.mult.size() != n * n * n || H.comult.size() != n * n * n || H.unit.size() != n || H.counit.size() != n ||
        H.antipode.size() != n * n)
        detail::fail_invalid("Hopf algebra: tensor sizes do not match the dimension");
    for (const auto* t : {&H.mult, &H.comult, &H.unit, &H.counit, &H.antipode})
        for (auto v : *t)
            if (v >= H.p) detail::fail_invalid("Hopf algebra: coefficient not reduced mod p");
}

/// All Hopf algebra axioms, checked on basis elements.
inline AxiomReport check_axioms(const FiniteHopfAlgebra& H) {
    validate_shape(H);
    const detail_hopf::Ctx C(H);
    const auto n = H.n;
    AxiomReport rep;
    auto record = [&](const std::string& name, bool ok) {
        rep.checks.emplace_back(name, ok);
        if (!ok && rep.pass) {
            rep.pass = false;
            rep.first_failure = name;
        }
    };
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
        for (std::size_t b = 0; b < n && ok; ++b)
            for (std::size_t c = 0; c < n && ok; ++c)
                ok = C.mul(C.mul(C.e(a), C.e(b)), C.e(c)) == C.mul(C.e(a), C.mul(C.e(b), C.e(c)));
    record("associativity", ok);
    ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = C.mul(H.unit, C.e(a)) == C.e(a) && C.mul(C.e(a), H.unit) == C.e(a);
    record("unit", ok);
    ok = true;
    for (std::size_t c = 0; c < n && ok; ++c) {
        // (Δ ⊗ id)Δ and (id ⊗ Δ)Δ as n^3 vectors indexed (a, b, d)
        Vec L(n * n * n, 0), R(n * n * n, 0);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                const auto v = H.d(c, x, y);
                if (!v) continue;
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b) {
                        if (auto w = H.d(x, a, b)) L[(a * n + b) * n + y] = C.F.add(L[(a * n + b) * n + y], C.F.mul(v, w));
                        if (auto w = H.d(y, a, b)) R[(x * n + a) * n + b] = C.F.add(R[(x * n + a) * n + b], C.F.mul(v, w));
                    }
            }
        ok = L == R;
    }
    record("coassociativity", ok);
    ok = true;
    for (std::size_t c = 0; c < n && ok; ++c) {
        Vec L(n, 0), R(n, 0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const auto v = H.d(c, a, b);
                if (!v) continue;
                L[b] = C.F.add(L[b], C.F.mul(v, H.counit[a]));
                R[a] = C.F.add(R[a], C.F.mul(v, H.counit[b]));
            }
        ok = L == C.e(c) && R == C.e(c);
    }
    record("counit", ok);
    ok = true;
    Vec one2(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) one2[a * n + b] = C.F.mul(H.unit[a], H.unit[b]);
    ok = C.delta(H.unit) == one2 && C.eps(H.unit) == 1;
    for (std::size_t a = 0; a < n && ok; ++a)
        for (std::size_t b = 0; b < n && ok; ++b) {
            const auto ab = C.mul(C.e(a), C.e(b));
            ok = C.delta(ab) == C.mul2(C.delta(C.e(a)), C.delta(C.e(b))) &&
                 C.eps(ab) == C.F.mul(H.counit[a], H.counit[b]);
        }
    record("bialgebra", ok);
    ok = true;
    for (std::size_t c = 0; c < n && ok; ++c) {
        Vec L(n, 0), R(n, 0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const auto v = H.d(c, a, b);
                if (!v) continue;
                L = C.add(L, C.scale(C.mul(C.S(C.e(a)), C.e(b)), v));
                R = C.add(R, C.scale(C.mul(C.e(a), C.S(C.e(b))), v));
            }
        const auto target = C.scale(H.unit, H.counit[c]);
        ok = L == target && R == target;
    }
    record("antipode", ok);
    return rep;
}

inline bool is_commutative(const FiniteHopfAlgebra& H) {
    for (std::size_t a = 0; a < H.n; ++a)
        for (std::size_t b = 0; b < H.n; ++b)
            for (std::size_t c = 0; c < H.n; ++c)
                if (H.m(a, b, c) != H.m(b, a, c)) return false;
    return true;
}

inline bool is_cocommutative(const FiniteHopfAlgebra& H) {
    for (std::size_t c = 0; c < H.n; ++c)
        for (std::size_t a = 0; a < H.n; ++a)
            for (std::size_t b = 0; b < H.n; ++b)
                if (H.d(c, a, b) != H.d(c, b, a)) return false;
    return true;
}

inline FiniteHopfAlgebra finalize(FiniteHopfAlgebra H) {
    const auto rep = check_axioms(H);
    if (!rep.pass) detail::fail_check("Hopf algebra " + H.name + ": " + rep.first_failure + " fails");
    return H;
}

// ---- constructors ----

namespace detail_hopf {

inline std::uint32_t reduce_mod(const BigInt& c, std::uint32_t p) {
    BigInt t = c % p;
    if (t < 0) t += p;
    return t.convert_to<std::uint32_t>();
}

inline FiniteHopfAlgebra blank(std::uint32_t p, std::size_t n, std::string name) {
    if (n == 0 || n > kMaxDimension) detail::fail_cap("Hopf algebra dimension " + std::to_string(n) + " exceeds 32");
    FiniteHopfAlgebra H;
    H.p = p;
    H.n = n;
    H.name = std::move(name);
    H.mult.assign(n * n * n, 0);
    H.comult.assign(n * n * n, 0);
    H.unit.assign(n, 0);
    H.counit.assign(n, 0);
    H.antipode.assign(n * n, 0);
    return H;
}

}  // namespace detail_hopf

/// k[x]/x^{p^v} with x primitive.
inline FiniteHopfAlgebra alpha(std::uint32_t p, int v) {
    PrimeField F(p);
    if (v < 1) detail::fail_invalid("alpha_{p^v}: v must be positive");
    const auto n = static_cast<std::size_t>(ipow(p, v));
    auto H = detail_hopf::blank(p, n, v == 1 ? "alpha_p" : "alpha_{p^" + std::to_string(v) + "}");
    for (std::size_t a = 0; a < n; ++a) {
        H.basis_names.push_back("x^" + std::to_string(a));
        for (std::size_t b = 0; a + b < n; ++b) H.mult[(a * n + b) * n + a + b] = 1;
        for (std::size_t i = 0; i <= a; ++i) H.comult[(a * n + i) * n + (a - i)] = F.from_int(binomial(static_cast<i64>(a), static_cast<i64>(i)) % p);
        H.antipode[a * n + a] = a % 2 ? F.neg(1) : 1;
    }
    H.unit[0] = 1;
    H.counit[0] = 1;
    return finalize(std::move(H));
}

/// k[x]/(x^p - 1) with x group-like.
inline FiniteHopfAlgebra mu(std::uint32_t p) {
    PrimeField F(p);
    const std::size_t n = p;
    auto H = detail_hopf::blank(p, n, "mu_p");
    for (std::size_t a = 0; a < n; ++a) {
        H.basis_names.push_back("x^" + std::to_string(a));
        for (std::size_t b = 0; b < n; ++b) H.mult[(a * n + b) * n + (a + b) % n] = 1;
        H.comult[(a * n + a) * n + a] = 1;
        H.antipode[((n - a) % n) * n + a] = 1;
        H.counit[a] = 1;
    }
    H.unit[0] = 1;
    return finalize(std::move(H));
}

/// Functions on the constant group Z/N (N a power of p): basis of point indicators δ_g.
inline FiniteHopfAlgebra constant_cyclic(std::uint32_t p, std::size_t N) {
    PrimeField F(p);
    if (!is_power_of(static_cast<i64>(N), p)) detail::fail_invalid("constant group order must be a power of p");
    auto H = detail_hopf::blank(p, N, N == p ? "Z/pZ" : "Z/" + std::to_string(N));
    for (std::size_t g = 0; g < N; ++g) {
        H.basis_names.push_back("d" + std::to_string(g));
        H.mult[(g * N + g) * N + g] = 1;
        for (std::size_t a = 0; a < N; ++a) H.comult[(g * N + a) * N + (g + N - a) % N] = 1;
        H.unit[g] = 1;
        H.antipode[((N - g) % N) * N + g] = 1;
    }
    H.counit[0] = 1;
    return finalize(std::move(H));
}

/// k[x_0..x_{r-1}]/(x_i^p) with Δx_i = S_i(x ⊗ 1, 1 ⊗ x) and S(x_i) = N_i(x) (Witt polynomials mod p).
inline FiniteHopfAlgebra witt_frobenius_kernel(std::uint32_t p, int r) {
    PrimeField F(p);
    if (r < 1) detail::fail_invalid("W_r[F]: r must be positive");
    const auto n = static_cast<std::size_t>(ipow(p, r));
    if (n > kMaxDimension) detail::fail_cap("W_r[F]: dimension p^r exceeds 32");
    const auto W = witt::WittPolynomials::get(p, r);
    auto H = detail_hopf::blank(p, n, "W_" + std::to_string(r) + "[F]");
    // basis index of exponent vector e (e_i < p): sum e_i p^i
    auto exps = [&](std::size_t idx) {
        std::vector<std::uint32_t> e(static_cast<std::size_t>(r));
        for (auto& x : e) {
            x = static_cast<std::uint32_t>(idx % p);
            idx /= p;
        }
        return e;
    };
    auto index = [&](const std::vector<std::uint32_t>& e, std::size_t off) -> std::optional<std::size_t> {
        std::size_t idx = 0;
        for (int i = r; i-- > 0;) {
            if (e[off + static_cast<std::size_t>(i)] >= p) return std::nullopt;
            idx = idx * p + e[off + static_cast<std::size_t>(i)];
        }
        return idx;
    };
    for (std::size_t a = 0; a < n; ++a) {
        const auto ea = exps(a);
        std::string nm;
        for (int i = 0; i < r; ++i)
            if (ea[static_cast<std::size_t>(i)]) {
                if (!nm.empty()) nm += "*";
                nm += "x" + std::to_string(i) + (ea[static_cast<std::size_t>(i)] > 1 ? "^" + std::to_string(ea[static_cast<std::size_t>(i)]) : "");
            }
        H.basis_names.push_back(nm.empty() ? "1" : nm);
        for (std::size_t b = 0; b < n; ++b) {
            auto e = ea;
            const auto eb = exps(b);
            for (int i = 0; i < r; ++i) e[static_cast<std::size_t>(i)] += eb[static_cast<std::size_t>(i)];
            if (auto c = index(e, 0)) H.mult[(a * n + b) * n + *c] = 1;
        }
    }
    H.unit[0] = 1;
    H.counit[0] = 1;
    const detail_hopf::Ctx C(H);  // multiplication is already in place
    // Δ(x_i) and S(x_i) as vectors.
    std::vector<Vec> dx, sx;
    for (int i = 0; i < r; ++i) {
        Vec d(n * n, 0);
        for (const auto& [e, c] : W->sum(i).terms()) {
            const auto cm = detail_hopf::reduce_mod(c, p);
            if (!cm) continue;
            auto ix = index(e, 0), iy = index(e, static_cast<std::size_t>(r));
            if (!ix || !iy) continue;
            d[*ix * n + *iy] = F.add(d[*ix * n + *iy], cm);
        }
        dx.push_back(std::move(d));
        Vec s(n, 0);
        for (const auto& [e, c] : W->negation(i).terms()) {
            const auto cm = detail_hopf::reduce_mod(c, p);
            if (!cm) continue;
            if (auto ix = index(e, 0)) s[*ix] = F.add(s[*ix], cm);
        }
        sx.push_back(std::move(s));
    }
    for (std::size_t a = 0; a < n; ++a) {
        const auto ea = exps(a);
        Vec d(n * n, 0), s(n, 0);
        d[0] = 1;
        s[0] = 1;
        for (int i = 0; i < r; ++i)
            for (std::uint32_t k = 0; k < ea[static_cast<std::size_t>(i)]; ++k) {
                d = C.mul2(d, dx[static_cast<std::size_t>(i)]);
                s = C.mul(s, sx[static_cast<std::size_t>(i)]);
            }
        for (std::size_t i = 0; i < n * n; ++i) H.comult[a * n * n + i] = d[i];
        for (std::size_t b = 0; b < n; ++b) H.antipode[b * n + a] = s[b];
    }
    return finalize(std::move(H));
}

/// Named presets: alpha_p, alpha_{p^v} (param v), mu_p, Z/pZ, W_r (constant Z/p^r, param r), W_r[F] (param r).
inline FiniteHopfAlgebra make_group_scheme(const std::string& name, std::uint32_t p, int param = 1) {
    if (name == "alpha_p") return alpha(p, 1);
    if (name == "alpha_{p^v}" || name == "alpha") return alpha(p, param);
    if (name == "mu_p") return mu(p);
    if (name == "Z/pZ") return constant_cyclic(p, p);
    if (name == "W_r") return constant_cyclic(p, static_cast<std::size_t>(ipow(p, param)));
    if (name == "W_r[F]" || name == "W_r_kernel_F") return witt_frobenius_kernel(p, param);
    detail::fail_invalid("unsupported group scheme: " + name);
}

/// Transposes every structure tensor.
inline FiniteHopfAlgebra cartier_dual(const FiniteHopfAlgebra& H) {
    if (!is_commutative(H) || !is_cocommutative(H))
        detail::fail_invalid("cartier_dual: input must be commutative and cocommutative");
    const auto n = H.n;
    auto D = detail_hopf::blank(H.p, n, "dual(" + H.name + ")");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                D.mult[(a * n + b) * n + c] = H.d(c, a, b);
                D.comult[(c * n + a) * n + b] = H.m(a, b, c);
            }
    D.unit = H.counit;
    D.counit = H.unit;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) D.antipode[b * n + a] = H.s(a, b);
    for (const auto& nm : H.basis_names) D.basis_names.push_back(nm + "*");
    return finalize(std::move(D));
}

/// A ⊗ B, the coordinate ring of the product group scheme; basis e_a ⊗ f_b at index a*n_B + b.
inline FiniteHopfAlgebra tensor_product(const FiniteHopfAlgebra& A, const FiniteHopfAlgebra& B) {
    if (A.p != B.p) detail::fail_invalid("tensor_product: characteristics differ");
    const auto nA = A.n, nB = B.n, n = nA * nB;
    auto H = detail_hopf::blank(A.p, n, A.name + " x " + B.name);
    const PrimeField F(A.p);
    auto idx = [&](std::size_t a, std::size_t b) { return a * nB + b; };
    for (std::size_t a1 = 0; a1 < nA; ++a1)
        for (std::size_t b1 = 0; b1 < nB; ++b1) {
            const auto i = idx(a1, b1);
            H.unit[i] = F.mul(A.unit[a1], B.unit[b1]);
            H.counit[i] = F.mul(A.counit[a1], B.counit[b1]);
            for (std::size_t a2 = 0; a2 < nA; ++a2)
                for (std::size_t b2 = 0; b2 < nB; ++b2) {
                    const auto j = idx(a2, b2);
                    H.antipode[j * n + i] = F.mul(A.s(a2, a1), B.s(b2, b1));
                    for (std::size_t a3 = 0; a3 < nA; ++a3)
                        for (std::size_t b3 = 0; b3 < nB; ++b3) {
                            const auto k = idx(a3, b3);
                            H.mult[(i * n + j) * n + k] = F.mul(A.m(a1, a2, a3), B.m(b1, b2, b3));
                            // Δ(e_{a1} ⊗ f_{b1}) = Σ (e_{a2} ⊗ f_{b2}) ⊗ (e_{a3} ⊗ f_{b3})
                            H.comult[(i * n + j) * n + k] = F.mul(A.d(a1, a2, a3), B.d(b1, b2, b3));
                        }
                }
        }
    for (std::size_t a = 0; a < nA; ++a)
        for (std::size_t b = 0; b < nB; ++b)
            H.basis_names.push_back(A.basis_names.empty() || B.basis_names.empty() ? "e" + std::to_string(idx(a, b))
                                                                                   : A.basis_names[a] + "*" + B.basis_names[b]);
    return finalize(std::move(H));
}

inline bool same_tensors(const FiniteHopfAlgebra& A, const FiniteHopfAlgebra& B) {
    return A.p == B.p && A.n == B.n && A.mult == B.mult && A.comult == B.comult && A.unit == B.unit &&
           A.counit == B.counit && A.antipode == B.antipode;
}

/// Basis of the primitive elements Δx = x ⊗ 1 + 1 ⊗ x, as columns.
inline Matrix<std::uint32_t> primitives(const FiniteHopfAlgebra& H) {
    const PrimeField F(H.p);
    const auto n = H.n;
    auto A = linalg::zeros(F, n * n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                auto v = H.d(c, a, b);
                if (a == c) v = F.sub(v, H.unit[b]);
                if (b == c) v = F.sub(v, H.unit[a]);
                A(a * n + b, c) = v;
            }
    return linalg::kernel(F, A);
}

/// Group-like elements (Δg = g ⊗ g, ε(g) = 1) by exhaustive search; capped at p^n ≤ 2^20.
inline std::vector<Vec> group_likes(const FiniteHopfAlgebra& H) {
    const detail_hopf::Ctx C(H);
    const auto total = ipow(H.p, static_cast<int>(H.n));
    if (total > (1 << 20)) detail::fail_cap("group_likes: exhaustive search space too large");
    std::vector<Vec> out;
    Vec g(H.n, 0);
    for (i64 idx = 0; idx < total; ++idx) {
        i64 t = idx;
        for (auto& x : g) {
            x = static_cast<std::uint32_t>(t % H.p);
            t /= H.p;
        }
        if (C.eps(g) != 1) continue;
        Vec gg(H.n * H.n, 0);
        for (std::size_t a = 0; a < H.n; ++a)
            for (std::size_t b = 0; b < H.n; ++b) gg[a * H.n + b] = C.F.mul(g[a], g[b]);
        if (C.delta(g) == gg) out.push_back(g);
    }
    return out;
}

/// Search for a Hopf isomorphism A -> B: pick a generator x of A (powers span A), then try every image in B.
inline std::optional<Matrix<std::uint32_t>> find_isomorphism(const FiniteHopfAlgebra& A, const FiniteHopfAlgebra& B) {
    if (A.p != B.p || A.n != B.n) return std::nullopt;
    const PrimeField F(A.p);
    const auto n = A.n;
    const auto total = ipow(A.p, static_cast<int>(n));
    if (total > (1 << 16)) detail::fail_cap("find_isomorphism: search space too large");
    const detail_hopf::Ctx CA(A), CB(B);
    auto decode = [&](i64 idx) {
        Vec v(n);
        for (auto& x : v) {
            x = static_cast<std::uint32_t>(idx % A.p);
            idx /= A.p;
        }
        return v;
    };
    auto powers = [&](const detail_hopf::Ctx& C, const FiniteHopfAlgebra& H, const Vec& x) {
        Matrix<std::uint32_t> P(n, n, 0);
        Vec cur = H.unit;
        for (std::size_t k = 0; k < n; ++k) {
            P.set_column(k, cur);
            cur = C.mul(cur, x);
        }
        return P;
    };
    std::optional<Matrix<std::uint32_t>> PA;
    for (i64 idx = 0; idx < total && !PA; ++idx) {
        auto P = powers(CA, A, decode(idx));
        if (linalg::rank(F, P) == n) PA = P;
    }
    if (!PA) return std::nullopt;  // not monogenic
    const auto PAinv = *linalg::inverse(F, *PA);
    for (i64 idx = 0; idx < total; ++idx) {
        const auto PB = powers(CB, B, decode(idx));
        if (linalg::rank(F, PB) != n) continue;
        // phi maps x^k -> y^k, i.e. phi = PB * PA^{-1}
        const auto phi = linalg::multiply(F, PB, PAinv);
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a)
            for (std::size_t b = 0; b < n && ok; ++b) {
                const auto lhs = linalg::apply(F, phi, CA.mul(CA.e(a), CA.e(b)));
                ok = lhs == CB.mul(phi.column(a), phi.column(b));
            }
        for (std::size_t c = 0; c < n && ok; ++c) {
            // (phi ⊗ phi) Δ_A(e_c) == Δ_B(phi e_c)
            Vec lhs(n * n, 0);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    const auto v = A.d(c, a, b);
                    if (!v) continue;
                    for (std::size_t u = 0; u < n; ++u)
                        for (std::size_t w = 0; w < n; ++w)
                            lhs[u * n + w] = F.add(lhs[u * n + w], F.mul(v, F.mul(phi(u, a), phi(w, b))));
                }
            ok = lhs == CB.delta(phi.column(c)) && CA.eps(CA.e(c)) == CB.eps(phi.column(c));
        }
        if (ok) return phi;
    }
    return std::nullopt;
}

// ---- dual local algebra ----

struct DualLocalAlgebra {
    std::uint32_t p = 2;
    std::size_t n = 0;
    std::vector<std::uint32_t> mult;     // (a*n + b)*n + c
    std::vector<std::uint32_t> unit;     // counit of H
    std::vector<std::uint32_t> augmentation;  // φ -> φ(1_H), i.e. the unit of H
    std::vector<Matrix<std::uint32_t>> J;  // J[0] = A, J[k] = m^k (column bases), until zero
    std::vector<std::size_t> graded_dims;  // dim J_k / J_{k+1}, k >= 1
};

/// The algebra H* with product Δ^T, maximal ideal m = {φ : φ(1) = 0} and the filtration J_k = m^k.
inline DualLocalAlgebra dual_algebra(const FiniteHopfAlgebra& H) {
    if (!is_cocommutative(H)) detail::fail_invalid("dual_algebra: H must be cocommutative");
    const auto D = cartier_dual(H);
    const PrimeField F(H.p);
    const detail_hopf::Ctx C(D);
    const auto n = H.n;
    DualLocalAlgebra A;
    A.p = H.p;
    A.n = n;
    A.mult = D.mult;
    A.unit = D.unit;
    A.augmentation = D.counit;
    // m = kernel of the augmentation φ -> φ(1_H), i.e. of the counit of D
    Matrix<std::uint32_t> eps(1, n, 0);
    for (std::size_t a = 0; a < n; ++a) eps(0, a) = D.counit[a];
    A.J.push_back(linalg::identity(F, n));
    A.J.push_back(linalg::kernel(F, eps));
    while (A.J.back().cols != 0) {
        const auto& prev = A.J.back();
        std::vector<Vec> cols;
        for (std::size_t i = 0; i < prev.cols; ++i)
            for (std::size_t j = 0; j < A.J[1].cols; ++j) cols.push_back(C.mul(prev.column(i), A.J[1].column(j)));
        auto M = cols.empty() ? linalg::zeros(F, n, 0) : linalg::column_space(F, linalg::from_columns(F, n, cols));
        if (M.cols == prev.cols)
            detail::fail_invalid("dual_algebra: augmentation ideal is not nilpotent (G is not unipotent)");
        A.J.push_back(std::move(M));
    }
    for (std::size_t k = 1; k + 1 < A.J.size(); ++k) A.graded_dims.push_back(A.J[k].cols - A.J[k + 1].cols);
    return A;
}

inline nlohmann::json to_json(const FiniteHopfAlgebra& H) {
    return {{"p", H.p},         {"dim", H.n},           {"name", H.name},         {"basis", H.basis_names},
            {"mult", H.mult},   {"comult", H.comult},   {"unit", H.unit},         {"counit", H.counit},
            {"antipode", H.antipode}};
}

inline FiniteHopfAlgebra hopf_from_json(const nlohmann::json& j) {
    FiniteHopfAlgebra H;
    H.p = j.at("p").get<std::uint32_t>();
    PrimeField check(H.p);
    (void)check;
    H.n = j.at("dim").get<std::size_t>();
    H.name = j.value("name", std::string("H"));
    H.basis_names = j.value("basis", std::vector<std::string>{});
    H.mult = j.at("mult").get<Vec>();
    H.comult = j.at("comult").get<Vec>();
    H.unit = j.at("unit").get<Vec>();
    H.counit = j.at("counit").get<Vec>();
    H.antipode = j.at("antipode").get<Vec>();
    validate_shape(H);
    return H;
}

}  // namespace unipotent::hopf
