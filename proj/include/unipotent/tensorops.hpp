#pragma once

// G_a-valued bilinear, alternating and weak-alternating forms on finite commutative group schemes,
// the W[F] realization of (alpha_p ⊗ alpha_p), and weak wedges of finitely generated abelian groups.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "unipotent/error.hpp"
#include "unipotent/hopf.hpp"
#include "unipotent/linalg.hpp"
#include "unipotent/modular.hpp"
#include "unipotent/polynomial.hpp"
#include "unipotent/witt.hpp"

namespace unipotent::tensorops {

inline constexpr std::size_t kMaxTensorDim = 256;

using FpMatrix = Matrix<std::uint32_t>;

/// Forms β ∈ R_G ⊗ R_H, coordinates indexed a * n_H + b.
struct BilinearFormSpace {
    std::uint32_t p = 2;
    std::size_t nG = 0, nH = 0;
    std::string G_name, H_name;
    FpMatrix basis;  // columns
    std::size_t dim() const { return basis.cols; }
};

inline BilinearFormSpace bilinear_space(const hopf::FiniteHopfAlgebra& G, const hopf::FiniteHopfAlgebra& H) {
    if (G.p != H.p) detail::fail_invalid("bilinear_space: characteristics differ");
    if (!hopf::is_commutative(G) || !hopf::is_commutative(H)) detail::fail_invalid("bilinear_space: group schemes must be commutative");
    const auto nG = G.n, nH = H.n, N = nG * nH;
    if (N > kMaxTensorDim) detail::fail_cap("bilinear_space: dim R_G ⊗ R_H exceeds 256");
    const PrimeField F(G.p);
    // rows: (Δ_G ⊗ id)β - β_13 - β_23 at (a1, a2, b), then (id ⊗ Δ_H)β - β_12 - β_13 at (a, b1, b2)
    std::vector<std::vector<std::uint32_t>> rows;
    auto var = [&](std::size_t a, std::size_t b) { return a * nH + b; };
    for (std::size_t a1 = 0; a1 < nG; ++a1)
        for (std::size_t a2 = 0; a2 < nG; ++a2)
            for (std::size_t b = 0; b < nH; ++b) {
                std::vector<std::uint32_t> row(N, 0);
                for (std::size_t a = 0; a < nG; ++a) row[var(a, b)] = F.add(row[var(a, b)], G.d(a, a1, a2));
                row[var(a1, b)] = F.sub(row[var(a1, b)], G.unit[a2]);
                row[var(a2, b)] = F.sub(row[var(a2, b)], G.unit[a1]);
                if (std::any_of(row.begin(), row.end(), [](auto x) { return x != 0; })) rows.push_back(std::move(row));
            }
    for (std::size_t a = 0; a < nG; ++a)
        for (std::size_t b1 = 0; b1 < nH; ++b1)
            for (std::size_t b2 = 0; b2 < nH; ++b2) {
                std::vector<std::uint32_t> row(N, 0);
                for (std::size_t b = 0; b < nH; ++b) row[var(a, b)] = F.add(row[var(a, b)], H.d(b, b1, b2));
                row[var(a, b1)] = F.sub(row[var(a, b1)], H.unit[b2]);
                row[var(a, b2)] = F.sub(row[var(a, b2)], H.unit[b1]);
                if (std::any_of(row.begin(), row.end(), [](auto x) { return x != 0; })) rows.push_back(std::move(row));
            }
    FpMatrix A(rows.size(), N, 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < N; ++j) A(i, j) = rows[i][j];
    BilinearFormSpace S;
    S.p = G.p;
    S.nG = nG;
    S.nH = nH;
    S.G_name = G.name;
    S.H_name = H.name;
    S.basis = rows.empty() ? linalg::identity(F, N) : linalg::kernel(F, A);
    return S;
}

namespace detail_tensorops {

/// Columns of S.basis combined by a basis of the kernel of `cond` (a matrix acting on form coordinates).
inline FpMatrix restrict_kernel(const BilinearFormSpace& S, const FpMatrix& cond) {
    const PrimeField F(S.p);
    if (S.dim() == 0) return linalg::zeros(F, S.nG * S.nH, 0);
    const auto C = linalg::multiply(F, cond, S.basis);
    const auto K = linalg::kernel(F, C);
    return linalg::multiply(F, S.basis, K);
}

inline void require_square(const BilinearFormSpace& S) {
    if (S.nG != S.nH || S.G_name != S.H_name) detail::fail_invalid("form space must be on G x G");
}

}  // namespace detail_tensorops

/// β ↦ β^T as a matrix on R_G ⊗ R_G.
inline FpMatrix swap_matrix(std::uint32_t p, std::size_t n) {
    const PrimeField F(p);
    auto M = linalg::zeros(F, n * n, n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) M(b * n + a, a * n + b) = 1;
    return M;
}

/// Forms vanishing on the diagonal: mult_G(β) = 0.
inline FpMatrix alternating_space(const BilinearFormSpace& S, const hopf::FiniteHopfAlgebra& G) {
    detail_tensorops::require_square(S);
    const PrimeField F(S.p);
    const auto n = S.nG;
    auto M = linalg::zeros(F, n, n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) M(c, a * n + b) = G.m(a, b, c);
    return detail_tensorops::restrict_kernel(S, M);
}

/// Forms with β + swap(β) = 0.
inline FpMatrix weak_alternating_space(const BilinearFormSpace& S) {
    detail_tensorops::require_square(S);
    const PrimeField F(S.p);
    const auto n = S.nG;
    auto M = swap_matrix(S.p, n);
    for (std::size_t i = 0; i < n * n; ++i) M(i, i) = F.add(M(i, i), 1);
    return detail_tensorops::restrict_kernel(S, M);
}

struct FormDims {
    std::size_t bilinear = 0, alternating = 0, weak = 0;
    bool operator==(const FormDims&) const = default;
};

inline FormDims form_dims(const hopf::FiniteHopfAlgebra& G) {
    const auto S = bilinear_space(G, G);
    return {S.dim(), alternating_space(S, G).cols, weak_alternating_space(S).cols};
}

struct WfReport {
    std::uint32_t p = 0;
    int r = 0;
    bool identity_holds = false;        // ([x+y] - [x] - [y])[z] = 0
    std::size_t characters = 0;         // dim Prim(O(W_r[F])) = dim Hom(W_r[F], G_a)
    bool characters_land_in_forms = false;
    std::size_t bilinear_dim = 0;
    std::size_t pairing_rank = 0;
    bool pass = false;
};

/// u(x, y) = [x][y] : alpha_p x alpha_p -> W_r[F], checked symbolically and on G_a-characters.
inline WfReport wf_identification(std::uint32_t p, int r) {
    if (r < 1 || r > 3) detail::fail_cap("wf_identification: r must be in 1..3");
    WfReport rep;
    rep.p = p;
    rep.r = r;
    rep.identity_holds = r == 1 || witt::verify_wf_ring_identity(p, r).pass;  // W_1 = G_a: [x+y] = x + y
    const auto W = hopf::make_group_scheme("W_r[F]", p, r);
    const auto a = hopf::make_group_scheme("alpha_p", p);
    const auto S = bilinear_space(a, a);
    rep.bilinear_dim = S.dim();
    const auto P = hopf::primitives(W);
    rep.characters = P.cols;
    // pull back along u: x_0 -> x ⊗ y, x_i -> 0 for i >= 1 (Teichmüller product [x][y] = [xy])
    const PrimeField F(p);
    const auto n = static_cast<std::size_t>(p);
    auto U = linalg::zeros(F, n * n, W.n);
    for (std::size_t e0 = 0; e0 < n; ++e0) U(e0 * n + e0, e0) = 1;  // monomial x_0^{e0} has index e0
    const auto img = linalg::multiply(F, U, P);
    rep.characters_land_in_forms = img.cols == 0 || linalg::span_contains(F, S.basis, img);
    rep.pairing_rank = linalg::rank(F, img);
    rep.pass = rep.identity_holds && rep.characters_land_in_forms && rep.pairing_rank == 1 && rep.characters == 1 && rep.bilinear_dim == 1;
    return rep;
}

// ---- finitely generated abelian groups ----

/// Invariant factors d_1 | d_2 | ... with 0 standing for a free summand Z; trivial factors are dropped.
struct FGAbelianGroup {
    std::vector<BigInt> factors;
    bool operator==(const FGAbelianGroup&) const = default;
    std::string to_string() const {
        if (factors.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) s += " + ";
            s += factors[i] == 0 ? std::string("Z") : "Z/" + factors[i].str();
        }
        return s;
    }
};

using IntMatrix = Matrix<BigInt>;

/// Diagonal of the Smith normal form (length min(rows, cols)), as a divisibility chain with zeros last.
inline std::vector<BigInt> smith_diagonal(IntMatrix A) {
    const auto R = A.rows, C = A.cols;
    bool finished = false;
    for (std::size_t t = 0; t < std::min(R, C) && !finished; ++t) {
        for (;;) {
            // smallest nonzero |entry| in the lower-right block
            std::size_t pi = R, pj = C;
            for (std::size_t i = t; i < R; ++i)
                for (std::size_t j = t; j < C; ++j)
                    if (A(i, j) != 0 && (pi == R || abs(A(i, j)) < abs(A(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == R) {
                finished = true;
                break;
            }
            for (std::size_t j = 0; j < C; ++j) std::swap(A(t, j), A(pi, j));
            for (std::size_t i = 0; i < R; ++i) std::swap(A(i, t), A(i, pj));
            bool clean = true;
            for (std::size_t i = t + 1; i < R; ++i) {
                const BigInt q = A(i, t) / A(t, t);
                if (q != 0)
                    for (std::size_t j = t; j < C; ++j) A(i, j) -= q * A(t, j);
                if (A(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                const BigInt q = A(t, j) / A(t, t);
                if (q != 0)
                    for (std::size_t i = t; i < R; ++i) A(i, j) -= q * A(i, t);
                if (A(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility: fold a row carrying a non-multiple into row t
            bool divides = true;
            for (std::size_t i = t + 1; i < R && divides; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (A(i, j) % A(t, t) != 0) {
                        for (std::size_t k = t; k < C; ++k) A(t, k) += A(i, k);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
    }
    std::vector<BigInt> d;
    for (std::size_t i = 0; i < std::min(R, C); ++i) d.push_back(abs(A(i, i)));
    std::stable_partition(d.begin(), d.end(), [](const BigInt& x) { return x != 0; });
    return d;
}

/// Z^rows / (column span of A).
inline FGAbelianGroup cokernel(const IntMatrix& A) {
    FGAbelianGroup G;
    const auto d = smith_diagonal(A);
    for (const auto& x : d)
        if (x != 1) G.factors.push_back(x);
    for (std::size_t i = d.size(); i < A.rows; ++i) G.factors.push_back(0);
    return G;
}

/// Normal form of ⊕ Z/d_i (d_i = 0 for Z).
inline FGAbelianGroup make_group(const std::vector<BigInt>& factors) {
    IntMatrix A(factors.size(), factors.size(), BigInt(0));
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (factors[i] < 0) detail::fail_invalid("abelian group factors must be non-negative");
        A(i, i) = factors[i];
    }
    return cokernel(A);
}

namespace detail_tensorops {

inline BigInt gcd0(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

}  // namespace detail_tensorops

/// A ⋏ A = coker(e_ij -> e_ij + e_ji) on A ⊗ A, with A ⊗ A = ⊕ Z/gcd(d_i, d_j).
inline FGAbelianGroup weak_wedge_abelian(const FGAbelianGroup& A) {
    const auto k = A.factors.size();
    const auto N = k * k;
    IntMatrix M(N, 2 * N, BigInt(0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            M(i * k + j, i * k + j) = detail_tensorops::gcd0(A.factors[i], A.factors[j]);
            M(i * k + j, N + i * k + j) += 1;
            M(j * k + i, N + i * k + j) += 1;
        }
    return cokernel(M);
}

struct Whitehead {
    IntMatrix W;             // g ⊗ h -> g ⊗ h + h ⊗ g on the generators e_ij
    FGAbelianGroup cokernel;
    bool matches_weak_wedge = false;
};

/// The symmetrization matrix and its cokernel, computed from the presentation with relations d_i e_ij and d_j e_ij.
inline Whitehead whitehead_symmetrization(const FGAbelianGroup& A) {
    const auto k = A.factors.size();
    const auto N = k * k;
    Whitehead out;
    out.W = IntMatrix(N, N, BigInt(0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            out.W(i * k + j, i * k + j) += 1;
            out.W(j * k + i, i * k + j) += 1;
        }
    IntMatrix M(N, 3 * N, BigInt(0));
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) M(r, c) = out.W(r, c);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            M(i * k + j, N + i * k + j) = A.factors[i];
            M(i * k + j, 2 * N + i * k + j) = A.factors[j];
        }
    out.cokernel = tensorops::cokernel(M);
    out.matches_weak_wedge = out.cokernel == weak_wedge_abelian(A);
    return out;
}

inline FGAbelianGroup random_group(std::mt19937_64& rng, std::size_t max_rank = 3) {
    static const int choices[] = {0, 0, 2, 3, 4, 5, 6, 8, 9, 12, 1};
    std::uniform_int_distribution<std::size_t> len(1, max_rank), pick(0, std::size(choices) - 1);
    std::vector<BigInt> f;
    for (std::size_t i = len(rng); i > 0; --i) f.emplace_back(choices[pick(rng)]);
    return make_group(f);
}

inline nlohmann::json to_json(const FGAbelianGroup& A) {
    std::vector<std::string> f;
    for (const auto& x : A.factors) f.push_back(x.str());
    return {{"factors", f}, {"group", A.to_string()}};
}

inline nlohmann::json to_json(const WfReport& r) {
    return {{"p", r.p}, {"r", r.r}, {"identity_holds", r.identity_holds}, {"characters", r.characters},
            {"characters_land_in_forms", r.characters_land_in_forms}, {"bilinear_dim", r.bilinear_dim},
            {"pairing_rank", r.pairing_rank}, {"pass", r.pass}};
}

}  // namespace unipotent::tensorops
