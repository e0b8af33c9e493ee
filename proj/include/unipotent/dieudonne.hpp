#pragma once

// Dieudonné modules at finite precision: free GR(p^r, m)-modules with F(v) = MF·σ(v) and
// V(v) = MV·σ^{-1}(v), subject to MF·σ(MV) = MV·σ^{-1}(MF) = p.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "unipotent/error.hpp"
#include "unipotent/fields.hpp"
#include "unipotent/galois_ring.hpp"
#include "unipotent/linalg.hpp"
#include "unipotent/zmod_linalg.hpp"

namespace unipotent::dieudonne {

using witt::GaloisRing;
using GrElem = GaloisRing::elem;
using GrMatrix = Matrix<GrElem>;

// ---- matrices over a Galois ring ----

namespace gr {

inline GrMatrix zeros(const GaloisRing& G, std::size_t r, std::size_t c) { return GrMatrix(r, c, G.zero()); }

inline GrMatrix identity(const GaloisRing& G, std::size_t n) {
    auto M = zeros(G, n, n);
    for (std::size_t i = 0; i < n; ++i) M(i, i) = G.one();
    return M;
}

inline GrMatrix from_ints(const GaloisRing& G, const std::vector<std::vector<std::int64_t>>& rows) {
    auto M = zeros(G, rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < M.rows; ++i)
        for (std::size_t j = 0; j < M.cols; ++j) M(i, j) = G.from_int(rows[i][j]);
    return M;
}

inline GrMatrix multiply(const GaloisRing& G, const GrMatrix& A, const GrMatrix& B) {
    if (A.cols != B.rows) detail::fail_invalid("gr::multiply: shape mismatch");
    auto C = zeros(G, A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            if (G.is_zero(A(i, k))) continue;
            for (std::size_t j = 0; j < B.cols; ++j)
                if (!G.is_zero(B(k, j))) C(i, j) = G.add(C(i, j), G.mul(A(i, k), B(k, j)));
        }
    return C;
}

inline GrMatrix sub(const GaloisRing& G, const GrMatrix& A, const GrMatrix& B) {
    auto C = A;
    for (std::size_t i = 0; i < C.data.size(); ++i) C.data[i] = G.sub(A.data[i], B.data[i]);
    return C;
}

inline GrMatrix scale(const GaloisRing& G, const GrMatrix& A, std::int64_t s) {
    auto C = A;
    for (auto& x : C.data) x = G.scale(x, s);
    return C;
}

inline GrMatrix sigma(const GaloisRing& G, const GrMatrix& A, std::int64_t k) {
    auto C = A;
    for (auto& x : C.data) x = G.sigma(x, k);
    return C;
}

inline GrMatrix transpose(const GrMatrix& A) {
    GrMatrix T(A.cols, A.rows, {});
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
    return T;
}

inline bool is_zero(const GaloisRing& G, const GrMatrix& A) {
    for (const auto& x : A.data)
        if (!G.is_zero(x)) return false;
    return true;
}

inline GrMatrix change_precision(const GaloisRing& from, const GrMatrix& A, const GaloisRing& to) {
    auto C = A;
    for (auto& x : C.data) x = from.change_precision(x, to);
    return C;
}

/// Reduction modulo p as a matrix over the residue field.
inline Matrix<fields::Fq> residue(const GaloisRing& G, const GrMatrix& A) {
    const auto& k = G.residue_field();
    Matrix<fields::Fq> B(A.rows, A.cols, k.zero());
    for (std::size_t i = 0; i < A.data.size(); ++i) B.data[i] = G.reduce(A.data[i]);
    return B;
}

/// Z/p^r-matrix of x -> a·x on the coefficient basis.
inline zmod::ZMatrix mult_matrix(const GaloisRing& G, const GrElem& a) {
    const auto m = static_cast<std::size_t>(G.degree());
    auto M = zmod::zeros(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        GrElem e = G.zero();
        e[j] = 1;
        const auto col = G.mul(a, e);
        for (std::size_t i = 0; i < m; ++i) M(i, j) = col[i];
    }
    return M;
}

inline zmod::ZMatrix sigma_zmatrix(const GaloisRing& G, std::int64_t k) {
    const auto m = static_cast<std::size_t>(G.degree());
    auto M = zmod::zeros(m, m);
    M.data = G.sigma_matrix(k);
    return M;
}

/// The Z/p^r-matrix of v -> A v on coefficient vectors (block (i, j) = mult_matrix(A(i, j))).
inline zmod::ZMatrix expand(const GaloisRing& G, const GrMatrix& A) {
    const auto m = static_cast<std::size_t>(G.degree());
    auto Z = zmod::zeros(A.rows * m, A.cols * m);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) {
            if (G.is_zero(A(i, j))) continue;
            const auto B = mult_matrix(G, A(i, j));
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b) Z(i * m + a, j * m + b) = B(a, b);
        }
    return Z;
}

inline std::vector<std::int64_t> flatten(const std::vector<GrElem>& v) {
    std::vector<std::int64_t> out;
    for (const auto& x : v) out.insert(out.end(), x.begin(), x.end());
    return out;
}

inline std::vector<GrElem> unflatten(const GaloisRing& G, const std::vector<std::int64_t>& v) {
    const auto m = static_cast<std::size_t>(G.degree());
    std::vector<GrElem> out(v.size() / m);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].assign(v.begin() + static_cast<std::ptrdiff_t>(i * m), v.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
        for (auto& c : out[i]) c = mod(c, G.modulus());
    }
    return out;
}

inline std::size_t residue_rank(const GaloisRing& G, const GrMatrix& A) {
    return linalg::rank(G.residue_field(), residue(G, A));
}

/// Solve A X = B over the Galois ring; result is exact modulo p^{r - loss}.
inline std::optional<std::pair<GrMatrix, int>> solve(const GaloisRing& G, const GrMatrix& A, const GrMatrix& B) {
    const zmod::Ring Z(G.p(), G.precision());
    const auto S = zmod::smith(Z, expand(G, A));
    GrMatrix X = zeros(G, A.cols, B.cols);
    int loss = 0;
    for (std::size_t j = 0; j < B.cols; ++j) {
        auto sol = zmod::solve(Z, S, flatten(B.column(j)));
        if (!sol) return std::nullopt;
        loss = std::max(loss, sol->loss);
        X.set_column(j, unflatten(G, sol->x));
    }
    return std::pair{std::move(X), loss};
}

inline nlohmann::json to_json(const GrMatrix& A) {
    auto j = nlohmann::json::array();
    for (std::size_t i = 0; i < A.rows; ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t c = 0; c < A.cols; ++c) row.push_back(A(i, c));
        j.push_back(row);
    }
    return j;
}

}  // namespace gr

// ---- modules ----

struct DieudonneModule {
    GaloisRing G;
    GrMatrix F;
    GrMatrix V;
    /// Rebuilds the same module at another precision; empty when only this precision is known.
    std::function<DieudonneModule(int)> rebuild;

    std::size_t rank() const { return F.rows; }
    int precision() const { return G.precision(); }
};

inline bool relations_hold(const DieudonneModule& M) {
    const auto& G = M.G;
    const auto pI = gr::scale(G, gr::identity(G, M.rank()), G.p());
    return gr::multiply(G, M.F, gr::sigma(G, M.V, 1)) == pI && gr::multiply(G, M.V, gr::sigma(G, M.F, -1)) == pI;
}

inline DieudonneModule make_module(GaloisRing G, GrMatrix F, GrMatrix V, std::function<DieudonneModule(int)> rebuild = {}) {
    if (F.rows != F.cols || V.rows != V.cols || F.rows != V.rows)
        detail::fail_invalid("make_module: F and V must be square of the same size");
    DieudonneModule M{std::move(G), std::move(F), std::move(V), std::move(rebuild)};
    if (!relations_hold(M)) detail::fail_check("make_module: FV = VF = p fails");
    return M;
}

/// D_{m,n} = D/D(V^n - F^m) on the basis 1, F, ..., F^{m-1}, V, V^2, ..., V^n (V^n = F^m).
inline DieudonneModule make_Dmn(const GaloisRing& G, int m, int n) {
    if (m < 0 || n < 0 || m + n == 0 || std::gcd(m, n) != 1) detail::fail_invalid("make_Dmn: need gcd(m, n) = 1");
    if (m + n > 64) detail::fail_cap("make_Dmn: rank above 64");
    const auto h = static_cast<std::size_t>(m + n);
    const std::int64_t p = G.p();
    std::vector<std::vector<std::int64_t>> F(h, std::vector<std::int64_t>(h, 0)), V = F;
    // index of F^i (0 <= i < m) is i; index of V^j (1 <= j <= n) is m + j - 1; V^0 = F^0.
    auto fi = [&](int i) { return static_cast<std::size_t>(i); };
    auto vj = [&](int j) { return j == 0 ? std::size_t{0} : static_cast<std::size_t>(m + j - 1); };
    auto set = [](auto& A, std::size_t col, std::size_t row, std::int64_t c) { A[row][col] = c; };
    if (m == 0) {
        // V^n = 1: basis V^0..V^{n-1}, only n = 1 is coprime.
        set(F, 0, 0, p);
        set(V, 0, 0, 1);
    } else if (n == 0) {
        set(F, 0, 0, 1);
        set(V, 0, 0, p);
    } else {
        for (int i = 0; i < m; ++i) {
            set(F, fi(i), i + 1 < m ? fi(i + 1) : vj(n), 1);
            if (i == 0)
                set(V, fi(0), vj(1), 1);
            else
                set(V, fi(i), fi(i - 1), p);
        }
        for (int j = 1; j <= n; ++j) {
            set(F, vj(j), vj(j - 1), p);
            if (j < n)
                set(V, vj(j), vj(j + 1), 1);
            else
                set(V, vj(j), fi(m - 1), p);
        }
    }
    return make_module(G, gr::from_ints(G, F), gr::from_ints(G, V),
                       [G, m, n](int r) { return make_Dmn(G.with_precision(r), m, n); });
}

/// dim_k M/FM.
inline std::size_t dimension(const DieudonneModule& M) { return M.rank() - gr::residue_rank(M.G, M.F); }

/// Linear dual with F = σ∘θ∘V and V = σ^{-1}∘θ∘F, in the dual basis.
inline DieudonneModule dual(const DieudonneModule& M) {
    const auto& G = M.G;
    std::function<DieudonneModule(int)> rb;
    if (M.rebuild) rb = [inner = M.rebuild](int r) { return dual(inner(r)); };
    return make_module(G, gr::transpose(gr::sigma(G, M.V, 1)), gr::transpose(gr::sigma(G, M.F, -1)), std::move(rb));
}

/// The same module at precision r: reduction, rebuild, or naive lift checked against the relations.
inline DieudonneModule at_precision(const DieudonneModule& M, int r) {
    if (r == M.precision()) return M;
    if (M.rebuild) {
        auto out = M.rebuild(r);
        if (!out.rebuild) out.rebuild = M.rebuild;
        return out;
    }
    const auto H = M.G.with_precision(r);
    auto F = gr::change_precision(M.G, M.F, H);
    auto V = gr::change_precision(M.G, M.V, H);
    DieudonneModule out{H, std::move(F), std::move(V), {}};
    if (!relations_hold(out)) detail::fail_check("at_precision: naive lift does not satisfy FV = VF = p");
    return out;
}

/// T: M -> M' (T is rank(M') x rank(M)) commuting with F and V.
inline bool is_morphism(const DieudonneModule& M, const DieudonneModule& Mp, const GrMatrix& T) {
    const auto& G = M.G;
    return gr::multiply(G, T, M.F) == gr::multiply(G, Mp.F, gr::sigma(G, T, 1)) &&
           gr::multiply(G, T, M.V) == gr::multiply(G, Mp.V, gr::sigma(G, T, -1));
}

inline bool is_invertible(const GaloisRing& G, const GrMatrix& T) {
    return T.rows == T.cols && gr::residue_rank(G, T) == T.rows;
}

struct HomSpace {
    int precision = 1;
    bool strict = false;
    std::vector<GrMatrix> generators;  // nonzero generators over Z/p^precision
    int length = 0;                    // log_p of the number of morphisms
};

struct HomOptions {
    bool strict = false;
    int lift = 1;  // extra precision demanded of strict solutions
};

namespace detail_dieudonne {

inline zmod::Kernel hom_kernel(const DieudonneModule& M, const DieudonneModule& Mp) {
    const auto& G = M.G;
    const std::size_t h = M.rank(), hp = Mp.rank(), m = static_cast<std::size_t>(G.degree());
    const std::size_t nu = hp * h * m;
    auto A = zmod::zeros(2 * nu, nu);
    const zmod::Ring Z(G.p(), G.precision());
    auto unknown = [&](std::size_t i, std::size_t j) { return (i * h + j) * m; };
    auto equation = [&](std::size_t kind, std::size_t i, std::size_t j) { return ((kind * hp + i) * h + j) * m; };
    auto add_block = [&](std::size_t r0, std::size_t c0, const zmod::ZMatrix& B, bool negate) {
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) {
                const auto v = negate ? -B(a, b) : B(a, b);
                A(r0 + a, c0 + b) = mod(A(r0 + a, c0 + b) + v, Z.n);
            }
    };
    const GrMatrix* own[2] = {&M.F, &M.V};
    const GrMatrix* other[2] = {&Mp.F, &Mp.V};
    for (std::size_t kind = 0; kind < 2; ++kind) {
        const auto S = gr::sigma_zmatrix(G, kind == 0 ? 1 : -1);
        for (std::size_t i = 0; i < hp; ++i)
            for (std::size_t j = 0; j < h; ++j)
                for (std::size_t k = 0; k < h; ++k) {
                    // (T·X)_{ij} contains t_{ik} X_{kj}
                    if (!G.is_zero((*own[kind])(k, j)))
                        add_block(equation(kind, i, j), unknown(i, k), gr::mult_matrix(G, (*own[kind])(k, j)), false);
                }
        for (std::size_t i = 0; i < hp; ++i)
            for (std::size_t j = 0; j < h; ++j)
                for (std::size_t k = 0; k < hp; ++k) {
                    // (X'·σ^{±1}(T))_{ij} contains X'_{ik} σ^{±1}(t_{kj})
                    if (G.is_zero((*other[kind])(i, k))) continue;
                    const auto B = zmod::multiply(Z, gr::mult_matrix(G, (*other[kind])(i, k)), S);
                    add_block(equation(kind, i, j), unknown(k, j), B, true);
                }
    }
    return zmod::kernel(Z, A);
}

inline GrMatrix to_matrix(const GaloisRing& G, std::size_t hp, std::size_t h, const std::vector<std::int64_t>& v) {
    auto elems = gr::unflatten(G, v);
    GrMatrix T(hp, h, G.zero());
    T.data = std::move(elems);
    return T;
}

}  // namespace detail_dieudonne

/// Morphisms M -> M'. Strict solutions are those that lift to `lift` more digits of precision.
inline HomSpace hom_space(const DieudonneModule& M, const DieudonneModule& Mp, HomOptions opt = {}) {
    if (M.G.p() != Mp.G.p() || M.G.degree() != Mp.G.degree() || M.precision() != Mp.precision() ||
        M.G.defining_poly() != Mp.G.defining_poly())
        detail::fail_invalid("hom_space: modules over different Galois rings");
    const int r = M.precision();
    HomSpace out;
    out.precision = r;
    out.strict = opt.strict;
    const auto& G = M.G;
    if (!opt.strict) {
        const auto K = detail_dieudonne::hom_kernel(M, Mp);
        for (const auto& g : K.generators) out.generators.push_back(detail_dieudonne::to_matrix(G, Mp.rank(), M.rank(), g));
        out.length = K.length;
        return out;
    }
    if (opt.lift < 1) detail::fail_invalid("hom_space: lift depth must be positive");
    const int R = r + opt.lift;
    if (ipow(G.p(), R) > (std::int64_t(1) << 40)) detail::fail_cap("hom_space: lifted precision too large");
    const auto Mh = at_precision(M, R);
    const auto Mph = at_precision(Mp, R);
    const auto K = detail_dieudonne::hom_kernel(Mh, Mph);
    const zmod::Ring Z(G.p(), r);
    std::vector<std::vector<std::int64_t>> cols;
    for (const auto& g : K.generators) {
        std::vector<std::int64_t> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = mod(g[i], Z.n);
        if (std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) cols.push_back(std::move(v));
    }
    for (const auto& v : cols) out.generators.push_back(detail_dieudonne::to_matrix(G, Mp.rank(), M.rank(), v));
    if (!cols.empty()) {
        auto C = zmod::zeros(cols[0].size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) C.set_column(j, cols[j]);
        out.length = zmod::image_length(Z, C);
    }
    return out;
}

/// Whether T (same shape as the generators) lies in the Z/p^r-span of the hom space.
inline bool hom_contains(const GaloisRing& G, const HomSpace& H, const GrMatrix& T) {
    const zmod::Ring Z(G.p(), G.precision());
    const auto target = gr::flatten(T.data);
    if (H.generators.empty()) return std::all_of(target.begin(), target.end(), [](std::int64_t x) { return x == 0; });
    auto C = zmod::zeros(target.size(), H.generators.size());
    for (std::size_t j = 0; j < H.generators.size(); ++j) C.set_column(j, gr::flatten(H.generators[j].data));
    return zmod::solve(Z, C, target).has_value();
}

/// Search the hom space for an isomorphism: generators first, then seeded random combinations.
inline std::optional<GrMatrix> find_isomorphism(const DieudonneModule& M, const DieudonneModule& Mp, const HomSpace& H,
                                                int tries = 64, std::uint64_t seed = 1) {
    const auto& G = M.G;
    if (M.rank() != Mp.rank()) return std::nullopt;
    for (const auto& T : H.generators)
        if (is_invertible(G, T) && is_morphism(M, Mp, T)) return T;
    if (H.generators.empty()) return std::nullopt;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> coef(0, G.modulus() - 1);
    for (int t = 0; t < tries; ++t) {
        auto T = gr::zeros(G, Mp.rank(), M.rank());
        for (const auto& g : H.generators) {
            const auto c = G.from_int(coef(rng));
            for (std::size_t i = 0; i < T.data.size(); ++i) T.data[i] = G.add(T.data[i], G.mul(c, g.data[i]));
        }
        if (is_invertible(G, T) && is_morphism(M, Mp, T)) return T;
    }
    return std::nullopt;
}

/// F-stable, V-stable lattice spanned by the columns of B (full rank over W[1/p]) as a module in
/// its own right. The result has precision reduced by the largest elementary divisor exponent of B.
inline DieudonneModule submodule(const DieudonneModule& N, const GrMatrix& B) {
    const auto& G = N.G;
    const auto FB = gr::multiply(G, N.F, gr::sigma(G, B, 1));
    const auto VB = gr::multiply(G, N.V, gr::sigma(G, B, -1));
    auto sf = gr::solve(G, B, FB);
    auto sv = gr::solve(G, B, VB);
    if (!sf || !sv) detail::fail_invalid("submodule: lattice is not stable under F and V");
    const int loss = std::max(sf->second, sv->second);
    if (loss >= G.precision()) detail::fail_cap("submodule: no precision left");
    const auto H = G.with_precision(G.precision() - loss);
    return make_module(H, gr::change_precision(G, sf->first, H), gr::change_precision(G, sv->first, H));
}

/// Columns of B2 lie in the lattice spanned by the columns of B1.
inline bool lattice_contains(const GaloisRing& G, const GrMatrix& B1, const GrMatrix& B2) {
    return gr::solve(G, B1, B2).has_value();
}

inline bool lattice_equal(const GaloisRing& G, const GrMatrix& B1, const GrMatrix& B2) {
    return lattice_contains(G, B1, B2) && lattice_contains(G, B2, B1);
}

/// Random module of rank h: MF = U1·D·U2 with D = diag(1..1, p..p), MV = σ^{-1}(U2^{-1}·(p D^{-1})·U1^{-1}).
template <class Rng>
DieudonneModule random_module(const GaloisRing& G, std::size_t h, Rng& rng) {
    auto random_unit_matrix = [&]() {
        for (;;) {
            auto U = gr::zeros(G, h, h);
            for (auto& x : U.data) x = G.random(rng);
            if (!is_invertible(G, U)) continue;
            auto inv = gr::solve(G, U, gr::identity(G, h));
            return std::pair{U, inv->first};
        }
    };
    auto [U1, U1i] = random_unit_matrix();
    auto [U2, U2i] = random_unit_matrix();
    std::uniform_int_distribution<std::size_t> dd(0, h);
    const std::size_t d = dd(rng);
    auto D = gr::identity(G, h), Dp = gr::identity(G, h);
    for (std::size_t i = 0; i < h; ++i) {
        if (i < d)
            D(i, i) = G.from_int(G.p());
        else
            Dp(i, i) = G.from_int(G.p());
    }
    auto F = gr::multiply(G, gr::multiply(G, U1, D), U2);
    auto V = gr::sigma(G, gr::multiply(G, gr::multiply(G, U2i, Dp), U1i), -1);
    return make_module(G, std::move(F), std::move(V));
}

inline nlohmann::json to_json(const DieudonneModule& M) {
    return {{"p", M.G.p()},
            {"r", M.precision()},
            {"m", M.G.degree()},
            {"rank", M.rank()},
            {"F", gr::to_json(M.F)},
            {"V", gr::to_json(M.V)}};
}

}  // namespace unipotent::dieudonne
