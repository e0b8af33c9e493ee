#pragma once

// Linear algebra over Z/p^R: Smith form with transforms, kernels, and solving with precision tracking.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "unipotent/error.hpp"
#include "unipotent/linalg.hpp"
#include "unipotent/modular.hpp"

namespace unipotent::zmod {

using ZMatrix = Matrix<std::int64_t>;

struct Ring {
    std::int64_t p = 2;
    int R = 1;
    std::int64_t n = 2;  // p^R

    Ring() = default;
    Ring(std::int64_t prime, int precision) : p(prime), R(precision), n(ipow(prime, precision)) {}

    std::int64_t red(std::int64_t a) const { return mod(a, n); }
    int val(std::int64_t a) const { return valuation(red(a), p, R); }
    std::int64_t unit_part_inverse(std::int64_t a, int v) const { return invmod(red(a) / ipow(p, v), n); }
};

inline ZMatrix zeros(std::size_t r, std::size_t c) {
    ZMatrix M;
    M.rows = r;
    M.cols = c;
    M.data.assign(r * c, 0);
    return M;
}

inline ZMatrix identity(const Ring& Z, std::size_t n) {
    auto M = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) M(i, i) = 1 % Z.n;
    return M;
}

inline ZMatrix multiply(const Ring& Z, const ZMatrix& A, const ZMatrix& B) {
    if (A.cols != B.rows) detail::fail_invalid("zmod::multiply: shape mismatch");
    auto C = zeros(A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            const auto a = A(i, k);
            if (!a) continue;
            for (std::size_t j = 0; j < B.cols; ++j)
                if (B(k, j)) C(i, j) = mod(C(i, j) + mulmod(a, B(k, j), Z.n), Z.n);
        }
    return C;
}

inline std::vector<std::int64_t> apply(const Ring& Z, const ZMatrix& A, const std::vector<std::int64_t>& x) {
    std::vector<std::int64_t> y(A.rows, 0);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j)
            if (A(i, j) && x[j]) y[i] = mod(y[i] + mulmod(A(i, j), x[j], Z.n), Z.n);
    return y;
}

/// U * A * V = D with D diagonal, D(i,i) = p^{e_i} for i < rank, e_0 <= e_1 <= ...
struct Smith {
    ZMatrix U, V;
    std::vector<int> exponents;  // e_i for the nonzero diagonal entries
    std::size_t rows = 0, cols = 0;
};

inline Smith smith(const Ring& Z, ZMatrix A) {
    Smith S;
    S.rows = A.rows;
    S.cols = A.cols;
    S.U = identity(Z, A.rows);
    S.V = identity(Z, A.cols);
    const std::size_t n = std::min(A.rows, A.cols);
    for (std::size_t t = 0; t < n; ++t) {
        int best = Z.R;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = t; i < A.rows && best > 0; ++i)
            for (std::size_t j = t; j < A.cols; ++j) {
                const int v = Z.val(A(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        if (best == Z.R) break;
        if (bi != t) {
            for (std::size_t j = 0; j < A.cols; ++j) std::swap(A(t, j), A(bi, j));
            for (std::size_t j = 0; j < A.rows; ++j) std::swap(S.U(t, j), S.U(bi, j));
        }
        if (bj != t) {
            for (std::size_t i = 0; i < A.rows; ++i) std::swap(A(i, t), A(i, bj));
            for (std::size_t i = 0; i < A.cols; ++i) std::swap(S.V(i, t), S.V(i, bj));
        }
        const std::int64_t u = Z.unit_part_inverse(A(t, t), best);
        for (std::size_t j = 0; j < A.cols; ++j) A(t, j) = mulmod(A(t, j), u, Z.n);
        for (std::size_t j = 0; j < A.rows; ++j) S.U(t, j) = mulmod(S.U(t, j), u, Z.n);
        const std::int64_t pe = ipow(Z.p, best);
        // Every entry of the block has valuation >= best, so the quotients below are exact.
        for (std::size_t i = t + 1; i < A.rows; ++i) {
            if (!A(i, t)) continue;
            const std::int64_t f = A(i, t) / pe;
            for (std::size_t j = t; j < A.cols; ++j) A(i, j) = mod(A(i, j) - mulmod(f, A(t, j), Z.n), Z.n);
            for (std::size_t j = 0; j < A.rows; ++j) S.U(i, j) = mod(S.U(i, j) - mulmod(f, S.U(t, j), Z.n), Z.n);
        }
        for (std::size_t j = t + 1; j < A.cols; ++j) {
            if (!A(t, j)) continue;
            const std::int64_t f = A(t, j) / pe;
            A(t, j) = 0;
            for (std::size_t i = 0; i < A.cols; ++i) S.V(i, j) = mod(S.V(i, j) - mulmod(f, S.V(i, t), Z.n), Z.n);
        }
        S.exponents.push_back(best);
    }
    return S;
}

/// Kernel of A as a list of generators, together with log_p of its cardinality.
struct Kernel {
    std::vector<std::vector<std::int64_t>> generators;
    int length = 0;
};

inline Kernel kernel(const Ring& Z, const ZMatrix& A) {
    const auto S = smith(Z, A);
    Kernel K;
    for (std::size_t j = 0; j < A.cols; ++j) {
        const int e = j < S.exponents.size() ? S.exponents[j] : Z.R;
        if (e == 0) continue;
        const std::int64_t scale = ipow(Z.p, Z.R - e);
        std::vector<std::int64_t> g(A.cols);
        for (std::size_t i = 0; i < A.cols; ++i) g[i] = mulmod(S.V(i, j), scale, Z.n);
        K.generators.push_back(std::move(g));
        K.length += e;
    }
    return K;
}

/// One solution of A x = b, valid modulo p^{R - loss} up to the kernel, or nullopt.
struct Solution {
    std::vector<std::int64_t> x;
    int loss = 0;
};

inline std::optional<Solution> solve(const Ring& Z, const Smith& S, const std::vector<std::int64_t>& b) {
    auto c = apply(Z, S.U, b);
    std::vector<std::int64_t> y(S.cols, 0);
    Solution out;
    for (std::size_t i = 0; i < S.rows; ++i) {
        const int e = i < S.exponents.size() ? S.exponents[i] : Z.R;
        if (Z.val(c[i]) < e) return std::nullopt;
        if (i < S.exponents.size()) {
            y[i] = c[i] / ipow(Z.p, e);
            out.loss = std::max(out.loss, e);
        }
    }
    out.x = apply(Z, S.V, y);
    return out;
}

inline std::optional<Solution> solve(const Ring& Z, const ZMatrix& A, const std::vector<std::int64_t>& b) {
    return solve(Z, smith(Z, A), b);
}

/// log_p of the cardinality of the submodule generated by the columns of A.
inline int image_length(const Ring& Z, const ZMatrix& A) {
    const auto S = smith(Z, A);
    int len = 0;
    for (int e : S.exponents) len += Z.R - e;
    return len;
}

}  // namespace unipotent::zmod
