#pragma once

// Dense linear algebra over an abstract field context.
//
// A field context K supplies `elem`, zero(), one(), add, sub, mul, neg, inv, is_zero and eq.
// Matrices are row-major value types; all routines are exact.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "unipotent/error.hpp"
#include "unipotent/modular.hpp"

namespace unipotent {

template <class K>
concept FieldContext = requires(const K& k, typename K::elem a, typename K::elem b) {
    { k.zero() } -> std::convertible_to<typename K::elem>;
    { k.one() } -> std::convertible_to<typename K::elem>;
    { k.add(a, b) } -> std::convertible_to<typename K::elem>;
    { k.sub(a, b) } -> std::convertible_to<typename K::elem>;
    { k.mul(a, b) } -> std::convertible_to<typename K::elem>;
    { k.neg(a) } -> std::convertible_to<typename K::elem>;
    { k.inv(a) } -> std::convertible_to<typename K::elem>;
    { k.is_zero(a) } -> std::convertible_to<bool>;
    { k.eq(a, b) } -> std::convertible_to<bool>;
};

/// The prime field F_p with elements stored as reduced residues.
struct PrimeField {
    using elem = std::uint32_t;
    std::uint32_t p = 2;

    PrimeField() = default;
    explicit PrimeField(std::int64_t prime) : p(static_cast<std::uint32_t>(prime)) {
        if (!is_prime(prime) || prime > 97) detail::fail_invalid("PrimeField: p must be a prime <= 97");
    }

    elem zero() const { return 0; }
    elem one() const { return 1; }
    elem from_int(std::int64_t a) const { return static_cast<elem>(mod(a, p)); }
    elem add(elem a, elem b) const { return (a + b) % p; }
    elem sub(elem a, elem b) const { return (a + p - b) % p; }
    elem mul(elem a, elem b) const { return (a * b) % p; }
    elem neg(elem a) const { return (p - a) % p; }
    elem inv(elem a) const {
        if (a == 0) detail::fail_invalid("PrimeField: inverse of zero");
        return static_cast<elem>(powmod(a, p - 2, p));
    }
    bool is_zero(elem a) const { return a == 0; }
    bool eq(elem a, elem b) const { return a == b; }
};

template <class T>
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, T fill) : rows(r), cols(c), data(r * c, fill) {}

    T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::vector<T> column(std::size_t j) const {
        std::vector<T> out(rows);
        for (std::size_t i = 0; i < rows; ++i) out[i] = (*this)(i, j);
        return out;
    }
    void set_column(std::size_t j, const std::vector<T>& v) {
        for (std::size_t i = 0; i < rows; ++i) (*this)(i, j) = v[i];
    }
    bool operator==(const Matrix&) const = default;
};

namespace linalg {

template <FieldContext K>
Matrix<typename K::elem> zeros(const K& k, std::size_t r, std::size_t c) {
    return Matrix<typename K::elem>(r, c, k.zero());
}

template <FieldContext K>
Matrix<typename K::elem> identity(const K& k, std::size_t n) {
    auto m = zeros(k, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = k.one();
    return m;
}

template <FieldContext K>
Matrix<typename K::elem> from_columns(const K& k, std::size_t rows,
                                      const std::vector<std::vector<typename K::elem>>& cols) {
    auto m = zeros(k, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
    return m;
}

template <FieldContext K>
Matrix<typename K::elem> multiply(const K& k, const Matrix<typename K::elem>& a,
                                  const Matrix<typename K::elem>& b) {
    if (a.cols != b.rows) detail::fail_invalid("matrix multiply: shape mismatch");
    auto c = zeros(k, a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t l = 0; l < a.cols; ++l) {
            const auto& x = a(i, l);
            if (k.is_zero(x)) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) = k.add(c(i, j), k.mul(x, b(l, j)));
        }
    return c;
}

template <FieldContext K>
std::vector<typename K::elem> apply(const K& k, const Matrix<typename K::elem>& a,
                                    const std::vector<typename K::elem>& v) {
    if (a.cols != v.size()) detail::fail_invalid("matrix apply: shape mismatch");
    std::vector<typename K::elem> out(a.rows, k.zero());
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            if (!k.is_zero(v[j])) out[i] = k.add(out[i], k.mul(a(i, j), v[j]));
    return out;
}

template <FieldContext K>
Matrix<typename K::elem> transpose(const K& k, const Matrix<typename K::elem>& a) {
    auto t = zeros(k, a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

template <FieldContext K>
bool is_zero(const K& k, const Matrix<typename K::elem>& a) {
    return std::all_of(a.data.begin(), a.data.end(), [&](const auto& x) { return k.is_zero(x); });
}

template <FieldContext K>
bool equal(const K& k, const Matrix<typename K::elem>& a, const Matrix<typename K::elem>& b) {
    if (a.rows != b.rows || a.cols != b.cols) return false;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (!k.eq(a.data[i], b.data[i])) return false;
    return true;
}

/// In-place reduced row echelon form; returns pivot columns in order.
template <FieldContext K>
std::vector<std::size_t> rref(const K& k, Matrix<typename K::elem>& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t piv = row;
        while (piv < m.rows && k.is_zero(m(piv, col))) ++piv;
        if (piv == m.rows) continue;
        if (piv != row)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(row, j));
        auto inv = k.inv(m(row, col));
        for (std::size_t j = col; j < m.cols; ++j) m(row, j) = k.mul(m(row, j), inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || k.is_zero(m(i, col))) continue;
            auto f = m(i, col);
            for (std::size_t j = col; j < m.cols; ++j) m(i, j) = k.sub(m(i, j), k.mul(f, m(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <FieldContext K>
std::size_t rank(const K& k, Matrix<typename K::elem> m) {
    return rref(k, m).size();
}

/// Basis of the right kernel {v : m v = 0}, returned as the columns of a matrix.
template <FieldContext K>
Matrix<typename K::elem> kernel(const K& k, Matrix<typename K::elem> m) {
    auto pivots = rref(k, m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<typename K::elem>> basis;
    for (std::size_t free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<typename K::elem> v(m.cols, k.zero());
        v[free] = k.one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = k.neg(m(r, free));
        basis.push_back(std::move(v));
    }
    return from_columns(k, m.cols, basis);
}

/// A basis of the column space, as a subset of the columns (first independent ones).
template <FieldContext K>
Matrix<typename K::elem> column_space(const K& k, const Matrix<typename K::elem>& m) {
    auto t = m;
    auto pivots = rref(k, t);
    std::vector<std::vector<typename K::elem>> cols;
    for (auto c : pivots) cols.push_back(m.column(c));
    return from_columns(k, m.rows, cols);
}

/// Solve m x = b; returns nullopt when inconsistent.
template <FieldContext K>
std::optional<std::vector<typename K::elem>> solve(const K& k, const Matrix<typename K::elem>& m,
                                                   const std::vector<typename K::elem>& b) {
    auto aug = zeros(k, m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
        aug(i, m.cols) = b[i];
    }
    auto pivots = rref(k, aug);
    if (!pivots.empty() && pivots.back() == m.cols) return std::nullopt;
    std::vector<typename K::elem> x(m.cols, k.zero());
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, m.cols);
    return x;
}

/// Solve m X = b column by column; nullopt if any column is inconsistent.
template <FieldContext K>
std::optional<Matrix<typename K::elem>> solve_matrix(const K& k, const Matrix<typename K::elem>& m,
                                                     const Matrix<typename K::elem>& b) {
    auto out = zeros(k, m.cols, b.cols);
    for (std::size_t j = 0; j < b.cols; ++j) {
        auto x = solve(k, m, b.column(j));
        if (!x) return std::nullopt;
        out.set_column(j, *x);
    }
    return out;
}

template <FieldContext K>
std::optional<Matrix<typename K::elem>> inverse(const K& k, const Matrix<typename K::elem>& m) {
    if (m.rows != m.cols) return std::nullopt;
    const std::size_t n = m.rows;
    auto aug = zeros(k, n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = k.one();
    }
    auto pivots = rref(k, aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
    auto inv = zeros(k, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

/// Stack the columns of a and b side by side.
template <FieldContext K>
Matrix<typename K::elem> hconcat(const K& k, const Matrix<typename K::elem>& a, const Matrix<typename K::elem>& b) {
    const std::size_t rows = a.cols ? a.rows : b.rows;
    auto m = zeros(k, rows, a.cols + b.cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols; ++j) m(i, a.cols + j) = b(i, j);
    }
    return m;
}

/// Stack the rows of a on top of b.
template <FieldContext K>
Matrix<typename K::elem> vconcat(const K& k, const Matrix<typename K::elem>& a, const Matrix<typename K::elem>& b) {
    const std::size_t cols = a.rows ? a.cols : b.cols;
    auto m = zeros(k, a.rows + b.rows, cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(a.rows + i, j) = b(i, j);
    return m;
}

/// Whether every column of sub lies in the column span of space.
template <FieldContext K>
bool span_contains(const K& k, const Matrix<typename K::elem>& space, const Matrix<typename K::elem>& sub) {
    if (sub.cols == 0) return true;
    if (space.cols == 0) return is_zero(k, sub);
    return rank(k, hconcat(k, space, sub)) == rank(k, space);
}

}  // namespace linalg
}  // namespace unipotent
