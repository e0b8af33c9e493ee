#pragma once

// Dense univariate polynomials over a field context. Coefficients are stored low to high;
// the zero polynomial is the empty vector.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "unipotent/linalg.hpp"

namespace unipotent::upoly {

template <FieldContext K>
using Poly = std::vector<typename K::elem>;

template <FieldContext K>
void trim(const K& k, Poly<K>& f) {
    while (!f.empty() && k.is_zero(f.back())) f.pop_back();
}

template <FieldContext K>
int degree(const K& k, const Poly<K>& f) {
    int d = static_cast<int>(f.size()) - 1;
    while (d >= 0 && k.is_zero(f[d])) --d;
    return d;
}

template <FieldContext K>
Poly<K> constant(const K& k, typename K::elem c) {
    if (k.is_zero(c)) return {};
    return {c};
}

/// x - a
template <FieldContext K>
Poly<K> linear(const K& k, typename K::elem a) {
    return {k.neg(a), k.one()};
}

template <FieldContext K>
Poly<K> add(const K& k, const Poly<K>& a, const Poly<K>& b) {
    Poly<K> c(std::max(a.size(), b.size()), k.zero());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = k.add(c[i], b[i]);
    trim(k, c);
    return c;
}

template <FieldContext K>
Poly<K> sub(const K& k, const Poly<K>& a, const Poly<K>& b) {
    Poly<K> c(std::max(a.size(), b.size()), k.zero());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = k.sub(c[i], b[i]);
    trim(k, c);
    return c;
}

template <FieldContext K>
Poly<K> scale(const K& k, const Poly<K>& a, typename K::elem s) {
    Poly<K> c(a.size(), k.zero());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = k.mul(a[i], s);
    trim(k, c);
    return c;
}

template <FieldContext K>
Poly<K> mul(const K& k, const Poly<K>& a, const Poly<K>& b) {
    if (a.empty() || b.empty()) return {};
    Poly<K> c(a.size() + b.size() - 1, k.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (k.is_zero(a[i])) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = k.add(c[i + j], k.mul(a[i], b[j]));
    }
    trim(k, c);
    return c;
}

/// Returns (q, r) with a = q b + r and deg r < deg b.
template <FieldContext K>
std::pair<Poly<K>, Poly<K>> divmod(const K& k, Poly<K> a, Poly<K> b) {
    trim(k, a);
    trim(k, b);
    if (b.empty()) detail::fail_invalid("polynomial division by zero");
    if (a.size() < b.size()) return {{}, a};
    Poly<K> q(a.size() - b.size() + 1, k.zero());
    auto lead_inv = k.inv(b.back());
    const std::ptrdiff_t db = static_cast<std::ptrdiff_t>(b.size()) - 1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(a.size()) - 1; i >= db; --i) {
        auto c = k.mul(a[i], lead_inv);
        q[i - db] = c;
        if (k.is_zero(c)) continue;
        for (std::ptrdiff_t j = 0; j <= db; ++j) a[i - db + j] = k.sub(a[i - db + j], k.mul(c, b[j]));
    }
    trim(k, q);
    trim(k, a);
    return {q, a};
}

template <FieldContext K>
Poly<K> rem(const K& k, const Poly<K>& a, const Poly<K>& b) {
    return divmod(k, a, b).second;
}

template <FieldContext K>
Poly<K> monic(const K& k, const Poly<K>& f) {
    if (f.empty()) return f;
    return scale(k, f, k.inv(f.back()));
}

template <FieldContext K>
Poly<K> gcd(const K& k, Poly<K> a, Poly<K> b) {
    trim(k, a);
    trim(k, b);
    while (!b.empty()) {
        auto r = rem(k, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(k, a);
}

template <FieldContext K>
Poly<K> mulmod(const K& k, const Poly<K>& a, const Poly<K>& b, const Poly<K>& m) {
    return rem(k, mul(k, a, b), m);
}

/// a^e mod m for a machine-word exponent.
template <FieldContext K>
Poly<K> powmod(const K& k, Poly<K> a, std::uint64_t e, const Poly<K>& m) {
    Poly<K> result = rem(k, constant(k, k.one()), m);
    a = rem(k, a, m);
    while (e) {
        if (e & 1) result = mulmod(k, result, a, m);
        e >>= 1;
        if (e) a = mulmod(k, a, a, m);
    }
    return result;
}

template <FieldContext K>
typename K::elem eval(const K& k, const Poly<K>& f, typename K::elem x) {
    auto acc = k.zero();
    for (std::size_t i = f.size(); i-- > 0;) acc = k.add(k.mul(acc, x), f[i]);
    return acc;
}

template <FieldContext K>
bool is_one(const K& k, const Poly<K>& f) {
    return degree(k, f) == 0 && k.eq(f[0], k.one());
}

}  // namespace unipotent::upoly
