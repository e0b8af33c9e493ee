#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "unipotent/error.hpp"

namespace unipotent {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline i64 mod(i64 a, i64 n) {
    a %= n;
    return a < 0 ? a + n : a;
}

inline i64 mulmod(i64 a, i64 b, i64 n) { return static_cast<i64>((static_cast<i128>(a) * b) % n); }

inline i64 powmod(i64 a, u64 e, i64 n) {
    i64 r = 1 % n;
    a = mod(a, n);
    while (e) {
        if (e & 1) r = mulmod(r, a, n);
        a = mulmod(a, a, n);
        e >>= 1;
    }
    return r;
}

/// Inverse of a modulo n; a must be coprime to n.
inline i64 invmod(i64 a, i64 n) {
    i64 t = 0, nt = 1, r = n, nr = mod(a, n);
    while (nr) {
        i64 q = r / nr;
        std::tie(t, nt) = std::pair{nt, t - q * nt};
        std::tie(r, nr) = std::pair{nr, r - q * nr};
    }
    if (r != 1) detail::fail_invalid("invmod: element is not a unit");
    return mod(t, n);
}

/// p^e as a 64-bit integer; throws if it overflows.
inline i64 ipow(i64 p, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > (INT64_MAX / p)) detail::fail_cap("ipow: overflow");
        r *= p;
    }
    return r;
}

/// p-adic valuation of a nonzero integer (returns cap for 0).
inline int valuation(i64 a, i64 p, int cap) {
    if (a == 0) return cap;
    int v = 0;
    while (a % p == 0 && v < cap) {
        a /= p;
        ++v;
    }
    return v;
}

inline i64 binomial(i64 n, i64 k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    i64 r = 1;
    for (i64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline bool is_power_of(i64 n, i64 p) {
    if (n < 1) return false;
    while (n % p == 0) n /= p;
    return n == 1;
}

/// Distinct prime factors of n (trial division).
inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace unipotent
