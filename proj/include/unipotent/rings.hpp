#pragma once

// Small commutative base rings used under Witt vectors: Z/p^K and truncated polynomial rings
// F_p[x_1..x_n]/(x_i^{e_i}).

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "unipotent/error.hpp"
#include "unipotent/fields.hpp"
#include "unipotent/modular.hpp"

namespace unipotent {

/// Z/p^K with residues in [0, p^K).
class ZmodRing {
public:
    using elem = std::uint64_t;

    ZmodRing(std::int64_t p, int K) : p_(static_cast<std::uint32_t>(p)), K_(K) {
        if (!is_prime(p)) detail::fail_invalid("ZmodRing: p must be prime");
        if (K < 1) detail::fail_invalid("ZmodRing: exponent must be positive");
        n_ = static_cast<std::uint64_t>(ipow(p, K));
        if (n_ > (std::uint64_t(1) << 62)) detail::fail_cap("ZmodRing: modulus too large");
    }

    std::uint32_t p() const { return p_; }
    int exponent() const { return K_; }
    std::uint64_t modulus() const { return n_; }

    elem zero() const { return 0; }
    elem one() const { return 1 % n_; }
    elem from_int(std::int64_t a) const { return static_cast<elem>(mod(a, static_cast<std::int64_t>(n_))); }
    elem add(elem a, elem b) const { return (a + b) % n_; }
    elem sub(elem a, elem b) const { return (a + n_ - b) % n_; }
    elem neg(elem a) const { return (n_ - a) % n_; }
    elem mul(elem a, elem b) const { return static_cast<elem>((static_cast<unsigned __int128>(a) * b) % n_); }
    bool is_zero(elem a) const { return a == 0; }
    bool eq(elem a, elem b) const { return a == b; }

private:
    std::uint32_t p_;
    int K_;
    std::uint64_t n_ = 1;
};

/// F_p[x_1..x_n]/(x_1^{e_1},...,x_n^{e_n}) with each e_i a power of p, stored densely.
class NilpotentPolyRing {
public:
    using elem = std::vector<std::uint32_t>;

    NilpotentPolyRing(std::int64_t p, std::vector<std::string> names, std::vector<std::uint32_t> caps)
        : p_(PrimeField(p).p), names_(std::move(names)), caps_(std::move(caps)) {
        if (names_.size() != caps_.size()) detail::fail_invalid("NilpotentPolyRing: names/caps mismatch");
        std::uint64_t size = 1;
        for (auto e : caps_) {
            if (!is_power_of(e, p_))
                detail::fail_invalid("NilpotentPolyRing: caps must be powers of p");
            size *= e;
            if (size > 1u << 16) detail::fail_cap("NilpotentPolyRing: ring too large");
        }
        size_ = static_cast<std::size_t>(size);
        strides_.resize(caps_.size());
        std::size_t s = 1;
        for (std::size_t i = 0; i < caps_.size(); ++i) {
            strides_[i] = s;
            s *= caps_[i];
        }
        exps_.resize(size_ * caps_.size());
        for (std::size_t idx = 0; idx < size_; ++idx) {
            std::size_t rest = idx;
            for (std::size_t i = 0; i < caps_.size(); ++i) {
                exps_[idx * caps_.size() + i] = static_cast<std::uint32_t>(rest % caps_[i]);
                rest /= caps_[i];
            }
        }
    }

    std::uint32_t p() const { return p_; }
    std::uint64_t modulus() const { return p_; }
    std::size_t dimension() const { return size_; }
    std::size_t num_vars() const { return caps_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::uint32_t>& caps() const { return caps_; }
    std::uint32_t exponent(std::size_t monomial, std::size_t var) const { return exps_[monomial * caps_.size() + var]; }

    elem zero() const { return elem(size_, 0); }
    elem one() const { return from_int(1); }
    elem from_int(std::int64_t a) const {
        elem z = zero();
        z[0] = static_cast<std::uint32_t>(mod(a, p_));
        return z;
    }
    elem var(std::size_t i) const { return monomial(std::vector<std::uint32_t>(caps_.size(), 0), i); }
    elem monomial(std::vector<std::uint32_t> e, std::size_t bump = static_cast<std::size_t>(-1)) const {
        if (bump != static_cast<std::size_t>(-1)) e.at(bump) += 1;
        elem z = zero();
        std::size_t idx = 0;
        for (std::size_t i = 0; i < caps_.size(); ++i) {
            if (e[i] >= caps_[i]) return z;
            idx += e[i] * strides_[i];
        }
        z[idx] = 1;
        return z;
    }
    std::size_t monomial_index(const std::vector<std::uint32_t>& e) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < caps_.size(); ++i) idx += e.at(i) * strides_[i];
        return idx;
    }

    elem add(const elem& a, const elem& b) const {
        elem z(size_);
        for (std::size_t i = 0; i < size_; ++i) z[i] = (a[i] + b[i]) % p_;
        return z;
    }
    elem sub(const elem& a, const elem& b) const {
        elem z(size_);
        for (std::size_t i = 0; i < size_; ++i) z[i] = (a[i] + p_ - b[i]) % p_;
        return z;
    }
    elem neg(const elem& a) const { return sub(zero(), a); }
    elem scale(const elem& a, std::uint32_t s) const {
        elem z(size_);
        for (std::size_t i = 0; i < size_; ++i) z[i] = (a[i] * (s % p_)) % p_;
        return z;
    }
    elem mul(const elem& a, const elem& b) const {
        std::vector<std::uint64_t> acc(size_, 0);
        const std::size_t nv = caps_.size();
        for (std::size_t i = 0; i < size_; ++i) {
            if (!a[i]) continue;
            for (std::size_t j = 0; j < size_; ++j) {
                if (!b[j]) continue;
                std::size_t idx = 0;
                bool ok = true;
                for (std::size_t v = 0; v < nv; ++v) {
                    const auto e = exps_[i * nv + v] + exps_[j * nv + v];
                    if (e >= caps_[v]) {
                        ok = false;
                        break;
                    }
                    idx += e * strides_[v];
                }
                if (ok) acc[idx] += std::uint64_t(a[i]) * b[j];
            }
        }
        elem z(size_);
        for (std::size_t i = 0; i < size_; ++i) z[i] = static_cast<std::uint32_t>(acc[i] % p_);
        return z;
    }
    elem pow(elem a, std::uint64_t e) const {
        elem r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return r;
    }
    bool is_zero(const elem& a) const {
        for (auto c : a)
            if (c) return false;
        return true;
    }
    bool eq(const elem& a, const elem& b) const { return a == b; }

    std::string to_string(const elem& a) const {
        std::string s;
        for (std::size_t idx = 0; idx < size_; ++idx) {
            if (!a[idx]) continue;
            std::string mono;
            for (std::size_t v = 0; v < caps_.size(); ++v) {
                const auto e = exponent(idx, v);
                if (!e) continue;
                if (!mono.empty()) mono += "*";
                mono += names_[v];
                if (e > 1) mono += "^" + std::to_string(e);
            }
            if (!s.empty()) s += " + ";
            if (mono.empty())
                s += std::to_string(a[idx]);
            else
                s += (a[idx] == 1 ? "" : std::to_string(a[idx]) + "*") + mono;
        }
        return s.empty() ? "0" : s;
    }

    nlohmann::json descriptor() const { return {{"p", p_}, {"vars", names_}, {"caps", caps_}}; }

private:
    std::uint32_t p_;
    std::vector<std::string> names_;
    std::vector<std::uint32_t> caps_;
    std::vector<std::size_t> strides_;
    std::vector<std::uint32_t> exps_;
    std::size_t size_ = 1;
};

/// Reduction modulus of a base ring: p for F_p-algebras, p^K for Z/p^K.
inline std::uint64_t ring_modulus(const fields::FqField& k) { return k.p(); }
inline std::uint64_t ring_modulus(const ZmodRing& z) { return z.modulus(); }
inline std::uint64_t ring_modulus(const NilpotentPolyRing& r) { return r.modulus(); }

inline std::uint32_t ring_prime(const fields::FqField& k) { return k.p(); }
inline std::uint32_t ring_prime(const ZmodRing& z) { return z.p(); }
inline std::uint32_t ring_prime(const NilpotentPolyRing& r) { return r.p(); }

inline nlohmann::json elem_to_json(const fields::FqField& k, const fields::Fq& x) { return k.coeffs(x); }
inline nlohmann::json elem_to_json(const ZmodRing&, std::uint64_t x) { return x; }
inline nlohmann::json elem_to_json(const NilpotentPolyRing& r, const NilpotentPolyRing::elem& x) {
    return r.to_string(x);
}

inline nlohmann::json ring_descriptor(const fields::FqField& k) {
    return {{"p", k.p()}, {"degree", k.degree()}, {"poly", k.level().poly}};
}
inline nlohmann::json ring_descriptor(const ZmodRing& z) { return {{"p", z.p()}, {"exponent", z.exponent()}}; }
inline nlohmann::json ring_descriptor(const NilpotentPolyRing& r) { return r.descriptor(); }

}  // namespace unipotent
