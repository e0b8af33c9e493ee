#pragma once

// The Galois ring GR(p^r, m) = W_r(F_{p^m}) = (Z/p^r)[t]/(f), f the naive monic lift of the
// defining polynomial of a tower level, with its Frobenius lift sigma.

#include <cstdint>
#include <vector>

#include "unipotent/error.hpp"
#include "unipotent/fields.hpp"
#include "unipotent/modular.hpp"
#include "unipotent/witt.hpp"

namespace unipotent::witt {

class GaloisRing {
public:
    using elem = std::vector<std::int64_t>;
    static constexpr int kTeichmullerIterationCap = 64;

    GaloisRing(fields::FqField k, int r) : k_(k), p_(k.p()), m_(k.degree()), r_(r) {
        if (r < 1) detail::fail_invalid("GaloisRing: precision must be positive");
        mod_ = ipow(p_, r);
        if (mod_ > (std::int64_t(1) << 62)) detail::fail_cap("GaloisRing: modulus too large");
        for (auto c : k_.level().poly) poly_.push_back(static_cast<std::int64_t>(c));
        build_sigma();
    }

    const fields::FqField& residue_field() const { return k_; }
    std::uint32_t p() const { return p_; }
    int degree() const { return m_; }
    int precision() const { return r_; }
    std::int64_t modulus() const { return mod_; }
    const std::vector<std::int64_t>& defining_poly() const { return poly_; }

    elem zero() const { return elem(m_, 0); }
    elem one() const { return from_int(1); }
    elem from_int(std::int64_t a) const {
        elem z = zero();
        z[0] = mod(a, mod_);
        return z;
    }
    elem generator() const {
        if (m_ == 1) return from_int(-poly_[0]);
        elem z = zero();
        z[1] = 1;
        return z;
    }
    elem add(const elem& a, const elem& b) const {
        elem z(m_);
        for (int i = 0; i < m_; ++i) z[i] = mod(a[i] + b[i], mod_);
        return z;
    }
    elem sub(const elem& a, const elem& b) const {
        elem z(m_);
        for (int i = 0; i < m_; ++i) z[i] = mod(a[i] - b[i], mod_);
        return z;
    }
    elem neg(const elem& a) const { return sub(zero(), a); }
    elem scale(const elem& a, std::int64_t s) const {
        elem z(m_);
        for (int i = 0; i < m_; ++i) z[i] = mulmod(a[i], mod(s, mod_), mod_);
        return z;
    }
    elem mul(const elem& a, const elem& b) const {
        std::vector<std::int64_t> t(2 * m_ - 1, 0);
        for (int i = 0; i < m_; ++i) {
            if (!a[i]) continue;
            for (int j = 0; j < m_; ++j) t[i + j] = mod(t[i + j] + mulmod(a[i], b[j], mod_), mod_);
        }
        for (int k = 2 * m_ - 2; k >= m_; --k) {
            const auto top = t[k];
            if (!top) continue;
            for (int j = 0; j < m_; ++j) t[k - m_ + j] = mod(t[k - m_ + j] - mulmod(top, poly_[j], mod_), mod_);
        }
        return elem(t.begin(), t.begin() + m_);
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

    /// Minimal p-adic valuation of the coefficients (r for zero).
    int valuation(const elem& a) const {
        int v = r_;
        for (auto c : a) v = std::min(v, unipotent::valuation(c, p_, r_));
        return v;
    }
    bool is_unit(const elem& a) const { return valuation(a) == 0; }

    elem inv(const elem& a) const {
        if (!is_unit(a)) detail::fail_invalid("GaloisRing: element is not a unit");
        elem y = lift(k_.inv(reduce(a)));
        // Newton iteration y <- y (2 - a y) doubles the precision each step.
        for (int prec = 1; prec < r_; prec *= 2) y = mul(y, sub(from_int(2), mul(a, y)));
        return y;
    }

    /// Reduction to the residue field.
    fields::Fq reduce(const elem& a) const {
        std::vector<std::int64_t> c(a.begin(), a.end());
        return k_.from_coeffs(c);
    }
    /// Coefficientwise lift of a residue field element.
    elem lift(const fields::Fq& x) const {
        elem z = zero();
        for (int i = 0; i < m_; ++i) z[i] = x.c[i];
        return z;
    }

    elem p_power_times(const elem& a, int e) const { return scale(a, e >= r_ ? 0 : ipow(p_, e)); }
    /// a / p^e, requires valuation(a) >= e.
    elem divide_p_power(const elem& a, int e) const {
        if (valuation(a) < e) detail::fail_invalid("GaloisRing: inexact division by p-power");
        const auto d = ipow(p_, e);
        elem z(m_);
        for (int i = 0; i < m_; ++i) z[i] = a[i] / d;
        return z;
    }

    /// The Teichmuller representative of x: the unique lift with y^{p^m} = y.
    elem teichmuller(const fields::Fq& x) const {
        elem y = lift(x);
        for (int it = 0; it < kTeichmullerIterationCap; ++it) {
            elem next = y;
            for (int i = 0; i < m_; ++i) next = pow(next, p_);
            if (next == y) return y;
            y = std::move(next);
        }
        detail::fail_check("GaloisRing: Teichmuller iteration did not converge");
    }

    /// Digits a_i with a = sum p^i [a_i].
    std::vector<fields::Fq> digits(elem a) const {
        std::vector<fields::Fq> out;
        for (int i = 0; i < r_; ++i) {
            auto d = reduce(a);
            out.push_back(d);
            a = sub(a, teichmuller(d));
            if (i + 1 < r_) a = shift_down(a);
        }
        return out;
    }
    elem from_digits(const std::vector<fields::Fq>& d) const {
        elem acc = zero();
        for (int i = static_cast<int>(d.size()); i-- > 0;)
            acc = add(p_power_times(teichmuller(d[i]), i), acc);
        return acc;
    }

    /// sigma^k (k any integer), the ring automorphism lifting x -> x^p.
    elem sigma(const elem& a, std::int64_t k = 1) const {
        const auto kk = static_cast<std::size_t>(mod(k, m_));
        if (kk == 0) return a;
        const auto& S = sigma_pow_[kk];
        elem z = zero();
        for (int i = 0; i < m_; ++i) {
            std::int64_t acc = 0;
            for (int j = 0; j < m_; ++j) acc = mod(acc + mulmod(S[i * m_ + j], a[j], mod_), mod_);
            z[i] = acc;
        }
        return z;
    }

    /// Matrix of sigma^k on the basis 1, t, ..., t^{m-1} (row-major m x m).
    const std::vector<std::int64_t>& sigma_matrix(std::int64_t k) const {
        return sigma_pow_[static_cast<std::size_t>(mod(k, m_))];
    }

    /// Number of elements, when it fits in 64 bits.
    std::uint64_t order() const { return static_cast<std::uint64_t>(ipow(mod_, m_)); }
    elem element(std::uint64_t idx) const {
        elem z(m_);
        for (int i = 0; i < m_; ++i) {
            z[i] = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(mod_));
            idx /= static_cast<std::uint64_t>(mod_);
        }
        return z;
    }
    template <class Rng>
    elem random(Rng& rng) const {
        std::uniform_int_distribution<std::int64_t> d(0, mod_ - 1);
        elem z(m_);
        for (auto& c : z) c = d(rng);
        return z;
    }

    /// Same ring at another precision (reduction or naive lift of coefficients).
    GaloisRing with_precision(int r) const { return GaloisRing(k_, r); }
    elem change_precision(const elem& a, const GaloisRing& target) const {
        elem z(target.m_);
        for (int i = 0; i < m_; ++i) z[i] = mod(a[i], target.mod_);
        return z;
    }

private:
    elem shift_down(const elem& a) const {
        elem z(m_);
        for (int i = 0; i < m_; ++i) {
            if (a[i] % p_ != 0) detail::fail_check("GaloisRing: digit extraction lost exactness");
            z[i] = a[i] / p_;
        }
        return z;
    }

    void build_sigma() {
        // sigma on the basis via digit decomposition, then powers by composition.
        std::vector<std::int64_t> S(static_cast<std::size_t>(m_) * m_, 0);
        elem basis = one();
        for (int j = 0; j < m_; ++j) {
            elem img = zero();
            auto d = digits(basis);
            for (int i = static_cast<int>(d.size()); i-- > 0;)
                img = add(p_power_times(teichmuller(k_.frobenius(d[i], 1)), i), img);
            for (int i = 0; i < m_; ++i) S[i * m_ + j] = img[i];
            basis = mul(basis, generator_for_powers());
        }
        sigma_pow_.clear();
        std::vector<std::int64_t> I(static_cast<std::size_t>(m_) * m_, 0);
        for (int i = 0; i < m_; ++i) I[i * m_ + i] = 1 % mod_;
        sigma_pow_.push_back(I);
        for (int k = 1; k < m_; ++k) {
            const auto& prev = sigma_pow_.back();
            std::vector<std::int64_t> nxt(static_cast<std::size_t>(m_) * m_, 0);
            for (int i = 0; i < m_; ++i)
                for (int l = 0; l < m_; ++l) {
                    if (!S[i * m_ + l]) continue;
                    for (int j = 0; j < m_; ++j)
                        nxt[i * m_ + j] = mod(nxt[i * m_ + j] + mulmod(S[i * m_ + l], prev[l * m_ + j], mod_), mod_);
                }
            sigma_pow_.push_back(std::move(nxt));
        }
    }
    elem generator_for_powers() const {
        elem z = zero();
        if (m_ == 1) return one();
        z[1] = 1;
        return z;
    }

    fields::FqField k_;
    std::uint32_t p_;
    int m_;
    int r_;
    std::int64_t mod_ = 1;
    std::vector<std::int64_t> poly_;
    std::vector<std::vector<std::int64_t>> sigma_pow_;
};

/// (a_0, ..., a_{r-1}) -> sum p^i [a_i^{p^{-i}}].
inline GaloisRing::elem witt_to_galois(const GaloisRing& G, const std::vector<fields::Fq>& a) {
    if (static_cast<int>(a.size()) != G.precision()) detail::fail_invalid("witt_to_galois: length mismatch");
    const auto& k = G.residue_field();
    std::vector<fields::Fq> d;
    for (int i = 0; i < G.precision(); ++i) d.push_back(k.frobenius(a[i], -i));
    return G.from_digits(d);
}

/// Inverse of witt_to_galois: a_i = b_i^{p^i} for the digits b_i.
inline std::vector<fields::Fq> galois_to_witt(const GaloisRing& G, const GaloisRing::elem& x) {
    const auto& k = G.residue_field();
    auto d = G.digits(x);
    for (int i = 0; i < G.precision(); ++i) d[i] = k.frobenius(d[i], i);
    return d;
}

}  // namespace unipotent::witt
