#pragma once

// Sparse multivariate polynomials with arbitrary-precision integer coefficients.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "unipotent/error.hpp"

namespace unipotent {

using BigInt = boost::multiprecision::cpp_int;

class IntPoly {
public:
    using Exponents = std::vector<std::uint32_t>;
    using Terms = std::map<Exponents, BigInt>;

    IntPoly() = default;
    explicit IntPoly(std::size_t nvars) : nvars_(nvars) {}

    static IntPoly constant(std::size_t nvars, const BigInt& c) {
        IntPoly f(nvars);
        if (c != 0) f.terms_[Exponents(nvars, 0)] = c;
        return f;
    }
    static IntPoly variable(std::size_t nvars, std::size_t i, std::uint32_t power = 1) {
        IntPoly f(nvars);
        Exponents e(nvars, 0);
        e.at(i) = power;
        f.terms_[e] = 1;
        return f;
    }

    std::size_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const Exponents& e, const BigInt& c) {
        if (e.size() != nvars_) detail::fail_invalid("IntPoly: exponent length mismatch");
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    IntPoly& operator+=(const IntPoly& o) {
        check(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    IntPoly& operator-=(const IntPoly& o) {
        check(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
    friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
    friend IntPoly operator-(IntPoly a) {
        for (auto& [e, c] : a.terms_) c = -c;
        return a;
    }

    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        a.check(b);
        IntPoly out(a.nvars_);
        Exponents e(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }
    IntPoly& operator*=(const BigInt& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    IntPoly pow(std::uint64_t n) const {
        IntPoly result = constant(nvars_, 1), base = *this;
        while (n) {
            if (n & 1) result = result * base;
            n >>= 1;
            if (n) base = base * base;
        }
        return result;
    }

    /// Divide every coefficient by d, failing unless the division is exact.
    IntPoly exact_div(const BigInt& d) const {
        IntPoly out(nvars_);
        for (const auto& [e, c] : terms_) {
            BigInt q, r;
            boost::multiprecision::divide_qr(c, d, q, r);
            if (r != 0) detail::fail_check("IntPoly: inexact division");
            out.terms_.emplace(e, q);
        }
        return out;
    }

    /// Substitute variable i -> arg(i) for polynomials in another variable set.
    IntPoly substitute(const std::vector<IntPoly>& args) const {
        if (args.size() != nvars_) detail::fail_invalid("IntPoly::substitute: arity mismatch");
        const std::size_t target = args.empty() ? 0 : args[0].nvars_;
        IntPoly out(target);
        for (const auto& [e, c] : terms_) {
            IntPoly t = constant(target, c);
            for (std::size_t i = 0; i < nvars_; ++i)
                if (e[i]) t = t * args[i].pow(e[i]);
            out += t;
        }
        return out;
    }

    std::uint32_t total_degree() const {
        std::uint32_t d = 0;
        for (const auto& [e, c] : terms_) {
            std::uint32_t s = 0;
            for (auto x : e) s += x;
            d = std::max(d, s);
        }
        return d;
    }

    bool operator==(const IntPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

private:
    void check(const IntPoly& o) const {
        if (o.nvars_ != nvars_) detail::fail_invalid("IntPoly: variable count mismatch");
    }

    std::size_t nvars_ = 0;
    Terms terms_;
};

}  // namespace unipotent
