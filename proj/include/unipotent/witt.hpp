#pragma once

// p-typical Witt vectors of finite length over F_q, Z/p^K and truncated polynomial rings.
//
// Addition, multiplication and negation go through the universal integer polynomials S_n, P_n,
// N_n obtained from the ghost equations w_n(S) = w_n(X) + w_n(Y), w_n(P) = w_n(X) w_n(Y),
// w_n(N) = -w_n(X), where w_n(Z) = sum_{i<=n} p^i Z_i^{p^{n-i}}.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "unipotent/error.hpp"
#include "unipotent/modular.hpp"
#include "unipotent/polynomial.hpp"
#include "unipotent/rings.hpp"

namespace unipotent::witt {

inline constexpr int kDefaultMaxLength = 4;
inline constexpr std::int64_t kMaxGhostDegree = 125;
inline constexpr int kCacheFormatVersion = 1;
inline constexpr const char* kCacheDirEnv = "UNIPOTENT_WITT_CACHE";

/// Polynomial with coefficients reduced modulo a fixed integer, ready for evaluation.
struct CompiledPoly {
    std::vector<std::vector<std::uint32_t>> exps;
    std::vector<std::uint64_t> coeffs;
    std::vector<std::uint32_t> max_exp;
};

inline CompiledPoly compile(const IntPoly& f, std::uint64_t modulus) {
    CompiledPoly c;
    c.max_exp.assign(f.nvars(), 0);
    const BigInt m = modulus;
    for (const auto& [e, coef] : f.terms()) {
        BigInt r = coef % m;
        if (r < 0) r += m;
        if (r == 0) continue;
        c.exps.push_back(e);
        c.coeffs.push_back(static_cast<std::uint64_t>(r));
        for (std::size_t i = 0; i < e.size(); ++i) c.max_exp[i] = std::max(c.max_exp[i], e[i]);
    }
    return c;
}

/// The universal sum, product and negation polynomials for one (p, r).
class WittPolynomials {
public:
    WittPolynomials(std::uint32_t p, int r) : p_(p), r_(r) {}

    /// Shared instance, computed once per process and optionally cached on disk
    /// (directory from the UNIPOTENT_WITT_CACHE environment variable).
    static std::shared_ptr<const WittPolynomials> get(std::int64_t p, int r, int max_length = kDefaultMaxLength) {
        validate(p, r, max_length);
        static std::mutex mu;
        static std::map<std::pair<std::int64_t, int>, std::shared_ptr<const WittPolynomials>> registry;
        std::lock_guard lock(mu);
        auto& slot = registry[{p, r}];
        if (slot) return slot;
        std::filesystem::path file;
        if (const char* dir = std::getenv(kCacheDirEnv); dir && *dir)
            file = std::filesystem::path(dir) / ("witt_p" + std::to_string(p) + "_r" + std::to_string(r) + ".json");
        if (!file.empty() && std::filesystem::exists(file)) {
            try {
                std::ifstream in(file);
                auto loaded = std::make_shared<WittPolynomials>(from_json(nlohmann::json::parse(in)));
                if (loaded->p_ == static_cast<std::uint32_t>(p) && loaded->r_ == r && loaded->spot_check(8)) {
                    slot = loaded;
                    return slot;
                }
            } catch (const std::exception&) {
                // fall through and recompute
            }
        }
        auto fresh = std::make_shared<WittPolynomials>(compute(static_cast<std::uint32_t>(p), r));
        if (!file.empty()) fresh->save(file);
        slot = fresh;
        return slot;
    }

    static void validate(std::int64_t p, int r, int max_length) {
        if (!is_prime(p)) detail::fail_invalid("Witt: p must be prime");
        if (r < 1) detail::fail_invalid("Witt: length must be positive");
        if (r > max_length)
            detail::fail_cap("Witt length " + std::to_string(r) + " exceeds cap " + std::to_string(max_length));
        if (ipow(p, r - 1) > kMaxGhostDegree) detail::fail_cap("Witt polynomials too large for this (p, r)");
    }

    static WittPolynomials compute(std::uint32_t p, int r) {
        WittPolynomials w(p, r);
        const std::size_t nv = 2 * static_cast<std::size_t>(r);
        auto ghost = [&](int n, std::size_t offset, std::size_t nvars) {
            IntPoly g(nvars);
            for (int i = 0; i <= n; ++i) {
                std::vector<std::uint32_t> e(nvars, 0);
                e[offset + i] = static_cast<std::uint32_t>(ipow(p, n - i));
                g.add_term(e, BigInt(ipow(p, i)));
            }
            return g;
        };
        std::vector<IntPoly> ps, pp, pn;  // running powers S_i^{p^{n-i}}, etc.
        for (int n = 0; n < r; ++n) {
            for (auto& f : ps) f = f.pow(p);
            for (auto& f : pp) f = f.pow(p);
            for (auto& f : pn) f = f.pow(p);
            IntPoly s = ghost(n, 0, nv) + ghost(n, r, nv);
            IntPoly m = ghost(n, 0, nv) * ghost(n, r, nv);
            IntPoly g = -ghost(n, 0, r);
            for (int i = 0; i < n; ++i) {
                BigInt pi = ipow(p, i);
                IntPoly a = ps[i], b = pp[i], c = pn[i];
                s -= (a *= pi);
                m -= (b *= pi);
                g -= (c *= pi);
            }
            const BigInt pn_pow = ipow(p, n);
            w.S_.push_back(s.exact_div(pn_pow));
            w.P_.push_back(m.exact_div(pn_pow));
            w.N_.push_back(g.exact_div(pn_pow));
            ps.push_back(w.S_.back());
            pp.push_back(w.P_.back());
            pn.push_back(w.N_.back());
        }
        return w;
    }

    std::uint32_t p() const { return p_; }
    int length() const { return r_; }
    const IntPoly& sum(int n) const { return S_.at(n); }
    const IntPoly& product(int n) const { return P_.at(n); }
    const IntPoly& negation(int n) const { return N_.at(n); }

    /// S, P, N with coefficients reduced mod `modulus`; cached per modulus.
    struct Compiled {
        std::vector<CompiledPoly> S, P, N;
    };
    const Compiled& compiled(std::uint64_t modulus) const {
        std::lock_guard lock(mu_);
        auto it = compiled_.find(modulus);
        if (it != compiled_.end()) return it->second;
        Compiled c;
        for (int n = 0; n < r_; ++n) {
            c.S.push_back(compile(S_[n], modulus));
            c.P.push_back(compile(P_[n], modulus));
            c.N.push_back(compile(N_[n], modulus));
        }
        return compiled_.emplace(modulus, std::move(c)).first->second;
    }

    /// Exact check of the ghost identities as integer polynomials.
    bool verify_ghost_identities() const {
        const std::size_t nv = 2 * static_cast<std::size_t>(r_);
        std::vector<IntPoly> xs, ys;
        for (int i = 0; i < r_; ++i) {
            xs.push_back(IntPoly::variable(nv, i));
            ys.push_back(IntPoly::variable(nv, r_ + i));
        }
        auto ghost = [&](const std::vector<IntPoly>& z, int n) {
            IntPoly g(z[0].nvars());
            for (int i = 0; i <= n; ++i) {
                IntPoly t = z[i].pow(ipow(p_, n - i));
                g += (t *= BigInt(ipow(p_, i)));
            }
            return g;
        };
        for (int n = 0; n < r_; ++n) {
            if (!(ghost(S_, n) == ghost(xs, n) + ghost(ys, n))) return false;
            if (!(ghost(P_, n) == ghost(xs, n) * ghost(ys, n))) return false;
            std::vector<IntPoly> xr;
            for (int i = 0; i < r_; ++i) xr.push_back(IntPoly::variable(r_, i));
            if (!(ghost(N_, n) == -ghost(xr, n))) return false;
        }
        return true;
    }

    /// Ghost identities at random integer points modulo a large prime.
    bool spot_check(int trials) const {
        const std::int64_t q = 2305843009213693951LL;  // 2^61 - 1
        std::mt19937_64 rng(0xc0ffee);
        auto eval = [&](const IntPoly& f, const std::vector<std::int64_t>& v) {
            std::int64_t acc = 0;
            for (const auto& [e, c] : f.terms()) {
                BigInt cr = c % q;
                if (cr < 0) cr += q;
                std::int64_t t = static_cast<std::int64_t>(cr);
                for (std::size_t i = 0; i < e.size(); ++i)
                    if (e[i]) t = mulmod(t, powmod(v[i], e[i], q), q);
                acc = (acc + t) % q;
            }
            return acc;
        };
        auto ghost = [&](const std::vector<std::int64_t>& z, int n) {
            std::int64_t g = 0;
            for (int i = 0; i <= n; ++i)
                g = (g + mulmod(powmod(p_, i, q), powmod(z[i], static_cast<std::uint64_t>(ipow(p_, n - i)), q), q)) % q;
            return g;
        };
        for (int t = 0; t < trials; ++t) {
            std::vector<std::int64_t> v(2 * r_);
            for (auto& x : v) x = static_cast<std::int64_t>(rng() % q);
            std::vector<std::int64_t> xs(v.begin(), v.begin() + r_), ys(v.begin() + r_, v.end());
            std::vector<std::int64_t> s, m, ng;
            for (int n = 0; n < r_; ++n) {
                s.push_back(eval(S_[n], v));
                m.push_back(eval(P_[n], v));
                ng.push_back(eval(N_[n], xs));
            }
            for (int n = 0; n < r_; ++n) {
                if (ghost(s, n) != (ghost(xs, n) + ghost(ys, n)) % q) return false;
                if (ghost(m, n) != mulmod(ghost(xs, n), ghost(ys, n), q)) return false;
                if ((ghost(ng, n) + ghost(xs, n)) % q != 0) return false;
            }
        }
        return true;
    }

    nlohmann::json to_json() const {
        auto polys = [](const std::vector<IntPoly>& fs) {
            nlohmann::json out = nlohmann::json::array();
            for (const auto& f : fs) {
                nlohmann::json terms = nlohmann::json::array();
                for (const auto& [e, c] : f.terms()) terms.push_back({{"e", e}, {"c", c.str()}});
                out.push_back({{"nvars", f.nvars()}, {"terms", terms}});
            }
            return out;
        };
        return {{"format", "unipotent-witt-polynomials"}, {"version", kCacheFormatVersion}, {"p", p_},
                {"r", r_},      {"S", polys(S_)},
                {"P", polys(P_)}, {"N", polys(N_)}};
    }

    static WittPolynomials from_json(const nlohmann::json& j) {
        if (j.at("format") != "unipotent-witt-polynomials" || j.at("version") != kCacheFormatVersion)
            detail::fail_invalid("Witt polynomial cache: unknown format or version");
        WittPolynomials w(j.at("p").get<std::uint32_t>(), j.at("r").get<int>());
        auto polys = [](const nlohmann::json& arr) {
            std::vector<IntPoly> out;
            for (const auto& fj : arr) {
                IntPoly f(fj.at("nvars").get<std::size_t>());
                for (const auto& t : fj.at("terms"))
                    f.add_term(t.at("e").get<std::vector<std::uint32_t>>(), BigInt(t.at("c").get<std::string>()));
                out.push_back(std::move(f));
            }
            return out;
        };
        w.S_ = polys(j.at("S"));
        w.P_ = polys(j.at("P"));
        w.N_ = polys(j.at("N"));
        if (static_cast<int>(w.S_.size()) != w.r_ || w.P_.size() != w.S_.size() || w.N_.size() != w.S_.size())
            detail::fail_invalid("Witt polynomial cache: wrong number of polynomials");
        return w;
    }

    void save(const std::filesystem::path& file) const {
        std::error_code ec;
        std::filesystem::create_directories(file.parent_path(), ec);
        auto tmp = file;
        tmp += ".tmp";
        {
            std::ofstream out(tmp);
            if (!out) return;
            out << to_json().dump();
        }
        std::filesystem::rename(tmp, file, ec);
    }

    WittPolynomials(const WittPolynomials& o) : p_(o.p_), r_(o.r_), S_(o.S_), P_(o.P_), N_(o.N_) {}
    WittPolynomials(WittPolynomials&& o) noexcept
        : p_(o.p_), r_(o.r_), S_(std::move(o.S_)), P_(std::move(o.P_)), N_(std::move(o.N_)) {}

private:
    std::uint32_t p_;
    int r_;
    std::vector<IntPoly> S_, P_, N_;
    mutable std::mutex mu_;
    mutable std::map<std::uint64_t, Compiled> compiled_;
};

template <class R>
struct WittVector {
    std::vector<typename R::elem> a;
    bool operator==(const WittVector&) const = default;
};

/// W_r(R) for a base ring R (FqField, NilpotentPolyRing or ZmodRing).
template <class R>
class WittRing {
public:
    using elem = WittVector<R>;
    using base_elem = typename R::elem;

    WittRing(R base, int r, int max_length = kDefaultMaxLength)
        : base_(std::move(base)), r_(r), p_(ring_prime(base_)),
          polys_(WittPolynomials::get(p_, r, max_length)), compiled_(&polys_->compiled(ring_modulus(base_))) {}

    const R& base() const { return base_; }
    int length() const { return r_; }
    std::uint32_t p() const { return p_; }

    elem zero() const { return elem{std::vector<base_elem>(r_, base_.zero())}; }
    elem one() const { return teichmuller(base_.one()); }
    elem from_components(std::vector<base_elem> a) const {
        if (static_cast<int>(a.size()) != r_) detail::fail_invalid("WittRing: wrong number of components");
        return elem{std::move(a)};
    }

    elem teichmuller(const base_elem& x) const {
        auto z = zero();
        z.a[0] = x;
        return z;
    }

    elem add(const elem& x, const elem& y) const { return apply2(compiled_->S, x, y); }
    elem mul(const elem& x, const elem& y) const { return apply2(compiled_->P, x, y); }
    elem neg(const elem& x) const {
        check(x);
        elem out = zero();
        auto powers = power_table(x.a, compiled_->N);
        for (int n = 0; n < r_; ++n) out.a[n] = eval(compiled_->N[n], powers);
        return out;
    }
    elem sub(const elem& x, const elem& y) const { return add(x, neg(y)); }
    bool is_zero(const elem& x) const {
        for (const auto& c : x.a)
            if (!base_.is_zero(c)) return false;
        return true;
    }
    bool eq(const elem& x, const elem& y) const {
        for (int n = 0; n < r_; ++n)
            if (!base_.eq(x.a[n], y.a[n])) return false;
        return true;
    }

    /// n * x by double-and-add.
    elem times_int(elem x, std::int64_t n) const {
        if (n < 0) return times_int(neg(x), -n);
        elem acc = zero();
        while (n) {
            if (n & 1) acc = add(acc, x);
            n >>= 1;
            if (n) x = add(x, x);
        }
        return acc;
    }

    /// Componentwise p-th power; equals the Witt Frobenius because R is an F_p-algebra.
    elem frobenius(const elem& x) const {
        require_fp_algebra();
        elem out = x;
        for (auto& c : out.a) c = base_pow(c, p_);
        return out;
    }

    elem verschiebung(const elem& x) const {
        check(x);
        elem out = zero();
        for (int n = 1; n < r_; ++n) out.a[n] = x.a[n - 1];
        return out;
    }

    /// Ghost components w_0..w_{r-1} computed in the base ring.
    std::vector<base_elem> ghost(const elem& x) const {
        std::vector<base_elem> g;
        for (int n = 0; n < r_; ++n) {
            base_elem acc = base_.zero();
            for (int i = 0; i <= n; ++i) {
                auto t = base_pow(x.a[i], static_cast<std::uint64_t>(ipow(p_, n - i)));
                acc = base_.add(acc, mul_int(t, ipow(p_, i)));
            }
            g.push_back(acc);
        }
        return g;
    }

    nlohmann::json to_json(const elem& x) const {
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : x.a) comps.push_back(elem_to_json(base_, c));
        return {{"base", ring_descriptor(base_)}, {"components", comps}};
    }

private:
    void check(const elem& x) const {
        if (static_cast<int>(x.a.size()) != r_) detail::fail_invalid("WittRing: length mismatch");
    }
    void require_fp_algebra() const {
        if (ring_modulus(base_) != p_) detail::fail_invalid("Witt Frobenius as p-th power needs an F_p-algebra");
    }

    base_elem base_pow(base_elem a, std::uint64_t e) const {
        base_elem r = base_.one();
        while (e) {
            if (e & 1) r = base_.mul(r, a);
            e >>= 1;
            if (e) a = base_.mul(a, a);
        }
        return r;
    }
    base_elem mul_int(const base_elem& a, std::int64_t n) const {
        return base_.mul(a, base_.from_int(static_cast<std::int64_t>(mod(n, static_cast<std::int64_t>(ring_modulus(base_))))));
    }

    std::vector<std::vector<base_elem>> power_table(const std::vector<base_elem>& vals,
                                                    const std::vector<CompiledPoly>& polys) const {
        std::vector<std::uint32_t> need(vals.size(), 0);
        for (const auto& f : polys)
            for (std::size_t i = 0; i < vals.size(); ++i) need[i] = std::max(need[i], f.max_exp[i]);
        std::vector<std::vector<base_elem>> pw(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            pw[i].push_back(base_.one());
            for (std::uint32_t e = 1; e <= need[i]; ++e) pw[i].push_back(base_.mul(pw[i].back(), vals[i]));
        }
        return pw;
    }

    base_elem eval(const CompiledPoly& f, const std::vector<std::vector<base_elem>>& pw) const {
        base_elem acc = base_.zero();
        for (std::size_t t = 0; t < f.coeffs.size(); ++t) {
            base_elem term = base_.from_int(static_cast<std::int64_t>(f.coeffs[t]));
            bool dead = false;
            for (std::size_t i = 0; i < f.exps[t].size() && !dead; ++i) {
                const auto e = f.exps[t][i];
                if (!e) continue;
                if (base_.is_zero(pw[i][e])) dead = true;
                else term = base_.mul(term, pw[i][e]);
            }
            if (!dead) acc = base_.add(acc, term);
        }
        return acc;
    }

    elem apply2(const std::vector<CompiledPoly>& polys, const elem& x, const elem& y) const {
        check(x);
        check(y);
        std::vector<base_elem> vals(x.a);
        vals.insert(vals.end(), y.a.begin(), y.a.end());
        auto pw = power_table(vals, polys);
        elem out = zero();
        for (int n = 0; n < r_; ++n) out.a[n] = eval(polys[n], pw);
        return out;
    }

    R base_;
    int r_;
    std::uint32_t p_;
    std::shared_ptr<const WittPolynomials> polys_;
    const WittPolynomials::Compiled* compiled_;
};

/// Result of checking ([x+y] - [x] - [y]) [z] = 0 in W_r(F_p[x,y,z]/(x^p,y^p,z^p)).
struct WfIdentityReport {
    std::uint32_t p = 0;
    int r = 0;
    std::vector<std::string> n_components;
    std::vector<std::string> product_components;
    bool n_is_zero = false;
    bool n_first_component_zero = false;
    bool n_frobenius_zero = false;
    bool pass = false;

    nlohmann::json to_json() const {
        return {{"p", p},
                {"r", r},
                {"n", n_components},
                {"n_times_z", product_components},
                {"n_is_zero", n_is_zero},
                {"n_in_kernel_to_alpha_p", n_first_component_zero},
                {"n_in_W_F", n_frobenius_zero},
                {"pass", pass}};
    }
};

inline WfIdentityReport verify_wf_ring_identity(std::int64_t p, int r) {
    if (r < 2) detail::fail_invalid("verify_wf_ring_identity: r must be at least 2");
    const auto pc = static_cast<std::uint32_t>(p);
    NilpotentPolyRing R(p, {"x", "y", "z"}, {pc, pc, pc});
    WittRing<NilpotentPolyRing> W(R, r);
    const auto x = W.teichmuller(R.var(0)), y = W.teichmuller(R.var(1)), z = W.teichmuller(R.var(2));
    const auto n = W.sub(W.sub(W.teichmuller(R.add(R.var(0), R.var(1))), x), y);
    const auto prod = W.mul(n, z);
    WfIdentityReport rep;
    rep.p = pc;
    rep.r = r;
    for (const auto& c : n.a) rep.n_components.push_back(R.to_string(c));
    for (const auto& c : prod.a) rep.product_components.push_back(R.to_string(c));
    rep.n_is_zero = W.is_zero(n);
    rep.n_first_component_zero = R.is_zero(n.a[0]);
    rep.n_frobenius_zero = W.is_zero(W.frobenius(n));
    rep.pass = W.is_zero(prod);
    return rep;
}

}  // namespace unipotent::witt
