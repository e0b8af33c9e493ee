#pragma once

// Finite fields F_{p^m} arranged in a single append-only tower F_p = L_0 ⊂ L_1 ⊂ ... with
// degrees m_0 | m_1 | ..., used as a finite stand-in for an algebraic closure.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "unipotent/error.hpp"
#include "unipotent/linalg.hpp"
#include "unipotent/modular.hpp"
#include "unipotent/upoly.hpp"

namespace unipotent::fields {

inline constexpr int kMaxDegree = 128;
inline constexpr int kDefaultDegreeCap = 24;
inline constexpr std::uint64_t kDefaultSeed = 0x51f0u;

/// An element of one tower level: coefficients over F_p in the power basis of the level generator.
struct Fq {
    std::uint32_t level = 0;
    std::array<std::uint8_t, kMaxDegree> c{};

    auto operator<=>(const Fq&) const = default;
    bool operator==(const Fq&) const = default;
};

using FpMatrix = Matrix<std::uint32_t>;

struct FieldLevel {
    std::uint32_t p = 2;
    std::uint32_t index = 0;
    int degree = 1;
    std::vector<std::uint32_t> poly;                    // monic, size degree + 1
    std::vector<std::uint32_t> prev_generator_image;    // empty on level 0
    FpMatrix embed_from_prev;                           // degree x (previous degree)
    std::vector<FpMatrix> frobenius_powers;             // x -> x^{p^k}, k = 0..degree-1
};

/// Field context for a single level, usable with the generic linear algebra.
class FqField {
public:
    using elem = Fq;

    FqField() = default;
    explicit FqField(const FieldLevel* level) : L_(level) {}

    const FieldLevel& level() const { return *L_; }
    std::uint32_t p() const { return L_->p; }
    int degree() const { return L_->degree; }
    std::uint32_t index() const { return L_->index; }

    Fq zero() const {
        Fq z;
        z.level = L_->index;
        return z;
    }
    Fq one() const { return from_int(1); }
    Fq from_int(std::int64_t a) const {
        Fq z = zero();
        z.c[0] = static_cast<std::uint8_t>(mod(a, L_->p));
        return z;
    }
    Fq from_coeffs(const std::vector<std::int64_t>& coeffs) const {
        if (static_cast<int>(coeffs.size()) > L_->degree) detail::fail_invalid("Fq: too many coefficients");
        Fq z = zero();
        for (std::size_t i = 0; i < coeffs.size(); ++i) z.c[i] = static_cast<std::uint8_t>(mod(coeffs[i], L_->p));
        return z;
    }
    std::vector<std::uint32_t> coeffs(const Fq& a) const {
        return std::vector<std::uint32_t>(a.c.begin(), a.c.begin() + L_->degree);
    }
    Fq from_vector(const std::vector<std::uint32_t>& v) const {
        Fq z = zero();
        for (int i = 0; i < L_->degree; ++i) z.c[i] = static_cast<std::uint8_t>(v[i] % L_->p);
        return z;
    }
    /// The generator x of L = F_p[x]/(poly).
    Fq generator() const {
        if (L_->degree == 1) return from_int(mod(-static_cast<std::int64_t>(L_->poly[0]), L_->p));
        Fq z = zero();
        z.c[1] = 1;
        return z;
    }

    Fq add(const Fq& a, const Fq& b) const {
        Fq z = zero();
        for (int i = 0; i < L_->degree; ++i) z.c[i] = static_cast<std::uint8_t>((a.c[i] + b.c[i]) % L_->p);
        return z;
    }
    Fq sub(const Fq& a, const Fq& b) const {
        Fq z = zero();
        for (int i = 0; i < L_->degree; ++i)
            z.c[i] = static_cast<std::uint8_t>((a.c[i] + L_->p - b.c[i]) % L_->p);
        return z;
    }
    Fq neg(const Fq& a) const { return sub(zero(), a); }
    Fq scale(const Fq& a, std::uint32_t s) const {
        Fq z = zero();
        for (int i = 0; i < L_->degree; ++i) z.c[i] = static_cast<std::uint8_t>((a.c[i] * (s % L_->p)) % L_->p);
        return z;
    }
    Fq mul(const Fq& a, const Fq& b) const {
        const int m = L_->degree;
        const std::uint32_t p = L_->p;
        std::array<std::uint32_t, 2 * kMaxDegree> t{};
        for (int i = 0; i < m; ++i) {
            if (!a.c[i]) continue;
            for (int j = 0; j < m; ++j) t[i + j] += std::uint32_t(a.c[i]) * b.c[j];
        }
        for (int k = 2 * m - 2; k >= m; --k) {
            const std::uint32_t top = t[k] % p;
            if (!top) continue;
            for (int j = 0; j < m; ++j) t[k - m + j] += top * (p - L_->poly[j]);
            t[k] = 0;
        }
        Fq z = zero();
        for (int i = 0; i < m; ++i) z.c[i] = static_cast<std::uint8_t>(t[i] % p);
        return z;
    }
    bool is_zero(const Fq& a) const {
        for (int i = 0; i < L_->degree; ++i)
            if (a.c[i]) return false;
        return true;
    }
    bool eq(const Fq& a, const Fq& b) const { return a == b; }

    Fq pow(Fq a, std::uint64_t e) const {
        Fq r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return r;
    }

    Fq inv(const Fq& a) const {
        if (is_zero(a)) detail::fail_invalid("Fq: inverse of zero");
        // Extended Euclid in F_p[x]: s a + t f = 1.
        PrimeField fp(L_->p);
        upoly::Poly<PrimeField> r0(L_->poly.begin(), L_->poly.end()), r1 = coeffs(a);
        upoly::trim(fp, r1);
        upoly::Poly<PrimeField> s0, s1{1};
        while (upoly::degree(fp, r1) > 0) {
            auto [q, r] = upoly::divmod(fp, r0, r1);
            auto s = upoly::sub(fp, s0, upoly::mul(fp, q, s1));
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s);
        }
        auto c = fp.inv(r1[0]);
        auto s = upoly::scale(fp, s1, c);
        s.resize(L_->degree, 0);
        return from_vector(s);
    }

    /// x^{p^k} for any integer k (negative k gives the inverse Frobenius).
    Fq frobenius(const Fq& a, std::int64_t k) const {
        const auto kk = static_cast<std::size_t>(mod(k, L_->degree));
        if (kk == 0) return a;
        PrimeField fp(L_->p);
        return from_vector(linalg::apply(fp, L_->frobenius_powers[kk], coeffs(a)));
    }

    /// Number of elements, failing if it does not fit in 64 bits.
    std::uint64_t order() const { return static_cast<std::uint64_t>(ipow(L_->p, L_->degree)); }

    /// Elements enumerated by base-p digits of the index.
    Fq element(std::uint64_t idx) const {
        Fq z = zero();
        for (int i = 0; i < L_->degree; ++i) {
            z.c[i] = static_cast<std::uint8_t>(idx % L_->p);
            idx /= L_->p;
        }
        return z;
    }
    std::uint64_t index_of(const Fq& a) const {
        std::uint64_t idx = 0;
        for (int i = L_->degree; i-- > 0;) idx = idx * L_->p + a.c[i];
        return idx;
    }

    template <class Rng>
    Fq random(Rng& rng) const {
        std::uniform_int_distribution<std::uint32_t> d(0, L_->p - 1);
        Fq z = zero();
        for (int i = 0; i < L_->degree; ++i) z.c[i] = static_cast<std::uint8_t>(d(rng));
        return z;
    }

    std::string to_string(const Fq& a) const {
        std::string s = "[";
        for (int i = 0; i < L_->degree; ++i) {
            if (i) s += ",";
            s += std::to_string(a.c[i]);
        }
        return s + "]";
    }

private:
    const FieldLevel* L_ = nullptr;
};

namespace detail_fields {

using FpPoly = upoly::Poly<PrimeField>;

/// Ben-Or's test: f of degree m is irreducible iff gcd(x^{p^i} - x, f) = 1 for all i <= m/2.
/// Reducible candidates usually fail at a small i, which keeps random search cheap.
inline bool is_irreducible(const PrimeField& fp, const FpPoly& f) {
    const int m = upoly::degree(fp, f);
    if (m <= 0) return false;
    if (m == 1) return true;
    const FpPoly x = upoly::rem(fp, FpPoly{0, 1}, f);
    FpPoly h = x;
    for (int i = 1; i <= m / 2; ++i) {
        h = upoly::powmod(fp, h, fp.p, f);
        auto g = upoly::gcd(fp, f, upoly::sub(fp, h, x));
        if (upoly::degree(fp, g) != 0) return false;
    }
    return true;
}

inline std::vector<std::uint32_t> find_irreducible(std::uint32_t p, int m, std::uint64_t seed) {
    PrimeField fp(p);
    if (m == 1) return {0, 1};
    std::mt19937_64 rng(seed ^ (std::uint64_t(p) << 32) ^ std::uint64_t(m) * 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
    for (;;) {
        FpPoly f(m + 1);
        for (int i = 0; i < m; ++i) f[i] = d(rng);
        f[m] = 1;
        if (f[0] == 0) continue;
        if (is_irreducible(fp, f)) return std::vector<std::uint32_t>(f.begin(), f.end());
    }
}

/// h^{p^k} mod g by repeated p-th powers.
template <FieldContext K>
upoly::Poly<K> frobenius_iterate(const K& k, upoly::Poly<K> h, std::uint32_t p, int times,
                                 const upoly::Poly<K>& g) {
    for (int i = 0; i < times; ++i) h = upoly::powmod(k, h, p, g);
    return h;
}

/// Split a monic squarefree product of distinct linear factors over the level into its roots.
inline void split_linear(const FqField& K, const upoly::Poly<FqField>& g, std::mt19937_64& rng,
                         std::vector<Fq>& out) {
    const int d = upoly::degree(K, g);
    if (d <= 0) return;
    if (d == 1) {
        auto mg = upoly::monic(K, g);
        out.push_back(K.neg(mg[0]));
        return;
    }
    const std::uint32_t p = K.p();
    const int m = K.degree();
    for (;;) {
        upoly::Poly<FqField> t{K.random(rng), K.one()};
        upoly::Poly<FqField> w;
        if (p == 2) {
            upoly::Poly<FqField> ax{K.zero(), K.random(rng)};
            upoly::Poly<FqField> term = upoly::rem(K, ax, g), acc = term;
            for (int i = 1; i < m; ++i) {
                term = upoly::mulmod(K, term, term, g);
                acc = upoly::add(K, acc, term);
            }
            w = acc;
        } else {
            upoly::Poly<FqField> term = upoly::rem(K, t, g), norm = term;
            for (int i = 1; i < m; ++i) {
                term = upoly::powmod(K, term, p, g);
                norm = upoly::mulmod(K, norm, term, g);
            }
            w = upoly::sub(K, upoly::powmod(K, norm, (p - 1) / 2, g), upoly::constant(K, K.one()));
        }
        auto f = upoly::gcd(K, g, w);
        const int df = upoly::degree(K, f);
        if (df > 0 && df < d) {
            split_linear(K, f, rng, out);
            split_linear(K, upoly::divmod(K, g, f).first, rng, out);
            return;
        }
    }
}

/// Distinct roots lying in the level itself, sorted.
inline std::vector<Fq> distinct_roots_in_level(const FqField& K, const upoly::Poly<FqField>& f) {
    auto g = upoly::monic(K, f);
    if (upoly::degree(K, g) <= 0) return {};
    upoly::Poly<FqField> x{K.zero(), K.one()};
    auto xq = frobenius_iterate(K, upoly::rem(K, x, g), K.p(), K.degree(), g);
    auto lin = upoly::gcd(K, g, upoly::sub(K, xq, upoly::rem(K, x, g)));
    std::vector<Fq> out;
    std::mt19937_64 rng(0x2b7e1516u);
    split_linear(K, lin, rng, out);
    std::sort(out.begin(), out.end());
    return out;
}

/// Degrees i of the distinct irreducible factors of f over the level.
inline std::set<int> factor_degrees(const FqField& K, const upoly::Poly<FqField>& f) {
    std::set<int> degs;
    auto rest = upoly::monic(K, f);
    upoly::Poly<FqField> x{K.zero(), K.one()};
    auto h = upoly::rem(K, x, rest);
    for (int i = 1; upoly::degree(K, rest) > 0; ++i) {
        h = frobenius_iterate(K, h, K.p(), K.degree(), rest);
        auto g = upoly::gcd(K, rest, upoly::sub(K, h, upoly::rem(K, x, rest)));
        if (upoly::degree(K, g) > 0) {
            degs.insert(i);
            for (;;) {
                auto d = upoly::gcd(K, rest, g);
                if (upoly::degree(K, d) <= 0) break;
                rest = upoly::divmod(K, rest, d).first;
            }
            if (upoly::degree(K, rest) > 0) h = upoly::rem(K, h, rest);
        }
    }
    return degs;
}

}  // namespace detail_fields

/// Append-only chain of finite fields over F_p. Levels are created on demand and never change,
/// so references to levels stay valid for the lifetime of the tower.
class FieldTower {
public:
    explicit FieldTower(std::int64_t p, int degree_cap = kDefaultDegreeCap, std::uint64_t seed = kDefaultSeed)
        : p_(static_cast<std::uint32_t>(PrimeField(p).p)), cap_(degree_cap), seed_(seed) {
        if (degree_cap < 1 || degree_cap > kMaxDegree) detail::fail_invalid("FieldTower: degree cap out of range");
        append_level_locked(1, std::vector<std::uint32_t>{0, 1}, {});
    }

    FieldTower(const FieldTower&) = delete;
    FieldTower& operator=(const FieldTower&) = delete;

    std::uint32_t p() const { return p_; }
    int degree_cap() const { return cap_; }
    std::uint64_t seed() const { return seed_; }

    std::size_t num_levels() const {
        std::lock_guard lock(mu_);
        return levels_.size();
    }
    const FieldLevel& level(std::size_t i) const {
        std::lock_guard lock(mu_);
        if (i >= levels_.size()) detail::fail_invalid("FieldTower: no such level");
        return *levels_[i];
    }
    FqField field(std::size_t i) const { return FqField(&level(i)); }
    FqField prime_field() const { return field(0); }

    /// Smallest level containing F_{p^d}, creating one of degree lcm(top, d) if needed.
    std::size_t level_containing_degree(int d) {
        if (d < 1) detail::fail_invalid("level_containing_degree: d must be positive");
        std::lock_guard lock(mu_);
        for (const auto& L : levels_)
            if (L->degree % d == 0) return L->index;
        const int top = levels_.back()->degree;
        const long target = std::lcm(static_cast<long>(top), static_cast<long>(d));
        if (target > cap_)
            detail::fail_cap("field degree " + std::to_string(target) + " exceeds cap " + std::to_string(cap_));
        return create_level_locked(static_cast<int>(target));
    }

    /// Smallest level (at or above f's level) containing a root of f.
    std::size_t level_with_root(const upoly::Poly<FqField>& f, std::size_t base_level) {
        auto K = field(base_level);
        if (upoly::degree(K, f) < 1) detail::fail_invalid("level_with_root: f must be non-constant");
        const auto degs = detail_fields::factor_degrees(K, f);
        const int m = K.degree();
        {
            std::lock_guard lock(mu_);
            for (const auto& L : levels_) {
                if (L->index < base_level) continue;
                for (int i : degs)
                    if (L->degree % (m * i) == 0) return L->index;
            }
        }
        int best = 0;
        for (int i : degs) {
            const int t = std::lcm(level(num_levels() - 1).degree, m * i);
            if (best == 0 || t < best) best = t;
        }
        return level_containing_degree(best);
    }

    /// Smallest level index for which pred holds, extending by degree multiples of the top level.
    std::size_t extend_until(const std::function<bool(std::size_t)>& pred) {
        for (std::size_t i = 0; i < num_levels(); ++i)
            if (pred(i)) return i;
        for (;;) {
            const int top = level(num_levels() - 1).degree;
            if (2 * top > cap_) detail::fail_cap("extend_until: predicate not satisfied within degree cap");
            const auto idx = level_containing_degree(2 * top);
            if (pred(idx)) return idx;
        }
    }

    /// Image of x in a level at or above its own.
    Fq embed(const Fq& x, std::size_t target) const {
        if (target < x.level) detail::fail_invalid("embed: target level below source level");
        Fq cur = x;
        PrimeField fp(p_);
        for (std::size_t l = x.level + 1; l <= target; ++l) {
            const auto& L = level(l);
            FqField Kprev = field(l - 1);
            cur = FqField(&L).from_vector(linalg::apply(fp, L.embed_from_prev, Kprev.coeffs(cur)));
        }
        return cur;
    }

    bool equal(const Fq& a, const Fq& b) const {
        const std::size_t t = std::max(a.level, b.level);
        return embed(a, t) == embed(b, t);
    }

    Fq frobenius(const Fq& x, std::int64_t k) const { return field(x.level).frobenius(x, k); }

    /// All roots of f (with multiplicity) in the smallest level containing every root, sorted.
    std::vector<Fq> roots(const upoly::Poly<FqField>& f, std::size_t base_level) {
        auto K = field(base_level);
        if (upoly::degree(K, f) < 0) detail::fail_invalid("roots: zero polynomial");
        if (upoly::degree(K, f) == 0) return {};
        const auto degs = detail_fields::factor_degrees(K, f);
        long split = K.degree();
        for (int i : degs) split = std::lcm(split, static_cast<long>(K.degree()) * i);
        if (split > cap_)
            detail::fail_cap("splitting field degree " + std::to_string(split) + " exceeds cap " +
                             std::to_string(cap_));
        const auto target = level_containing_degree(static_cast<int>(split));
        auto T = field(target);
        upoly::Poly<FqField> g;
        for (const auto& c : f) g.push_back(embed(c, target));
        upoly::trim(T, g);
        std::vector<Fq> out;
        for (const auto& r : detail_fields::distinct_roots_in_level(T, g)) {
            auto h = g;
            for (;;) {
                auto [q, rm] = upoly::divmod(T, h, upoly::linear(T, r));
                if (!rm.empty()) break;
                out.push_back(r);
                h = std::move(q);
            }
        }
        return out;
    }

    /// Distinct roots of f lying in the given level (no extension).
    std::vector<Fq> roots_in_level(const upoly::Poly<FqField>& f, std::size_t lvl) const {
        auto K = field(lvl);
        upoly::Poly<FqField> g;
        for (const auto& c : f) g.push_back(embed(c, lvl));
        upoly::trim(K, g);
        return detail_fields::distinct_roots_in_level(K, g);
    }

    nlohmann::json level_descriptor(std::size_t i) const {
        const auto& L = level(i);
        return {{"p", p_}, {"degree", L.degree}, {"poly", L.poly}};
    }

    nlohmann::json element_to_json(const Fq& x) const {
        return {{"level", x.level}, {"coeffs", field(x.level).coeffs(x)}};
    }

    Fq element_from_json(const nlohmann::json& j) const {
        const auto lvl = j.at("level").get<std::size_t>();
        auto K = field(lvl);
        return K.from_coeffs(j.at("coeffs").get<std::vector<std::int64_t>>());
    }

    nlohmann::json to_json() const {
        nlohmann::json levels = nlohmann::json::array();
        for (std::size_t i = 0; i < num_levels(); ++i) {
            const auto& L = level(i);
            levels.push_back({{"degree", L.degree}, {"poly", L.poly}, {"embedding", L.prev_generator_image}});
        }
        return {{"p", p_}, {"degree_cap", cap_}, {"seed", seed_}, {"levels", levels}};
    }

    /// Rebuild a serialized tower, re-checking irreducibility and the embeddings.
    static std::unique_ptr<FieldTower> from_json(const nlohmann::json& j) {
        auto t = std::make_unique<FieldTower>(j.at("p").get<std::int64_t>(), j.at("degree_cap").get<int>(),
                                              j.at("seed").get<std::uint64_t>());
        const auto& levels = j.at("levels");
        for (std::size_t i = 1; i < levels.size(); ++i) {
            const auto& lj = levels[i];
            std::lock_guard lock(t->mu_);
            const int deg = lj.at("degree").get<int>();
            auto poly = lj.at("poly").get<std::vector<std::uint32_t>>();
            auto img = lj.at("embedding").get<std::vector<std::uint32_t>>();
            PrimeField fp(t->p_);
            if (static_cast<int>(poly.size()) != deg + 1 || poly.back() != 1 ||
                !detail_fields::is_irreducible(fp, upoly::Poly<PrimeField>(poly.begin(), poly.end())))
                detail::fail_invalid("FieldTower::from_json: level polynomial is not monic irreducible");
            if (deg % t->levels_.back()->degree != 0)
                detail::fail_invalid("FieldTower::from_json: degrees must form a divisibility chain");
            t->append_level_locked(deg, poly, img);
        }
        return t;
    }

private:
    std::size_t create_level_locked(int degree) {
        auto poly = detail_fields::find_irreducible(p_, degree, seed_);
        return append_level_locked(degree, poly, std::nullopt);
    }

    std::size_t append_level_locked(int degree, const std::vector<std::uint32_t>& poly,
                                    std::optional<std::vector<std::uint32_t>> image) {
        auto L = std::make_unique<FieldLevel>();
        L->p = p_;
        L->index = static_cast<std::uint32_t>(levels_.size());
        L->degree = degree;
        L->poly = poly;
        FqField K(L.get());
        PrimeField fp(p_);

        // Frobenius matrix: column j holds (x^j)^p.
        FpMatrix frob = linalg::zeros(fp, degree, degree);
        {
            auto xp = K.pow(K.generator(), p_);
            Fq col = K.one();
            for (int j = 0; j < degree; ++j) {
                frob.set_column(j, K.coeffs(col));
                col = K.mul(col, xp);
            }
        }
        L->frobenius_powers.push_back(linalg::identity(fp, degree));
        for (int k = 1; k < degree; ++k)
            L->frobenius_powers.push_back(linalg::multiply(fp, frob, L->frobenius_powers.back()));

        if (!levels_.empty()) {
            const FieldLevel& prev = *levels_.back();
            upoly::Poly<FqField> g;
            for (auto c : prev.poly) g.push_back(K.from_int(c));
            Fq root;
            if (image) {
                root = K.from_vector(*image);
                if (!K.is_zero(upoly::eval(K, g, root)))
                    detail::fail_invalid("FieldTower: stored embedding does not map to a root");
            } else {
                auto rts = detail_fields::distinct_roots_in_level(K, g);
                if (rts.empty()) detail::fail_check("FieldTower: previous level does not embed");
                root = rts.front();
            }
            L->prev_generator_image = K.coeffs(root);
            L->embed_from_prev = linalg::zeros(fp, degree, prev.degree);
            Fq col = K.one();
            for (int j = 0; j < prev.degree; ++j) {
                L->embed_from_prev.set_column(j, K.coeffs(col));
                col = K.mul(col, root);
            }
        }
        levels_.push_back(std::move(L));
        return levels_.size() - 1;
    }

    std::uint32_t p_;
    int cap_;
    std::uint64_t seed_;
    mutable std::mutex mu_;
    std::deque<std::unique_ptr<FieldLevel>> levels_;
};

}  // namespace unipotent::fields
