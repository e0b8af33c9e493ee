#pragma once

// The acceptance battery: one deterministic check per criterion, shared by the acceptance test
// and the `verify-paper` subcommand. Reports never contain timings so that two runs with the
// same seed are byte-identical; timings live next to the report.

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "unipotent/cohomology.hpp"
#include "unipotent/dieudonne.hpp"
#include "unipotent/fgl.hpp"
#include "unipotent/fields.hpp"
#include "unipotent/hopf.hpp"
#include "unipotent/moduli.hpp"
#include "unipotent/semilinear.hpp"
#include "unipotent/tensorops.hpp"
#include "unipotent/witt.hpp"

namespace unipotent::verify {

struct Criterion {
    int id = 0;
    std::string name;
    double limit_seconds = 0;
    bool checks_pass = false;
    std::string detail;
    double seconds = 0;
    bool pass() const { return checks_pass && seconds < limit_seconds; }
};

struct Options {
    std::uint64_t seed = 2024;
    bool quick = false;  // fewer random trials; the fixed examples are always run
};

namespace detail_verify {

inline std::string join(const std::vector<std::string>& parts, const char* sep = ", ") {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
    return s;
}

template <class T>
std::string list(const std::vector<T>& v) {
    std::vector<std::string> parts;
    for (const auto& x : v) parts.push_back(std::to_string(x));
    return "[" + join(parts, ",") + "]";
}

inline BigInt ghost(const std::vector<BigInt>& a, std::int64_t p, int n) {
    BigInt acc = 0;
    for (int i = 0; i <= n; ++i)
        acc += boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(i)) *
               boost::multiprecision::pow(a[static_cast<std::size_t>(i)], static_cast<unsigned>(ipow(p, n - i)));
    return acc;
}

inline BigInt eval(const IntPoly& f, const std::vector<BigInt>& v) {
    BigInt acc = 0;
    for (const auto& [e, c] : f.terms()) {
        BigInt t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) t *= boost::multiprecision::pow(v[i], e[i]);
        acc += t;
    }
    return acc;
}

inline std::int64_t mod(const BigInt& x, std::int64_t p) {
    BigInt r = x % p;
    if (r < 0) r += p;
    return static_cast<std::int64_t>(r);
}

inline semilinear::FqMatrix random_mixed(const fields::FqField& K, std::size_t d, std::mt19937_64& rng) {
    auto A = linalg::zeros(K, d, d);
    for (auto& x : A.data) x = rng() % 3 == 0 ? K.zero() : K.random(rng);
    return A;
}

inline fgl::Series random_coordinate(std::mt19937_64& rng, const zmod::Ring& Z, int D) {
    fgl::Series phi(static_cast<std::size_t>(D + 1), 0);
    do phi[1] = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(Z.n));
    while (phi[1] % Z.p == 0);
    for (int k = 2; k <= D; ++k) phi[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(Z.n));
    return phi;
}

// Collects failures; the detail string lists the first few.
struct Log {
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void note(const std::string& s) { notes.push_back(s); }
    std::string detail() const {
        std::string s = join(notes, "; ");
        if (!failures.empty()) {
            std::vector<std::string> head(failures.begin(), failures.begin() + std::min<std::size_t>(failures.size(), 4));
            s += (s.empty() ? "" : "; ") + std::string("failed: ") + join(head, "; ");
            if (failures.size() > head.size()) s += " (+" + std::to_string(failures.size() - head.size()) + " more)";
        }
        return s;
    }
};

}  // namespace detail_verify

/// 1. Witt sums and products of integer lifts, by the universal polynomials, have exactly the
/// ghost components of integer arithmetic; reduced mod p they agree with W_r(F_p).
inline detail_verify::Log witt_ghost(const Options& o) {
    using namespace detail_verify;
    Log log;
    std::mt19937_64 rng(o.seed ^ 0x101);
    const int pairs = o.quick ? 20 : 100;
    std::size_t compared = 0;
    for (std::int64_t p : {2, 3, 5}) {
        fields::FieldTower T(p);
        const auto K = T.prime_field();
        for (int r = 1; r <= 3; ++r) {
            const auto W = witt::WittPolynomials::get(p, r);
            const witt::WittRing<fields::FqField> WK(K, r);
            for (int t = 0; t < pairs; ++t) {
                std::vector<BigInt> v(2 * static_cast<std::size_t>(r));
                for (auto& c : v) c = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(4 * p * p)) - 2 * p * p;
                const std::vector<BigInt> x(v.begin(), v.begin() + r), y(v.begin() + r, v.end());
                std::vector<BigInt> s, m;
                for (int n = 0; n < r; ++n) {
                    s.push_back(eval(W->sum(n), v));
                    m.push_back(eval(W->product(n), v));
                }
                std::vector<fields::Fq> xk, yk;
                for (int i = 0; i < r; ++i) {
                    xk.push_back(K.from_int(mod(x[static_cast<std::size_t>(i)], p)));
                    yk.push_back(K.from_int(mod(y[static_cast<std::size_t>(i)], p)));
                }
                const auto X = WK.from_components(xk), Y = WK.from_components(yk);
                const auto sk = WK.add(X, Y), mk = WK.mul(X, Y);
                const std::string where = "p=" + std::to_string(p) + " r=" + std::to_string(r) + " pair " + std::to_string(t);
                for (int n = 0; n < r; ++n) {
                    log.expect(ghost(s, p, n) == ghost(x, p, n) + ghost(y, p, n), where + ": ghost of sum, n=" + std::to_string(n));
                    log.expect(ghost(m, p, n) == ghost(x, p, n) * ghost(y, p, n), where + ": ghost of product, n=" + std::to_string(n));
                    const auto i = static_cast<std::size_t>(n);
                    log.expect(sk.a[i] == K.from_int(mod(s[i], p)), where + ": W_r(F_p) sum, n=" + std::to_string(n));
                    log.expect(mk.a[i] == K.from_int(mod(m[i], p)), where + ": W_r(F_p) product, n=" + std::to_string(n));
                }
                ++compared;
            }
        }
    }
    log.note(std::to_string(compared) + " pairs over p in {2,3,5}, r <= 3");
    return log;
}

/// 2. ([x+y] - [x] - [y])[z] = 0 in W_r(F_p[x,y,z]/(x^p,y^p,z^p)).
inline detail_verify::Log wf_identity(const Options&) {
    detail_verify::Log log;
    for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {5, 2}}) {
        const auto rep = witt::verify_wf_ring_identity(p, r);
        log.expect(rep.pass, "(" + std::to_string(p) + "," + std::to_string(r) + ") nonzero");
        log.note("(" + std::to_string(p) + "," + std::to_string(r) + ") " + (rep.pass ? "zero" : "nonzero"));
    }
    return log;
}

/// 3. Semisimple/nilpotent splitting, stabilized fixed points and the tilt/perfection comparison.
inline detail_verify::Log semilinear_split(const Options& o) {
    using namespace detail_verify;
    using namespace semilinear;
    Log log;
    std::mt19937_64 rng(o.seed ^ 0x303);
    const int total = o.quick ? 20 : 100;
    std::size_t by_tower = 0, by_split_field = 0;
    for (int t = 0; t < total; ++t) {
        const std::int64_t p = t % 2 ? 3 : 2;
        fields::FieldTower tower(p, 24);
        const auto K = tower.prime_field();
        const std::size_t d = 1 + rng() % 6;
        const auto T = make_operator(0, random_mixed(K, d, rng));
        const std::string where = "op " + std::to_string(t) + " (p=" + std::to_string(p) + ", d=" + std::to_string(d) + ")";
        const auto s = ss_nilpotent_split(K, T);
        log.expect(s.Vs.cols + s.Vn.cols == d, where + ": dimensions");
        log.expect(linalg::rank(K, linalg::hconcat(K, s.Vs, s.Vn)) == d, where + ": not a direct sum");
        if (s.Vs.cols) log.expect(linalg::inverse(K, restrict_to(K, T.A, s.Vs)).has_value(), where + ": F not bijective on V_s");
        if (s.Vn.cols) {
            const auto AN = iterate_matrix(K, T.A, s.N);
            log.expect(linalg::is_zero(K, linalg::multiply(K, AN, sigma(K, s.Vn, s.N))), where + ": F not nilpotent on V_n");
        }
        std::size_t fixed = 0;
        try {
            fixed = fixed_space(tower, T).stabilized_dim;
            ++by_tower;
        } catch (const CapExceeded&) {
            const auto cert = fixed_space_split_field(tower, T);
            log.expect(cert.fixed_checked, where + ": split-field fixed space unchecked");
            fixed = cert.fixed_dim;
            ++by_split_field;
        }
        log.expect(fixed == s.Vs.cols, where + ": fixed dimension " + std::to_string(fixed));
        const auto w = tilt_and_perfection(K, T);
        log.expect(w.vs_dim == s.Vs.cols && w.rank == w.vs_dim, where + ": tilt->perfection not an isomorphism");
    }
    log.note(std::to_string(total) + " operators; fixed spaces via tower " + std::to_string(by_tower) + ", via splitting field " +
             std::to_string(by_split_field));
    return log;
}

/// 4. Profiniteness of the Hom(-, G_a) presets and the skew division algorithm.
inline detail_verify::Log profinite(const Options& o) {
    using namespace semilinear;
    detail_verify::Log log;
    for (std::int64_t p : {2, 3}) {
        fields::FieldTower t(p);
        const auto K = t.prime_field();
        const std::string at = " at p=" + std::to_string(p);
        log.expect(!is_profinite(K, hom_module_preset(K, "G_a")), "G_a" + at);
        for (int v = 1; v <= 3; ++v) log.expect(is_profinite(K, hom_module_preset(K, "alpha_p^v", v)), "alpha_{p^" + std::to_string(v) + "}" + at);
        log.expect(is_profinite(K, hom_module_preset(K, "Z/p")), "Z/pZ" + at);
        for (int r = 1; r <= 3; ++r) {
            log.expect(is_profinite(K, hom_module_preset(K, "W_r", r)), "W_" + std::to_string(r) + at);
            log.expect(is_profinite(K, hom_module_preset(K, "W_r[F]", r)), "W_" + std::to_string(r) + "[F]" + at);
        }
    }
    std::mt19937_64 rng(o.seed ^ 0x404);
    const int pairs = o.quick ? 50 : 200;
    for (int n = 0; n < pairs; ++n) {
        const std::int64_t p = std::array<std::int64_t, 3>{2, 3, 5}[static_cast<std::size_t>(n % 3)];
        fields::FieldTower t(p);
        const auto K = t.field(t.level_containing_degree(3));
        SkewRing R(K);
        std::vector<fields::Fq> fc(1 + rng() % 8), gc(1 + rng() % 5);
        for (auto& x : fc) x = K.random(rng);
        for (auto& x : gc) x = K.random(rng);
        if (K.is_zero(gc.back())) gc.back() = K.one();
        const auto f = R.from_coeffs(fc), g = R.from_coeffs(gc);
        const auto [q, r] = R.divide_right(f, g);
        log.expect(R.add(R.mul(q, g), r) == f && R.degree(r) < R.degree(g), "pair " + std::to_string(n));
    }
    log.note("presets for p in {2,3}; " + std::to_string(pairs) + " divisions");
    return log;
}

/// 5. D_{1,2} and D_{2,1}: relations, dimensions, duality certificate, strict homs.
inline detail_verify::Log dieudonne_structure(const Options&) {
    using namespace dieudonne;
    detail_verify::Log log;
    for (std::int64_t p : {2, 3}) {
        fields::FieldTower T(p);
        for (int r = 1; r <= 3; ++r) {
            const GaloisRing G(T.field(0), r);
            const auto A = make_Dmn(G, 1, 2), B = make_Dmn(G, 2, 1);
            const std::string at = " (p=" + std::to_string(p) + ", r=" + std::to_string(r) + ")";
            log.expect(relations_hold(A) && relations_hold(B), "FV = VF = p" + at);
            log.expect(dimension(A) == 2 && dimension(B) == 1, "dimensions" + at);
            const auto D = dual(A);
            auto P = gr::zeros(G, 3, 3);
            P(0, 2) = P(1, 1) = P(2, 0) = G.one();
            log.expect(is_morphism(D, B, P) && is_invertible(G, P), "explicit duality certificate" + at);
            const auto iso = find_isomorphism(D, B, hom_space(D, B));
            log.expect(iso && is_morphism(D, B, *iso) && is_invertible(G, *iso), "searched duality isomorphism" + at);
        }
        for (int deg : {1, 3}) {
            const GaloisRing G(T.field(T.level_containing_degree(deg)), 2);
            const auto H = hom_space(make_Dmn(G, 1, 2), make_Dmn(G, 2, 1), {true, 1});
            log.expect(H.length == 0, "strict Hom(D_{1,2}, D_{2,1}) over F_{" + std::to_string(p) + "^" + std::to_string(deg) + "}");
        }
    }
    log.note("p in {2,3}, r <= 3");
    return log;
}

/// 6. The a = 1 moduli: iso classes, the duality involution, self-dual census and a witness.
inline detail_verify::Log moduli(const Options& o) {
    using namespace dieudonne;
    detail_verify::Log log;
    {
        fields::FieldTower T(3);
        ModuliSpace S(T, T.level_containing_degree(6), 1);
        const auto& k = S.field();
        std::mt19937_64 rng(o.seed ^ 0x606);
        std::vector<ModuliModule> pts;
        std::vector<fields::Fq> zs, xs1, xs2;
        const std::size_t count = o.quick ? 8 : 20;
        while (pts.size() < count) {
            const auto a = k.random(rng), b = k.random(rng);
            if (k.is_zero(a) || k.is_zero(b)) continue;
            pts.push_back(S.moduli_submodule(a, b));
            zs.push_back(S.point(a, b).z);
            xs1.push_back(a);
            xs2.push_back(b);
        }
        std::size_t mismatches = 0;
        std::vector<std::size_t> parent(pts.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const bool iso = S.iso_test(pts[i], pts[j], false).isomorphic;
                if (iso != (zs[i] == zs[j])) ++mismatches;
                if (iso) parent[find(i)] = find(j);
            }
        std::set<std::size_t> roots;
        for (std::size_t i = 0; i < pts.size(); ++i) roots.insert(find(i));
        const std::set<fields::Fq> distinct(zs.begin(), zs.end());
        log.expect(mismatches == 0 && roots.size() == distinct.size(), "iso classes differ from z-classes");
        log.note(std::to_string(pts.size()) + " points: " + std::to_string(roots.size()) + " iso classes, " +
                 std::to_string(distinct.size()) + " z-classes");

        std::size_t involution = 0, certified = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto rep = S.duality_involution_check(xs1[i], xs2[i]);
            if (rep.involution_formula_holds) ++involution;
            if (rep.certificate_ok) ++certified;
        }
        log.expect(certified == pts.size(), "dual lattice certificate");
        log.expect(involution == pts.size(), "dual class equals 1/z on " + std::to_string(involution) + "/" + std::to_string(pts.size()) + " points");
        log.note("dual class = 1/z on " + std::to_string(involution) + "/" + std::to_string(pts.size()) + " points");

        const auto C = S.census(!o.quick);
        log.expect(C.self_dual_computed == 2, "p=3: " + std::to_string(C.self_dual_computed) + " self-dual classes, expected 2");
        if (!o.quick) log.expect(C.witness.has_value(), "p=3: no non-self-dual witness (exhaustive search found an isomorphism for every flagged class)");
        log.note("p=3 census: " + std::to_string(C.classes) + " classes, self-dual computed " + std::to_string(C.self_dual_computed) +
                 ", by z^2=1 " + std::to_string(C.self_dual_formula) +
                 (o.quick ? std::string() : ", confirmed non-self-dual " + std::to_string(C.flagged_confirmed)));
    }
    {
        fields::FieldTower T(2);
        ModuliSpace S(T, T.level_containing_degree(6), 1);
        const auto C = S.census(false);
        log.expect(C.self_dual_computed == 1, "p=2: " + std::to_string(C.self_dual_computed) + " self-dual classes, expected 1");
        log.note("p=2 census: " + std::to_string(C.classes) + " classes, self-dual computed " + std::to_string(C.self_dual_computed) +
                 ", by z^2=1 " + std::to_string(C.self_dual_formula));
    }
    return log;
}

/// 7. Betti numbers of minimal resolutions against (1+t)^g / (1-t^2)^s, and b_2 = C(g,2) + s.
inline detail_verify::Log betti(const Options&) {
    detail_verify::Log log;
    for (std::uint32_t p : {2u, 3u})
        for (const char* name : {"alpha_p", "alpha_p2", "alpha_p_squared", "alpha_p_cubed"}) {
            const auto A = cohomology::preset(name, p);
            const auto rep = cohomology::verify_genfunc(A, 8);
            const auto e1 = cohomology::verify_ext1_formula(A);
            const std::string at = std::string(name) + " p=" + std::to_string(p);
            log.expect(rep.pass, at + ": betti " + detail_verify::list(rep.betti));
            log.expect(e1.pass, at + ": b_2 = " + std::to_string(e1.b2));
            if (p == 3 && std::string(name) == "alpha_p_cubed") log.note(at + " betti " + detail_verify::list(rep.betti));
        }
    return log;
}

/// 8. Exactness of 0 -> A^g -> A -> k for the free associative algebra.
inline detail_verify::Log nc_oracle(const Options&) {
    detail_verify::Log log;
    for (int g = 1; g <= 3; ++g)
        for (int D = 1; D <= 6; ++D) {
            const auto rep = cohomology::nc_resolution_oracle(g, D);
            std::vector<std::size_t> expected(rep.ext_dims.size(), 0);
            expected[0] = 1;
            if (expected.size() > 1) expected[1] = static_cast<std::size_t>(g);
            const std::string at = "g=" + std::to_string(g) + " D=" + std::to_string(D);
            log.expect(rep.pass, at + ": not exact in degree " + std::to_string(rep.first_failure_degree));
            log.expect(rep.ext_dims == expected, at + ": ext " + detail_verify::list(rep.ext_dims));
            if (D == 6) log.note(at + " ext " + detail_verify::list(rep.ext_dims));
        }
    return log;
}

/// 9. Formal group laws: axioms, heights, and invariance of the height under coordinate changes.
inline detail_verify::Log formal_groups(const Options& o) {
    using namespace detail_verify;
    Log log;
    for (std::int64_t p : {2, 3}) {
        const zmod::Ring Z(p, 1);
        const auto add = fgl::additive(Z, 12), mul = fgl::multiplicative(Z, 12);
        log.expect(fgl::check(add).pass && fgl::check(mul).pass, "commutative axioms p=" + std::to_string(p));
        log.expect(fgl::height(mul).exact && fgl::height(mul).value == 1, "multiplicative height p=" + std::to_string(p));
        log.expect(!fgl::height(add).exact, "additive height p=" + std::to_string(p));
        for (int h = 1; h <= 3; ++h) {
            const auto F = fgl::lubin_tate(p, h, static_cast<int>(ipow(p, h)) + 1, 2);
            const auto ht = fgl::height(F);
            const std::string at = "Lubin-Tate p=" + std::to_string(p) + " h=" + std::to_string(h);
            log.expect(fgl::check(F).pass, at + " axioms");
            log.expect(ht.exact && ht.value == h, at + " height " + ht.to_string());
        }
    }
    for (int g = 1; g <= 3; ++g) {
        const auto rep = fgl::check(fgl::nc_standard(zmod::Ring(2, 1), g, 6, true));
        log.expect(rep.pass, "non-commutative g=" + std::to_string(g) + ": " + rep.violated);
    }
    std::mt19937_64 rng(o.seed ^ 0x909);
    const int changes = o.quick ? 5 : 20;
    const std::vector<fgl::CommFGL> laws{fgl::multiplicative(zmod::Ring(2, 1), 8), fgl::reduce_mod_p(fgl::lubin_tate(2, 2, 8)),
                                         fgl::reduce_mod_p(fgl::lubin_tate(3, 2, 10)), fgl::additive(zmod::Ring(3, 1), 9)};
    for (const auto& F : laws) {
        const auto h0 = fgl::height(F);
        for (int t = 0; t < changes; ++t) {
            const auto G = fgl::coordinate_change(F, random_coordinate(rng, F.Z, F.degree()));
            const auto h = fgl::height(G);
            log.expect(fgl::check(G).pass && h.exact == h0.exact && h.value == h0.value,
                       "coordinate change " + std::to_string(t) + " of a height " + h0.to_string() + " law");
        }
    }
    log.note("heights 1, >=, LT h=1..3 at p in {2,3}; " + std::to_string(changes) + " coordinate changes on " +
             std::to_string(laws.size()) + " laws");
    return log;
}

/// 10. Hopf axioms for every constructor and Cartier duality.
inline detail_verify::Log hopf_cartier(const Options&) {
    detail_verify::Log log;
    std::size_t checked = 0;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        std::vector<hopf::FiniteHopfAlgebra> all{hopf::make_group_scheme("alpha_p", p), hopf::make_group_scheme("alpha_{p^v}", p, 2),
                                                 hopf::make_group_scheme("mu_p", p), hopf::make_group_scheme("Z/pZ", p),
                                                 hopf::make_group_scheme("W_r", p, 2), hopf::make_group_scheme("W_r[F]", p, 2)};
        if (p == 2) {
            all.push_back(hopf::make_group_scheme("W_r", p, 3));
            all.push_back(hopf::make_group_scheme("W_r[F]", p, 3));
        }
        for (const auto& H : all) {
            const auto rep = hopf::check_axioms(H);
            log.expect(rep.pass, H.name + " p=" + std::to_string(p) + ": " + rep.first_failure);
            log.expect(hopf::same_tensors(hopf::cartier_dual(hopf::cartier_dual(H)), H), H.name + " double dual");
            ++checked;
        }
        const auto a = hopf::make_group_scheme("alpha_p", p);
        log.expect(hopf::find_isomorphism(hopf::cartier_dual(a), a).has_value(), "alpha_p not self-dual p=" + std::to_string(p));
        log.expect(hopf::find_isomorphism(hopf::cartier_dual(hopf::make_group_scheme("Z/pZ", p)), hopf::make_group_scheme("mu_p", p)).has_value(),
                   "(Z/pZ)^dual vs mu_p p=" + std::to_string(p));
    }
    log.note(std::to_string(checked) + " group schemes over p in {2,3,5}");
    return log;
}

/// 11. Form-space tables, the W[F] identification, Z ⋏ Z and the Whitehead cross-check.
inline detail_verify::Log forms(const Options& o) {
    using namespace tensorops;
    detail_verify::Log log;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        const auto d = form_dims(hopf::make_group_scheme("alpha_p", p));
        const FormDims expected = p == 2 ? FormDims{1, 1, 1} : FormDims{1, 0, 0};
        const std::string row = "(" + std::to_string(d.bilinear) + "," + std::to_string(d.alternating) + "," + std::to_string(d.weak) + ")";
        log.expect(d == expected, "alpha_p x alpha_p at p=" + std::to_string(p) + ": " + row);
        log.note("p=" + std::to_string(p) + " " + row);
    }
    for (auto [p, r] : std::vector<std::pair<std::uint32_t, int>>{{2, 2}, {2, 3}, {3, 2}, {5, 2}})
        log.expect(wf_identification(p, r).pass, "wf_identification (" + std::to_string(p) + "," + std::to_string(r) + ")");
    const auto zz = weak_wedge_abelian(make_group({BigInt(0)}));
    log.expect(zz.to_string() == "Z/2", "Z weak wedge Z = " + zz.to_string());
    std::mt19937_64 rng(o.seed ^ 0xb0b);
    const int groups = o.quick ? 5 : 20;
    for (int t = 0; t < groups; ++t) {
        const auto A = random_group(rng);
        log.expect(whitehead_symmetrization(A).matches_weak_wedge, "Whitehead cross-check on " + A.to_string());
    }
    log.note("Z weak wedge Z = " + zz.to_string() + "; " + std::to_string(groups) + " Whitehead checks");
    return log;
}

struct Entry {
    int id;
    const char* name;
    double limit_seconds;
    detail_verify::Log (*run)(const Options&);
};

inline const std::vector<Entry>& battery() {
    static const std::vector<Entry> entries{
        {1, "witt-ghost-oracle", 10, witt_ghost},       {2, "wf-ring-identity", 30, wf_identity},
        {3, "semilinear-splitting", 30, semilinear_split}, {4, "profiniteness", 5, profinite},
        {5, "dieudonne-structure", 60, dieudonne_structure}, {6, "moduli-a1", 120, moduli},
        {7, "betti-genfunc", 60, betti},                 {8, "nc-resolution-oracle", 10, nc_oracle},
        {9, "formal-group-laws", 60, formal_groups},     {10, "hopf-cartier", 10, hopf_cartier},
        {11, "form-spaces", 30, forms},
    };
    return entries;
}

inline Criterion run(const Entry& s, const Options& o) {
    Criterion c;
    c.id = s.id;
    c.name = s.name;
    c.limit_seconds = s.limit_seconds;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const auto log = s.run(o);
        c.checks_pass = log.failures.empty();
        c.detail = log.detail();
    } catch (const std::exception& e) {
        c.checks_pass = false;
        c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

/// Criteria 1-11 in order.
inline std::vector<Criterion> run_all(const Options& o) {
    std::vector<Criterion> out;
    for (const auto& s : battery()) out.push_back(run(s, o));
    return out;
}

/// Deterministic text report: verdicts on the checks only, no timings.
inline std::string report_text(const std::vector<Criterion>& cs, const Options& o) {
    std::ostringstream out;
    out << "verify-paper seed=" << o.seed << (o.quick ? " quick" : "") << "\n";
    std::size_t passed = 0;
    for (const auto& c : cs) {
        out << (c.checks_pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << c.detail << "\n";
        if (c.checks_pass) ++passed;
    }
    out << passed << "/" << cs.size() << " criteria pass\n";
    return out.str();
}

inline nlohmann::json report_json(const std::vector<Criterion>& cs, const Options& o) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : cs) rows.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.checks_pass}, {"detail", c.detail}});
    return {{"seed", o.seed}, {"quick", o.quick}, {"criteria", rows}};
}

}  // namespace unipotent::verify
