#pragma once

// The family of lattices M_x = (F,V)N + W·([x1] e0 + [x2] f0) inside N = D_{1,2} ⊕ D_{2,1}:
// classes, isomorphism certificates, the dual lattice, and the self-duality census.
//
// Coordinates on N: e0, e1, e2 = 1, V, F of D_{1,2}; f0, f1, f2 = 1, F, V of D_{2,1}.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "unipotent/dieudonne.hpp"
#include "unipotent/error.hpp"
#include "unipotent/fields.hpp"
#include "unipotent/modular.hpp"

namespace unipotent::dieudonne {

using fields::Fq;
using fields::FqField;

struct ModuliPoint {
    Fq x1, x2;
    Fq w;  // x2 / x1
    Fq z;  // w^{p^3 - 1}
};

struct ModuliModule {
    Fq x1, x2;
    GaloisRing G;       // precision of `basis`
    GrMatrix basis;     // columns in N-coordinates
    DieudonneModule module;
};

struct IsoResult {
    bool isomorphic = false;
    std::optional<Fq> lambda;            // certificate (1, lambda) in F_{p^3}^x
    std::size_t candidates_checked = 0;
    bool classes_agree = false;          // z == z'
    bool certificate_is_morphism = false;
    std::optional<bool> hom_cross_check; // certificate lies in the strict hom space at r = 1
};

struct DualLattice {
    GaloisRing G;           // precision of `lattice`
    GrMatrix lattice;       // image of the dual of M in N, columns = dual basis of M
    bool psi_is_morphism = false;
    bool e_is_morphism = false;
    bool certificate_ok = false;  // lattice module equals dual(M) exactly at working precision
    bool is_moduli_lattice = false;
    Fq y1, y2;              // residue line of the lattice
};

struct DualityReport {
    ModuliPoint point;
    Fq dual_class;
    Fq expected_class;              // (-1)^{p-1} / z
    bool involution_formula_holds = false;
    bool matches_swapped_target = false;  // lattice equals M_{(-x2, x1)}
    bool matches_sign_target = false;     // lattice equals M_{(x1, -x2)}
    bool certificate_ok = false;
    bool self_dual_by_formula = false;
    bool self_dual_computed = false;
};

struct CensusRow {
    Fq w, z, dual_class;
    bool self_dual_formula = false;
    bool self_dual_computed = false;
    std::optional<bool> iso_to_dual;  // exhaustive iso_test(M, dual M), run on formula-flagged rows
};

struct Census {
    std::uint32_t p = 0;
    int degree = 0;
    std::size_t classes = 0;
    std::size_t expected_classes = 0;  // (q - 1) / gcd(q - 1, p^3 - 1)
    std::size_t self_dual_formula = 0;
    std::size_t self_dual_computed = 0;
    std::size_t flagged = 0;
    std::size_t flagged_confirmed = 0;  // flagged and exhaustive search finds no isomorphism to the dual
    std::optional<Fq> witness;          // w of a confirmed non-self-dual class
    std::vector<CensusRow> rows;
};

class ModuliSpace {
public:
    /// Moduli over the given level of the tower (extended so that it contains F_{p^3}), precision r.
    ModuliSpace(fields::FieldTower& tower, std::size_t level, int r)
        : tower_(&tower),
          r_(checked_precision(tower, r)),
          R_(r + 2),
          level_(cubic_level(tower, level)),
          k_(tower.field(level_)),
          G_(k_, R_),
          N_(ambient(G_)) {
        find_generators();
    }

    std::uint32_t p() const { return k_.p(); }
    int precision() const { return r_; }
    std::size_t level() const { return level_; }
    const FqField& field() const { return k_; }
    const GaloisRing& ring() const { return G_; }
    const DieudonneModule& ambient_module() const { return N_; }
    const Fq& primitive_element() const { return g_; }
    const std::vector<Fq>& cubic_units() const { return cubic_; }

    Fq embed(const Fq& x) const { return tower_->embed(x, level_); }

    static DieudonneModule ambient(const GaloisRing& G) {
        const auto A = make_Dmn(G, 1, 2), B = make_Dmn(G, 2, 1);
        auto F = gr::zeros(G, 6, 6), V = F;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                F(i, j) = A.F(i, j);
                V(i, j) = A.V(i, j);
                F(i + 3, j + 3) = B.F(i, j);
                V(i + 3, j + 3) = B.V(i, j);
            }
        return make_module(G, std::move(F), std::move(V), [G](int r) { return ambient(G.with_precision(r)); });
    }

    ModuliPoint point(const Fq& a, const Fq& b) const {
        const Fq x1 = embed(a), x2 = embed(b);
        if (k_.is_zero(x1) || k_.is_zero(x2)) detail::fail_invalid("moduli point: both coordinates must be nonzero");
        ModuliPoint P{x1, x2, k_.mul(x2, k_.inv(x1)), {}};
        P.z = k_.pow(P.w, cube_order());
        return P;
    }

    /// Lattice basis of M_x in N-coordinates over the given Galois ring.
    GrMatrix lattice_basis(const GaloisRing& G, const Fq& x1, const Fq& x2) const { return basis_static(G, k_, x1, x2); }

    /// (F,V)N = span(p e0, e1, e2, p f0, f1, f2).
    static GrMatrix fvn_basis(const GaloisRing& G) {
        auto B = gr::identity(G, 6);
        B(0, 0) = B(3, 3) = G.from_int(G.p());
        return B;
    }

    ModuliModule moduli_submodule(const Fq& a, const Fq& b) const { return build(*tower_, level_, embed(a), embed(b), r_); }

    /// The automorphism of N given by right multiplication with ([a1], [a2]), a_i in F_{p^3}^x.
    GrMatrix automorphism(const GaloisRing& G, const Fq& a1, const Fq& a2) const {
        auto T = gr::zeros(G, 6, 6);
        T(0, 0) = G.teichmuller(a1);
        T(1, 1) = G.teichmuller(k_.frobenius(a1, -1));
        T(2, 2) = G.teichmuller(k_.frobenius(a1, 1));
        T(3, 3) = G.teichmuller(a2);
        T(4, 4) = G.teichmuller(k_.frobenius(a2, 1));
        T(5, 5) = G.teichmuller(k_.frobenius(a2, -1));
        return T;
    }

    /// Exhaustive search for lambda in F_{p^3}^x with diag-automorphism (1, lambda) carrying M onto M'.
    IsoResult iso_test(const ModuliModule& M, const ModuliModule& Mp, bool cross_check = true) const {
        IsoResult out;
        const int prec = std::min(M.G.precision(), Mp.G.precision());
        const auto G = G_.with_precision(prec);
        const auto B = gr::change_precision(M.G, M.basis, G);
        const auto Bp = gr::change_precision(Mp.G, Mp.basis, G);
        const auto N = at_precision(N_, prec);
        if (!k_.is_zero(M.x1) && !k_.is_zero(M.x2) && !k_.is_zero(Mp.x1) && !k_.is_zero(Mp.x2))
            out.classes_agree = point(M.x1, M.x2).z == point(Mp.x1, Mp.x2).z;
        for (const auto& lam : cubic_) {
            ++out.candidates_checked;
            const auto T = automorphism(G, k_.one(), lam);
            if (!lattice_equal(G, gr::multiply(G, T, B), Bp)) continue;
            out.isomorphic = true;
            out.lambda = lam;
            out.certificate_is_morphism = is_morphism(N, N, T);
            if (cross_check) out.hom_cross_check = cross_check_at_one(M, Mp, lam);
            break;
        }
        return out;
    }

    /// The dual of M realized as a lattice in N through dual(N) ≅ N and E: N ≅ (F,V)N.
    DualLattice dual_of(const ModuliModule& M) const {
        const auto& G = M.G;
        const std::int64_t p = G.p();
        const auto N = at_precision(N_, G.precision());
        // E: right multiplication by V on D_{1,2} and by F on D_{2,1}.
        auto E = gr::zeros(G, 6, 6);
        E(1, 0) = E(2, 1) = E(4, 3) = E(5, 4) = G.one();
        E(0, 2) = E(3, 5) = G.from_int(p);
        // Psi: dual(N) -> N reverses the order of the basis.
        auto P = gr::zeros(G, 6, 6);
        for (std::size_t j = 0; j < 6; ++j) P(5 - j, j) = G.one();
        DualLattice out{G, {}, is_morphism(dual(N), N, P), is_morphism(N, N, E), false, false, k_.zero(), k_.zero()};
        auto C = gr::solve(G, M.basis, E);
        if (!C) detail::fail_check("dual_of: E(N) is not contained in M");
        out.G = G.with_precision(G.precision() - C->second);
        const auto Ct = gr::change_precision(G, gr::transpose(C->first), out.G);
        const auto Po = gr::change_precision(G, P, out.G);
        out.lattice = gr::multiply(out.G, Po, Ct);
        const auto No = at_precision(N_, out.G.precision());
        const auto Lmod = dieudonne::submodule(No, out.lattice);
        const auto target = at_precision(M.module, Lmod.precision());
        const auto D = dual(target);
        out.certificate_ok = Lmod.precision() >= r_ && D.F == Lmod.F && D.V == Lmod.V;
        // Residue line in N/(F,V)N.
        const auto FVN = fvn_basis(out.G);
        out.is_moduli_lattice = lattice_contains(out.G, out.lattice, FVN) && lattice_contains(out.G, gr::identity(out.G, 6), out.lattice);
        for (std::size_t j = 0; j < 6; ++j) {
            const auto y1 = out.G.reduce(out.lattice(0, j)), y2 = out.G.reduce(out.lattice(3, j));
            if (!k_.is_zero(y1) || !k_.is_zero(y2)) {
                out.y1 = y1;
                out.y2 = y2;
                break;
            }
        }
        return out;
    }

    ModuliModule lattice_as_module(const DualLattice& D) const {
        ModuliModule L{D.y1, D.y2, D.G, D.lattice, dieudonne::submodule(at_precision(N_, D.G.precision()), D.lattice)};
        return L;
    }

    /// (-1)^{p-1} / z; the sign is 1 for odd p and -1 = 1 in characteristic 2.
    Fq expected_dual_class(const Fq& z) const { return k_.inv(z); }

    DualityReport duality_involution_check(const Fq& a, const Fq& b) const {
        DualityReport rep;
        rep.point = point(a, b);
        const auto M = moduli_submodule(rep.point.x1, rep.point.x2);
        const auto D = dual_of(M);
        rep.certificate_ok = D.certificate_ok && D.psi_is_morphism && D.e_is_morphism && D.is_moduli_lattice;
        if (k_.is_zero(D.y1) || k_.is_zero(D.y2)) detail::fail_check("duality check: dual lattice lies on the boundary");
        rep.dual_class = point(D.y1, D.y2).z;
        rep.expected_class = expected_dual_class(rep.point.z);
        rep.involution_formula_holds = rep.dual_class == rep.expected_class;
        const auto negx2 = k_.neg(rep.point.x2);
        rep.matches_swapped_target = lattice_equal(D.G, D.lattice, lattice_basis(D.G, negx2, rep.point.x1));
        rep.matches_sign_target = lattice_equal(D.G, D.lattice, lattice_basis(D.G, rep.point.x1, negx2));
        rep.self_dual_by_formula = rep.expected_class == rep.point.z;
        rep.self_dual_computed = rep.dual_class == rep.point.z;
        return rep;
    }

    /// One row per z-class: representatives w = g^i, 0 <= i < (q-1)/(p^3-1).
    Census census(bool double_check = true) const {
        Census C;
        C.p = p();
        C.degree = k_.degree();
        const std::uint64_t q1 = k_.order() - 1, c = cube_order();
        C.expected_classes = static_cast<std::size_t>(q1 / std::gcd(q1, c));
        Fq w = k_.one();
        for (std::size_t i = 0; i < C.expected_classes; ++i, w = k_.mul(w, g_)) {
            CensusRow row;
            row.w = w;
            const auto rep = duality_involution_check(k_.one(), w);
            row.z = rep.point.z;
            row.dual_class = rep.dual_class;
            row.self_dual_formula = k_.mul(row.z, row.z) == k_.one();
            row.self_dual_computed = rep.self_dual_computed;
            if (row.self_dual_formula) ++C.self_dual_formula;
            if (row.self_dual_computed) ++C.self_dual_computed;
            if (!row.self_dual_formula) {
                ++C.flagged;
                if (double_check) {
                    const auto M = moduli_submodule(k_.one(), w);
                    const auto L = lattice_as_module(dual_of(M));
                    row.iso_to_dual = iso_test(M, L, false).isomorphic;
                    if (!*row.iso_to_dual) {
                        ++C.flagged_confirmed;
                        if (!C.witness) C.witness = w;
                    }
                }
            }
            C.rows.push_back(row);
        }
        std::vector<Fq> zs;
        for (const auto& r : C.rows) zs.push_back(r.z);
        std::sort(zs.begin(), zs.end());
        C.classes = static_cast<std::size_t>(std::unique(zs.begin(), zs.end()) - zs.begin());
        return C;
    }

    /// For a boundary pair (one coordinate zero): an explicit isomorphism N -> M_x.
    std::optional<GrMatrix> boundary_isomorphism(const Fq& a, const Fq& b) const {
        const Fq x1 = embed(a), x2 = embed(b);
        if (!k_.is_zero(x1) && !k_.is_zero(x2)) return std::nullopt;
        const auto& G = G_;
        auto T = gr::identity(G, 6);
        const auto p = G.from_int(G.p());
        if (k_.is_zero(x2)) {
            // M = D_{1,2} ⊕ (F,V)D_{2,1}: right multiplication by F on the second summand.
            for (std::size_t i = 3; i < 6; ++i) T(i, i) = G.zero();
            T(4, 3) = T(5, 4) = G.one();
            T(3, 5) = p;
        } else {
            // M = (F,V)D_{1,2} ⊕ D_{2,1}: right multiplication by V on the first summand.
            for (std::size_t i = 0; i < 3; ++i) T(i, i) = G.zero();
            T(1, 0) = T(2, 1) = G.one();
            T(0, 2) = p;
        }
        const auto B = lattice_basis(G, x1, x2);
        if (!is_morphism(N_, N_, T) || !lattice_equal(G, T, B)) detail::fail_check("boundary_isomorphism: certificate failed");
        return T;
    }

    nlohmann::json point_to_json(const ModuliPoint& P) const {
        return {{"x1", k_.to_string(P.x1)}, {"x2", k_.to_string(P.x2)}, {"w", k_.to_string(P.w)}, {"z", k_.to_string(P.z)}};
    }

    static ModuliModule build(const fields::FieldTower& tower, std::size_t level, const Fq& x1, const Fq& x2, int r) {
        const auto k = tower.field(level);
        const GaloisRing G(k, r + 2);
        const auto N = ambient(G);
        auto B = basis_static(G, k, x1, x2);
        auto mod = dieudonne::submodule(N, B);
        auto H = G.with_precision(r);
        DieudonneModule M = make_module(H, gr::change_precision(mod.G, mod.F, H), gr::change_precision(mod.G, mod.V, H),
                                        [t = &tower, level, x1, x2](int rr) { return build(*t, level, x1, x2, rr).module; });
        return ModuliModule{x1, x2, G, std::move(B), std::move(M)};
    }

private:
    static int checked_precision(const fields::FieldTower& tower, int r) {
        if (r < 1) detail::fail_invalid("ModuliSpace: precision must be positive");
        if (ipow(tower.p(), r + 2) > (std::int64_t(1) << 40)) detail::fail_cap("ModuliSpace: precision too large");
        return r;
    }
    static std::size_t cubic_level(fields::FieldTower& tower, std::size_t level) {
        const int d = tower.field(level).degree();
        return d % 3 == 0 ? level : tower.level_containing_degree(std::lcm(d, 3));
    }

    static GrMatrix basis_static(const GaloisRing& G, const FqField& k, const Fq& x1, const Fq& x2) {
        if (k.is_zero(x1) && k.is_zero(x2)) detail::fail_invalid("moduli_submodule: degenerate pair (0, 0)");
        auto B = gr::identity(G, 6);
        const auto p = G.from_int(G.p());
        if (!k.is_zero(x1)) {
            B(0, 0) = G.teichmuller(x1);
            B(3, 0) = G.teichmuller(x2);
            B(3, 3) = p;
        } else {
            B(0, 0) = p;
            B(3, 3) = G.teichmuller(x2);
        }
        return B;
    }

    std::uint64_t cube_order() const {
        const std::uint64_t p = k_.p();
        return p * p * p - 1;
    }

    bool cross_check_at_one(const ModuliModule& M, const ModuliModule& Mp, const Fq& lam) const {
        const auto Mh = build(*tower_, level_, M.x1, M.x2, 1);
        const auto Mph = build(*tower_, level_, Mp.x1, Mp.x2, 1);
        const auto& G = Mh.G;  // precision 3
        const auto T = automorphism(G, k_.one(), lam);
        auto X = gr::solve(G, Mph.basis, gr::multiply(G, T, Mh.basis));
        if (!X) return false;
        const auto G1 = G.with_precision(1);
        const auto T1 = gr::change_precision(G, X->first, G1);
        if (!is_morphism(Mh.module, Mph.module, T1)) return false;
        const auto H = hom_space(Mh.module, Mph.module, HomOptions{true, 1});
        return hom_contains(G1, H, T1) && is_invertible(G1, T1);
    }

    void find_generators() {
        const std::uint64_t q1 = k_.order() - 1;
        const auto primes = prime_factors(q1);
        for (std::uint64_t idx = 2;; ++idx) {
            const auto g = k_.element(idx);
            bool ok = true;
            for (auto l : primes)
                if (k_.pow(g, q1 / l) == k_.one()) {
                    ok = false;
                    break;
                }
            if (ok) {
                g_ = g;
                break;
            }
        }
        const auto c = cube_order();
        const auto zeta = k_.pow(g_, q1 / c);
        Fq x = k_.one();
        for (std::uint64_t i = 0; i < c; ++i, x = k_.mul(x, zeta)) cubic_.push_back(x);
        std::sort(cubic_.begin(), cubic_.end());
    }

    fields::FieldTower* tower_;
    int r_, R_;
    std::size_t level_ = 0;
    FqField k_;
    GaloisRing G_;
    DieudonneModule N_;
    Fq g_;
    std::vector<Fq> cubic_;
};

}  // namespace unipotent::dieudonne
