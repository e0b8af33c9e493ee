// Command-line front end. Exit codes: 0 success, 1 a mathematical check failed, 2 usage or cap error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unipotent/cohomology.hpp"
#include "unipotent/dieudonne.hpp"
#include "unipotent/fgl.hpp"
#include "unipotent/fields.hpp"
#include "unipotent/hopf.hpp"
#include "unipotent/moduli.hpp"
#include "unipotent/semilinear.hpp"
#include "unipotent/tensorops.hpp"
#include "unipotent/verify.hpp"
#include "unipotent/witt.hpp"

using namespace unipotent;
using nlohmann::json;

namespace {

struct Config {
    std::int64_t p = 2;
    int deg = 1;
    int r = 2;
    int D = 8;
    std::uint64_t seed = 2024;
    bool json_out = false;
    bool quick = false;
};

// Thrown when a command ran but its verdict is negative.
struct CheckVerdict {
    json out;
};

std::vector<std::int64_t> parse_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(std::stoll(item));
    return out;
}

std::vector<std::vector<std::int64_t>> parse_matrix(const std::string& s) {
    std::vector<std::vector<std::int64_t>> rows;
    std::stringstream in(s);
    std::string row;
    while (std::getline(in, row, ';')) rows.push_back(parse_list(row));
    for (const auto& r : rows)
        if (r.size() != rows.size()) detail::fail_invalid("matrix must be square, rows separated by ';'");
    return rows;
}

void print(const json& j, const Config& c) {
    if (c.json_out) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    for (const auto& [k, v] : j.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

json with_config(json j, const Config& c) {
    j["seed"] = c.seed;
    j["p"] = c.p;
    return j;
}

std::uint32_t prime32(const Config& c) { return static_cast<std::uint32_t>(c.p); }

// ---- witt ----

json witt_op(const Config& c, const std::string& op, const std::string& xs, const std::string& ys) {
    fields::FieldTower T(c.p);
    const auto K = T.prime_field();
    const witt::WittRing<fields::FqField> W(K, c.r);
    auto vec = [&](const std::string& s) {
        const auto v = parse_list(s);
        std::vector<fields::Fq> a;
        for (auto x : v) a.push_back(K.from_int(x));
        return W.from_components(a);
    };
    const auto x = vec(xs);
    json j{{"op", op}, {"r", c.r}, {"x", W.to_json(x)}};
    if (op == "neg") {
        j["result"] = W.to_json(W.neg(x));
        return j;
    }
    const auto y = vec(ys);
    j["y"] = W.to_json(y);
    j["result"] = W.to_json(op == "add" ? W.add(x, y) : W.mul(x, y));
    return j;
}

// ---- semilinear ----

json semilinear_split(const Config& c, const std::string& matrix, std::size_t d) {
    using namespace semilinear;
    fields::FieldTower t(c.p, 24, c.seed);
    const auto K = t.prime_field();
    FqMatrix A;
    if (!matrix.empty()) {
        const auto rows = parse_matrix(matrix);
        A = linalg::zeros(K, rows.size(), rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows.size(); ++j) A(i, j) = K.from_int(rows[i][j]);
    } else {
        std::mt19937_64 rng(c.seed);
        A = verify::detail_verify::random_mixed(K, d, rng);
    }
    const auto T = make_operator(0, A);
    const auto s = ss_nilpotent_split(K, T);
    json j{{"d", A.rows}, {"vs_dim", s.Vs.cols}, {"vn_dim", s.Vn.cols}, {"N", s.N}};
    try {
        j["fixed_space"] = fixed_space(t, T).to_json();
    } catch (const CapExceeded&) {
        j["fixed_space"] = fixed_space_split_field(t, T).to_json();
    }
    const auto w = tilt_and_perfection(K, T);
    j["tilt_perfection_rank"] = w.rank;
    return j;
}

json semilinear_profinite(const Config& c, const std::string& preset, int param) {
    fields::FieldTower t(c.p);
    const auto K = t.prime_field();
    return {{"preset", preset}, {"param", param}, {"profinite", semilinear::is_profinite(K, semilinear::hom_module_preset(K, preset, param))}};
}

// ---- dieudonne ----

json dieudonne_dmn(const Config& c, int m, int n) {
    using namespace dieudonne;
    fields::FieldTower T(c.p);
    const GaloisRing G(T.field(T.level_containing_degree(c.deg)), c.r);
    const auto M = make_Dmn(G, m, n);
    json j{{"m", m}, {"n", n}, {"r", c.r}, {"relations_hold", relations_hold(M)}, {"rank", M.rank()}, {"dimension", dimension(M)}};
    j["module"] = to_json(M);
    const auto Dm = make_Dmn(G, n, m);
    const auto iso = find_isomorphism(dual(M), Dm, hom_space(dual(M), Dm));
    j["dual_isomorphic_to_D_" + std::to_string(n) + "_" + std::to_string(m)] = iso.has_value();
    if (iso) j["dual_certificate"] = gr::to_json(*iso);
    return j;
}

json dieudonne_census(const Config& c) {
    using namespace dieudonne;
    fields::FieldTower T(c.p);
    ModuliSpace S(T, T.level_containing_degree(c.deg), 1);
    const auto C = S.census(!c.quick);
    const auto& k = S.field();
    json rows = json::array();
    for (const auto& row : C.rows) {
        json r{{"w", k.coeffs(row.w)}, {"z", k.coeffs(row.z)}, {"dual_class", k.coeffs(row.dual_class)},
               {"self_dual_by_z_squared", row.self_dual_formula}, {"self_dual_computed", row.self_dual_computed}};
        if (row.iso_to_dual) r["iso_to_dual"] = *row.iso_to_dual;
        rows.push_back(r);
    }
    json j{{"degree", C.degree},
           {"classes", C.classes},
           {"expected_classes", C.expected_classes},
           {"self_dual_count", C.self_dual_computed},
           {"self_dual_by_z_squared", C.self_dual_formula},
           {"flagged", C.flagged},
           {"flagged_confirmed", C.flagged_confirmed},
           {"witness", C.witness ? json(k.coeffs(*C.witness)) : json(nullptr)},
           {"rows", rows}};
    return j;
}

// ---- hopf ----

hopf::FiniteHopfAlgebra load_hopf(const Config& c, const std::string& name, int param, const std::string& file) {
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) detail::fail_invalid("cannot read " + file);
        return hopf::hopf_from_json(json::parse(in));
    }
    return hopf::make_group_scheme(name, prime32(c), param);
}

json axiom_json(const hopf::AxiomReport& rep) {
    json checks = json::object();
    for (const auto& [k, v] : rep.checks) checks[k] = v;
    return {{"pass", rep.pass}, {"first_failure", rep.first_failure}, {"checks", checks}};
}

// ---- fgl ----

fgl::CommFGL make_law(const Config& c, const std::string& law, int h, int N) {
    const zmod::Ring Z(c.p, 1);
    if (law == "additive") return fgl::additive(Z, c.D);
    if (law == "multiplicative") return fgl::multiplicative(Z, c.D);
    if (law == "lubin-tate") return fgl::lubin_tate(c.p, h, c.D, N);
    detail::fail_invalid("unknown law: " + law + " (additive, multiplicative, lubin-tate)");
}

json report_json(const fgl::FglReport& r) { return {{"pass", r.pass}, {"violated", r.violated}, {"degree", r.degree}}; }

json height_json(const fgl::Height& h) {
    return {{"height", h.to_string()}, {"exact", h.exact}, {"leading_exponent", h.leading_exponent}};
}

// ---- forms / abelian ----

json dims_json(const tensorops::FormDims& d) { return {{"bilinear", d.bilinear}, {"alternating", d.alternating}, {"weak", d.weak}}; }

tensorops::FGAbelianGroup parse_group(const std::string& s) {
    std::vector<BigInt> f;
    for (auto x : parse_list(s)) f.emplace_back(x);
    return tensorops::make_group(f);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite unipotent group schemes, Witt vectors, Dieudonne modules and formal groups"};
    app.require_subcommand(1);
    Config c;
    auto common = [&](CLI::App* s) {
        s->add_option("--p", c.p, "prime");
        s->add_option("--seed", c.seed, "random seed");
        s->add_flag("--json", c.json_out, "JSON output");
    };

    std::function<json()> action;

    // witt
    auto* witt_cmd = app.add_subcommand("witt", "Witt vector arithmetic over F_p");
    witt_cmd->require_subcommand(1);
    std::string wx = "0", wy = "0";
    for (const char* op : {"add", "mul", "neg"}) {
        auto* s = witt_cmd->add_subcommand(op, std::string("Witt ") + op);
        common(s);
        s->add_option("--r", c.r, "length");
        s->add_option("--x", wx, "components, comma separated")->required();
        if (std::string(op) != "neg") s->add_option("--y", wy, "components, comma separated")->required();
        s->callback([&, op] { action = [&, op] { return witt_op(c, op, wx, wy); }; });
    }
    {
        auto* s = witt_cmd->add_subcommand("polys", "universal sum and product polynomials");
        common(s);
        s->add_option("--r", c.r, "length");
        s->callback([&] { action = [&] { return witt::WittPolynomials::get(c.p, c.r)->to_json(); }; });
        auto* w = witt_cmd->add_subcommand("wf-identity", "([x+y]-[x]-[y])[z] in W_r(F_p[x,y,z]/(x^p,y^p,z^p))");
        common(w);
        w->add_option("--r", c.r, "length");
        w->callback([&] {
            action = [&] {
                const auto rep = witt::verify_wf_ring_identity(c.p, c.r);
                if (!rep.pass) throw CheckVerdict{rep.to_json()};
                return rep.to_json();
            };
        });
    }

    // semilinear
    auto* sl = app.add_subcommand("semilinear", "Frobenius-semilinear operators over F_p");
    sl->require_subcommand(1);
    std::string matrix;
    std::size_t dim = 4;
    std::string preset = "alpha_p";
    int param = 1;
    {
        auto* s = sl->add_subcommand("split", "semisimple/nilpotent splitting, fixed points, tilt");
        common(s);
        s->add_option("--matrix", matrix, "rows separated by ';', entries by ','");
        s->add_option("--d", dim, "dimension of a random operator");
        s->callback([&] { action = [&] { return semilinear_split(c, matrix, dim); }; });
        auto* pf = sl->add_subcommand("profinite", "is Hom(G, G_a) torsion over k[F]");
        common(pf);
        pf->add_option("--preset", preset, "G_a, W, alpha_p^v, Z/p, W_r, W_r[F]");
        pf->add_option("--param", param, "v or r");
        pf->callback([&] { action = [&] { return semilinear_profinite(c, preset, param); }; });
    }

    // dieudonne
    auto* dd = app.add_subcommand("dieudonne", "Dieudonne modules and the a = 1 moduli");
    dd->require_subcommand(1);
    int dm = 1, dn = 2;
    {
        auto* s = dd->add_subcommand("dmn", "the module D_{m,n}");
        common(s);
        s->add_option("--m", dm, "m");
        s->add_option("--n", dn, "n");
        s->add_option("--r", c.r, "precision");
        s->add_option("--deg", c.deg, "residue field degree");
        s->callback([&] { action = [&] { return dieudonne_dmn(c, dm, dn); }; });
        auto* cs = dd->add_subcommand("census", "self-duality census of the z-classes");
        common(cs);
        cs->add_option("--deg", c.deg, "field degree");
        cs->add_flag("--quick", c.quick, "skip the exhaustive isomorphism search");
        cs->callback([&] { action = [&] { return dieudonne_census(c); }; });
    }

    // hopf
    auto* hp = app.add_subcommand("hopf", "finite commutative Hopf algebras");
    hp->require_subcommand(1);
    std::string hname = "alpha_p", hfile;
    for (const char* op : {"make", "dual", "check"}) {
        auto* s = hp->add_subcommand(op, op);
        common(s);
        s->add_option("--name", hname, "alpha_p, alpha_{p^v}, mu_p, Z/pZ, W_r, W_r[F]");
        s->add_option("--param", param, "v or r");
        s->add_option("--file", hfile, "structure tensors as JSON");
        const std::string o = op;
        s->callback([&, o] {
            action = [&, o] {
                const auto H = load_hopf(c, hname, param, hfile);
                if (o == "make") return hopf::to_json(H);
                if (o == "dual") return hopf::to_json(hopf::cartier_dual(H));
                const json j = axiom_json(hopf::check_axioms(H));
                if (!j["pass"].get<bool>()) throw CheckVerdict{j};
                return j;
            };
        });
    }

    // fgl
    auto* fg = app.add_subcommand("fgl", "one-dimensional formal group laws");
    fg->require_subcommand(1);
    std::string law = "multiplicative";
    int h = 1, N = 1, level = 1, g = 1;
    for (const char* op : {"check", "pseries", "height", "lubin-tate", "dual-level"}) {
        auto* s = fg->add_subcommand(op, op);
        common(s);
        s->add_option("--D", c.D, "truncation degree");
        s->add_option("--law", law, "additive, multiplicative, lubin-tate");
        s->add_option("--height", h, "Lubin-Tate height");
        s->add_option("--N", N, "Lubin-Tate precision p^N");
        const std::string o = op;
        if (o == "dual-level") s->add_option("--r", level, "level");
        if (o == "check") s->add_option("--g", g, "dimension for the non-commutative law X_i+Y_i+X_iY_i (g > 1)");
        s->callback([&, o] {
            action = [&, o] {
                if (o == "check" && g > 1) {
                    const json j = report_json(fgl::check(fgl::nc_standard(zmod::Ring(c.p, 1), g, c.D, true)));
                    if (!j["pass"].get<bool>()) throw CheckVerdict{j};
                    return j;
                }
                const auto F = make_law(c, o == "lubin-tate" ? "lubin-tate" : law, h, N);
                if (o == "check") {
                    const json j = report_json(fgl::check(F));
                    if (!j["pass"].get<bool>()) throw CheckVerdict{j};
                    return j;
                }
                if (o == "pseries") return json{{"p_series", fgl::to_json(F.Z, fgl::p_series(F))}};
                if (o == "height") return height_json(fgl::height(F));
                if (o == "lubin-tate") {
                    json j = fgl::to_json(F);
                    j["height"] = fgl::height(F).to_string();
                    return j;
                }
                return hopf::to_json(fgl::dual_level(F, level));
            };
        });
    }

    // cohomology
    auto* co = app.add_subcommand("cohomology", "Ext of local algebras");
    co->require_subcommand(1);
    std::string apreset = "alpha_p";
    for (const char* op : {"betti", "genfunc", "ext1", "nc-oracle"}) {
        auto* s = co->add_subcommand(op, op);
        common(s);
        s->add_option("--D", c.D, "degree");
        const std::string o = op;
        if (o == "nc-oracle") s->add_option("--g", g, "number of letters");
        else s->add_option("--preset", apreset, "trivial, alpha_p, alpha_p2, alpha_p_squared, alpha_p_cubed");
        s->callback([&, o] {
            action = [&, o]() -> json {
                if (o == "nc-oracle") {
                    const auto rep = cohomology::nc_resolution_oracle(g, c.D, prime32(c));
                    json j{{"pass", rep.pass},
                           {"first_failure_degree", rep.first_failure_degree},
                           {"kernel_dims", rep.kernel_dims},
                           {"cokernel_dims", rep.cokernel_dims},
                           {"ext_dims", rep.ext_dims}};
                    if (!rep.pass) throw CheckVerdict{j};
                    return j;
                }
                const auto A = cohomology::preset(apreset, prime32(c));
                if (o == "betti") return cohomology::to_json(cohomology::minimal_resolution(A, c.D));
                if (o == "genfunc") {
                    const auto rep = cohomology::verify_genfunc(A, c.D);
                    if (!rep.pass) throw CheckVerdict{cohomology::to_json(rep)};
                    return cohomology::to_json(rep);
                }
                const auto e = cohomology::verify_ext1_formula(A);
                json j{{"pass", e.pass}, {"b2", e.b2}, {"g", e.g}, {"s", e.s}, {"expected", e.expected}};
                if (!e.pass) throw CheckVerdict{j};
                return j;
            };
        });
    }

    // forms
    auto* fo = app.add_subcommand("forms", "G_a-valued forms on finite group schemes");
    fo->require_subcommand(1);
    for (const char* op : {"bilinear", "alt", "weak", "wf-check"}) {
        auto* s = fo->add_subcommand(op, op);
        common(s);
        const std::string o = op;
        if (o == "wf-check") s->add_option("--r", c.r, "level");
        else {
            s->add_option("--name", hname, "group scheme");
            s->add_option("--param", param, "v or r");
        }
        s->callback([&, o] {
            action = [&, o]() -> json {
                if (o == "wf-check") {
                    const auto rep = tensorops::wf_identification(prime32(c), c.r);
                    if (!rep.pass) throw CheckVerdict{tensorops::to_json(rep)};
                    return tensorops::to_json(rep);
                }
                const auto G = hopf::make_group_scheme(hname, prime32(c), param);
                const auto S = tensorops::bilinear_space(G, G);
                const auto d = tensorops::form_dims(G);
                json j = dims_json(d);
                j["group"] = G.name;
                if (o == "bilinear") j["basis_dim"] = S.dim();
                if (o == "alt") j["basis_dim"] = tensorops::alternating_space(S, G).cols;
                if (o == "weak") j["basis_dim"] = tensorops::weak_alternating_space(S).cols;
                return j;
            };
        });
    }

    // abelian
    auto* ab = app.add_subcommand("abelian", "weak wedges of finitely generated abelian groups");
    ab->require_subcommand(1);
    std::string group = "0";
    for (const char* op : {"weakwedge", "whitehead"}) {
        auto* s = ab->add_subcommand(op, op);
        common(s);
        s->add_option("--group", group, "cyclic orders, comma separated; 0 stands for Z");
        const std::string o = op;
        s->callback([&, o] {
            action = [&, o]() -> json {
                const auto A = parse_group(group);
                if (o == "weakwedge") return {{"group", A.to_string()}, {"weak_wedge", tensorops::weak_wedge_abelian(A).to_string()}};
                const auto w = tensorops::whitehead_symmetrization(A);
                json j{{"group", A.to_string()}, {"cokernel", w.cokernel.to_string()}, {"matches_weak_wedge", w.matches_weak_wedge}};
                if (!w.matches_weak_wedge) throw CheckVerdict{j};
                return j;
            };
        });
    }

    // verify-paper
    auto* vp = app.add_subcommand("verify-paper", "run the acceptance battery (criteria 1-11)");
    std::string golden;
    common(vp);
    vp->add_flag("--quick", c.quick, "fewer random trials");
    vp->add_option("--golden", golden, "compare the report with this file");
    vp->callback([&] { action = nullptr; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (vp->parsed()) {
            const verify::Options opt{c.seed, c.quick};
            const auto rows = verify::run_all(opt);
            bool ok = true;
            for (const auto& r : rows) ok = ok && r.checks_pass;
            if (c.json_out) {
                auto j = verify::report_json(rows, opt);
                j["p"] = c.p;
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << verify::report_text(rows, opt);
            }
            if (!golden.empty()) {
                std::ifstream in(golden);
                if (!in) detail::fail_invalid("cannot read golden file " + golden);
                std::stringstream buf;
                buf << in.rdbuf();
                if (buf.str() != verify::report_text(rows, opt)) {
                    std::cerr << "report differs from " << golden << "\n";
                    return 1;
                }
            }
            return ok ? 0 : 1;
        }
        print(with_config(action(), c), c);
        return 0;
    } catch (const CheckVerdict& v) {
        print(with_config(v.out, c), c);
        return 1;
    } catch (const CheckFailed& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
