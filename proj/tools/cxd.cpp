// Command-line front end: code checking, glued-lattice reports, theta
// series, the twisted-module catalog, fusion products and tables,
// characters, the brute-force verification suite, and the twisted action
// regression.  All numbers print exactly (rationals and cyclotomic
// coordinates), never as floats.

#include "cxd/characters.hpp"
#include "cxd/fock.hpp"
#include "cxd/fusion.hpp"
#include "cxd/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

using namespace cxd;
using nlohmann::json;

namespace {

Code load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open code file '" + path + "'");
    try {
        return parse_code(in);
    } catch (const CodeParseError& e) {
        throw CLI::ValidationError(path + ": " + e.what());
    }
}

std::string opt_str(const std::optional<long>& mw) { return mw ? std::to_string(*mw) : "inf"; }

json code_report(const Code& c) {
    json j;
    j["kind"] = c.kind() == CodeKind::K ? "K" : "Z3";
    j["length"] = c.length();
    j["size"] = c.size().str();
    j["rank"] = c.rank();
    j["min_weight"] = c.min_weight() ? json(*c.min_weight()) : json("inf");
    j["self_orthogonal"] = c.is_self_orthogonal();
    j["self_dual"] = c.is_self_dual();
    if (c.kind() == CodeKind::K) {
        j["tau_invariant"] = c.is_tau_invariant();
        j["even"] = c.is_even();
    }
    json dual = json::array();
    Code d = c.dual();
    for (const auto& g : d.generators()) dual.push_back(c.kind() == CodeKind::K ? word_str(g) : z3_str(g));
    j["dual_generators"] = dual;
    return j;
}

void print_code_report(const Code& c, bool as_json) {
    json j = code_report(c);
    if (as_json) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::cout << "kind:            " << j["kind"].get<std::string>() << "\n";
    std::cout << "length:          " << c.length() << "\n";
    std::cout << "size:            " << c.size().str() << " (rank " << c.rank() << ")\n";
    std::cout << "min weight:      " << opt_str(c.min_weight()) << "\n";
    std::cout << "self-orthogonal: " << (c.is_self_orthogonal() ? "yes" : "no") << "\n";
    std::cout << "self-dual:       " << (c.is_self_dual() ? "yes" : "no") << "\n";
    if (c.kind() == CodeKind::K) {
        std::cout << "tau-invariant:   " << (c.is_tau_invariant() ? "yes" : "no") << "\n";
        std::cout << "even:            " << (c.is_even() ? "yes" : "no") << "\n";
    }
    std::cout << "dual generators:\n";
    for (const auto& g : j["dual_generators"]) std::cout << "  " << g.get<std::string>() << "\n";
}

json series_json(const QSeries& s) {
    json terms = json::array();
    for (const auto& [e, c] : s.terms()) {
        json t;
        t["exponent"] = rat_str(Rat(e, QSeries::kDen));
        t["coefficient"] = c.str();
        terms.push_back(t);
    }
    json j;
    j["order"] = rat_str(s.order());
    j["terms"] = terms;
    return j;
}

void print_series(const QSeries& s, bool as_json) {
    if (as_json) {
        std::cout << series_json(s).dump(2) << "\n";
        return;
    }
    for (const auto& [e, c] : s.terms())
        std::cout << "q^" << rat_str(Rat(e, QSeries::kDen)) << "  " << c.str() << "\n";
    std::cout << "(truncated after q^" << rat_str(s.order()) << ")\n";
}

int run_verify_all(size_t ell, bool as_json) {
    auto reports = default_suite(ell);
    bool all = true;
    if (as_json) {
        json j = json::array();
        for (const auto& r : reports) {
            json e;
            e["name"] = r.name;
            e["instances"] = r.instances_checked;
            e["passed"] = r.passed();
            e["failures"] = r.failures;
            j.push_back(e);
            all &= r.passed();
        }
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& r : reports) {
            std::cout << r.str() << "\n";
            all &= r.passed();
        }
    }
    return all ? 0 : 1;
}

// the twelve-identity regression of the twisted engines
int run_ops_tables(bool as_json) {
    GluedLattice lat = GluedLattice::plain(1);
    Cyclotomic r3 = sqrt_minus3();
    bool all = true;
    json rows = json::array();
    for (int tw : {1, 2}) {
        int ia = (tw == 1) ? 2 : 1, ib = 3 - ia;
        Cyclotomic jsign = (tw == 1) ? Cyclotomic(1) : Cyclotomic(-1);
        for (long j = 0; j < 3; ++j) {
            TwistContext ctx(lat, Z3Word{static_cast<uint8_t>(j)}, tw, Rat(3));
            Z3Word gamma{0};
            TState v0 = ctx.ground(gamma), v1, v2, v3;
            add_to(v1, TMono{{{0, ia, 1}}, gamma}, Cyclotomic(1));
            add_to(v2, TMono{{{0, ib, 2}}, gamma}, Cyclotomic(1));
            add_to(v3, TMono{{{0, ia, 1}, {0, ia, 1}}, gamma}, Cyclotomic(1));
            Cyclotomic zm = zeta3_pow(j) - zeta3_pow(-j), zp = zeta3_pow(j) + zeta3_pow(-j);
            struct Case {
                const char* name;
                const UState* op;
                Rat mode;
                const TState* in;
                TState expect;
            };
            UState om = omega_site(1, 0), P = p_site(1, 0), J = j_site(1, 0);
            std::vector<Case> cases;
            cases.push_back({"omega_1 on 1", &om, Rat(1), &v0, Cyclotomic(Rat(1, 9)) * v0});
            cases.push_back({"omega_1 on h'2", &om, Rat(1), &v1, Cyclotomic(Rat(4, 9)) * v1});
            cases.push_back({"omega_1 on h'1", &om, Rat(1), &v2, Cyclotomic(Rat(7, 9)) * v2});
            cases.push_back({"omega_1 on h'2^2", &om, Rat(1), &v3, Cyclotomic(Rat(7, 9)) * v3});
            cases.push_back({"P_1 on 1", &P, Rat(1), &v0, Cyclotomic(Rat(-1, 9)) * zm * v0});
            cases.push_back({"P_1 on h'2", &P, Rat(1), &v1, Cyclotomic(Rat(5, 9)) * zm * v1});
            cases.push_back({"P_1 on h'1", &P, Rat(1), &v2, (Cyclotomic(Rat(2, 9)) * zm * v2) + (zp * v3)});
            cases.push_back({"P_1 on h'2^2", &P, Rat(1), &v3,
                             (Cyclotomic(Rat(-2, 3)) * zp * v2) + (Cyclotomic(Rat(-7, 9)) * zm * v3)});
            cases.push_back({"J_2 on 1", &J, Rat(2), &v0,
                             jsign * Cyclotomic(Rat(2, 81)) * r3 * (Cyclotomic(1) + Cyclotomic(3) * zp) * v0});
            cases.push_back({"J_2 on h'2", &J, Rat(2), &v1,
                             jsign * Cyclotomic(Rat(2, 81)) * r3 * (Cyclotomic(-8) + Cyclotomic(3) * zp) * v1});
            cases.push_back({"J_2 on h'1", &J, Rat(2), &v2,
                             (jsign * Cyclotomic(Rat(2, 81)) * r3 * (Cyclotomic(37) - Cyclotomic(24) * zp) * v2) +
                                 (jsign * Cyclotomic(Rat(-2, 3)) * r3 * zm * v3)});
            cases.push_back({"J_2 on h'2^2", &J, Rat(2), &v3,
                             (jsign * Cyclotomic(Rat(4, 9)) * r3 * zm * v2) +
                                 (jsign * Cyclotomic(Rat(2, 81)) * r3 * (Cyclotomic(-17) - Cyclotomic(51) * zp) * v3)});
            for (auto& c : cases) {
                bool ok = twisted_coeff(*c.op, c.mode, *c.in, ctx) == c.expect;
                all &= ok;
                if (as_json) {
                    json row;
                    row["twist"] = tw;
                    row["residue"] = j;
                    row["identity"] = c.name;
                    row["ok"] = ok;
                    rows.push_back(row);
                } else {
                    std::cout << (ok ? "ok   " : "FAIL ") << "twist " << tw << "  residue " << j << "  " << c.name
                              << "\n";
                }
            }
        }
    }
    if (as_json) std::cout << rows.dump(2) << "\n";
    std::cout << (all ? "all twelve identities hold for every residue and both twists\n"
                      : "identity failures found\n");
    return all ? 0 : 1;
}

ModuleLabel parse_label_arg(const std::string& text) {
    try {
        return parse_label(text);
    } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError(e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toolkit for code-glued lattices, their twisted modules, characters and fusion rules"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--format-json,--json", as_json, "machine-readable JSON output");
    unsigned jobs = 1;
    app.add_option("--jobs", jobs, "worker threads for theta sums");

    std::string code_file, cfile, dfile;
    long order = 3, plain_ell = 1;

    auto* codes = app.add_subcommand("codes", "code-level operations");
    auto* codes_check = codes->add_subcommand("check", "report duals, weights, self-duality, tau-invariance");
    codes_check->add_option("file", code_file, "code file")->required();

    auto* lattice = app.add_subcommand("lattice", "glued-lattice reports");
    auto* lat_info = lattice->add_subcommand("info", "rank, determinant, evenness, unimodularity");
    lat_info->add_option("--C", cfile, "K-code file")->required();
    lat_info->add_option("--D", dfile, "Z3-code file")->required();
    auto* lat_theta = lattice->add_subcommand("theta", "theta series dump");
    lat_theta->add_option("--order", order, "truncation order (integer exponent)");
    lat_theta->add_option("--C", cfile, "K-code file");
    lat_theta->add_option("--D", dfile, "Z3-code file");
    lat_theta->add_option("--ell", plain_ell, "length for the plain lattice when no codes are given");

    auto* twisted_cmd = app.add_subcommand("twisted", "twisted-module catalog");
    auto* tw_catalog = twisted_cmd->add_subcommand("catalog", "psi_eta classes and module dimensions");
    tw_catalog->add_option("--D", dfile, "Z3-code file")->required();

    std::string label_a, label_b, ring = "vl";
    long ring_ell = 0;
    auto* fusion_cmd = app.add_subcommand("fusion", "fusion-label arithmetic");
    auto* fu_mult = fusion_cmd->add_subcommand("mult", "product of two module labels");
    fu_mult->add_option("labelA", label_a, "first label, e.g. 'V(c,0)'")->required();
    fu_mult->add_option("labelB", label_b, "second label")->required();
    fu_mult->add_option("--ring", ring, "vl | ll | d");
    fu_mult->add_option("--ell", ring_ell, "length for --ring ll (defaults to the label length)");
    fu_mult->add_option("--D", dfile, "Z3-code file for --ring d");
    auto* fu_table = fusion_cmd->add_subcommand("table", "full multiplication table, one product per line");
    fu_table->add_option("--ring", ring, "vl");

    std::string label_text, eta_text;
    long ch_order = 2;
    auto* char_cmd = app.add_subcommand("char", "graded dimensions");
    auto* ch_module = char_cmd->add_subcommand("module", "character of a module label");
    ch_module->add_option("label", label_text, "module label, e.g. 'T(0,1)[0]'")->required();
    ch_module->add_option("--order", ch_order, "truncation order (integer exponent)");
    auto* ch_312 = char_cmd->add_subcommand("verify312", "twisted-character decomposition check");
    ch_312->add_option("--D", dfile, "Z3-code file")->required();
    ch_312->add_option("--eta", eta_text, "eta as a Z3 symbol string, e.g. 000")->required();
    ch_312->add_option("--order", ch_order, "integer orders above l/9");

    long v_ell = 4;
    auto* verify_cmd = app.add_subcommand("verify", "brute-force lemma suites");
    auto* verify_all = verify_cmd->add_subcommand("all", "run the default suite");
    verify_all->add_option("--ell", v_ell, "length for the binomial-identity scan");

    auto* ops_cmd = app.add_subcommand("ops", "operator regressions");
    auto* ops_tables = ops_cmd->add_subcommand("tables", "twisted action-table regression");

    CLI11_PARSE(app, argc, argv);

    try {
        if (codes_check->parsed()) {
            print_code_report(load_code(code_file), as_json);
            return 0;
        }
        if (lat_info->parsed()) {
            GluedLattice lat(load_code(cfile), load_code(dfile));
            Rat det = lat.gram_det();
            bool even = lat.is_even();
            if (as_json) {
                json j;
                j["rank"] = lat.rank();
                j["determinant"] = rat_str(det);
                j["even"] = even;
                j["unimodular"] = (det == 1);
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "rank:        " << lat.rank() << "\n";
                std::cout << "determinant: " << rat_str(det) << "\n";
                std::cout << "even:        " << (even ? "yes" : "no") << "\n";
                std::cout << "unimodular:  " << (det == 1 ? "yes" : "no") << "\n";
            }
            return 0;
        }
        if (lat_theta->parsed()) {
            if (cfile.empty() != dfile.empty())
                throw CLI::ValidationError("give both --C and --D, or neither for the plain lattice");
            GluedLattice lat = cfile.empty() ? GluedLattice::plain(static_cast<size_t>(plain_ell))
                                             : GluedLattice(load_code(cfile), load_code(dfile));
            print_series(lat.theta(QSeries::to_num(Rat(order)), jobs), as_json);
            return 0;
        }
        if (tw_catalog->parsed()) {
            Code D = load_code(dfile);
            if (D.kind() != CodeKind::Z3) throw CLI::ValidationError("--D must be a Z3-code");
            auto classes = equivalence_classes(D, D.dual().words());
            if (as_json) {
                json j;
                j["class_count"] = classes.size();
                j["dimension"] = D.size().str();
                json reps = json::array();
                for (const auto& cls : classes) reps.push_back(z3_str(cls.front()));
                j["representatives"] = reps;
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "inequivalent twisted modules per twist: " << classes.size()
                          << "  (= |D-perp / D|)\n";
                std::cout << "module dimension |D|: " << D.size().str() << "\n";
                for (const auto& cls : classes)
                    std::cout << "  class of eta = " << z3_str(cls.front()) << "  (" << cls.size()
                              << " characters)\n";
            }
            return 0;
        }
        if (fu_mult->parsed()) {
            ModuleLabel a = parse_label_arg(label_a), b = parse_label_arg(label_b);
            FusionResult r;
            if (ring == "vl")
                r = fuse_vl(a, b);
            else if (ring == "ll")
                r = fuse_ll(static_cast<size_t>(ring_ell > 0 ? ring_ell : static_cast<long>(a.length())), a, b);
            else if (ring == "d") {
                if (dfile.empty()) throw CLI::ValidationError("--ring d needs --D");
                r = DRing(load_code(dfile)).fuse(a, b);
            } else
                throw CLI::ValidationError("--ring must be vl, ll or d");
            if (as_json) {
                json j;
                j["defined"] = r.has_value();
                if (r) {
                    json terms = json::array();
                    for (const auto& [m, k] : *r) {
                        json t;
                        t["label"] = m.str();
                        t["multiplicity"] = k;
                        terms.push_back(t);
                    }
                    j["product"] = terms;
                }
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << (r ? fv_str(*r) : "undefined (twisted x twisted)") << "\n";
            }
            return 0;
        }
        if (fu_table->parsed()) {
            if (ring != "vl") throw CLI::ValidationError("table dump supports --ring vl");
            auto labels = vl_labels();
            for (const auto& a : labels)
                for (const auto& b : labels) {
                    auto r = fuse_vl(a, b);
                    std::cout << a.str() << " x " << b.str() << " = " << (r ? fv_str(*r) : "undefined") << "\n";
                }
            return 0;
        }
        if (ch_module->parsed()) {
            ModuleLabel label = parse_label_arg(label_text);
            print_series(char_module(label, QSeries::to_num(Rat(ch_order))), as_json);
            return 0;
        }
        if (ch_312->parsed()) {
            Code D = load_code(dfile);
            Z3Word eta;
            for (char ch : eta_text) {
                if (ch < '0' || ch > '2') throw CLI::ValidationError("eta must use symbols 0, 1, 2");
                eta.push_back(static_cast<uint8_t>(ch - '0'));
            }
            if (eta.size() != D.length()) throw CLI::ValidationError("eta length must match the code length");
            long order_num = QSeries::to_num(Rat(static_cast<long>(D.length()), 9) + Rat(ch_order));
            bool ok = true;
            json out = json::array();
            for (int i : {1, 2}) {
                auto rep = verify_thm312(D, eta, i, order_num);
                ok &= rep.ok;
                if (as_json) {
                    json j;
                    j["twist"] = i;
                    j["ok"] = rep.ok;
                    j["detail"] = rep.detail;
                    out.push_back(j);
                } else {
                    std::cout << "twist " << i << ": " << (rep.ok ? "exact match" : rep.detail) << "\n";
                }
            }
            if (as_json) std::cout << out.dump(2) << "\n";
            return ok ? 0 : 1;
        }
        if (verify_all->parsed()) {
            if (v_ell % 2 != 0 || v_ell < 2 || v_ell > 8) throw CLI::ValidationError("--ell must be even, 2..8");
            return run_verify_all(static_cast<size_t>(v_ell), as_json);
        }
        if (ops_tables->parsed()) {
            return run_ops_tables(as_json);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
