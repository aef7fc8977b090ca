// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Optional arguments:
//   --ell6                extend the binomial-identity scan to l = 6
//   --leech-C <file>      length-12 K-code for the Leech-scale check
//   --leech-D <file>      length-12 Z3-code for the Leech-scale check
//   --jobs <n>            worker threads for theta sums

#include "cxd/characters.hpp"
#include "cxd/fock.hpp"
#include "cxd/fusion.hpp"
#include "cxd/verify.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>

using namespace cxd;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int idx, const std::string& name, bool ok, double secs, double limit, const std::string& note = "") {
    bool in_time = secs < limit;
    if (!(ok && in_time)) ++g_failures;
    std::cout << (ok && in_time ? "PASS" : "FAIL") << "  criterion " << idx << ": " << name << "  [" << std::fixed;
    std::cout.precision(2);
    std::cout << secs << "s / limit " << limit << "s]";
    if (!ok && !note.empty()) std::cout << "  -- " << note;
    if (ok && !in_time) std::cout << "  -- over time limit";
    std::cout << "\n";
}

void report_skip(int idx, const std::string& name, const std::string& why) {
    std::cout << "SKIP  criterion " << idx << ": " << name << "  -- " << why << "\n";
}

Code tetracode() { return Code(CodeKind::Z3, 4, {{1, 1, 1, 0}, {1, 2, 0, 1}}); }

Code remark_C() {
    return Code(CodeKind::K, 4,
                {{KA, KA, K0, K0}, {KB, KB, K0, K0}, {K0, K0, KA, KA}, {K0, K0, KB, KB}});
}

Code hexacode() {
    return Code(CodeKind::K, 6,
                {{KA, K0, K0, KA, KB, KB},
                 {K0, KA, K0, KB, KA, KB},
                 {K0, K0, KA, KB, KB, KA},
                 {KB, K0, K0, KB, KC, KC},
                 {K0, KB, K0, KC, KB, KC},
                 {K0, K0, KB, KC, KC, KB}});
}

bool coeff_is(const QSeries& s, const Rat& e, long v) { return s.coeff(e) == Cyclotomic(v); }

// ---- criterion 1 and 2: the E8 reconstructions -----------------------------

void criterion_e8(unsigned jobs) {
    Timer t;
    bool ok = true;
    std::string note;
    GluedLattice lat(remark_C(), tetracode());
    ok &= lat.rank() == 8;
    ok &= lat.is_even();
    ok &= lat.gram_det() == Rat(1);
    QSeries th = lat.theta(QSeries::to_num(Rat(3)), jobs);
    ok &= coeff_is(th, Rat(0), 1) && coeff_is(th, Rat(1), 240) && coeff_is(th, Rat(2), 2160) &&
          coeff_is(th, Rat(3), 6720);
    if (!ok) note = "lattice data or theta coefficients differ";
    report(1, "E8 reconstruction from the length-4 pair", ok, t.seconds(), 10.0, note);
}

void criterion_sqrt2e8(unsigned jobs) {
    Timer t;
    bool ok = true;
    GluedLattice lat(Code::zero(CodeKind::K, 4), tetracode());
    ok &= lat.is_even();
    ok &= lat.gram_det() == Rat(256);
    QSeries th = lat.theta(QSeries::to_num(Rat(4)), jobs);
    ok &= coeff_is(th, Rat(0), 1) && coeff_is(th, Rat(1), 0) && coeff_is(th, Rat(2), 240) &&
          coeff_is(th, Rat(3), 0) && coeff_is(th, Rat(4), 2160);
    report(2, "sqrt2-E8 from the tetracode alone", ok, t.seconds(), 10.0);
}

// ---- criterion 3: group laws ------------------------------------------------

void criterion_groups() {
    Timer t;
    bool ok = true;
    std::string note;
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> kp(0, 23);
    std::uniform_int_distribution<long> off(-3, 3);

    struct Inst {
        Code C, D;
    };
    std::vector<Inst> insts = {
        {Code::zero(CodeKind::K, 1), Code::zero(CodeKind::Z3, 1)},
        {Code(CodeKind::K, 2, {{KC, KC}}), Code::zero(CodeKind::Z3, 2)},
        {Code::zero(CodeKind::K, 3), Code(CodeKind::Z3, 3, {{1, 1, 1}})},
    };
    long done = 0;
    for (const auto& inst : insts) {
        GluedLattice lat(inst.C, inst.D);
        size_t l = lat.ell();
        const auto& cw = inst.C.words();
        const auto& dw = inst.D.words();
        std::uniform_int_distribution<size_t> ci(0, cw.size() - 1), di(0, dw.size() - 1);
        auto rnd = [&] {
            std::vector<std::array<long, 2>> offs;
            for (size_t s = 0; s < l; ++s) offs.push_back({off(rng), off(rng)});
            return GroupElement(kp(rng), coset_vector({cw[ci(rng)], dw[di(rng)]}, offs));
        };
        for (int trial = 0; trial < 400; ++trial) {
            GroupElement a = rnd(), b = rnd(), c = rnd();
            for (ExtKind kind : {ExtKind::untwisted, ExtKind::twisted}) {
                ok &= mult(kind, mult(kind, a, b), c) == mult(kind, a, mult(kind, b, c));
            }
            ok &= tau_lift_pow(a, 3) == a;
            ok &= theta_lift(theta_lift(a)) == a;
            ok &= theta_lift(tau_lift(a)) == tau_lift(theta_lift(a));
            Rat p = inner_product(a.bar, b.bar);
            ok &= is_integer(p) &&
                  commutator(ExtKind::untwisted, a, b) == GroupElement::kappa_pow(12 * mod_norm(num(p), 2), l);
            ok &= commutator(ExtKind::twisted, a, b) == GroupElement::kappa_pow(c0_tau(a.bar, b.bar), l);
            ok &= mod_norm(static_cast<long>(eps0(a.bar, b.bar) - eps0(b.bar, a.bar)), 24) ==
                  mod_norm(static_cast<long>(c0(a.bar, b.bar) - c0_tau(a.bar, b.bar)), 24);
            ++done;
            if (!ok) break;
        }
        if (!ok) break;
    }
    if (!ok) note = "group law violation found";
    ok &= done >= 1000;
    report(3, "group-law randomized suite (" + std::to_string(done) + " triples)", ok, t.seconds(), 5.0, note);
}

// ---- criterion 4: twisted modules -------------------------------------------

void criterion_twisted_modules() {
    Timer t;
    bool ok = true;
    std::string note;
    // Theorem 3.11 class counts
    {
        Code d0 = Code::zero(CodeKind::Z3, 1);
        std::vector<Z3Word> all1 = {{0}, {1}, {2}};
        ok &= equivalence_classes(d0, all1).size() == 3;
        Code d111(CodeKind::Z3, 3, {{1, 1, 1}});
        ok &= equivalence_classes(d111, d111.dual().words()).size() == 3;
        Code tetra = tetracode();
        ok &= equivalence_classes(tetra, tetra.dual().words()).size() == 1;
        if (!ok) note = "class count differs from |D-perp / D|";
    }
    // action-on-basis scalars for all 9 residue pairs
    {
        Code d111(CodeKind::Z3, 3, {{1, 1, 1}});
        GluedLattice lat(Code::zero(CodeKind::K, 3), d111);
        std::vector<Z3Word> etas = {{0, 0, 0}, {1, 2, 0}, {2, 1, 0}};
        for (const auto& eta : etas) {
            TModule mod(eta, d111);
            for (const auto& gamma : d111.words())
                for (int i = 0; i < 3; ++i) {
                    auto b = beta_basis(i);
                    LatticeVector v(3);
                    v.site(0) = {Int(b[0]), Int(b[1])};
                    long j = mod_norm(static_cast<long>(eta[0]) - gamma[0], 3);
                    auto [tp, sp] = t_action(mod, GroupElement::exp(v), gamma, lat);
                    ok &= tp == gamma && sp == zeta3_pow(-1 + j);
                    auto [tm, sm] = t_action(mod, GroupElement::exp(-v), gamma, lat);
                    ok &= tm == gamma && sm == zeta3_pow(-1 - j);
                }
        }
        if (!ok && note.empty()) note = "action-on-basis scalar differs";
    }
    report(4, "twisted-module class counts and basis action", ok, t.seconds(), 5.0, note);
}

// ---- criterion 5: the twelve displayed action identities --------------------

void criterion_action_tables() {
    Timer t;
    bool ok = true;
    GluedLattice lat = GluedLattice::plain(1);
    Cyclotomic r3 = sqrt_minus3();
    for (int tw : {1, 2}) {
        int ia = (tw == 1) ? 2 : 1;
        int ib = 3 - ia;
        Cyclotomic jsign = (tw == 1) ? Cyclotomic(1) : Cyclotomic(-1);
        for (long j = 0; j < 3 && ok; ++j) {
            TwistContext ctx(lat, Z3Word{static_cast<uint8_t>(j)}, tw, Rat(3));
            Z3Word gamma{0};
            TState v0 = ctx.ground(gamma), v1, v2, v3;
            add_to(v1, TMono{{{0, ia, 1}}, gamma}, Cyclotomic(1));
            add_to(v2, TMono{{{0, ib, 2}}, gamma}, Cyclotomic(1));
            add_to(v3, TMono{{{0, ia, 1}, {0, ia, 1}}, gamma}, Cyclotomic(1));
            UState om = omega_site(1, 0), P = p_site(1, 0), J = j_site(1, 0);
            Cyclotomic zm = zeta3_pow(j) - zeta3_pow(-j), zp = zeta3_pow(j) + zeta3_pow(-j);

            ok &= twisted_coeff(om, Rat(1), v0, ctx) == (Cyclotomic(Rat(1, 9)) * v0);
            ok &= twisted_coeff(om, Rat(1), v1, ctx) == (Cyclotomic(Rat(4, 9)) * v1);
            ok &= twisted_coeff(om, Rat(1), v2, ctx) == (Cyclotomic(Rat(7, 9)) * v2);
            ok &= twisted_coeff(om, Rat(1), v3, ctx) == (Cyclotomic(Rat(7, 9)) * v3);

            ok &= twisted_coeff(P, Rat(1), v0, ctx) == (Cyclotomic(Rat(-1, 9)) * zm * v0);
            ok &= twisted_coeff(P, Rat(1), v1, ctx) == (Cyclotomic(Rat(5, 9)) * zm * v1);
            ok &= twisted_coeff(P, Rat(1), v2, ctx) == ((Cyclotomic(Rat(2, 9)) * zm * v2) + (zp * v3));
            ok &= twisted_coeff(P, Rat(1), v3, ctx) ==
                  ((Cyclotomic(Rat(-2, 3)) * zp * v2) + (Cyclotomic(Rat(-7, 9)) * zm * v3));

            ok &= twisted_coeff(J, Rat(2), v0, ctx) ==
                  (jsign * Cyclotomic(Rat(2, 81)) * r3 * (Cyclotomic(1) + Cyclotomic(3) * zp) * v0);
            ok &= twisted_coeff(J, Rat(2), v1, ctx) ==
                  (jsign * Cyclotomic(Rat(2, 81)) * r3 * (Cyclotomic(-8) + Cyclotomic(3) * zp) * v1);
            ok &= twisted_coeff(J, Rat(2), v2, ctx) ==
                  ((jsign * Cyclotomic(Rat(2, 81)) * r3 * (Cyclotomic(37) - Cyclotomic(24) * zp) * v2) +
                   (jsign * Cyclotomic(Rat(-2, 3)) * r3 * zm * v3));
            ok &= twisted_coeff(J, Rat(2), v3, ctx) ==
                  ((jsign * Cyclotomic(Rat(4, 9)) * r3 * zm * v2) +
                   (jsign * Cyclotomic(Rat(2, 81)) * r3 * (Cyclotomic(-17) - Cyclotomic(51) * zp) * v3));
        }
    }
    report(5, "twelve twisted action identities, both engines", ok, t.seconds(), 60.0);
}

// ---- criterion 6: Theorem 3.12 character identity ---------------------------

void criterion_thm312() {
    Timer t;
    bool ok = true;
    std::string note;
    for (int i : {1, 2}) {
        {
            Code d0 = Code::zero(CodeKind::Z3, 1);
            long order = QSeries::to_num(Rat(1, 9) + Rat(4));
            for (uint8_t k : {0, 1, 2}) {
                auto rep = verify_thm312(d0, Z3Word{k}, i, order);
                ok &= rep.ok;
                if (!rep.ok && note.empty()) note = rep.detail;
            }
        }
        {
            Code d111(CodeKind::Z3, 3, {{1, 1, 1}});
            long order = QSeries::to_num(Rat(3, 9) + Rat(4));
            auto rep = verify_thm312(d111, Z3Word{0, 0, 0}, i, order);
            ok &= rep.ok;
            if (!rep.ok && note.empty()) note = rep.detail;
        }
    }
    report(6, "Theorem 3.12 character decomposition (l = 1 and 3, i = 1, 2)", ok, t.seconds(), 60.0, note);
}

// ---- criterion 7: fusion suite ----------------------------------------------

void criterion_fusion() {
    Timer t;
    bool ok = true;
    std::string note;
    auto labels = vl_labels();
    ok &= labels.size() == 30;
    auto rep = check_ring(labels, [](const ModuleLabel& a, const ModuleLabel& b) { return fuse_vl(a, b); });
    ok &= rep.passed();
    if (!rep.passed()) note = rep.violations.front();

    auto mt = check_ring(mt_labels(), [](const MtLabel& a, const MtLabel& b) {
        return std::optional<MtVector>(mt_fuse(a, b));
    });
    ok &= mt.passed() && mt.triples_skipped == 0;

    for (const auto& a : labels)
        for (const auto& b : labels) {
            auto x = fuse_vl(a, b);
            auto y = fuse_ll(1, a, b);
            ok &= (x.has_value() == y.has_value()) && (!x || *x == *y);
        }

    for (size_t ell : {1, 2, 3}) {
        long p3 = 1, p4 = 1;
        for (size_t s = 0; s < ell; ++s) {
            p3 *= 3;
            p4 *= 4;
        }
        ok &= ll_labels(ell).size() == static_cast<size_t>(3 * p3 + (p4 - 1) / 3 * p3 + 6 * p3);
    }

    Code c12 = Code::direct_sum(hexacode(), hexacode());
    Code d12 = Code::direct_sum(Code::direct_sum(tetracode(), tetracode()), tetracode());
    ok &= thm75_labels(c12, d12).size() == 9;

    report(7, "fusion rings: 30-label, M_t, l = 1 agreement, label counts", ok, t.seconds(), 30.0, note);
}

// ---- criterion 8: the binomial-identity suite --------------------------------

void criterion_lemma71(bool ell6) {
    Timer t;
    bool ok = true;
    std::string note;
    auto r2 = check_lemma_7_1(2);
    auto r4 = check_lemma_7_1(4);
    auto rem = check_lemma_7_1_remark();
    auto sur = check_support_constraints(4);
    ok &= r2.passed() && r4.passed() && rem.passed() && sur.passed();
    if (!ok) note = (!r4.passed() ? r4.failures.front() : (!sur.passed() ? sur.failures.front() : "remark value"));
    if (ell6) {
        auto r6 = check_lemma_7_1(6);
        auto s6 = check_support_constraints(6);
        ok &= r6.passed() && s6.passed();
        if (!ok && note.empty()) note = "l = 6 scan failed";
    }
    report(8, std::string("Lemma 7.1 suite at l = 4") + (ell6 ? " and 6" : ""), ok, t.seconds(), 120.0, note);
}

// ---- criterion 9: Leech-scale option ----------------------------------------

void criterion_leech(const std::string& cfile, const std::string& dfile, unsigned jobs) {
    if (cfile.empty() || dfile.empty()) {
        report_skip(9, "Leech-scale theta (user-supplied length-12 codes)", "no input codes supplied");
        return;
    }
    Timer t;
    bool ok = true;
    std::string note;
    try {
        std::ifstream cf(cfile), df(dfile);
        if (!cf || !df) throw std::runtime_error("cannot open code files");
        Code C = parse_code(cf), D = parse_code(df);
        if (C.length() != 12 || D.length() != 12) throw std::runtime_error("codes must have length 12");
        if (!C.is_self_dual() || !C.is_tau_invariant()) throw std::runtime_error("C must be tau-invariant self-dual");
        auto mw = C.min_weight();
        if (!mw || *mw < 4) throw std::runtime_error("C must have minimum weight at least 4");
        if (!D.is_self_dual()) throw std::runtime_error("D must be self-dual");
        GluedLattice lat(C, D);
        QSeries th = lat.theta(QSeries::to_num(Rat(2)), jobs);
        ok = coeff_is(th, Rat(1), 0) && coeff_is(th, Rat(2), 196560);
        if (!ok) note = "theta coefficients are not those of the Leech lattice";
    } catch (const std::exception& e) {
        ok = false;
        note = e.what();
    }
    report(9, "Leech-scale theta coefficient", ok, t.seconds(), 600.0, note);
}

}  // namespace

int main(int argc, char** argv) {
    bool ell6 = false;
    unsigned jobs = 1;
    std::string leech_c, leech_d;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--ell6")
            ell6 = true;
        else if (arg == "--jobs" && i + 1 < argc)
            jobs = static_cast<unsigned>(std::stoul(argv[++i]));
        else if (arg == "--leech-C" && i + 1 < argc)
            leech_c = argv[++i];
        else if (arg == "--leech-D" && i + 1 < argc)
            leech_d = argv[++i];
        else {
            std::cerr << "unknown argument: " << arg << "\n";
            return 2;
        }
    }

    criterion_e8(jobs);
    criterion_sqrt2e8(jobs);
    criterion_groups();
    criterion_twisted_modules();
    criterion_action_tables();
    criterion_thm312();
    criterion_fusion();
    criterion_lemma71(ell6);
    criterion_leech(leech_c, leech_d, jobs);

    if (g_failures) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
