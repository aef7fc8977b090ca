#pragma once

#include "cxd/lattice.hpp"

#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace cxd {

// Result of one named brute-force check: empty failure list means pass.
// Witnesses are the lexicographically first failing tuples.
struct CheckReport {
    std::string name;
    long instances_checked = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }

    std::string str() const {
        std::ostringstream os;
        os << (passed() ? "PASS" : "FAIL") << "  " << name << "  (" << instances_checked << " instances";
        if (!passed()) os << ", " << failures.size() << " failures; first: " << failures.front();
        os << ")";
        return os.str();
    }
};

namespace detail_verify {

inline std::vector<KWord> all_k_words(size_t ell) {
    std::vector<KWord> out;
    KWord w(ell, 0);
    uint64_t total = 1;
    for (size_t i = 0; i < ell; ++i) total *= 4;
    for (uint64_t n = 0; n < total; ++n) {
        uint64_t c = n;
        for (size_t s = 0; s < ell; ++s) {
            w[s] = static_cast<uint8_t>(c & 3);
            c >>= 2;
        }
        out.push_back(w);
    }
    return out;
}

// <beta((j)_l; eps), beta(lambda)> = sum_s eps_s (j o lambda_s)
inline Rat pair_eps(uint8_t j, const KWord& lambda, const std::vector<int>& eps) {
    Rat acc(0);
    for (size_t s = 0; s < lambda.size(); ++s) acc += eps[s] * k_circ(j, lambda[s]);
    return acc;
}

inline Rat pair_eps_subset(uint8_t j, const KWord& lambda, const std::vector<int>& eps, uint64_t smask) {
    Rat acc(0);
    for (size_t s = 0; s < lambda.size(); ++s)
        if (smask & (uint64_t(1) << s)) acc += eps[s] * k_circ(j, lambda[s]);
    return acc;
}

inline bool in_c_orbit(const KWord& lambda) { return orbit_rep(lambda) == orbit_rep(KWord(lambda.size(), KC)); }

// The enumerable content of the lemma's standing module assumption: the
// coset module V_{L_{(lambda+C) x 0}} over C = C((c)_l) exists with
// V_{L_{(lambda,0)}} meeting its top level iff lambda pairs trivially
// with C and has minimal weight in its C-coset.
inline bool lemma71_module_hypothesis(const KWord& lambda) {
    size_t ell = lambda.size();
    for (uint8_t j : {KA, KB, KC}) {
        int p = 0;
        for (uint8_t x : lambda) p ^= ktab::dot[j][x];
        if (p) return false;
    }
    long wt = weight(lambda);
    for (uint8_t j : {KA, KB, KC}) {
        KWord shifted(ell);
        for (size_t s = 0; s < ell; ++s) shifted[s] = ktab::add[lambda[s]][j];
        if (weight(shifted) < wt) return false;
    }
    return true;
}

// both displayed binomial identities for a fixed lambda, quantified over
// eps and S; reports the first failing tuple through `fail`
template <typename FailFn>
void lemma71_scan(const KWord& lambda, bool check1, bool check2, long& instances, FailFn&& fail) {
    size_t ell = lambda.size();
    for (uint64_t emask = 0; emask < (uint64_t(1) << ell); ++emask) {
        std::vector<int> eps(ell);
        for (size_t s = 0; s < ell; ++s) eps[s] = (emask & (uint64_t(1) << s)) ? -1 : 1;
        if (check2) {
            Rat sum(0);
            for (uint8_t j : {KA, KB, KC}) sum += binomial(pair_eps(j, lambda, eps) + Rat(ell, 2), ell + 1);
            ++instances;
            if (sum != 0) fail(lambda, eps, std::vector<size_t>{}, "binom-2 sum = " + rat_str(sum));
        }
        if (!check1) continue;
        for (uint64_t smask = 1; smask < (uint64_t(1) << ell); ++smask) {
            size_t ssize = static_cast<size_t>(__builtin_popcountll(smask));
            if (ssize < 1 || 2 * ssize > ell) continue;
            for (uint8_t j : {KA, KB, KC}) {
                ++instances;
                if (pair_eps_subset(j, lambda, eps, smask) != Rat(-(long)ssize)) continue;
                Rat b = binomial(pair_eps(j, lambda, eps) + Rat(ell, 2), static_cast<long>(ell - 2 * ssize + 1));
                if (b != 0) {
                    std::vector<size_t> S;
                    for (size_t s = 0; s < ell; ++s)
                        if (smask & (uint64_t(1) << s)) S.push_back(s);
                    fail(lambda, eps, S, "binom-1 value = " + rat_str(b));
                }
            }
        }
    }
}

inline std::string tuple_str(const KWord& lambda, const std::vector<int>& eps, const std::vector<size_t>& S) {
    std::ostringstream os;
    os << "lambda=" << word_str(lambda) << " eps=";
    for (int e : eps) os << (e > 0 ? '+' : '-');
    os << " S={";
    for (size_t i = 0; i < S.size(); ++i) os << (i ? "," : "") << S[i];
    os << "}";
    return os.str();
}

}  // namespace detail_verify

// Lemma 2.2: even K-codes are self-orthogonal; for tau-invariant codes
// the two notions coincide.  The sample should contain the classic
// counterexample {0, (a,0,...,0)}, which must be distinguished.
inline CheckReport check_lemma_2_2(const std::vector<Code>& sample) {
    CheckReport rep{"lemma 2.2 (even vs self-orthogonal K-codes)"};
    bool saw_distinguisher = false;
    for (const auto& c : sample) {
        if (c.kind() != CodeKind::K) continue;
        ++rep.instances_checked;
        bool even = c.is_even(), so = c.is_self_orthogonal(), ti = c.is_tau_invariant();
        if (even && !so) rep.failures.push_back("even but not self-orthogonal code found");
        if (ti && (even != so)) rep.failures.push_back("tau-invariant code with even != self-orthogonal");
        if (so && !even && !ti) saw_distinguisher = true;
    }
    if (!saw_distinguisher)
        rep.failures.push_back("sample lacks a self-orthogonal non-even witness (must not be tau-invariant)");
    return rep;
}

// Lemma 3.2: sum_s Q(lambda_s, mu_s) is even for pairs in a tau-invariant
// even K-code.
inline CheckReport check_lemma_3_2(const Code& C) {
    CheckReport rep{"lemma 3.2 (Q-parity over a tau-invariant even code)"};
    if (C.kind() != CodeKind::K || !C.is_tau_invariant() || !C.is_even())
        throw std::invalid_argument("check_lemma_3_2 expects a tau-invariant even K-code");
    for (const auto& lam : C.words())
        for (const auto& mu : C.words()) {
            ++rep.instances_checked;
            long q = 0;
            for (size_t s = 0; s < lam.size(); ++s) q += q_of(lam[s], mu[s]);
            if (q % 2 != 0)
                rep.failures.push_back("odd Q-sum at lambda=" + word_str(lam) + " mu=" + word_str(mu));
        }
    return rep;
}

// The remark after Lemma 3.2: the even but non-tau-invariant code
// {(0,0),(a,b),(b,a),(c,c)} has an odd Q-sum at lambda=(a,b), mu=(b,a).
inline CheckReport check_lemma_3_2_counterexample() {
    CheckReport rep{"lemma 3.2 counterexample (non-tau-invariant code)"};
    Code c(CodeKind::K, 2, {{KA, KB}, {KB, KA}});
    ++rep.instances_checked;
    if (c.is_tau_invariant()) rep.failures.push_back("counterexample code is unexpectedly tau-invariant");
    if (!c.is_even()) rep.failures.push_back("counterexample code is not even");
    long q = q_of(KA, KB) + q_of(KB, KA);
    if (q != 1) rep.failures.push_back("Q-sum at ((a,b),(b,a)) is " + std::to_string(q) + ", expected 1");
    return rep;
}

// Lemma 2.4: wt(delta - gamma) = wt(delta) mod 3 for self-orthogonal D.
inline CheckReport check_lemma_2_4(const Code& D) {
    CheckReport rep{"lemma 2.4 (weights modulo 3 across dual cosets)"};
    if (D.kind() != CodeKind::Z3 || !D.is_self_orthogonal())
        throw std::invalid_argument("check_lemma_2_4 expects a self-orthogonal Z3-code");
    Code dp = D.dual();
    for (const auto& delta : dp.words())
        for (const auto& gamma : D.words()) {
            ++rep.instances_checked;
            if ((weight(z3_sub(delta, gamma)) - weight(delta)) % 3 != 0)
                rep.failures.push_back("weight jump at delta=" + z3_str(delta) + " gamma=" + z3_str(gamma));
        }
    return rep;
}

// |code| * |dual| = |ambient| for every sampled code.
inline CheckReport check_duality_sizes(const std::vector<Code>& sample) {
    CheckReport rep{"duality size identity |C| |C-perp| = |ambient|"};
    for (const auto& c : sample) {
        ++rep.instances_checked;
        if (c.size() * c.dual().size() != c.ambient_size()) rep.failures.push_back("size identity fails");
    }
    return rep;
}

// Lemma 7.1: both binomial identities, exhaustively over every lambda
// satisfying the standing module hypothesis together with each part's
// stated orbit condition.  (Outside the module hypothesis the identities
// genuinely fail; the l = 2 remark instance is the canonical example.)
inline CheckReport check_lemma_7_1(size_t ell) {
    using namespace detail_verify;
    if (ell % 2 != 0 || ell == 0 || ell > 8) throw std::invalid_argument("check_lemma_7_1: even l up to 8");
    CheckReport rep{"lemma 7.1 (binomial identities, l = " + std::to_string(ell) + ")"};
    auto fail = [&](const KWord& lam, const std::vector<int>& eps, const std::vector<size_t>& S,
                    const std::string& what) {
        if (rep.failures.size() < 8) rep.failures.push_back(tuple_str(lam, eps, S) + ": " + what);
    };
    long lambdas_in_hypothesis = 0;
    for (const auto& lam : all_k_words(ell)) {
        if (is_zero_word(lam)) continue;
        if (!lemma71_module_hypothesis(lam)) continue;
        ++lambdas_in_hypothesis;
        bool not_c_orbit = !in_c_orbit(lam);
        lemma71_scan(lam, /*check1=*/not_c_orbit, /*check2=*/not_c_orbit || ell >= 4, rep.instances_checked, fail);
    }
    if (ell >= 4 && lambdas_in_hypothesis == 0) rep.failures.push_back("hypothesis set unexpectedly empty");
    return rep;
}

inline CheckReport check_lemma_7_1_remark() {
    CheckReport rep{"lemma 7.1 remark (l = 2 out-of-hypothesis value 1)"};
    KWord lambda{KC, KC};
    Rat sum(0);
    for (uint8_t j : {KA, KB, KC}) {
        Rat pair(0);
        for (int s = 0; s < 2; ++s) pair += k_circ(j, lambda[s]);
        sum += binomial(pair + 1, 3);
    }
    ++rep.instances_checked;
    if (sum != 1) rep.failures.push_back("sum = " + rat_str(sum) + ", expected 1");
    return rep;
}

// Survivor analysis: every nonzero lambda satisfying all in-hypothesis
// identities obeys the support constraints of Lemmas 7.2/7.3; applied to
// ((c)_r (0)_{l-r}) reductions for every even r >= 4 up to l (Prop 7.4).
inline CheckReport check_support_constraints(size_t ell) {
    using namespace detail_verify;
    if (ell % 2 != 0 || ell < 4 || ell > 8) throw std::invalid_argument("check_support_constraints: even l in 4..8");
    CheckReport rep{"lemmas 7.2/7.3 and prop 7.4 (support constraints, l = " + std::to_string(ell) + ")"};
    for (size_t r = 4; r <= ell; r += 2) {
        for (const auto& lam : all_k_words(r)) {
            if (is_zero_word(lam)) continue;
            bool not_c_orbit = !in_c_orbit(lam);
            bool survives = true;
            auto fail = [&](const KWord&, const std::vector<int>&, const std::vector<size_t>&, const std::string&) {
                survives = false;
            };
            long dummy = 0;
            lemma71_scan(lam, not_c_orbit, true, dummy, fail);
            ++rep.instances_checked;
            if (!survives) continue;
            // Lemma 7.3 conclusions
            int cpair = 0;
            long s_cnt[4] = {0, 0, 0, 0};
            for (uint8_t x : lam) {
                cpair = (cpair + ktab::dot[KC][x]) & 1;
                ++s_cnt[x];
            }
            if (cpair != 0)
                rep.failures.push_back("survivor " + word_str(lam) + " (r=" + std::to_string(r) +
                                       ") pairs nontrivially with (c)_r");
            if (weight(lam) >= static_cast<long>(r))
                rep.failures.push_back("survivor " + word_str(lam) + " (r=" + std::to_string(r) +
                                       ") has full support");
            // Lemma 7.2 structure, stated for lambda outside the (c)_l orbit
            if (not_c_orbit) {
                for (uint8_t j : {KA, KB, KC}) {
                    long sj = s_cnt[j];
                    long others = weight(lam) - sj;
                    if (2 * sj >= static_cast<long>(r)) {
                        if (!(2 * sj == static_cast<long>(r) && others == 0 && sj % 2 == 0))
                            rep.failures.push_back("survivor " + word_str(lam) + " violates lemma 7.2(1)");
                    } else if (sj >= 1 && others % 2 != 0) {
                        rep.failures.push_back("survivor " + word_str(lam) + " violates lemma 7.2(2)");
                    }
                }
            }
        }
    }
    return rep;
}

// The default check suite.
inline std::vector<CheckReport> default_suite(size_t ell71 = 4) {
    std::vector<Code> ksample = {
        Code(CodeKind::K, 3, {{KA, K0, K0}}),
        Code(CodeKind::K, 2, {{KC, KC}}),
        Code(CodeKind::K, 4, {{KA, KA, K0, K0}, {KB, KB, K0, K0}, {K0, K0, KA, KA}, {K0, K0, KB, KB}}),
        Code(CodeKind::K, 4, {{KA, KB, K0, KC}}),
        Code(CodeKind::K, 3, {{KA, KA, KA}, {KB, KB, KB}}),
        Code::zero(CodeKind::K, 2),
    };
    Code remark_c(CodeKind::K, 4, {{KA, KA, K0, K0}, {KB, KB, K0, K0}, {K0, K0, KA, KA}, {K0, K0, KB, KB}});
    Code tetra(CodeKind::Z3, 4, {{1, 1, 1, 0}, {1, 2, 0, 1}});
    std::vector<Code> allsample = ksample;
    allsample.push_back(tetra);
    allsample.push_back(Code(CodeKind::Z3, 3, {{1, 1, 1}}));

    std::vector<CheckReport> out;
    out.push_back(check_lemma_2_2(ksample));
    out.push_back(check_lemma_3_2(remark_c));
    out.push_back(check_lemma_3_2_counterexample());
    out.push_back(check_lemma_2_4(tetra));
    out.push_back(check_lemma_2_4(Code(CodeKind::Z3, 3, {{1, 1, 1}})));
    out.push_back(check_duality_sizes(allsample));
    out.push_back(check_lemma_7_1(2));
    out.push_back(check_lemma_7_1(ell71));
    out.push_back(check_lemma_7_1_remark());
    out.push_back(check_support_constraints(std::max<size_t>(ell71, 4)));
    return out;
}

}  // namespace cxd
