#include "cxd/codes.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

using namespace cxd;

namespace {

Code tetracode() {
    return Code(CodeKind::Z3, 4, {{1, 1, 1, 0}, {1, 2, 0, 1}});
}

Code remark_C() {
    return Code(CodeKind::K, 4,
                {{KA, KA, K0, K0}, {KB, KB, K0, K0}, {K0, K0, KA, KA}, {K0, K0, KB, KB}});
}

Code random_code(std::mt19937& rng, CodeKind kind, size_t len, int ngens) {
    std::uniform_int_distribution<int> sym(0, kind == CodeKind::K ? 3 : 2);
    std::vector<std::vector<uint8_t>> gens;
    for (int i = 0; i < ngens; ++i) {
        std::vector<uint8_t> g(len);
        for (auto& x : g) x = static_cast<uint8_t>(sym(rng));
        gens.push_back(g);
    }
    return Code(kind, len, gens);
}

}  // namespace

TEST_CASE("k_pair table") {
    CHECK(k_pair(KA, KA) == std::make_pair(Rat(1), 0));
    CHECK(k_pair(KA, KB) == std::make_pair(Rat(-1, 2), 1));
    CHECK(k_pair(K0, KC) == std::make_pair(Rat(0), 0));
    // dot is symmetric and bilinear over the Klein group
    for (uint8_t x = 0; x < 4; ++x)
        for (uint8_t y = 0; y < 4; ++y) {
            CHECK(k_dot(x, y) == k_dot(y, x));
            for (uint8_t z = 0; z < 4; ++z)
                CHECK((k_dot(ktab::add[x][y], z) + k_dot(x, z) + k_dot(y, z)) % 2 == 0);
        }
}

TEST_CASE("tau on words") {
    KWord w{KA, KA, K0, K0};
    CHECK(tau_word(w) == KWord{KB, KB, K0, K0});
    KWord zero(6, K0);
    CHECK(tau_word(zero) == zero);
    KWord all_c(5, KC);
    CHECK(tau_word(tau_word(tau_word(all_c))) == all_c);
    CHECK(tau_word(all_c) != all_c);
    CHECK(tau_word(tau_word(all_c)) != all_c);
}

TEST_CASE("dual of the zero code is the full ambient") {
    for (auto kind : {CodeKind::K, CodeKind::Z3}) {
        Code z = Code::zero(kind, 3);
        Code d = z.dual();
        CHECK(d.size() == z.ambient_size());
    }
}

TEST_CASE("tetracode is self-dual with 9 words and minimum weight 3") {
    Code d = tetracode();
    CHECK(d.size() == 9);
    CHECK(d.is_self_dual());
    Code dd = d.dual();
    CHECK(dd.size() == 9);
    for (const auto& w : dd.words()) CHECK(d.contains(w));
    CHECK(d.min_weight() == 3);
}

TEST_CASE("the length-4 K-code of the E8 gluing is tau-invariant self-dual") {
    Code c = remark_C();
    CHECK(c.size() == 16);
    CHECK(c.is_self_dual());
    CHECK(c.is_tau_invariant());
    CHECK(c.is_even());
    CHECK(c.min_weight() == 2);
    Code cd = c.dual();
    for (const auto& w : cd.words()) CHECK(c.contains(w));
}

TEST_CASE("zero code minimum weight is the +infinity sentinel") {
    CHECK(!Code::zero(CodeKind::K, 4).min_weight().has_value());
}

TEST_CASE("orbit representative counts") {
    CHECK(orbit_representatives(1).size() == 2);
    CHECK(orbit_representatives(2).size() == 6);
    CHECK(orbit_representatives(4).size() == 86);
    // one representative per orbit: every word reaches exactly one rep
    auto reps = orbit_representatives(2);
    for (const auto& r : reps) CHECK(orbit_rep(r) == r);
}

TEST_CASE("even K-codes are self-orthogonal (Lemma 2.2)") {
    std::mt19937 rng(5);
    int seen_even = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Code c = random_code(rng, CodeKind::K, 5, 2);
        if (!c.is_even()) continue;
        ++seen_even;
        CHECK(c.is_self_orthogonal());
    }
    CHECK(seen_even > 0);
    // tau-invariant: even <=> self-orthogonal, and the classic
    // counterexample is self-orthogonal but not even (not tau-invariant)
    Code cx(CodeKind::K, 3, {{KA, K0, K0}});
    CHECK(cx.is_self_orthogonal());
    CHECK(!cx.is_even());
    CHECK(!cx.is_tau_invariant());
    for (int trial = 0; trial < 400; ++trial) {
        Code c = random_code(rng, CodeKind::K, 4, 2);
        if (!c.is_tau_invariant()) continue;
        CHECK(c.is_even() == c.is_self_orthogonal());
    }
}

TEST_CASE("weights shift by multiples of 3 across dual cosets (Lemma 2.4)") {
    Code d = tetracode();
    Code dp = d.dual();
    for (const auto& delta : dp.words())
        for (const auto& gamma : d.words())
            CHECK((weight(z3_sub(delta, gamma)) - weight(delta)) % 3 == 0);
}

TEST_CASE("size of code times size of dual is the ambient size") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        for (auto kind : {CodeKind::K, CodeKind::Z3}) {
            Code c = random_code(rng, kind, 5, 2);
            CHECK(c.size() * c.dual().size() == c.ambient_size());
        }
    }
}

TEST_CASE("code file parsing") {
    std::istringstream good("kind: Z3\nlength: 4\ngenerators:\n1 1 1 0\n1 2 0 1\n");
    Code d = parse_code(good);
    CHECK(d.kind() == CodeKind::Z3);
    CHECK(d.size() == 9);

    std::istringstream bad_sym("kind: K\nlength: 2\ngenerators:\na x\n");
    CHECK_THROWS_AS(parse_code(bad_sym), CodeParseError);
    std::istringstream bad_len("kind: K\nlength: 3\ngenerators:\na a\n");
    CHECK_THROWS_AS(parse_code(bad_len), CodeParseError);
    std::istringstream bad_kind("kind: F4\nlength: 3\ngenerators:\n");
    CHECK_THROWS_AS(parse_code(bad_kind), CodeParseError);
}

TEST_CASE("shipped data files parse and satisfy their hypotheses") {
    auto load = [](const std::string& name) {
        std::ifstream in(std::string(CXD_SOURCE_DIR) + "/data/" + name);
        REQUIRE(in.good());
        return parse_code(in);
    };
    Code tetra = load("tetracode.txt");
    CHECK(tetra.is_self_dual());
    CHECK(tetra.min_weight() == 3);

    Code e8c = load("e8_C.txt");
    CHECK(e8c.is_self_dual());
    CHECK(e8c.is_tau_invariant());
    CHECK(e8c.min_weight() == 2);

    Code hexa = load("hexacode.txt");
    CHECK(hexa.is_self_dual());
    CHECK(hexa.is_tau_invariant());
    CHECK(hexa.min_weight() == 4);

    Code lc = load("leech_C.txt");
    Code ld = load("leech_D.txt");
    CHECK(lc.is_self_dual());
    CHECK(lc.is_tau_invariant());
    CHECK(lc.min_weight() == 4);
    CHECK(ld.is_self_dual());
    CHECK(ld.min_weight() == 6);
}
