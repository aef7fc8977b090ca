#pragma once

#include "cxd/codes.hpp"

#include <optional>
#include <sstream>
#include <string>

namespace cxd {

// Label of an irreducible module of the orbifold: untwisted
// V_{L_(lambda,gamma)} / V_{L_(0,gamma)}(eps) or twisted
// V^{T,eta}(tau^i)[eps].  The eps component is present for untwisted
// labels exactly when lambda = 0 (the tau-stable case).
struct ModuleLabel {
    enum class Kind { untwisted, twisted };
    Kind kind = Kind::untwisted;
    KWord lambda;   // untwisted only; tau-orbit representative
    Z3Word gamma;   // untwisted: gamma; twisted: eta
    int tw = 0;     // twisted only: 1 or 2
    std::optional<int> eps;

    static ModuleLabel untwisted(KWord lambda, Z3Word gamma, std::optional<int> eps = std::nullopt) {
        ModuleLabel m;
        m.kind = Kind::untwisted;
        m.lambda = orbit_rep(lambda);
        m.gamma = std::move(gamma);
        bool zero = is_zero_word(m.lambda);
        if (zero != eps.has_value())
            throw std::invalid_argument("untwisted label: eps present iff lambda is the zero orbit");
        if (eps) m.eps = mod_norm(static_cast<long>(*eps), 3);
        return m;
    }

    static ModuleLabel twisted(Z3Word eta, int tw, int eps) {
        if (tw != 1 && tw != 2) throw std::invalid_argument("twist power must be 1 or 2");
        ModuleLabel m;
        m.kind = Kind::twisted;
        m.gamma = std::move(eta);
        m.tw = tw;
        m.eps = mod_norm(static_cast<long>(eps), 3);
        return m;
    }

    size_t length() const { return kind == Kind::untwisted ? lambda.size() : gamma.size(); }

    bool operator==(const ModuleLabel& o) const {
        return kind == o.kind && lambda == o.lambda && gamma == o.gamma && tw == o.tw && eps == o.eps;
    }
    bool operator<(const ModuleLabel& o) const {
        auto key = [](const ModuleLabel& m) { return std::make_tuple(m.kind, m.lambda, m.gamma, m.tw, m.eps); };
        return key(*this) < key(o);
    }

    std::string str() const {
        std::ostringstream os;
        if (kind == Kind::untwisted) {
            os << "V(" << word_str(lambda) << "," << z3_str(gamma) << ")";
            if (eps) os << "[" << *eps << "]";
        } else {
            os << "T(" << z3_str(gamma) << "," << tw << ")[" << *eps << "]";
        }
        return os.str();
    }
};

// Parse "V(lambda,gamma)[eps]" / "T(eta,i)[eps]" with comma-free symbol
// strings, e.g. V(cc00,0110)[2] or T(012,1)[0].
inline ModuleLabel parse_label(const std::string& text) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("bad module label '" + text + "': " + why);
    };
    if (text.size() < 4) fail("too short");
    char kind = text[0];
    if (kind != 'V' && kind != 'T') fail("must start with V or T");
    size_t open = text.find('('), comma = text.find(','), close = text.find(')');
    if (open != 1 || comma == std::string::npos || close == std::string::npos || !(open < comma && comma < close))
        fail("expected '(..,..)'");
    std::string first = text.substr(open + 1, comma - open - 1);
    std::string second = text.substr(comma + 1, close - comma - 1);
    std::optional<int> eps;
    if (close + 1 < text.size()) {
        if (text[close + 1] != '[' || text.back() != ']') fail("trailing characters; expected [eps]");
        std::string e = text.substr(close + 2, text.size() - close - 3);
        if (e.size() != 1 || e[0] < '0' || e[0] > '2') fail("eps must be 0, 1 or 2");
        eps = e[0] - '0';
    }
    auto parse_z3 = [&](const std::string& s) {
        Z3Word w;
        for (char ch : s) {
            if (ch < '0' || ch > '2') fail(std::string("bad Z3 symbol '") + ch + "'");
            w.push_back(static_cast<uint8_t>(ch - '0'));
        }
        return w;
    };
    if (kind == 'V') {
        KWord lam;
        for (char ch : first) {
            switch (ch) {
                case '0': lam.push_back(K0); break;
                case 'a': lam.push_back(KA); break;
                case 'b': lam.push_back(KB); break;
                case 'c': lam.push_back(KC); break;
                default: fail(std::string("bad K symbol '") + ch + "'");
            }
        }
        Z3Word gam = parse_z3(second);
        if (lam.size() != gam.size()) fail("lambda and gamma lengths differ");
        return ModuleLabel::untwisted(std::move(lam), std::move(gam), eps);
    }
    if (second.size() != 1 || (second != "1" && second != "2")) fail("twist must be 1 or 2");
    if (!eps) fail("twisted label needs [eps]");
    return ModuleLabel::twisted(parse_z3(first), second[0] - '0', *eps);
}

}  // namespace cxd
