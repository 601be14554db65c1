#include "arena/qualifier.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace arena {

Qualifier Qualifier::of(std::initializer_list<Name> xs, bool fresh) {
    Qualifier q;
    q.vars.insert(xs.begin(), xs.end());
    q.fresh = fresh;
    return q;
}

Qualifier Qualifier::operator|(const Qualifier& o) const {
    Qualifier r = *this;
    r.vars.insert(o.vars.begin(), o.vars.end());
    r.locs.insert(o.locs.begin(), o.locs.end());
    r.fresh = fresh || o.fresh;
    return r;
}

Qualifier Qualifier::operator&(const Qualifier& o) const {
    Qualifier r;
    std::set_intersection(vars.begin(), vars.end(), o.vars.begin(), o.vars.end(),
                          std::inserter(r.vars, r.vars.end()));
    std::set_intersection(locs.begin(), locs.end(), o.locs.begin(), o.locs.end(),
                          std::inserter(r.locs, r.locs.end()));
    r.fresh = fresh && o.fresh;
    return r;
}

Qualifier Qualifier::minus(const Qualifier& o) const {
    Qualifier r;
    std::set_difference(vars.begin(), vars.end(), o.vars.begin(), o.vars.end(),
                        std::inserter(r.vars, r.vars.end()));
    std::set_difference(locs.begin(), locs.end(), o.locs.begin(), o.locs.end(),
                        std::inserter(r.locs, r.locs.end()));
    r.fresh = fresh && !o.fresh;
    return r;
}

Qualifier Qualifier::without(const Name& x) const {
    Qualifier r = *this;
    r.vars.erase(x);
    return r;
}

Qualifier Qualifier::without_fresh() const {
    Qualifier r = *this;
    r.fresh = false;
    return r;
}

Qualifier Qualifier::with_fresh() const {
    Qualifier r = *this;
    r.fresh = true;
    return r;
}

bool Qualifier::subset_of(const Qualifier& o) const {
    if (fresh && !o.fresh) return false;
    return std::includes(o.vars.begin(), o.vars.end(), vars.begin(), vars.end()) &&
           std::includes(o.locs.begin(), o.locs.end(), locs.begin(), locs.end());
}

bool Qualifier::disjoint_locs(const std::set<Loc>& ls) const {
    return std::none_of(ls.begin(), ls.end(), [&](Loc l) { return has(l); });
}

std::string Qualifier::str() const { return to_string(*this); }

bool Observation::covers(const Qualifier& q) const {
    return std::includes(vars.begin(), vars.end(), q.vars.begin(), q.vars.end()) &&
           std::includes(locs.begin(), locs.end(), q.locs.begin(), q.locs.end());
}

Observation Observation::plus(const Name& x) const {
    Observation r = *this;
    r.vars.insert(x);
    return r;
}

Observation Observation::plus(Loc l) const {
    Observation r = *this;
    r.locs.insert(l);
    return r;
}

Observation Observation::minus_locs(const std::set<Loc>& ls) const {
    Observation r = *this;
    for (Loc l : ls) r.locs.erase(l);
    return r;
}

Qualifier substitute_var(const Qualifier& q, const Name& x, const Qualifier& p) {
    if (!q.has(x)) return q;
    return q.without(x) | p;
}

Qualifier substitute_fresh(const Qualifier& q, const Qualifier& p) {
    if (!q.fresh) return q;
    return q | p;
}

std::string loc_name(Loc l) { return "ℓ" + std::to_string(l); }

std::string to_string(const Qualifier& q) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    auto sep = [&] {
        if (!first) os << ", ";
        first = false;
    };
    for (const auto& v : q.vars) {
        sep();
        os << v;
    }
    for (Loc l : q.locs) {
        sep();
        os << loc_name(l);
    }
    if (q.fresh) {
        sep();
        os << '*';
    }
    os << '}';
    return os.str();
}

std::string to_string(const Observation& phi) { return to_string(phi.as_qualifier()); }

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

}  // namespace

Qualifier parse_qualifier(std::string_view text) {
    static constexpr std::string_view ell = "ℓ";
    static constexpr std::string_view diamond = "◇";
    Qualifier q;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto fail = [&](const char* what) {
        throw std::invalid_argument(std::string("qualifier: ") + what + " at offset " +
                                    std::to_string(i));
    };
    skip();
    if (i >= text.size() || text[i] != '{') fail("expected '{'");
    ++i;
    skip();
    if (i < text.size() && text[i] == '}') {
        ++i;
    } else {
        for (;;) {
            skip();
            if (i >= text.size()) fail("unterminated");
            if (text[i] == '*') {
                q.fresh = true;
                ++i;
            } else if (text.substr(i, diamond.size()) == diamond) {
                q.fresh = true;
                i += diamond.size();
            } else if (text.substr(i, ell.size()) == ell) {
                i += ell.size();
                std::size_t start = i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
                if (start == i) fail("expected location number");
                q.locs.insert(static_cast<Loc>(std::stoul(std::string(text.substr(start, i - start)))));
            } else if (ident_start(static_cast<unsigned char>(text[i]))) {
                std::size_t start = i;
                while (i < text.size() && ident_char(static_cast<unsigned char>(text[i]))) ++i;
                q.vars.insert(std::string(text.substr(start, i - start)));
            } else {
                fail("unexpected character");
            }
            skip();
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            if (i < text.size() && text[i] == '}') {
                ++i;
                break;
            }
            fail("expected ',' or '}'");
        }
    }
    skip();
    if (i != text.size()) fail("trailing input");
    return q;
}

}  // namespace arena
