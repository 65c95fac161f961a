#include "cft/sympoly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace cft {

namespace {
constexpr const char* kSymNames[kNumSyms] = {"P", "Q", "S", "C", "W", "F1", "F2", "L", "M"};

int total_degree(const Mono& m) {
    int d = 0;
    for (auto e : m) d += e;
    return d;
}

BigRat rat_gcd(const BigRat& a, const BigRat& b) {
    if (a == 0) return abs(b);
    if (b == 0) return abs(a);
    BigInt n = gcd(numerator(a), numerator(b));
    BigInt d = lcm(denominator(a), denominator(b));
    return BigRat(n, d);
}
} // namespace

const char* sym_name(Sym s) { return kSymNames[s]; }

bool GrlexGreater::operator()(const Mono& a, const Mono& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;  // lexicographic on the fixed symbol order, P heaviest
}

SymPoly SymPoly::constant(BigRat c) {
    SymPoly p;
    if (c != 0) p.terms_.emplace(Mono{}, std::move(c));
    return p;
}

SymPoly SymPoly::symbol(Sym s, int power) {
    SymPoly p;
    if (power == 0) return from_int(1);
    Mono m{};
    m[s] = static_cast<std::uint16_t>(power);
    p.terms_.emplace(m, BigRat(1));
    return p;
}

bool SymPoly::is_rational_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Mono{});
}

int SymPoly::degree(Sym s) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m[s]));
    return d;
}

SymPoly SymPoly::operator-() const {
    SymPoly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

void SymPoly::add_term(const Mono& m, BigRat c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, std::move(c));
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

SymPoly& SymPoly::operator+=(const SymPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

SymPoly operator*(const SymPoly& a, const SymPoly& b) {
    SymPoly r;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Mono m;
            for (int i = 0; i < kNumSyms; ++i)
                m[i] = static_cast<std::uint16_t>(ma[i] + mb[i]);
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

SymPoly SymPoly::operator*(const BigRat& c) const {
    SymPoly r;
    if (c == 0) return r;
    for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
    return r;
}

SymPoly SymPoly::pow(unsigned n) const {
    SymPoly acc = from_int(1);
    SymPoly base = *this;
    while (n > 0) {
        if (n & 1u) acc = acc * base;
        base = base * base;
        n >>= 1u;
    }
    return acc;
}

std::vector<SymPoly> SymPoly::coefficients(Sym s) const {
    if (is_zero()) return {};
    std::vector<SymPoly> out(static_cast<std::size_t>(degree(s)) + 1);
    for (const auto& [m, c] : terms_) {
        Mono r = m;
        int k = r[s];
        r[s] = 0;
        out[k].add_term(r, c);
    }
    return out;
}

SymPoly SymPoly::leading_coefficient(Sym s) const {
    auto cs = coefficients(s);
    return cs.empty() ? SymPoly() : cs.back();
}

SymPoly SymPoly::derivative(Sym s) const {
    SymPoly r;
    for (const auto& [m, c] : terms_) {
        if (m[s] == 0) continue;
        Mono d = m;
        d[s] -= 1;
        r.add_term(d, c * m[s]);
    }
    return r;
}

SymPoly SymPoly::substituted(Sym s, const SymPoly& value) const {
    std::vector<SymPoly> powers{from_int(1)};
    SymPoly r;
    for (const auto& [m, c] : terms_) {
        int k = m[s];
        while (static_cast<int>(powers.size()) <= k)
            powers.push_back(powers.back() * value);
        Mono rest = m;
        rest[s] = 0;
        SymPoly t;
        t.terms_.emplace(rest, c);
        r += t * powers[k];
    }
    return r;
}

std::optional<SymPoly> SymPoly::divided_exactly(const SymPoly& b) const {
    if (b.is_zero()) return std::nullopt;
    SymPoly rem = *this, quot;
    const auto& lb = *b.terms_.begin();
    while (!rem.is_zero()) {
        const auto& lr = *rem.terms_.begin();
        Mono qm;
        for (int i = 0; i < kNumSyms; ++i) {
            if (lr.first[i] < lb.first[i]) return std::nullopt;
            qm[i] = static_cast<std::uint16_t>(lr.first[i] - lb.first[i]);
        }
        BigRat qc = lr.second / lb.second;
        SymPoly t;
        t.terms_.emplace(qm, qc);
        quot += t;
        rem -= t * b;
    }
    return quot;
}

BigRat SymPoly::evaluate(const std::array<BigRat, kNumSyms>& point) const {
    BigRat acc = 0;
    for (const auto& [m, c] : terms_) {
        BigRat t = c;
        for (int i = 0; i < kNumSyms; ++i)
            for (int k = 0; k < m[i]; ++k) t *= point[i];
        acc += t;
    }
    return acc;
}

BigRat SymPoly::rational_content() const {
    BigRat g = 0;
    for (const auto& [m, c] : terms_) g = rat_gcd(g, c);
    return g;
}

std::string SymPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        BigRat a = abs(c);
        bool neg = c < 0;
        std::string mono;
        for (int i = 0; i < kNumSyms; ++i) {
            if (m[i] == 0) continue;
            if (!mono.empty()) mono += '*';
            mono += kSymNames[i];
            if (m[i] > 1) mono += '^' + std::to_string(m[i]);
        }
        std::string coeff = numerator(a).str();
        if (denominator(a) != 1) coeff += '/' + denominator(a).str();
        std::string body;
        if (mono.empty()) body = coeff;
        else if (a == 1) body = mono;
        else body = coeff + '*' + mono;
        if (first) {
            out += (neg ? "-" : "") + body;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + body;
        }
    }
    return out;
}

SymPoly SymPoly::parse(const std::string& text) {
    SymPoly out;
    std::size_t i = 0;
    auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    bool first = true;
    while (true) {
        skip();
        if (i >= text.size()) break;
        int sign = 1;
        if (text[i] == '+') { ++i; }
        else if (text[i] == '-') { sign = -1; ++i; }
        else if (!first) throw Error("SymPoly::parse: expected '+' or '-'");
        first = false;
        skip();
        BigRat coeff = 1;
        bool saw_coeff = false;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            BigInt numv(text.substr(i, j - i));
            i = j;
            BigInt denv = 1;
            if (i < text.size() && text[i] == '/') {
                ++i;
                j = i;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                denv = BigInt(text.substr(i, j - i));
                i = j;
            }
            coeff = BigRat(numv, denv);
            saw_coeff = true;
        }
        Mono m{};
        bool saw_sym = false;
        while (true) {
            skip();
            if (i < text.size() && text[i] == '*') { ++i; skip(); }
            if (i >= text.size() || !std::isalpha(static_cast<unsigned char>(text[i]))) break;
            int best = -1;
            std::size_t best_len = 0;
            for (int k = 0; k < kNumSyms; ++k) {
                std::size_t len = std::string(kSymNames[k]).size();
                if (text.compare(i, len, kSymNames[k]) == 0 && len > best_len) {
                    best = k; best_len = len;
                }
            }
            if (best < 0) throw Error("SymPoly::parse: unknown symbol near '" + text.substr(i, 4) + "'");
            i += best_len;
            int e = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                std::size_t j = i;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                e = std::stoi(text.substr(i, j - i));
                i = j;
            }
            m[best] = static_cast<std::uint16_t>(m[best] + e);
            saw_sym = true;
        }
        if (!saw_coeff && !saw_sym) throw Error("SymPoly::parse: empty term");
        out.add_term(m, sign < 0 ? BigRat(-coeff) : coeff);
    }
    return out;
}

// --- gcd machinery -----------------------------------------------------------

namespace {

Sym main_var(const SymPoly& a, const SymPoly& b) {
    for (int i = 0; i < kNumSyms; ++i) {
        Sym s = static_cast<Sym>(i);
        if (a.depends_on(s) || b.depends_on(s)) return s;
    }
    return SymP;  // unused: both constants
}

// Normalize to primitive form: integer coefficients, content 1, grlex-leading
// coefficient positive.
SymPoly make_primitive(const SymPoly& p) {
    if (p.is_zero()) return p;
    BigRat c = p.rational_content();
    SymPoly q = p * (BigRat(1) / c);
    if (q.terms().begin()->second < 0) q = -q;
    return q;
}

// One pseudo-division pass: remainder of lc(g)^k * f by g in variable x.
SymPoly pseudo_rem(SymPoly f, const SymPoly& g, Sym x) {
    const int dg = g.degree(x);
    const SymPoly lg = g.leading_coefficient(x);
    while (!f.is_zero()) {
        const int df = f.degree(x);
        if (df < dg) break;
        const SymPoly lf = f.leading_coefficient(x);
        SymPoly shift = SymPoly::symbol(x, df - dg);
        f = f * lg - g * (lf * shift);
    }
    return f;
}

} // namespace

SymPoly poly_gcd(const SymPoly& a, const SymPoly& b) {
    if (a.is_zero()) return make_primitive(b);
    if (b.is_zero()) return make_primitive(a);
    if (a.is_rational_constant() || b.is_rational_constant())
        return SymPoly::from_int(1);
    Sym x = main_var(a, b);

    auto content_along = [&](const SymPoly& p) {
        SymPoly g;
        for (const auto& c : p.coefficients(x))
            if (!c.is_zero()) g = poly_gcd(g, c);
        return g;
    };

    SymPoly ca = content_along(a), cb = content_along(b);
    SymPoly pa = *a.divided_exactly(ca), pb = *b.divided_exactly(cb);
    if (pa.degree(x) < pb.degree(x)) std::swap(pa, pb);

    while (!pb.is_zero()) {
        SymPoly r = pseudo_rem(pa, pb, x);
        pa = pb;
        if (r.is_zero()) {
            pb = SymPoly();
        } else {
            SymPoly cr = content_along(r);
            pb = *r.divided_exactly(cr);
        }
    }
    return make_primitive(poly_gcd(ca, cb) * pa);
}

SymPoly content_wrt(const SymPoly& e, Sym s) {
    if (e.is_zero()) return SymPoly();
    BigRat rc = e.rational_content();
    SymPoly g;
    for (const auto& c : e.coefficients(s))
        if (!c.is_zero()) g = poly_gcd(g, c);
    SymPoly content = g * rc;
    if (content.terms().begin()->second < 0) content = -content;
    return content;
}

// --- SymFrac -----------------------------------------------------------------

SymFrac::SymFrac(SymPoly n, SymPoly d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw DomainError("SymFrac: zero denominator");
    if (num_.is_zero()) {
        den_ = SymPoly::from_int(1);
        return;
    }
    SymPoly g = poly_gcd(num_, den_);
    if (!g.is_rational_constant() || g.rational_content() != 1) {
        num_ = *num_.divided_exactly(g);
        den_ = *den_.divided_exactly(g);
    }
    // monic-leading denominator
    BigRat lc = den_.terms().begin()->second;
    num_ = num_ * (BigRat(1) / lc);
    den_ = den_ * (BigRat(1) / lc);
}

SymFrac SymFrac::operator-() const {
    SymFrac r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

SymFrac operator+(const SymFrac& a, const SymFrac& b) {
    return SymFrac(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
SymFrac operator-(const SymFrac& a, const SymFrac& b) { return a + (-b); }
SymFrac operator*(const SymFrac& a, const SymFrac& b) {
    return SymFrac(a.num_ * b.num_, a.den_ * b.den_);
}
SymFrac operator/(const SymFrac& a, const SymFrac& b) {
    if (b.num_.is_zero()) throw DomainError("SymFrac: division by zero");
    return SymFrac(a.num_ * b.den_, a.den_ * b.num_);
}

SymFrac SymFrac::substituted(Sym s, const SymFrac& value) const {
    // Horner over powers of s in numerator and denominator.
    auto subst_poly = [&](const SymPoly& p) {
        auto cs = p.coefficients(s);
        if (cs.empty()) return SymFrac(SymPoly());
        SymFrac acc{SymPoly()};
        for (auto it = cs.rbegin(); it != cs.rend(); ++it)
            acc = acc * value + SymFrac(*it);
        return acc;
    };
    return subst_poly(num_) / subst_poly(den_);
}

BigRat SymFrac::evaluate(const std::array<BigRat, kNumSyms>& point) const {
    BigRat d = den_.evaluate(point);
    if (d == 0) throw DomainError("SymFrac: denominator vanishes at evaluation point");
    return num_.evaluate(point) / d;
}

std::string SymFrac::str() const {
    if (den_ == SymPoly::from_int(1)) return num_.str();
    return "(" + num_.str() + ") / (" + den_.str() + ")";
}

} // namespace cft
