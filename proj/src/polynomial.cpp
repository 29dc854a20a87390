#include "bclab/polynomial.hpp"

#include "bclab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace bclab {

namespace zpoly {

void trim(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const ZPoly& p) {
    for (std::size_t i = p.size(); i-- > 0;)
        if (p[i] != 0) return static_cast<int>(i);
    return -1;
}

ZPoly add(const ZPoly& a, const ZPoly& b) {
    ZPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

ZPoly sub(const ZPoly& a, const ZPoly& b) {
    ZPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

ZPoly derivative(const ZPoly& p) {
    if (p.size() <= 1) return {};
    ZPoly r(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * static_cast<unsigned long>(i);
    trim(r);
    return r;
}

mpz_class content(const ZPoly& p) {
    mpz_class g = 0;
    for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

ZPoly primitive(const ZPoly& p) {
    ZPoly r = p;
    trim(r);
    if (r.empty()) return r;
    mpz_class g = content(r);
    if (r.back() < 0) g = -g;
    for (auto& c : r) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return r;
}

bool divides(const ZPoly& b, const ZPoly& a, ZPoly* quotient) {
    ZPoly num = a;
    trim(num);
    ZPoly den = b;
    trim(den);
    if (den.empty()) return false;
    if (num.empty()) {
        if (quotient) quotient->clear();
        return true;
    }
    if (num.size() < den.size()) return false;
    ZPoly q(num.size() - den.size() + 1);
    const mpz_class& lead = den.back();
    for (std::size_t k = q.size(); k-- > 0;) {
        const mpz_class& top = num[k + den.size() - 1];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), lead.get_mpz_t())) return false;
        mpz_class f = top / lead;
        q[k] = f;
        for (std::size_t j = 0; j < den.size(); ++j) num[k + j] -= f * den[j];
    }
    for (const auto& c : num)
        if (c != 0) return false;
    if (quotient) {
        trim(q);
        *quotient = std::move(q);
    }
    return true;
}

QPoly to_q(const ZPoly& p) {
    QPoly r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i];
    return r;
}

QPoly rem(QPoly a, const ZPoly& b) {
    trim(a);
    const int db = degree(b);
    while (static_cast<int>(a.size()) - 1 >= db) {
        const std::size_t top = a.size() - 1;
        mpq_class f = a[top] / mpq_class(b[static_cast<std::size_t>(db)]);
        const std::size_t shift = top - static_cast<std::size_t>(db);
        for (int j = 0; j <= db; ++j) a[shift + static_cast<std::size_t>(j)] -= f * b[static_cast<std::size_t>(j)];
        a[top] = 0;
        trim(a);
    }
    return a;
}

static ZPoly from_q_primitive(const QPoly& p) {
    mpz_class l = 1;
    for (const auto& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    ZPoly r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i].get_num() * (l / p[i].get_den());
    return primitive(r);
}

ZPoly gcd(const ZPoly& a, const ZPoly& b) {
    ZPoly x = primitive(a), y = primitive(b);
    while (!y.empty()) {
        QPoly r = rem(to_q(x), y);
        x = std::move(y);
        y = from_q_primitive(r);
    }
    return primitive(x);
}

ZPoly substitute_square(const ZPoly& p) {
    if (p.empty()) return {};
    ZPoly r(2 * p.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i) r[2 * i] = p[i];
    return r;
}

mpq_class evaluate(const ZPoly& p, const mpq_class& x) {
    mpq_class acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

std::string to_string(const ZPoly& p) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = p.size(); i-- > 0;) {
        const mpz_class& c = p[i];
        if (c == 0) continue;
        mpz_class mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (i == 0 || mag != 1) os << mag.get_str();
        if (i >= 1) {
            if (mag != 1) os << "*";
            os << "x";
            if (i >= 2) os << "^" << i;
        }
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace zpoly

IntPolynomial IntPolynomial::from_ascending(ZPoly coeffs) {
    zpoly::trim(coeffs);
    if (coeffs.empty()) fail(ErrorCode::ZeroPolynomial, "polynomial is identically zero");
    if (coeffs.size() == 1) fail(ErrorCode::DegreeZero, "polynomial is a constant");
    return IntPolynomial(zpoly::primitive(coeffs));
}

IntPolynomial IntPolynomial::from_descending(std::vector<mpz_class> coeffs) {
    std::reverse(coeffs.begin(), coeffs.end());
    return from_ascending(std::move(coeffs));
}

std::vector<mpz_class> IntPolynomial::descending() const { return {coeffs_.rbegin(), coeffs_.rend()}; }

mpz_class IntPolynomial::height() const {
    mpz_class h = 0;
    for (const auto& c : coeffs_)
        if (abs(c) > h) h = abs(c);
    return h;
}

bool IntPolynomial::is_reciprocal() const { return std::equal(coeffs_.begin(), coeffs_.end(), coeffs_.rbegin()); }

bool IntPolynomial::has_only_even_powers() const {
    for (std::size_t i = 1; i < coeffs_.size(); i += 2)
        if (coeffs_[i] != 0) return false;
    return true;
}

std::string IntPolynomial::to_string() const { return zpoly::to_string(coeffs_); }

std::string IntPolynomial::to_csv() const {
    std::string out;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        out += coeffs_[i].get_str();
        if (i) out += ",";
    }
    return out;
}

namespace {

constexpr unsigned long kMaxExponent = 4096;

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    ZPoly parse() {
        ZPoly p = expression();
        skip_space();
        if (pos_ != text_.size()) error("unexpected character");
        return p;
    }

private:
    [[noreturn]] void error(const std::string& what) const {
        fail(ErrorCode::Syntax, what + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    ZPoly expression() {
        ZPoly acc;
        bool any = false;
        for (;;) {
            char c = peek();
            int sign = 1;
            if (c == '+' || c == '-') {
                sign = c == '-' ? -1 : 1;
                ++pos_;
            } else if (any) {
                break;
            }
            ZPoly t = term();
            acc = sign > 0 ? zpoly::add(acc, t) : zpoly::sub(acc, t);
            any = true;
        }
        return acc;
    }

    ZPoly term() {
        ZPoly acc = power();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                acc = zpoly::mul(acc, power());
            } else if (c == 'x' || c == 'X' || c == '(') {
                // implicit multiplication: "2x", "3(x+1)"
                acc = zpoly::mul(acc, power());
            } else {
                break;
            }
        }
        return acc;
    }

    ZPoly power() {
        ZPoly base = primary();
        if (peek() == '^') {
            ++pos_;
            skip_space();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) error("expected exponent");
            const std::string digits(text_.substr(start, pos_ - start));
            if (digits.size() > 5 || std::stoul(digits) > kMaxExponent) error("exponent too large");
            unsigned long e = std::stoul(digits);
            ZPoly r{mpz_class(1)};
            for (unsigned long i = 0; i < e; ++i) r = zpoly::mul(r, base);
            return r;
        }
        return base;
    }

    ZPoly primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            ZPoly inner = expression();
            if (peek() != ')') error("expected ')'");
            ++pos_;
            return inner;
        }
        if (c == 'x' || c == 'X') {
            ++pos_;
            return ZPoly{mpz_class(0), mpz_class(1)};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            ZPoly r{mpz_class(std::string(text_.substr(start, pos_ - start)))};
            zpoly::trim(r);
            return r;
        }
        if (c == '\0') error("unexpected end of input");
        error(std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

bool looks_like_list(std::string_view text) {
    if (text.find(',') == std::string_view::npos) return false;
    for (char c : text)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || std::isspace(static_cast<unsigned char>(c)) || c == ',' ||
              c == '+' || c == '-'))
            return false;
    return true;
}

ZPoly parse_list(std::string_view text) {
    std::vector<mpz_class> desc;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string field(text.substr(pos, comma - pos));
        field.erase(std::remove_if(field.begin(), field.end(), [](unsigned char ch) { return std::isspace(ch); }),
                    field.end());
        if (!field.empty() && field[0] == '+') field.erase(0, 1);
        bool ok = !field.empty();
        for (std::size_t i = 0; ok && i < field.size(); ++i)
            ok = std::isdigit(static_cast<unsigned char>(field[i])) || (i == 0 && field[i] == '-' && field.size() > 1);
        if (!ok) fail(ErrorCode::Syntax, "malformed coefficient \"" + field + "\" in \"" + std::string(text) + "\"");
        desc.emplace_back(field);
        pos = comma + 1;
    }
    return ZPoly(desc.rbegin(), desc.rend());
}

}  // namespace

IntPolynomial parse_polynomial(std::string_view text) {
    ZPoly p = looks_like_list(text) ? parse_list(text) : ExpressionParser(text).parse();
    return IntPolynomial::from_ascending(std::move(p));
}

}  // namespace bclab
