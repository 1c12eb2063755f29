#include "diffbound/rational.hpp"

#include <cctype>

namespace diffbound {

std::string to_string(const BigInt& n) { return n.str(); }

std::string to_string(const BigRat& q) {
    if (den(q) == 1) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

BigRat parse_rational(const std::string& text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    bool negative = false;
    if (i < n && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
    }
    std::size_t digits_start = i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == digits_start) throw ParseError("expected digits in rational", i);
    BigInt p(text.substr(digits_start, i - digits_start));
    BigInt q = 1;
    if (i < n && text[i] == '/') {
        ++i;
        std::size_t den_start = i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == den_start) throw ParseError("expected denominator digits", i);
        q = BigInt(text.substr(den_start, i - den_start));
        if (q == 0) throw ParseError("zero denominator", den_start);
    }
    if (i != n) throw ParseError("trailing characters after rational", i);
    BigRat r(p, q);
    return negative ? BigRat(-r) : r;
}

BigInt binomial(const BigInt& n, unsigned k) {
    if (n < 0) throw DimensionError("binomial needs n >= 0");
    if (n < k) return 0;
    BigInt result = 1;
    for (unsigned i = 1; i <= k; ++i) {
        result *= n - static_cast<int>(i) + 1;
        result /= static_cast<int>(i);  // exact at every step
    }
    return result;
}

BigInt common_denominator(const std::vector<BigRat>& values) {
    BigInt l = 1;
    for (const auto& v : values) l = lcm(l, den(v));
    return l;
}

}  // namespace diffbound
