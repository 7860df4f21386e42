#include "modelset/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace modelset {

BigInt floor_rational(const Rational& r) {
    BigInt num = numerator(r), den = denominator(r);
    BigInt q = num / den;
    if (num < 0 && q * den != num) --q;
    return q;
}

BigInt ceil_rational(const Rational& r) { return -floor_rational(-r); }

std::optional<Rational> parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) return std::nullopt;
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            BigInt num(s.substr(0, slash));
            BigInt den(s.substr(slash + 1));
            if (den == 0) return std::nullopt;
            return Rational(num, den);
        }
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
            if (tail.empty()) tail = "0";
            bool neg = !head.empty() && head[0] == '-';
            if (!head.empty() && (head[0] == '-' || head[0] == '+')) head = head.substr(1);
            if (head.empty()) head = "0";
            BigInt scale = 1;
            for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
            BigInt num = BigInt(head) * scale + BigInt(tail);
            Rational r(num, scale);
            return neg ? Rational(-r) : r;
        }
        return Rational(BigInt(s));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string rational_to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

}  // namespace modelset
