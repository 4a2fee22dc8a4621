#include "causal/rational.hpp"

#include "causal/error.hpp"

#include <cctype>

namespace causal {

namespace {

bool is_integer_text(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto s = trim(text);
    if (s.empty()) throw FormatError("empty rational");
    auto slash = s.find('/');
    auto num = trim(s.substr(0, slash));
    auto den = slash == std::string_view::npos ? std::string_view{"1"} : trim(s.substr(slash + 1));
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    if (!is_integer_text(num) || !is_integer_text(den) || den[0] == '-') {
        throw FormatError("malformed rational '" + std::string(text) + "'");
    }
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw FormatError("zero denominator in '" + std::string(text) + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value) {
    return value.get_str();
}

}  // namespace causal
