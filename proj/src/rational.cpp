#include "gtp/rational.hpp"

#include <cctype>

#include "gtp/errors.hpp"

namespace gtp {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

Integer parse_integer_part(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        throw InputError("invalid rational literal: \"" + std::string(whole) + "\"");
    }
    Integer value{std::string(s)};
    return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer_part(text, text));
    }
    Integer num = parse_integer_part(text.substr(0, slash), text);
    Integer den = parse_integer_part(text.substr(slash + 1), text);
    if (den == 0) {
        throw InputError("invalid rational literal (zero denominator): \"" + std::string(text) +
                         "\"");
    }
    // The (num, den) constructor canonicalizes; the raw string one does not.
    return Rational(num, den);
}

std::string format_rational(const Rational& value) {
    if (denominator(value) == 1) {
        return numerator(value).str();
    }
    return numerator(value).str() + "/" + denominator(value).str();
}

std::vector<std::string> format_rationals(const std::vector<Rational>& values) {
    std::vector<std::string> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(format_rational(v));
    return out;
}

}  // namespace gtp
