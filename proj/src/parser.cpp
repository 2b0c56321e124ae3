#include "hardylab/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

namespace hardylab {

ParseError::ParseError(std::size_t offset, const std::string& what)
    : std::runtime_error("offset " + std::to_string(offset) + ": " + what), offset_(offset)
{
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    FunctionExpr expression()
    {
        skip_ws();
        if (at_end())
            throw ParseError(pos_, "empty expression");
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            sign = peek() == '-' ? -1.0 : 1.0;
            ++pos_;
        }
        FunctionExpr out = term(sign);
        while (true) {
            skip_ws();
            if (at_end())
                break;
            const char c = peek();
            if (c != '+' && c != '-')
                throw ParseError(pos_, "expected '+', '-' or end of input");
            ++pos_;
            out = out + term(c == '-' ? -1.0 : 1.0);
        }
        return out;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    void skip_ws()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }

    void expect(std::string_view word)
    {
        skip_ws();
        if (src_.substr(pos_, word.size()) != word)
            throw ParseError(pos_, "expected '" + std::string(word) + "'");
        pos_ += word.size();
    }

    double number()
    {
        skip_ws();
        const std::size_t start = pos_;
        double sign = 1.0;
        if (!at_end() && (peek() == '+' || peek() == '-')) {
            sign = peek() == '-' ? -1.0 : 1.0;
            ++pos_;
        }
        if (at_end() || !(std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.'))
            throw ParseError(start, "expected a number");
        double v = 0.0;
        const char* first = src_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, src_.data() + src_.size(), v);
        if (ec != std::errc{} || !std::isfinite(v))
            throw ParseError(start, "number out of range");
        pos_ += static_cast<std::size_t>(ptr - first);
        return sign * v;
    }

    FunctionExpr term(double sign)
    {
        skip_ws();
        double coeff = sign;
        if (!at_end() && peek() != 'p') {
            coeff *= number();
            expect("*");
        }
        return cplx{coeff} * atom();
    }

    FunctionExpr atom()
    {
        skip_ws();
        const std::size_t start = pos_;
        if (src_.substr(pos_, 4) == "poly") {
            pos_ += 4;
            expect(":");
            std::vector<cplx> coeffs{number()};
            while (true) {
                skip_ws();
                if (at_end() || peek() != ',')
                    break;
                ++pos_;
                coeffs.emplace_back(number());
            }
            return FunctionExpr::polynomial(std::move(coeffs));
        }
        if (src_.substr(pos_, 3) == "pow") {
            pos_ += 3;
            expect(":");
            expect("omega");
            expect("=");
            const double omega = number();
            expect(",");
            expect("gamma");
            expect("=");
            const std::size_t gamma_at = pos_;
            const double gamma = number();
            if (!(gamma > 0.0))
                throw ParseError(gamma_at, "gamma must be > 0");
            return FunctionExpr::power(PowerSingularity::make(omega, gamma));
        }
        throw ParseError(start, "expected 'poly:' or 'pow:'");
    }
};

} // namespace

FunctionExpr parse_function(std::string_view src)
{
    return Parser(src).expression();
}

double parse_exponent(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    if (text == "inf")
        return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw std::invalid_argument("not a number or 'inf': '" + std::string(text) + "'");
    return v;
}

} // namespace hardylab
