#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lonelybus {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Raised for out-of-range parameters or malformed configurations.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when an exhaustive enumeration would exceed the configured cap.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, BigInt required)
        : std::runtime_error(what), required_(std::move(required)) {}

    const BigInt& required() const { return required_; }

private:
    BigInt required_;
};

// Raised when a constructive map is handed an argument outside its domain.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Always "numerator/denominator", including "0/1" and "1/1".
inline std::string to_fraction_string(const Rational& q)
{
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline Rational parse_fraction(const std::string& text)
{
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(BigInt(text));
        }
        BigInt den(text.substr(slash + 1));
        if (den == 0) {
            throw InputError("zero denominator in '" + text + "'");
        }
        return Rational(BigInt(text.substr(0, slash)), den);
    } catch (const std::runtime_error&) {
        throw InputError("malformed fraction '" + text + "'");
    }
}

inline double to_double(const Rational& q)
{
    return q.convert_to<double>();
}

/// An exact probability in [0, 1].
class Probability {
public:
    Probability() = default;

    explicit Probability(Rational value) : value_(std::move(value))
    {
        if (value_ < 0 || value_ > 1) {
            throw std::domain_error("probability out of range: " + to_fraction_string(value_));
        }
    }

    static Probability ratio(const BigInt& favourable, const BigInt& total)
    {
        if (total <= 0) {
            throw std::domain_error("probability with empty sample space");
        }
        return Probability(Rational(favourable, total));
    }

    const Rational& value() const { return value_; }
    std::string str() const { return to_fraction_string(value_); }

    friend bool operator==(const Probability& a, const Probability& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Probability& a, const Probability& b)
    {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (b.value_ < a.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    Rational value_{0};
};

/// Pascal's triangle in arbitrary precision, grown on demand.
class BinomialTable {
public:
    explicit BinomialTable(std::size_t max_n = 0) { reserve(max_n); }

    void reserve(std::size_t max_n)
    {
        while (rows_.size() <= max_n) {
            const std::size_t i = rows_.size();
            std::vector<BigInt> row(i + 1, BigInt(1));
            for (std::size_t j = 1; j < i; ++j) {
                row[j] = rows_[i - 1][j - 1] + rows_[i - 1][j];
            }
            rows_.push_back(std::move(row));
        }
    }

    const BigInt& operator()(std::size_t n, std::size_t k)
    {
        static const BigInt zero{0};
        if (k > n) return zero;
        reserve(n);
        return rows_[n][k];
    }

private:
    std::vector<std::vector<BigInt>> rows_;
};

inline BigInt falling_factorial(std::int64_t n, std::int64_t count)
{
    BigInt out{1};
    for (std::int64_t i = 0; i < count; ++i) out *= (n - i);
    return out;
}

inline BigInt ipow(std::int64_t base, std::int64_t exponent)
{
    BigInt out{1};
    for (std::int64_t i = 0; i < exponent; ++i) out *= base;
    return out;
}

}  // namespace lonelybus
