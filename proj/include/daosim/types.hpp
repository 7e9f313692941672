#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace daosim {

/// Exact rational used for every voting-power quantity.
using Rational = boost::multiprecision::cpp_rational;

using BlockHeight = std::uint64_t;

enum class errc {
    block_already_open,
    no_open_block,
    insufficient_balance,
    no_outstanding_loan,
    unsealed_height,
    window_too_large,
    invalid_window,
    duplicate_vote,
    outside_window,
    wrong_state,
    timelock_not_elapsed,
    unreachable,
    insufficient_lead_time,
    invalid_lock,
    amount_overflow,
    parse_error,
    validation_error,
    io_error,
};

const char* to_string(errc code);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(what), _code{code}
    {
    }

    errc code() const noexcept { return _code; }

private:
    errc _code;
};

/// Account identifier. Equal ids name the same account.
struct Address {
    std::string id;

    Address() = default;
    explicit Address(std::string v) : id{std::move(v)} {}
    Address(const char* v) : id{v} {}

    auto operator<=>(const Address&) const = default;
    bool operator==(const Address&) const = default;
};

/// Non-negative count of base token units. Arithmetic is checked: it never
/// wraps and never goes below zero.
class Amount {
public:
    constexpr Amount() = default;
    constexpr explicit Amount(std::uint64_t v) : _value{v} {}

    constexpr std::uint64_t value() const noexcept { return _value; }

    Amount operator+(Amount o) const
    {
        if (_value > UINT64_MAX - o._value)
            throw error(errc::amount_overflow, "amount overflow");
        return Amount{_value + o._value};
    }

    Amount operator-(Amount o) const
    {
        if (o._value > _value)
            throw error(errc::insufficient_balance, "amount would go negative");
        return Amount{_value - o._value};
    }

    Amount& operator+=(Amount o) { return *this = *this + o; }
    Amount& operator-=(Amount o) { return *this = *this - o; }

    Rational to_rational() const { return Rational{_value}; }

    constexpr auto operator<=>(const Amount&) const = default;
    constexpr bool operator==(const Amount&) const = default;

private:
    std::uint64_t _value = 0;
};

/// Decimal rendering of a non-negative rational rounded half-up to 10^-6.
std::string format_decimal6(const Rational& r);

/// Parses "n", "n/d" or a plain decimal such as "0.66" exactly.
Rational parse_rational(std::string_view text);

/// "n" for integers, "n/d" otherwise.
std::string format_rational(const Rational& r);

/// Smallest integer >= r.
boost::multiprecision::cpp_int ceil_rational(const Rational& r);

} // namespace daosim

template<>
struct std::hash<daosim::Address> {
    std::size_t operator()(const daosim::Address& a) const noexcept
    {
        return std::hash<std::string>{}(a.id);
    }
};
