#include <daosim/types.hpp>

namespace daosim {

const char* to_string(errc code)
{
    switch (code) {
    case errc::block_already_open: return "BlockAlreadyOpen";
    case errc::no_open_block: return "NoOpenBlock";
    case errc::insufficient_balance: return "InsufficientBalance";
    case errc::no_outstanding_loan: return "NoOutstandingLoan";
    case errc::unsealed_height: return "UnsealedHeight";
    case errc::window_too_large: return "WindowTooLarge";
    case errc::invalid_window: return "InvalidWindow";
    case errc::duplicate_vote: return "DuplicateVote";
    case errc::outside_window: return "OutsideWindow";
    case errc::wrong_state: return "WrongState";
    case errc::timelock_not_elapsed: return "TimelockNotElapsed";
    case errc::unreachable: return "Unreachable";
    case errc::insufficient_lead_time: return "InsufficientLeadTime";
    case errc::invalid_lock: return "InvalidLock";
    case errc::amount_overflow: return "AmountOverflow";
    case errc::parse_error: return "ParseError";
    case errc::validation_error: return "ValidationError";
    case errc::io_error: return "IoError";
    }
    return "Unknown";
}

Rational parse_rational(std::string_view text)
{
    using boost::multiprecision::cpp_int;
    const std::string shown{text};
    const auto bad = [&]() { return error(errc::parse_error, "malformed rational '" + shown + "'"); };
    if (text.find(',') != std::string_view::npos)
        throw error(errc::parse_error, "ambiguous comma in '" + shown + "'; write the decimal point explicitly");

    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const auto digits = [&](std::string_view part) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string_view::npos)
            throw bad();
        return cpp_int{std::string{part}};
    };

    Rational out;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const cpp_int den = digits(text.substr(slash + 1));
        if (den == 0)
            throw error(errc::parse_error, "zero denominator in '" + shown + "'");
        out = Rational{digits(text.substr(0, slash)), den};
    } else if (const auto point = text.find('.'); point != std::string_view::npos) {
        const auto whole = text.substr(0, point);
        const auto frac = text.substr(point + 1);
        if (whole.empty() && frac.empty())
            throw bad();
        const cpp_int w = whole.empty() ? cpp_int{0} : digits(whole);
        const cpp_int f = frac.empty() ? cpp_int{0} : digits(frac);
        const cpp_int scale = boost::multiprecision::pow(cpp_int{10}, static_cast<unsigned>(frac.size()));
        out = Rational{w * scale + f, scale};
    } else {
        out = Rational{digits(text)};
    }
    return negative ? Rational{-out} : out;
}

std::string format_rational(const Rational& r)
{
    if (denominator(r) == 1)
        return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

boost::multiprecision::cpp_int ceil_rational(const Rational& r)
{
    using boost::multiprecision::cpp_int;
    const cpp_int num = numerator(r);
    const cpp_int den = denominator(r);
    cpp_int q = num / den;
    if (q * den != num && num > 0)
        ++q;
    return q;
}

std::string format_decimal6(const Rational& r)
{
    using boost::multiprecision::cpp_int;
    if (r < 0)
        throw error(errc::validation_error, "format_decimal6 expects a non-negative value");
    const Rational scaled = r * 1000000 + Rational{1, 2};
    const cpp_int micros = numerator(scaled) / denominator(scaled);
    const cpp_int whole = micros / 1000000;
    std::string frac = cpp_int{micros % 1000000}.str();
    frac.insert(0, 6 - frac.size(), '0');
    return whole.str() + "." + frac;
}

} // namespace daosim
