#include <daosim/mechanisms.hpp>

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace daosim {

std::uint64_t parse_decimal_micros(std::string_view text)
{
    const std::string shown{text};
    if (text.empty())
        throw error(errc::parse_error, "empty decimal");
    if (text.find(',') != std::string_view::npos)
        throw error(errc::parse_error, "ambiguous comma in '" + shown +
                                           "'; write the decimal point explicitly (e.g. 0.1)");
    if (text.front() == '-')
        throw error(errc::validation_error, "weights >= 0 violated by '" + shown + "'");
    if (text.front() == '+')
        text.remove_prefix(1);

    std::uint64_t whole = 0;
    std::uint64_t frac = 0;
    std::size_t frac_digits = 0;
    bool seen_point = false;
    bool seen_digit = false;
    for (char c : text) {
        if (c == '.' && !seen_point) {
            seen_point = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw error(errc::parse_error, "malformed decimal '" + shown + "'");
        seen_digit = true;
        const auto digit = static_cast<std::uint64_t>(c - '0');
        if (seen_point) {
            if (++frac_digits > 6)
                throw error(errc::parse_error, "more than six fractional digits in '" + shown + "'");
            frac = frac * 10 + digit;
        } else {
            if (whole > (UINT64_MAX / WeightVector::scale - digit) / 10)
                throw error(errc::parse_error, "decimal out of range '" + shown + "'");
            whole = whole * 10 + digit;
        }
    }
    if (!seen_digit)
        throw error(errc::parse_error, "malformed decimal '" + shown + "'");
    while (frac_digits++ < 6)
        frac *= 10;
    return whole * WeightVector::scale + frac;
}

WeightVector::WeightVector(std::vector<std::uint64_t> micros) : _micros{std::move(micros)}
{
    if (_micros.empty())
        throw error(errc::validation_error, "weight vector must not be empty");
    if (std::all_of(_micros.begin(), _micros.end(), [](auto m) { return m == 0; }))
        throw error(errc::validation_error, "weight vector needs at least one positive entry");
}

WeightVector WeightVector::parse(std::string_view text)
{
    std::vector<std::uint64_t> micros;
    std::istringstream in{std::string{text}};
    std::string token;
    while (in >> token)
        micros.push_back(parse_decimal_micros(token));
    return WeightVector{std::move(micros)};
}

Rational WeightVector::sum() const
{
    const std::uint64_t total = std::accumulate(_micros.begin(), _micros.end(), std::uint64_t{0});
    return Rational{total, scale};
}

WeightVector WeightVector::scaled(const Rational& c) const
{
    if (c <= 0)
        throw error(errc::validation_error, "weight scale factor must be positive");
    std::vector<std::uint64_t> out;
    out.reserve(_micros.size());
    for (auto m : _micros) {
        const Rational v = c * m;
        if (denominator(v) != 1)
            throw error(errc::validation_error, "scaled weight is not a multiple of 1e-6");
        out.push_back(static_cast<std::uint64_t>(numerator(v)));
    }
    return WeightVector{std::move(out)};
}

std::string WeightVector::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < _micros.size(); ++i) {
        if (i)
            out += ' ';
        out += format_decimal6(weight(i));
    }
    return out;
}

BlockHeight window_anchor(BlockHeight vote_start)
{
    if (vote_start == 0)
        throw error(errc::invalid_window, "voting cannot start at genesis");
    return vote_start - 1;
}

HoldingPeriodBook::HoldingPeriodBook(std::uint64_t period) : _period{period}
{
    if (period == 0)
        throw error(errc::validation_error, "holding period must be positive");
}

HoldingPeriodBook HoldingPeriodBook::from_ledger(const Ledger& ledger, std::uint64_t period, BlockHeight up_to)
{
    HoldingPeriodBook book{period};
    const Snapshot& genesis = ledger.snapshot_at(0);
    for (const auto& [d, amt] : genesis.balances)
        book.acquire(d, amt, 0);

    for (BlockHeight h = 1; h <= up_to; ++h) {
        const auto& before = ledger.snapshot_at(h - 1).balances;
        const auto& after = ledger.snapshot_at(h).balances;
        auto b = before.begin();
        auto a = after.begin();
        while (b != before.end() || a != after.end()) {
            if (a == after.end() || (b != before.end() && b->first < a->first)) {
                book.release(b->first, b->second);
                ++b;
            } else if (b == before.end() || a->first < b->first) {
                book.acquire(a->first, a->second, h);
                ++a;
            } else {
                if (a->second > b->second)
                    book.acquire(a->first, a->second - b->second, h);
                else if (b->second > a->second)
                    book.release(a->first, b->second - a->second);
                ++a;
                ++b;
            }
        }
    }
    return book;
}

void HoldingPeriodBook::acquire(const Address& d, Amount amt, BlockHeight height)
{
    if (amt.value() == 0)
        return;
    _entries[d].push_back({amt, height});
}

void HoldingPeriodBook::release(const Address& d, Amount amt)
{
    auto it = _entries.find(d);
    Amount held;
    if (it != _entries.end())
        for (const auto& lot : it->second)
            held += lot.amount;
    if (held < amt)
        throw error(errc::insufficient_balance, d.id + " holds fewer lots than released");
    if (amt.value() == 0)
        return;

    auto& lots = it->second;
    std::size_t consumed = 0;
    while (amt.value() > 0) {
        Lot& oldest = lots[consumed];
        const Amount take = std::min(oldest.amount, amt);
        oldest.amount -= take;
        amt -= take;
        if (oldest.amount.value() == 0)
            ++consumed;
    }
    lots.erase(lots.begin(), lots.begin() + static_cast<std::ptrdiff_t>(consumed));
    if (lots.empty())
        _entries.erase(it);
}

Amount HoldingPeriodBook::matured(const Address& d, BlockHeight now) const
{
    Amount total;
    for (const auto& lot : lots(d))
        if (lot.acquired + _period <= now)
            total += lot.amount;
    return total;
}

const std::vector<Lot>& HoldingPeriodBook::lots(const Address& d) const
{
    static const std::vector<Lot> none;
    const auto it = _entries.find(d);
    return it == _entries.end() ? none : it->second;
}

std::string describe(const MechanismSpec& spec)
{
    struct {
        std::string operator()(const CurrentBalance&) const { return "current_balance"; }
        std::string operator()(const SingleSnapshot& s) const
        {
            return s.at ? "single_snapshot(at=" + std::to_string(*s.at) + ")" : "single_snapshot";
        }
        std::string operator()(const WeightedSnapshot&) const { return "weighted_snapshot"; }
        std::string operator()(const HoldingPeriod& h) const
        {
            return "holding_period(H=" + std::to_string(h.period) + ")";
        }
        std::string operator()(const VoteEscrow& v) const
        {
            return "vote_escrow(max_lock=" + std::to_string(v.max_lock) + ")";
        }
    } visitor;
    return std::visit(visitor, spec);
}

Rational weighted_power(const Ledger& ledger, const Address& d, const WeightVector& w, BlockHeight anchor,
                        std::uint64_t* reads)
{
    const auto history = ledger.history_vector(d, w.size(), anchor, reads);
    boost::multiprecision::cpp_int dot = 0;
    for (std::size_t i = 0; i < history.size(); ++i)
        dot += boost::multiprecision::cpp_int{w.micros(i)} * history[i].value();
    return Rational{dot, WeightVector::scale};
}

Rational current_balance_power(const Ledger& ledger, const Address& d)
{
    return ledger.current_balance(d).to_rational();
}

Rational single_snapshot_power(const Ledger& ledger, const Address& d, BlockHeight at, std::uint64_t* reads)
{
    const Amount bal = ledger.snapshot_at(at).balance_of(d);
    if (reads)
        ++*reads;
    return bal.to_rational();
}

Rational holding_period_power(const HoldingPeriodBook& book, const Address& d, BlockHeight now)
{
    return book.matured(d, now).to_rational();
}

Rational vote_escrow_power(const LockPosition& position, BlockHeight now)
{
    if (now < position.created || now >= position.unlock_height)
        return 0;
    return Rational{position.locked.value()} * (position.unlock_height - now) / position.max_lock;
}

PowerEvaluator::PowerEvaluator(const MechanismSpec& spec, const Ledger& ledger, BlockHeight now)
    : _spec{spec}, _ledger{ledger}, _now{now}
{
    if (const auto* h = std::get_if<HoldingPeriod>(&_spec))
        _book = HoldingPeriodBook::from_ledger(_ledger, h->period, std::min(_now, _ledger.head_height()));
}

Rational PowerEvaluator::operator()(const Address& d)
{
    ++_stats.power_evaluations;
    auto* reads = &_stats.snapshot_reads;
    if (std::holds_alternative<CurrentBalance>(_spec))
        return current_balance_power(_ledger, d);
    if (const auto* s = std::get_if<SingleSnapshot>(&_spec))
        return single_snapshot_power(_ledger, d, s->at.value_or(_now), reads);
    if (const auto* w = std::get_if<WeightedSnapshot>(&_spec))
        return weighted_power(_ledger, d, w->weights, _now, reads);
    if (std::holds_alternative<HoldingPeriod>(_spec))
        return holding_period_power(*_book, d, _now);

    Rational total = 0;
    for (const auto& pos : _ledger.locks())
        if (pos.owner == d)
            total += vote_escrow_power(pos, _now);
    return total;
}

Rational power(const MechanismSpec& spec, const Ledger& ledger, const Address& d, BlockHeight now)
{
    PowerEvaluator eval{spec, ledger, now};
    return eval(d);
}

} // namespace daosim
