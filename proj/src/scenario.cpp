#include <daosim/scenario.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace daosim {

namespace {

struct Entry {
    std::size_t line = 0;
    std::string key;
    std::string value;
};

struct Section {
    std::size_t line = 0;
    std::vector<Entry> entries;
    std::vector<std::pair<std::size_t, std::string>> raw;
};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> words(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream in{std::string{s}};
    std::string w;
    while (in >> w)
        out.push_back(w);
    return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what)
{
    throw error(errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void invalid(const std::string& what)
{
    throw error(errc::validation_error, what);
}

std::uint64_t to_u64(std::size_t line, std::string_view field, std::string_view text)
{
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        if (!text.empty() && text.front() == '-')
            throw error(errc::validation_error,
                        "line " + std::to_string(line) + ": " + std::string{field} + " must be >= 0");
        parse_fail(line, std::string{field} + ": expected a non-negative integer, got '" + std::string{text} + "'");
    }
    return v;
}

Rational to_rational(std::size_t line, std::string_view field, std::string_view text)
{
    try {
        return parse_rational(text);
    } catch (const error& e) {
        parse_fail(line, std::string{field} + ": " + e.what());
    }
}

WeightVector to_weights(std::size_t line, std::string_view text)
{
    try {
        return WeightVector::parse(text);
    } catch (const error& e) {
        throw error(e.code(), "line " + std::to_string(line) + ": weights: " + e.what());
    }
}

Address to_address(std::size_t line, std::string_view field, std::string_view text)
{
    if (text.empty() || text.find_first_of(" \t,=[]#@") != std::string_view::npos)
        parse_fail(line, std::string{field} + ": invalid address '" + std::string{text} + "'");
    return Address{std::string{text}};
}

Direction to_direction(std::size_t line, std::string_view text)
{
    if (text == "approve")
        return Direction::approve;
    if (text == "disapprove")
        return Direction::disapprove;
    parse_fail(line, "expected approve or disapprove, got '" + std::string{text} + "'");
}

std::map<std::string, Section> split_sections(std::string_view text)
{
    static const std::set<std::string> known = {"scenario", "genesis", "script",   "generator", "mechanism",
                                                "proposal", "ballots", "attack",  "sweep"};
    std::map<std::string, Section> sections;
    Section* current = nullptr;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                parse_fail(line_no, "unterminated section header");
            const std::string name{trim(line.substr(1, line.size() - 2))};
            if (!known.contains(name))
                parse_fail(line_no, "unknown section [" + name + "]");
            if (sections.contains(name))
                parse_fail(line_no, "duplicate section [" + name + "]");
            current = &sections[name];
            current->line = line_no;
            continue;
        }
        if (!current)
            parse_fail(line_no, "content before the first section header");

        current->raw.emplace_back(line_no, std::string{line});
        const auto eq = line.find('=');
        if (eq != std::string_view::npos)
            current->entries.push_back(
                {line_no, std::string{trim(line.substr(0, eq))}, std::string{trim(line.substr(eq + 1))}});
    }
    return sections;
}

/// Key lookup that rejects unknown and repeated keys.
class Fields {
public:
    Fields(const Section& s, std::string name, std::set<std::string> allowed, std::set<std::string> repeatable = {})
        : _name{std::move(name)}
    {
        for (const auto& [line, raw] : s.raw)
            if (raw.find('=') == std::string::npos)
                parse_fail(line, "[" + _name + "] expects key = value");
        for (const auto& e : s.entries) {
            if (!allowed.contains(e.key))
                parse_fail(e.line, "unknown field '" + e.key + "' in [" + _name + "]");
            if (!repeatable.contains(e.key) && _seen.contains(e.key))
                parse_fail(e.line, "duplicate field '" + e.key + "' in [" + _name + "]");
            _seen.insert(e.key);
            _entries.push_back(e);
        }
    }

    const Entry* get(const std::string& key) const
    {
        for (const auto& e : _entries)
            if (e.key == key)
                return &e;
        return nullptr;
    }

    const Entry& require(const std::string& key, std::size_t section_line) const
    {
        const Entry* e = get(key);
        if (!e)
            parse_fail(section_line, "[" + _name + "] is missing field '" + key + "'");
        return *e;
    }

    std::vector<const Entry*> all(const std::string& key) const
    {
        std::vector<const Entry*> out;
        for (const auto& e : _entries)
            if (e.key == key)
                out.push_back(&e);
        return out;
    }

private:
    std::string _name;
    std::vector<Entry> _entries;
    std::set<std::string> _seen;
};

void parse_scenario_section(const Section& s, ScenarioConfig& c)
{
    const Fields f{s, "scenario", {"id", "seed", "total_supply"}};
    c.id = f.require("id", s.line).value;
    if (c.id.empty() || c.id.find_first_of(", \t") != std::string::npos)
        parse_fail(f.require("id", s.line).line, "scenario id must be a single token without commas");
    if (const auto* e = f.get("seed"))
        c.seed = to_u64(e->line, "seed", e->value);
    if (const auto* e = f.get("total_supply"))
        c.total_supply = Amount{to_u64(e->line, "total_supply", e->value)};
}

void parse_genesis(const Section& s, ScenarioConfig& c)
{
    for (const auto& [line, raw] : s.raw)
        if (raw.find('=') == std::string::npos)
            parse_fail(line, "[genesis] expects address = amount");
    for (const auto& e : s.entries)
        c.genesis.emplace_back(to_address(e.line, "genesis", e.key), Amount{to_u64(e.line, e.key, e.value)});
}

void parse_script(const Section& s, ScenarioConfig& c)
{
    for (const auto& [line, raw] : s.raw) {
        const auto w = words(raw);
        const auto expect = [&, line = line](std::size_t n) {
            if (w.size() != n)
                parse_fail(line, "'" + w[0] + "' takes " + std::to_string(n - 1) + " arguments");
        };
        ScriptAction a;
        const std::string& op = w[0];
        if (op == "open") {
            expect(1);
            a.op = ScriptOp::open;
        } else if (op == "seal") {
            expect(1);
            a.op = ScriptOp::seal;
        } else if (op == "advance") {
            expect(2);
            a.op = ScriptOp::advance;
            a.count = to_u64(line, "advance", w[1]);
        } else if (op == "transfer") {
            expect(4);
            a.op = ScriptOp::transfer;
            a.first = to_address(line, "transfer", w[1]);
            a.second = to_address(line, "transfer", w[2]);
            a.amount = Amount{to_u64(line, "transfer", w[3])};
        } else if (op == "borrow" || op == "repay") {
            expect(3);
            a.op = op == "borrow" ? ScriptOp::borrow : ScriptOp::repay;
            a.first = to_address(line, op, w[1]);
            a.amount = Amount{to_u64(line, op, w[2])};
        } else if (op == "lock") {
            expect(5);
            a.op = ScriptOp::lock;
            a.first = to_address(line, "lock", w[1]);
            a.amount = Amount{to_u64(line, "lock", w[2])};
            a.count = to_u64(line, "lock", w[3]);
            a.max_lock = to_u64(line, "lock", w[4]);
        } else {
            parse_fail(line, "unknown script action '" + op + "'");
        }
        c.script.push_back(std::move(a));
    }
}

void parse_generator(const Section& s, ScenarioConfig& c)
{
    const Fields f{s, "generator", {"holders", "min_balance", "max_balance", "prefix", "vote"}};
    GeneratorSpec g;
    const auto& holders = f.require("holders", s.line);
    g.holders = to_u64(holders.line, "holders", holders.value);
    if (const auto* e = f.get("min_balance"))
        g.min_balance = to_u64(e->line, "min_balance", e->value);
    if (const auto* e = f.get("max_balance"))
        g.max_balance = to_u64(e->line, "max_balance", e->value);
    if (const auto* e = f.get("prefix"))
        g.prefix = to_address(e->line, "prefix", e->value).id;
    if (const auto* e = f.get("vote")) {
        if (e->value == "none")
            g.vote = GeneratedVote::none;
        else if (e->value == "approve")
            g.vote = GeneratedVote::approve;
        else if (e->value == "disapprove")
            g.vote = GeneratedVote::disapprove;
        else if (e->value == "random")
            g.vote = GeneratedVote::random;
        else
            parse_fail(e->line, "vote: expected none, approve, disapprove or random");
    }
    c.generator = g;
}

void parse_mechanism(const Section& s, ScenarioConfig& c)
{
    const Fields f{s, "mechanism", {"kind", "weights", "at", "period", "max_lock"}};
    const auto& kind = f.require("kind", s.line);
    const auto only = [&](std::set<std::string> keys) {
        for (const char* k : {"weights", "at", "period", "max_lock"})
            if (const auto* e = f.get(k); e && !keys.contains(k))
                parse_fail(e->line, std::string{k} + " does not apply to mechanism " + kind.value);
    };
    if (kind.value == "current_balance") {
        only({});
        c.mechanism = CurrentBalance{};
    } else if (kind.value == "single_snapshot") {
        only({"at"});
        SingleSnapshot m;
        if (const auto* e = f.get("at"))
            m.at = to_u64(e->line, "at", e->value);
        c.mechanism = m;
    } else if (kind.value == "weighted_snapshot") {
        only({"weights"});
        const auto& w = f.require("weights", s.line);
        c.mechanism = WeightedSnapshot{to_weights(w.line, w.value)};
    } else if (kind.value == "holding_period") {
        only({"period"});
        const auto& e = f.require("period", s.line);
        c.mechanism = HoldingPeriod{to_u64(e.line, "period", e.value)};
    } else if (kind.value == "vote_escrow") {
        only({"max_lock"});
        const auto& e = f.require("max_lock", s.line);
        c.mechanism = VoteEscrow{to_u64(e.line, "max_lock", e.value)};
    } else {
        parse_fail(kind.line, "unknown mechanism kind '" + kind.value + "'");
    }
}

void parse_proposal(const Section& s, ScenarioConfig& c)
{
    const Fields f{s, "proposal",
                   {"id", "action", "proposer", "vote_start", "vote_end", "p", "min_participation", "timelock"}};
    ProposalParams& p = c.proposal;
    p.id = f.require("id", s.line).value;
    if (const auto* e = f.get("action"))
        p.action_tag = e->value;
    if (const auto* e = f.get("proposer"))
        p.proposer = to_address(e->line, "proposer", e->value);
    const auto& start = f.require("vote_start", s.line);
    p.vote_start = to_u64(start.line, "vote_start", start.value);
    const auto& end = f.require("vote_end", s.line);
    p.vote_end = to_u64(end.line, "vote_end", end.value);
    const auto& pe = f.require("p", s.line);
    p.rule.p = to_rational(pe.line, "p", pe.value);
    if (const auto* e = f.get("min_participation"))
        p.rule.min_participation = to_rational(e->line, "min_participation", e->value);
    if (const auto* e = f.get("timelock"))
        p.timelock_blocks = to_u64(e->line, "timelock", e->value);
}

void parse_ballots(const Section& s, ScenarioConfig& c)
{
    for (const auto& [line, raw] : s.raw)
        if (raw.find('=') == std::string::npos)
            parse_fail(line, "[ballots] expects voter = approve|disapprove [@ height]");
    for (const auto& e : s.entries) {
        Ballot b;
        b.voter = to_address(e.line, "ballot", e.key);
        std::string_view v = e.value;
        std::optional<BlockHeight> at;
        if (const auto atpos = v.find('@'); atpos != std::string_view::npos) {
            at = to_u64(e.line, "cast_at", trim(v.substr(atpos + 1)));
            v = trim(v.substr(0, atpos));
        }
        b.direction = to_direction(e.line, v);
        b.cast_at = at.value_or(c.proposal.vote_start);
        c.ballots.push_back(std::move(b));
    }
}

void parse_attack(const Section& s, ScenarioConfig& c)
{
    const Fields f{s, "attack", {"kind", "attacker", "budget", "own_holdings", "span", "carry_cost_rate", "source"}};
    AttackSpec a;
    const auto& kind = f.require("kind", s.line);
    if (kind.value == "direct_flash_loan")
        a.kind = AttackKind::direct_flash_loan;
    else if (kind.value == "sustained_manipulation")
        a.kind = AttackKind::sustained_manipulation;
    else
        parse_fail(kind.line, "unknown attack kind '" + kind.value + "'");
    const auto& attacker = f.require("attacker", s.line);
    a.attacker = to_address(attacker.line, "attacker", attacker.value);
    const auto& budget = f.require("budget", s.line);
    a.budget = Amount{to_u64(budget.line, "budget", budget.value)};
    if (const auto* e = f.get("own_holdings"))
        a.own_holdings = Amount{to_u64(e->line, "own_holdings", e->value)};
    if (const auto* e = f.get("span"))
        a.span_blocks = to_u64(e->line, "span", e->value);
    if (const auto* e = f.get("carry_cost_rate"))
        a.carry_cost_rate = to_rational(e->line, "carry_cost_rate", e->value);
    if (const auto* e = f.get("source"))
        a.funding_source = to_address(e->line, "source", e->value);
    c.attack = a;
}

void parse_sweep(const Section& s, ScenarioConfig& c)
{
    const Fields f{s, "sweep", {"weights", "tilt", "spans", "outputs", "max_runs", "recency_newest"}, {"weights"}};
    SweepSpec sw;
    for (const auto* e : f.all("weights"))
        sw.weight_vectors.push_back(to_weights(e->line, e->value));
    if (const auto* e = f.get("tilt")) {
        const auto w = words(e->value);
        if (w.size() < 2)
            parse_fail(e->line, "tilt expects a window length followed by ratios");
        TiltFamily t;
        t.length = to_u64(e->line, "tilt", w[0]);
        for (std::size_t i = 1; i < w.size(); ++i) {
            try {
                t.ratio_micros.push_back(parse_decimal_micros(w[i]));
            } catch (const error& err) {
                throw error(err.code(), "line " + std::to_string(e->line) + ": tilt: " + err.what());
            }
        }
        sw.tilt = t;
    }
    if (const auto* e = f.get("spans"))
        for (const auto& w : words(e->value))
            sw.spans.push_back(to_u64(e->line, "spans", w));
    if (const auto* e = f.get("outputs"))
        sw.outputs = words(e->value);
    if (const auto* e = f.get("max_runs"))
        sw.max_runs = to_u64(e->line, "max_runs", e->value);
    if (const auto* e = f.get("recency_newest"))
        sw.recency_newest = to_u64(e->line, "recency_newest", e->value);
    c.sweep = sw;
}

const char* op_name(ScriptOp op)
{
    switch (op) {
    case ScriptOp::open: return "open";
    case ScriptOp::transfer: return "transfer";
    case ScriptOp::borrow: return "borrow";
    case ScriptOp::repay: return "repay";
    case ScriptOp::lock: return "lock";
    case ScriptOp::seal: return "seal";
    case ScriptOp::advance: return "advance";
    }
    return "?";
}

const char* vote_name(GeneratedVote v)
{
    switch (v) {
    case GeneratedVote::none: return "none";
    case GeneratedVote::approve: return "approve";
    case GeneratedVote::disapprove: return "disapprove";
    case GeneratedVote::random: return "random";
    }
    return "?";
}

std::string micros_text(std::uint64_t m)
{
    return format_decimal6(Rational{m, WeightVector::scale});
}

} // namespace

std::vector<WeightVector> TiltFamily::expand() const
{
    std::vector<WeightVector> out;
    for (auto rm : ratio_micros) {
        const double r = static_cast<double>(rm) / WeightVector::scale;
        std::vector<double> raw(length);
        double total = 0;
        for (std::uint64_t i = 0; i < length; ++i)
            total += raw[i] = std::pow(r, static_cast<double>(i));
        std::vector<std::uint64_t> micros(length);
        for (std::uint64_t i = 0; i < length; ++i)
            micros[i] = static_cast<std::uint64_t>(std::llround(raw[i] / total * WeightVector::scale));
        out.emplace_back(std::move(micros));
    }
    return out;
}

std::vector<WeightVector> SweepSpec::all_weights() const
{
    std::vector<WeightVector> out = weight_vectors;
    if (tilt)
        for (auto& w : tilt->expand())
            out.push_back(std::move(w));
    return out;
}

bool SweepSpec::wants(std::string_view metric) const
{
    return outputs.empty() || std::find(outputs.begin(), outputs.end(), metric) != outputs.end();
}

void validate(const ScenarioConfig& c)
{
    if (c.id.empty())
        invalid("scenario id must not be empty");

    std::set<Address> seen;
    Amount supply;
    for (const auto& [d, amt] : c.genesis) {
        if (!seen.insert(d).second)
            invalid("genesis lists " + d.id + " twice");
        supply += amt;
    }
    if (c.generator) {
        const auto& g = *c.generator;
        if (g.min_balance > g.max_balance)
            invalid("generator min_balance <= max_balance violated");
        if (g.holders > 1000000)
            invalid("generator holders <= 1000000 violated");
        const auto all = genesis_balances(c);
        for (auto it = all.begin() + static_cast<std::ptrdiff_t>(c.genesis.size()); it != all.end(); ++it) {
            if (!seen.insert(it->first).second)
                invalid("generated holder " + it->first.id + " collides with a genesis address");
            supply += it->second;
        }
    }
    if (c.total_supply && *c.total_supply != supply)
        invalid("total_supply " + std::to_string(c.total_supply->value()) + " != sum of genesis balances " +
                std::to_string(supply.value()));

    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, HoldingPeriod>) {
                if (m.period == 0)
                    invalid("holding period H >= 1 violated");
            } else if constexpr (std::is_same_v<M, VoteEscrow>) {
                if (m.max_lock == 0)
                    invalid("vote escrow max_lock >= 1 violated");
                for (const auto& a : c.script)
                    if (a.op == ScriptOp::lock && a.max_lock != m.max_lock)
                        invalid("lock max_lock differs from the mechanism's max_lock");
            }
        },
        c.mechanism);

    const auto& p = c.proposal;
    if (p.id.empty())
        invalid("proposal id must not be empty");
    p.rule.validate();
    if (p.vote_start > p.vote_end)
        invalid("proposal vote_start <= vote_end violated");
    if (p.vote_start == 0)
        invalid("proposal vote_start >= 1 violated");

    std::set<Address> voters;
    for (const auto& b : honest_ballots(c)) {
        if (!voters.insert(b.voter).second)
            invalid("one ballot per address violated by " + b.voter.id);
        if (b.cast_at < p.vote_start || b.cast_at > p.vote_end)
            invalid("ballot of " + b.voter.id + " cast outside [vote_start, vote_end]");
    }

    if (c.attack) {
        const auto& a = *c.attack;
        if (a.span_blocks == 0)
            invalid("attack span >= 1 violated");
        if (a.carry_cost_rate < 0)
            invalid("attack carry_cost_rate >= 0 violated");
        if (voters.contains(a.attacker))
            invalid("attacker " + a.attacker.id + " also casts an honest ballot");
    }

    if (c.sweep) {
        const auto& s = *c.sweep;
        const auto weights = s.all_weights();
        if (s.weight_vectors.empty() && !s.tilt && s.spans.empty())
            invalid("sweep needs at least one non-empty axis");
        if (s.tilt && (s.tilt->length == 0 || s.tilt->ratio_micros.empty()))
            invalid("sweep tilt needs a positive length and at least one ratio");
        if (!weights.empty() && !std::holds_alternative<WeightedSnapshot>(c.mechanism))
            invalid("sweeping weight vectors requires mechanism weighted_snapshot");
        for (auto span : s.spans)
            if (span == 0)
                invalid("sweep spans >= 1 violated");
        for (const auto& o : s.outputs)
            if (std::find(std::begin(known_metrics), std::end(known_metrics), o) == std::end(known_metrics))
                invalid("unknown sweep output '" + o + "'");
        const std::uint64_t runs = std::max<std::size_t>(weights.size(), 1) * std::max<std::size_t>(s.spans.size(), 1);
        if (runs > s.max_runs)
            invalid("sweep of " + std::to_string(runs) + " runs exceeds max_runs " + std::to_string(s.max_runs));
        if (s.recency_newest == 0)
            invalid("sweep recency_newest >= 1 violated");
        for (const auto& w : weights)
            if (s.recency_newest > w.size())
                invalid("sweep recency_newest exceeds a weight vector's length");
    }
}

ScenarioConfig parse_scenario(std::string_view text)
{
    const auto sections = split_sections(text);
    const auto section = [&](const char* name) -> const Section* {
        const auto it = sections.find(name);
        return it == sections.end() ? nullptr : &it->second;
    };
    for (const char* required : {"scenario", "mechanism", "proposal"})
        if (!section(required))
            throw error(errc::parse_error, "line 0: missing section [" + std::string{required} + "]");

    ScenarioConfig c;
    parse_scenario_section(*section("scenario"), c);
    if (const auto* s = section("genesis"))
        parse_genesis(*s, c);
    if (const auto* s = section("generator"))
        parse_generator(*s, c);
    if (const auto* s = section("script"))
        parse_script(*s, c);
    parse_mechanism(*section("mechanism"), c);
    parse_proposal(*section("proposal"), c);
    if (const auto* s = section("ballots"))
        parse_ballots(*s, c);
    if (const auto* s = section("attack"))
        parse_attack(*s, c);
    if (const auto* s = section("sweep"))
        parse_sweep(*s, c);
    validate(c);
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw error(errc::io_error, "cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const error& e) {
        throw error(e.code(), path.string() + ": " + e.what());
    }
}

std::string serialize_scenario(const ScenarioConfig& c)
{
    std::ostringstream out;
    out << "[scenario]\nid = " << c.id << "\nseed = " << c.seed << "\n";
    if (c.total_supply)
        out << "total_supply = " << c.total_supply->value() << "\n";

    if (!c.genesis.empty()) {
        out << "\n[genesis]\n";
        for (const auto& [d, amt] : c.genesis)
            out << d.id << " = " << amt.value() << "\n";
    }
    if (c.generator) {
        const auto& g = *c.generator;
        out << "\n[generator]\nholders = " << g.holders << "\nmin_balance = " << g.min_balance
            << "\nmax_balance = " << g.max_balance << "\nprefix = " << g.prefix << "\nvote = " << vote_name(g.vote)
            << "\n";
    }
    if (!c.script.empty()) {
        out << "\n[script]\n";
        for (const auto& a : c.script) {
            out << op_name(a.op);
            switch (a.op) {
            case ScriptOp::open:
            case ScriptOp::seal: break;
            case ScriptOp::advance: out << ' ' << a.count; break;
            case ScriptOp::transfer: out << ' ' << a.first.id << ' ' << a.second.id << ' ' << a.amount.value(); break;
            case ScriptOp::borrow:
            case ScriptOp::repay: out << ' ' << a.first.id << ' ' << a.amount.value(); break;
            case ScriptOp::lock:
                out << ' ' << a.first.id << ' ' << a.amount.value() << ' ' << a.count << ' ' << a.max_lock;
                break;
            }
            out << "\n";
        }
    }

    out << "\n[mechanism]\n";
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, CurrentBalance>) {
                out << "kind = current_balance\n";
            } else if constexpr (std::is_same_v<M, SingleSnapshot>) {
                out << "kind = single_snapshot\n";
                if (m.at)
                    out << "at = " << *m.at << "\n";
            } else if constexpr (std::is_same_v<M, WeightedSnapshot>) {
                out << "kind = weighted_snapshot\nweights = " << m.weights.to_string() << "\n";
            } else if constexpr (std::is_same_v<M, HoldingPeriod>) {
                out << "kind = holding_period\nperiod = " << m.period << "\n";
            } else {
                out << "kind = vote_escrow\nmax_lock = " << m.max_lock << "\n";
            }
        },
        c.mechanism);

    const auto& p = c.proposal;
    out << "\n[proposal]\nid = " << p.id << "\n";
    if (!p.action_tag.empty())
        out << "action = " << p.action_tag << "\n";
    if (!p.proposer.id.empty())
        out << "proposer = " << p.proposer.id << "\n";
    out << "vote_start = " << p.vote_start << "\nvote_end = " << p.vote_end << "\np = " << format_rational(p.rule.p)
        << "\n";
    if (p.rule.min_participation)
        out << "min_participation = " << format_rational(*p.rule.min_participation) << "\n";
    out << "timelock = " << p.timelock_blocks << "\n";

    if (!c.ballots.empty()) {
        out << "\n[ballots]\n";
        for (const auto& b : c.ballots)
            out << b.voter.id << " = " << to_string(b.direction) << " @ " << b.cast_at << "\n";
    }
    if (c.attack) {
        const auto& a = *c.attack;
        out << "\n[attack]\nkind = " << to_string(a.kind) << "\nattacker = " << a.attacker.id
            << "\nbudget = " << a.budget.value() << "\nown_holdings = " << a.own_holdings.value()
            << "\nspan = " << a.span_blocks << "\ncarry_cost_rate = " << format_rational(a.carry_cost_rate)
            << "\nsource = " << a.funding_source.id << "\n";
    }
    if (c.sweep) {
        const auto& s = *c.sweep;
        out << "\n[sweep]\n";
        for (const auto& w : s.weight_vectors)
            out << "weights = " << w.to_string() << "\n";
        if (s.tilt) {
            out << "tilt = " << s.tilt->length;
            for (auto r : s.tilt->ratio_micros)
                out << ' ' << micros_text(r);
            out << "\n";
        }
        if (!s.spans.empty()) {
            out << "spans =";
            for (auto span : s.spans)
                out << ' ' << span;
            out << "\n";
        }
        if (!s.outputs.empty()) {
            out << "outputs =";
            for (const auto& o : s.outputs)
                out << ' ' << o;
            out << "\n";
        }
        out << "max_runs = " << s.max_runs << "\nrecency_newest = " << s.recency_newest << "\n";
    }
    return out.str();
}

std::vector<std::pair<Address, Amount>> genesis_balances(const ScenarioConfig& c)
{
    auto out = c.genesis;
    if (c.generator) {
        const auto& g = *c.generator;
        std::mt19937_64 rng{c.seed};
        const std::uint64_t span = g.max_balance - g.min_balance + 1;
        const auto width = std::to_string(g.holders).size();
        for (std::uint64_t i = 0; i < g.holders; ++i) {
            std::string n = std::to_string(i);
            n.insert(0, width - n.size(), '0');
            const std::uint64_t bal = span == 0 ? g.min_balance + rng() : g.min_balance + rng() % span;
            out.emplace_back(Address{g.prefix + n}, Amount{bal});
        }
    }
    return out;
}

std::vector<Ballot> honest_ballots(const ScenarioConfig& c)
{
    auto out = c.ballots;
    if (c.generator && c.generator->vote != GeneratedVote::none) {
        const auto& g = *c.generator;
        // votes use their own stream so balances do not shift when vote changes
        std::mt19937_64 rng{c.seed ^ 0x9e3779b97f4a7c15ULL};
        const auto width = std::to_string(g.holders).size();
        for (std::uint64_t i = 0; i < g.holders; ++i) {
            std::string n = std::to_string(i);
            n.insert(0, width - n.size(), '0');
            Direction d = g.vote == GeneratedVote::approve ? Direction::approve : Direction::disapprove;
            if (g.vote == GeneratedVote::random)
                d = (rng() & 1) ? Direction::approve : Direction::disapprove;
            out.push_back({Address{g.prefix + n}, d, c.proposal.vote_start});
        }
    }
    return out;
}

Ledger build_ledger(const ScenarioConfig& c)
{
    const auto balances = genesis_balances(c);
    Ledger ledger = Ledger::genesis(balances);
    if (c.total_supply && ledger.total_supply() != *c.total_supply)
        throw error(errc::validation_error, "total_supply " + std::to_string(c.total_supply->value()) +
                                                " != sum of genesis balances " +
                                                std::to_string(ledger.total_supply().value()));
    for (const auto& a : c.script) {
        switch (a.op) {
        case ScriptOp::open: ledger.open_block(); break;
        case ScriptOp::seal: ledger.seal_block(); break;
        case ScriptOp::advance: ledger.advance(a.count); break;
        case ScriptOp::transfer: ledger.transfer(a.first, a.second, a.amount); break;
        case ScriptOp::borrow: ledger.flash_borrow(a.first, a.amount); break;
        case ScriptOp::repay: ledger.flash_repay(a.first, a.amount); break;
        case ScriptOp::lock: ledger.lock(a.first, a.amount, a.count, a.max_lock); break;
        }
    }
    if (ledger.has_pending())
        ledger.seal_block();
    return ledger;
}

AttackScenario make_attack(const ScenarioConfig& c, const AttackSpec& a)
{
    AttackScenario s;
    s.kind = a.kind;
    s.attacker = a.attacker;
    s.budget = a.budget;
    s.own_holdings = a.own_holdings;
    s.span_blocks = a.span_blocks;
    s.carry_cost_rate = a.carry_cost_rate;
    s.funding_source = a.funding_source;
    s.target_proposal = c.proposal;
    s.honest_ballots = honest_ballots(c);
    return s;
}

} // namespace daosim
