#include <daosim/harness.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <numeric>
#include <thread>

namespace daosim {

Rational recency_share(const WeightVector& w, std::uint64_t newest)
{
    if (newest == 0 || newest > w.size())
        throw error(errc::validation_error, "recency share needs 1 <= s <= window length");
    Rational tail = 0;
    for (std::size_t i = w.size() - newest; i < w.size(); ++i)
        tail += w.weight(i);
    return tail / w.sum();
}

namespace {

struct SweepPoint {
    std::optional<WeightVector> weights;
    std::uint64_t span = 1;
};

std::vector<SweepPoint> sweep_points(const ScenarioConfig& c)
{
    std::vector<std::optional<WeightVector>> weights;
    std::vector<std::uint64_t> spans;
    if (c.sweep) {
        for (auto& w : c.sweep->all_weights())
            weights.emplace_back(std::move(w));
        spans = c.sweep->spans;
    }
    if (weights.empty()) {
        if (const auto* ws = std::get_if<WeightedSnapshot>(&c.mechanism))
            weights.emplace_back(ws->weights);
        else
            weights.emplace_back(std::nullopt);
    }
    if (spans.empty())
        spans.push_back(c.attack ? c.attack->span_blocks : 1);

    std::vector<SweepPoint> points;
    for (const auto& w : weights)
        for (auto span : spans)
            points.push_back({w, span});
    return points;
}

bool wants(const ScenarioConfig& c, std::string_view metric)
{
    return !c.sweep || c.sweep->wants(metric);
}

Direction honest_vote(const ScenarioConfig& c, const MechanismSpec& spec, const Ledger& base, PowerStats& stats)
{
    Ledger ledger = base;
    Proposal p = Proposal::submit(c.proposal, ledger.head_height());
    p.begin_voting(c.proposal.vote_end);
    for (const auto& b : honest_ballots(c))
        p.cast_ballot(b);
    ledger.advance_to(c.proposal.vote_end - 1);
    ledger.open_block();
    const Tally t = tally(p, spec, ledger);
    stats = t.stats;
    return decide(t.v_a, t.v_d, c.proposal.rule);
}

ReportRow evaluate(const ScenarioConfig& c, const Ledger& ledger, const SweepPoint& point)
{
    const auto start = std::chrono::steady_clock::now();
    MechanismSpec spec = c.mechanism;
    if (point.weights)
        spec = WeightedSnapshot{*point.weights};

    ReportRow row;
    row.scenario_id = c.id;
    row.mechanism = describe(spec);
    row.weights = point.weights;
    row.span = point.span;

    PowerStats stats;
    if (c.attack) {
        AttackScenario scenario = make_attack(c, *c.attack);
        scenario.span_blocks = point.span;
        const AttackOutcome outcome = run_attack(scenario, spec, ledger);
        row.succeeded = outcome.succeeded;
        stats = outcome.stats;
        if (wants(c, "carry_cost"))
            row.carry_cost = outcome.carry_cost;
        if (wants(c, "min_flip_capital")) {
            try {
                row.min_flip_capital = min_flip_capital(scenario, point.span, spec, ledger);
                row.flip_status = FlipCapital::found;
                if (row.carry_cost) {
                    scenario.budget = row.min_flip_capital;
                    row.carry_cost = run_attack(scenario, spec, ledger).carry_cost;
                }
            } catch (const error& e) {
                if (e.code() != errc::unreachable)
                    throw;
                row.flip_status = FlipCapital::unreachable;
                row.carry_cost.reset();
            }
        }
    } else {
        row.succeeded = honest_vote(c, spec, ledger, stats) == Direction::approve;
    }
    if (wants(c, "power_evals"))
        row.power_evals = stats.power_evaluations;
    if (point.weights && wants(c, "recency_share"))
        row.recency_share = recency_share(*point.weights, c.sweep ? c.sweep->recency_newest : 1);

    const auto elapsed = std::chrono::steady_clock::now() - start;
    row.wall_time_ms = std::chrono::duration<double, std::milli>(elapsed).count();
    return row;
}

} // namespace

std::vector<ReportRow> run(const ScenarioConfig& c, const RunOptions& options)
{
    try {
        validate(c);
        const Ledger ledger = build_ledger(c);
        const auto points = sweep_points(c);
        std::vector<ReportRow> rows(points.size());

        const unsigned workers = std::clamp<unsigned>(options.workers, 1, static_cast<unsigned>(points.size()));
        if (workers == 1) {
            for (std::size_t i = 0; i < points.size(); ++i)
                rows[i] = evaluate(c, ledger, points[i]);
            return rows;
        }

        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> failures(points.size());
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
                        try {
                            rows[i] = evaluate(c, ledger, points[i]);
                        } catch (...) {
                            failures[i] = std::current_exception();
                        }
                    }
                });
        }
        for (const auto& f : failures)
            if (f)
                std::rethrow_exception(f);
        return rows;
    } catch (const error& e) {
        throw error(e.code(), "scenario " + c.id + ": " + e.what());
    }
}

std::vector<ReportRow> run_all(std::span<const ScenarioConfig> configs, const RunOptions& options)
{
    std::vector<std::size_t> order(configs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return configs[a].id < configs[b].id; });

    std::vector<ReportRow> rows;
    for (auto i : order) {
        auto part = run(configs[i], options);
        rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return rows;
}

} // namespace daosim
