#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <daosim/scenario.hpp>

namespace daosim {

/// Share of weight mass on the `newest` most recent snapshots.
Rational recency_share(const WeightVector& w, std::uint64_t newest);

enum class FlipCapital { not_computed, found, unreachable };

/// One row per (scenario, sweep point).
struct ReportRow {
    std::string scenario_id;
    std::string mechanism;
    std::optional<WeightVector> weights;
    std::uint64_t span = 0;
    bool succeeded = false;
    FlipCapital flip_status = FlipCapital::not_computed;
    Amount min_flip_capital;
    /// At the minimal flipping budget when that was computed (empty if
    /// unreachable), otherwise at the configured budget.
    std::optional<Rational> carry_cost;
    std::optional<Rational> recency_share;
    std::optional<std::uint64_t> power_evals;
    double wall_time_ms = 0;
};

struct RunOptions {
    unsigned workers = 1;
};

/// Builds the ledger once, then evaluates every sweep point (weights x spans,
/// each axis defaulting to the scenario's own value). With an attack the row
/// reports the attack outcome; without one, whether the honest vote approved.
std::vector<ReportRow> run(const ScenarioConfig& config, const RunOptions& options = {});

/// Rows of several scenarios, ordered by scenario id then sweep point.
std::vector<ReportRow> run_all(std::span<const ScenarioConfig> configs, const RunOptions& options = {});

inline constexpr const char* csv_header =
    "scenario_id,mechanism,weights,span,succeeded,min_flip_capital,carry_cost,recency_share,power_evals,wall_time_ms";

/// Header plus one line per row. Empty cells mark metrics that were not
/// requested or do not apply; the wall time cell is empty when `timing` is off.
void write_csv(std::span<const ReportRow> rows, std::ostream& out, bool timing = true);
void emit_csv(std::span<const ReportRow> rows, const std::filesystem::path& path, bool timing = true);

} // namespace daosim
