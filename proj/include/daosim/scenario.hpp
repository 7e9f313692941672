#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <daosim/attacks.hpp>
#include <daosim/governance.hpp>
#include <daosim/ledger.hpp>
#include <daosim/mechanisms.hpp>

namespace daosim {

enum class ScriptOp { open, transfer, borrow, repay, lock, seal, advance };

/// One line of a block script.
///   open | seal | advance N
///   transfer FROM TO AMOUNT | borrow WHO AMOUNT | repay WHO AMOUNT
///   lock OWNER AMOUNT UNLOCK_HEIGHT MAX_LOCK
struct ScriptAction {
    ScriptOp op = ScriptOp::open;
    Address first;
    Address second;
    Amount amount;
    std::uint64_t count = 0;
    std::uint64_t max_lock = 0;

    bool operator==(const ScriptAction&) const = default;
};

enum class GeneratedVote { none, approve, disapprove, random };

/// Honest holders added at genesis with balances uniform in
/// [min_balance, max_balance], drawn from the scenario seed.
struct GeneratorSpec {
    std::uint64_t holders = 0;
    std::uint64_t min_balance = 1;
    std::uint64_t max_balance = 1;
    std::string prefix{"holder"};
    GeneratedVote vote = GeneratedVote::none;

    bool operator==(const GeneratorSpec&) const = default;
};

/// Weights proportional to ratio^i over `length` snapshots (index 0 oldest),
/// normalised to sum to one and rounded to micro-units. ratio < 1 puts the
/// mass on old snapshots.
struct TiltFamily {
    std::uint64_t length = 5;
    std::vector<std::uint64_t> ratio_micros;

    std::vector<WeightVector> expand() const;
    bool operator==(const TiltFamily&) const = default;
};

struct SweepSpec {
    std::vector<WeightVector> weight_vectors;
    std::optional<TiltFamily> tilt;
    std::vector<std::uint64_t> spans;
    std::vector<std::string> outputs;
    std::uint64_t max_runs = 100000;
    std::uint64_t recency_newest = 1;

    /// Explicit vectors followed by the tilt family.
    std::vector<WeightVector> all_weights() const;
    bool wants(std::string_view metric) const;

    bool operator==(const SweepSpec&) const = default;
};

inline constexpr std::string_view known_metrics[] = {
    "succeeded", "min_flip_capital", "carry_cost", "recency_share", "power_evals", "wall_time",
};

/// Attack parameters; proposal and honest ballots come from the scenario.
struct AttackSpec {
    AttackKind kind = AttackKind::direct_flash_loan;
    Address attacker;
    Amount budget;
    Amount own_holdings;
    std::uint64_t span_blocks = 1;
    Rational carry_cost_rate = 0;
    Address funding_source{"pool"};

    bool operator==(const AttackSpec&) const = default;
};

struct ScenarioConfig {
    std::string id;
    std::uint64_t seed = 0;
    std::vector<std::pair<Address, Amount>> genesis;
    std::optional<Amount> total_supply;
    std::optional<GeneratorSpec> generator;
    std::vector<ScriptAction> script;
    MechanismSpec mechanism;
    ProposalParams proposal;
    std::vector<Ballot> ballots;
    std::optional<AttackSpec> attack;
    std::optional<SweepSpec> sweep;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates scenario text. ParseError messages carry the line
/// number; ValidationError messages name the violated invariant.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& config);

void validate(const ScenarioConfig& config);

/// Genesis balances including generated holders.
std::vector<std::pair<Address, Amount>> genesis_balances(const ScenarioConfig& config);
/// Explicit ballots followed by generated ones.
std::vector<Ballot> honest_ballots(const ScenarioConfig& config);
/// Genesis plus the block script, left with no open block.
Ledger build_ledger(const ScenarioConfig& config);

AttackScenario make_attack(const ScenarioConfig& config, const AttackSpec& attack);

} // namespace daosim
