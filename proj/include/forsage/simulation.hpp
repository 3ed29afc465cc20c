#pragma once

#include "forsage/contract.hpp"
#include "forsage/fees.hpp"
#include "forsage/txlog.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace forsage {

/// Owner address of the deployed ETH Matrix contract; the default owner
/// of simulated and replayed states.
Address default_owner_address();

/// Deterministic synthetic address for the i-th simulated user (i >= 1):
/// "0x" followed by i as 40 hex digits.
Address sim_address(std::uint64_t index);

enum class RecruitmentKind : std::uint8_t { UniformUpline, PreferentialByPartners, Chain };

std::string_view to_string(RecruitmentKind kind);
/// Accepts "uniform", "preferential", "chain".
std::optional<RecruitmentKind> parse_recruitment(std::string_view text);

struct PurchasePolicy {
    // Chance that a user buys the next level right after one of their
    // slots fills.
    double probability = 0.3;
    int max_level = Level::kMax;
};

struct RecruitmentModel {
    RecruitmentKind kind = RecruitmentKind::UniformUpline;
    std::uint64_t arrivals = 0;
    PurchasePolicy purchase;
    std::uint64_t seed = 0;
    FeeModel fees;
    Address owner = default_owner_address();

    /// Throws std::invalid_argument.
    void validate() const;
};

/// Builds a replayable schedule: `arrivals` registrations, each followed
/// by whatever level purchases the policy triggers. Uplines come from the
/// recruitment kind:
///   uniform       any registered account, owner included, equally likely
///   preferential  weight 1 + partnersCount
///   chain         the previously registered account
/// Ordinals start at 1. Fees are drawn from a generator stream separate
/// from the recruitment stream.
std::vector<TxRecord> build_schedule(const RecruitmentModel& model);

struct SimResult {
    ContractState state;
    std::vector<PaymentEvent> events;
    std::vector<TxRecord> log;
    std::string rng_algorithm;
    std::optional<std::uint64_t> seed;
};

/// Applies the schedule to a fresh state. Throws ReplayError annotated with
/// the offending ordinal.
SimResult run(std::span<const TxRecord> schedule, const Address& owner = default_owner_address());

/// build_schedule followed by run.
SimResult simulate(const RecruitmentModel& model);

/// Independent runs for each seed, executed in parallel. Results are in
/// seed order and identical to calling simulate() per seed.
std::vector<SimResult> simulate_sweep(const RecruitmentModel& base, std::span<const std::uint64_t> seeds);
std::vector<SimResult> simulate_sweep_serial(const RecruitmentModel& base, std::span<const std::uint64_t> seeds);

} // namespace forsage
