#pragma once

#include "forsage/contract.hpp"
#include "forsage/fees.hpp"
#include "forsage/txlog.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace forsage {

class InconsistentInputs : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AddressRow {
    Address address;
    Wei received;
    Wei paid_in;
    Wei fees;
    SignedWei net;

    friend bool operator==(const AddressRow&, const AddressRow&) = default;
};

struct Cohort {
    std::uint64_t count = 0;
    SignedWei collective_net;

    friend bool operator==(const Cohort&, const Cohort&) = default;
};

/// Histogram of a non-negative integer quantity over a population.
struct DistributionSummary {
    std::map<std::uint64_t, std::uint64_t> buckets;
    std::uint64_t population = 0;
    double mean = 0.0;
    double median = 0.0;
    double sd = 0.0;

    friend bool operator==(const DistributionSummary&, const DistributionSummary&) = default;
};

DistributionSummary summarize(std::span<const std::uint64_t> values);

struct LevelsSummary {
    // Levels bought beyond the two registration slots.
    DistributionSummary purchased;
    // All active slots, registration slots included.
    DistributionSummary total_active;
    // Collective net of the users in each `purchased` bucket.
    std::map<std::uint64_t, SignedWei> bucket_net;

    friend bool operator==(const LevelsSummary&, const LevelsSummary&) = default;
};

struct ReferrerSummary {
    DistributionSummary counts;
    std::uint64_t owner_count = 0;
    std::uint64_t max_count = 0;
    Address max_referrer;

    friend bool operator==(const ReferrerSummary&, const ReferrerSummary&) = default;
};

struct SpilloverStats {
    std::uint64_t tx_count = 0;
    std::uint64_t spillover_tx_count = 0;
    std::uint64_t spillover_registration_tx_count = 0;
    std::uint64_t spillover_payment_count = 0;
    std::uint64_t skip_tx_count = 0;
    std::uint64_t skip_payment_count = 0;
    double spillover_fraction = 0.0;
    double registration_share = 0.0;

    friend bool operator==(const SpilloverStats&, const SpilloverStats&) = default;
};

struct ProfitAggregates {
    std::uint64_t address_count = 0;
    Cohort winners;
    Cohort losers;
    std::uint64_t break_even = 0;
    Wei mean_loss;
    Wei total_received;
    Wei total_paid_in;
    Wei total_fees;
    std::vector<AddressRow> top;
    SpilloverStats spillover;
    std::optional<LevelsSummary> levels;
    std::optional<ReferrerSummary> referrers;

    friend bool operator==(const ProfitAggregates&, const ProfitAggregates&) = default;
};

struct ProfitReport {
    std::vector<AddressRow> rows; // sorted by address
    ProfitAggregates aggregates;

    friend bool operator==(const ProfitReport&, const ProfitReport&) = default;
};

inline constexpr std::size_t kDefaultTopK = 5;

/// Per-address received / paid-in / fees / net. Fees come from the log
/// record when present, else from the fee model, and are charged to the
/// sender. Throws InconsistentInputs when an event names a transaction the
/// log does not contain, or a payer other than that transaction's sender.
ProfitReport profit_loss(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog,
    const FeeModel& fee_model, std::size_t top = kDefaultTopK);
/// Single-threaded reference for profit_loss.
ProfitReport profit_loss_serial(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog,
    const FeeModel& fee_model, std::size_t top = kDefaultTopK);

struct UserLevels {
    Address address;
    std::uint64_t purchased = 0;
    std::uint64_t total_active = 0;
};

struct LevelsDistribution {
    std::vector<UserLevels> per_user; // registration order
    LevelsSummary summary;
};

/// Level counts for every registered user, owner included. The owner's
/// 24 free slots count as 22 purchased under the beyond-registration
/// convention. `report` supplies per-bucket collective nets when given.
LevelsDistribution levels_distribution(const ContractState& state, const ProfitReport* report = nullptr);

struct ReferrerDistribution {
    std::vector<std::uint64_t> per_user; // registration order
    ReferrerSummary summary;
};

/// For each user, how many slots of other users name them as slot referrer.
ReferrerDistribution referrer_distribution(const ContractState& state);
ReferrerDistribution referrer_distribution_serial(const ContractState& state);

/// Spillover and X3-skip counts per transaction. A transaction whose
/// payments touch both matrices is a registration.
SpilloverStats spillover_stats(std::span<const PaymentEvent> events);

/// Rows by net descending, ties by ascending address. k >= 1.
std::vector<AddressRow> top_k(const ProfitReport& report, std::size_t k);
std::vector<AddressRow> top_k(std::span<const AddressRow> rows, std::size_t k);

/// profit_loss plus the state-derived level and referrer summaries.
ProfitReport build_report(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog,
    const FeeModel& fee_model, const ContractState* state, std::size_t top = kDefaultTopK);

namespace kernels {

    /// Dense, address-sorted index of every account in the inputs.
    struct AddressIndex {
        std::vector<Address> addresses;
        std::unordered_map<std::string, std::uint32_t> position;

        std::uint32_t at(const Address& a) const { return position.at(a.value); }
    };

    AddressIndex index_addresses(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog);

    struct Flows {
        std::vector<Wei> received;
        std::vector<Wei> paid_in;
        std::vector<Wei> fees;

        friend bool operator==(const Flows&, const Flows&) = default;
    };

    Flows accumulate_flows(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog,
        const AddressIndex& index, const FeeModel& fee_model);
    Flows accumulate_flows_serial(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog,
        const AddressIndex& index, const FeeModel& fee_model);

    std::vector<std::uint64_t> count_slot_referrals(const ContractState& state);
    std::vector<std::uint64_t> count_slot_referrals_serial(const ContractState& state);

} // namespace kernels

} // namespace forsage
