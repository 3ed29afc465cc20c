#pragma once

#include "forsage/rng.hpp"
#include "forsage/wei.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

namespace forsage {

struct TxRecord;

enum class FeeKind : std::uint8_t { Constant, Lognormal };

std::string_view to_string(FeeKind kind);
std::optional<FeeKind> parse_fee_kind(std::string_view text);

/// Measured Forsage averages: mean 0.0116 ETH, median 0.00883 ETH.
inline constexpr Wei kDefaultMeanFee { static_cast<Wei::Rep>(11'600'000'000'000'000ULL) };
inline constexpr Wei kDefaultMedianFee { static_cast<Wei::Rep>(8'830'000'000'000'000ULL) };
/// Reported standard deviation (0.0108 ETH), documentation only.
inline constexpr Wei kReportedFeeSd { static_cast<Wei::Rep>(10'800'000'000'000'000ULL) };

/// Per-transaction gas fee model. Constant charges `mean` every time.
/// Lognormal is parameterised by its mean and median:
///   mu = ln(median), sigma = sqrt(2 ln(mean / median)).
struct FeeModel {
    FeeKind kind = FeeKind::Constant;
    Wei mean = kDefaultMeanFee;
    Wei median = kDefaultMedianFee;

    static FeeModel constant(Wei fee = kDefaultMeanFee) { return { FeeKind::Constant, fee, fee }; }
    static FeeModel lognormal(Wei mean = kDefaultMeanFee, Wei median = kDefaultMedianFee)
    {
        return { FeeKind::Lognormal, mean, median };
    }

    /// Throws std::invalid_argument when the parameters break the model's invariants.
    void validate() const;

    double lognormal_mu() const;
    double lognormal_sigma() const;

    Wei sample(Rng& rng) const;
    /// Fee charged for a log record that carries none.
    Wei fallback_fee() const { return mean; }

    friend bool operator==(const FeeModel&, const FeeModel&) = default;
};

struct FeeStats {
    Wei mean;
    Wei median;
    double sd_wei = 0.0;
    std::size_t count = 0;
};

/// Exact-wei mean (floor) and median (floor of the middle pair's average),
/// population standard deviation. Only records carrying a fee count.
/// Throws std::invalid_argument when no record has a fee.
FeeStats fee_stats(std::span<const TxRecord> txlog);
FeeStats fee_stats(std::span<const Wei> fees);

} // namespace forsage
