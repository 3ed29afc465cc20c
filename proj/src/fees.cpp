#include "forsage/fees.hpp"

#include "forsage/txlog.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace forsage {

std::string_view to_string(FeeKind kind)
{
    return kind == FeeKind::Constant ? "constant" : "lognormal";
}

std::optional<FeeKind> parse_fee_kind(std::string_view text)
{
    if (text == "constant")
        return FeeKind::Constant;
    if (text == "lognormal")
        return FeeKind::Lognormal;
    return std::nullopt;
}

void FeeModel::validate() const
{
    if (kind == FeeKind::Lognormal) {
        if (median.is_zero())
            throw std::invalid_argument("lognormal fee model needs median > 0");
        if (mean < median)
            throw std::invalid_argument("lognormal fee model needs mean >= median");
    }
}

double FeeModel::lognormal_mu() const
{
    return std::log(static_cast<double>(to_long_double(median)));
}

double FeeModel::lognormal_sigma() const
{
    const long double ratio = to_long_double(mean) / to_long_double(median);
    return static_cast<double>(std::sqrt(2.0L * std::log(ratio)));
}

Wei FeeModel::sample(Rng& rng) const
{
    if (kind == FeeKind::Constant)
        return mean;
    const double x = std::exp(lognormal_mu() + lognormal_sigma() * rng.normal());
    return Wei { static_cast<Wei::Rep>(std::llround(x)) };
}

FeeStats fee_stats(std::span<const Wei> fees)
{
    if (fees.empty())
        throw std::invalid_argument("fee_stats: no fees");
    FeeStats st;
    st.count = fees.size();
    Wei sum;
    for (Wei f : fees)
        sum += f;
    const auto n = static_cast<Wei::Rep>(fees.size());
    st.mean = Wei { sum.raw() / n };

    std::vector<Wei> sorted(fees.begin(), fees.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    if (sorted.size() % 2 == 1) {
        st.median = sorted[mid];
    } else {
        const Wei a = sorted[mid - 1], b = sorted[mid];
        st.median = Wei { a.raw() / 2 + b.raw() / 2 + (a.raw() % 2 + b.raw() % 2) / 2 };
    }

    // Deviations are taken as n*x - sum, which is exact in integers, so a
    // constant log yields exactly zero.
    long double acc = 0.0L;
    const long double nn = static_cast<long double>(fees.size());
    for (Wei f : fees) {
        const auto scaled = static_cast<__int128>(f.raw() * n) - static_cast<__int128>(sum.raw());
        const long double d = static_cast<long double>(scaled) / nn;
        acc += d * d;
    }
    st.sd_wei = static_cast<double>(std::sqrt(acc / nn));
    return st;
}

FeeStats fee_stats(std::span<const TxRecord> txlog)
{
    std::vector<Wei> fees;
    fees.reserve(txlog.size());
    for (const auto& rec : txlog) {
        if (rec.fee)
            fees.push_back(*rec.fee);
    }
    return fee_stats(std::span<const Wei>(fees));
}

} // namespace forsage
