#include "forsage/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace forsage {

namespace {

    int thread_count()
    {
#ifdef _OPENMP
        return omp_get_max_threads();
#else
        return 1;
#endif
    }

    int thread_id()
    {
#ifdef _OPENMP
        return omp_get_thread_num();
#else
        return 0;
#endif
    }

    void check_consistency(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog)
    {
        std::unordered_map<std::uint64_t, const TxRecord*> by_ordinal;
        by_ordinal.reserve(txlog.size());
        for (const auto& rec : txlog)
            by_ordinal.emplace(rec.ordinal, &rec);
        for (const auto& ev : events) {
            auto it = by_ordinal.find(ev.tx_ordinal);
            if (it == by_ordinal.end())
                throw InconsistentInputs("event references ordinal " + std::to_string(ev.tx_ordinal) + " missing from the log");
            if (it->second->sender != ev.from)
                throw InconsistentInputs("event at ordinal " + std::to_string(ev.tx_ordinal) + " paid by " + ev.from.value
                    + " but the log sender is " + it->second->sender.value);
        }
    }

    ProfitReport assemble(const kernels::AddressIndex& index, const kernels::Flows& flows,
        std::span<const PaymentEvent> events, std::size_t top)
    {
        ProfitReport report;
        auto& agg = report.aggregates;
        report.rows.reserve(index.addresses.size());
        for (std::size_t i = 0; i < index.addresses.size(); ++i) {
            AddressRow row { index.addresses[i], flows.received[i], flows.paid_in[i], flows.fees[i], {} };
            row.net = SignedWei::from(row.received) - SignedWei::from(row.paid_in) - SignedWei::from(row.fees);
            agg.total_received += row.received;
            agg.total_paid_in += row.paid_in;
            agg.total_fees += row.fees;
            if (row.net.is_positive()) {
                ++agg.winners.count;
                agg.winners.collective_net += row.net;
            } else if (row.net.is_negative()) {
                ++agg.losers.count;
                agg.losers.collective_net += row.net;
            } else {
                ++agg.break_even;
            }
            report.rows.push_back(std::move(row));
        }
        agg.address_count = report.rows.size();
        if (agg.losers.count > 0)
            agg.mean_loss = Wei { agg.losers.collective_net.magnitude().raw() / agg.losers.count };
        if (top > 0)
            agg.top = top_k(report.rows, top);
        agg.spillover = spillover_stats(events);
        return report;
    }

    Wei fee_of(const TxRecord& rec, const FeeModel& model)
    {
        return rec.fee.value_or(model.fallback_fee());
    }

} // namespace

namespace kernels {

    AddressIndex index_addresses(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog)
    {
        std::unordered_set<std::string> seen;
        for (const auto& rec : txlog)
            seen.insert(rec.sender.value);
        for (const auto& ev : events) {
            seen.insert(ev.from.value);
            seen.insert(ev.to.value);
        }
        AddressIndex index;
        index.addresses.reserve(seen.size());
        for (const auto& s : seen)
            index.addresses.push_back(Address { s });
        std::sort(index.addresses.begin(), index.addresses.end());
        index.position.reserve(index.addresses.size());
        for (std::size_t i = 0; i < index.addresses.size(); ++i)
            index.position.emplace(index.addresses[i].value, static_cast<std::uint32_t>(i));
        return index;
    }

    Flows accumulate_flows_serial(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog,
        const AddressIndex& index, const FeeModel& fee_model)
    {
        const std::size_t n = index.addresses.size();
        Flows flows { std::vector<Wei>(n), std::vector<Wei>(n), std::vector<Wei>(n) };
        for (const auto& ev : events)
            flows.received[index.at(ev.to)] += ev.amount;
        for (const auto& rec : txlog) {
            const auto i = index.at(rec.sender);
            flows.paid_in[i] += rec.value;
            flows.fees[i] += fee_of(rec, fee_model);
        }
        return flows;
    }

    // Each thread accumulates into its own buffers, then buffers are summed
    // per address. Integer sums are order-independent, so the result is
    // identical to the serial kernel for any thread count.
    Flows accumulate_flows(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog,
        const AddressIndex& index, const FeeModel& fee_model)
    {
        using Rep = Wei::Rep;
        const std::size_t n = index.addresses.size();
        const int threads = thread_count();
        std::vector<std::vector<Rep>> received(threads, std::vector<Rep>(n, 0));
        auto paid = received;
        auto fees = received;
        const auto n_events = static_cast<std::int64_t>(events.size());
        const auto n_txs = static_cast<std::int64_t>(txlog.size());
        const Rep fallback = fee_model.fallback_fee().raw();

#pragma omp parallel num_threads(threads)
        {
            const int t = thread_id();
#pragma omp for schedule(static) nowait
            for (std::int64_t e = 0; e < n_events; ++e) {
                const auto& ev = events[static_cast<std::size_t>(e)];
                received[t][index.at(ev.to)] += ev.amount.raw();
            }
#pragma omp for schedule(static)
            for (std::int64_t r = 0; r < n_txs; ++r) {
                const auto& rec = txlog[static_cast<std::size_t>(r)];
                const auto i = index.at(rec.sender);
                paid[t][i] += rec.value.raw();
                fees[t][i] += rec.fee ? rec.fee->raw() : fallback;
            }
        }

        Flows flows { std::vector<Wei>(n), std::vector<Wei>(n), std::vector<Wei>(n) };
        const auto n_addr = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n_addr; ++i) {
            Rep r = 0, p = 0, f = 0;
            for (int t = 0; t < threads; ++t) {
                r += received[t][static_cast<std::size_t>(i)];
                p += paid[t][static_cast<std::size_t>(i)];
                f += fees[t][static_cast<std::size_t>(i)];
            }
            flows.received[static_cast<std::size_t>(i)] = Wei { r };
            flows.paid_in[static_cast<std::size_t>(i)] = Wei { p };
            flows.fees[static_cast<std::size_t>(i)] = Wei { f };
        }
        return flows;
    }

    std::vector<std::uint64_t> count_slot_referrals_serial(const ContractState& state)
    {
        std::vector<std::uint64_t> counts(state.user_count(), 0);
        for (UserId id = 0; id < state.user_count(); ++id) {
            const auto& u = state.user(id);
            for (std::size_t l = 0; l < Level::kCount; ++l) {
                if (u.x3[l].active && u.x3[l].slot_referrer && *u.x3[l].slot_referrer != id)
                    ++counts[*u.x3[l].slot_referrer];
                if (u.x4[l].active && u.x4[l].slot_referrer && *u.x4[l].slot_referrer != id)
                    ++counts[*u.x4[l].slot_referrer];
            }
        }
        return counts;
    }

    std::vector<std::uint64_t> count_slot_referrals(const ContractState& state)
    {
        const auto n = static_cast<std::int64_t>(state.user_count());
        std::vector<std::uint64_t> counts(state.user_count(), 0);
        const auto users = state.users();
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            const auto id = static_cast<UserId>(i);
            const auto& u = users[static_cast<std::size_t>(i)];
            for (std::size_t l = 0; l < Level::kCount; ++l) {
                if (u.x3[l].active && u.x3[l].slot_referrer && *u.x3[l].slot_referrer != id) {
#pragma omp atomic
                    ++counts[*u.x3[l].slot_referrer];
                }
                if (u.x4[l].active && u.x4[l].slot_referrer && *u.x4[l].slot_referrer != id) {
#pragma omp atomic
                    ++counts[*u.x4[l].slot_referrer];
                }
            }
        }
        return counts;
    }

} // namespace kernels

DistributionSummary summarize(std::span<const std::uint64_t> values)
{
    DistributionSummary s;
    s.population = values.size();
    if (values.empty())
        return s;
    // Integer sums keep the statistics exact up to the final division:
    // variance = (n * sum(x^2) - sum(x)^2) / n^2.
    unsigned __int128 sum = 0, sum_sq = 0;
    for (auto v : values) {
        ++s.buckets[v];
        sum += v;
        sum_sq += static_cast<unsigned __int128>(v) * v;
    }
    const auto n = static_cast<unsigned __int128>(values.size());
    const unsigned __int128 spread = n * sum_sq - sum * sum;
    s.mean = static_cast<double>(static_cast<long double>(sum) / static_cast<long double>(n));
    s.sd = static_cast<double>(std::sqrt(static_cast<long double>(spread) / static_cast<long double>(n * n)));

    // Median from the bucket counts (already sorted by value).
    const std::uint64_t lo_rank = (s.population - 1) / 2, hi_rank = s.population / 2;
    std::uint64_t seen = 0;
    std::optional<std::uint64_t> lo, hi;
    for (const auto& [value, count] : s.buckets) {
        if (!lo && lo_rank < seen + count)
            lo = value;
        if (!hi && hi_rank < seen + count)
            hi = value;
        seen += count;
    }
    s.median = (static_cast<double>(*lo) + static_cast<double>(*hi)) / 2.0;
    return s;
}

ProfitReport profit_loss(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog,
    const FeeModel& fee_model, std::size_t top)
{
    check_consistency(events, txlog);
    const auto index = kernels::index_addresses(events, txlog);
    return assemble(index, kernels::accumulate_flows(events, txlog, index, fee_model), events, top);
}

ProfitReport profit_loss_serial(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog,
    const FeeModel& fee_model, std::size_t top)
{
    check_consistency(events, txlog);
    const auto index = kernels::index_addresses(events, txlog);
    return assemble(index, kernels::accumulate_flows_serial(events, txlog, index, fee_model), events, top);
}

LevelsDistribution levels_distribution(const ContractState& state, const ProfitReport* report)
{
    LevelsDistribution dist;
    dist.per_user.reserve(state.user_count());
    std::vector<std::uint64_t> purchased, total;
    purchased.reserve(state.user_count());
    total.reserve(state.user_count());
    for (const auto& u : state.users()) {
        std::uint64_t active = 0;
        for (std::size_t l = 0; l < Level::kCount; ++l)
            active += static_cast<std::uint64_t>(u.x3[l].active) + static_cast<std::uint64_t>(u.x4[l].active);
        const std::uint64_t bought = active >= 2 ? active - 2 : 0;
        dist.per_user.push_back(UserLevels { u.address, bought, active });
        purchased.push_back(bought);
        total.push_back(active);
    }
    dist.summary.purchased = summarize(purchased);
    dist.summary.total_active = summarize(total);

    if (report) {
        std::unordered_map<std::string, SignedWei> net_of;
        net_of.reserve(report->rows.size());
        for (const auto& row : report->rows)
            net_of.emplace(row.address.value, row.net);
        for (const auto& [bucket, _] : dist.summary.purchased.buckets)
            dist.summary.bucket_net[bucket] = SignedWei {};
        for (const auto& ul : dist.per_user) {
            if (auto it = net_of.find(ul.address.value); it != net_of.end())
                dist.summary.bucket_net[ul.purchased] += it->second;
        }
    }
    return dist;
}

namespace {

    ReferrerDistribution referrer_from_counts(const ContractState& state, std::vector<std::uint64_t> counts)
    {
        ReferrerDistribution dist;
        dist.summary.counts = summarize(counts);
        dist.summary.owner_count = counts.at(state.owner());
        // Highest count wins; ties go to the earlier-registered user.
        std::size_t best = 0;
        for (std::size_t i = 1; i < counts.size(); ++i) {
            if (counts[i] > counts[best])
                best = i;
        }
        dist.summary.max_count = counts[best];
        dist.summary.max_referrer = state.user(static_cast<UserId>(best)).address;
        dist.per_user = std::move(counts);
        return dist;
    }

} // namespace

ReferrerDistribution referrer_distribution(const ContractState& state)
{
    return referrer_from_counts(state, kernels::count_slot_referrals(state));
}

ReferrerDistribution referrer_distribution_serial(const ContractState& state)
{
    return referrer_from_counts(state, kernels::count_slot_referrals_serial(state));
}

SpilloverStats spillover_stats(std::span<const PaymentEvent> events)
{
    struct TxFlags {
        bool x3 = false, x4 = false, spill = false, skip = false;
    };
    std::map<std::uint64_t, TxFlags> by_tx;
    SpilloverStats st;
    for (const auto& ev : events) {
        auto& f = by_tx[ev.tx_ordinal];
        (ev.matrix == MatrixKind::X3 ? f.x3 : f.x4) = true;
        if (ev.classification == PaymentClass::Spillover) {
            f.spill = true;
            ++st.spillover_payment_count;
        } else if (ev.classification == PaymentClass::Skip) {
            f.skip = true;
            ++st.skip_payment_count;
        }
    }
    st.tx_count = by_tx.size();
    for (const auto& [_, f] : by_tx) {
        if (f.spill) {
            ++st.spillover_tx_count;
            if (f.x3 && f.x4)
                ++st.spillover_registration_tx_count;
        }
        if (f.skip)
            ++st.skip_tx_count;
    }
    if (st.tx_count > 0)
        st.spillover_fraction = static_cast<double>(st.spillover_tx_count) / static_cast<double>(st.tx_count);
    if (st.spillover_tx_count > 0)
        st.registration_share = static_cast<double>(st.spillover_registration_tx_count) / static_cast<double>(st.spillover_tx_count);
    return st;
}

std::vector<AddressRow> top_k(std::span<const AddressRow> rows, std::size_t k)
{
    if (k == 0)
        throw std::invalid_argument("top_k: k must be >= 1");
    std::vector<AddressRow> sorted(rows.begin(), rows.end());
    const auto take = std::min(k, sorted.size());
    std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(take), sorted.end(),
        [](const AddressRow& a, const AddressRow& b) {
            if (a.net != b.net)
                return a.net > b.net;
            return a.address < b.address;
        });
    sorted.resize(take);
    return sorted;
}

std::vector<AddressRow> top_k(const ProfitReport& report, std::size_t k)
{
    return top_k(std::span<const AddressRow>(report.rows), k);
}

ProfitReport build_report(std::span<const PaymentEvent> events, std::span<const TxRecord> txlog,
    const FeeModel& fee_model, const ContractState* state, std::size_t top)
{
    auto report = profit_loss(events, txlog, fee_model, top);
    if (state) {
        report.aggregates.levels = levels_distribution(*state, &report).summary;
        report.aggregates.referrers = referrer_distribution(*state).summary;
    }
    return report;
}

} // namespace forsage
