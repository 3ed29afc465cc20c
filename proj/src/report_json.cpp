#include "forsage/report_json.hpp"

#include <json.hpp>

#include <stdexcept>

namespace forsage {

using ojson = nlohmann::ordered_json;

namespace {

    ojson row_json(const AddressRow& r)
    {
        ojson j;
        j["address"] = r.address.value;
        j["received"] = r.received.to_string();
        j["paid_in"] = r.paid_in.to_string();
        j["fees"] = r.fees.to_string();
        j["net"] = r.net.to_string();
        j["net_eth"] = r.net.to_eth_string();
        return j;
    }

    AddressRow row_from(const ojson& j)
    {
        return AddressRow {
            Address { j.at("address").get<std::string>() },
            Wei::parse(j.at("received").get<std::string>()),
            Wei::parse(j.at("paid_in").get<std::string>()),
            Wei::parse(j.at("fees").get<std::string>()),
            SignedWei::parse(j.at("net").get<std::string>()),
        };
    }

    ojson cohort_json(const Cohort& c)
    {
        ojson j;
        j["count"] = c.count;
        j["collective_net"] = c.collective_net.to_string();
        j["collective_net_eth"] = c.collective_net.to_eth_string();
        return j;
    }

    Cohort cohort_from(const ojson& j)
    {
        return Cohort { j.at("count").get<std::uint64_t>(), SignedWei::parse(j.at("collective_net").get<std::string>()) };
    }

    ojson distribution_json(const DistributionSummary& d)
    {
        ojson j;
        j["population"] = d.population;
        j["mean"] = d.mean;
        j["median"] = d.median;
        j["sd"] = d.sd;
        ojson buckets = ojson::array();
        for (const auto& [value, count] : d.buckets)
            buckets.push_back(ojson { { "value", value }, { "count", count } });
        j["buckets"] = std::move(buckets);
        return j;
    }

    DistributionSummary distribution_from(const ojson& j)
    {
        DistributionSummary d;
        d.population = j.at("population").get<std::uint64_t>();
        d.mean = j.at("mean").get<double>();
        d.median = j.at("median").get<double>();
        d.sd = j.at("sd").get<double>();
        for (const auto& b : j.at("buckets"))
            d.buckets.emplace(b.at("value").get<std::uint64_t>(), b.at("count").get<std::uint64_t>());
        return d;
    }

    ojson spillover_json(const SpilloverStats& s)
    {
        ojson j;
        j["tx_count"] = s.tx_count;
        j["spillover_tx_count"] = s.spillover_tx_count;
        j["spillover_registration_tx_count"] = s.spillover_registration_tx_count;
        j["spillover_payment_count"] = s.spillover_payment_count;
        j["skip_tx_count"] = s.skip_tx_count;
        j["skip_payment_count"] = s.skip_payment_count;
        j["spillover_fraction"] = s.spillover_fraction;
        j["registration_share"] = s.registration_share;
        return j;
    }

    SpilloverStats spillover_from(const ojson& j)
    {
        SpilloverStats s;
        s.tx_count = j.at("tx_count").get<std::uint64_t>();
        s.spillover_tx_count = j.at("spillover_tx_count").get<std::uint64_t>();
        s.spillover_registration_tx_count = j.at("spillover_registration_tx_count").get<std::uint64_t>();
        s.spillover_payment_count = j.at("spillover_payment_count").get<std::uint64_t>();
        s.skip_tx_count = j.at("skip_tx_count").get<std::uint64_t>();
        s.skip_payment_count = j.at("skip_payment_count").get<std::uint64_t>();
        s.spillover_fraction = j.at("spillover_fraction").get<double>();
        s.registration_share = j.at("registration_share").get<double>();
        return s;
    }

    ojson levels_json(const LevelsSummary& l)
    {
        ojson j;
        j["purchased"] = distribution_json(l.purchased);
        j["total_active"] = distribution_json(l.total_active);
        ojson nets = ojson::array();
        for (const auto& [bucket, net] : l.bucket_net)
            nets.push_back(ojson { { "levels", bucket }, { "collective_net", net.to_string() } });
        j["bucket_net"] = std::move(nets);
        return j;
    }

    LevelsSummary levels_from(const ojson& j)
    {
        LevelsSummary l;
        l.purchased = distribution_from(j.at("purchased"));
        l.total_active = distribution_from(j.at("total_active"));
        for (const auto& b : j.at("bucket_net"))
            l.bucket_net.emplace(b.at("levels").get<std::uint64_t>(), SignedWei::parse(b.at("collective_net").get<std::string>()));
        return l;
    }

    ojson referrers_json(const ReferrerSummary& r)
    {
        ojson j;
        j["counts"] = distribution_json(r.counts);
        j["owner_count"] = r.owner_count;
        j["max_count"] = r.max_count;
        j["max_referrer"] = r.max_referrer.value;
        return j;
    }

    ReferrerSummary referrers_from(const ojson& j)
    {
        ReferrerSummary r;
        r.counts = distribution_from(j.at("counts"));
        r.owner_count = j.at("owner_count").get<std::uint64_t>();
        r.max_count = j.at("max_count").get<std::uint64_t>();
        r.max_referrer = Address { j.at("max_referrer").get<std::string>() };
        return r;
    }

} // namespace

std::string export_report(const ProfitReport& report)
{
    const auto& a = report.aggregates;
    ojson root;
    ojson rows = ojson::array();
    for (const auto& r : report.rows)
        rows.push_back(row_json(r));
    root["addresses"] = std::move(rows);

    ojson agg;
    agg["address_count"] = a.address_count;
    agg["winners"] = cohort_json(a.winners);
    agg["losers"] = cohort_json(a.losers);
    agg["break_even"] = a.break_even;
    agg["mean_loss"] = a.mean_loss.to_string();
    agg["mean_loss_eth"] = a.mean_loss.to_eth_string();
    agg["total_received"] = a.total_received.to_string();
    agg["total_paid_in"] = a.total_paid_in.to_string();
    agg["total_fees"] = a.total_fees.to_string();
    agg["total_fees_eth"] = a.total_fees.to_eth_string();
    ojson top = ojson::array();
    for (const auto& r : a.top)
        top.push_back(row_json(r));
    agg["top"] = std::move(top);
    agg["spillover"] = spillover_json(a.spillover);
    agg["levels"] = a.levels ? levels_json(*a.levels) : ojson(nullptr);
    agg["referrers"] = a.referrers ? referrers_json(*a.referrers) : ojson(nullptr);
    root["aggregates"] = std::move(agg);
    return root.dump(2) + "\n";
}

ProfitReport parse_report(std::string_view json_text)
{
    try {
        const auto root = ojson::parse(json_text);
        ProfitReport report;
        for (const auto& r : root.at("addresses"))
            report.rows.push_back(row_from(r));
        const auto& agg = root.at("aggregates");
        auto& a = report.aggregates;
        a.address_count = agg.at("address_count").get<std::uint64_t>();
        a.winners = cohort_from(agg.at("winners"));
        a.losers = cohort_from(agg.at("losers"));
        a.break_even = agg.at("break_even").get<std::uint64_t>();
        a.mean_loss = Wei::parse(agg.at("mean_loss").get<std::string>());
        a.total_received = Wei::parse(agg.at("total_received").get<std::string>());
        a.total_paid_in = Wei::parse(agg.at("total_paid_in").get<std::string>());
        a.total_fees = Wei::parse(agg.at("total_fees").get<std::string>());
        for (const auto& r : agg.at("top"))
            a.top.push_back(row_from(r));
        a.spillover = spillover_from(agg.at("spillover"));
        if (!agg.at("levels").is_null())
            a.levels = levels_from(agg.at("levels"));
        if (!agg.at("referrers").is_null())
            a.referrers = referrers_from(agg.at("referrers"));
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed report: ") + e.what());
    } catch (const AmountError& e) {
        throw std::runtime_error(std::string("malformed report amount: ") + e.what());
    }
}

} // namespace forsage
