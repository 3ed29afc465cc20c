#include "forsage/report_json.hpp"
#include "forsage/simulation.hpp"
#include "support/scenarios.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace forsage;

TEST_CASE("empty report shape")
{
    const auto text = export_report(ProfitReport {});
    CHECK(text.back() == '\n');
    const auto j = nlohmann::json::parse(text);
    CHECK(j["addresses"].is_array());
    CHECK(j["addresses"].empty());
    const auto& a = j["aggregates"];
    CHECK(a["address_count"] == 0);
    CHECK(a["winners"]["count"] == 0);
    CHECK(a["winners"]["collective_net"] == "0");
    CHECK(a["losers"]["collective_net"] == "0");
    CHECK(a["break_even"] == 0);
    CHECK(a["total_received"] == "0");
    CHECK(a["total_fees_eth"] == "0.000000000000000000");
    CHECK(a["top"].empty());
    CHECK(a["levels"].is_null());
    CHECK(a["referrers"].is_null());
    CHECK(parse_report(text) == ProfitReport {});
}

TEST_CASE("wei amounts are decimal strings")
{
    ProfitReport r;
    r.rows.push_back({ Address { "x" }, Wei::from_milliether(25), Wei::from_milliether(50), Wei {}, SignedWei(-25'000'000'000'000'000) });
    const auto j = nlohmann::json::parse(export_report(r));
    CHECK(j["addresses"][0]["received"] == "25000000000000000");
    CHECK(j["addresses"][0]["net"] == "-25000000000000000");
    CHECK(j["addresses"][0]["net_eth"] == "-0.025000000000000000");
}

TEST_CASE("round trip of a full report")
{
    RecruitmentModel m;
    m.arrivals = 400;
    m.seed = 3;
    m.fees = FeeModel::lognormal();
    const auto sim = simulate(m);
    const auto rep = build_report(sim.events, sim.log, m.fees, &sim.state, 7);
    REQUIRE(rep.aggregates.levels.has_value());
    const auto text = export_report(rep);
    const auto back = parse_report(text);
    CHECK(back == rep);
    CHECK(export_report(back) == text);
}

TEST_CASE("round trip with a spillover")
{
    const auto sc = testsupport::x4_spillover_scenario();
    const auto rep = build_report(sc.events, sc.log, FeeModel::constant(), &sc.state, 3);
    CHECK(parse_report(export_report(rep)) == rep);
}

TEST_CASE("malformed reports are rejected")
{
    CHECK_THROWS_AS(parse_report("{"), std::runtime_error);
    CHECK_THROWS_AS(parse_report("[]"), std::runtime_error);
    CHECK_THROWS_AS(parse_report(R"({"addresses":[{"address":"x"}],"aggregates":{}})"), std::runtime_error);
    auto text = export_report(ProfitReport {});
    text.replace(text.find("\"total_received\": \"0\""), 22, "\"total_received\": \"-1\"");
    CHECK_THROWS_AS(parse_report(text), std::runtime_error);
}
