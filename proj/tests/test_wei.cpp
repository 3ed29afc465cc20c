#include "forsage/wei.hpp"

#include <doctest.h>

#include <limits>

using forsage::AmountError;
using forsage::SignedWei;
using forsage::Wei;

TEST_CASE("decimal round trip")
{
    CHECK(Wei::parse("0").to_string() == "0");
    CHECK(Wei::parse("25000000000000000") == Wei::from_milliether(25));
    CHECK(Wei::from_milliether(25).to_string() == "25000000000000000");
    const std::string max = "340282366920938463463374607431768211455";
    CHECK(Wei::parse(max).to_string() == max);
}

TEST_CASE("malformed amounts are rejected")
{
    for (const char* bad : { "", "-1", "1.5", "1e18", " 1", "0x10", "340282366920938463463374607431768211456" })
        CHECK_THROWS_AS(Wei::parse(bad), AmountError);
}

TEST_CASE("checked arithmetic")
{
    const Wei max { std::numeric_limits<Wei::Rep>::max() };
    CHECK_THROWS_AS(max + Wei { 1 }, AmountError);
    CHECK_THROWS_AS(Wei { 1 } - Wei { 2 }, AmountError);
    CHECK_THROWS_AS(max * 2, AmountError);
    CHECK(Wei::from_milliether(25) * 4 == Wei::from_milliether(100));
    CHECK(Wei::from_ether(1) == forsage::kWeiPerEther);
}

TEST_CASE("eth rendering keeps all eighteen decimals")
{
    CHECK(Wei::from_milliether(25).to_eth_string() == "0.025000000000000000");
    CHECK(Wei::from_ether(51).to_eth_string() == "51.000000000000000000");
    CHECK(Wei {}.to_eth_string() == "0.000000000000000000");
    CHECK(Wei { 1 }.to_eth_string() == "0.000000000000000001");
}

TEST_CASE("signed net positions")
{
    const auto loss = SignedWei::from(Wei::from_milliether(25)) - SignedWei::from(Wei::from_milliether(100));
    CHECK(loss.is_negative());
    CHECK(loss.to_string() == "-75000000000000000");
    CHECK(loss.to_eth_string() == "-0.075000000000000000");
    CHECK(loss.magnitude() == Wei::from_milliether(75));
    CHECK(SignedWei::parse("-75000000000000000") == loss);
    CHECK(SignedWei::parse("0").is_zero());
    CHECK_THROWS_AS(SignedWei::parse("--1"), AmountError);
    CHECK_THROWS_AS(SignedWei::parse("-"), AmountError);
}
