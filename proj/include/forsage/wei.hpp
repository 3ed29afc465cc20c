#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace forsage {

class AmountError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact amount in wei (1e-18 ETH). Backed by a 128-bit unsigned integer,
/// so every value up to 2^128 - 1 is representable and all arithmetic is
/// checked: overflow and underflow throw AmountError instead of wrapping.
class Wei {
public:
    using Rep = unsigned __int128;

    constexpr Wei() = default;
    constexpr explicit Wei(Rep raw)
        : raw_(raw)
    {
    }

    static constexpr Wei zero() { return Wei {}; }
    static constexpr Wei from_milliether(std::uint64_t milli)
    {
        return Wei { static_cast<Rep>(milli) * 1'000'000'000'000'000u };
    }
    static constexpr Wei from_ether(std::uint64_t ether)
    {
        return Wei { static_cast<Rep>(ether) * 1'000'000'000'000'000'000u };
    }

    /// Parses an unsigned decimal string ("25000000000000000").
    static Wei parse(std::string_view text);

    constexpr Rep raw() const { return raw_; }
    constexpr bool is_zero() const { return raw_ == 0; }

    /// Decimal digits, no separators.
    std::string to_string() const;
    /// Fixed-point ETH rendering with all 18 fractional digits.
    std::string to_eth_string() const;

    Wei& operator+=(Wei other);
    Wei& operator-=(Wei other);

    friend Wei operator+(Wei a, Wei b) { return a += b; }
    friend Wei operator-(Wei a, Wei b) { return a -= b; }
    friend Wei operator*(Wei a, std::uint64_t k);
    friend constexpr auto operator<=>(Wei, Wei) = default;
    friend constexpr bool operator==(Wei, Wei) = default;

private:
    Rep raw_ = 0;
};

/// Signed net position (received minus paid). Same exactness rules as Wei.
class SignedWei {
public:
    using Rep = __int128;

    constexpr SignedWei() = default;
    constexpr explicit SignedWei(Rep raw)
        : raw_(raw)
    {
    }
    static SignedWei from(Wei w);
    static SignedWei parse(std::string_view text);

    constexpr Rep raw() const { return raw_; }
    constexpr bool is_negative() const { return raw_ < 0; }
    constexpr bool is_positive() const { return raw_ > 0; }
    constexpr bool is_zero() const { return raw_ == 0; }
    Wei magnitude() const;

    std::string to_string() const;
    std::string to_eth_string() const;

    SignedWei& operator+=(SignedWei other);
    SignedWei& operator-=(SignedWei other);
    friend SignedWei operator+(SignedWei a, SignedWei b) { return a += b; }
    friend SignedWei operator-(SignedWei a, SignedWei b) { return a -= b; }
    friend constexpr auto operator<=>(SignedWei, SignedWei) = default;
    friend constexpr bool operator==(SignedWei, SignedWei) = default;

private:
    Rep raw_ = 0;
};

inline constexpr Wei kWeiPerEther = Wei::from_ether(1);

/// Lossy conversion for statistics and display only.
long double to_long_double(Wei w);
long double to_long_double(SignedWei w);

} // namespace forsage
