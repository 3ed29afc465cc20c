#include "forsage/wei.hpp"

#include <algorithm>
#include <limits>

namespace forsage {

namespace {

    using U = Wei::Rep;
    using S = SignedWei::Rep;

    constexpr U kMaxU = std::numeric_limits<U>::max();
    constexpr S kMaxS = static_cast<S>(kMaxU >> 1);
    constexpr S kMinS = -kMaxS - 1;

    std::string digits_of(U v)
    {
        if (v == 0)
            return "0";
        std::string out;
        while (v != 0) {
            out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    U parse_digits(std::string_view text)
    {
        if (text.empty())
            throw AmountError("empty amount");
        U v = 0;
        for (char c : text) {
            if (c < '0' || c > '9')
                throw AmountError("invalid digit in amount: " + std::string(text));
            const U d = static_cast<U>(c - '0');
            if (v > (kMaxU - d) / 10)
                throw AmountError("amount overflows 128 bits: " + std::string(text));
            v = v * 10 + d;
        }
        return v;
    }

    std::string eth_of(U v)
    {
        std::string whole = digits_of(v / kWeiPerEther.raw());
        std::string frac = digits_of(v % kWeiPerEther.raw());
        frac.insert(0, 18 - frac.size(), '0');
        return whole + "." + frac;
    }

    U magnitude_of(S v)
    {
        return v < 0 ? static_cast<U>(-(v + 1)) + 1 : static_cast<U>(v);
    }

} // namespace

Wei Wei::parse(std::string_view text)
{
    return Wei { parse_digits(text) };
}

std::string Wei::to_string() const { return digits_of(raw_); }
std::string Wei::to_eth_string() const { return eth_of(raw_); }

Wei& Wei::operator+=(Wei other)
{
    if (raw_ > kMaxU - other.raw_)
        throw AmountError("wei addition overflow");
    raw_ += other.raw_;
    return *this;
}

Wei& Wei::operator-=(Wei other)
{
    if (other.raw_ > raw_)
        throw AmountError("wei subtraction underflow");
    raw_ -= other.raw_;
    return *this;
}

Wei operator*(Wei a, std::uint64_t k)
{
    if (k != 0 && a.raw_ > kMaxU / k)
        throw AmountError("wei multiplication overflow");
    return Wei { a.raw_ * k };
}

SignedWei SignedWei::from(Wei w)
{
    if (w.raw() > static_cast<U>(kMaxS))
        throw AmountError("amount does not fit a signed position");
    return SignedWei { static_cast<S>(w.raw()) };
}

SignedWei SignedWei::parse(std::string_view text)
{
    if (!text.empty() && text.front() == '-') {
        const U m = parse_digits(text.substr(1));
        if (m > static_cast<U>(kMaxS) + 1)
            throw AmountError("signed amount out of range: " + std::string(text));
        return SignedWei { m == static_cast<U>(kMaxS) + 1 ? kMinS : -static_cast<S>(m) };
    }
    return from(Wei::parse(text));
}

Wei SignedWei::magnitude() const { return Wei { magnitude_of(raw_) }; }

std::string SignedWei::to_string() const
{
    return (raw_ < 0 ? "-" : "") + digits_of(magnitude_of(raw_));
}

std::string SignedWei::to_eth_string() const
{
    return (raw_ < 0 ? "-" : "") + eth_of(magnitude_of(raw_));
}

SignedWei& SignedWei::operator+=(SignedWei other)
{
    if (__builtin_add_overflow(raw_, other.raw_, &raw_))
        throw AmountError("signed wei addition overflow");
    return *this;
}

SignedWei& SignedWei::operator-=(SignedWei other)
{
    if (__builtin_sub_overflow(raw_, other.raw_, &raw_))
        throw AmountError("signed wei subtraction overflow");
    return *this;
}

long double to_long_double(Wei w) { return static_cast<long double>(w.raw()); }
long double to_long_double(SignedWei w) { return static_cast<long double>(w.raw()); }

} // namespace forsage
