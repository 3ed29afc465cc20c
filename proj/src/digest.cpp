#include "forsage/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>
#include <stdexcept>

namespace forsage {

namespace {

    void put_ids(std::string& out, const std::vector<UserId>& ids)
    {
        out += '[';
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i)
                out += ',';
            out += std::to_string(ids[i]);
        }
        out += ']';
    }

    void put_opt(std::string& out, const std::optional<UserId>& id)
    {
        out += id ? std::to_string(*id) : std::string("-");
    }

} // namespace

std::string canonical_serialization(const ContractState& state)
{
    std::string out;
    out.reserve(state.user_count() * 1024);
    out += "forsage-state v1\n";
    out += "next_ordinal " + std::to_string(state.next_ordinal()) + "\n";
    for (std::size_t id = 0; id < state.user_count(); ++id) {
        const auto& u = state.users()[id];
        const auto& led = state.ledger(static_cast<UserId>(id));
        out += "user " + std::to_string(id) + " " + u.address.value + " upline " + std::to_string(u.upline)
            + " partners " + std::to_string(u.partners_count) + " reg " + std::to_string(u.registration_ordinal)
            + " received " + led.received.to_string() + " sent " + led.sent.to_string() + "\n";
        for (std::size_t l = 0; l < Level::kCount; ++l) {
            const auto& s = u.x3[l];
            out += " x3 " + std::to_string(l + 1) + " a" + std::to_string(s.active) + " b"
                + std::to_string(s.blocked) + " n" + std::to_string(s.never_block) + " r"
                + std::to_string(s.reinvest_count) + " ref ";
            put_opt(out, s.slot_referrer);
            out += ' ';
            put_ids(out, s.referrals);
            out += '\n';
        }
        for (std::size_t l = 0; l < Level::kCount; ++l) {
            const auto& s = u.x4[l];
            out += " x4 " + std::to_string(l + 1) + " a" + std::to_string(s.active) + " b"
                + std::to_string(s.blocked) + " n" + std::to_string(s.never_block) + " r"
                + std::to_string(s.reinvest_count) + " ref ";
            put_opt(out, s.slot_referrer);
            out += " closed ";
            put_opt(out, s.closed_part);
            out += ' ';
            put_ids(out, s.first_level);
            out += ' ';
            put_ids(out, s.second_level);
            out += '\n';
        }
    }
    return out;
}

std::string sha256_hex(std::string_view bytes)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md {};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1
        || EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
        throw std::runtime_error("sha256 failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[md[i] >> 4];
        hex += kHex[md[i] & 0xf];
    }
    return hex;
}

std::string state_digest(const ContractState& state)
{
    return sha256_hex(canonical_serialization(state));
}

} // namespace forsage
