#pragma once

// Random valid transaction logs and state comparison against the reference
// model, shared by the property tests and the acceptance gate.

#include "forsage/contract.hpp"
#include "forsage/rng.hpp"
#include "forsage/simulation.hpp"
#include "forsage/txlog.hpp"
#include "support/reference_matrix.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

struct FuzzOptions {
    std::size_t transactions = 1000;
    double register_share = 0.6;
    double fallback_share = 0.05;
    // Draw uplines among the most recent users only, giving deep trees.
    std::size_t recent_window = 0;
};

/// A log of `transactions` records that all succeed on a fresh state.
inline std::vector<forsage::TxRecord> fuzz_log(std::uint64_t seed, const FuzzOptions& opt = {})
{
    using namespace forsage;
    Rng rng(seed);
    const Address owner = default_owner_address();
    std::vector<Address> users { owner };
    // Highest active level per user and matrix (owner excluded from buys).
    std::vector<std::array<int, 2>> top { { 12, 12 } };
    std::vector<TxRecord> log;
    std::uint64_t ordinal = 1;
    while (log.size() < opt.transactions) {
        TxRecord rec;
        rec.ordinal = ordinal;
        ordinal += 1 + rng.below(3);
        const bool can_buy = users.size() > 1;
        if (!can_buy || rng.bernoulli(opt.register_share)) {
            rec.sender = sim_address(users.size());
            rec.value = registration_price();
            if (rng.bernoulli(opt.fallback_share)) {
                rec.function = TxFunction::Fallback;
            } else {
                rec.function = TxFunction::Register;
                std::size_t lo = 0;
                if (opt.recent_window && users.size() > opt.recent_window)
                    lo = users.size() - opt.recent_window;
                rec.referrer = users[lo + rng.below(users.size() - lo)];
            }
            users.push_back(rec.sender);
            top.push_back({ 1, 1 });
        } else {
            const auto who = 1 + rng.below(users.size() - 1);
            const int m = static_cast<int>(rng.below(2));
            if (top[who][m] >= 12)
                continue;
            const int level = ++top[who][m];
            rec.sender = users[who];
            rec.function = TxFunction::BuyNewLevel;
            rec.matrix = m == 0 ? MatrixKind::X3 : MatrixKind::X4;
            rec.level = Level(level);
            rec.value = slot_price(Level(level));
        }
        if (rng.bernoulli(0.8))
            rec.fee = Wei(1'000'000'000'000'000ULL + rng.below(20'000'000'000'000'000ULL));
        log.push_back(std::move(rec));
    }
    return log;
}

/// Applies a log to the reference model. Returns false on the first rejection.
inline bool apply_reference(oracle::Reference& ref, const std::vector<forsage::TxRecord>& log)
{
    using namespace forsage;
    for (const auto& r : log) {
        bool ok = false;
        switch (r.function) {
        case TxFunction::Register:
            ok = ref.registration(r.sender.value, r.referrer ? r.referrer->value : ref.owner(), r.value.raw(), r.ordinal);
            break;
        case TxFunction::Fallback:
            ok = ref.registration(r.sender.value, ref.owner(), r.value.raw(), r.ordinal);
            break;
        case TxFunction::BuyNewLevel:
            ok = ref.buy(r.sender.value, *r.matrix == MatrixKind::X3 ? 3 : 4, r.level->value(), r.value.raw(), r.ordinal);
            break;
        }
        if (!ok)
            return false;
    }
    return true;
}

inline oracle::Payment to_reference(const forsage::PaymentEvent& e)
{
    return { e.from.value, e.to.value, e.amount.raw(), e.matrix == forsage::MatrixKind::X3 ? 3 : 4, e.level.value(),
        std::string(forsage::to_string(e.classification)), e.tx_ordinal };
}

/// Empty when the states agree, else a description of the first difference.
inline std::string compare_with_reference(const forsage::ContractState& s, const oracle::Reference& ref)
{
    using namespace forsage;
    std::ostringstream diff;
    if (s.user_count() != ref.users().size()) {
        diff << "user count " << s.user_count() << " vs " << ref.users().size();
        return diff.str();
    }
    auto name = [&](const std::optional<UserId>& id) { return id ? s.user(*id).address.value : std::string(); };
    auto names = [&](const std::vector<UserId>& ids) {
        std::vector<std::string> out;
        for (auto id : ids)
            out.push_back(s.user(id).address.value);
        return out;
    };
    for (const auto& u : s.users()) {
        const auto& addr = u.address.value;
        if (!ref.registered(addr))
            return "missing in reference: " + addr;
        const auto& r = ref.user(addr);
        if (s.user(u.upline).address.value != r.upline)
            return "upline of " + addr;
        if (static_cast<int>(u.partners_count) != r.partners)
            return "partners of " + addr;
        for (int l = 1; l <= 12; ++l) {
            const auto& a = u.x3[l - 1];
            const oracle::Slot3 b = r.x3.count(l) ? r.x3.at(l) : oracle::Slot3 {};
            const std::string where = addr + " x3[" + std::to_string(l) + "] ";
            if (a.active != b.active)
                return where + "active";
            if (a.blocked != b.blocked)
                return where + "blocked";
            if (a.never_block != b.locked_open)
                return where + "never_block";
            if (static_cast<int>(a.reinvest_count) != b.reinvest)
                return where + "reinvest";
            if (name(a.slot_referrer) != b.referrer)
                return where + "slot referrer " + name(a.slot_referrer) + " vs " + b.referrer;
            if (names(a.referrals) != b.referrals)
                return where + "referrals";
        }
        for (int l = 1; l <= 12; ++l) {
            const auto& a = u.x4[l - 1];
            const oracle::Slot4 b = r.x4.count(l) ? r.x4.at(l) : oracle::Slot4 {};
            const std::string where = addr + " x4[" + std::to_string(l) + "] ";
            if (a.active != b.active)
                return where + "active";
            if (a.blocked != b.blocked)
                return where + "blocked";
            if (a.never_block != b.locked_open)
                return where + "never_block";
            if (static_cast<int>(a.reinvest_count) != b.reinvest)
                return where + "reinvest";
            if (name(a.slot_referrer) != b.referrer)
                return where + "slot referrer " + name(a.slot_referrer) + " vs " + b.referrer;
            if (names(a.first_level) != b.first)
                return where + "first level";
            if (names(a.second_level) != b.second)
                return where + "second level";
            if (name(a.closed_part) != b.closed)
                return where + "closed part";
        }
    }
    return {};
}

} // namespace testsupport
