#pragma once

// Off-chain model of the Forsage "Matrix" contract: per-user X3/X4 slot
// state, registration and level purchase, and the payment routing that
// forwards every incoming wei to other users within the same transaction.

#include "forsage/wei.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace forsage {

enum class ErrorCode {
    BadValue,
    DuplicateRegistration,
    UnknownReferrer,
    SelfReferral,
    UnregisteredUser,
    InvalidLevel,
    LevelAlreadyActive,
    PreviousLevelInactive,
    NonMonotonicOrdinal,
    InactiveSlot,
};

std::string_view to_string(ErrorCode code);

class ContractError : public std::runtime_error {
public:
    ContractError(ErrorCode code, const std::string& detail);
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

enum class MatrixKind : std::uint8_t { X3, X4 };

std::string_view to_string(MatrixKind kind);
/// Accepts "x3"/"x4" in either case.
std::optional<MatrixKind> parse_matrix(std::string_view text);

/// Slot level in [1, 12].
class Level {
public:
    static constexpr int kMin = 1;
    static constexpr int kMax = 12;
    static constexpr std::size_t kCount = kMax;

    explicit Level(int value);

    constexpr int value() const { return value_; }
    constexpr std::size_t index() const { return static_cast<std::size_t>(value_ - 1); }
    constexpr bool is_last() const { return value_ == kMax; }

    friend constexpr auto operator<=>(Level, Level) = default;

private:
    int value_;
};

struct Address {
    std::string value;

    friend auto operator<=>(const Address&, const Address&) = default;
};

/// Dense index of a user in registration order; the owner is 0.
using UserId = std::uint32_t;

enum class PaymentClass : std::uint8_t { Direct, Spillover, Skip, ReinvestPassthrough };

std::string_view to_string(PaymentClass cls);
std::optional<PaymentClass> parse_payment_class(std::string_view text);

struct PaymentEvent {
    Address from;
    Address to;
    Wei amount;
    MatrixKind matrix;
    Level level;
    PaymentClass classification;
    std::uint64_t tx_ordinal;

    friend bool operator==(const PaymentEvent&, const PaymentEvent&) = default;
};

/// A slot reinvest (fill) observed while routing a transaction.
struct SlotFill {
    UserId user;
    MatrixKind matrix;
    Level level;

    friend bool operator==(const SlotFill&, const SlotFill&) = default;
};

struct TxEffects {
    std::vector<PaymentEvent> payments;
    std::vector<SlotFill> fills;
};

struct X3Slot {
    bool active = false;
    std::optional<UserId> slot_referrer;
    std::vector<UserId> referrals;
    bool blocked = false;
    // Set once the next level is bought; the slot can never block again.
    bool never_block = false;
    std::uint32_t reinvest_count = 0;

    friend bool operator==(const X3Slot&, const X3Slot&) = default;
};

struct X4Slot {
    bool active = false;
    std::optional<UserId> slot_referrer;
    std::vector<UserId> first_level;
    std::vector<UserId> second_level;
    bool blocked = false;
    bool never_block = false;
    std::uint32_t reinvest_count = 0;
    std::optional<UserId> closed_part;

    friend bool operator==(const X4Slot&, const X4Slot&) = default;
};

struct UserRecord {
    Address address;
    UserId upline = 0;
    std::uint32_t partners_count = 0;
    std::array<X3Slot, Level::kCount> x3 {};
    std::array<X4Slot, Level::kCount> x4 {};
    std::uint64_t registration_ordinal = 0;

    X3Slot& x3_at(Level l) { return x3[l.index()]; }
    const X3Slot& x3_at(Level l) const { return x3[l.index()]; }
    X4Slot& x4_at(Level l) { return x4[l.index()]; }
    const X4Slot& x4_at(Level l) const { return x4[l.index()]; }

    bool is_active(MatrixKind m, Level l) const;
    bool is_blocked(MatrixKind m, Level l) const;
    std::optional<UserId> slot_referrer(MatrixKind m, Level l) const;
    std::uint32_t reinvest_count(MatrixKind m, Level l) const;

    friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

struct LedgerEntry {
    Wei received;
    Wei sent;

    friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

/// Whole-contract state. Users are stored in registration order, so the
/// user vector is itself the canonical ordering used for digests.
class ContractState {
public:
    explicit ContractState(Address owner);

    UserId owner() const { return 0; }
    const Address& owner_address() const { return users_.front().address; }

    std::size_t user_count() const { return users_.size(); }
    std::span<const UserRecord> users() const { return users_; }
    const UserRecord& user(UserId id) const { return users_.at(id); }
    UserRecord& user(UserId id) { return users_.at(id); }

    std::optional<UserId> find(const Address& address) const;
    /// Throws ContractError(UnregisteredUser).
    UserId require(const Address& address) const;
    bool contains(const Address& address) const { return find(address).has_value(); }

    const LedgerEntry& ledger(UserId id) const { return ledger_.at(id); }
    std::span<const LedgerEntry> ledger() const { return ledger_; }

    /// Smallest ordinal the next transaction may carry.
    std::uint64_t next_ordinal() const { return next_ordinal_; }

    friend bool operator==(const ContractState&, const ContractState&) = default;

private:
    friend class StateMutator;

    std::vector<UserRecord> users_;
    std::unordered_map<std::string, UserId> index_;
    std::vector<LedgerEntry> ledger_;
    std::uint64_t next_ordinal_ = 0;
};

ContractState new_state(Address owner);

/// 0.025 ETH * 2^(level - 1).
Wei slot_price(Level level);
/// Price of joining: one level-1 slot in each matrix.
Wei registration_price();

/// Registers `new_user` under `referrer` (owner when absent). The value is
/// split into two level-1 halves routed through X3 and X4.
TxEffects register_user(ContractState& state, const Address& new_user,
    const std::optional<Address>& referrer, Wei value, std::uint64_t tx_ordinal);

TxEffects buy_new_level(ContractState& state, const Address& user, MatrixKind matrix,
    Level level, Wei value, std::uint64_t tx_ordinal);

/// Nearest ancestor on the upline chain whose (matrix, level) slot is
/// active. Always terminates at the owner.
UserId find_free_referrer(const ContractState& state, UserId user, MatrixKind matrix, Level level);
Address find_free_referrer(const ContractState& state, const Address& user, MatrixKind matrix, Level level);

// Low-level routing entry points. `payer` is the account whose value is
// being forwarded and is recorded as the sender of the emitted payment;
// `placed` is the user that takes a position in the slot holder's matrix.
// For ordinary registrations and purchases these are the same account.
void route_x3(ContractState& state, UserId payer, UserId placed, UserId slot_holder, Level level,
    Wei amount, std::uint64_t tx_ordinal, TxEffects& effects);
void route_x4(ContractState& state, UserId payer, UserId placed, UserId slot_holder, Level level,
    Wei amount, std::uint64_t tx_ordinal, TxEffects& effects);

std::vector<PaymentEvent> route_x3(ContractState& state, UserId payer, UserId slot_holder, Level level,
    Wei amount, std::uint64_t tx_ordinal);
std::vector<PaymentEvent> route_x4(ContractState& state, UserId payer, UserId slot_holder, Level level,
    Wei amount, std::uint64_t tx_ordinal);

/// What happened on the way from the first-choice payee to the account
/// that actually got paid.
struct RoutingTrace {
    MatrixKind matrix;
    UserId intended;
    UserId recipient;
    std::uint32_t reinvest_hops = 0;
    std::uint32_t blocked_hops = 0;
};

PaymentClass classify_payment(const RoutingTrace& trace);

} // namespace forsage
