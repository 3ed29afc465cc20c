#include "forsage/contract.hpp"

#include <algorithm>
#include <cctype>

namespace forsage {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::BadValue:
        return "bad-value";
    case ErrorCode::DuplicateRegistration:
        return "duplicate-registration";
    case ErrorCode::UnknownReferrer:
        return "unknown-referrer";
    case ErrorCode::SelfReferral:
        return "self-referral";
    case ErrorCode::UnregisteredUser:
        return "unregistered-user";
    case ErrorCode::InvalidLevel:
        return "invalid-level";
    case ErrorCode::LevelAlreadyActive:
        return "level-already-active";
    case ErrorCode::PreviousLevelInactive:
        return "previous-level-inactive";
    case ErrorCode::NonMonotonicOrdinal:
        return "non-monotonic-ordinal";
    case ErrorCode::InactiveSlot:
        return "inactive-slot";
    }
    return "unknown";
}

ContractError::ContractError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail)
    , code_(code)
{
}

std::string_view to_string(MatrixKind kind)
{
    return kind == MatrixKind::X3 ? "x3" : "x4";
}

std::optional<MatrixKind> parse_matrix(std::string_view text)
{
    if (text.size() != 2 || std::tolower(static_cast<unsigned char>(text[0])) != 'x')
        return std::nullopt;
    if (text[1] == '3')
        return MatrixKind::X3;
    if (text[1] == '4')
        return MatrixKind::X4;
    return std::nullopt;
}

Level::Level(int value)
    : value_(value)
{
    if (value < kMin || value > kMax)
        throw ContractError(ErrorCode::InvalidLevel, "level " + std::to_string(value) + " outside [1, 12]");
}

std::string_view to_string(PaymentClass cls)
{
    switch (cls) {
    case PaymentClass::Direct:
        return "direct";
    case PaymentClass::Spillover:
        return "spillover";
    case PaymentClass::Skip:
        return "skip";
    case PaymentClass::ReinvestPassthrough:
        return "reinvest-passthrough";
    }
    return "unknown";
}

std::optional<PaymentClass> parse_payment_class(std::string_view text)
{
    for (auto c : { PaymentClass::Direct, PaymentClass::Spillover, PaymentClass::Skip,
             PaymentClass::ReinvestPassthrough }) {
        if (to_string(c) == text)
            return c;
    }
    return std::nullopt;
}

bool UserRecord::is_active(MatrixKind m, Level l) const
{
    return m == MatrixKind::X3 ? x3_at(l).active : x4_at(l).active;
}

bool UserRecord::is_blocked(MatrixKind m, Level l) const
{
    return m == MatrixKind::X3 ? x3_at(l).blocked : x4_at(l).blocked;
}

std::optional<UserId> UserRecord::slot_referrer(MatrixKind m, Level l) const
{
    return m == MatrixKind::X3 ? x3_at(l).slot_referrer : x4_at(l).slot_referrer;
}

std::uint32_t UserRecord::reinvest_count(MatrixKind m, Level l) const
{
    return m == MatrixKind::X3 ? x3_at(l).reinvest_count : x4_at(l).reinvest_count;
}

class StateMutator {
public:
    static UserId add_user(ContractState& s, Address address, UserId upline)
    {
        const auto id = static_cast<UserId>(s.users_.size());
        UserRecord rec;
        rec.address = std::move(address);
        rec.upline = upline;
        rec.registration_ordinal = id;
        s.index_.emplace(rec.address.value, id);
        s.users_.push_back(std::move(rec));
        s.ledger_.push_back({});
        return id;
    }

    static void credit(ContractState& s, UserId to, Wei amount) { s.ledger_.at(to).received += amount; }
    static void debit(ContractState& s, UserId from, Wei amount) { s.ledger_.at(from).sent += amount; }
    static void advance(ContractState& s, std::uint64_t tx_ordinal) { s.next_ordinal_ = tx_ordinal + 1; }
};

ContractState::ContractState(Address owner)
{
    StateMutator::add_user(*this, std::move(owner), 0);
    auto& o = users_.front();
    for (auto& slot : o.x3) {
        slot.active = true;
        slot.never_block = true;
    }
    for (auto& slot : o.x4) {
        slot.active = true;
        slot.never_block = true;
    }
}

std::optional<UserId> ContractState::find(const Address& address) const
{
    auto it = index_.find(address.value);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

UserId ContractState::require(const Address& address) const
{
    auto id = find(address);
    if (!id)
        throw ContractError(ErrorCode::UnregisteredUser, address.value);
    return *id;
}

ContractState new_state(Address owner) { return ContractState(std::move(owner)); }

Wei slot_price(Level level)
{
    return Wei::from_milliether(25) * (std::uint64_t { 1 } << level.index());
}

Wei registration_price() { return slot_price(Level(1)) * 2; }

PaymentClass classify_payment(const RoutingTrace& trace)
{
    if (trace.recipient != trace.intended)
        return trace.matrix == MatrixKind::X4 ? PaymentClass::Spillover : PaymentClass::Skip;
    if (trace.reinvest_hops > 0)
        return PaymentClass::ReinvestPassthrough;
    return PaymentClass::Direct;
}

UserId find_free_referrer(const ContractState& state, UserId user, MatrixKind matrix, Level level)
{
    UserId current = user;
    for (;;) {
        const UserId up = state.user(current).upline;
        if (state.user(up).is_active(matrix, level))
            return up;
        current = up;
    }
}

Address find_free_referrer(const ContractState& state, const Address& user, MatrixKind matrix, Level level)
{
    return state.user(find_free_referrer(state, state.require(user), matrix, level)).address;
}

namespace {

    // Pays `intended`, or the first unblocked account reached by following
    // slot referrers from it. X3 referrers always point to strictly older
    // uplines; X4 referrers can be reassigned sideways, so the walk is
    // capped and falls back to the owner if it ever revisits itself.
    void pay(ContractState& s, MatrixKind m, Level l, UserId payer, UserId intended,
        std::uint32_t reinvest_hops, Wei amount, std::uint64_t tx_ordinal, TxEffects& fx)
    {
        RoutingTrace trace { m, intended, intended, reinvest_hops, 0 };
        const std::size_t cap = s.user_count();
        while (s.user(trace.recipient).is_blocked(m, l)) {
            const auto next = s.user(trace.recipient).slot_referrer(m, l);
            ++trace.blocked_hops;
            if (!next || trace.blocked_hops > cap) {
                trace.recipient = s.owner();
                break;
            }
            trace.recipient = *next;
        }
        fx.payments.push_back(PaymentEvent {
            s.user(payer).address,
            s.user(trace.recipient).address,
            amount,
            m,
            l,
            classify_payment(trace),
            tx_ordinal,
        });
        StateMutator::credit(s, trace.recipient, amount);
    }

    template <typename Slot>
    void close_slot(const UserRecord& holder, Slot& slot, MatrixKind m, Level l)
    {
        const bool next_open = !l.is_last() && holder.is_active(m, Level(l.value() + 1));
        if (!l.is_last() && !slot.never_block && !next_open)
            slot.blocked = true;
        ++slot.reinvest_count;
    }

    void require_active(bool active, UserId holder, MatrixKind m, Level l)
    {
        if (!active) {
            throw ContractError(ErrorCode::InactiveSlot,
                "user #" + std::to_string(holder) + " " + std::string(to_string(m)) + " level "
                    + std::to_string(l.value()));
        }
    }

    // Second-row placement: pick one of the holder's two first-row
    // children to receive `placed` in its own first row. The closed child
    // is avoided, full children and `placed` itself are skipped, then the
    // child with fewer first-row members wins, ties to the older account.
    std::optional<UserId> choose_child(const ContractState& s, UserId holder, UserId placed, Level l)
    {
        const auto& slot = s.user(holder).x4_at(l);
        std::vector<UserId> candidates;
        for (UserId c : slot.first_level) {
            if (c == placed || c == holder)
                continue;
            if (s.user(c).x4_at(l).first_level.size() >= 2)
                continue;
            if (std::find(candidates.begin(), candidates.end(), c) == candidates.end())
                candidates.push_back(c);
        }
        if (slot.closed_part) {
            const bool has_open = std::any_of(candidates.begin(), candidates.end(),
                [&](UserId c) { return c != *slot.closed_part; });
            if (has_open)
                std::erase(candidates, *slot.closed_part);
        }
        if (candidates.empty())
            return std::nullopt;
        return *std::min_element(candidates.begin(), candidates.end(), [&](UserId a, UserId b) {
            const auto na = s.user(a).x4_at(l).first_level.size();
            const auto nb = s.user(b).x4_at(l).first_level.size();
            if (na != nb)
                return na < nb;
            return s.user(a).registration_ordinal < s.user(b).registration_ordinal;
        });
    }

    void check_ordinal(const ContractState& s, std::uint64_t tx_ordinal)
    {
        if (tx_ordinal < s.next_ordinal()) {
            throw ContractError(ErrorCode::NonMonotonicOrdinal,
                "ordinal " + std::to_string(tx_ordinal) + " < " + std::to_string(s.next_ordinal()));
        }
    }

} // namespace

void route_x3(ContractState& s, UserId payer, UserId placed, UserId slot_holder, Level l, Wei amount,
    std::uint64_t tx_ordinal, TxEffects& fx)
{
    UserId holder = slot_holder;
    std::uint32_t hops = 0;
    for (;;) {
        auto& slot = s.user(holder).x3_at(l);
        require_active(slot.active, holder, MatrixKind::X3, l);
        slot.referrals.push_back(placed);
        if (slot.referrals.size() < 3) {
            pay(s, MatrixKind::X3, l, payer, holder, hops, amount, tx_ordinal, fx);
            return;
        }

        slot.referrals.clear();
        close_slot(s.user(holder), slot, MatrixKind::X3, l);
        fx.fills.push_back({ holder, MatrixKind::X3, l });
        ++hops;
        if (holder == s.owner()) {
            pay(s, MatrixKind::X3, l, payer, holder, hops, amount, tx_ordinal, fx);
            return;
        }

        const UserId next = find_free_referrer(s, holder, MatrixKind::X3, l);
        s.user(holder).x3_at(l).slot_referrer = next;
        placed = holder;
        holder = next;
    }
}

void route_x4(ContractState& s, UserId payer, UserId placed, UserId slot_holder, Level l, Wei amount,
    std::uint64_t tx_ordinal, TxEffects& fx)
{
    UserId holder = slot_holder;
    std::uint32_t hops = 0;
    for (;;) {
        require_active(s.user(holder).x4_at(l).active, holder, MatrixKind::X4, l);

        UserId second_holder;
        if (s.user(holder).x4_at(l).first_level.size() < 2) {
            s.user(holder).x4_at(l).first_level.push_back(placed);
            s.user(placed).x4_at(l).slot_referrer = holder;
            if (holder == s.owner()) {
                pay(s, MatrixKind::X4, l, payer, holder, hops, amount, tx_ordinal, fx);
                return;
            }
            second_holder = *s.user(holder).x4_at(l).slot_referrer;
            s.user(second_holder).x4_at(l).second_level.push_back(placed);
        } else {
            s.user(holder).x4_at(l).second_level.push_back(placed);
            const auto child = choose_child(s, holder, placed, l);
            if (child)
                s.user(*child).x4_at(l).first_level.push_back(placed);
            s.user(placed).x4_at(l).slot_referrer = child.value_or(holder);
            second_holder = holder;
        }

        auto& slot = s.user(second_holder).x4_at(l);
        if (slot.second_level.size() < 4) {
            pay(s, MatrixKind::X4, l, payer, second_holder, hops, amount, tx_ordinal, fx);
            return;
        }

        if (second_holder != s.owner() && slot.slot_referrer) {
            auto& parent = s.user(*slot.slot_referrer).x4_at(l);
            if (std::find(parent.first_level.begin(), parent.first_level.end(), second_holder)
                != parent.first_level.end())
                parent.closed_part = second_holder;
        }
        slot.first_level.clear();
        slot.second_level.clear();
        slot.closed_part.reset();
        close_slot(s.user(second_holder), slot, MatrixKind::X4, l);
        fx.fills.push_back({ second_holder, MatrixKind::X4, l });
        ++hops;
        if (second_holder == s.owner()) {
            pay(s, MatrixKind::X4, l, payer, second_holder, hops, amount, tx_ordinal, fx);
            return;
        }

        placed = second_holder;
        holder = find_free_referrer(s, second_holder, MatrixKind::X4, l);
    }
}

std::vector<PaymentEvent> route_x3(ContractState& state, UserId payer, UserId slot_holder, Level level,
    Wei amount, std::uint64_t tx_ordinal)
{
    TxEffects fx;
    route_x3(state, payer, payer, slot_holder, level, amount, tx_ordinal, fx);
    return std::move(fx.payments);
}

std::vector<PaymentEvent> route_x4(ContractState& state, UserId payer, UserId slot_holder, Level level,
    Wei amount, std::uint64_t tx_ordinal)
{
    TxEffects fx;
    route_x4(state, payer, payer, slot_holder, level, amount, tx_ordinal, fx);
    return std::move(fx.payments);
}

TxEffects register_user(ContractState& s, const Address& new_user, const std::optional<Address>& referrer,
    Wei value, std::uint64_t tx_ordinal)
{
    check_ordinal(s, tx_ordinal);
    if (s.contains(new_user))
        throw ContractError(ErrorCode::DuplicateRegistration, new_user.value);
    if (referrer && *referrer == new_user)
        throw ContractError(ErrorCode::SelfReferral, new_user.value);
    UserId upline = s.owner();
    if (referrer) {
        auto found = s.find(*referrer);
        if (!found)
            throw ContractError(ErrorCode::UnknownReferrer, referrer->value);
        upline = *found;
    }
    if (value != registration_price())
        throw ContractError(ErrorCode::BadValue, "registration requires exactly " + registration_price().to_string() + " wei, got " + value.to_string());

    const Level first(1);
    const UserId id = StateMutator::add_user(s, new_user, upline);
    ++s.user(upline).partners_count;
    s.user(id).x3_at(first).active = true;
    s.user(id).x4_at(first).active = true;
    StateMutator::debit(s, id, value);
    StateMutator::advance(s, tx_ordinal);

    TxEffects fx;
    const UserId x3_holder = find_free_referrer(s, id, MatrixKind::X3, first);
    s.user(id).x3_at(first).slot_referrer = x3_holder;
    route_x3(s, id, id, x3_holder, first, slot_price(first), tx_ordinal, fx);
    const UserId x4_holder = find_free_referrer(s, id, MatrixKind::X4, first);
    route_x4(s, id, id, x4_holder, first, slot_price(first), tx_ordinal, fx);
    return fx;
}

TxEffects buy_new_level(ContractState& s, const Address& user, MatrixKind matrix, Level level, Wei value,
    std::uint64_t tx_ordinal)
{
    check_ordinal(s, tx_ordinal);
    const UserId id = s.require(user);
    const auto& rec = s.user(id);
    if (value != slot_price(level)) {
        throw ContractError(ErrorCode::BadValue,
            "level " + std::to_string(level.value()) + " costs " + slot_price(level).to_string() + " wei, got " + value.to_string());
    }
    if (rec.is_active(matrix, level))
        throw ContractError(ErrorCode::LevelAlreadyActive, user.value);
    const Level prev(level.value() - 1);
    if (!rec.is_active(matrix, prev))
        throw ContractError(ErrorCode::PreviousLevelInactive, user.value);

    StateMutator::debit(s, id, value);
    StateMutator::advance(s, tx_ordinal);

    TxEffects fx;
    if (matrix == MatrixKind::X3) {
        auto& below = s.user(id).x3_at(prev);
        below.blocked = false;
        below.never_block = true;
        s.user(id).x3_at(level).active = true;
        const UserId holder = find_free_referrer(s, id, MatrixKind::X3, level);
        s.user(id).x3_at(level).slot_referrer = holder;
        route_x3(s, id, id, holder, level, value, tx_ordinal, fx);
    } else {
        auto& below = s.user(id).x4_at(prev);
        below.blocked = false;
        below.never_block = true;
        s.user(id).x4_at(level).active = true;
        const UserId holder = find_free_referrer(s, id, MatrixKind::X4, level);
        route_x4(s, id, id, holder, level, value, tx_ordinal, fx);
    }
    return fx;
}

} // namespace forsage
