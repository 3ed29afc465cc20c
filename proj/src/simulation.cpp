#include "forsage/simulation.hpp"

#include "forsage/rng.hpp"

#include <deque>
#include <exception>
#include <stdexcept>

namespace forsage {

Address default_owner_address() { return Address { "0x81ca1e4de24136ebcf34ca518af87f18fd39d45e" }; }

Address sim_address(std::uint64_t index)
{
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s(42, '0');
    s[1] = 'x';
    for (int i = 41; i >= 2 && index != 0; --i) {
        s[static_cast<std::size_t>(i)] = kHex[index & 0xf];
        index >>= 4;
    }
    return Address { std::move(s) };
}

std::string_view to_string(RecruitmentKind kind)
{
    switch (kind) {
    case RecruitmentKind::UniformUpline:
        return "uniform";
    case RecruitmentKind::PreferentialByPartners:
        return "preferential";
    case RecruitmentKind::Chain:
        return "chain";
    }
    return "unknown";
}

std::optional<RecruitmentKind> parse_recruitment(std::string_view text)
{
    for (auto k : { RecruitmentKind::UniformUpline, RecruitmentKind::PreferentialByPartners, RecruitmentKind::Chain }) {
        if (to_string(k) == text)
            return k;
    }
    return std::nullopt;
}

void RecruitmentModel::validate() const
{
    if (!(purchase.probability >= 0.0 && purchase.probability <= 1.0))
        throw std::invalid_argument("purchase probability must lie in [0, 1]");
    if (purchase.max_level < Level::kMin || purchase.max_level > Level::kMax)
        throw std::invalid_argument("max level must lie in [1, 12]");
    fees.validate();
}

std::vector<TxRecord> build_schedule(const RecruitmentModel& model)
{
    model.validate();
    Rng recruit(model.seed);
    Rng fee_rng(splitmix64(model.seed ^ 0x6665652d73747265ULL));

    ContractState shadow(model.owner);
    std::vector<TxRecord> out;
    out.reserve(model.arrivals * 2);
    std::vector<UserId> tickets { shadow.owner() };
    std::uint64_t ordinal = 1;

    auto emit = [&](TxRecord rec) {
        rec.ordinal = ordinal++;
        rec.fee = model.fees.sample(fee_rng);
        auto fx = apply_transaction(shadow, rec);
        out.push_back(std::move(rec));
        return fx;
    };

    for (std::uint64_t i = 0; i < model.arrivals; ++i) {
        UserId upline = shadow.owner();
        switch (model.kind) {
        case RecruitmentKind::UniformUpline:
            upline = static_cast<UserId>(recruit.below(shadow.user_count()));
            break;
        case RecruitmentKind::PreferentialByPartners:
            upline = tickets[recruit.below(tickets.size())];
            break;
        case RecruitmentKind::Chain:
            upline = static_cast<UserId>(shadow.user_count() - 1);
            break;
        }

        TxRecord reg;
        reg.sender = sim_address(i + 1);
        reg.function = TxFunction::Register;
        reg.referrer = shadow.user(upline).address;
        reg.value = registration_price();
        auto fx = emit(std::move(reg));
        tickets.push_back(static_cast<UserId>(shadow.user_count() - 1));
        tickets.push_back(upline);

        std::deque<SlotFill> pending(fx.fills.begin(), fx.fills.end());
        while (!pending.empty()) {
            const SlotFill fill = pending.front();
            pending.pop_front();
            if (fill.user == shadow.owner() || fill.level.value() >= model.purchase.max_level)
                continue;
            const Level next(fill.level.value() + 1);
            if (shadow.user(fill.user).is_active(fill.matrix, next))
                continue;
            if (!recruit.bernoulli(model.purchase.probability))
                continue;
            TxRecord buy;
            buy.sender = shadow.user(fill.user).address;
            buy.function = TxFunction::BuyNewLevel;
            buy.matrix = fill.matrix;
            buy.level = next;
            buy.value = slot_price(next);
            auto more = emit(std::move(buy));
            pending.insert(pending.end(), more.fills.begin(), more.fills.end());
        }
    }
    return out;
}

SimResult run(std::span<const TxRecord> schedule, const Address& owner)
{
    SimResult result { ContractState(owner), {}, {}, std::string(Rng::kAlgorithm), std::nullopt };
    auto replayed = replay(result.state, schedule, ReplayMode::Strict);
    result.events = std::move(replayed.events);
    result.log = std::move(replayed.applied);
    return result;
}

SimResult simulate(const RecruitmentModel& model)
{
    const auto schedule = build_schedule(model);
    auto result = run(schedule, model.owner);
    result.seed = model.seed;
    return result;
}

std::vector<SimResult> simulate_sweep_serial(const RecruitmentModel& base, std::span<const std::uint64_t> seeds)
{
    std::vector<SimResult> results;
    results.reserve(seeds.size());
    for (auto seed : seeds) {
        auto model = base;
        model.seed = seed;
        results.push_back(simulate(model));
    }
    return results;
}

std::vector<SimResult> simulate_sweep(const RecruitmentModel& base, std::span<const std::uint64_t> seeds)
{
    base.validate();
    std::vector<std::optional<SimResult>> slots(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
    const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            auto model = base;
            model.seed = seeds[static_cast<std::size_t>(i)];
            slots[static_cast<std::size_t>(i)].emplace(simulate(model));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    std::vector<SimResult> results;
    results.reserve(seeds.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (errors[i])
            std::rethrow_exception(errors[i]);
        results.push_back(std::move(*slots[i]));
    }
    return results;
}

} // namespace forsage
