#include "forsage/analytics.hpp"
#include "forsage/simulation.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <numeric>

using namespace forsage;

namespace {

const SimResult& fixture(std::uint64_t arrivals)
{
    static std::map<std::uint64_t, SimResult> cache;
    auto it = cache.find(arrivals);
    if (it == cache.end()) {
        RecruitmentModel m;
        m.arrivals = arrivals;
        m.seed = 7;
        m.fees = FeeModel::lognormal();
        it = cache.emplace(arrivals, simulate(m)).first;
    }
    return it->second;
}

template <bool Parallel>
void flows(benchmark::State& st)
{
    const auto& sim = fixture(static_cast<std::uint64_t>(st.range(0)));
    const auto index = kernels::index_addresses(sim.events, sim.log);
    const auto fees = FeeModel::constant();
    for (auto _ : st) {
        auto f = Parallel ? kernels::accumulate_flows(sim.events, sim.log, index, fees)
                          : kernels::accumulate_flows_serial(sim.events, sim.log, index, fees);
        benchmark::DoNotOptimize(f);
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(sim.events.size()));
}

template <bool Parallel>
void slot_referrals(benchmark::State& st)
{
    const auto& sim = fixture(static_cast<std::uint64_t>(st.range(0)));
    for (auto _ : st) {
        auto c = Parallel ? kernels::count_slot_referrals(sim.state) : kernels::count_slot_referrals_serial(sim.state);
        benchmark::DoNotOptimize(c);
    }
}

template <bool Parallel>
void seed_sweep(benchmark::State& st)
{
    RecruitmentModel m;
    m.arrivals = static_cast<std::uint64_t>(st.range(0));
    std::vector<std::uint64_t> seeds(8);
    std::iota(seeds.begin(), seeds.end(), 1);
    for (auto _ : st) {
        auto r = Parallel ? simulate_sweep(m, seeds) : simulate_sweep_serial(m, seeds);
        benchmark::DoNotOptimize(r);
    }
}

} // namespace

BENCHMARK(flows<false>)->Name("flows/serial")->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(flows<true>)->Name("flows/parallel")->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(slot_referrals<false>)->Name("slot_referrals/serial")->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(slot_referrals<true>)->Name("slot_referrals/parallel")->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(seed_sweep<false>)->Name("seed_sweep/serial")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(seed_sweep<true>)->Name("seed_sweep/parallel")->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
