// Benchmark comparing the serial reference implementations against the
// OpenMP-parallel kernels: per-account feature extraction and LOOCV
// prediction. Usage: bchange_bench [n_accounts] [events_per_account]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bchange/pipeline.hpp"
#include "bchange/synth.hpp"

using namespace bchange;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class Fn>
double best_of(int reps, Fn&& fn) {
    double best = 1e100;
    for (int r = 0; r < reps; ++r) {
        const auto start = Clock::now();
        fn();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const int n_accounts = argc > 1 ? std::atoi(argv[1]) : 2000;
    const int n_events = argc > 2 ? std::atoi(argv[2]) : 120;

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled (parallel path degenerates to serial)\n");
#endif
    std::printf("accounts: %d, events/account: %d\n\n", n_accounts, n_events);

    std::vector<ingest::AccountTimeline> accounts;
    for (int i = 0; i < 3; ++i) {
        synth::RegimeSpec spec;
        spec.regime = static_cast<synth::Regime>(i);  // stable, repetitive, erratic
        spec.n_accounts = n_accounts / 3;
        spec.n_events = std::min(n_events, 300);
        spec.seed = 1000 + static_cast<std::uint64_t>(i);
        for (auto& a : synth::generate(spec)) accounts.push_back(std::move(a));
    }

    segment::ChangeSetting setting;  // sets-of-4 / cumulative / compression
    features::Options opts;

    pipeline::ExtractionResult serial_result, parallel_result;
    const double t_serial = best_of(3, [&] {
        serial_result = pipeline::extract_features(accounts, setting, opts,
                                                   pipeline::Execution::serial);
    });
    const double t_parallel = best_of(3, [&] {
        parallel_result = pipeline::extract_features(accounts, setting, opts,
                                                     pipeline::Execution::parallel);
    });

    bool equal = serial_result.feats.size() == parallel_result.feats.size();
    for (std::size_t i = 0; equal && i < serial_result.feats.size(); ++i)
        equal = serial_result.feats[i].action_hist == parallel_result.feats[i].action_hist &&
                serial_result.feats[i].content_hist == parallel_result.feats[i].content_hist;

    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial", "openmp", "speedup");
    std::printf("%-28s %9.3fs %9.3fs %7.2fx\n", "feature extraction", t_serial, t_parallel,
                t_serial / t_parallel);

    classify::Dataset dataset;
    std::map<std::string, bool> positive;
    for (const auto& a : accounts)
        positive[a.account_id] = a.label->label == ingest::Label::positive;
    for (const auto& f : serial_result.feats)
        dataset.push_back({f.vector(), positive[f.account_id]});

    classify::EvalReport eval_serial, eval_parallel;
    classify::EvalOptions serial_opts;
    serial_opts.parallel = false;
    const double l_serial =
        best_of(1, [&] { eval_serial = classify::loocv(dataset, serial_opts); });
    const double l_parallel = best_of(1, [&] { eval_parallel = classify::loocv(dataset); });
    std::printf("%-28s %9.3fs %9.3fs %7.2fx\n", "loocv (k=1..10)", l_serial, l_parallel,
                l_serial / l_parallel);

    bool eval_equal = eval_serial.per_k.size() == eval_parallel.per_k.size();
    for (std::size_t i = 0; eval_equal && i < eval_serial.per_k.size(); ++i)
        eval_equal = eval_serial.per_k[i].confusion == eval_parallel.per_k[i].confusion;

    std::printf("\nserial/parallel results identical: %s\n",
                equal && eval_equal ? "yes" : "NO - BUG");
    std::printf("loocv best_k=%d macro-F1=%.4f over %zu accounts\n", eval_serial.best_k,
                eval_serial.at_best().metrics.f1, dataset.size());
    return equal && eval_equal ? 0 : 1;
}
