#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>

#include "arena/meta.hpp"

using namespace arena;

namespace {

template <class F>
double time_it(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* what, double serial, double parallel, bool same) {
    std::printf("%-28s serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n", what, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0, same ? "results match" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP timings for the oracle sweep and the harness batch"};
    std::size_t bindings = 4, depth = 4;
    app.add_option("--bindings", bindings, "context size for the oracle sweep")->check(CLI::Range(1, 4));
    app.add_option("--depth", depth, "term depth for the harness batch")->check(CLI::Range(1, 4));
    CLI11_PARSE(app, argc, argv);

    std::printf("threads: %d\n", omp_get_max_threads());

    auto envs = enumerate_contexts(bindings);
    OracleSweep s, p;
    double ts = time_it([&] { s = sweep_oracle_serial(envs); });
    double tp = time_it([&] { p = sweep_oracle_parallel(envs); });
    std::printf("oracle: %zu contexts, %zu pairs, %zu disagreements\n", s.contexts, s.pairs, s.disagreements);
    row("qualifier oracle sweep", ts, tp, s.pairs == p.pairs && s.disagreements == p.disagreements);

    auto terms = enumerate_small_terms(depth);
    BatchResult bs, bp;
    ts = time_it([&] { bs = run_harness_serial(terms); });
    tp = time_it([&] { bp = run_harness_parallel(terms); });
    std::printf("harness: %zu terms, %zu accepted, %zu steps\n", bs.terms, bs.accepted, bs.steps);
    row("progress+preservation batch", ts, tp,
        bs.accepted == bp.accepted && bs.steps == bp.steps &&
            bs.preservation_failures == bp.preservation_failures && bs.progress_failures == bp.progress_failures);
    return 0;
}
