#include <chrono>
#include <functional>
#include <iostream>

#include "support.hpp"

using namespace arena;
using namespace arena::test;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

const std::vector<std::string> kPositive = {"intro", "coalloc", "coarse", "closures", "alias", "scoped_unit",
                                            "scoped_block", "knot", "callback", "fix", "cycle"};

struct Negative {
    const char* name;
    ErrorKind kind;
};
const std::vector<Negative> kNegative = {{"neg_overlap", ErrorKind::OverlapViolation},
                                         {"neg_telescope", ErrorKind::SubsumptionFailure},
                                         {"neg_escape", ErrorKind::EscapeViolation}};

std::string killed_set(const Store& s) {
    std::string out;
    for (Loc l : s.killed_locations()) out += loc_name(l) + "×" + std::to_string(s.column(l).size()) + " ";
    return out;
}

Outcome positive_corpus() {
    Outcome o;
    for (const auto& name : kPositive) {
        auto co = cli::run_corpus_file(corpus_dir() / (name + ".arn"));
        o.require(co.pass, name + ": " + co.detail);
    }
    auto run = [](const std::string& n) { return eval(corpus_program(n)); };
    EvalResult intro = run("intro");
    o.require(cli::arena_summary(intro.store) == "ARENAS ℓ0[2] ℓ1[3 killed]", "intro arenas " + cli::arena_summary(intro.store));
    EvalResult unit = run("scoped_unit");
    o.require(unit.store.killed_locations() == std::set<Loc>{0} && unit.store.column(0).size() == 1,
              "scoped_unit killed " + killed_set(unit.store));
    // a and u share the scoped column; v and the result live on
    EvalResult block = run("scoped_block");
    o.require(block.store.killed_locations() == std::set<Loc>{0} && block.store.column(0).size() == 2 &&
                  block.store.live_count() == 2 && print_term(block.term) == "42",
              "scoped_block killed " + killed_set(block.store));
    EvalResult fix = run("fix");
    o.require(print_term(fix.term) == "120", "factorial(5) = " + print_term(fix.term));
    EvalResult cycle = run("cycle");
    o.require(cycle.store.killed_locations() == std::set<Loc>{0} && cycle.store.column(0).size() == 4 &&
                  cycle.store.live_count() == 0,
              "cycle killed " + killed_set(cycle.store));
    if (o.pass) o.detail = std::to_string(kPositive.size()) + " programs";
    return o;
}

Outcome negative_corpus() {
    Outcome o;
    for (const auto& n : kNegative) {
        auto a = cli::analyze(slurp(corpus_dir() / (std::string(n.name) + ".arn")), {});
        bool ok = a.stage == cli::Analysis::Stage::Rejected && a.report.diagnostics.front().kind == n.kind &&
                  !a.report.diagnostics.front().rule.empty();
        o.require(ok, std::string(n.name) + ": " + a.report.verdict_line());
        if (ok) o.detail += std::string(n.name) + "=" + a.report.diagnostics.front().rule + "/" + to_string(n.kind) + " ";
    }
    return o;
}

struct Harness {
    BatchResult batch;
    std::size_t corpus_progress_fail = 0, corpus_preservation_fail = 0, corpus_uaf = 0, corpus_partial = 0;
    bool atomic_closes = true;
};

Harness run_harnesses() {
    Harness h;
    for (const auto& name : kPositive) {
        TermP t = corpus_program(name);
        HarnessReport prog = check_progress(t);
        HarnessReport pres = check_preservation(t);
        h.corpus_progress_fail += !prog.ok;
        h.corpus_preservation_fail += !pres.ok;
        h.corpus_uaf += prog.uaf + pres.uaf;
        h.corpus_partial += prog.partial_closes + pres.partial_closes;
        EvalResult r = eval(t);
        h.corpus_uaf += r.outcome == EvalResult::Outcome::Stuck && r.reason == StuckReason::UseAfterFree;
        h.corpus_partial += r.partial_closes;
        h.atomic_closes &= r.store.columns_uniform();
    }
    h.batch = run_harness_parallel(enumerate_small_terms(4));
    return h;
}

Outcome translation() {
    Outcome o;
    ParseOptions core;
    core.core = true;
    TermP lowered = lower(parse("f(new Ref(t) scoped)"));
    TermP expected = lower(parse("with x = Ref(t) in f(x)", core));
    o.require(alpha_equal(lowered, expected), "lowered to " + print_term(lowered));
    std::size_t n = 0;
    for (const auto& p : cli::corpus_files(corpus_dir())) {
        if (p.stem().string().rfind("neg_", 0) == 0) continue;
        ParseOptions opts = corpus_options(p);
        TermP t = compile(slurp(p), opts);
        opts.core = true;
        TermP back = lower(parse(print_term(t), opts));
        o.require(alpha_equal(t, back), p.stem().string() + " does not round-trip");
        ++n;
    }
    if (o.pass) o.detail = print_term(lowered) + "; " + std::to_string(n) + " programs round-trip";
    return o;
}

Outcome mutant() {
    Outcome o;
    HarnessOptions opts;
    opts.step.skip_bulk_kill = true;
    HarnessReport rep = check_preservation(corpus_program("scoped_block"), opts);
    o.require(!rep.ok, "mutant survived");
    const StepRecord* close = nullptr;
    const StepRecord* first_bad = nullptr;
    for (const auto& s : rep.steps) {
        if (!close && s.event == Event::Close) close = &s;
        if (!first_bad && (!s.wf || !s.preservation)) first_bad = &s;
    }
    o.require(close && first_bad == close, "first failure is not the close step");
    o.require(first_bad && !first_bad->wf && first_bad->note.find("killed column") != std::string::npos,
              first_bad ? "failure was: " + first_bad->note : "no failing step");
    if (o.pass) o.detail = "step " + std::to_string(close->n) + ": " + close->note;
    return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
    bool all = true;
    auto report = [&](int n, const char* title, const Outcome& o, double secs) {
        all &= o.pass;
        std::cout << "CRITERION " << n << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << title << "  (" << o.detail
                  << "; " << secs << " s)" << std::endl;
    };

    auto t0 = std::chrono::steady_clock::now();
    {
        Outcome o = positive_corpus();
        report(1, "positive corpus", o, seconds_since(t0));
    }
    t0 = std::chrono::steady_clock::now();
    {
        Outcome o = negative_corpus();
        report(2, "negative corpus", o, seconds_since(t0));
    }

    t0 = std::chrono::steady_clock::now();
    Harness h = run_harnesses();
    double harness_secs = seconds_since(t0);
    std::string batch = std::to_string(h.batch.terms) + " terms, " + std::to_string(h.batch.accepted) + " accepted, " +
                        std::to_string(h.batch.steps) + " steps";
    {
        Outcome o;
        o.require(h.corpus_progress_fail == 0, "corpus progress failures");
        o.require(h.batch.progress_failures == 0,
                  std::to_string(h.batch.progress_failures) + " enumerated progress failures" +
                      (h.batch.examples.empty() ? "" : ": " + h.batch.examples.front()));
        if (o.pass) o.detail = batch;
        report(3, "progress", o, harness_secs);
    }
    {
        Outcome o;
        o.require(h.corpus_preservation_fail == 0, "corpus preservation failures");
        o.require(h.batch.preservation_failures == 0,
                  std::to_string(h.batch.preservation_failures) + " enumerated preservation failures" +
                      (h.batch.examples.empty() ? "" : ": " + h.batch.examples.front()));
        if (o.pass) o.detail = batch;
        report(4, "preservation", o, harness_secs);
    }

    t0 = std::chrono::steady_clock::now();
    {
        OracleSweep s = sweep_oracle_parallel(enumerate_contexts(4));
        Outcome o;
        o.require(s.pairs >= 10000, "only " + std::to_string(s.pairs) + " pairs");
        o.require(s.disagreements == 0, std::to_string(s.disagreements) + " disagreements" +
                                            (s.examples.empty() ? "" : ": " + s.examples.front()));
        if (o.pass) o.detail = std::to_string(s.contexts) + " contexts, " + std::to_string(s.pairs) + " pairs";
        report(5, "qualifier oracle", o, seconds_since(t0));
    }
    {
        Outcome o;
        o.require(h.corpus_uaf + h.batch.uaf == 0, "use-after-free observed");
        o.require(h.corpus_partial + h.batch.partial_closes == 0 && h.atomic_closes, "non-atomic close observed");
        if (o.pass) o.detail = "0 UAF, 0 partial closes";
        report(6, "no use-after-free", o, 0.0);
    }
    t0 = std::chrono::steady_clock::now();
    {
        Outcome o = translation();
        report(7, "translation fidelity", o, seconds_since(t0));
    }
    t0 = std::chrono::steady_clock::now();
    {
        Outcome o = mutant();
        report(8, "mutation sensitivity", o, seconds_since(t0));
    }
    return all ? 0 : 1;
}
