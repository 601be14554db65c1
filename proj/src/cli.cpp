#include "arena/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace arena::cli {

namespace {

std::string span_prefix(Span s) { return std::to_string(s.line) + ":" + std::to_string(s.col); }

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::size_t killed_count(const Store& s) { return s.total_count() - s.live_count(); }

std::string store_counts(const Store& s) {
    return "STORE live=" + std::to_string(s.live_count()) + " killed=" + std::to_string(killed_count(s));
}

ParseOptions parse_options(const RunConfig& cfg) {
    ParseOptions o;
    o.core = cfg.core;
    o.ext_int = cfg.ext_int;
    return o;
}

}  // namespace

Analysis analyze(std::string_view text, const ParseOptions& opts) {
    Analysis a;
    try {
        a.core = compile(text, opts);
    } catch (const ParseError& e) {
        a.parse_error = span_prefix(e.span) + " parse: " + e.what();
        return a;
    } catch (const LoweringError& e) {
        a.parse_error = span_prefix(e.span) + " lowering: " + e.what();
        return a;
    } catch (const TypeError& e) {
        a.stage = Analysis::Stage::Rejected;
        a.report.diagnostics.push_back({e.span, e.rule, e.kind, e.what()});
        return a;
    }
    a.report = check_program(a.core);
    a.stage = a.report.accepted ? Analysis::Stage::Accepted : Analysis::Stage::Rejected;
    return a;
}

std::string arena_summary(const Store& store) {
    std::string out = "ARENAS";
    for (Loc l : store.locations()) {
        auto col = store.column(l);
        out += " " + loc_name(l) + "[" + std::to_string(col.size());
        if (store.status(col.front()) == Store::Status::Killed) out += " killed";
        out += "]";
    }
    return out;
}

Expectation parse_expect(std::string_view text) {
    Expectation ex;
    bool saw_verdict = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto sp = line.find(' ');
        std::string key = line.substr(0, sp);
        std::string rest = sp == std::string::npos ? "" : trim(std::string_view(line).substr(sp + 1));
        if (key == "VERDICT") {
            saw_verdict = true;
            if (rest == "accept") {
                ex.accept = true;
            } else if (rest.rfind("reject:", 0) == 0 && rest.size() > 7) {
                ex.accept = false;
                ex.reject_kind = rest.substr(7);
            } else {
                throw std::invalid_argument("bad VERDICT: " + rest);
            }
        } else if (key == "TYPE") {
            ex.type = rest;
        } else if (key == "VALUE") {
            ex.value = rest;
        } else if (key == "STORE") {
            std::istringstream fs(rest);
            std::string field;
            while (fs >> field) {
                auto eq = field.find('=');
                if (eq == std::string::npos) throw std::invalid_argument("bad STORE field: " + field);
                std::size_t n = std::stoul(field.substr(eq + 1));
                std::string k = field.substr(0, eq);
                if (k == "live") ex.live = n;
                else if (k == "killed") ex.killed = n;
                else throw std::invalid_argument("bad STORE field: " + field);
            }
        } else if (key == "FLAGS") {
            std::istringstream fs(rest);
            std::string flag;
            while (fs >> flag) {
                if (flag != "--ext-int") throw std::invalid_argument("unsupported flag: " + flag);
                ex.ext_int = true;
            }
        } else {
            throw std::invalid_argument("unknown expect key: " + key);
        }
    }
    if (!saw_verdict) throw std::invalid_argument("missing VERDICT");
    return ex;
}

std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".arn") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

CorpusOutcome run_corpus_file(const std::filesystem::path& arn, std::size_t fuel) {
    CorpusOutcome co;
    co.name = arn.stem().string();
    auto fail = [&](std::string why) {
        co.pass = false;
        if (co.detail.empty()) co.detail = std::move(why);
        return co;
    };
    Expectation ex;
    std::string src;
    try {
        ex = parse_expect(read_file(std::filesystem::path(arn).replace_extension(".expect")));
        src = read_file(arn);
    } catch (const std::exception& e) {
        co.verdict = "error";
        return fail(e.what());
    }
    ParseOptions po;
    po.ext_int = ex.ext_int;
    Analysis a = analyze(src, po);
    switch (a.stage) {
        case Analysis::Stage::ParseError:
            co.verdict = "parse-error";
            return fail(a.parse_error);
        case Analysis::Stage::Rejected: {
            const auto& d = a.report.diagnostics.front();
            co.verdict = std::string("reject:") + to_string(d.kind);
            if (ex.accept) return fail(a.report.diagnostic_lines().front());
            if (ex.reject_kind != to_string(d.kind)) return fail("expected reject:" + ex.reject_kind);
            co.pass = true;
            co.detail = a.report.diagnostic_lines().front();
            return co;
        }
        case Analysis::Stage::Accepted: break;
    }
    co.verdict = "accept";
    if (!ex.accept) return fail("expected reject:" + ex.reject_kind);
    std::string ty = to_string(*a.report.result);
    if (ex.type && *ex.type != ty) return fail("type " + ty + ", expected " + *ex.type);

    EvalOptions eo;
    eo.fuel = fuel;
    EvalResult r = eval(a.core, eo);
    if (r.outcome != EvalResult::Outcome::Value)
        return fail(r.outcome == EvalResult::Outcome::Stuck ? std::string("stuck: ") + to_string(r.reason)
                                                            : "fuel exhausted");
    std::string v = print_term(r.term);
    if (ex.value && *ex.value != v) return fail("value " + v + ", expected " + *ex.value);
    if (ex.live && *ex.live != r.store.live_count())
        return fail(store_counts(r.store) + ", expected live=" + std::to_string(*ex.live));
    if (ex.killed && *ex.killed != killed_count(r.store))
        return fail(store_counts(r.store) + ", expected killed=" + std::to_string(*ex.killed));
    if (r.partial_closes) return fail("partial close");

    HarnessOptions ho;
    ho.fuel = fuel;
    HarnessReport prog = check_progress(a.core, ho);
    if (!prog.ok) return fail("progress: " + prog.failure);
    HarnessReport pres = check_preservation(a.core, ho);
    if (!pres.ok) return fail("preservation: " + pres.failure);
    co.pass = true;
    co.detail = ty + " => " + v + " " + store_counts(r.store);
    return co;
}

namespace {

int report_rejection(const Analysis& a, std::ostream& out, std::ostream& err) {
    if (a.stage == Analysis::Stage::ParseError) {
        err << a.parse_error << '\n';
        out << "REJECT ParseError\n";
        return ParseFailure;
    }
    for (const auto& l : a.report.diagnostic_lines()) err << l << '\n';
    out << a.report.verdict_line() << '\n';
    return Rejected;
}

int run_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::string src = read_file(cfg.input);
    TermP prog;
    if (cfg.unsafe) {
        try {
            ParseOptions po = parse_options(cfg);
            prog = lower(parse(src, po));
            if (has_holes(prog)) prog = elaborate(prog);
        } catch (const TypeError& e) {
            err << span_prefix(e.span) << ' ' << e.rule << ' ' << to_string(e.kind) << ": " << e.what() << '\n';
            out << "REJECT " << to_string(e.kind) << '\n';
            return Rejected;
        } catch (const ParseError& e) {
            err << span_prefix(e.span) << " parse: " << e.what() << '\n';
            out << "REJECT ParseError\n";
            return ParseFailure;
        } catch (const LoweringError& e) {
            err << span_prefix(e.span) << " lowering: " << e.what() << '\n';
            out << "REJECT ParseError\n";
            return ParseFailure;
        }
        out << "UNCHECKED\n";
    } else {
        Analysis a = analyze(src, parse_options(cfg));
        if (a.stage != Analysis::Stage::Accepted) return report_rejection(a, out, err);
        out << a.report.verdict_line() << '\n';
        prog = a.core;
    }
    EvalOptions eo;
    eo.fuel = cfg.fuel;
    eo.trace = cfg.trace;
    EvalResult r = eval(prog, eo);
    for (const auto& l : r.trace_lines()) out << l << '\n';
    switch (r.outcome) {
        case EvalResult::Outcome::Value:
            out << "VALUE " << print_term(r.term) << '\n';
            break;
        case EvalResult::Outcome::Stuck:
            err << "stuck after " << r.steps << " steps: " << to_string(r.reason) << ' ' << r.detail << '\n';
            out << "STUCK " << to_string(r.reason) << '\n';
            break;
        case EvalResult::Outcome::FuelExhausted:
            err << "fuel exhausted after " << r.steps << " steps\n";
            out << "FUEL\n";
            break;
    }
    out << store_counts(r.store) << '\n' << arena_summary(r.store) << '\n';
    return r.outcome == EvalResult::Outcome::Value ? Ok : Stuck;
}

int run_meta(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Analysis a = analyze(read_file(cfg.input), parse_options(cfg));
    if (a.stage != Analysis::Stage::Accepted) return report_rejection(a, out, err);
    out << a.report.verdict_line() << '\n';
    HarnessOptions ho;
    ho.fuel = cfg.fuel;
    HarnessReport prog = check_progress(a.core, ho);
    HarnessReport pres = check_preservation(a.core, ho);
    for (const auto& l : pres.lines()) out << l << '\n';
    std::string name = std::filesystem::path(cfg.input).stem().string();
    out << "PROGRESS " << name << ' ' << (prog.ok ? "OK" : "FAIL") << " steps=" << prog.steps.size() << '\n';
    out << pres.summary(name) << '\n';
    if (!prog.ok) err << "progress: " << prog.failure << '\n';
    if (!pres.ok) err << "preservation: " << pres.failure << '\n';
    return prog.ok && pres.ok ? Ok : HarnessFailure;
}

int run_corpus(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto files = corpus_files(cfg.input);
    std::vector<CorpusOutcome> results(files.size());
    const long n = static_cast<long>(files.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i)
        results[static_cast<std::size_t>(i)] = run_corpus_file(files[static_cast<std::size_t>(i)], cfg.fuel);
    std::size_t passed = 0;
    for (const auto& r : results) {
        out << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.verdict << "  " << r.detail << '\n';
        passed += r.pass;
    }
    out << "CORPUS " << passed << "/" << results.size() << " passed\n";
    if (passed != results.size()) err << (results.size() - passed) << " corpus mismatches\n";
    return passed == results.size() ? Ok : CorpusMismatch;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.fuel == 0) throw std::invalid_argument("fuel must be positive");
    if (cfg.unsafe && cfg.command != RunConfig::Command::Run)
        throw std::invalid_argument("--unsafe only applies to run");
    switch (cfg.command) {
        case RunConfig::Command::Check: {
            Analysis a = analyze(read_file(cfg.input), parse_options(cfg));
            if (a.stage != Analysis::Stage::Accepted) return report_rejection(a, out, err);
            out << a.report.verdict_line() << '\n';
            return Ok;
        }
        case RunConfig::Command::Run: return run_eval(cfg, out, err);
        case RunConfig::Command::Meta: return run_meta(cfg, out, err);
        case RunConfig::Command::Corpus: return run_corpus(cfg, out, err);
    }
    return Ok;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"arena: checker and interpreter for a reachability calculus with shadow arenas"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub, bool eval_flags) {
        sub->add_option("file", cfg.input, "input program")->required()->check(CLI::ExistingFile);
        sub->add_flag("--core", cfg.core, "parse the core syntax");
        sub->add_flag("--ext-int", cfg.ext_int, "enable + - * and ifz");
        if (eval_flags) sub->add_option("--fuel", cfg.fuel, "step budget")->check(CLI::PositiveNumber);
    };
    auto* check = app.add_subcommand("check", "type-check a program");
    add_common(check, false);
    auto* runc = app.add_subcommand("run", "type-check and evaluate");
    add_common(runc, true);
    runc->add_flag("--trace", cfg.trace, "print every reduction step");
    runc->add_flag("--unsafe", cfg.unsafe, "skip the type check");
    auto* meta = app.add_subcommand("meta", "run the progress and preservation harnesses");
    add_common(meta, true);
    auto* corpus = app.add_subcommand("corpus", "run every .arn file against its .expect");
    corpus->add_option("dir", cfg.input, "corpus directory")->required()->check(CLI::ExistingDirectory);
    corpus->add_option("--fuel", cfg.fuel, "step budget")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }
    if (check->parsed()) cfg.command = RunConfig::Command::Check;
    else if (runc->parsed()) cfg.command = RunConfig::Command::Run;
    else if (meta->parsed()) cfg.command = RunConfig::Command::Meta;
    else cfg.command = RunConfig::Command::Corpus;

    try {
        return run(cfg, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return ParseFailure;
    }
}

}  // namespace arena::cli
