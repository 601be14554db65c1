#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arena/dynamics.hpp"
#include "arena/meta.hpp"
#include "arena/surface.hpp"
#include "arena/typecheck.hpp"

namespace arena::cli {

enum ExitCode : int {
    Ok = 0,
    Rejected = 1,
    Stuck = 2,
    ParseFailure = 3,
    HarnessFailure = 4,
    CorpusMismatch = 5,
};

struct RunConfig {
    enum class Command { Check, Run, Meta, Corpus } command = Command::Check;
    std::string input;
    bool core = false;
    std::size_t fuel = 100000;
    bool trace = false;
    bool ext_int = false;
    bool unsafe = false;
};

// parse + lower + elaborate + check_program
struct Analysis {
    enum class Stage { ParseError, Rejected, Accepted } stage = Stage::ParseError;
    std::string parse_error;  // `L:C parse: message`
    TermP core;
    TypeReport report;
};

Analysis analyze(std::string_view text, const ParseOptions& opts);

// `ARENAS ℓ0[2] ℓ1[3 killed]`
std::string arena_summary(const Store& store);

struct Expectation {
    bool accept = true;
    std::string reject_kind;
    std::optional<std::string> type;
    std::optional<std::string> value;
    std::optional<std::size_t> live, killed;
    bool ext_int = false;
};

// Throws std::invalid_argument on a malformed line.
Expectation parse_expect(std::string_view text);

struct CorpusOutcome {
    std::string name;
    bool pass = false;
    std::string verdict;  // `accept` or `reject:<Kind>` or `parse-error`
    std::string detail;   // first mismatch
};

CorpusOutcome run_corpus_file(const std::filesystem::path& arn, std::size_t fuel = 100000);
std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir);

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// CLI11 front end; returns the process exit code.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace arena::cli
