#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "arena/dynamics.hpp"
#include "arena/typecheck.hpp"

namespace arena {

struct MachineEnv {
    StoreTyping sigma;
    Observation phi;
    std::set<Loc> kappa;
};

enum class EnvRule { Base, Fresh, Kill };
const char* to_string(EnvRule r);

class HarnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Classifies a step and evolves (Σ, φ, κ). `cell_type` is the referent type
// of a newly allocated cell. Returns the rule used through `rule`.
MachineEnv env_update(const MachineEnv& me, const TermP& before, const StepResult& r,
                      const std::optional<QType>& cell_type, EnvRule* rule = nullptr);

bool store_wf(const StoreTyping& sigma, std::string* why = nullptr);
bool store_typed(const MachineEnv& me, const Store& store, std::string* why = nullptr);

struct StepRecord {
    std::size_t n = 0;
    Event event = Event::Beta;
    EnvRule eu = EnvRule::Base;
    bool preservation = true;
    bool wf = true;
    // preservation held only after widening φ to every live location
    bool wrong_witness = false;
    std::string note;
};

struct HarnessReport {
    std::vector<StepRecord> steps;
    bool ok = true;
    bool reached_value = false;
    bool stuck = false;
    StuckReason stuck_reason = StuckReason::FreeVariable;
    std::size_t alloc = 0;
    std::size_t killed = 0;
    std::size_t uaf = 0;
    std::size_t partial_closes = 0;
    std::string failure;
    MachineEnv final_env;
    Store final_store;
    TermP final_term;

    std::vector<std::string> lines() const;
    std::string summary(const std::string& program) const;
};

struct HarnessOptions {
    std::size_t fuel = 10000;
    StepOptions step;
};

HarnessReport check_preservation(const TermP& program, const HarnessOptions& opts = {});
HarnessReport check_progress(const TermP& program, const HarnessOptions& opts = {});

// ---------------------------------------------------------------------------
// qualifier-subtyping oracle

// Qualifiers over dom(env) ∪ {◇} are encoded as bitmasks: bit i is the
// i-th name of `universe`, the last bit is ◇.
struct QualUniverse {
    std::vector<Name> names;
    std::size_t bits() const { return names.size() + 1; }
    std::size_t subsets() const { return std::size_t{1} << bits(); }
    Qualifier decode(std::uint32_t mask) const;
};

QualUniverse universe_of(const TypingEnv& env);

// rel[a] has bit b set iff a <: b is derivable.
using QualRelation = std::vector<std::uint64_t>;

QualRelation declarative_qsub_oracle(const TypingEnv& env, std::size_t universe_bound = 5);

// Every telescope of at most `max_bindings` entries whose qualifiers range
// over earlier names and ◇; entries are term or type bindings.
std::vector<TypingEnv> enumerate_contexts(std::size_t max_bindings);

struct OracleSweep {
    std::size_t contexts = 0;
    std::size_t pairs = 0;
    std::size_t disagreements = 0;
    std::vector<std::string> examples;
};

OracleSweep sweep_oracle_serial(const std::vector<TypingEnv>& envs);
OracleSweep sweep_oracle_parallel(const std::vector<TypingEnv>& envs);

// ---------------------------------------------------------------------------
// enumeration

struct EnumeratedTerm {
    TermP term;
    std::size_t depth;
};

std::vector<EnumeratedTerm> enumerate_small_terms(std::size_t depth, const TypingEnv& env = {});

struct BatchResult {
    std::size_t terms = 0;
    std::size_t accepted = 0;
    std::size_t progress_failures = 0;
    std::size_t preservation_failures = 0;
    std::size_t uaf = 0;
    std::size_t partial_closes = 0;
    std::size_t steps = 0;
    std::vector<std::string> examples;
};

BatchResult run_harness_serial(const std::vector<EnumeratedTerm>& terms, const HarnessOptions& opts = {});
BatchResult run_harness_parallel(const std::vector<EnumeratedTerm>& terms, const HarnessOptions& opts = {});

}  // namespace arena
