#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arena/term.hpp"
#include "arena/types.hpp"

namespace arena {

enum class ErrorKind {
    FreshnessViolation,
    ObservationViolation,
    EscapeViolation,
    OverlapViolation,
    LocalLocationViolation,
    DependencyViolation,
    BoundViolation,
    SubsumptionFailure,
    ShapeMismatch,
    UnboundName,
};

const char* to_string(ErrorKind k);
std::optional<ErrorKind> error_kind_from(const std::string& s);

class TypeError : public std::runtime_error {
public:
    TypeError(ErrorKind kind, std::string rule, Span span, const std::string& msg)
        : std::runtime_error(msg), kind(kind), rule(std::move(rule)), span(span) {}
    ErrorKind kind;
    std::string rule;
    Span span;
};

struct CellId {
    Loc l;
    std::uint32_t off;
    friend auto operator<=>(const CellId&, const CellId&) = default;
};

std::string to_string(CellId c);

// Σ, kept in allocation order so well-formedness can be judged prefix-wise.
class StoreTyping {
public:
    void add(CellId c, QType t);
    const QType* find(CellId c) const;
    std::set<Loc> locations() const;
    const std::vector<std::pair<CellId, QType>>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    // Test hook for well-formedness checks.
    std::vector<std::pair<CellId, QType>>& mutable_entries() { return entries_; }

private:
    std::vector<std::pair<CellId, QType>> entries_;
    std::map<CellId, std::size_t> index_;
};

struct Diagnostic {
    Span span;
    std::string rule;
    ErrorKind kind;
    std::string message;
};

struct TypeReport {
    bool accepted = false;
    std::optional<QType> result;
    std::vector<Diagnostic> diagnostics;

    // `ACCEPT <type>` or `REJECT <kind>`
    std::string verdict_line() const;
    // `LINE:COL RULE message` per diagnostic
    std::vector<std::string> diagnostic_lines() const;
};

// Asks the checker to report the referent type it assigned to the
// allocation node at `path` (child indices from the root).
struct RedexProbe {
    std::vector<int> path;
    std::optional<QType> inner;
};

QType synthesize(const TypingEnv& env, const StoreTyping& sigma, const Observation& phi, const TermP& t,
                 RedexProbe* probe = nullptr);

TypeReport check(const TypingEnv& env, const StoreTyping& sigma, const Observation& phi, const TermP& t,
                 const QType& expected, RedexProbe* probe = nullptr);

// t1 t2 where t1 : fun_type, t2 : arg_type; the LC sets cover the dynamic side conditions.
QType apply_rule(const TypingEnv& env, const Observation& phi, const QType& fun_type,
                 const QType& arg_type, const std::set<Loc>& lc_fn = {},
                 const std::set<Loc>& lc_arg = {}, Span span = {});

QType tapply_rule(const TypingEnv& env, const Observation& phi, const QType& univ_type,
                  const QType& arg, const std::set<Loc>& lc_fn = {}, Span span = {});

TypeReport check_program(const TermP& t);

}  // namespace arena
