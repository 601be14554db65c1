#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arena/term.hpp"
#include "arena/typecheck.hpp"

namespace arena {

enum class Event { Beta, BetaT, Ref, RefAt, Deref, Assign, With, Close, Prim, IfZero };
const char* to_string(Event e);

enum class StuckReason { UseAfterFree, UnboundCell, NotAFunction, NotARef, FreeVariable, NotAnInt };
const char* to_string(StuckReason r);

class Store {
public:
    enum class Status { Live, Killed, Absent };

    CellId alloc_fresh(TermP v);
    CellId alloc_at(Loc l, TermP v);
    Status status(CellId c) const;
    // Live value or null.
    TermP read(CellId c) const;
    void write(CellId c, TermP v);
    void kill(Loc l);
    // Test hook: overwrite a cell's state directly.
    void set_cell(CellId c, TermP v);

    std::size_t live_count() const;
    std::size_t total_count() const { return cells_.size(); }
    std::set<Loc> locations() const;
    std::set<Loc> live_locations() const;
    std::set<Loc> killed_locations() const;
    std::vector<CellId> column(Loc l) const;
    const std::map<CellId, TermP>& cells() const { return cells_; }

    // every location is either wholly live or wholly killed
    bool columns_uniform() const;

private:
    std::map<CellId, TermP> cells_;  // null = killed
    Loc next_loc_ = 0;
    std::map<Loc, std::uint32_t> next_off_;
};

struct StepOptions {
    // mutant: (close) leaves the column live
    bool skip_bulk_kill = false;
};

struct StepResult {
    enum class Kind { Stepped, Value, Stuck } kind = Kind::Value;
    TermP term;
    Event event = Event::Beta;
    std::vector<int> redex_path;
    std::string redex;
    std::optional<CellId> allocated;
    std::optional<Loc> killed;
    StuckReason reason = StuckReason::FreeVariable;
    std::string detail;
};

StepResult step(const TermP& t, Store& store, const StepOptions& opts = {});

struct TraceEntry {
    Event event;
    std::string redex;
    std::string delta;
};

struct EvalOptions {
    std::size_t fuel = 100000;
    bool trace = false;
    StepOptions step;
};

struct EvalResult {
    enum class Outcome { Value, FuelExhausted, Stuck } outcome = Outcome::Value;
    TermP term;
    Store store;
    std::vector<TraceEntry> trace;
    std::size_t steps = 0;
    StuckReason reason = StuckReason::FreeVariable;
    std::string detail;
    std::size_t closes = 0;
    // a (close) that left part of its column live
    std::size_t partial_closes = 0;

    std::vector<std::string> trace_lines() const;
    std::string store_line() const;
};

EvalResult eval(const TermP& t, const EvalOptions& opts = {});

std::string store_delta(const StepResult& r, const Store& after);

}  // namespace arena
