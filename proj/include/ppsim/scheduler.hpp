#pragma once

#include "ppsim/event.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>

namespace ppsim {

/// Time-ordered event set backed by a self-balancing tree (std::map), with
/// the operation algebra needed by discrete-event point-process simulation:
/// insert (merging values at equal times), remove, pop-first, prune,
/// piecewise prune, bounds, shift and union.
///
/// A scheduler doubles as an encoding of a piecewise-constant function on
/// [first_time, +inf): the first event carries the absolute level at its
/// time, every later event carries the jump at its own break time, and the
/// last level extends to infinity. evaluate() reads that encoding back.
///
/// Not internally synchronized; a scheduler is owned by one simulation run.
class Scheduler {
public:
    using Map = std::map<double, double>;
    using const_iterator = Map::const_iterator;

    Scheduler() = default;
    Scheduler(std::initializer_list<Event> events);

    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }

    const_iterator begin() const noexcept { return events_.begin(); }
    const_iterator end() const noexcept { return events_.end(); }

    /// Earliest event. Throws std::out_of_range when empty.
    Event front() const;
    /// Time of the last event. Throws std::out_of_range when empty.
    double last_time() const;
    /// (index+1)-th earliest event; O(index) walk, meant for tests/debugging.
    Event at(std::size_t index) const;

    /// Places e in time order; an event already at e.time has its value
    /// increased by e.value instead. O(log n).
    /// Throws std::invalid_argument on NaN/infinite time.
    void insert(Event e);

    /// Deletes the event at exactly `time`, if any. O(log n).
    void remove(double time);

    /// Removes and returns the earliest event. Throws std::out_of_range when empty.
    Event pop_first();

    /// Drops every event with time <= t. O(log n + dropped).
    void prune(double t);

    /// Prune that preserves the encoded function on [t, +inf): drops events
    /// with time <= t and re-anchors with one event at t carrying the
    /// accumulated level. Requires a nonempty scheduler and t >= first time
    /// (std::invalid_argument otherwise). O(log n + dropped).
    void prune_piecewise(double t);

    /// Index of the last event with time <= t, or nullopt if t precedes the
    /// first event. The rank walk makes this O(log n + index); fine for the
    /// query/test surface, not used on simulation hot paths.
    std::optional<std::size_t> lower_bound_index(double t) const;

    /// Index of the first event with time > t, or nullopt if none.
    std::optional<std::size_t> upper_bound_index(double t) const;

    /// Translates every event time by +dt, values unchanged. O(n).
    Scheduler shifted(double dt) const;

    /// Adds every event of `other` into this scheduler (equal times merge),
    /// i.e. pointwise sum of the encoded functions. O(|other| log(n + |other|)).
    void merge_from(const Scheduler& other);

    /// Encoded function value at s: sum of values of events with time <= s.
    /// Requires a nonempty scheduler and s >= first time.
    double evaluate(double s) const;

    /// One event per line, `time<TAB>value`, round-trip decimal precision.
    std::string dump() const;

    friend bool operator==(const Scheduler&, const Scheduler&) = default;

private:
    Map events_;
};

/// Pointwise sum of two encoded functions as a new scheduler. Iterates the
/// smaller operand and inserts into (a copy of) the larger.
Scheduler union_of(const Scheduler& a, const Scheduler& b);

} // namespace ppsim
