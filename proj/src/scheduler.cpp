#include "ppsim/scheduler.hpp"

#include <charconv>
#include <cmath>
#include <iterator>
#include <stdexcept>

namespace ppsim {

namespace {

void append_double(std::string& out, double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    out.append(buf, res.ptr);
}

} // namespace

Scheduler::Scheduler(std::initializer_list<Event> events) {
    for (const Event& e : events) {
        insert(e);
    }
}

Event Scheduler::front() const {
    if (events_.empty()) {
        throw std::out_of_range("scheduler is empty");
    }
    const auto& [t, v] = *events_.begin();
    return Event{t, v};
}

double Scheduler::last_time() const {
    if (events_.empty()) {
        throw std::out_of_range("scheduler is empty");
    }
    return events_.rbegin()->first;
}

Event Scheduler::at(std::size_t index) const {
    if (index >= events_.size()) {
        throw std::out_of_range("scheduler index out of range");
    }
    auto it = std::next(events_.begin(), static_cast<std::ptrdiff_t>(index));
    return Event{it->first, it->second};
}

void Scheduler::insert(Event e) {
    if (!std::isfinite(e.time)) {
        throw std::invalid_argument("event time must be finite");
    }
    auto [it, inserted] = events_.try_emplace(e.time, e.value);
    if (!inserted) {
        it->second += e.value;
    }
}

void Scheduler::remove(double time) {
    events_.erase(time);
}

Event Scheduler::pop_first() {
    if (events_.empty()) {
        throw std::out_of_range("pop_first on empty scheduler");
    }
    auto it = events_.begin();
    Event e{it->first, it->second};
    events_.erase(it);
    return e;
}

void Scheduler::prune(double t) {
    events_.erase(events_.begin(), events_.upper_bound(t));
}

void Scheduler::prune_piecewise(double t) {
    if (events_.empty()) {
        throw std::invalid_argument("piecewise prune of an empty scheduler");
    }
    auto first = events_.begin();
    if (t < first->first) {
        throw std::invalid_argument("piecewise prune before the first event");
    }
    if (first->first == t) {
        return; // already anchored at t; nothing else can be <= t
    }
    double level = 0.0;
    auto it = first;
    while (it != events_.end() && it->first <= t) {
        level += it->second;
        ++it;
    }
    // rekey the old anchor node instead of erase+allocate
    auto node = events_.extract(first);
    events_.erase(events_.begin(), it);
    node.key() = t;
    node.mapped() = level;
    events_.insert(events_.begin(), std::move(node));
}

std::optional<std::size_t> Scheduler::lower_bound_index(double t) const {
    auto it = events_.upper_bound(t);
    if (it == events_.begin()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(std::distance(events_.begin(), std::prev(it)));
}

std::optional<std::size_t> Scheduler::upper_bound_index(double t) const {
    auto it = events_.upper_bound(t);
    if (it == events_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(std::distance(events_.begin(), it));
}

Scheduler Scheduler::shifted(double dt) const {
    Scheduler out;
    for (const auto& [t, v] : events_) {
        out.events_.emplace_hint(out.events_.end(), t + dt, v);
    }
    return out;
}

void Scheduler::merge_from(const Scheduler& other) {
    for (const auto& [t, v] : other.events_) {
        auto [it, inserted] = events_.try_emplace(t, v);
        if (!inserted) {
            it->second += v;
        }
    }
}

double Scheduler::evaluate(double s) const {
    if (events_.empty()) {
        throw std::invalid_argument("evaluate on empty scheduler");
    }
    if (s < events_.begin()->first) {
        throw std::invalid_argument("evaluate before the first event");
    }
    double acc = 0.0;
    for (const auto& [t, v] : events_) {
        if (t > s) {
            break;
        }
        acc += v;
    }
    return acc;
}

std::string Scheduler::dump() const {
    std::string out;
    for (const auto& [t, v] : events_) {
        append_double(out, t);
        out.push_back('\t');
        append_double(out, v);
        out.push_back('\n');
    }
    return out;
}

Scheduler union_of(const Scheduler& a, const Scheduler& b) {
    const Scheduler& larger = a.size() >= b.size() ? a : b;
    const Scheduler& smaller = a.size() >= b.size() ? b : a;
    Scheduler out = larger;
    out.merge_from(smaller);
    return out;
}

} // namespace ppsim
