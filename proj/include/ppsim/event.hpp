#pragma once

namespace ppsim {

/// One entry of a scheduler: a timestamp plus a value whose meaning depends
/// on the scheduler's role (intensity jump, kernel jump, node index, ...).
struct Event {
    double time = 0.0;
    double value = 0.0;

    friend bool operator==(const Event&, const Event&) = default;
};

} // namespace ppsim
