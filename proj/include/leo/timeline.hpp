#pragma once

// Piecewise-constant availability of one exclusive resource (a link's rate in
// bits/s or a CPU's capability in GFLOPS) with a FIFO reservation ledger.

#include <cstdint>
#include <map>
#include <vector>

namespace leo::offload {

using Seconds = double;

class ResourceTimeline {
public:
    struct Segment {
        Seconds start = 0.0;
        double capacity = 0.0;  // holds until the next segment starts

        friend bool operator==(const Segment&, const Segment&) = default;
    };

    /// One contiguous piece of capacity consumed by a reservation.
    struct Reservation {
        std::uint64_t owner = 0;
        Seconds start = 0.0;
        Seconds end = 0.0;
        double capacity = 0.0;
    };

    /// Constant availability at `max_capacity` over [0, inf).
    explicit ResourceTimeline(double max_capacity);

    /// Availability `profile` (first segment must start at 0) bounded by `max_capacity`.
    ResourceTimeline(double max_capacity, const std::vector<Segment>& profile);

    [[nodiscard]] double max_capacity() const noexcept { return max_capacity_; }
    [[nodiscard]] double capacity_at(Seconds t) const;
    [[nodiscard]] std::vector<Segment> segments() const;
    [[nodiscard]] const std::vector<Segment>& base_profile() const noexcept { return base_; }
    [[nodiscard]] const std::vector<Reservation>& reservations() const noexcept { return ledger_; }

    /// Earliest time by which `amount` units have been served starting at
    /// `start`; infinity if the available capacity never accumulates that much.
    [[nodiscard]] Seconds finish_time(Seconds start, double amount) const;

    /// Time from `start` until `amount` has been served, split at the start of
    /// the segment where service completes: `lead` covers whole segments
    /// (waiting included), `tail` the part of the last one. Kept apart so a
    /// short transfer behind a long queue does not lose its low bits.
    struct Span {
        Seconds lead = 0.0;
        Seconds tail = 0.0;

        [[nodiscard]] Seconds total() const noexcept { return lead + tail; }
    };
    [[nodiscard]] Span service_span(Seconds start, double amount) const;

    /// service_span(start, amount).total(): finish_time - start without the
    /// rounding of subtracting two late timestamps.
    [[nodiscard]] Seconds service_time(Seconds start, double amount) const;

    /// Integral of available capacity over [from, to].
    [[nodiscard]] double integrate(Seconds from, Seconds to) const;

    /// Integral over [start, start + duration], measured in offsets from
    /// `start` the same way service_time measures them.
    [[nodiscard]] double integrate_span(Seconds start, Seconds duration) const;
    /// Exact counterpart of service_span: the integral over that span.
    [[nodiscard]] double integrate_span(Seconds start, const Span& span) const;

    /// Consumes all available capacity from `start` until `amount` has been
    /// served and returns the finish time. Throws std::runtime_error if the
    /// demand can never be met.
    Seconds reserve(Seconds start, double amount, std::uint64_t owner);

    /// Rebuilds the availability from the base profile and the ledger.
    [[nodiscard]] ResourceTimeline replay() const;

private:
    void assign(Seconds from, Seconds to, double capacity);

    double max_capacity_;
    std::map<Seconds, double> segments_;
    std::vector<Segment> base_;
    std::vector<Reservation> ledger_;
};

/// Seconds needed to push `bits` over `link` starting at `t_arrive`, waiting included.
[[nodiscard]] Seconds transmit_delay(const ResourceTimeline& link, double bits, Seconds t_arrive);

enum class NodeKind { Source, Satellite, Ground };

/// Seconds needed to serve `gflo` starting at `t_arrive`. The source never
/// computes (infinite delay) and the ground computes instantly.
[[nodiscard]] Seconds compute_delay(const ResourceTimeline& cpu, double gflo, Seconds t_arrive, NodeKind kind);

}  // namespace leo::offload
