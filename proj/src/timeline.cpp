#include "leo/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace leo::offload {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

ResourceTimeline::ResourceTimeline(double max_capacity)
    : ResourceTimeline(max_capacity, {{0.0, max_capacity}}) {}

ResourceTimeline::ResourceTimeline(double max_capacity, const std::vector<Segment>& profile)
    : max_capacity_(max_capacity), base_(profile) {
    if (!(max_capacity >= 0.0) || !std::isfinite(max_capacity)) {
        throw std::invalid_argument("timeline maximum must be finite and nonnegative");
    }
    if (profile.empty() || profile.front().start != 0.0) {
        throw std::invalid_argument("timeline profile must start at t = 0");
    }
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const auto& s = profile[i];
        if (i > 0 && !(s.start > profile[i - 1].start)) throw std::invalid_argument("profile not strictly sorted");
        if (!(s.capacity >= 0.0) || s.capacity > max_capacity) {
            throw std::invalid_argument("profile capacity outside [0, max]");
        }
        segments_[s.start] = s.capacity;
    }
}

double ResourceTimeline::capacity_at(Seconds t) const {
    if (t < 0.0) return 0.0;
    auto it = segments_.upper_bound(t);
    return std::prev(it)->second;
}

std::vector<ResourceTimeline::Segment> ResourceTimeline::segments() const {
    std::vector<Segment> out;
    out.reserve(segments_.size());
    for (const auto& [start, cap] : segments_) out.push_back({start, cap});
    return out;
}

Seconds ResourceTimeline::finish_time(Seconds start, double amount) const {
    if (!(amount >= 0.0)) throw std::invalid_argument("negative demand");
    if (start < 0.0) throw std::invalid_argument("negative start time");
    if (amount == 0.0) return start;

    auto it = std::prev(segments_.upper_bound(start));
    Seconds t = start;
    double remaining = amount;
    for (;;) {
        const auto next = std::next(it);
        const Seconds end = next == segments_.end() ? kInf : next->first;
        const double cap = it->second;
        if (cap > 0.0) {
            const double available = end == kInf ? kInf : cap * (end - t);
            if (available >= remaining) return t + remaining / cap;
            remaining -= available;
        }
        if (next == segments_.end()) return kInf;
        t = end;
        it = next;
    }
}

ResourceTimeline::Span ResourceTimeline::service_span(Seconds start, double amount) const {
    if (!(amount >= 0.0)) throw std::invalid_argument("negative demand");
    if (start < 0.0) throw std::invalid_argument("negative start time");
    if (amount == 0.0) return {};

    auto it = std::prev(segments_.upper_bound(start));
    Seconds elapsed = 0.0;
    double remaining = amount;
    for (;;) {
        const auto next = std::next(it);
        const Seconds span = next == segments_.end() ? kInf : next->first - start - elapsed;
        const double cap = it->second;
        if (cap > 0.0) {
            const double available = span == kInf ? kInf : cap * span;
            if (available >= remaining) return {elapsed, remaining / cap};
            remaining -= available;
        }
        if (next == segments_.end()) return {kInf, 0.0};
        elapsed += span;
        it = next;
    }
}

Seconds ResourceTimeline::service_time(Seconds start, double amount) const {
    return service_span(start, amount).total();
}

double ResourceTimeline::integrate_span(Seconds start, Seconds duration) const {
    if (!(duration > 0.0)) return 0.0;
    if (start < 0.0) throw std::invalid_argument("negative start time");
    double total = 0.0;
    auto it = std::prev(segments_.upper_bound(start));
    Seconds elapsed = 0.0;
    while (elapsed < duration) {
        const auto next = std::next(it);
        const Seconds span = next == segments_.end() ? kInf : next->first - start - elapsed;
        const Seconds used = std::min(span, duration - elapsed);
        total += it->second * used;
        if (next == segments_.end()) break;
        elapsed += span;
        it = next;
    }
    return total;
}

double ResourceTimeline::integrate_span(Seconds start, const Span& span) const {
    if (start < 0.0) throw std::invalid_argument("negative start time");
    if (!std::isfinite(span.lead)) return kInf;
    double total = 0.0;
    auto it = std::prev(segments_.upper_bound(start));
    Seconds elapsed = 0.0;
    // walks the same offsets service_span did, so `lead` is hit exactly
    while (elapsed < span.lead) {
        const auto next = std::next(it);
        if (next == segments_.end()) return kInf;
        const Seconds step = next->first - start - elapsed;
        total += it->second * step;
        elapsed += step;
        it = next;
    }
    return total + it->second * span.tail;
}

double ResourceTimeline::integrate(Seconds from, Seconds to) const {
    if (to <= from) return 0.0;
    from = std::max(from, 0.0);
    double total = 0.0;
    auto it = std::prev(segments_.upper_bound(from));
    Seconds t = from;
    while (t < to) {
        const auto next = std::next(it);
        const Seconds end = std::min(next == segments_.end() ? kInf : next->first, to);
        total += it->second * (end - t);
        t = end;
        if (next == segments_.end()) break;
        it = next;
    }
    return total;
}

Seconds ResourceTimeline::reserve(Seconds start, double amount, std::uint64_t owner) {
    const Seconds finish = finish_time(start, amount);
    if (finish == kInf) throw std::runtime_error("reservation can never complete");
    if (finish == start) return finish;

    std::vector<Reservation> pieces;
    auto it = std::prev(segments_.upper_bound(start));
    Seconds t = start;
    while (t < finish) {
        const auto next = std::next(it);
        const Seconds end = std::min(next == segments_.end() ? kInf : next->first, finish);
        if (it->second > 0.0) pieces.push_back({owner, t, end, it->second});
        t = end;
        if (next == segments_.end()) break;
        it = next;
    }
    for (const auto& p : pieces) {
        assign(p.start, p.end, 0.0);
        ledger_.push_back(p);
    }
    return finish;
}

ResourceTimeline ResourceTimeline::replay() const {
    ResourceTimeline out(max_capacity_, base_);
    for (const auto& r : ledger_) {
        out.assign(r.start, r.end, 0.0);
        out.ledger_.push_back(r);
    }
    return out;
}

void ResourceTimeline::assign(Seconds from, Seconds to, double capacity) {
    if (!(to > from)) return;
    const double after = capacity_at(to);
    segments_.erase(segments_.lower_bound(from), segments_.lower_bound(to));
    segments_[from] = capacity;
    if (to != kInf && !segments_.count(to)) segments_[to] = after;

    // merge equal neighbours around the edited range
    auto tidy = [this](std::map<Seconds, double>::iterator pos) {
        if (pos == segments_.end() || pos == segments_.begin()) return;
        if (std::prev(pos)->second == pos->second) segments_.erase(pos);
    };
    tidy(segments_.find(to));
    tidy(segments_.find(from));
}

Seconds transmit_delay(const ResourceTimeline& link, double bits, Seconds t_arrive) {
    if (!(bits > 0.0)) throw std::invalid_argument("transmitted volume must be positive");
    return link.service_time(t_arrive, bits);
}

Seconds compute_delay(const ResourceTimeline& cpu, double gflo, Seconds t_arrive, NodeKind kind) {
    if (!(gflo >= 0.0)) throw std::invalid_argument("computational requirement must be nonnegative");
    switch (kind) {
        case NodeKind::Source:
            return kInf;
        case NodeKind::Ground:
            return 0.0;
        case NodeKind::Satellite:
            break;
    }
    return cpu.service_time(t_arrive, gflo);
}

}  // namespace leo::offload
