#pragma once

// Constant-speed movement along a polyline trajectory.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmwsim/topology.hpp"

namespace mmwsim {

struct Trajectory {
    std::vector<Vec2> waypoints;

    void validate() const {
        if (waypoints.size() < 2)
            throw std::invalid_argument("Trajectory: need at least 2 waypoints");
        for (size_t i = 1; i < waypoints.size(); ++i)
            if (waypoints[i].x == waypoints[i - 1].x &&
                waypoints[i].y == waypoints[i - 1].y)
                throw std::invalid_argument(
                    "Trajectory: consecutive waypoints must be distinct");
    }

    double length() const {
        double total = 0.0;
        for (size_t i = 1; i < waypoints.size(); ++i)
            total += distance(waypoints[i - 1], waypoints[i]);
        return total;
    }
};

struct MobilityState {
    Vec2 position;
    size_t segment = 0;        ///< index of the segment currently travelled
    double segment_offset = 0; ///< metres into that segment
    bool finished = false;     ///< clamped at the final waypoint
};

inline MobilityState start_of(const Trajectory& trajectory) {
    trajectory.validate();
    return MobilityState{trajectory.waypoints.front(), 0, 0.0, false};
}

/// Advance one slot: speed * slot_duration metres along the polyline,
/// folding across waypoints.  Once the end is reached the state pins to the
/// final waypoint.  Zero speed is a no-op.
inline MobilityState step(const MobilityState& state, const Trajectory& trajectory,
                          double speed_mps, double slot_duration_s) {
    if (speed_mps < 0.0 || slot_duration_s <= 0.0)
        throw std::invalid_argument("step: bad speed or slot duration");
    MobilityState next = state;
    if (next.finished || speed_mps == 0.0) return next;

    double remaining = speed_mps * slot_duration_s;
    while (remaining > 0.0) {
        const Vec2& from = trajectory.waypoints[next.segment];
        const Vec2& to = trajectory.waypoints[next.segment + 1];
        const double segment_length = distance(from, to);
        const double left_in_segment = segment_length - next.segment_offset;
        if (remaining < left_in_segment) {
            next.segment_offset += remaining;
            remaining = 0.0;
        } else {
            remaining -= left_in_segment;
            if (next.segment + 2 >= trajectory.waypoints.size()) {
                next.segment_offset = segment_length;
                next.position = to;
                next.finished = true;
                return next;
            }
            ++next.segment;
            next.segment_offset = 0.0;
        }
    }
    const Vec2& from = trajectory.waypoints[next.segment];
    const Vec2& to = trajectory.waypoints[next.segment + 1];
    const double segment_length = distance(from, to);
    const double t = next.segment_offset / segment_length;
    next.position = {from.x + t * (to.x - from.x), from.y + t * (to.y - from.y)};
    return next;
}

/// Straight cell-edge sweep across a row of cells: a horizontal line at
/// y = offset_factor * cell_radius, from one cell radius left of the first
/// gNB to one cell radius right of the last.  offset_factor 0 runs through
/// the cell centres; the 0.9 default hugs the cell edge where coordination
/// matters.
inline Trajectory default_edge_trajectory(std::span<const Gnb> gnbs,
                                          double cell_radius_m,
                                          double offset_factor = 0.9) {
    if (gnbs.size() < 2)
        throw std::invalid_argument(
            "default_edge_trajectory: need at least 2 gNBs");
    if (!(cell_radius_m > 0.0))
        throw std::invalid_argument("default_edge_trajectory: radius must be > 0");
    double min_x = gnbs.front().position.x;
    double max_x = gnbs.front().position.x;
    for (const auto& gnb : gnbs) {
        min_x = std::min(min_x, gnb.position.x);
        max_x = std::max(max_x, gnb.position.x);
    }
    const double y = offset_factor * cell_radius_m;
    Trajectory trajectory;
    trajectory.waypoints = {{min_x - cell_radius_m, y}, {max_x + cell_radius_m, y}};
    return trajectory;
}

/// Number of slots a full traversal takes at the given speed, rounded up.
inline std::int64_t traversal_slots(const Trajectory& trajectory, double speed_mps,
                                    double slot_duration_s) {
    trajectory.validate();
    if (!(speed_mps > 0.0) || !(slot_duration_s > 0.0))
        throw std::invalid_argument("traversal_slots: speed and slot must be > 0");
    const double slots = trajectory.length() / (speed_mps * slot_duration_s);
    return static_cast<std::int64_t>(std::ceil(slots - 1e-9));
}

} // namespace mmwsim
