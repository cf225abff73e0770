#pragma once

// Network topology and the binary association algebra tying users, serving
// gNBs and the near set together.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mmwsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

struct Gnb {
    int id = 0;
    Vec2 position;
    bool is_soft_gnb = false; ///< hosts the coordination function
    double cell_radius_m = 100.0;
};

struct Ue {
    int id = 0;
    Vec2 position;
    double speed_mps = 0.0;
};

/// Binary association state for U users and B gNBs.
///
///   activity[b]        alpha_b: gNB b serves at least one user
///   serving[u][b]      beta_ub: gNB b is a serving gNB of user u
///   near_set[u][b]     N_ub: gNB b is in user u's near set
///
/// A serving link only counts when it is also in the near set, i.e. the
/// effective link indicator is serving[u][b] && near_set[u][b].
struct AssociationState {
    int users = 0;
    int gnbs = 0;
    std::vector<char> activity;  ///< [gnbs]
    std::vector<char> serving;   ///< [users * gnbs], row-major by user
    std::vector<char> near_set;  ///< [users * gnbs]

    AssociationState() = default;
    AssociationState(int user_count, int gnb_count)
        : users(user_count), gnbs(gnb_count),
          activity(static_cast<size_t>(gnb_count), 0),
          serving(static_cast<size_t>(user_count) * static_cast<size_t>(gnb_count), 0),
          near_set(static_cast<size_t>(user_count) * static_cast<size_t>(gnb_count), 0) {
        if (user_count < 0 || gnb_count < 0)
            throw std::invalid_argument("AssociationState: negative dimensions");
    }

    size_t link(int u, int b) const {
        return static_cast<size_t>(u) * static_cast<size_t>(gnbs) +
               static_cast<size_t>(b);
    }
};

namespace detail {
inline void check_shape(const AssociationState& state) {
    const size_t links =
        static_cast<size_t>(state.users) * static_cast<size_t>(state.gnbs);
    if (state.users < 0 || state.gnbs < 0 ||
        state.activity.size() != static_cast<size_t>(state.gnbs) ||
        state.serving.size() != links || state.near_set.size() != links)
        throw std::invalid_argument(
            "AssociationState: vector sizes do not match users/gnbs");
}
} // namespace detail

/// Recompute gNB activity from the serving and near-set indicators:
///   alpha_b = 1 - prod_u (1 - beta_ub N_ub)
/// i.e. b is active exactly when some user u has beta_ub = N_ub = 1.
inline AssociationState derive_activity(AssociationState state) {
    detail::check_shape(state);
    for (int b = 0; b < state.gnbs; ++b) {
        char active = 0;
        for (int u = 0; u < state.users && !active; ++u)
            active = static_cast<char>(state.serving[state.link(u, b)] &&
                                       state.near_set[state.link(u, b)]);
        state.activity[static_cast<size_t>(b)] = active;
    }
    return state;
}

struct Violation {
    enum class Kind {
        inactive_serving, ///< alpha_b < beta_ub N_ub for some (u, b)
        unserved_user,    ///< sum_b beta_ub N_ub < 1 for some u
    };
    Kind kind;
    int user = -1;
    int gnb = -1;
};

/// Check the association constraints and return every violation found:
///  - a gNB with an effective serving link must be active,
///  - every user needs at least one effective serving link.
inline std::vector<Violation> validate_constraints(const AssociationState& state) {
    detail::check_shape(state);
    std::vector<Violation> violations;
    for (int u = 0; u < state.users; ++u) {
        int effective_links = 0;
        for (int b = 0; b < state.gnbs; ++b) {
            const bool link = state.serving[state.link(u, b)] &&
                              state.near_set[state.link(u, b)];
            if (link) {
                ++effective_links;
                if (!state.activity[static_cast<size_t>(b)])
                    violations.push_back(
                        {Violation::Kind::inactive_serving, u, b});
            }
        }
        if (effective_links < 1)
            violations.push_back({Violation::Kind::unserved_user, u, -1});
    }
    return violations;
}

/// Near set of one user: the k best gNBs under the chosen metric, best
/// first.  Ties break toward the lower gNB id.
struct NearSet {
    std::vector<int> gnb_ids;
    std::vector<double> metric; ///< the value each entry was ranked by
};

enum class NearSetMetric { distance, channel_gain };

namespace detail {
inline NearSet rank_best(std::span<const int> ids, std::span<const double> score,
                         int k, bool smaller_is_better) {
    std::vector<size_t> order(ids.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (score[a] != score[b])
            return smaller_is_better ? score[a] < score[b] : score[a] > score[b];
        return ids[a] < ids[b];
    });
    const size_t take = std::min(static_cast<size_t>(k), order.size());
    NearSet set;
    set.gnb_ids.reserve(take);
    set.metric.reserve(take);
    for (size_t i = 0; i < take; ++i) {
        set.gnb_ids.push_back(ids[order[i]]);
        set.metric.push_back(score[order[i]]);
    }
    return set;
}
} // namespace detail

/// Distance-based near set: the k closest gNBs.  k larger than the gNB
/// count clamps to the full set.
inline NearSet compute_near_set(const Ue& ue, std::span<const Gnb> gnbs, int k) {
    if (k < 1)
        throw std::invalid_argument("compute_near_set: k must be >= 1");
    std::vector<int> ids(gnbs.size());
    std::vector<double> score(gnbs.size());
    for (size_t i = 0; i < gnbs.size(); ++i) {
        ids[i] = gnbs[i].id;
        score[i] = distance(ue.position, gnbs[i].position);
    }
    return detail::rank_best(ids, score, k, /*smaller_is_better=*/true);
}

/// Gain-based near set: the k strongest gNBs, ranked by the caller-supplied
/// per-gNB channel gains (dB), one per entry of `gnbs`.
inline NearSet compute_near_set(const Ue& ue, std::span<const Gnb> gnbs,
                                std::span<const double> channel_gain_db, int k) {
    (void)ue;
    if (k < 1)
        throw std::invalid_argument("compute_near_set: k must be >= 1");
    if (channel_gain_db.size() != gnbs.size())
        throw std::invalid_argument("compute_near_set: one gain per gNB required");
    std::vector<int> ids(gnbs.size());
    for (size_t i = 0; i < gnbs.size(); ++i) ids[i] = gnbs[i].id;
    return detail::rank_best(ids, channel_gain_db, k, /*smaller_is_better=*/false);
}

/// Place `count` gNBs on a line of tangent cells: centres at
/// x = 0, 2r, 4r, ... with y = 0.  The middle gNB hosts the coordination
/// function (for even counts, the right one of the middle pair).
inline std::vector<Gnb> place_grid(int count, double cell_radius_m) {
    if (count < 1)
        throw std::invalid_argument("place_grid: count must be >= 1");
    if (!(cell_radius_m > 0.0))
        throw std::invalid_argument("place_grid: radius must be > 0");
    std::vector<Gnb> gnbs(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        auto& gnb = gnbs[static_cast<size_t>(i)];
        gnb.id = i;
        gnb.position = {2.0 * cell_radius_m * i, 0.0};
        gnb.cell_radius_m = cell_radius_m;
        gnb.is_soft_gnb = i == count / 2;
    }
    return gnbs;
}

} // namespace mmwsim
