#include "diskf/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diskf/errors.hpp"

namespace diskf {

Eigen::Vector2d AgentPose::at(int k) const {
    if (!trajectory) throw ConfigError("AgentPose: trajectory not set");
    if (k < 0) throw ConfigError("AgentPose: negative timestep");
    Eigen::Vector2d p = trajectory(k);
    if (!p.allFinite()) throw ConfigError("AgentPose: non-finite pose");
    return p;
}

AgentPose AgentPose::fixed(const Eigen::Vector2d& p) {
    if (!p.allFinite()) throw ConfigError("AgentPose::fixed: non-finite pose");
    return AgentPose{[p](int) { return p; }};
}

AgentPose AgentPose::waypoint_loop(std::vector<Eigen::Vector2d> waypoints,
                                   double speed) {
    if (waypoints.empty()) {
        throw ConfigError("waypoint_loop: needs at least one waypoint");
    }
    for (const auto& w : waypoints) {
        if (!w.allFinite()) throw ConfigError("waypoint_loop: non-finite waypoint");
    }
    if (!(speed >= 0.0) || !std::isfinite(speed)) {
        throw ConfigError("waypoint_loop: speed must be finite and >= 0");
    }
    if (waypoints.size() == 1 || speed == 0.0) {
        return fixed(waypoints.front());
    }

    // Closed polyline: the last leg returns to the first waypoint. Zero-length
    // legs (as in a two-point back-and-forth path) are skipped when locating
    // the position at a given arc length.
    const std::size_t n = waypoints.size();
    std::vector<double> leg_len(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        leg_len[i] = (waypoints[(i + 1) % n] - waypoints[i]).norm();
        total += leg_len[i];
    }
    if (total <= 0.0) return fixed(waypoints.front());

    return AgentPose{[waypoints, leg_len, total, speed](int k) {
        double s = std::fmod(speed * static_cast<double>(k), total);
        for (std::size_t i = 0; i < waypoints.size(); ++i) {
            if (s <= leg_len[i] && leg_len[i] > 0.0) {
                const double t = s / leg_len[i];
                return Eigen::Vector2d(
                    waypoints[i] +
                    t * (waypoints[(i + 1) % waypoints.size()] - waypoints[i]));
            }
            s -= leg_len[i];
        }
        return waypoints.front();  // s landed exactly on total
    }};
}

namespace {

bool linked(const TopologySpec& topo, const Eigen::Vector2d& a,
            const Eigen::Vector2d& b) {
    const double dist = (a - b).norm();
    switch (topo.rule) {
        case RangeRule::ranges_intersect:
            return dist <= 2.0 * topo.radius;
        case RangeRule::within_radius:
            return dist <= topo.radius;
    }
    return false;
}

}  // namespace

std::map<int, NeighborSet> neighborhoods(
    const TopologySpec& topo, const std::map<int, AgentPose>& poses, int k) {
    if (poses.empty()) throw ConfigError("neighborhoods: no agents");
    if (topo.kind == TopologyKind::range_based &&
        (!std::isfinite(topo.radius) || topo.radius < 0.0)) {
        throw ConfigError("neighborhoods: radius must be finite and >= 0");
    }

    std::map<int, NeighborSet> out;
    for (const auto& [id, pose] : poses) {
        (void)pose;
        out[id] = NeighborSet{id, k, {id}};
    }

    switch (topo.kind) {
        case TopologyKind::all_to_all:
            for (auto& [id, nb] : out) {
                for (const auto& [other, pose] : poses) {
                    (void)pose;
                    nb.members.insert(other);
                }
            }
            break;
        case TopologyKind::static_adjacency:
            for (const auto& [a, b] : topo.edges) {
                if (!out.count(a) || !out.count(b)) {
                    throw ConfigError("neighborhoods: edge (" +
                                      std::to_string(a) + "," +
                                      std::to_string(b) +
                                      ") references unknown agent");
                }
                out[a].members.insert(b);
                out[b].members.insert(a);
            }
            break;
        case TopologyKind::range_based: {
            std::map<int, Eigen::Vector2d> at_k;
            for (const auto& [id, pose] : poses) at_k[id] = pose.at(k);
            for (auto it = at_k.begin(); it != at_k.end(); ++it) {
                for (auto jt = std::next(it); jt != at_k.end(); ++jt) {
                    if (linked(topo, it->second, jt->second)) {
                        out[it->first].members.insert(jt->first);
                        out[jt->first].members.insert(it->first);
                    }
                }
            }
            break;
        }
    }
    return out;
}

std::map<int, std::vector<ExchangePacket>> exchange_packets(
    const std::map<int, ExchangePacket>& outgoing,
    const std::map<int, NeighborSet>& neighborhoods) {
    std::map<int, std::vector<ExchangePacket>> received;
    for (const auto& [id, nb] : neighborhoods) {
        auto& inbox = received[id];
        // std::set iterates in ascending order, so the inbox arrives sorted.
        for (int member : nb.members) {
            const auto it = outgoing.find(member);
            if (it == outgoing.end()) {
                throw ConfigError("exchange: no packet from agent " +
                                  std::to_string(member));
            }
            inbox.push_back(it->second);
        }
    }
    return received;
}

void SingleRoundGuard::begin(int timestep) {
    if (started_ && timestep <= last_step_) {
        throw ConfigError(
            "SingleRoundGuard: second exchange attempted for step " +
            std::to_string(timestep));
    }
    started_ = true;
    last_step_ = timestep;
}

}  // namespace diskf
