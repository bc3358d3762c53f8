#pragma once

#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "diskf/packet.hpp"

namespace diskf {

enum class TopologyKind { all_to_all, static_adjacency, range_based };

// How a range-based link is decided from two poses:
//   ranges_intersect: |p_i - p_j| <= r_i + r_j (both radios reach the midpoint)
//   within_radius:    |p_i - p_j| <= r (single shared radius)
enum class RangeRule { ranges_intersect, within_radius };

struct TopologySpec {
    TopologyKind kind = TopologyKind::all_to_all;
    std::vector<std::pair<int, int>> edges;  // static_adjacency, undirected
    double radius = 120.0;                   // range_based
    RangeRule rule = RangeRule::ranges_intersect;
};

// Position over time. Static agents use a constant pose; mobile agents move
// at constant speed along a closed waypoint loop.
struct AgentPose {
    std::function<Eigen::Vector2d(int)> trajectory;

    Eigen::Vector2d at(int k) const;

    static AgentPose fixed(const Eigen::Vector2d& p);
    static AgentPose waypoint_loop(std::vector<Eigen::Vector2d> waypoints,
                                   double speed);
};

// Closed neighborhood of one node at one timestep (always contains the node).
struct NeighborSet {
    int node = 0;
    int timestep = 0;
    std::set<int> members;
};

// Neighborhoods for every agent at step k under the given topology. Static
// edges are validated against the agent set and symmetrized.
std::map<int, NeighborSet> neighborhoods(
    const TopologySpec& topo, const std::map<int, AgentPose>& poses, int k);

// Delivers each agent's packet to everyone whose neighborhood contains the
// sender. Received packets are sorted by sender id. (Named to stay clear of
// std::exchange, which ADL would otherwise drag into the overload set.)
std::map<int, std::vector<ExchangePacket>> exchange_packets(
    const std::map<int, ExchangePacket>& outgoing,
    const std::map<int, NeighborSet>& neighborhoods);

// Enforces the one-exchange-per-step budget: begin(k) throws if called twice
// for the same step or for a step that already passed.
class SingleRoundGuard {
public:
    void begin(int timestep);

private:
    bool started_ = false;
    int last_step_ = 0;
};

}  // namespace diskf
