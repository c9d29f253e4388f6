#include "reebsim/generation.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace reebsim {

GenerationSession::GenerationSession(const ReebGraph& graph, const TrajectoryView& donors,
                                     std::uint64_t seed,
                                     std::optional<LatLon> initial_endpoint,
                                     GenerateOptions options)
    : graph_(&graph),
      donors_(&donors),
      rng_(seed),
      previous_endpoint_(initial_endpoint),
      options_(options) {
    // resolve the graph's trajectory ids against the donor dataset (which may
    // be a superset, e.g. a full population backing a single-agent SRG)
    std::unordered_map<std::string, std::uint32_t> by_id;
    for (std::uint32_t t = 0; t < donors.size(); ++t) by_id[donors.at(t).id()] = t;
    donor_handle_.reserve(graph.traj_ids.size());
    for (const std::string& id : graph.traj_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            raise(ErrorCode::Provenance,
                  "donor dataset is missing trajectory " + id + " referenced by the graph");
        if (donors.at(it->second).length() != graph.length)
            raise(ErrorCode::Provenance,
                  "donor trajectory " + id + " has a different length than the graph");
        donor_handle_.push_back(it->second);
    }
    sources_ = sources(graph);
}

std::uint32_t GenerationSession::select_source() const {
    if (sources_.empty())
        raise(ErrorCode::Degenerate, "graph has no source nodes");
    if (!previous_endpoint_.has_value()) return sources_.front();
    std::uint32_t best = sources_.front();
    double best_dist = distance(*previous_endpoint_, graph_->nodes[best].centroid,
                                graph_->provenance.metric);
    for (std::size_t s = 1; s < sources_.size(); ++s) {
        const double d = distance(*previous_endpoint_, graph_->nodes[sources_[s]].centroid,
                                  graph_->provenance.metric);
        if (d < best_dist) { // ties keep the canonically first source
            best_dist = d;
            best = sources_[s];
        }
    }
    return best;
}

GeneratedTrajectory GenerationSession::traverse_once() {
    const ReebGraph& g = *graph_;
    const int L = g.length;
    GeneratedTrajectory out;
    out.points.reserve(L);

    std::uint32_t node = select_source();
    if (g.nodes[node].index != 0) {
        std::ostringstream msg;
        msg << "traversal starts at index " << g.nodes[node].index
            << "; generated day would be shorter than " << L;
        raise(ErrorCode::ShortPath, msg.str());
    }

    std::uint32_t last_donor = UINT32_MAX;
    while (!g.out_edges[node].empty()) {
        // sample an outbound edge proportionally to its weight
        const auto& out_ids = g.out_edges[node];
        double total = 0.0;
        for (std::uint32_t eid : out_ids) total += g.edges[eid].weight;
        const double draw = rng_.uniform() * total;
        double cum = 0.0;
        std::uint32_t chosen = out_ids.back();
        for (std::uint32_t eid : out_ids) {
            cum += g.edges[eid].weight;
            if (draw < cum) {
                chosen = eid;
                break;
            }
        }
        const ReebEdge& edge = g.edges[chosen];
        if (edge.support.empty())
            raise(ErrorCode::DataIntegrity, "edge with empty support reached");

        const std::uint32_t donor =
            edge.support[rng_.uniform_below(edge.support.size())];
        const Trajectory& donor_traj = donors_->at(donor_handle_[donor]);
        const int begin = g.nodes[edge.from].index;
        const int end = g.nodes[edge.to].index;
        for (int i = begin; i < end; ++i) out.points.push_back(donor_traj.points[i]);
        out.lineage.push_back({edge.from, edge.to, donor, begin, end});
        last_donor = donor;
        node = edge.to;
    }

    // the sink contributes its final point, copied from the last donor
    const int sink_index = g.nodes[node].index;
    if (last_donor != UINT32_MAX) {
        out.points.push_back(donors_->at(donor_handle_[last_donor]).points[sink_index]);
        out.lineage.back().end_index = sink_index + 1;
    } else {
        // source == sink: a single-node graph; only valid when it spans the
        // whole (length-1) trajectory
        const ReebNode& n = g.nodes[node];
        const std::uint32_t donor = n.members[rng_.uniform_below(n.members.size())];
        out.points.push_back(donors_->at(donor_handle_[donor]).points[sink_index]);
        out.lineage.push_back({node, node, donor, sink_index, sink_index + 1});
    }

    if (sink_index != L - 1 || static_cast<int>(out.points.size()) != L) {
        std::ostringstream msg;
        msg << "traversal reached a sink at index " << sink_index << " with "
            << out.points.size() << " points; expected length " << L;
        raise(ErrorCode::ShortPath, msg.str());
    }
    return out;
}

GeneratedTrajectory GenerationSession::generate_trajectory() {
    int attempts = options_.permissive ? options_.max_retries + 1 : 1;
    while (true) {
        try {
            GeneratedTrajectory out = traverse_once();
            previous_endpoint_ = out.points.back().pos();
            return out;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ShortPath || --attempts <= 0) throw;
        }
    }
}

std::vector<GeneratedTrajectory> GenerationSession::generate_days(int days) {
    if (days < 1) raise(ErrorCode::Config, "days must be >= 1");
    std::vector<GeneratedTrajectory> out;
    out.reserve(days);
    for (int d = 0; d < days; ++d) {
        try {
            out.push_back(generate_trajectory());
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "day " << d << ": " << e.what();
            throw Error(e.code(), msg.str());
        }
    }
    return out;
}

Trajectory to_trajectory(const GeneratedTrajectory& generated,
                         const std::string& agent_id, int day) {
    Trajectory traj;
    traj.agent_id = agent_id;
    traj.day = day;
    traj.points = generated.points;
    for (std::size_t i = 0; i < traj.points.size(); ++i)
        traj.points[i].index = static_cast<int>(i);
    return traj;
}

} // namespace reebsim
