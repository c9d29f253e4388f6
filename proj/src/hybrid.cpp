#include "reebsim/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

namespace reebsim {

namespace {

void check_fusable(const ReebGraph& srg, const ReebGraph& marg) {
    if (srg.role == GraphRole::Hrg || marg.role == GraphRole::Hrg)
        raise(ErrorCode::Provenance, "hybrid fusion takes an SRG and a MARG");
    if (srg.length != marg.length)
        raise(ErrorCode::Provenance, "SRG and MARG were built over different lengths");
    if (srg.provenance.epsilon != marg.provenance.epsilon ||
        srg.provenance.metric != marg.provenance.metric)
        raise(ErrorCode::Provenance, "SRG and MARG were built with different configs");
    // the agent must be represented in the MARG
    std::unordered_set<std::string> marg_ids(marg.traj_ids.begin(), marg.traj_ids.end());
    for (const std::string& id : srg.traj_ids) {
        if (marg_ids.find(id) == marg_ids.end())
            raise(ErrorCode::Provenance,
                  "agent trajectory " + id + " is not part of the MARG");
    }
}

} // namespace

NodeMapping map_srg_nodes(const ReebGraph& srg, const ReebGraph& marg,
                          const Config& config) {
    config.validate();
    check_fusable(srg, marg);

    // marg nodes grouped by index; nodes are already index-sorted
    std::vector<std::vector<std::uint32_t>> marg_at_index(marg.length);
    for (const ReebNode& node : marg.nodes) marg_at_index[node.index].push_back(node.id);

    NodeMapping mapping;
    mapping.to_marg.resize(srg.nodes.size());
    for (const ReebNode& vs : srg.nodes) {
        const auto& candidates = marg_at_index[vs.index];
        if (candidates.empty())
            raise(ErrorCode::Provenance, "MARG has no nodes at a required index");
        std::uint32_t best = candidates.front();
        double best_dist = distance(vs.centroid, marg.nodes[best].centroid, config.metric);
        for (std::size_t c = 1; c < candidates.size(); ++c) {
            const double d =
                distance(vs.centroid, marg.nodes[candidates[c]].centroid, config.metric);
            if (d < best_dist) { // ties keep the canonically first candidate
                best_dist = d;
                best = candidates[c];
            }
        }
        if (best_dist > config.epsilon) {
            std::ostringstream msg;
            msg << "nearest MARG node is " << best_dist
                << " away (> epsilon); the agent is not represented in this MARG";
            raise(ErrorCode::Provenance, msg.str());
        }
        mapping.to_marg[vs.id] = best;
    }
    return mapping;
}

ReebGraph build_hrg(const ReebGraph& srg, const ReebGraph& marg, double beta,
                    const Config& config) {
    if (!(beta >= 1.0)) raise(ErrorCode::Config, "beta must be >= 1");
    const NodeMapping mapping = map_srg_nodes(srg, marg, config);

    std::vector<char> is_srg_image(marg.nodes.size(), 0);
    for (std::uint32_t m : mapping.to_marg) is_srg_image[m] = 1;

    // backward closure over inbound MARG edges from every SRG image; every
    // inbound edge of a visited node is kept, so the kept edge set is exactly
    // the MARG edges whose head is visited
    std::vector<char> visited(marg.nodes.size(), 0);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t m = 0; m < marg.nodes.size(); ++m)
        if (is_srg_image[m]) stack.push_back(m);
    std::vector<std::uint32_t> kept_edges;
    std::vector<std::uint32_t> source_nodes;
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        stack.pop_back();
        if (visited[u]) continue;
        visited[u] = 1;
        if (marg.in_edges[u].empty()) source_nodes.push_back(u);
        for (std::uint32_t eid : marg.in_edges[u]) {
            kept_edges.push_back(eid);
            const std::uint32_t w = marg.edges[eid].from;
            if (!visited[w]) stack.push_back(w);
        }
    }

    // prune sources that are not SRG images; cascade removals to children
    // left with no inbound edges
    std::vector<std::uint32_t> in_degree(marg.nodes.size(), 0);
    for (std::uint32_t eid : kept_edges) ++in_degree[marg.edges[eid].to];
    std::vector<char> removed(marg.nodes.size(), 0);
    std::deque<std::uint32_t> worklist;
    for (std::uint32_t v : source_nodes)
        if (!is_srg_image[v]) worklist.push_back(v);
    while (!worklist.empty()) {
        const std::uint32_t v = worklist.front();
        worklist.pop_front();
        if (removed[v]) continue;
        removed[v] = 1;
        for (std::uint32_t eid : marg.out_edges[v]) {
            const std::uint32_t child = marg.edges[eid].to;
            if (!visited[child] || removed[child]) continue;
            if (--in_degree[child] == 0 && !is_srg_image[child]) worklist.push_back(child);
        }
    }

    std::vector<std::uint32_t> surviving;
    for (std::uint32_t v = 0; v < marg.nodes.size(); ++v)
        if (visited[v] && !removed[v]) surviving.push_back(v);
    if (surviving.empty())
        raise(ErrorCode::Degenerate, "hybrid graph is empty after pruning");

    ReebGraph h;
    h.role = GraphRole::Hrg;
    h.length = marg.length;
    h.traj_ids = marg.traj_ids;
    h.provenance = marg.provenance;
    h.provenance.agent_id = srg.provenance.agent_id;
    h.provenance.beta = beta;

    std::vector<std::uint32_t> new_id(marg.nodes.size(), UINT32_MAX);
    for (std::uint32_t v : surviving) {
        new_id[v] = static_cast<std::uint32_t>(h.nodes.size());
        ReebNode node = marg.nodes[v];
        node.id = new_id[v];
        h.nodes.push_back(std::move(node));
        if (is_srg_image[v]) h.srg_marked.push_back(new_id[v]);
    }

    std::sort(kept_edges.begin(), kept_edges.end());
    for (std::uint32_t eid : kept_edges) {
        const ReebEdge& src = marg.edges[eid];
        if (removed[src.from] || removed[src.to]) continue;
        ReebEdge e = src;
        e.from = new_id[src.from];
        e.to = new_id[src.to];
        if (is_srg_image[src.from] && is_srg_image[src.to]) e.weight *= beta;
        h.edges.push_back(std::move(e));
    }

    // renormalize outbound weights; a node whose outbound edges were all
    // pruned is a sink and is skipped
    std::vector<double> out_sum(h.nodes.size(), 0.0);
    for (const ReebEdge& e : h.edges) out_sum[e.from] += e.weight;
    for (ReebEdge& e : h.edges) {
        if (out_sum[e.from] > 0.0) e.weight /= out_sum[e.from];
    }

    h.finalize();
    return h;
}

} // namespace reebsim
