#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reebsim/bundling.hpp"
#include "reebsim/dataset.hpp"

namespace reebsim {

enum class GraphRole { Srg, Marg, Hrg };

const char* role_name(GraphRole role);
GraphRole role_from_name(const std::string& name);

enum class NodeKind { Source, Intermediate, Sink };

// A critical point: a bundle where the connected-trajectory set changed
// relative to the previous index, or a forced node at index 0 / L-1.
struct ReebNode {
    std::uint32_t id = 0;
    int index = 0;
    LatLon centroid;
    std::vector<std::uint32_t> members; // cc(v), sorted trajectory handles
};

struct ReebEdge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    double weight = 0.0;
    // Trajectories that actually transition from -> to. For SRG/MARG,
    // weight == |support| / |cc(from)| exactly.
    std::vector<std::uint32_t> support;
};

struct GraphProvenance {
    std::string dataset_fingerprint;
    std::string agent_id;      // for SRG/HRG; empty for MARG
    double epsilon = 0.0;
    DistanceMetric metric = DistanceMetric::EuclideanDegrees;
    double beta = 1.0;         // applied boost, HRG only
};

struct ReebGraph {
    GraphRole role = GraphRole::Srg;
    int length = 0;
    std::vector<ReebNode> nodes;   // canonical order: (index, lat, lon, members)
    std::vector<ReebEdge> edges;   // canonical order: (from, to)
    std::vector<std::string> traj_ids;      // handle -> trajectory id
    std::vector<std::uint32_t> srg_marked;  // HRG only: images of SRG nodes, sorted
    GraphProvenance provenance;

    // adjacency, rebuilt by finalize(): edge ids per node
    std::vector<std::vector<std::uint32_t>> out_edges;
    std::vector<std::vector<std::uint32_t>> in_edges;

    void finalize(); // sorts canonically, relabels, rebuilds adjacency
    NodeKind kind(std::uint32_t node) const;
    bool is_srg_marked(std::uint32_t node) const;
};

// Algorithm: nodes are all bundles at index 0 and L-1 plus every bundle whose
// member set differs from its members' bundle at the previous index; edges
// connect each trajectory's previous node to its new node, weighted by the
// fraction of cc(from) that takes the transition.
ReebGraph build_srg(const TrajectoryView& trajs, const BundleSet& bundles,
                    const Config& config);

// SRG over the concatenation of all K agents' trajectories.
ReebGraph build_marg(const PopulationDataset& population, const Config& config);

// Convenience: bundle + build one agent's SRG out of a population.
ReebGraph build_srg_for_agent(const PopulationDataset& population,
                              const std::string& agent_id, const Config& config);

std::vector<std::uint32_t> sources(const ReebGraph& g); // in-degree 0, sorted
std::vector<std::uint32_t> sinks(const ReebGraph& g);   // out-degree 0, sorted

// The node sequence trajectory `traj` passes through (every node whose member
// set contains it), sorted by index.
std::vector<std::uint32_t> trajectory_node_path(const ReebGraph& g, std::uint32_t traj);

// Structural equality: nodes, edges, weights, supports, role and srg marks.
bool graph_equal(const ReebGraph& a, const ReebGraph& b);

// Shape signature ignoring trajectory handle values; equal signatures mean
// isomorphic node/edge structure with equal centroids, weights and member
// counts. `node_subset` empty means the whole graph.
std::string graph_signature(const ReebGraph& g,
                            const std::vector<std::uint32_t>& node_subset = {});

// Weakly connected components, each sorted; components ordered by smallest node.
std::vector<std::vector<std::uint32_t>> weak_components(const ReebGraph& g);

} // namespace reebsim
