#pragma once

#include <cstdint>
#include <vector>

#include "reebsim/reeb.hpp"

namespace reebsim {

// Realization of the SRG -> MARG node map: srg node id -> marg node id.
struct NodeMapping {
    std::vector<std::uint32_t> to_marg;
};

// Maps every SRG node to the same-index MARG node with the nearest centroid,
// ties broken by canonical node order. A mapping distance above epsilon means
// the agent's trajectories were not part of the MARG build: provenance error.
NodeMapping map_srg_nodes(const ReebGraph& srg, const ReebGraph& marg,
                          const Config& config);

// Fuses an agent's SRG into the population MARG:
//   1. start from the mapped SRG node images plus MARG edges among them,
//   2. close backward over inbound MARG edges (every ancestor node and edge),
//   3. prune sources that are not SRG images, cascading to children left
//      without inbound edges,
//   4. multiply weights of edges with both endpoints in the SRG image by beta,
//   5. renormalize outbound weights at every non-sink node.
// The result's sources are all SRG images, and every node keeps a forward
// path into the SRG image set.
ReebGraph build_hrg(const ReebGraph& srg, const ReebGraph& marg, double beta,
                    const Config& config);

} // namespace reebsim
