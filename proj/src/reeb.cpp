#include "reebsim/reeb.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace reebsim {

const char* role_name(GraphRole role) {
    switch (role) {
    case GraphRole::Srg: return "srg";
    case GraphRole::Marg: return "marg";
    case GraphRole::Hrg: return "hrg";
    }
    return "unknown";
}

GraphRole role_from_name(const std::string& name) {
    if (name == "srg") return GraphRole::Srg;
    if (name == "marg") return GraphRole::Marg;
    if (name == "hrg") return GraphRole::Hrg;
    raise(ErrorCode::Parse, "unknown graph role: " + name);
}

void ReebGraph::finalize() {
    // canonical node order: (index, centroid lat, centroid lon, members)
    std::vector<std::uint32_t> order(nodes.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [this](std::uint32_t a, std::uint32_t b) {
        const ReebNode& x = nodes[a];
        const ReebNode& y = nodes[b];
        if (x.index != y.index) return x.index < y.index;
        if (x.centroid.lat != y.centroid.lat) return x.centroid.lat < y.centroid.lat;
        if (x.centroid.lon != y.centroid.lon) return x.centroid.lon < y.centroid.lon;
        return x.members < y.members;
    });
    std::vector<std::uint32_t> new_id(nodes.size());
    std::vector<ReebNode> sorted;
    sorted.reserve(nodes.size());
    for (std::uint32_t pos = 0; pos < order.size(); ++pos) {
        new_id[order[pos]] = pos;
        sorted.push_back(std::move(nodes[order[pos]]));
        sorted.back().id = pos;
    }
    nodes = std::move(sorted);

    for (ReebEdge& e : edges) {
        e.from = new_id[e.from];
        e.to = new_id[e.to];
    }
    std::sort(edges.begin(), edges.end(), [](const ReebEdge& a, const ReebEdge& b) {
        if (a.from != b.from) return a.from < b.from;
        return a.to < b.to;
    });
    for (std::uint32_t& m : srg_marked) m = new_id[m];
    std::sort(srg_marked.begin(), srg_marked.end());

    out_edges.assign(nodes.size(), {});
    in_edges.assign(nodes.size(), {});
    for (std::uint32_t eid = 0; eid < edges.size(); ++eid) {
        out_edges[edges[eid].from].push_back(eid);
        in_edges[edges[eid].to].push_back(eid);
    }
}

NodeKind ReebGraph::kind(std::uint32_t node) const {
    if (in_edges.at(node).empty()) return NodeKind::Source;
    if (out_edges.at(node).empty()) return NodeKind::Sink;
    return NodeKind::Intermediate;
}

bool ReebGraph::is_srg_marked(std::uint32_t node) const {
    return std::binary_search(srg_marked.begin(), srg_marked.end(), node);
}

ReebGraph build_srg(const TrajectoryView& trajs, const BundleSet& bundles,
                    const Config& config) {
    config.validate();
    if (bundles.provenance_fingerprint() != trajs.fingerprint() ||
        bundles.epsilon() != config.epsilon || bundles.metric() != config.metric) {
        raise(ErrorCode::Provenance,
              "bundle set was not computed from these trajectories with this config");
    }

    const int L = bundles.length();
    ReebGraph g;
    g.role = GraphRole::Srg;
    g.length = L;
    g.traj_ids = trajs.ids();
    g.provenance.dataset_fingerprint = bundles.provenance_fingerprint();
    g.provenance.epsilon = config.epsilon;
    g.provenance.metric = config.metric;

    // single-agent input gets its id recorded
    std::string agent_id = trajs.trajs.front()->agent_id;
    for (const auto* traj : trajs.trajs) {
        if (traj->agent_id != agent_id) {
            agent_id.clear();
            break;
        }
    }
    g.provenance.agent_id = agent_id;

    std::vector<std::uint32_t> node_of_bundle(bundles.bundles().size(), UINT32_MAX);
    auto ensure_node = [&](const Bundle& b) {
        if (node_of_bundle[b.id] == UINT32_MAX) {
            node_of_bundle[b.id] = static_cast<std::uint32_t>(g.nodes.size());
            ReebNode node;
            node.id = node_of_bundle[b.id];
            node.index = b.index;
            node.centroid = b.centroid;
            node.members = b.members;
            g.nodes.push_back(std::move(node));
        }
        return node_of_bundle[b.id];
    };

    // each trajectory's most recent node; every bundle at index 0 is a node
    std::vector<std::uint32_t> last_node(bundles.trajectory_count(), UINT32_MAX);
    for (std::uint32_t bid : bundles.at_index(0)) {
        const Bundle& b = bundles.bundles()[bid];
        const std::uint32_t v = ensure_node(b);
        for (std::uint32_t t : b.members) last_node[t] = v;
    }

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> support;
    for (int i = 1; i < L; ++i) {
        for (std::uint32_t bid : bundles.at_index(i)) {
            const Bundle& b = bundles.bundles()[bid];
            bool is_node = (i == L - 1);
            if (!is_node) {
                // the member set changed iff no bundle at i-1 had the same
                // members; it suffices to look at any one member's previous
                // bundle
                const Bundle& prev = bundles.bundle_of(b.members.front(), i - 1);
                is_node = prev.members != b.members;
            }
            if (!is_node) continue;
            const std::uint32_t v = ensure_node(b);
            for (std::uint32_t t : b.members) {
                support[{last_node[t], v}].push_back(t);
                last_node[t] = v;
            }
        }
    }

    for (auto& [key, traj_list] : support) {
        ReebEdge e;
        e.from = key.first;
        e.to = key.second;
        e.support = std::move(traj_list);
        e.weight = static_cast<double>(e.support.size()) /
                   static_cast<double>(g.nodes[e.from].members.size());
        g.edges.push_back(std::move(e));
    }

    g.finalize();
    return g;
}

ReebGraph build_marg(const PopulationDataset& population, const Config& config) {
    const ValidationReport report = validate_dataset(population);
    if (!report.ok()) {
        raise(ErrorCode::Validation,
              "population failed validation:\n" + report.to_string());
    }
    const TrajectoryView view = TrajectoryView::of_population(population);
    const BundleSet bundles = compute_bundles(view, config);
    ReebGraph g = build_srg(view, bundles, config);
    g.role = GraphRole::Marg;
    g.provenance.agent_id.clear();
    return g;
}

ReebGraph build_srg_for_agent(const PopulationDataset& population,
                              const std::string& agent_id, const Config& config) {
    const AgentDataset* agent = population.find_agent(agent_id);
    if (agent == nullptr) raise(ErrorCode::Lookup, "unknown agent: " + agent_id);
    const TrajectoryView view = TrajectoryView::of_agent(*agent);
    const BundleSet bundles = compute_bundles(view, config);
    return build_srg(view, bundles, config);
}

std::vector<std::uint32_t> sources(const ReebGraph& g) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < g.nodes.size(); ++v)
        if (g.in_edges[v].empty()) out.push_back(v);
    return out;
}

std::vector<std::uint32_t> sinks(const ReebGraph& g) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < g.nodes.size(); ++v)
        if (g.out_edges[v].empty()) out.push_back(v);
    return out;
}

std::vector<std::uint32_t> trajectory_node_path(const ReebGraph& g, std::uint32_t traj) {
    std::vector<std::uint32_t> path;
    for (const ReebNode& node : g.nodes) {
        if (std::binary_search(node.members.begin(), node.members.end(), traj))
            path.push_back(node.id);
    }
    std::sort(path.begin(), path.end(), [&g](std::uint32_t a, std::uint32_t b) {
        return g.nodes[a].index < g.nodes[b].index;
    });
    return path;
}

bool graph_equal(const ReebGraph& a, const ReebGraph& b) {
    if (a.role != b.role || a.length != b.length) return false;
    if (a.traj_ids != b.traj_ids || a.srg_marked != b.srg_marked) return false;
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        const ReebNode& x = a.nodes[i];
        const ReebNode& y = b.nodes[i];
        if (x.index != y.index || !(x.centroid == y.centroid) || x.members != y.members)
            return false;
    }
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        const ReebEdge& x = a.edges[i];
        const ReebEdge& y = b.edges[i];
        if (x.from != y.from || x.to != y.to || x.weight != y.weight ||
            x.support != y.support)
            return false;
    }
    return true;
}

std::string graph_signature(const ReebGraph& g,
                            const std::vector<std::uint32_t>& node_subset) {
    std::vector<std::uint32_t> ids = node_subset;
    if (ids.empty()) {
        ids.resize(g.nodes.size());
        std::iota(ids.begin(), ids.end(), 0u);
    }
    std::sort(ids.begin(), ids.end(), [&g](std::uint32_t a, std::uint32_t b) {
        const ReebNode& x = g.nodes[a];
        const ReebNode& y = g.nodes[b];
        if (x.index != y.index) return x.index < y.index;
        if (x.centroid.lat != y.centroid.lat) return x.centroid.lat < y.centroid.lat;
        if (x.centroid.lon != y.centroid.lon) return x.centroid.lon < y.centroid.lon;
        return x.members.size() < y.members.size();
    });
    std::vector<std::uint32_t> local(g.nodes.size(), UINT32_MAX);
    for (std::uint32_t pos = 0; pos < ids.size(); ++pos) local[ids[pos]] = pos;

    char buf[128];
    std::ostringstream out;
    for (std::uint32_t id : ids) {
        const ReebNode& n = g.nodes[id];
        std::snprintf(buf, sizeof(buf), "n(%d,%.17g,%.17g,%zu)\n", n.index,
                      n.centroid.lat, n.centroid.lon, n.members.size());
        out << buf;
    }
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double, std::size_t>> sig_edges;
    for (const ReebEdge& e : g.edges) {
        if (local[e.from] == UINT32_MAX || local[e.to] == UINT32_MAX) continue;
        sig_edges.emplace_back(local[e.from], local[e.to], e.weight, e.support.size());
    }
    std::sort(sig_edges.begin(), sig_edges.end());
    for (const auto& [from, to, weight, support_size] : sig_edges) {
        std::snprintf(buf, sizeof(buf), "e(%u,%u,%.17g,%zu)\n", from, to, weight,
                      support_size);
        out << buf;
    }
    return out.str();
}

std::vector<std::vector<std::uint32_t>> weak_components(const ReebGraph& g) {
    std::vector<std::uint32_t> parent(g.nodes.size());
    std::iota(parent.begin(), parent.end(), 0u);
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const ReebEdge& e : g.edges) {
        const std::uint32_t a = find(e.from);
        const std::uint32_t b = find(e.to);
        if (a != b) parent[a] = b;
    }
    std::map<std::uint32_t, std::vector<std::uint32_t>> groups;
    for (std::uint32_t v = 0; v < g.nodes.size(); ++v) groups[find(v)].push_back(v);
    std::vector<std::vector<std::uint32_t>> components;
    for (auto& [root, members] : groups) {
        std::sort(members.begin(), members.end());
        components.push_back(std::move(members));
    }
    std::sort(components.begin(), components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return components;
}

} // namespace reebsim
