#include <doctest.h>

#include <cmath>
#include <set>

#include "reebsim/hybrid.hpp"
#include "reebsim/synth.hpp"
#include "support.hpp"

using namespace reebsim;
using namespace reebsim::test;

namespace {

Config test_config(double epsilon = 0.001) {
    Config config;
    config.epsilon = epsilon;
    return config;
}

PopulationDataset commute_population(int agents, int days, int length, std::uint64_t seed,
                                     const Config& config, double scatter = 0.0015) {
    CommuteWorldOptions options;
    options.agents = agents;
    options.days = days;
    options.length = length;
    options.site_scatter = scatter;
    options.noise_sigma = config.epsilon / 10.0;
    return synth_generate(make_commute_world(options, seed), config, seed);
}

void check_hrg_invariants(const ReebGraph& h) {
    REQUIRE(h.role == GraphRole::Hrg);
    REQUIRE_FALSE(h.srg_marked.empty());

    // source anchoring
    for (std::uint32_t s : sources(h)) CHECK(h.is_srg_marked(s));

    // every node reaches some srg-marked node forward: walk backward from the
    // marked set over reversed edges
    std::vector<char> reached(h.nodes.size(), 0);
    std::vector<std::uint32_t> stack(h.srg_marked.begin(), h.srg_marked.end());
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        if (reached[v]) continue;
        reached[v] = 1;
        for (std::uint32_t eid : h.in_edges[v]) stack.push_back(h.edges[eid].from);
    }
    for (std::uint32_t v = 0; v < h.nodes.size(); ++v) CHECK(reached[v]);

    // normalization at non-sink nodes
    for (std::uint32_t v = 0; v < h.nodes.size(); ++v) {
        if (h.out_edges[v].empty()) continue;
        double sum = 0.0;
        for (std::uint32_t eid : h.out_edges[v]) sum += h.edges[eid].weight;
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }

    // DAG and support sanity survive the fusion
    for (const ReebEdge& e : h.edges) {
        CHECK(h.nodes[e.to].index > h.nodes[e.from].index);
        CHECK_FALSE(e.support.empty());
    }
}

} // namespace

TEST_CASE("single-agent population: mapping is the structural identity") {
    const Config config = test_config();
    const auto data = commute_population(1, 5, 64, 7, config, 0.0);
    const auto marg = build_marg(data, config);
    const auto srg = build_srg_for_agent(data, data.agents[0].agent_id, config);

    const NodeMapping mapping = map_srg_nodes(srg, marg, config);
    REQUIRE(mapping.to_marg.size() == srg.nodes.size());
    for (const ReebNode& vs : srg.nodes) {
        const ReebNode& vm = marg.nodes[mapping.to_marg[vs.id]];
        CHECK(vm.index == vs.index);
        CHECK(vm.centroid == vs.centroid);
        CHECK(vm.members.size() == vs.members.size());
    }
}

TEST_CASE("equidistant candidates resolve to the canonically first") {
    // hand-built graphs: one SRG node at lon 0, two MARG candidates at the
    // same index, 0.3 away on either side
    auto make_node = [](std::uint32_t id, int index, double lat, double lon,
                        std::vector<std::uint32_t> members) {
        ReebNode n;
        n.id = id;
        n.index = index;
        n.centroid = {lat, lon};
        n.members = std::move(members);
        return n;
    };
    const Config config = test_config(0.5);

    ReebGraph srg;
    srg.role = GraphRole::Srg;
    srg.length = 1;
    srg.traj_ids = {"x#0"};
    srg.provenance.epsilon = config.epsilon;
    srg.provenance.metric = config.metric;
    srg.nodes.push_back(make_node(0, 0, 0.0, 0.0, {0}));
    srg.finalize();

    ReebGraph marg = srg;
    marg.role = GraphRole::Marg;
    marg.traj_ids = {"x#0", "y#0"};
    marg.nodes.clear();
    marg.nodes.push_back(make_node(0, 0, 0.0, -0.3, {0}));
    marg.nodes.push_back(make_node(1, 0, 0.0, 0.3, {1}));
    marg.finalize();

    const NodeMapping mapping = map_srg_nodes(srg, marg, config);
    CHECK(mapping.to_marg == std::vector<std::uint32_t>{0});
}

TEST_CASE("shared-home mapping lands on the two-agent bundle node") {
    // two agents share a home anchor; the agent SRG's home node must map to
    // the marg node whose bundle holds both agents
    const Config config = test_config(0.5);
    std::vector<Trajectory> mine = {traj_of_lats("a", 0, {0, 0, 3, 3})};
    std::vector<Trajectory> both = {
        traj_of_lats("a", 0, {0, 0, 3, 3}),
        traj_of_lats("b", 0, {0.1, 0.1, -3, -3}),
    };
    const auto view = TrajectoryView::of_vector(mine);
    const auto srg = build_srg(view, compute_bundles(view, config), config);
    const auto marg = build_marg(population_of(both), config);

    const NodeMapping mapping = map_srg_nodes(srg, marg, config);
    const ReebNode& home_image = marg.nodes[mapping.to_marg[0]];
    CHECK(home_image.index == 0);
    CHECK(home_image.members.size() == 2);
}

TEST_CASE("mapping rejects an agent that is not in the marg") {
    const Config config = test_config(0.5);
    std::vector<Trajectory> mine = {traj_of_lats("a", 0, {0, 0, 0})};
    std::vector<Trajectory> others = {traj_of_lats("b", 0, {40, 40, 40})};
    const auto view = TrajectoryView::of_vector(mine);
    const auto srg = build_srg(view, compute_bundles(view, config), config);
    const auto marg = build_marg(population_of(others), config);
    CHECK_THROWS_AS(map_srg_nodes(srg, marg, config), Error);
    CHECK_THROWS_AS(build_hrg(srg, marg, 2.0, config), Error);
}

TEST_CASE("single-agent population: hrg is the srg with identical weights") {
    const Config config = test_config();
    const auto data = commute_population(1, 5, 64, 13, config, 0.0);
    const auto marg = build_marg(data, config);
    const auto srg = build_srg_for_agent(data, data.agents[0].agent_id, config);

    for (double beta : {1.0, 2.0, 8.0}) {
        const auto hrg = build_hrg(srg, marg, beta, config);
        CAPTURE(beta);
        REQUIRE(hrg.nodes.size() == srg.nodes.size());
        REQUIRE(hrg.edges.size() == srg.edges.size());
        for (std::size_t i = 0; i < hrg.edges.size(); ++i) {
            CHECK(hrg.edges[i].from == srg.edges[i].from);
            CHECK(hrg.edges[i].to == srg.edges[i].to);
            CHECK(std::abs(hrg.edges[i].weight - srg.edges[i].weight) <= 1e-12);
        }
        CHECK(hrg.srg_marked.size() == hrg.nodes.size());
        check_hrg_invariants(hrg);
    }
}

TEST_CASE("boost arithmetic: beta w1 / (beta w1 + w2) on a mixed split") {
    // agent a alone: 0 -> (index 2) two of three days go to +1 (its own
    // routine), one day the agent leaves to -1 where agent b goes every day.
    // In the marg, the -1 branch gains b's days, so the hrg keeps a non-srg
    // edge to prune/boost against.
    const Config config = test_config(0.5);
    std::vector<Trajectory> mine = {
        traj_of_lats("a", 0, {0, 0, 1, 1}),
        traj_of_lats("a", 1, {0, 0, 1, 1}),
    };
    std::vector<Trajectory> all = mine;
    all.push_back(traj_of_lats("b", 0, {0, 0, -1, -1}));

    const auto view = TrajectoryView::of_vector(mine);
    const auto srg = build_srg(view, compute_bundles(view, config), config);
    const auto marg = build_marg(population_of(all), config);

    // marg split node: 2/3 up, 1/3 down; only the up edge is srg-internal
    const double w1 = 2.0 / 3.0, w2 = 1.0 / 3.0;
    for (double beta : {1.0, 2.0, 4.0, 16.0}) {
        const auto hrg = build_hrg(srg, marg, beta, config);
        CAPTURE(beta);
        const auto src = sources(hrg);
        REQUIRE(src.size() == 1);
        REQUIRE(hrg.out_edges[src[0]].size() == 2);
        double got_internal = -1.0, got_external = -1.0;
        for (std::uint32_t eid : hrg.out_edges[src[0]]) {
            const ReebEdge& e = hrg.edges[eid];
            if (hrg.is_srg_marked(e.to)) got_internal = e.weight;
            else got_external = e.weight;
        }
        CHECK(std::abs(got_internal - beta * w1 / (beta * w1 + w2)) <= 1e-12);
        CHECK(std::abs(got_external - w2 / (beta * w1 + w2)) <= 1e-12);
        check_hrg_invariants(hrg);
    }
}

TEST_CASE("branches reachable only from non-srg sources are pruned") {
    // agent b has a private source branch joining the shared path later; the
    // hrg for agent a must drop b's private prefix but keep the shared spine
    const Config config = test_config(0.5);
    std::vector<Trajectory> mine = {traj_of_lats("a", 0, {0, 0, 0, 0})};
    std::vector<Trajectory> all = {
        traj_of_lats("a", 0, {0, 0, 0, 0}),
        traj_of_lats("b", 0, {5, 5, 0, 0}), // joins a's bundle at index 2
    };
    const auto view = TrajectoryView::of_vector(mine);
    const auto srg = build_srg(view, compute_bundles(view, config), config);
    const auto marg = build_marg(population_of(all), config);

    const auto hrg = build_hrg(srg, marg, 2.0, config);
    // b's index-0/1 private nodes (lat 5) must be gone
    for (const ReebNode& n : hrg.nodes) CHECK(n.centroid.lat < 4.0);
    for (std::uint32_t s : sources(hrg)) CHECK(hrg.is_srg_marked(s));
    check_hrg_invariants(hrg);
}

TEST_CASE("beta = 1 reproduces the renormalized marg restriction") {
    const Config config = test_config();
    const auto data = commute_population(3, 5, 72, 29, config);
    const auto marg = build_marg(data, config);
    const auto srg = build_srg_for_agent(data, "agent_001", config);
    const auto hrg = build_hrg(srg, marg, 1.0, config);
    check_hrg_invariants(hrg);

    // match hrg nodes back to marg nodes by (index, centroid, members)
    auto find_marg_node = [&marg](const ReebNode& n) -> const ReebNode* {
        for (const ReebNode& m : marg.nodes) {
            if (m.index == n.index && m.centroid == n.centroid && m.members == n.members)
                return &m;
        }
        return nullptr;
    };
    for (std::uint32_t v = 0; v < hrg.nodes.size(); ++v) {
        const ReebNode* m = find_marg_node(hrg.nodes[v]);
        REQUIRE(m != nullptr);
        // surviving out-edges keep their marg weight ratio after rescaling
        double marg_sum = 0.0;
        for (std::uint32_t eid : hrg.out_edges[v]) {
            const ReebNode* head = find_marg_node(hrg.nodes[hrg.edges[eid].to]);
            REQUIRE(head != nullptr);
            bool found = false;
            for (std::uint32_t meid : marg.out_edges[m->id]) {
                if (marg.edges[meid].to == head->id) {
                    marg_sum += marg.edges[meid].weight;
                    found = true;
                }
            }
            CHECK(found);
        }
        for (std::uint32_t eid : hrg.out_edges[v]) {
            const ReebNode* head = find_marg_node(hrg.nodes[hrg.edges[eid].to]);
            for (std::uint32_t meid : marg.out_edges[m->id]) {
                if (marg.edges[meid].to == head->id) {
                    CHECK(std::abs(hrg.edges[eid].weight -
                                   marg.edges[meid].weight / marg_sum) <= 1e-9);
                }
            }
        }
    }
}

TEST_CASE("srg-internal weight increases monotonically with beta") {
    const Config config = test_config();
    const auto data = commute_population(4, 6, 96, 31, config);
    const auto marg = build_marg(data, config);
    const auto srg = build_srg_for_agent(data, "agent_002", config);

    // locate a node with both internal and external outbound edges at beta=1
    const auto base = build_hrg(srg, marg, 1.0, config);
    std::uint32_t probe = UINT32_MAX;
    for (std::uint32_t v = 0; v < base.nodes.size(); ++v) {
        if (!base.is_srg_marked(v)) continue;
        bool internal = false, external = false;
        for (std::uint32_t eid : base.out_edges[v]) {
            if (base.is_srg_marked(base.edges[eid].to)) internal = true;
            else external = true;
        }
        if (internal && external) {
            probe = v;
            break;
        }
    }
    REQUIRE(probe != UINT32_MAX);
    const ReebNode& probe_node = base.nodes[probe];

    double previous = -1.0;
    for (double beta : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const auto hrg = build_hrg(srg, marg, beta, config);
        // relocate the probe node by identity (index, centroid, members)
        double internal_weight = 0.0;
        bool located = false;
        for (std::uint32_t v = 0; v < hrg.nodes.size(); ++v) {
            const ReebNode& n = hrg.nodes[v];
            if (n.index != probe_node.index || !(n.centroid == probe_node.centroid) ||
                n.members != probe_node.members)
                continue;
            located = true;
            for (std::uint32_t eid : hrg.out_edges[v]) {
                if (hrg.is_srg_marked(hrg.edges[eid].to))
                    internal_weight += hrg.edges[eid].weight;
            }
        }
        REQUIRE(located);
        CAPTURE(beta);
        CHECK(internal_weight > previous);
        previous = internal_weight;
    }
    CHECK(previous > 0.5); // tends to 1 as beta grows
}

TEST_CASE("hybrid fusion rejects beta < 1 and wrong roles") {
    const Config config = test_config();
    const auto data = commute_population(2, 4, 48, 37, config);
    const auto marg = build_marg(data, config);
    const auto srg = build_srg_for_agent(data, "agent_000", config);
    CHECK_THROWS_AS(build_hrg(srg, marg, 0.5, config), Error);
    const auto hrg = build_hrg(srg, marg, 2.0, config);
    CHECK_THROWS_AS(build_hrg(hrg, marg, 2.0, config), Error);
}
