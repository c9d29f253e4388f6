#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "reebsim/reeb.hpp"
#include "reebsim/synth.hpp"
#include "support.hpp"

using namespace reebsim;
using namespace reebsim::test;

namespace {

Config test_config(double epsilon = 0.5) {
    Config config;
    config.epsilon = epsilon;
    return config;
}

ReebGraph srg_of(const std::vector<Trajectory>& trajs, const Config& config) {
    const auto view = TrajectoryView::of_vector(trajs);
    return build_srg(view, compute_bundles(view, config), config);
}

// The four-trajectory merge/split configuration: two pairs travel together,
// one pair splits at index 2, one of the split halves merges into the other
// pair at index 3.
std::vector<Trajectory> figure_two_trajs() {
    return {
        traj_of_lats("t0", 0, {0, 0, 0, 0, 0, 0}),
        traj_of_lats("t1", 0, {0, 0, 0, 0, 0, 0}),
        traj_of_lats("t2", 0, {2, 2, 2, 0, 0, 0}),
        traj_of_lats("t3", 0, {2, 2, 4, 4, 4, 4}),
    };
}

const ReebEdge* find_edge(const ReebGraph& g, std::uint32_t from, std::uint32_t to) {
    for (const ReebEdge& e : g.edges)
        if (e.from == from && e.to == to) return &e;
    return nullptr;
}

void check_invariants(const ReebGraph& g) {
    // DAG: edges strictly increase the index
    for (const ReebEdge& e : g.edges) {
        CHECK(g.nodes[e.to].index > g.nodes[e.from].index);
        CHECK_FALSE(e.support.empty());
    }
    // outbound normalization and exact integer support consistency
    for (const ReebNode& n : g.nodes) {
        if (g.out_edges[n.id].empty()) continue;
        double sum = 0.0;
        for (std::uint32_t eid : g.out_edges[n.id]) {
            const ReebEdge& e = g.edges[eid];
            sum += e.weight;
            CHECK(e.weight * static_cast<double>(n.members.size()) ==
                  static_cast<double>(e.support.size()));
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
    // per-trajectory path cover: consecutive nodes of each trajectory are
    // connected by an edge whose support contains it
    for (std::uint32_t t = 0; t < g.traj_ids.size(); ++t) {
        const auto path = trajectory_node_path(g, t);
        REQUIRE_FALSE(path.empty());
        CHECK(g.nodes[path.front()].index == 0);
        CHECK(g.nodes[path.back()].index == g.length - 1);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            const ReebEdge* e = find_edge(g, path[i], path[i + 1]);
            REQUIRE(e != nullptr);
            CHECK(std::binary_search(e->support.begin(), e->support.end(), t));
        }
    }
}

} // namespace

TEST_CASE("single trajectory: source, sink, one weight-1 edge") {
    const auto g = srg_of({constant_traj("a", 0, 10, 1.0, 2.0)}, test_config());
    REQUIRE(g.nodes.size() == 2);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.nodes[0].index == 0);
    CHECK(g.nodes[1].index == 9);
    CHECK(g.edges[0].weight == 1.0);
    CHECK(sources(g) == std::vector<std::uint32_t>{0});
    CHECK(sinks(g) == std::vector<std::uint32_t>{1});
    CHECK(g.kind(0) == NodeKind::Source);
    CHECK(g.kind(1) == NodeKind::Sink);
    check_invariants(g);
}

TEST_CASE("figure-two configuration matches the hand-derived golden graph") {
    const auto g = srg_of(figure_two_trajs(), test_config());

    std::ifstream in(golden_path("figure_two_srg.json"));
    REQUIRE(in.good());
    nlohmann::json golden;
    in >> golden;

    REQUIRE(g.nodes.size() == golden["nodes"].size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& jn = golden["nodes"][i];
        CHECK(g.nodes[i].index == jn[0].get<int>());
        CHECK(g.nodes[i].centroid.lat == jn[1].get<double>());
        CHECK(g.nodes[i].centroid.lon == jn[2].get<double>());
        CHECK(g.nodes[i].members == jn[3].get<std::vector<std::uint32_t>>());
    }
    REQUIRE(g.edges.size() == golden["edges"].size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& je = golden["edges"][i];
        CHECK(g.edges[i].from == je[0].get<std::uint32_t>());
        CHECK(g.edges[i].to == je[1].get<std::uint32_t>());
        CHECK(g.edges[i].weight == je[2].get<double>());
        CHECK(g.edges[i].support == je[3].get<std::vector<std::uint32_t>>());
    }
    // every weight is 1/2 or 1
    for (const ReebEdge& e : g.edges) CHECK((e.weight == 0.5 || e.weight == 1.0));
    CHECK(sources(g).size() == 2);
    CHECK(sinks(g).size() == 2);
    check_invariants(g);
}

TEST_CASE("pair splitting at index s: half weights on the split edges") {
    const auto g = srg_of(
        {
            traj_of_lats("a", 0, {0, 0, 0, 1, 1, 1}),
            traj_of_lats("b", 1, {0, 0, 0, -1, -1, -1}),
        },
        test_config());
    REQUIRE(g.nodes.size() == 5);
    REQUIRE(g.edges.size() == 4);
    const auto src = sources(g);
    REQUIRE(src.size() == 1);
    CHECK(g.nodes[src[0]].members.size() == 2);
    int half = 0, whole = 0;
    for (const ReebEdge& e : g.edges) {
        if (e.from == src[0]) {
            CHECK(e.weight == 0.5);
            ++half;
        } else {
            CHECK(e.weight == 1.0);
            ++whole;
        }
    }
    CHECK(half == 2);
    CHECK(whole == 2);
    check_invariants(g);
}

TEST_CASE("merge: a trajectory joining an unchanged pair still forces a node") {
    // t2 joins {t0, t1} at index 2; node identity is the bundle, so the
    // unchanged members get the node too
    const auto g = srg_of(
        {
            traj_of_lats("t0", 0, {0, 0, 0, 0}),
            traj_of_lats("t1", 0, {0, 0, 0, 0}),
            traj_of_lats("t2", 0, {3, 3, 0, 0}),
        },
        test_config());
    bool found = false;
    for (const ReebNode& n : g.nodes)
        if (n.index == 2 && n.members == std::vector<std::uint32_t>{0, 1, 2}) found = true;
    CHECK(found);
    check_invariants(g);
}

TEST_CASE("marg of identical copies is isomorphic to the single-trajectory srg") {
    std::vector<Trajectory> trajs;
    for (int a = 0; a < 3; ++a) trajs.push_back(constant_traj("a" + std::to_string(a), 0, 8, 1.0, 2.0));
    const auto data = population_of(std::move(trajs));
    const auto config = test_config();
    const auto marg = build_marg(data, config);
    CHECK(marg.role == GraphRole::Marg);
    REQUIRE(marg.nodes.size() == 2);
    REQUIRE(marg.edges.size() == 1);
    CHECK(marg.edges[0].weight == 1.0);
    CHECK(marg.edges[0].support.size() == 3);

    const auto srg = srg_of({constant_traj("a0", 0, 8, 1.0, 2.0)}, config);
    REQUIRE(srg.nodes.size() == marg.nodes.size());
    for (std::size_t i = 0; i < srg.nodes.size(); ++i) {
        CHECK(marg.nodes[i].index == srg.nodes[i].index);
        CHECK(marg.nodes[i].centroid == srg.nodes[i].centroid);
    }
    CHECK(marg.edges[0].from == srg.edges[0].from);
    CHECK(marg.edges[0].to == srg.edges[0].to);
    CHECK(marg.edges[0].weight == srg.edges[0].weight);
    check_invariants(marg);
}

TEST_CASE("marg with one agent equals that agent's srg") {
    CommuteWorldOptions options;
    options.agents = 1;
    options.days = 4;
    options.length = 48;
    const Config config = test_config(0.001);
    const auto data = synth_generate(make_commute_world(options, 3), config, 3);
    const auto marg = build_marg(data, config);
    const auto srg = build_srg_for_agent(data, data.agents[0].agent_id, config);
    CHECK(graph_signature(marg) == graph_signature(srg));
    check_invariants(marg);
    check_invariants(srg);
}

TEST_CASE("disjoint territories: marg is the disjoint union of the agent srgs") {
    // two agents far apart, several days each with a mid-day split
    std::vector<Trajectory> far_a = {
        traj_of_lats("a", 0, {0, 0, 0, 1, 1, 1}),
        traj_of_lats("a", 1, {0, 0, 0, -1, -1, -1}),
    };
    std::vector<Trajectory> far_b = {
        traj_of_lats("b", 0, {50, 50, 50, 51, 51, 51}),
        traj_of_lats("b", 1, {50, 50, 50, 49, 49, 49}),
    };
    std::vector<Trajectory> all = far_a;
    for (const auto& t : far_b) all.push_back(t);

    const Config config = test_config();
    const auto marg = build_marg(population_of(all), config);
    const auto srg_a = srg_of(far_a, config);
    const auto srg_b = srg_of(far_b, config);

    const auto components = weak_components(marg);
    REQUIRE(components.size() == 2);
    const std::set<std::string> got = {graph_signature(marg, components[0]),
                                       graph_signature(marg, components[1])};
    const std::set<std::string> want = {graph_signature(srg_a), graph_signature(srg_b)};
    CHECK(got == want);
    CHECK(sources(marg).size() == 2);
    CHECK(sinks(marg).size() == 2);
}

TEST_CASE("srg build is deterministic and enforces provenance") {
    CommuteWorldOptions options;
    options.agents = 2;
    options.days = 5;
    options.length = 64;
    const Config config = test_config(0.001);
    const auto data = synth_generate(make_commute_world(options, 9), config, 9);

    const auto g1 = build_srg_for_agent(data, "agent_000", config);
    const auto g2 = build_srg_for_agent(data, "agent_000", config);
    CHECK(graph_equal(g1, g2));

    // bundles built from one agent cannot back another agent's build
    const auto view_a = TrajectoryView::of_agent(data.agents[0]);
    const auto view_b = TrajectoryView::of_agent(data.agents[1]);
    const auto bundles_a = compute_bundles(view_a, config);
    CHECK_THROWS_AS(build_srg(view_b, bundles_a, config), Error);

    // a different epsilon invalidates the bundle provenance too
    Config other = config;
    other.epsilon = config.epsilon * 2;
    CHECK_THROWS_AS(build_srg(view_a, bundles_a, other), Error);
}

TEST_CASE("invariants hold on a randomized commute population") {
    CommuteWorldOptions options;
    options.agents = 4;
    options.days = 6;
    options.length = 96;
    options.site_scatter = 0.0015;
    const Config config = test_config(0.001);
    const auto data = synth_generate(make_commute_world(options, 21), config, 21);

    const auto marg = build_marg(data, config);
    check_invariants(marg);
    for (const auto& agent : data.agents) {
        const auto srg = build_srg_for_agent(data, agent.agent_id, config);
        check_invariants(srg);
        CHECK(srg.provenance.agent_id == agent.agent_id);
    }
}
