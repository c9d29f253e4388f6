#include <doctest.h>

#include <cmath>
#include <set>

#include "reebsim/bundling.hpp"
#include "reebsim/rng.hpp"
#include "support.hpp"

using namespace reebsim;
using namespace reebsim::test;

namespace {

Config config_with_eps(double epsilon, DistanceMetric metric = DistanceMetric::EuclideanDegrees) {
    Config config;
    config.epsilon = epsilon;
    config.metric = metric;
    return config;
}

std::vector<Trajectory> random_trajectories(Rng& rng, int n, int length, double box = 0.02) {
    std::vector<Trajectory> trajs;
    for (int t = 0; t < n; ++t) {
        Trajectory traj;
        traj.agent_id = "a" + std::to_string(t);
        traj.day = 0;
        for (int i = 0; i < length; ++i) {
            double lat = 10.0 + rng.uniform() * box;
            double lon = 20.0 + rng.uniform() * box;
            // occasional exact duplicates of the previous trajectory's point
            if (t > 0 && rng.uniform() < 0.1) {
                lat = trajs[t - 1].points[i].lat;
                lon = trajs[t - 1].points[i].lon;
            }
            traj.points.push_back({i, lat, lon});
        }
        trajs.push_back(std::move(traj));
    }
    return trajs;
}

} // namespace

TEST_CASE("two identical trajectories share one bundle per index") {
    const auto trajs = std::vector<Trajectory>{
        constant_traj("a", 0, 5, 10.0, 20.0),
        constant_traj("a", 1, 5, 10.0, 20.0),
    };
    const auto view = TrajectoryView::of_vector(trajs);
    const auto bundles = compute_bundles(view, config_with_eps(0.5));
    REQUIRE(bundles.bundles().size() == 5);
    for (const Bundle& b : bundles.bundles()) {
        CHECK(b.members == std::vector<std::uint32_t>{0, 1});
        CHECK(b.centroid.lat == 10.0);
        CHECK(b.centroid.lon == 20.0);
    }
}

TEST_CASE("trajectories farther than epsilon stay in singleton bundles") {
    const auto trajs = std::vector<Trajectory>{
        constant_traj("a", 0, 4, 10.0, 20.0),
        constant_traj("a", 1, 4, 11.0, 20.0),
    };
    const auto view = TrajectoryView::of_vector(trajs);
    const auto bundles = compute_bundles(view, config_with_eps(0.5));
    CHECK(bundles.bundles().size() == 8);
    for (const Bundle& b : bundles.bundles()) CHECK(b.members.size() == 1);
}

TEST_CASE("chain within epsilon forms one connected-component bundle") {
    // d(p,q) < eps, d(q,r) < eps, d(p,r) >= eps
    const auto trajs = std::vector<Trajectory>{
        traj_of_lats("p", 0, {0.0}),
        traj_of_lats("q", 0, {0.4}),
        traj_of_lats("r", 0, {0.8}),
    };
    const auto view = TrajectoryView::of_vector(trajs);
    const auto config = config_with_eps(0.5);
    const auto expected = brute_force_bundles(view, config);
    REQUIRE(expected.bundles().size() == 1);
    CHECK(expected.bundles()[0].members == std::vector<std::uint32_t>{0, 1, 2});

    const auto bundles = compute_bundles(view, config);
    CHECK(bundle_sets_equal(bundles, expected));
    CHECK(bundles.bundle_of(2, 0).members.size() == 3);
}

TEST_CASE("ties at exactly epsilon do not connect") {
    const auto trajs = std::vector<Trajectory>{
        traj_of_lats("a", 0, {0.0}),
        traj_of_lats("b", 0, {0.5}),
    };
    const auto view = TrajectoryView::of_vector(trajs);
    const auto bundles = compute_bundles(view, config_with_eps(0.5));
    CHECK(bundles.bundles().size() == 2);
}

TEST_CASE("bundle_of lookups") {
    const auto trajs = std::vector<Trajectory>{
        constant_traj("a", 0, 6, 10.0, 20.0),
        constant_traj("a", 1, 6, 10.0, 20.0),
    };
    const auto view = TrajectoryView::of_vector(trajs);
    const auto bundles = compute_bundles(view, config_with_eps(0.5));
    CHECK(bundles.bundle_of(0, 5).members.size() == 2);
    CHECK(bundles.bundle_of(1, 5).id == bundles.bundle_of(0, 5).id);
    CHECK_THROWS_AS(bundles.bundle_of(2, 0), Error);
    CHECK_THROWS_AS(bundles.bundle_of(0, 6), Error);
}

TEST_CASE("single trajectory gives L singleton bundles") {
    const auto trajs = std::vector<Trajectory>{constant_traj("a", 0, 7, 10.0, 20.0)};
    const auto view = TrajectoryView::of_vector(trajs);
    const auto bundles = brute_force_bundles(view, config_with_eps(0.5));
    CHECK(bundles.bundles().size() == 7);
}

TEST_CASE("rejects empty input and bad epsilon") {
    const std::vector<Trajectory> none;
    CHECK_THROWS_AS(compute_bundles(TrajectoryView::of_vector(none), config_with_eps(0.5)),
                    Error);
    const auto trajs = std::vector<Trajectory>{constant_traj("a", 0, 2, 10.0, 20.0)};
    CHECK_THROWS_AS(compute_bundles(TrajectoryView::of_vector(trajs), config_with_eps(0.0)),
                    Error);
}

TEST_CASE("partition property: disjoint bundles cover all trajectories per index") {
    Rng rng(11);
    const auto trajs = random_trajectories(rng, 8, 30);
    const auto view = TrajectoryView::of_vector(trajs);
    const auto bundles = compute_bundles(view, config_with_eps(0.004));
    for (int i = 0; i < 30; ++i) {
        std::set<std::uint32_t> seen;
        for (std::uint32_t bid : bundles.at_index(i)) {
            for (std::uint32_t t : bundles.bundles()[bid].members) {
                CHECK(seen.insert(t).second); // disjoint
            }
        }
        CHECK(seen.size() == 8); // covering
    }
}

TEST_CASE("oracle equivalence over randomized epsilon sweep") {
    Rng rng(17);
    for (int round = 0; round < 24; ++round) {
        const auto trajs = random_trajectories(rng, 8, 30);
        const auto view = TrajectoryView::of_vector(trajs);
        // log-spread epsilons around the point spacing scale
        const double eps = 0.02 * std::pow(10.0, -3.0 * rng.uniform());
        const auto metric = round % 4 == 3 ? DistanceMetric::HaversineMeters
                                           : DistanceMetric::EuclideanDegrees;
        const double scaled_eps =
            metric == DistanceMetric::HaversineMeters ? eps * 111000.0 : eps;
        const auto config = config_with_eps(scaled_eps, metric);
        CAPTURE(round);
        CAPTURE(scaled_eps);
        CHECK(bundle_sets_equal(compute_bundles(view, config),
                                brute_force_bundles(view, config)));
    }
}

TEST_CASE("oracle equivalence near the poles and the antimeridian (haversine)") {
    Rng rng(23);
    std::vector<Trajectory> trajs;
    for (int t = 0; t < 6; ++t) {
        Trajectory traj;
        traj.agent_id = "p" + std::to_string(t);
        for (int i = 0; i < 10; ++i) {
            const double lat = (i < 5 ? 89.9 : 0.0) + rng.uniform() * 0.05;
            const double lon = (rng.uniform() < 0.5 ? -180.0 : 180.0) +
                               (rng.uniform() - 0.5) * 0.08;
            traj.points.push_back({i, lat, std::clamp(lon, -180.0, 180.0)});
        }
        trajs.push_back(std::move(traj));
    }
    const auto view = TrajectoryView::of_vector(trajs);
    for (double eps_m : {50.0, 500.0, 5000.0}) {
        const auto config = config_with_eps(eps_m, DistanceMetric::HaversineMeters);
        CAPTURE(eps_m);
        CHECK(bundle_sets_equal(compute_bundles(view, config),
                                brute_force_bundles(view, config)));
    }
}

TEST_CASE("monotonicity: growing epsilon never splits a bundle") {
    Rng rng(31);
    const auto trajs = random_trajectories(rng, 8, 20);
    const auto view = TrajectoryView::of_vector(trajs);
    const auto small = compute_bundles(view, config_with_eps(0.002));
    const auto large = compute_bundles(view, config_with_eps(0.006));
    for (const Bundle& b : small.bundles()) {
        const Bundle& container = large.bundle_of(b.members.front(), b.index);
        for (std::uint32_t t : b.members) {
            CHECK(large.bundle_id_of(t, b.index) == container.id);
        }
    }
}

TEST_CASE("epsilon -> 0 limit: only coincident points share a bundle") {
    const auto trajs = std::vector<Trajectory>{
        traj_of_lats("a", 0, {0.0, 1.0}),
        traj_of_lats("b", 0, {0.0, 1.0 + 1e-12}),
    };
    const auto view = TrajectoryView::of_vector(trajs);
    const auto bundles = compute_bundles(view, config_with_eps(1e-15));
    CHECK(bundles.bundle_of(0, 0).members.size() == 2);  // exactly coincident
    CHECK(bundles.bundle_of(0, 1).members.size() == 1);  // 1e-12 apart
}
