#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reebsim/dataset.hpp"

namespace reebsim {

// An equivalence class of same-index points: a connected component of the
// per-index proximity graph with edges where d(p, q) < epsilon (strict).
struct Bundle {
    std::uint32_t id = 0;               // position in BundleSet::bundles
    int index = 0;
    std::vector<std::uint32_t> members; // trajectory handles, sorted; cc(b)
    LatLon centroid;                    // arithmetic mean of member points
};

class BundleSet {
public:
    BundleSet() = default;
    BundleSet(std::vector<Bundle> bundles, int length, std::size_t traj_count,
              std::string provenance_fingerprint, double epsilon, DistanceMetric metric);

    const std::vector<Bundle>& bundles() const { return bundles_; }
    int length() const { return length_; }
    std::size_t trajectory_count() const { return traj_count_; }

    // Bundle ids at one time index, in canonical order.
    const std::vector<std::uint32_t>& at_index(int index) const;

    // The unique bundle containing (trajectory, index). Throws
    // ErrorCode::Lookup for a pair outside the source dataset.
    const Bundle& bundle_of(std::uint32_t traj, int index) const;
    std::uint32_t bundle_id_of(std::uint32_t traj, int index) const;

    const std::string& provenance_fingerprint() const { return fingerprint_; }
    double epsilon() const { return epsilon_; }
    DistanceMetric metric() const { return metric_; }

private:
    std::vector<Bundle> bundles_;                 // sorted by (index, lat, lon, members)
    std::vector<std::vector<std::uint32_t>> by_index_;
    std::vector<std::uint32_t> member_bundle_;    // traj * L + index -> bundle id
    int length_ = 0;
    std::size_t traj_count_ = 0;
    std::string fingerprint_;
    double epsilon_ = 0.0;
    DistanceMetric metric_ = DistanceMetric::EuclideanDegrees;
};

// Partitions all points into per-index bundles using a uniform grid hash:
// O(L * N log N) overall. Rejects empty input and epsilon <= 0.
BundleSet compute_bundles(const TrajectoryView& trajs, const Config& config);

// O(N^2)-per-index oracle with the same contract and canonical output order.
// Shares only the union-find primitive with compute_bundles; candidate pair
// discovery is independent.
BundleSet brute_force_bundles(const TrajectoryView& trajs, const Config& config);

// Partition identity plus centroid agreement within relative tolerance.
bool bundle_sets_equal(const BundleSet& a, const BundleSet& b, double centroid_rel_tol = 1e-12);

} // namespace reebsim
