#include "reebsim/bundling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace reebsim {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0u);
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
};

void check_input(const TrajectoryView& trajs, const Config& config) {
    config.validate();
    if (trajs.trajs.empty()) raise(ErrorCode::Validation, "bundle computation needs input");
    const int L = trajs.length;
    if (L < 1) raise(ErrorCode::Validation, "trajectories must be nonempty");
    for (const auto* traj : trajs.trajs) {
        if (traj->length() != L)
            raise(ErrorCode::Validation,
                  "ragged trajectory lengths: " + traj->id());
        for (int i = 0; i < L; ++i) {
            if (traj->points[i].index != i)
                raise(ErrorCode::Validation, "index gap in trajectory " + traj->id());
        }
    }
}

// Groups components of the per-index proximity graph into canonical bundles.
std::vector<Bundle> components_to_bundles(const TrajectoryView& trajs, int index,
                                          UnionFind& uf) {
    const std::size_t n = trajs.size();
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> groups;
    for (std::uint32_t t = 0; t < n; ++t) groups[uf.find(t)].push_back(t);

    std::vector<Bundle> bundles;
    bundles.reserve(groups.size());
    for (auto& [root, members] : groups) {
        std::sort(members.begin(), members.end());
        Bundle b;
        b.index = index;
        double lat = 0.0, lon = 0.0;
        for (std::uint32_t t : members) {
            const Point& p = trajs.at(t).points[index];
            lat += p.lat;
            lon += p.lon;
        }
        b.centroid = {lat / members.size(), lon / members.size()};
        b.members = std::move(members);
        bundles.push_back(std::move(b));
    }
    std::sort(bundles.begin(), bundles.end(), [](const Bundle& a, const Bundle& b) {
        if (a.centroid.lat != b.centroid.lat) return a.centroid.lat < b.centroid.lat;
        if (a.centroid.lon != b.centroid.lon) return a.centroid.lon < b.centroid.lon;
        return a.members < b.members;
    });
    return bundles;
}

BundleSet assemble(std::vector<std::vector<Bundle>> per_index, const TrajectoryView& trajs,
                   const Config& config) {
    std::vector<Bundle> all;
    for (auto& bundles : per_index)
        for (auto& b : bundles) all.push_back(std::move(b));
    return BundleSet(std::move(all), trajs.length, trajs.size(), trajs.fingerprint(),
                     config.epsilon, config.metric);
}

// Conservative grid cell sizes: any pair within epsilon lands in the same or
// an adjacent cell. For haversine the latitude span of epsilon meters is
// bounded by the minimum meridian scale, and the longitude span by the
// cosine at the widest latitude present.
struct CellSizes {
    double lat_deg;
    double lon_deg;
    bool wrap_lon; // haversine wraps at the antimeridian
};

CellSizes cell_sizes(const TrajectoryView& trajs, int index, const Config& config) {
    // A wider cell than epsilon is still conservative, so the floor keeps
    // cell indices in int64 range for arbitrarily small thresholds.
    constexpr double kMinCellDeg = 1e-9;
    if (config.metric == DistanceMetric::EuclideanDegrees) {
        const double cell = std::max(config.epsilon, kMinCellDeg);
        return {cell, cell, false};
    }
    double max_abs_lat = 0.0;
    for (std::uint32_t t = 0; t < trajs.size(); ++t) {
        max_abs_lat = std::max(max_abs_lat, std::abs(trajs.at(t).points[index].lat));
    }
    const double lat_deg =
        std::max(config.epsilon / kMinMetersPerDegLat * 1.05, kMinCellDeg);
    const double widest = std::min(89.9, max_abs_lat + lat_deg);
    const double cos_widest = std::cos(widest * 3.14159265358979323846 / 180.0);
    double lon_deg;
    if (cos_widest < 1e-6) {
        lon_deg = 360.0; // polar data: single longitude column
    } else {
        lon_deg = config.epsilon / (kMetersPerDegArc * cos_widest) * 1.05;
        lon_deg = std::min(std::max(lon_deg, kMinCellDeg), 360.0);
    }
    return {lat_deg, lon_deg, true};
}

} // namespace

BundleSet::BundleSet(std::vector<Bundle> bundles, int length, std::size_t traj_count,
                     std::string provenance_fingerprint, double epsilon,
                     DistanceMetric metric)
    : bundles_(std::move(bundles)),
      length_(length),
      traj_count_(traj_count),
      fingerprint_(std::move(provenance_fingerprint)),
      epsilon_(epsilon),
      metric_(metric) {
    by_index_.assign(length_, {});
    member_bundle_.assign(traj_count_ * length_, 0);
    for (std::uint32_t id = 0; id < bundles_.size(); ++id) {
        bundles_[id].id = id;
        const Bundle& b = bundles_[id];
        by_index_[b.index].push_back(id);
        for (std::uint32_t t : b.members) member_bundle_[t * length_ + b.index] = id;
    }
}

const std::vector<std::uint32_t>& BundleSet::at_index(int index) const {
    if (index < 0 || index >= length_)
        raise(ErrorCode::Lookup, "bundle index out of range");
    return by_index_[index];
}

std::uint32_t BundleSet::bundle_id_of(std::uint32_t traj, int index) const {
    if (traj >= traj_count_ || index < 0 || index >= length_) {
        std::ostringstream msg;
        msg << "no point (trajectory " << traj << ", index " << index << ") in bundle set";
        raise(ErrorCode::Lookup, msg.str());
    }
    return member_bundle_[traj * length_ + index];
}

const Bundle& BundleSet::bundle_of(std::uint32_t traj, int index) const {
    return bundles_[bundle_id_of(traj, index)];
}

BundleSet compute_bundles(const TrajectoryView& trajs, const Config& config) {
    check_input(trajs, config);
    const int L = trajs.length;
    const std::size_t n = trajs.size();

    std::vector<std::vector<Bundle>> per_index(L);
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells;
    for (int i = 0; i < L; ++i) {
        const CellSizes sizes = cell_sizes(trajs, i, config);
        const std::int64_t lon_cols =
            sizes.wrap_lon
                ? std::max<std::int64_t>(1, static_cast<std::int64_t>(360.0 / sizes.lon_deg))
                : 0;
        auto cell_key = [&](double lat, double lon) -> std::uint64_t {
            std::int64_t cy = static_cast<std::int64_t>(std::floor(lat / sizes.lat_deg));
            std::int64_t cx;
            if (sizes.wrap_lon) {
                cx = static_cast<std::int64_t>(std::floor((lon + 180.0) / sizes.lon_deg));
                cx = ((cx % lon_cols) + lon_cols) % lon_cols;
            } else {
                cx = static_cast<std::int64_t>(std::floor(lon / sizes.lon_deg));
            }
            return (static_cast<std::uint64_t>(cy) << 32) ^
                   static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx));
        };

        cells.clear();
        for (std::uint32_t t = 0; t < n; ++t) {
            const Point& p = trajs.at(t).points[i];
            cells[cell_key(p.lat, p.lon)].push_back(t);
        }

        UnionFind uf(n);
        for (std::uint32_t t = 0; t < n; ++t) {
            const Point& p = trajs.at(t).points[i];
            const std::int64_t cy =
                static_cast<std::int64_t>(std::floor(p.lat / sizes.lat_deg));
            std::int64_t cx;
            if (sizes.wrap_lon) {
                cx = static_cast<std::int64_t>(std::floor((p.lon + 180.0) / sizes.lon_deg));
                cx = ((cx % lon_cols) + lon_cols) % lon_cols;
            } else {
                cx = static_cast<std::int64_t>(std::floor(p.lon / sizes.lon_deg));
            }
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (std::int64_t dx = -1; dx <= 1; ++dx) {
                    std::int64_t nx = cx + dx;
                    if (sizes.wrap_lon) nx = ((nx % lon_cols) + lon_cols) % lon_cols;
                    const std::uint64_t key =
                        (static_cast<std::uint64_t>(cy + dy) << 32) ^
                        static_cast<std::uint64_t>(static_cast<std::uint32_t>(nx));
                    auto it = cells.find(key);
                    if (it == cells.end()) continue;
                    for (std::uint32_t other : it->second) {
                        if (other <= t) continue;
                        const Point& q = trajs.at(other).points[i];
                        if (distance(p.pos(), q.pos(), config.metric) < config.epsilon)
                            uf.unite(t, other);
                    }
                }
            }
        }
        per_index[i] = components_to_bundles(trajs, i, uf);
    }
    return assemble(std::move(per_index), trajs, config);
}

BundleSet brute_force_bundles(const TrajectoryView& trajs, const Config& config) {
    check_input(trajs, config);
    const int L = trajs.length;
    const std::size_t n = trajs.size();

    std::vector<std::vector<Bundle>> per_index(L);
    for (int i = 0; i < L; ++i) {
        UnionFind uf(n);
        for (std::uint32_t a = 0; a < n; ++a) {
            const Point& p = trajs.at(a).points[i];
            for (std::uint32_t b = a + 1; b < n; ++b) {
                const Point& q = trajs.at(b).points[i];
                if (distance(p.pos(), q.pos(), config.metric) < config.epsilon)
                    uf.unite(a, b);
            }
        }
        per_index[i] = components_to_bundles(trajs, i, uf);
    }
    return assemble(std::move(per_index), trajs, config);
}

bool bundle_sets_equal(const BundleSet& a, const BundleSet& b, double centroid_rel_tol) {
    if (a.length() != b.length()) return false;
    if (a.trajectory_count() != b.trajectory_count()) return false;
    if (a.bundles().size() != b.bundles().size()) return false;
    for (std::size_t i = 0; i < a.bundles().size(); ++i) {
        const Bundle& x = a.bundles()[i];
        const Bundle& y = b.bundles()[i];
        if (x.index != y.index || x.members != y.members) return false;
        auto close = [centroid_rel_tol](double u, double v) {
            const double scale = std::max({std::abs(u), std::abs(v), 1.0});
            return std::abs(u - v) <= centroid_rel_tol * scale;
        };
        if (!close(x.centroid.lat, y.centroid.lat)) return false;
        if (!close(x.centroid.lon, y.centroid.lon)) return false;
    }
    return true;
}

} // namespace reebsim
