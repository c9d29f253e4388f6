#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reebsim/error.hpp"
#include "reebsim/geo.hpp"

namespace reebsim {

// One GPS sample. `index` is the time step within the day (one step = one
// sampling interval, nominally 5 minutes).
struct Point {
    int index = 0;
    double lat = 0.0;
    double lon = 0.0;

    LatLon pos() const { return {lat, lon}; }
};

// One agent-day: a dense, gap-free sequence of L points (points[i].index == i).
struct Trajectory {
    std::string agent_id;
    int day = 0;
    std::vector<Point> points;

    int length() const { return static_cast<int>(points.size()); }
    std::string id() const { return agent_id + "#" + std::to_string(day); }
};

struct AgentDataset {
    std::string agent_id;
    std::vector<Trajectory> trajectories; // one per day, sorted by day
};

struct PopulationDataset {
    std::vector<AgentDataset> agents;     // sorted by agent_id
    double sample_minutes = 5.0;          // duration of one index step

    // L shared by all trajectories. Throws on an empty dataset.
    int length() const;
    std::size_t trajectory_count() const;
    std::size_t point_count() const;
    const AgentDataset* find_agent(const std::string& agent_id) const;
};

struct Config {
    double epsilon = 0.001;                // bundle distance threshold, metric units
    DistanceMetric metric = DistanceMetric::EuclideanDegrees;
    double beta = 2.0;                     // SRG-internal edge boost, >= 1
    int grid_dim = 32;
    std::uint64_t seed = 0;
    double movement_threshold = 0.0001;    // below this step distance a sample is stationary
    int histogram_bins = 64;

    // Throws ErrorCode::Config on any violated bound.
    void validate() const;
};

struct Violation {
    std::string code;     // machine-readable, e.g. "ragged-length"
    std::string subject;  // trajectory or agent id, empty for dataset-wide issues
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Reports every violated dataset invariant: ragged lengths, index gaps,
// out-of-range coordinates, duplicate agent ids. Never throws.
ValidationReport validate_dataset(const PopulationDataset& data);

// Non-owning flat list of trajectories; the handle space (0..size-1) used by
// bundles and graph edge supports. SRGs view one agent, MARGs view the
// concatenation of all agents.
struct TrajectoryView {
    std::vector<const Trajectory*> trajs;
    int length = 0; // shared L

    static TrajectoryView of_agent(const AgentDataset& agent);
    static TrajectoryView of_population(const PopulationDataset& population);
    static TrajectoryView of_vector(const std::vector<Trajectory>& trajs);

    std::size_t size() const { return trajs.size(); }
    const Trajectory& at(std::uint32_t handle) const { return *trajs.at(handle); }
    std::vector<std::string> ids() const;

    // Fingerprint over ids and point data; ties bundles and graphs to their
    // source trajectories.
    std::string fingerprint() const;
};

} // namespace reebsim
