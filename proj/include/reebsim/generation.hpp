#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reebsim/dataset.hpp"
#include "reebsim/reeb.hpp"
#include "reebsim/rng.hpp"

namespace reebsim {

// One verbatim copy of a donor subtrajectory: generated points
// [begin_index, end_index) came from donor trajectory `donor` while walking
// edge from_node -> to_node.
struct LineageSegment {
    std::uint32_t from_node = 0;
    std::uint32_t to_node = 0;
    std::uint32_t donor = 0; // handle into the graph's traj_ids
    int begin_index = 0;
    int end_index = 0;       // exclusive
};

struct GeneratedTrajectory {
    std::vector<Point> points;           // length exactly L
    std::vector<LineageSegment> lineage; // segments concatenate to points
};

struct GenerateOptions {
    // With permissive set, a traversal that ends before index L-1 is retried
    // with fresh draws instead of failing.
    bool permissive = false;
    int max_retries = 16;
};

// Seeded random traversal of a Markovian Reeb graph. Single-threaded; run
// one session per agent for parallel generation.
class GenerationSession {
public:
    // `donors` must contain every trajectory id referenced by the graph.
    // `initial_endpoint` anchors the first day's source selection (normally
    // the last point of the agent's final baseline trajectory); without it
    // the canonically first source is used.
    GenerationSession(const ReebGraph& graph, const TrajectoryView& donors,
                      std::uint64_t seed,
                      std::optional<LatLon> initial_endpoint = std::nullopt,
                      GenerateOptions options = {});

    // The eligible source nearest to the previous endpoint (canonical first
    // on ties). Throws ErrorCode::Degenerate if the graph has no sources.
    std::uint32_t select_source() const;

    // One day: walk source -> sink sampling edges by weight and donors
    // uniformly from each edge's support, concatenating copied
    // subtrajectories over [index(u), index(v)); the sink contributes its
    // final point. Updates the session endpoint.
    GeneratedTrajectory generate_trajectory();

    // `days` consecutive days threading the endpoint between them.
    std::vector<GeneratedTrajectory> generate_days(int days);

    const std::optional<LatLon>& previous_endpoint() const { return previous_endpoint_; }

private:
    GeneratedTrajectory traverse_once();

    const ReebGraph* graph_;
    const TrajectoryView* donors_;
    std::vector<std::uint32_t> donor_handle_;  // graph traj handle -> donors handle
    std::vector<std::uint32_t> sources_;
    Rng rng_;
    std::optional<LatLon> previous_endpoint_;
    GenerateOptions options_;
};

// Converts a generated day into a dataset trajectory.
Trajectory to_trajectory(const GeneratedTrajectory& generated,
                         const std::string& agent_id, int day);

} // namespace reebsim
