#include "reebsim/dataset.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "reebsim/fingerprint.hpp"

namespace reebsim {

int PopulationDataset::length() const {
    for (const auto& agent : agents) {
        if (!agent.trajectories.empty()) {
            return agent.trajectories.front().length();
        }
    }
    raise(ErrorCode::Degenerate, "dataset has no trajectories");
}

std::size_t PopulationDataset::trajectory_count() const {
    std::size_t n = 0;
    for (const auto& agent : agents) n += agent.trajectories.size();
    return n;
}

std::size_t PopulationDataset::point_count() const {
    std::size_t n = 0;
    for (const auto& agent : agents)
        for (const auto& traj : agent.trajectories) n += traj.points.size();
    return n;
}

const AgentDataset* PopulationDataset::find_agent(const std::string& agent_id) const {
    for (const auto& agent : agents) {
        if (agent.agent_id == agent_id) return &agent;
    }
    return nullptr;
}

void Config::validate() const {
    if (!(epsilon > 0.0)) raise(ErrorCode::Config, "epsilon must be > 0");
    if (!(beta >= 1.0)) raise(ErrorCode::Config, "beta must be >= 1");
    if (grid_dim < 1) raise(ErrorCode::Config, "grid_dim must be >= 1");
    if (histogram_bins < 2) raise(ErrorCode::Config, "histogram_bins must be >= 2");
    if (movement_threshold < 0.0) raise(ErrorCode::Config, "movement_threshold must be >= 0");
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    if (violations.empty()) {
        out << "ok\n";
        return out.str();
    }
    for (const auto& v : violations) {
        out << v.code;
        if (!v.subject.empty()) out << " [" << v.subject << "]";
        out << ": " << v.message << "\n";
    }
    return out.str();
}

ValidationReport validate_dataset(const PopulationDataset& data) {
    ValidationReport report;
    auto add = [&report](const std::string& code, const std::string& subject,
                         const std::string& message) {
        report.violations.push_back({code, subject, message});
    };

    if (data.agents.empty()) {
        add("empty-dataset", "", "dataset contains no agents");
        return report;
    }

    std::unordered_set<std::string> seen_agents;
    int expected_length = -1;
    for (const auto& agent : data.agents) {
        if (!seen_agents.insert(agent.agent_id).second) {
            add("duplicate-agent", agent.agent_id, "agent id appears more than once");
        }
        if (agent.trajectories.empty()) {
            add("empty-agent", agent.agent_id, "agent has no trajectories");
            continue;
        }
        for (const auto& traj : agent.trajectories) {
            const std::string tid = traj.id();
            if (traj.points.empty()) {
                add("empty-trajectory", tid, "trajectory has no points");
                continue;
            }
            if (expected_length < 0) expected_length = traj.length();
            if (traj.length() != expected_length) {
                std::ostringstream msg;
                msg << "length " << traj.length() << " differs from dataset length "
                    << expected_length;
                add("ragged-length", tid, msg.str());
            }
            for (std::size_t i = 0; i < traj.points.size(); ++i) {
                const Point& p = traj.points[i];
                if (p.index != static_cast<int>(i)) {
                    std::ostringstream msg;
                    msg << "point at position " << i << " has index " << p.index;
                    add("index-gap", tid, msg.str());
                    break; // one gap report per trajectory is enough
                }
            }
            for (const Point& p : traj.points) {
                if (p.lat < -90.0 || p.lat > 90.0 || p.lon < -180.0 || p.lon > 180.0) {
                    std::ostringstream msg;
                    msg << "coordinate out of range at index " << p.index << ": (" << p.lat
                        << ", " << p.lon << ")";
                    add("coordinate-range", tid, msg.str());
                    break;
                }
            }
        }
    }
    return report;
}

TrajectoryView TrajectoryView::of_agent(const AgentDataset& agent) {
    TrajectoryView view;
    for (const auto& traj : agent.trajectories) view.trajs.push_back(&traj);
    if (!view.trajs.empty()) view.length = view.trajs.front()->length();
    return view;
}

TrajectoryView TrajectoryView::of_population(const PopulationDataset& population) {
    TrajectoryView view;
    for (const auto& agent : population.agents)
        for (const auto& traj : agent.trajectories) view.trajs.push_back(&traj);
    if (!view.trajs.empty()) view.length = view.trajs.front()->length();
    return view;
}

TrajectoryView TrajectoryView::of_vector(const std::vector<Trajectory>& trajs) {
    TrajectoryView view;
    for (const auto& traj : trajs) view.trajs.push_back(&traj);
    if (!view.trajs.empty()) view.length = view.trajs.front()->length();
    return view;
}

std::vector<std::string> TrajectoryView::ids() const {
    std::vector<std::string> out;
    out.reserve(trajs.size());
    for (const auto* traj : trajs) out.push_back(traj->id());
    return out;
}

std::string TrajectoryView::fingerprint() const {
    Fnv1a h;
    h.update("trajset");
    h.update_u64(trajs.size());
    h.update_i64(length);
    for (const auto* traj : trajs) {
        h.update(traj->id());
        for (const Point& p : traj->points) {
            h.update_i64(p.index);
            h.update_double(p.lat);
            h.update_double(p.lon);
        }
    }
    return h.hex();
}

} // namespace reebsim
