#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "reebsim/dataset.hpp"

namespace reebsim::test {

// Trajectory with the given latitudes and a fixed longitude.
inline Trajectory traj_of_lats(const std::string& agent, int day,
                               const std::vector<double>& lats, double lon = 10.0) {
    Trajectory t;
    t.agent_id = agent;
    t.day = day;
    for (std::size_t i = 0; i < lats.size(); ++i)
        t.points.push_back({static_cast<int>(i), lats[i], lon});
    return t;
}

inline Trajectory constant_traj(const std::string& agent, int day, int length, double lat,
                                double lon) {
    Trajectory t;
    t.agent_id = agent;
    t.day = day;
    for (int i = 0; i < length; ++i) t.points.push_back({i, lat, lon});
    return t;
}

inline PopulationDataset population_of(std::vector<Trajectory> trajs,
                                       double sample_minutes = 5.0) {
    PopulationDataset data;
    data.sample_minutes = sample_minutes;
    for (Trajectory& t : trajs) {
        AgentDataset* agent = nullptr;
        for (auto& a : data.agents)
            if (a.agent_id == t.agent_id) agent = &a;
        if (agent == nullptr) {
            data.agents.push_back({t.agent_id, {}});
            agent = &data.agents.back();
        }
        agent->trajectories.push_back(std::move(t));
    }
    return data;
}

class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() /
                ("reebsim_test_" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline std::string golden_path(const std::string& name) {
    return std::string(REEBSIM_TEST_DIR) + "/golden/" + name;
}

inline std::string fixture_path(const std::string& name) {
    return std::string(REEBSIM_TEST_DIR) + "/fixtures/" + name;
}

} // namespace reebsim::test
