#pragma once

#include <string>
#include <vector>

#include "reebsim/dataset.hpp"

namespace reebsim {

// Uniform-bin histogram over [lo, hi]; values on the top edge land in the
// last bin.
struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> counts;

    static Histogram with_range(double lo, double hi, int bins);
    void add(double value);
    double total() const;
    // Probability view; throws ErrorCode::UndefinedInput when total() == 0.
    std::vector<double> normalized() const;
};

Histogram histogram_of(const std::vector<double>& samples, double lo, double hi, int bins);

// Kullback-Leibler divergence, base-2 logs. Inputs are probability vectors
// over identical bins. p(x) > 0 where q(x) == 0 is a domain error; p(x) == 0
// terms contribute zero.
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);

// Jensen-Shannon divergence against the midpoint mixture, base-2 logs, so the
// value is bounded in [0, 1]. Inputs are nonnegative weight vectors over
// identical bins (normalized internally); an all-zero side is an error.
double jsd(const std::vector<double>& p, const std::vector<double>& q);
double jsd(const Histogram& p, const Histogram& q);

// grid_dim x grid_dim tiling of the AOI bounding box; every point maps to
// exactly one cell (border points clamp inward).
struct GridSpec {
    double min_lat = 0.0, max_lat = 0.0;
    double min_lon = 0.0, max_lon = 0.0;
    int dim = 32;

    static GridSpec bounding(const PopulationDataset& data, int dim);
    int cell_of(double lat, double lon) const;
    int cell_count() const { return dim * dim; }
};

// Visit counts per cell over all agents, days and indices.
std::vector<double> grid_activity_counts(const PopulationDataset& data, const GridSpec& grid);

// Visit counts restricted to one time index.
std::vector<double> grid_activity_counts_at(const PopulationDataset& data,
                                            const GridSpec& grid, int index);

double average_grid_activity_jsd(const PopulationDataset& a, const PopulationDataset& b,
                                 const GridSpec& grid);

// Mean of per-index grid JSDs; indices empty on both sides are skipped.
double temporal_grid_activity_jsd(const PopulationDataset& a, const PopulationDataset& b,
                                  const GridSpec& grid);

// Per agent-day average distance per step while in motion (step distance
// above config.movement_threshold). Agent-days that never move contribute no
// sample.
std::vector<double> rate_of_movement_samples(const PopulationDataset& data,
                                             const Config& config);

// Per agent-day minutes spent moving: in-motion step count times the sampling
// interval.
std::vector<double> trip_duration_samples(const PopulationDataset& data,
                                          const Config& config);

Histogram rate_of_movement_distribution(const PopulationDataset& data, const Config& config);
Histogram trip_duration_distribution(const PopulationDataset& data, const Config& config);

enum class AgentQuantity {
    Distance,   // total in-motion distance per day
    TravelTime, // in-motion minutes per day
};

// Per shared agent: JSD between the agent's per-day quantity histograms from
// a and b over shared bin edges; returns the mean over agents. Differing
// agent id sets are a pairing error.
double agent_level_jsd(const PopulationDataset& a, const PopulationDataset& b,
                       AgentQuantity quantity, const Config& config);

struct EvaluationReport {
    double average_grid_activity = 0.0;
    double temporal_grid_activity = 0.0;
    double rate_of_movement = 0.0;
    double trip_duration = 0.0;
    double distance_traveled_by_agent = 0.0;
    double net_travel_time_by_agent = 0.0;

    std::string baseline_fingerprint;
    std::string generated_fingerprint;

    // (name, value) pairs in report row order.
    std::vector<std::pair<std::string, double>> rows() const;
};

// All six JSD metrics of a generated dataset against a baseline. The grid is
// derived from the baseline's bounding box; generated points outside it clamp
// to border cells.
EvaluationReport evaluate_all(const PopulationDataset& baseline,
                              const PopulationDataset& generated, const Config& config);

} // namespace reebsim
