#include "reebsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "reebsim/fingerprint.hpp"

namespace reebsim {

Histogram Histogram::with_range(double lo, double hi, int bins) {
    if (bins < 1) raise(ErrorCode::Config, "histogram needs at least one bin");
    Histogram h;
    h.lo = lo;
    h.hi = hi > lo ? hi : lo + 1.0; // degenerate range: everything in bin 0
    h.counts.assign(bins, 0.0);
    return h;
}

void Histogram::add(double value) {
    const int bins = static_cast<int>(counts.size());
    const double t = (value - lo) / (hi - lo);
    int bin = static_cast<int>(t * bins);
    bin = std::clamp(bin, 0, bins - 1);
    counts[bin] += 1.0;
}

double Histogram::total() const {
    double sum = 0.0;
    for (double c : counts) sum += c;
    return sum;
}

std::vector<double> Histogram::normalized() const {
    const double sum = total();
    if (sum <= 0.0)
        raise(ErrorCode::UndefinedInput, "cannot normalize an empty histogram");
    std::vector<double> out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) out[i] = counts[i] / sum;
    return out;
}

Histogram histogram_of(const std::vector<double>& samples, double lo, double hi, int bins) {
    Histogram h = Histogram::with_range(lo, hi, bins);
    for (double s : samples) h.add(s);
    return h;
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        raise(ErrorCode::Config, "KL divergence needs identical bins");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue; // 0 * log(0/q) term is zero
        if (q[i] == 0.0)
            raise(ErrorCode::Domain, "KL divergence support violation: p > 0 where q == 0");
        sum += p[i] * std::log2(p[i] / q[i]);
    }
    return sum;
}

namespace {

std::vector<double> normalize_weights(const std::vector<double>& w) {
    double sum = 0.0;
    for (double v : w) {
        if (v < 0.0) raise(ErrorCode::Domain, "negative weight in distribution");
        sum += v;
    }
    if (sum <= 0.0)
        raise(ErrorCode::UndefinedInput, "all-zero distribution");
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] / sum;
    return out;
}

} // namespace

double jsd(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        raise(ErrorCode::Config, "JSD needs identical bins");
    const std::vector<double> pn = normalize_weights(p);
    const std::vector<double> qn = normalize_weights(q);
    std::vector<double> m(pn.size());
    for (std::size_t i = 0; i < pn.size(); ++i) m[i] = 0.5 * (pn[i] + qn[i]);
    const double value = 0.5 * kl_divergence(pn, m) + 0.5 * kl_divergence(qn, m);
    // base-2 logs bound the value to [0, 1]; clamp float spill only
    return std::clamp(value, 0.0, 1.0);
}

double jsd(const Histogram& p, const Histogram& q) {
    if (p.lo != q.lo || p.hi != q.hi || p.counts.size() != q.counts.size())
        raise(ErrorCode::Config, "JSD needs histograms over shared bin edges");
    return jsd(p.counts, q.counts);
}

GridSpec GridSpec::bounding(const PopulationDataset& data, int dim) {
    if (dim < 1) raise(ErrorCode::Config, "grid dimension must be >= 1");
    GridSpec grid;
    grid.dim = dim;
    grid.min_lat = std::numeric_limits<double>::infinity();
    grid.min_lon = std::numeric_limits<double>::infinity();
    grid.max_lat = -std::numeric_limits<double>::infinity();
    grid.max_lon = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& agent : data.agents) {
        for (const auto& traj : agent.trajectories) {
            for (const Point& p : traj.points) {
                grid.min_lat = std::min(grid.min_lat, p.lat);
                grid.max_lat = std::max(grid.max_lat, p.lat);
                grid.min_lon = std::min(grid.min_lon, p.lon);
                grid.max_lon = std::max(grid.max_lon, p.lon);
                any = true;
            }
        }
    }
    if (!any) raise(ErrorCode::UndefinedInput, "cannot derive an AOI from an empty dataset");
    return grid;
}

int GridSpec::cell_of(double lat, double lon) const {
    auto axis = [this](double v, double lo, double hi) {
        if (hi <= lo) return 0;
        int c = static_cast<int>((v - lo) / (hi - lo) * dim);
        return std::clamp(c, 0, dim - 1); // border and out-of-AOI points clamp
    };
    return axis(lat, min_lat, max_lat) * dim + axis(lon, min_lon, max_lon);
}

std::vector<double> grid_activity_counts(const PopulationDataset& data, const GridSpec& grid) {
    if (data.agents.empty())
        raise(ErrorCode::UndefinedInput, "grid activity of an empty dataset");
    std::vector<double> counts(grid.cell_count(), 0.0);
    for (const auto& agent : data.agents)
        for (const auto& traj : agent.trajectories)
            for (const Point& p : traj.points) counts[grid.cell_of(p.lat, p.lon)] += 1.0;
    return counts;
}

std::vector<double> grid_activity_counts_at(const PopulationDataset& data,
                                            const GridSpec& grid, int index) {
    std::vector<double> counts(grid.cell_count(), 0.0);
    for (const auto& agent : data.agents) {
        for (const auto& traj : agent.trajectories) {
            if (index < traj.length()) {
                const Point& p = traj.points[index];
                counts[grid.cell_of(p.lat, p.lon)] += 1.0;
            }
        }
    }
    return counts;
}

double average_grid_activity_jsd(const PopulationDataset& a, const PopulationDataset& b,
                                 const GridSpec& grid) {
    return jsd(grid_activity_counts(a, grid), grid_activity_counts(b, grid));
}

double temporal_grid_activity_jsd(const PopulationDataset& a, const PopulationDataset& b,
                                  const GridSpec& grid) {
    if (a.length() != b.length())
        raise(ErrorCode::Config, "datasets have different lengths");
    const int L = a.length();
    double sum = 0.0;
    int used = 0;
    for (int i = 0; i < L; ++i) {
        const std::vector<double> pa = grid_activity_counts_at(a, grid, i);
        const std::vector<double> pb = grid_activity_counts_at(b, grid, i);
        double ta = 0.0, tb = 0.0;
        for (double v : pa) ta += v;
        for (double v : pb) tb += v;
        if (ta == 0.0 && tb == 0.0) continue; // both empty: skip the index
        if (ta == 0.0 || tb == 0.0) {
            sum += 1.0; // one side empty: maximally divergent
        } else {
            sum += jsd(pa, pb);
        }
        ++used;
    }
    if (used == 0)
        raise(ErrorCode::UndefinedInput, "no occupied time bins to compare");
    return sum / used;
}

namespace {

struct MotionStats {
    double moving_distance = 0.0;
    int moving_steps = 0;
};

MotionStats motion_stats(const Trajectory& traj, const Config& config) {
    MotionStats stats;
    for (std::size_t i = 0; i + 1 < traj.points.size(); ++i) {
        const double d = distance(traj.points[i].pos(), traj.points[i + 1].pos(),
                                  config.metric);
        if (d > config.movement_threshold) {
            stats.moving_distance += d;
            stats.moving_steps += 1;
        }
    }
    return stats;
}

double day_quantity(const Trajectory& traj, AgentQuantity quantity, const Config& config,
                    double sample_minutes) {
    const MotionStats stats = motion_stats(traj, config);
    switch (quantity) {
    case AgentQuantity::Distance: return stats.moving_distance;
    case AgentQuantity::TravelTime: return stats.moving_steps * sample_minutes;
    }
    raise(ErrorCode::Config, "unknown agent quantity");
}

} // namespace

std::vector<double> rate_of_movement_samples(const PopulationDataset& data,
                                             const Config& config) {
    std::vector<double> samples;
    for (const auto& agent : data.agents) {
        for (const auto& traj : agent.trajectories) {
            const MotionStats stats = motion_stats(traj, config);
            if (stats.moving_steps > 0)
                samples.push_back(stats.moving_distance / stats.moving_steps);
        }
    }
    return samples;
}

std::vector<double> trip_duration_samples(const PopulationDataset& data,
                                          const Config& config) {
    std::vector<double> samples;
    for (const auto& agent : data.agents) {
        for (const auto& traj : agent.trajectories) {
            const MotionStats stats = motion_stats(traj, config);
            samples.push_back(stats.moving_steps * data.sample_minutes);
        }
    }
    return samples;
}

namespace {

Histogram samples_histogram(const std::vector<double>& samples, const Config& config) {
    if (samples.empty())
        raise(ErrorCode::UndefinedInput, "no samples to build a histogram from");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    return histogram_of(samples, *lo, *hi, config.histogram_bins);
}

} // namespace

Histogram rate_of_movement_distribution(const PopulationDataset& data, const Config& config) {
    return samples_histogram(rate_of_movement_samples(data, config), config);
}

Histogram trip_duration_distribution(const PopulationDataset& data, const Config& config) {
    return samples_histogram(trip_duration_samples(data, config), config);
}

namespace {

// JSD between two sample sets over shared bin edges spanning their union.
double shared_bin_jsd(const std::vector<double>& a, const std::vector<double>& b,
                      const Config& config) {
    if (a.empty() || b.empty())
        raise(ErrorCode::UndefinedInput, "cannot compare empty sample sets");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : a) { lo = std::min(lo, v); hi = std::max(hi, v); }
    for (double v : b) { lo = std::min(lo, v); hi = std::max(hi, v); }
    return jsd(histogram_of(a, lo, hi, config.histogram_bins),
               histogram_of(b, lo, hi, config.histogram_bins));
}

std::vector<double> agent_day_quantities(const AgentDataset& agent, AgentQuantity quantity,
                                         const Config& config, double sample_minutes) {
    std::vector<double> values;
    values.reserve(agent.trajectories.size());
    for (const auto& traj : agent.trajectories)
        values.push_back(day_quantity(traj, quantity, config, sample_minutes));
    return values;
}

} // namespace

double agent_level_jsd(const PopulationDataset& a, const PopulationDataset& b,
                       AgentQuantity quantity, const Config& config) {
    if (a.agents.empty() || b.agents.empty())
        raise(ErrorCode::UndefinedInput, "agent-level comparison of an empty dataset");
    if (a.agents.size() != b.agents.size())
        raise(ErrorCode::Pairing, "datasets have different agent counts");
    double sum = 0.0;
    for (const auto& agent_a : a.agents) {
        const AgentDataset* agent_b = b.find_agent(agent_a.agent_id);
        if (agent_b == nullptr)
            raise(ErrorCode::Pairing,
                  "agent " + agent_a.agent_id + " is missing from the second dataset");
        sum += shared_bin_jsd(
            agent_day_quantities(agent_a, quantity, config, a.sample_minutes),
            agent_day_quantities(*agent_b, quantity, config, b.sample_minutes), config);
    }
    return sum / static_cast<double>(a.agents.size());
}

std::vector<std::pair<std::string, double>> EvaluationReport::rows() const {
    return {
        {"average_grid_activity", average_grid_activity},
        {"temporal_grid_activity", temporal_grid_activity},
        {"rate_of_movement", rate_of_movement},
        {"trip_duration", trip_duration},
        {"distance_traveled_by_agent", distance_traveled_by_agent},
        {"net_travel_time_by_agent", net_travel_time_by_agent},
    };
}

EvaluationReport evaluate_all(const PopulationDataset& baseline,
                              const PopulationDataset& generated, const Config& config) {
    config.validate();
    if (baseline.agents.empty() || generated.agents.empty())
        raise(ErrorCode::UndefinedInput, "evaluation needs nonempty datasets");
    if (baseline.length() != generated.length())
        raise(ErrorCode::Config, "datasets have different lengths");

    EvaluationReport report;
    const GridSpec grid = GridSpec::bounding(baseline, config.grid_dim);
    try {
        report.average_grid_activity = average_grid_activity_jsd(baseline, generated, grid);
        report.temporal_grid_activity = temporal_grid_activity_jsd(baseline, generated, grid);
        report.rate_of_movement = shared_bin_jsd(rate_of_movement_samples(baseline, config),
                                                 rate_of_movement_samples(generated, config),
                                                 config);
        report.trip_duration = shared_bin_jsd(trip_duration_samples(baseline, config),
                                              trip_duration_samples(generated, config),
                                              config);
    } catch (const Error& e) {
        throw Error(e.code(), std::string("population-level metric failed: ") + e.what());
    }
    report.distance_traveled_by_agent =
        agent_level_jsd(baseline, generated, AgentQuantity::Distance, config);
    report.net_travel_time_by_agent =
        agent_level_jsd(baseline, generated, AgentQuantity::TravelTime, config);

    report.baseline_fingerprint = TrajectoryView::of_population(baseline).fingerprint();
    report.generated_fingerprint = TrajectoryView::of_population(generated).fingerprint();
    return report;
}

} // namespace reebsim
