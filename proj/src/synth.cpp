#include "reebsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reebsim/rng.hpp"

namespace reebsim {

namespace {

void check_spec(const SynthSpec& spec, const Config& config) {
    config.validate();
    if (spec.length < 1) raise(ErrorCode::Config, "synth length must be >= 1");
    if (spec.noise_sigma < 0.0) raise(ErrorCode::Config, "noise sigma must be >= 0");
    if (spec.noise_sigma >= config.epsilon) {
        raise(ErrorCode::Config,
              "noise sigma must be below epsilon or the generated dataset has no "
              "bundle structure");
    }
    if (spec.agents.empty()) raise(ErrorCode::Config, "synth spec has no agents");
    for (const auto& agent : spec.agents) {
        if (agent.agent_id.empty()) raise(ErrorCode::Config, "agent id must be nonempty");
        if (agent.sites.empty())
            raise(ErrorCode::Config, "agent " + agent.agent_id + " has no sites");
        if (agent.days.empty())
            raise(ErrorCode::Config, "agent " + agent.agent_id + " has no day plans");
        for (std::size_t d = 0; d < agent.days.size(); ++d) {
            const auto& stops = agent.days[d].stops;
            std::ostringstream where;
            where << "agent " << agent.agent_id << " day " << d;
            if (stops.empty()) raise(ErrorCode::Config, where.str() + ": no stops");
            int prev_depart = 0;
            for (std::size_t s = 0; s < stops.size(); ++s) {
                const SynthStop& stop = stops[s];
                if (stop.site < 0 || stop.site >= static_cast<int>(agent.sites.size()))
                    raise(ErrorCode::Config, where.str() + ": stop site out of range");
                if (stop.arrive < 0 || stop.depart > spec.length || stop.arrive >= stop.depart)
                    raise(ErrorCode::Config, where.str() + ": stop window invalid");
                if (s > 0 && stop.arrive < prev_depart)
                    raise(ErrorCode::Config, where.str() + ": stops overlap");
                prev_depart = stop.depart;
            }
        }
    }
}

LatLon lerp(const LatLon& a, const LatLon& b, double t) {
    return {a.lat + (b.lat - a.lat) * t, a.lon + (b.lon - a.lon) * t};
}

// Position at index i given the day's stops and per-day realized site
// positions. Holds at the first site before the first stop and at the last
// site after the last departure.
LatLon plan_position(const std::vector<SynthStop>& stops,
                     const std::vector<LatLon>& sites, int i) {
    const SynthStop& first = stops.front();
    if (i < first.arrive) return sites[first.site];
    for (std::size_t s = 0; s < stops.size(); ++s) {
        const SynthStop& stop = stops[s];
        if (i >= stop.arrive && i < stop.depart) return sites[stop.site];
        if (s + 1 < stops.size()) {
            const SynthStop& next = stops[s + 1];
            if (i >= stop.depart && i < next.arrive) {
                // travel: leaves stop.site after index depart-1, arrives at next.arrive
                const double span = static_cast<double>(next.arrive - (stop.depart - 1));
                const double t = static_cast<double>(i - (stop.depart - 1)) / span;
                return lerp(sites[stop.site], sites[next.site], t);
            }
        }
    }
    return sites[stops.back().site];
}

} // namespace

PopulationDataset synth_generate(const SynthSpec& spec, const Config& config,
                                 std::uint64_t seed) {
    check_spec(spec, config);

    PopulationDataset data;
    data.sample_minutes = spec.sample_minutes;
    for (const auto& agent_spec : spec.agents) {
        Rng rng(derive_seed(seed, "synth|" + agent_spec.agent_id));
        AgentDataset agent;
        agent.agent_id = agent_spec.agent_id;
        for (std::size_t d = 0; d < agent_spec.days.size(); ++d) {
            // realize today's site positions
            std::vector<LatLon> sites;
            sites.reserve(agent_spec.sites.size());
            for (const SynthSite& site : agent_spec.sites) {
                LatLon pos = site.center;
                if (site.day_scatter > 0.0) {
                    const double angle = rng.uniform() * 2.0 * 3.14159265358979323846;
                    const double radius = site.day_scatter * std::sqrt(rng.uniform());
                    pos.lat += radius * std::sin(angle);
                    pos.lon += radius * std::cos(angle);
                }
                sites.push_back(pos);
            }

            Trajectory traj;
            traj.agent_id = agent_spec.agent_id;
            traj.day = static_cast<int>(d);
            traj.points.reserve(spec.length);
            const auto& stops = agent_spec.days[d].stops;
            for (int i = 0; i < spec.length; ++i) {
                LatLon pos = plan_position(stops, sites, i);
                if (spec.noise_sigma > 0.0) {
                    pos.lat += spec.noise_sigma * rng.normal();
                    pos.lon += spec.noise_sigma * rng.normal();
                }
                pos.lat = std::clamp(pos.lat, -90.0, 90.0);
                pos.lon = std::clamp(pos.lon, -180.0, 180.0);
                traj.points.push_back({i, pos.lat, pos.lon});
            }
            agent.trajectories.push_back(std::move(traj));
        }
        data.agents.push_back(std::move(agent));
    }
    std::sort(data.agents.begin(), data.agents.end(),
              [](const AgentDataset& a, const AgentDataset& b) {
                  return a.agent_id < b.agent_id;
              });
    return data;
}

namespace {

std::string padded_agent_id(int i) {
    std::ostringstream out;
    out << "agent_";
    if (i < 100) out << "0";
    if (i < 10) out << "0";
    out << i;
    return out.str();
}

int travel_steps(const LatLon& a, const LatLon& b) {
    // roughly 0.005 degrees covered per step
    const double dist = euclidean_degrees(a, b);
    return std::clamp(static_cast<int>(std::lround(dist / 0.005)), 2, 20);
}

} // namespace

SynthSpec make_commute_world(const CommuteWorldOptions& options, std::uint64_t seed) {
    if (options.agents < 1 || options.days < 1 || options.length < 12)
        raise(ErrorCode::Config, "commute world needs agents >= 1, days >= 1, length >= 12");

    Rng rng(derive_seed(seed, "world"));
    const int L = options.length;
    auto at = [L](double frac) {
        return std::clamp(static_cast<int>(std::lround(frac * L)), 0, L);
    };
    const int jitter_steps = std::max(1, L / 96);
    auto jitter = [&rng, jitter_steps]() {
        return static_cast<int>(rng.uniform_below(2 * jitter_steps + 1)) - jitter_steps;
    };

    // shared sites: one downtown, three work clusters near the center
    const LatLon downtown = options.center;
    std::vector<LatLon> works;
    for (int w = 0; w < 3; ++w) {
        const double angle = 2.0 * 3.14159265358979323846 * (0.1 + w / 3.0);
        works.push_back({options.center.lat + 0.008 * std::sin(angle),
                         options.center.lon + 0.008 * std::cos(angle)});
    }

    SynthSpec spec;
    spec.length = L;
    spec.noise_sigma = options.noise_sigma;

    for (int a = 0; a < options.agents; ++a) {
        SynthAgentSpec agent;
        agent.agent_id = padded_agent_id(a);

        // homes spread on a ring with agent-dependent radius, so commute
        // lengths differ across the population
        const double frac = options.agents > 1
                                ? static_cast<double>(a) / (options.agents - 1)
                                : 0.5;
        const double radius = 0.012 + 0.033 * frac + (rng.uniform() - 0.5) * 0.004;
        const double angle = a * 2.39996322972865332 + rng.uniform() * 0.3;
        const LatLon home{options.center.lat + radius * std::sin(angle),
                          options.center.lon + radius * std::cos(angle)};
        const LatLon work = works[a % 3];

        agent.sites = {
            {home, options.site_scatter},
            {work, options.site_scatter},
            {downtown, options.site_scatter},
        };
        const int kHome = 0, kWork = 1, kDowntown = 2;

        for (int d = 0; d < options.days; ++d) {
            SynthDayPlan plan;
            double type = options.uniform_days ? 0.0 : rng.uniform();
            // always consume the jitter draws so day plans stay aligned
            const int j1 = jitter();
            const int j2 = jitter();

            auto add_stop = [&plan, L](int site, int arrive, int depart) {
                if (!plan.stops.empty())
                    arrive = std::max(arrive, plan.stops.back().depart);
                arrive = std::clamp(arrive, 0, L - 1);
                depart = std::clamp(std::max(depart, arrive + 1), 1, L);
                plan.stops.push_back({site, arrive, depart});
            };

            if (type < 0.55) {
                // plain commute
                const int leave_home = at(0.31) + j1;
                const int leave_work = at(0.71) + j2;
                add_stop(kHome, 0, leave_home);
                add_stop(kWork, leave_home + travel_steps(home, work), leave_work);
                add_stop(kHome, leave_work + travel_steps(work, home), L);
            } else if (type < 0.75) {
                // commute with an errand downtown on the way back
                const int leave_home = at(0.31) + j1;
                const int leave_work = at(0.68) + j2;
                add_stop(kHome, 0, leave_home);
                add_stop(kWork, leave_home + travel_steps(home, work), leave_work);
                const int arrive_dt = plan.stops.back().depart + travel_steps(work, downtown);
                add_stop(kDowntown, arrive_dt, arrive_dt + std::max(2, at(0.06)));
                add_stop(kHome, plan.stops.back().depart + travel_steps(downtown, home), L);
            } else if (type < 0.85) {
                // leisure: late start, downtown only
                const int leave_home = at(0.42) + j1;
                const int leave_dt = at(0.63) + j2;
                add_stop(kHome, 0, leave_home);
                add_stop(kDowntown, leave_home + travel_steps(home, downtown), leave_dt);
                add_stop(kHome, leave_dt + travel_steps(downtown, home), L);
            } else {
                // stay home
                add_stop(kHome, 0, L);
            }
            agent.days.push_back(std::move(plan));
        }
        spec.agents.push_back(std::move(agent));
    }
    return spec;
}

} // namespace reebsim
