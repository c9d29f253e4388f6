#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reebsim/dataset.hpp"

namespace reebsim {

// A place an agent dwells at. `day_scatter` > 0 re-draws the realized site
// position once per day within a disc of that radius, modelling day-to-day
// variation larger than the per-sample GPS noise (parking spots, desks).
struct SynthSite {
    LatLon center;
    double day_scatter = 0.0;
};

// Dwell at `site` for indices [arrive, depart). Travel between consecutive
// stops is linear interpolation; before the first stop and after the last the
// agent holds at that stop's site.
struct SynthStop {
    int site = 0;
    int arrive = 0;
    int depart = 0;
};

struct SynthDayPlan {
    std::vector<SynthStop> stops;
};

struct SynthAgentSpec {
    std::string agent_id;
    std::vector<SynthSite> sites;
    std::vector<SynthDayPlan> days;
};

struct SynthSpec {
    int length = 288;
    double noise_sigma = 0.0; // gaussian per-sample position noise, degrees
    double sample_minutes = 5.0;
    std::vector<SynthAgentSpec> agents;
};

// Deterministic synthetic dataset generator: a pure function of (spec, seed).
// Rejects noise_sigma >= config.epsilon, which would destroy the bundle
// structure the spec promises by construction.
PopulationDataset synth_generate(const SynthSpec& spec, const Config& config,
                                 std::uint64_t seed);

// Options for the procedural commute world used by the CLI and tests:
// homes on a ring around a shared downtown, a few shared work sites, and a
// mix of day plans (commute / errand / leisure / stay-home) with jittered
// departure times.
struct CommuteWorldOptions {
    int agents = 4;
    int days = 7;
    int length = 288;
    double noise_sigma = 1e-4;
    double site_scatter = 0.0;  // per-day site scatter radius, degrees
    bool uniform_days = false;  // all days plain commutes with small jitter
    LatLon center{33.75, -84.39};
};

SynthSpec make_commute_world(const CommuteWorldOptions& options, std::uint64_t seed);

} // namespace reebsim
