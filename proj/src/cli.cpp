#include "reebsim/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "reebsim/generation.hpp"
#include "reebsim/hybrid.hpp"
#include "reebsim/io.hpp"
#include "reebsim/metrics.hpp"
#include "reebsim/reeb.hpp"
#include "reebsim/synth.hpp"

namespace reebsim {

namespace {

struct ConfigFlags {
    Config config;
    bool movement_threshold_set = false;

    void attach(CLI::App* cmd, bool with_beta = false, bool with_eval = false) {
        cmd->add_option("--epsilon", config.epsilon, "bundle distance threshold")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option_function<std::string>(
               "--metric",
               [this](const std::string& name) { config.metric = metric_from_name(name); },
               "distance metric: euclidean-degrees or haversine-meters")
            ->check(CLI::IsMember({"euclidean-degrees", "haversine-meters"}))
            ->default_str("euclidean-degrees");
        cmd->add_option("--seed", config.seed, "64-bit RNG seed")->capture_default_str();
        if (with_beta) {
            cmd->add_option("--beta", config.beta, "SRG-internal edge boost factor (>= 1)")
                ->check(CLI::Range(1.0, 1e12))
                ->capture_default_str();
        }
        if (with_eval) {
            cmd->add_option("--grid-dim", config.grid_dim, "activity grid dimension")
                ->check(CLI::PositiveNumber)
                ->capture_default_str();
            cmd->add_option("--bins", config.histogram_bins, "histogram bin count")
                ->check(CLI::Range(2, 1 << 20))
                ->capture_default_str();
            cmd->add_option("--movement-threshold", config.movement_threshold,
                            "step distance below which a sample is stationary "
                            "(default: epsilon / 10)")
                ->check(CLI::NonNegativeNumber)
                ->each([this](const std::string&) { movement_threshold_set = true; });
        }
    }

    Config resolve() {
        if (!movement_threshold_set) config.movement_threshold = config.epsilon / 10.0;
        config.validate();
        return config;
    }
};

// Generates `days` per agent. SRG/HRG graphs carry their agent; a MARG
// generates every agent present in the donor dataset.
PopulationDataset generate_population(const std::vector<ReebGraph>& graphs,
                                      const PopulationDataset& donors_data, int days,
                                      std::uint64_t seed, bool permissive) {
    const TrajectoryView donors = TrajectoryView::of_population(donors_data);
    PopulationDataset out;
    out.sample_minutes = donors_data.sample_minutes;

    auto endpoint_of = [&donors_data](const std::string& agent_id) -> std::optional<LatLon> {
        const AgentDataset* agent = donors_data.find_agent(agent_id);
        if (agent == nullptr || agent->trajectories.empty()) return std::nullopt;
        return agent->trajectories.back().points.back().pos();
    };

    auto run_session = [&](const ReebGraph& g, const std::string& agent_id) {
        GenerateOptions options;
        options.permissive = permissive;
        GenerationSession session(
            g, donors, derive_seed(seed, "gen|" + agent_id + "|" + role_name(g.role)),
            endpoint_of(agent_id), options);
        AgentDataset agent;
        agent.agent_id = agent_id;
        int day = 0;
        for (const GeneratedTrajectory& t : session.generate_days(days))
            agent.trajectories.push_back(to_trajectory(t, agent_id, day++));
        out.agents.push_back(std::move(agent));
    };

    for (const ReebGraph& g : graphs) {
        if (!g.provenance.agent_id.empty()) {
            run_session(g, g.provenance.agent_id);
        } else {
            for (const AgentDataset& agent : donors_data.agents) run_session(g, agent.agent_id);
        }
    }
    std::sort(out.agents.begin(), out.agents.end(),
              [](const AgentDataset& a, const AgentDataset& b) {
                  return a.agent_id < b.agent_id;
              });
    for (std::size_t i = 1; i < out.agents.size(); ++i) {
        if (out.agents[i].agent_id == out.agents[i - 1].agent_id)
            raise(ErrorCode::Config,
                  "two graphs generate the same agent: " + out.agents[i].agent_id);
    }
    return out;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Markovian Reeb graph trajectory modeling"};
    app.require_subcommand(1);

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "check a dataset against its invariants");
    std::string validate_data;
    validate_cmd->add_option("--data", validate_data, "dataset CSV")->required();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic commute dataset");
    ConfigFlags synth_flags;
    CommuteWorldOptions world;
    std::string synth_out;
    double synth_sigma = -1.0;
    synth_cmd->add_option("--out", synth_out, "output dataset CSV")->required();
    synth_cmd->add_option("--agents", world.agents, "agent count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--days", world.days, "days per agent")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--length", world.length, "samples per day")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--sigma", synth_sigma, "per-sample position noise, degrees "
                                                  "(default: epsilon / 10)");
    synth_cmd->add_option("--scatter", world.site_scatter,
                          "per-day site scatter radius, degrees")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth_cmd->add_flag("--uniform-days", world.uniform_days,
                        "plain commute every day (no errand/leisure/home days)");
    synth_flags.attach(synth_cmd);

    // build-srg
    auto* srg_cmd = app.add_subcommand("build-srg", "build one agent's Sequential Reeb Graph");
    ConfigFlags srg_flags;
    std::string srg_data, srg_agent, srg_out;
    srg_cmd->add_option("--data", srg_data, "dataset CSV")->required();
    srg_cmd->add_option("--agent", srg_agent, "agent id")->required();
    srg_cmd->add_option("--out", srg_out, "output graph JSON")->required();
    srg_flags.attach(srg_cmd);

    // build-marg
    auto* marg_cmd = app.add_subcommand("build-marg", "build the population Multi-Agent Reeb Graph");
    ConfigFlags marg_flags;
    std::string marg_data, marg_out;
    marg_cmd->add_option("--data", marg_data, "dataset CSV")->required();
    marg_cmd->add_option("--out", marg_out, "output graph JSON")->required();
    marg_flags.attach(marg_cmd);

    // build-hrg
    auto* hrg_cmd = app.add_subcommand("build-hrg", "fuse an SRG with a MARG into a Hybrid Reeb Graph");
    ConfigFlags hrg_flags;
    std::string hrg_srg, hrg_marg, hrg_out;
    hrg_cmd->add_option("--srg", hrg_srg, "agent SRG JSON")->required();
    hrg_cmd->add_option("--marg", hrg_marg, "population MARG JSON")->required();
    hrg_cmd->add_option("--out", hrg_out, "output graph JSON")->required();
    hrg_flags.attach(hrg_cmd, /*with_beta=*/true);

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "generate trajectories from built graphs");
    ConfigFlags gen_flags;
    std::vector<std::string> gen_graphs;
    std::string gen_data, gen_out;
    int gen_days = 1;
    bool gen_permissive = false;
    gen_cmd->add_option("--graph", gen_graphs, "graph JSON (repeatable)")->required();
    gen_cmd->add_option("--data", gen_data, "donor dataset CSV (the graphs' source data)")
        ->required();
    gen_cmd->add_option("--out", gen_out, "output dataset CSV")->required();
    gen_cmd->add_option("--days", gen_days, "days to generate per agent")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    gen_cmd->add_flag("--permissive", gen_permissive,
                      "retry short traversals instead of failing");
    gen_flags.attach(gen_cmd);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "six-metric JSD report: generated vs baseline");
    ConfigFlags eval_flags;
    std::string eval_baseline, eval_generated, eval_out;
    eval_cmd->add_option("--baseline", eval_baseline, "baseline dataset CSV")->required();
    eval_cmd->add_option("--generated", eval_generated, "generated dataset CSV")->required();
    eval_cmd->add_option("--out", eval_out, "also write the report as CSV");
    eval_flags.attach(eval_cmd, /*with_beta=*/false, /*with_eval=*/true);

    // export-geojson
    auto* geo_cmd = app.add_subcommand("export-geojson", "export a graph for map viewers");
    std::string geo_graph, geo_out;
    geo_cmd->add_option("--graph", geo_graph, "graph JSON")->required();
    geo_cmd->add_option("--out", geo_out, "output GeoJSON")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (validate_cmd->parsed()) {
            const PopulationDataset data = [&] {
                std::ifstream in(validate_data);
                if (!in) raise(ErrorCode::Io, "cannot open dataset file: " + validate_data);
                return parse_dataset(in);
            }();
            // parse_dataset validates; re-run for the printed report
            const ValidationReport report = validate_dataset(data);
            std::cout << report.to_string();
            return report.ok() ? 0 : 1;
        }
        if (synth_cmd->parsed()) {
            const Config config = synth_flags.resolve();
            world.noise_sigma = synth_sigma >= 0.0 ? synth_sigma : config.epsilon / 10.0;
            const SynthSpec spec = make_commute_world(world, config.seed);
            const PopulationDataset data = synth_generate(spec, config, config.seed);
            write_dataset_file(data, synth_out);
            std::cout << "wrote " << data.agents.size() << " agents x "
                      << data.agents.front().trajectories.size() << " days to " << synth_out
                      << "\n";
            return 0;
        }
        if (srg_cmd->parsed()) {
            const Config config = srg_flags.resolve();
            const PopulationDataset data = parse_dataset_file(srg_data);
            const ReebGraph g = build_srg_for_agent(data, srg_agent, config);
            save_graph(g, srg_out);
            std::cout << "srg: " << g.nodes.size() << " nodes, " << g.edges.size()
                      << " edges -> " << srg_out << "\n";
            return 0;
        }
        if (marg_cmd->parsed()) {
            const Config config = marg_flags.resolve();
            const PopulationDataset data = parse_dataset_file(marg_data);
            const ReebGraph g = build_marg(data, config);
            save_graph(g, marg_out);
            std::cout << "marg: " << g.nodes.size() << " nodes, " << g.edges.size()
                      << " edges -> " << marg_out << "\n";
            return 0;
        }
        if (hrg_cmd->parsed()) {
            const Config config = hrg_flags.resolve();
            const ReebGraph srg = load_graph(hrg_srg);
            const ReebGraph marg = load_graph(hrg_marg);
            Config fuse_config = config;
            fuse_config.epsilon = srg.provenance.epsilon;
            fuse_config.metric = srg.provenance.metric;
            const ReebGraph h = build_hrg(srg, marg, config.beta, fuse_config);
            save_graph(h, hrg_out);
            std::cout << "hrg: " << h.nodes.size() << " nodes, " << h.edges.size()
                      << " edges, " << h.srg_marked.size() << " srg-marked -> " << hrg_out
                      << "\n";
            return 0;
        }
        if (gen_cmd->parsed()) {
            const Config config = gen_flags.resolve();
            const PopulationDataset donors = parse_dataset_file(gen_data);
            std::vector<ReebGraph> graphs;
            graphs.reserve(gen_graphs.size());
            for (const std::string& path : gen_graphs) graphs.push_back(load_graph(path));
            const PopulationDataset generated =
                generate_population(graphs, donors, gen_days, config.seed, gen_permissive);
            write_dataset_file(generated, gen_out);
            std::cout << "generated " << generated.agents.size() << " agents x " << gen_days
                      << " days to " << gen_out << "\n";
            return 0;
        }
        if (eval_cmd->parsed()) {
            const Config config = eval_flags.resolve();
            const PopulationDataset baseline = parse_dataset_file(eval_baseline);
            const PopulationDataset generated = parse_dataset_file(eval_generated);
            const EvaluationReport report = evaluate_all(baseline, generated, config);
            std::cout << format_report_table(report);
            if (!eval_out.empty()) {
                std::ofstream out(eval_out);
                if (!out) raise(ErrorCode::Io, "cannot open output file: " + eval_out);
                write_report_csv(report, out);
            }
            return 0;
        }
        if (geo_cmd->parsed()) {
            const ReebGraph g = load_graph(geo_graph);
            export_geojson_file(g, geo_out);
            std::cout << "wrote " << (g.nodes.size() + g.edges.size()) << " features to "
                      << geo_out << "\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "{\"error\":\"" << e.code_name() << "\",\"message\":"
                  << nlohmann::json(std::string(e.what())).dump() << "}\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"internal\",\"message\":"
                  << nlohmann::json(std::string(e.what())).dump() << "}\n";
        return 1;
    }
    return 0;
}

} // namespace reebsim
