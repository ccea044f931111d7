// gridlock: batch CLI for the congestion-from-electricity pipeline.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gridlock/io.hpp"
#include "gridlock/pipeline.hpp"

namespace fs = std::filesystem;
using namespace gridlock;

namespace {

struct Cli {
    PipelineConfig config;
    std::string config_path;
    std::vector<std::string> overrides;  // key=value pairs from --set
};

void finalize_config(Cli& cli) {
    if (!cli.config_path.empty()) {
        std::ifstream in(cli.config_path);
        if (!in) throw ConfigError("cannot open config file: " + cli.config_path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        cli.config = parse_config(text);
    }
    // Flags were recorded as key=value overrides, so they win over the file.
    for (const auto& kv : cli.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        apply_config_key(cli.config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    thread_limit().store(std::max(1, cli.config.threads));
    fs::create_directories(cli.config.output_dir);
}

std::string out_path(const Cli& cli, const std::string& name) {
    return (fs::path(cli.config.output_dir) / name).string();
}

void write_manifest(const Cli& cli, const std::string& command) {
    nlohmann::json manifest = {{"command", command},
                               {"config_hash", config_hash(cli.config)},
                               {"seed", cli.config.seed},
                               {"version", GRIDLOCK_VERSION}};
    write_json(manifest, out_path(cli, "run.json"));
    std::ofstream cfg(out_path(cli, "config.resolved"));
    cfg << serialize_config(cli.config);
}

void require_input(const std::string& path, const std::string& producer) {
    if (!fs::exists(path))
        throw DataError("missing input '" + path + "'; produce it with the `" + producer +
                        "` subcommand or point the config at an existing file");
}

std::vector<TravelTimeSeries> load_travel(const Cli& cli) {
    require_input(cli.config.travel_csv, "synth");
    return load_travel_time_csv(cli.config.travel_csv);
}

ProfilePanel load_panel(const Cli& cli, IngestReport* report = nullptr) {
    require_input(cli.config.electricity_csv, "synth");
    return ingest_panel(cli.config, report);
}

void cmd_synth(Cli& cli, const ScenarioSpec& scenario) {
    ScenarioSpec spec = scenario;
    spec.seed = cli.config.seed;
    const SyntheticData data = generate(spec);
    write_electricity_csv(data.panel, out_path(cli, "electricity.csv"));
    write_travel_time_csv(data.travel, out_path(cli, "travel.csv"));
    write_json(ground_truth_json(data), out_path(cli, "ground_truth.json"));
    write_manifest(cli, "synth");
    std::cout << "synth: wrote " << data.panel.household_count() << " households x "
              << data.panel.day_count() << " days, " << data.travel.size()
              << " segment-days to " << cli.config.output_dir << "\n";
}

void cmd_ingest(Cli& cli) {
    IngestReport report;
    const ProfilePanel panel = load_panel(cli, &report);
    write_electricity_csv(panel, out_path(cli, "electricity_normalized.csv"));
    write_json(to_json(report), out_path(cli, "ingest_report.json"));
    write_manifest(cli, "ingest");
    std::cout << "ingest: retained " << panel.household_count() << " households over "
              << panel.day_count() << " days\n";
}

void cmd_cluster(Cli& cli) {
    const ProfilePanel panel = load_panel(cli);
    const ClusterResult result = cluster_panel(panel, cli.config);
    nlohmann::json model = to_json(result.model);
    if (result.gap) {
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& e : result.gap->entries)
            entries.push_back({{"k", e.k},
                               {"gap", e.gap},
                               {"s_k", e.s_k},
                               {"log_inertia", e.log_inertia},
                               {"expected_log_inertia", e.expected_log_inertia}});
        model["gap_curve"] = {{"entries", entries},
                              {"B", result.gap->B},
                              {"chosen_k", result.gap->chosen_k},
                              {"criterion_met", result.gap->criterion_met}};
    }
    write_json(model, out_path(cli, "pattern_model.json"));
    write_assignments_csv(panel, result.labels, out_path(cli, "assignments.csv"));
    write_manifest(cli, "cluster");
    std::cout << "cluster: K=" << result.model.K << ", inertia "
              << format_double(result.model.inertia) << "\n";
}

void cmd_extract(Cli& cli) {
    const auto by_segment = group_by_segment(load_travel(cli));
    std::vector<CongestionRecord> all;
    for (const auto& [segment_id, series] : by_segment) {
        const auto records = extract_congestion(series, congestion_params(cli.config));
        all.insert(all.end(), records.begin(), records.end());
    }
    write_congestion_csv(all, out_path(cli, "congestion.csv"));
    write_manifest(cli, "extract");
    std::size_t congested = 0;
    for (const auto& r : all)
        if (r.cst) ++congested;
    std::cout << "extract: " << all.size() << " segment-days, " << congested
              << " with congestion\n";
}

void cmd_features(Cli& cli) {
    const ProfilePanel panel = load_panel(cli);
    const ClusterResult result = cluster_panel(panel, cli.config);
    const int K = result.model.K;
    write_feature_csv(aggregate_features(result.labels, panel, K),
                      out_path(cli, "features_aggregate.csv"));
    write_feature_csv(disaggregate_features(result.labels, panel, K),
                      out_path(cli, "features_disaggregate.csv"));
    write_manifest(cli, "features");
    std::cout << "features: wrote aggregate and disaggregate matrices (K=" << K << ")\n";
}

struct Prepared {
    ProfilePanel panel;
    ClusterResult cluster;
    FeatureMatrix agg, disagg;
    std::map<std::string, std::vector<TravelTimeSeries>> by_segment;
    std::map<std::string, std::vector<CongestionRecord>> records;
};

Prepared prepare(Cli& cli) {
    Prepared p;
    p.panel = load_panel(cli);
    p.cluster = cluster_panel(p.panel, cli.config);
    const int K = p.cluster.model.K;
    p.agg = aggregate_features(p.cluster.labels, p.panel, K);
    p.disagg = disaggregate_features(p.cluster.labels, p.panel, K);
    p.by_segment = group_by_segment(load_travel(cli));
    for (const auto& [segment_id, series] : p.by_segment)
        p.records[segment_id] = extract_congestion(series, congestion_params(cli.config));
    return p;
}

void cmd_evaluate(Cli& cli) {
    Prepared p = prepare(cli);
    nlohmann::json segments = nlohmann::json::array();
    for (const auto& [segment_id, series] : p.by_segment) {
        SegmentData seg = align_segment(p.records[segment_id], p.panel.days);
        if (seg.days.size() < static_cast<std::size_t>(cli.config.outer_folds)) {
            segments.push_back({{"segment_id", segment_id},
                                {"skipped", "fewer congested days than outer folds"}});
            continue;
        }
        const auto report = evaluate_segment(cli.config, p.agg, p.disagg, seg, series);
        nlohmann::json j = to_json(report);
        j["segment_id"] = segment_id;
        j["feature_kind"] = cli.config.feature_kind;
        j["target"] = cli.config.target;
        segments.push_back(std::move(j));
    }
    write_json({{"segments", segments}, {"config_hash", config_hash(cli.config)}},
               out_path(cli, "evaluation.json"));
    write_manifest(cli, "evaluate");
    std::cout << "evaluate: " << segments.size() << " segments -> evaluation.json\n";
}

void cmd_compare(Cli& cli) {
    Prepared p = prepare(cli);
    std::ofstream out(out_path(cli, "compare.csv"));
    if (!out) throw DataError("cannot write compare.csv");
    out << "segment_id,method,rmse,mae,coverage\n";
    for (const auto& [segment_id, series] : p.by_segment) {
        SegmentData seg = align_segment(p.records[segment_id], p.panel.days);
        if (seg.days.size() < static_cast<std::size_t>(cli.config.outer_folds)) continue;
        for (const auto& row :
             compare_segment(cli.config, p.agg, p.disagg, seg, p.records[segment_id], series)) {
            out << row.segment_id << ',' << row.method << ',' << format_double(row.rmse) << ','
                << format_double(row.mae) << ',';
            if (row.coverage) out << format_double(*row.coverage);
            out << '\n';
        }
    }
    out.close();
    write_manifest(cli, "compare");
    std::cout << "compare: wrote compare.csv\n";
}

void cmd_similarity(Cli& cli) {
    Prepared p = prepare(cli);
    const int K = p.cluster.model.K;
    std::vector<SelectionProfile> profiles;
    for (const auto& [segment_id, series] : p.by_segment) {
        SegmentData seg = align_segment(p.records[segment_id], p.panel.days);
        if (seg.days.size() < static_cast<std::size_t>(cli.config.inner_folds)) continue;
        const FeatureMatrix X = restrict_days(p.disagg, seg.days);
        const Target target = cli.config.target == "duration" ? Target::duration : Target::cst;
        const Eigen::VectorXd& y = target == Target::duration ? seg.duration : seg.cst;
        const auto grid = make_alpha_grid(X.values, y, cli.config.alpha_grid_size,
                                          cli.config.alpha_grid_span);
        const double alpha = select_alpha(X, y, grid, cli.config.inner_folds,
                                          detail::mix_seed(cli.config.seed, 90), target);
        const auto fit = fit_lasso(X, y, alpha, target);
        profiles.push_back(selection_profile(fit, p.panel.households, K, segment_id, 1e-8));
    }
    const auto matrices = pairwise_similarity(profiles);
    write_similarity_csv(matrices.segment_ids, matrices.jaccard_households,
                         out_path(cli, "similarity_jaccard.csv"));
    write_similarity_csv(matrices.segment_ids, matrices.cosine_patterns,
                         out_path(cli, "similarity_cosine.csv"));
    write_manifest(cli, "similarity");
    std::cout << "similarity: " << profiles.size() << " segments compared\n";
}

void cmd_sweep(Cli& cli) {
    require_input(cli.config.electricity_csv, "synth");
    const auto travel = load_travel(cli);
    const auto rows = run_sweep(cli.config, travel);
    std::ofstream out(out_path(cli, "sweep.csv"));
    if (!out) throw DataError("cannot write sweep.csv");
    out << "end_minute,segment_id,rmse,mae\n";
    for (const auto& r : rows)
        out << r.end_minute << ',' << r.segment_id << ',' << format_double(r.rmse) << ','
            << format_double(r.mae) << '\n';
    out.close();
    write_manifest(cli, "sweep");
    std::cout << "sweep: " << rows.size() << " (cutoff, segment) evaluations\n";
}

void add_common(CLI::App* cmd, Cli& cli) {
    cmd->add_option("--config", cli.config_path, "key=value config file");
    cmd->add_option("--set", cli.overrides, "override a config key (key=value), repeatable");
    // Shorthand flags record themselves as overrides so they beat the file.
    auto alias = [cmd, &cli](const std::string& flag, const std::string& key,
                             const std::string& help) {
        cmd->add_option_function<std::string>(
            flag, [&cli, key](const std::string& v) { cli.overrides.push_back(key + "=" + v); },
            help);
    };
    alias("--electricity", "electricity_csv", "electricity CSV path");
    alias("--travel", "travel_csv", "travel-time CSV path");
    alias("--out", "output_dir", "output directory");
    alias("--seed", "seed", "base RNG seed");
    alias("--threads", "threads", "worker thread cap");
    alias("--feature-kind", "feature_kind", "aggregate|disaggregate|mixed|aggregate+cst");
    alias("--target", "target", "cst|duration");
    alias("--eval-mode", "eval_mode", "nested-cv|fixed-split");
    alias("-K,--clusters", "K", "pattern count (0 = GAP selection)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"congestion prediction from household electricity-use patterns"};
    app.require_subcommand(1);

    Cli cli;
    ScenarioSpec scenario;

    auto* synth = app.add_subcommand("synth", "generate a synthetic joint dataset");
    add_common(synth, cli);
    synth->add_option("--households", scenario.households, "household count");
    synth->add_option("--days", scenario.days, "analysis day count");
    synth->add_option("--k-true", scenario.K_true, "true pattern count");
    synth->add_option("--segments", scenario.segments, "roadway segment count");
    synth->add_flag("--precursor-ramp", scenario.precursor_ramp,
                    "plant a pre-congestion travel-time ramp");

    add_common(app.add_subcommand("ingest", "load, filter, and normalize the electricity panel"),
               cli);
    add_common(app.add_subcommand("cluster", "fit daily-profile patterns"), cli);
    add_common(app.add_subcommand("extract", "extract congestion start times and durations"), cli);
    add_common(app.add_subcommand("features", "build aggregate and disaggregate feature matrices"),
               cli);
    add_common(app.add_subcommand("evaluate", "nested-CV evaluation of the configured predictor"),
               cli);
    add_common(app.add_subcommand("compare", "method comparison table per segment"), cli);
    add_common(app.add_subcommand("similarity", "selection similarity across segments"), cli);
    add_common(app.add_subcommand("sweep", "electricity time-window sensitivity sweep"), cli);

    CLI11_PARSE(app, argc, argv);

    try {
        finalize_config(cli);
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "synth") cmd_synth(cli, scenario);
        else if (name == "ingest") cmd_ingest(cli);
        else if (name == "cluster") cmd_cluster(cli);
        else if (name == "extract") cmd_extract(cli);
        else if (name == "features") cmd_features(cli);
        else if (name == "evaluate") cmd_evaluate(cli);
        else if (name == "compare") cmd_compare(cli);
        else if (name == "similarity") cmd_similarity(cli);
        else if (name == "sweep") cmd_sweep(cli);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const ContractError& e) {
        std::cerr << "internal contract violation: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
