#include "commands.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "trade/errors.hpp"
#include "trade/evaluator.hpp"
#include "trade/ingest.hpp"
#include "trade/pipeline.hpp"
#include "trade/synthworld.hpp"
#include "trade/text_io.hpp"

namespace trade::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Output files of one command, name -> contents, written atomically.
using Outputs = std::map<std::string, std::string>;

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string absolute_path(const std::string& p) { return fs::weakly_canonical(fs::absolute(p)).string(); }

std::string cell(double v) { return std::isnan(v) ? std::string("nan") : text::format_double(v); }

json summary_document(const RunSummary& s, const PipelineConfig& c) {
    auto j = summary_to_json(s);
    j["mode"] = std::string(to_string(c.mode));
    j["n"] = c.tracklet_config().max_len;
    return j;
}

Outputs execute_gen(const json& spec) {
    const auto world = synth::WorldConfig::from_json(spec.at("world"));
    const auto data = synth::generate(world);
    return {{files::kDetections, serialize_detections(data.detections)},
            {files::kGroundTruth, serialize_ground_truth(data.ground_truth)},
            {files::kEmbeddings, serialize_embeddings(data.embeddings)},
            {files::kScores, serialize_scores(data.scores)},
            {files::kQueries, serialize_queries(data.queries)}};
}

Outputs execute_run(const json& spec) {
    const auto config = PipelineConfig::from_json(spec.at("pipeline"));
    const auto data = load_dataset(spec.at("data_dir").get<std::string>());
    const auto result = run(config, data);
    EvalCurve curve;
    const auto summary = summarize(result.records, data.ground_truth, result.betas, &curve);
    return {{run_files::kGalleries, serialize_galleries(result)},
            {run_files::kSearches, serialize_searches(result)},
            {run_files::kCandidates, serialize_candidates(result)},
            {run_files::kAlerts, serialize_alerts(result)},
            {run_files::kCurve, serialize_curve(curve)},
            {run_files::kSummary, dump(summary_document(summary, config))}};
}

Outputs execute_eval(const json& spec) {
    const fs::path run_dir = spec.at("run_dir").get<std::string>();
    const auto run_manifest = json::parse(text::read_file(run_dir / kManifest));
    const auto config = PipelineConfig::from_json(run_manifest.at("spec").at("pipeline"));
    const auto gt = load_ground_truth(fs::path(spec.at("data_dir").get<std::string>()) / files::kGroundTruth);
    const auto records = load_search_records(run_dir);
    const auto betas = beta_grid(config.beta_step);
    EvalCurve curve;
    const auto summary = summarize(records, gt, betas, &curve);
    return {{run_files::kCurve, serialize_curve(curve)}, {run_files::kSummary, dump(summary_document(summary, config))}};
}

/// Runs `configs` concurrently; an exception names the failing label.
std::vector<RunSummary> run_many(const Dataset& data, const std::vector<PipelineConfig>& configs,
                                 const std::vector<std::string>& labels) {
    std::vector<std::future<RunSummary>> jobs;
    for (const auto& c : configs) {
        jobs.push_back(std::async(std::launch::async, [&data, c] {
            const auto result = run(c, data);
            return summarize(result.records, data.ground_truth, result.betas);
        }));
    }
    std::vector<RunSummary> out;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        try {
            out.push_back(jobs[i].get());
        } catch (const ValidationError& e) {
            throw ValidationError(labels[i] + ": " + e.what());
        } catch (const std::exception& e) {
            throw std::runtime_error(labels[i] + ": " + e.what());
        }
    }
    return out;
}

std::string summary_cells(const RunSummary& s) {
    return cell(s.fr_at_star) + ',' + cell(s.tvr_at_star) + ',' + cell(s.f1_star) + ',' + cell(s.beta_star) + ',' +
           cell(s.map) + ',' + cell(s.per_query_f1_star_mean) + ',' + cell(s.per_query_map_mean) + ',' +
           std::to_string(s.work.gallery_total) + ',' + std::to_string(s.work.similarity_ops);
}

constexpr const char* kSummaryColumns =
    "fr,tvr,f1_star,beta_star,map,per_query_f1_star_mean,per_query_map_mean,gallery_total,similarity_ops";

Outputs execute_sweep(const json& spec) {
    const auto base = PipelineConfig::from_json(spec.at("pipeline"));
    const auto data = load_dataset(spec.at("data_dir").get<std::string>());
    const auto n_values = spec.at("n_values").get<std::vector<std::size_t>>();
    std::vector<PipelineConfig> configs;
    std::vector<std::string> labels;
    for (auto n : n_values) {
        auto c = base;
        c.n = n;
        configs.push_back(c);
        labels.push_back("sweep failed at N=" + std::to_string(n));
    }
    const auto summaries = run_many(data, configs, labels);
    std::string table = std::string("n,") + kSummaryColumns + "\n";
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        table += std::to_string(n_values[i]) + ',' + summary_cells(summaries[i]) + '\n';
    }
    return {{"sweep.csv", table}};
}

Outputs execute_compare(const json& spec) {
    const auto base = PipelineConfig::from_json(spec.at("pipeline"));
    const auto data = load_dataset(spec.at("data_dir").get<std::string>());
    std::vector<PipelineConfig> configs;
    std::vector<std::string> labels;
    for (const auto& m : spec.at("modes").get<std::vector<std::string>>()) {
        auto c = base;
        c.mode = parse_gallery_mode(m);
        configs.push_back(c);
        labels.push_back("compare failed for mode " + m);
    }
    const auto summaries = run_many(data, configs, labels);
    std::string table = std::string("mode,n,") + kSummaryColumns + "\n";
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto n = configs[i].tracklet_config().max_len;
        table += std::string(to_string(configs[i].mode)) + ',' + std::to_string(n) + ',' + summary_cells(summaries[i]) +
                 '\n';
    }
    return {{"compare.csv", table}};
}

const std::map<std::string, std::function<Outputs(const json&)>>& executors() {
    static const std::map<std::string, std::function<Outputs(const json&)>> table{
        {"gen", execute_gen},         {"run", execute_run},         {"eval", execute_eval},
        {"sweep-n", execute_sweep},   {"compare", execute_compare},
    };
    return table;
}

json write_outputs(const fs::path& out_dir, const std::string& command, const json& spec, const Outputs& outputs) {
    fs::create_directories(out_dir);
    json hashes = json::object();
    for (const auto& [name, contents] : outputs) {
        text::write_file_atomic(out_dir / name, contents);
        hashes[name] = fnv1a_hex(contents);
    }
    json manifest{{"format_version", kFormatVersion}, {"command", command}, {"spec", spec}, {"outputs", hashes}};
    text::write_file_atomic(out_dir / kManifest, dump(manifest));
    return manifest;
}

int execute(const std::string& command, const json& spec, const std::string& out_dir) {
    const auto outputs = executors().at(command)(spec);
    write_outputs(out_dir, command, spec, outputs);
    for (const auto& [name, contents] : outputs) {
        if (name == "sweep.csv" || name == "compare.csv") std::cout << contents;
    }
    return 0;
}

int replay(const std::string& manifest_path, const std::string& out_dir) {
    const auto manifest = json::parse(text::read_file(manifest_path));
    if (manifest.value("format_version", 0) != kFormatVersion) {
        throw ValidationError("unsupported manifest format version");
    }
    const auto command = manifest.at("command").get<std::string>();
    if (!executors().contains(command)) throw ValidationError("manifest names unknown command '" + command + "'");
    const auto outputs = executors().at(command)(manifest.at("spec"));
    const auto written = write_outputs(out_dir, command, manifest.at("spec"), outputs);
    if (written.at("outputs") != manifest.at("outputs")) {
        std::cerr << "replay produced outputs that differ from the manifest\n";
        return 2;
    }
    std::cout << "replayed '" << command << "': " << outputs.size() << " files identical\n";
    return 0;
}

/// Pipeline flags shared by run, sweep-n and compare.
void add_pipeline_flags(CLI::App* app, PipelineConfig& c) {
    app->add_option("--n", c.n, "Maximum tracklet length and detector period")->check(CLI::PositiveNumber);
    app->add_option("--tau", c.tau, "Frames per chunk")->check(CLI::PositiveNumber);
    app->add_option("--eta", c.eta, "Candidates presented per alert")->check(CLI::PositiveNumber);
    app->add_option("--beta-step", c.beta_step, "Alert threshold grid step");
    app->add_option("--scorer", c.scorer, "heuristic | table | constant");
    app->add_option("--tracker", c.tracker, "greedy-iou");
    app->add_option("--seed", c.seed, "Recorded run seed");
    app->add_option("--min-conf", c.min_confidence, "Detection confidence filter");
    app->add_option("--iou-threshold", c.iou_match_threshold, "Tracker IoU match threshold");
    app->add_option("--frame-width", c.heuristic.frame_width, "Frame width for the heuristic scorer");
    app->add_option("--frame-height", c.heuristic.frame_height, "Frame height for the heuristic scorer");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (auto part : text::split(s)) {
        if (!part.empty()) out.emplace_back(part);
    }
    return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Live person re-identification with bounded tracklets and anomaly-based gallery selection", "trade"};
    app.require_subcommand(1);

    std::string out_dir;
    std::string data_dir;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a seeded synthetic dataset");
    std::string preset = "default";
    std::uint64_t world_seed = 0;
    std::vector<std::string> overrides;
    gen->add_option("--preset", preset, "default | persistent | sparse | crossing");
    gen->add_option("--seed", world_seed, "World seed");
    gen->add_option("--set", overrides, "Override a world parameter, key=value (repeatable)");
    gen->add_option("--out-dir", out_dir, "Output directory")->required();

    // run
    PipelineConfig run_config;
    std::string mode;
    auto* run_cmd = app.add_subcommand("run", "Run one gallery-generation mode and evaluate it");
    run_cmd->add_option("--data-dir", data_dir, "Dataset directory")->required();
    run_cmd->add_option("--mode", mode, "baseline | skip | trade")->required();
    add_pipeline_flags(run_cmd, run_config);
    run_cmd->add_option("--out-dir", out_dir, "Output directory")->required();

    // eval
    std::string run_dir;
    auto* eval_cmd = app.add_subcommand("eval", "Recompute metrics from a stored run");
    eval_cmd->add_option("--run-dir", run_dir, "Directory written by `run`")->required();
    eval_cmd->add_option("--data-dir", data_dir, "Dataset directory (default: the run's)");
    eval_cmd->add_option("--out-dir", out_dir, "Output directory")->required();

    // sweep-n
    PipelineConfig sweep_config;
    std::string n_values = "1,5,10,20,40,80";
    auto* sweep = app.add_subcommand("sweep-n", "Run TrADe for several maximum tracklet lengths");
    sweep->add_option("--data-dir", data_dir, "Dataset directory")->required();
    sweep->add_option("--n-values", n_values, "Comma-separated N values");
    add_pipeline_flags(sweep, sweep_config);
    sweep->add_option("--out-dir", out_dir, "Output directory")->required();

    // compare
    PipelineConfig compare_config;
    std::string modes;
    auto* compare = app.add_subcommand("compare", "Side-by-side metrics of several modes on one dataset");
    compare->add_option("--data-dir", data_dir, "Dataset directory")->required();
    compare->add_option("--modes", modes, "Comma-separated modes, e.g. baseline,skip,trade")->required();
    add_pipeline_flags(compare, compare_config);
    compare->add_option("--out-dir", out_dir, "Output directory")->required();

    // replay
    std::string manifest_path;
    auto* replay_cmd = app.add_subcommand("replay", "Re-run a command from its manifest and verify the outputs");
    replay_cmd->add_option("--manifest", manifest_path, "manifest.json of a previous command")->required();
    replay_cmd->add_option("--out-dir", out_dir, "Output directory")->required();

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*gen) {
            auto world = synth::preset(preset, world_seed).to_json();
            for (const auto& kv : overrides) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
                const auto key = kv.substr(0, eq);
                if (!world.contains(key)) throw ConfigError("unknown world parameter '" + key + "'");
                try {
                    world[key] = json::parse(kv.substr(eq + 1));
                } catch (const json::parse_error&) {
                    throw ConfigError("value for '" + key + "' is not a number");
                }
            }
            world = synth::WorldConfig::from_json(world).to_json();
            return execute("gen", {{"preset", preset}, {"world", world}}, out_dir);
        }
        if (*run_cmd) {
            run_config.mode = parse_gallery_mode(mode);
            run_config.validate();
            return execute("run", {{"data_dir", absolute_path(data_dir)}, {"pipeline", run_config.to_json()}}, out_dir);
        }
        if (*eval_cmd) {
            if (data_dir.empty()) {
                const auto m = json::parse(text::read_file(fs::path(run_dir) / kManifest));
                data_dir = m.at("spec").at("data_dir").get<std::string>();
            }
            return execute("eval", {{"run_dir", absolute_path(run_dir)}, {"data_dir", absolute_path(data_dir)}},
                           out_dir);
        }
        if (*sweep) {
            std::vector<std::size_t> ns;
            for (const auto& v : split_list(n_values)) {
                try {
                    const auto n = text::parse_int(v);
                    if (n < 1) throw std::invalid_argument("N must be positive");
                    ns.push_back(static_cast<std::size_t>(n));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("--n-values: ") + e.what());
                }
            }
            if (ns.empty()) throw ConfigError("--n-values is empty");
            sweep_config.mode = GalleryMode::TrADe;
            sweep_config.validate();
            return execute("sweep-n",
                           {{"data_dir", absolute_path(data_dir)}, {"pipeline", sweep_config.to_json()}, {"n_values", ns}},
                           out_dir);
        }
        if (*compare) {
            auto list = split_list(modes);
            if (list.empty()) throw ConfigError("--modes is empty");
            for (auto& m : list) m = std::string(to_string(parse_gallery_mode(m)));
            compare_config.validate();
            return execute("compare",
                           {{"data_dir", absolute_path(data_dir)}, {"pipeline", compare_config.to_json()}, {"modes", list}},
                           out_dir);
        }
        if (*replay_cmd) return replay(manifest_path, out_dir);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const GenerationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed manifest or config: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace trade::cli
