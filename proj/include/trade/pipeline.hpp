#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trade/core.hpp"
#include "trade/evaluator.hpp"
#include "trade/ingest.hpp"
#include "trade/reid.hpp"
#include "trade/selector.hpp"
#include "trade/tracker.hpp"

namespace trade {

struct PipelineConfig {
    GalleryMode mode = GalleryMode::TrADe;
    std::size_t n = 20;        // ignored in Baseline mode
    FrameIndex tau = 1000;     // frames per chunk
    std::size_t eta = 20;      // candidates presented per alert
    double beta_step = 0.02;
    double min_confidence = 0.5;
    std::string scorer = "heuristic";
    std::string tracker = "greedy-iou";
    double iou_match_threshold = 0.3;
    HeuristicScorerConfig heuristic;
    std::uint64_t seed = 0;  // recorded for provenance; the pipeline itself is deterministic

    void validate() const;
    TrackletBuildConfig tracklet_config() const;
    nlohmann::json to_json() const;
    static PipelineConfig from_json(const nlohmann::json& j);
};

/// Consecutive chunks of `tau` frames covering [0, frame_count); the last may be shorter.
std::vector<Chunk> chunk_video(const std::string& video_id, FrameIndex frame_count, FrameIndex tau);

struct ChunkGallery {
    Chunk chunk;
    std::vector<Tracklet> tracklets;
    Gallery gallery;
};

struct RunResult {
    PipelineConfig config;
    std::vector<double> betas;
    std::vector<ChunkGallery> chunks;    // by video, then start frame
    std::vector<SearchRecord> records;   // chunk-major, queries in input order
    Accounting work;

    /// Every (query, chunk) outcome at one threshold, in record order.
    std::vector<AlertOutcome> outcomes_at(double beta) const;
};

/// Chunks every video, builds the mode's galleries, and searches every query
/// in every chunk. Throws ConfigError for an invalid config or zero queries,
/// ValidationError when a gallery crop lacks an embedding.
RunResult run(const PipelineConfig& config, const Dataset& data);

namespace run_files {
inline constexpr const char* kGalleries = "galleries.csv";
inline constexpr const char* kSearches = "searches.csv";
inline constexpr const char* kCandidates = "candidates.csv";
inline constexpr const char* kAlerts = "alerts.csv";
inline constexpr const char* kCurve = "curve.csv";
inline constexpr const char* kSummary = "summary.json";
}  // namespace run_files

std::string serialize_galleries(const RunResult& result);
std::string serialize_searches(const RunResult& result);
std::string serialize_candidates(const RunResult& result);
/// One row per (query, chunk, beta).
std::string serialize_alerts(const RunResult& result);

/// Rebuilds the search records of a stored run from its searches and candidates files.
std::vector<SearchRecord> load_search_records(const std::filesystem::path& run_dir);

}  // namespace trade
