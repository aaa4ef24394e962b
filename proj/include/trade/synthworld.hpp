#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "trade/ingest.hpp"

namespace trade::synth {

/// Parameters of a seeded synthetic surveillance scenario.
///
/// People appear either as persistent walkers that stay in their own column
/// for the whole video, or as transient walkers arriving as a Poisson process.
/// A fraction of transient arrivals come as crossing pairs that walk towards
/// each other along the same line, which occludes one of them and pressures the
/// tracker into label switches.
struct WorldConfig {
    std::uint64_t seed = 0;

    std::size_t n_identities = 60;
    std::size_t n_videos = 6;
    FrameIndex frames_per_video = 3000;
    double frame_width = 1280.0;
    double frame_height = 720.0;

    std::size_t persistent_persons = 0;
    double entry_rate = 0.02;  // expected transient arrivals per frame
    FrameIndex min_visible = 40;
    FrameIndex max_visible = 400;
    double max_speed = 6.0;  // pixels per frame
    double box_height_min = 140.0;
    double box_height_max = 220.0;

    double crossing_rate = 0.3;   // probability that an arrival is a crossing pair
    double occlusion_iou = 0.3;   // overlap above which the rear walker may vanish
    double occlusion_miss = 0.8;  // miss probability of the rear walker when occluded

    double miss_probability = 0.05;
    double jitter_sigma = 2.0;  // pixels
    double p_bad = 0.3;
    double bad_lambda = 0.9;         // weight of the random direction in a bad crop's embedding
    double scorer_fidelity = 0.9;    // q: P(bad crop scores below a clean crop)
    double clutter_rate = 0.5;       // sub-threshold detections per frame
    double false_positive_rate = 0.1;   // above-threshold background detections per frame

    std::size_t embedding_dim = 32;
    double embedding_noise = 0.7;     // norm scale of the per-appearance feature offset (pose, lighting, camera)
    double frame_noise = 0.2;         // norm scale of the per-crop offset within one appearance
    double shared_component = 1.0;    // weight of the generic person direction in every identity anchor
    double junk_spread = 0.5;         // spread of junk content around the generic person direction
    double max_anchor_cosine = 0.85;  // identity separation margin
    std::size_t n_queries = 20;

    /// Throws GenerationError for out-of-range or unrealisable parameters.
    void validate() const;

    nlohmann::json to_json() const;
    /// Missing keys keep their default.
    static WorldConfig from_json(const nlohmann::json& j);

    /// Everyone always visible, perfectly detected and tracked, no anomalies.
    static WorldConfig persistent(std::size_t persons, FrameIndex frames, std::uint64_t seed = 0);
    /// A single ~1.5 minute video with sparse traffic.
    static WorldConfig single_video_sparse(std::uint64_t seed = 0);
    /// Default world with most arrivals crossing.
    static WorldConfig heavy_crossing(std::uint64_t seed = 0);
};

/// Named presets for the CLI: "default", "persistent", "sparse", "crossing".
WorldConfig preset(std::string_view name, std::uint64_t seed);

/// Ground truth, detections (including sub-threshold clutter), embeddings for
/// every crop, normality scores for every crop, and queries. Identical seeds
/// give identical datasets.
Dataset generate(const WorldConfig& config);

}  // namespace trade::synth
