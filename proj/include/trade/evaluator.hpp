#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trade/core.hpp"
#include "trade/ingest.hpp"
#include "trade/reid.hpp"

namespace trade {

/// Minimum IoU between a presented candidate and the query's GT box.
inline constexpr double kMatchIou = 0.5;

/// True when the GT has a box for `query_identity` on the candidate's video and
/// frame with IoU >= 0.5.
bool candidate_matches_query(const Detection& candidate, const GroundTruth& ground_truth,
                             const std::string& query_identity);

/// Fraction of query-present chunks that raised an alert presenting the
/// query. nullopt when the query is present in none of the outcomes' chunks.
std::optional<double> compute_fr(std::span<const AlertOutcome> outcomes, const GroundTruth& ground_truth);

/// Fraction of raised alerts presenting the query. nullopt without alerts.
std::optional<double> compute_tvr(std::span<const AlertOutcome> outcomes, const GroundTruth& ground_truth);

/// Harmonic mean; 0 when both inputs are 0.
double f1(double fr, double tvr) noexcept;

/// Thresholds 0, step, 2*step, ..., 1. `step` must divide 1.
std::vector<double> beta_grid(double step = 0.02);

struct EvalPoint {
    double beta = 0.0;
    double fr = std::nan("");   // NaN: undefined (no query-present chunk)
    double tvr = std::nan("");  // NaN: undefined (no alert)
    std::size_t alerts = 0;

    bool defined() const noexcept { return !std::isnan(fr) && !std::isnan(tvr); }
};

struct EvalCurve {
    std::vector<EvalPoint> points;
};

/// Evaluates every threshold of `betas` over the search records.
EvalCurve compute_curve(std::span<const SearchRecord> records, const GroundTruth& ground_truth,
                        std::span<const double> betas);

struct F1Star {
    double f1_star = 0.0;
    double beta_star = 0.0;
    double fr = 0.0;
    double tvr = 0.0;
};

/// Maximum F1 over defined points; the smallest beta wins ties. Throws
/// EvaluationError when no point is defined.
F1Star f1_star(const EvalCurve& curve);

/// Area under TVR-vs-FR over the defined points: sort by FR, average TVR at
/// equal FR, extend the first TVR back to FR = 0, integrate by trapezoids.
/// Throws EvaluationError when no point is defined.
double map_area(const EvalCurve& curve);

struct ChunkGallerySize {
    Chunk chunk;
    std::size_t size = 0;
};

struct Accounting {
    std::vector<ChunkGallerySize> gallery_sizes;  // one entry per chunk searched
    std::size_t gallery_total = 0;                // sum of gallery sizes: comparisons per query
    std::size_t similarity_ops = 0;               // query-gallery comparisons over all queries
};

Accounting accounting(std::span<const SearchRecord> records);

struct RunSummary {
    // Pooled over all (query, chunk) pairs. NaN when undefined.
    double f1_star = std::nan("");
    double beta_star = std::nan("");
    double map = std::nan("");
    double fr_at_star = std::nan("");
    double tvr_at_star = std::nan("");
    // Mean of each query's own F1* and mAP over queries with a defined curve.
    double per_query_f1_star_mean = std::nan("");
    double per_query_map_mean = std::nan("");
    std::size_t queries_evaluated = 0;
    Accounting work;
};

/// Pooled and per-query metrics plus work accounting. Undefined metrics are
/// NaN rather than an error so that degenerate runs still summarise.
RunSummary summarize(std::span<const SearchRecord> records, const GroundTruth& ground_truth,
                     std::span<const double> betas, EvalCurve* pooled_curve = nullptr);

/// `beta,fr,tvr,f1` table; undefined values are written as `nan`.
std::string serialize_curve(const EvalCurve& curve);
nlohmann::json summary_to_json(const RunSummary& summary);

}  // namespace trade
