#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "trade/ingest.hpp"
#include "trade/reid.hpp"

namespace trade::oracle {

/// Small random evaluation input: a handful of chunks and queries, ground
/// truth with near-threshold overlaps, and ranked candidate lists whose scores
/// sit on the 0.02 grid so that threshold ties are common.
struct MetricFixture {
    std::vector<GroundTruthRecord> ground_truth;
    std::vector<SearchRecord> records;
};

MetricFixture random_metric_fixture(std::mt19937_64& rng);

/// Compares the evaluator (curve, F1*, beta*, mAP, per-query means) with the
/// exhaustive oracle. Returns an empty string on agreement within `tol`,
/// otherwise a description of the first disagreement.
std::string compare_with_oracle(const MetricFixture& fixture, std::span<const double> betas, double tol);

}  // namespace trade::oracle
