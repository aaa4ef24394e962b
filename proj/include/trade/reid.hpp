#pragma once

#include <string>
#include <vector>

#include "trade/core.hpp"
#include "trade/ingest.hpp"

namespace trade {

struct RankedCandidate {
    GalleryImage gallery_image;
    double score = 0.0;  // mapped similarity in [0,1]
    std::size_t rank = 0;  // 1-based
};

struct AlertOutcome {
    std::string query_id;
    std::string identity;  // ground-truth label of the query, evaluation only
    Chunk chunk;
    bool raised = false;
    std::vector<RankedCandidate> candidates;  // top-eta
    double top_score = 0.0;  // 0 for an empty gallery
};

/// Scores every gallery image against the query and sorts by descending
/// score; equal scores keep (frame, file order). Throws ValidationError when a
/// gallery crop has no embedding.
std::vector<RankedCandidate> rank_gallery(const Query& query, const Gallery& gallery, const EmbeddingTable& embeddings);

/// Raises when the top score reaches `beta` (inclusive) and presents the first
/// min(eta, |ranked|) candidates. `query_id` and `chunk` are copied into the
/// outcome for bookkeeping.
AlertOutcome decide_alert(const std::vector<RankedCandidate>& ranked, double beta, std::size_t eta,
                          const std::string& query_id = {}, const Chunk& chunk = {});

/// Beta-independent result of searching one query in one chunk's gallery:
/// enough to reproduce the AlertOutcome at any threshold.
struct SearchRecord {
    std::string query_id;
    std::string identity;
    Chunk chunk;
    std::size_t gallery_size = 0;  // similarity evaluations performed
    std::size_t eta = 20;
    std::vector<RankedCandidate> top;  // first min(eta, gallery_size) ranked candidates

    AlertOutcome outcome(double beta) const;
};

SearchRecord search(const Query& query, const Chunk& chunk, const Gallery& gallery, const EmbeddingTable& embeddings,
                    std::size_t eta);

}  // namespace trade
