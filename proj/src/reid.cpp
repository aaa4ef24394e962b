#include "trade/reid.hpp"

#include <algorithm>
#include <tuple>

#include "trade/errors.hpp"

namespace trade {

std::vector<RankedCandidate> rank_gallery(const Query& query, const Gallery& gallery, const EmbeddingTable& embeddings) {
    std::vector<RankedCandidate> ranked;
    ranked.reserve(gallery.size());
    for (const auto& img : gallery) {
        const auto& emb = embeddings.at(img.detection.crop_ref);
        ranked.push_back({img, map_to_score(cosine_similarity(query.embedding, emb)), 0});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        const auto& da = a.gallery_image.detection;
        const auto& db = b.gallery_image.detection;
        return std::tie(da.frame, da.seq) < std::tie(db.frame, db.seq);
    });
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;
    return ranked;
}

AlertOutcome decide_alert(const std::vector<RankedCandidate>& ranked, double beta, std::size_t eta,
                          const std::string& query_id, const Chunk& chunk) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0,1]");
    if (eta < 1) throw ConfigError("eta must be >= 1");
    AlertOutcome out;
    out.query_id = query_id;
    out.chunk = chunk;
    if (ranked.empty()) return out;
    out.top_score = ranked.front().score;
    out.raised = out.top_score >= beta;
    const auto n = std::min(eta, ranked.size());
    out.candidates.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

AlertOutcome SearchRecord::outcome(double beta) const {
    auto out = decide_alert(top, beta, eta, query_id, chunk);
    out.identity = identity;
    return out;
}

SearchRecord search(const Query& query, const Chunk& chunk, const Gallery& gallery, const EmbeddingTable& embeddings,
                    std::size_t eta) {
    if (eta < 1) throw ConfigError("eta must be >= 1");
    auto ranked = rank_gallery(query, gallery, embeddings);
    SearchRecord rec{query.query_id, query.identity, chunk, ranked.size(), eta, {}};
    ranked.resize(std::min(eta, ranked.size()));
    rec.top = std::move(ranked);
    return rec;
}

}  // namespace trade
