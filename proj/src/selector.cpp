#include "trade/selector.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "trade/errors.hpp"

namespace trade {

void HeuristicScorerConfig::validate() const {
    if (!(target_aspect > 0.0)) throw ConfigError("heuristic target aspect must be positive");
    if (aspect_weight < 0.0 || margin_weight < 0.0) throw ConfigError("heuristic weights must be >= 0");
    if (!(frame_width > 0.0 && frame_height > 0.0)) throw ConfigError("frame dimensions must be positive");
}

double heuristic_score(const Detection& d, const HeuristicScorerConfig& config) {
    const double log_ratio = std::log(d.box.h / d.box.w) - std::log(config.target_aspect);
    const double aspect = std::exp(-config.aspect_weight * log_ratio * log_ratio);

    int touched = 0;
    if (d.box.x <= 0.0) ++touched;
    if (d.box.y <= 0.0) ++touched;
    if (d.box.right() >= config.frame_width) ++touched;
    if (d.box.bottom() >= config.frame_height) ++touched;
    const double per_edge = std::max(0.0, 1.0 - config.margin_weight);
    const double margin = std::pow(per_edge, touched);

    return d.confidence * aspect * margin;
}

double table_score(const Detection& detection, const ScoreTable& table) { return table.at(detection.crop_ref); }

HeuristicScorer::HeuristicScorer(HeuristicScorerConfig config) : config_(config) { config_.validate(); }

std::vector<std::string> scorer_names() { return {"heuristic", "table", "constant"}; }

std::unique_ptr<Scorer> make_scorer(std::string_view name, const ScoreTable& table,
                                    const HeuristicScorerConfig& heuristic) {
    if (name == "heuristic") return std::make_unique<HeuristicScorer>(heuristic);
    if (name == "table") return std::make_unique<TableScorer>(table);
    if (name == "constant") return std::make_unique<ConstantScorer>();
    throw ConfigError("unknown scorer '" + std::string(name) + "' (expected heuristic, table or constant)");
}

GalleryImage select_representative(const Tracklet& tracklet, const Scorer& scorer) {
    const Detection* best = nullptr;
    double best_score = 0.0;
    for (const auto& d : tracklet.detections) {
        const double s = scorer.score(d);
        const bool better = !best || s > best_score ||
                            (s == best_score && std::tie(d.frame, d.seq) < std::tie(best->frame, best->seq));
        if (better) {
            best = &d;
            best_score = s;
        }
    }
    return GalleryImage{*best, tracklet.id, best_score};
}

Gallery build_gallery(std::span<const Tracklet> tracklets, const Scorer& scorer) {
    std::vector<const Tracklet*> order;
    order.reserve(tracklets.size());
    for (const auto& t : tracklets) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](const Tracklet* a, const Tracklet* b) {
        const auto& da = a->detections.front();
        const auto& db = b->detections.front();
        return std::tie(da.video_id, da.frame, a->id) < std::tie(db.video_id, db.frame, b->id);
    });
    Gallery gallery;
    gallery.reserve(order.size());
    for (const auto* t : order) gallery.push_back(select_representative(*t, scorer));
    return gallery;
}

}  // namespace trade
