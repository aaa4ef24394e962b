#include "trade/tracker.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <tuple>

#include "trade/errors.hpp"

namespace trade {

namespace {

constexpr double kCoverageIou = 0.5;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

struct LiveTrack {
    Tracklet tracklet;
    BoundingBox last_box;
};

}  // namespace

std::string_view to_string(GalleryMode mode) {
    switch (mode) {
        case GalleryMode::Baseline: return "baseline";
        case GalleryMode::Skip: return "skip";
        case GalleryMode::TrADe: return "trade";
    }
    return "unknown";
}

GalleryMode parse_gallery_mode(std::string_view name) {
    const auto n = lower(name);
    if (n == "baseline") return GalleryMode::Baseline;
    if (n == "skip") return GalleryMode::Skip;
    if (n == "trade") return GalleryMode::TrADe;
    throw ConfigError("unknown mode '" + std::string(name) + "' (expected baseline, skip or trade)");
}

void TrackletBuildConfig::validate() const {
    if (max_len < 1) throw ConfigError("maximum tracklet length N must be >= 1");
    if (!(iou_match_threshold > 0.0 && iou_match_threshold <= 1.0)) {
        throw ConfigError("IoU match threshold must lie in (0,1]");
    }
}

Assignment greedy_assign(const std::vector<std::vector<double>>& overlap, std::size_t n_detections,
                         double threshold) {
    struct Pair {
        double iou;
        std::size_t track;
        std::size_t det;
    };
    std::vector<Pair> pairs;
    for (std::size_t t = 0; t < overlap.size(); ++t) {
        if (overlap[t].size() != n_detections) throw ConfigError("IoU matrix rows must have one entry per detection");
        for (std::size_t d = 0; d < n_detections; ++d) {
            const double v = overlap[t][d];
            if (v >= threshold && v > 0.0) pairs.push_back({v, t, d});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        return std::tie(a.track, a.det) < std::tie(b.track, b.det);
    });

    Assignment out;
    out.track_to_detection.assign(overlap.size(), std::nullopt);
    std::vector<bool> det_taken(n_detections, false);
    for (const auto& p : pairs) {
        if (out.track_to_detection[p.track] || det_taken[p.det]) continue;
        out.track_to_detection[p.track] = p.det;
        det_taken[p.det] = true;
    }
    return out;
}

Assignment greedy_iou_step(std::span<const BoundingBox> active_boxes, std::span<const Detection> frame_detections,
                           double threshold) {
    std::vector<std::vector<double>> overlap(active_boxes.size(), std::vector<double>(frame_detections.size()));
    for (std::size_t t = 0; t < active_boxes.size(); ++t) {
        for (std::size_t d = 0; d < frame_detections.size(); ++d) {
            overlap[t][d] = iou(active_boxes[t], frame_detections[d].box);
        }
    }
    return greedy_assign(overlap, frame_detections.size(), threshold);
}

std::vector<std::string> tracker_names() { return {"greedy-iou"}; }

std::unique_ptr<Tracker> make_tracker(std::string_view name, double iou_threshold) {
    if (lower(name) == "greedy-iou") return std::make_unique<GreedyIouTracker>(iou_threshold);
    throw ConfigError("unknown tracker '" + std::string(name) + "'");
}

std::vector<Tracklet> build_tracklets(std::span<const Detection> detections, const Chunk& chunk,
                                      const TrackletBuildConfig& config, const Tracker& tracker,
                                      TrackletId first_id) {
    config.validate();
    const auto n = static_cast<FrameIndex>(config.max_len);
    for (std::size_t i = 0; i < detections.size(); ++i) {
        if (!chunk.contains(detections[i].frame)) {
            throw ConfigError("detection on frame " + std::to_string(detections[i].frame) + " lies outside chunk [" +
                              std::to_string(chunk.start_frame) + "," + std::to_string(chunk.end_frame) + ")");
        }
        if (i > 0 && detections[i].frame < detections[i - 1].frame) {
            throw ConfigError("detections are not sorted by frame");
        }
    }
    auto is_detector_frame = [&](FrameIndex f) { return (f - chunk.start_frame) % n == 0; };

    std::vector<Tracklet> out;
    TrackletId next_id = first_id;
    auto singleton = [&](const Detection& d) {
        out.push_back(Tracklet{next_id++, {d}});
    };

    if (config.mode == GalleryMode::Baseline) {
        for (const auto& d : detections) singleton(d);
        return out;
    }
    if (config.mode == GalleryMode::Skip) {
        for (const auto& d : detections) {
            if (is_detector_frame(d.frame)) singleton(d);
        }
        return out;
    }

    std::vector<LiveTrack> live;
    auto close = [&](LiveTrack& t) { out.push_back(std::move(t.tracklet)); };

    std::size_t i = 0;
    while (i < detections.size()) {
        const FrameIndex frame = detections[i].frame;
        std::size_t j = i;
        while (j < detections.size() && detections[j].frame == frame) ++j;
        const auto frame_dets = detections.subspan(i, j - i);
        i = j;

        // A frame without detections in between means every live track lost its target.
        std::erase_if(live, [&](LiveTrack& t) {
            if (t.tracklet.last_frame() + 1 == frame) return false;
            close(t);
            return true;
        });

        std::vector<bool> claimed(frame_dets.size(), false);
        if (!live.empty()) {
            std::vector<BoundingBox> boxes;
            boxes.reserve(live.size());
            for (const auto& t : live) boxes.push_back(t.last_box);
            const auto assignment = tracker.step(boxes, frame_dets);
            std::vector<LiveTrack> still_live;
            for (std::size_t t = 0; t < live.size(); ++t) {
                const auto& match = assignment.track_to_detection.at(t);
                if (!match || claimed.at(*match)) {
                    close(live[t]);
                    continue;
                }
                claimed[*match] = true;
                live[t].tracklet.detections.push_back(frame_dets[*match]);
                live[t].last_box = frame_dets[*match].box;
                if (live[t].tracklet.length() >= config.max_len) {
                    close(live[t]);
                } else {
                    still_live.push_back(std::move(live[t]));
                }
            }
            live = std::move(still_live);
        }

        if (is_detector_frame(frame)) {
            for (std::size_t d = 0; d < frame_dets.size(); ++d) {
                if (claimed[d]) continue;
                LiveTrack t{Tracklet{next_id++, {frame_dets[d]}}, frame_dets[d].box};
                if (config.max_len == 1) {
                    close(t);
                } else {
                    live.push_back(std::move(t));
                }
            }
        }
    }
    for (auto& t : live) close(t);

    std::sort(out.begin(), out.end(), [](const Tracklet& a, const Tracklet& b) { return a.id < b.id; });
    return out;
}

std::vector<Tracklet> build_tracklets(std::span<const Detection> detections, const TrackletBuildConfig& config,
                                      const Tracker& tracker) {
    Chunk chunk{detections.empty() ? std::string{} : detections.front().video_id, 0,
                detections.empty() ? 0 : detections.back().frame + 1};
    return build_tracklets(detections, chunk, config, tracker);
}

CoverageReport track_coverage_stats(std::span<const Tracklet> tracklets, const GroundTruth& ground_truth) {
    // (video, frame, identity) triples touched by some tracklet detection.
    std::set<std::tuple<std::string, FrameIndex, std::string>> covered;
    CoverageReport report;

    for (const auto& t : tracklets) {
        std::set<std::string> ids_in_tracklet;
        for (const auto& d : t.detections) {
            const GroundTruthRecord* best = nullptr;
            double best_iou = 0.0;
            for (const auto* r : ground_truth.on_frame(d.video_id, d.frame)) {
                const double v = iou(d.box, r->box);
                if (v >= kCoverageIou) covered.emplace(r->video_id, r->frame, r->identity);
                if (v >= kCoverageIou && v > best_iou) {
                    best_iou = v;
                    best = r;
                }
            }
            if (best) ids_in_tracklet.insert(best->identity);
        }
        if (ids_in_tracklet.size() > 1) ++report.label_switches;
    }

    std::map<std::string, IdentityCoverage> per_id;
    for (const auto& id : ground_truth.identities()) per_id[id].identity = id;
    for (const auto& r : ground_truth.records()) {
        auto& c = per_id[r.identity];
        ++c.gt_frames;
        if (covered.contains({r.video_id, r.frame, r.identity})) ++c.covered_frames;
    }
    for (auto& [id, c] : per_id) {
        c.coverage = c.gt_frames == 0 ? 0.0 : static_cast<double>(c.covered_frames) / static_cast<double>(c.gt_frames);
        report.identities.push_back(c);
    }
    return report;
}

}  // namespace trade
