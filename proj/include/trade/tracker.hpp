#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trade/core.hpp"
#include "trade/ingest.hpp"

namespace trade {

/// How the gallery input set is produced from a chunk's detections.
enum class GalleryMode {
    Baseline,  // every detection on every frame
    Skip,      // detections on every N-th frame only
    TrADe,     // bounded tracklets, one representative each
};

std::string_view to_string(GalleryMode mode);
/// Accepts "baseline", "skip", "trade" (case-insensitive). Throws ConfigError.
GalleryMode parse_gallery_mode(std::string_view name);

struct TrackletBuildConfig {
    std::size_t max_len = 20;  // N: tracklet cap and detector period
    double iou_match_threshold = 0.3;
    GalleryMode mode = GalleryMode::TrADe;

    /// Throws ConfigError when N is 0 or the threshold is outside (0,1].
    void validate() const;
};

/// track_to_detection[i] is the detection continuing active track i, or
/// nullopt when that track lost its target on this frame.
struct Assignment {
    std::vector<std::optional<std::size_t>> track_to_detection;
};

/// Greedy one-to-one matching on a precomputed track x detection IoU matrix,
/// in descending IoU order. Equal IoUs resolve by track index, then detection
/// index. Pairs below `threshold` stay unmatched.
Assignment greedy_assign(const std::vector<std::vector<double>>& overlap, std::size_t n_detections, double threshold);

/// Greedy one-to-one matching in descending IoU order. Equal IoUs resolve by
/// track index, then detection index. Pairs below `threshold` stay unmatched.
Assignment greedy_iou_step(std::span<const BoundingBox> active_boxes, std::span<const Detection> frame_detections,
                           double threshold);

/// Frame-to-frame continuation contract standing in for a single-object
/// tracker. A track's state is the last box it was assigned; new tracks are
/// initialised from detector output by the builder. Implementations must not
/// assign one detection to two tracks.
class Tracker {
public:
    virtual ~Tracker() = default;
    virtual std::string_view name() const = 0;
    virtual Assignment step(std::span<const BoundingBox> active_boxes,
                            std::span<const Detection> frame_detections) const = 0;
};

class GreedyIouTracker final : public Tracker {
public:
    explicit GreedyIouTracker(double iou_threshold = 0.3) : threshold_(iou_threshold) {}
    std::string_view name() const override { return "greedy-iou"; }
    Assignment step(std::span<const BoundingBox> active_boxes,
                    std::span<const Detection> frame_detections) const override {
        return greedy_iou_step(active_boxes, frame_detections, threshold_);
    }

private:
    double threshold_;
};

/// Registered tracker names, for CLI selection.
std::vector<std::string> tracker_names();
/// Throws ConfigError for an unknown name.
std::unique_ptr<Tracker> make_tracker(std::string_view name, double iou_threshold);

/// Builds the tracklets of one chunk of one video.
///
/// `detections` must be sorted by frame and lie inside `chunk`. Detector
/// frames are chunk.start_frame + k*N. In TrADe mode, detections on a detector
/// frame that no live track claims start new tracklets; between detector
/// frames the tracker extends live tracks; a track is closed as soon as it
/// holds N detections, loses its target, or skips a frame. Baseline emits
/// every detection as a singleton, Skip emits singletons on detector frames.
///
/// Tracklet ids are assigned in creation order starting at `first_id`.
std::vector<Tracklet> build_tracklets(std::span<const Detection> detections, const Chunk& chunk,
                                      const TrackletBuildConfig& config, const Tracker& tracker,
                                      TrackletId first_id = 0);

/// Convenience overload: the chunk spans frame 0 to one past the last detection.
std::vector<Tracklet> build_tracklets(std::span<const Detection> detections, const TrackletBuildConfig& config,
                                      const Tracker& tracker);

struct IdentityCoverage {
    std::string identity;
    std::size_t gt_frames = 0;
    std::size_t covered_frames = 0;
    double coverage = 0.0;
};

struct CoverageReport {
    std::vector<IdentityCoverage> identities;  // sorted by identity
    std::size_t label_switches = 0;            // tracklets spanning more than one identity
};

/// A GT box counts as covered when a tracklet detection on the same video and
/// frame overlaps it with IoU >= 0.5. A detection is attributed to the GT
/// identity it overlaps most (IoU >= 0.5).
CoverageReport track_coverage_stats(std::span<const Tracklet> tracklets, const GroundTruth& ground_truth);

}  // namespace trade
