#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace trade {

using FrameIndex = std::int64_t;

/// Axis-aligned box in continuous pixel coordinates, top-left origin.
struct BoundingBox {
    double x = 0.0;
    double y = 0.0;
    double w = 1.0;
    double h = 1.0;

    double right() const noexcept { return x + w; }
    double bottom() const noexcept { return y + h; }
    double area() const noexcept { return w * h; }

    /// True when w > 0, h > 0 and every coordinate is finite.
    bool valid() const noexcept;

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Detection {
    std::string video_id;
    FrameIndex frame = 0;
    BoundingBox box;
    double confidence = 0.0;
    std::string crop_ref;
    // Position of the record in its source file; the last-resort tie-breaker.
    std::size_t seq = 0;

    friend bool operator==(const Detection&, const Detection&) = default;
};

using TrackletId = std::size_t;

struct Tracklet {
    TrackletId id = 0;
    std::vector<Detection> detections;

    std::size_t length() const noexcept { return detections.size(); }
    FrameIndex first_frame() const { return detections.front().frame; }
    FrameIndex last_frame() const { return detections.back().frame; }
};

struct GalleryImage {
    Detection detection;
    TrackletId tracklet_id = 0;
    double normality_score = 0.0;
};

using Gallery = std::vector<GalleryImage>;

/// Half-open frame range [start_frame, end_frame) of one video.
struct Chunk {
    std::string video_id;
    FrameIndex start_frame = 0;
    FrameIndex end_frame = 0;

    FrameIndex size() const noexcept { return end_frame - start_frame; }
    bool contains(FrameIndex f) const noexcept { return f >= start_frame && f < end_frame; }

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

/// Unit-norm feature vector.
class Embedding {
public:
    Embedding() = default;

    /// Normalises `values` to unit length. Throws ValidationError on a zero,
    /// empty or non-finite vector. Vectors already unit within 1e-12 are kept
    /// bit-for-bit so that re-loading serialised tables is lossless.
    static Embedding normalized(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t dim() const noexcept { return values_.size(); }

    friend bool operator==(const Embedding&, const Embedding&) = default;

private:
    explicit Embedding(std::vector<double> v) : values_(std::move(v)) {}
    std::vector<double> values_;
};

struct Query {
    std::string query_id;
    std::string identity;
    Embedding embedding;

    friend bool operator==(const Query&, const Query&) = default;
};

double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Dot product of two unit embeddings. Throws ConfigError on dimension mismatch.
double cosine_similarity(const Embedding& a, const Embedding& b);

/// Affine map [-1,1] -> [0,1] so similarities live on the alert-threshold scale.
constexpr double map_to_score(double similarity) noexcept { return (similarity + 1.0) / 2.0; }

}  // namespace trade
