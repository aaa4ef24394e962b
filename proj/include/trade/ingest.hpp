#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "trade/core.hpp"

namespace trade {

/// Detections of one video, ordered by frame; file order is kept within a frame.
using VideoDetections = std::vector<Detection>;
/// Keyed by video id.
using DetectionSet = std::map<std::string, VideoDetections>;

struct GroundTruthRecord {
    std::string video_id;
    FrameIndex frame = 0;
    std::string identity;
    BoundingBox box;

    friend bool operator==(const GroundTruthRecord&, const GroundTruthRecord&) = default;
};

/// Annotation table with the lookups the tracker statistics and evaluator need.
class GroundTruth {
public:
    GroundTruth() = default;
    /// Throws ValidationError when two records share (video, frame, identity).
    explicit GroundTruth(std::vector<GroundTruthRecord> records);

    const std::vector<GroundTruthRecord>& records() const noexcept { return records_; }
    const std::set<std::string>& identities() const noexcept { return identities_; }

    std::optional<BoundingBox> box_of(const std::string& video, FrameIndex frame,
                                      const std::string& identity) const;
    /// Records on one frame of one video, in file order.
    std::vector<const GroundTruthRecord*> on_frame(const std::string& video, FrameIndex frame) const;
    bool present_in(const std::string& identity, const Chunk& chunk) const;
    /// One past the largest annotated frame of `video`, or 0.
    FrameIndex frame_extent(const std::string& video) const;

private:
    std::vector<GroundTruthRecord> records_;
    std::set<std::string> identities_;
    std::map<std::tuple<std::string, FrameIndex, std::string>, std::size_t> by_key_;
    std::map<std::pair<std::string, FrameIndex>, std::vector<std::size_t>> by_frame_;
    // identity -> video -> sorted frames
    std::map<std::string, std::map<std::string, std::vector<FrameIndex>>> frames_of_;
};

/// Insertion-ordered map from reference to a value; duplicate keys are rejected.
template <typename Value>
class KeyedTable {
public:
    bool contains(const std::string& key) const { return index_.contains(key); }
    const Value* find(const std::string& key) const {
        auto it = index_.find(key);
        return it == index_.end() ? nullptr : &rows_[it->second].second;
    }
    const std::vector<std::pair<std::string, Value>>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }

    /// Returns false (and leaves the table unchanged) when `key` already exists.
    bool insert(std::string key, Value value) {
        if (index_.contains(key)) return false;
        index_.emplace(key, rows_.size());
        rows_.emplace_back(std::move(key), std::move(value));
        return true;
    }

    friend bool operator==(const KeyedTable& a, const KeyedTable& b) { return a.rows_ == b.rows_; }

private:
    std::vector<std::pair<std::string, Value>> rows_;
    std::unordered_map<std::string, std::size_t> index_;
};

class EmbeddingTable : public KeyedTable<Embedding> {
public:
    /// Throws ValidationError naming the reference when absent.
    const Embedding& at(const std::string& ref) const;
    std::size_t dim() const noexcept { return rows().empty() ? 0 : rows().front().second.dim(); }
};

class ScoreTable : public KeyedTable<double> {
public:
    /// Throws ValidationError naming the crop_ref when absent.
    double at(const std::string& crop_ref) const;
};

DetectionSet load_detections(const std::filesystem::path& path);
GroundTruth load_ground_truth(const std::filesystem::path& path);
EmbeddingTable load_embeddings(const std::filesystem::path& path);
ScoreTable load_scores(const std::filesystem::path& path);
/// Rejects queries whose identity is not in `universe` when it is non-empty.
std::vector<Query> load_queries(const std::filesystem::path& path,
                                const std::set<std::string>& universe = {});

// The parse_* functions take file contents; `source` only labels errors.
DetectionSet parse_detections(std::string_view contents, const std::string& source);
GroundTruth parse_ground_truth(std::string_view contents, const std::string& source);
EmbeddingTable parse_embeddings(std::string_view contents, const std::string& source);
ScoreTable parse_scores(std::string_view contents, const std::string& source);
std::vector<Query> parse_queries(std::string_view contents, const std::string& source,
                                 const std::set<std::string>& universe = {});

std::string serialize_detections(const DetectionSet& dets);
std::string serialize_ground_truth(const GroundTruth& gt);
std::string serialize_embeddings(const EmbeddingTable& table);
std::string serialize_scores(const ScoreTable& table);
std::string serialize_queries(const std::vector<Query>& queries);

/// Keeps detections with confidence >= min_conf, preserving order.
std::vector<Detection> filter_detections(const std::vector<Detection>& dets, double min_conf = 0.5);
DetectionSet filter_detections(const DetectionSet& dets, double min_conf = 0.5);

/// The five files of one dataset directory, loaded and cross-validated.
struct Dataset {
    DetectionSet detections;
    GroundTruth ground_truth;
    EmbeddingTable embeddings;
    ScoreTable scores;
    std::vector<Query> queries;
};

namespace files {
inline constexpr const char* kDetections = "detections.csv";
inline constexpr const char* kGroundTruth = "ground_truth.csv";
inline constexpr const char* kEmbeddings = "embeddings.csv";
inline constexpr const char* kScores = "scores.csv";
inline constexpr const char* kQueries = "queries.csv";
}  // namespace files

/// Loads a dataset directory. The scores file is optional (empty table if absent).
Dataset load_dataset(const std::filesystem::path& dir);
void write_dataset(const std::filesystem::path& dir, const Dataset& data);

}  // namespace trade
