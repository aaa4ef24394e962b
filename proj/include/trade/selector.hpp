#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trade/core.hpp"
#include "trade/ingest.hpp"

namespace trade {

/// Fitness-for-re-identification score of one crop. Only the ordering of
/// scores within a tracklet matters. Must be deterministic.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual std::string_view name() const = 0;
    virtual double score(const Detection& detection) const = 0;
};

struct HeuristicScorerConfig {
    double target_aspect = 2.5;  // h / w of a well-framed standing person
    double aspect_weight = 1.0;
    double margin_weight = 0.5;
    double frame_width = 1280.0;
    double frame_height = 720.0;

    void validate() const;
};

/// confidence * exp(-aspect_weight * (log(h/w) - log(target))^2) * margin
/// factor, where each frame edge touched by the box multiplies the margin
/// factor by max(0, 1 - margin_weight).
double heuristic_score(const Detection& detection, const HeuristicScorerConfig& config);

/// Looks the crop up in an externally computed score table.
double table_score(const Detection& detection, const ScoreTable& table);

class HeuristicScorer final : public Scorer {
public:
    explicit HeuristicScorer(HeuristicScorerConfig config = {});
    std::string_view name() const override { return "heuristic"; }
    double score(const Detection& d) const override { return heuristic_score(d, config_); }

private:
    HeuristicScorerConfig config_;
};

class TableScorer final : public Scorer {
public:
    explicit TableScorer(const ScoreTable& table) : table_(&table) {}
    std::string_view name() const override { return "table"; }
    double score(const Detection& d) const override { return table_score(d, *table_); }

private:
    const ScoreTable* table_;
};

/// Every crop scores the same; representative selection degenerates to the first frame.
class ConstantScorer final : public Scorer {
public:
    std::string_view name() const override { return "constant"; }
    double score(const Detection&) const override { return 1.0; }
};

std::vector<std::string> scorer_names();
/// `table` must outlive the returned scorer when name == "table". Throws ConfigError.
std::unique_ptr<Scorer> make_scorer(std::string_view name, const ScoreTable& table,
                                    const HeuristicScorerConfig& heuristic = {});

/// Highest-scoring detection of a non-empty tracklet; ties go to the earliest
/// frame, then to the earliest file position.
GalleryImage select_representative(const Tracklet& tracklet, const Scorer& scorer);

/// One representative per tracklet, ordered by (video, first frame, tracklet id).
Gallery build_gallery(std::span<const Tracklet> tracklets, const Scorer& scorer);

}  // namespace trade
