#include "trade/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "trade/errors.hpp"
#include "trade/text_io.hpp"

namespace trade {

namespace {

constexpr std::string_view kGalleriesHeader =
    "video,chunk_start,chunk_end,tracklet_id,tracklet_length,frame,x,y,w,h,conf,crop_ref,normality_score";
constexpr std::string_view kSearchesHeader = "query_id,identity,video,chunk_start,chunk_end,gallery_size,eta";
constexpr std::string_view kCandidatesHeader =
    "query_id,video,chunk_start,rank,score,tracklet_id,frame,x,y,w,h,conf,crop_ref,normality_score";
constexpr std::string_view kAlertsHeader = "query_id,video,chunk_start,beta,raised,top_score";

std::string fmt(double v) { return text::format_double(v); }

void append_detection_fields(std::string& out, const Detection& d) {
    out += std::to_string(d.frame) + ',' + fmt(d.box.x) + ',' + fmt(d.box.y) + ',' + fmt(d.box.w) + ',' +
           fmt(d.box.h) + ',' + fmt(d.confidence) + ',' + d.crop_ref;
}

/// Non-empty lines after the expected header, with 1-based line numbers.
std::vector<std::pair<std::size_t, std::vector<std::string_view>>> read_rows(std::string_view contents,
                                                                              std::string_view header,
                                                                              const std::string& source,
                                                                              std::size_t fields) {
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (pos < contents.size()) {
        auto nl = contents.find('\n', pos);
        if (nl == std::string_view::npos) nl = contents.size();
        auto line = contents.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != header) throw ParseError(source, line_no, "unexpected header '" + std::string(line) + "'");
            header_seen = true;
            continue;
        }
        auto f = text::split(line);
        if (f.size() != fields) {
            throw ParseError(source, line_no,
                             "expected " + std::to_string(fields) + " fields, got " + std::to_string(f.size()));
        }
        rows.emplace_back(line_no, std::move(f));
    }
    return rows;
}

using ChunkKey = std::tuple<std::string, std::string, FrameIndex>;  // query, video, chunk start

}  // namespace

void PipelineConfig::validate() const {
    tracklet_config().validate();
    if (tau < 1) throw ConfigError("tau must be >= 1");
    if (eta < 1) throw ConfigError("eta must be >= 1");
    if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) throw ConfigError("min confidence must lie in [0,1]");
    beta_grid(beta_step);
    heuristic.validate();
    const auto scorers = scorer_names();
    if (std::find(scorers.begin(), scorers.end(), scorer) == scorers.end()) {
        throw ConfigError("unknown scorer '" + scorer + "'");
    }
    const auto trackers = tracker_names();
    if (std::find(trackers.begin(), trackers.end(), tracker) == trackers.end()) {
        throw ConfigError("unknown tracker '" + tracker + "'");
    }
}

TrackletBuildConfig PipelineConfig::tracklet_config() const {
    TrackletBuildConfig c;
    c.mode = mode;
    c.max_len = mode == GalleryMode::Baseline ? 1 : n;
    c.iou_match_threshold = iou_match_threshold;
    return c;
}

nlohmann::json PipelineConfig::to_json() const {
    return {{"mode", std::string(to_string(mode))},
            {"n", n},
            {"tau", tau},
            {"eta", eta},
            {"beta_step", beta_step},
            {"min_confidence", min_confidence},
            {"scorer", scorer},
            {"tracker", tracker},
            {"iou_match_threshold", iou_match_threshold},
            {"heuristic",
             {{"target_aspect", heuristic.target_aspect},
              {"aspect_weight", heuristic.aspect_weight},
              {"margin_weight", heuristic.margin_weight},
              {"frame_width", heuristic.frame_width},
              {"frame_height", heuristic.frame_height}}},
            {"seed", seed}};
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
    PipelineConfig c;
    try {
        c.mode = parse_gallery_mode(j.at("mode").get<std::string>());
        c.n = j.at("n").get<std::size_t>();
        c.tau = j.at("tau").get<FrameIndex>();
        c.eta = j.at("eta").get<std::size_t>();
        c.beta_step = j.at("beta_step").get<double>();
        c.min_confidence = j.at("min_confidence").get<double>();
        c.scorer = j.at("scorer").get<std::string>();
        c.tracker = j.at("tracker").get<std::string>();
        c.iou_match_threshold = j.at("iou_match_threshold").get<double>();
        const auto& h = j.at("heuristic");
        c.heuristic.target_aspect = h.at("target_aspect").get<double>();
        c.heuristic.aspect_weight = h.at("aspect_weight").get<double>();
        c.heuristic.margin_weight = h.at("margin_weight").get<double>();
        c.heuristic.frame_width = h.at("frame_width").get<double>();
        c.heuristic.frame_height = h.at("frame_height").get<double>();
        c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed pipeline config: ") + e.what());
    }
    return c;
}

std::vector<Chunk> chunk_video(const std::string& video_id, FrameIndex frame_count, FrameIndex tau) {
    if (tau < 1) throw ConfigError("tau must be >= 1");
    std::vector<Chunk> chunks;
    for (FrameIndex start = 0; start < frame_count; start += tau) {
        chunks.push_back({video_id, start, std::min(start + tau, frame_count)});
    }
    return chunks;
}

std::vector<AlertOutcome> RunResult::outcomes_at(double beta) const {
    std::vector<AlertOutcome> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.outcome(beta));
    return out;
}

RunResult run(const PipelineConfig& config, const Dataset& data) {
    config.validate();
    if (data.queries.empty()) throw ConfigError("run requires at least one query");

    RunResult result;
    result.config = config;
    result.betas = beta_grid(config.beta_step);

    const auto detections = filter_detections(data.detections, config.min_confidence);
    const auto tracker = make_tracker(config.tracker, config.iou_match_threshold);
    const auto scorer = make_scorer(config.scorer, data.scores, config.heuristic);
    const auto tracklet_config = config.tracklet_config();

    // Video extent covers unfiltered detections as well, so chunking does not
    // depend on the confidence threshold.
    std::map<std::string, FrameIndex> extents;
    for (const auto& [video, dets] : data.detections) {
        if (!dets.empty()) extents[video] = std::max(extents[video], dets.back().frame + 1);
    }
    for (const auto& r : data.ground_truth.records()) {
        extents[r.video_id] = std::max(extents[r.video_id], r.frame + 1);
    }

    TrackletId next_id = 0;
    for (const auto& [video, extent] : extents) {
        std::span<const Detection> video_dets;
        if (auto it = detections.find(video); it != detections.end()) video_dets = it->second;
        for (const auto& chunk : chunk_video(video, extent, config.tau)) {
            auto lo = std::lower_bound(video_dets.begin(), video_dets.end(), chunk.start_frame,
                                       [](const Detection& d, FrameIndex f) { return d.frame < f; });
            auto hi = std::lower_bound(lo, video_dets.end(), chunk.end_frame,
                                       [](const Detection& d, FrameIndex f) { return d.frame < f; });
            ChunkGallery cg;
            cg.chunk = chunk;
            cg.tracklets = build_tracklets(std::span<const Detection>(lo, hi), chunk, tracklet_config, *tracker, next_id);
            next_id += cg.tracklets.size();
            cg.gallery = build_gallery(cg.tracklets, *scorer);
            for (const auto& img : cg.gallery) {
                if (!data.embeddings.contains(img.detection.crop_ref)) {
                    throw ValidationError("gallery crop '" + img.detection.crop_ref + "' in video '" + video +
                                          "' has no embedding");
                }
            }
            result.chunks.push_back(std::move(cg));
        }
    }

    for (const auto& cg : result.chunks) {
        for (const auto& q : data.queries) {
            result.records.push_back(search(q, cg.chunk, cg.gallery, data.embeddings, config.eta));
        }
    }
    result.work = accounting(result.records);
    return result;
}

// ---------------------------------------------------------------------------
// Stored run files

std::string serialize_galleries(const RunResult& result) {
    std::string out(kGalleriesHeader);
    out += '\n';
    for (const auto& cg : result.chunks) {
        std::map<TrackletId, std::size_t> lengths;
        for (const auto& t : cg.tracklets) lengths[t.id] = t.length();
        for (const auto& img : cg.gallery) {
            out += cg.chunk.video_id + ',' + std::to_string(cg.chunk.start_frame) + ',' +
                   std::to_string(cg.chunk.end_frame) + ',' + std::to_string(img.tracklet_id) + ',' +
                   std::to_string(lengths[img.tracklet_id]) + ',';
            append_detection_fields(out, img.detection);
            out += ',' + fmt(img.normality_score) + '\n';
        }
    }
    return out;
}

std::string serialize_searches(const RunResult& result) {
    std::string out(kSearchesHeader);
    out += '\n';
    for (const auto& r : result.records) {
        out += r.query_id + ',' + r.identity + ',' + r.chunk.video_id + ',' + std::to_string(r.chunk.start_frame) +
               ',' + std::to_string(r.chunk.end_frame) + ',' + std::to_string(r.gallery_size) + ',' +
               std::to_string(r.eta) + '\n';
    }
    return out;
}

std::string serialize_candidates(const RunResult& result) {
    std::string out(kCandidatesHeader);
    out += '\n';
    for (const auto& r : result.records) {
        for (const auto& c : r.top) {
            out += r.query_id + ',' + r.chunk.video_id + ',' + std::to_string(r.chunk.start_frame) + ',' +
                   std::to_string(c.rank) + ',' + fmt(c.score) + ',' + std::to_string(c.gallery_image.tracklet_id) +
                   ',';
            append_detection_fields(out, c.gallery_image.detection);
            out += ',' + fmt(c.gallery_image.normality_score) + '\n';
        }
    }
    return out;
}

std::string serialize_alerts(const RunResult& result) {
    std::string out(kAlertsHeader);
    out += '\n';
    for (const auto& r : result.records) {
        for (double beta : result.betas) {
            const auto o = r.outcome(beta);
            out += r.query_id + ',' + r.chunk.video_id + ',' + std::to_string(r.chunk.start_frame) + ',' + fmt(beta) +
                   ',' + (o.raised ? "1" : "0") + ',' + fmt(o.top_score) + '\n';
        }
    }
    return out;
}

std::vector<SearchRecord> load_search_records(const std::filesystem::path& run_dir) {
    const auto searches_path = (run_dir / run_files::kSearches).string();
    const auto candidates_path = (run_dir / run_files::kCandidates).string();
    const auto searches = text::read_file(searches_path);
    const auto candidates = text::read_file(candidates_path);

    std::vector<SearchRecord> records;
    std::map<ChunkKey, std::size_t> index;
    try {
        for (const auto& [line, f] : read_rows(searches, kSearchesHeader, searches_path, 7)) {
            SearchRecord r;
            r.query_id = std::string(f[0]);
            r.identity = std::string(f[1]);
            r.chunk = Chunk{std::string(f[2]), text::parse_int(f[3]), text::parse_int(f[4])};
            r.gallery_size = static_cast<std::size_t>(text::parse_int(f[5]));
            r.eta = static_cast<std::size_t>(text::parse_int(f[6]));
            if (!index.emplace(ChunkKey{r.query_id, r.chunk.video_id, r.chunk.start_frame}, records.size()).second) {
                throw ParseError(searches_path, line, "duplicate search record");
            }
            records.push_back(std::move(r));
        }
        for (const auto& [line, f] : read_rows(candidates, kCandidatesHeader, candidates_path, 14)) {
            auto it = index.find(ChunkKey{std::string(f[0]), std::string(f[1]), text::parse_int(f[2])});
            if (it == index.end()) throw ParseError(candidates_path, line, "candidate without a search record");
            auto& r = records[it->second];
            RankedCandidate c;
            c.rank = static_cast<std::size_t>(text::parse_int(f[3]));
            c.score = text::parse_double(f[4]);
            c.gallery_image.tracklet_id = static_cast<TrackletId>(text::parse_int(f[5]));
            auto& d = c.gallery_image.detection;
            d.video_id = r.chunk.video_id;
            d.frame = text::parse_int(f[6]);
            d.box = {text::parse_double(f[7]), text::parse_double(f[8]), text::parse_double(f[9]),
                     text::parse_double(f[10])};
            d.confidence = text::parse_double(f[11]);
            d.crop_ref = std::string(f[12]);
            c.gallery_image.normality_score = text::parse_double(f[13]);
            if (c.rank != r.top.size() + 1) throw ParseError(candidates_path, line, "ranks are not contiguous");
            r.top.push_back(std::move(c));
        }
    } catch (const std::invalid_argument& e) {
        throw ValidationError(run_dir.string() + ": " + e.what());
    }
    return records;
}

}  // namespace trade
