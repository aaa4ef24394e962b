#include "trade/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trade/errors.hpp"
#include "trade/text_io.hpp"

namespace trade {

namespace {

constexpr std::string_view kDetectionsHeader = "video,frame,x,y,w,h,conf,crop_ref";
constexpr std::string_view kGroundTruthHeader = "video,frame,identity,x,y,w,h";
constexpr std::string_view kScoresHeader = "crop_ref,score";

[[noreturn]] void invalid(const std::string& source, std::size_t line, const std::string& what) {
    throw ValidationError(source + ":" + std::to_string(line) + ": " + what);
}

/// Iterates the non-empty lines of `contents`, checking the header first.
/// `header_check` receives the header line; `row` receives (fields, line number).
template <typename HeaderCheck, typename Row>
void for_each_record(std::string_view contents, const std::string& source, HeaderCheck header_check,
                     Row row) {
    std::size_t line_no = 0;
    bool seen_header = false;
    std::size_t pos = 0;
    while (pos < contents.size()) {
        auto nl = contents.find('\n', pos);
        if (nl == std::string_view::npos) nl = contents.size();
        std::string_view line = contents.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!seen_header) {
            header_check(line, line_no);
            seen_header = true;
            continue;
        }
        try {
            row(text::split(line), line_no);
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, line_no, e.what());
        }
    }
}

void expect_header(std::string_view line, std::string_view expected, const std::string& source,
                   std::size_t line_no) {
    if (line != expected) {
        throw ParseError(source, line_no,
                         "expected header '" + std::string(expected) + "', got '" + std::string(line) + "'");
    }
}

void expect_fields(const std::vector<std::string_view>& f, std::size_t n, const std::string& source,
                   std::size_t line_no) {
    if (f.size() != n) {
        throw ParseError(source, line_no,
                         "expected " + std::to_string(n) + " fields, got " + std::to_string(f.size()));
    }
}

BoundingBox parse_box(const std::vector<std::string_view>& f, std::size_t first) {
    return {text::parse_double(f[first]), text::parse_double(f[first + 1]),
            text::parse_double(f[first + 2]), text::parse_double(f[first + 3])};
}

/// Checks a `prefix,v0,...,v{d-1}` header; returns d.
std::size_t vector_header_dim(std::string_view line, std::string_view prefix, const std::string& source,
                              std::size_t line_no) {
    const auto f = text::split(line);
    const auto fixed = text::split(prefix).size();
    bool ok = f.size() > fixed && line.substr(0, prefix.size()) == prefix;
    for (std::size_t i = fixed; ok && i < f.size(); ++i) {
        ok = f[i] == "v" + std::to_string(i - fixed);
    }
    if (!ok) {
        throw ParseError(source, line_no,
                         "expected header '" + std::string(prefix) + ",v0,...', got '" + std::string(line) + "'");
    }
    return f.size() - fixed;
}

std::vector<double> parse_vector(const std::vector<std::string_view>& f, std::size_t dim_field,
                                 std::size_t header_dim, const std::string& source, std::size_t line_no) {
    const auto dim = text::parse_int(f[dim_field]);
    if (dim < 1 || static_cast<std::size_t>(dim) != header_dim) {
        invalid(source, line_no,
                "dimension " + std::to_string(dim) + " inconsistent with header dimension " +
                    std::to_string(header_dim));
    }
    if (f.size() != dim_field + 1 + header_dim) {
        invalid(source, line_no,
                "expected " + std::to_string(header_dim) + " components, got " +
                    std::to_string(f.size() - dim_field - 1));
    }
    std::vector<double> v;
    v.reserve(header_dim);
    for (std::size_t i = dim_field + 1; i < f.size(); ++i) v.push_back(text::parse_double(f[i]));
    return v;
}

Embedding checked_embedding(std::vector<double> v, const std::string& source, std::size_t line_no) {
    try {
        return Embedding::normalized(std::move(v));
    } catch (const ValidationError& e) {
        invalid(source, line_no, e.what());
    }
}

void append_vector(std::string& out, const Embedding& e) {
    out += ',';
    out += std::to_string(e.dim());
    for (double v : e.values()) {
        out += ',';
        out += text::format_double(v);
    }
}

std::string vector_header(std::string_view prefix, std::size_t dim) {
    std::string h(prefix);
    for (std::size_t i = 0; i < dim; ++i) h += ",v" + std::to_string(i);
    return h;
}

void append_box(std::string& out, const BoundingBox& b) {
    for (double v : {b.x, b.y, b.w, b.h}) {
        out += ',';
        out += text::format_double(v);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// GroundTruth

GroundTruth::GroundTruth(std::vector<GroundTruthRecord> records) : records_(std::move(records)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        auto [it, inserted] = by_key_.emplace(std::make_tuple(r.video_id, r.frame, r.identity), i);
        if (!inserted) {
            throw ValidationError("duplicate ground-truth box for identity '" + r.identity + "' on video '" +
                                  r.video_id + "' frame " + std::to_string(r.frame));
        }
        identities_.insert(r.identity);
        by_frame_[{r.video_id, r.frame}].push_back(i);
        frames_of_[r.identity][r.video_id].push_back(r.frame);
    }
    for (auto& [id, videos] : frames_of_) {
        for (auto& [video, frames] : videos) std::sort(frames.begin(), frames.end());
    }
}

std::optional<BoundingBox> GroundTruth::box_of(const std::string& video, FrameIndex frame,
                                               const std::string& identity) const {
    auto it = by_key_.find(std::make_tuple(video, frame, identity));
    if (it == by_key_.end()) return std::nullopt;
    return records_[it->second].box;
}

std::vector<const GroundTruthRecord*> GroundTruth::on_frame(const std::string& video, FrameIndex frame) const {
    std::vector<const GroundTruthRecord*> out;
    auto it = by_frame_.find({video, frame});
    if (it == by_frame_.end()) return out;
    for (auto i : it->second) out.push_back(&records_[i]);
    return out;
}

bool GroundTruth::present_in(const std::string& identity, const Chunk& chunk) const {
    auto id_it = frames_of_.find(identity);
    if (id_it == frames_of_.end()) return false;
    auto v_it = id_it->second.find(chunk.video_id);
    if (v_it == id_it->second.end()) return false;
    const auto& frames = v_it->second;
    auto lo = std::lower_bound(frames.begin(), frames.end(), chunk.start_frame);
    return lo != frames.end() && *lo < chunk.end_frame;
}

FrameIndex GroundTruth::frame_extent(const std::string& video) const {
    FrameIndex extent = 0;
    for (const auto& r : records_) {
        if (r.video_id == video) extent = std::max(extent, r.frame + 1);
    }
    return extent;
}

const Embedding& EmbeddingTable::at(const std::string& ref) const {
    if (const auto* e = find(ref)) return *e;
    throw ValidationError("missing embedding for '" + ref + "'");
}

double ScoreTable::at(const std::string& crop_ref) const {
    if (const auto* s = find(crop_ref)) return *s;
    throw ValidationError("missing normality score for crop_ref '" + crop_ref + "'");
}

// ---------------------------------------------------------------------------
// Parsers

DetectionSet parse_detections(std::string_view contents, const std::string& source) {
    DetectionSet out;
    std::map<std::string, std::set<std::string>> refs_per_video;
    std::size_t seq = 0;
    for_each_record(
        contents, source,
        [&](std::string_view h, std::size_t n) { expect_header(h, kDetectionsHeader, source, n); },
        [&](const std::vector<std::string_view>& f, std::size_t n) {
            expect_fields(f, 8, source, n);
            Detection d;
            d.video_id = std::string(f[0]);
            d.frame = text::parse_int(f[1]);
            d.box = parse_box(f, 2);
            d.confidence = text::parse_double(f[6]);
            d.crop_ref = std::string(f[7]);
            d.seq = seq++;
            if (d.video_id.empty()) invalid(source, n, "empty video id");
            if (d.crop_ref.empty()) invalid(source, n, "empty crop_ref");
            if (d.frame < 0) invalid(source, n, "negative frame index " + std::to_string(d.frame));
            if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
                invalid(source, n, "confidence " + std::string(f[6]) + " outside [0,1]");
            }
            if (!d.box.valid()) invalid(source, n, "invalid bounding box");
            if (!refs_per_video[d.video_id].insert(d.crop_ref).second) {
                invalid(source, n, "duplicate crop_ref '" + d.crop_ref + "' in video '" + d.video_id + "'");
            }
            out[d.video_id].push_back(std::move(d));
        });
    for (auto& [video, dets] : out) {
        std::stable_sort(dets.begin(), dets.end(),
                         [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
    }
    return out;
}

GroundTruth parse_ground_truth(std::string_view contents, const std::string& source) {
    std::vector<GroundTruthRecord> records;
    for_each_record(
        contents, source,
        [&](std::string_view h, std::size_t n) { expect_header(h, kGroundTruthHeader, source, n); },
        [&](const std::vector<std::string_view>& f, std::size_t n) {
            expect_fields(f, 7, source, n);
            GroundTruthRecord r{std::string(f[0]), text::parse_int(f[1]), std::string(f[2]), parse_box(f, 3)};
            if (r.video_id.empty() || r.identity.empty()) invalid(source, n, "empty video or identity");
            if (r.frame < 0) invalid(source, n, "negative frame index " + std::to_string(r.frame));
            if (!r.box.valid()) invalid(source, n, "invalid bounding box");
            records.push_back(std::move(r));
        });
    return GroundTruth(std::move(records));
}

EmbeddingTable parse_embeddings(std::string_view contents, const std::string& source) {
    EmbeddingTable table;
    std::size_t dim = 0;
    for_each_record(
        contents, source, [&](std::string_view h, std::size_t n) { dim = vector_header_dim(h, "ref,dim", source, n); },
        [&](const std::vector<std::string_view>& f, std::size_t n) {
            if (f.size() < 3) throw ParseError(source, n, "too few fields");
            std::string ref(f[0]);
            if (ref.empty()) invalid(source, n, "empty ref");
            auto e = checked_embedding(parse_vector(f, 1, dim, source, n), source, n);
            if (!table.insert(ref, std::move(e))) invalid(source, n, "duplicate embedding key '" + ref + "'");
        });
    return table;
}

ScoreTable parse_scores(std::string_view contents, const std::string& source) {
    ScoreTable table;
    for_each_record(
        contents, source, [&](std::string_view h, std::size_t n) { expect_header(h, kScoresHeader, source, n); },
        [&](const std::vector<std::string_view>& f, std::size_t n) {
            expect_fields(f, 2, source, n);
            std::string ref(f[0]);
            const double score = text::parse_double(f[1]);
            if (ref.empty()) invalid(source, n, "empty crop_ref");
            if (!std::isfinite(score)) invalid(source, n, "non-finite score");
            if (!table.insert(ref, score)) invalid(source, n, "duplicate score key '" + ref + "'");
        });
    return table;
}

std::vector<Query> parse_queries(std::string_view contents, const std::string& source,
                                 const std::set<std::string>& universe) {
    std::vector<Query> out;
    std::set<std::string> seen;
    std::size_t dim = 0;
    for_each_record(
        contents, source,
        [&](std::string_view h, std::size_t n) { dim = vector_header_dim(h, "query_id,identity,dim", source, n); },
        [&](const std::vector<std::string_view>& f, std::size_t n) {
            if (f.size() < 4) throw ParseError(source, n, "too few fields");
            Query q{std::string(f[0]), std::string(f[1]), {}};
            if (q.query_id.empty() || q.identity.empty()) invalid(source, n, "empty query id or identity");
            if (!seen.insert(q.query_id).second) invalid(source, n, "duplicate query_id '" + q.query_id + "'");
            if (!universe.empty() && !universe.contains(q.identity)) {
                invalid(source, n, "query '" + q.query_id + "' references unknown identity '" + q.identity + "'");
            }
            q.embedding = checked_embedding(parse_vector(f, 2, dim, source, n), source, n);
            out.push_back(std::move(q));
        });
    return out;
}

DetectionSet load_detections(const std::filesystem::path& path) {
    return parse_detections(text::read_file(path), path.string());
}
GroundTruth load_ground_truth(const std::filesystem::path& path) {
    return parse_ground_truth(text::read_file(path), path.string());
}
EmbeddingTable load_embeddings(const std::filesystem::path& path) {
    return parse_embeddings(text::read_file(path), path.string());
}
ScoreTable load_scores(const std::filesystem::path& path) {
    return parse_scores(text::read_file(path), path.string());
}
std::vector<Query> load_queries(const std::filesystem::path& path, const std::set<std::string>& universe) {
    return parse_queries(text::read_file(path), path.string(), universe);
}

// ---------------------------------------------------------------------------
// Serialisers

std::string serialize_detections(const DetectionSet& dets) {
    std::string out(kDetectionsHeader);
    out += '\n';
    for (const auto& [video, list] : dets) {
        for (const auto& d : list) {
            text::require_plain_identifier(d.video_id, "video id");
            text::require_plain_identifier(d.crop_ref, "crop_ref");
            out += d.video_id;
            out += ',';
            out += std::to_string(d.frame);
            append_box(out, d.box);
            out += ',';
            out += text::format_double(d.confidence);
            out += ',';
            out += d.crop_ref;
            out += '\n';
        }
    }
    return out;
}

std::string serialize_ground_truth(const GroundTruth& gt) {
    std::string out(kGroundTruthHeader);
    out += '\n';
    for (const auto& r : gt.records()) {
        text::require_plain_identifier(r.video_id, "video id");
        text::require_plain_identifier(r.identity, "identity");
        out += r.video_id + ',' + std::to_string(r.frame) + ',' + r.identity;
        append_box(out, r.box);
        out += '\n';
    }
    return out;
}

std::string serialize_embeddings(const EmbeddingTable& table) {
    std::string out = vector_header("ref,dim", std::max<std::size_t>(table.dim(), 1));
    out += '\n';
    for (const auto& [ref, e] : table.rows()) {
        text::require_plain_identifier(ref, "embedding ref");
        out += ref;
        append_vector(out, e);
        out += '\n';
    }
    return out;
}

std::string serialize_scores(const ScoreTable& table) {
    std::string out(kScoresHeader);
    out += '\n';
    for (const auto& [ref, s] : table.rows()) {
        text::require_plain_identifier(ref, "crop_ref");
        out += ref + ',' + text::format_double(s) + '\n';
    }
    return out;
}

std::string serialize_queries(const std::vector<Query>& queries) {
    const std::size_t dim = queries.empty() ? 1 : queries.front().embedding.dim();
    std::string out = vector_header("query_id,identity,dim", dim);
    out += '\n';
    for (const auto& q : queries) {
        text::require_plain_identifier(q.query_id, "query id");
        text::require_plain_identifier(q.identity, "identity");
        out += q.query_id + ',' + q.identity;
        append_vector(out, q.embedding);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<Detection> filter_detections(const std::vector<Detection>& dets, double min_conf) {
    std::vector<Detection> out;
    std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
                 [min_conf](const Detection& d) { return d.confidence >= min_conf; });
    return out;
}

DetectionSet filter_detections(const DetectionSet& dets, double min_conf) {
    DetectionSet out;
    for (const auto& [video, list] : dets) {
        auto kept = filter_detections(list, min_conf);
        if (!kept.empty()) out.emplace(video, std::move(kept));
    }
    return out;
}

Dataset load_dataset(const std::filesystem::path& dir) {
    Dataset data;
    data.detections = load_detections(dir / files::kDetections);
    data.ground_truth = load_ground_truth(dir / files::kGroundTruth);
    data.embeddings = load_embeddings(dir / files::kEmbeddings);
    if (std::filesystem::exists(dir / files::kScores)) data.scores = load_scores(dir / files::kScores);
    data.queries = load_queries(dir / files::kQueries, data.ground_truth.identities());
    const auto dim = data.embeddings.dim();
    for (const auto& q : data.queries) {
        if (dim != 0 && q.embedding.dim() != dim) {
            throw ValidationError("query '" + q.query_id + "' has dimension " + std::to_string(q.embedding.dim()) +
                                  " but embeddings have dimension " + std::to_string(dim));
        }
    }
    return data;
}

void write_dataset(const std::filesystem::path& dir, const Dataset& data) {
    std::filesystem::create_directories(dir);
    text::write_file_atomic(dir / files::kDetections, serialize_detections(data.detections));
    text::write_file_atomic(dir / files::kGroundTruth, serialize_ground_truth(data.ground_truth));
    text::write_file_atomic(dir / files::kEmbeddings, serialize_embeddings(data.embeddings));
    text::write_file_atomic(dir / files::kScores, serialize_scores(data.scores));
    text::write_file_atomic(dir / files::kQueries, serialize_queries(data.queries));
}

}  // namespace trade
