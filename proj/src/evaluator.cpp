#include "trade/evaluator.hpp"

#include <algorithm>
#include <map>

#include "trade/errors.hpp"
#include "trade/text_io.hpp"

namespace trade {

namespace {

bool presents_query(const AlertOutcome& o, const GroundTruth& gt) {
    return std::any_of(o.candidates.begin(), o.candidates.end(), [&](const RankedCandidate& c) {
        return candidate_matches_query(c.gallery_image.detection, gt, o.identity);
    });
}

double nan_if_empty(const std::optional<double>& v) { return v ? *v : std::nan(""); }

nlohmann::json number_or_null(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

std::string format_or_nan(double v) { return std::isnan(v) ? std::string("nan") : text::format_double(v); }

}  // namespace

bool candidate_matches_query(const Detection& candidate, const GroundTruth& ground_truth,
                             const std::string& query_identity) {
    const auto box = ground_truth.box_of(candidate.video_id, candidate.frame, query_identity);
    return box && iou(candidate.box, *box) >= kMatchIou;
}

std::optional<double> compute_fr(std::span<const AlertOutcome> outcomes, const GroundTruth& ground_truth) {
    std::size_t present = 0;
    std::size_t found = 0;
    for (const auto& o : outcomes) {
        if (!ground_truth.present_in(o.identity, o.chunk)) continue;
        ++present;
        if (o.raised && presents_query(o, ground_truth)) ++found;
    }
    if (present == 0) return std::nullopt;
    return static_cast<double>(found) / static_cast<double>(present);
}

std::optional<double> compute_tvr(std::span<const AlertOutcome> outcomes, const GroundTruth& ground_truth) {
    std::size_t alerts = 0;
    std::size_t valid = 0;
    for (const auto& o : outcomes) {
        if (!o.raised) continue;
        ++alerts;
        if (presents_query(o, ground_truth)) ++valid;
    }
    if (alerts == 0) return std::nullopt;
    return static_cast<double>(valid) / static_cast<double>(alerts);
}

double f1(double fr, double tvr) noexcept {
    if (fr + tvr == 0.0) return 0.0;
    return 2.0 * fr * tvr / (fr + tvr);
}

std::vector<double> beta_grid(double step) {
    if (!(step > 0.0 && step <= 1.0)) throw ConfigError("beta step must lie in (0,1]");
    const double intervals = std::round(1.0 / step);
    if (std::abs(intervals * step - 1.0) > 1e-9) throw ConfigError("beta step must divide 1 evenly");
    const auto n = static_cast<std::size_t>(intervals);
    std::vector<double> grid;
    grid.reserve(n + 1);
    // i / n rather than i * step keeps grid values exact decimals where possible.
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) / static_cast<double>(n));
    return grid;
}

EvalCurve compute_curve(std::span<const SearchRecord> records, const GroundTruth& ground_truth,
                        std::span<const double> betas) {
    EvalCurve curve;
    curve.points.reserve(betas.size());
    std::vector<AlertOutcome> outcomes;
    for (double beta : betas) {
        outcomes.clear();
        for (const auto& r : records) outcomes.push_back(r.outcome(beta));
        EvalPoint p;
        p.beta = beta;
        p.fr = nan_if_empty(compute_fr(outcomes, ground_truth));
        p.tvr = nan_if_empty(compute_tvr(outcomes, ground_truth));
        p.alerts = static_cast<std::size_t>(
            std::count_if(outcomes.begin(), outcomes.end(), [](const AlertOutcome& o) { return o.raised; }));
        curve.points.push_back(p);
    }
    return curve;
}

F1Star f1_star(const EvalCurve& curve) {
    std::optional<F1Star> best;
    for (const auto& p : curve.points) {
        if (!p.defined()) continue;
        const double v = f1(p.fr, p.tvr);
        if (!best || v > best->f1_star || (v == best->f1_star && p.beta < best->beta_star)) {
            best = F1Star{v, p.beta, p.fr, p.tvr};
        }
    }
    if (!best) throw EvaluationError("F1* undefined: every curve point has a zero denominator");
    return *best;
}

double map_area(const EvalCurve& curve) {
    std::map<double, std::pair<double, std::size_t>> by_fr;  // fr -> (tvr sum, count)
    for (const auto& p : curve.points) {
        if (!p.defined()) continue;
        auto& [sum, count] = by_fr[p.fr];
        sum += p.tvr;
        ++count;
    }
    if (by_fr.empty()) throw EvaluationError("mAP undefined: every curve point has a zero denominator");

    std::vector<std::pair<double, double>> pts;
    for (const auto& [fr, acc] : by_fr) pts.emplace_back(fr, acc.first / static_cast<double>(acc.second));
    if (pts.front().first > 0.0) pts.insert(pts.begin(), {0.0, pts.front().second});

    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        area += (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second) / 2.0;
    }
    return area;
}

Accounting accounting(std::span<const SearchRecord> records) {
    Accounting acc;
    std::map<std::tuple<std::string, FrameIndex, FrameIndex>, std::size_t> sizes;
    for (const auto& r : records) {
        acc.similarity_ops += r.gallery_size;
        sizes.emplace(std::make_tuple(r.chunk.video_id, r.chunk.start_frame, r.chunk.end_frame), r.gallery_size);
    }
    for (const auto& [key, size] : sizes) {
        const auto& [video, start, end] = key;
        acc.gallery_sizes.push_back({Chunk{video, start, end}, size});
        acc.gallery_total += size;
    }
    return acc;
}

RunSummary summarize(std::span<const SearchRecord> records, const GroundTruth& ground_truth,
                     std::span<const double> betas, EvalCurve* pooled_curve) {
    RunSummary s;
    s.work = accounting(records);

    auto curve = compute_curve(records, ground_truth, betas);
    const bool any_defined =
        std::any_of(curve.points.begin(), curve.points.end(), [](const EvalPoint& p) { return p.defined(); });
    if (any_defined) {
        const auto star = f1_star(curve);
        s.f1_star = star.f1_star;
        s.beta_star = star.beta_star;
        s.fr_at_star = star.fr;
        s.tvr_at_star = star.tvr;
        s.map = map_area(curve);
    }
    if (pooled_curve) *pooled_curve = std::move(curve);

    std::map<std::string, std::vector<SearchRecord>> per_query;
    for (const auto& r : records) per_query[r.query_id].push_back(r);
    double f1_sum = 0.0;
    double map_sum = 0.0;
    for (const auto& [id, recs] : per_query) {
        const auto qc = compute_curve(recs, ground_truth, betas);
        if (std::none_of(qc.points.begin(), qc.points.end(), [](const EvalPoint& p) { return p.defined(); })) continue;
        f1_sum += f1_star(qc).f1_star;
        map_sum += map_area(qc);
        ++s.queries_evaluated;
    }
    if (s.queries_evaluated > 0) {
        s.per_query_f1_star_mean = f1_sum / static_cast<double>(s.queries_evaluated);
        s.per_query_map_mean = map_sum / static_cast<double>(s.queries_evaluated);
    }
    return s;
}

std::string serialize_curve(const EvalCurve& curve) {
    std::string out = "beta,fr,tvr,f1\n";
    for (const auto& p : curve.points) {
        const double f = p.defined() ? f1(p.fr, p.tvr) : std::nan("");
        out += text::format_double(p.beta) + ',' + format_or_nan(p.fr) + ',' + format_or_nan(p.tvr) + ',' +
               format_or_nan(f) + '\n';
    }
    return out;
}

nlohmann::json summary_to_json(const RunSummary& s) {
    nlohmann::json j;
    j["f1_star"] = number_or_null(s.f1_star);
    j["beta_star"] = number_or_null(s.beta_star);
    j["map"] = number_or_null(s.map);
    j["fr_at_star"] = number_or_null(s.fr_at_star);
    j["tvr_at_star"] = number_or_null(s.tvr_at_star);
    j["per_query_f1_star_mean"] = number_or_null(s.per_query_f1_star_mean);
    j["per_query_map_mean"] = number_or_null(s.per_query_map_mean);
    j["queries_evaluated"] = s.queries_evaluated;
    j["similarity_ops"] = s.work.similarity_ops;
    j["gallery_total"] = s.work.gallery_total;
    auto sizes = nlohmann::json::array();
    for (const auto& g : s.work.gallery_sizes) {
        sizes.push_back({{"video", g.chunk.video_id},
                         {"start_frame", g.chunk.start_frame},
                         {"end_frame", g.chunk.end_frame},
                         {"size", g.size}});
    }
    j["gallery_sizes"] = std::move(sizes);
    return j;
}

}  // namespace trade
