#include "fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "oracles.hpp"
#include "trade/evaluator.hpp"

namespace trade::oracle {

MetricFixture random_metric_fixture(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    const std::vector<std::string> identities{"a", "b", "c", "d", "e"};
    const int n_chunks = pick(1, 5);
    const int n_queries = pick(1, 4);
    constexpr FrameIndex kChunk = 50;

    std::vector<Chunk> chunks;
    for (int c = 0; c < n_chunks; ++c) {
        const std::string video = c % 2 == 0 ? "v0" : "v1";
        const FrameIndex start = kChunk * (c / 2);
        chunks.push_back({video, start, start + kChunk});
    }

    MetricFixture fx;
    for (const auto& chunk : chunks) {
        for (const auto& id : identities) {
            if (u(rng) < 0.4) continue;
            for (int k = pick(1, 3); k > 0; --k) {
                const FrameIndex f = chunk.start_frame + pick(0, static_cast<int>(kChunk) - 1);
                const bool taken = std::any_of(fx.ground_truth.begin(), fx.ground_truth.end(), [&](const auto& r) {
                    return r.video_id == chunk.video_id && r.frame == f && r.identity == id;
                });
                if (taken) continue;
                fx.ground_truth.push_back({chunk.video_id, f, id, {std::floor(u(rng) * 100), std::floor(u(rng) * 100), 30, 40}});
            }
        }
    }

    std::size_t seq = 0;
    for (int q = 0; q < n_queries; ++q) {
        const auto& identity = identities[static_cast<std::size_t>(pick(0, 4))];
        for (const auto& chunk : chunks) {
            SearchRecord r;
            r.query_id = "q" + std::to_string(q);
            r.identity = identity;
            r.chunk = chunk;
            r.eta = static_cast<std::size_t>(pick(1, 6));
            r.gallery_size = static_cast<std::size_t>(pick(0, 10));
            const auto shown = std::min(r.eta, r.gallery_size);

            std::vector<int> levels;
            for (std::size_t k = 0; k < shown; ++k) levels.push_back(pick(0, 50));
            std::sort(levels.rbegin(), levels.rend());
            for (std::size_t k = 0; k < shown; ++k) {
                Detection d;
                d.video_id = chunk.video_id;
                d.seq = seq++;
                d.crop_ref = "c" + std::to_string(d.seq);
                d.confidence = 0.9;
                d.frame = chunk.start_frame + pick(0, static_cast<int>(kChunk) - 1);
                d.box = {u(rng) * 100, u(rng) * 100, 30, 40};
                // Often reuse a ground-truth box, sometimes shifted across the IoU 0.5 boundary.
                std::vector<const GroundTruthRecord*> here;
                for (const auto& g : fx.ground_truth) {
                    if (g.video_id == chunk.video_id && chunk.contains(g.frame)) here.push_back(&g);
                }
                if (!here.empty() && u(rng) < 0.7) {
                    const auto* g = here[static_cast<std::size_t>(pick(0, static_cast<int>(here.size()) - 1))];
                    d.frame = g->frame;
                    d.box = g->box;
                    // Horizontal shift s gives IoU (30-s)/(30+s): exactly 0.5 at s = 10.
                    const int shift = pick(0, 3);
                    d.box.x += std::array<double, 4>{0.0, 5.0, 10.0, 12.0}[static_cast<std::size_t>(shift)];
                }
                r.top.push_back({GalleryImage{d, d.seq, 0.5}, levels[k] / 50.0, k + 1});
            }
            fx.records.push_back(std::move(r));
        }
    }
    return fx;
}

namespace {

bool same(double lib, std::optional<double> ref, double tol) {
    if (!ref) return std::isnan(lib);
    return !std::isnan(lib) && std::abs(lib - *ref) <= tol;
}

std::string show(double lib, std::optional<double> ref) {
    return "library " + (std::isnan(lib) ? std::string("undefined") : std::to_string(lib)) + ", oracle " +
           (ref ? std::to_string(*ref) : std::string("undefined"));
}

}  // namespace

std::string compare_with_oracle(const MetricFixture& fixture, std::span<const double> betas, double tol) {
    const GroundTruth gt(fixture.ground_truth);
    const auto expect = oracle_metrics(fixture.records, fixture.ground_truth, betas);
    EvalCurve curve;
    const auto summary = summarize(fixture.records, gt, betas, &curve);
    if (curve.points.size() != betas.size()) return "curve has the wrong number of points";
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const auto& p = curve.points[i];
        const auto where = " at beta " + std::to_string(betas[i]);
        if (p.beta != betas[i]) return "curve beta differs" + where;
        if (!same(p.fr, expect.fr[i], tol)) return "FR differs" + where + ": " + show(p.fr, expect.fr[i]);
        if (!same(p.tvr, expect.tvr[i], tol)) return "TVR differs" + where + ": " + show(p.tvr, expect.tvr[i]);
        if (p.alerts != expect.alerts[i]) return "alert count differs" + where;
    }
    const std::pair<const char*, std::pair<double, std::optional<double>>> scalars[] = {
        {"F1*", {summary.f1_star, expect.f1_star}},
        {"beta*", {summary.beta_star, expect.beta_star}},
        {"FR at beta*", {summary.fr_at_star, expect.fr_at_star}},
        {"TVR at beta*", {summary.tvr_at_star, expect.tvr_at_star}},
        {"mAP", {summary.map, expect.map}},
        {"per-query F1* mean", {summary.per_query_f1_star_mean, expect.per_query_f1_star_mean}},
        {"per-query mAP mean", {summary.per_query_map_mean, expect.per_query_map_mean}},
    };
    for (const auto& [name, values] : scalars) {
        if (!same(values.first, values.second, tol)) {
            return std::string(name) + " differs: " + show(values.first, values.second);
        }
    }
    return {};
}

}  // namespace trade::oracle
