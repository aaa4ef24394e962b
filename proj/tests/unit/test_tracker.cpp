#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "support.hpp"
#include "trade/errors.hpp"
#include "trade/tracker.hpp"

using namespace trade;
using trade::test::det;

namespace {

const GreedyIouTracker kTracker(0.3);

TrackletBuildConfig config(std::size_t n, GalleryMode mode = GalleryMode::TrADe) {
    TrackletBuildConfig c;
    c.max_len = n;
    c.mode = mode;
    return c;
}

/// A person standing still at `x` on frames [first, last].
std::vector<Detection> still_person(FrameIndex first, FrameIndex last, double x, const std::string& tag = "p") {
    std::vector<Detection> out;
    for (FrameIndex f = first; f <= last; ++f) out.push_back(det(f, {x, 10, 20, 50}, 0.9, tag + std::to_string(f)));
    return out;
}

std::vector<Detection> by_frame(std::vector<Detection> d) {
    std::stable_sort(d.begin(), d.end(), [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
    return d;
}

std::vector<std::vector<std::string>> refs(const std::vector<Tracklet>& ts) {
    std::vector<std::vector<std::string>> out;
    for (const auto& t : ts) {
        out.emplace_back();
        for (const auto& d : t.detections) out.back().push_back(d.crop_ref);
    }
    return out;
}

/// Random scene: a few drifting people with misses and the odd spurious box.
std::vector<Detection> random_scene(std::mt19937_64& rng, FrameIndex frames) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct P {
        double x, y, vx, vy;
        FrameIndex from, to;
    };
    std::vector<P> people;
    const int n = 1 + static_cast<int>(u(rng) * 4);
    for (int i = 0; i < n; ++i) {
        const auto from = static_cast<FrameIndex>(u(rng) * frames * 0.5);
        const auto to = from + static_cast<FrameIndex>(u(rng) * frames);
        people.push_back({u(rng) * 200, u(rng) * 100, (u(rng) - 0.5) * 8, (u(rng) - 0.5) * 4, from, to});
    }
    std::vector<Detection> out;
    for (FrameIndex f = 0; f < frames; ++f) {
        int count = 0;
        for (const auto& p : people) {
            if (f < p.from || f > p.to || u(rng) < 0.1 || count == 4) continue;
            const double t = static_cast<double>(f - p.from);
            out.push_back(det(f, {p.x + p.vx * t, p.y + p.vy * t, 20, 50}));
            ++count;
        }
        if (u(rng) < 0.05) out.push_back(det(f, {u(rng) * 200, u(rng) * 100, 15, 30}));
    }
    return out;
}

}  // namespace

TEST_CASE("greedy step matches a clear overlap and drops a weak one") {
    const std::vector<BoundingBox> track{{0, 0, 10, 10}};
    const std::vector<Detection> strong{det(1, {0, 0, 10, 9})};
    const auto a = greedy_iou_step(track, strong, 0.3);
    REQUIRE(a.track_to_detection.size() == 1);
    CHECK(a.track_to_detection[0] == std::optional<std::size_t>(0));

    const std::vector<Detection> weak{det(1, {8.2, 0, 10, 10})};
    CHECK(iou(track[0], weak[0].box) < 0.3);
    CHECK_FALSE(greedy_iou_step(track, weak, 0.3).track_to_detection[0].has_value());
}

TEST_CASE("greedy assignment on the 2x2 example takes 0.8 and leaves the second track lost") {
    const std::vector<std::vector<double>> m{{0.8, 0.6}, {0.7, 0.2}};
    const auto a = greedy_assign(m, 2, 0.3);
    CHECK(a.track_to_detection[0] == std::optional<std::size_t>(0));
    CHECK_FALSE(a.track_to_detection[1].has_value());

    // Brute force over every one-to-one assignment: the greedy result is not the
    // maximum-total one, which documents that the step is greedy by design.
    double best_total = 0.0;
    for (int t0 = -1; t0 < 2; ++t0) {
        for (int t1 = -1; t1 < 2; ++t1) {
            if (t0 >= 0 && t0 == t1) continue;
            double total = 0.0;
            if (t0 >= 0) total += m[0][t0];
            if (t1 >= 0) total += m[1][t1];
            best_total = std::max(best_total, total);
        }
    }
    CHECK(best_total == doctest::Approx(1.3));
}

TEST_CASE("greedy assignment equals repeated maximum extraction on random matrices") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> dim(0, 5);
    std::uniform_int_distribution<int> level(0, 10);  // coarse levels force ties
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t nt = dim(rng), nd = dim(rng);
        std::vector<std::vector<double>> m(nt, std::vector<double>(nd));
        for (auto& row : m) {
            for (auto& v : row) v = level(rng) / 10.0;
        }
        const auto got = greedy_assign(m, nd, 0.3);

        std::vector<std::optional<std::size_t>> expect(nt);
        std::vector<bool> used_t(nt), used_d(nd);
        while (true) {
            double best = -1.0;
            std::size_t bt = 0, bd = 0;
            for (std::size_t t = 0; t < nt; ++t) {
                for (std::size_t d = 0; d < nd; ++d) {
                    if (used_t[t] || used_d[d] || m[t][d] < 0.3 || m[t][d] <= best) continue;
                    best = m[t][d];
                    bt = t;
                    bd = d;
                }
            }
            if (best < 0.0) break;
            used_t[bt] = used_d[bd] = true;
            expect[bt] = bd;
        }
        CHECK(got.track_to_detection == expect);
    }
}

TEST_CASE("greedy assignment never gives one detection to two tracks") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<double>> m(4, std::vector<double>(3));
        for (auto& row : m) {
            for (auto& v : row) v = u(rng);
        }
        std::set<std::size_t> seen;
        for (const auto& d : greedy_assign(m, 3, 0.3).track_to_detection) {
            if (d) CHECK(seen.insert(*d).second);
        }
    }
}

TEST_CASE("fifty frames of one person split into 20, 20, 10") {
    const auto dets = still_person(0, 49, 100);
    const auto ts = build_tracklets(dets, {"v", 0, 50}, config(20), kTracker);
    REQUIRE(ts.size() == 3);
    CHECK(ts[0].length() == 20);
    CHECK(ts[1].length() == 20);
    CHECK(ts[2].length() == 10);
    CHECK(ts[0].first_frame() == 0);
    CHECK(ts[1].first_frame() == 20);
    CHECK(ts[2].first_frame() == 40);
    CHECK(refs(ts) == refs(oracle::oracle_tracklets(dets, 0, 50, GalleryMode::TrADe, 20, 0.3)));
}

TEST_CASE("a person appearing between detector frames waits for the next one") {
    const auto dets = still_person(7, 60, 100);
    const auto ts = build_tracklets(dets, {"v", 0, 100}, config(20), kTracker);
    REQUIRE_FALSE(ts.empty());
    CHECK(ts.front().first_frame() == 20);
}

TEST_CASE("detector schedule is relative to the chunk start") {
    const auto dets = still_person(1005, 1040, 100);
    const auto ts = build_tracklets(dets, {"v", 1005, 1100}, config(20), kTracker);
    REQUIRE(ts.size() == 2);
    CHECK(ts[0].first_frame() == 1005);
    CHECK(ts[1].first_frame() == 1025);
}

TEST_CASE("N=1 in TrADe mode is Baseline") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto dets = random_scene(rng, 80);
        const auto trade = build_tracklets(dets, {"v", 0, 80}, config(1), kTracker);
        const auto base = build_tracklets(dets, {"v", 0, 80}, config(20, GalleryMode::Baseline), kTracker);
        REQUIRE(trade.size() == base.size());
        for (std::size_t i = 0; i < trade.size(); ++i) CHECK(trade[i].detections == base[i].detections);
        CHECK(base.size() == dets.size());
    }
}

TEST_CASE("Skip emits exactly the detector-frame detections") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const auto dets = random_scene(rng, 150);
        const auto ts = build_tracklets(dets, {"v", 0, 150}, config(10, GalleryMode::Skip), kTracker);
        std::size_t expected = 0;
        for (const auto& d : dets) expected += d.frame % 10 == 0 ? 1 : 0;
        CHECK(ts.size() == expected);
        for (const auto& t : ts) {
            CHECK(t.length() == 1);
            CHECK(t.first_frame() % 10 == 0);
        }
    }
}

TEST_CASE("tracklet invariants and oracle equivalence on random scenes") {
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<std::size_t> n_dist(1, 25);
    for (int trial = 0; trial < 100; ++trial) {
        const FrameIndex frames = 120 + trial % 80;
        const auto dets = random_scene(rng, frames);
        const std::size_t n = n_dist(rng);
        for (auto mode : {GalleryMode::Baseline, GalleryMode::Skip, GalleryMode::TrADe}) {
            const auto ts = build_tracklets(dets, {"v", 0, frames}, config(n, mode), kTracker, 0);
            const auto expect = oracle::oracle_tracklets(dets, 0, frames, mode, n, 0.3);
            REQUIRE(ts.size() == expect.size());
            for (std::size_t i = 0; i < ts.size(); ++i) {
                CHECK(ts[i].id == expect[i].id);
                CHECK(ts[i].detections == expect[i].detections);
            }

            std::set<std::size_t> used;
            for (const auto& t : ts) {
                CHECK(t.length() >= 1);
                CHECK(t.length() <= n);
                for (std::size_t k = 0; k < t.length(); ++k) {
                    CHECK(used.insert(t.detections[k].seq).second);
                    if (k > 0) CHECK(t.detections[k].frame == t.detections[k - 1].frame + 1);
                    CHECK(t.detections[k].video_id == t.detections[0].video_id);
                }
            }
        }
    }
}

TEST_CASE("P persistent people over F frames give P*ceil(F/N) tracklets") {
    for (std::size_t p : {1u, 3u}) {
        for (FrameIndex f : {1, 37, 100}) {
            for (std::size_t n : {1u, 7u, 20u}) {
                std::vector<Detection> dets;
                for (std::size_t k = 0; k < p; ++k) {
                    auto one = still_person(0, f - 1, 100.0 * static_cast<double>(k), "p" + std::to_string(k) + "_");
                    dets.insert(dets.end(), one.begin(), one.end());
                }
                dets = by_frame(dets);
                const auto ts = build_tracklets(dets, {"v", 0, f}, config(n), kTracker);
                const auto per_person = static_cast<std::size_t>((f + static_cast<FrameIndex>(n) - 1) /
                                                                 static_cast<FrameIndex>(n));
                CHECK(ts.size() == p * per_person);
            }
        }
    }
}

TEST_CASE("tracklet ids start at first_id in creation order") {
    const auto dets = still_person(0, 39, 0);
    const auto ts = build_tracklets(dets, {"v", 0, 40}, config(20), kTracker, 100);
    REQUIRE(ts.size() == 2);
    CHECK(ts[0].id == 100);
    CHECK(ts[1].id == 101);
}

TEST_CASE("a frame gap closes the track") {
    auto dets = still_person(0, 4, 0);
    const auto later = still_person(6, 9, 0, "q");
    dets.insert(dets.end(), later.begin(), later.end());
    // Frame 5 is missing, and 6 is not a detector frame for N=10, so the
    // second run never enters a tracklet.
    const auto ts = build_tracklets(dets, {"v", 0, 10}, config(10), kTracker);
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].length() == 5);
}

TEST_CASE("build_tracklets rejects bad input") {
    const auto dets = still_person(0, 5, 0);
    CHECK_THROWS_AS(build_tracklets(dets, {"v", 0, 5}, config(5), kTracker), ConfigError);
    CHECK_THROWS_AS(build_tracklets(dets, {"v", 0, 10}, config(0), kTracker), ConfigError);
    std::vector<Detection> reversed(dets.rbegin(), dets.rend());
    CHECK_THROWS_AS(build_tracklets(reversed, {"v", 0, 10}, config(5), kTracker), ConfigError);
    auto bad = config(5);
    bad.iou_match_threshold = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK(build_tracklets(std::vector<Detection>{}, {"v", 0, 10}, config(5), kTracker).empty());
}

TEST_CASE("mode and tracker names") {
    CHECK(parse_gallery_mode("TrADe") == GalleryMode::TrADe);
    CHECK(parse_gallery_mode("baseline") == GalleryMode::Baseline);
    CHECK(parse_gallery_mode("SKIP") == GalleryMode::Skip);
    CHECK_THROWS_AS(parse_gallery_mode("fast"), ConfigError);
    for (auto m : {GalleryMode::Baseline, GalleryMode::Skip, GalleryMode::TrADe}) {
        CHECK(parse_gallery_mode(to_string(m)) == m);
    }
    CHECK(make_tracker("greedy-iou", 0.3)->name() == "greedy-iou");
    CHECK_THROWS_AS(make_tracker("re3", 0.3), ConfigError);
}

TEST_CASE("coverage of a perfectly tracked person") {
    const auto dets = still_person(0, 29, 50);
    std::vector<GroundTruthRecord> gt;
    for (const auto& d : dets) gt.push_back({"v", d.frame, "a", d.box});
    const auto ts = build_tracklets(dets, {"v", 0, 30}, config(10), kTracker);
    const auto report = track_coverage_stats(ts, GroundTruth(gt));
    REQUIRE(report.identities.size() == 1);
    CHECK(report.identities[0].coverage == 1.0);
    CHECK(report.identities[0].gt_frames == 30);
    CHECK(report.label_switches == 0);
}

TEST_CASE("a tracker that jumps from one person to another counts one switch") {
    // a stands at x=0 on frames 0..4; b appears on frame 5 right next to where
    // a was, and a vanishes, so the live track continues onto b.
    std::vector<GroundTruthRecord> gt;
    std::vector<Detection> dets;
    for (FrameIndex f = 0; f < 5; ++f) {
        gt.push_back({"v", f, "a", {0, 0, 20, 50}});
        dets.push_back(det(f, {0, 0, 20, 50}));
    }
    for (FrameIndex f = 5; f < 10; ++f) {
        gt.push_back({"v", f, "b", {4, 0, 20, 50}});
        dets.push_back(det(f, {4, 0, 20, 50}));
    }
    const auto ts = build_tracklets(dets, {"v", 0, 10}, config(10), kTracker);
    REQUIRE(ts.size() == 1);
    const auto report = track_coverage_stats(ts, GroundTruth(gt));
    CHECK(report.label_switches == 1);
    REQUIRE(report.identities.size() == 2);
    CHECK(report.identities[0].identity == "a");
    CHECK(report.identities[0].coverage == 1.0);
    CHECK(report.identities[1].coverage == 1.0);
}

TEST_CASE("no tracklets means zero coverage") {
    const GroundTruth gt({{"v", 0, "a", {0, 0, 5, 5}}, {"v", 1, "b", {0, 0, 5, 5}}});
    const auto report = track_coverage_stats({}, gt);
    REQUIRE(report.identities.size() == 2);
    for (const auto& c : report.identities) CHECK(c.coverage == 0.0);
    CHECK(report.label_switches == 0);
}
