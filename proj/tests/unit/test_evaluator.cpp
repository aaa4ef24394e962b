#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "support.hpp"
#include "trade/errors.hpp"
#include "trade/evaluator.hpp"

using namespace trade;
using trade::test::det;

namespace {

const BoundingBox kBox{10, 10, 100, 100};

/// Outcome for chunk `c` of video "v"; `hit` presents a crop on the query's GT box.
AlertOutcome outcome(int c, bool raised, bool hit) {
    AlertOutcome o;
    o.query_id = "q";
    o.identity = "alice";
    o.chunk = {"v", 100 * c, 100 * c + 100};
    o.raised = raised;
    if (raised) {
        const BoundingBox box = hit ? kBox : BoundingBox{500, 500, 10, 10};
        o.candidates.push_back({GalleryImage{det(100 * c + 5, box), 0, 0.5}, 0.9, 1});
    }
    return o;
}

/// alice annotated on frame 5 of every chunk in `present`.
GroundTruth truth(const std::vector<int>& present) {
    std::vector<GroundTruthRecord> r;
    for (int c : present) r.push_back({"v", 100 * c + 5, "alice", kBox});
    return GroundTruth(r);
}

EvalCurve curve_of(const std::vector<std::pair<double, double>>& fr_tvr) {
    EvalCurve c;
    double beta = 0.0;
    for (const auto& [fr, tvr] : fr_tvr) {
        c.points.push_back({beta, fr, tvr, 1});
        beta += 0.02;
    }
    return c;
}

/// Independent trapezoid integration of the TVR-vs-FR curve.
double reference_area(std::vector<std::pair<double, double>> pts) {
    std::erase_if(pts, [](const auto& p) { return std::isnan(p.first) || std::isnan(p.second); });
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> merged;
    for (std::size_t i = 0; i < pts.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < pts.size() && pts[j].first == pts[i].first) sum += pts[j++].second;
        merged.emplace_back(pts[i].first, sum / static_cast<double>(j - i));
        i = j;
    }
    double area = merged.front().first * merged.front().second;
    for (std::size_t i = 1; i < merged.size(); ++i) {
        area += (merged[i].first - merged[i - 1].first) * (merged[i].second + merged[i - 1].second) / 2.0;
    }
    return area;
}

}  // namespace

TEST_CASE("candidate match predicate") {
    const GroundTruth gt({{"v", 5, "alice", {0, 0, 100, 100}}});
    CHECK(candidate_matches_query(det(5, {0, 0, 100, 100}), gt, "alice"));
    CHECK_FALSE(candidate_matches_query(det(6, {0, 0, 100, 100}), gt, "alice"));
    CHECK_FALSE(candidate_matches_query(det(5, {0, 0, 100, 100}), gt, "bob"));
    CHECK_FALSE(candidate_matches_query(det(5, {0, 0, 100, 100}, 0.9, "x", "w"), gt, "alice"));
    // A box covering 49% of the GT box, inside it: IoU 0.49.
    const BoundingBox below{0, 0, 100, 49};
    CHECK(iou(below, {0, 0, 100, 100}) == doctest::Approx(0.49));
    CHECK_FALSE(candidate_matches_query(det(5, below), gt, "alice"));
    CHECK(candidate_matches_query(det(5, {0, 0, 100, 50}), gt, "alice"));
}

TEST_CASE("FR counts found-and-presented among present chunks") {
    const auto gt = truth({0, 1, 2, 3});
    const std::vector<AlertOutcome> outs{outcome(0, true, true), outcome(1, true, true), outcome(2, true, true),
                                         outcome(3, true, false), outcome(4, true, false)};
    CHECK(*compute_fr(outs, gt) == doctest::Approx(0.75));

    const std::vector<AlertOutcome> all{outcome(0, true, true), outcome(1, true, true)};
    CHECK(*compute_fr(all, truth({0, 1})) == 1.0);

    CHECK_FALSE(compute_fr(outs, truth({})).has_value());
    // Presented but not raised does not count.
    auto silent = outcome(0, true, true);
    silent.raised = false;
    CHECK(*compute_fr(std::vector<AlertOutcome>{silent}, truth({0})) == 0.0);
}

TEST_CASE("TVR counts alerts that present the query") {
    std::vector<AlertOutcome> outs;
    std::vector<int> present;
    for (int c = 0; c < 10; ++c) {
        outs.push_back(outcome(c, true, c < 4));
        present.push_back(c);
    }
    outs.push_back(outcome(10, false, false));
    CHECK(*compute_tvr(outs, truth(present)) == doctest::Approx(0.4));

    const std::vector<AlertOutcome> none{outcome(0, false, false)};
    CHECK_FALSE(compute_tvr(none, truth({0})).has_value());
    const std::vector<AlertOutcome> good{outcome(0, true, true), outcome(1, true, true)};
    CHECK(*compute_tvr(good, truth({0, 1})) == 1.0);
}

TEST_CASE("f1 examples and bounds") {
    CHECK(f1(1.0, 1.0) == 1.0);
    CHECK(f1(0.7, 0.0) == 0.0);
    CHECK(f1(0.0, 0.0) == 0.0);
    CHECK(f1(0.5, 0.5) == doctest::Approx(0.5));
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        CHECK(f1(a, b) <= 1.0);
        CHECK(f1(a, b) <= 2.0 * std::min(a, b) + 1e-15);
        CHECK(f1(a, b) >= std::min(a, b) - 1e-15);
    }
}

TEST_CASE("beta grid") {
    const auto g = beta_grid();
    REQUIRE(g.size() == 51);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK(beta_grid(0.25).size() == 5);
    CHECK_THROWS_AS(beta_grid(0.3), ConfigError);
    CHECK_THROWS_AS(beta_grid(0.0), ConfigError);
}

TEST_CASE("F1* picks the best point and the smallest beta on ties") {
    const auto flat = curve_of({{0.6, 0.6}, {0.6, 0.6}, {0.6, 0.6}});
    const auto s = f1_star(flat);
    CHECK(s.f1_star == doctest::Approx(0.6));
    CHECK(s.beta_star == 0.0);

    EvalCurve one;
    one.points.push_back({0.3, 0.8, 0.4, 2});
    one.points.push_back({0.5, std::nan(""), std::nan(""), 0});
    const auto t = f1_star(one);
    CHECK(t.beta_star == 0.3);
    CHECK(t.fr == 0.8);
    CHECK(t.tvr == 0.4);
    CHECK(t.f1_star == doctest::Approx(f1(0.8, 0.4)));

    EvalCurve empty;
    empty.points.push_back({0.0, std::nan(""), 0.5, 0});
    CHECK_THROWS_AS(f1_star(empty), EvaluationError);
}

TEST_CASE("F1* equals an exhaustive scan of random curves") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> level(0, 10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        EvalCurve c;
        for (const double beta : beta_grid()) {
            const bool undefined = u(rng) < 0.2;
            c.points.push_back({beta, undefined ? std::nan("") : level(rng) / 10.0, level(rng) / 10.0, 1});
        }
        if (std::none_of(c.points.begin(), c.points.end(), [](const EvalPoint& p) { return p.defined(); })) continue;
        double best = -1.0, best_beta = 0.0;
        for (const auto& p : c.points) {
            if (!p.defined()) continue;
            const double v = f1(p.fr, p.tvr);
            if (v > best) {
                best = v;
                best_beta = p.beta;
            }
        }
        const auto s = f1_star(c);
        CHECK(s.f1_star == best);
        CHECK(s.beta_star == best_beta);
        CHECK(s.f1_star == f1(s.fr, s.tvr));
    }
}

TEST_CASE("mAP examples") {
    CHECK(map_area(curve_of({{1.0, 1.0}})) == doctest::Approx(1.0));
    CHECK(map_area(curve_of({{0.0, 1.0}, {1.0, 0.0}})) == doctest::Approx(0.5));
    CHECK(map_area(curve_of({{0.2, 0.0}, {0.5, 0.0}, {0.9, 0.0}})) == 0.0);
    // Equal FR values are averaged before integrating.
    CHECK(map_area(curve_of({{1.0, 1.0}, {1.0, 0.0}})) == doctest::Approx(0.5));
    EvalCurve empty;
    CHECK_THROWS_AS(map_area(empty), EvaluationError);
}

TEST_CASE("mAP matches an independent trapezoid and ignores point order") {
    std::mt19937_64 rng(18);
    std::uniform_int_distribution<int> level(0, 20);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::pair<double, double>> pts;
        const int n = 1 + trial % 51;
        for (int i = 0; i < n; ++i) {
            pts.emplace_back(u(rng) < 0.1 ? std::nan("") : level(rng) / 20.0, level(rng) / 20.0);
        }
        if (std::all_of(pts.begin(), pts.end(), [](const auto& p) { return std::isnan(p.first); })) continue;
        const double expected = reference_area(pts);
        const auto forward = curve_of(pts);
        std::shuffle(pts.begin(), pts.end(), rng);
        const auto shuffled = curve_of(pts);
        CHECK(std::abs(map_area(forward) - expected) <= 1e-12);
        CHECK(std::abs(map_area(shuffled) - expected) <= 1e-12);
        CHECK(map_area(forward) >= 0.0);
        CHECK(map_area(forward) <= 1.0 + 1e-12);
    }
}

TEST_CASE("evaluator equals the exhaustive oracle on random fixtures") {
    std::mt19937_64 rng(19);
    const auto betas = beta_grid();
    for (int trial = 0; trial < 100; ++trial) {
        const auto fx = oracle::random_metric_fixture(rng);
        const auto why = oracle::compare_with_oracle(fx, betas, 1e-12);
        CHECK_MESSAGE(why.empty(), "fixture ", trial, ": ", why);
    }
}

TEST_CASE("FR and alert counts never increase with beta") {
    std::mt19937_64 rng(20);
    const auto betas = beta_grid();
    for (int trial = 0; trial < 100; ++trial) {
        const auto fx = oracle::random_metric_fixture(rng);
        const auto curve = compute_curve(fx.records, GroundTruth(fx.ground_truth), betas);
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            const auto& a = curve.points[i - 1];
            const auto& b = curve.points[i];
            CHECK(b.alerts <= a.alerts);
            if (!std::isnan(a.fr)) CHECK(b.fr <= a.fr);
        }
    }
}

TEST_CASE("work accounting") {
    std::vector<SearchRecord> records;
    for (const auto& q : {"q0", "q1"}) {
        for (int c = 0; c < 3; ++c) {
            SearchRecord r;
            r.query_id = q;
            r.chunk = {"v", 1000 * c, 1000 * c + 1000};
            r.gallery_size = static_cast<std::size_t>(10 * (c + 1));
            records.push_back(r);
        }
    }
    const auto a = accounting(records);
    CHECK(a.gallery_sizes.size() == 3);
    CHECK(a.gallery_total == 60);
    CHECK(a.similarity_ops == 120);
    CHECK(accounting({}).similarity_ops == 0);
}

TEST_CASE("degenerate runs summarise to undefined metrics") {
    const auto s = summarize({}, GroundTruth{}, beta_grid());
    CHECK(std::isnan(s.f1_star));
    CHECK(std::isnan(s.map));
    CHECK(s.queries_evaluated == 0);
    const auto j = summary_to_json(s);
    CHECK(j.at("map").is_null());
}

TEST_CASE("curve serialisation writes nan for undefined points") {
    EvalCurve c;
    c.points.push_back({0.0, 0.5, 0.25, 3});
    c.points.push_back({0.5, std::nan(""), std::nan(""), 0});
    const auto text = serialize_curve(c);
    CHECK(text.rfind("beta,fr,tvr,f1\n", 0) == 0);
    CHECK(text.find("0.5,nan,nan,nan") != std::string::npos);
}
