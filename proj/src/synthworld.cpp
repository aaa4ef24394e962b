#include "trade/synthworld.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <set>

#include "trade/errors.hpp"

namespace trade::synth {

namespace {

using Rng = std::mt19937_64;

constexpr double kBorder = 10.0;  // clean walkers keep this distance from frame edges

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
bool bernoulli(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Rng stream(std::uint64_t seed, std::uint64_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
    return Rng(seq);
}

std::string zero_pad(std::size_t v, int width) {
    auto s = std::to_string(v);
    return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

std::vector<double> gaussian_vector(Rng& rng, std::size_t dim, double scale) {
    std::normal_distribution<double> n(0.0, scale / std::sqrt(static_cast<double>(dim)));
    std::vector<double> v(dim);
    for (auto& x : v) x = n(rng);
    return v;
}

std::vector<double> random_unit(Rng& rng, std::size_t dim) {
    while (true) {
        auto v = gaussian_vector(rng, dim, 1.0);
        double sq = 0.0;
        for (double x : v) sq += x * x;
        if (sq > 1e-12) {
            const double norm = std::sqrt(sq);
            for (auto& x : v) x /= norm;
            return v;
        }
    }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Bisection is plenty here; called once per world.
double inverse_normal_cdf(double p) {
    if (p <= 0.0) return -8.0;
    if (p >= 1.0) return 8.0;
    double lo = -8.0;
    double hi = 8.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// One continuous on-screen appearance of an identity.
struct Walker {
    std::size_t identity = 0;
    FrameIndex start = 0;
    FrameIndex end = 0;  // exclusive
    double x0 = 0.0;
    double x1 = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
    // Persistent walkers sway inside their column instead of travelling.
    bool persistent = false;
    double sway_amplitude = 0.0;
    double sway_period = 1.0;
    double sway_phase = 0.0;
    std::optional<std::size_t> occluder;  // walker that hides this one when they overlap
    std::vector<double> appearance;       // feature offset shared by all crops of this appearance

    BoundingBox box_at(FrameIndex f) const {
        double x = x0;
        if (persistent) {
            x = x0 + sway_amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(f) / sway_period + sway_phase);
        } else if (end - start > 1) {
            x = x0 + (x1 - x0) * static_cast<double>(f - start) / static_cast<double>(end - start - 1);
        }
        return {x, y, w, h};
    }
};

class WorldBuilder {
public:
    explicit WorldBuilder(const WorldConfig& c) : c_(c) {}

    Dataset build() {
        make_anchors();
        std::vector<GroundTruthRecord> gt;
        std::set<std::size_t> appeared;
        for (std::size_t v = 0; v < c_.n_videos; ++v) {
            auto rng = stream(c_.seed, 1000 + v);
            const auto video = "v" + zero_pad(v, 2);
            auto walkers = plan_walkers(rng);
            for (const auto& wk : walkers) appeared.insert(wk.identity);
            render(rng, video, walkers, gt);
        }
        data_.ground_truth = GroundTruth(std::move(gt));
        make_queries(appeared);
        return std::move(data_);
    }

private:
    void make_anchors() {
        auto rng = stream(c_.seed, 1);
        person_direction_ = random_unit(rng, c_.embedding_dim);
        anchors_.reserve(c_.n_identities);
        std::size_t attempts = 0;
        while (anchors_.size() < c_.n_identities) {
            if (++attempts > 100000) {
                throw GenerationError("cannot place " + std::to_string(c_.n_identities) +
                                      " identity anchors with pairwise cosine <= " +
                                      std::to_string(c_.max_anchor_cosine) + " in dimension " +
                                      std::to_string(c_.embedding_dim));
            }
            // Identity-specific part orthogonal to the shared person direction.
            auto a = random_unit(rng, c_.embedding_dim);
            const double along = dot(a, person_direction_);
            for (std::size_t i = 0; i < a.size(); ++i) a[i] -= along * person_direction_[i];
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += c_.shared_component * person_direction_[i];
            const auto unit = Embedding::normalized(a);
            a.assign(unit.values().begin(), unit.values().end());
            const bool separated = std::all_of(anchors_.begin(), anchors_.end(), [&](const std::vector<double>& b) {
                return dot(a, b) <= c_.max_anchor_cosine;
            });
            if (separated) anchors_.push_back(std::move(a));
        }
    }

    std::string identity_name(std::size_t i) const { return "id" + zero_pad(i, 3); }

    std::vector<Walker> plan_walkers(Rng& rng) {
        std::vector<Walker> walkers;
        std::vector<FrameIndex> busy_until(c_.n_identities, -1);
        const FrameIndex frames = c_.frames_per_video;

        // Persistent people: one column each, distinct identities.
        if (c_.persistent_persons > 0) {
            std::vector<std::size_t> ids(c_.n_identities);
            for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
            std::shuffle(ids.begin(), ids.end(), rng);
            const double col = c_.frame_width / static_cast<double>(c_.persistent_persons);
            for (std::size_t p = 0; p < c_.persistent_persons; ++p) {
                Walker wk;
                wk.identity = ids[p];
                wk.persistent = true;
                wk.start = 0;
                wk.end = frames;
                const double h_cap = 0.6 * col * 2.5;
                const double h_draw = uniform(rng, c_.box_height_min, c_.box_height_max);
                wk.h = std::min(h_draw, h_cap);
                wk.w = wk.h / 2.5;
                const double foot = uniform(rng, wk.h + kBorder, c_.frame_height - kBorder);
                wk.y = foot - wk.h;
                wk.x0 = col * static_cast<double>(p) + (col - wk.w) / 2.0;
                wk.sway_amplitude = std::max(0.0, std::min(0.5 * ((col - wk.w) / 2.0 - 1.0), 20.0));
                wk.sway_period = uniform(rng, 150.0, 400.0);
                wk.sway_phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
                busy_until[wk.identity] = frames;
                walkers.push_back(wk);
            }
        }

        std::poisson_distribution<int> arrivals(c_.entry_rate);
        std::uniform_int_distribution<FrameIndex> duration(c_.min_visible, c_.max_visible);
        for (FrameIndex f = 0; f < frames && c_.entry_rate > 0.0; ++f) {
            const int count = arrivals(rng);
            for (int a = 0; a < count; ++a) {
                const bool crossing = bernoulli(rng, c_.crossing_rate);
                const FrameIndex d = duration(rng);
                const FrameIndex end = std::min(f + d, frames);
                auto first = free_identity(rng, busy_until, f);
                if (!first) continue;
                busy_until[*first] = end;
                std::optional<std::size_t> second;
                if (crossing) {
                    second = free_identity(rng, busy_until, f);
                    if (second) busy_until[*second] = end;
                }
                add_transient(rng, walkers, *first, second, f, end);
            }
        }
        for (auto& wk : walkers) wk.appearance = gaussian_vector(rng, c_.embedding_dim, c_.embedding_noise);
        return walkers;
    }

    std::optional<std::size_t> free_identity(Rng& rng, const std::vector<FrameIndex>& busy_until, FrameIndex f) const {
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < busy_until.size(); ++i) {
            if (busy_until[i] < f) free.push_back(i);
        }
        if (free.empty()) return std::nullopt;
        return free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
    }

    void add_transient(Rng& rng, std::vector<Walker>& walkers, std::size_t id, std::optional<std::size_t> partner,
                       FrameIndex start, FrameIndex end) const {
        Walker a;
        a.identity = id;
        a.start = start;
        a.end = end;
        a.h = uniform(rng, c_.box_height_min, c_.box_height_max);
        a.w = a.h / uniform(rng, 2.3, 2.7);
        const double foot = uniform(rng, a.h + kBorder, c_.frame_height - kBorder);
        a.y = foot - a.h;
        const double span = c_.frame_width - a.w - 2.0 * kBorder;
        const double travel = std::min(span, uniform(rng, 0.3, 1.0) * c_.max_speed * static_cast<double>(end - start));
        const double left = uniform(rng, kBorder, kBorder + span - travel);
        const bool rightwards = bernoulli(rng, 0.5);
        a.x0 = rightwards ? left : left + travel;
        a.x1 = rightwards ? left + travel : left;
        walkers.push_back(a);
        if (!partner) return;

        Walker b = a;
        b.identity = *partner;
        b.h = std::clamp(a.h * uniform(rng, 0.95, 1.05), 1.0, c_.frame_height - 2.0 * kBorder);
        b.w = b.h / uniform(rng, 2.3, 2.7);
        b.y = std::clamp(foot - b.h + uniform(rng, -3.0, 3.0), kBorder, c_.frame_height - kBorder - b.h);
        b.x0 = std::clamp(a.x1, kBorder, c_.frame_width - kBorder - b.w);
        b.x1 = std::clamp(a.x0, kBorder, c_.frame_width - kBorder - b.w);
        b.occluder = walkers.size() - 1;
        walkers.push_back(b);
    }

    // Latent scores are N(+gap/2, 1) for clean crops and N(-gap/2, 1) for
    // anomalous ones, squashed into (0,1). P(anomalous < clean) = q.
    double latent_score(Rng& rng, double mean) const {
        const double z = std::normal_distribution<double>(mean, 1.0)(rng);
        return 1.0 / (1.0 + std::exp(-z));
    }
    double clean_score(Rng& rng) const { return latent_score(rng, 0.5 * score_gap_); }
    double anomalous_score(Rng& rng) const { return latent_score(rng, -0.5 * score_gap_); }

    Embedding clean_embedding(Rng& rng, const Walker& wk) const {
        auto v = gaussian_vector(rng, c_.embedding_dim, c_.frame_noise);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += anchors_[wk.identity][i] + wk.appearance[i];
        return Embedding::normalized(std::move(v));
    }

    /// A fresh appearance of `identity`, as seen by another camera.
    Embedding query_embedding(Rng& rng, std::size_t identity) const {
        auto v = gaussian_vector(rng, c_.embedding_dim, c_.embedding_noise);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += anchors_[identity][i];
        return Embedding::normalized(std::move(v));
    }

    /// Content of a crop that does not show one whole person: a random draw
    /// around the generic person direction.
    std::vector<double> junk(Rng& rng) const {
        auto v = gaussian_vector(rng, c_.embedding_dim, c_.junk_spread);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += person_direction_[i];
        const auto unit = Embedding::normalized(std::move(v));
        return {unit.values().begin(), unit.values().end()};
    }

    Embedding corrupted_embedding(Rng& rng, std::size_t identity) const {
        auto r = junk(rng);
        std::vector<double> v(c_.embedding_dim);
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = (1.0 - c_.bad_lambda) * anchors_[identity][i] + c_.bad_lambda * r[i];
        }
        return Embedding::normalized(std::move(v));
    }

    BoundingBox random_box(Rng& rng) const {
        const double h = uniform(rng, 0.5 * c_.box_height_min, c_.box_height_max);
        const double w = h / uniform(rng, 1.0, 4.0);
        const double x = uniform(rng, 0.0, std::max(1.0, c_.frame_width - w));
        const double y = uniform(rng, 0.0, std::max(1.0, c_.frame_height - h));
        return {x, y, w, h};
    }

    void add_detection(const std::string& video, FrameIndex f, std::size_t& k, const BoundingBox& box, double conf,
                       Embedding emb, double score) {
        Detection d;
        d.video_id = video;
        d.frame = f;
        d.box = box;
        d.confidence = conf;
        d.crop_ref = video + "_f" + std::to_string(f) + "_" + std::to_string(k++);
        d.seq = seq_++;
        data_.embeddings.insert(d.crop_ref, std::move(emb));
        data_.scores.insert(d.crop_ref, score);
        data_.detections[video].push_back(std::move(d));
    }

    void render(Rng& rng, const std::string& video, const std::vector<Walker>& walkers,
                std::vector<GroundTruthRecord>& gt) {
        std::normal_distribution<double> jitter(0.0, c_.jitter_sigma > 0.0 ? c_.jitter_sigma : 1.0);
        std::poisson_distribution<int> clutter(c_.clutter_rate > 0.0 ? c_.clutter_rate : 1.0);
        std::poisson_distribution<int> false_pos(c_.false_positive_rate > 0.0 ? c_.false_positive_rate : 1.0);

        for (FrameIndex f = 0; f < c_.frames_per_video; ++f) {
            std::size_t k = 0;
            for (const auto& wk : walkers) {
                if (f < wk.start || f >= wk.end) continue;
                const auto truth = wk.box_at(f);
                gt.push_back({video, f, identity_name(wk.identity), truth});

                bool hidden = false;
                if (wk.occluder) {
                    const auto& front = walkers[*wk.occluder];
                    if (f >= front.start && f < front.end && iou(truth, front.box_at(f)) > c_.occlusion_iou) {
                        hidden = bernoulli(rng, c_.occlusion_miss);
                    }
                }
                const bool missed = bernoulli(rng, c_.miss_probability);
                if (hidden || missed) continue;

                BoundingBox box = truth;
                if (c_.jitter_sigma > 0.0) {
                    const double dx = jitter(rng);
                    const double dy = jitter(rng);
                    const double dw = jitter(rng);
                    const double dh = jitter(rng);
                    box = {box.x + dx, box.y + dy, std::max(4.0, box.w + dw), std::max(4.0, box.h + dh)};
                }
                if (bernoulli(rng, c_.p_bad)) {
                    // Truncated, loosely framed crop: upper body with extra background.
                    const double hf = uniform(rng, 0.6, 0.85);
                    const double wf = uniform(rng, 1.0, 1.3);
                    const double cx = box.x + box.w / 2.0;
                    box = {cx - box.w * wf / 2.0, box.y, box.w * wf, box.h * hf};
                    const double conf = uniform(rng, 0.5, 0.9);
                    auto emb = corrupted_embedding(rng, wk.identity);
                    add_detection(video, f, k, box, conf, std::move(emb), anomalous_score(rng));
                } else {
                    const double conf = uniform(rng, 0.6, 1.0);
                    auto emb = clean_embedding(rng, wk);
                    add_detection(video, f, k, box, conf, std::move(emb), clean_score(rng));
                }
            }
            const int n_fp = c_.false_positive_rate > 0.0 ? false_pos(rng) : 0;
            for (int i = 0; i < n_fp; ++i) {
                if (bernoulli(rng, c_.miss_probability)) continue;
                const auto box = random_box(rng);
                const double conf = uniform(rng, 0.5, 0.8);
                auto emb = Embedding::normalized(junk(rng));
                add_detection(video, f, k, box, conf, std::move(emb), anomalous_score(rng));
            }
            const int n_clutter = c_.clutter_rate > 0.0 ? clutter(rng) : 0;
            for (int i = 0; i < n_clutter; ++i) {
                if (bernoulli(rng, c_.miss_probability)) continue;
                const auto box = random_box(rng);
                const double conf = uniform(rng, 0.05, 0.45);
                auto emb = Embedding::normalized(random_unit(rng, c_.embedding_dim));
                add_detection(video, f, k, box, conf, std::move(emb), uniform(rng, 0.0, 0.4));
            }
        }
    }

    void make_queries(const std::set<std::size_t>& appeared) {
        if (appeared.size() < c_.n_queries) {
            throw GenerationError("only " + std::to_string(appeared.size()) + " identities appear, cannot draw " +
                                  std::to_string(c_.n_queries) + " queries");
        }
        auto rng = stream(c_.seed, 2);
        std::vector<std::size_t> pool(appeared.begin(), appeared.end());
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(c_.n_queries);
        std::sort(pool.begin(), pool.end());
        for (std::size_t i = 0; i < pool.size(); ++i) {
            data_.queries.push_back({"q" + zero_pad(i, 3), identity_name(pool[i]), query_embedding(rng, pool[i])});
        }
    }

    const WorldConfig& c_;
    double score_gap_ = std::numbers::sqrt2 * inverse_normal_cdf(c_.scorer_fidelity);
    std::vector<double> person_direction_;
    std::vector<std::vector<double>> anchors_;
    Dataset data_;
    std::size_t seq_ = 0;
};

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw GenerationError(std::string(name) + " must lie in [0,1]");
}

}  // namespace

void WorldConfig::validate() const {
    require_probability(crossing_rate, "crossing_rate");
    require_probability(occlusion_miss, "occlusion_miss");
    require_probability(miss_probability, "miss_probability");
    require_probability(p_bad, "p_bad");
    require_probability(bad_lambda, "bad_lambda");
    require_probability(scorer_fidelity, "scorer_fidelity");
    require_probability(occlusion_iou, "occlusion_iou");
    if (embedding_dim < 2) throw GenerationError("embedding_dim must be >= 2");
    if (n_identities < 1) throw GenerationError("n_identities must be >= 1");
    if (frames_per_video < 0) throw GenerationError("frames_per_video must be >= 0");
    if (entry_rate < 0.0 || clutter_rate < 0.0 || false_positive_rate < 0.0) {
        throw GenerationError("rates must be >= 0");
    }
    if (jitter_sigma < 0.0 || embedding_noise < 0.0 || frame_noise < 0.0 || max_speed < 0.0 || shared_component < 0.0 ||
        junk_spread < 0.0) {
        throw GenerationError("jitter, noise and speed must be >= 0");
    }
    if (min_visible < 1 || min_visible > max_visible) throw GenerationError("need 1 <= min_visible <= max_visible");
    if (!(box_height_min > 0.0 && box_height_min <= box_height_max)) {
        throw GenerationError("need 0 < box_height_min <= box_height_max");
    }
    if (box_height_max + 2.0 * kBorder > frame_height || box_height_max / 2.3 + 2.0 * kBorder > frame_width) {
        throw GenerationError("largest person box does not fit in the frame");
    }
    if (!(max_anchor_cosine > -1.0 && max_anchor_cosine <= 1.0)) {
        throw GenerationError("max_anchor_cosine must lie in (-1,1]");
    }
    if (persistent_persons > n_identities) {
        throw GenerationError("more persistent persons than identities");
    }
    if (persistent_persons > 0) {
        const double col = frame_width / static_cast<double>(persistent_persons);
        // Column cap on the box height must still admit the smallest allowed person.
        if (0.6 * col * 2.5 < box_height_min) {
            throw GenerationError(std::to_string(persistent_persons) +
                                  " simultaneous persons do not fit side by side in the frame");
        }
    }
}

nlohmann::json WorldConfig::to_json() const {
    return {{"seed", seed},
            {"n_identities", n_identities},
            {"n_videos", n_videos},
            {"frames_per_video", frames_per_video},
            {"frame_width", frame_width},
            {"frame_height", frame_height},
            {"persistent_persons", persistent_persons},
            {"entry_rate", entry_rate},
            {"min_visible", min_visible},
            {"max_visible", max_visible},
            {"max_speed", max_speed},
            {"box_height_min", box_height_min},
            {"box_height_max", box_height_max},
            {"crossing_rate", crossing_rate},
            {"occlusion_iou", occlusion_iou},
            {"occlusion_miss", occlusion_miss},
            {"miss_probability", miss_probability},
            {"jitter_sigma", jitter_sigma},
            {"p_bad", p_bad},
            {"bad_lambda", bad_lambda},
            {"scorer_fidelity", scorer_fidelity},
            {"clutter_rate", clutter_rate},
            {"false_positive_rate", false_positive_rate},
            {"embedding_dim", embedding_dim},
            {"embedding_noise", embedding_noise},
            {"frame_noise", frame_noise},
            {"shared_component", shared_component},
            {"junk_spread", junk_spread},
            {"max_anchor_cosine", max_anchor_cosine},
            {"n_queries", n_queries}};
}

WorldConfig WorldConfig::from_json(const nlohmann::json& j) {
    WorldConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    try {
        get("seed", c.seed);
        get("n_identities", c.n_identities);
        get("n_videos", c.n_videos);
        get("frames_per_video", c.frames_per_video);
        get("frame_width", c.frame_width);
        get("frame_height", c.frame_height);
        get("persistent_persons", c.persistent_persons);
        get("entry_rate", c.entry_rate);
        get("min_visible", c.min_visible);
        get("max_visible", c.max_visible);
        get("max_speed", c.max_speed);
        get("box_height_min", c.box_height_min);
        get("box_height_max", c.box_height_max);
        get("crossing_rate", c.crossing_rate);
        get("occlusion_iou", c.occlusion_iou);
        get("occlusion_miss", c.occlusion_miss);
        get("miss_probability", c.miss_probability);
        get("jitter_sigma", c.jitter_sigma);
        get("p_bad", c.p_bad);
        get("bad_lambda", c.bad_lambda);
        get("scorer_fidelity", c.scorer_fidelity);
        get("clutter_rate", c.clutter_rate);
        get("false_positive_rate", c.false_positive_rate);
        get("embedding_dim", c.embedding_dim);
        get("embedding_noise", c.embedding_noise);
        get("frame_noise", c.frame_noise);
        get("shared_component", c.shared_component);
        get("junk_spread", c.junk_spread);
        get("max_anchor_cosine", c.max_anchor_cosine);
        get("n_queries", c.n_queries);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed world config: ") + e.what());
    }
    return c;
}

WorldConfig WorldConfig::persistent(std::size_t persons, FrameIndex frames, std::uint64_t seed) {
    WorldConfig c;
    c.seed = seed;
    c.n_identities = std::max<std::size_t>(persons, 1) * 4;
    c.n_videos = 2;
    c.frames_per_video = frames;
    c.persistent_persons = persons;
    c.entry_rate = 0.0;
    c.crossing_rate = 0.0;
    c.miss_probability = 0.0;
    c.jitter_sigma = 0.0;
    c.p_bad = 0.0;
    c.clutter_rate = 0.0;
    c.false_positive_rate = 0.0;
    c.n_queries = std::min<std::size_t>(persons, 4);
    return c;
}

WorldConfig WorldConfig::single_video_sparse(std::uint64_t seed) {
    WorldConfig c;
    c.seed = seed;
    c.n_identities = 40;
    c.n_videos = 1;
    c.frames_per_video = 2700;
    c.entry_rate = 0.002;
    c.false_positive_rate = 0.02;
    c.min_visible = 60;
    c.max_visible = 400;
    c.n_queries = 2;
    return c;
}

WorldConfig WorldConfig::heavy_crossing(std::uint64_t seed) {
    WorldConfig c;
    c.seed = seed;
    c.crossing_rate = 0.8;
    return c;
}

WorldConfig preset(std::string_view name, std::uint64_t seed) {
    if (name == "default") {
        WorldConfig c;
        c.seed = seed;
        return c;
    }
    if (name == "persistent") return WorldConfig::persistent(5, 3000, seed);
    if (name == "sparse") return WorldConfig::single_video_sparse(seed);
    if (name == "crossing") return WorldConfig::heavy_crossing(seed);
    throw ConfigError("unknown world preset '" + std::string(name) + "'");
}

Dataset generate(const WorldConfig& config) {
    config.validate();
    return WorldBuilder(config).build();
}

}  // namespace trade::synth
