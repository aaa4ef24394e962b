#include "trade/core.hpp"

#include <algorithm>
#include <cmath>

#include "trade/errors.hpp"

namespace trade {

bool BoundingBox::valid() const noexcept {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h) && w > 0.0 &&
           h > 0.0;
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
    const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
    const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

Embedding Embedding::normalized(std::vector<double> values) {
    if (values.empty()) throw ValidationError("embedding has no components");
    double sq = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw ValidationError("embedding has a non-finite component");
        sq += v * v;
    }
    const double norm = std::sqrt(sq);
    if (norm == 0.0) throw ValidationError("zero embedding vector cannot be normalised");
    if (std::abs(norm - 1.0) > 1e-12) {
        for (double& v : values) v /= norm;
    }
    return Embedding(std::move(values));
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) {
        throw ConfigError("embedding dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()));
    }
    double dot = 0.0;
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) dot += av[i] * bv[i];
    return std::clamp(dot, -1.0, 1.0);
}

}  // namespace trade
