#include "qnc/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qnc/random.hpp"

namespace qnc {

LabeledDataset gen_blobs(const std::vector<BlobSpec>& blobs, std::uint64_t seed) {
    if (blobs.empty()) throw std::invalid_argument("at least one blob required");
    LabeledDataset ds;
    ds.meta.generator = "blobs";
    ds.meta.seed = seed;

    std::mt19937_64 rng(seed);
    GaussianSource gauss(rng);
    for (const BlobSpec& b : blobs) {
        if (b.count == 0) throw std::invalid_argument("blob count must be positive");
        if (b.spread < 0.0) throw std::invalid_argument("blob spread must be non-negative");
        if (b.label.empty()) throw std::invalid_argument("blob label must be non-empty");
        for (std::size_t i = 0; i < b.count; ++i) {
            const double dx = gauss() * b.spread;
            const double dy = gauss() * b.spread;
            ds.vectors.push_back({b.center[0] + dx, b.center[1] + dy});
            ds.labels.push_back(b.label);
        }
    }
    return ds;
}

double boundary_temperature(const PhaseBoundary& b, double p) {
    const auto& k = b.knots;
    if (k.size() < 2) throw std::invalid_argument("boundary needs at least two knots");
    if (p <= k.front()[0]) return k.front()[1];
    if (p >= k.back()[0]) return k.back()[1];
    for (std::size_t i = 1; i < k.size(); ++i) {
        if (p <= k[i][0]) {
            const double t = (p - k[i - 1][0]) / (k[i][0] - k[i - 1][0]);
            return k[i - 1][1] + t * (k[i][1] - k[i - 1][1]);
        }
    }
    return k.back()[1];
}

double distance_to_boundary(const PhaseBoundary& b, const std::array<double, 2>& point) {
    const auto& k = b.knots;
    if (k.size() < 2) throw std::invalid_argument("boundary needs at least two knots");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double ax = k[i - 1][0], ay = k[i - 1][1];
        const double bx = k[i][0], by = k[i][1];
        const double vx = bx - ax, vy = by - ay;
        const double len2 = vx * vx + vy * vy;
        double t = len2 > 0.0 ? ((point[0] - ax) * vx + (point[1] - ay) * vy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double dx = point[0] - (ax + t * vx);
        const double dy = point[1] - (ay + t * vy);
        best = std::min(best, std::hypot(dx, dy));
    }
    return best;
}

LabeledDataset gen_phase_boundary(const PhaseBoundaryOptions& opt, std::uint64_t seed) {
    const auto& knots = opt.boundary.knots;
    if (knots.size() < 2) throw std::invalid_argument("boundary needs at least two knots");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (knots[i][0] <= knots[i - 1][0]) {
            throw std::invalid_argument("boundary knots must have strictly increasing P");
        }
    }
    if (opt.t_min >= opt.t_max) throw std::invalid_argument("empty temperature range");
    if (opt.per_class == 0) throw std::invalid_argument("per-class count must be positive");
    if (opt.margin < 0.0) throw std::invalid_argument("margin must be non-negative");
    if (opt.above_label.empty() || opt.below_label.empty() ||
        opt.above_label == opt.below_label) {
        throw std::invalid_argument("phase labels must be distinct and non-empty");
    }

    const double p_min = knots.front()[0];
    const double p_max = knots.back()[0];

    LabeledDataset ds;
    ds.meta.generator = "phase_boundary";
    ds.meta.seed = seed;

    std::mt19937_64 rng(seed);
    std::size_t above = 0, below = 0;
    const std::size_t needed = 2 * opt.per_class;
    const std::size_t max_attempts = 100 * needed;
    std::size_t attempts = 0;
    while (above + below < needed) {
        if (++attempts > max_attempts) {
            throw std::runtime_error(
                "phase boundary sampling rejected too many points; margin or range infeasible");
        }
        const double p = uniform_in(rng, p_min, p_max);
        const double t = uniform_in(rng, opt.t_min, opt.t_max);
        if (opt.margin > 0.0 && distance_to_boundary(opt.boundary, {p, t}) < opt.margin) continue;
        const bool is_above = t > boundary_temperature(opt.boundary, p);
        if (is_above) {
            if (above == opt.per_class) continue;
            ++above;
        } else {
            if (below == opt.per_class) continue;
            ++below;
        }
        ds.vectors.push_back({p, t});
        ds.labels.push_back(is_above ? opt.above_label : opt.below_label);
    }
    return ds;
}

}  // namespace qnc
