#include "qnc/learning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace qnc {

namespace {

constexpr double min_cone_radius = 1e-12;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void check_cone(double d) {
    if (!(d > 0.0 && d <= 1.0)) {
        throw std::invalid_argument("cone radius must lie in (0, 1], got " + std::to_string(d));
    }
}

std::size_t total_members(const std::vector<Sublabel>& model) {
    std::size_t n = 0;
    for (const Sublabel& s : model) n += s.member_count;
    return n;
}

void assign_point_id(std::vector<Sublabel>& model, const EncodedPoint& point, std::size_t id,
                     const std::string& label, double acceptance_threshold) {
    check_cone(acceptance_threshold);
    if (point.empty()) throw std::invalid_argument("cannot assign an empty encoded point");

    double best = -1.0;
    std::size_t best_idx = 0;
    for (std::size_t k = 0; k < model.size(); ++k) {
        if (model[k].prior_label != label) continue;
        const double ov = overlap_mag(model[k].centroid, point);
        if (ov > best) {
            best = ov;
            best_idx = k;
        }
    }

    if (best < acceptance_threshold) {
        Sublabel s;
        s.centroid = point;
        s.member_count = 1;
        s.cone_radius = acceptance_threshold;
        s.prior_label = label;
        s.members.push_back(point);
        s.member_ids.push_back(id);
        model.push_back(std::move(s));
        return;
    }

    Sublabel& s = model[best_idx];
    const double n = static_cast<double>(s.member_count);
    for (std::size_t j = 0; j < s.centroid.size(); ++j) {
        s.centroid[j].theta = (point[j].theta + n * s.centroid[j].theta) / (n + 1.0);
        s.centroid[j].phi = (point[j].phi + n * s.centroid[j].phi) / (n + 1.0);
    }
    s.member_count += 1;
    s.members.push_back(point);
    s.member_ids.push_back(id);
}

// Cone radius that covers a set of (centroid, radius) cones as seen from
// a new centroid.
double covering_radius(const EncodedPoint& new_centroid,
                       const std::vector<std::pair<const Sublabel*, double>>& parts) {
    double worst_angle = 0.0;
    for (const auto& [s, d] : parts) {
        const double gap = std::acos(clamp01(overlap_mag(new_centroid, s->centroid)));
        worst_angle = std::max(worst_angle, gap + std::acos(clamp01(d)));
    }
    return std::clamp(std::cos(worst_angle), min_cone_radius, 1.0);
}

}  // namespace

double half_angle_tighten(double d) {
    check_cone(d);
    return std::cos(std::acos(clamp01(d)) / 2.0);
}

double rival_proximity(double overlap_magnitude, double rival_cone_radius) {
    check_cone(rival_cone_radius);
    const double gap =
        std::acos(clamp01(overlap_magnitude)) - std::acos(clamp01(rival_cone_radius));
    return std::cos(std::max(gap, 0.0));
}

double pair_separation(double overlap_magnitude, double cone_radius) {
    check_cone(cone_radius);
    return std::cos(std::acos(clamp01(overlap_magnitude)) + std::acos(clamp01(cone_radius)));
}

double max_rival_proximity(const std::vector<Sublabel>& model, std::size_t index) {
    if (index >= model.size()) throw std::out_of_range("sublabel index out of range");
    const Sublabel& s = model[index];
    double best = -1.0;
    for (std::size_t k = 0; k < model.size(); ++k) {
        if (k == index || model[k].prior_label == s.prior_label) continue;
        const double ov = overlap_mag(s.centroid, model[k].centroid);
        best = std::max(best, rival_proximity(ov, model[k].cone_radius));
    }
    return best;
}

void assign_point(std::vector<Sublabel>& model, const EncodedPoint& point,
                  const std::string& label, double acceptance_threshold) {
    assign_point_id(model, point, total_members(model), label, acceptance_threshold);
}

std::vector<Sublabel> cluster_dataset(const std::vector<EncodedPoint>& points,
                                      const std::vector<std::string>& labels,
                                      const LearnConfig& cfg) {
    if (points.empty()) throw std::invalid_argument("cannot cluster an empty dataset");
    if (points.size() != labels.size()) {
        throw std::invalid_argument("points and labels differ in length");
    }
    std::vector<Sublabel> model;
    for (std::size_t i = 0; i < points.size(); ++i) {
        assign_point_id(model, points[i], i, labels[i], cfg.acceptance_threshold);
    }
    return model;
}

std::vector<Sublabel> reduce_redundancy(std::vector<Sublabel> model) {
    std::vector<bool> released(model.size(), false);
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (released[i]) continue;

        double rival_bar = -1.0;
        for (std::size_t k = 0; k < model.size(); ++k) {
            if (k == i || released[k] || model[k].prior_label == model[i].prior_label) continue;
            const double ov = overlap_mag(model[i].centroid, model[k].centroid);
            rival_bar = std::max(rival_bar, rival_proximity(ov, model[k].cone_radius));
        }

        for (std::size_t k = 0; k < model.size(); ++k) {
            if (k == i || released[k] || model[k].prior_label != model[i].prior_label) continue;
            const double ov = overlap_mag(model[i].centroid, model[k].centroid);
            // Absorb only when the partner's whole cone sits closer than
            // the nearest rival cone edge.
            if (pair_separation(ov, model[k].cone_radius) <= rival_bar) continue;

            // Absorb k into i: weighted centroid, cone wide enough to
            // cover both previous cones.
            Sublabel& a = model[i];
            Sublabel& b = model[k];
            const Sublabel old_a = a;
            const double na = static_cast<double>(a.member_count);
            const double nb = static_cast<double>(b.member_count);
            for (std::size_t j = 0; j < a.centroid.size(); ++j) {
                a.centroid[j].theta =
                    (na * a.centroid[j].theta + nb * b.centroid[j].theta) / (na + nb);
                a.centroid[j].phi = (na * a.centroid[j].phi + nb * b.centroid[j].phi) / (na + nb);
            }
            a.cone_radius = covering_radius(
                a.centroid, {{&old_a, old_a.cone_radius}, {&b, b.cone_radius}});
            a.member_count += b.member_count;
            a.members.insert(a.members.end(), b.members.begin(), b.members.end());
            a.member_ids.insert(a.member_ids.end(), b.member_ids.begin(), b.member_ids.end());
            released[k] = true;
            break;  // at most one merge per survivor per pass
        }
    }

    std::vector<Sublabel> out;
    out.reserve(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (!released[i]) out.push_back(std::move(model[i]));
    }
    return out;
}

std::vector<Sublabel> reduce_overlap(std::vector<Sublabel> model, const LearnConfig& cfg) {
    // All proximities are judged against the incoming list, so the order
    // in which sublabels dissolve cannot influence each other.
    std::vector<double> bars(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) bars[i] = max_rival_proximity(model, i);

    std::vector<Sublabel> out;
    out.reserve(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (bars[i] <= model[i].cone_radius) {
            out.push_back(std::move(model[i]));
            continue;
        }
        // A rival cone reaches inside: dissolve and re-cluster the members
        // under a tightened threshold, seeded from the first member.
        const Sublabel& s = model[i];
        const double tightened = cfg.tighten(s.cone_radius);
        std::vector<Sublabel> rebuilt;
        for (std::size_t m = 0; m < s.members.size(); ++m) {
            assign_point_id(rebuilt, s.members[m], s.member_ids[m], s.prior_label, tightened);
        }
        for (Sublabel& child : rebuilt) out.push_back(std::move(child));
    }
    return out;
}

namespace {

bool same_sublabels(const std::vector<Sublabel>& a, const std::vector<Sublabel>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].prior_label != b[i].prior_label || a[i].member_count != b[i].member_count ||
            a[i].cone_radius != b[i].cone_radius || a[i].member_ids != b[i].member_ids ||
            a[i].centroid.size() != b[i].centroid.size()) {
            return false;
        }
        for (std::size_t j = 0; j < a[i].centroid.size(); ++j) {
            if (a[i].centroid[j].theta != b[i].centroid[j].theta ||
                a[i].centroid[j].phi != b[i].centroid[j].phi) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

PipelineResult run_pipeline(const std::vector<EncodedPoint>& points,
                            const std::vector<std::string>& labels, const LearnConfig& cfg) {
    if (cfg.max_fixpoint_iters < 0) throw std::invalid_argument("iteration cap must be >= 0");
    PipelineResult res;
    res.sublabels = cluster_dataset(points, labels, cfg);
    for (int iter = 1; iter <= cfg.max_fixpoint_iters; ++iter) {
        std::vector<Sublabel> next = reduce_redundancy(res.sublabels);
        next = reduce_overlap(std::move(next), cfg);
        res.fixpoint.iterations = iter;
        if (same_sublabels(next, res.sublabels)) {
            res.fixpoint.converged = true;
            res.sublabels = std::move(next);
            break;
        }
        res.sublabels = std::move(next);
    }
    return res;
}

int Model::class_of(std::size_t sublabel_index) const {
    if (sublabel_index >= sublabels.size()) {
        throw std::out_of_range("sublabel index out of range");
    }
    const std::string& l = sublabels[sublabel_index].prior_label;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        if (labels[c] == l) return static_cast<int>(c);
    }
    throw std::runtime_error("sublabel carries a label missing from the model label list");
}

EncodedPoint Model::encode(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dims) {
        throw std::invalid_argument("input has " + std::to_string(x.size()) +
                                    " dimensions, model expects " + std::to_string(dims));
    }
    if (dims == 2) {
        const Bounds2D b{bounds[0][0], bounds[0][1], bounds[1][0], bounds[1][1]};
        return {encode_2d({x[0], x[1]}, b, angle_range)};
    }
    BoundsND b;
    b.minmax = bounds;
    return prep_angles(encode_correlators(x, b, mapping));
}

namespace {

std::vector<std::string> sorted_distinct(const std::vector<std::string>& labels) {
    std::vector<std::string> out = labels;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Model finish_model(Model m, PipelineResult res, const LearnConfig& cfg) {
    m.acceptance_threshold = cfg.acceptance_threshold;
    m.sublabels = std::move(res.sublabels);
    m.fixpoint = res.fixpoint;
    m.rng_seed = cfg.rng_seed;
    // Weight each sublabel by the share of training points it absorbed, so
    // the summed class score estimates class-conditional mass. A flat 1/K
    // split would bias the decision toward whichever label happens to
    // fragment into more sublabels.
    double total = 0.0;
    for (const Sublabel& s : m.sublabels) total += static_cast<double>(s.member_count);
    m.weights.resize(m.sublabels.size());
    for (std::size_t k = 0; k < m.sublabels.size(); ++k) {
        m.weights[k] = static_cast<double>(m.sublabels[k].member_count) / total;
    }
    return m;
}

}  // namespace

Model learn(const LabeledDataset& dataset, const LearnConfig& cfg, AngleRange range) {
    if (dataset.dims() != 2) {
        throw std::invalid_argument("learn expects a 2d dataset, got " +
                                    std::to_string(dataset.dims()) + " dimensions");
    }
    const auto distinct = sorted_distinct(dataset.labels);
    if (distinct.size() < 2) {
        throw std::invalid_argument("dataset must contain at least two distinct labels");
    }

    std::vector<std::array<double, 2>> pts2;
    pts2.reserve(dataset.size());
    for (const auto& v : dataset.vectors) pts2.push_back({v[0], v[1]});
    const Bounds2D b = bounds_from_dataset(pts2);

    std::vector<EncodedPoint> encoded;
    encoded.reserve(dataset.size());
    for (const auto& p : pts2) encoded.push_back({encode_2d(p, b, range)});

    Model m;
    m.dims = 2;
    m.bounds = {{b.min_x1, b.max_x1}, {b.min_x2, b.max_x2}};
    m.angle_range = range;
    m.labels = distinct;
    return finish_model(std::move(m), run_pipeline(encoded, dataset.labels, cfg), cfg);
}

namespace {

Model correlator_model_base(const LabeledDataset& dataset, CorrelatorMapping mapping) {
    if (dataset.dims() != 4) {
        throw std::invalid_argument("correlator learning expects a 4d dataset");
    }
    const auto distinct = sorted_distinct(dataset.labels);
    if (distinct.size() < 2) {
        throw std::invalid_argument("dataset must contain at least two distinct labels");
    }
    Model m;
    m.dims = 4;
    m.bounds = bounds_from_vectors(dataset.vectors).minmax;
    m.mapping = mapping;
    m.labels = distinct;
    return m;
}

std::vector<EncodedPoint> encode_all(const LabeledDataset& dataset, const Model& m) {
    std::vector<EncodedPoint> encoded;
    encoded.reserve(dataset.size());
    for (const auto& v : dataset.vectors) encoded.push_back(m.encode(v));
    return encoded;
}

}  // namespace

Model learn_correlators(const LabeledDataset& dataset, const LearnConfig& cfg,
                        CorrelatorMapping mapping) {
    Model m = correlator_model_base(dataset, mapping);
    return finish_model(std::move(m), run_pipeline(encode_all(dataset, m), dataset.labels, cfg),
                        cfg);
}

std::pair<Model, Model> learn_dual(const LabeledDataset& dataset, const LearnConfig& cfg) {
    Model ma = correlator_model_base(dataset, CorrelatorMapping::theta_first);
    Model mb = correlator_model_base(dataset, CorrelatorMapping::phi_first);

    const std::vector<EncodedPoint> enc_b = encode_all(dataset, mb);
    ma = finish_model(std::move(ma), run_pipeline(encode_all(dataset, ma), dataset.labels, cfg),
                      cfg);

    // Mirror the learned partition: same members per sublabel, centroids
    // re-averaged in the swapped encoding.
    PipelineResult mirrored;
    mirrored.fixpoint = ma.fixpoint;
    mirrored.sublabels.reserve(ma.sublabels.size());
    for (const Sublabel& s : ma.sublabels) {
        Sublabel t;
        t.prior_label = s.prior_label;
        t.member_count = s.member_count;
        t.cone_radius = s.cone_radius;
        t.member_ids = s.member_ids;
        t.centroid.assign(2, BlochAngles{});
        for (std::size_t id : s.member_ids) t.members.push_back(enc_b[id]);
        for (const EncodedPoint& p : t.members) {
            for (std::size_t j = 0; j < 2; ++j) {
                t.centroid[j].theta += p[j].theta;
                t.centroid[j].phi += p[j].phi;
            }
        }
        for (std::size_t j = 0; j < 2; ++j) {
            t.centroid[j].theta /= static_cast<double>(t.member_count);
            t.centroid[j].phi /= static_cast<double>(t.member_count);
        }
        mirrored.sublabels.push_back(std::move(t));
    }
    mb = finish_model(std::move(mb), std::move(mirrored), cfg);
    return {std::move(ma), std::move(mb)};
}

}  // namespace qnc
