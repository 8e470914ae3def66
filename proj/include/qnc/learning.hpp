#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qnc/dataset.hpp"
#include "qnc/encoding.hpp"

namespace qnc {

// A cluster of same-label training points. The centroid is the exact
// component-wise mean of the member angles; cone_radius is the smallest
// centroid-member overlap magnitude the cluster admits.
struct Sublabel {
    EncodedPoint centroid;
    std::size_t member_count = 0;
    double cone_radius = 1.0;
    std::string prior_label;
    std::vector<EncodedPoint> members;
    std::vector<std::size_t> member_ids;  // training bookkeeping, not serialized
};

double half_angle_tighten(double d);  // cos(acos(d)/2)

struct LearnConfig {
    double acceptance_threshold = 0.99;  // minimum overlap to join an existing sublabel
    int max_fixpoint_iters = 10;
    std::function<double(double)> split_tighten;  // defaults to half_angle_tighten
    std::uint64_t rng_seed = 0;                   // recorded in the model, learning itself
                                                  // is deterministic

    double tighten(double d) const { return split_tighten ? split_tighten(d) : half_angle_tighten(d); }
};

// Proximity of a rival cone seen from a centroid: cos of the angular gap
// between the centroid and the rival cone edge, 1 when the centroid lies
// inside the rival cone.
double rival_proximity(double overlap_magnitude, double rival_cone_radius);

// cos of the angle from a centroid to the far edge of another cone.
double pair_separation(double overlap_magnitude, double cone_radius);

// Largest rival_proximity of sublabel i against all different-label
// sublabels; -1 when no rival exists.
double max_rival_proximity(const std::vector<Sublabel>& model, std::size_t index);

// Single incremental-clustering step: join the best same-label sublabel if
// its centroid overlap reaches the threshold, otherwise open a new one.
void assign_point(std::vector<Sublabel>& model, const EncodedPoint& point,
                  const std::string& label, double acceptance_threshold);

std::vector<Sublabel> cluster_dataset(const std::vector<EncodedPoint>& points,
                                      const std::vector<std::string>& labels,
                                      const LearnConfig& cfg);

// Merge pass: a sublabel absorbs a same-label partner when the partner's
// far cone edge is closer than the nearest rival cone (at most one merge
// per survivor per pass).
std::vector<Sublabel> reduce_redundancy(std::vector<Sublabel> model);

// Split pass: a sublabel whose cone is reached by a rival cone is
// dissolved and its members re-clustered under a tightened threshold.
std::vector<Sublabel> reduce_overlap(std::vector<Sublabel> model, const LearnConfig& cfg);

struct FixpointInfo {
    bool converged = false;
    int iterations = 0;
};

struct PipelineResult {
    std::vector<Sublabel> sublabels;
    FixpointInfo fixpoint;
};

// Initial clustering followed by merge+split rounds until the sublabel
// list stops changing or the iteration cap is hit.
PipelineResult run_pipeline(const std::vector<EncodedPoint>& points,
                            const std::vector<std::string>& labels, const LearnConfig& cfg);

struct Model {
    int dims = 2;
    std::vector<std::array<double, 2>> bounds;  // per input dimension
    double acceptance_threshold = 0.99;
    AngleRange angle_range = AngleRange::two_pi;          // 2d models
    CorrelatorMapping mapping = CorrelatorMapping::theta_first;  // 4d models
    std::vector<std::string> labels;                      // sorted distinct label names
    std::vector<Sublabel> sublabels;
    std::vector<double> weights;  // one entry per sublabel, sums to 1
    FixpointInfo fixpoint;
    std::uint64_t rng_seed = 0;

    int n_data_qubits() const { return dims == 2 ? 1 : 2; }
    int class_of(std::size_t sublabel_index) const;
    EncodedPoint encode(const std::vector<double>& x) const;
    std::array<double, 2> bounds2d_pair(std::size_t d) const { return bounds[d]; }
};

Model learn(const LabeledDataset& dataset, const LearnConfig& cfg,
            AngleRange range = AngleRange::two_pi);

// 4d correlator dataset under a single mapping.
Model learn_correlators(const LabeledDataset& dataset, const LearnConfig& cfg,
                        CorrelatorMapping mapping);

// Clusters under the theta_first mapping and mirrors the same member
// partition into the phi_first encoding, so both models share sublabel
// structure index by index.
std::pair<Model, Model> learn_dual(const LabeledDataset& dataset, const LearnConfig& cfg);

}  // namespace qnc
