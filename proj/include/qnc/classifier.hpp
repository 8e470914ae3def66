#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnc/learning.hpp"
#include "qnc/qsim.hpp"

namespace qnc {

// Placement of sublabels on the label register: class-0 sublabels occupy
// indices 0, 1, ..., class-1 sublabels start at 2^(N-1), so the first
// label qubit reads out the class.
struct ModelLayout {
    int n_label_qubits = 1;
    std::array<std::size_t, 2> class_counts{0, 0};
    std::vector<std::uint64_t> index_of_sublabel;  // parallel to model.sublabels
};

ModelLayout compute_layout(const Model& model);

struct LabelWeights {
    std::vector<double> p;
};

LabelWeights uniform_weights(std::size_t n);

// Optional per-class target basis state on the data qubits; empty bit
// vectors mean |0...0>.
struct FinalStates {
    std::array<std::vector<int>, 2> bits;
};

struct ControlledGate {
    std::size_t sublabel = 0;
    std::uint64_t label_index = 0;
    int data_qubit = 0;  // absolute qubit index
    Unitary2 u;
};

// Executable description: label-register preparation, one data rotation
// per qubit (bound at run time), then per-sublabel controlled inverse
// rotations toward the class target state.
struct ClassifierCircuit {
    int n_label_qubits = 0;
    int n_data_qubits = 0;
    bool hadamard_prep = false;
    std::vector<double> label_amplitudes;  // per label index, sqrt(p)
    std::vector<ControlledGate> gates;
    std::array<std::vector<int>, 2> target_bits;
};

ClassifierCircuit build_circuit(const Model& model, const LabelWeights& weights,
                                const FinalStates& finals = {});

// Prepares the labeled superposition, encodes x, applies the controlled
// gates, and returns the final state.
Statevector run_circuit(const ClassifierCircuit& circuit, const EncodedPoint& x);

struct ShotsMode {
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

struct Prediction {
    int class_index = 0;
    std::string label;
    double score_0 = 0.0;
    double score_1 = 0.0;
    // Per sublabel: P(pattern, data at target) - P(pattern, data elsewhere).
    std::vector<double> per_sublabel;
};

Prediction predict(const Model& model, const std::vector<double>& x,
                   const std::optional<ShotsMode>& shots = std::nullopt);

// Averages the per-sublabel scores of two mirrored-encoding models and
// picks the argmax sublabel.
Prediction predict_dual(const Model& model_a, const Model& model_b, const std::vector<double>& x,
                        const std::optional<ShotsMode>& shots = std::nullopt);

// Closed-form joint probability P(pattern_k, data at target) for sublabel
// k: weight_k times the squared overlap between x and the centroid.
double analytic_sublabel_score(const Model& model, const std::vector<double>& x, std::size_t k);

// Projected coordinate ascent on the weight simplex maximizing
// sum_i [P(own class, target) - penalty * P(other class, target)].
LabelWeights optimize_weights(const Model& model, const LabeledDataset& train, double penalty,
                              int iters = 200);

// Ties resolve toward class 0, then the lowest sublabel index.
std::size_t argmax_sublabel(const std::vector<double>& scores, const std::vector<int>& classes);

}  // namespace qnc
