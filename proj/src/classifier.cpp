#include "qnc/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qnc {

namespace {

int ceil_log2(std::size_t n) {
    if (n <= 1) return 0;
    return static_cast<int>(std::bit_width(n - 1));
}

void validate_weights(const LabelWeights& w, std::size_t n) {
    if (w.p.size() != n) {
        throw std::invalid_argument("weight vector size " + std::to_string(w.p.size()) +
                                    " does not match sublabel count " + std::to_string(n));
    }
    double sum = 0.0;
    for (double p : w.p) {
        if (!(p >= 0.0)) throw std::invalid_argument("weights must be non-negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("weights must sum to 1, got " + std::to_string(sum));
    }
}

std::vector<int> resolve_target_bits(const std::vector<int>& bits, int n_data_qubits) {
    if (bits.empty()) return std::vector<int>(static_cast<std::size_t>(n_data_qubits), 0);
    if (bits.size() != static_cast<std::size_t>(n_data_qubits)) {
        throw std::invalid_argument("target state bit count does not match data qubit count");
    }
    for (int b : bits) {
        if (b != 0 && b != 1) throw std::invalid_argument("target state bits must be 0 or 1");
    }
    return bits;
}

ControlSpec controls_for_index(std::uint64_t label_index, int n_label_qubits) {
    ControlSpec controls;
    controls.reserve(static_cast<std::size_t>(n_label_qubits));
    for (int b = 0; b < n_label_qubits; ++b) {
        const bool set = (label_index >> (n_label_qubits - 1 - b)) & 1ULL;
        controls.push_back({b, set ? Polarity::closed : Polarity::open});
    }
    return controls;
}

}  // namespace

ModelLayout compute_layout(const Model& model) {
    if (model.sublabels.empty()) throw std::runtime_error("model has no sublabels");
    if (model.labels.size() != 2) {
        throw std::invalid_argument("circuit prediction requires exactly two classes, model has " +
                                    std::to_string(model.labels.size()));
    }
    ModelLayout layout;
    layout.index_of_sublabel.resize(model.sublabels.size());
    std::array<std::size_t, 2> seen{0, 0};
    for (std::size_t k = 0; k < model.sublabels.size(); ++k) {
        const int c = model.class_of(k);
        ++layout.class_counts[static_cast<std::size_t>(c)];
    }
    const std::size_t n = model.sublabels.size();
    const std::size_t kmax = std::max(layout.class_counts[0], layout.class_counts[1]);
    layout.n_label_qubits = std::max(ceil_log2(n), 1 + ceil_log2(kmax));
    layout.n_label_qubits = std::max(layout.n_label_qubits, 1);

    const std::uint64_t class1_base = std::uint64_t{1} << (layout.n_label_qubits - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const int c = model.class_of(k);
        const std::uint64_t ordinal = seen[static_cast<std::size_t>(c)]++;
        layout.index_of_sublabel[k] = c == 0 ? ordinal : class1_base + ordinal;
    }
    return layout;
}

LabelWeights uniform_weights(std::size_t n) {
    if (n == 0) throw std::invalid_argument("cannot build weights for zero sublabels");
    return {std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

ClassifierCircuit build_circuit(const Model& model, const LabelWeights& weights,
                                const FinalStates& finals) {
    const ModelLayout layout = compute_layout(model);
    validate_weights(weights, model.sublabels.size());

    ClassifierCircuit c;
    c.n_label_qubits = layout.n_label_qubits;
    c.n_data_qubits = model.n_data_qubits();
    c.target_bits[0] = resolve_target_bits(finals.bits[0], c.n_data_qubits);
    c.target_bits[1] = resolve_target_bits(finals.bits[1], c.n_data_qubits);

    const std::size_t n = model.sublabels.size();
    const std::size_t label_dim = std::size_t{1} << layout.n_label_qubits;
    const std::size_t half = label_dim / 2;

    // Hadamards reproduce the uniform superposition only when every basis
    // index carries a sublabel; otherwise amplitudes are set directly and
    // unused indices stay at zero.
    const double unif = 1.0 / static_cast<double>(n);
    bool uniform = layout.class_counts[0] == half && layout.class_counts[1] == half;
    for (double p : weights.p) uniform = uniform && p == unif;
    c.hadamard_prep = uniform;
    if (!c.hadamard_prep) {
        c.label_amplitudes.assign(label_dim, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            c.label_amplitudes[layout.index_of_sublabel[k]] = std::sqrt(weights.p[k]);
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        const auto& bits = c.target_bits[static_cast<std::size_t>(model.class_of(k))];
        for (int j = 0; j < c.n_data_qubits; ++j) {
            // Inverse of the centroid preparation, then the flip toward
            // the class target state.
            Unitary2 u = rot(model.sublabels[k].centroid[static_cast<std::size_t>(j)].theta,
                             model.sublabels[k].centroid[static_cast<std::size_t>(j)].phi)
                             .dagger();
            if (bits[static_cast<std::size_t>(j)]) u = pauli_x() * u;
            c.gates.push_back({k, layout.index_of_sublabel[k], c.n_label_qubits + j, u});
        }
    }
    return c;
}

Statevector run_circuit(const ClassifierCircuit& circuit, const EncodedPoint& x) {
    if (static_cast<int>(x.size()) != circuit.n_data_qubits) {
        throw std::invalid_argument("encoded point does not match the circuit data register");
    }
    const int nq = circuit.n_label_qubits + circuit.n_data_qubits;
    Statevector st(nq);

    if (circuit.hadamard_prep) {
        for (int b = 0; b < circuit.n_label_qubits; ++b) st.apply_1q(b, hadamard());
    } else {
        std::vector<cdouble> amps(st.dim(), cdouble{0.0, 0.0});
        for (std::size_t idx = 0; idx < circuit.label_amplitudes.size(); ++idx) {
            amps[idx << circuit.n_data_qubits] = cdouble{circuit.label_amplitudes[idx], 0.0};
        }
        st.set_amplitudes(std::move(amps));
    }

    for (int j = 0; j < circuit.n_data_qubits; ++j) {
        const auto& a = x[static_cast<std::size_t>(j)];
        st.apply_1q(circuit.n_label_qubits + j, rot(a.theta, a.phi));
    }

    for (const ControlledGate& g : circuit.gates) {
        st.apply_controlled(controls_for_index(g.label_index, circuit.n_label_qubits),
                            g.data_qubit, g.u);
    }
    return st;
}

namespace {

struct ScoreReader {
    const ClassifierCircuit& circuit;
    const Statevector& st;
    const std::optional<ShotsMode>& shots;
    CountTable table;

    ScoreReader(const ClassifierCircuit& c, const Statevector& s,
                const std::optional<ShotsMode>& sh)
        : circuit(c), st(s), shots(sh) {
        if (shots) {
            if (shots->shots == 0) throw std::invalid_argument("shot count must be positive");
            table = sample_counts(st, shots->shots, shots->seed);
        }
    }

    double prob(const std::vector<std::pair<int, int>>& constraints) const {
        if (shots) {
            return counts_probability(table, circuit.n_label_qubits + circuit.n_data_qubits,
                                      constraints);
        }
        return st.marginal_probability(constraints);
    }

    std::vector<std::pair<int, int>> data_constraints(int class_index) const {
        std::vector<std::pair<int, int>> cons;
        const auto& bits = circuit.target_bits[static_cast<std::size_t>(class_index)];
        for (int j = 0; j < circuit.n_data_qubits; ++j) {
            cons.emplace_back(circuit.n_label_qubits + j, bits[static_cast<std::size_t>(j)]);
        }
        return cons;
    }
};

}  // namespace

Prediction predict(const Model& model, const std::vector<double>& x,
                   const std::optional<ShotsMode>& shots) {
    const ModelLayout layout = compute_layout(model);
    const ClassifierCircuit circuit = build_circuit(model, {model.weights});
    const EncodedPoint encoded = model.encode(x);
    const Statevector st = run_circuit(circuit, encoded);
    const ScoreReader reader(circuit, st, shots);

    Prediction pred;
    for (int y = 0; y < 2; ++y) {
        auto cons = reader.data_constraints(y);
        cons.emplace_back(0, y);
        const double score = reader.prob(cons);
        (y == 0 ? pred.score_0 : pred.score_1) = score;
    }

    pred.per_sublabel.resize(model.sublabels.size());
    for (std::size_t k = 0; k < model.sublabels.size(); ++k) {
        const int c = model.class_of(k);
        std::vector<std::pair<int, int>> pattern;
        for (int b = 0; b < circuit.n_label_qubits; ++b) {
            pattern.emplace_back(
                b, static_cast<int>((layout.index_of_sublabel[k] >>
                                     (circuit.n_label_qubits - 1 - b)) & 1ULL));
        }
        const double total = reader.prob(pattern);
        auto joint_cons = pattern;
        for (const auto& dc : reader.data_constraints(c)) joint_cons.push_back(dc);
        const double joint = reader.prob(joint_cons);
        pred.per_sublabel[k] = 2.0 * joint - total;  // P(target) - P(everything else)
    }

    pred.class_index = pred.score_1 > pred.score_0 ? 1 : 0;
    pred.label = model.labels[static_cast<std::size_t>(pred.class_index)];
    return pred;
}

std::size_t argmax_sublabel(const std::vector<double>& scores, const std::vector<int>& classes) {
    if (scores.empty() || scores.size() != classes.size()) {
        throw std::invalid_argument("scores and classes must be non-empty and equal length");
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < scores.size(); ++k) {
        const bool better = scores[k] > scores[best] ||
                            (scores[k] == scores[best] && classes[k] < classes[best]);
        if (better) best = k;
    }
    return best;
}

Prediction predict_dual(const Model& model_a, const Model& model_b, const std::vector<double>& x,
                        const std::optional<ShotsMode>& shots) {
    if (model_a.labels != model_b.labels ||
        model_a.sublabels.size() != model_b.sublabels.size()) {
        throw std::invalid_argument("dual prediction requires models with matching sublabels");
    }
    for (std::size_t k = 0; k < model_a.sublabels.size(); ++k) {
        if (model_a.sublabels[k].prior_label != model_b.sublabels[k].prior_label) {
            throw std::invalid_argument("dual prediction requires matching sublabel labels");
        }
    }

    const Prediction pa = predict(model_a, x, shots);
    const Prediction pb = predict(model_b, x, shots);

    Prediction out;
    out.score_0 = 0.5 * (pa.score_0 + pb.score_0);
    out.score_1 = 0.5 * (pa.score_1 + pb.score_1);
    out.per_sublabel.resize(pa.per_sublabel.size());
    std::vector<int> classes(pa.per_sublabel.size());
    for (std::size_t k = 0; k < pa.per_sublabel.size(); ++k) {
        out.per_sublabel[k] = 0.5 * (pa.per_sublabel[k] + pb.per_sublabel[k]);
        classes[k] = model_a.class_of(k);
    }
    const std::size_t winner = argmax_sublabel(out.per_sublabel, classes);
    out.class_index = classes[winner];
    out.label = model_a.labels[static_cast<std::size_t>(out.class_index)];
    return out;
}

double analytic_sublabel_score(const Model& model, const std::vector<double>& x, std::size_t k) {
    if (k >= model.sublabels.size()) throw std::out_of_range("sublabel index out of range");
    const EncodedPoint encoded = model.encode(x);
    const double mag = overlap_mag(model.sublabels[k].centroid, encoded);
    return model.weights[k] * mag * mag;
}

namespace {

// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(std::vector<double> v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cum += u[j];
        const double t = (cum - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) theta = t;
    }
    for (double& x : v) x = std::max(x - theta, 0.0);
    return v;
}

}  // namespace

LabelWeights optimize_weights(const Model& model, const LabeledDataset& train, double penalty,
                              int iters) {
    if (penalty < 0.0) throw std::invalid_argument("penalty must be non-negative");
    if (iters < 0) throw std::invalid_argument("iteration count must be non-negative");
    compute_layout(model);  // validates binary classes and non-empty model
    if (train.size() == 0) throw std::invalid_argument("empty training set");

    const std::size_t n = model.sublabels.size();

    // The objective is linear in the weights; fold the dataset into one
    // gradient vector first.
    std::vector<double> grad(n, 0.0);
    for (std::size_t i = 0; i < train.size(); ++i) {
        int y = -1;
        for (std::size_t c = 0; c < model.labels.size(); ++c) {
            if (model.labels[c] == train.labels[i]) y = static_cast<int>(c);
        }
        if (y < 0) {
            throw std::invalid_argument("training label '" + train.labels[i] +
                                        "' is not in the model");
        }
        const EncodedPoint enc = model.encode(train.vectors[i]);
        for (std::size_t k = 0; k < n; ++k) {
            const double mag = overlap_mag(model.sublabels[k].centroid, enc);
            const double f = mag * mag;
            grad[k] += model.class_of(k) == y ? f : -penalty * f;
        }
    }

    const double step = 0.05;
    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    double obj = std::inner_product(p.begin(), p.end(), grad.begin(), 0.0);
    for (int it = 0; it < iters; ++it) {
        for (std::size_t k = 0; k < n; ++k) {
            for (const double dir : {step, -step}) {
                std::vector<double> cand = p;
                cand[k] += dir;
                cand = project_simplex(std::move(cand));
                const double cobj =
                    std::inner_product(cand.begin(), cand.end(), grad.begin(), 0.0);
                if (cobj > obj) {
                    p = std::move(cand);
                    obj = cobj;
                }
            }
        }
    }

    // Normalize away projection rounding so downstream validation passes.
    double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= sum;
    return {p};
}

}  // namespace qnc
