#include "qnc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qnc/classifier.hpp"
#include "qnc/model_io.hpp"
#include "qnc/parallel.hpp"
#include "qnc/random.hpp"
#include "qnc/werner.hpp"

namespace qnc {

namespace {

Model load_model_checked(const std::string& path) {
    if (path.empty()) throw std::invalid_argument("model path must not be empty");
    return load_model(path);
}

std::optional<ShotsMode> shots_mode_for(const std::optional<std::uint64_t>& shots,
                                        std::uint64_t seed, std::size_t index) {
    if (!shots) return std::nullopt;
    if (*shots == 0) throw std::invalid_argument("shot count must be positive");
    return ShotsMode{*shots, mix_seed(seed, index)};
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

void cmd_train(const TrainOptions& opt, std::ostream& out) {
    const LabeledDataset ds = load_csv(opt.data_path);
    if (ds.distinct_labels().size() != 2) {
        throw std::invalid_argument("training requires exactly two distinct labels, got " +
                                    std::to_string(ds.distinct_labels().size()));
    }

    LearnConfig cfg;
    cfg.acceptance_threshold = opt.d_threshold;
    cfg.max_fixpoint_iters = opt.max_iters;
    cfg.rng_seed = opt.seed;

    Model model = ds.dims() == 2 ? learn(ds, cfg, opt.angle_range)
                                 : learn_correlators(ds, cfg, opt.mapping);

    if (opt.penalty > 0.0) {
        model.weights = optimize_weights(model, ds, opt.penalty, opt.penalty_iters).p;
    }
    save_model(model, opt.model_path);

    out << "trained on " << ds.size() << " points (" << ds.dims() << "d)\n";
    for (const std::string& label : model.labels) {
        std::size_t count = 0;
        for (const Sublabel& s : model.sublabels) count += s.prior_label == label ? 1 : 0;
        out << "label " << label << ": " << count << " sublabels\n";
    }
    out << "fixpoint: "
        << (model.fixpoint.converged ? "converged after " : "iteration cap reached at ")
        << model.fixpoint.iterations << " rounds\n";
    out << "weights: " << (opt.penalty > 0.0 ? "optimized" : "member share") << "\n";
    out << "wrote " << opt.model_path << "\n";
}

namespace {

std::vector<Prediction> predict_batch(const Model& model, const Model* model_b,
                                      const std::vector<std::vector<double>>& points,
                                      const std::optional<std::uint64_t>& shots,
                                      std::uint64_t seed) {
    std::vector<Prediction> preds(points.size());
    std::exception_ptr failure;
    std::mutex failure_mu;
    parallel_for(points.size(), [&](std::size_t i) {
        try {
            const auto mode = shots_mode_for(shots, seed, i);
            preds[i] = model_b ? predict_dual(model, *model_b, points[i], mode)
                               : predict(model, points[i], mode);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);
    return preds;
}

}  // namespace

void cmd_predict(const PredictOptions& opt, std::ostream& out) {
    const Model model = load_model_checked(opt.model_path);
    std::optional<Model> model_b;
    if (!opt.model_b_path.empty()) model_b = load_model_checked(opt.model_b_path);

    std::vector<std::vector<double>> points;
    if (opt.point) {
        points.push_back(*opt.point);
    } else if (!opt.data_path.empty()) {
        points = load_csv(opt.data_path).vectors;
    } else {
        throw std::invalid_argument("predict needs either a point or a dataset");
    }

    const auto preds =
        predict_batch(model, model_b ? &*model_b : nullptr, points, opt.shots, opt.seed);
    out << "label,score_0,score_1\n";
    for (const Prediction& p : preds) {
        out << p.label << ',' << format_double(p.score_0) << ',' << format_double(p.score_1)
            << '\n';
    }
}

EvalReport cmd_eval(const EvalOptions& opt, std::ostream& out) {
    const Model model = load_model_checked(opt.model_path);
    std::optional<Model> model_b;
    if (!opt.model_b_path.empty()) model_b = load_model_checked(opt.model_b_path);
    const LabeledDataset ds = load_csv(opt.data_path);

    for (const std::string& l : ds.distinct_labels()) {
        if (std::find(model.labels.begin(), model.labels.end(), l) == model.labels.end()) {
            throw std::invalid_argument("dataset label '" + l + "' is unknown to the model");
        }
    }

    std::set<std::string> train_rows;
    if (!opt.train_path.empty()) {
        const LabeledDataset train = load_csv(opt.train_path);
        for (std::size_t i = 0; i < train.size(); ++i) {
            std::string key;
            for (double v : train.vectors[i]) key += format_double(v) + ",";
            train_rows.insert(key + train.labels[i]);
        }
    }

    EvalReport report;
    report.label_names = model.labels;
    report.per_label.assign(model.labels.size(), {0, 0});

    std::vector<std::vector<double>> points;
    std::vector<std::string> truth;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        std::string key;
        for (double v : ds.vectors[i]) key += format_double(v) + ",";
        if (train_rows.contains(key + ds.labels[i])) {
            ++report.excluded;
            continue;
        }
        points.push_back(ds.vectors[i]);
        truth.push_back(ds.labels[i]);
    }

    const auto preds =
        predict_batch(model, model_b ? &*model_b : nullptr, points, opt.shots, opt.seed);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto li = static_cast<std::size_t>(
            std::find(model.labels.begin(), model.labels.end(), truth[i]) -
            model.labels.begin());
        ++report.total;
        ++report.per_label[li][0];
        if (preds[i].label == truth[i]) {
            ++report.correct;
            ++report.per_label[li][1];
        }
    }

    out << "evaluated " << report.total << " points";
    if (report.excluded > 0) out << " (" << report.excluded << " training rows excluded)";
    out << "\n";
    const double acc =
        report.total == 0 ? 0.0 : 100.0 * static_cast<double>(report.correct) /
                                       static_cast<double>(report.total);
    out << "accuracy: " << report.correct << "/" << report.total << " (" << acc << "%)\n";
    for (std::size_t c = 0; c < report.label_names.size(); ++c) {
        out << "label " << report.label_names[c] << ": " << report.per_label[c][1] << "/"
            << report.per_label[c][0] << "\n";
    }
    return report;
}

namespace {

std::vector<double> axis_values(const GridAxis& axis) {
    if (axis.steps < 2) throw std::invalid_argument("grid axes need at least 2 steps");
    if (!(axis.min < axis.max)) throw std::invalid_argument("grid axis range is empty");
    std::vector<double> vals(axis.steps);
    for (std::size_t i = 0; i < axis.steps; ++i) {
        vals[i] = axis.min + (axis.max - axis.min) * static_cast<double>(i) /
                                 static_cast<double>(axis.steps - 1);
    }
    return vals;
}

}  // namespace

std::string run_sweep_csv(const Model& model, const GridAxis& x1, const GridAxis& x2) {
    if (model.dims != 2) throw std::invalid_argument("sweep supports 2d models only");
    const auto v1 = axis_values(x1);
    const auto v2 = axis_values(x2);

    std::vector<Prediction> preds(v1.size() * v2.size());
    parallel_for(preds.size(), [&](std::size_t i) {
        const double a = v1[i / v2.size()];
        const double b = v2[i % v2.size()];
        preds[i] = predict(model, {a, b});
    });

    std::ostringstream out;
    out << "x1,x2,label,score_0,score_1\n";
    for (std::size_t i = 0; i < preds.size(); ++i) {
        out << format_double(v1[i / v2.size()]) << ',' << format_double(v2[i % v2.size()]) << ','
            << preds[i].label << ',' << format_double(preds[i].score_0) << ','
            << format_double(preds[i].score_1) << '\n';
    }
    return out.str();
}

std::string sweep_svg(const Model& model, const GridAxis& x1, const GridAxis& x2) {
    if (model.dims != 2) throw std::invalid_argument("sweep supports 2d models only");
    const auto v1 = axis_values(x1);
    const auto v2 = axis_values(x2);
    std::vector<int> cls(v1.size() * v2.size());
    parallel_for(cls.size(), [&](std::size_t i) {
        cls[i] = predict(model, {v1[i / v2.size()], v2[i % v2.size()]}).class_index;
    });

    const int cell = 6;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << v1.size() * cell
        << "\" height=\"" << v2.size() * cell << "\">\n";
    for (std::size_t i = 0; i < cls.size(); ++i) {
        const std::size_t ix = i / v2.size();
        const std::size_t iy = i % v2.size();
        svg << "<rect x=\"" << ix * cell << "\" y=\"" << (v2.size() - 1 - iy) * cell
            << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
            << (cls[i] == 0 ? "#4477aa" : "#ee6677") << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void cmd_sweep(const SweepOptions& opt, std::ostream& out) {
    const Model model = load_model_checked(opt.model_path);
    write_text_file(opt.out_path, run_sweep_csv(model, opt.x1, opt.x2));
    out << "wrote " << opt.out_path << " (" << opt.x1.steps << "x" << opt.x2.steps << " grid)\n";
    if (!opt.svg_path.empty()) {
        write_text_file(opt.svg_path, sweep_svg(model, opt.x1, opt.x2));
        out << "wrote " << opt.svg_path << "\n";
    }
}

WernerReport run_werner(const WernerOptions& opt) {
    if (opt.test_size < 4 || opt.test_size % 2 != 0) {
        throw std::invalid_argument("test size must be even and at least 4");
    }
    const LabeledDataset train =
        gen_werner_dataset(opt.train_size, mix_seed(opt.seed, 101), opt.shots);
    const LabeledDataset test =
        gen_werner_dataset(opt.test_size, mix_seed(opt.seed, 202), opt.shots);

    LearnConfig cfg;
    cfg.rng_seed = opt.seed;
    const bool keep_all = opt.train_size <= 64;
    if (keep_all) {
        // Small experiments keep every training state as its own sublabel.
        cfg.acceptance_threshold = 1.0;
        cfg.max_fixpoint_iters = 0;
    } else {
        cfg.acceptance_threshold = opt.d_threshold;
        cfg.max_fixpoint_iters = opt.max_iters;
    }

    auto [model_a, model_b] = learn_dual(train, cfg);
    // The entanglement experiment prepares the label register uniformly
    // (Hadamards), so every sublabel gets the same weight regardless of how
    // many training states it absorbed.
    model_a.weights = uniform_weights(model_a.sublabels.size()).p;
    model_b.weights = uniform_weights(model_b.sublabels.size()).p;

    std::vector<Prediction> preds(test.size());
    std::exception_ptr failure;
    std::mutex failure_mu;
    parallel_for(test.size(), [&](std::size_t i) {
        try {
            preds[i] = predict_dual(model_a, model_b, test.vectors[i]);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    WernerReport report;
    report.kept_all = keep_all;
    report.sublabels = model_a.sublabels.size();
    report.n_label_qubits = compute_layout(model_a).n_label_qubits;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const std::size_t truth = test.labels[i] == model_a.labels[0] ? 0 : 1;
        const std::size_t got = static_cast<std::size_t>(preds[i].class_index);
        ++report.confusion[truth][got];
        if (truth != got) ++report.errors;
    }

    if (!opt.polar_path.empty()) {
        std::ostringstream csv;
        csv << "p,phi,label,predicted\n";
        for (std::size_t i = 0; i < test.size(); ++i) {
            csv << format_double(test.meta.params[i][0]) << ','
                << format_double(test.meta.params[i][1]) << ',' << test.labels[i] << ','
                << preds[i].label << '\n';
        }
        write_text_file(opt.polar_path, csv.str());
    }
    return report;
}

void cmd_werner(const WernerOptions& opt, std::ostream& out) {
    const WernerReport r = run_werner(opt);
    out << "train " << opt.train_size << " points, test " << opt.test_size << " points, seed "
        << opt.seed << (opt.shots ? " (sampled correlators)" : " (exact correlators)") << "\n";
    out << "sublabels: " << r.sublabels << " (" << r.n_label_qubits << " label qubits, "
        << (r.kept_all ? "kept all" : "reduced") << ")\n";
    const double acc = 100.0 * static_cast<double>(opt.test_size - r.errors) /
                       static_cast<double>(opt.test_size);
    out << "errors: " << r.errors << "/" << opt.test_size << " (accuracy " << acc << "%)\n";
    out << "confusion: [[" << r.confusion[0][0] << "," << r.confusion[0][1] << "],["
        << r.confusion[1][0] << "," << r.confusion[1][1] << "]]\n";
    if (!opt.polar_path.empty()) out << "wrote " << opt.polar_path << "\n";
}

void cmd_gen_blobs(const GenBlobsOptions& opt, std::ostream& out) {
    const LabeledDataset ds = gen_blobs(opt.blobs, opt.seed);
    save_csv(ds, opt.out_path);
    out << "wrote " << ds.size() << " points to " << opt.out_path << "\n";
}

void cmd_gen_boundary(const GenBoundaryOptions& opt, std::ostream& out) {
    const LabeledDataset ds = gen_phase_boundary(opt.boundary, opt.seed);
    save_csv(ds, opt.out_path);
    out << "wrote " << ds.size() << " points to " << opt.out_path << "\n";
}

void cmd_gen_werner(const GenWernerOptions& opt, std::ostream& out) {
    const LabeledDataset ds = gen_werner_dataset(opt.n, opt.seed, opt.shots);
    save_csv(ds, opt.out_path);
    out << "wrote " << ds.size() << " points to " << opt.out_path << "\n";
}

std::array<std::vector<std::uint64_t>, 2> histdemo_references() {
    auto bump = [](double x, double center, double width) {
        const double d = x - center;
        return std::exp(-d * d / width);
    };
    // Narrow peaks on disjoint slots keep the two spectra distinguishable
    // even after the square-root amplitude encoding flattens contrast.
    std::vector<std::uint64_t> h(32), v(32);
    for (std::size_t i = 0; i < 32; ++i) {
        const double x = static_cast<double>(i);
        const double hv = bump(x, 6.0, 6.0) + 0.8 * bump(x, 20.0, 6.0) + 0.002;
        const double vv = 0.8 * bump(x, 11.0, 6.0) + bump(x, 27.0, 6.0) + 0.002;
        h[i] = static_cast<std::uint64_t>(std::llround(1e6 * hv));
        v[i] = static_cast<std::uint64_t>(std::llround(1e6 * vv));
    }
    return {h, v};
}

namespace {

// Real Householder reflection exchanging |0...0> with the reference state.
std::vector<cdouble> householder_to_reference(const Statevector& ref) {
    const std::size_t dim = ref.dim();
    std::vector<double> u(dim);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        u[i] = ref.amp(i).real() - (i == 0 ? 1.0 : 0.0);
        norm2 += u[i] * u[i];
    }
    std::vector<cdouble> w(dim * dim, cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) w[i * dim + i] = cdouble{1.0, 0.0};
    if (norm2 < 1e-24) return w;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            w[i * dim + j] -= cdouble{2.0 * u[i] * u[j] / norm2, 0.0};
        }
    }
    return w;
}

std::pair<double, double> histdemo_rates(const Histogram& sample,
                                         const std::vector<cdouble>& w_h,
                                         const std::vector<cdouble>& w_v) {
    const Statevector data = state_from_histogram(sample);
    Statevector st(6);
    std::vector<cdouble> amps(64, cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < 32; ++i) amps[i] = data.amp(i);
    st.set_amplitudes(std::move(amps));

    st.apply_1q(0, hadamard());
    st.apply_controlled_unitary({{0, Polarity::open}}, {1, 2, 3, 4, 5}, w_h);
    st.apply_controlled_unitary({{0, Polarity::closed}}, {1, 2, 3, 4, 5}, w_v);

    std::vector<std::pair<int, int>> zero_data;
    for (int q = 1; q <= 5; ++q) zero_data.emplace_back(q, 0);
    auto h_cons = zero_data;
    h_cons.emplace_back(0, 0);
    auto v_cons = zero_data;
    v_cons.emplace_back(0, 1);
    return {st.marginal_probability(h_cons), st.marginal_probability(v_cons)};
}

}  // namespace

std::vector<HistDemoRow> run_histdemo(const HistDemoOptions& opt) {
    if (opt.particles == 0) throw std::invalid_argument("particle count must be positive");
    const auto refs = histdemo_references();
    const auto& source = refs[opt.state == HistState::h ? 0 : 1];

    // Reference spectra as states and the reflections that un-prepare them.
    const std::vector<cdouble> w_h =
        householder_to_reference(state_from_histogram({refs[0]}));
    const std::vector<cdouble> w_v =
        householder_to_reference(state_from_histogram({refs[1]}));

    // Source CDF for particle draws.
    std::vector<double> cdf(source.size());
    double total = 0.0;
    for (std::uint64_t c : source) total += static_cast<double>(c);
    double acc = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        acc += static_cast<double>(source[i]) / total;
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    std::vector<std::size_t> ladder;
    for (std::size_t n : {1ul, 2ul, 5ul, 10ul, 20ul, 50ul, 100ul, 200ul, 500ul, 1000ul, 2000ul,
                          5000ul, 10000ul}) {
        if (n < opt.particles) ladder.push_back(n);
    }
    ladder.push_back(opt.particles);

    std::mt19937_64 rng(opt.seed);
    Histogram sample;
    sample.counts.assign(32, 0);
    std::vector<HistDemoRow> rows;
    std::size_t drawn = 0;
    for (std::size_t n : ladder) {
        for (; drawn < n; ++drawn) {
            const double u = uniform_unit(rng);
            const std::size_t slot = static_cast<std::size_t>(
                std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            ++sample.counts[std::min(slot, sample.counts.size() - 1)];
        }
        const auto [rh, rv] = histdemo_rates(sample, w_h, w_v);
        rows.push_back({n, rh, rv});
    }
    return rows;
}

void cmd_histdemo(const HistDemoOptions& opt, std::ostream& out) {
    const auto rows = run_histdemo(opt);
    out << "n,rate_h,rate_v\n";
    for (const HistDemoRow& r : rows) {
        out << r.n << ',' << format_double(r.rate_h) << ',' << format_double(r.rate_v) << '\n';
    }
    const HistDemoRow& last = rows.back();
    out << "verdict: " << (last.rate_h >= last.rate_v ? "h" : "v") << " (rate_h "
        << format_double(last.rate_h) << ", rate_v " << format_double(last.rate_v) << ")\n";
}

void cmd_inner(const BlochAngles& a, const BlochAngles& b, std::ostream& out) {
    out << format_double(circuit_inner_product(a, b)) << "\n";
}

}  // namespace qnc
