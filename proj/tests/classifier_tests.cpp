#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "qnc/classifier.hpp"
#include "qnc/model_io.hpp"
#include "qnc/random.hpp"
#include "qnc/werner.hpp"

using qnc::FinalStates;
using qnc::LabelWeights;
using qnc::Model;
using qnc::Prediction;
using qnc::Sublabel;
using std::numbers::pi;

namespace {

// Model over the unit square, bounds [0,1]^2, 2pi range: a point (u, v)
// encodes to theta = 2 pi u, phi = 2 pi v. Centroids are given in data
// coordinates and stored encoded, like learned models do.
Model make_model(const std::vector<std::pair<std::array<double, 2>, std::string>>& centroids,
                 std::vector<double> weights = {}) {
    Model m;
    m.dims = 2;
    m.bounds = {{0.0, 1.0}, {0.0, 1.0}};
    std::vector<std::string> labels;
    for (const auto& [c, label] : centroids) {
        Sublabel s;
        s.centroid = {{2.0 * pi * c[0], 2.0 * pi * c[1]}};
        s.member_count = 1;
        s.cone_radius = 0.99;
        s.prior_label = label;
        m.sublabels.push_back(std::move(s));
        labels.push_back(label);
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    m.labels = labels;
    m.weights = weights.empty() ? qnc::uniform_weights(m.sublabels.size()).p : std::move(weights);
    return m;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("qnc_clf_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("layout packs class 0 low and class 1 from the top bit") {
    SUBCASE("three against two") {
        const auto m = make_model({{{0.1, 0.1}, "a"},
                                   {{0.2, 0.1}, "a"},
                                   {{0.3, 0.1}, "a"},
                                   {{0.7, 0.1}, "b"},
                                   {{0.8, 0.1}, "b"}});
        const auto layout = qnc::compute_layout(m);
        CHECK(layout.n_label_qubits == 3);
        CHECK(layout.class_counts[0] == 3);
        CHECK(layout.class_counts[1] == 2);
        CHECK(layout.index_of_sublabel == std::vector<std::uint64_t>{0, 1, 2, 4, 5});
    }
    SUBCASE("one against one") {
        const auto m = make_model({{{0.1, 0.1}, "a"}, {{0.7, 0.1}, "b"}});
        const auto layout = qnc::compute_layout(m);
        CHECK(layout.n_label_qubits == 1);
        CHECK(layout.index_of_sublabel == std::vector<std::uint64_t>{0, 1});
    }
    SUBCASE("two against one needs a second qubit") {
        const auto m = make_model({{{0.1, 0.1}, "a"}, {{0.2, 0.1}, "a"}, {{0.7, 0.1}, "b"}});
        const auto layout = qnc::compute_layout(m);
        CHECK(layout.n_label_qubits == 2);
        CHECK(layout.index_of_sublabel == std::vector<std::uint64_t>{0, 1, 2});
    }
    SUBCASE("sixteen against sixteen") {
        std::vector<std::pair<std::array<double, 2>, std::string>> spec;
        for (int i = 0; i < 16; ++i) spec.push_back({{0.01 * i, 0.1}, "a"});
        for (int i = 0; i < 16; ++i) spec.push_back({{0.01 * i, 0.7}, "b"});
        const auto layout = qnc::compute_layout(make_model(spec));
        CHECK(layout.n_label_qubits == 5);
        CHECK(layout.index_of_sublabel[16] == 16);
        CHECK(layout.index_of_sublabel[31] == 31);
    }
    SUBCASE("interleaved labels keep per-class ordinals") {
        const auto m = make_model(
            {{{0.1, 0.1}, "b"}, {{0.2, 0.1}, "a"}, {{0.3, 0.1}, "b"}, {{0.4, 0.1}, "a"}});
        const auto layout = qnc::compute_layout(m);
        CHECK(layout.n_label_qubits == 2);
        CHECK(layout.index_of_sublabel == std::vector<std::uint64_t>{2, 0, 3, 1});
    }
}

TEST_CASE("layout rejects empty and non-binary models") {
    Model empty;
    empty.labels = {"a", "b"};
    CHECK_THROWS_AS(qnc::compute_layout(empty), std::runtime_error);

    auto three = make_model({{{0.1, 0.1}, "a"}, {{0.4, 0.1}, "b"}, {{0.7, 0.1}, "c"}});
    CHECK_THROWS_AS(qnc::compute_layout(three), std::invalid_argument);
}

TEST_CASE("uniform_weights splits mass evenly") {
    const auto w = qnc::uniform_weights(5);
    REQUIRE(w.p.size() == 5);
    for (double p : w.p) CHECK(p == 0.2);
    CHECK_THROWS_AS(qnc::uniform_weights(0), std::invalid_argument);
}

TEST_CASE("build_circuit validates weights") {
    const auto m = make_model({{{0.1, 0.1}, "a"}, {{0.7, 0.1}, "b"}});
    CHECK_THROWS_AS(qnc::build_circuit(m, {{0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(qnc::build_circuit(m, {{0.7, 0.7}}), std::invalid_argument);
    CHECK_THROWS_AS(qnc::build_circuit(m, {{1.5, -0.5}}), std::invalid_argument);
    CHECK_NOTHROW(qnc::build_circuit(m, {{0.25, 0.75}}));
}

TEST_CASE("hadamard preparation fires only for exactly balanced uniform models") {
    const auto balanced = make_model(
        {{{0.1, 0.1}, "a"}, {{0.2, 0.1}, "a"}, {{0.7, 0.1}, "b"}, {{0.8, 0.1}, "b"}});
    CHECK(qnc::build_circuit(balanced, {balanced.weights}).hadamard_prep);

    CHECK_FALSE(qnc::build_circuit(balanced, {{0.3, 0.2, 0.25, 0.25}}).hadamard_prep);

    const auto lopsided =
        make_model({{{0.1, 0.1}, "a"}, {{0.2, 0.1}, "a"}, {{0.7, 0.1}, "b"}});
    CHECK_FALSE(qnc::build_circuit(lopsided, {lopsided.weights}).hadamard_prep);
}

TEST_CASE("circuit shape: one gate per sublabel and data qubit, default zero targets") {
    const auto m = make_model({{{0.1, 0.1}, "a"}, {{0.2, 0.1}, "a"}, {{0.7, 0.1}, "b"}});
    const auto c = qnc::build_circuit(m, {m.weights});
    CHECK(c.n_data_qubits == 1);
    CHECK(c.gates.size() == 3);
    CHECK(c.target_bits[0] == std::vector<int>{0});
    CHECK(c.target_bits[1] == std::vector<int>{0});
    const auto layout = qnc::compute_layout(m);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(c.gates[k].sublabel == k);
        CHECK(c.gates[k].label_index == layout.index_of_sublabel[k]);
        CHECK(c.gates[k].data_qubit == c.n_label_qubits);
    }

    FinalStates finals;
    finals.bits[1] = {1};
    const auto c2 = qnc::build_circuit(m, {m.weights}, finals);
    CHECK(c2.target_bits[1] == std::vector<int>{1});
    FinalStates bad;
    bad.bits[0] = {0, 1};
    CHECK_THROWS_AS(qnc::build_circuit(m, {m.weights}, bad), std::invalid_argument);
}

TEST_CASE("label register carries exactly the sublabel weights") {
    std::mt19937_64 rng(1009);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n0 = 1 + rng() % 3;
        const std::size_t n1 = 1 + rng() % 3;
        std::vector<std::pair<std::array<double, 2>, std::string>> spec;
        for (std::size_t i = 0; i < n0; ++i)
            spec.push_back({{qnc::uniform_unit(rng), qnc::uniform_unit(rng)}, "a"});
        for (std::size_t i = 0; i < n1; ++i)
            spec.push_back({{qnc::uniform_unit(rng), qnc::uniform_unit(rng)}, "b"});

        std::vector<double> w(n0 + n1);
        double sum = 0.0;
        for (double& x : w) {
            x = qnc::uniform_in(rng, 0.01, 1.0);
            sum += x;
        }
        for (double& x : w) x /= sum;
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < w.size(); ++k) acc += w[k];
        w.back() = 1.0 - acc;  // exact simplex membership

        const auto m = make_model(spec, w);
        const auto layout = qnc::compute_layout(m);
        const auto c = qnc::build_circuit(m, {m.weights});
        const auto st =
            qnc::run_circuit(c, m.encode({qnc::uniform_unit(rng), qnc::uniform_unit(rng)}));

        double assigned = 0.0;
        for (std::size_t k = 0; k < m.sublabels.size(); ++k) {
            std::vector<std::pair<int, int>> pattern;
            for (int b = 0; b < c.n_label_qubits; ++b) {
                pattern.emplace_back(
                    b, static_cast<int>((layout.index_of_sublabel[k] >>
                                         (c.n_label_qubits - 1 - b)) & 1ULL));
            }
            const double p = st.marginal_probability(pattern);
            CHECK(std::abs(p - w[k]) < 1e-12);
            assigned += p;
        }
        CHECK(assigned == doctest::Approx(1.0).epsilon(1e-12));  // nothing leaks elsewhere
    }
}

TEST_CASE("joint probabilities equal the closed-form sublabel scores") {
    std::mt19937_64 rng(1013);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n0 = 1 + rng() % 4;
        const std::size_t n1 = 1 + rng() % 4;
        std::vector<std::pair<std::array<double, 2>, std::string>> spec;
        for (std::size_t i = 0; i < n0 + n1; ++i) {
            spec.push_back({{qnc::uniform_unit(rng), qnc::uniform_unit(rng)},
                            i < n0 ? "a" : "b"});
        }
        const auto m = make_model(spec);
        const std::vector<double> x{qnc::uniform_unit(rng), qnc::uniform_unit(rng)};
        const auto pred = qnc::predict(m, x);
        for (std::size_t k = 0; k < m.sublabels.size(); ++k) {
            const double analytic = qnc::analytic_sublabel_score(m, x, k);
            const double joint = 0.5 * (pred.per_sublabel[k] + m.weights[k]);
            CHECK(std::abs(joint - analytic) < 1e-10);
        }
    }
}

TEST_CASE("per-sublabel scores follow 2*joint - pattern_total") {
    const auto m = make_model({{{0.15, 0.25}, "a"}, {{0.65, 0.75}, "b"}}, {0.4, 0.6});
    const std::vector<double> x{0.2, 0.2};
    const auto pred = qnc::predict(m, x);
    const auto enc = m.encode(x);
    for (std::size_t k = 0; k < 2; ++k) {
        const double mag = qnc::overlap_mag(m.sublabels[k].centroid, enc);
        const double expected = m.weights[k] * (2.0 * mag * mag - 1.0);
        CHECK(pred.per_sublabel[k] == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("predict assigns centroid points to their own class") {
    const auto m = make_model(
        {{{0.10, 0.20}, "a"}, {{0.15, 0.22}, "a"}, {{0.60, 0.70}, "b"}, {{0.62, 0.75}, "b"}});
    const auto pa = qnc::predict(m, {0.10, 0.20});
    CHECK(pa.label == "a");
    CHECK(pa.score_0 > pa.score_1);
    const auto pb = qnc::predict(m, {0.62, 0.75});
    CHECK(pb.label == "b");
    CHECK(pb.score_1 > pb.score_0);
    CHECK(pa.score_0 <= 0.5 + 1e-12);  // bounded by the class weight mass
}

TEST_CASE("exact ties resolve to class 0") {
    // Both sublabels sit on the same point; the query is orthogonal to it,
    // so both class scores vanish.
    const auto m = make_model({{{0.1, 0.0}, "b"}, {{0.1, 0.0}, "a"}});
    const auto pred = qnc::predict(m, {0.1 + 0.5, 0.0});
    CHECK(pred.score_0 < 1e-16);
    CHECK(pred.score_1 < 1e-16);
    CHECK(pred.class_index == 0);
    CHECK(pred.label == "a");  // labels are sorted, class 0 = "a"
}

TEST_CASE("sampled prediction is deterministic and approaches the exact one") {
    const auto m = make_model(
        {{{0.10, 0.20}, "a"}, {{0.35, 0.60}, "a"}, {{0.60, 0.70}, "b"}, {{0.82, 0.15}, "b"}});
    const std::vector<double> x{0.3, 0.5};
    const auto exact = qnc::predict(m, x);

    const auto s1 = qnc::predict(m, x, qnc::ShotsMode{200000, 5});
    const auto s2 = qnc::predict(m, x, qnc::ShotsMode{200000, 5});
    CHECK(s1.score_0 == s2.score_0);
    CHECK(s1.per_sublabel == s2.per_sublabel);

    CHECK(std::abs(s1.score_0 - exact.score_0) < 0.01);
    CHECK(std::abs(s1.score_1 - exact.score_1) < 0.01);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(s1.per_sublabel[k] - exact.per_sublabel[k]) < 0.02);
    }

    CHECK_THROWS_AS(qnc::predict(m, x, qnc::ShotsMode{0, 5}), std::invalid_argument);
}

TEST_CASE("sampled scores converge at the statistical rate") {
    const auto m = make_model({{{0.2, 0.3}, "a"}, {{0.7, 0.8}, "b"}});
    const std::vector<double> x{0.25, 0.35};
    const auto exact = qnc::predict(m, x);
    const std::uint64_t shots = 250000;
    const double sd = std::sqrt(exact.score_0 * (1.0 - exact.score_0) / static_cast<double>(shots));
    int within = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        const auto s = qnc::predict(m, x, qnc::ShotsMode{shots, qnc::mix_seed(99, t)});
        if (std::abs(s.score_0 - exact.score_0) < 3.0 * sd) ++within;
    }
    CHECK(within >= trials - 4);  // 3 sigma captures ~99.7% per trial
}

TEST_CASE("predict validates the input dimension") {
    const auto m = make_model({{{0.1, 0.1}, "a"}, {{0.7, 0.1}, "b"}});
    CHECK_THROWS_AS(qnc::predict(m, {0.1}), std::invalid_argument);
    CHECK_THROWS_AS(qnc::predict(m, {0.1, 0.2, 0.3}), std::invalid_argument);
}

TEST_CASE("4d models run on two data qubits and match the analytic score") {
    const auto ds = qnc::gen_werner_dataset(24, 77);
    qnc::LearnConfig cfg;
    cfg.acceptance_threshold = 0.97;
    const auto model = qnc::learn_correlators(ds, cfg, qnc::CorrelatorMapping::theta_first);
    REQUIRE(model.dims == 4);
    const auto c = qnc::build_circuit(model, {model.weights});
    CHECK(c.n_data_qubits == 2);

    const auto pred = qnc::predict(model, ds.vectors[3]);
    for (std::size_t k = 0; k < model.sublabels.size(); ++k) {
        const double analytic = qnc::analytic_sublabel_score(model, ds.vectors[3], k);
        const double joint = 0.5 * (pred.per_sublabel[k] + model.weights[k]);
        CHECK(std::abs(joint - analytic) < 1e-10);
    }
    CHECK(pred.score_0 + pred.score_1 <= 1.0 + 1e-12);
}

TEST_CASE("argmax_sublabel picks the largest score with class-0 preference") {
    // Fixture probabilities in percent: {9.668, 10.84, 0.293, 3.125, 2.832}.
    const std::vector<double> scores{0.09668, 0.1084, 0.00293, 0.03125, 0.02832};
    const std::vector<int> classes{0, 0, 0, 1, 1};
    CHECK(qnc::argmax_sublabel(scores, classes) == 1);

    CHECK(qnc::argmax_sublabel({0.2, 0.2}, {1, 0}) == 1);  // tie -> class 0
    CHECK(qnc::argmax_sublabel({0.2, 0.2}, {0, 1}) == 0);
    CHECK(qnc::argmax_sublabel({0.1, 0.1, 0.3}, {0, 0, 1}) == 2);
    CHECK_THROWS_AS(qnc::argmax_sublabel({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(qnc::argmax_sublabel({0.1}, {0, 1}), std::invalid_argument);
}

TEST_CASE("predict_dual averages the two mirrored models") {
    const auto ds = qnc::gen_werner_dataset(32, 2024);
    qnc::LearnConfig cfg;
    cfg.acceptance_threshold = 0.98;
    const auto [ma, mb] = qnc::learn_dual(ds, cfg);

    const auto& x = ds.vectors[7];
    const auto pa = qnc::predict(ma, x);
    const auto pb = qnc::predict(mb, x);
    const auto dual = qnc::predict_dual(ma, mb, x);

    CHECK(dual.score_0 == doctest::Approx(0.5 * (pa.score_0 + pb.score_0)).epsilon(1e-14));
    CHECK(dual.score_1 == doctest::Approx(0.5 * (pa.score_1 + pb.score_1)).epsilon(1e-14));
    REQUIRE(dual.per_sublabel.size() == pa.per_sublabel.size());
    std::vector<int> classes;
    for (std::size_t k = 0; k < dual.per_sublabel.size(); ++k) {
        CHECK(dual.per_sublabel[k] ==
              doctest::Approx(0.5 * (pa.per_sublabel[k] + pb.per_sublabel[k])).epsilon(1e-14));
        classes.push_back(ma.class_of(k));
    }
    const auto winner = qnc::argmax_sublabel(dual.per_sublabel, classes);
    CHECK(dual.class_index == classes[winner]);
    CHECK(dual.label == ma.labels[static_cast<std::size_t>(dual.class_index)]);
}

TEST_CASE("predict_dual rejects structurally different models") {
    const auto ds = qnc::gen_werner_dataset(16, 31);
    qnc::LearnConfig cfg;
    const auto [ma, mb] = qnc::learn_dual(ds, cfg);

    auto chopped = mb;
    chopped.sublabels.pop_back();
    chopped.weights.pop_back();
    CHECK_THROWS_AS(qnc::predict_dual(ma, chopped, ds.vectors[0]), std::invalid_argument);

    auto relabeled = mb;
    relabeled.sublabels[0].prior_label =
        relabeled.sublabels[0].prior_label == ma.labels[0] ? ma.labels[1] : ma.labels[0];
    CHECK_THROWS_AS(qnc::predict_dual(ma, relabeled, ds.vectors[0]), std::invalid_argument);
}

TEST_CASE("optimize_weights climbs the linear objective and stays on the simplex") {
    const auto m = make_model(
        {{{0.10, 0.20}, "a"}, {{0.45, 0.80}, "a"}, {{0.60, 0.70}, "b"}, {{0.90, 0.30}, "b"}});
    qnc::LabeledDataset train;
    std::mt19937_64 rng(1021);
    for (int i = 0; i < 30; ++i) {
        train.vectors.push_back({qnc::uniform_in(rng, 0.05, 0.25), qnc::uniform_in(rng, 0.1, 0.3)});
        train.labels.push_back("a");
        train.vectors.push_back({qnc::uniform_in(rng, 0.55, 0.65), qnc::uniform_in(rng, 0.6, 0.8)});
        train.labels.push_back("b");
    }

    for (const double penalty : {0.0, 0.5, 2.0}) {
        // Independent objective: the gradient of a linear functional.
        std::vector<double> grad(4, 0.0);
        for (std::size_t i = 0; i < train.size(); ++i) {
            const int y = train.labels[i] == "a" ? 0 : 1;
            const auto enc = m.encode(train.vectors[i]);
            for (std::size_t k = 0; k < 4; ++k) {
                const double mag = qnc::overlap_mag(m.sublabels[k].centroid, enc);
                grad[k] += (m.class_of(k) == y ? 1.0 : -penalty) * mag * mag;
            }
        }
        const auto objective = [&](const std::vector<double>& w) {
            return std::inner_product(w.begin(), w.end(), grad.begin(), 0.0);
        };

        const auto opt = qnc::optimize_weights(m, train, penalty);
        REQUIRE(opt.p.size() == 4);
        double sum = 0.0;
        for (double w : opt.p) {
            CHECK(w >= -1e-15);
            sum += w;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(objective(opt.p) >= objective(qnc::uniform_weights(4).p) - 1e-12);

        // Linear objectives on the simplex peak at a vertex.
        const std::size_t best =
            static_cast<std::size_t>(std::max_element(grad.begin(), grad.end()) - grad.begin());
        CHECK(opt.p[best] > 0.95);

        const auto again = qnc::optimize_weights(m, train, penalty);
        CHECK(again.p == opt.p);
    }
}

TEST_CASE("optimize_weights validates inputs") {
    const auto m = make_model({{{0.1, 0.1}, "a"}, {{0.7, 0.1}, "b"}});
    qnc::LabeledDataset train;
    train.vectors = {{0.1, 0.1}};
    train.labels = {"a"};
    CHECK_THROWS_AS(qnc::optimize_weights(m, train, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(qnc::optimize_weights(m, {}, 0.0), std::invalid_argument);
    train.labels = {"zebra"};
    CHECK_THROWS_AS(qnc::optimize_weights(m, train, 0.0), std::invalid_argument);
}

TEST_CASE("model json round trip preserves every field and predictions") {
    qnc::LabeledDataset ds;
    std::mt19937_64 rng(1031);
    for (int i = 0; i < 40; ++i) {
        ds.vectors.push_back({qnc::uniform_in(rng, 0.0, 1.0), qnc::uniform_in(rng, 0.0, 1.0)});
        ds.labels.push_back("red");
        ds.vectors.push_back({qnc::uniform_in(rng, 3.0, 4.0), qnc::uniform_in(rng, 3.0, 4.0)});
        ds.labels.push_back("blue");
    }
    qnc::LearnConfig cfg;
    cfg.acceptance_threshold = 0.98;
    cfg.rng_seed = 99;
    const auto model = qnc::learn(ds, cfg);

    TempDir tmp;
    const auto path = tmp.file("model.json");
    qnc::save_model(model, path);
    const auto back = qnc::load_model(path);

    CHECK(back.dims == model.dims);
    CHECK(back.bounds == model.bounds);
    CHECK(back.acceptance_threshold == model.acceptance_threshold);
    CHECK(back.labels == model.labels);
    CHECK(back.weights == model.weights);
    CHECK(back.rng_seed == model.rng_seed);
    CHECK(back.fixpoint.converged == model.fixpoint.converged);
    CHECK(back.fixpoint.iterations == model.fixpoint.iterations);
    REQUIRE(back.sublabels.size() == model.sublabels.size());
    for (std::size_t k = 0; k < model.sublabels.size(); ++k) {
        CHECK(back.sublabels[k].prior_label == model.sublabels[k].prior_label);
        CHECK(back.sublabels[k].member_count == model.sublabels[k].member_count);
        CHECK(back.sublabels[k].cone_radius == model.sublabels[k].cone_radius);
        REQUIRE(back.sublabels[k].centroid.size() == model.sublabels[k].centroid.size());
        for (std::size_t q = 0; q < model.sublabels[k].centroid.size(); ++q) {
            CHECK(back.sublabels[k].centroid[q].theta == model.sublabels[k].centroid[q].theta);
            CHECK(back.sublabels[k].centroid[q].phi == model.sublabels[k].centroid[q].phi);
        }
    }

    for (int i = 0; i < 10; ++i) {
        const std::vector<double> x{qnc::uniform_in(rng, -1.0, 5.0),
                                    qnc::uniform_in(rng, -1.0, 5.0)};
        const auto p1 = qnc::predict(model, x);
        const auto p2 = qnc::predict(back, x);
        CHECK(p1.score_0 == p2.score_0);
        CHECK(p1.score_1 == p2.score_1);
        CHECK(p1.label == p2.label);
        CHECK(p1.per_sublabel == p2.per_sublabel);
    }

    // Serialization is stable byte for byte.
    CHECK(qnc::model_to_json(model) == qnc::model_to_json(back));
}

TEST_CASE("4d model json keeps the mapping") {
    const auto ds = qnc::gen_werner_dataset(16, 55);
    qnc::LearnConfig cfg;
    const auto model = qnc::learn_correlators(ds, cfg, qnc::CorrelatorMapping::phi_first);
    const auto back = qnc::model_from_json(qnc::model_to_json(model));
    CHECK(back.dims == 4);
    CHECK(back.mapping == qnc::CorrelatorMapping::phi_first);
    CHECK(back.bounds == model.bounds);
}

TEST_CASE("model json rejects tampered documents") {
    const auto m = make_model({{{0.1, 0.1}, "a"}, {{0.7, 0.1}, "b"}});
    auto model = m;
    model.fixpoint.converged = true;
    const std::string good = qnc::model_to_json(model);

    SUBCASE("garbage") { CHECK_THROWS_AS(qnc::model_from_json("not json"), std::runtime_error); }
    SUBCASE("bad version") {
        std::string doc = good;
        const auto pos = doc.find("\"version\": 1");
        REQUIRE(pos != std::string::npos);
        doc.replace(pos, 12, "\"version\": 9");
        CHECK_THROWS_AS(qnc::model_from_json(doc), std::runtime_error);
    }
    SUBCASE("missing key") {
        std::string doc = good;
        const auto pos = doc.find("\"weights\"");
        REQUIRE(pos != std::string::npos);
        doc.replace(pos, 9, "\"weighst\"");
        CHECK_THROWS_AS(qnc::model_from_json(doc), std::runtime_error);
    }
    SUBCASE("inconsistent layout") {
        std::string doc = good;
        const auto pos = doc.find("\"n_label_qubits\": 1");
        REQUIRE(pos != std::string::npos);
        doc.replace(pos, 19, "\"n_label_qubits\": 3");
        CHECK_THROWS_AS(qnc::model_from_json(doc), std::runtime_error);
    }
    SUBCASE("cone radius out of range") {
        std::string doc = good;
        const auto pos = doc.find("\"d\": 0.99");
        REQUIRE(pos != std::string::npos);
        doc.replace(pos, 9, "\"d\": 1.50");
        CHECK_THROWS_AS(qnc::model_from_json(doc), std::runtime_error);
    }
}
