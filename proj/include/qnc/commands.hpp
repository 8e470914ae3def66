#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qnc/datagen.hpp"
#include "qnc/encoding.hpp"
#include "qnc/learning.hpp"

namespace qnc {

// Command implementations shared by the CLI front end and the test
// suites. All of them are deterministic given their options.

struct TrainOptions {
    std::string data_path;
    std::string model_path;
    double d_threshold = 0.99;
    int max_iters = 10;
    double penalty = 0.0;  // 0 keeps the trained member-share weights
    int penalty_iters = 200;
    AngleRange angle_range = AngleRange::two_pi;
    CorrelatorMapping mapping = CorrelatorMapping::theta_first;  // 4d datasets
    std::uint64_t seed = 0;
};

void cmd_train(const TrainOptions& opt, std::ostream& out);

struct PredictOptions {
    std::string model_path;
    std::string model_b_path;  // optional second model for dual prediction
    std::optional<std::vector<double>> point;
    std::string data_path;  // used when no single point is given
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
};

void cmd_predict(const PredictOptions& opt, std::ostream& out);

struct EvalOptions {
    std::string model_path;
    std::string model_b_path;
    std::string data_path;
    std::string train_path;  // optional, rows found here are skipped
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
};

struct EvalReport {
    std::size_t total = 0;
    std::size_t correct = 0;
    std::size_t excluded = 0;
    std::vector<std::string> label_names;
    std::vector<std::array<std::size_t, 2>> per_label;  // (total, correct)
};

EvalReport cmd_eval(const EvalOptions& opt, std::ostream& out);

struct GridAxis {
    double min = 0.0;
    double max = 1.0;
    std::size_t steps = 2;
};

struct SweepOptions {
    std::string model_path;
    std::string out_path;
    std::string svg_path;  // optional heat map
    GridAxis x1, x2;
};

// Row-major grid (x1 outer, x2 inner) of predictions as CSV text.
std::string run_sweep_csv(const Model& model, const GridAxis& x1, const GridAxis& x2);
std::string sweep_svg(const Model& model, const GridAxis& x1, const GridAxis& x2);

void cmd_sweep(const SweepOptions& opt, std::ostream& out);

struct WernerOptions {
    std::size_t train_size = 128;
    std::size_t test_size = 400;
    std::uint64_t seed = 7;
    std::optional<std::uint64_t> shots;  // per-correlator shots, empty = exact
    double d_threshold = 0.98;
    int max_iters = 10;
    std::string polar_path;  // optional (p, phi, label, predicted) csv
};

struct WernerReport {
    std::size_t errors = 0;
    std::array<std::array<std::size_t, 2>, 2> confusion{};  // [true][predicted]
    std::size_t sublabels = 0;
    int n_label_qubits = 0;
    bool kept_all = false;
};

WernerReport run_werner(const WernerOptions& opt);
void cmd_werner(const WernerOptions& opt, std::ostream& out);

struct GenBlobsOptions {
    std::vector<BlobSpec> blobs;
    std::string out_path;
    std::uint64_t seed = 1;
};

struct GenBoundaryOptions {
    PhaseBoundaryOptions boundary;
    std::string out_path;
    std::uint64_t seed = 1;
};

struct GenWernerOptions {
    std::size_t n = 400;
    std::optional<std::uint64_t> shots;
    std::string out_path;
    std::uint64_t seed = 1;
};

void cmd_gen_blobs(const GenBlobsOptions& opt, std::ostream& out);
void cmd_gen_boundary(const GenBoundaryOptions& opt, std::ostream& out);
void cmd_gen_werner(const GenWernerOptions& opt, std::ostream& out);

enum class HistState { h, v };

struct HistDemoOptions {
    std::size_t particles = 1000;
    HistState state = HistState::h;
    std::uint64_t seed = 1;
};

struct HistDemoRow {
    std::size_t n = 0;
    double rate_h = 0.0;
    double rate_v = 0.0;
};

// Histogram matching-rate ladder: draws particles from the chosen
// reference spectrum and reports both matching rates as the sample grows.
std::vector<HistDemoRow> run_histdemo(const HistDemoOptions& opt);
void cmd_histdemo(const HistDemoOptions& opt, std::ostream& out);

void cmd_inner(const BlochAngles& a, const BlochAngles& b, std::ostream& out);

// The two fixed 32-slot reference spectra used by the histogram demo.
std::array<std::vector<std::uint64_t>, 2> histdemo_references();

}  // namespace qnc
