#include "qnc/cli.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qnc/commands.hpp"

namespace qnc {

namespace {

double parse_one_double(const std::string& token) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw std::invalid_argument("bad number '" + token + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == delim) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<double> parse_doubles(const std::string& s, char delim = ',') {
    std::vector<double> out;
    for (const std::string& tok : split(s, delim)) out.push_back(parse_one_double(tok));
    return out;
}

BlochAngles parse_angles(const std::string& s) {
    const auto v = parse_doubles(s);
    if (v.size() != 2) throw std::invalid_argument("expected 'theta,phi', got '" + s + "'");
    return {v[0], v[1]};
}

GridAxis parse_axis(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw std::invalid_argument("expected 'min:max:steps', got '" + s + "'");
    GridAxis axis;
    axis.min = parse_one_double(parts[0]);
    axis.max = parse_one_double(parts[1]);
    const double steps = parse_one_double(parts[2]);
    if (steps < 2.0 || steps != std::floor(steps)) {
        throw std::invalid_argument("grid steps must be an integer >= 2");
    }
    axis.steps = static_cast<std::size_t>(steps);
    return axis;
}

std::pair<GridAxis, GridAxis> parse_grid(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 2) {
        throw std::invalid_argument("expected 'x1min:x1max:steps,x2min:x2max:steps'");
    }
    return {parse_axis(parts[0]), parse_axis(parts[1])};
}

BlobSpec parse_blob(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 5) {
        throw std::invalid_argument("expected 'cx,cy,spread,count,label', got '" + s + "'");
    }
    BlobSpec blob;
    blob.center = {parse_one_double(parts[0]), parse_one_double(parts[1])};
    blob.spread = parse_one_double(parts[2]);
    const double count = parse_one_double(parts[3]);
    if (count < 1.0 || count != std::floor(count)) {
        throw std::invalid_argument("blob count must be a positive integer");
    }
    blob.count = static_cast<std::size_t>(count);
    blob.label = parts[4];
    return blob;
}

PhaseBoundary parse_boundary(const std::string& s) {
    PhaseBoundary b;
    for (const std::string& knot : split(s, ',')) {
        const auto pt = split(knot, ':');
        if (pt.size() != 2) throw std::invalid_argument("expected 'p:t' knots, got '" + knot + "'");
        b.knots.push_back({parse_one_double(pt[0]), parse_one_double(pt[1])});
    }
    return b;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    std::random_device rd;
    const std::uint64_t v = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed: " << v << "\n";
    return v;
}

AngleRange parse_range(const std::string& s) {
    if (s == "2pi") return AngleRange::two_pi;
    if (s == "pi") return AngleRange::pi;
    throw std::invalid_argument("angle range must be '2pi' or 'pi'");
}

CorrelatorMapping parse_mapping(const std::string& s) {
    if (s == "theta-first") return CorrelatorMapping::theta_first;
    if (s == "phi-first") return CorrelatorMapping::phi_first;
    throw std::invalid_argument("mapping must be 'theta-first' or 'phi-first'");
}

// VO2-flavored default transition curve for the boundary generator.
PhaseBoundary default_boundary() {
    return {{{0, 65}, {5, 60}, {10, 52}, {15, 45}, {20, 38}, {25, 30}, {30, 24}, {35, 18},
             {40, 12}}};
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"quantum nearest-centroid classification toolkit"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "learn a sublabel model from a labeled csv");
    TrainOptions topt;
    std::string train_range = "2pi", train_mapping = "theta-first";
    std::optional<std::uint64_t> train_seed;
    train->add_option("--data", topt.data_path, "training csv")->required();
    train->add_option("--model", topt.model_path, "output model json")->required();
    train->add_option("--d-threshold", topt.d_threshold, "acceptance threshold D");
    train->add_option("--max-iters", topt.max_iters, "merge/split iteration cap");
    train->add_option("--penalty", topt.penalty,
                      "weight-optimization penalty (0 = member-share weights)");
    train->add_option("--penalty-iters", topt.penalty_iters, "weight-optimization sweeps");
    train->add_option("--angle-range", train_range, "2pi or pi (2d data)");
    train->add_option("--mapping", train_mapping, "theta-first or phi-first (4d data)");
    train->add_option("--seed", train_seed, "seed recorded in the model");

    // predict
    auto* predict = app.add_subcommand("predict", "classify points with a trained model");
    PredictOptions popt;
    std::string predict_point;
    std::optional<std::uint64_t> predict_seed;
    predict->add_option("--model", popt.model_path, "model json")->required();
    predict->add_option("--model-b", popt.model_b_path, "second model for dual prediction");
    predict->add_option("--point", predict_point, "single input point 'x1,x2[,x3,x4]'");
    predict->add_option("--data", popt.data_path, "csv of input points");
    predict->add_option("--shots", popt.shots, "sample the circuit instead of exact readout");
    predict->add_option("--seed", predict_seed, "sampling seed");

    // eval
    auto* eval = app.add_subcommand("eval", "accuracy of a model on a labeled csv");
    EvalOptions eopt;
    std::optional<std::uint64_t> eval_seed;
    eval->add_option("--model", eopt.model_path, "model json")->required();
    eval->add_option("--model-b", eopt.model_b_path, "second model for dual prediction");
    eval->add_option("--data", eopt.data_path, "labeled csv to score")->required();
    eval->add_option("--train", eopt.train_path, "training csv whose rows are excluded");
    eval->add_option("--shots", eopt.shots, "sample the circuit instead of exact readout");
    eval->add_option("--seed", eval_seed, "sampling seed");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "classify a 2d grid and write csv");
    SweepOptions sopt;
    std::string grid_spec;
    sweep->add_option("--model", sopt.model_path, "model json")->required();
    sweep->add_option("--grid", grid_spec, "'x1min:x1max:steps,x2min:x2max:steps'")->required();
    sweep->add_option("--out", sopt.out_path, "output csv")->required();
    sweep->add_option("--svg", sopt.svg_path, "optional svg heat map");

    // werner
    auto* werner = app.add_subcommand("werner", "entanglement classification experiment");
    WernerOptions wopt;
    std::optional<std::uint64_t> werner_seed;
    werner->add_option("--train-size", wopt.train_size, "training points (even)");
    werner->add_option("--test-size", wopt.test_size, "test points (even)");
    werner->add_option("--shots", wopt.shots, "correlator shots per axis pair (default exact)");
    werner->add_option("--d-threshold", wopt.d_threshold, "acceptance threshold for reduction");
    werner->add_option("--max-iters", wopt.max_iters, "merge/split iteration cap");
    werner->add_option("--out-polar", wopt.polar_path, "csv of (p, phi, label, predicted)");
    werner->add_option("--seed", werner_seed, "experiment seed");

    // gen
    auto* gen = app.add_subcommand("gen", "synthetic dataset generators");
    gen->require_subcommand(1);

    auto* gen_blobs_cmd = gen->add_subcommand("blobs", "gaussian blobs");
    GenBlobsOptions gbopt;
    std::vector<std::string> blob_specs;
    std::optional<std::uint64_t> blobs_seed;
    gen_blobs_cmd->add_option("--blob", blob_specs, "blob 'cx,cy,spread,count,label'")
        ->required()
        ->take_all();
    gen_blobs_cmd->add_option("--out", gbopt.out_path, "output csv")->required();
    gen_blobs_cmd->add_option("--seed", blobs_seed, "generator seed");

    auto* gen_boundary_cmd = gen->add_subcommand("boundary", "two phases split by a curve");
    GenBoundaryOptions gdopt;
    std::string boundary_spec, trange_spec = "-20:110", label_spec = "metallic,insulating";
    std::optional<std::uint64_t> boundary_seed;
    gen_boundary_cmd->add_option("--boundary", boundary_spec, "knots 'p:t,p:t,...'");
    gen_boundary_cmd->add_option("--trange", trange_spec, "temperature range 'min:max'");
    gen_boundary_cmd->add_option("--per-class", gdopt.boundary.per_class, "points per phase");
    gen_boundary_cmd->add_option("--margin", gdopt.boundary.margin,
                                 "minimum distance from the curve");
    gen_boundary_cmd->add_option("--labels", label_spec, "'above,below' label names");
    gen_boundary_cmd->add_option("--out", gdopt.out_path, "output csv")->required();
    gen_boundary_cmd->add_option("--seed", boundary_seed, "generator seed");

    auto* gen_werner_cmd = gen->add_subcommand("werner", "correlator vectors of mixed states");
    GenWernerOptions gwopt;
    std::optional<std::uint64_t> gen_werner_seed;
    gen_werner_cmd->add_option("--n", gwopt.n, "total points (even)");
    gen_werner_cmd->add_option("--shots", gwopt.shots, "correlator shots (default exact)");
    gen_werner_cmd->add_option("--out", gwopt.out_path, "output csv")->required();
    gen_werner_cmd->add_option("--seed", gen_werner_seed, "generator seed");

    // histdemo
    auto* hist = app.add_subcommand("histdemo", "histogram state matching-rate demo");
    HistDemoOptions hopt;
    std::string hist_state = "h";
    std::optional<std::uint64_t> hist_seed;
    hist->add_option("--particles", hopt.particles, "particles to accumulate");
    hist->add_option("--state", hist_state, "source spectrum, h or v");
    hist->add_option("--seed", hist_seed, "sampling seed");

    // inner
    auto* inner = app.add_subcommand("inner", "inner product of two encoded states");
    std::string inner_a, inner_b;
    inner->add_option("--a", inner_a, "'theta,phi'")->required();
    inner->add_option("--b", inner_b, "'theta,phi'")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (train->parsed()) {
            topt.angle_range = parse_range(train_range);
            topt.mapping = parse_mapping(train_mapping);
            topt.seed = train_seed.value_or(0);
            cmd_train(topt, std::cout);
        } else if (predict->parsed()) {
            if (!predict_point.empty()) popt.point = parse_doubles(predict_point);
            if (popt.shots) popt.seed = resolve_seed(predict_seed);
            cmd_predict(popt, std::cout);
        } else if (eval->parsed()) {
            if (eopt.shots) eopt.seed = resolve_seed(eval_seed);
            cmd_eval(eopt, std::cout);
        } else if (sweep->parsed()) {
            std::tie(sopt.x1, sopt.x2) = parse_grid(grid_spec);
            cmd_sweep(sopt, std::cout);
        } else if (werner->parsed()) {
            wopt.seed = resolve_seed(werner_seed);
            cmd_werner(wopt, std::cout);
        } else if (gen_blobs_cmd->parsed()) {
            for (const std::string& s : blob_specs) gbopt.blobs.push_back(parse_blob(s));
            gbopt.seed = resolve_seed(blobs_seed);
            cmd_gen_blobs(gbopt, std::cout);
        } else if (gen_boundary_cmd->parsed()) {
            gdopt.boundary.boundary =
                boundary_spec.empty() ? default_boundary() : parse_boundary(boundary_spec);
            const auto trange = parse_doubles(trange_spec, ':');
            if (trange.size() != 2) throw std::invalid_argument("expected --trange 'min:max'");
            gdopt.boundary.t_min = trange[0];
            gdopt.boundary.t_max = trange[1];
            const auto labels = split(label_spec, ',');
            if (labels.size() != 2) throw std::invalid_argument("expected --labels 'above,below'");
            gdopt.boundary.above_label = labels[0];
            gdopt.boundary.below_label = labels[1];
            gdopt.seed = resolve_seed(boundary_seed);
            cmd_gen_boundary(gdopt, std::cout);
        } else if (gen_werner_cmd->parsed()) {
            gwopt.seed = resolve_seed(gen_werner_seed);
            cmd_gen_werner(gwopt, std::cout);
        } else if (hist->parsed()) {
            if (hist_state != "h" && hist_state != "v") {
                throw std::invalid_argument("state must be 'h' or 'v'");
            }
            hopt.state = hist_state == "h" ? HistState::h : HistState::v;
            hopt.seed = resolve_seed(hist_seed);
            cmd_histdemo(hopt, std::cout);
        } else if (inner->parsed()) {
            cmd_inner(parse_angles(inner_a), parse_angles(inner_b), std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace qnc
