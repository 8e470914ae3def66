#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qnc/dataset.hpp"

namespace qnc {

struct BlobSpec {
    std::array<double, 2> center{0.0, 0.0};
    double spread = 1.0;  // isotropic gaussian sigma
    std::size_t count = 0;
    std::string label;
};

LabeledDataset gen_blobs(const std::vector<BlobSpec>& blobs, std::uint64_t seed);

// Piecewise-linear transition curve T = b(P), knots sorted by P.
struct PhaseBoundary {
    std::vector<std::array<double, 2>> knots;  // (P, T)
};

double boundary_temperature(const PhaseBoundary& b, double p);
double distance_to_boundary(const PhaseBoundary& b, const std::array<double, 2>& point);

struct PhaseBoundaryOptions {
    PhaseBoundary boundary;
    double t_min = 0.0;
    double t_max = 1.0;
    std::size_t per_class = 100;
    double margin = 0.0;  // minimum euclidean distance from the curve
    std::string above_label = "metallic";
    std::string below_label = "insulating";
};

// Uniform rectangle samples split by the curve; points closer than
// `margin` to the curve are rejected.
LabeledDataset gen_phase_boundary(const PhaseBoundaryOptions& opt, std::uint64_t seed);

}  // namespace qnc
