#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qnc {

// Flat labeled dataset. Vectors are 2d points or 4d correlator vectors;
// every row has the same dimension.
struct LabeledDataset {
    std::vector<std::vector<double>> vectors;
    std::vector<std::string> labels;

    struct Meta {
        std::string generator;
        std::uint64_t seed = 0;
        // Generator-specific per-point parameters, e.g. (p, phi) for
        // entanglement datasets. Empty when not applicable.
        std::vector<std::array<double, 2>> params;
    } meta;

    std::size_t size() const { return vectors.size(); }
    std::size_t dims() const { return vectors.empty() ? 0 : vectors[0].size(); }
    std::vector<std::string> distinct_labels() const;  // sorted, unique
};

// CSV layout: header "x1,x2,label" or "x1,x2,x3,x4,label", one row per
// point, LF line endings. Values round-trip exactly.
LabeledDataset load_csv(const std::string& path);
void save_csv(const LabeledDataset& ds, const std::string& path);

std::string format_double(double v);  // shortest exact decimal form

}  // namespace qnc
