#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "qnc/dataset.hpp"
#include "qnc/qsim.hpp"

namespace qnc {

// Two-qubit Werner-type state: p |B(phi)><B(phi)| + (1 - p) I/4 with
// |B(phi)> = (|01> + e^{i phi}|10>)/sqrt(2). Entangled iff p > 1/3.
struct WernerParams {
    double p = 0.5;
    double phi = 0.0;
};

// Row-major 4x4 density matrix; index = 2*a + b with the first particle
// as the most significant bit.
struct DensityMatrix4 {
    std::array<cdouble, 16> m{};

    cdouble at(int row, int col) const { return m[static_cast<std::size_t>(4 * row + col)]; }
    cdouble& at(int row, int col) { return m[static_cast<std::size_t>(4 * row + col)]; }
    double trace_real() const;
};

DensityMatrix4 werner_density(const WernerParams& params);

// Measurement axes: A in {Z, X}, B in {(Z+X)/sqrt(2), (Z-X)/sqrt(2)}.
enum class ObsA { z, x };
enum class ObsB { plus, minus };

// Exact correlator E(A, B) = tr(rho A otimes B).
double correlator(const DensityMatrix4& rho, ObsA a, ObsB b);

// Finite-shot estimate of the correlator from projective sampling.
double sample_correlator(const DensityMatrix4& rho, ObsA a, ObsB b, std::uint64_t shots,
                         std::uint64_t seed);

// CHSH combination |E(Z,B+) + E(Z,B-) - E(X,B+) + E(X,B-)|.
double chsh_from_correlators(double e_zp, double e_zm, double e_xp, double e_xm);

// Closed form p * sqrt(2) * (1 + cos phi).
double chsh_value(const WernerParams& params);

// The four correlators in dataset order (E(Z,B+), E(X,B+), E(Z,B-), E(X,B-)).
std::array<double, 4> correlator_vector(const DensityMatrix4& rho);
std::array<double, 4> sampled_correlator_vector(const DensityMatrix4& rho, std::uint64_t shots,
                                                std::uint64_t seed);

// n/2 entangled draws (p > 1/3) and n/2 separable draws (p <= 1/3), phi
// uniform in [0, 2 pi). shots empty means exact correlators. meta.params
// stores (p, phi) per point.
LabeledDataset gen_werner_dataset(std::size_t n, std::uint64_t seed,
                                  std::optional<std::uint64_t> shots = std::nullopt);

extern const char* const werner_label_entangled;
extern const char* const werner_label_separable;

}  // namespace qnc
