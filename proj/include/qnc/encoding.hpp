#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qnc/qsim.hpp"

namespace qnc {

// Angles of a single-qubit state prepared as rot(theta, phi)|0>, i.e.
// cos(theta/2)|0> + e^{+i phi/2} sin(theta/2)|1>.
struct BlochAngles {
    double theta = 0.0;
    double phi = 0.0;
};

// One angle pair per data qubit. 2d inputs use one qubit, correlator
// vectors use two.
using EncodedPoint = std::vector<BlochAngles>;

struct Bounds2D {
    double min_x1 = 0.0;
    double max_x1 = 1.0;
    double min_x2 = 0.0;
    double max_x2 = 1.0;
};

enum class AngleRange { two_pi, pi };

Bounds2D bounds_from_dataset(const std::vector<std::array<double, 2>>& points);

// Affine map of a 2d point into angle space; out-of-range inputs are
// clamped to the angle interval.
BlochAngles encode_2d(const std::array<double, 2>& x, const Bounds2D& bounds,
                      AngleRange range = AngleRange::two_pi);

// Inverse of encode_2d on the nominal interval, used to place learned
// centroids back in data coordinates.
std::array<double, 2> decode_2d(const BlochAngles& angles, const Bounds2D& bounds,
                                AngleRange range = AngleRange::two_pi);

Statevector state_from_bloch(const BlochAngles& angles);

// Exact <psi(a)|psi(b)> under the rot() convention.
cdouble overlap(const BlochAngles& a, const BlochAngles& b);

// |<psi(a)|psi(b)>| for product states, one factor per qubit.
double overlap_mag(const EncodedPoint& a, const EncodedPoint& b);

// Runs the six-gate rotation circuit on one qubit and returns P(|0>),
// which equals |<psi(a)|psi(b)>|^2.
double circuit_inner_product(const BlochAngles& a, const BlochAngles& b);

// Amplitude encoding of a full 2^N-dimensional vector.
struct HypersphericalAngles {
    std::vector<double> thetas;  // 2^N - 1 polar angles
    std::vector<double> phis;    // 2^N - 1 phases
};

Statevector state_from_hyperspherical(const HypersphericalAngles& h);

// Product encoding: qubit j carries cos(theta_j)|0> + e^{i phi_j} sin(theta_j)|1>.
struct ProductAngles {
    std::vector<std::array<double, 2>> angles;  // (theta_j, phi_j)
};

Statevector state_from_product(const ProductAngles& p);

// Rewrites product angles in the rot() half-angle convention used by the
// classifier and the learner.
EncodedPoint prep_angles(const ProductAngles& p);

struct Histogram {
    std::vector<std::uint64_t> counts;  // size must be a power of two
};

// Square-root amplitude encoding of a normalized histogram.
Statevector state_from_histogram(const Histogram& h);

// Correlator-vector encoding used by the entanglement experiments. The
// input vector is (E(Z,B+), E(X,B+), E(Z,B-), E(X,B-)).
enum class CorrelatorMapping { theta_first, phi_first };

struct BoundsND {
    std::vector<std::array<double, 2>> minmax;
};

BoundsND bounds_from_vectors(const std::vector<std::vector<double>>& vectors);

// Min-max normalizes each component into [0, pi/2] and distributes the
// four values over two qubits. theta_first assigns the Z correlators to
// (theta1, phi1) and the X correlators to (theta2, phi2); phi_first swaps
// the roles.
ProductAngles encode_correlators(const std::vector<double>& e, const BoundsND& bounds,
                                 CorrelatorMapping mapping);

}  // namespace qnc
