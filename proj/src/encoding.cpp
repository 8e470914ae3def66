#include "qnc/encoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qnc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string("non-finite ") + what);
    }
}

double angle_span(AngleRange range) {
    return range == AngleRange::two_pi ? two_pi : std::numbers::pi;
}

}  // namespace

Bounds2D bounds_from_dataset(const std::vector<std::array<double, 2>>& points) {
    if (points.empty()) throw std::invalid_argument("cannot take bounds of an empty dataset");
    Bounds2D b{points[0][0], points[0][0], points[0][1], points[0][1]};
    for (const auto& p : points) {
        check_finite(p[0], "coordinate");
        check_finite(p[1], "coordinate");
        b.min_x1 = std::min(b.min_x1, p[0]);
        b.max_x1 = std::max(b.max_x1, p[0]);
        b.min_x2 = std::min(b.min_x2, p[1]);
        b.max_x2 = std::max(b.max_x2, p[1]);
    }
    if (b.min_x1 == b.max_x1 || b.min_x2 == b.max_x2) {
        throw std::invalid_argument("degenerate dataset bounds: a dimension has zero extent");
    }
    return b;
}

BlochAngles encode_2d(const std::array<double, 2>& x, const Bounds2D& bounds, AngleRange range) {
    check_finite(x[0], "input");
    check_finite(x[1], "input");
    const double span = angle_span(range);
    const double t1 = (x[0] - bounds.min_x1) / (bounds.max_x1 - bounds.min_x1);
    const double t2 = (x[1] - bounds.min_x2) / (bounds.max_x2 - bounds.min_x2);
    return {std::clamp(t1, 0.0, 1.0) * span, std::clamp(t2, 0.0, 1.0) * span};
}

std::array<double, 2> decode_2d(const BlochAngles& angles, const Bounds2D& bounds,
                                AngleRange range) {
    const double span = angle_span(range);
    return {bounds.min_x1 + angles.theta / span * (bounds.max_x1 - bounds.min_x1),
            bounds.min_x2 + angles.phi / span * (bounds.max_x2 - bounds.min_x2)};
}

Statevector state_from_bloch(const BlochAngles& angles) {
    Statevector st(1);
    st.apply_1q(0, rot(angles.theta, angles.phi));
    return st;
}

cdouble overlap(const BlochAngles& a, const BlochAngles& b) {
    const double ca = std::cos(a.theta / 2.0), sa = std::sin(a.theta / 2.0);
    const double cb = std::cos(b.theta / 2.0), sb = std::sin(b.theta / 2.0);
    return ca * cb + std::polar(sa * sb, (b.phi - a.phi) / 2.0);
}

double overlap_mag(const EncodedPoint& a, const EncodedPoint& b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("encoded points must have the same nonzero qubit count");
    }
    double mag = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) mag *= std::abs(overlap(a[j], b[j]));
    return mag;
}

double circuit_inner_product(const BlochAngles& a, const BlochAngles& b) {
    Statevector st(1);
    // Prepare |psi(b)>, then un-prepare with the inverse rotation for a;
    // P(|0>) is the squared inner product.
    st.apply_1q(0, rz(-b.phi / 2.0));
    st.apply_1q(0, ry(b.theta));
    st.apply_1q(0, rz(b.phi / 2.0));
    st.apply_1q(0, rz(-a.phi / 2.0));
    st.apply_1q(0, ry(-a.theta));
    st.apply_1q(0, rz(a.phi / 2.0));
    return std::norm(st.amp(0));
}

Statevector state_from_hyperspherical(const HypersphericalAngles& h) {
    const std::size_t m = h.thetas.size();
    if (m == 0 || h.phis.size() != m) {
        throw std::invalid_argument("hyperspherical angles need equal, nonzero theta/phi counts");
    }
    const std::size_t dim = m + 1;
    if (!std::has_single_bit(dim)) {
        throw std::invalid_argument("hyperspherical dimension " + std::to_string(dim) +
                                    " is not a power of two");
    }
    std::vector<cdouble> amps(dim);
    double sines = 1.0;  // product of sin(theta_1..theta_k)
    amps[0] = cdouble{std::cos(h.thetas[0]), 0.0};
    for (std::size_t k = 1; k < dim - 1; ++k) {
        sines *= std::sin(h.thetas[k - 1]);
        amps[k] = std::polar(sines * std::cos(h.thetas[k]), h.phis[k - 1]);
    }
    sines *= std::sin(h.thetas[m - 1]);
    amps[dim - 1] = std::polar(sines, h.phis[m - 1]);

    const int n_qubits = std::countr_zero(dim);
    Statevector st(n_qubits);
    st.set_amplitudes(std::move(amps));
    return st;
}

Statevector state_from_product(const ProductAngles& p) {
    if (p.angles.empty()) throw std::invalid_argument("product encoding needs at least one qubit");
    Statevector st(static_cast<int>(p.angles.size()));
    for (std::size_t j = 0; j < p.angles.size(); ++j) {
        // Full-angle convention: amplitudes cos(theta_j) and e^{i phi_j} sin(theta_j).
        st.apply_1q(static_cast<int>(j), rot(2.0 * p.angles[j][0], 2.0 * p.angles[j][1]));
    }
    return st;
}

EncodedPoint prep_angles(const ProductAngles& p) {
    EncodedPoint out;
    out.reserve(p.angles.size());
    for (const auto& [theta, phi] : p.angles) out.push_back({2.0 * theta, 2.0 * phi});
    return out;
}

Statevector state_from_histogram(const Histogram& h) {
    if (h.counts.empty() || !std::has_single_bit(h.counts.size())) {
        throw std::invalid_argument("histogram slot count must be a nonzero power of two");
    }
    std::uint64_t total = 0;
    for (std::uint64_t c : h.counts) total += c;
    if (total == 0) throw std::invalid_argument("histogram has no entries");
    std::vector<cdouble> amps(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        amps[i] = cdouble{std::sqrt(static_cast<double>(h.counts[i]) / total), 0.0};
    }
    Statevector st(std::countr_zero(h.counts.size()));
    st.set_amplitudes(std::move(amps));
    return st;
}

BoundsND bounds_from_vectors(const std::vector<std::vector<double>>& vectors) {
    if (vectors.empty()) throw std::invalid_argument("cannot take bounds of an empty dataset");
    const std::size_t dims = vectors[0].size();
    BoundsND b;
    b.minmax.assign(dims, {vectors[0][0], vectors[0][0]});
    for (std::size_t d = 0; d < dims; ++d) b.minmax[d] = {vectors[0][d], vectors[0][d]};
    for (const auto& v : vectors) {
        if (v.size() != dims) throw std::invalid_argument("inconsistent vector dimensions");
        for (std::size_t d = 0; d < dims; ++d) {
            check_finite(v[d], "coordinate");
            b.minmax[d][0] = std::min(b.minmax[d][0], v[d]);
            b.minmax[d][1] = std::max(b.minmax[d][1], v[d]);
        }
    }
    for (const auto& [lo, hi] : b.minmax) {
        if (lo == hi) {
            throw std::invalid_argument("degenerate dataset bounds: a dimension has zero extent");
        }
    }
    return b;
}

ProductAngles encode_correlators(const std::vector<double>& e, const BoundsND& bounds,
                                 CorrelatorMapping mapping) {
    if (e.size() != 4 || bounds.minmax.size() != 4) {
        throw std::invalid_argument("correlator encoding expects 4 components and 4 bounds");
    }
    std::array<double, 4> t{};
    for (std::size_t d = 0; d < 4; ++d) {
        check_finite(e[d], "correlator");
        const double u = (e[d] - bounds.minmax[d][0]) / (bounds.minmax[d][1] - bounds.minmax[d][0]);
        t[d] = std::clamp(u, 0.0, 1.0) * (std::numbers::pi / 2.0);
    }
    // Input order is (E(Z,B+), E(X,B+), E(Z,B-), E(X,B-)); qubit 1 carries
    // the Z pair and qubit 2 the X pair.
    ProductAngles p;
    if (mapping == CorrelatorMapping::theta_first) {
        p.angles = {{t[0], t[2]}, {t[1], t[3]}};
    } else {
        p.angles = {{t[2], t[0]}, {t[3], t[1]}};
    }
    return p;
}

}  // namespace qnc
