#include "qnc/werner.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qnc/random.hpp"

namespace qnc {

const char* const werner_label_entangled = "entangled";
const char* const werner_label_separable = "separable";

namespace {

using Mat2 = std::array<cdouble, 4>;

constexpr double inv_sqrt2 = 0.70710678118654752440;

Mat2 obs_matrix(ObsA a) {
    if (a == ObsA::z) return {cdouble{1, 0}, {0, 0}, {0, 0}, cdouble{-1, 0}};
    return {cdouble{0, 0}, cdouble{1, 0}, cdouble{1, 0}, cdouble{0, 0}};
}

Mat2 obs_matrix(ObsB b) {
    const double s = b == ObsB::plus ? inv_sqrt2 : -inv_sqrt2;
    // (Z + s_x X)/sqrt(2) with s_x = +/-1
    return {cdouble{inv_sqrt2, 0}, cdouble{s, 0}, cdouble{s, 0}, cdouble{-inv_sqrt2, 0}};
}

DensityMatrix4 kron(const Mat2& a, const Mat2& b) {
    DensityMatrix4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out.at(2 * i + k, 2 * j + l) =
                        a[static_cast<std::size_t>(2 * i + j)] * b[static_cast<std::size_t>(2 * k + l)];
    return out;
}

double real_trace_product(const DensityMatrix4& rho, const DensityMatrix4& m) {
    cdouble tr{0.0, 0.0};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) tr += rho.at(i, j) * m.at(j, i);
    return tr.real();
}

Mat2 projector(const Mat2& obs, int sign) {
    // Observables here square to the identity, so P = (I + sign * obs)/2.
    const double s = sign > 0 ? 0.5 : -0.5;
    Mat2 p{};
    p[0] = cdouble{0.5, 0.0} + s * obs[0];
    p[1] = s * obs[1];
    p[2] = s * obs[2];
    p[3] = cdouble{0.5, 0.0} + s * obs[3];
    return p;
}

}  // namespace

double DensityMatrix4::trace_real() const {
    double t = 0.0;
    for (int i = 0; i < 4; ++i) t += at(i, i).real();
    return t;
}

DensityMatrix4 werner_density(const WernerParams& params) {
    if (!(params.p >= 0.0 && params.p <= 1.0)) {
        throw std::invalid_argument("werner mixing parameter must lie in [0, 1], got " +
                                    std::to_string(params.p));
    }
    if (!std::isfinite(params.phi)) throw std::invalid_argument("non-finite bell phase");

    DensityMatrix4 rho;
    const double bg = (1.0 - params.p) / 4.0;
    for (int i = 0; i < 4; ++i) rho.at(i, i) = cdouble{bg, 0.0};
    // |B(phi)> = (|01> + e^{i phi}|10>)/sqrt(2) occupies indices 1 and 2.
    rho.at(1, 1) += cdouble{params.p / 2.0, 0.0};
    rho.at(2, 2) += cdouble{params.p / 2.0, 0.0};
    rho.at(1, 2) += std::polar(params.p / 2.0, -params.phi);
    rho.at(2, 1) += std::polar(params.p / 2.0, params.phi);
    return rho;
}

double correlator(const DensityMatrix4& rho, ObsA a, ObsB b) {
    return real_trace_product(rho, kron(obs_matrix(a), obs_matrix(b)));
}

double sample_correlator(const DensityMatrix4& rho, ObsA a, ObsB b, std::uint64_t shots,
                         std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("shot count must be positive");
    const Mat2 ma = obs_matrix(a);
    const Mat2 mb = obs_matrix(b);

    // Joint outcome probabilities for the four sign pairs.
    double prob[4];
    double total = 0.0;
    for (int s = 0; s < 2; ++s) {
        for (int t = 0; t < 2; ++t) {
            const double q = real_trace_product(
                rho, kron(projector(ma, s == 0 ? 1 : -1), projector(mb, t == 0 ? 1 : -1)));
            prob[2 * s + t] = std::max(q, 0.0);
            total += prob[2 * s + t];
        }
    }
    for (double& q : prob) q /= total;

    std::mt19937_64 rng(seed);
    std::int64_t sum = 0;
    for (std::uint64_t k = 0; k < shots; ++k) {
        const double u = uniform_unit(rng);
        double acc = 0.0;
        int outcome = 3;
        for (int o = 0; o < 4; ++o) {
            acc += prob[o];
            if (u < acc) {
                outcome = o;
                break;
            }
        }
        const int sa = outcome < 2 ? 1 : -1;
        const int sb = (outcome % 2) == 0 ? 1 : -1;
        sum += sa * sb;
    }
    return static_cast<double>(sum) / static_cast<double>(shots);
}

double chsh_from_correlators(double e_zp, double e_zm, double e_xp, double e_xm) {
    return std::abs(e_zp + e_zm - e_xp + e_xm);
}

double chsh_value(const WernerParams& params) {
    if (!(params.p >= 0.0 && params.p <= 1.0)) {
        throw std::invalid_argument("werner mixing parameter must lie in [0, 1]");
    }
    return params.p * std::sqrt(2.0) * (1.0 + std::cos(params.phi));
}

std::array<double, 4> correlator_vector(const DensityMatrix4& rho) {
    return {correlator(rho, ObsA::z, ObsB::plus), correlator(rho, ObsA::x, ObsB::plus),
            correlator(rho, ObsA::z, ObsB::minus), correlator(rho, ObsA::x, ObsB::minus)};
}

std::array<double, 4> sampled_correlator_vector(const DensityMatrix4& rho, std::uint64_t shots,
                                                std::uint64_t seed) {
    return {sample_correlator(rho, ObsA::z, ObsB::plus, shots, mix_seed(seed, 0)),
            sample_correlator(rho, ObsA::x, ObsB::plus, shots, mix_seed(seed, 1)),
            sample_correlator(rho, ObsA::z, ObsB::minus, shots, mix_seed(seed, 2)),
            sample_correlator(rho, ObsA::x, ObsB::minus, shots, mix_seed(seed, 3))};
}

LabeledDataset gen_werner_dataset(std::size_t n, std::uint64_t seed,
                                  std::optional<std::uint64_t> shots) {
    if (n < 4 || n % 2 != 0) {
        throw std::invalid_argument("werner dataset size must be even and at least 4");
    }
    if (shots && *shots == 0) throw std::invalid_argument("shot count must be positive");

    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::mt19937_64 rng(seed);

    LabeledDataset ds;
    ds.meta.generator = "werner";
    ds.meta.seed = seed;

    for (std::size_t i = 0; i < n; ++i) {
        const bool entangled = i < n / 2;
        double u = uniform_unit(rng);
        while (u == 0.0) u = uniform_unit(rng);
        const double p = entangled ? (1.0 / 3.0 + u * (2.0 / 3.0)) : u / 3.0;
        const double phi = uniform_in(rng, 0.0, two_pi);

        const DensityMatrix4 rho = werner_density({p, phi});
        std::array<double, 4> e{};
        if (shots) {
            e = sampled_correlator_vector(rho, *shots, rng());
        } else {
            e = correlator_vector(rho);
        }
        ds.vectors.push_back({e[0], e[1], e[2], e[3]});
        ds.labels.push_back(entangled ? werner_label_entangled : werner_label_separable);
        ds.meta.params.push_back({p, phi});
    }

    // Deterministic shuffle so class blocks do not dominate training order.
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = rng() % (i + 1);
        std::swap(ds.vectors[i], ds.vectors[j]);
        std::swap(ds.labels[i], ds.labels[j]);
        std::swap(ds.meta.params[i], ds.meta.params[j]);
    }
    return ds;
}

}  // namespace qnc
