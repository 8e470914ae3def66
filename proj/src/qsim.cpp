#include "qnc/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qnc/random.hpp"

namespace qnc {

namespace {

double abs2(const cdouble& z) { return std::norm(z); }

}  // namespace

bool Unitary2::is_unitary(double tol) const {
    // u * u^dagger == I
    const Unitary2 d = dagger();
    const Unitary2 p = (*this) * d;
    return std::abs(p.u00 - cdouble{1.0, 0.0}) <= tol && std::abs(p.u01) <= tol &&
           std::abs(p.u10) <= tol && std::abs(p.u11 - cdouble{1.0, 0.0}) <= tol;
}

Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
    return {a.u00 * b.u00 + a.u01 * b.u10, a.u00 * b.u01 + a.u01 * b.u11,
            a.u10 * b.u00 + a.u11 * b.u10, a.u10 * b.u01 + a.u11 * b.u11};
}

Unitary2 ry(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {cdouble{c, 0.0}, cdouble{-s, 0.0}, cdouble{s, 0.0}, cdouble{c, 0.0}};
}

Unitary2 rz(double alpha) {
    const cdouble lo = std::polar(1.0, -alpha / 2.0);
    const cdouble hi = std::polar(1.0, alpha / 2.0);
    return {lo, cdouble{0.0, 0.0}, cdouble{0.0, 0.0}, hi};
}

Unitary2 rot(double theta, double phi) { return rz(phi / 2.0) * ry(theta) * rz(-phi / 2.0); }

Unitary2 pauli_x() {
    return {cdouble{0.0, 0.0}, cdouble{1.0, 0.0}, cdouble{1.0, 0.0}, cdouble{0.0, 0.0}};
}

Unitary2 hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return {cdouble{s, 0.0}, cdouble{s, 0.0}, cdouble{s, 0.0}, cdouble{-s, 0.0}};
}

Statevector::Statevector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > max_qubits) {
        throw std::out_of_range("statevector size must be between 1 and 24 qubits, got " +
                                std::to_string(n_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, cdouble{0.0, 0.0});
    amps_[0] = cdouble{1.0, 0.0};
}

void Statevector::check_qubit(int qubit, const char* role) const {
    if (qubit < 0 || qubit >= n_) {
        throw std::out_of_range(std::string(role) + " qubit index " + std::to_string(qubit) +
                                " out of range for " + std::to_string(n_) + " qubits");
    }
}

void Statevector::set_amplitudes(std::vector<cdouble> amps) {
    if (amps.size() != amps_.size()) {
        throw std::invalid_argument("amplitude vector size " + std::to_string(amps.size()) +
                                    " does not match state dimension " +
                                    std::to_string(amps_.size()));
    }
    double n2 = 0.0;
    for (const cdouble& a : amps) n2 += abs2(a);
    if (std::abs(n2 - 1.0) > 1e-6) {
        throw std::invalid_argument("amplitude vector is not normalized");
    }
    amps_ = std::move(amps);
}

void Statevector::apply_1q(int target, const Unitary2& u) {
    check_qubit(target, "target");
    const std::size_t stride = bit_of(target);
    const std::size_t d = amps_.size();
    for (std::size_t base = 0; base < d; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cdouble a0 = amps_[i];
            const cdouble a1 = amps_[i + stride];
            amps_[i] = u.u00 * a0 + u.u01 * a1;
            amps_[i + stride] = u.u10 * a0 + u.u11 * a1;
        }
    }
}

std::pair<std::size_t, std::size_t> Statevector::control_mask(const ControlSpec& controls,
                                                              std::span<const int> targets) const {
    std::size_t mask = 0;
    std::size_t want = 0;
    for (const Control& c : controls) {
        check_qubit(c.qubit, "control");
        const std::size_t bit = bit_of(c.qubit);
        if (mask & bit) {
            throw std::invalid_argument("duplicate control qubit " + std::to_string(c.qubit));
        }
        mask |= bit;
        if (c.polarity == Polarity::closed) want |= bit;
    }
    for (int t : targets) {
        check_qubit(t, "target");
        if (mask & bit_of(t)) {
            throw std::invalid_argument("qubit " + std::to_string(t) +
                                        " is both control and target");
        }
    }
    return {mask, want};
}

void Statevector::apply_controlled(const ControlSpec& controls, int target, const Unitary2& u) {
    const int targets[1] = {target};
    const auto [mask, want] = control_mask(controls, targets);
    const std::size_t stride = bit_of(target);
    const std::size_t d = amps_.size();
    for (std::size_t base = 0; base < d; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            if ((i & mask) != want) continue;
            const cdouble a0 = amps_[i];
            const cdouble a1 = amps_[i + stride];
            amps_[i] = u.u00 * a0 + u.u01 * a1;
            amps_[i + stride] = u.u10 * a0 + u.u11 * a1;
        }
    }
}

void Statevector::apply_controlled_unitary(const ControlSpec& controls,
                                           const std::vector<int>& targets,
                                           const std::vector<cdouble>& matrix) {
    if (targets.empty()) throw std::invalid_argument("at least one target qubit required");
    for (std::size_t i = 0; i < targets.size(); ++i) {
        for (std::size_t j = i + 1; j < targets.size(); ++j) {
            if (targets[i] == targets[j]) {
                throw std::invalid_argument("duplicate target qubit " +
                                            std::to_string(targets[i]));
            }
        }
    }
    const auto [mask, want] = control_mask(controls, targets);
    const std::size_t block = std::size_t{1} << targets.size();
    if (matrix.size() != block * block) {
        throw std::invalid_argument("matrix size does not match target count");
    }

    std::size_t target_mask = 0;
    std::vector<std::size_t> offsets(block, 0);
    for (std::size_t row = 0; row < block; ++row) {
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (row & (std::size_t{1} << (targets.size() - 1 - t))) {
                offsets[row] |= bit_of(targets[t]);
            }
        }
    }
    for (int t : targets) target_mask |= bit_of(t);

    std::vector<cdouble> in(block), out(block);
    const std::size_t d = amps_.size();
    for (std::size_t i = 0; i < d; ++i) {
        if (i & target_mask) continue;  // visit each block once, at its all-zero index
        if ((i & mask) != want) continue;
        for (std::size_t row = 0; row < block; ++row) in[row] = amps_[i | offsets[row]];
        for (std::size_t row = 0; row < block; ++row) {
            cdouble acc{0.0, 0.0};
            const cdouble* mrow = matrix.data() + row * block;
            for (std::size_t col = 0; col < block; ++col) acc += mrow[col] * in[col];
            out[row] = acc;
        }
        for (std::size_t row = 0; row < block; ++row) amps_[i | offsets[row]] = out[row];
    }
}

double Statevector::marginal_probability(
    const std::vector<std::pair<int, int>>& constraints) const {
    std::size_t mask = 0;
    std::size_t want = 0;
    for (const auto& [qubit, bit] : constraints) {
        check_qubit(qubit, "constraint");
        if (bit != 0 && bit != 1) {
            throw std::invalid_argument("constraint bit must be 0 or 1, got " +
                                        std::to_string(bit));
        }
        const std::size_t b = bit_of(qubit);
        if (mask & b) {
            throw std::invalid_argument("duplicate constraint on qubit " + std::to_string(qubit));
        }
        mask |= b;
        if (bit) want |= b;
    }
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & mask) == want) p += abs2(amps_[i]);
    }
    return p;
}

double Statevector::norm_sq() const {
    double n2 = 0.0;
    for (const cdouble& a : amps_) n2 += abs2(a);
    return n2;
}

CountTable sample_counts(const Statevector& state, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("shot count must be positive");
    std::vector<double> cdf(state.dim());
    double acc = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        acc += abs2(state.amp(i));
        cdf[i] = acc;
    }
    // acc is 1 up to rounding; the final bucket absorbs the remainder.
    cdf.back() = std::max(cdf.back(), 1.0);

    std::mt19937_64 rng(seed);
    CountTable table;
    table.shots = shots;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = uniform_unit(rng);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::uint64_t idx = static_cast<std::uint64_t>(it - cdf.begin());
        ++table.counts[idx];
    }
    return table;
}

double counts_probability(const CountTable& table, int n_qubits,
                          const std::vector<std::pair<int, int>>& constraints) {
    if (table.shots == 0) throw std::invalid_argument("count table is empty");
    std::uint64_t mask = 0, want = 0;
    for (const auto& [qubit, bit] : constraints) {
        if (qubit < 0 || qubit >= n_qubits) throw std::out_of_range("qubit index out of range");
        if (bit != 0 && bit != 1) throw std::invalid_argument("constraint bit must be 0 or 1");
        const std::uint64_t b = std::uint64_t{1} << (n_qubits - 1 - qubit);
        mask |= b;
        if (bit) want |= b;
    }
    std::uint64_t hits = 0;
    for (const auto& [idx, c] : table.counts) {
        if ((idx & mask) == want) hits += c;
    }
    return static_cast<double>(hits) / static_cast<double>(table.shots);
}

}  // namespace qnc
