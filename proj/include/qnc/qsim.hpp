#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace qnc {

using cdouble = std::complex<double>;

// 2x2 matrix, row major. Callers are expected to pass unitaries; ry/rz/rot
// below construct them exactly.
struct Unitary2 {
    cdouble u00{1.0, 0.0};
    cdouble u01{0.0, 0.0};
    cdouble u10{0.0, 0.0};
    cdouble u11{1.0, 0.0};

    Unitary2 dagger() const {
        return {std::conj(u00), std::conj(u10), std::conj(u01), std::conj(u11)};
    }
    bool is_unitary(double tol = 1e-12) const;
};

Unitary2 operator*(const Unitary2& a, const Unitary2& b);

// Rotation conventions used across the whole project:
//   rz(a)  = diag(e^{-ia/2}, e^{+ia/2})
//   ry(t)  = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
//   rot(t,p) = rz(p/2) * ry(t) * rz(-p/2)
// so rot(t,p)|0> = cos(t/2)|0> + e^{+ip/2} sin(t/2)|1>.
Unitary2 ry(double theta);
Unitary2 rz(double alpha);
Unitary2 rot(double theta, double phi);
Unitary2 pauli_x();
Unitary2 hadamard();

enum class Polarity { open, closed };

struct Control {
    int qubit;
    Polarity polarity;
};

using ControlSpec = std::vector<Control>;

// Dense statevector over n qubits. Qubit 0 is the most significant bit of
// the basis-state index: |q0 q1 ... q_{n-1}>.
class Statevector {
  public:
    static constexpr int max_qubits = 24;

    explicit Statevector(int n_qubits);

    int num_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cdouble> amps() const { return amps_; }
    cdouble amp(std::size_t index) const { return amps_.at(index); }

    // Replaces the full amplitude vector. Size must match and the vector
    // must be normalized (used for direct state initialization).
    void set_amplitudes(std::vector<cdouble> amps);

    void apply_1q(int target, const Unitary2& u);
    void apply_controlled(const ControlSpec& controls, int target, const Unitary2& u);

    // General k-target controlled unitary; matrix is 2^k x 2^k row major,
    // targets[0] is the most significant bit of the block index.
    void apply_controlled_unitary(const ControlSpec& controls, const std::vector<int>& targets,
                                  const std::vector<cdouble>& matrix);

    // Probability that every (qubit, bit) constraint holds simultaneously.
    double marginal_probability(const std::vector<std::pair<int, int>>& constraints) const;

    double norm_sq() const;

  private:
    std::size_t bit_of(int qubit) const { return std::size_t{1} << (n_ - 1 - qubit); }
    void check_qubit(int qubit, const char* role) const;
    std::pair<std::size_t, std::size_t> control_mask(const ControlSpec& controls,
                                                     std::span<const int> targets) const;

    int n_;
    std::vector<cdouble> amps_;
};

struct CountTable {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t shots = 0;
};

// Multinomial sampling in the computational basis, deterministic per seed.
CountTable sample_counts(const Statevector& state, std::uint64_t shots, std::uint64_t seed);

// Empirical counterpart of Statevector::marginal_probability.
double counts_probability(const CountTable& table, int n_qubits,
                          const std::vector<std::pair<int, int>>& constraints);

}  // namespace qnc
