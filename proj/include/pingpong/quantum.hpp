#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

namespace pingpong {

using Amplitude = std::complex<double>;

// Message symbols a, f and encoding operations b all live in {0,1,2,3}.
using BellIndex = int;
using PauliIndex = int;

// Bell ordering: Psi0=|0+>, Psi1=|0->, Psi2=|1+>, Psi3=|1->.
inline int bell_n(BellIndex a) { return a >> 1; }
inline int bell_sign(BellIndex a) { return a & 1; }  // 0 = '+', 1 = '-'

enum class Basis : int { B0 = 0, B1 = 1 };

struct QubitId {
    std::uint32_t id = 0;
    friend bool operator==(QubitId a, QubitId b) { return a.id == b.id; }
    friend bool operator!=(QubitId a, QubitId b) { return a.id != b.id; }
};

// Deterministic seeded stream. All randomness in a session flows through one
// of these, so a seed fully determines every measurement outcome.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // uniform on {0, ..., k-1}
    std::uint32_t uniform_int(std::uint32_t k) {
        return static_cast<std::uint32_t>(next_u64() % k);
    }

private:
    std::mt19937_64 gen_;
};

struct DensityMatrix2 {
    std::array<std::array<Amplitude, 2>, 2> m{};

    Amplitude& operator()(int i, int j) { return m[i][j]; }
    const Amplitude& operator()(int i, int j) const { return m[i][j]; }
};

// Exact state vector over 1..4 labeled qubits. Qubit at list position 0 is
// the most significant bit of the amplitude index.
class QuantumSystem {
public:
    QuantumSystem(std::vector<QubitId> qubits, std::vector<Amplitude> amps);

    int num_qubits() const { return static_cast<int>(qubits_.size()); }
    const std::vector<QubitId>& qubits() const { return qubits_; }
    const std::vector<Amplitude>& amps() const { return amps_; }

    int position_of(QubitId q) const;  // -1 if absent
    double norm_squared() const;

    void apply_pauli(QubitId q, PauliIndex b);
    int measure(QubitId q, Basis basis, RandomSource& rng);
    BellIndex bell_measure(QubitId q1, QubitId q2, RandomSource& rng);
    DensityMatrix2 reduced_density(QubitId q) const;

    // Tensor product; this system's qubits become the high bits.
    void merge(QuantumSystem other);

private:
    void apply_matrix(int pos, const std::array<std::array<Amplitude, 2>, 2>& u);

    std::vector<QubitId> qubits_;
    std::vector<Amplitude> amps_;
};

// Disjoint QuantumSystems with qubit lookup. Operations spanning two systems
// merge them first.
class QuantumRegister {
public:
    QubitId allocate() { return QubitId{next_id_++}; }

    void insert(QuantumSystem sys);
    bool contains(QubitId q) const;
    QuantumSystem& system_of(QubitId q);
    const QuantumSystem& system_of(QubitId q) const;

    void apply_pauli(QubitId q, PauliIndex b);
    int measure(QubitId q, Basis basis, RandomSource& rng);
    BellIndex bell_measure(QubitId q1, QubitId q2, RandomSource& rng);
    DensityMatrix2 reduced_density(QubitId q) const;

    // Drops the entire system owning q.
    void discard(QubitId q);

private:
    std::size_t index_of(QubitId q) const;

    std::vector<QuantumSystem> systems_;
    std::unordered_map<std::uint32_t, std::size_t> lookup_;
    std::uint32_t next_id_ = 0;
};

// |Psi_a> with home as the first (most significant) qubit.
QuantumSystem bell_state(BellIndex a, QubitId home, QubitId travel);

// Fresh single-qubit eigenstate of the named basis.
QuantumSystem prepare_eigenstate(Basis basis, int bit, QubitId q);

// |<phi|psi>| for two systems over the same qubits; 1 means equal up to
// global phase.
double overlap_magnitude(const QuantumSystem& phi, const QuantumSystem& psi);

}  // namespace pingpong
