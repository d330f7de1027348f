#include "pingpong/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pingpong {

namespace {

constexpr double kNormTripwire = 1e-9;

const Amplitude kI{0.0, 1.0};
constexpr double kInvSqrt2 = 0.70710678118654752440;

using Mat2 = std::array<std::array<Amplitude, 2>, 2>;

Mat2 pauli_matrix(PauliIndex b) {
    switch (b) {
        case 0: return {{{1.0, 0.0}, {0.0, 1.0}}};
        case 1: return {{{0.0, 1.0}, {1.0, 0.0}}};
        case 2: return {{{0.0, -kI}, {kI, 0.0}}};
        case 3: return {{{1.0, 0.0}, {0.0, -1.0}}};
        default: throw std::invalid_argument("pauli index out of range");
    }
}

const Mat2 kHadamard = {{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}}};

// Bell-state coefficients over the two-qubit computational basis (b1 b2).
std::array<Amplitude, 4> bell_coeffs(BellIndex f) {
    double s = bell_sign(f) ? -kInvSqrt2 : kInvSqrt2;
    if (bell_n(f) == 0) return {kInvSqrt2, 0.0, 0.0, s};
    return {0.0, kInvSqrt2, s, 0.0};
}

}  // namespace

QuantumSystem::QuantumSystem(std::vector<QubitId> qubits, std::vector<Amplitude> amps)
    : qubits_(std::move(qubits)), amps_(std::move(amps)) {
    if (qubits_.empty() || qubits_.size() > 4)
        throw std::invalid_argument("system must hold 1..4 qubits");
    if (amps_.size() != (std::size_t{1} << qubits_.size()))
        throw std::invalid_argument("amplitude count must be 2^n");
    for (std::size_t i = 0; i < qubits_.size(); ++i)
        for (std::size_t j = i + 1; j < qubits_.size(); ++j)
            if (qubits_[i] == qubits_[j])
                throw std::invalid_argument("duplicate qubit id in system");
}

int QuantumSystem::position_of(QubitId q) const {
    for (std::size_t i = 0; i < qubits_.size(); ++i)
        if (qubits_[i] == q) return static_cast<int>(i);
    return -1;
}

double QuantumSystem::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

void QuantumSystem::apply_matrix(int pos, const Mat2& u) {
    const int n = num_qubits();
    const std::size_t bit = std::size_t{1} << (n - 1 - pos);
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        if (idx & bit) continue;
        Amplitude a0 = amps_[idx];
        Amplitude a1 = amps_[idx | bit];
        amps_[idx] = u[0][0] * a0 + u[0][1] * a1;
        amps_[idx | bit] = u[1][0] * a0 + u[1][1] * a1;
    }
}

void QuantumSystem::apply_pauli(QubitId q, PauliIndex b) {
    int pos = position_of(q);
    if (pos < 0) throw std::invalid_argument("qubit not in system");
    apply_matrix(pos, pauli_matrix(b));
}

int QuantumSystem::measure(QubitId q, Basis basis, RandomSource& rng) {
    int pos = position_of(q);
    if (pos < 0) throw std::invalid_argument("qubit not in system");
    if (std::abs(norm_squared() - 1.0) > kNormTripwire)
        throw std::runtime_error("state norm corrupted before measurement");

    // Measure B1 by rotating to the computational basis and back.
    if (basis == Basis::B1) apply_matrix(pos, kHadamard);

    const std::size_t bit = std::size_t{1} << (num_qubits() - 1 - pos);
    double p1 = 0.0;
    for (std::size_t idx = 0; idx < amps_.size(); ++idx)
        if (idx & bit) p1 += std::norm(amps_[idx]);

    int outcome = rng.uniform() < p1 ? 1 : 0;
    double p = outcome ? p1 : 1.0 - p1;
    double scale = 1.0 / std::sqrt(p);
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        bool keep = ((idx & bit) != 0) == (outcome == 1);
        amps_[idx] = keep ? amps_[idx] * scale : Amplitude{0.0, 0.0};
    }

    if (basis == Basis::B1) apply_matrix(pos, kHadamard);
    return outcome;
}

BellIndex QuantumSystem::bell_measure(QubitId q1, QubitId q2, RandomSource& rng) {
    if (q1 == q2) throw std::invalid_argument("bell measurement needs two distinct qubits");
    int p1 = position_of(q1);
    int p2 = position_of(q2);
    if (p1 < 0 || p2 < 0) throw std::invalid_argument("qubit not in system");
    if (std::abs(norm_squared() - 1.0) > kNormTripwire)
        throw std::runtime_error("state norm corrupted before measurement");

    const int n = num_qubits();
    const std::size_t bit1 = std::size_t{1} << (n - 1 - p1);
    const std::size_t bit2 = std::size_t{1} << (n - 1 - p2);

    // For each Bell projector, the inner products over the spectator bits.
    std::array<double, 4> prob{};
    std::array<std::vector<Amplitude>, 4> projected;
    for (BellIndex f = 0; f < 4; ++f) {
        auto c = bell_coeffs(f);
        std::vector<Amplitude> out(amps_.size(), Amplitude{0.0, 0.0});
        for (std::size_t base = 0; base < amps_.size(); ++base) {
            if (base & (bit1 | bit2)) continue;
            Amplitude inner{0.0, 0.0};
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2) {
                    std::size_t idx = base | (b1 ? bit1 : 0) | (b2 ? bit2 : 0);
                    inner += std::conj(c[b1 * 2 + b2]) * amps_[idx];
                }
            prob[f] += std::norm(inner);
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2) {
                    std::size_t idx = base | (b1 ? bit1 : 0) | (b2 ? bit2 : 0);
                    out[idx] = c[b1 * 2 + b2] * inner;
                }
        }
        projected[f] = std::move(out);
    }

    double r = rng.uniform();
    BellIndex f = 3;
    double acc = 0.0;
    for (BellIndex k = 0; k < 4; ++k) {
        acc += prob[k];
        if (r < acc) { f = k; break; }
    }

    double scale = 1.0 / std::sqrt(prob[f]);
    amps_ = std::move(projected[f]);
    for (auto& a : amps_) a *= scale;
    return f;
}

DensityMatrix2 QuantumSystem::reduced_density(QubitId q) const {
    int pos = position_of(q);
    if (pos < 0) throw std::invalid_argument("qubit not in system");
    const std::size_t bit = std::size_t{1} << (num_qubits() - 1 - pos);

    DensityMatrix2 rho;
    for (std::size_t base = 0; base < amps_.size(); ++base) {
        if (base & bit) continue;
        Amplitude a0 = amps_[base];
        Amplitude a1 = amps_[base | bit];
        rho(0, 0) += a0 * std::conj(a0);
        rho(0, 1) += a0 * std::conj(a1);
        rho(1, 0) += a1 * std::conj(a0);
        rho(1, 1) += a1 * std::conj(a1);
    }
    return rho;
}

void QuantumSystem::merge(QuantumSystem other) {
    if (num_qubits() + other.num_qubits() > 4)
        throw std::invalid_argument("merged system would exceed 4 qubits");
    std::vector<Amplitude> out(amps_.size() * other.amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i)
        for (std::size_t j = 0; j < other.amps_.size(); ++j)
            out[i * other.amps_.size() + j] = amps_[i] * other.amps_[j];
    amps_ = std::move(out);
    qubits_.insert(qubits_.end(), other.qubits_.begin(), other.qubits_.end());
}

void QuantumRegister::insert(QuantumSystem sys) {
    for (QubitId q : sys.qubits())
        if (lookup_.count(q.id))
            throw std::invalid_argument("qubit id already present in register");
    std::size_t idx = systems_.size();
    for (QubitId q : sys.qubits()) lookup_[q.id] = idx;
    systems_.push_back(std::move(sys));
}

bool QuantumRegister::contains(QubitId q) const { return lookup_.count(q.id) != 0; }

std::size_t QuantumRegister::index_of(QubitId q) const {
    auto it = lookup_.find(q.id);
    if (it == lookup_.end()) throw std::invalid_argument("unknown qubit id");
    return it->second;
}

QuantumSystem& QuantumRegister::system_of(QubitId q) { return systems_[index_of(q)]; }
const QuantumSystem& QuantumRegister::system_of(QubitId q) const { return systems_[index_of(q)]; }

void QuantumRegister::apply_pauli(QubitId q, PauliIndex b) {
    system_of(q).apply_pauli(q, b);
}

int QuantumRegister::measure(QubitId q, Basis basis, RandomSource& rng) {
    return system_of(q).measure(q, basis, rng);
}

BellIndex QuantumRegister::bell_measure(QubitId q1, QubitId q2, RandomSource& rng) {
    if (q1 == q2) throw std::invalid_argument("bell measurement needs two distinct qubits");
    std::size_t i1 = index_of(q1);
    std::size_t i2 = index_of(q2);
    if (i1 != i2) {
        // Merge the two product factors; i1's qubits stay the high bits.
        QuantumSystem merged = std::move(systems_[i1]);
        merged.merge(std::move(systems_[i2]));
        systems_[i1] = std::move(merged);
        // Swap-remove the emptied slot and fix up the lookup.
        std::size_t last = systems_.size() - 1;
        if (i2 != last) {
            systems_[i2] = std::move(systems_[last]);
            for (QubitId q : systems_[i2].qubits()) lookup_[q.id] = i2;
        }
        systems_.pop_back();
        for (QubitId q : systems_[i1].qubits()) lookup_[q.id] = i1;
    }
    return system_of(q1).bell_measure(q1, q2, rng);
}

DensityMatrix2 QuantumRegister::reduced_density(QubitId q) const {
    return system_of(q).reduced_density(q);
}

void QuantumRegister::discard(QubitId q) {
    std::size_t idx = index_of(q);
    for (QubitId owned : systems_[idx].qubits()) lookup_.erase(owned.id);
    std::size_t last = systems_.size() - 1;
    if (idx != last) {
        systems_[idx] = std::move(systems_[last]);
        for (QubitId owned : systems_[idx].qubits()) lookup_[owned.id] = idx;
    }
    systems_.pop_back();
}

QuantumSystem bell_state(BellIndex a, QubitId home, QubitId travel) {
    if (home == travel) throw std::invalid_argument("home and travel must differ");
    if (a < 0 || a > 3) throw std::invalid_argument("bell index out of range");
    auto c = bell_coeffs(a);
    return QuantumSystem({home, travel}, {c[0], c[1], c[2], c[3]});
}

QuantumSystem prepare_eigenstate(Basis basis, int bit, QubitId q) {
    if (basis == Basis::B0) {
        if (bit == 0) return QuantumSystem({q}, {1.0, 0.0});
        return QuantumSystem({q}, {0.0, 1.0});
    }
    double s = bit ? -kInvSqrt2 : kInvSqrt2;
    return QuantumSystem({q}, {kInvSqrt2, s});
}

double overlap_magnitude(const QuantumSystem& phi, const QuantumSystem& psi) {
    if (phi.amps().size() != psi.amps().size())
        throw std::invalid_argument("systems have different dimension");
    Amplitude inner{0.0, 0.0};
    for (std::size_t i = 0; i < phi.amps().size(); ++i)
        inner += std::conj(phi.amps()[i]) * psi.amps()[i];
    return std::abs(inner);
}

}  // namespace pingpong
