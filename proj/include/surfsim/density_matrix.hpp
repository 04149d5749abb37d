#pragma once

#include <vector>

#include "surfsim/pauli.hpp"
#include "surfsim/qubit.hpp"
#include "surfsim/rng.hpp"

namespace surfsim {

class DensityMatrix;

// One branch of a projective measurement, with the measured qubit removed.
struct ProjectionOutcome {
    int outcome = +1;        // +1 for |0>, -1 for |1>
    double probability = 1;  // Born probability of this branch
};

// Density matrix over an ordered set of at most 10 qubits, stored as the real
// coefficient vector c_alpha = Tr(sigma_alpha rho) over Pauli products.
// Qubits are kept sorted by id; the qubit at sorted position p corresponds to
// the base-4 digit with stride 4^p (position 0 varies fastest).
class DensityMatrix {
  public:
    static constexpr int kMaxQubits = 10;

    DensityMatrix() { c_.assign(1, 1.0); }
    // All listed qubits initialized to |0>.
    static DensityMatrix all_zeros(const std::vector<QubitId>& qubits);

    int num_qubits() const { return static_cast<int>(qubits_.size()); }
    const std::vector<QubitId>& qubits() const { return qubits_; }
    bool has_qubit(QubitId q) const;
    int position_of(QubitId q) const;  // throws if absent

    double trace() const { return c_[0]; }
    const std::vector<double>& coefficients() const { return c_; }

    void apply1(const Ptm& ptm, QubitId q);
    void apply2(const Ptm& ptm, QubitId first, QubitId second);

    // Tensor on a fresh qubit in |0> or |1>. Throws when the qubit is already
    // present or the 10-qubit capacity would be exceeded (a scheduling bug).
    void add_qubit(QubitId q, int basis_bit);

    // Born probability of outcome |0> for qubit q.
    double prob_zero(QubitId q) const;

    // Sample per the Born rule, remove q, renormalize. Throws if both branch
    // probabilities are below 1e-12 (corrupted state).
    ProjectionOutcome project_and_remove(QubitId q, Rng& rng);
    // Deterministic branch selection (for tests and branch enumeration).
    ProjectionOutcome project_and_remove_branch(QubitId q, int bit);
    // Project q to |bit> and keep it in the register (joint-simulation mode).
    double project_keep(QubitId q, int bit);

    // Probability vector over 2^n bitstrings; bit i of the index corresponds
    // to the qubit at sorted position i. The state is not modified.
    std::vector<double> diagonal() const;

  private:
    void project_impl(int pos, int bit, double p);

    std::vector<QubitId> qubits_;
    std::vector<double> c_;
};

}  // namespace surfsim
