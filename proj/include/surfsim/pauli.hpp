#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace surfsim {

using cplx = std::complex<double>;

// Small dense complex matrix, used for Kraus operators and unitaries.
struct CMat {
    int n = 0;
    std::vector<cplx> a;  // row-major n x n

    CMat() = default;
    explicit CMat(int dim) : n(dim), a(static_cast<size_t>(dim) * dim) {}
    cplx& operator()(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
    const cplx& operator()(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }

    static CMat identity(int dim);
    static CMat pauli(int which);            // 0..3 -> I,X,Y,Z (2x2)
    static CMat pauli_string(int i, int nq); // base-4 digits, qubit 0 = most significant
    CMat dagger() const;
    CMat operator*(const CMat& o) const;
    CMat operator+(const CMat& o) const;
    CMat scaled(cplx s) const;
    static CMat kron(const CMat& x, const CMat& y);
};

// Pauli transfer matrix of a 1- or 2-qubit channel:
//   R_ij = (1/2^arity) Tr(sigma_i Lambda(sigma_j)).
// Multi-qubit Pauli index i = 4*a + b with a the first target's Pauli digit.
class Ptm {
  public:
    Ptm() : arity_(1) { data_.assign(16, 0.0); }
    explicit Ptm(int arity);

    int arity() const { return arity_; }
    int dim() const { return arity_ == 1 ? 4 : 16; }
    double& at(int i, int j) { return data_[static_cast<size_t>(i) * dim() + j]; }
    double at(int i, int j) const { return data_[static_cast<size_t>(i) * dim() + j]; }
    const double* raw() const { return data_.data(); }

    bool trace_preserving(double tol = 1e-9) const;
    // Positive semidefiniteness of the Choi matrix, within tol.
    bool completely_positive(double tol = 1e-9) const;
    bool is_cptp(double tol = 1e-9) const { return trace_preserving(tol) && completely_positive(tol); }

    // Probabilities of the Pauli-twirled channel (length 4^arity, index as above).
    std::vector<double> twirl_probabilities() const;

    Ptm then(const Ptm& next) const;      // this first, then next  (matrix product next*this)
    static Ptm tensor(const Ptm& a, const Ptm& b);  // a on first target, b on second

    static Ptm identity(int arity = 1);
    static Ptm from_kraus(const std::vector<CMat>& kraus);  // throws if completeness violated
    static Ptm from_unitary(const CMat& u);

    // Standard one-qubit channels.
    static Ptm ry(double theta);
    static Ptm rz(double phi);
    static Ptm pauli_x();
    static Ptm amplitude_damping(double p_down, double p_up = 0.0);
    static Ptm phase_damping(double p_phi);  // off-diagonals scaled by sqrt(1 - p_phi)
    static Ptm depolarizing_axes(double fx, double fy, double fz);  // Bloch shrink factors
    static Ptm pauli_channel(double px, double py, double pz);

    // C-Z with diagonal phase errors: phases (0, phi_b, phi_a, phi_a+phi_b+pi+phi_2q)
    // on |00>,|01>,|10>,|11>, first target = first index.
    static Ptm cz_with_phases(double phi_a, double phi_b, double phi_2q);

  private:
    int arity_;
    std::vector<double> data_;
};

}  // namespace surfsim
