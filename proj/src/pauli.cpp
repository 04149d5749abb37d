#include "surfsim/pauli.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace surfsim {

CMat CMat::identity(int dim) {
    CMat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::pauli(int which) {
    CMat m(2);
    switch (which) {
        case 0: m(0, 0) = 1; m(1, 1) = 1; break;
        case 1: m(0, 1) = 1; m(1, 0) = 1; break;
        case 2: m(0, 1) = cplx(0, -1); m(1, 0) = cplx(0, 1); break;
        case 3: m(0, 0) = 1; m(1, 1) = -1; break;
        default: throw std::invalid_argument("pauli index");
    }
    return m;
}

CMat CMat::pauli_string(int i, int nq) {
    CMat m = pauli((i >> (2 * (nq - 1))) & 3);
    for (int q = nq - 2; q >= 0; --q) m = kron(m, pauli((i >> (2 * q)) & 3));
    return m;
}

CMat CMat::dagger() const {
    CMat m(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = std::conj((*this)(c, r));
    return m;
}

CMat CMat::operator*(const CMat& o) const {
    CMat m(n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k) {
            const cplx v = (*this)(r, k);
            if (v == cplx(0.0)) continue;
            for (int c = 0; c < n; ++c) m(r, c) += v * o(k, c);
        }
    return m;
}

CMat CMat::operator+(const CMat& o) const {
    CMat m(n);
    for (size_t i = 0; i < a.size(); ++i) m.a[i] = a[i] + o.a[i];
    return m;
}

CMat CMat::scaled(cplx s) const {
    CMat m(n);
    for (size_t i = 0; i < a.size(); ++i) m.a[i] = a[i] * s;
    return m;
}

CMat CMat::kron(const CMat& x, const CMat& y) {
    CMat m(x.n * y.n);
    for (int r1 = 0; r1 < x.n; ++r1)
        for (int c1 = 0; c1 < x.n; ++c1)
            for (int r2 = 0; r2 < y.n; ++r2)
                for (int c2 = 0; c2 < y.n; ++c2)
                    m(r1 * y.n + r2, c1 * y.n + c2) = x(r1, c1) * y(r2, c2);
    return m;
}

Ptm::Ptm(int arity) : arity_(arity) {
    if (arity != 1 && arity != 2) throw std::invalid_argument("PTM arity must be 1 or 2");
    data_.assign(static_cast<size_t>(dim()) * dim(), 0.0);
}

bool Ptm::trace_preserving(double tol) const {
    if (std::abs(at(0, 0) - 1.0) > tol) return false;
    for (int j = 1; j < dim(); ++j)
        if (std::abs(at(0, j)) > tol) return false;
    return true;
}

bool Ptm::completely_positive(double tol) const {
    // Choi = (1/d^2) sum_ij R_ij sigma_i (x) sigma_j^T  up to basis convention;
    // PSD of this matrix is equivalent to complete positivity.
    const int nq = arity_;
    const int d = 1 << nq;
    Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (int i = 0; i < dim(); ++i) {
        CMat si = CMat::pauli_string(i, nq);
        for (int j = 0; j < dim(); ++j) {
            const double r = at(i, j);
            if (r == 0.0) continue;
            CMat sj = CMat::pauli_string(j, nq);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    for (int c = 0; c < d; ++c)
                        for (int e = 0; e < d; ++e)
                            choi(a * d + c, b * d + e) += r * si(a, b) * sj(e, c);
        }
    }
    choi /= static_cast<double>(d * d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(choi, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > -tol;
}

std::vector<double> Ptm::twirl_probabilities() const {
    // p_P = (1/4^n) sum_Q chi(P,Q) R_QQ with chi = +-1 for commuting /
    // anticommuting Pauli pairs.
    const int n = dim();
    std::vector<double> p(n, 0.0);
    auto sign1 = [](int a, int b) { return (a == 0 || b == 0 || a == b) ? 1.0 : -1.0; };
    for (int P = 0; P < n; ++P) {
        double s = 0.0;
        for (int Q = 0; Q < n; ++Q) {
            double chi = sign1(P & 3, Q & 3);
            if (arity_ == 2) chi *= sign1((P >> 2) & 3, (Q >> 2) & 3);
            s += chi * at(Q, Q);
        }
        p[P] = s / n;
    }
    return p;
}

Ptm Ptm::then(const Ptm& next) const {
    if (next.arity_ != arity_) throw std::invalid_argument("PTM arity mismatch");
    Ptm out(arity_);
    const int n = dim();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double v = next.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < n; ++j) out.at(i, j) += v * at(k, j);
        }
    return out;
}

Ptm Ptm::tensor(const Ptm& a, const Ptm& b) {
    if (a.arity_ != 1 || b.arity_ != 1) throw std::invalid_argument("tensor expects 1-qubit PTMs");
    Ptm out(2);
    for (int i1 = 0; i1 < 4; ++i1)
        for (int j1 = 0; j1 < 4; ++j1)
            for (int i2 = 0; i2 < 4; ++i2)
                for (int j2 = 0; j2 < 4; ++j2)
                    out.at(i1 * 4 + i2, j1 * 4 + j2) = a.at(i1, j1) * b.at(i2, j2);
    return out;
}

Ptm Ptm::identity(int arity) {
    Ptm m(arity);
    for (int i = 0; i < m.dim(); ++i) m.at(i, i) = 1.0;
    return m;
}

Ptm Ptm::from_kraus(const std::vector<CMat>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("no Kraus operators");
    const int d = kraus[0].n;
    const int nq = (d == 2) ? 1 : (d == 4 ? 2 : 0);
    if (nq == 0) throw std::invalid_argument("Kraus dimension must be 2 or 4");

    CMat sum(d);
    for (const auto& k : kraus) sum = sum + (k.dagger() * k);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            const cplx want = (r == c) ? cplx(1.0) : cplx(0.0);
            if (std::abs(sum(r, c) - want) > 1e-9)
                throw std::invalid_argument("Kraus set is not trace preserving");
        }

    Ptm m(nq);
    const int n = m.dim();
    for (int j = 0; j < n; ++j) {
        CMat sj = CMat::pauli_string(j, nq);
        CMat lam(d);
        for (const auto& k : kraus) lam = lam + (k * sj * k.dagger());
        for (int i = 0; i < n; ++i) {
            CMat si = CMat::pauli_string(i, nq);
            cplx tr = 0.0;
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) tr += si(r, c) * lam(c, r);
            m.at(i, j) = tr.real() / d;
        }
    }
    return m;
}

Ptm Ptm::from_unitary(const CMat& u) { return from_kraus({u}); }

Ptm Ptm::ry(double theta) {
    CMat u(2);
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    u(0, 0) = c; u(0, 1) = -s;
    u(1, 0) = s; u(1, 1) = c;
    return from_unitary(u);
}

Ptm Ptm::rz(double phi) {
    CMat u(2);
    u(0, 0) = 1.0;
    u(1, 1) = std::exp(cplx(0, phi));
    return from_unitary(u);
}

Ptm Ptm::pauli_x() { return from_unitary(CMat::pauli(1)); }

Ptm Ptm::amplitude_damping(double p_down, double p_up) {
    // Generalized amplitude damping: decay 1->0 with p_down, excitation 0->1
    // with p_up. For p_up = 0 this is the relaxation transfer matrix with
    // off-diagonals sqrt(1-p_down).
    Ptm m(1);
    const double s = std::sqrt((1.0 - p_down) * (1.0 - p_up));
    m.at(0, 0) = 1.0;
    m.at(1, 1) = s;
    m.at(2, 2) = s;
    m.at(3, 0) = p_down - p_up;
    m.at(3, 3) = 1.0 - p_down - p_up;
    return m;
}

Ptm Ptm::phase_damping(double p_phi) {
    Ptm m = identity(1);
    const double s = std::sqrt(1.0 - p_phi);
    m.at(1, 1) = s;
    m.at(2, 2) = s;
    return m;
}

Ptm Ptm::depolarizing_axes(double fx, double fy, double fz) {
    Ptm m = identity(1);
    m.at(1, 1) = fx;
    m.at(2, 2) = fy;
    m.at(3, 3) = fz;
    return m;
}

Ptm Ptm::pauli_channel(double px, double py, double pz) {
    const double pi = 1.0 - px - py - pz;
    Ptm m = identity(1);
    m.at(1, 1) = pi + px - py - pz;
    m.at(2, 2) = pi - px + py - pz;
    m.at(3, 3) = pi - px - py + pz;
    return m;
}

Ptm Ptm::cz_with_phases(double phi_a, double phi_b, double phi_2q) {
    CMat u(4);
    u(0, 0) = 1.0;
    u(1, 1) = std::exp(cplx(0, phi_b));
    u(2, 2) = std::exp(cplx(0, phi_a));
    u(3, 3) = std::exp(cplx(0, phi_a + phi_b + M_PI + phi_2q));
    return from_unitary(u);
}

}  // namespace surfsim
