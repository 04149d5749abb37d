#include "support/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

StateVector::StateVector(int n_qubits) : n_(n_qubits), amp_(size_t(1) << n_qubits) {
    amp_[0] = 1.0;
}

void StateVector::apply1(const cplx u[2][2], int q) {
    const size_t m = size_t(1) << q;
    for (size_t i = 0; i < amp_.size(); ++i) {
        if (i & m) continue;
        const cplx a0 = amp_[i], a1 = amp_[i | m];
        amp_[i] = u[0][0] * a0 + u[0][1] * a1;
        amp_[i | m] = u[1][0] * a0 + u[1][1] * a1;
    }
}

void StateVector::apply_cz(int a, int b) { apply_cphase(a, b, M_PI); }

void StateVector::apply_cphase(int a, int b, double phi) {
    const size_t ma = size_t(1) << a, mb = size_t(1) << b;
    const cplx f = std::exp(cplx(0, phi));
    for (size_t i = 0; i < amp_.size(); ++i)
        if ((i & ma) && (i & mb)) amp_[i] *= f;
}

void StateVector::ry(int q, double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const cplx u[2][2] = {{c, -s}, {s, c}};
    apply1(u, q);
}

void StateVector::x(int q) {
    const cplx u[2][2] = {{0, 1}, {1, 0}};
    apply1(u, q);
}

double StateVector::prob_zero(int q) const {
    const size_t m = size_t(1) << q;
    double p = 0;
    for (size_t i = 0; i < amp_.size(); ++i)
        if (!(i & m)) p += std::norm(amp_[i]);
    return p;
}

double StateVector::project(int q, int bit) {
    const size_t m = size_t(1) << q;
    const double p0 = prob_zero(q);
    const double p = bit ? 1.0 - p0 : p0;
    if (p < 1e-15) throw std::runtime_error("projecting onto zero-probability branch");
    const double scale = 1.0 / std::sqrt(p);
    for (size_t i = 0; i < amp_.size(); ++i) {
        const bool is_one = (i & m) != 0;
        if (is_one != (bit != 0))
            amp_[i] = 0.0;
        else
            amp_[i] *= scale;
    }
    return p;
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amp_.size());
    for (size_t i = 0; i < amp_.size(); ++i) p[i] = std::norm(amp_[i]);
    return p;
}

std::vector<double> StateVector::marginal(const std::vector<int>& qubits) const {
    std::vector<double> out(size_t(1) << qubits.size(), 0.0);
    for (size_t i = 0; i < amp_.size(); ++i) {
        size_t key = 0;
        for (size_t k = 0; k < qubits.size(); ++k)
            if (i & (size_t(1) << qubits[k])) key |= (size_t(1) << k);
        out[key] += std::norm(amp_[i]);
    }
    return out;
}

}  // namespace oracle
