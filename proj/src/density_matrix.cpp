#include "surfsim/density_matrix.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace surfsim {

namespace {
size_t pow4(int p) { return size_t(1) << (2 * p); }
}  // namespace

DensityMatrix DensityMatrix::all_zeros(const std::vector<QubitId>& qubits) {
    DensityMatrix dm;
    for (QubitId q : qubits) dm.add_qubit(q, 0);
    return dm;
}

bool DensityMatrix::has_qubit(QubitId q) const {
    return std::binary_search(qubits_.begin(), qubits_.end(), q);
}

int DensityMatrix::position_of(QubitId q) const {
    auto it = std::lower_bound(qubits_.begin(), qubits_.end(), q);
    if (it == qubits_.end() || *it != q)
        throw std::invalid_argument("qubit " + q.str() + " not in density matrix");
    return static_cast<int>(it - qubits_.begin());
}

void DensityMatrix::apply1(const Ptm& ptm, QubitId q) {
    if (ptm.arity() != 1) throw std::invalid_argument("apply1 needs a 1-qubit PTM");
    const int p = position_of(q);
    const size_t s = pow4(p);
    const size_t blocks = c_.size() / (4 * s);
    const double* R = ptm.raw();
    double* c = c_.data();
    for (size_t h = 0; h < blocks; ++h) {
        double* base = c + h * 4 * s;
        for (size_t l = 0; l < s; ++l) {
            const double v0 = base[l];
            const double v1 = base[l + s];
            const double v2 = base[l + 2 * s];
            const double v3 = base[l + 3 * s];
            base[l]         = R[0] * v0 + R[1] * v1 + R[2] * v2 + R[3] * v3;
            base[l + s]     = R[4] * v0 + R[5] * v1 + R[6] * v2 + R[7] * v3;
            base[l + 2 * s] = R[8] * v0 + R[9] * v1 + R[10] * v2 + R[11] * v3;
            base[l + 3 * s] = R[12] * v0 + R[13] * v1 + R[14] * v2 + R[15] * v3;
        }
    }
}

void DensityMatrix::apply2(const Ptm& ptm, QubitId first, QubitId second) {
    if (ptm.arity() != 2) throw std::invalid_argument("apply2 needs a 2-qubit PTM");
    if (first == second) throw std::invalid_argument("apply2 targets must differ");
    const int pa = position_of(first);
    const int pb = position_of(second);
    const size_t sa = pow4(pa), sb = pow4(pb);

    // Row-grouped nonzeros; the C-Z family is sparse in the Pauli basis.
    struct Entry { int j; double v; };
    std::vector<Entry> nz;
    nz.reserve(64);
    int row_start[17];
    for (int i = 0; i < 16; ++i) {
        row_start[i] = static_cast<int>(nz.size());
        for (int j = 0; j < 16; ++j) {
            const double v = ptm.at(i, j);
            if (v != 0.0) nz.push_back({j, v});
        }
    }
    row_start[16] = static_cast<int>(nz.size());

    const int p1 = std::min(pa, pb), p2 = std::max(pa, pb);
    const size_t s1 = pow4(p1), s2 = pow4(p2);
    const size_t mid_count = s2 / (4 * s1);
    const size_t high_count = c_.size() / (4 * s2);

    size_t stride[16];
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) stride[a * 4 + b] = a * sa + b * sb;

    double in[16], out[16];
    double* c = c_.data();
    for (size_t h = 0; h < high_count; ++h) {
        for (size_t m = 0; m < mid_count; ++m) {
            const size_t base0 = h * 4 * s2 + m * 4 * s1;
            for (size_t l = 0; l < s1; ++l) {
                const size_t base = base0 + l;
                for (int k = 0; k < 16; ++k) in[k] = c[base + stride[k]];
                for (int i = 0; i < 16; ++i) {
                    double acc = 0.0;
                    for (int e = row_start[i]; e < row_start[i + 1]; ++e)
                        acc += nz[e].v * in[nz[e].j];
                    out[i] = acc;
                }
                for (int k = 0; k < 16; ++k) c[base + stride[k]] = out[k];
            }
        }
    }
}

void DensityMatrix::add_qubit(QubitId q, int basis_bit) {
    if (has_qubit(q)) throw std::invalid_argument("qubit " + q.str() + " already present");
    if (num_qubits() >= kMaxQubits)
        throw std::runtime_error("density matrix capacity (10 qubits) exceeded");
    auto it = std::lower_bound(qubits_.begin(), qubits_.end(), q);
    const int p = static_cast<int>(it - qubits_.begin());
    qubits_.insert(it, q);

    const size_t s = pow4(p);
    const size_t old_size = c_.size();
    const size_t high_count = old_size / s;
    c_.resize(old_size * 4);
    const double vz = basis_bit ? -1.0 : 1.0;
    double* c = c_.data();
    // Descending so every destination is at or beyond its source.
    for (size_t h = high_count; h-- > 0;) {
        const double* src = c + h * s;
        double* dst = c + h * 4 * s;
        for (size_t l = s; l-- > 0;) dst[l + 3 * s] = vz * src[l];
        std::memset(dst + s, 0, 2 * s * sizeof(double));
        if (dst != src) {
            for (size_t l = s; l-- > 0;) dst[l] = src[l];
        }
    }
}

double DensityMatrix::prob_zero(QubitId q) const {
    const int p = position_of(q);
    return 0.5 * (c_[0] + c_[3 * pow4(p)]);
}

void DensityMatrix::project_impl(int pos, int bit, double prob) {
    const size_t s = pow4(pos);
    const double sign = bit ? -1.0 : 1.0;
    const double scale = 0.5 / prob;
    const size_t high_count = c_.size() / (4 * s);
    double* c = c_.data();
    for (size_t h = 0; h < high_count; ++h) {
        const double* src = c + h * 4 * s;
        double* dst = c + h * s;
        for (size_t l = 0; l < s; ++l) dst[l] = scale * (src[l] + sign * src[l + 3 * s]);
    }
    c_.resize(c_.size() / 4);
    qubits_.erase(qubits_.begin() + pos);
}

ProjectionOutcome DensityMatrix::project_and_remove(QubitId q, Rng& rng) {
    const double p0 = prob_zero(q);
    const double p1 = 1.0 - p0;
    if (p0 < 1e-12 && p1 < 1e-12)
        throw std::runtime_error("projection of " + q.str() + ": state corrupted");
    const int bit = (rng.uniform() < p0) ? 0 : 1;
    return project_and_remove_branch(q, bit);
}

ProjectionOutcome DensityMatrix::project_and_remove_branch(QubitId q, int bit) {
    const int pos = position_of(q);
    const double p0 = prob_zero(q);
    const double p = bit ? 1.0 - p0 : p0;
    if (p < 1e-12)
        throw std::runtime_error("projection of " + q.str() + " onto zero-probability branch");
    project_impl(pos, bit, p);
    return {bit ? -1 : +1, p};
}

double DensityMatrix::project_keep(QubitId q, int bit) {
    const int pos = position_of(q);
    const double p0 = prob_zero(q);
    const double p = bit ? 1.0 - p0 : p0;
    if (p < 1e-12)
        throw std::runtime_error("projection of " + q.str() + " onto zero-probability branch");
    const size_t s = pow4(pos);
    const double sign = bit ? -1.0 : 1.0;
    const double scale = 0.5 / p;
    const size_t high_count = c_.size() / (4 * s);
    double* c = c_.data();
    for (size_t h = 0; h < high_count; ++h) {
        double* blk = c + h * 4 * s;
        for (size_t l = 0; l < s; ++l) {
            const double t = scale * (blk[l] + sign * blk[l + 3 * s]);
            blk[l] = t;
            blk[l + s] = 0.0;
            blk[l + 2 * s] = 0.0;
            blk[l + 3 * s] = sign * t;
        }
    }
    return p;
}

std::vector<double> DensityMatrix::diagonal() const {
    const int n = num_qubits();
    const size_t dn = size_t(1) << n;
    std::vector<double> v(dn);
    // Gather the {I,Z} subcube.
    for (size_t m = 0; m < dn; ++m) {
        size_t idx = 0;
        for (int i = 0; i < n; ++i)
            if (m & (size_t(1) << i)) idx += 3 * pow4(i);
        v[m] = c_[idx];
    }
    // Per-axis butterfly (a,b) -> (a+b, a-b), then scale by 2^-n.
    for (int i = 0; i < n; ++i) {
        const size_t s = size_t(1) << i;
        for (size_t base = 0; base < dn; base += 2 * s)
            for (size_t l = 0; l < s; ++l) {
                const double a = v[base + l];
                const double b = v[base + l + s];
                v[base + l] = a + b;
                v[base + l + s] = a - b;
            }
    }
    const double scale = 1.0 / static_cast<double>(dn);
    for (double& x : v) x *= scale;
    return v;
}

}  // namespace surfsim
