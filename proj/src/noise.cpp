#include "surfsim/noise.hpp"

#include <Eigen/Dense>

#include <sstream>
#include <stdexcept>

#include "surfsim/density_matrix.hpp"

namespace surfsim {

double FluxNoiseParams::flux_rms_uphi0() const {
    if (!(f_max > f_min) || !(f_min > 0))
        throw std::invalid_argument("flux noise needs f_max > f_min > 0");
    return std::sqrt(amp_uphi0_sq * std::log(f_max / f_min));
}

ButterflyTable ButterflyTable::standard() {
    ButterflyTable b;
    b.p[0][0][0] = 0.9985; b.p[0][0][1] = 0.0000;
    b.p[0][1][0] = 0.0015; b.p[0][1][1] = 0.0000;
    b.p[1][0][0] = 0.0050; b.p[1][0][1] = 0.0015;
    b.p[1][1][0] = 0.0149; b.p[1][1][1] = 0.9786;
    return b;
}

bool ButterflyTable::normalized(double tol) const {
    for (int i = 0; i < 2; ++i) {
        double s = 0;
        for (int m = 0; m < 2; ++m)
            for (int o = 0; o < 2; ++o) s += p[i][m][o];
        if (std::abs(s - 1.0) > tol) return false;
    }
    return true;
}

double SixParamMeasurement::declared_flip_prob(int input) const {
    if (input == 0) return p_up1 * (1 - eps_ro1) + (1 - p_up1) * eps_ro0;
    return p_down1 * (1 - eps_ro0) + (1 - p_down1) * eps_ro1;
}

SixParamMeasurement SixParamMeasurement::rescaled_t1(double t1_ref, double t1_new) const {
    SixParamMeasurement s = *this;
    s.p_down1 = 1.0 - std::exp(-tau1(t1_ref) / t1_new);
    s.p_down2 = 1.0 - std::exp(-tau2(t1_ref) / t1_new);
    return s;
}

NoiseParams NoiseParams::standard() {
    NoiseParams n;
    n.meas = butterfly_to_sixparam(ButterflyTable::standard());
    return n;
}

SixParamMeasurement NoiseParams::measurement_for_t1() const {
    SixParamMeasurement s = meas.rescaled_t1(meas_t1_ref, coherence.t1);
    if (y_free) {
        s.eps_ro0 = s.eps_ro1 = 0.0;
    }
    return s;
}

Ptm idle_channel(double tau, const CoherenceParams& c) {
    if (tau < 0) throw std::invalid_argument("negative idle duration");
    const double p1 = 1.0 - std::exp(-tau / c.t1);
    const double pphi = std::isinf(c.t_phi) ? 0.0 : 1.0 - std::exp(-tau / c.t_phi);
    return Ptm::amplitude_damping(p1).then(Ptm::phase_damping(pphi));
}

double photon_dephasing_integral(double t1, double t2, double t_m, double t_g,
                                 const PhotonParams& ph) {
    if (t2 < t1) throw std::invalid_argument("photon interval reversed");
    const double alpha0 = ph.field_at_pulse_end();
    if (alpha0 == 0.0 || t2 == t1) return 0.0;
    const double w = 2.0 * ph.chi;
    const double k = ph.kappa;
    const double denom = w * w + k * k;
    auto F = [&](double tau) {
        return std::exp(-k * tau) * (-k * std::sin(w * tau) - w * std::cos(w * tau)) / denom;
    };
    return w * alpha0 * std::exp(k * (t_m - t_g)) * (F(t2 - t_g) - F(t1 - t_g));
}

double photon_dephasing_prob(double t1, double t2, double t_m, double t_g,
                             const PhotonParams& ph) {
    return 1.0 - std::exp(-photon_dephasing_integral(t1, t2, t_m, t_g, ph));
}

Ptm noisy_ry(int sign, const TimingParams& t, const CoherenceParams& c,
             const RotationErrorParams& r) {
    const double theta = (sign >= 0 ? 1.0 : -1.0) * M_PI / 2.0 + r.overrotation;
    const Ptm half_idle = idle_channel(0.5 * t.t_g1, c);
    const Ptm dep = Ptm::depolarizing_axes(1.0 - r.p_plane, 1.0 - r.p_axis, 1.0 - r.p_plane);
    return half_idle.then(dep).then(Ptm::ry(theta)).then(half_idle);
}

Ptm cz_gate(const TimingParams& t, const CoherenceParams& c, double dphi_fluxed) {
    const Ptm half_idle = idle_channel(0.5 * t.t_g2, c);
    const Ptm pair_idle = Ptm::tensor(half_idle, half_idle);
    const Ptm cz = Ptm::cz_with_phases(dphi_fluxed, 0.0, 0.5 * dphi_fluxed);
    return pair_idle.then(cz).then(pair_idle);
}

double flux_rms(const FluxNoiseParams& f) { return f.flux_rms_uphi0(); }

std::vector<double> sample_flux_phases(Rng& rng, const FluxNoiseParams& f, int count) {
    const double sigma = f.dphi_rms();
    std::vector<double> out(count);
    for (double& x : out) x = sigma * rng.gauss();
    return out;
}

ButterflyTable sixparam_to_butterfly(const SixParamMeasurement& s) {
    ButterflyTable b;
    for (int i = 0; i < 2; ++i) {
        // Pre-projection flip of the input state.
        const double p_flip1 = (i == 0) ? s.p_up1 : s.p_down1;
        for (int proj = 0; proj < 2; ++proj) {
            const double w1 = (proj == i) ? 1.0 - p_flip1 : p_flip1;
            if (w1 == 0.0) continue;
            for (int m = 0; m < 2; ++m) {
                const int mbit = m;  // m index 0 declares "+1" = bit 0
                const double e = s.declare_flip(proj);
                const double wd = (mbit == proj) ? 1.0 - e : e;
                const double p_flip2 = (proj == 0) ? s.p_up2 : s.p_down2;
                for (int o = 0; o < 2; ++o) {
                    const double w2 = (o == proj) ? 1.0 - p_flip2 : p_flip2;
                    b.p[i][m][o] += w1 * wd * w2;
                }
            }
        }
    }
    return b;
}

SixParamMeasurement butterfly_to_sixparam(const ButterflyTable& b) {
    if (!b.normalized(1e-6))
        throw std::invalid_argument("butterfly rows are not normalized");

    // Closed-form guess assuming zero excitation.
    SixParamMeasurement g;
    {
        const double stay = b.p[1][0][1] + b.p[1][1][1];  // survived both periods
        g.eps_ro1 = stay > 0 ? b.p[1][0][1] / stay : 0.0;
        g.eps_ro0 = b.p[0][1][0] + b.p[0][1][1];
        g.p_down1 = std::min(1.0, std::max(0.0, b.p[1][0][0] / std::max(1e-12, 1.0 - g.eps_ro0)));
        g.p_down2 = 1.0 - std::min(1.0, stay / std::max(1e-12, 1.0 - g.p_down1));
        g.p_up1 = 0.0;
        g.p_up2 = b.p[0][0][1] + b.p[0][1][1];
    }

    // Damped Gauss-Newton on the eight forward probabilities, box [0,1]^6.
    auto pack = [](const SixParamMeasurement& s) {
        return std::array<double, 6>{s.p_down1, s.p_up1, s.p_down2, s.p_up2, s.eps_ro0, s.eps_ro1};
    };
    auto unpack = [](const std::array<double, 6>& x) {
        SixParamMeasurement s;
        s.p_down1 = x[0]; s.p_up1 = x[1]; s.p_down2 = x[2];
        s.p_up2 = x[3]; s.eps_ro0 = x[4]; s.eps_ro1 = x[5];
        return s;
    };
    auto residuals = [&](const std::array<double, 6>& x) {
        ButterflyTable f = sixparam_to_butterfly(unpack(x));
        Eigen::Matrix<double, 8, 1> r;
        int k = 0;
        for (int i = 0; i < 2; ++i)
            for (int m = 0; m < 2; ++m)
                for (int o = 0; o < 2; ++o) r(k++) = f.p[i][m][o] - b.p[i][m][o];
        return r;
    };

    std::array<double, 6> x = pack(g);
    double lambda = 1e-6;
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::Matrix<double, 8, 1> r = residuals(x);
        if (r.norm() < 1e-13) break;
        Eigen::Matrix<double, 8, 6> J;
        const double h = 1e-8;
        for (int c = 0; c < 6; ++c) {
            auto xp = x;
            xp[c] += h;
            J.col(c) = (residuals(xp) - r) / h;
        }
        Eigen::Matrix<double, 6, 6> A = J.transpose() * J;
        A.diagonal().array() += lambda;
        Eigen::Matrix<double, 6, 1> step = A.ldlt().solve(-J.transpose() * r);
        auto xn = x;
        for (int c = 0; c < 6; ++c) xn[c] = std::min(1.0, std::max(0.0, x[c] + step(c)));
        if (residuals(xn).squaredNorm() <= r.squaredNorm()) {
            x = xn;
            lambda = std::max(1e-12, lambda * 0.5);
        } else {
            lambda *= 10.0;
        }
    }

    const double res = residuals(x).norm();
    if (res > 1e-8) {
        std::ostringstream os;
        os << "butterfly has no six-parameter solution in [0,1]^6 (residual " << res << ")";
        throw std::invalid_argument(os.str());
    }
    return unpack(x);
}

Ptm strip_y_components(const Ptm& p) {
    auto probs = p.twirl_probabilities();
    const int n = p.dim();
    double moved = 0.0;
    for (int i = 1; i < n; ++i) {
        const bool has_y = ((i & 3) == 2) || (n == 16 && (((i >> 2) & 3) == 2));
        if (has_y) {
            moved += probs[i];
            probs[i] = 0.0;
        }
    }
    probs[0] += moved;
    if (p.arity() == 1) return Ptm::pauli_channel(probs[1], probs[2], probs[3]);
    Ptm out(2);
    // Rebuild the diagonal Pauli channel for two qubits.
    auto sign1 = [](int a, int b) { return (a == 0 || b == 0 || a == b) ? 1.0 : -1.0; };
    for (int Q = 0; Q < 16; ++Q) {
        double s = 0.0;
        for (int P = 0; P < 16; ++P)
            s += probs[P] * sign1(P & 3, Q & 3) * sign1((P >> 2) & 3, (Q >> 2) & 3);
        out.at(Q, Q) = s;
    }
    return out;
}

MeasurementResult measure_qubit(DensityMatrix& dm, QubitId q, const SixParamMeasurement& model,
                                Rng& rng) {
    dm.apply1(Ptm::phase_damping(1.0).then(Ptm::amplitude_damping(model.p_down1, model.p_up1)), q);
    MeasurementResult r;
    r.projected = (dm.project_and_remove(q, rng).outcome == +1) ? 0 : 1;
    r.declared = r.projected ^ (rng.bernoulli(model.declare_flip(r.projected)) ? 1 : 0);
    const double p_flip = r.projected ? model.p_down2 : model.p_up2;
    r.post_state = r.projected ^ (rng.bernoulli(p_flip) ? 1 : 0);
    return r;
}

double f_phys(double t, const CoherenceParams& c) {
    const double r2 = 0.5 / c.t1 + (std::isinf(c.t_phi) ? 0.0 : 1.0 / c.t_phi);
    return (1.0 + std::exp(-t / c.t1)) / 6.0 + (1.0 + std::exp(-t * r2)) / 3.0;
}

double epsilon_phys(double t_cycle, const CoherenceParams& c) {
    const double inv_phi = std::isinf(c.t_phi) ? 0.0 : 1.0 / c.t_phi;
    return t_cycle / (3.0 * c.t1) + t_cycle * inv_phi / 3.0;
}

}  // namespace surfsim
