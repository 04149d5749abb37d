#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "surfsim/pauli.hpp"
#include "surfsim/qubit.hpp"
#include "surfsim/rng.hpp"

namespace surfsim {

// Durations in nanoseconds throughout.

struct TimingParams {
    double t_g1 = 20.0;
    double t_g2 = 40.0;
    double t_corr = 200.0;  // 2*t_g1 + 4*t_g2
    double t_meas = 300.0;
    double t_dep = 300.0;

    double coherent_window() const { return t_meas + t_dep; }
    bool pipelining_ok() const { return t_meas + t_dep >= t_corr - 1e-9; }
    // The cycle stretches when measurement+depletion cannot hide the
    // pipelined coherent step.
    double t_cycle() const { return t_corr + std::max(t_meas + t_dep, t_corr); }
};

struct CoherenceParams {
    double t1 = 30000.0;                                   // 30 us
    double t_phi = 60000.0;                                // may be +inf
    double t2() const { return 1.0 / (1.0 / t_phi + 0.5 / t1); }
};

struct RotationErrorParams {
    double p_axis = 1e-4;
    double p_plane = 5e-4;
    double overrotation = 0.0;  // rad, added to +-pi/2
};

struct FluxNoiseParams {
    double amp_uphi0_sq = 1.0;          // A, in (micro Phi_0)^2
    double f_min = 0.05;                // Hz
    double f_max = 5.0e4;               // Hz
    double rad_per_uphi0 = 2.5e-3;      // circuit sensitivity of the pulsed transmon

    double flux_rms_uphi0() const;      // sqrt(A ln(f_max/f_min))
    double dphi_rms() const { return rad_per_uphi0 * flux_rms_uphi0(); }
};

struct PhotonParams {
    double kappa = 1.0 / 250.0;                    // 1/ns
    double chi = -2.0 * M_PI * 2.6e-3;             // rad/ns (angular)
    double n0 = 0.8;                               // residual |alpha_g alpha_e*| at pulse end
    double scale = 1.0;                            // multiplies n0; 0 disables
    bool enabled = true;

    double field_at_pulse_end() const { return enabled ? scale * n0 : 0.0; }
};

// Eight transition probabilities P(i -> m, o); m index 0 is outcome +1.
struct ButterflyTable {
    double p[2][2][2] = {};

    static ButterflyTable standard();  // the calibrated reference table
    bool normalized(double tol = 1e-9) const;
    // Probability that the declared outcome disagrees with the input state.
    double declared_flip_prob(int input) const { return p[input][input == 0 ? 1 : 0][0] + p[input][input == 0 ? 1 : 0][1]; }
};

// Black-box measurement: dephasing, pre-projection decay/excitation, perfect
// projection, declaration error, post-projection decay/excitation.
struct SixParamMeasurement {
    double p_down1 = 0, p_up1 = 0;
    double p_down2 = 0, p_up2 = 0;
    double eps_ro0 = 0, eps_ro1 = 0;

    double eps_ro_mean() const { return 0.5 * (eps_ro0 + eps_ro1); }
    // P(declared bit != s | projected bit s).
    double declare_flip(int s) const { return s ? eps_ro1 : eps_ro0; }
    // P(declared measurement disagrees with the input basis state).
    double declared_flip_prob(int input) const;
    // Equivalent decay durations at reference T1, for extrapolation.
    double tau1(double t1_ref) const { return -t1_ref * std::log1p(-p_down1); }
    double tau2(double t1_ref) const { return -t1_ref * std::log1p(-p_down2); }
    SixParamMeasurement rescaled_t1(double t1_ref, double t1_new) const;
};

// Full noise parameter set (Tables I and II plus the measurement butterfly).
struct NoiseParams {
    TimingParams timing;
    CoherenceParams coherence;
    RotationErrorParams rotation;
    FluxNoiseParams flux;
    PhotonParams photon;
    SixParamMeasurement meas;
    double meas_t1_ref = 30000.0;  // T1 at which `meas` was calibrated
    bool noise_off = false;        // all channels ideal (debug / trivial tests)
    bool y_free = false;           // strip Y components and declaration errors
    bool flux_enabled = true;
    // Which member of a C-Z pair is flux-pulsed (the higher-frequency one):
    // the ancilla for X-type checks, the data qubit for Z-type checks.
    bool cz_flux_on_x_ancilla = true;
    bool cz_flux_on_z_data = true;

    static NoiseParams standard();
    SixParamMeasurement measurement_for_t1() const;
};

// --- channels -------------------------------------------------------------

// Amplitude and phase damping for an idling period.
Ptm idle_channel(double tau, const CoherenceParams& c);

// Signed integral of the photon-induced dephasing rate over [t1, t2], with
// pulse-end time t_m and superposition-creation time t_g (all ns).
double photon_dephasing_integral(double t1, double t2, double t_m, double t_g,
                                 const PhotonParams& ph);
double photon_dephasing_prob(double t1, double t2, double t_m, double t_g,
                             const PhotonParams& ph);

// Composite PTM of a y rotation: idle(t_g1/2), depolarizing, exact
// R_y(sign*pi/2 + overrotation), idle(t_g1/2).
Ptm noisy_ry(int sign, const TimingParams& t, const CoherenceParams& c,
             const RotationErrorParams& r);

// Composite PTM of a C-Z gate: idle(t_g2/2) on both qubits, instantaneous
// C-Z with single-qubit phase error on the fluxed (first) qubit and the
// correlated two-qubit phase error, idle(t_g2/2) on both qubits.
Ptm cz_gate(const TimingParams& t, const CoherenceParams& c, double dphi_fluxed);

double flux_rms(const FluxNoiseParams& f);  // in micro Phi_0
std::vector<double> sample_flux_phases(Rng& rng, const FluxNoiseParams& f, int count);

// Conversions between the butterfly and the six-parameter model.
ButterflyTable sixparam_to_butterfly(const SixParamMeasurement& s);
SixParamMeasurement butterfly_to_sixparam(const ButterflyTable& b);  // throws if unsolvable

// Pauli-twirl a channel and drop its Y components into the identity.
Ptm strip_y_components(const Ptm& p);

class DensityMatrix;

// Complete black-box measurement of one qubit: dephasing, pre-projection
// decay/excitation, Born-rule projection (qubit removed), declaration error,
// post-projection decay/excitation of the classically stored state.
struct MeasurementResult {
    int projected = 0;   // Born-rule bit
    int declared = 0;    // bit reported to the decoder
    int post_state = 0;  // state entering the next cycle
};
MeasurementResult measure_qubit(DensityMatrix& dm, QubitId q, const SixParamMeasurement& model,
                                Rng& rng);

// Figures of the single-transmon reference.
double f_phys(double t, const CoherenceParams& c);
double epsilon_phys(double t_cycle, const CoherenceParams& c);

}  // namespace surfsim
