#pragma once

#include <string>
#include <vector>

#include "surfsim/density_matrix.hpp"
#include "surfsim/layout.hpp"
#include "surfsim/noise.hpp"

namespace surfsim {

// Flat qubit index within a layout: data, then X ancillas, then Z ancillas.
int flat_index(const Layout& L, QubitId q);

// Semantic timeline of one QEC cycle, shared by the simulator and the
// decoder-graph extraction. Times are in ns within [0, t_cycle).
struct TimelineAtom {
    enum Kind { Idle, Rotation, Cz, MeasureBlock } kind = Idle;
    double t0 = 0, t1 = 0;     // wall window
    double instant = 0;        // instantaneous gate time (Rotation / Cz)
    int sign = 0;              // rotation sign; the cycle-end ancilla rotation may be flipped by feedback
    bool feedback_slot = false;
    QubitId partner;           // C-Z partner
    bool fluxed = false;       // this qubit carries the flux phase of the C-Z
    int step = -1;             // ancilla step executing this atom
    int slot = -1;             // C-Z slot index
};

struct CycleTimeline {
    double t_cycle = 0;
    bool pipelining_ok = true;
    double x_meas_pulse_end = 0;   // absolute, within-cycle
    double z_meas_pulse_end = 0;
    std::vector<std::vector<TimelineAtom>> per_qubit;  // by flat index
};

CycleTimeline build_timeline(const Layout& L, const NoiseParams& noise);

// One compiled ancilla step: ops in execution order, then measurement.
struct StepOp {
    bool two = false;
    QubitId a, b;       // b unused for 1q; for 2q, a is the PTM's first index
    Ptm ptm;            // 1q payload
    Ptm pre, post;      // 2q: pre/post 16x16 factors around the flux-phased C-Z
    QubitId fluxed;     // 2q: whose quasi-static phase enters
};

struct StepProgram {
    QubitId ancilla;
    int anc_index = 0;              // in x-then-z stabilizer order
    std::vector<StepOp> ops;
    int final_rot_index = -1;       // op position of the cycle-end ancilla rotation
    Ptm final_rot_minus;            // feedback variant of that rotation
    Ptm meas_pre;                   // dephasing + pre-projection decay/excitation
};

struct CompiledCycle {
    double t_cycle = 0;
    bool pipelining_ok = true;
    std::vector<StepProgram> steady;  // cycles >= 2 (residual readout photons present)
    std::vector<StepProgram> first;   // cycle 1 (resonators start empty)
};

class Simulator {
  public:
    Simulator(const Layout& layout, const NoiseParams& noise, bool feedback);

    const Layout& layout() const { return layout_; }
    const NoiseParams& noise() const { return noise_; }
    const CompiledCycle& compiled() const { return compiled_; }
    const CycleTimeline& timeline() const { return timeline_; }
    int num_ancillas() const { return static_cast<int>(layout_.x_stabs.size() + layout_.z_stabs.size()); }

    struct RunState {
        Rng rng{0};
        std::vector<double> flux_phase;     // per flat qubit index
        std::vector<int> anc_state;         // stored ancilla bit entering the next cycle
        std::vector<uint8_t> feedback_bit;
        std::vector<uint8_t> declared_prev;
        std::vector<Ptm> cz_run;            // per-run materialized C-Z PTMs (steady)
        std::vector<Ptm> cz_run_first;
    };

    RunState begin_run(uint64_t seed) const;

    struct CycleOutcome {
        std::vector<uint8_t> projected;  // per ancilla, x-then-z order
        std::vector<uint8_t> declared;
    };

    // Executes one cycle on the data-qubit density matrix with the 8-step
    // attach/measure/detach schedule. cycle_number counts from 1.
    CycleOutcome run_cycle(DensityMatrix& dm, RunState& rs, int cycle_number) const;

    // Joint-simulation reference: all ancillas stay in the density matrix
    // (only valid for small fragments). Consumes randomness identically.
    CycleOutcome run_cycle_monolithic(DensityMatrix& dm, RunState& rs, int cycle_number) const;

    std::string dump_timeline() const;

  private:
    CycleOutcome run_cycle_impl(DensityMatrix& dm, RunState& rs, int cycle_number,
                                bool monolithic) const;

    Layout layout_;
    NoiseParams noise_;
    bool feedback_ = false;
    CycleTimeline timeline_;
    CompiledCycle compiled_;
    std::vector<int> cz_op_count_;  // per [first/steady], for run materialization
};

}  // namespace surfsim
