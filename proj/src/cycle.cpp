#include "surfsim/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace surfsim {

int flat_index(const Layout& L, QubitId q) {
    const int nd = L.num_data();
    switch (q.kind) {
        case QubitKind::Data: return q.index;
        case QubitKind::AncX: return nd + q.index;
        case QubitKind::AncZ: return nd + static_cast<int>(L.x_stabs.size()) + q.index;
    }
    return -1;
}

namespace {

double slot_start(double phase0, const TimingParams& t, int k) {
    return phase0 + t.t_g1 + k * t.t_g2;
}

void fill_gaps(std::vector<TimelineAtom>& atoms, double t_cycle) {
    std::sort(atoms.begin(), atoms.end(),
              [](const TimelineAtom& a, const TimelineAtom& b) { return a.t0 < b.t0; });
    std::vector<TimelineAtom> out;
    double cursor = 0.0;
    for (const auto& a : atoms) {
        if (a.t0 > cursor + 1e-9) {
            TimelineAtom idle;
            idle.kind = TimelineAtom::Idle;
            idle.t0 = cursor;
            idle.t1 = a.t0;
            out.push_back(idle);
        }
        out.push_back(a);
        cursor = std::max(cursor, a.t1);
    }
    if (cursor < t_cycle - 1e-9) {
        TimelineAtom idle;
        idle.kind = TimelineAtom::Idle;
        idle.t0 = cursor;
        idle.t1 = t_cycle;
        out.push_back(idle);
    }
    atoms.swap(out);
}

void assign_steps(std::vector<TimelineAtom>& atoms) {
    // Non-gate atoms run in the step of the next C-Z on the same qubit, or the
    // previous one after the final C-Z.
    int next = -1;
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
        if (it->step >= 0)
            next = it->step;
        else
            it->step = next;
    }
    int prev = 0;
    for (auto& a : atoms) {
        if (a.step >= 0)
            prev = a.step;
        else
            a.step = prev;
    }
}

}  // namespace

CycleTimeline build_timeline(const Layout& L, const NoiseParams& noise) {
    const TimingParams& t = noise.timing;
    const double t_corr = 2 * t.t_g1 + 4 * t.t_g2;
    CycleTimeline tl;
    tl.pipelining_ok = t.t_meas + t.t_dep >= t_corr - 1e-9;
    tl.t_cycle = t_corr + std::max(t.t_meas + t.t_dep, t_corr);
    tl.x_meas_pulse_end = t_corr + t.t_meas;
    tl.z_meas_pulse_end = 2 * t_corr + t.t_meas;
    tl.per_qubit.resize(L.num_qubits());

    const bool has_x = !L.x_stabs.empty();
    const int nx = static_cast<int>(L.x_stabs.size());

    auto add_cz_atoms = [&](const Stabilizer& s, int step, double phase0, bool anc_fluxed) {
        for (int k = 0; k < 4; ++k) {
            if (s.slots[k] < 0) continue;
            const QubitId dq = QubitId::data(s.slots[k]);
            TimelineAtom cz;
            cz.kind = TimelineAtom::Cz;
            cz.t0 = slot_start(phase0, t, k);
            cz.t1 = cz.t0 + t.t_g2;
            cz.instant = 0.5 * (cz.t0 + cz.t1);
            cz.step = step;
            cz.slot = k;
            cz.partner = dq;
            cz.fluxed = anc_fluxed;
            tl.per_qubit[flat_index(L, s.ancilla)].push_back(cz);
            cz.partner = s.ancilla;
            cz.fluxed = !anc_fluxed;
            tl.per_qubit[flat_index(L, dq)].push_back(cz);
        }
    };

    auto add_rot = [&](QubitId q, double w0, int sign, int step, bool fb) {
        TimelineAtom r;
        r.kind = TimelineAtom::Rotation;
        r.t0 = w0;
        r.t1 = w0 + t.t_g1;
        r.instant = w0 + 0.5 * t.t_g1;
        r.sign = sign;
        r.step = step;
        r.feedback_slot = fb;
        tl.per_qubit[flat_index(L, q)].push_back(r);
    };

    for (int phase = 0; phase < 2; ++phase) {
        const auto& stabs = (phase == 0) ? L.x_stabs : L.z_stabs;
        const double phase0 = (phase == 0) ? 0.0 : t_corr;
        for (size_t j = 0; j < stabs.size(); ++j) {
            const auto& s = stabs[j];
            const int step = (phase == 0) ? static_cast<int>(j) : nx + static_cast<int>(j);
            add_rot(s.ancilla, phase0, -1, step, false);
            add_rot(s.ancilla, phase0 + t_corr - t.t_g1, +1, step, true);
            const bool anc_fluxed = (phase == 0) ? noise.cz_flux_on_x_ancilla : !noise.cz_flux_on_z_data;
            add_cz_atoms(s, step, phase0, anc_fluxed);
            TimelineAtom mb;
            mb.kind = TimelineAtom::MeasureBlock;
            mb.t0 = phase0 + t_corr;
            mb.t1 = mb.t0 + t.t_meas + t.t_dep;
            mb.step = step;
            tl.per_qubit[flat_index(L, s.ancilla)].push_back(mb);
        }
    }

    if (has_x) {
        // Data qubits change basis around the X-type coherent step.
        for (int i = 0; i < L.num_data(); ++i) {
            add_rot(QubitId::data(i), 0.0, -1, -1, false);
            add_rot(QubitId::data(i), t_corr - t.t_g1, +1, -1, false);
        }
    }

    for (auto& atoms : tl.per_qubit) {
        fill_gaps(atoms, tl.t_cycle);
        assign_steps(atoms);
    }
    return tl;
}

namespace {

struct Builder {
    const Layout& L;
    const NoiseParams& noise;
    const CycleTimeline& tl;
    bool photons_active;

    Ptm idle(double tau) const {
        if (noise.noise_off || tau <= 0) return Ptm::identity(1);
        Ptm p = idle_channel(tau, noise.coherence);
        return noise.y_free ? strip_y_components(p) : p;
    }

    Ptm dep_factor() const {
        if (noise.noise_off) return Ptm::identity(1);
        Ptm p = Ptm::depolarizing_axes(1.0 - noise.rotation.p_plane, 1.0 - noise.rotation.p_axis,
                                       1.0 - noise.rotation.p_plane);
        return noise.y_free ? strip_y_components(p) : p;
    }

    Ptm rot_factor(int sign) const {
        const double over = noise.noise_off ? 0.0 : noise.rotation.overrotation;
        return Ptm::ry((sign >= 0 ? 1.0 : -1.0) * M_PI / 2.0 + over);
    }

    // Photon-induced dephasing accumulated on an ancilla over [a,b], clamped
    // to a physical (CP) channel segment by segment.
    Ptm photon_pd(QubitId q, double a, double b) const {
        if (!photons_active || noise.noise_off || !noise.photon.enabled || q.kind == QubitKind::Data)
            return Ptm::identity(1);
        const bool is_x = q.kind == QubitKind::AncX;
        const double t_pulse_end = (is_x ? tl.x_meas_pulse_end : tl.z_meas_pulse_end) - tl.t_cycle;
        const double phase0 = is_x ? 0.0 : 2 * noise.timing.t_g1 + 4 * noise.timing.t_g2;
        const double t_g = phase0 + 0.5 * noise.timing.t_g1;
        const double t_rot_end = phase0 + 2 * noise.timing.t_g1 + 4 * noise.timing.t_g2 - 0.5 * noise.timing.t_g1;
        const double lo = std::max(a, t_g), hi = std::min(b, t_rot_end);
        if (hi <= lo) return Ptm::identity(1);
        const double integral = photon_dephasing_integral(lo, hi, t_pulse_end, t_g, noise.photon);
        const double p = std::max(0.0, 1.0 - std::exp(-integral));
        return Ptm::phase_damping(p);
    }

    Ptm rotation_atom(QubitId q, const TimelineAtom& at, int sign) const {
        Ptm pre = idle(0.5 * noise.timing.t_g1).then(photon_pd(q, at.t0, at.instant));
        Ptm post = idle(0.5 * noise.timing.t_g1).then(photon_pd(q, at.instant, at.t1));
        return pre.then(dep_factor()).then(rot_factor(sign)).then(post);
    }

    Ptm idle_atom(QubitId q, const TimelineAtom& at) const {
        return idle(at.t1 - at.t0).then(photon_pd(q, at.t0, at.t1));
    }

    Ptm half_cz_idle(QubitId q, double a, double b) const {
        return idle(b - a).then(photon_pd(q, a, b));
    }

    Ptm meas_pre() const {
        if (noise.noise_off) return Ptm::phase_damping(1.0);
        const SixParamMeasurement six = noise.measurement_for_t1();
        Ptm damp = Ptm::amplitude_damping(six.p_down1, six.p_up1);
        if (noise.y_free) damp = strip_y_components(damp);
        return Ptm::phase_damping(1.0).then(damp);
    }
};

}  // namespace

Simulator::Simulator(const Layout& layout, const NoiseParams& noise, bool feedback)
    : layout_(layout), noise_(noise), feedback_(feedback) {
    timeline_ = build_timeline(layout_, noise_);
    compiled_.t_cycle = timeline_.t_cycle;
    compiled_.pipelining_ok = timeline_.pipelining_ok;

    const int nsteps = num_ancillas();
    for (int variant = 0; variant < 2; ++variant) {
        Builder B{layout_, noise_, timeline_, variant == 1};
        std::vector<StepProgram> progs(nsteps);
        for (int phase = 0; phase < 2; ++phase) {
            const auto& stabs = (phase == 0) ? layout_.x_stabs : layout_.z_stabs;
            for (size_t j = 0; j < stabs.size(); ++j) {
                const int step = (phase == 0) ? static_cast<int>(j)
                                              : static_cast<int>(layout_.x_stabs.size() + j);
                progs[step].ancilla = stabs[j].ancilla;
                progs[step].anc_index = step;
                progs[step].meas_pre = B.meas_pre();
            }
        }

        // Assemble (time, op) lists per step.
        struct Timed {
            double t;
            int seq;
            StepOp op;
            bool feedback_slot;
        };
        std::vector<std::vector<Timed>> per_step(nsteps);
        int seq = 0;
        for (int fq = 0; fq < layout_.num_qubits(); ++fq) {
            QubitId q = fq < layout_.num_data()
                            ? QubitId::data(fq)
                            : (fq < layout_.num_data() + static_cast<int>(layout_.x_stabs.size())
                                   ? QubitId::anc_x(fq - layout_.num_data())
                                   : QubitId::anc_z(fq - layout_.num_data() -
                                                    static_cast<int>(layout_.x_stabs.size())));
            for (const auto& at : timeline_.per_qubit[fq]) {
                if (at.kind == TimelineAtom::MeasureBlock) continue;
                if (at.kind == TimelineAtom::Cz) {
                    if (q.kind == QubitKind::Data) continue;  // emitted from the ancilla side
                    StepOp op;
                    op.two = true;
                    const QubitId anc = q, dq = at.partner;
                    const QubitId fluxed = at.fluxed ? anc : dq;
                    const QubitId other = at.fluxed ? dq : anc;
                    op.a = fluxed;
                    op.b = other;
                    op.fluxed = fluxed;
                    auto half = [&](QubitId hq, double a, double b) { return B.half_cz_idle(hq, a, b); };
                    op.pre = Ptm::tensor(half(fluxed, at.t0, at.instant), half(other, at.t0, at.instant));
                    op.post = Ptm::tensor(half(fluxed, at.instant, at.t1), half(other, at.instant, at.t1));
                    per_step[at.step].push_back({at.t0, seq++, op, false});
                    continue;
                }
                StepOp op;
                op.a = q;
                bool fb = false;
                if (at.kind == TimelineAtom::Rotation) {
                    op.ptm = B.rotation_atom(q, at, at.sign);
                    fb = at.feedback_slot && q.kind != QubitKind::Data;
                } else {
                    op.ptm = B.idle_atom(q, at);
                }
                per_step[at.step].push_back({at.t0, seq++, op, fb});
            }
        }

        for (int s = 0; s < nsteps; ++s) {
            auto& list = per_step[s];
            std::sort(list.begin(), list.end(), [](const Timed& a, const Timed& b) {
                if (a.t != b.t) return a.t < b.t;
                return a.seq < b.seq;
            });
            StepProgram& prog = progs[s];
            // Fuse adjacent one-qubit ops; a feedback-variant rotation stays alone.
            std::vector<int> last_touch(layout_.num_qubits(), -1);
            std::vector<bool> fusable;
            for (const auto& tv : list) {
                const auto& op = tv.op;
                if (op.two) {
                    prog.ops.push_back(op);
                    fusable.push_back(false);
                    last_touch[flat_index(layout_, op.a)] = static_cast<int>(prog.ops.size()) - 1;
                    last_touch[flat_index(layout_, op.b)] = static_cast<int>(prog.ops.size()) - 1;
                    continue;
                }
                const int fi = flat_index(layout_, op.a);
                const int lt = last_touch[fi];
                if (!tv.feedback_slot && lt >= 0 && !prog.ops[lt].two && fusable[lt] &&
                    prog.ops[lt].a == op.a) {
                    prog.ops[lt].ptm = prog.ops[lt].ptm.then(op.ptm);
                    continue;
                }
                prog.ops.push_back(op);
                fusable.push_back(!tv.feedback_slot);
                last_touch[fi] = static_cast<int>(prog.ops.size()) - 1;
                if (tv.feedback_slot) {
                    prog.final_rot_index = static_cast<int>(prog.ops.size()) - 1;
                    // Variant with the opposite rotation sign for feedback.
                    for (const auto& at : timeline_.per_qubit[fi]) {
                        if (at.kind == TimelineAtom::Rotation && at.feedback_slot) {
                            Builder BB{layout_, noise_, timeline_, variant == 1};
                            prog.final_rot_minus = BB.rotation_atom(op.a, at, -at.sign);
                        }
                    }
                }
            }
        }

        if (variant == 0)
            compiled_.first = std::move(progs);
        else
            compiled_.steady = std::move(progs);
    }
}

Simulator::RunState Simulator::begin_run(uint64_t seed) const {
    RunState rs;
    rs.rng = Rng(seed);
    const int nq = layout_.num_qubits();
    const double sigma =
        (noise_.noise_off || !noise_.flux_enabled) ? 0.0 : noise_.flux.dphi_rms();
    rs.flux_phase.resize(nq);
    for (int i = 0; i < nq; ++i) rs.flux_phase[i] = sigma * rs.rng.gauss();
    rs.anc_state.assign(num_ancillas(), 0);
    rs.feedback_bit.assign(num_ancillas(), 0);
    rs.declared_prev.assign(num_ancillas(), 0);

    auto materialize = [&](const std::vector<StepProgram>& progs, std::vector<Ptm>& out) {
        out.clear();
        for (const auto& prog : progs)
            for (const auto& op : prog.ops) {
                if (!op.two) continue;
                const double phi = rs.flux_phase[flat_index(layout_, op.fluxed)];
                out.push_back(op.pre.then(Ptm::cz_with_phases(phi, 0.0, 0.5 * phi)).then(op.post));
            }
    };
    materialize(compiled_.first, rs.cz_run_first);
    materialize(compiled_.steady, rs.cz_run);
    return rs;
}

Simulator::CycleOutcome Simulator::run_cycle_impl(DensityMatrix& dm, RunState& rs,
                                                  int cycle_number, bool monolithic) const {
    const auto& progs = (cycle_number <= 1) ? compiled_.first : compiled_.steady;
    const auto& czs = (cycle_number <= 1) ? rs.cz_run_first : rs.cz_run;
    const SixParamMeasurement six =
        noise_.noise_off ? SixParamMeasurement{} : noise_.measurement_for_t1();

    CycleOutcome out;
    out.projected.resize(num_ancillas());
    out.declared.resize(num_ancillas());
    int cz_counter = 0;
    for (const auto& prog : progs) {
        const QubitId A = prog.ancilla;
        if (!monolithic) dm.add_qubit(A, rs.anc_state[prog.anc_index]);
        for (size_t i = 0; i < prog.ops.size(); ++i) {
            const auto& op = prog.ops[i];
            if (op.two) {
                dm.apply2(czs[cz_counter++], op.a, op.b);
            } else if (static_cast<int>(i) == prog.final_rot_index && feedback_ &&
                       rs.feedback_bit[prog.anc_index]) {
                dm.apply1(prog.final_rot_minus, op.a);
            } else {
                dm.apply1(op.ptm, op.a);
            }
        }
        dm.apply1(prog.meas_pre, A);

        int m;
        if (monolithic) {
            const double p0 = dm.prob_zero(A);
            m = (rs.rng.uniform() < p0) ? 0 : 1;
            dm.project_keep(A, m);
        } else {
            m = (dm.project_and_remove(A, rs.rng).outcome == +1) ? 0 : 1;
        }
        const int declared = m ^ (rs.rng.bernoulli(six.declare_flip(m)) ? 1 : 0);
        const double p_flip2 = m ? six.p_down2 : six.p_up2;
        const int post = m ^ (rs.rng.bernoulli(p_flip2) ? 1 : 0);
        if (monolithic) {
            if (post != m) dm.apply1(Ptm::pauli_x(), A);
        }
        rs.anc_state[prog.anc_index] = post;
        out.projected[prog.anc_index] = static_cast<uint8_t>(m);
        out.declared[prog.anc_index] = static_cast<uint8_t>(declared);
    }

    if (feedback_) {
        for (int j = 0; j < num_ancillas(); ++j) rs.feedback_bit[j] ^= rs.declared_prev[j];
    }
    rs.declared_prev = out.declared;
    return out;
}

Simulator::CycleOutcome Simulator::run_cycle(DensityMatrix& dm, RunState& rs,
                                             int cycle_number) const {
    return run_cycle_impl(dm, rs, cycle_number, false);
}

Simulator::CycleOutcome Simulator::run_cycle_monolithic(DensityMatrix& dm, RunState& rs,
                                                        int cycle_number) const {
    return run_cycle_impl(dm, rs, cycle_number, true);
}

std::string Simulator::dump_timeline() const {
    std::ostringstream os;
    os << "cycle " << timeline_.t_cycle << " ns"
       << (timeline_.pipelining_ok ? "" : "  [warning: T_meas+T_dep < T_corr, cycle stretched]")
       << "\n";
    for (int fq = 0; fq < layout_.num_qubits(); ++fq) {
        QubitId q = fq < layout_.num_data()
                        ? QubitId::data(fq)
                        : (fq < layout_.num_data() + static_cast<int>(layout_.x_stabs.size())
                               ? QubitId::anc_x(fq - layout_.num_data())
                               : QubitId::anc_z(fq - layout_.num_data() -
                                                static_cast<int>(layout_.x_stabs.size())));
        os << q.str() << ":";
        for (const auto& at : timeline_.per_qubit[fq]) {
            os << "  [" << at.t0 << "," << at.t1 << ")";
            switch (at.kind) {
                case TimelineAtom::Idle: os << "idle"; break;
                case TimelineAtom::Rotation: os << (at.sign > 0 ? "ry+" : "ry-"); break;
                case TimelineAtom::Cz: os << "cz " << at.partner.str() << "@s" << at.slot; break;
                case TimelineAtom::MeasureBlock: os << "meas"; break;
            }
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace surfsim
