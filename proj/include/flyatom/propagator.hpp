#pragma once

// Strang split-operator propagation of the joint state under
//     H = p^2 / 2m + H_R^(c)(x),
// with the kinetic factor applied diagonally in the discrete-Fourier momentum
// representation and the Rabi factor applied exactly at each grid point from
// its local eigendecomposition.

#include "flyatom/local_spectrum.hpp"

#include <fftw3.h>

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace flyatom {

/// FFTW planning is not thread-safe (execution of an existing plan is);
/// every plan creation and destruction takes this lock.
std::mutex& fftw_planner_mutex();

/// exp(-i H_R(x_j) dt) for every grid point, stored per parity block.
class LocalPropagators {
public:
    LocalPropagators(std::shared_ptr<const LocalSpectra> spectra, double dt);

    double dt() const { return dt_; }
    const LocalSpectra& spectra() const { return *spectra_; }

    /// Applies every point's propagator to a channel-major work array:
    /// `work[row * n_x + j]` holds Rabi channel `channels[row]` at point j.
    /// Only channels belonging to `active_blocks` may be listed.
    void apply(cplx* work, int n_x, const std::vector<int>& channels, const bool active_blocks[2]) const;

    /// Dense dim x dim propagator at point j (bare points included).
    Operator point_propagator(int j) const;

private:
    std::shared_ptr<const LocalSpectra> spectra_;
    double dt_;
    std::vector<cplx> bare_phases_;
    std::vector<int> dense_offset_; ///< offset into dense_ for point j, block 0; -1 if bare
    std::vector<cplx> dense_;       ///< row-major block matrices, block 0 then block 1
};

/// Batched FFT over the Rabi channels of a channel-major work array plus
/// diagonal kinetic phases.
class KineticPropagator {
public:
    KineticPropagator(const Grid& grid, double mass, int dim);
    ~KineticPropagator();
    KineticPropagator(const KineticPropagator&) = delete;
    KineticPropagator& operator=(const KineticPropagator&) = delete;

    /// Work array for up to `dim` channels; rows are contiguous, n_x long.
    cplx* work() { return reinterpret_cast<cplx*>(work_); }

    /// Copies the listed channels of `state` into work() (and back).
    void load(const WavepacketState& state, const std::vector<int>& channels);
    void store(WavepacketState& state, const std::vector<int>& channels) const;

    /// work <- exp(-i p^2 tau / 2m) work on the first `rows` rows.
    void apply(int rows, double tau);

    struct Moments {
        double mean_p = 0;
        double mean_p2 = 0;
    };
    /// <p> and <p^2> from the momentum-representation amplitudes.
    Moments moments(const WavepacketState& state, const std::vector<int>& channels);

    double mass() const { return mass_; }

private:
    const std::vector<cplx>& phases(double tau);
    fftw_plan plan(int rows, int sign);

    int n_x_;
    int dim_;
    double mass_;
    std::vector<double> k_;
    fftw_complex* work_ = nullptr;
    std::map<std::pair<int, int>, fftw_plan> plans_;
    std::map<double, std::vector<cplx>> phase_cache_;
};

class SplitStepPropagator {
public:
    SplitStepPropagator(const Grid& grid, const SimulationConfig& config, double dt,
                        std::shared_ptr<const LocalSpectra> coulomb_spectra = nullptr);

    double dt() const { return potential_.dt(); }
    const Grid& grid() const { return grid_; }
    const LocalSpectra& spectra() const { return potential_.spectra(); }
    std::shared_ptr<const LocalSpectra> shared_spectra() const { return spectra_; }
    const LocalPropagators& potential() const { return potential_; }

    /// One Strang step exp(-iK dt/2) exp(-iV dt) exp(-iK dt/2).
    void step(WavepacketState& state) { advance(state, 1); }

    /// n consecutive Strang steps with adjacent kinetic half-steps fused.
    void advance(WavepacketState& state, long n);

    double mean_momentum(const WavepacketState& state);
    double kinetic_energy(const WavepacketState& state);
    /// <p^2/2m + H_R^(c)(x)>.
    double total_energy(const WavepacketState& state);

private:
    std::vector<int> active_channels(const WavepacketState& state, bool blocks[2]) const;

    Grid grid_;
    std::shared_ptr<const LocalSpectra> spectra_;
    LocalPropagators potential_;
    KineticPropagator kinetic_;
};

/// Step bookkeeping for a full run.
struct EvolutionPlan {
    long n_steps = 0;
    int stride = 1;
    double dt = 0;
    double tau0 = 1;
    std::vector<long> snapshot_steps;

    static EvolutionPlan from(const DerivedParameters& derived, const std::vector<double>& snapshot_times);
};

/// Called with the current state, step index and time in units of tau0.
using StateObserver = std::function<void(const WavepacketState&, long, double)>;

/// Runs the plan; `on_record` fires at step 0, every stride and at the last step,
/// `on_snapshot` at each snapshot step.
void evolve(WavepacketState& state, SplitStepPropagator& propagator, const EvolutionPlan& plan,
            const StateObserver& on_record, const StateObserver& on_snapshot = {});

/// Self-convergence order of the split step: states after `duration` with steps
/// dt, dt/2, dt/4 give log2(|psi_dt - psi_dt/2| / |psi_dt/2 - psi_dt/4|).
/// The initial state is the configured wavepacket.
double strang_self_convergence_order(const Grid& grid, const SimulationConfig& config, double dt, double duration);

} // namespace flyatom
