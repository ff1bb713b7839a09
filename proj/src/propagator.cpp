#include "flyatom/propagator.hpp"

#include "flyatom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace flyatom {

namespace {

// Plain complex product; avoids the NaN/Inf recovery path of operator*.
inline cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

} // namespace

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

LocalPropagators::LocalPropagators(std::shared_ptr<const LocalSpectra> spectra, double dt)
    : spectra_(std::move(spectra)), dt_(dt) {
    const LocalSpectra& s = *spectra_;
    const int dim = s.dims().dim();
    bare_phases_.resize(dim);
    for (int r = 0; r < dim; ++r)
        bare_phases_[r] = std::exp(-I * (s.bare_energies()[r] * dt));

    const auto& b0 = s.parity_blocks().even;
    const auto& b1 = s.parity_blocks().odd;
    const std::size_t per_point = b0.size() * b0.size() + b1.size() * b1.size();
    dense_offset_.assign(s.points(), -1);
    std::size_t dense_points = 0;
    for (int j = 0; j < s.points(); ++j)
        if (!s[j].bare)
            ++dense_points;
    dense_.resize(dense_points * per_point);

    std::size_t offset = 0;
    for (int j = 0; j < s.points(); ++j) {
        if (s[j].bare)
            continue;
        dense_offset_[j] = static_cast<int>(offset);
        for (int b = 0; b < 2; ++b) {
            const BlockSpectrum& bs = s[j].blocks[b];
            const Eigen::Index n = bs.values.size();
            Eigen::VectorXcd phase(n);
            for (Eigen::Index i = 0; i < n; ++i)
                phase[i] = std::exp(-I * (bs.values[i] * dt));
            const Operator u = bs.vectors * phase.asDiagonal() * bs.vectors.adjoint();
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c)
                    dense_[offset++] = u(r, c);
        }
    }
}

void LocalPropagators::apply(cplx* work, int n_x, const std::vector<int>& channels,
                             const bool active_blocks[2]) const {
    const LocalSpectra& s = *spectra_;
    const ParityBlocks& pb = s.parity_blocks();
    const int rows = static_cast<int>(channels.size());

    // Bare points: diagonal phases, row by row for contiguous access.
    for (int row = 0; row < rows; ++row) {
        const cplx phase = bare_phases_[channels[row]];
        cplx* w = work + static_cast<std::size_t>(row) * n_x;
        for (int j = 0; j < n_x; ++j)
            if (dense_offset_[j] < 0)
                w[j] = mul(w[j], phase);
    }

    int row_of[64];
    std::fill(std::begin(row_of), std::end(row_of), -1);
    for (int row = 0; row < rows; ++row)
        row_of[channels[row]] = row;

    double in[128];
    for (int j = 0; j < n_x; ++j) {
        if (dense_offset_[j] < 0)
            continue;
        const cplx* u = dense_.data() + dense_offset_[j];
        for (int b = 0; b < 2; ++b) {
            const auto& idx = pb.block(b);
            const int n = static_cast<int>(idx.size());
            if (!active_blocks[b]) {
                u += static_cast<std::size_t>(n) * n;
                continue;
            }
            for (int i = 0; i < n; ++i) {
                const cplx v = work[static_cast<std::size_t>(row_of[idx[i]]) * n_x + j];
                in[2 * i] = v.real();
                in[2 * i + 1] = v.imag();
            }
            for (int r = 0; r < n; ++r) {
                const double* m = reinterpret_cast<const double*>(u + static_cast<std::size_t>(r) * n);
                double re = 0, im = 0;
                for (int c = 0; c < n; ++c) {
                    re += m[2 * c] * in[2 * c] - m[2 * c + 1] * in[2 * c + 1];
                    im += m[2 * c] * in[2 * c + 1] + m[2 * c + 1] * in[2 * c];
                }
                work[static_cast<std::size_t>(row_of[idx[r]]) * n_x + j] = cplx(re, im);
            }
            u += static_cast<std::size_t>(n) * n;
        }
    }
}

Operator LocalPropagators::point_propagator(int j) const {
    const LocalSpectra& s = *spectra_;
    const int dim = s.dims().dim();
    Operator u = Operator::Zero(dim, dim);
    if (dense_offset_[j] < 0) {
        for (int r = 0; r < dim; ++r)
            u(r, r) = bare_phases_[r];
        return u;
    }
    const cplx* p = dense_.data() + dense_offset_[j];
    for (int b = 0; b < 2; ++b) {
        const auto& idx = s.parity_blocks().block(b);
        const int n = static_cast<int>(idx.size());
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                u(idx[r], idx[c]) = *p++;
    }
    return u;
}

KineticPropagator::KineticPropagator(const Grid& grid, double mass, int dim)
    : n_x_(grid.size()), dim_(dim), mass_(mass), k_(grid.wavenumbers()) {
    if (dim > 64)
        throw ConfigError("Rabi dimension above 64 is not supported by the propagator");
    work_ = fftw_alloc_complex(static_cast<std::size_t>(n_x_) * dim_);
    if (!work_)
        throw NumericalError("FFT work buffer allocation failed");
}

KineticPropagator::~KineticPropagator() {
    std::lock_guard lock(fftw_planner_mutex());
    for (auto& [key, p] : plans_)
        fftw_destroy_plan(p);
    fftw_free(work_);
}

fftw_plan KineticPropagator::plan(int rows, int sign) {
    const auto key = std::make_pair(rows, sign);
    auto it = plans_.find(key);
    if (it != plans_.end())
        return it->second;
    std::lock_guard lock(fftw_planner_mutex());
    int n = n_x_;
    // FFTW_ESTIMATE keeps the plan, and therefore the round-off, identical between runs.
    fftw_plan p = fftw_plan_many_dft(1, &n, rows, work_, nullptr, 1, n_x_, work_, nullptr, 1, n_x_, sign,
                                     FFTW_ESTIMATE);
    if (!p)
        throw NumericalError("FFTW plan creation failed");
    plans_.emplace(key, p);
    return p;
}

const std::vector<cplx>& KineticPropagator::phases(double tau) {
    auto it = phase_cache_.find(tau);
    if (it != phase_cache_.end())
        return it->second;
    std::vector<cplx> ph(n_x_);
    for (int i = 0; i < n_x_; ++i)
        ph[i] = std::exp(-I * (k_[i] * k_[i] / (2.0 * mass_) * tau)) / static_cast<double>(n_x_);
    return phase_cache_.emplace(tau, std::move(ph)).first->second;
}

void KineticPropagator::load(const WavepacketState& state, const std::vector<int>& channels) {
    cplx* w = work();
    const int rows = static_cast<int>(channels.size());
    for (int j = 0; j < n_x_; ++j)
        for (int row = 0; row < rows; ++row)
            w[static_cast<std::size_t>(row) * n_x_ + j] = state(j, channels[row]);
}

void KineticPropagator::store(WavepacketState& state, const std::vector<int>& channels) const {
    const cplx* w = reinterpret_cast<const cplx*>(work_);
    const int rows = static_cast<int>(channels.size());
    for (int j = 0; j < n_x_; ++j)
        for (int row = 0; row < rows; ++row)
            state(j, channels[row]) = w[static_cast<std::size_t>(row) * n_x_ + j];
}

void KineticPropagator::apply(int rows, double tau) {
    if (rows == 0)
        return;
    const std::vector<cplx>& ph = phases(tau);
    fftw_execute(plan(rows, FFTW_FORWARD));
    cplx* w = work();
    for (int row = 0; row < rows; ++row) {
        cplx* r = w + static_cast<std::size_t>(row) * n_x_;
        for (int j = 0; j < n_x_; ++j)
            r[j] = mul(r[j], ph[j]);
    }
    fftw_execute(plan(rows, FFTW_BACKWARD));
}

KineticPropagator::Moments KineticPropagator::moments(const WavepacketState& state,
                                                      const std::vector<int>& channels) {
    const int rows = static_cast<int>(channels.size());
    Moments m;
    if (rows == 0)
        return m;
    load(state, channels);
    fftw_execute(plan(rows, FFTW_FORWARD));
    const cplx* w = work();
    for (int row = 0; row < rows; ++row)
        for (int j = 0; j < n_x_; ++j) {
            const double p = std::norm(w[static_cast<std::size_t>(row) * n_x_ + j]);
            m.mean_p += p * k_[j];
            m.mean_p2 += p * k_[j] * k_[j];
        }
    // Parseval: sum |FFT psi|^2 = n_x sum |psi|^2.
    const double scale = state.dx() / n_x_;
    m.mean_p *= scale;
    m.mean_p2 *= scale;
    return m;
}

SplitStepPropagator::SplitStepPropagator(const Grid& grid, const SimulationConfig& config, double dt,
                                         std::shared_ptr<const LocalSpectra> coulomb_spectra)
    : grid_(grid),
      spectra_(coulomb_spectra ? std::move(coulomb_spectra)
                               : std::make_shared<const LocalSpectra>(grid, config, Gauge::coulomb)),
      potential_(spectra_, dt),
      kinetic_(grid, derive_parameters(config).mass, config.dims.dim()) {
    if (spectra_->gauge() != Gauge::coulomb)
        throw ContractError("the propagator evolves in the Coulomb gauge");
    if (spectra_->points() != grid.size())
        throw ContractError("local spectra do not match the grid");
}

std::vector<int> SplitStepPropagator::active_channels(const WavepacketState& state, bool blocks[2]) const {
    const std::vector<bool> used = state.occupied_channels();
    const ParityBlocks& pb = spectra_->parity_blocks();
    std::vector<int> channels;
    for (int b = 0; b < 2; ++b) {
        blocks[b] = std::any_of(pb.block(b).begin(), pb.block(b).end(), [&](int r) { return used[r]; });
        if (blocks[b])
            channels.insert(channels.end(), pb.block(b).begin(), pb.block(b).end());
    }
    std::sort(channels.begin(), channels.end());
    return channels;
}

void SplitStepPropagator::advance(WavepacketState& state, long n) {
    if (state.gauge() != Gauge::coulomb)
        throw ContractError("step: state must be in the Coulomb-gauge representation");
    if (state.points() != grid_.size() || state.dim() != spectra_->dims().dim())
        throw ContractError("step: state shape does not match the propagator");
    if (n <= 0)
        return;
    bool blocks[2];
    const std::vector<int> channels = active_channels(state, blocks);
    const int rows = static_cast<int>(channels.size());
    const double dt = potential_.dt();
    kinetic_.load(state, channels);
    cplx* work = kinetic_.work();
    kinetic_.apply(rows, 0.5 * dt);
    for (long i = 0; i < n; ++i) {
        potential_.apply(work, grid_.size(), channels, blocks);
        kinetic_.apply(rows, i + 1 == n ? 0.5 * dt : dt);
    }
    kinetic_.store(state, channels);
    if (state.has_nonfinite())
        throw NumericalError("non-finite amplitudes after time stepping (dt = " + std::to_string(dt) +
                             "); reduce dt or raise the Fock cutoff");
}

double SplitStepPropagator::mean_momentum(const WavepacketState& state) {
    bool blocks[2];
    return kinetic_.moments(state, active_channels(state, blocks)).mean_p;
}

double SplitStepPropagator::kinetic_energy(const WavepacketState& state) {
    bool blocks[2];
    return kinetic_.moments(state, active_channels(state, blocks)).mean_p2 / (2.0 * kinetic_.mass());
}

double SplitStepPropagator::total_energy(const WavepacketState& state) {
    return kinetic_energy(state) + spectra_->expectation(state);
}

EvolutionPlan EvolutionPlan::from(const DerivedParameters& derived, const std::vector<double>& snapshot_times) {
    EvolutionPlan plan;
    plan.n_steps = derived.n_steps;
    plan.stride = derived.stride;
    plan.dt = derived.dt;
    plan.tau0 = derived.tau0;
    for (double t : snapshot_times) {
        const long s = std::lround(t * derived.tau0 / derived.dt);
        plan.snapshot_steps.push_back(std::clamp(s, 0L, derived.n_steps));
    }
    return plan;
}

void evolve(WavepacketState& state, SplitStepPropagator& propagator, const EvolutionPlan& plan,
            const StateObserver& on_record, const StateObserver& on_snapshot) {
    std::vector<long> events;
    for (long s = 0; s <= plan.n_steps; s += plan.stride)
        events.push_back(s);
    events.push_back(plan.n_steps);
    events.insert(events.end(), plan.snapshot_steps.begin(), plan.snapshot_steps.end());
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    auto time_of = [&](long s) { return static_cast<double>(s) * plan.dt / plan.tau0; };
    auto is_record = [&](long s) { return s % plan.stride == 0 || s == plan.n_steps; };
    auto is_snapshot = [&](long s) {
        return std::find(plan.snapshot_steps.begin(), plan.snapshot_steps.end(), s) != plan.snapshot_steps.end();
    };

    long current = 0;
    for (long s : events) {
        propagator.advance(state, s - current);
        current = s;
        if (on_record && is_record(s))
            on_record(state, s, time_of(s));
        if (on_snapshot && is_snapshot(s))
            on_snapshot(state, s, time_of(s));
    }
}

double strang_self_convergence_order(const Grid& grid, const SimulationConfig& config, double dt, double duration) {
    if (!(dt > 0) || !(duration > 0))
        throw ContractError("strang_self_convergence_order: dt and duration must be positive");
    const long steps = std::max(1L, std::lround(duration / dt));
    const auto spectra = std::make_shared<const LocalSpectra>(grid, config, Gauge::coulomb);
    std::vector<WavepacketState> states;
    for (int level = 0; level < 3; ++level) {
        const long factor = 1L << level;
        SplitStepPropagator prop(grid, config, dt / static_cast<double>(factor), spectra);
        WavepacketState psi = initial_state(grid, config);
        prop.advance(psi, steps * factor);
        states.push_back(std::move(psi));
    }
    const double coarse = l2_distance(states[0], states[1]);
    const double fine = l2_distance(states[1], states[2]);
    if (!(fine > 0))
        throw NumericalError("strang_self_convergence_order: no measurable splitting error");
    return std::log2(coarse / fine);
}

} // namespace flyatom
