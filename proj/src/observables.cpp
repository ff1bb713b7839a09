#include "flyatom/observables.hpp"

#include "flyatom/errors.hpp"
#include "flyatom/propagator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace flyatom {

namespace {

constexpr double tie_tolerance = 1e-13;

// Larger magnitudes first at the first differing component.
bool lexicographically_before(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double x = std::abs(a[i]), y = std::abs(b[i]);
        if (std::abs(x - y) > 1e-12)
            return x > y;
    }
    return false;
}

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
    Eigen::Index best = 0;
    double mag = -1;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > mag + 1e-12) {
            mag = std::abs(v[i]);
            best = i;
        }
    if (mag > 0)
        v *= std::conj(v[best]) / mag;
}

} // namespace

DressedBasis make_dressed_basis(const LocalSpectrum& spectrum, const ParityBlocks& blocks,
                                const Eigen::VectorXd& bare_energies) {
    const Eigen::Index dim = bare_energies.size();
    std::vector<double> energy;
    std::vector<Eigen::VectorXcd> vectors;
    energy.reserve(dim);
    vectors.reserve(dim);
    if (spectrum.bare) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            energy.push_back(bare_energies[i]);
            vectors.push_back(Eigen::VectorXcd::Unit(dim, i));
        }
    } else {
        for (int b = 0; b < 2; ++b) {
            const auto& idx = blocks.block(b);
            const BlockSpectrum& bs = spectrum.blocks[b];
            for (Eigen::Index c = 0; c < bs.values.size(); ++c) {
                Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
                for (std::size_t r = 0; r < idx.size(); ++r)
                    v[idx[r]] = bs.vectors(static_cast<Eigen::Index>(r), c);
                fix_phase(v);
                energy.push_back(bs.values[c]);
                vectors.push_back(std::move(v));
            }
        }
    }

    std::vector<int> order(energy.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return energy[a] < energy[b]; });
    // Within each run of (numerically) equal energies, order deterministically.
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start + 1;
        while (end < order.size() &&
               energy[order[end]] - energy[order[start]] <= tie_tolerance * std::max(1.0, std::abs(energy[order[start]])))
            ++end;
        std::stable_sort(order.begin() + static_cast<long>(start), order.begin() + static_cast<long>(end),
                         [&](int a, int b) { return lexicographically_before(vectors[a], vectors[b]); });
        start = end;
    }

    DressedBasis basis;
    basis.energies.resize(dim);
    basis.states.resize(dim, dim);
    for (Eigen::Index l = 0; l < dim; ++l) {
        basis.energies[l] = energy[order[l]];
        basis.states.col(l) = vectors[order[l]];
    }
    return basis;
}

int align_phases(DressedBasis& basis, const DressedBasis& reference) {
    int events = 0;
    const Operator overlaps = reference.states.adjoint() * basis.states;
    for (Eigen::Index l = 0; l < basis.states.cols(); ++l) {
        Eigen::Index best = 0;
        overlaps.col(l).cwiseAbs().maxCoeff(&best);
        const cplx overlap = overlaps(best, l);
        if (best != l || std::abs(overlap) < 0.5)
            ++events;
        if (std::abs(overlap) >= 0.5)
            basis.states.col(l) *= std::conj(overlap) / std::abs(overlap);
    }
    return events;
}

Operator positive_frequency_part(const DressedBasis& basis, const Operator& field) {
    const Operator in_eigenbasis = basis.states.adjoint() * field * basis.states;
    Operator upper = Operator::Zero(in_eigenbasis.rows(), in_eigenbasis.cols());
    upper.triangularView<Eigen::StrictlyUpper>() = in_eigenbasis.triangularView<Eigen::StrictlyUpper>();
    return basis.states * upper * basis.states.adjoint();
}

ReducedDensityMatrix reduced_density_matrix(const WavepacketState& state) {
    ReducedDensityMatrix r;
    r.rho = Operator::Zero(state.dim(), state.dim());
    for (int j = 0; j < state.points(); ++j) {
        const auto psi = state.at(j);
        r.rho.noalias() += psi * psi.adjoint();
    }
    r.rho *= state.dx();
    return r;
}

double von_neumann_entropy(const Operator& rho, int base) {
    if (base < 2)
        throw ContractError("entropy base must be >= 2");
    Eigen::SelfAdjointEigenSolver<Operator> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    double s = 0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double l = std::max(0.0, solver.eigenvalues()[i]);
        if (l > 0)
            s -= l * std::log(l);
    }
    return s / std::log(static_cast<double>(base));
}

EntropyResult entropy_of(const ReducedDensityMatrix& rho, const Eigen::VectorXd& bare_energies, int m_cut,
                         EntropyLevels levels) {
    const int dim = static_cast<int>(bare_energies.size());
    if (m_cut < 2)
        throw ContractError("entropy cut m must be >= 2");
    if (m_cut > dim)
        throw ContractError("entropy cut m exceeds the Rabi dimension");
    if (rho.rho.rows() != dim)
        throw ContractError("entropy_of: density matrix dimension mismatch");

    const HilbertDims dims{dim / 2 - 1, 0};
    std::vector<int> candidates;
    if (levels == EntropyLevels::parity_sector) {
        double even = 0, odd = 0;
        for (int i = 0; i < dim; ++i)
            (parity(dims.label(i)) > 0 ? even : odd) += rho.rho(i, i).real();
        const int sector = even >= odd ? 1 : -1;
        for (int i = 0; i < dim; ++i)
            if (parity(dims.label(i)) == sector)
                candidates.push_back(i);
    } else {
        candidates.resize(dim);
        std::iota(candidates.begin(), candidates.end(), 0);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](int a, int b) { return bare_energies[a] < bare_energies[b] - tie_tolerance; });
    if (static_cast<int>(candidates.size()) < m_cut)
        throw ContractError("entropy cut m exceeds the parity sector size");

    EntropyResult result;
    result.levels.assign(candidates.begin(), candidates.begin() + m_cut);
    std::sort(result.levels.begin(), result.levels.end());
    Operator kept(m_cut, m_cut);
    for (int r = 0; r < m_cut; ++r)
        for (int c = 0; c < m_cut; ++c)
            kept(r, c) = rho.rho(result.levels[r], result.levels[c]);
    result.retained_trace = kept.trace().real();
    result.low_trace_warning = result.retained_trace < 0.5;
    if (!(result.retained_trace > 0))
        return result;
    result.entropy = von_neumann_entropy(kept / result.retained_trace, m_cut);
    return result;
}

MomentumMoments momentum_moments(const WavepacketState& state, const Grid& grid) {
    const int n = state.points();
    if (n != grid.size())
        throw ContractError("momentum_moments: grid mismatch");
    const std::vector<bool> used = state.occupied_channels();
    fftw_complex* buffer = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(n, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    cplx* buf = reinterpret_cast<cplx*>(buffer);
    const std::vector<double>& k = grid.wavenumbers();
    MomentumMoments m;
    for (int r = 0; r < state.dim(); ++r) {
        if (!used[r])
            continue;
        for (int j = 0; j < n; ++j)
            buf[j] = state(j, r);
        fftw_execute(plan);
        for (int j = 0; j < n; ++j) {
            const double w = std::norm(buf[j]);
            m.mean_p += w * k[j];
            m.mean_p2 += w * k[j] * k[j];
        }
    }
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(buffer);
    }
    m.mean_p *= state.dx() / n;
    m.mean_p2 *= state.dx() / n;
    return m;
}

int observable_index(std::string_view name) {
    for (std::size_t i = 0; i < observable_names.size(); ++i)
        if (observable_names[i] == name)
            return static_cast<int>(i);
    throw InputError("unknown observable '" + std::string(name) + "'");
}

ObservableContext::ObservableContext(const Grid& grid, const SimulationConfig& config,
                                     std::shared_ptr<const LocalSpectra> coulomb_spectra)
    : grid_(grid), config_(config), mass_(derive_parameters(config).mass) {
    coulomb_.spectra = coulomb_spectra ? std::move(coulomb_spectra)
                                       : std::make_shared<const LocalSpectra>(grid, config, Gauge::coulomb);
    if (coulomb_.spectra->gauge() != Gauge::coulomb || coulomb_.spectra->points() != grid.size())
        throw ContractError("ObservableContext: Coulomb spectra do not match");
    dipole_.spectra = std::make_shared<const LocalSpectra>(grid, config, Gauge::dipole);
    build_tables(coulomb_);
    build_tables(dipole_);

    pzw_.resize(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        const LocalSpectrum& p = (*coulomb_.spectra)[j];
        if (!p.bare)
            pzw_[j] = build_pzw(config.dims, p.eta);
    }
}

void ObservableContext::build_tables(GaugeTables& tables) {
    const LocalSpectra& s = *tables.spectra;
    const bool dipole = s.gauge() == Gauge::dipole;
    tables.bases.resize(s.points());
    tables.x_plus.resize(s.points());
    int previous = -1;
    for (int j = 0; j < s.points(); ++j) {
        tables.bases[j] = make_dressed_basis(s[j], s.parity_blocks(), s.bare_energies());
        if (s[j].bare) {
            previous = -1;
            continue;
        }
        if (previous >= 0)
            tables.continuity_events += align_phases(tables.bases[j], tables.bases[previous]);
        previous = j;
        tables.x_plus[j] = positive_frequency_part(tables.bases[j], field_quadrature(s.dims(), dipole, s[j].eta));
    }
}

const LocalSpectra& ObservableContext::spectra(Gauge gauge) const {
    return gauge == Gauge::coulomb ? *coulomb_.spectra : *dipole_.spectra;
}

const DressedBasis& ObservableContext::dressed_basis(Gauge gauge, int j) const {
    return (gauge == Gauge::coulomb ? coulomb_ : dipole_).bases.at(j);
}

int ObservableContext::continuity_events(Gauge gauge) const {
    return (gauge == Gauge::coulomb ? coulomb_ : dipole_).continuity_events;
}

void ObservableContext::require_gauge(const WavepacketState& state, Gauge gauge, const char* what) const {
    if (state.gauge() != gauge)
        throw ContractError(std::string(what) + ": expected a " + to_string(gauge) + "-gauge state");
    if (state.points() != grid_.size() || state.dim() != config_.dims.dim())
        throw ContractError(std::string(what) + ": state shape does not match the context");
}

double ObservableContext::bare_photon_number(const WavepacketState& state) const {
    require_gauge(state, Gauge::coulomb, "bare_photon_number");
    double s = 0;
    for (int j = 0; j < state.points(); ++j)
        for (int r = 0; r < state.dim(); ++r)
            s += (r / 2) * std::norm(state(j, r));
    return s * state.dx();
}

WavepacketState ObservableContext::to_dipole(const WavepacketState& state) const {
    require_gauge(state, Gauge::coulomb, "to_dipole");
    WavepacketState out = state;
    out.set_gauge(Gauge::dipole);
    for (int j = 0; j < state.points(); ++j)
        if (pzw_[j].size() > 0)
            out.at(j) = pzw_[j] * state.at(j);
    return out;
}

double ObservableContext::bare_photon_number_dipole(const WavepacketState& state) const {
    const WavepacketState d = to_dipole(state);
    double s = 0;
    for (int j = 0; j < d.points(); ++j)
        for (int r = 0; r < d.dim(); ++r)
            s += (r / 2) * std::norm(d(j, r));
    return s * d.dx();
}

double ObservableContext::transformed_photon_number_dipole(const WavepacketState& state) const {
    const WavepacketState d = to_dipole(state);
    const LadderPair ladder = build_ladder(config_.dims);
    const Operator sx = fock_spin(Operator::Identity(config_.dims.fock_levels(), config_.dims.fock_levels()), sigma_x());
    double s = 0;
    for (int j = 0; j < d.points(); ++j) {
        const double eta = (*coulomb_.spectra)[j].eta;
        const StateVector v = ladder.a * d.at(j) + (I * eta) * (sx * d.at(j));
        s += v.squaredNorm();
    }
    return s * d.dx();
}

double ObservableContext::physical_photon_number(const WavepacketState& state, const GaugeTables& tables) const {
    double s = 0;
    for (int j = 0; j < state.points(); ++j) {
        const auto psi = state.at(j);
        if (tables.x_plus[j].size() == 0) {
            for (int r = 0; r < state.dim(); ++r)
                s += (r / 2) * std::norm(psi[r]);
            continue;
        }
        s += (tables.x_plus[j] * psi).squaredNorm();
    }
    return s * state.dx();
}

double ObservableContext::physical_photon_number(const WavepacketState& state) const {
    if (state.points() != grid_.size() || state.dim() != config_.dims.dim())
        throw ContractError("physical_photon_number: state shape does not match the context");
    return physical_photon_number(state, state.gauge() == Gauge::coulomb ? coulomb_ : dipole_);
}

std::vector<double> ObservableContext::population_density(const WavepacketState& state,
                                                          const BareLabel& label) const {
    const int r = config_.dims.index(label);
    std::vector<double> density(state.points());
    for (int j = 0; j < state.points(); ++j)
        density[j] = std::norm(state(j, r));
    return density;
}

double ObservableContext::population(const WavepacketState& state, const BareLabel& label) const {
    const std::vector<double> d = population_density(state, label);
    return std::accumulate(d.begin(), d.end(), 0.0) * state.dx();
}

double ObservableContext::mean_momentum(const WavepacketState& state) const {
    return momentum_moments(state, grid_).mean_p / config_.k0;
}

double ObservableContext::mean_position(const WavepacketState& state) const {
    double s = 0;
    for (int j = 0; j < state.points(); ++j)
        s += grid_.x(j) * state.at(j).squaredNorm();
    return s * state.dx();
}

double ObservableContext::kinetic_energy(const WavepacketState& state) const {
    return momentum_moments(state, grid_).mean_p2 / (2.0 * mass_);
}

double ObservableContext::total_energy(const WavepacketState& state) const {
    require_gauge(state, Gauge::coulomb, "total_energy");
    return kinetic_energy(state) + coulomb_.spectra->expectation(state);
}

EntropyResult ObservableContext::entanglement_entropy(const WavepacketState& state, int m_cut,
                                                      EntropyLevels levels) const {
    return entropy_of(reduced_density_matrix(state), spectra(state.gauge()).bare_energies(), m_cut, levels);
}

double ObservableContext::boundary_probability(const WavepacketState& state) const {
    const double margin = (grid_.x_max() - grid_.x_min()) / 16.0;
    double s = 0;
    for (int j = 0; j < state.points(); ++j) {
        const double x = grid_.x(j);
        if (x < grid_.x_min() + margin || x > grid_.x_max() - margin)
            s += state.at(j).squaredNorm();
    }
    return s * state.dx();
}

TimeSeriesRecord ObservableContext::measure(const WavepacketState& state, long step, double t) const {
    require_gauge(state, Gauge::coulomb, "measure");
    TimeSeriesRecord rec;
    rec.step = step;
    rec.t = t;
    const MomentumMoments mom = momentum_moments(state, grid_);
    const WavepacketState dipole = to_dipole(state);
    auto set = [&](std::string_view name, double v) { rec.values[observable_index(name)] = v; };

    set("norm", state.norm_squared());
    const double kinetic = mom.mean_p2 / (2.0 * mass_);
    set("energy", kinetic + coulomb_.spectra->expectation(state));
    set("mean_x", mean_position(state));
    set("mean_p", mom.mean_p / config_.k0);
    set("kinetic_energy", kinetic);
    set("bare_photons", bare_photon_number(state));
    double nd = 0;
    for (int j = 0; j < dipole.points(); ++j)
        for (int r = 0; r < dipole.dim(); ++r)
            nd += (r / 2) * std::norm(dipole(j, r));
    set("bare_photons_dipole", nd * dipole.dx());
    set("transformed_photons_dipole", transformed_photon_number_dipole(state));
    set("physical_photons", physical_photon_number(state, coulomb_));
    set("physical_photons_dipole", physical_photon_number(dipole, dipole_));
    set("entropy", entanglement_entropy(state, config_.entropy_cut, config_.entropy_levels).entropy);
    set("pop_g0", population(state, {Spin::g, 0}));
    set("pop_e1", population(state, {Spin::e, 1}));
    set("pop_g2", population(state, {Spin::g, 2}));
    set("pop_e3", population(state, {Spin::e, 3}));
    set("boundary_probability", boundary_probability(state));
    return rec;
}

} // namespace flyatom
