#pragma once

// Measured quantities of a WavepacketState.
//
// The physical (emittable) photon number uses the positive-frequency part of
// the field quadrature in the local eigenbasis at each grid point:
//     X+_j = sum_{l < k} <l|F|k> |l><k|,   <X- X+> = sum_j |X+_j psi_j|^2 dx,
// with F = i(a - a^dag) in the Coulomb gauge and its PZW image in the dipole
// gauge. Outside the cavity X- X+ reduces to a^dag a.

#include "flyatom/local_spectrum.hpp"

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace flyatom {

/// Local eigenstates sorted by increasing energy; columns of `states` are in
/// bare-basis coordinates. Exact ties are ordered by comparing component
/// magnitudes lexicographically, larger first.
struct DressedBasis {
    Eigen::VectorXd energies;
    Operator states;
};

DressedBasis make_dressed_basis(const LocalSpectrum& spectrum, const ParityBlocks& blocks,
                                const Eigen::VectorXd& bare_energies);

/// Rotates the phase of each column of `basis` so its overlap with the same
/// column of `reference` is real and positive. Columns whose overlap magnitude
/// falls below 0.5 are left in their own convention and counted.
int align_phases(DressedBasis& basis, const DressedBasis& reference);

/// sum_{l < k} <l|F|k> |l><k| in bare-basis coordinates.
Operator positive_frequency_part(const DressedBasis& basis, const Operator& field);

/// rho_R = sum_j psi_j psi_j^dag dx.
struct ReducedDensityMatrix {
    Operator rho;
    double trace() const { return rho.trace().real(); }
};

ReducedDensityMatrix reduced_density_matrix(const WavepacketState& state);

struct EntropyResult {
    double entropy = 0;
    double retained_trace = 1; ///< trace of rho_R inside the kept levels, before renormalizing
    bool low_trace_warning = false;
    std::vector<int> levels;
};

/// -sum lambda log_m lambda of rho_R projected on m levels and renormalized.
/// Levels are ranked by bare energy, ties by basis index.
EntropyResult entropy_of(const ReducedDensityMatrix& rho, const Eigen::VectorXd& bare_energies, int m_cut,
                         EntropyLevels levels = EntropyLevels::parity_sector);

/// Von Neumann entropy in base m of a density matrix (eigenvalues clamped at 0).
double von_neumann_entropy(const Operator& rho, int base);

struct MomentumMoments {
    double mean_p = 0;
    double mean_p2 = 0;
};

/// <p>, <p^2> from the discrete-Fourier representation of the state.
MomentumMoments momentum_moments(const WavepacketState& state, const Grid& grid);

/// Column names of a time-series record, in output order.
inline constexpr std::array<std::string_view, 16> observable_names = {
    "norm",
    "energy",
    "mean_x",
    "mean_p",
    "kinetic_energy",
    "bare_photons",
    "bare_photons_dipole",
    "transformed_photons_dipole",
    "physical_photons",
    "physical_photons_dipole",
    "entropy",
    "pop_g0",
    "pop_e1",
    "pop_g2",
    "pop_e3",
    "boundary_probability",
};

/// Looks up a column; throws InputError for unknown names.
int observable_index(std::string_view name);

/// Per-output-time observable values. `t` is in units of tau0, momenta in units of k0.
struct TimeSeriesRecord {
    long step = 0;
    double t = 0;
    std::array<double, observable_names.size()> values{};

    double operator[](std::string_view name) const { return values[observable_index(name)]; }
};

/// Precomputed per-point tables (local spectra in both gauges, PZW unitaries,
/// positive-frequency field operators) shared by all observables of one grid
/// and parameter set. Immutable after construction.
class ObservableContext {
public:
    ObservableContext(const Grid& grid, const SimulationConfig& config,
                      std::shared_ptr<const LocalSpectra> coulomb_spectra = nullptr);

    const Grid& grid() const { return grid_; }
    const SimulationConfig& config() const { return config_; }
    const LocalSpectra& spectra(Gauge gauge) const;
    const DressedBasis& dressed_basis(Gauge gauge, int j) const;

    /// Phase/ordering discontinuities met while aligning neighbouring dressed bases.
    int continuity_events(Gauge gauge) const;

    /// <a^dag a> of a Coulomb-gauge state.
    double bare_photon_number(const WavepacketState& state) const;

    /// Bare photon number of the same physical state in the dipole-gauge representation,
    /// <T psi| a^dag a |T psi>.
    double bare_photon_number_dipole(const WavepacketState& state) const;

    /// <a'^dag a'>_d with a' = T a T^dag, evaluated on the dipole-gauge state T psi.
    double transformed_photon_number_dipole(const WavepacketState& state) const;

    /// <X- X+> in the state's own gauge representation.
    double physical_photon_number(const WavepacketState& state) const;

    /// Per-point PZW rotation psi_j -> T(eta(x_j)) psi_j.
    WavepacketState to_dipole(const WavepacketState& state) const;

    std::vector<double> population_density(const WavepacketState& state, const BareLabel& label) const;
    double population(const WavepacketState& state, const BareLabel& label) const;

    /// <p> / k0.
    double mean_momentum(const WavepacketState& state) const;
    double mean_position(const WavepacketState& state) const;
    double kinetic_energy(const WavepacketState& state) const;
    /// <p^2/2m + H_R^(c)> of a Coulomb-gauge state.
    double total_energy(const WavepacketState& state) const;

    EntropyResult entanglement_entropy(const WavepacketState& state, int m_cut = 4,
                                       EntropyLevels levels = EntropyLevels::parity_sector) const;

    /// Probability within 1/16 of the domain width of either boundary.
    double boundary_probability(const WavepacketState& state) const;

    TimeSeriesRecord measure(const WavepacketState& state, long step, double t) const;

private:
    struct GaugeTables {
        std::shared_ptr<const LocalSpectra> spectra;
        std::vector<DressedBasis> bases;
        std::vector<Operator> x_plus; ///< empty matrix at bare points
        int continuity_events = 0;
    };

    void build_tables(GaugeTables& tables);
    double physical_photon_number(const WavepacketState& state, const GaugeTables& tables) const;
    void require_gauge(const WavepacketState& state, Gauge gauge, const char* what) const;

    Grid grid_;
    SimulationConfig config_;
    double mass_;
    GaugeTables coulomb_;
    GaugeTables dipole_;
    std::vector<Operator> pzw_; ///< per point; empty at bare points
};

} // namespace flyatom
