#pragma once

// Truncated two-level-atom x single-mode Fock space.
//
// Basis ordering: |s, n> with s in {g, e} and n in 0..n_phot, flattened as
//     index = 2 n + (s == e ? 1 : 0)
// so all spin states of a given photon number are adjacent and any lower
// cutoff is a leading block of a higher one. Pauli matrices act on the spin
// factor in (g, e) order: sigma_z = diag(-1, +1), sigma_x |g> = |e>,
// sigma_y |g> = -i |e>.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <string_view>

namespace flyatom {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using SpinMatrix = Eigen::Matrix2cd;

inline constexpr cplx I{0.0, 1.0};

enum class Spin : int { g = 0, e = 1 };

/// A bare basis state |s, n>.
struct BareLabel {
    Spin spin = Spin::g;
    int photons = 0;

    friend bool operator==(const BareLabel&, const BareLabel&) = default;

    /// Parses "g,0", "e1", "|e,1>" and similar.
    static BareLabel parse(std::string_view text);
    std::string str() const;
};

struct HilbertDims {
    int n_phot = 9;
    int n_guard = 10;

    int fock_levels() const { return n_phot + 1; }
    int dim() const { return 2 * (n_phot + 1); }

    /// Dims whose physical cutoff is this object's guard cutoff.
    HilbertDims expanded() const { return {n_phot + n_guard, n_guard}; }

    /// Throws ConfigError unless n_phot >= 3 and n_guard >= 0.
    void validate() const;

    int index(const BareLabel& label) const;
    BareLabel label(int index) const;
};

struct LadderPair {
    Operator a;
    Operator a_dag;
};

/// Fock-only annihilation operator on `levels` number states.
Operator fock_annihilation(int levels);

/// a (x) 1_spin and its adjoint on the full two-level x Fock space.
LadderPair build_ladder(const HilbertDims& dims);

SpinMatrix sigma_x();
SpinMatrix sigma_y();
SpinMatrix sigma_z();

/// Embeds fock (x) spin in the interleaved ordering.
Operator fock_spin(const Operator& fock, const SpinMatrix& spin);

/// Leading dims.dim() x dims.dim() block of an operator built at a higher cutoff.
Operator project(const Operator& op, const HilbertDims& dims);

/// Photon number of each basis index, as a diagonal.
Eigen::VectorXd photon_numbers(const HilbertDims& dims);

/// +1 for |g, even> and |e, odd>, -1 otherwise. Conserved by both Rabi Hamiltonians.
int parity(const BareLabel& label);

} // namespace flyatom
