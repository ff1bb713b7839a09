#include "flyatom/hilbert.hpp"

#include "flyatom/errors.hpp"

#include <cctype>
#include <cmath>

namespace flyatom {

BareLabel BareLabel::parse(std::string_view text) {
    std::string compact;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '|' && c != '>' && c != ',' &&
            c != '<')
            compact.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (compact.size() < 2 || (compact[0] != 'g' && compact[0] != 'e'))
        throw InputError("unknown bare label '" + std::string(text) + "' (expected e.g. g,0 or e,1)");
    int n = 0;
    for (std::size_t i = 1; i < compact.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(compact[i])))
            throw InputError("unknown bare label '" + std::string(text) + "'");
        n = 10 * n + (compact[i] - '0');
    }
    return {compact[0] == 'g' ? Spin::g : Spin::e, n};
}

std::string BareLabel::str() const {
    return std::string(spin == Spin::g ? "g" : "e") + "," + std::to_string(photons);
}

void HilbertDims::validate() const {
    if (n_phot < 3)
        throw ConfigError("n_phot must be >= 3 (got " + std::to_string(n_phot) + ")");
    if (n_guard < 0)
        throw ConfigError("n_guard must be >= 0 (got " + std::to_string(n_guard) + ")");
}

int HilbertDims::index(const BareLabel& label) const {
    if (label.photons < 0 || label.photons > n_phot)
        throw InputError("bare label " + label.str() + " outside Fock cutoff n_phot=" +
                         std::to_string(n_phot));
    return 2 * label.photons + static_cast<int>(label.spin);
}

BareLabel HilbertDims::label(int index) const {
    return {index % 2 == 0 ? Spin::g : Spin::e, index / 2};
}

Operator fock_annihilation(int levels) {
    Operator a = Operator::Zero(levels, levels);
    for (int n = 1; n < levels; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

LadderPair build_ladder(const HilbertDims& dims) {
    dims.validate();
    // Built at the guard cutoff; a only lowers, so the leading block is exact.
    const HilbertDims big = dims.expanded();
    Operator a = project(fock_spin(fock_annihilation(big.fock_levels()), SpinMatrix::Identity()), dims);
    Operator a_dag = a.adjoint();
    return {std::move(a), std::move(a_dag)};
}

SpinMatrix sigma_x() {
    SpinMatrix s;
    s << 0, 1, 1, 0;
    return s;
}

SpinMatrix sigma_y() {
    SpinMatrix s;
    s << 0, I, -I, 0;
    return s;
}

SpinMatrix sigma_z() {
    SpinMatrix s;
    s << -1, 0, 0, 1;
    return s;
}

Operator fock_spin(const Operator& fock, const SpinMatrix& spin) {
    const Eigen::Index n = fock.rows();
    Operator out = Operator::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const cplx f = fock(i, j);
            if (f == cplx{})
                continue;
            out.block<2, 2>(2 * i, 2 * j) = f * spin;
        }
    return out;
}

Operator project(const Operator& op, const HilbertDims& dims) {
    const int d = dims.dim();
    if (op.rows() < d || op.cols() < d)
        throw ContractError("cannot project a " + std::to_string(op.rows()) + "-dim operator to " +
                            std::to_string(d));
    return op.topLeftCorner(d, d);
}

Eigen::VectorXd photon_numbers(const HilbertDims& dims) {
    Eigen::VectorXd n(dims.dim());
    for (int i = 0; i < dims.dim(); ++i)
        n[i] = i / 2;
    return n;
}

int parity(const BareLabel& label) {
    const int s = label.spin == Spin::g ? 0 : 1;
    return ((label.photons + s) % 2 == 0) ? 1 : -1;
}

} // namespace flyatom
