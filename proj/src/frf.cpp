#include "rotordyn/frf.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "rotordyn/errors.hpp"

namespace rotordyn {

namespace {

using Complex = std::complex<double>;

constexpr double kPoleHitTol = 1e-12;

void check_grid(const std::vector<double>& omega) {
    if (omega.empty()) throw ModelError("frf: empty frequency grid");
    for (size_t i = 0; i + 1 < omega.size(); ++i)
        if (!(omega[i] < omega[i + 1])) throw ModelError("frf: frequency grid must be ascending");
}

// Reject grid points that coincide with an (effectively undamped) pole;
// the synthesis would divide by ~0 there.
void check_poles(const ModalSolution& modal, const std::vector<double>& omega,
                 ZeroModePolicy zero_modes) {
    for (const Mode& mode : modal.modes) {
        if (mode.zero_mode && zero_modes == ZeroModePolicy::Exclude) continue;
        for (double w : omega) {
            const double gap = std::abs(Complex(0.0, w) - mode.s);
            if (gap <= kPoleHitTol * std::max(1.0, std::max(w, std::abs(mode.s)))) {
                std::ostringstream out;
                out << "frequency grid hits an undamped pole at " << w << " rad/s";
                throw SolverError(out.str());
            }
        }
    }
}

int resolve_column(const DofMap& dofs, const DofIndex& dof, const char* role) {
    const int col = dofs.column_of(dof);
    if (col < 0) {
        std::ostringstream out;
        out << "frf: " << role << " DOF node:" << dof.node << ":" << direction_name(dof.direction)
            << " is constrained";
        throw ModelError(out.str());
    }
    return col;
}

}  // namespace

const char* frf_method_name(FrfMethod m) {
    switch (m) {
        case FrfMethod::ModalSum11: return "modal";
        case FrfMethod::RealForm13: return "real13";
        case FrfMethod::DirectInversion: return "direct";
    }
    return "?";
}

FrfResult receptance_modal(const ModalSolution& modal, int j, int k,
                           const std::vector<double>& omega, ZeroModePolicy zero_modes) {
    if (!modal.normalized) throw ModelError("receptance_modal requires a normalized modal solution");
    check_grid(omega);
    check_poles(modal, omega, zero_modes);

    FrfResult result;
    result.omega = omega;
    result.j = j;
    result.k = k;
    result.method = FrfMethod::ModalSum11;
    result.h = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(omega.size()));

    for (const Mode& mode : modal.modes) {
        if (mode.zero_mode && zero_modes == ZeroModePolicy::Exclude) continue;
        const Complex residue = mode.psi_right[j] * mode.psi_left[k];
        for (size_t i = 0; i < omega.size(); ++i) {
            const Complex iw(0.0, omega[i]);
            Complex term = residue / (iw - mode.s);
            if (mode.conjugate_pair) term += std::conj(residue) / (iw - std::conj(mode.s));
            result.h[static_cast<Eigen::Index>(i)] += term;
        }
    }
    return result;
}

FrfResult receptance_real_form(const ModalSolution& modal, int j, int k,
                               const std::vector<double>& omega, ZeroModePolicy zero_modes) {
    if (!modal.normalized) throw ModelError("receptance_real_form requires a normalized modal solution");
    check_grid(omega);
    check_poles(modal, omega, zero_modes);

    FrfResult result;
    result.omega = omega;
    result.j = j;
    result.k = k;
    result.method = FrfMethod::RealForm13;
    result.h = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(omega.size()));

    for (const Mode& mode : modal.modes) {
        if (mode.zero_mode && zero_modes == ZeroModePolicy::Exclude) continue;
        const Complex residue = mode.psi_right[j] * mode.psi_left[k];
        const double wr = mode.omega;
        const double zr = mode.zeta;
        const double root = std::sqrt(std::max(0.0, 1.0 - zr * zr));
        // Numerator as printed: the imaginary part carries w_r, not w.
        const Complex numerator(2.0 * wr * (zr * residue.real() - root * residue.imag()),
                                2.0 * wr * residue.real());
        for (size_t i = 0; i < omega.size(); ++i) {
            const double w = omega[i];
            const Complex denominator(wr * wr - w * w, 2.0 * w * wr * zr);
            result.h[static_cast<Eigen::Index>(i)] += numerator / denominator;
        }
    }
    return result;
}

FrfResult receptance_direct(const AssembledSystem& system, int j, int k,
                            const std::vector<double>& omega) {
    check_grid(omega);

    const Eigen::MatrixXcd m = system.m.cast<Complex>();
    const Eigen::MatrixXcd c = system.c_total().cast<Complex>();
    const Eigen::MatrixXcd k_eff = system.k_effective().cast<Complex>();
    const int n = system.n();

    FrfResult result;
    result.omega = omega;
    result.j = j;
    result.k = k;
    result.method = FrfMethod::DirectInversion;
    result.h = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(omega.size()));

    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(n);
    unit[k] = 1.0;
    for (size_t i = 0; i < omega.size(); ++i) {
        const double w = omega[i];
        const Eigen::MatrixXcd dynamic_stiffness = k_eff - w * w * m + Complex(0.0, w) * c;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(dynamic_stiffness);
        const Eigen::VectorXcd diag = lu.matrixLU().diagonal();
        const double dmax = diag.cwiseAbs().maxCoeff();
        const double dmin = diag.cwiseAbs().minCoeff();
        if (dmax == 0.0 || dmin <= 1e-14 * dmax) {
            std::ostringstream out;
            out << "dynamic stiffness singular at " << w << " rad/s";
            throw SolverError(out.str());
        }
        result.h[static_cast<Eigen::Index>(i)] = lu.solve(unit)[j];
    }
    return result;
}

FrfResult receptance_modal(const ModalSolution& modal, const DofMap& dofs, const DofIndex& j,
                           const DofIndex& k, const std::vector<double>& omega,
                           ZeroModePolicy zero_modes) {
    return receptance_modal(modal, resolve_column(dofs, j, "response"),
                            resolve_column(dofs, k, "excitation"), omega, zero_modes);
}

FrfResult receptance_real_form(const ModalSolution& modal, const DofMap& dofs, const DofIndex& j,
                               const DofIndex& k, const std::vector<double>& omega,
                               ZeroModePolicy zero_modes) {
    return receptance_real_form(modal, resolve_column(dofs, j, "response"),
                                resolve_column(dofs, k, "excitation"), omega, zero_modes);
}

FrfResult receptance_direct(const AssembledSystem& system, const DofIndex& j, const DofIndex& k,
                            const std::vector<double>& omega) {
    return receptance_direct(system, resolve_column(system.dof_map, j, "response"),
                             resolve_column(system.dof_map, k, "excitation"), omega);
}

double max_relative_deviation(const FrfResult& a, const FrfResult& b) {
    if (a.h.size() != b.h.size()) throw ModelError("frf deviation: grids differ");
    const double scale = b.h.cwiseAbs().maxCoeff();
    if (scale == 0.0) return a.h.cwiseAbs().maxCoeff() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return (a.h - b.h).cwiseAbs().maxCoeff() / scale;
}

}  // namespace rotordyn
