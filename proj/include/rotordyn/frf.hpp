#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rotordyn/assembly.hpp"
#include "rotordyn/modal.hpp"

namespace rotordyn {

enum class FrfMethod { ModalSum11, RealForm13, DirectInversion };

const char* frf_method_name(FrfMethod m);

enum class ZeroModePolicy { Exclude, Include };

/// Complex cross-receptance H_jk (m/N) over a frequency grid: response at
/// coordinate j per unit force at coordinate k.
struct FrfResult {
    std::vector<double> omega;  // rad/s, ascending
    Eigen::VectorXcd h;
    int j = 0;  // response column
    int k = 0;  // excitation column
    FrfMethod method = FrfMethod::ModalSum11;
};

/// Modal synthesis from bi-orthogonal data:
///   H_jk(w) = sum_r [ G_jk / (iw - s_r) + G*_jk / (iw - s*_r) ]
/// with residues G_jk = psiR_j psiL_k per stored conjugate-pair mode
/// (real eigenvalues contribute a single unconjugated term). Zero modes
/// are excluded unless explicitly included. Conjugate-symmetric in w by
/// construction. Requires a normalized solution.
FrfResult receptance_modal(const ModalSolution& modal, int j, int k,
                           const std::vector<double>& omega,
                           ZeroModePolicy zero_modes = ZeroModePolicy::Exclude);

/// The real/imaginary decomposed synthesis form, evaluated as printed:
///   H_jk(w) = sum_r [ 2 w_r (z_r Re G - sqrt(1-z_r^2) Im G) + i 2 w_r Re G ]
///             / (w_r^2 - w^2 + 2 i w w_r z_r).
/// Kept verbatim for fidelity; its deviation from the modal sum is a run
/// report artifact, not an asserted equivalence.
FrfResult receptance_real_form(const ModalSolution& modal, int j, int k,
                               const std::vector<double>& omega,
                               ZeroModePolicy zero_modes = ZeroModePolicy::Exclude);

/// Direct dynamic-stiffness inversion oracle:
///   H_jk(w) = [K_eff - w^2 M + i w C_total]^-1 entry (j, k),
/// one dense solve per frequency point. Throws SolverError naming the
/// frequency if the dynamic stiffness is singular at a grid point.
FrfResult receptance_direct(const AssembledSystem& system, int j, int k,
                            const std::vector<double>& omega);

/// DofIndex-addressed wrappers; throw ModelError if a DOF is constrained.
FrfResult receptance_modal(const ModalSolution& modal, const DofMap& dofs, const DofIndex& j,
                           const DofIndex& k, const std::vector<double>& omega,
                           ZeroModePolicy zero_modes = ZeroModePolicy::Exclude);
FrfResult receptance_real_form(const ModalSolution& modal, const DofMap& dofs,
                               const DofIndex& j, const DofIndex& k,
                               const std::vector<double>& omega,
                               ZeroModePolicy zero_modes = ZeroModePolicy::Exclude);
FrfResult receptance_direct(const AssembledSystem& system, const DofIndex& j, const DofIndex& k,
                            const std::vector<double>& omega);

/// max_w |h_a - h_b| / max_w |h_b|, the run-report deviation metric.
double max_relative_deviation(const FrfResult& a, const FrfResult& b);

}  // namespace rotordyn
