#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "rotordyn/assembly.hpp"

namespace rotordyn {

/// First-order form  A ud + B u = {F; 0}  of the quadratic problem, with
///   A = [[C_total, M], [M, 0]],  B = [[K_eff, 0], [0, -M]]
/// and state vector u = {q; qd}. s is a generalized eigenvalue of the
/// pencil (s A + B) iff it solves the quadratic problem.
struct StateSpacePair {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    int n = 0;

    Eigen::MatrixXd mass() const { return a.topRightCorner(n, n); }
    Eigen::MatrixXd c_total() const { return a.topLeftCorner(n, n); }
    Eigen::MatrixXd k_eff() const { return b.topLeftCorner(n, n); }
};

StateSpacePair linearize(const AssembledSystem& system);

/// Builds the pair directly from quadratic-problem matrices (test entry).
StateSpacePair make_state_space(const Eigen::MatrixXd& m, const Eigen::MatrixXd& c_total,
                                const Eigen::MatrixXd& k_eff);

enum class Whirl { Forward, Backward, PlanarMixed };

const char* whirl_name(Whirl w);

/// One stored mode: the conjugate-pair representative with Im(s) >= 0
/// (conjugate implied), or a real eigenvalue stored on its own.
struct Mode {
    std::complex<double> s;          // eigenvalue, 1/s
    double omega = 0.0;              // |s|, rad/s (0 for zero modes)
    double zeta = 0.0;               // -Re(s)/|s|
    Eigen::VectorXcd psi_right;      // displacement partition of the right state eigenvector
    Eigen::VectorXcd psi_left;       // displacement partition of the left state eigenvector
    bool conjugate_pair = true;      // false for real eigenvalues
    bool zero_mode = false;          // |s| below the zero threshold
    Whirl whirl = Whirl::PlanarMixed;
};

/// Modes sorted by ascending |Im(s)|, then ascending Re(s). Full state
/// eigenvectors are reconstructed as [psi; s psi].
struct ModalSolution {
    std::vector<Mode> modes;
    int n = 0;
    double spin_speed = 0.0;
    bool normalized = false;
    double biorthogonality_residual = 0.0;  // max |psiL^T A psiR - I| after normalization
};

/// omega_r = |s|, zeta_r = -Re(s)/|s|; (0, 0) for s = 0.
std::pair<double, double> extract_modal_params(std::complex<double> s);

/// Solves the right problem (s A + B) psiR = 0 and the transposed left
/// problem (s A^T + B^T) psiL = 0, reduces the 2n eigenvalues to stored
/// representatives, and matches left vectors to right eigenvalues by
/// nearest-eigenvalue pairing. Velocity partitions are verified to equal
/// s times the displacement partition before they are dropped.
ModalSolution solve_eigen(const StateSpacePair& pair);

/// Rescales left vectors so psiL_r^T A psiR_r = 1 for every stored mode
/// (degenerate clusters are bi-orthogonalized blockwise). Idempotent.
/// Throws SolverError on defective or mismatched pairs.
ModalSolution normalize_biorthogonal(ModalSolution modal, const StateSpacePair& pair);

/// Free response q(t) = sum_r c_r psiR_r e^(s_r t) with coefficients from
/// left-projection of the initial state, c_r = psiL_r^T A u(0). Conjugate
/// pairs are recombined so the result is real. Requires a normalized
/// solution; returns an n x times.size() matrix.
Eigen::MatrixXd free_response(const ModalSolution& modal, const StateSpacePair& pair,
                              const Eigen::VectorXd& q0, const Eigen::VectorXd& qdot0,
                              const std::vector<double>& times);

/// Convenience pipeline: linearize, solve, normalize, classify whirl.
ModalSolution solve_modes(const AssembledSystem& system);

}  // namespace rotordyn
