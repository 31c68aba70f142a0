#include "rotordyn/modal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include <lapacke.h>

#include "rotordyn/errors.hpp"
#include "rotordyn/whirl.hpp"

namespace rotordyn {

namespace {

using Complex = std::complex<double>;

constexpr double kPairingFactor = 1e-6;     // conjugate / left-right matching
constexpr double kZeroModeFactor = 1e-6;    // |s| <= factor * max|s| is a zero mode
constexpr double kPartitionTol = 1e-8;      // velocity = s * displacement check
constexpr double kClusterDominance = 1e-9;  // off-diagonal W considered already clean

double pairing_tol(const Complex& s) { return kPairingFactor * std::max(1.0, std::abs(s)); }

std::string fmt_complex(const Complex& s) {
    std::ostringstream out;
    out << s.real() << (s.imag() < 0 ? " - " : " + ") << std::abs(s.imag()) << "i";
    return out.str();
}

struct RawEigen {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  // columns, full 2n state vectors
};

// Dense nonsymmetric eigensolve via LAPACK dgeev (balancing included).
RawEigen dgeev(Eigen::MatrixXd e) {
    const int n = static_cast<int>(e.rows());
    Eigen::VectorXd wr(n), wi(n);
    Eigen::MatrixXd vr(n, n);
    const lapack_int info =
        LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, e.data(), n, wr.data(), wi.data(), nullptr,
                      1, vr.data(), n);
    if (info != 0)
        throw SolverError("eigen iteration failed (dgeev info = " + std::to_string(info) + ")");

    RawEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = Complex(wr[j], wi[j]);
        if (wi[j] > 0.0) {
            out.vectors.col(j) = vr.col(j) + Complex(0.0, 1.0) * vr.col(j + 1);
        } else if (wi[j] < 0.0) {
            out.vectors.col(j) = vr.col(j - 1) - Complex(0.0, 1.0) * vr.col(j);
        } else {
            out.vectors.col(j) = vr.col(j).cast<Complex>();
        }
    }
    return out;
}

// Companion form E = [[0, I], [-M^-1 K, -M^-1 C]]. Since
// s A + B = A (s I - E), eigenpairs of E are exactly the pencil eigenpairs
// of (A, B), right vectors included. The eigenvalue substitution s = gamma mu
// with gamma^2 = ||M^-1 K|| balances the blocks so high-frequency modes of
// stiff FE systems keep clean displacement partitions.
RawEigen companion_eigen(const Eigen::MatrixXd& m, const Eigen::MatrixXd& c,
                         const Eigen::MatrixXd& k) {
    const int n = static_cast<int>(m.rows());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const Eigen::MatrixXd mk = lu.solve(k);
    const Eigen::MatrixXd mc = lu.solve(c);

    double gamma = std::sqrt(mk.cwiseAbs().rowwise().sum().maxCoeff());
    if (!(gamma > 0.0) || !std::isfinite(gamma)) gamma = 1.0;

    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    e.topRightCorner(n, n).setIdentity();
    e.bottomLeftCorner(n, n) = -mk / (gamma * gamma);
    e.bottomRightCorner(n, n) = -mc / gamma;
    RawEigen out = dgeev(std::move(e));

    // Undo the scaling: s = gamma mu, velocity partition = gamma * lower.
    out.values *= gamma;
    out.vectors.bottomRows(n) *= gamma;
    return out;
}

// State vectors must satisfy velocity partition = s * displacement
// partition; reject anything that does not.
void check_partition(const Complex& s, const Eigen::VectorXcd& full, const char* side) {
    const int n = static_cast<int>(full.size()) / 2;
    const Eigen::VectorXcd upper = full.head(n);
    const Eigen::VectorXcd lower = full.tail(n);
    const double denom = std::max(lower.norm(), std::abs(s) * upper.norm());
    if (denom < 1e-14 * full.norm()) return;  // both partitions effectively zero
    const double rel = (lower - s * upper).norm() / denom;
    if (rel > kPartitionTol) {
        std::ostringstream out;
        out << side << " state eigenvector at s = " << fmt_complex(s)
            << " violates the velocity-partition relation (residual " << rel << ")";
        throw SolverError(out.str());
    }
}

Eigen::VectorXcd full_vector(const Eigen::VectorXcd& displacement, const Complex& s) {
    const int n = static_cast<int>(displacement.size());
    Eigen::VectorXcd full(2 * n);
    full.head(n) = displacement;
    full.tail(n) = s * displacement;
    return full;
}

}  // namespace

const char* whirl_name(Whirl w) {
    switch (w) {
        case Whirl::Forward: return "FW";
        case Whirl::Backward: return "BW";
        case Whirl::PlanarMixed: return "planar/mixed";
    }
    return "?";
}

StateSpacePair make_state_space(const Eigen::MatrixXd& m, const Eigen::MatrixXd& c_total,
                                const Eigen::MatrixXd& k_eff) {
    const int n = static_cast<int>(m.rows());
    StateSpacePair pair;
    pair.n = n;
    pair.a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    pair.b = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    pair.a.topLeftCorner(n, n) = c_total;
    pair.a.topRightCorner(n, n) = m;
    pair.a.bottomLeftCorner(n, n) = m;
    pair.b.topLeftCorner(n, n) = k_eff;
    pair.b.bottomRightCorner(n, n) = -m;
    return pair;
}

StateSpacePair linearize(const AssembledSystem& system) {
    return make_state_space(system.m, system.c_total(), system.k_effective());
}

std::pair<double, double> extract_modal_params(Complex s) {
    const double mag = std::abs(s);
    if (mag == 0.0) return {0.0, 0.0};
    return {mag, -s.real() / mag};
}

ModalSolution solve_eigen(const StateSpacePair& pair) {
    const int n = pair.n;
    const Eigen::MatrixXd m = pair.mass();
    const Eigen::MatrixXd c = pair.c_total();
    const Eigen::MatrixXd k = pair.k_eff();

    const RawEigen right = companion_eigen(m, c, k);
    const RawEigen left = companion_eigen(m.transpose(), c.transpose(), k.transpose());

    const int total = 2 * n;
    double scale = 0.0;
    for (int i = 0; i < total; ++i) scale = std::max(scale, std::abs(right.values[i]));

    // Reduce the 2n eigenvalues to conjugate-pair representatives
    // (Im >= 0) plus real singletons.
    std::vector<bool> matched(total, false);
    std::vector<std::pair<int, bool>> stored;  // (column, is conjugate pair)
    for (int i = 0; i < total; ++i) {
        if (matched[i]) continue;
        const Complex s = right.values[i];
        if (2.0 * std::abs(s.imag()) <= pairing_tol(s)) continue;  // real, second pass
        matched[i] = true;
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int j = 0; j < total; ++j) {
            if (matched[j]) continue;
            const double dist = std::abs(right.values[j] - std::conj(s));
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        if (best < 0 || best_dist > pairing_tol(s))
            throw SolverError("unpaired complex eigenvalue s = " + fmt_complex(s) +
                              " (nearest conjugate distance " + std::to_string(best_dist) + ")");
        matched[best] = true;
        stored.push_back({s.imag() >= 0.0 ? i : best, true});
    }
    for (int i = 0; i < total; ++i) {
        if (!matched[i]) stored.push_back({i, false});
    }

    ModalSolution solution;
    solution.n = n;
    solution.modes.reserve(stored.size());
    for (const auto& [col, is_pair] : stored) {
        Mode mode;
        mode.s = right.values[col];
        if (!is_pair) mode.s = Complex(mode.s.real(), 0.0);
        mode.conjugate_pair = is_pair;
        const Eigen::VectorXcd full = right.vectors.col(col);
        check_partition(mode.s, full, "right");
        mode.psi_right = full.head(n);
        mode.zero_mode = std::abs(mode.s) <= kZeroModeFactor * scale;
        if (mode.zero_mode) {
            mode.omega = 0.0;
            mode.zeta = 0.0;
        } else {
            std::tie(mode.omega, mode.zeta) = extract_modal_params(mode.s);
        }
        solution.modes.push_back(std::move(mode));
    }

    std::stable_sort(solution.modes.begin(), solution.modes.end(), [](const Mode& a, const Mode& b) {
        const double ia = std::abs(a.s.imag());
        const double ib = std::abs(b.s.imag());
        if (ia != ib) return ia < ib;
        return a.s.real() < b.s.real();
    });

    // Match left vectors to right eigenvalues by nearest-eigenvalue pairing.
    std::vector<bool> used(total, false);
    for (Mode& mode : solution.modes) {
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int j = 0; j < total; ++j) {
            if (used[j]) continue;
            const double dist = std::abs(left.values[j] - mode.s);
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        if (best < 0 || best_dist > pairing_tol(mode.s))
            throw SolverError("no left eigenvalue matches s = " + fmt_complex(mode.s) +
                              " (nearest distance " + std::to_string(best_dist) + ")");
        used[best] = true;
        const Eigen::VectorXcd full = left.vectors.col(best);
        check_partition(left.values[best], full, "left");
        mode.psi_left = full.head(n);
    }

    return solution;
}

ModalSolution normalize_biorthogonal(ModalSolution modal, const StateSpacePair& pair) {
    const int n = modal.n;
    const int count = static_cast<int>(modal.modes.size());
    if (count == 0) return modal;
    const Eigen::MatrixXcd a = pair.a.cast<Complex>();

    auto w_entry = [&](const Mode& row, const Mode& col) -> Complex {
        // Unconjugated product psiL^T A psiR (bi-orthogonality metric).
        return full_vector(row.psi_left, row.s)
            .cwiseProduct(a * full_vector(col.psi_right, col.s))
            .sum();
    };

    // Group equal eigenvalues (degenerate pairs) into clusters; modes are
    // sorted, so clusters are contiguous.
    int begin = 0;
    while (begin < count) {
        int end = begin + 1;
        while (end < count &&
               std::abs(modal.modes[end].s - modal.modes[begin].s) <= pairing_tol(modal.modes[begin].s))
            ++end;
        const int size = end - begin;

        Eigen::MatrixXcd w(size, size);
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c) w(r, c) = w_entry(modal.modes[begin + r], modal.modes[begin + c]);

        bool diagonal_enough = true;
        for (int r = 0; r < size && diagonal_enough; ++r)
            for (int c = 0; c < size && diagonal_enough; ++c)
                if (r != c && std::abs(w(r, c)) > kClusterDominance * std::sqrt(std::abs(w(r, r)) * std::abs(w(c, c))))
                    diagonal_enough = false;

        if (size == 1 || diagonal_enough) {
            for (int r = 0; r < size; ++r) {
                Mode& mode = modal.modes[begin + r];
                const Complex alpha = w(r, r);
                const double floor =
                    1e-6 * full_vector(mode.psi_left, mode.s).norm() *
                    (a * full_vector(mode.psi_right, mode.s)).norm();
                if (std::abs(alpha) <= floor)
                    throw SolverError("defective or mismatched pair at mode " + std::to_string(begin + r) +
                                      " (s = " + fmt_complex(mode.s) + ")");
                mode.psi_left /= alpha;
            }
        } else {
            // Repeated eigenvalue: rebuild the left basis so the cluster
            // block of psiL^T A psiR becomes the identity.
            Eigen::FullPivLU<Eigen::MatrixXcd> lu(w);
            if (!lu.isInvertible())
                throw SolverError("defective eigenvalue cluster at s = " +
                                  fmt_complex(modal.modes[begin].s));
            Eigen::MatrixXcd lefts(n, size);
            for (int r = 0; r < size; ++r) lefts.col(r) = modal.modes[begin + r].psi_left;
            const Eigen::MatrixXcd mixed = lefts * lu.inverse().transpose();
            for (int r = 0; r < size; ++r) modal.modes[begin + r].psi_left = mixed.col(r);
        }
        begin = end;
    }

    // Full bi-orthogonality residual max |psiL^T A psiR - I| over stored modes.
    Eigen::MatrixXcd full_left(2 * n, count);
    Eigen::MatrixXcd full_right(2 * n, count);
    for (int r = 0; r < count; ++r) {
        full_left.col(r) = full_vector(modal.modes[r].psi_left, modal.modes[r].s);
        full_right.col(r) = full_vector(modal.modes[r].psi_right, modal.modes[r].s);
    }
    const Eigen::MatrixXcd gram = full_left.transpose() * (a * full_right);
    modal.biorthogonality_residual =
        (gram - Eigen::MatrixXcd::Identity(count, count)).cwiseAbs().maxCoeff();

    modal.normalized = true;
    return modal;
}

Eigen::MatrixXd free_response(const ModalSolution& modal, const StateSpacePair& pair,
                              const Eigen::VectorXd& q0, const Eigen::VectorXd& qdot0,
                              const std::vector<double>& times) {
    if (!modal.normalized) throw ModelError("free_response requires a normalized modal solution");
    const int n = modal.n;
    if (q0.size() != n || qdot0.size() != n)
        throw ModelError("free_response: initial state size does not match DOF count");

    Eigen::VectorXd u0(2 * n);
    u0.head(n) = q0;
    u0.tail(n) = qdot0;
    const Eigen::VectorXcd au0 = (pair.a * u0).cast<std::complex<double>>();

    Eigen::MatrixXd history = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(times.size()));
    for (const Mode& mode : modal.modes) {
        const std::complex<double> coeff =
            full_vector(mode.psi_left, mode.s).cwiseProduct(au0).sum();
        const double weight = mode.conjugate_pair ? 2.0 : 1.0;
        for (size_t t = 0; t < times.size(); ++t) {
            const std::complex<double> phase = coeff * std::exp(mode.s * times[t]);
            history.col(static_cast<Eigen::Index>(t)) += weight * (phase * mode.psi_right).real();
        }
    }
    return history;
}

ModalSolution solve_modes(const AssembledSystem& system) {
    const StateSpacePair pair = linearize(system);
    ModalSolution solution = normalize_biorthogonal(solve_eigen(pair), pair);
    solution.spin_speed = system.spin_speed;
    const Eigen::VectorXd weights = system.node_weights();
    for (Mode& mode : solution.modes)
        mode.whirl = classify_whirl(mode.psi_right, system.dof_map, weights);
    return solution;
}

}  // namespace rotordyn
