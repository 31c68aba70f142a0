#include "rotordyn/campbell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rotordyn/errors.hpp"
#include "rotordyn/whirl.hpp"

namespace rotordyn {

namespace {

constexpr double kClusterTolFactor = 1e-6;
constexpr double kCriticalRelWidth = 1e-3;
constexpr int kMaxBisectIterations = 200;

struct SpeedSolve {
    ModalSolution modal;
    Eigen::VectorXd weights;
    DofMap dofs;
};

std::string format_speed(double speed) {
    std::ostringstream out;
    out << speed << " rad/s";
    return out.str();
}

SpeedSolve solve_at(const RotorModel& model, double speed,
                    const std::optional<ThermalLoad>& thermal) {
    const AssembledSystem sys = assemble(model, speed, thermal);
    const StateSpacePair pair = linearize(sys);
    SpeedSolve out;
    try {
        out.modal = solve_eigen(pair);
    } catch (const SolverError& err) {
        throw SolverError("eigensolve failed at speed " + format_speed(speed) + ": " + err.what());
    }
    out.modal.spin_speed = speed;
    out.weights = sys.node_weights();
    out.dofs = sys.dof_map;
    return out;
}

BranchPoint make_point(const Mode& mode, Whirl whirl, double mac_value) {
    BranchPoint p;
    p.s = mode.s;
    p.omega = mode.omega;
    p.zeta = mode.zeta;
    p.whirl = whirl;
    p.mac = mac_value;
    return p;
}

// Greedy highest-MAC assignment between live branches and candidate modes,
// tie-broken by smallest frequency jump, then by branch id / mode index so
// the result is deterministic.
struct Assignment {
    int branch;  // index into live branch list
    int mode;
    double mac_value;
};

std::vector<Assignment> greedy_match(const std::vector<Eigen::VectorXcd>& branch_shapes,
                                     const std::vector<double>& branch_omegas,
                                     const ModalSolution& candidates) {
    const int nb = static_cast<int>(branch_shapes.size());
    const int nm = static_cast<int>(candidates.modes.size());
    Eigen::MatrixXd score(nb, nm);
    for (int b = 0; b < nb; ++b)
        for (int m = 0; m < nm; ++m) score(b, m) = mac(branch_shapes[b], candidates.modes[m].psi_right);

    std::vector<bool> branch_done(nb, false), mode_done(nm, false);
    std::vector<Assignment> out;
    for (int round = 0; round < std::min(nb, nm); ++round) {
        int best_b = -1, best_m = -1;
        double best_mac = -1.0, best_jump = std::numeric_limits<double>::infinity();
        for (int b = 0; b < nb; ++b) {
            if (branch_done[b]) continue;
            for (int m = 0; m < nm; ++m) {
                if (mode_done[m]) continue;
                const double jump = std::abs(candidates.modes[m].omega - branch_omegas[b]);
                if (score(b, m) > best_mac ||
                    (score(b, m) == best_mac && jump < best_jump)) {
                    best_mac = score(b, m);
                    best_jump = jump;
                    best_b = b;
                    best_m = m;
                }
            }
        }
        if (best_b < 0) break;
        branch_done[best_b] = true;
        mode_done[best_m] = true;
        out.push_back({best_b, best_m, best_mac});
    }
    return out;
}

// Least-squares projection of v onto the span of the cluster's
// displacement partitions; the degenerate eigenvalue makes any vector in
// that span an eigenvector, so the backfilled shape follows the branch.
Eigen::VectorXcd project_onto(const Eigen::MatrixXcd& basis, const Eigen::VectorXcd& v) {
    const Eigen::VectorXcd coeffs = basis.colPivHouseholderQr().solve(v);
    return basis * coeffs;
}

}  // namespace

SpeedResolver make_speed_resolver(const RotorModel& model,
                                  const std::optional<ThermalLoad>& thermal) {
    return [model, thermal](double speed) {
        const AssembledSystem sys = assemble(model, speed, thermal);
        ModalSolution modal;
        try {
            modal = solve_eigen(linearize(sys));
        } catch (const SolverError& err) {
            throw SolverError("eigensolve failed at speed " + format_speed(speed) + ": " +
                              err.what());
        }
        modal.spin_speed = speed;
        return modal;
    };
}

CampbellData sweep(const RotorModel& model, const std::vector<double>& speeds,
                   const std::optional<ThermalLoad>& thermal) {
    if (speeds.empty()) throw ModelError("sweep: speed grid is empty");
    for (size_t i = 0; i + 1 < speeds.size(); ++i)
        if (!(speeds[i] < speeds[i + 1])) throw ModelError("sweep: speed grid must be ascending");

    CampbellData data;
    data.speeds = speeds;
    {
        std::ostringstream label;
        if (!thermal) {
            label << "none";
        } else if (thermal->mode == ThermalMode::PrescribedForce) {
            label << "prescribed axial force " << thermal->prescribed_force << " N";
        } else {
            label << "fully constrained axial, dT = " << thermal->delta_t << " K";
        }
        data.thermal_label = label.str();
    }

    const int n_speeds = static_cast<int>(speeds.size());
    std::vector<SpeedSolve> solves;
    solves.reserve(speeds.size());
    for (double speed : speeds) solves.push_back(solve_at(model, speed, thermal));

    auto whirl_of = [&](const Eigen::VectorXcd& shape, int speed_index) {
        const SpeedSolve& solve = solves[static_cast<size_t>(speed_index)];
        return classify_whirl(shape, solve.dofs, solve.weights);
    };

    const int seed_index = n_speeds >= 2 ? 1 : 0;
    const ModalSolution& seed = solves[static_cast<size_t>(seed_index)].modal;
    for (int m = 0; m < static_cast<int>(seed.modes.size()); ++m) {
        Branch branch;
        branch.id = m;
        branch.start_index = seed_index;
        branch.points.push_back(
            make_point(seed.modes[m], whirl_of(seed.modes[m].psi_right, seed_index), 1.0));
        branch.shapes.push_back(seed.modes[m].psi_right);
        data.branches.push_back(std::move(branch));
    }

    // Forward tracking from the seed to the last grid speed.
    for (int i = seed_index + 1; i < n_speeds; ++i) {
        const ModalSolution& candidates = solves[static_cast<size_t>(i)].modal;
        std::vector<int> live;
        std::vector<Eigen::VectorXcd> shapes;
        std::vector<double> omegas;
        for (size_t b = 0; b < data.branches.size(); ++b) {
            const Branch& branch = data.branches[b];
            if (!branch.truncated && branch.covers(i - 1)) {
                live.push_back(static_cast<int>(b));
                shapes.push_back(branch.shapes.back());
                omegas.push_back(branch.points.back().omega);
            }
        }

        std::vector<bool> mode_used(candidates.modes.size(), false);
        std::vector<bool> branch_extended(live.size(), false);
        for (const Assignment& match : greedy_match(shapes, omegas, candidates)) {
            if (match.mac_value < kTrackingMacThreshold) continue;
            Branch& branch = data.branches[static_cast<size_t>(live[static_cast<size_t>(match.branch)])];
            const Mode& mode = candidates.modes[static_cast<size_t>(match.mode)];
            branch.points.push_back(make_point(mode, whirl_of(mode.psi_right, i), match.mac_value));
            branch.shapes.push_back(mode.psi_right);
            mode_used[static_cast<size_t>(match.mode)] = true;
            branch_extended[static_cast<size_t>(match.branch)] = true;
        }
        for (size_t b = 0; b < live.size(); ++b) {
            if (branch_extended[b]) continue;
            Branch& branch = data.branches[static_cast<size_t>(live[b])];
            branch.truncated = true;
            std::ostringstream warn;
            warn << "branch " << branch.id << " lost track at speed " << format_speed(speeds[static_cast<size_t>(i)])
                 << " (best MAC below " << kTrackingMacThreshold << ")";
            data.warnings.push_back(warn.str());
        }
        for (size_t m = 0; m < candidates.modes.size(); ++m) {
            if (mode_used[m]) continue;
            Branch branch;
            branch.id = static_cast<int>(data.branches.size());
            branch.start_index = i;
            branch.points.push_back(
                make_point(candidates.modes[m], whirl_of(candidates.modes[m].psi_right, i), 1.0));
            branch.shapes.push_back(candidates.modes[m].psi_right);
            data.branches.push_back(std::move(branch));
        }
    }

    // Back-propagate branch identity to the first grid point. At zero (or
    // low) speed modes may be degenerate, so each branch is matched to an
    // eigenvalue cluster and receives the projection of its seed shape onto
    // the cluster subspace.
    if (seed_index == 1) {
        const ModalSolution& first = solves[0].modal;
        const int nm = static_cast<int>(first.modes.size());
        std::vector<std::vector<int>> clusters;
        for (int m = 0; m < nm; ++m) {
            const double tol = kClusterTolFactor * std::max(1.0, std::abs(first.modes[static_cast<size_t>(m)].s));
            if (!clusters.empty() &&
                std::abs(first.modes[static_cast<size_t>(m)].s -
                         first.modes[static_cast<size_t>(clusters.back().front())].s) <= tol) {
                clusters.back().push_back(m);
            } else {
                clusters.push_back({m});
            }
        }
        std::vector<int> capacity(clusters.size());
        std::vector<Eigen::MatrixXcd> bases(clusters.size());
        const int n = first.n;
        for (size_t c = 0; c < clusters.size(); ++c) {
            capacity[c] = static_cast<int>(clusters[c].size());
            bases[c].resize(n, capacity[c]);
            for (int j = 0; j < capacity[c]; ++j)
                bases[c].col(j) = first.modes[static_cast<size_t>(clusters[c][static_cast<size_t>(j)])].psi_right;
        }

        for (Branch& branch : data.branches) {
            if (branch.start_index != 1) continue;
            const Eigen::VectorXcd& seed_shape = branch.shapes.front();
            int best_cluster = -1;
            double best_score = -1.0;
            Eigen::VectorXcd best_proj;
            for (size_t c = 0; c < clusters.size(); ++c) {
                if (capacity[c] <= 0) continue;
                Eigen::VectorXcd proj = project_onto(bases[c], seed_shape);
                if (proj.norm() < 1e-12 * seed_shape.norm()) continue;
                const double score = mac(proj, seed_shape);
                if (score > best_score) {
                    best_score = score;
                    best_cluster = static_cast<int>(c);
                    best_proj = std::move(proj);
                }
            }
            if (best_cluster < 0 || best_score < kTrackingMacThreshold) {
                std::ostringstream warn;
                warn << "branch " << branch.id << " could not be back-propagated to speed "
                     << format_speed(speeds[0]);
                data.warnings.push_back(warn.str());
                continue;
            }
            --capacity[static_cast<size_t>(best_cluster)];
            const Mode& rep = first.modes[static_cast<size_t>(clusters[static_cast<size_t>(best_cluster)].front())];
            best_proj /= best_proj.norm();
            branch.points.insert(branch.points.begin(),
                                 make_point(rep, whirl_of(best_proj, 0), best_score));
            branch.shapes.insert(branch.shapes.begin(), best_proj);
            branch.start_index = 0;
        }
    }

    return data;
}

std::vector<CriticalSpeed> find_critical_speeds(const CampbellData& campbell,
                                                double excitation_order,
                                                const SpeedResolver& resolver) {
    if (!(excitation_order > 0.0)) throw ModelError("critical speeds: excitation order must be positive");
    if (campbell.speeds.size() < 2) throw ModelError("critical speeds: need at least two grid speeds");

    std::vector<CriticalSpeed> found;
    for (const Branch& branch : campbell.branches) {
        const int last = branch.start_index + static_cast<int>(branch.points.size()) - 1;
        auto g_at = [&](int idx) {
            return branch.at(idx).omega - excitation_order * campbell.speeds[static_cast<size_t>(idx)];
        };

        for (int i = branch.start_index; i < last; ++i) {
            const double g_lo_grid = g_at(i);
            const double g_hi_grid = g_at(i + 1);
            if (g_hi_grid == 0.0 && campbell.speeds[static_cast<size_t>(i + 1)] > 0.0) {
                found.push_back({campbell.speeds[static_cast<size_t>(i + 1)], branch.id, excitation_order, 0.0});
                continue;
            }
            if (g_lo_grid == 0.0 && i == branch.start_index && campbell.speeds[static_cast<size_t>(i)] > 0.0)
                found.push_back({campbell.speeds[static_cast<size_t>(i)], branch.id, excitation_order, 0.0});
            if (!(g_lo_grid * g_hi_grid < 0.0)) continue;

            double lo = campbell.speeds[static_cast<size_t>(i)];
            double hi = campbell.speeds[static_cast<size_t>(i + 1)];
            double g_lo = g_lo_grid;
            Eigen::VectorXcd shape = branch.shapes[static_cast<size_t>(i - branch.start_index)];
            double omega_ref = branch.at(i).omega;

            double mid = 0.5 * (lo + hi);
            double residual = std::numeric_limits<double>::infinity();
            for (int iter = 0; iter < kMaxBisectIterations; ++iter) {
                mid = 0.5 * (lo + hi);
                const ModalSolution sol = resolver(mid);
                int best = -1;
                double best_mac = -1.0, best_jump = std::numeric_limits<double>::infinity();
                for (int m = 0; m < static_cast<int>(sol.modes.size()); ++m) {
                    const double score = mac(shape, sol.modes[static_cast<size_t>(m)].psi_right);
                    const double jump = std::abs(sol.modes[static_cast<size_t>(m)].omega - omega_ref);
                    if (score > best_mac || (score == best_mac && jump < best_jump)) {
                        best_mac = score;
                        best_jump = jump;
                        best = m;
                    }
                }
                const Mode& mode = sol.modes[static_cast<size_t>(best)];
                const double g_mid = mode.omega - excitation_order * mid;
                residual = std::abs(g_mid);
                if ((g_mid > 0.0) == (g_lo > 0.0)) {
                    lo = mid;
                    g_lo = g_mid;
                    shape = mode.psi_right;
                    omega_ref = mode.omega;
                } else {
                    hi = mid;
                }
                if (hi - lo <= kCriticalRelWidth * mid &&
                    residual <= kCriticalRelWidth * excitation_order * mid)
                    break;
            }
            found.push_back({mid, branch.id, excitation_order, residual});
        }
    }

    std::sort(found.begin(), found.end(),
              [](const CriticalSpeed& a, const CriticalSpeed& b) { return a.speed < b.speed; });
    return found;
}

}  // namespace rotordyn
