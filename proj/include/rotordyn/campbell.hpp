#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rotordyn/modal.hpp"

namespace rotordyn {

/// One branch sample at a grid speed.
struct BranchPoint {
    std::complex<double> s;
    double omega = 0.0;  // rad/s
    double zeta = 0.0;
    Whirl whirl = Whirl::PlanarMixed;
    double mac = 1.0;    // tracking confidence vs the previous grid speed
};

/// A mode tracked across the speed grid. Points cover the contiguous index
/// range [start_index, start_index + points.size()); a branch that loses
/// track before the last grid speed is marked truncated.
struct Branch {
    int id = 0;
    int start_index = 0;
    bool truncated = false;
    std::vector<BranchPoint> points;
    std::vector<Eigen::VectorXcd> shapes;  // right displacement partitions, per point

    bool covers(int speed_index) const {
        return speed_index >= start_index &&
               speed_index < start_index + static_cast<int>(points.size());
    }
    const BranchPoint& at(int speed_index) const {
        return points[static_cast<size_t>(speed_index - start_index)];
    }
};

struct CampbellData {
    std::vector<double> speeds;  // rad/s, ascending
    std::vector<Branch> branches;
    std::string thermal_label;
    std::vector<std::string> warnings;
};

/// Tracking threshold: below this MAC a branch truncates with a warning.
inline constexpr double kTrackingMacThreshold = 0.6;

/// Assembles and eigensolves at each grid speed, then tracks branches by
/// greedy highest-MAC matching on right-eigenvector displacement
/// partitions, tie-broken by smallest frequency jump. Branch identity is
/// seeded at the second grid point and back-propagated to the first, so
/// degenerate zero-speed pairs inherit their labels from the split modes.
CampbellData sweep(const RotorModel& model, const std::vector<double>& speeds,
                   const std::optional<ThermalLoad>& thermal);

/// Synchronous (or order s_e) excitation-line crossing.
struct CriticalSpeed {
    double speed = 0.0;        // rad/s
    int branch_id = 0;
    double excitation_order = 1.0;
    double residual = 0.0;     // |omega_branch(speed) - order * speed|, rad/s
};

/// Fresh eigensolve at an arbitrary speed, used to refine crossings.
using SpeedResolver = std::function<ModalSolution(double speed)>;

SpeedResolver make_speed_resolver(const RotorModel& model,
                                  const std::optional<ThermalLoad>& thermal);

/// Finds sign changes of g(speed) = omega_branch(speed) - order * speed
/// between grid points and refines each bracket by bisection with fresh
/// eigensolves until the relative width is <= 1e-3 and the residual bound
/// |residual| <= 1e-3 * order * speed holds. Crossings sorted by speed.
std::vector<CriticalSpeed> find_critical_speeds(const CampbellData& campbell,
                                                double excitation_order,
                                                const SpeedResolver& resolver);

}  // namespace rotordyn
