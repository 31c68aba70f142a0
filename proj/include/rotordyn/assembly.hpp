#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "rotordyn/model.hpp"

namespace rotordyn {

/// Maps (node, direction) to columns of the constrained global system.
struct DofMap {
    int n_nodes = 0;
    std::vector<int> column;        // 4*n_nodes entries; -1 where constrained
    std::vector<DofIndex> dofs;     // active column -> DofIndex

    int active_count() const { return static_cast<int>(dofs.size()); }

    /// Column of a DOF, or -1 if it is constrained.
    int column_of(const DofIndex& dof) const {
        return column[static_cast<size_t>(dof.node) * 4 + static_cast<size_t>(dof.direction)];
    }
};

/// Constrained global matrices of the rotating equations of motion
///   M qdd + (C + spin G) qd + (K_elastic + N K_geo) q = F.
/// M is symmetric positive definite, K_elastic symmetric for symmetric
/// bearings, G skew-symmetric; C + spin G is generally non-symmetric.
struct AssembledSystem {
    DofMap dof_map;
    Eigen::MatrixXd m;            // mass
    Eigen::MatrixXd c_damp;       // bearing damping
    Eigen::MatrixXd g_unit;       // gyroscopic per unit spin speed
    Eigen::MatrixXd k_elastic;    // elastic stiffness
    Eigen::MatrixXd k_geo_unit;   // geometric stiffness per unit axial force
    double axial_force = 0.0;     // N, signed, tension positive
    double spin_speed = 0.0;      // rad/s

    int n() const { return static_cast<int>(m.rows()); }

    Eigen::MatrixXd c_total() const { return c_damp + spin_speed * g_unit; }
    Eigen::MatrixXd k_effective() const { return k_elastic + axial_force * k_geo_unit; }

    /// Lumped translational mass per node (mean of the active y/z mass
    /// diagonal), used as default whirl-classification weights.
    Eigen::VectorXd node_weights() const;
};

/// Assembles the constrained global system at a given spin speed by
/// standard scatter-add over elements in model order, then exact
/// row/column elimination of the constrained DOFs. The axial force is
/// computed from the model's thermal load (0 when absent).
/// Throws ModelError if validate_model reports errors or no DOF remains.
AssembledSystem assemble(const RotorModel& model, double spin_speed);

/// Same, with the model's thermal load replaced (or cleared) first.
AssembledSystem assemble(const RotorModel& model, double spin_speed,
                         const std::optional<ThermalLoad>& thermal_override);

}  // namespace rotordyn
