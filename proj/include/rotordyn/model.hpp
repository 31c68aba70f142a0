#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rotordyn {

/// Isotropic linear-elastic material. All fields strictly positive.
struct MaterialSpec {
    double youngs_modulus = 0.0;     // Pa
    double density = 0.0;            // kg/m^3
    double thermal_expansion = 0.0;  // 1/K
};

/// Lateral DOF directions at a node. Spin axis is x; lateral DOFs are
/// (y, z) translations and (theta_y, theta_z) rotations, 4 per node.
enum class Direction { Y = 0, Z = 1, ThetaY = 2, ThetaZ = 3 };

const char* direction_name(Direction d);

/// Addresses one lateral DOF of the model.
struct DofIndex {
    int node = 0;
    Direction direction = Direction::Y;

    bool operator==(const DofIndex&) const = default;
};

/// Uniform shaft segment between two adjacent nodes.
struct Segment {
    int start_node = 0;
    int end_node = 0;
    double outer_diameter = 0.0;  // m
    double inner_diameter = 0.0;  // m
    std::string material;
};

/// Rigid thin disk lumped at a node.
struct Disk {
    int node = 0;
    double mass = 0.0;               // kg
    double diametral_inertia = 0.0;  // kg m^2
    double polar_inertia = 0.0;      // kg m^2
};

/// Linear spring-damper support acting on (y, z) translations.
struct Bearing {
    int node = 0;
    Eigen::Matrix2d stiffness = Eigen::Matrix2d::Zero();  // N/m over (y, z)
    Eigen::Matrix2d damping = Eigen::Matrix2d::Zero();    // N s/m over (y, z)
};

enum class ThermalMode {
    FullyConstrainedAxial,  // N = -E A alpha dT (heating an axially fixed shaft compresses it)
    PrescribedForce,        // N = prescribed_force, tension positive
};

/// Uniform temperature rise and how it converts to axial pre-stress.
struct ThermalLoad {
    double delta_t = 0.0;  // K
    ThermalMode mode = ThermalMode::FullyConstrainedAxial;
    double prescribed_force = 0.0;  // N, signed, tension positive
};

/// Geometric/material description of a rotor-bearing system.
struct RotorModel {
    std::string name;
    std::vector<double> node_x;  // axial positions along spin axis, strictly increasing (m)
    std::map<std::string, MaterialSpec> materials;
    std::vector<Segment> segments;
    std::vector<Disk> disks;
    std::vector<Bearing> bearings;
    std::vector<DofIndex> constraints;  // fixed DOFs
    std::optional<ThermalLoad> thermal;

    int node_count() const { return static_cast<int>(node_x.size()); }
};

/// Validation outcome. Errors are data, not exceptions.
struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const { return errors.empty(); }
    std::string joined_errors() const;
};

/// Checks every RotorModel invariant. Pure and deterministic; returns an
/// empty error list iff the model is well-formed. Physically suspect but
/// legal inputs (I_p = 2 I_d exactly, near-zero segment length, bearing
/// rows on constrained DOFs) produce warnings.
ValidationReport validate_model(const RotorModel& model);

}  // namespace rotordyn
