#pragma once

#include <Eigen/Dense>

#include "rotordyn/model.hpp"

namespace rotordyn {

using Matrix4d = Eigen::Matrix4d;
using Matrix8d = Eigen::Matrix<double, 8, 8>;

/// Element DOF order: [y1, z1, ty1, tz1, y2, z2, ty2, tz2].
/// m and k are symmetric, g_unit is skew-symmetric (element gyroscopic
/// matrix = spin * g_unit), k_geo_unit is symmetric (element geometric
/// stiffness = N * k_geo_unit, tension N > 0 stiffening).
struct ElementMatrices {
    Matrix8d m = Matrix8d::Zero();
    Matrix8d g_unit = Matrix8d::Zero();
    Matrix8d k = Matrix8d::Zero();
    Matrix8d k_geo_unit = Matrix8d::Zero();
};

double section_area(double outer_diameter, double inner_diameter);
double section_moment(double outer_diameter, double inner_diameter);

/// Rotating-shaft element: Euler-Bernoulli bending with rotary inertia
/// (Rayleigh beam), cubic Hermite shape functions in both lateral planes.
/// Mass includes translational (rho A) and rotary (rho I) parts; g_unit
/// derives from the distributed polar inertia (rho 2I per unit length for
/// a circular section); k_geo_unit is the consistent cubic-beam geometric
/// stiffness.
ElementMatrices shaft_element_matrices(double length, double outer_diameter,
                                       double inner_diameter, const MaterialSpec& material);

/// Rigid thin disk lumped at a node, blocks over (y, z, ty, tz).
/// mass = diag(m, m, I_d, I_d); g_unit couples (ty, tz) with magnitude I_p
/// and the skew sign that makes forward whirl stiffen with spin speed.
struct DiskMatrices {
    Matrix4d mass = Matrix4d::Zero();
    Matrix4d g_unit = Matrix4d::Zero();
};

DiskMatrices disk_matrices(const Disk& disk);

/// Bearing blocks over (y, z, ty, tz); rotational rows/columns are zero.
struct BearingMatrices {
    Matrix4d stiffness = Matrix4d::Zero();
    Matrix4d damping = Matrix4d::Zero();
};

BearingMatrices bearing_matrices(const Bearing& bearing);

/// Signed axial force (tension positive) produced by a thermal load on a
/// uniform section. Fully-constrained-axial heating gives N = -E A alpha dT;
/// prescribed-force mode passes the configured force through unchanged.
double thermal_axial_force(const MaterialSpec& material, double area, const ThermalLoad& load);

/// Axial force for a whole (possibly stepped) model: series-spring form
/// N = -dT * sum(alpha_i L_i) / sum(L_i / (E_i A_i)); reduces to
/// -E A alpha dT for a uniform shaft.
double thermal_axial_force(const RotorModel& model, const ThermalLoad& load);

}  // namespace rotordyn
