#include "rotordyn/elements.hpp"

#include <cmath>
#include <numbers>

#include "rotordyn/errors.hpp"

namespace rotordyn {

namespace {

constexpr double kPi = std::numbers::pi;

// Hermite-beam integral blocks on plane-1 coordinates (v1, v1', v2, v2').
// B = int N'' N''^T (bending), T = int N N^T (translation),
// S = int N' N'^T (rotary inertia and geometric stiffness share it).

Matrix4d bending_block(double L) {
    Matrix4d b;
    const double L2 = L * L;
    b << 12.0, 6.0 * L, -12.0, 6.0 * L,
         6.0 * L, 4.0 * L2, -6.0 * L, 2.0 * L2,
         -12.0, -6.0 * L, 12.0, -6.0 * L,
         6.0 * L, 2.0 * L2, -6.0 * L, 4.0 * L2;
    return b / (L * L2);
}

Matrix4d translation_block(double L) {
    Matrix4d t;
    const double L2 = L * L;
    t << 156.0, 22.0 * L, 54.0, -13.0 * L,
         22.0 * L, 4.0 * L2, 13.0 * L, -3.0 * L2,
         54.0, 13.0 * L, 156.0, -22.0 * L,
         -13.0 * L, -3.0 * L2, -22.0 * L, 4.0 * L2;
    return t * (L / 420.0);
}

Matrix4d slope_block(double L) {
    Matrix4d s;
    const double L2 = L * L;
    s << 36.0, 3.0 * L, -36.0, 3.0 * L,
         3.0 * L, 4.0 * L2, -3.0 * L, -L2,
         -36.0, -3.0 * L, 36.0, -3.0 * L,
         3.0 * L, -L2, -3.0 * L, 4.0 * L2;
    return s / (30.0 * L);
}

// Plane-2 rotations are theta_y = -w', so plane-2 blocks are D X D with
// D = diag(1, -1, 1, -1) relative to the (w, w') form.
const Eigen::Vector4d kPlane2Sign(1.0, -1.0, 1.0, -1.0);

Matrix4d to_plane2(const Matrix4d& x) {
    return kPlane2Sign.asDiagonal() * x * kPlane2Sign.asDiagonal();
}

// Element DOF order [y1, z1, ty1, tz1, y2, z2, ty2, tz2]:
// plane 1 (y, tz) occupies slots {0, 3, 4, 7}, plane 2 (z, ty) {1, 2, 5, 6}.
constexpr int kPlane1[4] = {0, 3, 4, 7};
constexpr int kPlane2[4] = {1, 2, 5, 6};

void scatter(Matrix8d& target, const Matrix4d& block, const int (&rows)[4], const int (&cols)[4],
             double sign = 1.0) {
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) target(rows[a], cols[b]) += sign * block(a, b);
}

}  // namespace

double section_area(double outer_diameter, double inner_diameter) {
    return kPi / 4.0 * (outer_diameter * outer_diameter - inner_diameter * inner_diameter);
}

double section_moment(double outer_diameter, double inner_diameter) {
    const auto p4 = [](double d) { return d * d * d * d; };
    return kPi / 64.0 * (p4(outer_diameter) - p4(inner_diameter));
}

ElementMatrices shaft_element_matrices(double length, double outer_diameter,
                                       double inner_diameter, const MaterialSpec& material) {
    if (!(length > 0.0)) throw ModelError("shaft element: length must be positive");
    if (!(outer_diameter > inner_diameter) || inner_diameter < 0.0)
        throw ModelError("shaft element: degenerate section (need outer > inner >= 0)");

    const double area = section_area(outer_diameter, inner_diameter);
    const double moment = section_moment(outer_diameter, inner_diameter);
    const double rho = material.density;
    const double ei = material.youngs_modulus * moment;

    const Matrix4d bend = ei * bending_block(length);
    const Matrix4d mass_t = rho * area * translation_block(length);
    const Matrix4d slope = slope_block(length);
    const Matrix4d mass_r = rho * moment * slope;

    ElementMatrices el;
    scatter(el.k, bend, kPlane1, kPlane1);
    scatter(el.k, to_plane2(bend), kPlane2, kPlane2);
    scatter(el.m, mass_t + mass_r, kPlane1, kPlane1);
    scatter(el.m, to_plane2(mass_t + mass_r), kPlane2, kPlane2);
    scatter(el.k_geo_unit, slope, kPlane1, kPlane1);
    scatter(el.k_geo_unit, to_plane2(slope), kPlane2, kPlane2);

    // Distributed polar inertia rho * 2I couples the planes; the sign
    // pattern matches the lumped disk so forward whirl stiffens with spin.
    const double polar = rho * 2.0 * moment;
    const Matrix4d g_pq = polar * slope * kPlane2Sign.asDiagonal();
    const Matrix4d g_qp = polar * kPlane2Sign.asDiagonal() * slope;
    scatter(el.g_unit, g_pq, kPlane1, kPlane2);
    scatter(el.g_unit, g_qp, kPlane2, kPlane1, -1.0);

    return el;
}

DiskMatrices disk_matrices(const Disk& disk) {
    if (!(disk.mass > 0.0) || !(disk.diametral_inertia > 0.0) || !(disk.polar_inertia > 0.0) ||
        disk.polar_inertia > 2.0 * disk.diametral_inertia)
        throw ModelError("disk: non-physical mass or inertias");

    DiskMatrices d;
    d.mass.diagonal() << disk.mass, disk.mass, disk.diametral_inertia, disk.diametral_inertia;
    // Gyroscopic coupling acts on (ty, tz) only; a rigid thin disk has no
    // translational gyroscopic terms.
    d.g_unit(2, 3) = disk.polar_inertia;
    d.g_unit(3, 2) = -disk.polar_inertia;
    return d;
}

BearingMatrices bearing_matrices(const Bearing& bearing) {
    BearingMatrices b;
    b.stiffness.topLeftCorner<2, 2>() = bearing.stiffness;
    b.damping.topLeftCorner<2, 2>() = bearing.damping;
    return b;
}

double thermal_axial_force(const MaterialSpec& material, double area, const ThermalLoad& load) {
    if (load.mode == ThermalMode::PrescribedForce) return load.prescribed_force;
    return -material.youngs_modulus * area * material.thermal_expansion * load.delta_t;
}

double thermal_axial_force(const RotorModel& model, const ThermalLoad& load) {
    if (load.mode == ThermalMode::PrescribedForce) return load.prescribed_force;
    double expansion = 0.0;   // sum alpha_i L_i
    double compliance = 0.0;  // sum L_i / (E_i A_i)
    for (const Segment& seg : model.segments) {
        const double length = model.node_x[seg.end_node] - model.node_x[seg.start_node];
        const MaterialSpec& mat = model.materials.at(seg.material);
        expansion += mat.thermal_expansion * length;
        compliance += length / (mat.youngs_modulus * section_area(seg.outer_diameter, seg.inner_diameter));
    }
    if (compliance == 0.0) return 0.0;
    return -load.delta_t * expansion / compliance;
}

}  // namespace rotordyn
