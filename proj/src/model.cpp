#include "rotordyn/model.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace rotordyn {

const char* direction_name(Direction d) {
    switch (d) {
        case Direction::Y: return "y";
        case Direction::Z: return "z";
        case Direction::ThetaY: return "ty";
        case Direction::ThetaZ: return "tz";
    }
    return "?";
}

std::string ValidationReport::joined_errors() const {
    std::ostringstream out;
    for (size_t i = 0; i < errors.size(); ++i) {
        if (i) out << "; ";
        out << errors[i];
    }
    return out.str();
}

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_material(const std::string& name, const MaterialSpec& mat, ValidationReport& report) {
    if (!(mat.youngs_modulus > 0.0) || !finite(mat.youngs_modulus))
        report.errors.push_back("material '" + name + "': Young's modulus must be strictly positive");
    if (!(mat.density > 0.0) || !finite(mat.density))
        report.errors.push_back("material '" + name + "': density must be strictly positive");
    if (!(mat.thermal_expansion > 0.0) || !finite(mat.thermal_expansion))
        report.errors.push_back("material '" + name + "': thermal expansion must be strictly positive");
}

}  // namespace

ValidationReport validate_model(const RotorModel& model) {
    ValidationReport report;
    const int n_nodes = model.node_count();

    if (n_nodes < 2) report.errors.push_back("at least two nodes required");

    for (int i = 0; i < n_nodes; ++i) {
        if (!finite(model.node_x[i])) {
            report.errors.push_back("node " + std::to_string(i) + ": position must be finite");
        }
    }
    for (int i = 0; i + 1 < n_nodes; ++i) {
        if (!(model.node_x[i] < model.node_x[i + 1])) {
            report.errors.push_back("node positions must be strictly increasing (nodes " +
                                    std::to_string(i) + ", " + std::to_string(i + 1) + ")");
        } else if (model.node_x[i + 1] - model.node_x[i] < 1e-9) {
            report.warnings.push_back("near-zero segment length between nodes " +
                                      std::to_string(i) + " and " + std::to_string(i + 1));
        }
    }

    for (const auto& [name, mat] : model.materials) check_material(name, mat, report);

    auto node_exists = [&](int node) { return node >= 0 && node < n_nodes; };

    for (size_t i = 0; i < model.segments.size(); ++i) {
        const Segment& seg = model.segments[i];
        const std::string tag = "segment " + std::to_string(i);
        if (!node_exists(seg.start_node) || !node_exists(seg.end_node)) {
            report.errors.push_back(tag + ": references a nonexistent node");
            continue;
        }
        if (seg.end_node != seg.start_node + 1)
            report.errors.push_back(tag + ": must span adjacent nodes");
        if (!(seg.outer_diameter > seg.inner_diameter) || !(seg.inner_diameter >= 0.0) ||
            !finite(seg.outer_diameter) || !finite(seg.inner_diameter))
            report.errors.push_back(tag + ": hollow section invalid (need outer > inner >= 0)");
        if (!model.materials.count(seg.material))
            report.errors.push_back(tag + ": unknown material '" + seg.material + "'");
    }

    for (size_t i = 0; i < model.disks.size(); ++i) {
        const Disk& disk = model.disks[i];
        const std::string tag = "disk " + std::to_string(i);
        if (!node_exists(disk.node)) report.errors.push_back(tag + ": references a nonexistent node");
        if (!(disk.mass > 0.0) || !finite(disk.mass))
            report.errors.push_back(tag + ": mass must be strictly positive");
        if (!(disk.diametral_inertia > 0.0) || !(disk.polar_inertia > 0.0))
            report.errors.push_back(tag + ": inertias must be strictly positive");
        else if (disk.polar_inertia > 2.0 * disk.diametral_inertia)
            report.errors.push_back(tag + ": polar inertia exceeds perpendicular-axis bound (I_p <= 2 I_d)");
        else if (disk.polar_inertia == 2.0 * disk.diametral_inertia)
            report.warnings.push_back(tag + ": I_p = 2 I_d exactly (ideal thin disk)");
    }

    std::set<std::pair<int, int>> constrained;
    for (size_t i = 0; i < model.constraints.size(); ++i) {
        const DofIndex& dof = model.constraints[i];
        if (!node_exists(dof.node)) {
            report.errors.push_back("constraint " + std::to_string(i) + ": references a nonexistent node");
            continue;
        }
        if (!constrained.insert({dof.node, static_cast<int>(dof.direction)}).second)
            report.warnings.push_back("constraint " + std::to_string(i) + ": duplicate DOF node:" +
                                      std::to_string(dof.node) + ":" + direction_name(dof.direction));
    }

    for (size_t i = 0; i < model.bearings.size(); ++i) {
        const Bearing& bearing = model.bearings[i];
        const std::string tag = "bearing " + std::to_string(i);
        if (!node_exists(bearing.node)) {
            report.errors.push_back(tag + ": references a nonexistent node");
            continue;
        }
        if (!bearing.stiffness.allFinite() || !bearing.damping.allFinite())
            report.errors.push_back(tag + ": coefficients must be finite");
        // A bearing row on a constrained DOF would be eliminated; report it.
        for (int d = 0; d < 2; ++d) {
            if (constrained.count({bearing.node, d}) &&
                (bearing.stiffness.row(d).cwiseAbs().sum() > 0.0 ||
                 bearing.stiffness.col(d).cwiseAbs().sum() > 0.0 ||
                 bearing.damping.row(d).cwiseAbs().sum() > 0.0 ||
                 bearing.damping.col(d).cwiseAbs().sum() > 0.0)) {
                report.warnings.push_back(tag + ": acts on constrained DOF node:" +
                                          std::to_string(bearing.node) + ":" +
                                          direction_name(static_cast<Direction>(d)) +
                                          "; those rows are discarded by elimination");
            }
        }
    }

    if (model.thermal) {
        if (!finite(model.thermal->delta_t))
            report.errors.push_back("thermal: delta_t must be finite");
        if (!finite(model.thermal->prescribed_force))
            report.errors.push_back("thermal: prescribed force must be finite");
    }

    return report;
}

}  // namespace rotordyn
