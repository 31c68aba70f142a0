#include "rotordyn/assembly.hpp"

#include <array>

#include "rotordyn/elements.hpp"
#include "rotordyn/errors.hpp"

namespace rotordyn {

namespace {

DofMap build_dof_map(const RotorModel& model) {
    DofMap map;
    map.n_nodes = model.node_count();
    map.column.assign(static_cast<size_t>(map.n_nodes) * 4, 0);
    for (const DofIndex& dof : model.constraints)
        map.column[static_cast<size_t>(dof.node) * 4 + static_cast<size_t>(dof.direction)] = -1;
    for (int node = 0; node < map.n_nodes; ++node) {
        for (int d = 0; d < 4; ++d) {
            const size_t slot = static_cast<size_t>(node) * 4 + static_cast<size_t>(d);
            if (map.column[slot] < 0) continue;
            map.column[slot] = map.active_count();
            map.dofs.push_back({node, static_cast<Direction>(d)});
        }
    }
    return map;
}

// Scatter-add of an element block into the constrained global matrix.
// Rows/columns of constrained DOFs are dropped, which is exact elimination
// for homogeneous constraints.
template <typename Block>
void scatter(Eigen::MatrixXd& global, const Block& block, const std::vector<int>& slots) {
    const int m = static_cast<int>(slots.size());
    for (int a = 0; a < m; ++a) {
        if (slots[a] < 0) continue;
        for (int b = 0; b < m; ++b) {
            if (slots[b] < 0) continue;
            global(slots[a], slots[b]) += block(a, b);
        }
    }
}

}  // namespace

Eigen::VectorXd AssembledSystem::node_weights() const {
    Eigen::VectorXd weights = Eigen::VectorXd::Zero(dof_map.n_nodes);
    for (int node = 0; node < dof_map.n_nodes; ++node) {
        double sum = 0.0;
        for (Direction d : {Direction::Y, Direction::Z}) {
            const int col = dof_map.column_of({node, d});
            if (col >= 0) sum += m(col, col);
        }
        weights[node] = 0.5 * sum;
    }
    return weights;
}

AssembledSystem assemble(const RotorModel& model, double spin_speed) {
    const ValidationReport report = validate_model(model);
    if (!report.ok()) throw ModelError("invalid model: " + report.joined_errors());

    AssembledSystem sys;
    sys.dof_map = build_dof_map(model);
    sys.spin_speed = spin_speed;
    const int n = sys.dof_map.active_count();
    if (n == 0) throw ModelError("all DOFs constrained; nothing to assemble");

    sys.m = Eigen::MatrixXd::Zero(n, n);
    sys.c_damp = Eigen::MatrixXd::Zero(n, n);
    sys.g_unit = Eigen::MatrixXd::Zero(n, n);
    sys.k_elastic = Eigen::MatrixXd::Zero(n, n);
    sys.k_geo_unit = Eigen::MatrixXd::Zero(n, n);

    auto node_slots = [&](int node) {
        std::array<int, 4> s;
        for (int d = 0; d < 4; ++d)
            s[static_cast<size_t>(d)] = sys.dof_map.column[static_cast<size_t>(node) * 4 + static_cast<size_t>(d)];
        return s;
    };

    for (const Segment& seg : model.segments) {
        const double length = model.node_x[seg.end_node] - model.node_x[seg.start_node];
        const ElementMatrices el = shaft_element_matrices(
            length, seg.outer_diameter, seg.inner_diameter, model.materials.at(seg.material));
        std::vector<int> slots;
        slots.reserve(8);
        for (int node : {seg.start_node, seg.end_node})
            for (int s : node_slots(node)) slots.push_back(s);
        scatter(sys.m, el.m, slots);
        scatter(sys.g_unit, el.g_unit, slots);
        scatter(sys.k_elastic, el.k, slots);
        scatter(sys.k_geo_unit, el.k_geo_unit, slots);
    }

    for (const Disk& disk : model.disks) {
        const DiskMatrices d = disk_matrices(disk);
        const auto s4 = node_slots(disk.node);
        const std::vector<int> slots(s4.begin(), s4.end());
        scatter(sys.m, d.mass, slots);
        scatter(sys.g_unit, d.g_unit, slots);
    }

    for (const Bearing& bearing : model.bearings) {
        const BearingMatrices b = bearing_matrices(bearing);
        const auto s4 = node_slots(bearing.node);
        const std::vector<int> slots(s4.begin(), s4.end());
        scatter(sys.k_elastic, b.stiffness, slots);
        scatter(sys.c_damp, b.damping, slots);
    }

    sys.axial_force = model.thermal ? thermal_axial_force(model, *model.thermal) : 0.0;
    return sys;
}

AssembledSystem assemble(const RotorModel& model, double spin_speed,
                         const std::optional<ThermalLoad>& thermal_override) {
    RotorModel copy = model;
    copy.thermal = thermal_override;
    return assemble(copy, spin_speed);
}

}  // namespace rotordyn
