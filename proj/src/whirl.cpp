#include "rotordyn/whirl.hpp"

#include <cmath>
#include <complex>

#include "rotordyn/errors.hpp"

namespace rotordyn {

namespace {
// Scale-free planar tolerance: |sum w_n I_n| at or below this fraction of
// the weighted orbit energy means no dominant rotation direction.
constexpr double kPlanarTol = 1e-6;
}  // namespace

Whirl classify_whirl(const Eigen::VectorXcd& displacement, const DofMap& dof_map,
                     const Eigen::VectorXd& node_weights) {
    if (displacement.size() != dof_map.active_count())
        throw ModelError("classify_whirl: mode vector length does not match the DOF map");
    if (node_weights.size() != dof_map.n_nodes)
        throw ModelError("classify_whirl: node weight length does not match the node count");

    double indicator = 0.0;
    double scale = 0.0;
    for (int node = 0; node < dof_map.n_nodes; ++node) {
        const int col_y = dof_map.column_of({node, Direction::Y});
        const int col_z = dof_map.column_of({node, Direction::Z});
        const std::complex<double> uy = col_y >= 0 ? displacement[col_y] : 0.0;
        const std::complex<double> uz = col_z >= 0 ? displacement[col_z] : 0.0;
        const double w = node_weights[node];
        indicator += w * std::imag(uy * std::conj(uz));
        scale += w * 0.5 * (std::norm(uy) + std::norm(uz));
    }

    if (scale <= 0.0 || std::abs(indicator) <= kPlanarTol * scale) return Whirl::PlanarMixed;
    return indicator > 0.0 ? Whirl::Forward : Whirl::Backward;
}

double mac(const Eigen::VectorXcd& phi1, const Eigen::VectorXcd& phi2) {
    if (phi1.size() != phi2.size()) throw ModelError("mac: vector lengths differ");
    const double n1 = phi1.squaredNorm();
    const double n2 = phi2.squaredNorm();
    if (n1 == 0.0 || n2 == 0.0) throw ModelError("mac: zero vector");
    return std::norm(phi1.dot(phi2)) / (n1 * n2);
}

}  // namespace rotordyn
