#pragma once

#include <Eigen/Dense>

#include "rotordyn/assembly.hpp"
#include "rotordyn/modal.hpp"

namespace rotordyn {

/// Whirl direction of a complex mode shape. Per node the orbit indicator
/// is I_n = Im(u_y conj(u_z)); the orbit rotates +y -> +z (forward for
/// spin about +x) iff I_n > 0. The global tag comes from the weighted sum
/// of indicators; a magnitude below the scale-free planar tolerance gives
/// PlanarMixed. Constrained DOFs contribute zero amplitude.
Whirl classify_whirl(const Eigen::VectorXcd& displacement, const DofMap& dof_map,
                     const Eigen::VectorXd& node_weights);

/// Modal assurance criterion |phi1^H phi2|^2 / ((phi1^H phi1)(phi2^H phi2)),
/// in [0, 1]. Throws ModelError on zero vectors or length mismatch.
double mac(const Eigen::VectorXcd& phi1, const Eigen::VectorXcd& phi2);

}  // namespace rotordyn
