#pragma once

#include <array>
#include <span>

#include <Eigen/Core>

#include "oatune/dataset.hpp"

namespace oatune {

using Matrix6 = Eigen::Matrix<double, 6, 6>;

// Voigt order 11, 22, 33, 23, 13, 12 with engineering shear strains.
Matrix6 assemble_stiffness(std::span<const double, kOutputCount> components);
std::array<double, kOutputCount> stiffness_components(const Matrix6& q);

// Orthotropic stiffness from axis moduli and one Poisson ratio. Off-diagonal
// compliances are -nu / sqrt(Ei Ej) and shear moduli sqrt(Ei Ej) / (2 (1 + nu)),
// which keeps the compliance symmetric; SPD for 0 <= nu < 0.5.
Matrix6 orthotropic_stiffness(double e1, double e2, double e3, double nu);

Matrix6 isotropic_stiffness(double e, double nu);

// R = Rz(g3) * Ry(g2) * Rx(g1)
Eigen::Matrix3d rotation_from_angles(double g1, double g2, double g3);

// 6x6 stress transformation for sigma' = R sigma R^T in Voigt order.
Matrix6 bond_matrix(const Eigen::Matrix3d& rotation);

// Q' = M Q M^T with M = bond_matrix(R).
Matrix6 rotate_stiffness(const Matrix6& q, const Eigen::Matrix3d& rotation);

// Scales shear rows/columns so that rotations act as orthogonal congruences.
Matrix6 to_mandel(const Matrix6& q);

struct EngineeringConstants {
    double e11 = 0.0;
    double e22 = 0.0;
    double e33 = 0.0;
};

// E_ii = 1 / S_ii with S = Q^-1. Throws MechanicsError unless Q is symmetric positive definite.
EngineeringConstants engineering_constants(const Matrix6& q);

// lambda_f = l_f / d_f
double aspect_ratio(double fiber_length, double fiber_diameter);

// Closed-form synthetic response used by generate_synthetic.
Matrix6 synthetic_stiffness(std::span<const double, kInputCount> inputs);

}  // namespace oatune
