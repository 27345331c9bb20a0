#include "oatune/stiffness.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>

#include "oatune/errors.hpp"

namespace oatune {

Matrix6 assemble_stiffness(std::span<const double, kOutputCount> c) {
    Matrix6 q;
    std::size_t k = 0;
    for (int i = 0; i < 6; ++i) {
        for (int j = i; j < 6; ++j) {
            q(i, j) = c[k];
            q(j, i) = c[k];
            ++k;
        }
    }
    return q;
}

std::array<double, kOutputCount> stiffness_components(const Matrix6& q) {
    std::array<double, kOutputCount> out{};
    std::size_t k = 0;
    for (int i = 0; i < 6; ++i) {
        for (int j = i; j < 6; ++j) out[k++] = q(i, j);
    }
    return out;
}

Matrix6 orthotropic_stiffness(double e1, double e2, double e3, double nu) {
    const std::array<double, 3> e{e1, e2, e3};
    Matrix6 s = Matrix6::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            s(i, j) = i == j ? 1.0 / e[i] : -nu / std::sqrt(e[i] * e[j]);
        }
    }
    auto shear = [&](int i, int j) { return std::sqrt(e[i] * e[j]) / (2.0 * (1.0 + nu)); };
    s(3, 3) = 1.0 / shear(1, 2);
    s(4, 4) = 1.0 / shear(0, 2);
    s(5, 5) = 1.0 / shear(0, 1);
    return s.inverse();
}

Matrix6 isotropic_stiffness(double e, double nu) {
    const double lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    const double mu = e / (2.0 * (1.0 + nu));
    Matrix6 q = Matrix6::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) q(i, j) = lambda;
        q(i, i) = lambda + 2.0 * mu;
        q(i + 3, i + 3) = mu;
    }
    return q;
}

Eigen::Matrix3d rotation_from_angles(double g1, double g2, double g3) {
    return (Eigen::AngleAxisd(g3, Eigen::Vector3d::UnitZ()) * Eigen::AngleAxisd(g2, Eigen::Vector3d::UnitY()) *
            Eigen::AngleAxisd(g1, Eigen::Vector3d::UnitX()))
        .toRotationMatrix();
}

Matrix6 bond_matrix(const Eigen::Matrix3d& r) {
    // Voigt pairs for rows/columns 3, 4, 5.
    constexpr int pair[6][2] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
    Matrix6 m;
    for (int a = 0; a < 6; ++a) {
        const int i = pair[a][0];
        const int j = pair[a][1];
        for (int b = 0; b < 6; ++b) {
            const int k = pair[b][0];
            const int l = pair[b][1];
            // sigma'_ij = R_ik R_jl sigma_kl summed over both (k,l) and (l,k).
            m(a, b) = b < 3 ? r(i, k) * r(j, l) : r(i, k) * r(j, l) + r(i, l) * r(j, k);
        }
    }
    return m;
}

Matrix6 rotate_stiffness(const Matrix6& q, const Eigen::Matrix3d& rotation) {
    const Matrix6 m = bond_matrix(rotation);
    return m * q * m.transpose();
}

Matrix6 to_mandel(const Matrix6& q) {
    Eigen::Matrix<double, 6, 1> w;
    w << 1, 1, 1, std::sqrt(2.0), std::sqrt(2.0), std::sqrt(2.0);
    return w.asDiagonal() * q * w.asDiagonal();
}

EngineeringConstants engineering_constants(const Matrix6& q) {
    if (!q.allFinite()) throw MechanicsError("stiffness has non-finite entries");
    const double scale = q.cwiseAbs().maxCoeff();
    if (scale == 0) throw MechanicsError("stiffness is zero");
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) throw MechanicsError("stiffness is not symmetric");
    Eigen::LLT<Matrix6> llt(q);
    if (llt.info() != Eigen::Success) throw MechanicsError("stiffness is not positive definite");
    const Matrix6 s = llt.solve(Matrix6::Identity());
    return {1.0 / s(0, 0), 1.0 / s(1, 1), 1.0 / s(2, 2)};
}

double aspect_ratio(double fiber_length, double fiber_diameter) {
    if (!(fiber_length > 0) || !(fiber_diameter > 0) || !std::isfinite(fiber_length) ||
        !std::isfinite(fiber_diameter)) {
        throw DomainError("fiber length and diameter must be positive");
    }
    return fiber_length / fiber_diameter;
}

Matrix6 synthetic_stiffness(std::span<const double, kInputCount> x) {
    const double em = x[EM];
    const double ef = x[EF];
    const double phi = x[VolumeFraction];
    const double lambda = x[AspectRatio];

    const double e_long = phi * ef + (1.0 - phi) * em;
    const double e_trans = 1.0 / (phi / ef + (1.0 - phi) / em);
    const double e_blend = e_trans + (e_long - e_trans) * lambda / (lambda + 10.0);
    const double nu = phi * x[NuF] + (1.0 - phi) * x[NuM];

    const double a11 = x[A11];
    const double a22 = x[A22];
    const double a33 = 1.0 - a11 - a22;
    auto axis = [&](double a) { return a * e_blend + (1.0 - a) * e_trans; };

    const Matrix6 local = orthotropic_stiffness(axis(a11), axis(a22), axis(a33), nu);
    return rotate_stiffness(local, rotation_from_angles(x[Gamma1], x[Gamma2], x[Gamma3]));
}

}  // namespace oatune
