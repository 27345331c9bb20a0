#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "oatune/design.hpp"

namespace oatune {

struct EvaluationMetrics {
    double r2 = 0.0;  // percent
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
};

// Pooled metrics: every entry of the (rows x outputs) matrices is one
// observation, and the R^2 denominator is taken about the mean of all actual
// values. Throws ShapeError on mismatch or fewer than 2 values and DomainError
// when the actual values are constant.
EvaluationMetrics compute_metrics(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted);
EvaluationMetrics compute_metrics(std::span<const double> actual, std::span<const double> predicted);

EvaluationMetrics per_component_metrics(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted,
                                        std::size_t component);

// Larger-is-better signal-to-noise ratio in dB: -10 log10(mean(1 / y^2)).
double sn_larger_better(std::span<const double> values);

struct LevelEffect {
    double mean = 0.0;
    std::size_t count = 0;
    std::optional<double> sn_db;
};

struct FactorEffect {
    std::array<LevelEffect, 3> levels;
    int selected = 0;  // argmax of level means, ties to the lowest index
};

struct MainEffectsTable {
    std::vector<FactorEffect> factors;  // one per array column
    double grand_mean = 0.0;

    std::vector<int> selected_levels() const;
};

// sn: also compute per-level S/N (left empty when some response is not positive).
MainEffectsTable main_effects(const OrthogonalArray& array, std::span<const double> responses, bool sn = false);

HyperConfig select_optimum(const MainEffectsTable& table, const FactorSpace& space);

}  // namespace oatune
