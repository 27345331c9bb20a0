#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "oatune/dataset.hpp"

namespace oatune {

// Per-column min-max scaling to [0, 1]. Constant columns map to 0 and invert to their minimum.
class MinMaxScaler {
public:
    MinMaxScaler() = default;
    MinMaxScaler(std::vector<double> min, std::vector<double> max);

    static MinMaxScaler fit(const Eigen::MatrixXd& data);

    bool fitted() const noexcept { return !min_.empty(); }
    std::size_t columns() const noexcept { return min_.size(); }
    const std::vector<double>& min() const noexcept { return min_; }
    const std::vector<double>& max() const noexcept { return max_; }
    bool is_constant(std::size_t column) const { return max_.at(column) == min_.at(column); }

    Eigen::MatrixXd transform(const Eigen::MatrixXd& values) const;
    Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& values) const;

    // Scaler restricted to columns [first, first + count).
    MinMaxScaler slice(std::size_t first, std::size_t count) const;

    friend bool operator==(const MinMaxScaler&, const MinMaxScaler&) = default;

private:
    void check(const Eigen::MatrixXd& values) const;

    std::vector<double> min_;
    std::vector<double> max_;
};

// Fits all 33 columns (inputs then outputs).
MinMaxScaler fit_minmax(const Dataset& dataset);
MinMaxScaler fit_minmax(const Dataset& dataset, const std::vector<std::size_t>& rows);

}  // namespace oatune
