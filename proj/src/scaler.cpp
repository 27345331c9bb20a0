#include "oatune/scaler.hpp"

#include <algorithm>
#include <numeric>

#include "oatune/errors.hpp"

namespace oatune {

MinMaxScaler::MinMaxScaler(std::vector<double> min, std::vector<double> max) : min_(std::move(min)), max_(std::move(max)) {
    if (min_.size() != max_.size()) throw ShapeError("scaler min/max lengths differ");
    for (std::size_t i = 0; i < min_.size(); ++i) {
        if (!(max_[i] >= min_[i])) throw DomainError("scaler column " + std::to_string(i) + " has max < min");
    }
}

MinMaxScaler MinMaxScaler::fit(const Eigen::MatrixXd& data) {
    if (data.rows() == 0 || data.cols() == 0) throw ShapeError("cannot fit a scaler on empty data");
    std::vector<double> lo(static_cast<std::size_t>(data.cols()));
    std::vector<double> hi(lo.size());
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        lo[static_cast<std::size_t>(c)] = data.col(c).minCoeff();
        hi[static_cast<std::size_t>(c)] = data.col(c).maxCoeff();
    }
    return {std::move(lo), std::move(hi)};
}

void MinMaxScaler::check(const Eigen::MatrixXd& values) const {
    if (!fitted()) throw StateError("scaler is not fitted");
    if (static_cast<std::size_t>(values.cols()) != columns()) {
        throw ShapeError("scaler fitted on " + std::to_string(columns()) + " columns, got " +
                         std::to_string(values.cols()));
    }
}

Eigen::MatrixXd MinMaxScaler::transform(const Eigen::MatrixXd& values) const {
    check(values);
    Eigen::MatrixXd out(values.rows(), values.cols());
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
        const auto i = static_cast<std::size_t>(c);
        if (is_constant(i)) out.col(c).setZero();
        else out.col(c) = (values.col(c).array() - min_[i]) / (max_[i] - min_[i]);
    }
    return out;
}

Eigen::MatrixXd MinMaxScaler::inverse_transform(const Eigen::MatrixXd& values) const {
    check(values);
    Eigen::MatrixXd out(values.rows(), values.cols());
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
        const auto i = static_cast<std::size_t>(c);
        if (is_constant(i)) out.col(c).setConstant(min_[i]);
        else out.col(c) = values.col(c).array() * (max_[i] - min_[i]) + min_[i];
    }
    return out;
}

MinMaxScaler MinMaxScaler::slice(std::size_t first, std::size_t count) const {
    if (!fitted()) throw StateError("scaler is not fitted");
    if (first + count > columns()) throw ShapeError("scaler slice out of range");
    const auto b = static_cast<long>(first);
    const auto e = static_cast<long>(first + count);
    return {{min_.begin() + b, min_.begin() + e}, {max_.begin() + b, max_.begin() + e}};
}

MinMaxScaler fit_minmax(const Dataset& dataset) {
    if (dataset.empty()) throw ShapeError("cannot fit a scaler on an empty dataset");
    return MinMaxScaler::fit(dataset.matrix());
}

MinMaxScaler fit_minmax(const Dataset& dataset, const std::vector<std::size_t>& rows) {
    if (rows.empty()) throw ShapeError("cannot fit a scaler on an empty selection");
    return MinMaxScaler::fit(dataset.matrix(rows));
}

}  // namespace oatune
