#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace oatune {

enum class ActivationKind { Relu, Elu, Selu };

inline constexpr double kEluAlpha = 1.0;
inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

std::string to_string(ActivationKind kind);
ActivationKind parse_activation(std::string_view name);

double activation_eval(ActivationKind kind, double x);

// Derivative of activation_eval; at x == 0 the right-hand (positive branch) value is used.
double activation_grad(ActivationKind kind, double x);

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Fully connected network with a shared hidden activation and an identity output layer.
//
// All parameters live in one flat buffer so that optimizers can treat them as a
// single span. Layer l owns a row-major (out x in) weight block followed by its
// (out) bias vector.
class Mlp {
public:
    Mlp() = default;
    Mlp(std::vector<int> layer_sizes, ActivationKind hidden);

    const std::vector<int>& layer_sizes() const noexcept { return sizes_; }
    ActivationKind activation() const noexcept { return activation_; }
    std::size_t layer_count() const noexcept { return sizes_.empty() ? 0 : sizes_.size() - 1; }
    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }

    Eigen::Map<RowMatrix> weights(std::size_t layer);
    Eigen::Map<const RowMatrix> weights(std::size_t layer) const;
    Eigen::Map<Eigen::VectorXd> bias(std::size_t layer);
    Eigen::Map<const Eigen::VectorXd> bias(std::size_t layer) const;

    std::span<double> parameters() noexcept { return params_; }
    std::span<const double> parameters() const noexcept { return params_; }
    std::size_t parameter_count() const noexcept { return params_.size(); }

    // Offset of layer l's weight block inside parameters(); the bias follows it.
    std::size_t weight_offset(std::size_t layer) const { return offsets_.at(layer); }
    std::size_t bias_offset(std::size_t layer) const;

    bool all_finite() const;

    friend bool operator==(const Mlp&, const Mlp&) = default;

private:
    std::vector<int> sizes_;
    ActivationKind activation_ = ActivationKind::Relu;
    std::vector<double> params_;
    std::vector<std::size_t> offsets_;
};

// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
Mlp init_weights(const std::vector<int>& layer_sizes, ActivationKind hidden, std::uint64_t seed);

// Rows are samples.
Eigen::MatrixXd forward(const Mlp& model, const Eigen::MatrixXd& inputs);

struct LossGradient {
    double loss = 0.0;            // mean over batch * outputs of squared residuals
    std::vector<double> gradient; // same layout as Mlp::parameters()
};

// Exact gradient of L = 1/(n*k) * sum (yhat - y)^2 for a batch of n rows and k outputs.
LossGradient backward(const Mlp& model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);

double mse_loss(const Mlp& model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);

}  // namespace oatune
