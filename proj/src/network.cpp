#include "oatune/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "oatune/errors.hpp"

namespace oatune {

std::string to_string(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::Relu: return "relu";
        case ActivationKind::Elu: return "elu";
        case ActivationKind::Selu: return "selu";
    }
    return "?";
}

ActivationKind parse_activation(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (lower == "relu") return ActivationKind::Relu;
    if (lower == "elu") return ActivationKind::Elu;
    if (lower == "selu") return ActivationKind::Selu;
    throw DomainError("unknown activation '" + std::string(name) + "'");
}

double activation_eval(ActivationKind kind, double x) {
    switch (kind) {
        case ActivationKind::Relu: return x > 0 ? x : 0.0;
        case ActivationKind::Elu: return x > 0 ? x : kEluAlpha * std::expm1(x);
        case ActivationKind::Selu: return x > 0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * std::expm1(x);
    }
    return x;
}

double activation_grad(ActivationKind kind, double x) {
    switch (kind) {
        case ActivationKind::Relu: return x >= 0 ? 1.0 : 0.0;
        case ActivationKind::Elu: return x >= 0 ? 1.0 : kEluAlpha * std::exp(x);
        case ActivationKind::Selu: return x >= 0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(x);
    }
    return 1.0;
}

Mlp::Mlp(std::vector<int> layer_sizes, ActivationKind hidden)
    : sizes_(std::move(layer_sizes)), activation_(hidden) {
    if (sizes_.size() < 2) throw ShapeError("a network needs at least an input and an output layer");
    for (int s : sizes_) {
        if (s <= 0) throw ShapeError("layer sizes must be positive, got " + std::to_string(s));
    }
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        offsets_.push_back(total);
        total += static_cast<std::size_t>(sizes_[l + 1]) * static_cast<std::size_t>(sizes_[l] + 1);
    }
    params_.assign(total, 0.0);
}

std::size_t Mlp::bias_offset(std::size_t layer) const {
    return offsets_.at(layer) + static_cast<std::size_t>(sizes_[layer + 1]) * static_cast<std::size_t>(sizes_[layer]);
}

Eigen::Map<RowMatrix> Mlp::weights(std::size_t layer) {
    return {params_.data() + weight_offset(layer), sizes_.at(layer + 1), sizes_[layer]};
}

Eigen::Map<const RowMatrix> Mlp::weights(std::size_t layer) const {
    return {params_.data() + weight_offset(layer), sizes_.at(layer + 1), sizes_[layer]};
}

Eigen::Map<Eigen::VectorXd> Mlp::bias(std::size_t layer) {
    return {params_.data() + bias_offset(layer), sizes_.at(layer + 1)};
}

Eigen::Map<const Eigen::VectorXd> Mlp::bias(std::size_t layer) const {
    return {params_.data() + bias_offset(layer), sizes_.at(layer + 1)};
}

bool Mlp::all_finite() const {
    return std::all_of(params_.begin(), params_.end(), [](double p) { return std::isfinite(p); });
}

Mlp init_weights(const std::vector<int>& layer_sizes, ActivationKind hidden, std::uint64_t seed) {
    Mlp model(layer_sizes, hidden);
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        const double limit = std::sqrt(6.0 / (layer_sizes[l] + layer_sizes[l + 1]));
        std::uniform_real_distribution<double> dist(-limit, limit);
        auto w = model.weights(l);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
        }
    }
    return model;
}

namespace {

void check_input(const Mlp& model, const Eigen::MatrixXd& inputs) {
    if (model.layer_count() == 0) throw ShapeError("empty model");
    if (inputs.cols() != model.input_size()) {
        throw ShapeError("input width " + std::to_string(inputs.cols()) + " does not match model input size " +
                         std::to_string(model.input_size()));
    }
}

template <class Derived>
Eigen::MatrixXd activate(ActivationKind kind, const Eigen::MatrixBase<Derived>& z) {
    return z.unaryExpr([kind](double x) { return activation_eval(kind, x); });
}

}  // namespace

Eigen::MatrixXd forward(const Mlp& model, const Eigen::MatrixXd& inputs) {
    check_input(model, inputs);
    Eigen::MatrixXd a = inputs;
    const std::size_t last = model.layer_count() - 1;
    for (std::size_t l = 0; l <= last; ++l) {
        Eigen::MatrixXd z = a * model.weights(l).transpose();
        z.rowwise() += model.bias(l).transpose();
        a = l == last ? std::move(z) : activate(model.activation(), z);
    }
    return a;
}

LossGradient backward(const Mlp& model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) {
    check_input(model, inputs);
    if (inputs.rows() == 0) throw ShapeError("empty batch");
    if (targets.rows() != inputs.rows() || targets.cols() != model.output_size()) {
        throw ShapeError("target shape does not match batch and model output size");
    }
    const std::size_t layers = model.layer_count();
    // activations[0] is the input; pre[l] is layer l's affine output.
    std::vector<Eigen::MatrixXd> activations(layers + 1);
    std::vector<Eigen::MatrixXd> pre(layers);
    activations[0] = inputs;
    for (std::size_t l = 0; l < layers; ++l) {
        pre[l] = activations[l] * model.weights(l).transpose();
        pre[l].rowwise() += model.bias(l).transpose();
        activations[l + 1] = l + 1 == layers ? pre[l] : activate(model.activation(), pre[l]);
    }

    const double scale = 1.0 / (static_cast<double>(inputs.rows()) * static_cast<double>(targets.cols()));
    Eigen::MatrixXd residual = activations[layers] - targets;

    LossGradient out;
    out.loss = residual.squaredNorm() * scale;
    out.gradient.assign(model.parameter_count(), 0.0);

    Eigen::MatrixXd delta = 2.0 * scale * residual;
    for (std::size_t l = layers; l-- > 0;) {
        Eigen::Map<RowMatrix> gw(out.gradient.data() + model.weight_offset(l), model.layer_sizes()[l + 1],
                                 model.layer_sizes()[l]);
        Eigen::Map<Eigen::VectorXd> gb(out.gradient.data() + model.bias_offset(l), model.layer_sizes()[l + 1]);
        gw.noalias() = delta.transpose() * activations[l];
        gb = delta.colwise().sum().transpose();
        if (l > 0) {
            const ActivationKind kind = model.activation();
            Eigen::MatrixXd back = delta * model.weights(l);
            delta = back.cwiseProduct(pre[l - 1].unaryExpr([kind](double x) { return activation_grad(kind, x); }));
        }
    }
    return out;
}

double mse_loss(const Mlp& model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) {
    const Eigen::MatrixXd pred = forward(model, inputs);
    if (pred.rows() != targets.rows() || pred.cols() != targets.cols()) throw ShapeError("target shape mismatch");
    if (pred.size() == 0) throw ShapeError("empty batch");
    return (pred - targets).squaredNorm() / static_cast<double>(pred.size());
}

}  // namespace oatune
