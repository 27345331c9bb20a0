#include "oatune/optim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "oatune/errors.hpp"

namespace oatune {

std::string to_string(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::Adam: return "Adam";
        case OptimizerKind::Adamax: return "Adamax";
        case OptimizerKind::RMSprop: return "RMSprop";
    }
    return "?";
}

OptimizerKind parse_optimizer(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (lower == "adam") return OptimizerKind::Adam;
    if (lower == "adamax") return OptimizerKind::Adamax;
    if (lower == "rmsprop") return OptimizerKind::RMSprop;
    throw DomainError("unknown optimizer '" + std::string(name) + "'");
}

namespace {

void check(const OptimizerState& state, std::span<double> params, std::span<const double> grads, double lr) {
    if (params.size() != grads.size() || params.size() != state.second.size() ||
        params.size() != state.first.size()) {
        throw ShapeError("optimizer buffers, parameters and gradients differ in length");
    }
    if (!(lr > 0) || !std::isfinite(lr)) throw DomainError("learning rate must be positive");
    for (std::size_t i = 0; i < grads.size(); ++i) {
        if (!std::isfinite(grads[i])) {
            throw TrainingError("non-finite gradient at optimizer step " + std::to_string(state.step + 1),
                                state.step + 1);
        }
    }
}

}  // namespace

void adam_step(OptimizerState& s, std::span<double> params, std::span<const double> grads, double lr,
               const OptimizerConstants& c) {
    check(s, params, grads, lr);
    ++s.step;
    const double t = static_cast<double>(s.step);
    const double correct1 = 1.0 - std::pow(c.beta1, t);
    const double correct2 = 1.0 - std::pow(c.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        s.first[i] = c.beta1 * s.first[i] + (1.0 - c.beta1) * g;
        s.second[i] = c.beta2 * s.second[i] + (1.0 - c.beta2) * g * g;
        const double m_hat = s.first[i] / correct1;
        const double v_hat = s.second[i] / correct2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
}

void adamax_step(OptimizerState& s, std::span<double> params, std::span<const double> grads, double lr,
                 const OptimizerConstants& c) {
    check(s, params, grads, lr);
    ++s.step;
    const double step_size = lr / (1.0 - std::pow(c.beta1, static_cast<double>(s.step)));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        s.first[i] = c.beta1 * s.first[i] + (1.0 - c.beta1) * g;
        s.second[i] = std::max(c.beta2 * s.second[i], std::abs(g));
        params[i] -= step_size * s.first[i] / (s.second[i] + c.epsilon);
    }
}

void rmsprop_step(OptimizerState& s, std::span<double> params, std::span<const double> grads, double lr,
                  const OptimizerConstants& c) {
    check(s, params, grads, lr);
    ++s.step;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        s.second[i] = c.rho * s.second[i] + (1.0 - c.rho) * g * g;
        params[i] -= lr * g / (std::sqrt(s.second[i]) + c.epsilon);
    }
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate, std::size_t parameter_count,
                     OptimizerConstants constants)
    : kind_(kind), learning_rate_(learning_rate), constants_(constants), state_(parameter_count) {
    if (!(learning_rate > 0) || !std::isfinite(learning_rate)) throw DomainError("learning rate must be positive");
}

void Optimizer::step(std::span<double> params, std::span<const double> grads) {
    switch (kind_) {
        case OptimizerKind::Adam: adam_step(state_, params, grads, learning_rate_, constants_); break;
        case OptimizerKind::Adamax: adamax_step(state_, params, grads, learning_rate_, constants_); break;
        case OptimizerKind::RMSprop: rmsprop_step(state_, params, grads, learning_rate_, constants_); break;
    }
}

}  // namespace oatune
