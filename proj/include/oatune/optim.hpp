#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oatune {

enum class OptimizerKind { Adam, Adamax, RMSprop };

std::string to_string(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);

struct OptimizerConstants {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double rho = 0.9;
    double epsilon = 1e-8;
};

// Per-parameter moment buffers. `second` holds v for Adam/RMSprop and the
// infinity-norm accumulator u for Adamax; `first` is unused by RMSprop.
struct OptimizerState {
    std::vector<double> first;
    std::vector<double> second;
    long step = 0;

    explicit OptimizerState(std::size_t parameter_count = 0)
        : first(parameter_count, 0.0), second(parameter_count, 0.0) {}
};

// Each step throws TrainingError (carrying the step number) on a non-finite
// gradient and leaves params and state untouched in that case.
void adam_step(OptimizerState& state, std::span<double> params, std::span<const double> grads,
               double learning_rate, const OptimizerConstants& c = {});
void adamax_step(OptimizerState& state, std::span<double> params, std::span<const double> grads,
                 double learning_rate, const OptimizerConstants& c = {});
void rmsprop_step(OptimizerState& state, std::span<double> params, std::span<const double> grads,
                  double learning_rate, const OptimizerConstants& c = {});

class Optimizer {
public:
    Optimizer(OptimizerKind kind, double learning_rate, std::size_t parameter_count,
              OptimizerConstants constants = {});

    void step(std::span<double> params, std::span<const double> grads);

    OptimizerKind kind() const noexcept { return kind_; }
    double learning_rate() const noexcept { return learning_rate_; }
    const OptimizerState& state() const noexcept { return state_; }

private:
    OptimizerKind kind_;
    double learning_rate_;
    OptimizerConstants constants_;
    OptimizerState state_;
};

}  // namespace oatune
