#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "oatune/analysis.hpp"
#include "oatune/dataset.hpp"
#include "oatune/design.hpp"
#include "oatune/network.hpp"
#include "oatune/scaler.hpp"

namespace oatune {

enum class ResponseCriterion { TrainR2, ValidationR2 };

std::string to_string(ResponseCriterion c);
ResponseCriterion parse_criterion(std::string_view name);

struct TrainSettings {
    int max_epochs = 5000;
    int patience = 200;
    int batch_size = 32;
    std::uint64_t seed = 0;
    ResponseCriterion criterion = ResponseCriterion::TrainR2;

    void validate() const;
};

struct EarlyStopState {
    double best_loss = std::numeric_limits<double>::infinity();
    int best_epoch = 0;
    int since_improvement = 0;
    int last_epoch = 0;
    std::vector<double> best_parameters;  // filled by the caller on Improved
};

enum class StopDecision { Improved, Continue, Stop };

// Improvement is a strictly lower loss. Stop once `patience` epochs pass without one.
StopDecision early_stop_update(EarlyStopState& state, int epoch, double val_loss, int patience);

// Normalized matrices; rows are samples. Validation and test may be empty.
struct TrainData {
    Eigen::MatrixXd train_x, train_y;
    Eigen::MatrixXd validation_x, validation_y;
    Eigen::MatrixXd test_x, test_y;
};

struct TrainResult {
    HyperConfig config;
    std::uint64_t seed = 0;
    Mlp model;  // best-epoch parameters
    int stopped_epoch = 0;
    int best_epoch = 0;
    bool stopped_by_patience = false;
    double best_validation_loss = std::numeric_limits<double>::infinity();
    std::vector<double> train_loss;
    std::vector<double> validation_loss;
    std::optional<EvaluationMetrics> train_metrics;
    std::optional<EvaluationMetrics> validation_metrics;
    std::optional<EvaluationMetrics> test_metrics;
    double response = 0.0;
    bool failed = false;
    std::string failure;
    double wall_seconds = 0.0;
};

// Layer sizes: data input width, config.hidden_layers x config.neurons, data output width.
// Numerical divergence marks the result as failed with response 0 instead of throwing.
TrainResult train_model(const HyperConfig& config, const TrainData& data, const TrainSettings& settings);

enum class ScalerFit { Full, Train };

struct PreparedData {
    TrainData data;
    MinMaxScaler scaler;  // all 33 columns
    SplitIndices split;
};

PreparedData prepare_data(const Dataset& dataset, const SplitSpec& split, ScalerFit fit);

std::uint64_t derive_run_seed(std::uint64_t base_seed, std::size_t run_index);

struct DesignResult {
    std::vector<TrainResult> runs;   // design row order
    std::vector<double> responses;   // train or validation R^2 in percent
};

// settings.seed is the base seed; run i trains with derive_run_seed(base, i).
// Up to `workers` runs execute concurrently; results keep design order.
DesignResult run_design(const OrthogonalArray& array, const FactorSpace& space, const TrainData& data,
                        const TrainSettings& settings, std::size_t workers = 1);

TrainResult run_single(const OrthogonalArray& array, const FactorSpace& space, const TrainData& data,
                       const TrainSettings& settings, std::size_t run_index);

}  // namespace oatune
