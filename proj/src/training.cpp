#include "oatune/training.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <thread>

#include "oatune/errors.hpp"
#include "oatune/optim.hpp"

namespace oatune {

std::string to_string(ResponseCriterion c) { return c == ResponseCriterion::TrainR2 ? "train-r2" : "val-r2"; }

ResponseCriterion parse_criterion(std::string_view name) {
    if (name == "train-r2") return ResponseCriterion::TrainR2;
    if (name == "val-r2") return ResponseCriterion::ValidationR2;
    throw DomainError("unknown criterion '" + std::string(name) + "'");
}

void TrainSettings::validate() const {
    if (max_epochs < 1) throw DomainError("max epochs must be at least 1");
    if (patience < 1) throw DomainError("patience must be at least 1");
    if (batch_size < 1) throw DomainError("batch size must be at least 1");
}

StopDecision early_stop_update(EarlyStopState& state, int epoch, double val_loss, int patience) {
    if (!std::isfinite(val_loss)) throw TrainingError("non-finite validation loss at epoch " + std::to_string(epoch), epoch);
    if (patience < 1) throw DomainError("patience must be at least 1");
    if (epoch != state.last_epoch + 1) throw DomainError("epochs must be reported consecutively");
    state.last_epoch = epoch;
    if (val_loss < state.best_loss) {
        state.best_loss = val_loss;
        state.best_epoch = epoch;
        state.since_improvement = 0;
        return StopDecision::Improved;
    }
    ++state.since_improvement;
    return state.since_improvement >= patience ? StopDecision::Stop : StopDecision::Continue;
}

std::uint64_t derive_run_seed(std::uint64_t base_seed, std::size_t run_index) {
    // splitmix64 finalizer
    std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(run_index) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

std::optional<EvaluationMetrics> metrics_or_empty(const Mlp& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.rows() == 0 || y.size() < 2) return std::nullopt;
    return compute_metrics(y, forward(model, x));
}

void gather_rows(const Eigen::MatrixXd& src, const std::vector<std::size_t>& order, std::size_t begin,
                 std::size_t end, Eigen::MatrixXd& dst) {
    dst.resize(static_cast<Eigen::Index>(end - begin), src.cols());
    for (std::size_t i = begin; i < end; ++i) dst.row(static_cast<Eigen::Index>(i - begin)) = src.row(static_cast<Eigen::Index>(order[i]));
}

}  // namespace

TrainResult train_model(const HyperConfig& config, const TrainData& data, const TrainSettings& settings) {
    settings.validate();
    if (data.train_x.rows() == 0) throw ShapeError("training set is empty");
    if (data.train_x.rows() != data.train_y.rows()) throw ShapeError("training inputs and targets differ in rows");
    if (data.validation_x.rows() != data.validation_y.rows()) throw ShapeError("validation inputs and targets differ in rows");
    if (config.hidden_layers < 0 || config.neurons < 1) throw DesignError("invalid layer configuration");

    const auto start = std::chrono::steady_clock::now();
    TrainResult result;
    result.config = config;
    result.seed = settings.seed;

    std::vector<int> sizes{static_cast<int>(data.train_x.cols())};
    for (int l = 0; l < config.hidden_layers; ++l) sizes.push_back(config.neurons);
    sizes.push_back(static_cast<int>(data.train_y.cols()));

    Mlp model = init_weights(sizes, config.activation, settings.seed);
    Optimizer optimizer(config.optimizer, config.learning_rate, model.parameter_count());
    std::mt19937_64 shuffle_rng(derive_run_seed(settings.seed, 0x5eed));

    const bool has_validation = data.validation_x.rows() > 0;
    const Eigen::MatrixXd& monitor_x = has_validation ? data.validation_x : data.train_x;
    const Eigen::MatrixXd& monitor_y = has_validation ? data.validation_y : data.train_y;

    const auto n = static_cast<std::size_t>(data.train_x.rows());
    const auto batch = static_cast<std::size_t>(settings.batch_size);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    EarlyStopState stop;
    stop.best_parameters.assign(model.parameters().begin(), model.parameters().end());
    Eigen::MatrixXd bx, by;

    try {
        for (int epoch = 1; epoch <= settings.max_epochs; ++epoch) {
            std::shuffle(order.begin(), order.end(), shuffle_rng);
            double loss_sum = 0.0;
            for (std::size_t b = 0; b < n; b += batch) {
                const std::size_t e = std::min(n, b + batch);
                gather_rows(data.train_x, order, b, e, bx);
                gather_rows(data.train_y, order, b, e, by);
                LossGradient lg = backward(model, bx, by);
                if (!std::isfinite(lg.loss)) throw TrainingError("non-finite training loss at epoch " + std::to_string(epoch), epoch);
                loss_sum += lg.loss * static_cast<double>(e - b);
                optimizer.step(model.parameters(), lg.gradient);
            }
            const double train_loss = loss_sum / static_cast<double>(n);
            const double val_loss = mse_loss(model, monitor_x, monitor_y);
            result.train_loss.push_back(train_loss);
            result.validation_loss.push_back(val_loss);
            result.stopped_epoch = epoch;

            const StopDecision d = early_stop_update(stop, epoch, val_loss, settings.patience);
            if (d == StopDecision::Improved) {
                std::copy(model.parameters().begin(), model.parameters().end(), stop.best_parameters.begin());
            } else if (d == StopDecision::Stop) {
                result.stopped_by_patience = true;
                break;
            }
        }
        std::copy(stop.best_parameters.begin(), stop.best_parameters.end(), model.parameters().begin());
        result.best_epoch = stop.best_epoch;
        result.best_validation_loss = stop.best_loss;
        result.model = std::move(model);

        result.train_metrics = metrics_or_empty(result.model, data.train_x, data.train_y);
        result.validation_metrics = metrics_or_empty(result.model, data.validation_x, data.validation_y);
        result.test_metrics = metrics_or_empty(result.model, data.test_x, data.test_y);

        const auto& chosen = settings.criterion == ResponseCriterion::TrainR2 ? result.train_metrics : result.validation_metrics;
        if (!chosen) throw TrainingError("no data to compute the response criterion");
        if (!std::isfinite(chosen->r2)) throw TrainingError("non-finite response");
        result.response = chosen->r2;
    } catch (const TrainingError& e) {
        result.failed = true;
        result.failure = e.what();
        result.response = 0.0;
        result.best_epoch = stop.best_epoch;
        result.best_validation_loss = stop.best_loss;
        if (result.model.layer_count() == 0) {
            std::copy(stop.best_parameters.begin(), stop.best_parameters.end(), model.parameters().begin());
            result.model = std::move(model);
        }
    } catch (const DomainError& e) {
        // constant targets make R^2 undefined
        result.failed = true;
        result.failure = e.what();
        result.response = 0.0;
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

PreparedData prepare_data(const Dataset& dataset, const SplitSpec& split, ScalerFit fit) {
    PreparedData out;
    out.split = split_dataset(dataset, split);
    out.scaler = fit == ScalerFit::Full ? fit_minmax(dataset) : fit_minmax(dataset, out.split.train);
    auto load = [&](const std::vector<std::size_t>& rows, Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
        const Eigen::MatrixXd m = out.scaler.transform(dataset.matrix(rows));
        x = m.leftCols(static_cast<Eigen::Index>(kInputCount));
        y = m.rightCols(static_cast<Eigen::Index>(kOutputCount));
    };
    load(out.split.train, out.data.train_x, out.data.train_y);
    load(out.split.validation, out.data.validation_x, out.data.validation_y);
    load(out.split.test, out.data.test_x, out.data.test_y);
    return out;
}

TrainResult run_single(const OrthogonalArray& array, const FactorSpace& space, const TrainData& data,
                       const TrainSettings& settings, std::size_t run_index) {
    TrainSettings run_settings = settings;
    run_settings.seed = derive_run_seed(settings.seed, run_index);
    return train_model(decode_run(array, run_index, space), data, run_settings);
}

DesignResult run_design(const OrthogonalArray& array, const FactorSpace& space, const TrainData& data,
                        const TrainSettings& settings, std::size_t workers) {
    settings.validate();
    if (array.cols() != space.size()) throw ShapeError("design columns do not match factor space");
    // Decode everything up front so configuration errors surface before training.
    for (std::size_t i = 0; i < array.rows(); ++i) decode_run(array, i, space);

    const std::size_t runs = array.rows();
    DesignResult out;
    out.runs.resize(runs);
    std::vector<std::exception_ptr> errors(runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runs; i = next++) {
            try {
                out.runs[i] = run_single(array, space, data, settings, i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t count = std::clamp<std::size_t>(workers, 1, runs);
    if (count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < count; ++w) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    out.responses.reserve(runs);
    for (const auto& r : out.runs) out.responses.push_back(r.response);
    return out;
}

}  // namespace oatune
