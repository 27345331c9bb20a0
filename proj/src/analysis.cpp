#include "oatune/analysis.hpp"

#include <cmath>

#include "oatune/errors.hpp"

namespace oatune {

EvaluationMetrics compute_metrics(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) {
        throw ShapeError("actual and predicted lengths differ (" + std::to_string(y.size()) + " vs " +
                         std::to_string(yhat.size()) + ")");
    }
    if (y.size() < 2) throw ShapeError("metrics need at least 2 observations");
    const double n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;

    double ss_res = 0.0;
    double ss_tot = 0.0;
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - yhat[i];
        ss_res += r * r;
        abs_sum += std::abs(r);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (ss_tot == 0.0) throw DomainError("R^2 is undefined for constant actual values");
    EvaluationMetrics m;
    m.r2 = (1.0 - ss_res / ss_tot) * 100.0;
    m.mae = abs_sum / n;
    m.mse = ss_res / n;
    m.rmse = std::sqrt(m.mse);
    return m;
}

EvaluationMetrics compute_metrics(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted) {
    if (actual.rows() != predicted.rows() || actual.cols() != predicted.cols()) {
        throw ShapeError("actual and predicted shapes differ");
    }
    return compute_metrics(std::span<const double>(actual.data(), static_cast<std::size_t>(actual.size())),
                           std::span<const double>(predicted.data(), static_cast<std::size_t>(predicted.size())));
}

EvaluationMetrics per_component_metrics(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted,
                                        std::size_t component) {
    if (actual.rows() != predicted.rows() || actual.cols() != predicted.cols()) {
        throw ShapeError("actual and predicted shapes differ");
    }
    if (component >= static_cast<std::size_t>(actual.cols())) {
        throw BoundsError("component " + std::to_string(component) + " out of range");
    }
    const Eigen::VectorXd a = actual.col(static_cast<Eigen::Index>(component));
    const Eigen::VectorXd p = predicted.col(static_cast<Eigen::Index>(component));
    return compute_metrics(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                           std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

double sn_larger_better(std::span<const double> values) {
    if (values.empty()) throw DomainError("S/N ratio needs at least one value");
    double acc = 0.0;
    for (double v : values) {
        if (!(v > 0)) throw DomainError("S/N (larger is better) needs positive values");
        acc += 1.0 / (v * v);
    }
    return -10.0 * std::log10(acc / static_cast<double>(values.size()));
}

std::vector<int> MainEffectsTable::selected_levels() const {
    std::vector<int> out;
    out.reserve(factors.size());
    for (const auto& f : factors) out.push_back(f.selected);
    return out;
}

MainEffectsTable main_effects(const OrthogonalArray& array, std::span<const double> responses, bool sn) {
    if (responses.size() != array.rows()) {
        throw ShapeError("expected " + std::to_string(array.rows()) + " responses, got " +
                         std::to_string(responses.size()));
    }
    if (array.rows() == 0) throw ShapeError("empty design");
    MainEffectsTable table;
    double total = 0.0;
    for (double r : responses) total += r;
    table.grand_mean = total / static_cast<double>(responses.size());

    for (std::size_t c = 0; c < array.cols(); ++c) {
        FactorEffect effect;
        std::array<std::vector<double>, 3> pools;
        for (std::size_t r = 0; r < array.rows(); ++r) {
            const int level = array.at(r, c);
            if (level < 0 || level > 2) throw DesignError("malformed array cell");
            pools[static_cast<std::size_t>(level)].push_back(responses[r]);
        }
        for (std::size_t l = 0; l < 3; ++l) {
            auto& le = effect.levels[l];
            le.count = pools[l].size();
            if (le.count == 0) throw DesignError("level " + std::to_string(l) + " never occurs in column " + std::to_string(c));
            double s = 0.0;
            for (double v : pools[l]) s += v;
            le.mean = s / static_cast<double>(le.count);
            if (sn) {
                bool positive = true;
                for (double v : pools[l]) positive = positive && v > 0;
                if (positive) le.sn_db = sn_larger_better(pools[l]);
            }
        }
        for (int l = 1; l < 3; ++l) {
            if (effect.levels[static_cast<std::size_t>(l)].mean > effect.levels[static_cast<std::size_t>(effect.selected)].mean) {
                effect.selected = l;
            }
        }
        table.factors.push_back(effect);
    }
    return table;
}

HyperConfig select_optimum(const MainEffectsTable& table, const FactorSpace& space) {
    if (table.factors.size() != space.size()) throw ShapeError("main-effects table does not match factor space");
    return config_from_levels(space, table.selected_levels());
}

}  // namespace oatune
