#pragma once

#include <string>
#include <vector>

#include "oatune/analysis.hpp"
#include "oatune/design.hpp"

namespace oatune::svg {

struct Series {
    std::string name;
    std::vector<double> values;  // x = 1, 2, ...
};

std::string line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, bool log_y = false);

// One panel per factor with the three level means.
std::string main_effects(const MainEffectsTable& table, const FactorSpace& space);

// Predicted against actual with the identity line.
std::string scatter(const std::string& title, const std::vector<double>& actual, const std::vector<double>& predicted);

}  // namespace oatune::svg
