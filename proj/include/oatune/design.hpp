#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "oatune/network.hpp"
#include "oatune/optim.hpp"

namespace oatune {

using LevelValue = std::variant<std::int64_t, double, std::string>;

std::string level_label(const LevelValue& value);

struct Factor {
    std::string name;
    std::array<LevelValue, 3> levels;
};

// Ordered list of 3-level factors. Columns of a design map to factors in
// declaration order.
class FactorSpace {
public:
    static constexpr std::size_t kMaxFactors = 13;

    FactorSpace() = default;
    explicit FactorSpace(std::vector<Factor> factors);

    const std::vector<Factor>& factors() const noexcept { return factors_; }
    std::size_t size() const noexcept { return factors_.size(); }
    const Factor& operator[](std::size_t i) const { return factors_.at(i); }
    std::optional<std::size_t> index_of(const std::string& name) const;

    // 3^(factor count)
    std::uint64_t full_factorial_size() const;

private:
    std::vector<Factor> factors_;
};

// HL, NN, ACT, OPT, LR with the levels used for the reference study.
FactorSpace paper_factor_space();

class OrthogonalArray {
public:
    OrthogonalArray() = default;
    OrthogonalArray(std::size_t rows, std::size_t cols);
    OrthogonalArray(std::vector<std::vector<int>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    int at(std::size_t r, std::size_t c) const { return cells_.at(r * cols_ + c); }
    void set(std::size_t r, std::size_t c, int level) { cells_.at(r * cols_ + c) = level; }
    std::vector<int> row(std::size_t r) const;

    friend bool operator==(const OrthogonalArray&, const OrthogonalArray&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<int> cells_;
};

// 27-run design for exactly five 3-level factors. Run i has digits
// a = i/9, b = (i/3)%3, e = i%3 and columns (a, b, a+b, a+2b, e) mod 3.
OrthogonalArray build_l27(const FactorSpace& space);

// L9 for up to 4 factors, L27 for 5..13 factors. The first five L27 columns
// coincide with build_l27.
OrthogonalArray build_orthogonal_array(const FactorSpace& space);

struct BalanceReport {
    bool pass = true;
    std::optional<std::pair<std::size_t, std::size_t>> violating_columns;
};

BalanceReport verify_strength2(const OrthogonalArray& array);

struct HyperConfig {
    int hidden_layers = 1;
    int neurons = 10;
    ActivationKind activation = ActivationKind::Relu;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double learning_rate = 1e-3;

    friend bool operator==(const HyperConfig&, const HyperConfig&) = default;
};

std::string describe(const HyperConfig& config);

std::vector<LevelValue> decode_levels(const OrthogonalArray& array, std::size_t index,
                                      const FactorSpace& space);

// Level indices -> HyperConfig. Requires factors named HL, NN, ACT, OPT and LR.
HyperConfig config_from_levels(const FactorSpace& space, const std::vector<int>& levels);

HyperConfig decode_run(const OrthogonalArray& array, std::size_t index, const FactorSpace& space);

// Inverse of config_from_levels; throws DesignError if a value is not a level.
std::vector<int> encode_config(const HyperConfig& config, const FactorSpace& space);

}  // namespace oatune
