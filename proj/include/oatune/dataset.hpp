#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace oatune {

inline constexpr std::size_t kInputCount = 12;
inline constexpr std::size_t kOutputCount = 21;
inline constexpr std::size_t kColumnCount = kInputCount + kOutputCount;

extern const std::array<std::string_view, kInputCount> kInputColumns;
extern const std::array<std::string_view, kOutputCount> kOutputColumns;

// Column positions inside Sample::inputs.
enum Input : std::size_t { EM, NuM, EF, NuF, FiberDiameter, AspectRatio, VolumeFraction, A11, A22, Gamma1, Gamma2, Gamma3 };

struct Sample {
    std::array<double, kInputCount> inputs{};
    std::array<double, kOutputCount> outputs{};  // Q11, Q12, ..., Q66 (upper triangle, row order)

    friend bool operator==(const Sample&, const Sample&) = default;
};

struct Dataset {
    std::vector<Sample> samples;
    std::string provenance;

    std::size_t size() const noexcept { return samples.size(); }
    bool empty() const noexcept { return samples.empty(); }

    // Rows are samples; columns are the 12 inputs followed by the 21 outputs.
    Eigen::MatrixXd matrix() const;
    Eigen::MatrixXd matrix(const std::vector<std::size_t>& rows) const;
};

struct ValidationOptions {
    double angle_max = 2.0 * std::numbers::pi;
    // Slack on the orientation-tensor inequalities, so rounded values
    // such as a11 = a22 = 0.333 are accepted.
    double orientation_tolerance = 1e-2;
};

struct Violation {
    std::string field;
    double value = 0.0;
    double bound = 0.0;
    std::string message;
};

std::vector<Violation> validate_sample(const Sample& sample, const ValidationOptions& options = {});

// Throws SchemaError / ParseError / ValidationError with row and column context.
Dataset load_dataset(const std::filesystem::path& path, bool strict, const ValidationOptions& options = {});
Dataset read_dataset(std::istream& in, bool strict, const ValidationOptions& options = {},
                     std::string provenance = "<stream>");
void write_dataset(std::ostream& out, const Dataset& dataset);
std::string dataset_header();

struct SplitSpec {
    double train = 0.8;
    double validation = 0.15;
    double test = 0.05;
    std::uint64_t seed = 0;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

// Validation and test sizes are floor(n * ratio); the remainder goes to train.
SplitIndices split_dataset(std::size_t n, const SplitSpec& spec);
SplitIndices split_dataset(const Dataset& dataset, const SplitSpec& spec);

// Non-physical closed-form stand-in for homogenization results. Inputs are
// uniform within the parameter bounds, outputs come from synthetic_stiffness.
Dataset generate_synthetic(std::size_t n, std::uint64_t seed, const ValidationOptions& options = {});

}  // namespace oatune
