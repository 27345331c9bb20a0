#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "oatune/analysis.hpp"
#include "oatune/design.hpp"
#include "oatune/network.hpp"
#include "oatune/scaler.hpp"
#include "oatune/training.hpp"

namespace oatune {

using Json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;

// {"factors": [{"name": "HL", "levels": [1, 2, 3]}, ...]}; integers, reals and strings allowed.
FactorSpace factor_space_from_json(const Json& j);
Json to_json(const FactorSpace& space);

Json to_json(const HyperConfig& config);
HyperConfig config_from_json(const Json& j);

Json to_json(const EvaluationMetrics& m);

// Header `run,<factor names>` with decoded level labels, one row per run.
void write_design_csv(std::ostream& out, const OrthogonalArray& array, const FactorSpace& space);

// `run,response`, runs numbered from 1 in design order.
void write_responses(std::ostream& out, const std::vector<double>& responses);
std::vector<double> read_responses(std::istream& in);

struct SavedModel {
    Mlp model;
    MinMaxScaler scaler;  // 12 input columns followed by 21 output columns
    std::optional<HyperConfig> config;
};

Json model_to_json(const SavedModel& saved);
SavedModel model_from_json(const Json& j);
void save_model(const std::filesystem::path& path, const SavedModel& saved);
SavedModel load_model(const std::filesystem::path& path);

// One log record per run.
Json run_record(const TrainResult& result, std::size_t run_index);

// `epoch,train_loss,val_loss`
void write_loss_history(std::ostream& out, const TrainResult& result);

// `factor,level,mean_response[,sn_db]`
void write_main_effects_csv(std::ostream& out, const MainEffectsTable& table, const FactorSpace& space, bool sn);

Json optimum_json(const MainEffectsTable& table, const FactorSpace& space);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace oatune
