#include "oatune/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "oatune/csv.hpp"
#include "oatune/errors.hpp"

namespace oatune {

namespace {

LevelValue level_from_json(const Json& v, const std::string& factor) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    throw DesignError("factor '" + factor + "' has a level that is neither number nor string");
}

Json level_to_json(const LevelValue& v) {
    return std::visit([](const auto& x) { return Json(x); }, v);
}

}  // namespace

FactorSpace factor_space_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array()) {
        throw DesignError("factor config needs a 'factors' array");
    }
    std::vector<Factor> factors;
    for (const auto& f : j["factors"]) {
        if (!f.contains("name") || !f["name"].is_string()) throw DesignError("factor without a name");
        const std::string name = f["name"].get<std::string>();
        if (!f.contains("levels") || !f["levels"].is_array() || f["levels"].size() != 3) {
            throw DesignError("factor '" + name + "' must have exactly 3 levels");
        }
        Factor factor{name, {}};
        for (std::size_t l = 0; l < 3; ++l) factor.levels[l] = level_from_json(f["levels"][l], name);
        factors.push_back(std::move(factor));
    }
    return FactorSpace(std::move(factors));
}

Json to_json(const FactorSpace& space) {
    Json arr = Json::array();
    for (const auto& f : space.factors()) {
        Json levels = Json::array();
        for (const auto& l : f.levels) levels.push_back(level_to_json(l));
        arr.push_back({{"name", f.name}, {"levels", levels}});
    }
    return {{"factors", arr}};
}

Json to_json(const HyperConfig& c) {
    return {{"HL", c.hidden_layers},
            {"NN", c.neurons},
            {"ACT", to_string(c.activation)},
            {"OPT", to_string(c.optimizer)},
            {"LR", c.learning_rate}};
}

HyperConfig config_from_json(const Json& j) {
    try {
        HyperConfig c;
        c.hidden_layers = j.at("HL").get<int>();
        c.neurons = j.at("NN").get<int>();
        c.activation = parse_activation(j.at("ACT").get<std::string>());
        c.optimizer = parse_optimizer(j.at("OPT").get<std::string>());
        c.learning_rate = j.at("LR").get<double>();
        if (c.hidden_layers < 0 || c.neurons < 1 || !(c.learning_rate > 0)) throw DesignError("invalid configuration values");
        return c;
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("malformed configuration: ") + e.what());
    }
}

Json to_json(const EvaluationMetrics& m) {
    return {{"r2_percent", m.r2}, {"mae", m.mae}, {"mse", m.mse}, {"rmse", m.rmse}};
}

void write_design_csv(std::ostream& out, const OrthogonalArray& array, const FactorSpace& space) {
    out << "run";
    for (const auto& f : space.factors()) out << ',' << f.name;
    out << '\n';
    for (std::size_t r = 0; r < array.rows(); ++r) {
        out << r + 1;
        for (const auto& v : decode_levels(array, r, space)) out << ',' << level_label(v);
        out << '\n';
    }
}

void write_responses(std::ostream& out, const std::vector<double>& responses) {
    out << "run,response\n";
    for (std::size_t i = 0; i < responses.size(); ++i) out << i + 1 << ',' << format_double(responses[i]) << '\n';
}

std::vector<double> read_responses(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw SchemaError("responses file is empty");
    if (fields.size() != 2 || fields[0] != "run" || fields[1] != "response") {
        throw SchemaError("responses header must be 'run,response'");
    }
    std::vector<double> out;
    while (reader.next(fields)) {
        double run = 0.0;
        double value = 0.0;
        if (fields.size() != 2 || !parse_double(fields[0], run) || !parse_double(fields[1], value)) {
            throw ParseError("responses line " + std::to_string(reader.line()) + " is malformed");
        }
        if (run != static_cast<double>(out.size() + 1)) {
            throw ParseError("responses line " + std::to_string(reader.line()) + ": expected run " +
                             std::to_string(out.size() + 1));
        }
        if (!std::isfinite(value)) throw ParseError("responses line " + std::to_string(reader.line()) + ": non-finite response");
        out.push_back(value);
    }
    return out;
}

Json model_to_json(const SavedModel& saved) {
    const Mlp& m = saved.model;
    Json layers = Json::array();
    for (std::size_t l = 0; l < m.layer_count(); ++l) {
        const auto w = m.weights(l);
        const auto b = m.bias(l);
        std::vector<double> weights(w.data(), w.data() + w.size());
        std::vector<double> bias(b.data(), b.data() + b.size());
        layers.push_back({{"rows", w.rows()}, {"cols", w.cols()}, {"weights", weights}, {"bias", bias}});
    }
    Json columns = Json::array();
    for (auto c : kInputColumns) columns.push_back(std::string(c));
    for (auto c : kOutputColumns) columns.push_back(std::string(c));
    Json j{{"format", "oatune-model"},
           {"version", kModelFormatVersion},
           {"layer_sizes", m.layer_sizes()},
           {"activation", to_string(m.activation())},
           {"output_activation", "identity"},
           {"layers", layers},
           {"scaler", {{"kind", "minmax"}, {"columns", columns}, {"min", saved.scaler.min()}, {"max", saved.scaler.max()}}}};
    if (saved.config) j["config"] = to_json(*saved.config);
    return j;
}

SavedModel model_from_json(const Json& j) {
    try {
        if (j.at("format").get<std::string>() != "oatune-model") throw SchemaError("not an oatune model file");
        const int version = j.at("version").get<int>();
        if (version != kModelFormatVersion) throw SchemaError("unsupported model version " + std::to_string(version));
        SavedModel saved;
        saved.model = Mlp(j.at("layer_sizes").get<std::vector<int>>(), parse_activation(j.at("activation").get<std::string>()));
        const auto& layers = j.at("layers");
        if (layers.size() != saved.model.layer_count()) throw SchemaError("layer count does not match layer_sizes");
        for (std::size_t l = 0; l < saved.model.layer_count(); ++l) {
            auto w = saved.model.weights(l);
            auto b = saved.model.bias(l);
            const auto weights = layers[l].at("weights").get<std::vector<double>>();
            const auto bias = layers[l].at("bias").get<std::vector<double>>();
            if (layers[l].at("rows").get<long>() != w.rows() || layers[l].at("cols").get<long>() != w.cols() ||
                weights.size() != static_cast<std::size_t>(w.size()) || bias.size() != static_cast<std::size_t>(b.size())) {
                throw SchemaError("layer " + std::to_string(l) + " has inconsistent shape");
            }
            std::copy(weights.begin(), weights.end(), w.data());
            std::copy(bias.begin(), bias.end(), b.data());
        }
        const auto& sc = j.at("scaler");
        saved.scaler = MinMaxScaler(sc.at("min").get<std::vector<double>>(), sc.at("max").get<std::vector<double>>());
        if (saved.scaler.columns() != kColumnCount) throw SchemaError("scaler must cover 33 columns");
        if (saved.model.input_size() != static_cast<int>(kInputCount) || saved.model.output_size() != static_cast<int>(kOutputCount)) {
            throw SchemaError("model must map 12 inputs to 21 outputs");
        }
        if (j.contains("config")) saved.config = config_from_json(j["config"]);
        return saved;
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("malformed model file: ") + e.what());
    } catch (const ShapeError& e) {
        throw SchemaError(std::string("malformed model file: ") + e.what());
    }
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

void save_model(const std::filesystem::path& path, const SavedModel& saved) {
    write_text_file(path, model_to_json(saved).dump(2) + "\n");
}

SavedModel load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

Json run_record(const TrainResult& r, std::size_t run_index) {
    Json j{{"run", run_index + 1},
           {"config", to_json(r.config)},
           {"seed", r.seed},
           {"response", r.response},
           {"failed", r.failed},
           {"stopped_epoch", r.stopped_epoch},
           {"best_epoch", r.best_epoch},
           {"stopped_by_patience", r.stopped_by_patience},
           {"wall_seconds", r.wall_seconds}};
    if (r.failed) j["failure"] = r.failure;
    if (std::isfinite(r.best_validation_loss)) j["best_validation_loss"] = r.best_validation_loss;
    if (r.train_metrics) j["train"] = to_json(*r.train_metrics);
    if (r.validation_metrics) j["validation"] = to_json(*r.validation_metrics);
    if (r.test_metrics) j["test"] = to_json(*r.test_metrics);
    return j;
}

void write_loss_history(std::ostream& out, const TrainResult& r) {
    out << "epoch,train_loss,val_loss\n";
    for (std::size_t e = 0; e < r.train_loss.size(); ++e) {
        out << e + 1 << ',' << format_double(r.train_loss[e]) << ',' << format_double(r.validation_loss[e]) << '\n';
    }
}

void write_main_effects_csv(std::ostream& out, const MainEffectsTable& table, const FactorSpace& space, bool sn) {
    if (table.factors.size() != space.size()) throw ShapeError("main-effects table does not match factor space");
    out << "factor,level,mean_response" << (sn ? ",sn_db" : "") << '\n';
    for (std::size_t f = 0; f < space.size(); ++f) {
        for (std::size_t l = 0; l < 3; ++l) {
            const auto& le = table.factors[f].levels[l];
            out << space[f].name << ',' << level_label(space[f].levels[l]) << ',' << format_double(le.mean);
            if (sn) out << ',' << (le.sn_db ? format_double(*le.sn_db) : std::string("nan"));
            out << '\n';
        }
    }
}

Json optimum_json(const MainEffectsTable& table, const FactorSpace& space) {
    Json levels = Json::object();
    Json labels = Json::object();
    for (std::size_t f = 0; f < space.size(); ++f) {
        const int sel = table.factors.at(f).selected;
        levels[space[f].name] = sel;
        labels[space[f].name] = level_to_json(space[f].levels[static_cast<std::size_t>(sel)]);
    }
    Json j{{"selected_levels", levels}, {"selected_values", labels}, {"grand_mean", table.grand_mean}};
    try {
        j["config"] = to_json(select_optimum(table, space));
    } catch (const DesignError&) {
        // custom factor spaces need not describe a network
    }
    return j;
}

}  // namespace oatune
