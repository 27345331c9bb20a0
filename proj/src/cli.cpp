#include "oatune/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "oatune/analysis.hpp"
#include "oatune/csv.hpp"
#include "oatune/dataset.hpp"
#include "oatune/design.hpp"
#include "oatune/errors.hpp"
#include "oatune/io.hpp"
#include "oatune/stiffness.hpp"
#include "oatune/svg.hpp"
#include "oatune/training.hpp"

namespace fs = std::filesystem;

namespace oatune {

namespace {

// Usage errors detected after parsing.
class UsageError : public Error {
public:
    using Error::Error;
};

struct CommonOptions {
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::string preset;
    std::string factors_file;
    std::size_t workers = 1;
    int max_epochs = 5000;
    int patience = 200;
    int batch_size = 32;
    std::string criterion = "train-r2";
    std::string scaler_fit = "full";
};

struct DataOptions {
    std::string data_path;
    std::size_t synthetic = 0;
    bool strict = false;
    std::vector<double> split{0.8, 0.15, 0.05};
};

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::uint64_t resolve_seed(const CommonOptions& o) {
    if (o.seed) return *o.seed;
    if (const char* env = std::getenv("OATUNE_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("OATUNE_SEED is not an unsigned integer: '") + env + "'");
    }
    return 0;
}

FactorSpace resolve_space(const CommonOptions& o) {
    if (!o.factors_file.empty()) {
        if (!o.preset.empty()) throw UsageError("--preset and --factors are mutually exclusive");
        return factor_space_from_json(read_json_file(o.factors_file));
    }
    if (o.preset.empty() || o.preset == "paper") return paper_factor_space();
    throw UsageError("unknown preset '" + o.preset + "' (available: paper)");
}

TrainSettings resolve_settings(const CommonOptions& o, std::uint64_t seed) {
    TrainSettings s;
    s.max_epochs = o.max_epochs;
    s.patience = o.patience;
    s.batch_size = o.batch_size;
    s.seed = seed;
    s.criterion = parse_criterion(o.criterion);
    s.validate();
    return s;
}

ScalerFit resolve_scaler_fit(const std::string& s) {
    if (s == "full") return ScalerFit::Full;
    if (s == "train") return ScalerFit::Train;
    throw UsageError("unknown --scaler-fit '" + s + "' (full or train)");
}

Dataset resolve_dataset(const DataOptions& d, std::uint64_t seed) {
    if (!d.data_path.empty() && d.synthetic > 0) throw UsageError("--data and --synthetic are mutually exclusive");
    if (!d.data_path.empty()) return load_dataset(d.data_path, d.strict);
    if (d.synthetic > 0) return generate_synthetic(d.synthetic, seed);
    throw UsageError("a dataset is required: pass --data <csv> or --synthetic <n>");
}

SplitSpec resolve_split(const DataOptions& d, std::uint64_t seed) {
    if (d.split.size() != 3) throw UsageError("--split needs three ratios");
    return {d.split[0], d.split[1], d.split[2], seed};
}

Json settings_json(const CommonOptions& o, const TrainSettings& s) {
    return {{"max_epochs", s.max_epochs},
            {"patience", s.patience},
            {"batch_size", s.batch_size},
            {"criterion", to_string(s.criterion)},
            {"scaler_fit", o.scaler_fit},
            {"workers", o.workers},
            {"preset", o.preset.empty() && o.factors_file.empty() ? "paper" : o.preset},
            {"factors_file", o.factors_file}};
}

Json dataset_json(const DataOptions& d, const Dataset& ds, const SplitSpec& split) {
    Json j{{"provenance", ds.provenance}, {"rows", ds.size()}, {"strict", d.strict}};
    if (!d.data_path.empty()) j["path"] = d.data_path;
    if (d.synthetic > 0) j["synthetic"] = d.synthetic;
    j["split"] = {{"train", split.train}, {"validation", split.validation}, {"test", split.test}, {"seed", split.seed}};
    return j;
}

void add_common(CLI::App* app, CommonOptions& o, bool training) {
    app->add_option("--seed", o.seed, "Seed for data synthesis, splitting and training (env OATUNE_SEED)");
    app->add_option("--out-dir", o.out_dir, "Directory for output files");
    app->add_option("--preset", o.preset, "Factor preset (paper)");
    app->add_option("--factors", o.factors_file, "JSON factor space instead of a preset");
    if (!training) return;
    app->add_option("--workers", o.workers, "Concurrent training runs")->check(CLI::PositiveNumber);
    app->add_option("--max-epochs", o.max_epochs, "Maximum epochs per run")->check(CLI::PositiveNumber);
    app->add_option("--patience", o.patience, "Early-stopping patience")->check(CLI::PositiveNumber);
    app->add_option("--batch-size", o.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
    app->add_option("--criterion", o.criterion, "Response criterion")->check(CLI::IsMember({"train-r2", "val-r2"}));
    app->add_option("--scaler-fit", o.scaler_fit, "Fit the scaler on the full dataset or on train only")
        ->check(CLI::IsMember({"full", "train"}));
}

void add_data(CLI::App* app, DataOptions& d) {
    app->add_option("--data", d.data_path, "Dataset CSV");
    app->add_option("--synthetic", d.synthetic, "Generate a synthetic dataset of n samples");
    app->add_flag("--strict", d.strict, "Validate every row against the parameter bounds");
    app->add_option("--split", d.split, "Train, validation and test ratios")->expected(3)->delimiter(',');
}

std::string to_file_string(const std::function<void(std::ostream&)>& fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

// ---- design ----------------------------------------------------------------

int cmd_design(const CommonOptions& o, const std::string& out_path) {
    const FactorSpace space = resolve_space(o);
    const OrthogonalArray array = build_orthogonal_array(space);
    const auto report = verify_strength2(array);
    if (!report.pass) throw DesignError("generated design is not balanced");
    const fs::path path = out_path.empty() ? fs::path(o.out_dir) / "design.csv" : fs::path(out_path);
    write_text_file(path, to_file_string([&](std::ostream& os) { write_design_csv(os, array, space); }));
    std::cerr << array.rows() << " of " << space.full_factorial_size() << " full-factorial cases\n";
    std::cout << path.string() << '\n';
    return 0;
}

// ---- run -------------------------------------------------------------------

int cmd_run(const CommonOptions& o, const DataOptions& d) {
    const std::uint64_t seed = resolve_seed(o);
    const FactorSpace space = resolve_space(o);
    const TrainSettings settings = resolve_settings(o, seed);
    const ScalerFit fit = resolve_scaler_fit(o.scaler_fit);
    const Dataset dataset = resolve_dataset(d, seed);
    const SplitSpec split = resolve_split(d, seed);
    const OrthogonalArray array = build_orthogonal_array(space);

    const fs::path out(o.out_dir);
    fs::create_directories(out / "losses");
    const std::string started = timestamp();
    const PreparedData prepared = prepare_data(dataset, split, fit);
    std::cerr << "training " << array.rows() << " runs (" << space.full_factorial_size()
              << " in the full factorial) on " << prepared.split.train.size() << " samples\n";
    const DesignResult result = run_design(array, space, prepared.data, settings, o.workers);

    std::string log;
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const auto& r = result.runs[i];
        log += run_record(r, i).dump() + "\n";
        std::ostringstream name;
        name << "run_" << std::setw(2) << std::setfill('0') << i + 1 << ".csv";
        write_text_file(out / "losses" / name.str(), to_file_string([&](std::ostream& os) { write_loss_history(os, r); }));
        std::cerr << "run " << i + 1 << ": " << describe(r.config) << " -> " << r.response << (r.failed ? " (failed)" : "")
                  << '\n';
    }
    write_text_file(out / "runs.jsonl", log);
    write_text_file(out / "responses.csv", to_file_string([&](std::ostream& os) { write_responses(os, result.responses); }));
    write_text_file(out / "design.csv", to_file_string([&](std::ostream& os) { write_design_csv(os, array, space); }));

    Json manifest{{"tool", "oatune"},
                  {"version", OATUNE_VERSION},
                  {"command", "run"},
                  {"started", started},
                  {"finished", timestamp()},
                  {"seed", seed},
                  {"settings", settings_json(o, settings)},
                  {"factor_space", to_json(space)},
                  {"dataset", dataset_json(d, dataset, split)}};
    write_text_file(out / "manifest.json", manifest.dump(2) + "\n");
    std::cout << (out / "responses.csv").string() << '\n';
    return 0;
}

// ---- analyze ---------------------------------------------------------------

int cmd_analyze(const CommonOptions& o, const std::string& responses_path, bool sn, bool plot) {
    const FactorSpace space = resolve_space(o);
    const OrthogonalArray array = build_orthogonal_array(space);
    std::ifstream in(responses_path);
    if (!in) throw Error("cannot open responses file '" + responses_path + "'");
    const std::vector<double> responses = read_responses(in);
    if (responses.size() != array.rows()) {
        throw ShapeError("responses file has " + std::to_string(responses.size()) + " rows but the design has " +
                         std::to_string(array.rows()) + " runs");
    }
    const MainEffectsTable table = main_effects(array, responses, sn);
    const fs::path out(o.out_dir);
    write_text_file(out / "main_effects.csv",
                    to_file_string([&](std::ostream& os) { write_main_effects_csv(os, table, space, sn); }));
    const Json optimum = optimum_json(table, space);
    write_text_file(out / "optimum.json", optimum.dump(2) + "\n");
    if (plot) write_text_file(out / "main_effects.svg", svg::main_effects(table, space));
    if (optimum.contains("config")) std::cout << describe(config_from_json(optimum["config"])) << '\n';
    else std::cout << optimum["selected_values"].dump() << '\n';
    return 0;
}

// ---- train-best ------------------------------------------------------------

Json metrics_block(const Eigen::MatrixXd& y, const Eigen::MatrixXd& yhat, std::string& csv, const std::string& split) {
    Json j;
    if (y.rows() == 0) return nullptr;
    try {
        const auto pooled = compute_metrics(y, yhat);
        j["pooled"] = to_json(pooled);
        csv += split + ",pooled," + format_double(pooled.r2) + "," + format_double(pooled.mae) + "," +
               format_double(pooled.mse) + "," + format_double(pooled.rmse) + "\n";
    } catch (const DomainError& e) {
        j["pooled"] = {{"error", e.what()}};
    }
    Json comps = Json::object();
    for (std::size_t c = 0; c < kOutputCount; ++c) {
        const std::string name(kOutputColumns[c]);
        try {
            const auto m = per_component_metrics(y, yhat, c);
            comps[name] = to_json(m);
            csv += split + "," + name + "," + format_double(m.r2) + "," + format_double(m.mae) + "," +
                   format_double(m.mse) + "," + format_double(m.rmse) + "\n";
        } catch (const Error& e) {
            comps[name] = {{"error", e.what()}};
            csv += split + "," + name + ",nan,nan,nan,nan\n";
        }
    }
    j["components"] = comps;
    return j;
}

int cmd_train_best(const CommonOptions& o, const DataOptions& d, const std::string& optimum_path, bool denormalized) {
    const std::uint64_t seed = resolve_seed(o);
    const Json optimum = read_json_file(optimum_path);
    if (!optimum.contains("config")) throw SchemaError("optimum file has no 'config' record");
    const HyperConfig config = config_from_json(optimum["config"]);
    const TrainSettings settings = resolve_settings(o, seed);
    const Dataset dataset = resolve_dataset(d, seed);
    const SplitSpec split = resolve_split(d, seed);
    const PreparedData prepared = prepare_data(dataset, split, resolve_scaler_fit(o.scaler_fit));

    std::cerr << "training " << describe(config) << '\n';
    const std::string started = timestamp();
    const TrainResult result = train_model(config, prepared.data, settings);
    if (result.failed) throw TrainingError("training diverged: " + result.failure);

    const fs::path out(o.out_dir);
    save_model(out / "model.json", {result.model, prepared.scaler, config});

    std::string csv = "split,component,r2_percent,mae,mse,rmse\n";
    Json report{{"config", to_json(config)}, {"stopped_epoch", result.stopped_epoch}, {"best_epoch", result.best_epoch}};
    const auto& data = prepared.data;
    report["units"] = denormalized ? "original" : "normalized";
    const MinMaxScaler out_scaler = prepared.scaler.slice(kInputCount, kOutputCount);
    auto block = [&](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const std::string& split) -> Json {
        if (x.rows() == 0) return nullptr;
        const Eigen::MatrixXd yhat = forward(result.model, x);
        if (!denormalized) return metrics_block(y, yhat, csv, split);
        return metrics_block(out_scaler.inverse_transform(y), out_scaler.inverse_transform(yhat), csv, split);
    };
    report["train"] = block(data.train_x, data.train_y, "train");
    report["validation"] = block(data.validation_x, data.validation_y, "validation");
    report["test"] = block(data.test_x, data.test_y, "test");
    write_text_file(out / "metrics.json", report.dump(2) + "\n");
    write_text_file(out / "metrics.csv", csv);
    write_text_file(out / "loss_history.csv", to_file_string([&](std::ostream& os) { write_loss_history(os, result); }));
    write_text_file(out / "loss.svg", svg::line_plot("Loss convergence", "epoch", "MSE",
                                                     {{"train", result.train_loss}, {"validation", result.validation_loss}}, true));
    if (data.test_x.rows() > 0) {
        const Eigen::MatrixXd pred = forward(result.model, data.test_x);
        std::vector<double> a(data.test_y.data(), data.test_y.data() + data.test_y.size());
        std::vector<double> p(pred.data(), pred.data() + pred.size());
        write_text_file(out / "regression_test.svg", svg::scatter("Test set (normalized)", a, p));
    }
    Json manifest{{"tool", "oatune"},
                  {"version", OATUNE_VERSION},
                  {"command", "train-best"},
                  {"started", started},
                  {"finished", timestamp()},
                  {"seed", seed},
                  {"optimum", optimum_path},
                  {"settings", settings_json(o, settings)},
                  {"dataset", dataset_json(d, dataset, split)}};
    write_text_file(out / "train_manifest.json", manifest.dump(2) + "\n");
    if (report["test"].is_object() && report["test"]["pooled"].contains("r2_percent")) {
        std::cout << "test R2 = " << report["test"]["pooled"]["r2_percent"].get<double>() << " %\n";
    }
    return 0;
}

// ---- predict ---------------------------------------------------------------

// Accepts either the 12 input columns (with l_f in place of lambda_f allowed)
// or a full 33-column dataset file.
Eigen::MatrixXd read_prediction_inputs(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> header;
    if (!reader.next(header)) throw SchemaError("input file is empty");
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!pos.emplace(header[i], i).second) throw SchemaError("duplicate column '" + header[i] + "'");
    }
    const bool full = header.size() == kColumnCount;
    const bool by_length = pos.count("l_f") > 0;
    if (header.size() != kColumnCount && header.size() != kInputCount) {
        throw SchemaError("input file has " + std::to_string(header.size()) + " columns; expected " +
                          std::to_string(kInputCount) + " inputs or the " + std::to_string(kColumnCount) + "-column dataset schema");
    }
    for (std::size_t c = 0; c < kInputCount; ++c) {
        std::string name(kInputColumns[c]);
        if (c == AspectRatio && by_length && !pos.count(name)) name = "l_f";
        if (!pos.count(name)) throw SchemaError("missing column '" + name + "'");
    }
    if (full) {
        for (auto q : kOutputColumns) {
            if (!pos.count(std::string(q))) throw SchemaError("missing column '" + std::string(q) + "'");
        }
    }
    std::vector<std::array<double, kInputCount>> rows;
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        if (fields.size() != header.size()) {
            throw ParseError("line " + std::to_string(reader.line()) + ": expected " + std::to_string(header.size()) + " cells");
        }
        auto cell = [&](const std::string& name) {
            double v = 0.0;
            if (!parse_double(fields[pos.at(name)], v)) {
                throw ParseError("line " + std::to_string(reader.line()) + ", column '" + name + "': cannot parse '" +
                                 fields[pos.at(name)] + "'");
            }
            return v;
        };
        std::array<double, kInputCount> x{};
        for (std::size_t c = 0; c < kInputCount; ++c) {
            const std::string name(kInputColumns[c]);
            if (c == AspectRatio && !pos.count(name)) x[c] = aspect_ratio(cell("l_f"), cell("d_f"));
            else x[c] = cell(name);
        }
        rows.push_back(x);
    }
    if (rows.empty()) throw SchemaError("input file has no rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kInputCount));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < kInputCount; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return m;
}

int cmd_predict(const CommonOptions& o, const std::string& model_path, const std::string& input_path,
                const std::string& out_path) {
    const SavedModel saved = load_model(model_path);
    std::ifstream in(input_path);
    if (!in) throw Error("cannot open input file '" + input_path + "'");
    const Eigen::MatrixXd raw = read_prediction_inputs(in);

    const MinMaxScaler in_scaler = saved.scaler.slice(0, kInputCount);
    const MinMaxScaler out_scaler = saved.scaler.slice(kInputCount, kOutputCount);
    const Eigen::MatrixXd q = out_scaler.inverse_transform(forward(saved.model, in_scaler.transform(raw)));

    std::ostringstream os;
    os << "row";
    for (auto c : kInputColumns) os << ',' << c;
    for (auto c : kOutputColumns) os << ',' << c;
    os << ",E11,E22,E33\n";
    int unphysical = 0;
    for (Eigen::Index r = 0; r < q.rows(); ++r) {
        os << r + 1;
        for (Eigen::Index c = 0; c < raw.cols(); ++c) os << ',' << format_double(raw(r, c));
        std::array<double, kOutputCount> comps{};
        for (Eigen::Index c = 0; c < q.cols(); ++c) {
            comps[static_cast<std::size_t>(c)] = q(r, c);
            os << ',' << format_double(q(r, c));
        }
        try {
            const auto e = engineering_constants(assemble_stiffness(comps));
            os << ',' << format_double(e.e11) << ',' << format_double(e.e22) << ',' << format_double(e.e33);
        } catch (const MechanicsError&) {
            ++unphysical;
            os << ",nan,nan,nan";
        }
        os << '\n';
    }
    const fs::path path = out_path.empty() ? fs::path(o.out_dir) / "predictions.csv" : fs::path(out_path);
    write_text_file(path, os.str());
    if (unphysical > 0) std::cerr << unphysical << " predicted stiffness matrices are not positive definite\n";
    std::cout << path.string() << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Taguchi orthogonal-array hyperparameter optimization for stiffness surrogate networks", "oatune"};
    app.set_version_flag("--version", OATUNE_VERSION);
    app.require_subcommand(1);

    CommonOptions design_o, run_o, analyze_o, best_o, predict_o;
    DataOptions run_d, best_d;
    std::string design_out, responses_path, optimum_path, model_path, input_path, predict_out;
    bool sn = false;
    bool plot = false;
    bool denormalized = false;

    auto* design = app.add_subcommand("design", "Write the orthogonal-array design");
    add_common(design, design_o, false);
    design->add_option("--out", design_out, "Design CSV path (default <out-dir>/design.csv)");

    auto* run = app.add_subcommand("run", "Train every design run and record the responses");
    add_common(run, run_o, true);
    add_data(run, run_d);

    auto* analyze = app.add_subcommand("analyze", "Main-effects analysis and optimum selection");
    add_common(analyze, analyze_o, false);
    analyze->add_option("--responses", responses_path, "Responses CSV (run,response)")->required();
    analyze->add_flag("--sn", sn, "Include larger-is-better S/N ratios");
    analyze->add_flag("--plot", plot, "Write main_effects.svg");

    auto* best = app.add_subcommand("train-best", "Train the selected configuration and report metrics");
    add_common(best, best_o, true);
    add_data(best, best_d);
    best->add_option("--optimum", optimum_path, "optimum.json from analyze")->required();
    best->add_flag("--denormalized", denormalized, "Report metrics in original output units");

    auto* predict = app.add_subcommand("predict", "Predict stiffness and engineering constants");
    add_common(predict, predict_o, false);
    predict->add_option("--model", model_path, "model.json from train-best")->required();
    predict->add_option("--input", input_path, "Input CSV")->required();
    predict->add_option("--out", predict_out, "Predictions CSV path (default <out-dir>/predictions.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*design) return cmd_design(design_o, design_out);
        if (*run) return cmd_run(run_o, run_d);
        if (*analyze) return cmd_analyze(analyze_o, responses_path, sn, plot);
        if (*best) return cmd_train_best(best_o, best_d, optimum_path, denormalized);
        if (*predict) return cmd_predict(predict_o, model_path, input_path, predict_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("oatune");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace oatune
