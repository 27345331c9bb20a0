#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oatune/analysis.hpp"
#include "oatune/cli.hpp"
#include "oatune/dataset.hpp"
#include "oatune/design.hpp"
#include "oatune/errors.hpp"
#include "oatune/io.hpp"
#include "oatune/network.hpp"
#include "oatune/stiffness.hpp"
#include "oatune/training.hpp"

namespace py = pybind11;
using namespace oatune;

namespace {

FactorSpace space_from(const py::object& factors_json) {
    if (factors_json.is_none()) return paper_factor_space();
    return factor_space_from_json(Json::parse(py::str(factors_json).cast<std::string>()));
}

py::dict config_dict(const HyperConfig& c) {
    py::dict d;
    d["HL"] = c.hidden_layers;
    d["NN"] = c.neurons;
    d["ACT"] = to_string(c.activation);
    d["OPT"] = to_string(c.optimizer);
    d["LR"] = c.learning_rate;
    return d;
}

HyperConfig config_from(const py::dict& d) {
    HyperConfig c;
    c.hidden_layers = d["HL"].cast<int>();
    c.neurons = d["NN"].cast<int>();
    c.activation = parse_activation(d["ACT"].cast<std::string>());
    c.optimizer = parse_optimizer(d["OPT"].cast<std::string>());
    c.learning_rate = d["LR"].cast<double>();
    return c;
}

py::dict metrics_dict(const EvaluationMetrics& m) {
    py::dict d;
    d["r2"] = m.r2;
    d["mae"] = m.mae;
    d["mse"] = m.mse;
    d["rmse"] = m.rmse;
    return d;
}

std::vector<std::vector<int>> rows_of(const OrthogonalArray& a) {
    std::vector<std::vector<int>> rows;
    for (std::size_t r = 0; r < a.rows(); ++r) rows.push_back(a.row(r));
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Taguchi orthogonal-array tuning of stiffness surrogate networks";

    auto base = py::register_exception<Error>(m, "OatuneError", PyExc_RuntimeError);
    py::register_exception<TrainingError>(m, "TrainingError", base.ptr());

    m.def("build_l27", [] { return rows_of(build_l27(paper_factor_space())); },
          "L27 level indices (27 rows x 5 columns) for the built-in factor space.");
    m.def(
        "build_orthogonal_array",
        [](const py::object& factors_json) { return rows_of(build_orthogonal_array(space_from(factors_json))); },
        py::arg("factors_json") = py::none());
    m.def(
        "verify_strength2",
        [](const std::vector<std::vector<int>>& rows) {
            const auto report = verify_strength2(OrthogonalArray(rows));
            return py::make_tuple(report.pass, report.violating_columns ? py::cast(*report.violating_columns) : py::none());
        },
        py::arg("rows"));
    m.def(
        "decode_run",
        [](std::size_t index, const py::object& factors_json) {
            const FactorSpace space = space_from(factors_json);
            return config_dict(decode_run(build_orthogonal_array(space), index, space));
        },
        py::arg("index"), py::arg("factors_json") = py::none());
    m.def("describe", [](const py::dict& c) { return describe(config_from(c)); }, py::arg("config"));

    m.def("activation", [](const std::string& name, double x) { return activation_eval(parse_activation(name), x); },
          py::arg("name"), py::arg("x"));
    m.def("activation_grad", [](const std::string& name, double x) { return activation_grad(parse_activation(name), x); },
          py::arg("name"), py::arg("x"));

    m.def(
        "compute_metrics",
        [](const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted) {
            return metrics_dict(compute_metrics(actual, predicted));
        },
        py::arg("actual"), py::arg("predicted"), "Pooled R2 (percent), MAE, MSE and RMSE.");
    m.def("sn_larger_better", [](const std::vector<double>& v) { return sn_larger_better(v); }, py::arg("values"));
    m.def(
        "main_effects",
        [](const std::vector<double>& responses, const py::object& factors_json) {
            const FactorSpace space = space_from(factors_json);
            const MainEffectsTable t = main_effects(build_orthogonal_array(space), responses);
            py::dict means;
            for (std::size_t f = 0; f < space.size(); ++f) {
                py::list levels;
                for (const auto& l : t.factors[f].levels) levels.append(l.mean);
                means[py::str(space[f].name)] = levels;
            }
            py::dict out;
            out["level_means"] = means;
            out["grand_mean"] = t.grand_mean;
            out["selected_levels"] = t.selected_levels();
            return out;
        },
        py::arg("responses"), py::arg("factors_json") = py::none());
    m.def(
        "select_optimum",
        [](const std::vector<double>& responses) {
            const FactorSpace space = paper_factor_space();
            return config_dict(select_optimum(main_effects(build_l27(space), responses), space));
        },
        py::arg("responses"));

    m.def(
        "generate_synthetic",
        [](std::size_t n, std::uint64_t seed) {
            const Eigen::MatrixXd all = generate_synthetic(n, seed).matrix();
            return py::make_tuple(Eigen::MatrixXd(all.leftCols(kInputCount)), Eigen::MatrixXd(all.rightCols(kOutputCount)));
        },
        py::arg("n"), py::arg("seed") = 0, "Synthetic (inputs n x 12, outputs n x 21).");
    m.def(
        "split_dataset",
        [](std::size_t n, std::uint64_t seed, std::array<double, 3> ratios) {
            const SplitIndices s = split_dataset(n, SplitSpec{ratios[0], ratios[1], ratios[2], seed});
            return py::make_tuple(s.train, s.validation, s.test);
        },
        py::arg("n"), py::arg("seed") = 0, py::arg("ratios") = std::array<double, 3>{0.8, 0.15, 0.05});
    m.def(
        "engineering_constants",
        [](const std::array<double, kOutputCount>& components) {
            const auto e = engineering_constants(assemble_stiffness(components));
            return py::make_tuple(e.e11, e.e22, e.e33);
        },
        py::arg("components"), "E11, E22, E33 from the 21 upper-triangle stiffness components.");
    m.def("isotropic_stiffness",
          [](double e, double nu) { return stiffness_components(isotropic_stiffness(e, nu)); }, py::arg("e"), py::arg("nu"));
    m.def("aspect_ratio", &aspect_ratio, py::arg("fiber_length"), py::arg("fiber_diameter"));

    m.def(
        "train",
        [](const py::dict& config, const Eigen::MatrixXd& train_x, const Eigen::MatrixXd& train_y,
           const Eigen::MatrixXd& val_x, const Eigen::MatrixXd& val_y, int max_epochs, int patience, int batch_size,
           std::uint64_t seed) {
            TrainData data;
            data.train_x = train_x;
            data.train_y = train_y;
            data.validation_x = val_x;
            data.validation_y = val_y;
            TrainSettings s;
            s.max_epochs = max_epochs;
            s.patience = patience;
            s.batch_size = batch_size;
            s.seed = seed;
            TrainResult r;
            {
                py::gil_scoped_release release;
                r = train_model(config_from(config), data, s);
            }
            py::dict out;
            out["response"] = r.response;
            out["failed"] = r.failed;
            out["stopped_epoch"] = r.stopped_epoch;
            out["best_epoch"] = r.best_epoch;
            out["best_validation_loss"] = r.best_validation_loss;
            out["train_loss"] = r.train_loss;
            out["validation_loss"] = r.validation_loss;
            out["train_predictions"] = forward(r.model, train_x);
            return out;
        },
        py::arg("config"), py::arg("train_x"), py::arg("train_y"), py::arg("val_x") = Eigen::MatrixXd(),
        py::arg("val_y") = Eigen::MatrixXd(), py::arg("max_epochs") = 5000, py::arg("patience") = 200,
        py::arg("batch_size") = 32, py::arg("seed") = 0,
        "Train one configuration on normalized data; returns losses and the restored model's train predictions.");

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            py::gil_scoped_release release;
            return run_cli(args);
        },
        py::arg("args"), "Run the command-line tool in-process and return its exit code.");
}
