#include "oatune/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "oatune/csv.hpp"
#include "oatune/errors.hpp"
#include "oatune/stiffness.hpp"

namespace oatune {

const std::array<std::string_view, kInputCount> kInputColumns{
    "E_M", "nu_M", "E_F", "nu_F", "d_f", "lambda_f", "phi", "a11", "a22", "g1", "g2", "g3"};

const std::array<std::string_view, kOutputCount> kOutputColumns{
    "Q11", "Q12", "Q13", "Q14", "Q15", "Q16", "Q22", "Q23", "Q24", "Q25", "Q26",
    "Q33", "Q34", "Q35", "Q36", "Q44", "Q45", "Q46", "Q55", "Q56", "Q66"};

Eigen::MatrixXd Dataset::matrix() const {
    std::vector<std::size_t> all(samples.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return matrix(all);
}

Eigen::MatrixXd Dataset::matrix(const std::vector<std::size_t>& rows) const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kColumnCount));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Sample& s = samples.at(rows[r]);
        const auto ri = static_cast<Eigen::Index>(r);
        for (std::size_t c = 0; c < kInputCount; ++c) m(ri, static_cast<Eigen::Index>(c)) = s.inputs[c];
        for (std::size_t c = 0; c < kOutputCount; ++c) {
            m(ri, static_cast<Eigen::Index>(kInputCount + c)) = s.outputs[c];
        }
    }
    return m;
}

namespace {

struct Interval {
    Input field;
    double lo;
    double hi;
};

constexpr std::array<Interval, 8> kTableBounds{{
    {EM, 500, 20000},
    {NuM, 0.30, 0.49},
    {EF, 10000, 100000},
    {NuF, 0.2, 0.4},
    {FiberDiameter, 4, 20},
    {AspectRatio, 2, 100},
    {VolumeFraction, 0.05, 0.3},
    {A11, 0.33, 1.0},
}};

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::vector<Violation> validate_sample(const Sample& s, const ValidationOptions& opt) {
    std::vector<Violation> out;
    auto name = [](std::size_t i) { return std::string(kInputColumns[i]); };
    for (std::size_t i = 0; i < kInputCount; ++i) {
        if (!std::isfinite(s.inputs[i])) out.push_back({name(i), s.inputs[i], 0.0, name(i) + " is not finite"});
    }
    if (!out.empty()) return out;

    for (const auto& b : kTableBounds) {
        const double v = s.inputs[b.field];
        if (v < b.lo) out.push_back({name(b.field), v, b.lo, name(b.field) + " = " + fmt(v) + " below minimum " + fmt(b.lo)});
        if (v > b.hi) out.push_back({name(b.field), v, b.hi, name(b.field) + " = " + fmt(v) + " exceeds maximum " + fmt(b.hi)});
    }

    const double tol = opt.orientation_tolerance;
    const double a11 = s.inputs[A11];
    const double a22 = s.inputs[A22];
    const double lower = std::max(0.0, 1.0 - 2.0 * a11);
    if (a22 < lower - tol) {
        out.push_back({"a22", a22, lower, "a22 < max(0, 1 - 2 a11) = " + fmt(lower)});
    }
    if (a22 > a11 + tol) out.push_back({"a22", a22, a11, "a22 > a11"});
    const double a33 = 1.0 - a11 - a22;
    if (a33 < -tol) out.push_back({"a33", a33, 0.0, "a33 = 1 - a11 - a22 is negative"});

    for (Input g : {Gamma1, Gamma2, Gamma3}) {
        const double v = s.inputs[g];
        if (v < 0) out.push_back({name(g), v, 0.0, name(g) + " = " + fmt(v) + " below minimum 0"});
        if (v > opt.angle_max) {
            out.push_back({name(g), v, opt.angle_max, name(g) + " = " + fmt(v) + " exceeds maximum " + fmt(opt.angle_max)});
        }
    }
    return out;
}

std::string dataset_header() {
    std::string h;
    for (auto c : kInputColumns) h += std::string(c) + ",";
    for (std::size_t i = 0; i < kOutputCount; ++i) h += std::string(kOutputColumns[i]) + (i + 1 < kOutputCount ? "," : "");
    return h;
}

Dataset read_dataset(std::istream& in, bool strict, const ValidationOptions& options, std::string provenance) {
    CsvReader reader(in);
    std::vector<std::string> header;
    if (!reader.next(header)) throw SchemaError("dataset is empty: missing header");

    std::map<std::string, std::size_t, std::less<>> position;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!position.emplace(header[i], i).second) throw SchemaError("duplicate column '" + header[i] + "'");
    }
    std::array<std::size_t, kColumnCount> source{};
    for (std::size_t c = 0; c < kColumnCount; ++c) {
        const std::string_view col = c < kInputCount ? kInputColumns[c] : kOutputColumns[c - kInputCount];
        auto it = position.find(col);
        if (it == position.end()) throw SchemaError("missing column '" + std::string(col) + "'");
        source[c] = it->second;
        position.erase(it);
    }
    if (!position.empty()) throw SchemaError("unexpected column '" + position.begin()->first + "'");

    Dataset ds;
    ds.provenance = std::move(provenance);
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        const std::size_t row = reader.line();
        if (fields.size() != header.size()) {
            throw ParseError("line " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                             " cells, got " + std::to_string(fields.size()));
        }
        Sample s;
        for (std::size_t c = 0; c < kColumnCount; ++c) {
            const std::string& cell = fields[source[c]];
            const std::string_view col = c < kInputCount ? kInputColumns[c] : kOutputColumns[c - kInputCount];
            double value = 0.0;
            if (!parse_double(cell, value)) {
                throw ParseError("line " + std::to_string(row) + ", column '" + std::string(col) +
                                 "': cannot parse '" + cell + "'");
            }
            if (c < kInputCount) s.inputs[c] = value;
            else s.outputs[c - kInputCount] = value;
        }
        if (strict) {
            auto violations = validate_sample(s, options);
            if (!violations.empty()) {
                const auto& v = violations.front();
                throw ValidationError("line " + std::to_string(row) + ", field '" + v.field + "': " + v.message +
                                      " (bound " + fmt(v.bound) + ")");
            }
        }
        ds.samples.push_back(s);
    }
    if (ds.samples.empty()) throw SchemaError("dataset has a header but no rows");
    return ds;
}

Dataset load_dataset(const std::filesystem::path& path, bool strict, const ValidationOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset '" + path.string() + "'");
    return read_dataset(in, strict, options, path.string());
}

void write_dataset(std::ostream& out, const Dataset& ds) {
    out << dataset_header() << '\n';
    for (const auto& s : ds.samples) {
        std::string line;
        for (double v : s.inputs) line += format_double(v) + ",";
        for (std::size_t i = 0; i < kOutputCount; ++i) line += format_double(s.outputs[i]) + (i + 1 < kOutputCount ? "," : "");
        out << line << '\n';
    }
}

SplitIndices split_dataset(std::size_t n, const SplitSpec& spec) {
    if (n == 0) throw ShapeError("cannot split an empty dataset");
    for (double r : {spec.train, spec.validation, spec.test}) {
        if (!(r >= 0) || r > 1) throw DomainError("split ratios must lie in [0, 1]");
    }
    if (std::abs(spec.train + spec.validation + spec.test - 1.0) > 1e-9) {
        throw DomainError("split ratios must sum to 1");
    }
    // The small slack keeps products like 24540 * 0.15 from flooring one short.
    auto count = [n](double ratio) {
        return static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9));
    };
    const std::size_t n_val = count(spec.validation);
    const std::size_t n_test = count(spec.test);
    const std::size_t n_train = n - n_val - n_test;

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(spec.seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    SplitIndices out;
    out.train.assign(perm.begin(), perm.begin() + static_cast<long>(n_train));
    out.validation.assign(perm.begin() + static_cast<long>(n_train), perm.begin() + static_cast<long>(n_train + n_val));
    out.test.assign(perm.begin() + static_cast<long>(n_train + n_val), perm.end());
    return out;
}

SplitIndices split_dataset(const Dataset& dataset, const SplitSpec& spec) { return split_dataset(dataset.size(), spec); }

Dataset generate_synthetic(std::size_t n, std::uint64_t seed, const ValidationOptions& options) {
    if (n == 0) throw DomainError("synthetic dataset needs at least one sample");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

    Dataset ds;
    ds.provenance = "synthetic:n=" + std::to_string(n) + ",seed=" + std::to_string(seed);
    ds.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Sample s;
        for (const auto& b : kTableBounds) {
            if (b.field == A11) continue;
            s.inputs[b.field] = uniform(b.lo, b.hi);
        }
        // a11 below 1/3 leaves no admissible a22.
        const double a11 = uniform(1.0 / 3.0, 1.0);
        const double lo = std::max(0.0, 1.0 - 2.0 * a11);
        const double hi = std::min(a11, 1.0 - a11);
        s.inputs[A11] = a11;
        s.inputs[A22] = uniform(lo, hi);
        for (Input g : {Gamma1, Gamma2, Gamma3}) s.inputs[g] = uniform(0.0, options.angle_max);
        s.outputs = stiffness_components(synthetic_stiffness(s.inputs));
        ds.samples.push_back(s);
    }
    return ds;
}

}  // namespace oatune
