#include "oatune/design.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <span>
#include <sstream>

#include "oatune/errors.hpp"

namespace oatune {

std::string level_label(const LevelValue& value) {
    if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
    if (const auto* s = std::get_if<std::string>(&value)) return *s;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), std::get<double>(value));
    return std::string(buf, res.ptr);
}

FactorSpace::FactorSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty() || factors_.size() > kMaxFactors) {
        throw DesignError("factor space must hold between 1 and 13 factors, got " +
                          std::to_string(factors_.size()));
    }
    std::set<std::string> names;
    for (const auto& f : factors_) {
        if (f.name.empty()) throw DesignError("factor with empty name");
        if (!names.insert(f.name).second) throw DesignError("duplicate factor name '" + f.name + "'");
        for (std::size_t i = 0; i < f.levels.size(); ++i) {
            for (std::size_t j = i + 1; j < f.levels.size(); ++j) {
                if (f.levels[i] == f.levels[j]) {
                    throw DesignError("factor '" + f.name + "' has repeated level '" +
                                      level_label(f.levels[i]) + "'");
                }
            }
        }
    }
}

std::optional<std::size_t> FactorSpace::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].name == name) return i;
    }
    return std::nullopt;
}

std::uint64_t FactorSpace::full_factorial_size() const {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) n *= 3;
    return n;
}

FactorSpace paper_factor_space() {
    using S = std::string;
    return FactorSpace({
        {"HL", {std::int64_t{1}, std::int64_t{2}, std::int64_t{3}}},
        {"NN", {std::int64_t{10}, std::int64_t{20}, std::int64_t{30}}},
        {"ACT", {S("relu"), S("elu"), S("selu")}},
        {"OPT", {S("Adam"), S("Adamax"), S("RMSprop")}},
        {"LR", {0.001, 0.01, 0.1}},
    });
}

OrthogonalArray::OrthogonalArray(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

OrthogonalArray::OrthogonalArray(std::vector<std::vector<int>> rows) {
    rows_ = rows.size();
    cols_ = rows.empty() ? 0 : rows.front().size();
    cells_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ShapeError("ragged orthogonal array rows");
        cells_.insert(cells_.end(), r.begin(), r.end());
    }
}

std::vector<int> OrthogonalArray::row(std::size_t r) const {
    if (r >= rows_) throw BoundsError("run index " + std::to_string(r) + " out of range");
    return {cells_.begin() + static_cast<long>(r * cols_), cells_.begin() + static_cast<long>((r + 1) * cols_)};
}

namespace {

struct Generator {
    int a, b, e;
};

// Pairwise linearly independent vectors over GF(3)^3. The first five give the
// reference column order (a, b, a+b, a+2b, e).
constexpr std::array<Generator, 13> kL27Generators{{
    {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 2, 0}, {0, 0, 1},
    {1, 0, 1}, {1, 0, 2}, {0, 1, 1}, {0, 1, 2},
    {1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {1, 2, 2},
}};

constexpr std::array<Generator, 4> kL9Generators{{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 2, 0}}};

OrthogonalArray build_from(std::span<const Generator> gens, std::size_t runs, std::size_t cols) {
    if (cols > gens.size()) throw DesignError("too many factors for a " + std::to_string(runs) + "-run design");
    OrthogonalArray array(runs, cols);
    for (std::size_t i = 0; i < runs; ++i) {
        int a, b, e;
        if (runs == 27) {
            a = static_cast<int>(i / 9);
            b = static_cast<int>((i / 3) % 3);
            e = static_cast<int>(i % 3);
        } else {
            a = static_cast<int>(i / 3);
            b = static_cast<int>(i % 3);
            e = 0;
        }
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& g = gens[c];
            array.set(i, c, (g.a * a + g.b * b + g.e * e) % 3);
        }
    }
    return array;
}

}  // namespace

OrthogonalArray build_l27(const FactorSpace& space) {
    if (space.size() != 5) {
        std::string msg = "L27 design needs exactly 5 factors, got " + std::to_string(space.size());
        if (space.size() > 5) msg += " (first extra factor: '" + space[5].name + "')";
        throw DesignError(msg);
    }
    return build_from(kL27Generators, 27, 5);
}

OrthogonalArray build_orthogonal_array(const FactorSpace& space) {
    if (space.size() == 0 || space.size() > FactorSpace::kMaxFactors) {
        throw DesignError("unsupported factor count " + std::to_string(space.size()));
    }
    if (space.size() <= 4) return build_from(kL9Generators, 9, space.size());
    return build_from(kL27Generators, 27, space.size());
}

BalanceReport verify_strength2(const OrthogonalArray& array) {
    if (array.rows() == 0 || array.cols() == 0) throw DesignError("malformed array: empty");
    for (std::size_t r = 0; r < array.rows(); ++r) {
        for (std::size_t c = 0; c < array.cols(); ++c) {
            const int v = array.at(r, c);
            if (v < 0 || v > 2) {
                throw DesignError("malformed array: cell (" + std::to_string(r) + ", " + std::to_string(c) +
                                  ") holds level " + std::to_string(v));
            }
        }
    }
    BalanceReport report;
    if (array.cols() < 2) return report;
    const bool divisible = array.rows() % 9 == 0;
    const std::size_t expected = array.rows() / 9;
    for (std::size_t c1 = 0; c1 < array.cols(); ++c1) {
        for (std::size_t c2 = c1 + 1; c2 < array.cols(); ++c2) {
            std::array<std::size_t, 9> counts{};
            for (std::size_t r = 0; r < array.rows(); ++r) ++counts[array.at(r, c1) * 3 + array.at(r, c2)];
            for (auto n : counts) {
                if (!divisible || n != expected) {
                    report.pass = false;
                    report.violating_columns = {c1, c2};
                    return report;
                }
            }
        }
    }
    return report;
}

std::string describe(const HyperConfig& c) {
    std::ostringstream os;
    os << "HL=" << c.hidden_layers << " NN=" << c.neurons << " ACT=" << to_string(c.activation)
       << " OPT=" << to_string(c.optimizer) << " LR=" << level_label(c.learning_rate);
    return os.str();
}

std::vector<LevelValue> decode_levels(const OrthogonalArray& array, std::size_t index, const FactorSpace& space) {
    if (index >= array.rows()) {
        throw BoundsError("run index " + std::to_string(index) + " out of range [0, " +
                          std::to_string(array.rows()) + ")");
    }
    if (array.cols() != space.size()) {
        throw ShapeError("array has " + std::to_string(array.cols()) + " columns but the factor space has " +
                         std::to_string(space.size()) + " factors");
    }
    std::vector<LevelValue> out;
    out.reserve(space.size());
    for (std::size_t c = 0; c < space.size(); ++c) {
        const int level = array.at(index, c);
        if (level < 0 || level > 2) throw DesignError("malformed array cell");
        out.push_back(space[c].levels[static_cast<std::size_t>(level)]);
    }
    return out;
}

namespace {

std::size_t require(const FactorSpace& space, const char* name) {
    auto idx = space.index_of(name);
    if (!idx) throw DesignError(std::string("factor space has no '") + name + "' factor");
    return *idx;
}

double as_real(const LevelValue& v, const std::string& factor) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    throw DesignError("factor '" + factor + "' needs numeric levels");
}

int as_positive_int(const LevelValue& v, const std::string& factor) {
    const double d = as_real(v, factor);
    if (d != std::floor(d) || d < 1) throw DesignError("factor '" + factor + "' needs positive integer levels");
    return static_cast<int>(d);
}

std::string as_text(const LevelValue& v, const std::string& factor) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    throw DesignError("factor '" + factor + "' needs named levels");
}

}  // namespace

HyperConfig config_from_levels(const FactorSpace& space, const std::vector<int>& levels) {
    if (levels.size() != space.size()) throw ShapeError("level vector length does not match factor space");
    auto pick = [&](const char* name) -> const LevelValue& {
        const auto i = require(space, name);
        const int l = levels[i];
        if (l < 0 || l > 2) throw DesignError(std::string("level out of range for factor ") + name);
        return space[i].levels[static_cast<std::size_t>(l)];
    };
    HyperConfig c;
    c.hidden_layers = as_positive_int(pick("HL"), "HL");
    c.neurons = as_positive_int(pick("NN"), "NN");
    try {
        c.activation = parse_activation(as_text(pick("ACT"), "ACT"));
        c.optimizer = parse_optimizer(as_text(pick("OPT"), "OPT"));
    } catch (const DomainError& e) {
        throw DesignError(e.what());
    }
    c.learning_rate = as_real(pick("LR"), "LR");
    if (!(c.learning_rate > 0)) throw DesignError("factor 'LR' needs positive levels");
    return c;
}

HyperConfig decode_run(const OrthogonalArray& array, std::size_t index, const FactorSpace& space) {
    if (index >= array.rows()) {
        throw BoundsError("run index " + std::to_string(index) + " out of range [0, " +
                          std::to_string(array.rows()) + ")");
    }
    return config_from_levels(space, array.row(index));
}

std::vector<int> encode_config(const HyperConfig& config, const FactorSpace& space) {
    std::vector<int> levels(space.size(), 0);
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& f = space[i];
        int found = -1;
        for (int l = 0; l < 3; ++l) {
            const auto& v = f.levels[static_cast<std::size_t>(l)];
            bool match = false;
            if (f.name == "HL") match = as_real(v, f.name) == config.hidden_layers;
            else if (f.name == "NN") match = as_real(v, f.name) == config.neurons;
            else if (f.name == "ACT") match = parse_activation(as_text(v, f.name)) == config.activation;
            else if (f.name == "OPT") match = parse_optimizer(as_text(v, f.name)) == config.optimizer;
            else if (f.name == "LR") match = as_real(v, f.name) == config.learning_rate;
            else throw DesignError("cannot encode unknown factor '" + f.name + "'");
            if (match) {
                found = l;
                break;
            }
        }
        if (found < 0) throw DesignError("configuration value for '" + f.name + "' is not one of its levels");
        levels[i] = found;
    }
    return levels;
}

}  // namespace oatune
