#include <doctest.h>

#include <array>
#include <set>

#include "oatune/design.hpp"
#include "oatune/errors.hpp"
#include "oracles.hpp"

using namespace oatune;

namespace {

// Pair counts enumerated directly from the cells.
std::array<int, 9> pair_counts(const OrthogonalArray& a, std::size_t c1, std::size_t c2) {
    std::array<int, 9> counts{};
    for (std::size_t r = 0; r < a.rows(); ++r) ++counts[static_cast<std::size_t>(a.at(r, c1) * 3 + a.at(r, c2))];
    return counts;
}

}  // namespace

TEST_CASE("L27 reproduces the golden design cell for cell") {
    const FactorSpace space = paper_factor_space();
    const OrthogonalArray array = build_l27(space);
    REQUIRE(array.rows() == 27);
    REQUIRE(array.cols() == 5);

    const auto golden = oracle::read_csv_cells(oracle::fixture("table3.csv"));
    REQUIRE(golden.size() == 28);
    for (std::size_t r = 0; r < 27; ++r) {
        const auto& row = golden[r + 1];
        CHECK(std::stoul(row[0]) == r + 1);
        const HyperConfig c = decode_run(array, r, space);
        CHECK(c.hidden_layers == std::stoi(row[1]));
        CHECK(c.neurons == std::stoi(row[2]));
        CHECK(to_string(c.activation) == row[3]);
        CHECK(to_string(c.optimizer) == row[4]);
        CHECK(c.learning_rate == doctest::Approx(std::stod(row[5])).epsilon(1e-12));
    }
}

TEST_CASE("documented rows decode as expected") {
    const FactorSpace space = paper_factor_space();
    const OrthogonalArray a = build_l27(space);
    CHECK(a.row(0) == std::vector<int>{0, 0, 0, 0, 0});
    CHECK(a.row(12) == std::vector<int>{1, 1, 2, 0, 0});
    CHECK(a.row(26) == std::vector<int>{2, 2, 1, 0, 2});

    CHECK(decode_run(a, 0, space) == HyperConfig{1, 10, ActivationKind::Relu, OptimizerKind::Adam, 0.001});
    CHECK(decode_run(a, 12, space) == HyperConfig{2, 20, ActivationKind::Selu, OptimizerKind::Adam, 0.001});
    CHECK(decode_run(a, 26, space) == HyperConfig{3, 30, ActivationKind::Elu, OptimizerKind::Adam, 0.1});
    CHECK(decode_run(a, 3, space) == HyperConfig{1, 20, ActivationKind::Elu, OptimizerKind::RMSprop, 0.001});
    CHECK(decode_run(a, 21, space) == HyperConfig{3, 20, ActivationKind::Relu, OptimizerKind::Adamax, 0.001});
}

TEST_CASE("strength-2 balance of the generated arrays") {
    SUBCASE("L27 with the built-in factors") {
        const OrthogonalArray a = build_l27(paper_factor_space());
        CHECK(verify_strength2(a).pass);
        for (std::size_t c1 = 0; c1 < 5; ++c1) {
            std::array<int, 3> levels{};
            for (std::size_t r = 0; r < 27; ++r) ++levels[static_cast<std::size_t>(a.at(r, c1))];
            CHECK(levels == std::array<int, 3>{9, 9, 9});
            for (std::size_t c2 = c1 + 1; c2 < 5; ++c2) {
                for (int n : pair_counts(a, c1, c2)) CHECK(n == 3);
            }
        }
    }
    SUBCASE("every factor count from 1 to 13") {
        for (std::size_t k = 1; k <= 13; ++k) {
            std::vector<Factor> fs;
            for (std::size_t i = 0; i < k; ++i) {
                fs.push_back({"F" + std::to_string(i), {std::int64_t{0}, std::int64_t{1}, std::int64_t{2}}});
            }
            const OrthogonalArray a = build_orthogonal_array(FactorSpace(fs));
            CHECK(a.rows() == (k <= 4 ? 9u : 27u));
            CHECK(verify_strength2(a).pass);
            // Independent enumeration.
            for (std::size_t c1 = 0; c1 < k; ++c1)
                for (std::size_t c2 = c1 + 1; c2 < k; ++c2)
                    for (int n : pair_counts(a, c1, c2)) CHECK(n == static_cast<int>(a.rows() / 9));
            if (k >= 5) {
                for (std::size_t r = 0; r < 27; ++r) {
                    for (std::size_t c = 0; c < 5; ++c) CHECK(a.at(r, c) == build_l27(paper_factor_space()).at(r, c));
                }
            }
        }
    }
}

TEST_CASE("a single mutation destroys balance and is reported") {
    OrthogonalArray a = build_l27(paper_factor_space());
    REQUIRE(a.at(0, 2) == 0);
    a.set(0, 2, 1);
    const auto report = verify_strength2(a);
    CHECK_FALSE(report.pass);
    REQUIRE(report.violating_columns.has_value());
    const auto [c1, c2] = *report.violating_columns;
    CHECK((c1 == 2 || c2 == 2));
}

TEST_CASE("single column array passes vacuously") {
    OrthogonalArray a({{0}, {1}, {1}});
    CHECK(verify_strength2(a).pass);
}

TEST_CASE("malformed arrays are rejected") {
    OrthogonalArray a({{0, 3}, {1, 1}});
    CHECK_THROWS_AS(verify_strength2(a), DesignError);
    CHECK_THROWS_AS(verify_strength2(OrthogonalArray()), DesignError);
}

TEST_CASE("factor space validation") {
    CHECK(paper_factor_space().full_factorial_size() == 243);
    CHECK_THROWS_AS(FactorSpace(std::vector<Factor>{}), DesignError);
    using I = std::int64_t;
    CHECK_THROWS_AS(FactorSpace({{"A", {I{1}, I{1}, I{2}}}}), DesignError);
    CHECK_THROWS_AS(FactorSpace({{"A", {I{1}, I{2}, I{3}}}, {"A", {I{1}, I{2}, I{3}}}}), DesignError);
    std::vector<Factor> many(14, Factor{"", {I{0}, I{1}, I{2}}});
    for (std::size_t i = 0; i < many.size(); ++i) many[i].name = "F" + std::to_string(i);
    CHECK_THROWS_AS(FactorSpace{many}, DesignError);
}

TEST_CASE("build_l27 names the offending factor when the count is wrong") {
    auto fs = paper_factor_space().factors();
    fs.push_back({"EXTRA", {std::int64_t{0}, std::int64_t{1}, std::int64_t{2}}});
    try {
        build_l27(FactorSpace(fs));
        FAIL("expected DesignError");
    } catch (const DesignError& e) {
        CHECK(std::string(e.what()).find("EXTRA") != std::string::npos);
    }
    fs.resize(4);
    CHECK_THROWS_AS(build_l27(FactorSpace(fs)), DesignError);
}

TEST_CASE("decode bounds and identity payloads") {
    const FactorSpace space = paper_factor_space();
    const OrthogonalArray a = build_l27(space);
    CHECK_THROWS_AS(decode_run(a, 27, space), BoundsError);
    CHECK_THROWS_AS(decode_levels(a, 100, space), BoundsError);

    std::vector<Factor> identity;
    for (int i = 0; i < 5; ++i) {
        identity.push_back({"C" + std::to_string(i), {std::int64_t{0}, std::int64_t{1}, std::int64_t{2}}});
    }
    const FactorSpace ids(identity);
    for (std::size_t r = 0; r < 27; ++r) {
        const auto levels = decode_levels(a, r, ids);
        for (std::size_t c = 0; c < 5; ++c) CHECK(std::get<std::int64_t>(levels[c]) == a.at(r, c));
    }
}

TEST_CASE("encode and decode are inverse bijections over the design") {
    const FactorSpace space = paper_factor_space();
    const OrthogonalArray a = build_l27(space);
    std::set<std::vector<int>> seen;
    for (std::size_t r = 0; r < 27; ++r) {
        const HyperConfig c = decode_run(a, r, space);
        CHECK(encode_config(c, space) == a.row(r));
        seen.insert(a.row(r));
    }
    CHECK(seen.size() == 27);
    HyperConfig off_grid;
    off_grid.neurons = 15;
    CHECK_THROWS_AS(encode_config(off_grid, space), DesignError);
}

TEST_CASE("level labels") {
    CHECK(level_label(LevelValue{std::int64_t{3}}) == "3");
    CHECK(level_label(LevelValue{0.001}) == "0.001");
    CHECK(level_label(LevelValue{std::string("elu")}) == "elu");
}
