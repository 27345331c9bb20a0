#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oatune/analysis.hpp"
#include "oatune/design.hpp"
#include "oatune/errors.hpp"
#include "oracles.hpp"

using namespace oatune;

namespace {

std::vector<double> table4() {
    const auto cells = oracle::read_csv_cells(oracle::fixture("table4.csv"));
    std::vector<double> r;
    for (std::size_t i = 1; i < cells.size(); ++i) r.push_back(std::stod(cells[i][1]));
    return r;
}

// Level means computed by brute force from the golden design labels.
std::array<double, 3> golden_level_means(std::size_t column, const std::vector<double>& responses) {
    static const std::vector<std::vector<std::string>> order{
        {"1", "2", "3"}, {"10", "20", "30"}, {"relu", "elu", "selu"}, {"Adam", "Adamax", "RMSprop"},
        {"0.001", "0.010", "0.100"}};
    const auto cells = oracle::read_csv_cells(oracle::fixture("table3.csv"));
    const auto& labels = order[column];
    std::array<double, 3> sums{};
    std::array<int, 3> counts{};
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const auto k = static_cast<std::size_t>(
            std::find(labels.begin(), labels.end(), cells[i][column + 1]) - labels.begin());
        REQUIRE(k < 3);
        sums[k] += responses[i - 1];
        ++counts[k];
    }
    for (std::size_t k = 0; k < 3; ++k) sums[k] /= counts[k];
    return sums;
}

}  // namespace

TEST_CASE("metric examples") {
    const std::vector<double> y{1, 2, 3};
    const auto perfect = compute_metrics(y, y);
    CHECK(perfect.r2 == 100.0);
    CHECK(perfect.mae == 0.0);
    CHECK(perfect.mse == 0.0);
    CHECK(perfect.rmse == 0.0);

    const std::vector<double> flat{2, 2, 2};
    const auto m = compute_metrics(y, flat);
    CHECK(std::abs(m.r2) < 1e-12);
    CHECK(m.mae == doctest::Approx(2.0 / 3.0));
    CHECK(m.mse == doctest::Approx(2.0 / 3.0));
    CHECK(std::abs(m.rmse - 0.81650) < 1e-5);

    CHECK_THROWS_AS(compute_metrics(flat, y), DomainError);
    CHECK_THROWS_AS(compute_metrics(std::vector<double>{1}, std::vector<double>{1}), ShapeError);
    CHECK_THROWS_AS(compute_metrics(y, std::vector<double>{1, 2}), ShapeError);
}

TEST_CASE("metric identities on random vectors") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t len = 2 + rng() % 50;
        std::vector<double> y(len), yh(len);
        for (std::size_t i = 0; i < len; ++i) {
            y[i] = n(rng);
            yh[i] = y[i] + 0.5 * n(rng);
        }
        const auto base = compute_metrics(y, yh);
        CHECK(std::abs(base.rmse * base.rmse - base.mse) <= 1e-12 * std::max(1.0, base.mse));

        double a = u(rng);
        if (std::abs(a) < 1e-3) a = 1.0;
        const double b = u(rng);
        std::vector<double> ya(len), yha(len);
        for (std::size_t i = 0; i < len; ++i) {
            ya[i] = a * y[i] + b;
            yha[i] = a * yh[i] + b;
        }
        const auto mapped = compute_metrics(ya, yha);
        CHECK(mapped.r2 == doctest::Approx(base.r2).epsilon(1e-9).scale(100));
        CHECK(mapped.mae == doctest::Approx(std::abs(a) * base.mae).epsilon(1e-9));
        CHECK(mapped.rmse == doctest::Approx(std::abs(a) * base.rmse).epsilon(1e-9));
    }
}

TEST_CASE("per-component metrics") {
    std::mt19937_64 rng(6);
    const Eigen::MatrixXd y = oracle::random_matrix(rng, 40, 21);
    Eigen::MatrixXd yh = y + 0.1 * oracle::random_matrix(rng, 40, 21);
    yh.col(4) = y.col(4);

    CHECK(per_component_metrics(y, yh, 4).r2 == 100.0);

    const auto pooled = compute_metrics(y, yh);
    double mean_mse = 0.0;
    for (std::size_t c = 0; c < 21; ++c) mean_mse += per_component_metrics(y, yh, c).mse;
    CHECK(pooled.mse == doctest::Approx(mean_mse / 21.0).epsilon(1e-12));

    Eigen::MatrixXd yc = y;
    yc.col(7).setConstant(3.0);
    CHECK_THROWS_AS(per_component_metrics(yc, yh, 7), DomainError);
    CHECK_NOTHROW(per_component_metrics(yc, yh, 8));
    CHECK_THROWS_AS(per_component_metrics(y, yh, 21), BoundsError);
}

TEST_CASE("main effects of the reference responses") {
    const FactorSpace space = paper_factor_space();
    const OrthogonalArray array = build_l27(space);
    const auto r = table4();
    REQUIRE(r.size() == 27);
    const MainEffectsTable t = main_effects(array, r);
    REQUIRE(t.factors.size() == 5);

    const std::array<double, 3> hl{63.552, 79.703, 81.045};
    const std::array<double, 3> lr{84.541, 81.941, 57.818};
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(t.factors[0].levels[k].mean - hl[k]) < 1e-3);
        CHECK(std::abs(t.factors[4].levels[k].mean - lr[k]) < 1e-3);
        CHECK(t.factors[0].levels[k].count == 9);
    }
    for (std::size_t f = 0; f < 5; ++f) {
        const auto oracle_means = golden_level_means(f, r);
        double avg = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(t.factors[f].levels[k].mean == doctest::Approx(oracle_means[k]).epsilon(1e-12));
            avg += t.factors[f].levels[k].mean / 3.0;
        }
        CHECK(avg == doctest::Approx(t.grand_mean).epsilon(1e-12));
    }
    CHECK(t.grand_mean == doctest::Approx(std::accumulate(r.begin(), r.end(), 0.0) / 27.0));

    const HyperConfig best = select_optimum(t, space);
    CHECK(best == HyperConfig{3, 20, ActivationKind::Elu, OptimizerKind::Adam, 0.001});
    CHECK(describe(best) == "HL=3 NN=20 ACT=elu OPT=Adam LR=0.001");

    std::vector<double> mapped;
    for (double v : r) mapped.push_back(2 * v + 5);
    CHECK(select_optimum(main_effects(array, mapped), space) == best);
}

TEST_CASE("constant responses") {
    const FactorSpace space = paper_factor_space();
    const OrthogonalArray array = build_l27(space);
    const std::vector<double> r(27, 42.5);
    const MainEffectsTable t = main_effects(array, r, true);
    for (const auto& f : t.factors) {
        for (const auto& l : f.levels) {
            CHECK(l.mean == 42.5);
            REQUIRE(l.sn_db.has_value());
            CHECK(*l.sn_db == doctest::Approx(20 * std::log10(42.5)));
        }
        CHECK(f.selected == 0);
    }
    CHECK(t.selected_levels() == std::vector<int>(5, 0));
    CHECK(select_optimum(t, space) == HyperConfig{1, 10, ActivationKind::Relu, OptimizerKind::Adam, 0.001});
    CHECK_THROWS_AS(main_effects(array, std::vector<double>(26, 1.0)), ShapeError);
}

TEST_CASE("S/N ratio") {
    const std::vector<double> tens(9, 10.0);
    CHECK(sn_larger_better(tens) == doctest::Approx(20.0).epsilon(1e-12));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(1.0, 100.0);
    std::vector<double> v(9), v10(9);
    for (std::size_t i = 0; i < 9; ++i) {
        v[i] = u(rng);
        v10[i] = 10 * v[i];
    }
    CHECK(sn_larger_better(v10) - sn_larger_better(v) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK_THROWS_AS(sn_larger_better(std::vector<double>{1.0, 0.0}), DomainError);

    const FactorSpace space = paper_factor_space();
    std::vector<double> r = table4();
    r[0] = -1.0;
    const MainEffectsTable t = main_effects(build_l27(space), r, true);
    CHECK_FALSE(t.factors[0].levels[0].sn_db.has_value());
}
