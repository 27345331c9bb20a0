#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oatune/dataset.hpp"
#include "oatune/errors.hpp"
#include "oatune/scaler.hpp"
#include "oatune/stiffness.hpp"
#include "oracles.hpp"

using namespace oatune;

namespace {

Sample valid_sample() {
    Sample s;
    s.inputs = {3000, 0.35, 70000, 0.22, 16, 75, 0.2, 0.5, 0.3, 0.0, 0.0, 0.0};
    const auto q = synthetic_stiffness(s.inputs);
    s.outputs = stiffness_components(q);
    return s;
}

std::string csv_of(const std::vector<Sample>& samples) {
    std::ostringstream os;
    Dataset ds;
    ds.samples = samples;
    write_dataset(os, ds);
    return os.str();
}

bool has_field(const std::vector<Violation>& v, const std::string& field) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.field == field; });
}

}  // namespace

TEST_CASE("dataset reading") {
    SUBCASE("ten valid rows") {
        std::istringstream in(csv_of(std::vector<Sample>(10, valid_sample())));
        const Dataset ds = read_dataset(in, true);
        CHECK(ds.size() == 10);
        CHECK(ds.samples[3] == valid_sample());
    }
    SUBCASE("column order does not matter") {
        std::string text = csv_of({valid_sample()});
        // swap the first two columns in header and row
        auto swap_first = [](std::string line) {
            const auto a = line.find(',');
            const auto b = line.find(',', a + 1);
            return line.substr(a + 1, b - a - 1) + "," + line.substr(0, a) + line.substr(b);
        };
        std::istringstream lines(text);
        std::string h, r;
        std::getline(lines, h);
        std::getline(lines, r);
        std::istringstream in(swap_first(h) + "\n" + swap_first(r) + "\n");
        CHECK(read_dataset(in, true).samples[0] == valid_sample());
    }
    SUBCASE("phi out of range under strict") {
        Sample s = valid_sample();
        s.inputs[VolumeFraction] = 0.5;
        std::istringstream strict_in(csv_of({valid_sample(), s}));
        try {
            read_dataset(strict_in, true);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            const std::string what = e.what();
            CHECK(what.find("phi") != std::string::npos);
            CHECK(what.find("0.3") != std::string::npos);
            CHECK(what.find("line 3") != std::string::npos);
        }
        std::istringstream lax_in(csv_of({valid_sample(), s}));
        CHECK(read_dataset(lax_in, false).size() == 2);
    }
    SUBCASE("missing Q66") {
        std::string text = csv_of({valid_sample()});
        std::istringstream lines(text);
        std::string h, r;
        std::getline(lines, h);
        std::getline(lines, r);
        h = h.substr(0, h.rfind(','));
        r = r.substr(0, r.rfind(','));
        std::istringstream in(h + "\n" + r + "\n");
        try {
            read_dataset(in, true);
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(std::string(e.what()).find("Q66") != std::string::npos);
        }
    }
    SUBCASE("extra and duplicate columns") {
        std::istringstream extra(dataset_header() + ",junk\n");
        CHECK_THROWS_AS(read_dataset(extra, true), SchemaError);
        std::istringstream dup(dataset_header() + ",Q11\n");
        CHECK_THROWS_AS(read_dataset(dup, true), SchemaError);
    }
    SUBCASE("unparseable cell names the column") {
        std::string text = csv_of({valid_sample()});
        const auto pos = text.find('\n') + 1;
        text.replace(pos, text.find(',', pos) - pos, "abc");
        std::istringstream in(text);
        try {
            read_dataset(in, true);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("E_M") != std::string::npos);
        }
    }
    SUBCASE("write then read is lossless") {
        const Dataset ds = generate_synthetic(50, 3);
        std::istringstream in(csv_of(ds.samples));
        CHECK(read_dataset(in, true).samples == ds.samples);
    }
}

TEST_CASE("orientation constraints") {
    ValidationOptions exact;
    exact.orientation_tolerance = 0.0;
    Sample s = valid_sample();
    CHECK(validate_sample(s, exact).empty());

    s.inputs[A11] = 0.4;
    s.inputs[A22] = 0.5;
    const auto v = validate_sample(s, exact);
    REQUIRE_FALSE(v.empty());
    CHECK(std::any_of(v.begin(), v.end(), [](const Violation& x) { return x.message == "a22 > a11"; }));

    s.inputs[A11] = 1.0;
    s.inputs[A22] = 0.0;
    CHECK(validate_sample(s, exact).empty());
    for (double a22 : {0.01, 0.1, 0.5, 1.0}) {
        s.inputs[A22] = a22;
        CHECK_FALSE(validate_sample(s, exact).empty());
    }

    s.inputs[A11] = 0.4;
    s.inputs[A22] = 0.1;  // below 1 - 2 a11 = 0.2
    CHECK(has_field(validate_sample(s, exact), "a22"));

    // rounded values sit inside the default slack
    s.inputs[A11] = 0.333;
    s.inputs[A22] = 0.333;
    CHECK(validate_sample(s).empty());
    CHECK_FALSE(validate_sample(s, exact).empty());
}

TEST_CASE("angle and table bounds") {
    Sample s = valid_sample();
    s.inputs[Gamma2] = 7.0;
    CHECK(has_field(validate_sample(s), "g2"));
    s.inputs[Gamma2] = -0.1;
    CHECK(has_field(validate_sample(s), "g2"));
    s = valid_sample();
    s.inputs[EM] = 100;
    CHECK(has_field(validate_sample(s), "E_M"));
    s = valid_sample();
    s.inputs[AspectRatio] = std::nan("");
    CHECK(has_field(validate_sample(s), "lambda_f"));
}

TEST_CASE("split sizes") {
    SplitSpec spec;
    auto check_sizes = [&](std::size_t n, std::size_t a, std::size_t b, std::size_t c) {
        const SplitIndices s = split_dataset(n, spec);
        CHECK(s.train.size() == a);
        CHECK(s.validation.size() == b);
        CHECK(s.test.size() == c);
    };
    check_sizes(100, 80, 15, 5);
    check_sizes(24540, 19632, 3681, 1227);
    spec.validation = 0.2;
    CHECK_THROWS_AS(split_dataset(100, spec), DomainError);
    CHECK_THROWS_AS(split_dataset(0, SplitSpec{}), ShapeError);
}

TEST_CASE("split partition property over random sizes and seeds") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> size(1, 3000);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = size(rng);
        SplitSpec spec;
        spec.seed = rng();
        const SplitIndices s = split_dataset(n, spec);
        std::vector<int> hits(n, 0);
        for (const auto* part : {&s.train, &s.validation, &s.test}) {
            for (std::size_t i : *part) {
                REQUIRE(i < n);
                ++hits[i];
            }
        }
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
        CHECK(s.validation.size() == static_cast<std::size_t>(std::floor(n * 0.15 + 1e-9)));
        CHECK(s.test.size() == static_cast<std::size_t>(std::floor(n * 0.05 + 1e-9)));
    }
    SplitSpec spec;
    spec.seed = 5;
    const auto a = split_dataset(500, spec);
    const auto b = split_dataset(500, spec);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
}

TEST_CASE("min-max scaler") {
    Eigen::MatrixXd m(3, 2);
    m << 2, 5, 4, 5, 6, 5;
    const MinMaxScaler s = MinMaxScaler::fit(m);
    CHECK(s.min()[0] == 2);
    CHECK(s.max()[0] == 6);
    CHECK(s.is_constant(1));
    CHECK_FALSE(s.is_constant(0));

    const Eigen::MatrixXd t = s.transform(m);
    CHECK(t(0, 0) == 0.0);
    CHECK(t(2, 0) == 1.0);
    CHECK(t.col(1).isZero(0.0));
    Eigen::MatrixXd three(1, 2);
    three << 3, 5;
    CHECK(s.transform(three)(0, 0) == 0.25);
    CHECK(s.inverse_transform(s.transform(three))(0, 1) == 5.0);

    const MinMaxScaler refit = MinMaxScaler::fit(t);
    CHECK(refit.min()[0] == 0.0);
    CHECK(refit.max()[0] == 1.0);

    CHECK_THROWS_AS(MinMaxScaler().transform(m), StateError);
    CHECK_THROWS_AS(s.transform(Eigen::MatrixXd::Zero(1, 3)), ShapeError);
}

TEST_CASE("scaler round trip on random data") {
    std::mt19937_64 rng(8);
    const Dataset ds = generate_synthetic(400, 12);
    const MinMaxScaler s = fit_minmax(ds);
    REQUIRE(s.columns() == kColumnCount);
    const Eigen::MatrixXd x = ds.matrix();
    const Eigen::MatrixXd back = s.inverse_transform(s.transform(x));
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double scale = std::max(1.0, x.col(c).cwiseAbs().maxCoeff());
        CHECK((back.col(c) - x.col(c)).cwiseAbs().maxCoeff() / scale < 1e-12);
    }
    const Eigen::MatrixXd r = oracle::random_matrix(rng, 200, 33, -3.0, 3.0);
    const MinMaxScaler rs = MinMaxScaler::fit(r);
    CHECK((rs.inverse_transform(rs.transform(r)) - r).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("synthetic generator") {
    const Dataset a = generate_synthetic(1000, 21);
    const Dataset b = generate_synthetic(1000, 21);
    CHECK(a.samples == b.samples);
    CHECK_FALSE(a.samples == generate_synthetic(1000, 22).samples);
    ValidationOptions exact;
    exact.orientation_tolerance = 0.0;
    for (const Sample& s : a.samples) {
        CHECK(validate_sample(s, exact).empty());
        const Matrix6 q = assemble_stiffness(s.outputs);
        CHECK((q - q.transpose()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<Matrix6> eig(q);
        CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
    CHECK_THROWS_AS(generate_synthetic(0, 1), DomainError);
}

TEST_CASE("stiffness component layout") {
    std::array<double, kOutputCount> c{};
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<double>(i + 1);
    const Matrix6 q = assemble_stiffness(c);
    CHECK(q(0, 0) == 1);
    CHECK(q(0, 5) == 6);
    CHECK(q(5, 0) == 6);
    CHECK(q(1, 1) == 7);
    CHECK(q(5, 5) == 21);
    CHECK(stiffness_components(q) == c);
}

TEST_CASE("rotation agrees with the fourth-order tensor transformation") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix6 q = orthotropic_stiffness(50.0, 8.0, 5.0, 0.3);
        const Eigen::Matrix3d r = rotation_from_angles(angle(rng), angle(rng), angle(rng));
        CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        const Matrix6 fast = rotate_stiffness(q, r);
        const Matrix6 slow = oracle::rotate_by_tensor(q, r);
        CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-9 * q.cwiseAbs().maxCoeff());

        Eigen::SelfAdjointEigenSolver<Matrix6> e0(to_mandel(q));
        Eigen::SelfAdjointEigenSolver<Matrix6> e1(to_mandel(fast));
        CHECK((e0.eigenvalues() - e1.eigenvalues()).cwiseAbs().maxCoeff() < 1e-9 * q.cwiseAbs().maxCoeff());
    }
    const Eigen::Matrix3d identity = rotation_from_angles(0, 0, 0);
    CHECK(identity.isIdentity(0.0));
}

TEST_CASE("engineering constants") {
    const Matrix6 iso = isotropic_stiffness(2.0, 0.3);
    CHECK(iso(0, 0) == doctest::Approx(2.69231).epsilon(1e-5));
    CHECK(iso(0, 1) == doctest::Approx(1.15385).epsilon(1e-5));
    CHECK(iso(3, 3) == doctest::Approx(0.76923).epsilon(1e-5));
    // Lame form written out directly
    const double lambda = 2.0 * 0.3 / (1.3 * 0.4);
    const double mu = 2.0 / 2.6;
    CHECK(std::abs(iso(0, 0) - (lambda + 2 * mu)) < 1e-12);
    CHECK(std::abs(iso(0, 1) - lambda) < 1e-12);
    CHECK(std::abs(iso(4, 4) - mu) < 1e-12);

    const auto e = engineering_constants(iso);
    CHECK(std::abs(e.e11 - 2.0) < 1e-9);
    CHECK(std::abs(e.e22 - 2.0) < 1e-9);
    CHECK(std::abs(e.e33 - 2.0) < 1e-9);

    Matrix6 diag = Matrix6::Zero();
    diag.diagonal() << 2, 2, 2, 1, 1, 1;
    CHECK(engineering_constants(diag).e11 == doctest::Approx(2.0));

    Matrix6 bad = diag;
    bad(2, 2) = -1;
    CHECK_THROWS_AS(engineering_constants(bad), MechanicsError);
    Matrix6 asym = diag;
    asym(0, 1) = 0.5;
    CHECK_THROWS_AS(engineering_constants(asym), MechanicsError);

    const Matrix6 ortho = orthotropic_stiffness(50.0, 8.0, 5.0, 0.3);
    const auto eo = engineering_constants(ortho);
    CHECK(eo.e11 == doctest::Approx(50.0).epsilon(1e-10));
    CHECK(eo.e22 == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(eo.e33 == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("aspect ratio") {
    CHECK(aspect_ratio(1200, 16) == 75.0);
    CHECK(std::abs(aspect_ratio(430, 13.5) - 31.85) < 0.01);
    CHECK_THROWS_AS(aspect_ratio(430, 0), DomainError);
    CHECK_THROWS_AS(aspect_ratio(-1, 3), DomainError);
}
