#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fairbasis/capital.hpp"
#include "fairbasis/intensity.hpp"
#include "fairbasis/normal.hpp"

using namespace fb;

TEST_CASE("normal quantile hits reference values") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(norm_ppf(0.999) == doctest::Approx(3.090232306168).epsilon(1e-9));
    CHECK(norm_ppf(0.975) == doctest::Approx(1.959963984540).epsilon(1e-9));
    for (double x : {-3.0, -1.0, 0.0, 0.7, 2.5})
        CHECK(norm_ppf(norm_cdf(x)) == doctest::Approx(x).epsilon(1e-10));
    CHECK_THROWS_AS(norm_ppf(0.0), std::domain_error);
    CHECK_THROWS_AS(norm_ppf(1.0), std::domain_error);
}

TEST_CASE("asset correlation matches the regulatory curve") {
    CHECK(correlation(0.01, 1.0) == doctest::Approx(0.192783679).epsilon(1e-9));
    CHECK(correlation(1e-12, 1.0) == doctest::Approx(0.24).epsilon(1e-9));
    CHECK(correlation(1.0, 1.0) == doctest::Approx(0.12).epsilon(1e-12));
    CHECK(correlation(0.01, 1.25) == doctest::Approx(1.25 * correlation(0.01, 1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(correlation(0.0, 1.0), std::domain_error);
}

TEST_CASE("maturity adjustment matches the regulatory curve") {
    CHECK(maturity_b(0.01) == doctest::Approx(0.137486131).epsilon(1e-9));
    CHECK(maturity_b(1.0) == doctest::Approx(0.014046990).epsilon(1e-7));
    // the pd floor inside the log caps b below the floor
    CHECK(maturity_b(1e-9) == maturity_b(1e-6));
    CHECK(maturity_adjustment(0.01, 2.5) == doctest::Approx(1.259809501).epsilon(1e-9));
    CHECK(maturity_adjustment(0.01, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(maturity_adjustment(0.2, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("capital ratio hits the reference point and clamps the tails") {
    CHECK(capital_ratio(0.01, 0.45, 2.5, 1.0) == doctest::Approx(0.073853441).epsilon(1e-7));
    CHECK(capital_ratio(1.0, 0.45, 2.5, 1.0) == 0.0);
    CHECK(capital_ratio(1e-12, 0.45, 2.5, 1.0) == 0.0);
    CHECK(capital_ratio(0.999999, 0.45, 2.5, 1.0) >= 0.0);
    CHECK(capital_ratio(0.999999, 0.45, 2.5, 1.0) < 1e-5);
    for (double pd : {1e-4, 1e-3, 1e-2, 0.1, 0.5})
        CHECK(capital_ratio(pd, 0.45, 2.5, 1.0) > 0.0);
    CHECK_THROWS_AS(capital_ratio(0.0, 0.45, 2.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(capital_ratio(0.01, -0.1, 2.5, 1.0), std::domain_error);
}

TEST_CASE("local pd truncates the horizon near maturity") {
    auto m = IntensityModel::constant(0.02);
    CHECK(local_pd(m, 0.0, 0.07, 5.0) == doctest::Approx(-std::expm1(-0.07)).epsilon(1e-12));
    CHECK(local_pd(m, 4.5, 0.02, 5.0) == doctest::Approx(-std::expm1(-0.01)).epsilon(1e-12));
    CHECK(local_pd(m, 5.0, 0.02, 5.0) == 0.0);
    CHECK(local_pd(m, 0.0, -0.5, 5.0) == 0.0);
}

TEST_CASE("basel maturity derives from time left unless pinned") {
    CapitalSpec spec;
    CHECK(spec.basel_maturity(0.3) == 1.0);
    CHECK(spec.basel_maturity(3.0) == 3.0);
    CHECK(spec.basel_maturity(7.0) == 5.0);
    spec.maturity_M = 2.5;
    CHECK(spec.basel_maturity(0.3) == 2.5);
    CHECK(spec.basel_maturity(7.0) == 2.5);
}

TEST_CASE("capital balance scales by mode") {
    CapitalSpec spec;
    spec.mode = CapitalMode::fixed_exposure;
    spec.lgd = 0.45;
    spec.avc = 1.0;
    spec.maturity_M = 2.5;
    double K = capital_ratio(0.01, 0.45, 2.5, 1.0);
    CHECK(capital_balance(spec, 0.01, 0.25, 4.0) == doctest::Approx(0.25 * K).epsilon(1e-12));
    CHECK(capital_balance(spec, 0.0, 0.25, 4.0) == 0.0);
    CHECK(capital_balance(spec, 0.01, 0.0, 4.0) == 0.0);

    spec.mode = CapitalMode::mc_var;
    CHECK(capital_balance(spec, 0.01, 0.0375, 4.0) == 0.0375);
}

TEST_CASE("capital spec validation rejects bad fields") {
    CapitalSpec spec;
    spec.avc = 1.1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.avc = 1.25;
    spec.lgd = 1.2;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.lgd = 0.45;
    spec.confidence = 1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.confidence = 0.999;
    CHECK_NOTHROW(spec.validate());
}
