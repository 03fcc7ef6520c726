#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "irssim/pathloss.hpp"

using namespace irssim;

TEST_CASE("distance-power law at and beyond the reference point") {
    PathLossSpec spec{-30.0, 2.0};
    CHECK(path_loss(spec, 1.0) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(path_loss(spec, 10.0) == doctest::Approx(1e-5).epsilon(1e-12));
    PathLossSpec steep{-30.0, 3.5};
    // oracle: direct scalar arithmetic
    CHECK(path_loss(steep, 199.0) ==
          doctest::Approx(1e-3 * std::pow(199.0, -3.5)).epsilon(1e-12));
}

TEST_CASE("bad distances and exponents are rejected") {
    PathLossSpec spec{-30.0, 2.0};
    CHECK_THROWS_AS(path_loss(spec, 0.0), std::domain_error);
    CHECK_THROWS_AS(path_loss(spec, -3.0), std::domain_error);
    PathLossSpec bad{-30.0, -1.0};
    CHECK_THROWS_AS(path_loss(bad, 1.0), std::domain_error);
}

TEST_CASE("two-hop gains multiply") {
    PathLossSpec unit{0.0, 2.0};
    CHECK(product_path_gain(unit, 1.0, unit, 1.0) == doctest::Approx(1.0));

    PathLossSpec spec{-30.0, 2.0};
    const double far = product_path_gain(spec, 50.0, spec, 3.0);
    CHECK(far == doctest::Approx(1e-6 / (2500.0 * 9.0)).epsilon(1e-12));
    // halving both distances with square-law hops scales the product by 16
    const double near = product_path_gain(spec, 25.0, spec, 1.5);
    CHECK(near / far == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("decibel conversions") {
    CHECK(db_to_linear(-30.0) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
    CHECK(linear_to_db(100.0) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(dbm_to_watt(-90.0) == doctest::Approx(1e-12).epsilon(1e-12));
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(watt_to_dbm(0.05) == doctest::Approx(16.989700043).epsilon(1e-9));
    CHECK(dbm_to_watt(watt_to_dbm(0.123)) == doctest::Approx(0.123).epsilon(1e-12));
}

TEST_CASE("mirror-image comparison model uses the summed distance") {
    // never part of a link budget; kept for side-by-side comparison
    CHECK(sum_distance_gain(-30.0, 50.0, 3.0) ==
          doctest::Approx(1e-3 / (53.0 * 53.0)).epsilon(1e-12));
    const double prod = product_path_gain({-30.0, 2.0}, 50.0, {-30.0, 2.0}, 3.0);
    CHECK(sum_distance_gain(-30.0, 50.0, 3.0) > prod);
}
