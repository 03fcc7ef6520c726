#include <cmath>
#include <set>

#include "doctest.h"
#include "irssim/rng.hpp"

using namespace irssim;

TEST_CASE("identical seeds give identical streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    Rng c(42), d(43);
    bool all_equal = true;
    for (int i = 0; i < 100; ++i)
        if (c.next_u64() != d.next_u64()) all_equal = false;
    CHECK_FALSE(all_equal);
}

TEST_CASE("trial seeds are distinct across indices and bases") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 2000; ++i) seen.insert(trial_seed(7, i));
    CHECK(seen.size() == 2000);
    CHECK(trial_seed(7, 0) != trial_seed(8, 0));
}

TEST_CASE("complex gaussian moments") {
    Rng rng(123);
    const int n = 200000;
    std::complex<double> mean = 0.0;
    double pow2 = 0.0, re2 = 0.0, im2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto z = rng.cgauss();
        mean += z;
        pow2 += std::norm(z);
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
    }
    mean /= double(n);
    CHECK(std::abs(mean) < 0.01);
    CHECK(pow2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("angle draws stay in [0, 2pi)") {
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        const double a = rng.uniform_angle();
        CHECK(a >= 0.0);
        CHECK(a < 2.0 * 3.14159265358979323846);
    }
}
