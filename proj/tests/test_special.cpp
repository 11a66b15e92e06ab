#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qiso/errors.hpp"
#include "qiso/special.hpp"

using namespace qiso;
namespace {
constexpr double kPi = std::numbers::pi;

// extended-precision reference for cap_weight, used as an independent oracle
long double cap_weight_ld(long double x) {
    const long double s = sinl(x);
    return s * s * s * cosl(x) / (sinl(x) - x * cosl(x));
}
}  // namespace

TEST_CASE("seg_area basic values") {
    CHECK(seg_area(0.0) == 0.0);
    CHECK(seg_area(kPi / 2) == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(seg_area(kPi / 4) == doctest::Approx(kPi / 4 - 0.5).epsilon(1e-14));
}

TEST_CASE("seg_area_ratio values and small-angle series") {
    CHECK(seg_area_ratio(0.0) == 0.0);
    CHECK(seg_area_ratio(kPi / 2) == doctest::Approx(kPi / 2).epsilon(1e-14));
    const double t = 1e-6;
    CHECK(std::abs(seg_area_ratio(t) - (2.0 / 3.0) * t) <= 1e-9 * (2.0 / 3.0) * t);
    CHECK_THROWS_AS(seg_area_ratio(kPi), domain_error);
    CHECK_THROWS_AS(seg_area_ratio(-4.0), domain_error);
}

TEST_CASE("odd symmetry of seg_area and seg_area_ratio") {
    for (double t : {1e-8, 1e-4, 0.3, 1.2, 2.9, 3.1}) {
        CHECK(seg_area(-t) == doctest::Approx(-seg_area(t)).epsilon(1e-15));
        CHECK(seg_area_ratio(-t) == doctest::Approx(-seg_area_ratio(t)).epsilon(1e-15));
    }
}

TEST_CASE("seg_area_ratio strictly increasing on a dense grid") {
    const int n = 10000;
    double prev = -1e300;
    for (int i = 0; i <= n; ++i) {
        const double t = 1e-9 + (kPi - 1e-6 - 1e-9) * i / n;
        const double v = seg_area_ratio(t);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("seg_angle round trips") {
    CHECK(seg_angle(0.0) == 0.0);
    CHECK(seg_angle(kPi / 2) == doctest::Approx(kPi / 2).epsilon(1e-13));
    CHECK(std::abs(seg_area_ratio(seg_angle(seg_area_ratio(1.0))) - seg_area_ratio(1.0)) < 1e-12);

    // log-spaced grid over [1e-8, 1e6] and negations; tolerance scales with
    // |y| since the forward map itself is only accurate to relative eps
    for (int i = 0; i <= 140; ++i) {
        const double y = std::pow(10.0, -8.0 + 14.0 * i / 140.0);
        for (double s : {1.0, -1.0}) {
            const double t = seg_angle(s * y);
            CHECK(std::abs(t) < kPi);
            CHECK(std::abs(seg_area_ratio(t) - s * y) <= 1e-12 * std::max(1.0, y));
        }
    }
    CHECK_THROWS_AS(seg_angle(std::nan("")), domain_error);
}

TEST_CASE("cap_weight sign, regularity at pi/2, extended-precision check") {
    CHECK(cap_weight(kPi / 2) == doctest::Approx(0.0).epsilon(1e-14));
    for (double x : {kPi / 2 + 0.01, 2.0, 2.8, 3.1})
        CHECK(cap_weight(x) < 0.0);  // negative past pi/2
    for (double x : {0.3, 1.0, kPi / 2 - 0.01})
        CHECK(cap_weight(x) > 0.0);
    const double got = cap_weight(kPi / 4);
    const double want = static_cast<double>(cap_weight_ld(static_cast<long double>(kPi) / 4));
    CHECK(got == doctest::Approx(want).epsilon(1e-13));
    CHECK_THROWS_AS(cap_weight(0.0), domain_error);
    CHECK_THROWS_AS(cap_weight(kPi), domain_error);
}

TEST_CASE("perimeter_defect vanishes at zero area shift") {
    for (double x : {0.1, 0.7, kPi / 2, 2.5})
        CHECK(std::abs(perimeter_defect(x, 0.0)) < 1e-10);
}

TEST_CASE("perimeter_defect leading order is y sin^2(x)/2") {
    const double x = kPi / 4, y = 0.01;
    const double lead = 0.5 * y * std::sin(x) * std::sin(x);
    CHECK(perimeter_defect(x, y) == doctest::Approx(lead).epsilon(0.05));
}

TEST_CASE("perimeter_defect increasing in y while the cap angle stays positive") {
    for (double x : {0.4, 1.0, 2.0}) {
        const double ylo = -0.9 * seg_area_ratio(x);  // keeps T = h^-1(h(x)+y) in (0, pi)
        double prev = -1e300;
        for (int i = 0; i <= 50; ++i) {
            const double y = ylo + (0.3 - ylo) * i / 50.0;
            const double v = perimeter_defect(x, y);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("oval limit value at the symmetric point and its halves") {
    const double want = kPi / (8.0 * (4.0 - kPi));
    CHECK(oval_limit_value(kPi / 4, kPi / 4) == doctest::Approx(want).epsilon(1e-14));
    CHECK(want > 0.44);
    CHECK(oval_limit_value(kPi / 2, kPi / 2) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(oval_limit_value(kPi / 4, kPi / 2) == doctest::Approx(0.5 * want).epsilon(1e-14));
    CHECK_THROWS_AS(oval_limit_value(0.0, kPi / 4), domain_error);
    CHECK_THROWS_AS(oval_limit_value(kPi / 4, 2.0), domain_error);
}

TEST_CASE("minimizing the oval limit recovers (pi/4, pi/4)") {
    const auto [angles, value] = minimize_oval_limit(0.01);
    CHECK(std::abs(angles.first - kPi / 4) < 1e-6);
    CHECK(std::abs(angles.second - kPi / 4) < 1e-6);
    CHECK(std::abs(value - kPi / (8.0 * (4.0 - kPi))) < 1e-10);
}
