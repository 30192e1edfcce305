#include <doctest.h>

#include "lrdoa/spectrum.hpp"
#include "lrdoa/types.hpp"

using namespace lrdoa;

namespace {

Spectrum make(std::vector<double> power)
{
    Spectrum s;
    for (std::size_t k = 0; k < power.size(); ++k)
        s.angles_deg.push_back(10.0 * (k + 1));
    s.power = std::move(power);
    return s;
}

} // namespace

TEST_SUITE("spectrum") {

TEST_CASE("paper grid has 599 points")
{
    const ScanGrid g;
    CHECK(g.size() == 599);
    const auto a = g.angles();
    CHECK(a.front() == doctest::Approx(0.3));
    CHECK(a.back() == doctest::Approx(179.7));
}

TEST_CASE("single-angle grid")
{
    const ScanGrid g{60.0, 60.0, 0.3};
    CHECK(g.size() == 1);
}

TEST_CASE("grid validation")
{
    CHECK_THROWS_AS(ScanGrid({0.0, 90.0, 0.3}).validate(), DomainError);
    CHECK_THROWS_AS(ScanGrid({10.0, 180.0, 0.3}).validate(), DomainError);
    CHECK_THROWS_AS(ScanGrid({10.0, 90.0, 0.0}).validate(), DomainError);
    CHECK_THROWS_AS(ScanGrid({90.0, 10.0, 0.3}).validate(), DomainError);
}

TEST_CASE("peaks of a two-hump spectrum")
{
    const auto p = find_peaks(make({1, 3, 1, 5, 1}), 2);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == 20.0);
    CHECK(p[1] == 40.0);
}

TEST_CASE("monotone ramp peaks at the endpoint")
{
    const auto p = find_peaks(make({1, 2, 3, 4, 5}), 1);
    REQUIRE(p.size() == 1);
    CHECK(p[0] == 50.0);
    CHECK(argmax_angle(make({1, 2, 3, 4, 5})) == 50.0);
}

TEST_CASE("flat spectrum takes the lowest angles")
{
    const auto p = find_peaks(make({2, 2, 2, 2}), 2);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == 10.0);
    CHECK(p[1] == 20.0);
    CHECK(argmax_angle(make({2, 2, 2, 2})) == 10.0);
}

TEST_CASE("too few local maxima are filled with the largest remaining points")
{
    const auto p = find_peaks(make({1, 5, 4, 3, 2}), 3);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == 20.0);
    CHECK(p[1] == 30.0);
    CHECK(p[2] == 40.0);
}

TEST_CASE("asking for more peaks than grid points")
{
    CHECK_THROWS_AS(find_peaks(make({1, 2}), 3), DomainError);
}

}
