#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "adiasim/path.hpp"
#include "support/generators.hpp"

using adiasim::Complex;
using adiasim::HermitianMatrix;
using adiasim::PathSpec;
using Catch::Approx;
namespace ts = testsupport;

TEST_CASE("PathSpec validation", "[path]") {
    CHECK_THROWS_AS(PathSpec(ts::canonical_x(), HermitianMatrix::identity(3), 10),
                    adiasim::DimensionError);
    CHECK_THROWS_AS(PathSpec(ts::canonical_x(), ts::canonical_z(), 0), adiasim::Error);
    CHECK_THROWS_AS(PathSpec(ts::canonical_x(), ts::canonical_z(), 10, -0.1), adiasim::Error);
}

TEST_CASE("operator_at endpoints and interior", "[path]") {
    const PathSpec path(ts::canonical_x(), ts::canonical_z(), 10);

    CHECK(adiasim::operator_at(path, 0) == ts::canonical_x());
    CHECK(adiasim::operator_at(path, 10) == ts::canonical_z());

    const HermitianMatrix mid = adiasim::operator_at(path, 3);
    CHECK(mid(0, 0) == Complex(0.3, 0));
    CHECK(mid(0, 1) == Complex(-0.3, 0));
    CHECK(mid(1, 0) == Complex(-0.3, 0));
    CHECK(mid(1, 1) == Complex(1.0, 0));

    CHECK_THROWS_AS(adiasim::operator_at(path, 11), adiasim::Error);
}

TEST_CASE("interpolation is bit-exact against the direct formula", "[path][property]") {
    std::mt19937_64 gen(3321);
    const HermitianMatrix x = ts::random_hermitian(4, gen);
    const HermitianMatrix z = ts::random_hermitian(4, gen);
    const std::size_t n = 17;
    const PathSpec path(x, z, n);
    for (std::size_t j = 0; j <= n; ++j) {
        const HermitianMatrix got = adiasim::operator_at(path, j);
        if (j == 0) {
            CHECK(got == x);
            continue;
        }
        if (j == n) {
            CHECK(got == z);
            continue;
        }
        const double s = static_cast<double>(j) / static_cast<double>(n);
        for (std::size_t e = 0; e < 16; ++e) {
            CHECK(got.entries()[e] == x.entries()[e] + s * (z.entries()[e] - x.entries()[e]));
        }
    }
}

TEST_CASE("brownian bridge pinning and determinism", "[path]") {
    const std::size_t n = 100;
    const PathSpec path(ts::canonical_x(), ts::canonical_z(), n, 0.1, 42);

    SECTION("pinned to the zero matrix at both endpoints") {
        for (const std::size_t j : {std::size_t{0}, n}) {
            const HermitianMatrix w = adiasim::brownian_bridge_term(path, j);
            for (const auto& e : w.entries()) CHECK(e == Complex(0, 0));
        }
    }

    SECTION("interior term is a nonzero Hermitian matrix") {
        const HermitianMatrix w = adiasim::brownian_bridge_term(path, 50);
        CHECK(w.frobenius_norm() > 0.0);
        CHECK(w(0, 1) == std::conj(w(1, 0)));
        CHECK(w(0, 0).imag() == 0.0);
    }

    SECTION("same seed regenerates bit-identically") {
        const PathSpec again(ts::canonical_x(), ts::canonical_z(), n, 0.1, 42);
        for (std::size_t j = 0; j <= n; ++j) {
            CHECK(adiasim::brownian_bridge_term(path, j) == adiasim::brownian_bridge_term(again, j));
        }
    }

    SECTION("different seeds differ somewhere inside") {
        const PathSpec other(ts::canonical_x(), ts::canonical_z(), n, 0.1, 43);
        CHECK_FALSE(adiasim::brownian_bridge_term(path, 50) ==
                    adiasim::brownian_bridge_term(other, 50));
    }

    SECTION("amplitude zero means a zero term everywhere") {
        const PathSpec quiet(ts::canonical_x(), ts::canonical_z(), n, 0.0, 42);
        const HermitianMatrix w = adiasim::brownian_bridge_term(quiet, 50);
        CHECK(w.frobenius_norm() == 0.0);
    }

    SECTION("operator_at stays Hermitian with noise") {
        for (std::size_t j = 0; j <= n; j += 10) {
            const HermitianMatrix a = adiasim::operator_at(path, j);
            for (std::size_t i = 0; i < 2; ++i) {
                for (std::size_t k = 0; k < 2; ++k) CHECK(a(i, k) == std::conj(a(k, i)));
            }
        }
    }
}

TEST_CASE("bridge mid-point variance matches s(1-s)", "[path][statistical]") {
    // var of each degree of freedom at fraction s is amplitude^2 * s(1-s)
    const std::size_t n = 64;
    const double amplitude = 0.2;
    const double expected = amplitude * amplitude * 0.25;
    double sum_sq = 0.0;
    const int seeds = 2000;
    for (int seed = 0; seed < seeds; ++seed) {
        const PathSpec path(ts::canonical_x(), ts::canonical_z(), n, amplitude,
                            static_cast<std::uint64_t>(seed));
        const double entry = adiasim::brownian_bridge_term(path, n / 2)(0, 0).real();
        sum_sq += entry * entry;
    }
    const double sample_var = sum_sq / seeds;
    CHECK(sample_var == Approx(expected).epsilon(0.15));
}

TEST_CASE("gap_profile", "[path]") {
    SECTION("constant path keeps the full gap") {
        const PathSpec path(ts::canonical_x(), ts::canonical_x(), 5);
        const auto profile = adiasim::gap_profile(path, 1e-8);
        REQUIRE(profile.reports.size() == 6);
        for (const auto& r : profile.reports) CHECK(r.gap == Approx(1.0).epsilon(1e-12));
        CHECK(profile.min_gap == Approx(1.0).epsilon(1e-12));
    }

    SECTION("crossing pair collapses at s = 1/2") {
        const PathSpec path(ts::canonical_x(), ts::crossing_z(), 100);
        const auto profile = adiasim::gap_profile(path, 1e-8);
        CHECK(profile.argmin_step == 50);
        CHECK(profile.min_gap == Approx(0.0).margin(1e-14));
        CHECK(profile.reports[50].degenerate);
        // closed form |1 - 2s|
        CHECK(profile.reports[30].gap == Approx(0.4).epsilon(1e-12));
    }

    SECTION("canonical pair matches sqrt(1 - 2s + 5 s^2)") {
        const std::size_t n = 100;
        const PathSpec path(ts::canonical_x(), ts::canonical_z(), n);
        const auto profile = adiasim::gap_profile(path, 1e-8);
        for (std::size_t j = 0; j <= n; ++j) {
            const double s = static_cast<double>(j) / static_cast<double>(n);
            const double expected = std::sqrt(1.0 - 2.0 * s + 5.0 * s * s);
            CHECK(std::abs(profile.reports[j].gap - expected) < 1e-9);
        }
        CHECK(profile.argmin_step == 20);  // minimum of the closed form at s = 1/5
    }
}

TEST_CASE("footnote_distance", "[path]") {
    const HermitianMatrix x = ts::canonical_x();

    CHECK(adiasim::footnote_distance(x, x) == 0.0);
    CHECK_FALSE(adiasim::footnote_distance(x, 0.5 * HermitianMatrix::identity(2)).has_value());
    CHECK(adiasim::footnote_distance(x, HermitianMatrix::diagonal({0.0, 2.0})).value() ==
          Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(adiasim::footnote_distance(HermitianMatrix::identity(3), x),
                    adiasim::DimensionError);

    SECTION("symmetry on random pairs") {
        std::mt19937_64 gen(9012);
        for (int rep = 0; rep < 50; ++rep) {
            const HermitianMatrix a = ts::random_hermitian(2, gen);
            const HermitianMatrix b = ts::random_hermitian(2, gen);
            const auto ab = adiasim::footnote_distance(a, b);
            const auto ba = adiasim::footnote_distance(b, a);
            REQUIRE(ab.has_value() == ba.has_value());
            if (ab) CHECK(*ab == Approx(*ba).margin(1e-12));
            const auto self = adiasim::footnote_distance(a, a);
            if (self) CHECK(*self == 0.0);
        }
    }
}

TEST_CASE("gap_distance", "[path]") {
    const HermitianMatrix x3 = HermitianMatrix::diagonal({0.0, 1.0, 5.0});
    const HermitianMatrix z3 = HermitianMatrix::diagonal({0.0, 2.0, 5.0});

    CHECK(adiasim::gap_distance(x3, x3) == 0.0);
    CHECK(adiasim::gap_distance(x3, z3).value() == Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(adiasim::gap_distance(x3, HermitianMatrix::diagonal({1.0, 1.0, 2.0})).has_value());
    CHECK_THROWS_AS(adiasim::gap_distance(x3, ts::canonical_x()), adiasim::DimensionError);

    SECTION("coincides with footnote_distance at M = 2") {
        std::mt19937_64 gen(8080);
        for (int rep = 0; rep < 50; ++rep) {
            const HermitianMatrix a = ts::random_hermitian(2, gen);
            const HermitianMatrix b = ts::random_hermitian(2, gen);
            const auto foot = adiasim::footnote_distance(a, b);
            const auto gap = adiasim::gap_distance(a, b);
            REQUIRE(foot.has_value() == gap.has_value());
            if (foot) CHECK(*foot == *gap);
        }
    }
}
