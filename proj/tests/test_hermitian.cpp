#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "adiasim/hermitian.hpp"
#include "adiasim/spectra.hpp"
#include "support/generators.hpp"

using adiasim::Complex;
using adiasim::HermitianMatrix;
using adiasim::StateVector;
using Catch::Approx;
namespace ts = testsupport;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("HermitianMatrix construction", "[hermitian]") {
    SECTION("accepts an exact Hermitian payload") {
        const HermitianMatrix a(2, {Complex(1, 0), Complex(0, 1), Complex(0, -1), Complex(2, 0)});
        CHECK(a(0, 1) == Complex(0, 1));
        CHECK(a(1, 0) == Complex(0, -1));
    }
    SECTION("symmetrizes sub-tolerance asymmetry") {
        const double bump = 4e-13;
        const HermitianMatrix a(
            2, {Complex(1, 0), Complex(0.5 + bump, 0), Complex(0.5, 0), Complex(2, 0)});
        CHECK(a(0, 1) == std::conj(a(1, 0)));
        CHECK(a(0, 1).real() == Approx(0.5 + bump / 2).epsilon(1e-12));
    }
    SECTION("rejects asymmetry above tolerance") {
        CHECK_THROWS_AS(
            HermitianMatrix(2, {Complex(1, 0), Complex(0.5, 0), Complex(0.4, 0), Complex(2, 0)}),
            adiasim::Error);
    }
    SECTION("rejects dimension below 2") {
        CHECK_THROWS_AS(HermitianMatrix(1, {Complex(1, 0)}), adiasim::DimensionError);
    }
    SECTION("rejects non-finite entries") {
        CHECK_THROWS_AS(HermitianMatrix(2, {Complex(std::nan(""), 0), Complex(0, 0), Complex(0, 0),
                                            Complex(1, 0)}),
                        adiasim::Error);
    }
    SECTION("rejects wrong entry count") {
        CHECK_THROWS_AS(HermitianMatrix(2, {Complex(1, 0)}), adiasim::DimensionError);
    }
    SECTION("forces an exactly real diagonal") {
        const HermitianMatrix a(
            2, {Complex(1, 5e-13), Complex(0, 0), Complex(0, 0), Complex(2, 0)});
        CHECK(a(0, 0).imag() == 0.0);
    }
}

TEST_CASE("StateVector construction", "[hermitian]") {
    CHECK_THROWS_AS(StateVector({Complex(1, 0), Complex(1, 0)}), adiasim::Error);
    CHECK_THROWS_AS(StateVector(std::vector<Complex>{}), adiasim::DimensionError);
    CHECK_THROWS_AS(StateVector::normalized({Complex(0, 0), Complex(0, 0)}), adiasim::Error);

    const StateVector v = StateVector::normalized({Complex(1, 0), Complex(1, 0)});
    CHECK(v[0].real() == Approx(kInvSqrt2));
    CHECK(v[1].real() == Approx(kInvSqrt2));
}

TEST_CASE("expectation_value examples", "[hermitian]") {
    const HermitianMatrix diag01 = HermitianMatrix::diagonal({0.0, 1.0});
    const StateVector e0({Complex(1, 0), Complex(0, 0)});
    const StateVector plus = StateVector::normalized({Complex(1, 0), Complex(1, 0)});

    CHECK(adiasim::expectation_value(diag01, e0) == Approx(0.0).margin(1e-15));
    CHECK(adiasim::expectation_value(diag01, plus) == Approx(0.5).epsilon(1e-12));

    const double s = 0.3;
    const HermitianMatrix interp(
        2, {Complex(s, 0), Complex(-s, 0), Complex(-s, 0), Complex(1, 0)});
    const double expected = ts::naive_quadratic_form(interp, e0).real();
    CHECK(expected == Approx(0.3).epsilon(1e-15));
    CHECK(adiasim::expectation_value(interp, e0) == Approx(expected).epsilon(1e-12));

    const StateVector three({Complex(1, 0), Complex(0, 0), Complex(0, 0)});
    CHECK_THROWS_AS(adiasim::expectation_value(diag01, three), adiasim::DimensionError);
}

TEST_CASE("variance examples", "[hermitian]") {
    const HermitianMatrix diag01 = HermitianMatrix::diagonal({0.0, 1.0});
    const StateVector e0({Complex(1, 0), Complex(0, 0)});
    const StateVector plus = StateVector::normalized({Complex(1, 0), Complex(1, 0)});

    CHECK(adiasim::variance(diag01, e0) == Approx(0.0).margin(1e-15));
    // pairwise identity by hand: 1/2 * (1/4 + 1/4) = 1/4
    CHECK(adiasim::variance(diag01, plus) == Approx(0.25).epsilon(1e-12));

    const HermitianMatrix scalar = HermitianMatrix::diagonal({0.7, 0.7});
    CHECK(adiasim::variance(scalar, plus) == Approx(0.0).margin(1e-15));
    CHECK(adiasim::variance(scalar, plus) >= 0.0);
}

TEST_CASE("variance_pairwise examples", "[hermitian]") {
    CHECK(adiasim::variance_pairwise({0.0, 1.0}, {1.0, 0.0}) == 0.0);
    CHECK(adiasim::variance_pairwise({0.0, 1.0}, {0.5, 0.5}) == Approx(0.25).epsilon(1e-15));
    CHECK(adiasim::variance_pairwise({3.0, 3.0, 3.0}, {0.2, 0.5, 0.3}) == 0.0);

    CHECK_THROWS_AS(adiasim::variance_pairwise({0.0, 1.0}, {0.5, 0.6}), adiasim::Error);
    CHECK_THROWS_AS(adiasim::variance_pairwise({0.0, 1.0}, {1.5, -0.5}), adiasim::Error);
    CHECK_THROWS_AS(adiasim::variance_pairwise({0.0, 1.0}, {1.0}), adiasim::DimensionError);
}

TEST_CASE("moment_decompose examples", "[hermitian]") {
    const HermitianMatrix diag01 = HermitianMatrix::diagonal({0.0, 1.0});

    SECTION("eigenstate: no residual") {
        const StateVector e0({Complex(1, 0), Complex(0, 0)});
        const auto dec = adiasim::moment_decompose(diag01, e0);
        CHECK(dec.mean == Approx(0.0).margin(1e-15));
        CHECK(dec.sigma == Approx(0.0).margin(1e-15));
        CHECK_FALSE(dec.residual.has_value());
    }

    SECTION("equal superposition: residual solves (A psi - mean psi)/sigma") {
        const StateVector plus = StateVector::normalized({Complex(1, 0), Complex(1, 0)});
        const auto dec = adiasim::moment_decompose(diag01, plus);
        CHECK(dec.mean == Approx(0.5).epsilon(1e-12));
        CHECK(dec.sigma == Approx(0.5).epsilon(1e-12));
        REQUIRE(dec.residual.has_value());
        CHECK((*dec.residual)[0].real() == Approx(-kInvSqrt2).epsilon(1e-12));
        CHECK((*dec.residual)[1].real() == Approx(kInvSqrt2).epsilon(1e-12));
        CHECK(std::abs(adiasim::inner_product(plus, *dec.residual)) < 1e-10);
    }

    SECTION("random instances reconstruct A|psi>") {
        std::mt19937_64 gen(20240811);
        for (int rep = 0; rep < 50; ++rep) {
            const HermitianMatrix a = ts::random_hermitian(4, gen);
            const StateVector psi = ts::random_state(4, gen);
            const auto dec = adiasim::moment_decompose(a, psi);
            const auto ap = a.apply(psi);
            double err_sq = 0.0;
            for (std::size_t i = 0; i < 4; ++i) {
                Complex rebuilt = dec.mean * psi[i];
                if (dec.residual) rebuilt += dec.sigma * (*dec.residual)[i];
                err_sq += std::norm(ap[i] - rebuilt);
            }
            CHECK(std::sqrt(err_sq) < 1e-10);
            if (dec.residual) {
                CHECK(std::abs(adiasim::inner_product(psi, *dec.residual)) < 1e-10);
            }
        }
    }
}

TEST_CASE("inner_product examples", "[hermitian]") {
    const StateVector e0({Complex(1, 0), Complex(0, 0)});
    const StateVector e1({Complex(0, 0), Complex(1, 0)});
    const StateVector plus = StateVector::normalized({Complex(1, 0), Complex(1, 0)});

    CHECK(adiasim::inner_product(e0, e0) == Complex(1, 0));
    CHECK(adiasim::inner_product(e0, e1) == Complex(0, 0));
    CHECK(adiasim::inner_product(e0, plus).real() == Approx(kInvSqrt2));

    // conjugate-linear in the first argument
    const StateVector phased({Complex(0, 1), Complex(0, 0)});
    CHECK(adiasim::inner_product(phased, e0).imag() == Approx(-1.0));
}

TEST_CASE("moment identities on random instances", "[hermitian][property]") {
    std::mt19937_64 gen(98731);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t dim = 2 + static_cast<std::size_t>(rep % 7);
        const HermitianMatrix a = ts::random_hermitian(dim, gen);
        const StateVector psi = ts::random_state(dim, gen);

        const double mean = adiasim::expectation_value(a, psi);
        const double var = adiasim::variance(a, psi);

        // norm identity <psi|A^dagger A|psi> = mean^2 + var against the
        // independent double-loop oracle
        const double second = ts::naive_second_moment(a, psi);
        CHECK(std::abs(second - (mean * mean + var)) < 1e-10);

        // expectation is real: oracle form carries the raw imaginary part
        CHECK(std::abs(ts::naive_quadratic_form(a, psi).imag()) < 1e-10);

        // pairwise identity through the spectrum
        const adiasim::EigenSystem es = adiasim::eigendecompose(a);
        std::vector<double> weights(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            weights[i] = std::norm(adiasim::inner_product(es.eigenvectors[i], psi));
        }
        const double pairwise = adiasim::variance_pairwise(es.eigenvalues, weights);
        CHECK(std::abs(pairwise - var) < 1e-10);

        // eigenvectors have vanishing variance
        CHECK(adiasim::variance(a, es.eigenvectors[0]) < 1e-12);
    }
}
