#ifndef ADIASIM_SPECTRA_HPP
#define ADIASIM_SPECTRA_HPP

/* Eigendecomposition of dense complex Hermitian matrices by cyclic Jacobi
   rotations (two-sided unitary 2x2 eliminations), with deterministic
   ordering and phase, plus ground-state and spectral-gap diagnostics.

   Determinism contract: identical input produces bit-identical output.
   The sweep order is fixed (row-major upper triangle), eigenvalues are
   stable-sorted ascending, and each eigenvector's dominant component is
   rotated to be real and positive. */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "adiasim/errors.hpp"
#include "adiasim/hermitian.hpp"

namespace adiasim {

// Spectral gaps below this are treated as degenerate by default.
inline constexpr double kDegeneracyTolerance = 1e-8;
// Convergence: off-diagonal Frobenius norm <= this factor times |A|_F.
inline constexpr double kJacobiThresholdFactor = 1e-14;
inline constexpr int kMaxJacobiSweeps = 100;

// Ascending eigenvalues with matching orthonormal eigenvectors.
struct EigenSystem {
    std::size_t dim;
    std::vector<double> eigenvalues;
    std::vector<StateVector> eigenvectors;
};

struct GapReport {
    double gap;             // eigenvalues[1] - eigenvalues[0]
    bool degenerate;        // gap < tolerance_used
    double tolerance_used;
};

inline EigenSystem eigendecompose(const HermitianMatrix& A) {
    const std::size_t n = A.dim();
    std::vector<Complex> a = A.entries();
    std::vector<Complex> v(n * n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = Complex(1.0, 0.0);

    const double threshold = kJacobiThresholdFactor * A.frobenius_norm();
    const auto off_norm = [&]() {
        double sq = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) sq += std::norm(a[i * n + j]);
        return std::sqrt(2.0 * sq);
    };

    int sweep = 0;
    while (off_norm() > threshold) {
        if (++sweep > kMaxJacobiSweeps) {
            std::ostringstream os;
            os << "eigendecompose: no convergence after " << kMaxJacobiSweeps << " sweeps";
            throw ConvergenceError(os.str());
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a[p * n + q];
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                const double app = a[p * n + p].real();
                const double aqq = a[q * n + q].real();
                const Complex phase = apq / r;  // e^{i phi}, makes the pivot real

                // tan(theta) for the real rotation that zeroes the pivot
                const double tau = (aqq - app) / (2.0 * r);
                const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                            : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] in the (p,q) plane
                const Complex gqp = -s * std::conj(phase);
                const Complex gqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {  // A <- A G (columns p, q)
                    const Complex akp = a[k * n + p];
                    const Complex akq = a[k * n + q];
                    a[k * n + p] = c * akp + gqp * akq;
                    a[k * n + q] = s * akp + gqq * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {  // A <- G^dagger A (rows p, q)
                    const Complex apk = a[p * n + k];
                    const Complex aqk = a[q * n + k];
                    a[p * n + k] = c * apk - (s * phase) * aqk;
                    a[q * n + k] = s * apk + (c * phase) * aqk;
                }
                // the rotated pivot is zero and the block diagonal real by
                // construction; write the exact values back
                a[p * n + q] = Complex(0.0, 0.0);
                a[q * n + p] = Complex(0.0, 0.0);
                a[p * n + p] = Complex(app - t * r, 0.0);
                a[q * n + q] = Complex(aqq + t * r, 0.0);

                for (std::size_t k = 0; k < n; ++k) {  // V <- V G
                    const Complex vkp = v[k * n + p];
                    const Complex vkq = v[k * n + q];
                    v[k * n + p] = c * vkp + gqp * vkq;
                    v[k * n + q] = s * vkp + gqq * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a[i * n + i].real() < a[j * n + j].real();
    });

    EigenSystem es;
    es.dim = n;
    es.eigenvalues.reserve(n);
    es.eigenvectors.reserve(n);
    for (const std::size_t col : order) {
        es.eigenvalues.push_back(a[col * n + col].real());
        std::vector<Complex> vec(n);
        for (std::size_t k = 0; k < n; ++k) vec[k] = v[k * n + col];
        detail::rotate_dominant_phase(vec);
        es.eigenvectors.push_back(StateVector::normalized(std::move(vec)));
    }
    return es;
}

// Lowest eigenpair. A ground state within `tolerance` of the next level is
// an error; callers that want to inspect degenerate spectra use
// eigendecompose directly.
inline std::pair<double, StateVector> ground_state(const HermitianMatrix& A,
                                                   double tolerance = kDegeneracyTolerance) {
    EigenSystem es = eigendecompose(A);
    const double gap = es.eigenvalues[1] - es.eigenvalues[0];
    if (gap < tolerance) {
        std::ostringstream os;
        os << "ground_state: degenerate ground state (gap " << gap << " < " << tolerance << ")";
        throw DegeneracyError(os.str(), -1, gap);
    }
    return {es.eigenvalues[0], std::move(es.eigenvectors[0])};
}

inline GapReport gap_report(const HermitianMatrix& A, double tolerance) {
    if (!(tolerance > 0.0)) throw Error("gap_report: tolerance must be positive");
    const EigenSystem es = eigendecompose(A);
    const double gap = es.eigenvalues[1] - es.eigenvalues[0];
    return GapReport{gap, gap < tolerance, tolerance};
}

}  // namespace adiasim

#endif  // ADIASIM_SPECTRA_HPP
