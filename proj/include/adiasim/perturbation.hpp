#ifndef ADIASIM_PERTURBATION_HPP
#define ADIASIM_PERTURBATION_HPP

/* First-order eigenpair response of A + eps*B around a non-degenerate
   eigenstate |a> of A, and the quadratic overlap prediction

     <a|d_hat> = 1 - eps^2/2 (<d1|d1> - (<a|d1> + <d1|a>)^2 / 2) + O(eps^3)

   between |a> and the normalized perturbed eigenstate. The correction |d1>
   is fixed in the gauge <a|d1> = 0, which collapses the bracket to |d1|^2. */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "adiasim/errors.hpp"
#include "adiasim/hermitian.hpp"
#include "adiasim/spectra.hpp"

namespace adiasim {

// Convention for the free component of the correction along the base state.
enum class Gauge {
    kCorrectionOrthogonalToBase,  // <a|d1> = 0
};

struct FirstOrderCorrection {
    double base_eigenvalue;                // lambda = <A>_a
    double eigenvalue_shift;               // gamma = <a|B|a>
    std::vector<Complex> correction_vector;  // |d1>, not normalized
    StateVector base_state;                // |a>
    Gauge gauge;
};

// Sum-over-states first-order correction for eigenstate `which` of A under
// the perturbation B:  d1 = sum_{m != which} <e_m|B|e_which>/(a_which - a_m) e_m.
inline FirstOrderCorrection first_order(const HermitianMatrix& A, const HermitianMatrix& B,
                                        std::size_t which) {
    if (A.dim() != B.dim()) throw DimensionError("first_order: dimension mismatch");
    if (which >= A.dim()) throw Error("first_order: eigenstate index out of range");

    const EigenSystem es = eigendecompose(A);
    const std::size_t n = es.dim;
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < n; ++m) {
        if (m == which) continue;
        nearest = std::min(nearest, std::abs(es.eigenvalues[which] - es.eigenvalues[m]));
    }
    if (nearest <= kDegeneracyTolerance) {
        std::ostringstream os;
        os << "first_order: eigenstate " << which << " degenerate (nearest gap " << nearest << ")";
        throw DegeneracyError(os.str(), -1, nearest);
    }

    const StateVector& base = es.eigenvectors[which];
    const std::vector<Complex> b_base = B.apply(base);

    Complex shift(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) shift += std::conj(base[i]) * b_base[i];
    if (std::abs(shift.imag()) >= kImaginaryResidueTolerance) {
        throw Error("first_order: eigenvalue shift has a non-negligible imaginary part");
    }

    std::vector<Complex> d1(n, Complex(0.0, 0.0));
    for (std::size_t m = 0; m < n; ++m) {
        if (m == which) continue;
        const StateVector& em = es.eigenvectors[m];
        Complex numer(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) numer += std::conj(em[i]) * b_base[i];
        const Complex coeff = numer / (es.eigenvalues[which] - es.eigenvalues[m]);
        for (std::size_t i = 0; i < n; ++i) d1[i] += coeff * em[i];
    }

    return FirstOrderCorrection{es.eigenvalues[which], shift.real(), std::move(d1), base,
                                Gauge::kCorrectionOrthogonalToBase};
}

// 1 - eps^2/2 (<d1|d1> - (<a|d1> + <d1|a>)^2 / 2); the cross terms vanish in
// the orthogonal gauge, leaving 1 - eps^2 |d1|^2 / 2.
inline double predicted_overlap(const FirstOrderCorrection& corr, double epsilon) {
    if (epsilon < 0.0) throw Error("predicted_overlap: epsilon must be >= 0");
    double norm_sq = 0.0;
    Complex along(0.0, 0.0);
    for (std::size_t i = 0; i < corr.correction_vector.size(); ++i) {
        norm_sq += std::norm(corr.correction_vector[i]);
        along += std::conj(corr.base_state[i]) * corr.correction_vector[i];
    }
    const double symmetric = 2.0 * along.real();  // <a|d1> + <d1|a>
    const double bracket = norm_sq - 0.5 * symmetric * symmetric;
    return 1.0 - 0.5 * epsilon * epsilon * bracket;
}

// Residual of the overlap prediction against exact ground states of
// A + eps*B at eps and eps/2. The prediction drops O(eps^3) terms, so the
// ratio err(eps)/err(eps/2) approaches 8 as eps -> 0.
inline std::pair<double, double> overlap_order_check(const HermitianMatrix& A,
                                                     const HermitianMatrix& B, double epsilon) {
    if (epsilon < 0.0) throw Error("overlap_order_check: epsilon must be >= 0");
    const FirstOrderCorrection corr = first_order(A, B, 0);

    const auto residual_at = [&](double eps) {
        const auto [value, state] = ground_state(A + eps * B);
        (void)value;
        const double exact = std::abs(inner_product(corr.base_state, state));
        return std::abs(exact - predicted_overlap(corr, eps));
    };
    return {residual_at(epsilon), residual_at(0.5 * epsilon)};
}

}  // namespace adiasim

#endif  // ADIASIM_PERTURBATION_HPP
