#ifndef ADIASIM_HERMITIAN_HPP
#define ADIASIM_HERMITIAN_HPP

/* Dense complex Hermitian operators, normalized state vectors, and the
   moment decomposition  A|psi> = <A>|psi> + sigma(A)|psi_perp>.

   All types are immutable after construction and all operations are pure,
   so values can be shared freely across threads. */

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "adiasim/errors.hpp"

namespace adiasim {

using Complex = std::complex<double>;

// Construction-time bound on |a_ij - conj(a_ji)|.
inline constexpr double kHermitianTolerance = 1e-12;
// Construction-time bound on |sum |amp_i|^2 - 1|.
inline constexpr double kNormTolerance = 1e-12;
// Below this, sigma has no resolvable residual direction.
inline constexpr double kSigmaZeroThreshold = 1e-12;
// Admissible imaginary residue on quantities that must be real.
inline constexpr double kImaginaryResidueTolerance = 1e-10;

namespace detail {

inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Rotate a global phase so the largest-magnitude component is real and
// positive; ties pick the lowest index. No-op on the zero vector.
inline void rotate_dominant_phase(std::vector<Complex>& v) {
    std::size_t dominant = 0;
    double best = std::abs(v[0]);
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > best) {
            best = mag;
            dominant = i;
        }
    }
    if (best == 0.0) return;
    const Complex phase = std::conj(v[dominant]) / best;
    for (auto& c : v) c *= phase;
}

}  // namespace detail

// Normalized complex amplitude vector. The unit norm is checked on
// construction; use normalized() to rescale raw amplitudes first.
class StateVector {
public:
    explicit StateVector(std::vector<Complex> amplitudes)
        : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.empty()) throw DimensionError("StateVector: dimension must be positive");
        double sq = 0.0;
        for (const auto& a : amplitudes_) {
            if (!detail::is_finite(a)) throw Error("StateVector: non-finite amplitude");
            sq += std::norm(a);
        }
        if (std::abs(sq - 1.0) > kNormTolerance) {
            std::ostringstream os;
            os << "StateVector: not normalized (|amplitudes|^2 = " << sq << ")";
            throw Error(os.str());
        }
    }

    static StateVector normalized(std::vector<Complex> amplitudes) {
        double sq = 0.0;
        for (const auto& a : amplitudes) {
            if (!detail::is_finite(a)) throw Error("StateVector: non-finite amplitude");
            sq += std::norm(a);
        }
        if (sq <= 0.0) throw Error("StateVector: cannot normalize the zero vector");
        const double inv = 1.0 / std::sqrt(sq);
        for (auto& a : amplitudes) a *= inv;
        return StateVector(std::move(amplitudes));
    }

    std::size_t dim() const noexcept { return amplitudes_.size(); }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
    const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }

    bool operator==(const StateVector& other) const { return amplitudes_ == other.amplitudes_; }

private:
    std::vector<Complex> amplitudes_;
};

// Dense M x M complex Hermitian matrix, row-major. Construction symmetrizes
// via (A + A^dagger)/2 when the asymmetry is below kHermitianTolerance and
// rejects otherwise, so stored entries satisfy a_ij == conj(a_ji) exactly
// and the diagonal is exactly real.
class HermitianMatrix {
public:
    HermitianMatrix(std::size_t dim, std::vector<Complex> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim_ < 2) throw DimensionError("HermitianMatrix: dimension must be >= 2");
        if (entries_.size() != dim_ * dim_) {
            std::ostringstream os;
            os << "HermitianMatrix: expected " << dim_ * dim_ << " entries, got " << entries_.size();
            throw DimensionError(os.str());
        }
        for (const auto& e : entries_) {
            if (!detail::is_finite(e)) throw Error("HermitianMatrix: non-finite entry");
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = i; j < dim_; ++j) {
                const Complex a = entries_[i * dim_ + j];
                const Complex b = entries_[j * dim_ + i];
                if (std::abs(a - std::conj(b)) > kHermitianTolerance) {
                    std::ostringstream os;
                    os << "HermitianMatrix: entry (" << i << "," << j << ") breaks Hermiticity by "
                       << std::abs(a - std::conj(b));
                    throw Error(os.str());
                }
                const Complex sym = 0.5 * (a + std::conj(b));
                if (i == j) {
                    entries_[i * dim_ + i] = Complex(sym.real(), 0.0);
                } else {
                    entries_[i * dim_ + j] = sym;
                    entries_[j * dim_ + i] = std::conj(sym);
                }
            }
        }
    }

    static HermitianMatrix diagonal(const std::vector<double>& values) {
        const std::size_t n = values.size();
        std::vector<Complex> entries(n * n, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < n; ++i) entries[i * n + i] = Complex(values[i], 0.0);
        return HermitianMatrix(n, std::move(entries));
    }

    static HermitianMatrix identity(std::size_t dim) {
        return diagonal(std::vector<double>(dim, 1.0));
    }

    std::size_t dim() const noexcept { return dim_; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    const std::vector<Complex>& entries() const noexcept { return entries_; }

    // A * amplitudes (raw, not normalized).
    std::vector<Complex> apply(const std::vector<Complex>& amps) const {
        if (amps.size() != dim_) throw DimensionError("HermitianMatrix::apply: dimension mismatch");
        std::vector<Complex> out(dim_, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < dim_; ++i) {
            Complex acc(0.0, 0.0);
            for (std::size_t j = 0; j < dim_; ++j) acc += entries_[i * dim_ + j] * amps[j];
            out[i] = acc;
        }
        return out;
    }

    std::vector<Complex> apply(const StateVector& psi) const { return apply(psi.amplitudes()); }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i].real();
        return t;
    }

    double frobenius_norm() const {
        double sq = 0.0;
        for (const auto& e : entries_) sq += std::norm(e);
        return std::sqrt(sq);
    }

    bool operator==(const HermitianMatrix& other) const {
        return dim_ == other.dim_ && entries_ == other.entries_;
    }

private:
    std::size_t dim_;
    std::vector<Complex> entries_;
};

inline HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("HermitianMatrix: dimension mismatch in +");
    std::vector<Complex> e(a.entries());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += b.entries()[i];
    return HermitianMatrix(a.dim(), std::move(e));
}

inline HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("HermitianMatrix: dimension mismatch in -");
    std::vector<Complex> e(a.entries());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= b.entries()[i];
    return HermitianMatrix(a.dim(), std::move(e));
}

inline HermitianMatrix operator*(double scale, const HermitianMatrix& a) {
    std::vector<Complex> e(a.entries());
    for (auto& x : e) x *= scale;
    return HermitianMatrix(a.dim(), std::move(e));
}

// First and second moment of A in the state psi, with the residual direction
// psi_perp such that A|psi> = mean|psi> + sigma|psi_perp>. The residual is
// absent when sigma vanishes (below kSigmaZeroThreshold) and otherwise
// carries the dominant-component-real-positive phase.
struct MomentDecomposition {
    double mean;
    double sigma;
    std::optional<StateVector> residual;
};

// <psi|A|psi>. Real for Hermitian input; a large imaginary residue signals a
// corrupted matrix and raises an error.
inline double expectation_value(const HermitianMatrix& A, const StateVector& psi) {
    if (A.dim() != psi.dim()) throw DimensionError("expectation_value: dimension mismatch");
    const std::vector<Complex> ap = A.apply(psi);
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < psi.dim(); ++i) acc += std::conj(psi[i]) * ap[i];
    if (std::abs(acc.imag()) >= kImaginaryResidueTolerance) {
        std::ostringstream os;
        os << "expectation_value: imaginary residue " << acc.imag() << " on Hermitian input";
        throw Error(os.str());
    }
    return acc.real();
}

// sigma^2 = <psi|A^2|psi> - <A>^2, clamped to be non-negative. Uses
// <psi|A^2|psi> = |A psi|^2, valid because A is Hermitian.
inline double variance(const HermitianMatrix& A, const StateVector& psi) {
    if (A.dim() != psi.dim()) throw DimensionError("variance: dimension mismatch");
    const std::vector<Complex> ap = A.apply(psi);
    double second = 0.0;
    Complex first(0.0, 0.0);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        second += std::norm(ap[i]);
        first += std::conj(psi[i]) * ap[i];
    }
    const double var = second - first.real() * first.real();
    return var > 0.0 ? var : 0.0;
}

inline MomentDecomposition moment_decompose(const HermitianMatrix& A, const StateVector& psi) {
    if (A.dim() != psi.dim()) throw DimensionError("moment_decompose: dimension mismatch");
    const double mean = expectation_value(A, psi);
    std::vector<Complex> res = A.apply(psi);
    double sq = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        res[i] -= mean * psi[i];
        sq += std::norm(res[i]);
    }
    const double sigma = std::sqrt(sq);
    if (sigma < kSigmaZeroThreshold) return MomentDecomposition{mean, sigma, std::nullopt};
    // the residual direction (A psi - mean psi)/sigma is unique: with sigma
    // real non-negative there is no phase left to fix, and any rotation
    // would break the reconstruction identity
    const double inv = 1.0 / sigma;
    for (auto& r : res) r *= inv;
    return MomentDecomposition{mean, sigma, StateVector::normalized(std::move(res))};
}

// The pairwise form of the variance over a spectrum:
//   sigma^2 = 1/2 sum_{i,j} w_i w_j (a_i - a_j)^2
// with w_i the squared amplitudes in the eigenbasis.
inline double variance_pairwise(const std::vector<double>& eigenvalues,
                                const std::vector<double>& weights) {
    if (eigenvalues.size() != weights.size()) {
        throw DimensionError("variance_pairwise: eigenvalue/weight count mismatch");
    }
    double sum = 0.0;
    for (const double w : weights) {
        if (w < 0.0) throw Error("variance_pairwise: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kNormTolerance) {
        std::ostringstream os;
        os << "variance_pairwise: weights sum to " << sum;
        throw Error(os.str());
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
            const double d = eigenvalues[i] - eigenvalues[j];
            acc += weights[i] * weights[j] * d * d;
        }
    }
    return 0.5 * acc;
}

// <u|v>, conjugate-linear in the first argument.
inline Complex inner_product(const StateVector& u, const StateVector& v) {
    if (u.dim() != v.dim()) throw DimensionError("inner_product: dimension mismatch");
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < u.dim(); ++i) acc += std::conj(u[i]) * v[i];
    return acc;
}

}  // namespace adiasim

#endif  // ADIASIM_HERMITIAN_HPP
