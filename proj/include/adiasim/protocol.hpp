#ifndef ADIASIM_PROTOCOL_HPP
#define ADIASIM_PROTOCOL_HPP

/* The measurement protocol: starting from the ground state of A_0 = X, the
   state is projectively measured in the eigenbasis of each A_j along the
   path. Between measurements the state is unchanged, so the step j -> j+1
   outcome distribution is governed by the doubly stochastic matrix
   T_j[m][n] = |<e_m^{(j+1)}|e_n^{(j)}>|^2.

   Two observables are tracked separately: ideal_survival, the probability
   of taking the ground-state outcome at every step (product of T_j[0][0]),
   and exact_ground_probability, the total probability of ending in the
   final ground state under full Markov propagation (which also counts
   excursion-and-return histories). */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include "adiasim/errors.hpp"
#include "adiasim/hermitian.hpp"
#include "adiasim/path.hpp"
#include "adiasim/perturbation.hpp"
#include "adiasim/rng.hpp"
#include "adiasim/spectra.hpp"

namespace adiasim {

// Failures at or below this are numerical zero and excluded from log fits.
inline constexpr double kFailureFloor = 1e-14;

struct ProtocolResult {
    std::size_t N;
    double ideal_survival;                       // product of per-step ground overlaps
    std::vector<double> exact_final_distribution;  // over eigenstates of A_N = Z
    double exact_ground_probability;             // entry 0 of the distribution
    std::vector<double> per_step_overlaps;       // T_j[0][0], j = 0..N-1
    double min_gap_encountered;
};

struct MonteCarloResult {
    std::size_t trials;
    std::size_t ground_hits;
    double estimate;    // ground_hits / trials
    double std_error;   // binomial
    std::uint64_t seed;
};

struct ScalingFit {
    std::vector<std::size_t> N_values;
    std::vector<double> failures;  // 1 - exact_ground_probability per N
    double slope;
    double intercept;   // natural-log axes
    double r_squared;
};

// |<to_m|from_n>|^2, row-major M x M. Doubly stochastic because both bases
// are orthonormal.
inline std::vector<double> transition_matrix(const EigenSystem& to, const EigenSystem& from) {
    if (to.dim != from.dim) throw DimensionError("transition_matrix: dimension mismatch");
    const std::size_t m = to.dim;
    std::vector<double> t(m * m);
    for (std::size_t row = 0; row < m; ++row) {
        for (std::size_t col = 0; col < m; ++col) {
            t[row * m + col] = std::norm(inner_product(to.eigenvectors[row], from.eigenvectors[col]));
        }
    }
    return t;
}

namespace detail {

// Eigensystems along the path with the per-step transition matrices.
// Throws DegeneracyError naming the first step whose gap is below tolerance.
struct PathTransitions {
    std::vector<std::vector<double>> steps;  // length N, each M x M row-major
    double min_gap;
};

inline PathTransitions path_transitions(const PathSpec& path, double tolerance) {
    if (!(tolerance > 0.0)) throw Error("protocol: tolerance must be positive");
    PathTransitions out;
    out.steps.reserve(path.steps());

    const auto checked_eigensystem = [&](std::size_t j) {
        EigenSystem es = eigendecompose(operator_at(path, j));
        const double gap = es.eigenvalues[1] - es.eigenvalues[0];
        if (gap < tolerance) {
            std::ostringstream os;
            os << "degenerate path: gap " << gap << " < " << tolerance << " at step " << j << " of "
               << path.steps();
            throw DegeneracyError(os.str(), static_cast<long>(j), gap);
        }
        if (j == 0 || gap < out.min_gap) out.min_gap = gap;
        return es;
    };

    EigenSystem prev = checked_eigensystem(0);
    for (std::size_t j = 1; j <= path.steps(); ++j) {
        EigenSystem cur = checked_eigensystem(j);
        out.steps.push_back(transition_matrix(cur, prev));
        prev = std::move(cur);
    }
    return out;
}

inline unsigned clamp_threads(int threads) {
    return threads < 1 ? 1u : static_cast<unsigned>(threads);
}

}  // namespace detail

inline ProtocolResult run_exact(const PathSpec& path, double tolerance = kDegeneracyTolerance) {
    const detail::PathTransitions pt = detail::path_transitions(path, tolerance);
    const std::size_t m = path.X().dim();

    ProtocolResult result;
    result.N = path.steps();
    result.ideal_survival = 1.0;
    result.per_step_overlaps.reserve(path.steps());
    result.min_gap_encountered = pt.min_gap;

    std::vector<double> p(m, 0.0);
    p[0] = 1.0;  // ground state of X survives the first measurement unchanged
    std::vector<double> next(m, 0.0);
    for (const auto& t : pt.steps) {
        result.per_step_overlaps.push_back(t[0]);
        result.ideal_survival *= t[0];
        for (std::size_t row = 0; row < m; ++row) {
            double acc = 0.0;
            for (std::size_t col = 0; col < m; ++col) acc += t[row * m + col] * p[col];
            next[row] = acc;
        }
        p.swap(next);
    }

    result.exact_final_distribution = std::move(p);
    result.exact_ground_probability = result.exact_final_distribution[0];
    return result;
}

// Born-rule sampling of the measurement chain. Each trial owns the RNG
// stream derived from (seed, trial index), so the result is independent of
// scheduling and thread count.
inline MonteCarloResult run_monte_carlo(const PathSpec& path, std::size_t trials,
                                        std::uint64_t seed,
                                        double tolerance = kDegeneracyTolerance,
                                        int threads = 1) {
    if (trials < 1) throw Error("run_monte_carlo: trials must be >= 1");
    const detail::PathTransitions pt = detail::path_transitions(path, tolerance);
    const std::size_t m = path.X().dim();

    const auto count_hits = [&](std::size_t begin, std::size_t end) {
        std::size_t hits = 0;
        for (std::size_t trial = begin; trial < end; ++trial) {
            std::mt19937_64 gen = rng::derive_stream(seed, trial);
            std::size_t state = 0;
            for (const auto& t : pt.steps) {
                const double u = rng::uniform01(gen);
                double cum = 0.0;
                std::size_t outcome = m - 1;  // guards against rounding in the CDF
                for (std::size_t row = 0; row < m; ++row) {
                    cum += t[row * m + state];
                    if (u < cum) {
                        outcome = row;
                        break;
                    }
                }
                state = outcome;
            }
            if (state == 0) ++hits;
        }
        return hits;
    };

    const unsigned worker_count = detail::clamp_threads(threads);
    std::size_t hits = 0;
    if (worker_count <= 1 || trials < 2 * worker_count) {
        hits = count_hits(0, trials);
    } else {
        const std::size_t chunk = (trials + worker_count - 1) / worker_count;
        std::vector<std::future<std::size_t>> futures;
        for (std::size_t begin = 0; begin < trials; begin += chunk) {
            const std::size_t end = begin + chunk < trials ? begin + chunk : trials;
            futures.push_back(std::async(std::launch::async, count_hits, begin, end));
        }
        for (auto& f : futures) hits += f.get();
    }

    const double estimate = static_cast<double>(hits) / static_cast<double>(trials);
    const double variance_hat = estimate * (1.0 - estimate) / static_cast<double>(trials);
    return MonteCarloResult{trials, hits, estimate,
                            variance_hat > 0.0 ? std::sqrt(variance_hat) : 0.0, seed};
}

// Least-squares fit of log(failure) against log(N), dropping points at the
// numerical-zero floor. Errors out with fewer than two usable points.
inline ScalingFit fit_failure_scaling(const std::vector<std::size_t>& N_values,
                                      const std::vector<double>& failures) {
    if (N_values.size() != failures.size()) {
        throw DimensionError("fit_failure_scaling: N/failure count mismatch");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < N_values.size(); ++i) {
        if (failures[i] > kFailureFloor) {
            xs.push_back(std::log(static_cast<double>(N_values[i])));
            ys.push_back(std::log(failures[i]));
        }
    }
    if (xs.size() < 2) {
        std::ostringstream os;
        os << "fit_failure_scaling: fewer than 2 usable points (" << xs.size() << " above the "
           << kFailureFloor << " failure floor)";
        throw Error(os.str());
    }

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw Error("fit_failure_scaling: degenerate abscissa (identical N values)");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss_res += r * r;
    }
    const double r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return ScalingFit{N_values, failures, slope, intercept, r_squared};
}

// run_exact over each N (bridge disabled) and fit the failure-rate power law.
inline ScalingFit scaling_sweep(const HermitianMatrix& X, const HermitianMatrix& Z,
                                const std::vector<std::size_t>& N_values,
                                double tolerance = kDegeneracyTolerance, int threads = 1) {
    if (N_values.empty()) throw Error("scaling_sweep: N_values must be non-empty");
    for (const std::size_t n : N_values) {
        if (n < 1) throw Error("scaling_sweep: every N must be >= 1");
    }

    const auto failure_at = [&](std::size_t n) {
        return 1.0 - run_exact(PathSpec(X, Z, n), tolerance).exact_ground_probability;
    };

    std::vector<double> failures(N_values.size());
    const unsigned worker_count = detail::clamp_threads(threads);
    if (worker_count <= 1 || N_values.size() < 2) {
        for (std::size_t i = 0; i < N_values.size(); ++i) failures[i] = failure_at(N_values[i]);
    } else {
        std::vector<std::future<double>> futures;
        futures.reserve(N_values.size());
        for (const std::size_t n : N_values) {
            futures.push_back(std::async(std::launch::async, failure_at, n));
        }
        for (std::size_t i = 0; i < futures.size(); ++i) failures[i] = futures[i].get();
    }
    return fit_failure_scaling(N_values, failures);
}

// Analytic per-step approximation to ideal_survival: the product of squared
// predicted overlaps with B = Z - X held fixed along the path. Each factor
// is exact to O(eps^3), so the product tracks ideal_survival to O(1/N^2).
inline double survival_lower_bound(const PathSpec& path) {
    const double eps = path.epsilon();
    const HermitianMatrix b = path.Z() - path.X();
    double product = 1.0;
    for (std::size_t j = 0; j < path.steps(); ++j) {
        try {
            const FirstOrderCorrection corr = first_order(operator_at(path, j), b, 0);
            const double overlap = predicted_overlap(corr, eps);
            product *= overlap * overlap;
        } catch (const DegeneracyError& e) {
            std::ostringstream os;
            os << "survival_lower_bound: degenerate step " << j << ": " << e.what();
            throw DegeneracyError(os.str(), static_cast<long>(j), e.gap());
        }
    }
    return product;
}

}  // namespace adiasim

#endif  // ADIASIM_PROTOCOL_HPP
