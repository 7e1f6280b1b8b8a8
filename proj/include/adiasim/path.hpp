#ifndef ADIASIM_PATH_HPP
#define ADIASIM_PATH_HPP

/* Discretised operator trajectories from X to Z: linear interpolation over
   N steps (epsilon = 1/N), an optional Brownian-bridge perturbation pinned
   to zero at both endpoints, per-step gap profiles, and inverse-gap
   distance metrics between operators. */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "adiasim/errors.hpp"
#include "adiasim/hermitian.hpp"
#include "adiasim/rng.hpp"
#include "adiasim/spectra.hpp"

namespace adiasim {

// Gaps below this make the inverse-gap metrics divergent.
inline constexpr double kDivergenceThreshold = 1e-12;

// Trajectory A_j = (1 - j/N) X + (j/N) Z (+ bridge term), j in {0,...,N}.
// The bridge realization is fixed by (bridge_seed, dims, N) at construction
// and shared by copies, so a PathSpec is an immutable value.
class PathSpec {
public:
    PathSpec(HermitianMatrix X, HermitianMatrix Z, std::size_t N,
             double bridge_amplitude = 0.0, std::uint64_t bridge_seed = 0)
        : x_(std::move(X)),
          z_(std::move(Z)),
          steps_(N),
          bridge_amplitude_(bridge_amplitude),
          bridge_seed_(bridge_seed) {
        if (x_.dim() != z_.dim()) {
            std::ostringstream os;
            os << "PathSpec: X is " << x_.dim() << "x" << x_.dim() << " but Z is " << z_.dim()
               << "x" << z_.dim();
            throw DimensionError(os.str());
        }
        if (steps_ < 1) throw Error("PathSpec: N must be >= 1");
        if (bridge_amplitude_ < 0.0) throw Error("PathSpec: bridge amplitude must be >= 0");
        if (bridge_amplitude_ > 0.0) bridge_ = build_bridge();
    }

    const HermitianMatrix& X() const noexcept { return x_; }
    const HermitianMatrix& Z() const noexcept { return z_; }
    std::size_t steps() const noexcept { return steps_; }
    double epsilon() const noexcept { return 1.0 / static_cast<double>(steps_); }
    double bridge_amplitude() const noexcept { return bridge_amplitude_; }
    std::uint64_t bridge_seed() const noexcept { return bridge_seed_; }

    const std::vector<HermitianMatrix>* bridge_table() const noexcept { return bridge_.get(); }

private:
    // One independent Gaussian bridge per real degree of freedom of an M x M
    // Hermitian matrix: M diagonal reals plus (re, im) for each i < j. Walk
    // increments have variance epsilon; B_j = W_j - (j/N) W_N.
    std::shared_ptr<const std::vector<HermitianMatrix>> build_bridge() const {
        const std::size_t m = x_.dim();
        const std::size_t n_steps = steps_;
        const std::size_t dof_count = m * m;
        const double step_sd = std::sqrt(1.0 / static_cast<double>(n_steps));

        std::vector<std::vector<double>> dof(n_steps + 1, std::vector<double>(dof_count, 0.0));
        for (std::size_t d = 0; d < dof_count; ++d) {
            rng::Gaussian gauss(rng::derive_stream(bridge_seed_, d));
            std::vector<double> walk(n_steps + 1, 0.0);
            for (std::size_t j = 1; j <= n_steps; ++j) walk[j] = walk[j - 1] + step_sd * gauss();
            const double end = walk[n_steps];
            for (std::size_t j = 0; j <= n_steps; ++j) {
                const double frac = static_cast<double>(j) / static_cast<double>(n_steps);
                dof[j][d] = bridge_amplitude_ * (walk[j] - frac * end);
            }
        }

        auto table = std::make_shared<std::vector<HermitianMatrix>>();
        table->reserve(n_steps + 1);
        for (std::size_t j = 0; j <= n_steps; ++j) {
            std::vector<Complex> entries(m * m, Complex(0.0, 0.0));
            std::size_t d = 0;
            for (std::size_t i = 0; i < m; ++i) {
                entries[i * m + i] = Complex(dof[j][d++], 0.0);
                for (std::size_t k = i + 1; k < m; ++k) {
                    const double re = dof[j][d++];
                    const double im = dof[j][d++];
                    entries[i * m + k] = Complex(re, im);
                    entries[k * m + i] = Complex(re, -im);
                }
            }
            table->emplace_back(m, std::move(entries));
        }
        return table;
    }

    HermitianMatrix x_;
    HermitianMatrix z_;
    std::size_t steps_;
    double bridge_amplitude_;
    std::uint64_t bridge_seed_;
    std::shared_ptr<const std::vector<HermitianMatrix>> bridge_;
};

struct GapProfile {
    std::vector<GapReport> reports;  // index j = 0..N
    double min_gap;
    std::size_t argmin_step;         // first step attaining min_gap
};

namespace detail {

inline void check_step(const PathSpec& path, std::size_t j, const char* where) {
    if (j > path.steps()) {
        std::ostringstream os;
        os << where << ": step " << j << " out of range [0, " << path.steps() << "]";
        throw Error(os.str());
    }
}

}  // namespace detail

// Bridge perturbation at step j; exactly zero at j = 0 and j = N.
inline HermitianMatrix brownian_bridge_term(const PathSpec& path, std::size_t j) {
    detail::check_step(path, j, "brownian_bridge_term");
    if (const auto* table = path.bridge_table()) return (*table)[j];
    const std::size_t m = path.X().dim();
    return HermitianMatrix(m, std::vector<Complex>(m * m, Complex(0.0, 0.0)));
}

// (1 - j/N) X + (j/N) Z plus the bridge term. Endpoints are returned
// bit-exactly (the bridge is pinned to zero there).
inline HermitianMatrix operator_at(const PathSpec& path, std::size_t j) {
    detail::check_step(path, j, "operator_at");
    if (j == 0) return path.X();
    if (j == path.steps()) return path.Z();

    const double s = static_cast<double>(j) / static_cast<double>(path.steps());
    const std::size_t m = path.X().dim();
    std::vector<Complex> entries(m * m);
    const auto& x = path.X().entries();
    const auto& z = path.Z().entries();
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i] = x[i] + s * (z[i] - x[i]);
    HermitianMatrix base(m, std::move(entries));
    if (const auto* table = path.bridge_table()) return base + (*table)[j];
    return base;
}

inline GapProfile gap_profile(const PathSpec& path, double tolerance) {
    GapProfile profile;
    profile.reports.reserve(path.steps() + 1);
    profile.min_gap = 0.0;
    profile.argmin_step = 0;
    for (std::size_t j = 0; j <= path.steps(); ++j) {
        profile.reports.push_back(gap_report(operator_at(path, j), tolerance));
        if (j == 0 || profile.reports.back().gap < profile.min_gap) {
            profile.min_gap = profile.reports.back().gap;
            profile.argmin_step = j;
        }
    }
    return profile;
}

// Inverse-gap distance between two 2x2 operators from their eigenvalue
// pairs: | 1/|a1-a2| - 1/|w1-w2| |. Empty result means divergent (a
// degenerate spectrum on either side).
inline std::optional<double> footnote_distance(const HermitianMatrix& X,
                                               const HermitianMatrix& Z) {
    if (X.dim() != 2 || Z.dim() != 2) {
        throw DimensionError("footnote_distance: defined for 2x2 operators only");
    }
    const EigenSystem ex = eigendecompose(X);
    const EigenSystem ez = eigendecompose(Z);
    const double gx = ex.eigenvalues[1] - ex.eigenvalues[0];
    const double gz = ez.eigenvalues[1] - ez.eigenvalues[0];
    if (gx < kDivergenceThreshold || gz < kDivergenceThreshold) return std::nullopt;
    return std::abs(1.0 / gx - 1.0 / gz);
}

// Ground-gap analogue of footnote_distance for any dimension:
// | 1/gap(X) - 1/gap(Z) | over the gaps between the two lowest levels.
// Coincides with footnote_distance at M = 2.
inline std::optional<double> gap_distance(const HermitianMatrix& X, const HermitianMatrix& Z) {
    if (X.dim() != Z.dim()) throw DimensionError("gap_distance: dimension mismatch");
    const EigenSystem ex = eigendecompose(X);
    const EigenSystem ez = eigendecompose(Z);
    const double gx = ex.eigenvalues[1] - ex.eigenvalues[0];
    const double gz = ez.eigenvalues[1] - ez.eigenvalues[0];
    if (gx < kDivergenceThreshold || gz < kDivergenceThreshold) return std::nullopt;
    return std::abs(1.0 / gx - 1.0 / gz);
}

}  // namespace adiasim

#endif  // ADIASIM_PATH_HPP
