#ifndef ADIASIM_SERIALIZE_HPP
#define ADIASIM_SERIALIZE_HPP

/* JSON encoding of the domain types. Complex numbers are [re, im] pairs;
   matrices are row-major arrays of rows of pairs. */

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "adiasim/errors.hpp"
#include "adiasim/hermitian.hpp"
#include "adiasim/path.hpp"
#include "adiasim/protocol.hpp"
#include "adiasim/spectra.hpp"

namespace adiasim {

using Json = nlohmann::json;

inline Json complex_to_json(const Complex& z) {
    // + 0.0 folds negative zeros away so emitted files stay tidy
    return Json::array({z.real() + 0.0, z.imag() + 0.0});
}

inline Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError("expected a [re, im] pair, got " + j.dump());
    }
    return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Json matrix_to_json(const HermitianMatrix& a) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(complex_to_json(a(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline HermitianMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("matrix payload must be an array of rows");
    const std::size_t dim = j.size();
    std::vector<Complex> entries;
    entries.reserve(dim * dim);
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != dim) {
            throw ConfigError("matrix payload is not square: expected " + std::to_string(dim) +
                              " entries per row");
        }
        for (const auto& e : row) entries.push_back(complex_from_json(e));
    }
    return HermitianMatrix(dim, std::move(entries));
}

inline Json state_to_json(const StateVector& v) {
    Json out = Json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) out.push_back(complex_to_json(v[i]));
    return out;
}

inline StateVector state_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("state payload must be an array of pairs");
    std::vector<Complex> amps;
    amps.reserve(j.size());
    for (const auto& e : j) amps.push_back(complex_from_json(e));
    return StateVector(std::move(amps));
}

inline Json eigensystem_to_json(const EigenSystem& es) {
    Json vectors = Json::array();
    for (const auto& v : es.eigenvectors) vectors.push_back(state_to_json(v));
    return Json{{"eigenvalues", es.eigenvalues}, {"eigenvectors", std::move(vectors)}};
}

inline Json gap_report_to_json(const GapReport& r) {
    return Json{{"gap", r.gap}, {"degenerate", r.degenerate}, {"tolerance", r.tolerance_used}};
}

inline Json protocol_result_to_json(const ProtocolResult& r) {
    return Json{{"N", r.N},
                {"ideal_survival", r.ideal_survival},
                {"exact_final_distribution", r.exact_final_distribution},
                {"exact_ground_probability", r.exact_ground_probability},
                {"per_step_overlaps", r.per_step_overlaps},
                {"min_gap_encountered", r.min_gap_encountered}};
}

inline Json monte_carlo_to_json(const MonteCarloResult& r) {
    return Json{{"trials", r.trials},
                {"ground_hits", r.ground_hits},
                {"estimate", r.estimate},
                {"std_error", r.std_error},
                {"seed", r.seed}};
}

inline Json scaling_fit_to_json(const ScalingFit& f) {
    return Json{{"N_values", f.N_values},
                {"failures", f.failures},
                {"slope", f.slope},
                {"intercept_ln", f.intercept},
                {"r_squared", f.r_squared}};
}

inline Json rng_metadata() {
    return Json{{"generator", rng::kGeneratorName},
                {"stream_derivation", rng::kStreamDerivation},
                {"gaussian", rng::kGaussianMethod}};
}

}  // namespace adiasim

#endif  // ADIASIM_SERIALIZE_HPP
