#ifndef ADIASIM_EXPERIMENT_HPP
#define ADIASIM_EXPERIMENT_HPP

/* Batch experiment runner behind the CLI: JSON config in, JSON (and, for
   tabular kinds, CSV) artifacts out, one-line summary back to the caller.

   Config schema (matrices are row-major arrays of [re, im] pairs):
     kind              gap-profile | run-exact | monte-carlo | scaling |
                       perturb-check | metric
     X, Z              Hermitian matrices, equal dimension
     N                 steps (gap-profile, run-exact, monte-carlo,
                       perturb-check; the latter uses eps = 1/N)
     N_values          sweep steps (scaling)
     trials            Monte Carlo trials       [default 10000]
     seed              Monte Carlo master seed  (required for monte-carlo)
     bridge_amplitude  path noise scale         [default 0]
     bridge_seed       path noise seed          [default 0]
     tolerance         degeneracy tolerance     [default 1e-8]
     out               output path prefix       [default "result"]

   A degenerate path is an analysis outcome for gap-profile (exit 0, the
   profile reports it) but an execution error for run-exact, monte-carlo
   and scaling. */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "adiasim/errors.hpp"
#include "adiasim/hermitian.hpp"
#include "adiasim/path.hpp"
#include "adiasim/perturbation.hpp"
#include "adiasim/protocol.hpp"
#include "adiasim/serialize.hpp"
#include "adiasim/spectra.hpp"

namespace adiasim {

enum class ExperimentKind {
    kGapProfile,
    kRunExact,
    kMonteCarlo,
    kScaling,
    kPerturbCheck,
    kMetric,
};

inline std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::kGapProfile: return "gap-profile";
        case ExperimentKind::kRunExact: return "run-exact";
        case ExperimentKind::kMonteCarlo: return "monte-carlo";
        case ExperimentKind::kScaling: return "scaling";
        case ExperimentKind::kPerturbCheck: return "perturb-check";
        case ExperimentKind::kMetric: return "metric";
    }
    throw Error("unknown experiment kind");
}

inline ExperimentKind kind_from_string(const std::string& s) {
    if (s == "gap-profile") return ExperimentKind::kGapProfile;
    if (s == "run-exact") return ExperimentKind::kRunExact;
    if (s == "monte-carlo") return ExperimentKind::kMonteCarlo;
    if (s == "scaling") return ExperimentKind::kScaling;
    if (s == "perturb-check") return ExperimentKind::kPerturbCheck;
    if (s == "metric") return ExperimentKind::kMetric;
    throw ConfigError("unknown kind \"" + s +
                      "\" (expected gap-profile | run-exact | monte-carlo | scaling | "
                      "perturb-check | metric)");
}

struct ExperimentConfig {
    ExperimentConfig(ExperimentKind kind_, HermitianMatrix x, HermitianMatrix z)
        : kind(kind_), X(std::move(x)), Z(std::move(z)) {}

    ExperimentKind kind;
    HermitianMatrix X;
    HermitianMatrix Z;
    std::size_t N = 0;
    std::vector<std::size_t> N_values;
    std::size_t trials = 10000;
    std::uint64_t seed = 0;
    double bridge_amplitude = 0.0;
    std::uint64_t bridge_seed = 0;
    double tolerance = 1e-8;
    std::string out_prefix = "result";

    bool operator==(const ExperimentConfig& other) const {
        return kind == other.kind && X == other.X && Z == other.Z && N == other.N &&
               N_values == other.N_values && trials == other.trials && seed == other.seed &&
               bridge_amplitude == other.bridge_amplitude && bridge_seed == other.bridge_seed &&
               tolerance == other.tolerance && out_prefix == other.out_prefix;
    }
};

namespace detail {

inline const Json& require_field(const Json& j, const char* name, ExperimentKind kind) {
    if (!j.contains(name)) {
        throw ConfigError(std::string("missing field \"") + name + "\" required for kind \"" +
                          to_string(kind) + "\"");
    }
    return j.at(name);
}

template <typename T>
inline T field_as(const Json& j, const char* name) {
    try {
        return j.get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("field \"") + name + "\": " + e.what());
    }
}

inline HermitianMatrix matrix_field(const Json& j, const char* name) {
    if (!j.contains(name)) {
        throw ConfigError(std::string("missing field \"") + name + "\"");
    }
    try {
        return matrix_from_json(j.at(name));
    } catch (const Error& e) {
        throw ConfigError(std::string("field \"") + name + "\": " + e.what());
    }
}

// Shortest round-trip decimal representation, stable across runs.
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    static const char* known_keys[] = {"kind", "X", "Z", "N", "N_values", "trials", "seed",
                                       "bridge_amplitude", "bridge_seed", "tolerance", "out"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const char* k : known_keys) known = known || key == k;
        if (!known) throw ConfigError("unknown field \"" + key + "\"");
    }

    if (!j.contains("kind")) throw ConfigError("missing field \"kind\"");
    const ExperimentKind kind = kind_from_string(detail::field_as<std::string>(j.at("kind"), "kind"));

    HermitianMatrix x = detail::matrix_field(j, "X");
    HermitianMatrix z = detail::matrix_field(j, "Z");
    if (x.dim() != z.dim()) {
        std::ostringstream os;
        os << "dimension mismatch: X is " << x.dim() << "x" << x.dim() << " but Z is " << z.dim()
           << "x" << z.dim();
        throw ConfigError(os.str());
    }

    ExperimentConfig cfg{kind, std::move(x), std::move(z)};

    const bool needs_n = kind == ExperimentKind::kGapProfile || kind == ExperimentKind::kRunExact ||
                         kind == ExperimentKind::kMonteCarlo || kind == ExperimentKind::kPerturbCheck;
    if (needs_n) {
        cfg.N = detail::field_as<std::size_t>(detail::require_field(j, "N", kind), "N");
        if (cfg.N < 1) throw ConfigError("field \"N\": must be >= 1");
    } else if (j.contains("N")) {
        cfg.N = detail::field_as<std::size_t>(j.at("N"), "N");
    }

    if (kind == ExperimentKind::kScaling) {
        cfg.N_values = detail::field_as<std::vector<std::size_t>>(
            detail::require_field(j, "N_values", kind), "N_values");
        if (cfg.N_values.empty()) throw ConfigError("field \"N_values\": must be non-empty");
        for (const std::size_t n : cfg.N_values) {
            if (n < 1) throw ConfigError("field \"N_values\": every N must be >= 1");
        }
    } else if (j.contains("N_values")) {
        cfg.N_values = detail::field_as<std::vector<std::size_t>>(j.at("N_values"), "N_values");
    }

    if (kind == ExperimentKind::kMonteCarlo) {
        cfg.seed = detail::field_as<std::uint64_t>(detail::require_field(j, "seed", kind), "seed");
    } else if (j.contains("seed")) {
        cfg.seed = detail::field_as<std::uint64_t>(j.at("seed"), "seed");
    }

    if (j.contains("trials")) {
        cfg.trials = detail::field_as<std::size_t>(j.at("trials"), "trials");
        if (cfg.trials < 1) throw ConfigError("field \"trials\": must be >= 1");
    }
    if (j.contains("bridge_amplitude")) {
        cfg.bridge_amplitude = detail::field_as<double>(j.at("bridge_amplitude"), "bridge_amplitude");
        if (cfg.bridge_amplitude < 0.0) throw ConfigError("field \"bridge_amplitude\": must be >= 0");
    }
    if (j.contains("bridge_seed")) {
        cfg.bridge_seed = detail::field_as<std::uint64_t>(j.at("bridge_seed"), "bridge_seed");
    }
    if (j.contains("tolerance")) {
        cfg.tolerance = detail::field_as<double>(j.at("tolerance"), "tolerance");
        if (!(cfg.tolerance > 0.0)) throw ConfigError("field \"tolerance\": must be > 0");
    }
    if (j.contains("out")) {
        cfg.out_prefix = detail::field_as<std::string>(j.at("out"), "out");
        if (cfg.out_prefix.empty()) throw ConfigError("field \"out\": must be non-empty");
    }
    return cfg;
}

inline Json config_to_json(const ExperimentConfig& cfg) {
    return Json{{"kind", to_string(cfg.kind)},
                {"X", matrix_to_json(cfg.X)},
                {"Z", matrix_to_json(cfg.Z)},
                {"N", cfg.N},
                {"N_values", cfg.N_values},
                {"trials", cfg.trials},
                {"seed", cfg.seed},
                {"bridge_amplitude", cfg.bridge_amplitude},
                {"bridge_seed", cfg.bridge_seed},
                {"tolerance", cfg.tolerance},
                {"out", cfg.out_prefix}};
}

struct RunOutcome {
    std::string summary;
    std::vector<std::string> files_written;
};

namespace detail {

inline void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot open \"" + path + "\" for writing");
    out << content;
    if (!out) throw Error("failed writing \"" + path + "\"");
}

inline std::string one_line(double value) {
    return format_double(value);
}

}  // namespace detail

// Executes the configured experiment and writes <prefix>.json plus, for the
// tabular kinds (scaling, gap-profile), <prefix>.csv. All computation
// happens before any file is written.
inline RunOutcome run_experiment(const ExperimentConfig& cfg, int threads = 1) {
    Json result;
    result["config"] = config_to_json(cfg);
    result["rng"] = rng_metadata();
    std::string csv;
    std::ostringstream summary;

    switch (cfg.kind) {
        case ExperimentKind::kGapProfile: {
            const PathSpec path(cfg.X, cfg.Z, cfg.N, cfg.bridge_amplitude, cfg.bridge_seed);
            const GapProfile profile = gap_profile(path, cfg.tolerance);
            bool any_degenerate = false;
            Json reports = Json::array();
            std::ostringstream rows;
            rows << "j,s,gap,degenerate\n";
            for (std::size_t jstep = 0; jstep < profile.reports.size(); ++jstep) {
                const GapReport& r = profile.reports[jstep];
                any_degenerate = any_degenerate || r.degenerate;
                const double s = static_cast<double>(jstep) / static_cast<double>(cfg.N);
                Json entry = gap_report_to_json(r);
                entry["j"] = jstep;
                entry["s"] = s;
                reports.push_back(std::move(entry));
                rows << jstep << ',' << detail::format_double(s) << ','
                     << detail::format_double(r.gap) << ',' << (r.degenerate ? 1 : 0) << '\n';
            }
            result["reports"] = std::move(reports);
            result["min_gap"] = profile.min_gap;
            result["argmin_step"] = profile.argmin_step;
            result["degenerate_anywhere"] = any_degenerate;
            csv = rows.str();
            summary << "gap-profile: min gap " << detail::one_line(profile.min_gap) << " at step "
                    << profile.argmin_step << "/" << cfg.N
                    << (any_degenerate ? " (degenerate steps present)" : " (no degenerate steps)");
            break;
        }
        case ExperimentKind::kRunExact: {
            const PathSpec path(cfg.X, cfg.Z, cfg.N, cfg.bridge_amplitude, cfg.bridge_seed);
            const ProtocolResult r = run_exact(path, cfg.tolerance);
            result["result"] = protocol_result_to_json(r);
            summary << "run-exact: N=" << r.N << " exact ground probability "
                    << detail::one_line(r.exact_ground_probability) << ", ideal survival "
                    << detail::one_line(r.ideal_survival) << ", min gap "
                    << detail::one_line(r.min_gap_encountered);
            break;
        }
        case ExperimentKind::kMonteCarlo: {
            const PathSpec path(cfg.X, cfg.Z, cfg.N, cfg.bridge_amplitude, cfg.bridge_seed);
            const MonteCarloResult mc =
                run_monte_carlo(path, cfg.trials, cfg.seed, cfg.tolerance, threads);
            const ProtocolResult exact = run_exact(path, cfg.tolerance);
            Json mcj = monte_carlo_to_json(mc);
            mcj["exact_ground_probability"] = exact.exact_ground_probability;
            result["result"] = std::move(mcj);
            summary << "monte-carlo: estimate " << detail::one_line(mc.estimate) << " +/- "
                    << detail::one_line(mc.std_error) << " (exact "
                    << detail::one_line(exact.exact_ground_probability) << ", trials " << mc.trials
                    << ")";
            break;
        }
        case ExperimentKind::kScaling: {
            const std::size_t count = cfg.N_values.size();
            std::vector<ProtocolResult> runs;
            runs.reserve(count);
            const auto run_at = [&](std::size_t i) {
                return run_exact(PathSpec(cfg.X, cfg.Z, cfg.N_values[i]), cfg.tolerance);
            };
            if (threads <= 1 || count < 2) {
                for (std::size_t i = 0; i < count; ++i) runs.push_back(run_at(i));
            } else {
                std::vector<std::future<ProtocolResult>> futures;
                futures.reserve(count);
                for (std::size_t i = 0; i < count; ++i) {
                    futures.push_back(std::async(std::launch::async, run_at, i));
                }
                for (auto& f : futures) runs.push_back(f.get());
            }
            std::vector<double> ideal(count);
            std::vector<double> exact(count);
            std::vector<double> failures(count);
            std::vector<double> min_gaps(count);
            for (std::size_t i = 0; i < count; ++i) {
                ideal[i] = runs[i].ideal_survival;
                exact[i] = runs[i].exact_ground_probability;
                failures[i] = 1.0 - runs[i].exact_ground_probability;
                min_gaps[i] = runs[i].min_gap_encountered;
            }
            const ScalingFit fit = fit_failure_scaling(cfg.N_values, failures);
            Json per_n = Json::array();
            std::ostringstream rows;
            rows << "N,ideal_survival,exact_ground_probability,failure,min_gap\n";
            for (std::size_t i = 0; i < cfg.N_values.size(); ++i) {
                per_n.push_back(Json{{"N", cfg.N_values[i]},
                                     {"ideal_survival", ideal[i]},
                                     {"exact_ground_probability", exact[i]},
                                     {"failure", failures[i]},
                                     {"min_gap", min_gaps[i]}});
                rows << cfg.N_values[i] << ',' << detail::format_double(ideal[i]) << ','
                     << detail::format_double(exact[i]) << ',' << detail::format_double(failures[i])
                     << ',' << detail::format_double(min_gaps[i]) << '\n';
            }
            result["fit"] = scaling_fit_to_json(fit);
            result["per_N"] = std::move(per_n);
            csv = rows.str();
            summary << "scaling: fitted slope " << detail::one_line(fit.slope) << " (r^2 "
                    << detail::one_line(fit.r_squared) << ") over " << cfg.N_values.size()
                    << " N values";
            break;
        }
        case ExperimentKind::kPerturbCheck: {
            const double eps = 1.0 / static_cast<double>(cfg.N);
            const HermitianMatrix b = cfg.Z - cfg.X;
            const auto [err_full, err_half] = overlap_order_check(cfg.X, b, eps);
            result["result"] = Json{{"epsilon", eps},
                                    {"err_eps", err_full},
                                    {"err_half_eps", err_half}};
            if (err_half > 0.0) result["result"]["ratio"] = err_full / err_half;
            summary << "perturb-check: eps=" << detail::one_line(eps) << " err(eps) "
                    << detail::one_line(err_full) << ", err(eps/2) " << detail::one_line(err_half);
            if (err_half > 0.0) summary << ", ratio " << detail::one_line(err_full / err_half);
            break;
        }
        case ExperimentKind::kMetric: {
            const bool two_by_two = cfg.X.dim() == 2;
            const auto distance =
                two_by_two ? footnote_distance(cfg.X, cfg.Z) : gap_distance(cfg.X, cfg.Z);
            result["result"] =
                Json{{"metric", two_by_two ? "footnote-inverse-gap" : "ground-gap-inverse"},
                     {"divergent", !distance.has_value()}};
            if (distance) {
                result["result"]["value"] = *distance;
                summary << "metric: distance " << detail::one_line(*distance);
            } else {
                summary << "metric: divergent (degenerate spectrum on at least one side)";
            }
            break;
        }
    }

    RunOutcome outcome;
    const std::string json_path = cfg.out_prefix + ".json";
    detail::write_text_file(json_path, result.dump(2) + "\n");
    outcome.files_written.push_back(json_path);
    if (!csv.empty()) {
        const std::string csv_path = cfg.out_prefix + ".csv";
        detail::write_text_file(csv_path, csv);
        outcome.files_written.push_back(csv_path);
    }
    outcome.summary = summary.str();
    return outcome;
}

}  // namespace adiasim

#endif  // ADIASIM_EXPERIMENT_HPP
