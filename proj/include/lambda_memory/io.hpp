#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "lambda_memory/analysis.hpp"
#include "lambda_memory/integrator.hpp"
#include "lambda_memory/model.hpp"

namespace lambda_memory::io {

/// %.12g, with "nan" / "inf" / "-inf" spelled out.
std::string format_number(double v, int digits = 12);

/// v rounded to `digits` significant digits, so JSON dumps it with at most that many.
double round_significant(double v, int digits);

std::string trajectory_csv(const Trajectory& traj);
std::string sweep_csv(const SweepResult& s);
std::string absorption_csv(const AbsorptionCurve& c);
nlohmann::json absorption_summary(const AbsorptionCurve& c);

struct DecayRow {
    double T;
    double kappa;
    double omega0;
    double final_population;
};
std::string decay_csv(const std::vector<DecayRow>& rows);

/// Writes bytes exactly as given. Throws ConfigError when the file cannot be written.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string sha256_hex(const std::string& bytes);

/// Strict model config:
///   { "Delta": x, "delta": x,
///     "pulse": { "shape": "sigmoid", "omega0": x, "T": x, "reversed": b }
///            | { "shape": "gaussian", "omega0": x, "center": x, "width": x | "sigma": x }
///            | { "shape": "constant", "omega": x },
///     "decay": { "gamma": { "gg": x, "ss": x, "ee": x, "ge": x, "se": x, "gs": x }, "kappa": x },
///     "include_vacuum": b }
/// Every key is optional; unknown keys throw ConfigError.
ModelParams parse_model_config(const nlohmann::json& doc, ModelParams base = {});
ModelParams load_model_config(const std::string& path, ModelParams base = {});

} // namespace lambda_memory::io
