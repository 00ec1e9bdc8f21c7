#include "lambda_memory/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <openssl/evp.h>

#include "lambda_memory/errors.hpp"

namespace lambda_memory::io {

using nlohmann::json;

std::string format_number(double v, int digits)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double round_significant(double v, int digits)
{
    if (!std::isfinite(v)) {
        return v;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
    return std::strtod(buf, nullptr);
}

std::string trajectory_csv(const Trajectory& traj)
{
    const auto cols = traj.populations.cols();
    std::string out = "t";
    for (int k = 0; k < cols; ++k) {
        out += ',' + basis_column(static_cast<BasisState>(k));
    }
    out += ",trace_err\n";
    for (std::size_t r = 0; r < traj.times.size(); ++r) {
        out += format_number(traj.times[r]);
        double tr = 0.0;
        for (int k = 0; k < cols; ++k) {
            const double p = traj.populations(static_cast<Eigen::Index>(r), k);
            tr += p;
            out += ',' + format_number(p);
        }
        out += ',' + format_number(std::abs(tr - 1.0)) + '\n';
    }
    return out;
}

std::string sweep_csv(const SweepResult& s)
{
    std::string out = s.axis1_name + ',' + s.axis2_name + ",efficiency\n";
    for (std::size_t i = 0; i < s.axis1.size(); ++i) {
        for (std::size_t j = 0; j < s.axis2.size(); ++j) {
            out += format_number(s.axis1[i]) + ',' + format_number(s.axis2[j]) + ',' +
                   format_number(s.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) + '\n';
        }
    }
    return out;
}

std::string absorption_csv(const AbsorptionCurve& c)
{
    std::string out = "delta,efficiency\n";
    for (std::size_t i = 0; i < c.detunings.size(); ++i) {
        out += format_number(c.detunings[i]) + ',' + format_number(c.efficiencies[i]) + '\n';
    }
    return out;
}

json absorption_summary(const AbsorptionCurve& c)
{
    return json{{"hwhm", round_significant(c.hwhm, 12)},
                {"peak", round_significant(c.peak, 12)},
                {"peak_detuning", round_significant(c.peak_detuning, 12)}};
}

std::string decay_csv(const std::vector<DecayRow>& rows)
{
    std::string out = "T,kappa,omega0,final_population\n";
    for (const auto& r : rows) {
        out += format_number(r.T) + ',' + format_number(r.kappa) + ',' + format_number(r.omega0) + ',' +
               format_number(r.final_population) + '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) {
        throw ConfigError("failed writing '" + path + "'");
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw NumericalError("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object()) {
        throw ConfigError(where + " must be a JSON object");
    }
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            ok = ok || key == a;
        }
        if (!ok) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

double number(const json& obj, const char* key, const std::string& where)
{
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(where + "." + key + " must be a number");
    }
    return v.get<double>();
}

PulseShape parse_pulse(const json& p)
{
    if (!p.contains("shape") || !p.at("shape").is_string()) {
        throw ConfigError("pulse.shape must be one of sigmoid, gaussian, constant");
    }
    const auto shape = p.at("shape").get<std::string>();
    if (shape == "sigmoid") {
        check_keys(p, {"shape", "omega0", "T", "reversed"}, "pulse");
        bool reversed = false;
        if (p.contains("reversed")) {
            if (!p.at("reversed").is_boolean()) {
                throw ConfigError("pulse.reversed must be a boolean");
            }
            reversed = p.at("reversed").get<bool>();
        }
        return PulseShape::sigmoid(number(p, "omega0", "pulse"), number(p, "T", "pulse"), reversed);
    }
    if (shape == "gaussian") {
        check_keys(p, {"shape", "omega0", "center", "width", "sigma"}, "pulse");
        const double center = p.contains("center") ? number(p, "center", "pulse") : 0.0;
        if (p.contains("width") == p.contains("sigma")) {
            throw ConfigError("gaussian pulse needs exactly one of width or sigma");
        }
        if (p.contains("sigma")) {
            return PulseShape::gaussian_std(number(p, "omega0", "pulse"), center, number(p, "sigma", "pulse"));
        }
        return PulseShape::gaussian(number(p, "omega0", "pulse"), center, number(p, "width", "pulse"));
    }
    if (shape == "constant") {
        check_keys(p, {"shape", "omega"}, "pulse");
        return PulseShape::constant(number(p, "omega", "pulse"));
    }
    throw ConfigError("unknown pulse shape '" + shape + "'");
}

} // namespace

ModelParams parse_model_config(const json& doc, ModelParams base)
{
    try {
        check_keys(doc, {"Delta", "delta", "pulse", "decay", "include_vacuum"}, "model config");
        if (doc.contains("Delta")) {
            base.Delta = number(doc, "Delta", "config");
        }
        if (doc.contains("delta")) {
            base.delta = number(doc, "delta", "config");
        }
        if (doc.contains("pulse")) {
            if (!doc.at("pulse").is_object()) {
                throw ConfigError("pulse must be a JSON object");
            }
            base.pulse = parse_pulse(doc.at("pulse"));
        }
        if (doc.contains("decay")) {
            const auto& d = doc.at("decay");
            check_keys(d, {"gamma", "kappa"}, "decay");
            if (d.contains("gamma")) {
                const auto& g = d.at("gamma");
                check_keys(g, {"gg", "ss", "ee", "ge", "se", "gs"}, "decay.gamma");
                for (const auto& [key, _] : g.items()) {
                    base.decay.set(parse_level(key[0]), parse_level(key[1]), number(g, key.c_str(), "decay.gamma"));
                }
            }
            if (d.contains("kappa")) {
                base.decay.set_kappa(number(d, "kappa", "decay"));
            }
        }
        if (doc.contains("include_vacuum")) {
            if (!doc.at("include_vacuum").is_boolean()) {
                throw ConfigError("include_vacuum must be a boolean");
            }
            base.include_vacuum = doc.at("include_vacuum").get<bool>();
        }
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed model config: ") + e.what());
    }
    return base;
}

ModelParams load_model_config(const std::string& path, ModelParams base)
{
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_model_config(doc, base);
}

} // namespace lambda_memory::io
