#include "lambda_memory/materials.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "lambda_memory/analysis.hpp"
#include "lambda_memory/errors.hpp"
#include "lambda_memory/io.hpp"

namespace lambda_memory::materials {

namespace {

void require_positive(double v, const std::string& what)
{
    if (!std::isfinite(v) || v <= 0.0) {
        throw ArgumentError(what + " must be finite and > 0");
    }
}

} // namespace

double coupling_constant(double dipole, double omega, double volume)
{
    require_positive(dipole, "dipole");
    require_positive(omega, "omega");
    require_positive(volume, "volume");
    return dipole * std::sqrt(omega / (2.0 * kHbar * kEpsilon0 * volume));
}

double dipole_for_coupling(double g, double omega, double volume)
{
    require_positive(g, "coupling");
    return g / coupling_constant(1.0, omega, volume);
}

double wavelength(double omega)
{
    require_positive(omega, "omega");
    return 2.0 * std::numbers::pi * kSpeedOfLight / omega;
}

double cavity_volume(double omega, double n)
{
    require_positive(n, "volume multiplier n");
    const double lambda = wavelength(omega);
    return n * lambda * lambda * lambda;
}

double quality_factor(double omega, double kappa)
{
    require_positive(omega, "omega");
    require_positive(kappa, "kappa");
    return omega / (2.0 * kappa);
}

double kappa_from_quality(double omega, double Q)
{
    require_positive(omega, "omega");
    require_positive(Q, "quality factor");
    return omega / (2.0 * Q);
}

void validate(const DefectRecord& d)
{
    if (d.name.empty()) {
        throw ArgumentError("defect record needs a name");
    }
    require_positive(d.omega_ge, d.name + ": omega_ge");
    require_positive(d.omega_se, d.name + ": omega_se");
    require_positive(d.dipole_ge, d.name + ": dipole_ge");
    if (d.dipole_se) {
        require_positive(*d.dipole_se, d.name + ": dipole_se");
    }
}

void validate(const CavitySpec& c)
{
    require_positive(c.n, "cavity volume multiplier n");
    if (c.Q.has_value() == c.kappa_rel.has_value()) {
        throw ArgumentError("cavity spec needs exactly one of Q or kappa_rel");
    }
    if (c.Q) {
        require_positive(*c.Q, "quality factor");
    } else {
        require_positive(*c.kappa_rel, "kappa_rel");
    }
}

MemoryDesignReport design_report(const DefectRecord& defect, const CavitySpec& cavity, double omega0_rel,
                                 double T_rel, double sigma)
{
    validate(defect);
    validate(cavity);
    require_positive(omega0_rel, "omega0_rel");
    require_positive(T_rel, "T_rel");
    require_positive(sigma, "sigma");

    MemoryDesignReport r{};
    r.name = defect.name;
    r.wavelength = wavelength(defect.omega_ge);
    r.volume = cavity_volume(defect.omega_ge, cavity.n);
    r.g_phys = coupling_constant(defect.dipole_ge, defect.omega_ge, r.volume);
    r.omega0_phys = omega0_rel * r.g_phys;
    r.T_phys = T_rel / r.g_phys;
    r.bandwidth = bandwidth_physical(sigma, r.g_phys, defect.omega_ge, BandwidthMode::full);
    r.bandwidth_simplified = bandwidth_physical(sigma, r.g_phys, defect.omega_ge, BandwidthMode::simplified);
    if (cavity.Q) {
        r.Q_required = *cavity.Q;
        r.kappa_phys = kappa_from_quality(defect.omega_ge, *cavity.Q);
    } else {
        r.kappa_phys = *cavity.kappa_rel * r.g_phys;
        r.Q_required = quality_factor(defect.omega_ge, r.kappa_phys);
    }
    return r;
}

std::vector<DefectRecord> parse_defects(const nlohmann::json& doc)
{
    if (!doc.is_array()) {
        throw ConfigError("defects document must be a JSON array");
    }
    static const std::set<std::string> known{"name",         "omega_ge_rad_s", "omega_se_rad_s",
                                             "dipole_ge_Cm", "dipole_se_Cm",   "source"};
    std::vector<DefectRecord> out;
    for (const auto& item : doc) {
        if (!item.is_object()) {
            throw ConfigError("each defect must be a JSON object");
        }
        for (const auto& [key, _] : item.items()) {
            if (!known.contains(key)) {
                throw ConfigError("unknown defect field '" + key + "'");
            }
        }
        try {
            DefectRecord d{item.at("name").get<std::string>(),
                           item.at("omega_ge_rad_s").get<double>(),
                           item.at("omega_se_rad_s").get<double>(),
                           item.at("dipole_ge_Cm").get<double>(),
                           std::nullopt,
                           item.value("source", std::string{})};
            if (item.contains("dipole_se_Cm") && !item.at("dipole_se_Cm").is_null()) {
                d.dipole_se = item.at("dipole_se_Cm").get<double>();
            }
            validate(d);
            out.push_back(std::move(d));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("malformed defect record: ") + e.what());
        } catch (const ArgumentError& e) {
            throw ConfigError(e.what());
        }
    }
    return out;
}

std::vector<DefectRecord> load_defects(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open defects file '" + path + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("defects file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_defects(doc);
}

nlohmann::json to_json(const MemoryDesignReport& r)
{
    auto r9 = [](double v) { return io::round_significant(v, 9); };
    return nlohmann::json{{"name", r.name},
                          {"g_phys_rad_s", r9(r.g_phys)},
                          {"volume_m3", r9(r.volume)},
                          {"lambda_m", r9(r.wavelength)},
                          {"omega0_phys_rad_s", r9(r.omega0_phys)},
                          {"T_phys_s", r9(r.T_phys)},
                          {"bandwidth_rad_s", r9(r.bandwidth)},
                          {"bandwidth_simplified_rad_s", r9(r.bandwidth_simplified)},
                          {"kappa_phys_rad_s", r9(r.kappa_phys)},
                          {"Q_required", r9(r.Q_required)}};
}

} // namespace lambda_memory::materials
