#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace lambda_memory::materials {

inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kEpsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double kSpeedOfLight = 299792458.0;   // m/s

/// Defect emitter. Frequencies are angular [rad/s], dipoles in C m.
struct DefectRecord {
    std::string name;
    double omega_ge;
    double omega_se;
    double dipole_ge;
    std::optional<double> dipole_se; ///< control-transition dipole; not needed by any computation here
    std::string source;
};

/// Cavity volume V = n lambda^3 and exactly one of a quality factor or kappa / g.
struct CavitySpec {
    double n;
    std::optional<double> Q{};
    std::optional<double> kappa_rel{};
};

struct MemoryDesignReport {
    std::string name;
    double g_phys;      // rad/s
    double volume;      // m^3
    double wavelength;  // m
    double omega0_phys; // rad/s
    double T_phys;      // s
    double bandwidth;   // rad/s, full quadratic root
    double bandwidth_simplified; // rad/s, g sigma
    double kappa_phys;  // rad/s
    double Q_required;
};

/// g = d sqrt(omega / (2 hbar eps0 V)), polarisation overlap taken as 1.
double coupling_constant(double dipole, double omega, double volume);
/// Dipole that yields coupling g; inverse of coupling_constant.
double dipole_for_coupling(double g, double omega, double volume);

double wavelength(double omega);
/// V = n (2 pi c / omega)^3.
double cavity_volume(double omega, double n);

/// Q = omega / (2 kappa).
double quality_factor(double omega, double kappa);
/// kappa = omega / (2 Q).
double kappa_from_quality(double omega, double Q);

/// Throws ArgumentError on non-positive fields or an ill-formed cavity spec.
void validate(const DefectRecord& d);
void validate(const CavitySpec& c);

/// Physical pulse, bandwidth and cavity requirements for a defect in the given cavity.
MemoryDesignReport design_report(const DefectRecord& defect, const CavitySpec& cavity, double omega0_rel,
                                 double T_rel, double sigma);

/// Parses the defects.json array. Unknown fields are rejected.
std::vector<DefectRecord> parse_defects(const nlohmann::json& doc);
std::vector<DefectRecord> load_defects(const std::string& path);

nlohmann::json to_json(const MemoryDesignReport& r);

} // namespace lambda_memory::materials
