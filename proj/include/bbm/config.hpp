#pragma once

// Run configuration: JSON ingestion, validation and the objects a run needs
// (grid, initial data, model).

#include "bbm/field.hpp"
#include "bbm/operators.hpp"
#include "bbm/timestep.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bbm {

/// Invalid configuration; field() names the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct DomainSpec {
    bool torus = true;
    int n_points = 256;   // torus
    double length = 1.0;  // interval
    int cells = 256;      // interval
};

enum class InitialKind { Constant, SingleMode, SolitaryWave, RandomSmooth };

struct InitialCondition {
    InitialKind kind = InitialKind::SingleMode;
    double value = 0.0;      // constant
    double amplitude = 0.5;  // single_mode, random_smooth
    int wavenumber = 1;      // single_mode
    double speed = 2.0;      // solitary_wave, > 1
    double center = 0.0;     // solitary_wave
    std::uint64_t seed = 1;  // random_smooth
    int cutoff = 8;          // random_smooth
};

struct DampingSpec {
    DampingKind kind = DampingKind::None;
    double center = 3.141592653589793;
    double radius = 1.0;
    double amplitude = 0.0;
    std::string table_path;
};

struct SimConfig {
    Variant variant = Variant::A;
    DomainSpec domain;
    InitialCondition initial;
    DampingSpec damping;
    FeedbackCoefficients feedback;
    bool allow_nondissipative = false;
    IntegratorConfig integrator;
    double horizon = 10.0;
    double tail_window = 1.0;
    double monotone_slack = 1e-9;
    bool nonlinear = true;
    bool dealias = true;
    std::string output_dir = "bbm_out";
};

SimConfig parse_config(const nlohmann::json& doc);
SimConfig load_config(const std::string& path);
nlohmann::json to_json(const SimConfig& config);

/// Checks cross-field constraints; throws ConfigError.
void validate(const SimConfig& config);

Grid make_grid(const SimConfig& config);
Field1D make_initial(const SimConfig& config, const Grid& grid);
Model make_model(const SimConfig& config, const Grid& grid);

/// Travelling wave 3(c-1) sech^2( (1/2) sqrt((c-1)/c) xi ), xi = x - c t.
double solitary_profile(double speed, double xi);

/// Solitary wave centred at `center`; on the torus the profile is summed over
/// periodic images.
Field1D solitary_wave(const Grid& grid, double speed, double center);

/// Random trigonometric field with modes 1..cutoff (coefficients ~ 1/n),
/// scaled to max |u| = amplitude. Deterministic in seed.
Field1D random_smooth(const Grid& grid, std::uint64_t seed, double amplitude, int cutoff);

}  // namespace bbm
