#pragma once

// End-to-end integration run: read and validate every input, integrate,
// then write the requested outputs.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "normint/anisotropic.hpp"
#include "normint/linalg.hpp"
#include "normint/mumford_shah.hpp"
#include "normint/nonconvex.hpp"
#include "normint/raster.hpp"
#include "normint/tv.hpp"

namespace normint {

enum class Method { Quadratic, Tv, Nonconvex, Anisotropic, MumfordShah };
enum class InitKind { Quadratic, Zero, File };

Method parse_method(std::string_view name);
std::string_view to_string(Method m);
InitKind parse_init(std::string_view name);

struct RunConfig {
  Method method = Method::Quadratic;
  std::filesystem::path p_path, q_path;
  std::optional<std::filesystem::path> mask_path;    // all inside when absent
  std::optional<std::filesystem::path> z0_path;      // z⁰ ≡ 0 when absent
  std::optional<std::filesystem::path> lambda_path;  // λ ≡ lambda when absent
  double lambda = 1e-6;
  std::optional<std::filesystem::path> truth_path;
  bool mae = false;
  InitKind init = InitKind::Quadratic;
  std::optional<std::filesystem::path> init_path;

  std::optional<std::filesystem::path> out_depth;
  std::optional<std::filesystem::path> out_obj;
  std::optional<std::filesystem::path> out_metrics;   // JSON
  std::optional<std::filesystem::path> out_csv;       // key,value
  std::optional<std::filesystem::path> out_energy;    // iteration,energy
  std::optional<std::filesystem::path> out_edges;     // PGM, Mumford–Shah only

  SolverConfig solver;
  TvConfig tv;
  PhiFunction phi;
  IpianoConfig ipiano;
  DiffusionConfig diffusion;
  MsConfig ms;
  std::uint64_t seed = 0;

  /// Throws ConfigError for out-of-range parameters.
  void validate() const;
  /// Method hyper-parameters only.
  void validate_method() const;
};

struct RunInputs {
  Domain domain;
  GradientField g;
  PriorField prior;
  DepthMap init;  // empty: method default
  std::optional<Raster<double>> truth;
};

struct RunReport {
  Raster<double> depth;  // NaN outside the mask
  std::vector<double> energy;
  std::optional<std::vector<double>> edges;
  std::map<std::string, double> metrics;
};

/// Reads and validates all inputs; nothing is written.
RunInputs load_inputs(const RunConfig& cfg);

/// Integrates already-loaded inputs with the configured method.
RunReport integrate(const RunConfig& cfg, const RunInputs& in);

/// load_inputs + integrate + write outputs.
RunReport run_integration(const RunConfig& cfg);

/// Human-readable dump of the resolved parameters (for --dry-run).
std::string describe(const RunConfig& cfg);

void write_metrics_json(const std::filesystem::path& path, const RunConfig& cfg,
                        const std::map<std::string, double>& metrics);
void write_metrics_csv(const std::filesystem::path& path,
                       const std::map<std::string, double>& metrics);
void write_energy_csv(const std::filesystem::path& path, const std::vector<double>& energy);

}  // namespace normint
