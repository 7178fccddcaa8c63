#pragma once

// Run configuration, the recurrence/transience classifier combining the
// occupation (probabilistic) and spectral (harmonic) channels, the
// compact-set potential bound, presets and report generation.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levy/exponent.hpp"
#include "levy/io.hpp"
#include "levy/semigroup.hpp"
#include "levy/simulator.hpp"

namespace levy {

inline constexpr int kSchemaVersion = 1;

struct SimulationSettings {
  double horizon = 25.0;
  double step = 1e-3;
  std::size_t n_paths = 400;
  std::uint64_t seed = 1;
  std::vector<double> ball_radii{0.5, 1.0, 2.0};
  /// Negative means the group default (default_escape_margin).
  double escape_margin = -1.0;
};

struct SpectralSettings {
  double lambda_max = 40.0;
  int n_lambda = 2000;
  double t_max = 20.0;
  int n_radial = 4000;
  int k_order = kDefaultKOrder;
  double harmonic_cutoff = 10.0;
};

struct OutputSettings {
  std::string dir = "levy-out";
  std::vector<std::string> formats{"json", "csv", "txt"};
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string name = "run";
  ProcessParams params;
  SimulationSettings simulation;
  SpectralSettings spectral;
  DecisionThresholds decision;
  OutputSettings output;

  SimConfig sim_config() const;
  SpectralGrid spectral_grid() const;
  RadialGrid radial_grid() const;
};

/// Parses and validates a config document. Every problem (unknown key,
/// wrong type, invalid value) is collected and reported in one schema_error
/// naming the offending dotted keys.
RunConfig parse_run_config(const io::Json& doc);
RunConfig load_run_config(const std::filesystem::path& file);
io::Json to_json(const RunConfig& config);

/// Applies "dotted.key=value" to a config document. The value is read as
/// JSON when it parses, otherwise as a string.
void apply_override(io::Json& doc, std::string_view assignment);

std::vector<std::string> preset_names();
/// Config document of a named preset; throws schema_error for unknown names.
io::Json preset_document(std::string_view name);

struct HarmonicEvidence {
  EnergyReport report;
  double cutoff = 0.0;
  /// True when the integral was taken with Re(eta) = half the exponent of
  /// the symmetrized semigroup.
  bool via_symmetrization = false;
};

/// int_{[0, cutoff]} omega / Re(eta) for the run's params. Non-symmetric
/// params go through symmetrize(): Re(eta) = eta_sym / 2.
HarmonicEvidence harmonic_evidence(const ProcessParams& params, const SpectralGrid& grid, double cutoff);

struct Verdict {
  Classification classification = Classification::inconclusive;
  /// Probabilistic channel on its own (all radii agree, else inconclusive).
  Classification probabilistic = Classification::inconclusive;
  std::vector<BallDecision> decisions;
  OccupationStats occupation;
  /// Absent on the compact group.
  std::optional<HarmonicEvidence> harmonic;
  /// Set iff every available channel concurs (a single channel concurs
  /// with itself).
  bool agreement = false;
  bool degenerate = false;
  std::string note;
};

Verdict classify(const RunConfig& run);

/// Upper estimate sum_i V(B_{r_i}(p_i)) of the potential of a compact set
/// covered by `cover`, from occupation at the longest horizon. Throws
/// not_applicable for a recurrent verdict.
double compact_set_potential(const RunConfig& run, const Verdict& verdict, std::span<const Ball> cover);

/// Everything a report needs, computed before any file is written.
struct Report {
  Verdict verdict;
  std::optional<ExponentTable> table;
  /// File name -> content, in write order.
  std::vector<std::pair<std::string, std::string>> files;
};

Report build_report(const RunConfig& run);
/// Writes the report into `dir` (created if needed) and returns the paths.
std::vector<std::filesystem::path> write_report(const Report& report, const std::filesystem::path& dir);

/// Serializations shared by the CLI subcommands.
io::Json verdict_json(const RunConfig& run, const Verdict& verdict);
io::Json occupation_json(const OccupationStats& stats);
io::Json energy_json(const EnergyReport& report);
std::string exponent_csv(const ExponentTable& table);
std::string occupation_csv(const RunConfig& run, const OccupationStats& stats);
std::string harmonic_csv(const RunConfig& run, const ExponentTable& table);
std::string spectral_csv(const RunConfig& run, const SpectralGrid& grid, const SpectralVector& v);

}  // namespace levy
