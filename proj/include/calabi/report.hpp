#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "calabi/futaki.hpp"
#include "calabi/invariants.hpp"
#include "calabi/profile.hpp"
#include "calabi/shooting.hpp"

namespace calabi {

using json = nlohmann::json;

// Parsed command line / config file. Flags override config-file values which
// override the defaults below.
struct RunConfig {
  std::string command;
  std::vector<double> m_list;
  std::vector<double> beta0_list;
  double tol = 1e-10;
  std::size_t grid_n = 4097;
  std::string output_path;
  std::string format;         // json | csv; sweep defaults to csv, solves to json
  std::string input_path;      // for verify
  std::string plot_prefix;     // optional plot-data export
};

// JSON encodings of the core value types.
void to_json(json& j, const ProblemSpec& s);
void to_json(json& j, const ConicalCoeffs& c);
void to_json(json& j, const SmoothCoeffs& c);
void to_json(json& j, const BracketPoint& p);
void to_json(json& j, const Trajectory& t);
void to_json(json& j, const MomentumProfile& p);
void to_json(json& j, const SolveReport& r);
void to_json(json& j, const SmoothSolveReport& r);
void to_json(json& j, const InvariantEntry& e);
void to_json(json& j, const FutakiEvaluation& e);
void to_json(json& j, const ConeAngleLine& l);

void from_json(const json& j, ProblemSpec& s);
void from_json(const json& j, ConicalCoeffs& c);
void from_json(const json& j, SmoothCoeffs& c);
void from_json(const json& j, MomentumProfile& p);

// Full report envelopes for the solve commands (schema_version, inputs echo,
// results with profile and paper-target blocks, timings).
json conical_envelope(double m, double beta0, double tol, std::size_t grid_n);
json smooth_envelope(double m, double tol, std::size_t grid_n);

// Re-checks a solve-conical envelope from its serialized arrays alone; the
// paper-target deviations are compared against the stored tolerances, no
// recomputation of targets. Returns true when everything holds.
bool verify_envelope(const json& envelope, std::string& why);

// Plot-data export: <prefix>_profile.tsv with gamma/v/phi/lambda columns and
// <prefix>_potential.tsv with tau/s columns.
void write_plot_data(const json& envelope, const std::string& prefix);

// Number formatting shared by the CSV and TSV writers: 17 significant digits.
std::string format_number(double x);

// CLI entry point; returns the process exit status
// (0 ok, 1 solver error, 2 verification failure, 3 usage error).
int run_cli(int argc, const char* const* argv);

} // namespace calabi
