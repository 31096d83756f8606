#pragma once

// JSON and CSV serialisation of reports. Output is deterministic: JSON uses
// nlohmann's shortest round-trip doubles, CSV uses 12 significant digits.

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "kinkspec/spectra_numeric.hpp"
#include "kinkspec/wave_sim.hpp"

namespace kinkspec {

inline constexpr const char* kReportSchema = "kinkspec.spectral_report/1";
inline constexpr const char* kParamsSchema = "kinkspec.params/1";
inline constexpr const char* kSimulationSchema = "kinkspec.simulate/1";
inline constexpr int kCsvVersion = 1;

nlohmann::json to_json(const GammaParams& p);
nlohmann::json to_json(const EigenMode& m);
nlohmann::json to_json(const SpectralReport& r);
nlohmann::json to_json(const OracleCheck& c);
nlohmann::json to_json(const MollifiedCheck& c);

/// `%.<digits>g`.
std::string format_number(double value, int digits = 12);

/// CSV with a version comment line and a header row.
class CsvWriter {
 public:
  using Cell = std::variant<double, long, bool, std::string>;

  CsvWriter(std::ostream& out, const std::string& kind, std::vector<std::string> columns);
  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& out_;
  std::size_t width_;
};

void write_gamma_table(std::ostream& out, int kmax);
void write_convergence(std::ostream& out, const ConvergenceReport& rep);

struct ScanRow {
  double gamma;
  double R;
  double lambda1;  ///< NaN when undefined
  double fourlam_over_d;
  double fgr_value;
  bool u2, u3, u4;
};

ScanRow scan_point(double gamma, const CertifyOptions& options = {});
void write_scan(std::ostream& out, const std::vector<ScanRow>& rows);

/// Simulation config document. Throws DomainError naming the offending
/// field path (for example "profile.v") on any schema or range violation.
SimulationConfig simulation_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SimulationConfig& c);

/// Long-format frame rows t,x,psi,pi.
class FrameWriter {
 public:
  explicit FrameWriter(std::ostream& out);
  void write(const FieldState& s);

 private:
  CsvWriter csv_;
};

/// Rows t,center,window_sup,energy.
class DiagnosticWriter {
 public:
  explicit DiagnosticWriter(std::ostream& out);
  void write(const DiagnosticSample& d);

 private:
  CsvWriter csv_;
};

}  // namespace kinkspec
