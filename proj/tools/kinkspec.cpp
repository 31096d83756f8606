// kinkspec command-line front end.
//
// Exit codes: 0 success (all checked conditions hold), 1 a condition failed,
// 2 usage or domain error, 3 numerical failure.
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "kinkspec/errors.hpp"
#include "kinkspec/report_io.hpp"
#include "kinkspec/spectra_numeric.hpp"
#include "kinkspec/wave_sim.hpp"

using namespace kinkspec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw DomainError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const nlohmann::json& doc, const std::string& out) {
  Sink sink(out);
  sink.stream() << doc.dump(2) << '\n';
}

unsigned scan_threads(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KINKSPEC_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) throw DomainError("KINKSPEC_THREADS must be a positive integer");
    n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Evaluates every gamma on a worker pool; rows land at their own index so the
// output order never depends on scheduling.
std::vector<ScanRow> parallel_scan(const std::vector<double>& gammas, const CertifyOptions& opts) {
  std::vector<ScanRow> rows(gammas.size());
  std::vector<std::exception_ptr> errors(gammas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < gammas.size(); i = next++) {
      try {
        rows[i] = scan_point(gammas[i], opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = scan_threads(gammas.size());
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

int cmd_params(double gamma, const std::string& out) {
  auto doc = to_json(derive_params(gamma));
  doc["schema"] = kParamsSchema;
  emit_json(doc, out);
  return kExitOk;
}

int cmd_gamma_table(int kmax, const std::string& out) {
  Sink sink(out);
  write_gamma_table(sink.stream(), kmax);
  return kExitOk;
}

struct CertifyArgs {
  double gamma = 0;
  std::optional<double> epsilon;
  bool oracle = false;
  std::vector<double> grid{30.0, 0.005};
  double tol_resonance = CertifyOptions{}.resonance_tol;
  std::string out;
};

int cmd_certify(const CertifyArgs& a) {
  CertifyOptions opts;
  opts.resonance_tol = a.tol_resonance;
  const SpectralReport rep = certify(a.gamma, opts);
  auto doc = to_json(rep);
  bool ok = rep.all_hold();
  if (a.oracle) {
    const OracleCheck oc = oracle_check(rep, a.grid[0], a.grid[1]);
    doc["oracle"] = to_json(oc);
    doc["oracle"]["agrees"] = oc.counts_match && oc.max_abs_diff <= 5e-3;
    ok = ok && oc.counts_match && oc.max_abs_diff <= 5e-3;
  }
  if (a.epsilon) {
    const MollifiedCheck mc = mollified_check(a.gamma, *a.epsilon, a.grid[0], a.grid[1]);
    doc["provenance"] = "mollified(" + format_number(*a.epsilon) + ")";
    doc["mollified"] = to_json(mc);
    ok = ok && mc.u2 && mc.u3 && mc.u4;
  }
  emit_json(doc, a.out);
  return ok ? kExitOk : kExitFailed;
}

int cmd_fgr_scan(const std::vector<double>& range, const std::string& out, double tol_resonance) {
  const double a = range[0], b = range[1];
  const double nd = range[2];
  if (nd != std::floor(nd) || nd < 2 || nd > 1e6) throw DomainError("--range: n must be an integer in [2, 1e6]");
  const double g1 = gamma_k(1), g2 = gamma_k(2);
  if (!(a > g1 && b < g2 && a < b)) {
    throw DomainError("--range must satisfy gamma_1 < a < b < gamma_2 = (" + format_number(g1) + ", " +
                      format_number(g2) + ")");
  }
  const auto n = static_cast<std::size_t>(nd);
  std::vector<double> gammas(n);
  for (std::size_t i = 0; i < n; ++i) gammas[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  CertifyOptions opts;
  opts.resonance_tol = tol_resonance;
  const auto rows = parallel_scan(gammas, opts);
  Sink sink(out);
  write_scan(sink.stream(), rows);
  return kExitOk;
}

int cmd_converge(double gamma, const std::vector<double>& eps, const std::vector<double>& grid, const std::string& out) {
  ConvergenceOptions opts;
  opts.L = grid[0];
  opts.h = grid[1];
  const auto rep = convergence_study(gamma, eps, opts);
  Sink sink(out);
  write_convergence(sink.stream(), rep);
  const bool ok = rep.lambda1_converging && rep.w_norm_decreasing && rep.eps0 == eps.front();
  return ok ? kExitOk : kExitFailed;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  std::ifstream in(config_path);
  if (!in) throw DomainError("cannot read config file " + config_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError("config file " + config_path + " is not valid JSON: " + e.what());
  }
  const SimulationConfig cfg = simulation_config_from_json(doc);

  std::ofstream diag_file, frame_file;
  std::unique_ptr<FrameWriter> frames;
  std::ostream* diag_stream = &std::cout;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    diag_file.open(std::filesystem::path(out_dir) / "diagnostics.csv");
    if (!diag_file) throw DomainError("cannot write to " + out_dir);
    diag_stream = &diag_file;
    if (cfg.frame_stride > 0) {
      frame_file.open(std::filesystem::path(out_dir) / "frames.csv");
      frames = std::make_unique<FrameWriter>(frame_file);
    }
  }
  DiagnosticWriter diags(*diag_stream);
  simulate(
      cfg, [&](const FieldState& s) {
        if (frames) frames->write(s);
      },
      [&](const DiagnosticSample& d) { diags.write(d); });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral certification and simulation of kinks in piecewise-parabolic double-well potentials"};
  app.require_subcommand(1);
  std::string out;

  double gamma = 0;
  auto* params = app.add_subcommand("params", "Print the derived constants for one gamma as JSON");
  params->add_option("--gamma", gamma, "shape parameter in (0,1)")->required();
  params->add_option("--out", out, "output file");

  int kmax = 5;
  auto* table = app.add_subcommand("gamma-table", "CSV of the resonance parameters gamma_k");
  table->add_option("--kmax", kmax, "number of rows (1..20)");
  table->add_option("--out", out, "output file");

  CertifyArgs cert;
  auto* certify_cmd = app.add_subcommand("certify", "Spectral report with the checks U1-U4 as JSON");
  certify_cmd->add_option("--gamma", cert.gamma, "shape parameter in (0,1)")->required();
  certify_cmd->add_option("--epsilon", cert.epsilon, "also certify the mollified potential at this epsilon");
  certify_cmd->add_flag("--oracle", cert.oracle, "cross-check eigenvalues by finite differences");
  certify_cmd->add_option("--grid", cert.grid, "oracle half-width L and step h")->expected(2);
  certify_cmd->add_option("--tol-resonance", cert.tol_resonance, "gamma band counted as resonant");
  certify_cmd->add_option("--out", cert.out, "output file");

  std::vector<double> range;
  double scan_tol = CertifyOptions{}.resonance_tol;
  auto* scan = app.add_subcommand("fgr-scan", "CSV scan of lambda1 and the FGR value over a gamma range");
  scan->add_option("--range", range, "a b n")->expected(3)->required();
  scan->add_option("--tol-resonance", scan_tol, "gamma band counted as resonant");
  scan->add_option("--out", out, "output file");

  double conv_gamma = 0.75;
  std::vector<double> eps{0.08, 0.04, 0.02};
  std::vector<double> conv_grid{30.0, 0.005};
  auto* converge = app.add_subcommand("converge", "CSV convergence study of the mollified spectrum");
  converge->add_option("--gamma", conv_gamma, "shape parameter in (gamma_1, gamma_2)");
  converge->add_option("--epsilon", eps, "decreasing list of epsilons")->expected(1, 64);
  converge->add_option("--grid", conv_grid, "finite-difference half-width L and step h")->expected(2);
  converge->add_option("--out", out, "output file");

  std::string config;
  std::string out_dir;
  auto* sim = app.add_subcommand("simulate", "Run the wave simulator from a JSON config");
  sim->add_option("--config", config, "simulation config (JSON)")->required();
  sim->add_option("--out", out_dir, "output directory for diagnostics.csv and frames.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*params) return cmd_params(gamma, out);
    if (*table) return cmd_gamma_table(kmax, out);
    if (*certify_cmd) return cmd_certify(cert);
    if (*scan) return cmd_fgr_scan(range, out, scan_tol);
    if (*converge) return cmd_converge(conv_gamma, eps, conv_grid, out);
    if (*sim) return cmd_simulate(config, out_dir);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
