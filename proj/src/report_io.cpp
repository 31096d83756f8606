#include "kinkspec/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "kinkspec/errors.hpp"

namespace kinkspec {

namespace {

nlohmann::json optional_number(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

nlohmann::json to_json(const GammaParams& p) {
  return {{"gamma", p.gamma}, {"b", p.b}, {"d", p.d}, {"q", p.q}, {"C", p.C}, {"A", p.A}, {"R", p.R}};
}

nlohmann::json to_json(const EigenMode& m) {
  return {{"lambda", m.lambda}, {"parity", to_string(m.parity)}, {"xi", m.xi},       {"eta", m.eta},
          {"alpha", m.alpha},   {"beta", m.beta},                {"coefA", m.coefA}, {"coefB", m.coefB}};
}

nlohmann::json to_json(const SpectralReport& r) {
  nlohmann::json doc;
  doc["schema"] = kReportSchema;
  doc["gamma"] = r.gamma;
  doc["provenance"] = r.provenance;
  doc["params"] = to_json(r.params);
  doc["modes"] = nlohmann::json::array();
  for (const auto& m : r.modes) doc["modes"].push_back(to_json(m));
  doc["u1"] = {{"holds", r.u1.holds}, {"K_note", r.u1.k_note}, {"smoothness_note", r.u1.smoothness_note}};
  doc["u2"] = {{"holds", r.u2.holds},
               {"nearest_k", r.u2.nearest_k},
               {"nearest_gamma_k", r.u2.nearest_gamma_k},
               {"distance", r.u2.distance}};
  const bool has_l1 = r.u3.lambda1 != 0.0;
  doc["u3"] = {{"holds", r.u3.holds},
               {"lambda1", has_l1 ? nlohmann::json(r.u3.lambda1) : nlohmann::json()},
               {"xi", has_l1 ? nlohmann::json(r.u3.xi) : nlohmann::json()},
               {"cos2_test", has_l1 ? nlohmann::json(r.u3.cos2_test) : nlohmann::json()},
               {"threshold_3gamma", 3.0 * r.gamma},
               {"ratio_4lambda1_over_d", has_l1 ? nlohmann::json(r.u3.ratio) : nlohmann::json()}};
  doc["u4"] = {{"holds", r.u4.holds},
               {"fgr_value", optional_number(r.u4.fgr_value)},
               {"distance_to_gamma_star", optional_number(r.u4.distance_to_gamma_star)},
               {"note", r.u4.note}};
  doc["all_hold"] = r.all_hold();
  return doc;
}

nlohmann::json to_json(const OracleCheck& c) {
  return {{"L", c.L},
          {"h", c.h},
          {"eigenvalues", c.eigenvalues},
          {"counts_match", c.counts_match},
          {"max_abs_diff", finite_or_null(c.max_abs_diff)}};
}

nlohmann::json to_json(const MollifiedCheck& c) {
  return {{"epsilon", c.epsilon},
          {"deviation_constant", c.deviation_constant},
          {"eigenvalues", c.eigenvalues},
          {"lambda1", c.lambda1},
          {"ratio_4lambda1_over_d", c.ratio},
          {"resonance_indicator", c.resonance_indicator},
          {"fgr_numeric", c.fgr_numeric},
          {"fgr_limit", c.fgr_limit},
          {"w_norm", c.w_norm},
          {"delta", c.delta},
          {"u2", c.u2},
          {"u3", c.u3},
          {"u4", c.u4}};
}

std::string format_number(double value, int digits) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::string& kind, std::vector<std::string> columns)
    : out_(out), width_(columns.size()) {
  out_ << "# kinkspec " << kind << " v" << kCsvVersion << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != width_) throw std::logic_error("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [this](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_number(v);
          } else if constexpr (std::is_same_v<T, bool>) {
            out_ << (v ? 1 : 0);
          } else {
            out_ << v;
          }
        },
        cells[i]);
  }
  out_ << '\n';
}

void write_gamma_table(std::ostream& out, int kmax) {
  if (kmax < 1 || kmax > 20) throw DomainError("kmax must lie in 1..20");
  CsvWriter csv(out, "gamma-table", {"k", "gamma_k"});
  for (int k = 1; k <= kmax; ++k) csv.row({static_cast<long>(k), gamma_k(k)});
}

void write_convergence(std::ostream& out, const ConvergenceReport& rep) {
  CsvWriter csv(out, "converge", {"epsilon", "lambda1_eps", "w_norm", "delta", "fgr_numeric"});
  for (const auto& r : rep.rows) csv.row({r.epsilon, r.lambda1, r.w_norm, r.delta, r.fgr_numeric});
}

ScanRow scan_point(double gamma, const CertifyOptions& options) {
  const SpectralReport r = certify(gamma, options);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool has_l1 = r.u3.lambda1 != 0.0;
  return {gamma,
          r.params.R,
          has_l1 ? r.u3.lambda1 : nan,
          has_l1 ? r.u3.ratio : nan,
          r.u4.fgr_value.value_or(nan),
          r.u2.holds,
          r.u3.holds,
          r.u4.holds};
}

void write_scan(std::ostream& out, const std::vector<ScanRow>& rows) {
  CsvWriter csv(out, "fgr-scan", {"gamma", "R", "lambda1", "fourlam_over_d", "fgr_value", "u2", "u3", "u4"});
  for (const auto& r : rows) csv.row({r.gamma, r.R, r.lambda1, r.fourlam_over_d, r.fgr_value, r.u2, r.u3, r.u4});
}

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw DomainError("config field '" + path + "': " + what);
}

double number_field(const nlohmann::json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) config_error(path + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_error(path + key, "must be finite");
  return x;
}

int int_field(const nlohmann::json& obj, const std::string& key, const std::string& path, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 1000000000) {
    config_error(path + key, "expected a nonnegative integer");
  }
  return v.get<int>();
}

void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> known, const std::string& path) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) config_error(path + item.key(), "unknown field");
  }
}

}  // namespace

SimulationConfig simulation_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) config_error("$", "expected a JSON object");
  reject_unknown(doc,
                 {"schema", "gamma", "epsilon", "profile", "L", "dx", "dt", "t_end", "frame_stride",
                  "diagnostic_stride", "window"},
                 "");
  if (!doc.contains("schema") || doc.at("schema") != kSimulationSchema) {
    config_error("schema", std::string("expected \"") + kSimulationSchema + "\"");
  }
  SimulationConfig c;
  c.gamma = number_field(doc, "gamma", "", c.gamma);
  if (!(c.gamma > 0 && c.gamma < 1)) config_error("gamma", "must lie in (0,1)");
  c.epsilon = number_field(doc, "epsilon", "", c.epsilon);
  if (c.epsilon < 0) config_error("epsilon", "must be >= 0");
  c.L = number_field(doc, "L", "", c.L);
  c.dx = number_field(doc, "dx", "", c.dx);
  c.dt = number_field(doc, "dt", "", c.dt);
  c.t_end = number_field(doc, "t_end", "", c.t_end);
  c.window = number_field(doc, "window", "", c.window);
  if (!(c.L > 0)) config_error("L", "must be positive");
  if (!(c.dx > 0)) config_error("dx", "must be positive");
  if (!(c.dt > 0)) config_error("dt", "must be positive");
  if (!(c.t_end >= 0)) config_error("t_end", "must be >= 0");
  if (!(c.window > 0 && c.window < c.L)) config_error("window", "must lie in (0, L)");
  c.frame_stride = int_field(doc, "frame_stride", "", c.frame_stride);
  c.diagnostic_stride = int_field(doc, "diagnostic_stride", "", c.diagnostic_stride);
  if (c.diagnostic_stride < 1) config_error("diagnostic_stride", "must be >= 1");

  if (doc.contains("profile")) {
    const auto& pr = doc.at("profile");
    if (!pr.is_object()) config_error("profile", "expected an object");
    if (!pr.contains("type") || !pr.at("type").is_string()) config_error("profile.type", "expected a string");
    const std::string type = pr.at("type").get<std::string>();
    if (type == "static") {
      reject_unknown(pr, {"type"}, "profile.");
      c.profile = StaticKink{};
    } else if (type == "boosted") {
      reject_unknown(pr, {"type", "v", "q0"}, "profile.");
      BoostSpec b;
      b.v = number_field(pr, "v", "profile.", 0.0);
      b.q0 = number_field(pr, "q0", "profile.", 0.0);
      if (!(std::abs(b.v) < 1)) config_error("profile.v", "|v| must be < 1");
      c.profile = b;
    } else if (type == "perturbed") {
      reject_unknown(pr, {"type", "amplitude", "width", "center", "parity"}, "profile.");
      PerturbedKink k;
      k.amplitude = number_field(pr, "amplitude", "profile.", k.amplitude);
      k.width = number_field(pr, "width", "profile.", k.width);
      k.center = number_field(pr, "center", "profile.", k.center);
      if (!(k.width > 0)) config_error("profile.width", "must be positive");
      if (pr.contains("parity")) {
        const auto& par = pr.at("parity");
        if (par == "odd" || par == "antisymmetric") {
          k.parity = Parity::antisymmetric;
        } else if (par == "even" || par == "symmetric") {
          k.parity = Parity::symmetric;
        } else {
          config_error("profile.parity", "expected \"odd\" or \"even\"");
        }
      }
      c.profile = k;
    } else {
      config_error("profile.type", "expected one of static, boosted, perturbed");
    }
  }
  return c;
}

nlohmann::json to_json(const SimulationConfig& c) {
  nlohmann::json doc{{"schema", kSimulationSchema},
                     {"gamma", c.gamma},
                     {"epsilon", c.epsilon},
                     {"L", c.L},
                     {"dx", c.dx},
                     {"dt", c.dt},
                     {"t_end", c.t_end},
                     {"frame_stride", c.frame_stride},
                     {"diagnostic_stride", c.diagnostic_stride},
                     {"window", c.window}};
  std::visit(
      [&doc](const auto& pr) {
        using T = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<T, StaticKink>) {
          doc["profile"] = {{"type", "static"}};
        } else if constexpr (std::is_same_v<T, BoostSpec>) {
          doc["profile"] = {{"type", "boosted"}, {"v", pr.v}, {"q0", pr.q0}};
        } else {
          doc["profile"] = {{"type", "perturbed"},
                            {"amplitude", pr.amplitude},
                            {"width", pr.width},
                            {"center", pr.center},
                            {"parity", pr.parity == Parity::antisymmetric ? "odd" : "even"}};
        }
      },
      c.profile);
  return doc;
}

FrameWriter::FrameWriter(std::ostream& out) : csv_(out, "frames", {"t", "x", "psi", "pi"}) {}

void FrameWriter::write(const FieldState& s) {
  for (std::size_t i = 0; i < s.x.size(); ++i) csv_.row({s.t, s.x[i], s.psi[i], s.pi[i]});
}

DiagnosticWriter::DiagnosticWriter(std::ostream& out)
    : csv_(out, "diagnostics", {"t", "center", "window_sup", "energy"}) {}

void DiagnosticWriter::write(const DiagnosticSample& d) { csv_.row({d.t, d.center, d.window_sup, d.energy}); }

}  // namespace kinkspec
