#include <sstream>
#include <string>

#include "doctest.h"
#include "kinkspec/errors.hpp"
#include "kinkspec/report_io.hpp"

using namespace kinkspec;

namespace {
std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}
}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-2.5e-20) == "-2.5e-20");
}

TEST_CASE("CSV writer") {
  std::ostringstream out;
  CsvWriter csv(out, "demo", {"a", "b", "c", "d"});
  csv.row({1.5, 7L, true, std::string("x")});
  CHECK(out.str() == "# kinkspec demo v1\na,b,c,d\n1.5,7,1,x\n");
  CHECK_THROWS(csv.row({1.0}));
}

TEST_CASE("gamma table") {
  std::ostringstream out;
  write_gamma_table(out, 5);
  const auto l = lines(out.str());
  REQUIRE(l.size() == 7);
  CHECK(l[0] == "# kinkspec gamma-table v1");
  CHECK(l[1] == "k,gamma_k");
  CHECK(l[2].rfind("1,0.64643699", 0) == 0);
  CHECK_THROWS_AS(write_gamma_table(out, 21), DomainError);
  CHECK_THROWS_AS(write_gamma_table(out, 0), DomainError);
}

TEST_CASE("spectral report JSON") {
  const auto doc = to_json(certify(0.75));
  CHECK(doc.at("schema") == kReportSchema);
  CHECK(doc.at("all_hold") == true);
  CHECK(doc.at("modes").size() == 2);
  CHECK(doc.at("params").at("d").get<double>() == doctest::Approx(4.0));
  CHECK(doc.at("u3").at("threshold_3gamma").get<double>() == doctest::Approx(2.25));
  const auto low = to_json(certify(0.6));
  CHECK(low.at("u3").at("lambda1").is_null());
  CHECK(low.at("u4").at("fgr_value").is_null());
  // deterministic serialisation
  CHECK(to_json(certify(0.75)).dump() == doc.dump());
  // shortest round-trip doubles
  const double l1 = doc.at("u3").at("lambda1").get<double>();
  CHECK(nlohmann::json::parse(doc.dump()).at("u3").at("lambda1").get<double>() == l1);
}

TEST_CASE("scan rows") {
  const auto row = scan_point(0.75);
  CHECK(row.u2);
  CHECK(row.u3);
  CHECK(row.u4);
  CHECK(row.fourlam_over_d > 1);
  const auto low = scan_point(0.6);
  CHECK(std::isnan(low.lambda1));
  std::ostringstream out;
  write_scan(out, {row, low});
  const auto l = lines(out.str());
  REQUIRE(l.size() == 4);
  CHECK(l[1] == "gamma,R,lambda1,fourlam_over_d,fgr_value,u2,u3,u4");
  CHECK(l[3].find("nan") != std::string::npos);
}

TEST_CASE("simulation config parsing") {
  const auto base = nlohmann::json::parse(R"({
    "schema": "kinkspec.simulate/1", "gamma": 0.75, "L": 30, "dx": 0.02, "dt": 0.01, "t_end": 50,
    "profile": {"type": "boosted", "v": 0.2, "q0": 0}
  })");
  const auto c = simulation_config_from_json(base);
  REQUIRE(std::holds_alternative<BoostSpec>(c.profile));
  CHECK(std::get<BoostSpec>(c.profile).v == 0.2);
  CHECK(c.diagnostic_stride == 10);
  CHECK(simulation_config_from_json(to_json(c)).dx == c.dx);

  auto expect_path = [](nlohmann::json doc, const std::string& path) {
    try {
      simulation_config_from_json(doc);
      FAIL("no error for " << path);
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("'" + path + "'") != std::string::npos);
    }
  };
  auto bad = base;
  bad["profile"]["v"] = 1.2;
  expect_path(bad, "profile.v");
  bad = base;
  bad["profile"]["v"] = "fast";
  expect_path(bad, "profile.v");
  bad = base;
  bad["dx"] = -1;
  expect_path(bad, "dx");
  bad = base;
  bad["colour"] = 1;
  expect_path(bad, "colour");
  bad = base;
  bad["schema"] = "kinkspec.simulate/0";
  expect_path(bad, "schema");
  bad = base;
  bad["profile"] = {{"type", "perturbed"}, {"parity", "sideways"}};
  expect_path(bad, "profile.parity");
  bad = base;
  bad["diagnostic_stride"] = 2.5;
  expect_path(bad, "diagnostic_stride");
}

TEST_CASE("frame and diagnostic writers") {
  SimulationConfig cfg;
  cfg.t_end = 0.02;
  cfg.diagnostic_stride = 1;
  std::ostringstream frames, diags;
  FrameWriter fw(frames);
  DiagnosticWriter dw(diags);
  cfg.frame_stride = 2;
  simulate(cfg, [&](const FieldState& s) { fw.write(s); }, [&](const DiagnosticSample& d) { dw.write(d); });
  const auto fl = lines(frames.str());
  CHECK(fl[1] == "t,x,psi,pi");
  CHECK(fl.size() == 2 + 2 * 3001);
  const auto dl = lines(diags.str());
  CHECK(dl[1] == "t,center,window_sup,energy");
  CHECK(dl.size() == 2 + 3);
}
