#include "doctest.h"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "combtangle/combtangle.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  ct_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(ct_version()) == "0.1.0");
  CHECK(std::string(ct_status_name(CT_ERR_SPEC)) == "spec error");
  CHECK(std::string(ct_status_name(CT_OK)) == "ok");
}

TEST_CASE("scenario handles") {
  ct_scenario* s = nullptr;
  REQUIRE(ct_scenario_defaults(&s) == CT_OK);
  double v = 0.0;
  CHECK(ct_scenario_get(s, "dissipation.kappa_p_MHz", &v) == CT_OK);
  CHECK(v == doctest::Approx(10.0));
  CHECK(ct_scenario_set(s, "bath.temperature_K", 0.5) == CT_OK);
  CHECK(ct_scenario_set(s, "bath.nonsense", 1.0) == CT_ERR_SPEC);
  CHECK(std::string(ct_last_error()).find("nonsense") != std::string::npos);

  char* text = nullptr;
  REQUIRE(ct_scenario_render(s, &text) == CT_OK);
  ct_scenario* t = nullptr;
  REQUIRE(ct_scenario_parse(text, &t) == CT_OK);
  ct_string_free(text);
  char *h1 = nullptr, *h2 = nullptr;
  ct_scenario_hash(s, &h1);
  ct_scenario_hash(t, &h2);
  CHECK(take(h1) == take(h2));

  CHECK(ct_scenario_parse("[modes]\nnu_k_GHz = banana\n", &t) == CT_ERR_SPEC);
  CHECK(ct_scenario_load("/nonexistent/scenario.ini", &t) == CT_ERR_IO);
  CHECK(ct_scenario_get(nullptr, "bath.temperature_K", &v) == CT_ERR_NULL_ARGUMENT);
  ct_scenario_free(t);
  ct_scenario_free(s);
}

TEST_CASE("point analysis as JSON") {
  ct_scenario* s = nullptr;
  ct_scenario_defaults(&s);
  ct_scenario_set(s, "coupling.G_p_MHz", 150.0);
  ct_scenario_set(s, "coupling.G_q_MHz", 127.5);
  char* json = nullptr;
  int failed = -1;
  REQUIRE(ct_point_json(s, &json, &failed) == CT_OK);
  CHECK(failed == 0);
  const auto doc = nlohmann::json::parse(take(json));
  CHECK(doc["status"] == "ok");
  CHECK(doc.contains("covariance"));
  CHECK(ct_readout_json(s, 1.0, 3.0, 0.0, &json) == CT_ERR_ADIABATICITY);
  REQUIRE(ct_readout_json(s, 1.0, 20.0, 0.0, &json) == CT_OK);
  CHECK(nlohmann::json::parse(take(json)).contains("normalized_output_covariance"));
  ct_scenario_free(s);
}

TEST_CASE("closed-form measures") {
  const double r = 0.3, c = std::cosh(2 * r) / 2, sh = std::sinh(2 * r) / 2;
  const double v[16] = {c, 0, sh, 0, 0, c, 0, -sh, sh, 0, c, 0, 0, -sh, 0, c};
  double e = 0, s12 = 0, s21 = 0, n = 0;
  CHECK(ct_log_negativity(v, &e) == CT_OK);
  CHECK(e == doctest::Approx(2 * r));
  CHECK(ct_steering(v, &s12, &s21) == CT_OK);
  CHECK(s12 == doctest::Approx(std::log(std::cosh(2 * r))));
  CHECK(ct_thermal_occupation(8.0, 0.02, &n) == CT_OK);
  CHECK(n == doctest::Approx(4.60109150868820e-9).epsilon(1e-12));
  CHECK(ct_thermal_occupation(8.0, -1.0, &n) == CT_ERR_DOMAIN);
}

TEST_CASE("sweeps through the C interface") {
  ct_sweep* sw = nullptr;
  CHECK(ct_sweep_from_preset("nope", nullptr, nullptr, &sw) == CT_ERR_LOOKUP);
  CHECK(ct_sweep_from_preset("fig4", nullptr, nullptr, &sw) == CT_ERR_SPEC);
  REQUIRE(ct_sweep_from_preset("fig2b", nullptr, nullptr, &sw) == CT_OK);
  REQUIRE(ct_sweep_run(sw, 2) == CT_OK);
  size_t rows = 0, failed = 7;
  ct_sweep_rows(sw, &rows);
  ct_sweep_failed_points(sw, &failed);
  CHECK(rows == 101);
  CHECK(failed == 0);
  double e = -1;
  CHECK(ct_sweep_value(sw, 100, "E_rq", &e) == CT_OK);
  CHECK(std::abs(e) < 1e-12);
  char* cap = nullptr;
  ct_sweep_caption(sw, &cap);
  CHECK(take(cap) == "G_p=G_0; ratio_GqGp from 0 to 1 (101 points)");
  ct_sweep_free(sw);

  ct_scenario* base = nullptr;
  ct_scenario_defaults(&base);
  ct_scenario_set(base, "coupling.G_p_MHz", 15.0);
  REQUIRE(ct_sweep_new(base, "custom", &sw) == CT_OK);
  CHECK(ct_sweep_add_axis(sw, "T_K", 0.0, 1.0, 3) == CT_OK);
  CHECK(ct_sweep_add_axis(sw, "bogus", 0.0, 1.0, 3) == CT_ERR_SPEC);
  CHECK(ct_sweep_add_output(sw, "E_pq") == CT_OK);
  CHECK(ct_sweep_set_anchor(sw, "ratio_GqGp", 0.5) == CT_OK);
  REQUIRE(ct_sweep_run(sw, 1) == CT_OK);
  char* csv = nullptr;
  ct_sweep_csv(sw, &csv);
  CHECK(take(csv).rfind("T_K,E_pq,stable,regime,status\n", 0) == 0);
  ct_sweep_free(sw);
  ct_scenario_free(base);
}

TEST_CASE("Wigner marginals through the C interface") {
  ct_wigner* w = nullptr;
  REQUIRE(ct_wigner_from_preset("fig7", nullptr, &w) == CT_OK);
  ct_wigner_set_grid(w, 21, 5.0);
  REQUIRE(ct_wigner_run(w) == CT_OK);
  size_t n = 0;
  ct_wigner_count(w, &n);
  CHECK(n == 4);
  char* label = nullptr;
  ct_wigner_label(w, 0, &label);
  CHECK(take(label).find('-') != std::string::npos);
  char* csv = nullptr;
  CHECK(ct_wigner_grid_csv(w, 9, &csv) == CT_ERR_LOOKUP);
  ct_wigner_free(w);
  ct_scenario* s = nullptr;
  ct_scenario_defaults(&s);
  CHECK(ct_wigner_new(s, "X_p:Z_q", &w) == CT_ERR_SPEC);
  ct_scenario_free(s);
}
