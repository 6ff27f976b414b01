#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "combtangle/gaussian_measures.hpp"
#include "combtangle/semiclassical.hpp"
#include "combtangle/stochastic_oracle.hpp"
#include "combtangle/sweep.hpp"
#include "test_support.hpp"

using namespace combtangle;

namespace {

using Clock = std::chrono::steady_clock;
constexpr double deg = std::numbers::pi / 180.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

unsigned worker_threads() { return std::max(1U, std::thread::hardware_concurrency()); }

struct Series {
  std::vector<double> x;
  std::map<Output, std::vector<double>> y;  // NaN where the point was gated
  std::vector<std::string> status;
};

Series run_preset(const std::string& name) {
  const auto spec = std::get<SweepSpec>(figure_preset(name));
  const auto res = run_sweep(spec, worker_threads());
  Series s;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    s.x.push_back(res.rows[i].coordinates[0]);
    s.status.push_back(res.rows[i].status);
    for (Output o : spec.outputs) s.y[o].push_back(res.value(i, o).value_or(NAN));
  }
  return s;
}

std::size_t not_ok(const Series& s) {
  return static_cast<std::size_t>(
      std::count_if(s.status.begin(), s.status.end(), [](const auto& st) { return st != "ok"; }));
}

// Vacuum fixed point.
Outcome criterion1() {
  auto sc = testing::direct_scenario(0.0, 0.0);
  sc.params.temperature = 0.0;
  evaluate_point(sc);  // warm-up
  std::vector<double> times;
  PointResult r;
  for (int i = 0; i < 5; ++i) {
    const auto t0 = Clock::now();
    r = evaluate_point(sc);
    times.push_back(seconds_since(t0));
  }
  std::sort(times.begin(), times.end());
  const double t_med = times[2];
  if (!r.lyapunov || !r.report) return {false, "no steady state: " + r.status};
  const double dev = (r.lyapunov->cm.values - Matrix::Identity(6, 6) / 2).cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (const auto& p : r.report->pairs) worst = std::max({worst, p.log_negativity, p.s12, p.s21});
  for (const auto& [m, n] : r.report->occupations) worst = std::max(worst, n);
  const bool pass = r.lyapunov->residual < 1e-12 && dev < 1e-12 && worst == 0.0 && t_med < 1e-3;
  return {pass, fmt::format("residual {:.2e}, max|V - I/2| {:.2e}, max measure {:.2e}, "
                            "median time {:.3f} ms",
                            r.lyapunov->residual, dev, worst, 1e3 * t_med)};
}

// Monte Carlo and covariance evolution against the Lyapunov solution.
Outcome criterion2() {
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, Scenario>> points;
  points.emplace_back("fig5 kq/kp=1", std::get<SweepSpec>(figure_preset("fig5a")).scenario_at(0));

  // Random stable points whose ensemble fits the time budget: at most 4000
  // Euler steps at the default dt and horizon.
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> kr(5.0, 60.0), kpq(5.0, 30.0), gp(0.2, 3.0),
      ratio(0.0, 1.0), temp(0.0, 1.0);
  int drawn = 0;
  while (points.size() < 11) {
    ++drawn;
    auto sc = testing::direct_scenario(gp(rng), ratio(rng));
    sc.params.kappa_r = from_MHz(kr(rng));
    sc.params.kappa_p = from_MHz(kpq(rng));
    sc.params.kappa_q = from_MHz(kpq(rng));
    sc.params.temperature = temp(rng);
    const auto r = evaluate_point(sc);
    if (r.status != "ok") continue;
    const auto spec = resolve_ensemble_spec(*r.dynamics, {});
    if (spec.t_end / spec.dt > 4000.0) continue;
    points.emplace_back(fmt::format("random #{}", drawn), sc);
  }

  bool pass = true;
  double worst_mc = 0.0, worst_ev = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto r = evaluate_point(points[i].second);
    const auto& dd = *r.dynamics;
    const Matrix& exact = r.lyapunov->cm.values;
    EnsembleSpec spec;
    spec.n_trajectories = 20000;
    spec.seed = 1000 + i;
    spec.threads = worker_threads();
    const auto mc = simulate_ensemble(dd, spec);
    const double e_mc = relative_frobenius(mc.estimate.values, exact);
    const double rate = std::abs(r.stability->abscissa);
    const auto ev = evolve_covariance(dd, CovarianceMatrix::vacuum(dd.mode_order), 40.0 / rate,
                                      default_covariance_dt(dd));
    const double e_ev = relative_frobenius(ev.values, exact);
    worst_mc = std::max(worst_mc, e_mc);
    worst_ev = std::max(worst_ev, e_ev);
    const bool ok = e_mc < 0.05 && e_ev < 1e-6;
    pass = pass && ok;
    std::printf("  [2] %-14s G_p/G0=%.3f G_q/G_p=%.3f kr=%.2f kp=%.2f kq=%.2f MHz T=%.3f K  "
                "MC %.4f  evolve %.2e  %s\n",
                points[i].first.c_str(), *points[i].second.G_p / constants::G0,
                *points[i].second.G_q / std::max(*points[i].second.G_p, 1e-300),
                to_MHz(points[i].second.params.kappa_r), to_MHz(points[i].second.params.kappa_p),
                to_MHz(points[i].second.params.kappa_q), points[i].second.params.temperature, e_mc,
                e_ev, ok ? "ok" : "FAIL");
  }
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 120.0;
  return {pass, fmt::format("11 points ({} random draws), worst MC {:.4f}, worst evolve {:.2e}, "
                            "{:.1f} s",
                            drawn, worst_mc, worst_ev, elapsed)};
}

// Closed-form against symplectic log-negativity; TMSV values.
Outcome criterion3() {
  std::mt19937_64 rng(314159);
  double worst = 0.0;
  int entangled = 0;
  for (int i = 0; i < 100; ++i) {
    const auto rcm = ReducedCM::from_matrix(testing::random_physical_cm(2, rng));
    const double a = log_negativity(rcm).log_negativity;
    worst = std::max(worst, std::abs(a - log_negativity_symplectic(rcm).log_negativity));
    entangled += a > 0.0;
  }
  double worst_tmsv = 0.0;
  for (double r : {0.05, 0.3, 0.7, 1.2, 2.0}) {
    const auto rcm = ReducedCM::from_matrix(testing::tmsv(r));
    const auto st = gaussian_steering(rcm);
    const double s = std::log(std::cosh(2 * r));
    worst_tmsv = std::max({worst_tmsv, std::abs(log_negativity(rcm).log_negativity - 2 * r),
                           std::abs(log_negativity_symplectic(rcm).log_negativity - 2 * r),
                           std::abs(st.s12 - s), std::abs(st.s21 - s)});
  }
  return {worst <= 1e-10 && worst_tmsv <= 1e-10,
          fmt::format("max |dE_N| {:.2e} over 100 states ({} entangled), TMSV max error {:.2e}",
                      worst, entangled, worst_tmsv)};
}

Outcome criterion4() {
  const auto s = run_preset("fig2a");
  const auto& erp = s.y.at(Output::E_rp);
  const auto& erq = s.y.at(Output::E_rq);
  double max_rp = 0.0;
  for (double v : erp) max_rp = std::max(max_rp, std::isnan(v) ? INFINITY : std::abs(v));
  std::size_t drops = 0;
  for (std::size_t i = 1; i < erq.size(); ++i)
    if (!(erq[i] >= erq[i - 1])) ++drops;
  const bool pass = not_ok(s) == 0 && max_rp < 1e-10 && drops == 0 && erq.back() > erq.front();
  return {pass, fmt::format("max E_rp {:.2e}, E_rq from {:.4g} to {:.4g} with {} decreases, "
                            "{} gated points",
                            max_rp, erq.front(), erq.back(), drops, not_ok(s))};
}

Outcome criterion5() {
  const auto s = run_preset("fig2b");
  const auto& e = s.y.at(Output::E_rq);
  const std::size_t n = e.size();
  const auto peak = std::max_element(e.begin(), e.end());
  const std::size_t ip = static_cast<std::size_t>(peak - e.begin());
  const bool interior = ip > 0 && ip + 1 < n && *peak > e.front() && *peak > e.back();
  const bool pass = not_ok(s) == 0 && e.back() < 1e-3 && interior;
  return {pass, fmt::format("E_rq(G_q=G_p) {:.2e}, maximum {:.4g} at ratio {:.2f}", e.back(),
                            *peak, s.x[ip])};
}

Outcome criterion6() {
  const auto s = run_preset("fig2c");
  const auto& e = s.y.at(Output::E_rq);
  double last_pos = -1.0, first_zero_after = NAN;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] > 0.0) last_pos = s.x[i];
  for (std::size_t i = 0; i < e.size(); ++i)
    if (s.x[i] > last_pos && std::isnan(first_zero_after)) first_zero_after = s.x[i];
  // The edge lies between the last positive and the next sampled ratio.
  bool all_positive_below = true;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (s.x[i] <= last_pos && !(e[i] > 0.0) && s.x[i] > 0.0) all_positive_below = false;
  const bool pass = not_ok(s) == 0 && last_pos >= 0.45 && last_pos <= 0.55 &&
                    first_zero_after <= 0.55 && all_positive_below;
  return {pass, fmt::format("E_rq > 0 up to ratio {:.2f}, zero from {:.2f}", last_pos,
                            first_zero_after)};
}

Outcome criterion7() {
  const auto s = run_preset("fig3b");
  const auto& e = s.y.at(Output::E_pq);
  double at1 = NAN, at40 = NAN;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (std::abs(s.x[i] - 1.0) < 1e-9) at1 = e[i];
    if (std::abs(s.x[i] - 40.0) < 1e-9) at40 = e[i];
  }
  return {at40 > at1,
          fmt::format("E_pq(kappa_r=1 MHz) {:.4f}, E_pq(kappa_r=40 MHz) {:.4f}", at1, at40)};
}

Outcome criterion8() {
  const auto a = run_preset("fig5a");
  const auto b = run_preset("fig5b");
  const auto& spq = a.y.at(Output::S_pq);
  const auto& sqp = a.y.at(Output::S_qp);
  const auto& epq = a.y.at(Output::E_pq);
  const auto& np = b.y.at(Output::N_p);
  const auto& nq = b.y.at(Output::N_q);
  const auto& x = a.x;
  const std::size_t n = x.size();

  // (a) first sign change of S_pq - S_qp, linearly interpolated.
  double cross = NAN;
  for (std::size_t i = 1; i < n && std::isnan(cross); ++i) {
    const double d0 = spq[i - 1] - sqp[i - 1], d1 = spq[i] - sqp[i];
    if (d0 != 0.0 && d0 * d1 <= 0.0) cross = x[i - 1] + (x[i] - x[i - 1]) * d0 / (d0 - d1);
  }
  const bool pass_a = std::abs(cross - 1.5) <= 0.2;

  // (b) one-way window S_pq > 0, S_qp = 0.
  double w0 = NAN, w1 = NAN;
  std::size_t last_in = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (spq[i] > 0.0 && sqp[i] == 0.0) {
      if (std::isnan(w0)) w0 = x[i];
      w1 = x[i];
      last_in = i;
    }
  bool contiguous = !std::isnan(w0);
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] >= w0 && x[i] <= w1 && !(spq[i] > 0.0 && sqp[i] == 0.0)) contiguous = false;
  const bool pass_b = contiguous && std::abs(w0 - 2.1) <= 0.2 && std::abs(w1 - 2.3) <= 0.2;

  // (c) beyond the window: no steering, entanglement survives.
  std::size_t beyond = 0, violations = 0;
  for (std::size_t i = last_in + 1; i < n; ++i) {
    ++beyond;
    if (spq[i] != 0.0 || sqp[i] != 0.0 || !(epq[i] > 0.0)) ++violations;
  }
  const bool pass_c = !std::isnan(w1) && beyond > 0 && violations == 0;

  // (d) direction of the steering asymmetry follows the population imbalance.
  // Points where both steerings vanish are outside its scope (see (c)).
  std::size_t checked = 0, mismatched = 0, literal_mismatch = 0;
  const auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(nq[i] - np[i]) > 1e-3)) continue;
    const bool agree = sign(sqp[i] - spq[i]) == sign(nq[i] - np[i]);
    literal_mismatch += !agree;
    if (spq[i] == 0.0 && sqp[i] == 0.0) continue;
    ++checked;
    mismatched += !agree;
  }
  const bool pass_d = checked > 0 && mismatched == 0;

  return {pass_a && pass_b && pass_c && pass_d && not_ok(a) == 0,
          fmt::format("(a) crossover {:.3f} {}; (b) one-way window [{:.2f}, {:.2f}] {}; "
                      "(c) {} points beyond, {} violations {}; (d) {} of {} steering points "
                      "mismatch {} ({} when points without steering are counted)",
                      cross, pass_a ? "ok" : "FAIL", w0, w1, pass_b ? "ok" : "FAIL", beyond,
                      violations, pass_c ? "ok" : "FAIL", mismatched, checked,
                      pass_d ? "ok" : "FAIL", literal_mismatch)};
}

Outcome criterion9() {
  const auto a = run_preset("fig6a");
  const auto b = run_preset("fig6b");
  const auto last_positive = [](const Series& s) {
    double t = NAN;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (s.y.at(Output::E_pq)[i] > 0.0) t = s.x[i];
    return t;
  };
  const double ta = last_positive(a), tb = last_positive(b);
  double asym_end = NAN;
  const auto& spq = a.y.at(Output::S_pq);
  const auto& sqp = a.y.at(Output::S_qp);
  for (std::size_t i = 0; i < a.x.size() && std::isnan(asym_end); ++i)
    if (!(sqp[i] > spq[i])) asym_end = a.x[i];
  const bool pass = not_ok(a) == 0 && not_ok(b) == 0 && std::abs(ta - 2.5) <= 0.3 &&
                    std::abs(asym_end - 0.9) <= 0.2 && std::abs(tb - 4.5) <= 0.5;
  return {pass, fmt::format("6(a) E_pq > 0 up to {:.2f} K, S_qp > S_pq below {:.2f} K; "
                            "6(b) E_pq > 0 up to {:.2f} K",
                            ta, asym_end, tb)};
}

Outcome criterion10() {
  const auto job = std::get<WignerJob>(figure_preset("fig7"));
  const auto res = run_wigner(job);
  bool pass = true;
  std::string detail;
  for (const auto& g : res.grids) {
    const auto& e = g.contour_1e;
    const bool same_mode = (g.axis1 == Quadrature::Xp && g.axis2 == Quadrature::Yp) ||
                           (g.axis1 == Quadrature::Xq && g.axis2 == Quadrature::Yq);
    const double integral = g.integral();
    bool ok = std::abs(integral - 1.0) <= 1e-3;
    if (same_mode) {
      ok = ok && e.variance_minor > 0.5;
    } else {
      ok = ok && e.variance_minor < 0.5 && std::abs(std::abs(e.angle) - 45 * deg) <= 10 * deg;
    }
    pass = pass && ok;
    detail += fmt::format("{}{}-{}: variances {:.4f}/{:.4f}, major axis {:+.1f} deg, integral "
                          "{:.6f}",
                          detail.empty() ? "" : "; ", quadrature_name(g.axis1),
                          quadrature_name(g.axis2), e.variance_minor, e.variance_major,
                          e.angle / deg, integral);
  }
  return {pass && res.grids.size() == 4, detail};
}

// The conjectured stability condition is the sign of
// kappa_r kappa_p kappa_q - G_q^2 kappa_p + G_p^2 kappa_q.
Outcome criterion11() {
  std::mt19937_64 rng(8675309);
  std::uniform_real_distribution<double> kappa(1.0, 60.0), gp(0.0, 40.0), ratio(0.0, 1.2);
  const auto p0 = PhysicalParams::baseline();
  std::size_t marginal = 0, disagreements = 0, explained = 0;
  std::ofstream log("criterion11_counterexamples.csv");
  log << "kappa_r_MHz,kappa_p_MHz,kappa_q_MHz,G_p_G0,G_q_G0,conjecture_value,abscissa,"
         "is_stable,routh_hurwitz\n";
  std::vector<std::string> shown;
  for (int i = 0; i < 1000; ++i) {
    auto p = p0;
    p.kappa_r = from_MHz(kappa(rng));
    p.kappa_p = from_MHz(kappa(rng));
    p.kappa_q = from_MHz(kappa(rng));
    const double Gp = gp(rng) * constants::G0, Gq = ratio(rng) * Gp;
    const auto v = is_stable(build_reduced_drift(EffectiveCouplings::direct(Gp, Gq), p));
    if (v.verdict == Stability::Marginal) {
      ++marginal;
      continue;
    }
    const double conj = p.kappa_r * p.kappa_p * p.kappa_q - Gq * Gq * p.kappa_p + Gp * Gp * p.kappa_q;
    const bool rh = testing::routh_hurwitz_stable(
        testing::reduced_cubic(p.kappa_r, p.kappa_p, p.kappa_q, Gp, Gq));
    if (v.stable() == (conj > 0.0)) continue;
    ++disagreements;
    explained += v.stable() == rh;
    const std::string row =
        fmt::format("{:.6g},{:.6g},{:.6g},{:.6g},{:.6g},{:.6g},{:.6g},{},{}", to_MHz(p.kappa_r),
                    to_MHz(p.kappa_p), to_MHz(p.kappa_q), Gp / constants::G0, Gq / constants::G0,
                    conj, v.abscissa, v.stable(), rh);
    log << row << '\n';
    if (shown.size() < 5) shown.push_back(row);
  }
  for (const auto& row : shown) std::printf("  [11] counterexample %s\n", row.c_str());
  return {disagreements == 0,
          fmt::format("{} disagreements in 1000 samples ({} marginal excluded); {} of them agree "
                      "with the exact Routh-Hurwitz test; all listed in "
                      "criterion11_counterexamples.csv",
                      disagreements, marginal, explained)};
}

Outcome criterion12() {
  auto p = PhysicalParams::baseline();
  p.g_p = from_MHz(1e-3);
  p.g_q = from_MHz(2e-3);
  const double eth = threshold_amplitude(p);
  MeanFieldOptions opt;
  opt.frame = MeanFieldFrame::Comb;
  std::mt19937_64 rng(99);
  const auto random_init = [&](double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    return MeanAmplitudes{{nd(rng), nd(rng)}, {nd(rng), nd(rng)}, {nd(rng), nd(rng)}, {nd(rng), nd(rng)}};
  };
  const auto wrap = [](double a) { return std::remainder(a, 2 * std::numbers::pi); };

  p.drive_amplitude = 0.5 * eth;
  const auto below = steady_state(p);
  double worst_below = 0.0;
  for (int i = 0; i < 5; ++i) {
    const auto f = integrate_meanfield(p, random_init(100.0), 30.0 / p.kappa_r,
                                       default_meanfield_dt(p, MeanFieldFrame::Comb), opt)
                       .final_state;
    const double ref = std::abs(below.means.k);
    worst_below = std::max({worst_below, std::abs(f.k - below.means.k) / ref, std::abs(f.r) / ref,
                            std::abs(f.p) / ref, std::abs(f.q) / ref});
  }

  p.drive_amplitude = 2.0 * eth;
  const auto above = steady_state(p);
  double worst_mod = 0.0, worst_phase = 0.0;
  for (int i = 0; i < 5; ++i) {
    const auto f = integrate_meanfield(p, random_init(100.0), 1e-5,
                                       default_meanfield_dt(p, MeanFieldFrame::Comb), opt)
                       .final_state;
    for (Mode m : {Mode::k, Mode::r, Mode::p, Mode::q})
      worst_mod = std::max(worst_mod, std::abs(std::abs(f[m]) / std::abs(above.means[m]) - 1.0));
    const double sum = wrap(std::arg(f.p) + std::arg(f.q) - 2 * std::arg(f.k) - std::numbers::pi);
    const double diff = wrap(std::arg(f.p) - std::arg(f.q) - 2 * std::arg(f.r));
    worst_phase = std::max({worst_phase, std::abs(sum), std::abs(diff)});
  }
  const bool pass = worst_below < 1e-6 && worst_mod < 1e-4 && worst_phase < 1e-4;
  return {pass, fmt::format("below threshold max relative error {:.2e}; above threshold max "
                            "modulus error {:.2e}, max phase-constraint error {:.2e} rad "
                            "(5 random starts each)",
                            worst_below, worst_mod, worst_phase)};
}

Outcome criterion13() {
  std::size_t compared = 0;
  std::vector<std::string> differing;
  for (const auto& name : preset_names()) {
    const auto preset = name == "fig4" ? figure_preset(name, std::pair{1.0, 60.0}) : figure_preset(name);
    std::string first, second;
    if (const auto* spec = std::get_if<SweepSpec>(&preset)) {
      first = sweep_to_csv(run_sweep(*spec, 1));
      second = sweep_to_csv(run_sweep(*spec, worker_threads() + 2));
    } else {
      auto job = std::get<WignerJob>(preset);
      job.grid.resolution = 101;
      for (const auto& g : run_wigner(job).grids) first += wigner_grid_csv(g);
      for (const auto& g : run_wigner(job).grids) second += wigner_grid_csv(g);
    }
    ++compared;
    if (first != second) differing.push_back(name);
  }
  std::string list;
  for (const auto& d : differing) list += " " + d;
  return {differing.empty(),
          fmt::format("{} presets run twice (1 and {} threads), {} differ{}", compared,
                      worker_threads() + 2, differing.size(), list)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4,  criterion5,  criterion6, criterion7,
      criterion8, criterion9, criterion10, criterion11, criterion12, criterion13};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::stoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
    return 2;
  }
  int failures = 0;
  for (int c = 1; c <= static_cast<int>(criteria.size()); ++c) {
    if (only && c != only) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[c - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d: %s  %s  [%.2f s]\n", c, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
