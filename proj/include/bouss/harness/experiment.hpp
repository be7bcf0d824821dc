#pragma once
// Experiment orchestration: runs a configured experiment and writes its
// artifacts (CSV tables, JSON summary, gnuplot script) into one directory.

#include "bouss/diagnostics.hpp"
#include "bouss/dispersion.hpp"
#include "bouss/harness/config.hpp"
#include "bouss/solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace bouss::harness {

namespace fs = std::filesystem;
using json = nlohmann::json;

enum ExitCode { kPass = 0, kUsageError = 1, kRuntimeAbort = 2, kAcceptanceFailure = 3 };

/// Thresholds of the decay protocol.
struct DecayThresholds {
  double global_ratio = 2.0;      // sup norm <= 2 x initial
  double windowed_ratio = 0.5;    // final windowed norm <= 0.5 x running max
  double running_growth = 0.05;   // running integral grows < 5% over the last fifth
};

struct Outcome {
  int exit_code = kPass;
  std::string message;
  json summary;
  fs::path dir;
};

/// Output root: $BOUSS_OUTPUT_ROOT if set, else the working directory.
inline fs::path output_root() {
  if (const char* env = std::getenv("BOUSS_OUTPUT_ROOT"); env != nullptr && *env != '\0') return fs::path(env);
  return fs::current_path();
}

inline fs::path resolve_output(const ExperimentConfig& c, const fs::path& root) {
  const fs::path p(c.output_dir);
  return p.is_absolute() ? p : root / p;
}

// ---------------------------------------------------------------------------
// CSV

/// 17 significant digits; NaN is written as "nan".
inline std::string csv_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json json_real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// Frozen column order of diagnostics.csv.
inline const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = {
      "t",     "H",         "H_rate",   "P",        "I",       "J",         "Hcal",    "I_rate",
      "J_rate", "moving_I", "moving_J", "Q",        "SQ",      "NQ",        "NH",      "decomposition_residual",
      "E_loc", "E_rate",    "lambda",   "windowed", "restricted", "norm",   "res_H",   "res_I",
      "res_J", "res_E"};
  return cols;
}

inline std::vector<double> record_row(const DiagnosticsRecord& r) {
  return {r.t,      r.H,        r.H_rate,   r.P,    r.I,    r.J,  r.Hcal, r.I_rate, r.J_rate,
          r.moving_I, r.moving_J, r.Q,      r.SQ,   r.NQ,   r.NH, r.decomposition_residual,
          r.E_loc,  r.E_rate,   r.lambda,   r.windowed, r.restricted, r.norm, r.res_H, r.res_I,
          r.res_J,  r.res_E};
}

inline void write_csv(const fs::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_real(row[i]);
    out << "\n";
  }
}

/// Reads a numeric CSV with a header line; returns column name -> values.
inline std::map<std::string, std::vector<double>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing artifact " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty artifact " + path.string());
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  std::map<std::string, std::vector<double>> cols;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(ss, cell, ',') && i < names.size()) cols[names[i++]].push_back(std::strtod(cell.c_str(), nullptr));
  }
  return cols;
}

inline void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Plot scripts

inline std::string diagnostics_plot_script() {
  return R"(# gnuplot script: residual histories and virial terms from diagnostics.csv
set datafile separator ','
set key autotitle columnhead
set logscale y
set xlabel 't'
set terminal pngcairo size 1000,700
set output 'residuals.png'
plot 'diagnostics.csv' using 1:(abs(column('res_H'))) with lines, \
     '' using 1:(abs(column('res_I'))) with lines, \
     '' using 1:(abs(column('res_J'))) with lines, \
     '' using 1:(abs(column('res_E'))) with lines
unset logscale y
set output 'energy.png'
plot 'diagnostics.csv' using 1:'H' with lines, '' using 1:'P' with lines
)";
}

inline std::string decay_plot_script() {
  return R"(# gnuplot script: decay curves from decay.csv
set datafile separator ','
set key autotitle columnhead
set xlabel 't'
set terminal pngcairo size 1000,700
set output 'decay.png'
set multiplot layout 3,1
plot 'decay.csv' using 1:'windowed' with lines
plot 'decay.csv' using 1:'running' with lines
plot 'decay.csv' using 1:'norm' with lines, '' using 1:'restricted' with lines
unset multiplot
)";
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// ---------------------------------------------------------------------------
// Shared setup

inline State initial_state(const ExperimentConfig& c, const GridPtr& g) {
  if (c.initial == "gaussian") return gaussian_state(g, c.init_eps, c.init_width, c.init_beta, c.init_x0, c.t0);
  if (c.initial == "mode") return single_mode_state(g, c.init_eps, c.init_mode, c.init_beta, c.t0);
  if (c.initial == "random") return random_state(g, c.init_eps, c.init_modes, c.seed, c.t0);
  if (c.initial == "localized") return localized_random_state(g, c.init_eps, c.init_modes, c.seed, c.t0);
  return zero_state(g, c.t0);
}

inline json params_json(const AbcdParams& p) {
  json j = {{"a", p.a}, {"c", p.c}, {"a1", p.a1}, {"c1", p.c1}, {"provenance", p.provenance()}};
  if (p.origin)
    j["origin"] = {{"theta", p.origin->theta}, {"lambda", p.origin->lambda}, {"mu", p.origin->mu}, {"b", p.origin->b}};
  return j;
}

struct RegionInfo {
  bool in_region = false;
  json verdict;
  double alpha = 0.0;
  bool alpha_found = false;
};

inline RegionInfo classify(const AbcdParams& p, const std::optional<double>& alpha_cfg) {
  RegionInfo info;
  const auto v = satisfies_refined_dispersion(p.a, p.c, p.b());
  info.in_region = v.accepted;
  info.verdict = {{"accepted", v.accepted}, {"branch", branch_name(v.branch)}, {"margin", v.margin}};
  if (alpha_cfg) {
    info.alpha = *alpha_cfg;
  } else if (const auto w = find_admissible_alpha(p.a, p.c)) {
    info.alpha = w->alpha;
    info.alpha_found = true;
  }
  return info;
}

inline DiagnosticsSettings diagnostics_settings(const ExperimentConfig& c, double alpha) {
  DiagnosticsSettings s;
  s.alpha = alpha;
  s.fd_points = c.fd_points;
  s.fixed_lambda = c.fixed_lambda;
  if (c.weight == "schedule") s.weight = WeightMode::schedule;
  else if (c.weight == "fixed") s.weight = WeightMode::fixed;
  else if (c.weight == "none") s.weight = WeightMode::none;
  else s.weight = c.t0 >= kScheduleStart ? WeightMode::schedule : WeightMode::fixed;
  return s;
}

inline const char* weight_mode_name(WeightMode m) {
  switch (m) {
    case WeightMode::schedule: return "schedule";
    case WeightMode::fixed: return "fixed";
    case WeightMode::none: return "none";
  }
  return "?";
}

/// Runs the trajectory, feeding every `every`-th state to `on_snapshot` and
/// writing trajectory.csv when requested.
template <class OnSnapshot>
State simulate(const ExperimentConfig& c, const Model& m, State s, const fs::path& dir, OnSnapshot&& on_snapshot) {
  RunSettings rs;
  rs.dt = c.dt;
  rs.t_end = c.t_end;
  rs.cfl = c.cfl;
  rs.every = c.every;
  if (c.trajectory_every > 0) rs.every = std::gcd(c.every, c.trajectory_every);
  std::ofstream traj;
  if (c.trajectory_every > 0) {
    traj.open(dir / "trajectory.csv");
    traj << "t,x,eta,u\n";
  }
  const auto& x = m.grid()->nodes();
  const State final_state = run(m, std::move(s), rs, [&](const State& st, long step) {
    if (step % c.every == 0) on_snapshot(st);
    if (c.trajectory_every > 0 && step % c.trajectory_every == 0)
      for (Eigen::Index j = 0; j < x.size(); ++j)
        traj << csv_real(st.t) << "," << csv_real(x[j]) << "," << csv_real(st.eta[j]) << "," << csv_real(st.u[j]) << "\n";
    return true;
  });
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index j = 0; j < x.size(); ++j) rows.push_back({final_state.t, x[j], final_state.eta[j], final_state.u[j]});
  write_csv(dir / "final_state.csv", {"t", "x", "eta", "u"}, rows);
  return final_state;
}

// ---------------------------------------------------------------------------
// identity-suite

inline Outcome run_identity_suite(const ExperimentConfig& c, const fs::path& dir) {
  const AbcdParams p = c.params();
  const auto report = validate_generic_hamiltonian(p);
  if (!report.ok) throw ParamError("parameters violate " + report.violated.front());
  const RegionInfo region = classify(p, c.alpha);
  const GridPtr g = make_grid(c.L, c.N);
  const Model m(p, c.bottom, g);
  DiagnosticsPipeline pipe(m, diagnostics_settings(c, region.alpha));
  simulate(c, m, initial_state(c, g), dir, [&](const State& s) { pipe.push(s); });
  const auto& recs = pipe.finalize();

  double max_H = 0, max_I = 0, max_J = 0, max_E = 0, max_dec = 0, max_P = 0;
  std::size_t checked = 0;
  for (const auto& r : recs) {
    if (!std::isnan(r.decomposition_residual)) {
      const double scale = std::max({std::abs(r.Q), std::abs(r.SQ), std::abs(r.NQ), std::abs(r.NH),
                                     std::abs(r.I_rate), std::abs(region.alpha * r.J_rate)});
      if (scale > 0.0) max_dec = std::max(max_dec, r.decomposition_residual / scale);
    }
    if (std::isnan(r.res_H)) continue;
    ++checked;
    max_H = std::max(max_H, r.res_H / std::max(1.0, std::abs(r.H_rate)));
    if (!std::isnan(r.res_I)) max_I = std::max(max_I, r.res_I / std::max(1.0, std::abs(r.dI_dt())));
    if (!std::isnan(r.res_J)) max_J = std::max(max_J, r.res_J / std::max(1.0, std::abs(r.dJ_dt())));
    if (!std::isnan(r.res_E)) max_E = std::max(max_E, r.res_E / std::max(1.0, std::abs(r.E_rate)));
    if (c.bottom.is_flat()) max_P = std::max(max_P, std::abs(r.P_rate_fd));
  }
  double drift_H = 0, drift_P = 0;
  if (!recs.empty() && c.bottom.is_flat()) {
    const double H0 = recs.front().H, P0 = recs.front().P;
    for (const auto& r : recs) {
      drift_H = std::max(drift_H, std::abs(r.H - H0) / std::max(std::abs(H0), 1e-300));
      drift_P = std::max(drift_P, std::abs(r.P - P0) / std::max(std::abs(P0), 1e-300));
    }
    if (H0 == 0.0) drift_H = 0.0;
    if (P0 == 0.0) drift_P = 0.0;
  }

  std::vector<std::vector<double>> rows;
  for (const auto& r : recs) rows.push_back(record_row(r));
  write_csv(dir / "diagnostics.csv", diagnostics_columns(), rows);
  write_text(dir / "plot.gp", diagnostics_plot_script());

  const double tol = c.tolerance;
  const bool rates_ok = checked > 0 && max_H <= tol && max_I <= tol && max_J <= tol && max_E <= tol;
  const bool dec_ok = max_dec <= 1e-10;
  const bool flat_ok = !c.bottom.is_flat() || (drift_H <= tol && drift_P <= tol);
  Outcome o;
  o.dir = dir;
  o.summary = {{"kind", kind_name(c.kind)},
               {"params", params_json(p)},
               {"region", region.verdict},
               {"alpha", region.alpha},
               {"weight", weight_mode_name(pipe.settings().weight)},
               {"fd_stencil", c.fd_points},
               {"snapshots", recs.size()},
               {"checked_snapshots", checked},
               {"max_residual",
                {{"energy", max_H}, {"virial_I", max_I}, {"virial_J", max_J}, {"local_energy", max_E},
                 {"decomposition", max_dec}}},
               {"flat_bottom", c.bottom.is_flat()},
               {"drift", {{"H", drift_H}, {"P", drift_P}}},
               {"max_abs_dP_dt", max_P},
               {"tolerance", tol},
               {"pass", {{"rates", rates_ok}, {"decomposition", dec_ok}, {"conservation", flat_ok}}}};
  const bool pass = rates_ok && dec_ok && flat_ok;
  o.summary["passed"] = pass;
  o.exit_code = pass ? kPass : kAcceptanceFailure;
  o.message = pass ? "identity suite passed" : "identity suite failed";
  return o;
}

// ---------------------------------------------------------------------------
// decay-run and its report

inline json decay_summary_json(const DecaySummary& s, const DecayThresholds& th, bool in_region) {
  const bool g_ok = s.global_ratio <= th.global_ratio;
  const bool w_ok = s.windowed_ratio <= th.windowed_ratio;
  const bool r_ok = s.running_growth_tail < th.running_growth;
  json j = {{"norm0", s.norm0},
            {"sup_norm", s.sup_norm},
            {"global_ratio", s.global_ratio},
            {"windowed_final", s.windowed_final},
            {"windowed_max", s.windowed_max},
            {"windowed_ratio", s.windowed_ratio},
            {"running_final", s.running_final},
            {"running_growth_tail", s.running_growth_tail},
            {"checks", {{"global_bound", g_ok}, {"windowed_decay", w_ok}, {"running_converges", r_ok}}},
            {"in_region", in_region},
            {"flag", in_region ? "in-region" : "out-of-region"}};
  // Outside the refined region no decay is asserted.
  j["passed"] = in_region ? (g_ok && w_ok && r_ok) : true;
  return j;
}

inline Outcome run_decay(const ExperimentConfig& c, const fs::path& dir) {
  const AbcdParams p = c.params();
  const auto report = validate_generic_hamiltonian(p);
  if (!report.ok) throw ParamError("parameters violate " + report.violated.front());
  const RegionInfo region = classify(p, c.alpha);
  const GridPtr g = make_grid(c.L, c.N);
  const Model m(p, c.bottom, g);
  DiagnosticsSettings ds = diagnostics_settings(c, region.alpha);
  ds.weight = WeightMode::schedule;
  DiagnosticsPipeline pipe(m, ds);
  DecayMetrics decay;
  simulate(c, m, initial_state(c, g), dir, [&](const State& s) {
    pipe.push(s);
    decay.add(s);
  });
  const auto& recs = pipe.finalize();
  std::vector<std::vector<double>> rows;
  for (const auto& r : recs) rows.push_back(record_row(r));
  write_csv(dir / "diagnostics.csv", diagnostics_columns(), rows);
  rows.clear();
  for (const auto& d : decay.series()) rows.push_back({d.t, d.lambda, d.windowed, d.running, d.restricted, d.norm});
  write_csv(dir / "decay.csv", {"t", "lambda", "windowed", "running", "restricted", "norm"}, rows);
  write_text(dir / "plot.gp", decay_plot_script());

  Outcome o;
  o.dir = dir;
  const json dj = decay_summary_json(summarize_decay(decay.series()), DecayThresholds{}, region.in_region);
  o.summary = {{"kind", kind_name(c.kind)}, {"params", params_json(p)}, {"region", region.verdict},
               {"alpha", region.alpha},     {"decay", dj},              {"passed", dj["passed"]}};
  const bool pass = dj["passed"].get<bool>();
  o.exit_code = pass ? kPass : kAcceptanceFailure;
  o.message = region.in_region ? (pass ? "decay run passed" : "decay run failed") : "out-of-region run, no decay asserted";
  return o;
}

/// Recomputes the decay statistics from a finished decay-run directory and
/// writes decay_report.json next to them.
inline Outcome decay_report(const fs::path& dir, const DecayThresholds& th = {}) {
  const fs::path summary_path = dir / "summary.json";
  std::ifstream in(summary_path);
  if (!in) throw std::runtime_error("missing artifact " + summary_path.string());
  const json summary = json::parse(in);
  if (summary.value("kind", "") != kind_name(ExperimentKind::decay_run))
    throw std::runtime_error(dir.string() + " is not a decay-run directory");
  const bool in_region = summary.at("region").at("accepted").get<bool>();
  const auto cols = read_csv(dir / "decay.csv");
  std::vector<DecaySample> series;
  const auto& t = cols.at("t");
  for (std::size_t i = 0; i < t.size(); ++i) {
    DecaySample d;
    d.t = t[i];
    d.lambda = cols.at("lambda")[i];
    d.windowed = cols.at("windowed")[i];
    d.running = cols.at("running")[i];
    d.restricted = cols.at("restricted")[i];
    d.norm = cols.at("norm")[i];
    series.push_back(d);
  }
  const DecaySummary s = summarize_decay(series);
  double envelope_drops = 0;  // count of snapshots where the running max of windowed does not increase
  double run_max = 0;
  for (const auto& d : series) {
    if (d.windowed <= run_max) envelope_drops += 1;
    run_max = std::max(run_max, d.windowed);
  }
  Outcome o;
  o.dir = dir;
  o.summary = decay_summary_json(s, th, in_region);
  o.summary["snapshots"] = series.size();
  o.summary["monotone_envelope_fraction"] = series.empty() ? 0.0 : envelope_drops / static_cast<double>(series.size());
  o.summary["thresholds"] = {{"global_ratio", th.global_ratio}, {"windowed_ratio", th.windowed_ratio},
                             {"running_growth", th.running_growth}};
  write_json(dir / "decay_report.json", o.summary);
  const bool pass = o.summary["passed"].get<bool>();
  o.exit_code = pass ? kPass : kAcceptanceFailure;
  o.message = in_region ? (pass ? "decay report passed" : "decay report failed") : "out-of-region: report emitted without decay assertion";
  return o;
}

// ---------------------------------------------------------------------------
// region-map

struct RegionCell {
  double a, c;
  RegionVerdict verdict;
  std::optional<AlphaWitness> alpha;
};

inline std::vector<RegionCell> region_map(double a_min, double a_max, double c_min, double c_max, double step,
                                          double b) {
  const long na = std::lround(std::floor((a_max - a_min) / step + 1e-9)) + 1;
  const long nc = std::lround(std::floor((c_max - c_min) / step + 1e-9)) + 1;
  std::vector<RegionCell> cells(static_cast<std::size_t>(na * nc));
  auto fill_rows = [&](long i0, long i1) {
    for (long i = i0; i < i1; ++i)
      for (long j = 0; j < nc; ++j) {
        const double a = a_min + step * static_cast<double>(i);
        const double c = c_min + step * static_cast<double>(j);
        cells[static_cast<std::size_t>(i * nc + j)] = {a, c, satisfies_refined_dispersion(a, c, b),
                                                       find_admissible_alpha(a, c)};
      }
  };
  const long workers = std::max(1L, std::min<long>(na, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  const long chunk = (na + workers - 1) / workers;
  for (long w = 0; w < workers; ++w) {
    const long i0 = w * chunk, i1 = std::min(na, i0 + chunk);
    if (i0 < i1) jobs.push_back(std::async(std::launch::async, fill_rows, i0, i1));
  }
  for (auto& j : jobs) j.get();
  return cells;
}

inline Outcome run_region_map(const ExperimentConfig& c, const fs::path& dir) {
  const auto cells = region_map(c.a_min, c.a_max, c.c_min, c.c_max, c.map_step, c.map_b);
  std::ofstream out(dir / "region_map.csv");
  if (!out) throw std::runtime_error("cannot write region_map.csv");
  out << "a,c,accepted,branch,margin,alpha\n";
  std::size_t accepted = 0;
  const RegionCell* probe = nullptr;
  double best = 1e300;
  for (const auto& cell : cells) {
    out << csv_real(cell.a) << "," << csv_real(cell.c) << "," << (cell.verdict.accepted ? 1 : 0) << ","
        << branch_name(cell.verdict.branch) << "," << csv_real(cell.verdict.margin) << ","
        << (cell.alpha ? csv_real(cell.alpha->alpha) : "") << "\n";
    accepted += cell.verdict.accepted ? 1 : 0;
    const double d = std::hypot(cell.a + 1.0 / 48.0, cell.c + 1.0 / 48.0);
    if (d < best) {
      best = d;
      probe = &cell;
    }
  }
  Outcome o;
  o.dir = dir;
  o.summary = {{"kind", kind_name(c.kind)}, {"cells", cells.size()}, {"accepted", accepted}, {"b", c.map_b}};
  if (probe)
    o.summary["nearest_to_a_c_minus_1_48"] = {{"a", probe->a},
                                              {"c", probe->c},
                                              {"accepted", probe->verdict.accepted},
                                              {"branch", branch_name(probe->verdict.branch)}};
  o.summary["passed"] = true;
  o.message = std::to_string(cells.size()) + " cells classified";
  return o;
}

// ---------------------------------------------------------------------------
// hypothesis-audit

inline json hypothesis_json(const HypothesisReport& r) {
  return {{"t_max", r.t_max},
          {"C", r.C},
          {"epsilon", r.epsilon},
          {"w2inf_t_h1_x", r.w2inf_h1},
          {"l1_t_h1_x_of_h_t", r.l1_ht_h1},
          {"l1_t_h1_x_of_h_tt", r.l1_htt_h1},
          {"l1_t_linf_x_of_h_x", r.l1_hx_linf},
          {"smallness_sum", r.smallness_sum},
          {"smallness_ok", r.smallness_ok},
          {"slope_ok", r.slope_ok},
          {"passed", r.pass}};
}

inline Outcome run_audit(const ExperimentConfig& c, const fs::path& dir) {
  const GridPtr g = make_grid(c.L, c.N);
  const HypothesisReport r = hypothesis_report(c.bottom, g, c.audit_t_max, c.audit_C, c.audit_eps);
  Outcome o;
  o.dir = dir;
  o.summary = hypothesis_json(r);
  o.summary["kind"] = kind_name(c.kind);
  o.summary["preset"] = preset_name(c.bottom.preset);
  o.exit_code = r.pass ? kPass : kAcceptanceFailure;
  o.message = r.pass ? "bottom hypotheses hold" : "bottom hypotheses violated";
  return o;
}

// ---------------------------------------------------------------------------

/// Runs one experiment, writing artifacts and summary.json under
/// root/output_dir. Runtime aborts are reported in the summary with exit 2.
inline Outcome run_experiment(const ExperimentConfig& c, const fs::path& root = output_root()) {
  const fs::path dir = resolve_output(c, root);
  fs::create_directories(dir);
  write_text(dir / "config.ini", serialize_config(c));
  Outcome o;
  try {
    switch (c.kind) {
      case ExperimentKind::identity_suite: o = run_identity_suite(c, dir); break;
      case ExperimentKind::decay_run: o = run_decay(c, dir); break;
      case ExperimentKind::region_map: o = run_region_map(c, dir); break;
      case ExperimentKind::hypothesis_audit: o = run_audit(c, dir); break;
    }
  } catch (const RunAborted& e) {
    o.dir = dir;
    o.exit_code = kRuntimeAbort;
    o.message = std::string("run aborted (") + abort_name(e.reason()) + "): " + e.what();
    o.summary = {{"kind", kind_name(c.kind)},
                 {"aborted", true},
                 {"reason", abort_name(e.reason())},
                 {"time", json_real(e.time())},
                 {"message", e.what()},
                 {"passed", false}};
  }
  o.summary["seed"] = c.seed;
  o.summary["exit_code"] = o.exit_code;
  write_json(dir / "summary.json", o.summary);
  return o;
}

}  // namespace bouss::harness
