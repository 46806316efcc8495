#include "entbus/run.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace entbus {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double require_number(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    throw config_error("config: missing or non-numeric field '" + key + "'");
  return j[key].get<double>();
}

}  // namespace

json schedule_to_json(const DetuningSchedule& s) {
  json j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Zero>) {
          j["variant"] = "zero";
        } else if constexpr (std::is_same_v<T, Constant>) {
          j["variant"] = "constant";
          j["amplitude"] = v.amplitude;
        } else if constexpr (std::is_same_v<T, Heaviside>) {
          j["variant"] = "heaviside";
          j["amplitude"] = v.amplitude;
          j["tau0"] = v.tau0;
        } else if constexpr (std::is_same_v<T, Sigmoid>) {
          j["variant"] = "sigmoid";
          j["amplitude"] = v.amplitude;
          j["b"] = v.b;
          j["tau0"] = v.tau0;
        } else if constexpr (std::is_same_v<T, SquareWave>) {
          j["variant"] = "squarewave";
          j["amplitude"] = v.amplitude;
          j["period"] = v.period;
          j["edges"] = v.edges;
        } else if constexpr (std::is_same_v<T, Pulse>) {
          j["variant"] = "pulse";
          j["amplitude"] = v.amplitude;
          j["tau0"] = v.tau0;
          j["width"] = v.width;
        } else {  // PiecewiseTable
          j["variant"] = "table";
          j["taus"] = v.taus;
          j["values"] = v.values;
        }
      },
      s);
  return j;
}

DetuningSchedule schedule_from_json(const json& j) {
  if (!j.is_object() || !j.contains("variant"))
    throw config_error("schedule: expected object with 'variant'");
  const std::string v = j["variant"].get<std::string>();
  if (v == "zero") return Zero{};
  if (v == "constant") return Constant{require_number(j, "amplitude")};
  if (v == "heaviside")
    return Heaviside{require_number(j, "amplitude"), require_number(j, "tau0")};
  if (v == "sigmoid")
    return Sigmoid{require_number(j, "amplitude"), require_number(j, "b"),
                   require_number(j, "tau0")};
  if (v == "squarewave") {
    SquareWave sw{require_number(j, "amplitude"), require_number(j, "period"), 1};
    sw.edges = static_cast<int>(require_number(j, "edges"));
    if (sw.edges < 1) throw config_error("schedule: squarewave edges must be >= 1");
    return sw;
  }
  if (v == "pulse")
    return Pulse{require_number(j, "amplitude"), require_number(j, "tau0"),
                 require_number(j, "width")};
  if (v == "table") {
    PiecewiseTable t;
    t.taus = j.at("taus").get<std::vector<double>>();
    t.values = j.at("values").get<std::vector<double>>();
    if (t.taus.size() != t.values.size())
      throw config_error("schedule: table taus/values size mismatch");
    for (std::size_t i = 1; i < t.taus.size(); ++i)
      if (t.taus[i] <= t.taus[i - 1])
        throw config_error("schedule: table taus must be strictly increasing");
    return t;
  }
  throw config_error("schedule: unknown variant '" + v + "'");
}

namespace {

DickeState named_initial(const std::string& name) {
  if (name == "up") return {1, 0, 0, 0, {0, 0}};
  if (name == "s") return {0, 1, 0, 0, {0, 0}};
  if (name == "a") return {0, 0, 1, 0, {0, 0}};
  if (name == "down") return {0, 0, 0, 1, {0, 0}};
  if (name == "mixed") return {0.25, 0.25, 0.25, 0.25, {0, 0}};
  throw config_error("initial: unknown state name '" + name + "'");
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw config_error("run config: expected JSON object");
  RunConfig c;
  if (j.contains("model")) c.model = j["model"].get<std::string>();
  if (c.model != "bloch" && c.model != "reduced" && c.model != "full")
    throw config_error("run config: model must be bloch|reduced|full");
  if (j.contains("initial")) {
    if (j["initial"].is_string()) {
      c.initial_name = j["initial"].get<std::string>();
      c.initial = named_initial(c.initial_name);
    } else {
      const json& i = j["initial"];
      c.initial_name = "";
      c.initial = DickeState{require_number(i, "p_up"), require_number(i, "p_s"),
                             require_number(i, "p_a"), require_number(i, "p_down"),
                             complexd(i.value("re_csa", 0.0), i.value("im_csa", 0.0))};
    }
  }
  if (j.contains("schedule")) c.schedule = schedule_from_json(j["schedule"]);
  if (j.contains("schedule2")) c.schedule2 = schedule_from_json(j["schedule2"]);
  if (j.contains("params")) {
    const json& p = j["params"];
    c.params.g = p.value("g_over_kappa", c.params.g);
    c.params.gamma = p.value("gamma_over_kappa", c.params.gamma);
    c.params.nbar = p.value("nbar", c.params.nbar);
    c.params.kappa = 1.0;
  }
  c.params.validate();
  if (j.contains("tau_end")) c.tau_end = require_number(j, "tau_end");
  if (j.contains("dtau")) c.dtau = require_number(j, "dtau");
  if (j.contains("sample_stride")) c.sample_stride = j["sample_stride"].get<long>();
  if (j.contains("postselect")) c.do_postselect = j["postselect"].get<bool>();
  if (j.contains("nmax")) c.nmax = j["nmax"].get<int>();
  if (!(c.tau_end > 0) || !(c.dtau > 0))
    throw config_error("run config: tau_end and dtau must be positive");
  if (c.sample_stride < 1) throw config_error("run config: sample_stride must be >= 1");
  if (c.nmax < 1) throw config_error("run config: nmax must be >= 1");
  return c;
}

json run_config_to_json(const RunConfig& c) {
  json j;
  j["model"] = c.model;
  if (!c.initial_name.empty()) {
    j["initial"] = c.initial_name;
  } else {
    j["initial"] = {{"p_up", c.initial.p_up},   {"p_s", c.initial.p_s},
                    {"p_a", c.initial.p_a},     {"p_down", c.initial.p_down},
                    {"re_csa", c.initial.c_sa.real()},
                    {"im_csa", c.initial.c_sa.imag()}};
  }
  j["schedule"] = schedule_to_json(c.schedule);
  if (c.schedule2) j["schedule2"] = schedule_to_json(*c.schedule2);
  j["params"] = {{"g_over_kappa", c.params.g},
                 {"gamma_over_kappa", c.params.gamma},
                 {"nbar", c.params.nbar}};
  j["tau_end"] = c.tau_end;
  j["dtau"] = c.dtau;
  j["sample_stride"] = c.sample_stride;
  j["postselect"] = c.do_postselect;
  if (c.model == "full") j["nmax"] = c.nmax;
  return j;
}

RunResult run(const RunConfig& c) {
  RunResult out;
  auto delta_at = [&](double tau) {
    double d = eval_schedule(c.schedule, tau);
    if (c.schedule2) d -= eval_schedule(*c.schedule2, tau);
    return d;
  };

  if (c.model == "bloch") {
    if (c.schedule2)
      throw config_error("run: schedule2 is only supported for model=reduced");
    Trajectory traj = integrate(c.initial, c.schedule, c.params, c.tau_end,
                                c.dtau, c.sample_stride);
    out.traj.schedule = traj.schedule;
    out.traj.params = traj.params;
    out.traj.taus = traj.taus;
    out.traj.states.reserve(traj.states.size());
    for (const DickeState& d : traj.states)
      out.traj.states.push_back(dicke_to_computational(d));
  } else if (c.model == "reduced") {
    const Eigen::Matrix4cd rho0 = dicke_to_computational(c.initial).rho;
    out.traj = c.schedule2
                   ? integrate_reduced(rho0, c.schedule, *c.schedule2, c.params,
                                       c.tau_end, c.dtau, c.sample_stride)
                   : integrate_reduced(rho0, c.schedule, c.params, c.tau_end,
                                       c.dtau, c.sample_stride);
  } else {  // full
    if (c.schedule2)
      throw config_error("run: schedule2 is only supported for model=reduced");
    const CompositeState c0 =
        composite_initial(c.nmax, dicke_to_computational(c.initial).rho, c.params);
    out.traj = integrate_full(c0, c.schedule, c.params, c.tau_end, c.dtau,
                              c.sample_stride);
  }

  out.records.reserve(out.traj.taus.size());
  for (std::size_t i = 0; i < out.traj.taus.size(); ++i)
    out.records.push_back(
        metrics_of(out.traj.taus[i], out.traj.states[i], delta_at(out.traj.taus[i])));
  if (c.do_postselect) out.post = postselect_sweep(out.traj);
  return out;
}

std::string render_csv(const RunResult& r, bool with_postselect) {
  std::ostringstream os;
  os << "tau,p_up,p_s,p_a,p_down,re_csa,im_csa,concurrence_clamped,"
        "concurrence_relaxed,f_s,f_a,negativity,purity,delta_value";
  if (with_postselect)
    os << ",postselected.success_prob,postselected.concurrence_clamped,"
          "postselected.concurrence_relaxed,postselected.f_s";
  os << "\n";
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const MetricRecord& m = r.records[i];
    os << fmt17(m.tau) << ',' << fmt17(m.p_up) << ',' << fmt17(m.p_s) << ','
       << fmt17(m.p_a) << ',' << fmt17(m.p_down) << ',' << fmt17(m.re_csa) << ','
       << fmt17(m.im_csa) << ',' << fmt17(m.concurrence_clamped) << ','
       << fmt17(m.concurrence_relaxed) << ',' << fmt17(m.f_s) << ','
       << fmt17(m.f_a) << ',' << fmt17(m.negativity) << ',' << fmt17(m.purity)
       << ',' << fmt17(m.delta_value);
    if (with_postselect) {
      if (i < r.post.size() && r.post[i].result) {
        const PostselectionResult& p = *r.post[i].result;
        os << ',' << fmt17(p.success_prob) << ',' << fmt17(p.concurrence.clamped)
           << ',' << fmt17(p.concurrence.relaxed) << ',' << fmt17(p.f_s_post);
      } else {
        os << ",nan,nan,nan,nan";
      }
    }
    os << "\n";
  }
  return os.str();
}

json render_json(const RunResult& r, bool with_postselect) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const MetricRecord& m = r.records[i];
    json row = {{"tau", m.tau},
                {"p_up", m.p_up},
                {"p_s", m.p_s},
                {"p_a", m.p_a},
                {"p_down", m.p_down},
                {"re_csa", m.re_csa},
                {"im_csa", m.im_csa},
                {"concurrence_clamped", m.concurrence_clamped},
                {"concurrence_relaxed", m.concurrence_relaxed},
                {"f_s", m.f_s},
                {"f_a", m.f_a},
                {"negativity", m.negativity},
                {"purity", m.purity},
                {"delta_value", m.delta_value}};
    if (with_postselect && i < r.post.size()) {
      if (r.post[i].result) {
        const PostselectionResult& p = *r.post[i].result;
        row["postselected"] = {{"success_prob", p.success_prob},
                               {"concurrence_clamped", p.concurrence.clamped},
                               {"concurrence_relaxed", p.concurrence.relaxed},
                               {"f_s", p.f_s_post}};
      } else {
        row["postselected"] = nullptr;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------

const std::vector<Preset>& preset_catalog() {
  static const std::vector<Preset> presets = [] {
    auto base = [](json sched, double tau_end) {
      return json{{"model", "bloch"},
                  {"initial", "up"},
                  {"schedule", std::move(sched)},
                  {"params", {{"g_over_kappa", 0.3}, {"gamma_over_kappa", 0.0}, {"nbar", 0.0}}},
                  {"tau_end", tau_end},
                  {"dtau", 1e-3},
                  {"sample_stride", 100},
                  {"postselect", false}};
    };
    json hs = {{"variant", "heaviside"}, {"amplitude", 10.0}, {"tau0", 2.5}};
    std::vector<Preset> v;
    v.push_back({"fig2",
                 "Resonant collective decay of |11>: symmetric-state population "
                 "peaks near tau=2.5, no entanglement at any time.",
                 base({{"variant", "zero"}}, 25.0)});
    v.push_back({"fig3",
                 "Detuning step A=10 switched on at tau0=2.5: steady-state "
                 "entanglement above 0.3.",
                 base(hs, 25.0)});
    {
      json j = base(hs, 30.0);
      j["schedule"]["tau0"] = 1.5;
      v.push_back({"fig3-tau0-1.5", "Step switched on early (tau0=1.5): smaller steady concurrence.", j});
      j["schedule"]["tau0"] = 3.5;
      v.push_back({"fig3-tau0-3.5", "Step switched on late (tau0=3.5): smaller steady concurrence.", j});
    }
    {
      json j = base(hs, 40.0);
      j["schedule"]["tau0"] = 25.0;
      v.push_back({"fig3-tau0-25", "Step applied after the state has decayed (tau0=25): no entanglement.", j});
    }
    v.push_back({"fig4",
                 "Symmetric/antisymmetric fidelities stabilized by the detuning step.",
                 base(hs, 25.0)});
    v.push_back({"fig5",
                 "Smooth sigmoid edge (b=3) instead of a sharp step: nearly "
                 "identical steady entanglement.",
                 base({{"variant", "sigmoid"}, {"amplitude", 10.0}, {"b", 3.0}, {"tau0", 2.5}}, 25.0)});
    v.push_back({"fig6",
                 "Square-wave detuning (period 2.5, 16 edges): entanglement never forms.",
                 base({{"variant", "squarewave"}, {"amplitude", 10.0}, {"period", 2.5}, {"edges", 16}}, 45.0)});
    {
      json j = base(hs, 100.0);
      j["params"]["gamma_over_kappa"] = 1e-3;
      j["params"]["nbar"] = 0.06;
      j["postselect"] = true;
      v.push_back({"fig7-mod",
                   "Postselection (qubits not in |00>) along the modulated run "
                   "with spontaneous emission and a thermal bus.",
                   j});
      j["schedule"] = {{"variant", "zero"}};
      v.push_back({"fig7-unmod",
                   "Postselection along the unmodulated run with spontaneous "
                   "emission and a thermal bus.",
                   j});
    }
    {
      json j = base(hs, 100.0);
      j["params"]["gamma_over_kappa"] = 1e-3;
      j["params"]["nbar"] = 0.06;
      v.push_back({"fig8",
                   "Detuning step with gamma=1e-3 kappa and nbar=0.06: slowly "
                   "decaying entanglement out to tau=100.",
                   j});
    }
    v.push_back({"decay25",
                 "Benchmark: resonant decay ground-state population at tau=25 "
                 "(0.999501).",
                 base({{"variant", "zero"}}, 25.0)});
    {
      json j = base(hs, 25.0);
      j["model"] = "full";
      j["params"]["g_over_kappa"] = 0.1;
      j["nmax"] = 8;
      j["dtau"] = 2e-3;
      j["sample_stride"] = 50;
      v.push_back({"oracle-g01",
                   "Cross-check: full cavity+qubits model at g=0.1 kappa versus "
                   "the eliminated-cavity equations.",
                   j});
    }
    return v;
  }();
  return presets;
}

RunConfig preset_config(const std::string& name) {
  for (const Preset& p : preset_catalog())
    if (p.name == name) return parse_run_config(p.config);
  throw config_error("unknown preset '" + name + "'");
}

// ---------------------------------------------------------------------------

SweepConfig parse_sweep_config(const json& j) {
  if (!j.is_object() || !j.contains("base") || !j.contains("axes"))
    throw config_error("sweep config: need 'base' and 'axes'");
  SweepConfig c;
  c.base = j["base"];
  parse_run_config(c.base);  // validate early
  for (const json& a : j["axes"]) {
    SweepAxis axis;
    axis.field = a.at("field").get<std::string>();
    for (const json& v : a.at("values")) axis.values.push_back(v);
    if (axis.values.empty()) throw config_error("sweep config: empty axis values");
    c.axes.push_back(std::move(axis));
  }
  if (c.axes.empty()) throw config_error("sweep config: axes must be non-empty");
  c.steady_window = j.value("steady_window", c.steady_window);
  c.steady_tol = j.value("steady_tol", c.steady_tol);
  std::size_t total = 1;
  for (const SweepAxis& a : c.axes) total *= a.values.size();
  if (total > c.max_points) throw config_error("sweep config: grid too large");
  return c;
}

namespace {

json::json_pointer pointer_of(const std::string& dotted) {
  std::string p = "/" + dotted;
  for (char& ch : p)
    if (ch == '.') ch = '/';
  return json::json_pointer(p);
}

// Steady check on the sampled metric trajectory: max |d/dtau| of the
// populations and concurrence over the trailing window, by finite differences.
bool steady_reached(const std::vector<MetricRecord>& recs, double window,
                    double tol) {
  if (recs.size() < 2) return false;
  const double t_end = recs.back().tau;
  double max_rate = 0.0;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i].tau < t_end - window) continue;
    const double dt = recs[i].tau - recs[i - 1].tau;
    if (dt <= 0.0) continue;
    for (auto sel : {&MetricRecord::p_up, &MetricRecord::p_s, &MetricRecord::p_a,
                     &MetricRecord::p_down, &MetricRecord::concurrence_relaxed})
      max_rate = std::max(max_rate,
                          std::abs(recs[i].*sel - recs[i - 1].*sel) / dt);
  }
  return max_rate < tol;
}

}  // namespace

std::string run_sweep(const SweepConfig& c) {
  std::ostringstream os;
  for (const SweepAxis& a : c.axes) os << a.field << ',';
  os << "steady_reached,tau,p_up,p_s,p_a,p_down,re_csa,im_csa,"
        "concurrence_clamped,concurrence_relaxed,f_s,f_a,negativity,purity,"
        "delta_value";
  const bool with_post = c.base.value("postselect", false);
  if (with_post)
    os << ",postselected.success_prob,postselected.concurrence_clamped,"
          "postselected.concurrence_relaxed,postselected.f_s";
  os << ",error\n";

  std::vector<std::size_t> idx(c.axes.size(), 0);
  bool done = false;
  while (!done) {
    json doc = c.base;
    for (std::size_t k = 0; k < c.axes.size(); ++k)
      doc[pointer_of(c.axes[k].field)] = c.axes[k].values[idx[k]];
    for (std::size_t k = 0; k < c.axes.size(); ++k) {
      const json& v = c.axes[k].values[idx[k]];
      if (v.is_number())
        os << fmt17(v.get<double>()) << ',';
      else
        os << v.dump() << ',';
    }
    try {
      const RunConfig rc = parse_run_config(doc);
      const RunResult rr = run(rc);
      const bool steady = steady_reached(rr.records, c.steady_window, c.steady_tol);
      const MetricRecord& m = rr.records.back();
      os << (steady ? 1 : 0) << ',' << fmt17(m.tau) << ',' << fmt17(m.p_up) << ','
         << fmt17(m.p_s) << ',' << fmt17(m.p_a) << ',' << fmt17(m.p_down) << ','
         << fmt17(m.re_csa) << ',' << fmt17(m.im_csa) << ','
         << fmt17(m.concurrence_clamped) << ',' << fmt17(m.concurrence_relaxed)
         << ',' << fmt17(m.f_s) << ',' << fmt17(m.f_a) << ','
         << fmt17(m.negativity) << ',' << fmt17(m.purity) << ','
         << fmt17(m.delta_value);
      if (with_post) {
        if (!rr.post.empty() && rr.post.back().result) {
          const PostselectionResult& p = *rr.post.back().result;
          os << ',' << fmt17(p.success_prob) << ',' << fmt17(p.concurrence.clamped)
             << ',' << fmt17(p.concurrence.relaxed) << ',' << fmt17(p.f_s_post);
        } else {
          os << ",nan,nan,nan,nan";
        }
      }
      os << ",\n";
    } catch (const std::exception& e) {
      // Record the failure and continue with the remaining grid points.
      os << "nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan";
      if (with_post) os << ",nan,nan,nan,nan";
      std::string msg = e.what();
      for (char& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
      os << ',' << msg << "\n";
    }
    // Advance the row-major multi-index (last axis fastest).
    for (std::size_t k = c.axes.size(); k-- > 0;) {
      if (++idx[k] < c.axes[k].values.size()) break;
      idx[k] = 0;
      if (k == 0) done = true;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

CompareReport compare_runs(const RunConfig& a, const RunConfig& b,
                           const std::string& metric, double threshold,
                           double tau_min) {
  const RunResult ra = run(a);
  const RunResult rb = run(b);
  if (ra.records.size() != rb.records.size())
    throw config_error("compare: runs have different sample grids");
  for (std::size_t i = 0; i < ra.records.size(); ++i)
    if (std::abs(ra.records[i].tau - rb.records[i].tau) > 1e-12)
      throw config_error("compare: runs have different sample grids");

  const std::vector<std::pair<std::string, double MetricRecord::*>> fields = {
      {"p_up", &MetricRecord::p_up},
      {"p_s", &MetricRecord::p_s},
      {"p_a", &MetricRecord::p_a},
      {"p_down", &MetricRecord::p_down},
      {"re_csa", &MetricRecord::re_csa},
      {"im_csa", &MetricRecord::im_csa},
      {"concurrence_clamped", &MetricRecord::concurrence_clamped},
      {"concurrence_relaxed", &MetricRecord::concurrence_relaxed},
      {"f_s", &MetricRecord::f_s},
      {"f_a", &MetricRecord::f_a},
      {"negativity", &MetricRecord::negativity},
      {"purity", &MetricRecord::purity}};

  CompareReport rep;
  bool metric_found = false;
  std::ostringstream os;
  os << "comparison over tau >= " << tau_min << " ("
     << ra.records.size() << " samples)\n";
  for (const auto& [name, sel] : fields) {
    double d = 0.0;
    for (std::size_t i = 0; i < ra.records.size(); ++i) {
      if (ra.records[i].tau < tau_min) continue;
      d = std::max(d, std::abs(ra.records[i].*sel - rb.records[i].*sel));
    }
    rep.max_diff[name] = d;
    os << "  max|diff| " << name << " = " << fmt17(d) << "\n";
    if (name == metric) {
      metric_found = true;
      rep.threshold_metric_diff = d;
    }
  }
  if (!metric_found) throw config_error("compare: unknown metric '" + metric + "'");
  rep.pass = !(threshold >= 0.0) || rep.threshold_metric_diff <= threshold;
  if (threshold >= 0.0)
    os << "threshold " << fmt17(threshold) << " on " << metric << ": "
       << (rep.pass ? "pass" : "FAIL") << "\n";
  rep.text = os.str();
  return rep;
}

}  // namespace entbus
