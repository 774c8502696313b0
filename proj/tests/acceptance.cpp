// Acceptance run: one line per criterion with the measured value, its
// bound and a verdict. Exits nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tvjko/analytic_reference.hpp"
#include "tvjko/flow_driver.hpp"
#include "tvjko/jko_solver.hpp"
#include "tvjko/oracles.hpp"
#include "tvjko/property_suite.hpp"

using namespace tvjko;

namespace {

struct Line {
  int id;
  std::string what;
  bool passed;
  std::string detail;
};

std::vector<Line> lines;

void record(int id, const std::string& what, bool passed, const std::string& detail) {
  lines.push_back({id, what, passed, detail});
  std::printf("[%s] %2d %-28s %s\n", passed ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct CertTally {
  int solves = 0;
  int failures = 0;
  double worst_z = 0.0, worst_comp = 0.0, worst_res = 0.0, worst_align = 0.0;
  void add(const DualCertificate& c, bool converged) {
    if (!converged) return;
    ++solves;
    worst_z = std::max(worst_z, c.max_abs_z);
    worst_comp = std::max(worst_comp, c.complementarity);
    worst_res = std::max(worst_res, c.residual_el);
    worst_align = std::max(worst_align, c.jump_alignment);
    if (c.max_abs_z > 1.0 + 1e-4 || c.complementarity > 1e-6 || c.residual_el > 1e-6 || c.jump_alignment > 1e-3) {
      ++failures;
    }
  }
  void add(const StepDiagnostics& d) {
    DualCertificate c;
    c.max_abs_z = d.max_abs_z;
    c.complementarity = d.complementarity;
    c.residual_el = d.el_residual;
    c.jump_alignment = d.jump_alignment;
    add(c, d.converged);
  }
};

// Suite cases whose name starts with `prefix`; skips are reported apart.
void suite_family(int id, const std::string& what, const SuiteReport& report,
                  const std::function<bool(const std::string&)>& select) {
  int n = 0, failed = 0, skipped = 0;
  double worst = 1e300;
  for (const auto& c : report.cases) {
    if (!select(c.name)) continue;
    if (c.verdict == "skip") {
      ++skipped;
      continue;
    }
    ++n;
    if (c.verdict != "pass") ++failed;
    worst = std::min(worst, c.margin);
  }
  record(id, what, n > 0 && failed == 0,
         fmt("%.0f cases, %.0f failed, %.0f skipped, smallest margin %.3g", n, failed, skipped, worst));
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

int main() {
  CertTally tally;
  using clock = std::chrono::steady_clock;

  {  // 1
    const auto t0 = clock::now();
    const GridSpec g(-4.0, 4.0, 1024);
    const auto pair = analytic_profiles(UniformProfile{1.0, 1.0 / 3.0}, g);
    JkoConfig c;
    c.tau = 1.0 / 3.0;
    const auto r = jko_step(pair.rho0, c);
    const double secs = seconds_since(t0);
    tally.add(r.certificate, r.converged);
    const double l1 = l1_distance(r.rho1, pair.rho1);
    record(1, "uniform step", r.converged && l1 <= 3.0 * g.dx() && secs <= 30.0,
           fmt("L1 %.3g <= %.3g, alpha1 %.6f, %.1f s", l1, 3.0 * g.dx(), pair.jump_location, secs));
  }

  std::vector<double> weak;
  {  // 2 and 11 share the uniform flow at N = 2048
    const GridSpec g(-4.0, 4.0, 2048);
    const auto rho0 = analytic_profiles(UniformProfile{1.0, 1.0}, g).rho0;
    for (double tau : {4e-2, 2e-2, 1e-2}) {
      const auto t0 = clock::now();
      JkoConfig c;
      c.tau = tau;
      const auto traj = run_flow(rho0, tau, 1.0, c);
      const double secs = seconds_since(t0);
      weak.push_back(traj.completed ? weak_solution_residual(traj) : NAN);
      for (std::size_t k = 1; k < traj.diagnostics.size(); ++k) tally.add(traj.diagnostics[k]);
      if (tau != 1e-2) continue;
      const auto ev = UniformEvolution::build(1.0, tau, traj.step_count());
      double worst = 0.0;
      for (int k = 1; k <= traj.step_count(); ++k) {
        worst = std::max(worst, std::abs(box_half_width(traj.densities[k]) - ev.alphas[k]));
      }
      const double terminal = box_half_width(traj.densities.back());
      const double gap = std::abs(terminal - std::cbrt(10.0));
      record(2, "uniform flow", traj.completed && gap <= 0.02 && worst <= 2.0 * g.dx() && secs <= 600.0,
             fmt("terminal %.5f (gap %.3g <= 0.02), per-step gap %.3g <= %.3g", terminal, gap, worst,
                 2.0 * g.dx()) +
                 fmt(", %.1f s", secs));
    }
  }

  {  // 3
    const auto t0 = clock::now();
    const GridSpec g(-2.0, 2.0, 2048);
    const auto pair = analytic_profiles(HatProfile{1.0 / 270.0}, g);
    JkoConfig c;
    c.tau = 1.0 / 270.0;
    const auto r = jko_step(pair.rho0, c);
    const double secs = seconds_since(t0);
    tally.add(r.certificate, r.converged);
    const double dx = g.dx();
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (std::abs(g.center(i)) < 0.5 - 2.0 * dx) {
        lo = std::min(lo, r.rho1[i]);
        hi = std::max(hi, r.rho1[i]);
      }
    }
    // Jump interfaces: largest rise left of 0, largest drop right of 0.
    std::size_t up = 1, down = g.size() - 1;
    double best_up = -1.0, best_down = -1.0;
    for (std::size_t j = 1; j < g.size(); ++j) {
      const double d = r.rho1[j] - r.rho1[j - 1];
      if (g.interface(j) < 0.0 && d > best_up) best_up = d, up = j;
      if (g.interface(j) > 0.0 && -d > best_down) best_down = -d, down = j;
    }
    const bool plateau = std::abs(lo - 0.75) <= 0.015 && std::abs(hi - 0.75) <= 0.015;
    const bool jumps = std::abs(g.interface(up) + 0.5) <= 2.0 * dx && std::abs(g.interface(down) - 0.5) <= 2.0 * dx;
    const double zl = r.certificate.z_values[up], zr = r.certificate.z_values[down];
    const bool z_ok = std::abs(zl + 1.0) <= 1e-2 && std::abs(zr - 1.0) <= 1e-2;
    record(3, "discontinuity creation", r.converged && plateau && jumps && z_ok && secs <= 60.0,
           fmt("plateau [%.6f, %.6f], jumps at %.5f / %.5f", lo, hi, g.interface(up), g.interface(down)) +
               fmt(", z %.4f / %.4f, %.1f s", zl, zr, secs));
  }

  {  // 4-6
    const auto t0 = clock::now();
    const auto outcomes = oracles::run_oracle_checks(20240601);
    const double secs = seconds_since(t0);
    bool transport = true;
    std::string td;
    for (const auto& o : outcomes) {
      const std::string d = fmt("%.3g <= %.3g", o.max_deviation, o.tolerance) + " on " + std::to_string(o.instances);
      if (starts_with(o.name, "w2_")) {
        transport = transport && o.passed;
        td += o.name + " " + d + "; ";
      } else if (starts_with(o.name, "tv_prox")) {
        record(5, "tv prox oracle", o.passed, d);
      } else {
        record(6, "gradient check", o.passed, d);
      }
    }
    record(4, "transport oracle", transport && secs <= 60.0, td + fmt("%.1f s all oracles", secs));
  }

  {  // 7-10
    const auto report = run_suite({});
    suite_family(7, "maximum principle", report, [](const std::string& n) { return starts_with(n, "max_principle/"); });
    suite_family(8, "minimum principle", report, [](const std::string& n) { return starts_with(n, "min_principle/"); });
    for (const auto& c : report.cases) {
      if (starts_with(c.name, "certificate/") && c.verdict != "pass") ++tally.failures;
      if (starts_with(c.name, "certificate/")) ++tally.solves;
    }
    suite_family(10, "flow estimate", report, [](const std::string& n) {
      return starts_with(n, "dissipation/") || starts_with(n, "tv_bound/");
    });
  }

  {  // 11
    const double r1 = weak[0] / weak[1], r2 = weak[1] / weak[2];
    const bool ok = r1 >= 1.5 && r1 <= 2.5 && r2 >= 1.5 && r2 <= 2.5;
    record(11, "weak residual scaling", ok,
           fmt("residuals %.3g, %.3g, %.3g", weak[0], weak[1], weak[2]) + fmt(", ratios %.3f, %.3f", r1, r2));
  }

  {  // 12
    const GridSpec g(-2.0, 2.0, 512);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = 0.05 + (std::abs(g.center(i)) < 0.5 ? 0.5 : 0.0);
    const auto rho0 = GridDensity::normalized(g, v);
    JkoConfig c;
    c.tau = 0.1;
    const auto plain = jko_step(rho0, c);
    tally.add(plain.certificate, plain.converged);
    const auto family = entropic_step_family(rho0, 0.1, {1e-1, 1e-2, 1e-3}, c);
    bool ok = plain.converged;
    double prev = 1e300;
    std::string d;
    for (const auto& f : family) {
      tally.add(f.step.certificate, f.step.converged);
      const double gap = l1_distance(f.step.rho1, plain.rho1);
      ok = ok && f.step.converged && gap < prev && f.step.certificate.residual_el <= 1e-6 &&
           std::isfinite(f.min_h_log_rho);
      prev = gap;
      d += fmt("h=%.0e gap %.3g res %.2g min h log rho %.4g; ", f.h, gap, f.step.certificate.residual_el,
               f.min_h_log_rho);
    }
    record(12, "entropic family", ok, d);
  }

  // 9 collects every converged solve above plus the suite's certificate cases.
  record(9, "certificate suite", tally.failures == 0,
         fmt("%.0f solves, %.0f failed; direct solves worst |z| %.6f, complementarity %.2g", tally.solves,
             tally.failures, tally.worst_z, tally.worst_comp) +
             fmt(", residual %.2g, alignment %.2g", tally.worst_res, tally.worst_align));

  int failed = 0;
  for (const auto& l : lines) failed += l.passed ? 0 : 1;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(lines.size()) - failed, lines.size());
  return failed == 0 ? 0 : 1;
}
