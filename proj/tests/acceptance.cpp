// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "analytic.hpp"
#include "cltlab.hpp"
#include "experiment.hpp"
#include "montecarlo.hpp"
#include "sde.hpp"

using namespace polywind;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Verdict::check(bool ok, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  if (!detail.empty()) detail += "; ";
  detail += buf;
  if (!ok) {
    detail += " [x]";
    pass = false;
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool rel_agree(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

McConfig mc_of(std::size_t replicates, double dt) {
  McConfig mc;
  mc.replicates = replicates;
  mc.dt = dt;
  return mc;
}

// Least-squares non-increasing fit (pool adjacent violators), weights w.
std::vector<double> isotonic_non_increasing(const std::vector<double>& y, const std::vector<double>& w) {
  struct Block {
    double sum, weight;
    std::size_t len;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({y[i] * w[i], w[i], 1});
    while (blocks.size() > 1) {
      const auto& b = blocks[blocks.size() - 1];
      const auto& a = blocks[blocks.size() - 2];
      if (a.sum / a.weight >= b.sum / b.weight) break;
      Block merged{a.sum + b.sum, a.weight + b.weight, a.len + b.len};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> fit;
  for (const auto& b : blocks) fit.insert(fit.end(), b.len, b.sum / b.weight);
  return fit;
}

Verdict quadrature_constants() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const auto k = analytic::constants();
  const double elapsed = seconds_since(t0);
  v.check(std::abs(k.G2pi - 0.167) <= 0.003, "G(2pi)=%.6f", k.G2pi);
  v.check(k.F2pi >= 3.78 && k.F2pi <= 3.90, "F(2pi)=%.6f", k.F2pi);
  v.check(k.Q >= 9.5 && k.Q <= 9.7, "Q=%.6f (quoted 9.54/9.56; 2*3.84+2ln2+c_E=%.4f)", k.Q,
          2 * analytic::literature::F2pi + 2 * std::numbers::ln2 + analytic::kEulerGamma);
  const double gap = std::abs((k.Q_tilde - k.Q) - k.G2pi / 2);
  v.check(gap < 1e-10, "|Q~-Q-G/2|=%.1e", gap);
  v.check(elapsed < 1.0, "%.3fs", elapsed);
  return v;
}

Verdict dual_quadrature() {
  Verdict v;
  constexpr double tol = 1e-8;
  double worst = 0.0;
  std::string where;
  auto track = [&](const std::string& name, double a, double b) {
    const double r = std::abs(a - b) / std::abs(b);
    if (r > worst) {
      worst = r;
      where = name;
    }
  };
  for (double c : {pi, 2 * pi, 4 * pi}) track("F", analytic::F(c), analytic::crosscheck::F(c));
  for (double c : {pi / 2, pi, 2 * pi}) track("G", analytic::G(c), analytic::crosscheck::G(c));
  for (double t : {0.5, 1.0, 2.0}) track("E[1/A_t]", analytic::neg_moment_A(t), analytic::crosscheck::neg_moment_A(t));
  const auto pv = analytic::proposition_variances();
  track("v1", pv.v1, analytic::crosscheck::v1());
  track("v2", pv.v2, analytic::crosscheck::v2());
  v.check(worst < tol, "worst relative gap %.1e (%s)", worst, where.c_str());
  return v;
}

Verdict variance_integrals() {
  Verdict v;
  const auto pv = analytic::proposition_variances();
  const double v1_closed = (pi - 3) / 2;
  const double v2_closed = std::numbers::sqrt2 - 0.5 - std::log(1 + std::numbers::sqrt2);
  v.check(std::abs(pv.v1 - v1_closed) < 1e-8, "v1=%.12f vs %.12f", pv.v1, v1_closed);
  v.check(std::abs(pv.v2 - v2_closed) < 1e-8, "v2=%.12f vs %.12f", pv.v2, v2_closed);
  v.check(std::abs(pv.v2 - 0.033) < 5e-4, "quoted numeric 0.033");
  v.check(true, "quoted closed form -1+2sqrt2-2asinh1=%.6f is %.4fx v2", pv.v2_literature_closed,
          pv.v2_literature_closed / pv.v2);
  return v;
}

Verdict fg_identity() {
  Verdict v;
  const double r0 = analytic::fg_identity_residual(pi / 2);
  const double r1 = analytic::fg_identity_residual(pi);
  const double r2 = analytic::fg_identity_residual(2 * pi);
  v.check(r0 < 1e-8, "c=pi/2: %.1e", r0);
  v.check(r1 < 1e-6, "c=pi: %.1e", r1);
  v.check(r2 < 1e-6, "c=2pi: %.1e", r2);
  return v;
}

Verdict laplace() {
  Verdict v;
  const std::vector<double> ys{0.5, 1.0};
  const auto t0 = std::chrono::steady_clock::now();
  const auto pts = laplace_check(pi / 4, ys, mc_of(100000, 1e-4));
  const double elapsed = seconds_since(t0);
  for (const auto& p : pts) {
    const double se = *p.empirical.std_error;
    const double z = (p.empirical.mean - p.analytic) / se;
    v.check(std::abs(z) < 3.0 && p.empirical.n_used == 100000, "y=%.1f: %.6f vs %.6f (z=%.2f)", p.y,
            p.empirical.mean, p.analytic, z);
  }
  v.check(elapsed < 60.0, "%.1fs", elapsed);
  return v;
}

Verdict exponential_functional() {
  Verdict v;
  const auto r = exp_functional_refinement(1.0, mc_of(100000, 1e-3));
  const double quad = analytic::neg_moment_A(1.0);
  const double se = *r.coarse.std_error;
  const double allowance = r.bias_allowance();
  const double gap = std::abs(r.coarse.mean - quad);
  v.check(gap < 3 * se + allowance, "MC %.6f vs quadrature %.6f: |diff|=%.2e < 3se+bias=%.2e+%.2e", r.coarse.mean,
          quad, gap, 3 * se, allowance);
  return v;
}

Verdict quadratic_variation() {
  Verdict v;
  Rng rng(1, 0, 0);
  const auto path = cltlab::empirical_qv(2000, 2.0, 1e-3, rng);
  const auto d = cltlab::sup_deviation(path);
  v.check(d.s < 0.05, "<S> sup-dev %.4f", d.s);
  v.check(d.c < 0.05, "<C> sup-dev %.4f", d.c);
  v.check(d.sc < 0.05, "<S,C> sup %.4f", d.sc);
  v.check(d.sum_identity < 1e-12, "|qv_s+qv_c-t| %.1e", d.sum_identity);
  return v;
}

Verdict limit_moments() {
  Verdict v;
  McConfig mc = mc_of(100000, 1e-3);
  const auto m = cltlab::limit_Z_moments(5.0, mc);
  const auto th = cltlab::limit_variances(5.0);
  v.check(std::abs(m.var_re - th[0]) < 3 * m.var_re_se, "Var Re %.5f vs %.5f (se %.5f)", m.var_re, th[0],
          m.var_re_se);
  v.check(std::abs(m.var_im - th[1]) < 3 * m.var_im_se, "Var Im %.5f vs %.5f (se %.5f)", m.var_im, th[1],
          m.var_im_se);
  const auto far = cltlab::limit_variances(40.0);
  v.check(std::abs(far[0] - 0.5) < 1e-12 && std::abs(far[1] - 0.5) < 1e-12, "both -> 1/2");
  return v;
}

Verdict stretched_mrt() {
  Verdict v;
  const std::vector<double> ns{100, 200};
  const auto rows = sweep(make_params(100, 10.0, 0.3, 0.25), SweepAxis::N, ns, Stretched{}, mc_of(300, 0.01));
  double prev = 0.0;
  bool increasing = true;
  for (const auto& row : rows) {
    const auto& e = *row.estimate;
    const double formula = analytic::mrt_stretched(row.params.n, 10.0);
    const double rel = (e.mean - formula) / formula;
    v.check(std::abs(rel) <= 0.30, "n=%d: %.4f+-%.4f vs %.4f (%+.1f%%)", row.params.n, e.mean, *e.std_error,
            formula, 100 * rel);
    increasing = increasing && e.mean > prev;
    prev = e.mean;
  }
  v.check(increasing, "increasing in n");
  return v;
}

Verdict uniform_mrt() {
  Verdict v;
  const auto e = estimate_mrt(make_params(100, 10.0, 0.3, 0.25), UniformRandom{}, mc_of(300, 0.01));
  const double formula = analytic::mrt_uniform(100, 10.0);
  const double rel = (e.mean - formula) / formula;
  v.check(std::abs(rel) <= 0.30, "%.4f+-%.4f vs %.4f (%+.1f%%)", e.mean, *e.std_error, formula, 100 * rel);
  return v;
}

Verdict mmrt() {
  Verdict v;
  std::vector<double> ns;
  for (int n = 4; n <= 15; ++n) ns.push_back(n);
  const auto rows = sweep(make_params(4, 10.0, 0.3, 0.25), SweepAxis::N, ns, Stretched{}, mc_of(300, 0.01),
                          Estimator::MinRotation);
  std::vector<double> mean, weight, se;
  std::string seq;
  for (const auto& row : rows) {
    mean.push_back(row.estimate->mean);
    se.push_back(*row.estimate->std_error);
    weight.push_back(1.0 / (se.back() * se.back()));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.3f", seq.empty() ? "" : " ", mean.back());
    seq += buf;
  }
  const auto fit = isotonic_non_increasing(mean, weight);
  double worst = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) worst = std::max(worst, std::abs(fit[i] - mean[i]) / se[i]);
  v.check(worst <= 2.0, "MMRT n=4..15: %s; max |isotonic-raw|/se=%.2f", seq.c_str(), worst);

  // Shared paths: the minimum over eligible beads includes the free end.
  int violations = 0, pairs = 0;
  for (int n : {4, 8, 15}) {
    const auto p = make_params(n, 10.0, 0.3, 0.25);
    const std::vector<double> start(static_cast<std::size_t>(n), 0.0);
    for (int r = 0; r < 300; ++r) {
      Rng a(1, 1000 + n, r), b(1, 1000 + n, r);
      const auto first = first_rotation_time(p, start, 0.01, 1000.0, a);
      const auto min = min_rotation_time(p, start, 0.01, 1000.0, b);
      if (first.kind != StopKind::Hit || min.kind != StopKind::Hit) continue;
      ++pairs;
      violations += min.tau > first.tau;
    }
  }
  v.check(violations == 0, "pathwise MMRT<=MRT on %d shared paths", pairs);
  return v;
}

Verdict boundary_layer() {
  Verdict v;
  const std::vector<double> phis{pi / 2, pi, 3 * pi / 2, 7 * pi / 4};
  const auto rows = sweep(make_params(10, 1.0, 0.1, 0.2), SweepAxis::Phi0, phis, Stretched{}, mc_of(300, 0.01));
  std::string seq;
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.3f", i ? " " : "", rows[i].estimate->mean);
    seq += buf;
    if (i) monotone = monotone && rows[i].estimate->mean <= rows[i - 1].estimate->mean;
  }
  v.check(monotone, "MRT at phi0=pi/2,pi,3pi/2,7pi/4: %s", seq.c_str());
  const double ratio = rows.back().estimate->mean / rows.front().estimate->mean;
  v.check(ratio < 0.5, "7pi/4 vs pi/2 ratio %.3f", ratio);
  return v;
}

Verdict determinism() {
  Verdict v;
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / ("polywind-accept-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::string> configs{
      R"({"experiment":"mrt","params":{"n":40,"D":10,"L":0.3,"l0":0.25},"init":{"kind":"uniform"},
          "sweep":{"axis":"n","values":[20,40]},"mc":{"replicates":200}})",
      R"({"experiment":"mmrt","params":{"n":8,"D":10,"L":0.3,"l0":0.25},"mc":{"replicates":200}})",
      R"({"experiment":"boundary-layer","params":{"n":10,"D":1,"L":0.1,"l0":0.2},
          "sweep":{"axis":"phi0","values":[3.14159,5.49779]},"mc":{"replicates":100}})",
      R"({"experiment":"analytic-constants"})",
      R"({"experiment":"clt-check","clt":{"mode":"zn","n":100,"t":[1]},"mc":{"replicates":2000}})",
      R"({"experiment":"clt-check","clt":{"mode":"limit","t":[1]},"mc":{"replicates":2000}})",
      R"({"experiment":"laplace-check","laplace":{"c":0.5},"mc":{"replicates":2000}})",
      R"({"experiment":"a-moment","mc":{"replicates":2000,"dt":0.01}})",
  };
  int identical = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::string bytes[2];
    const unsigned workers[2] = {1, 4};
    for (int w = 0; w < 2; ++w) {
      Overrides ov;
      ov.timestamp = false;
      ov.workers = workers[w];
      ov.seed = 12345;
      ov.output = (dir / ("run" + std::to_string(i) + "_" + std::to_string(w) + ".csv")).string();
      run(parse_config_text(configs[i], ov));
      std::ifstream in(*ov.output, std::ios::binary);
      std::stringstream s;
      s << in.rdbuf();
      bytes[w] = s.str();
    }
    identical += !bytes[0].empty() && bytes[0] == bytes[1];
  }
  fs::remove_all(dir);
  v.check(identical == static_cast<int>(configs.size()), "%d/%zu experiments byte-identical with 1 vs 4 workers",
          identical, configs.size());
  return v;
}

struct Criterion {
  const char* name;
  std::function<Verdict()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"quadrature constants", quadrature_constants},
      {"dual quadrature", dual_quadrature},
      {"variance integrals", variance_integrals},
      {"F'-G identity", fg_identity},
      {"exit-time Laplace transform", laplace},
      {"exponential functional inverse moment", exponential_functional},
      {"fluctuation quadratic variations", quadratic_variation},
      {"limit process moments", limit_moments},
      {"stretched MRT vs formula", stretched_mrt},
      {"uniform-start MRT vs formula", uniform_mrt},
      {"MMRT decreases in n", mmrt},
      {"boundary-layer MRT", boundary_layer},
      {"determinism across worker counts", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  const auto& all = criteria();
  if (only < 0 || only > static_cast<int>(all.size())) {
    std::fprintf(stderr, "criterion must be 1..%zu\n", all.size());
    return 2;
  }
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = all[i].run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("error: ") + e.what();
    }
    std::printf("[%s] %2zu %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1, all[i].name, v.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
