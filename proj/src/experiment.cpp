#include "experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "analytic.hpp"
#include "cltlab.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "sde.hpp"

namespace polywind {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

[[noreturn]] void config_error(const std::string& what) { fail(ErrorKind::Config, what); }

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) config_error("unknown key '" + key + "' in " + where);
  }
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) config_error("missing required field '" + std::string(key) + "' in " + where);
  return obj.at(key);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) config_error(what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_error(what + " must be finite");
  return x;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

std::uint64_t unsigned_integer(const json& v, const std::string& what) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    config_error(what + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> number_list(const json& v, const std::string& what) {
  if (!v.is_array()) config_error(what + " must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

std::string text(const json& v, const std::string& what) {
  if (!v.is_string()) config_error(what + " must be a string");
  return v.get<std::string>();
}

bool is_simulation(Experiment e) {
  return e == Experiment::Mrt || e == Experiment::Mmrt || e == Experiment::BoundaryLayer;
}

McConfig default_mc(Experiment e) {
  McConfig mc;
  switch (e) {
    case Experiment::CltCheck: mc.dt = 1e-3; mc.replicates = 10000; break;
    case Experiment::LaplaceCheck: mc.dt = 1e-4; mc.replicates = 100000; mc.t_max = 1e4; break;
    case Experiment::AMoment: mc.dt = 1e-3; mc.replicates = 100000; break;
    default: break;
  }
  return mc;
}

InitialConfig parse_init(const json& v) {
  const std::string where = "init";
  if (!v.is_object()) config_error("init must be a JSON object");
  const std::string kind = text(member(v, "kind", where), "init.kind");
  if (kind == "stretched") {
    check_keys(v, {"kind"}, where);
    return Stretched{};
  }
  if (kind == "explicit") {
    check_keys(v, {"kind", "angles"}, where);
    return Explicit{number_list(member(v, "angles", where), "init.angles")};
  }
  if (kind == "uniform") {
    check_keys(v, {"kind", "epsilon"}, where);
    return UniformRandom{number_or(v, "epsilon", 0.1, where)};
  }
  if (kind == "boundary-layer") {
    check_keys(v, {"kind", "phi0"}, where);
    return BoundaryLayer{number(member(v, "phi0", where), "init.phi0")};
  }
  config_error("init.kind must be one of stretched, explicit, uniform, boundary-layer (got '" + kind + "')");
}

json init_to_json(const InitialConfig& init) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Stretched>) return {{"kind", "stretched"}};
        else if constexpr (std::is_same_v<T, Explicit>) return {{"kind", "explicit"}, {"angles", c.angles}};
        else if constexpr (std::is_same_v<T, UniformRandom>) return {{"kind", "uniform"}, {"epsilon", c.epsilon}};
        else return {{"kind", "boundary-layer"}, {"phi0", c.phi0}};
      },
      init);
}

SweepSpec parse_sweep(const json& v) {
  const std::string where = "sweep";
  check_keys(v, {"axis", "values", "start", "stop", "step"}, where);
  SweepSpec s;
  const std::string axis = text(member(v, "axis", where), "sweep.axis");
  const auto parsed = parse_axis(axis);
  if (!parsed) config_error("sweep.axis must be one of n, D, L, phi0 (got '" + axis + "')");
  s.axis = *parsed;
  if (v.contains("values")) {
    if (v.contains("start") || v.contains("stop") || v.contains("step"))
      config_error("sweep takes either 'values' or 'start'/'stop'/'step', not both");
    s.values = number_list(v.at("values"), "sweep.values");
  } else {
    const double start = number(member(v, "start", where), "sweep.start");
    const double stop = number(member(v, "stop", where), "sweep.stop");
    const double step = number(member(v, "step", where), "sweep.step");
    if (step <= 0.0 || stop < start) config_error("sweep range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) s.values.push_back(start + static_cast<double>(i) * step);
  }
  return s;
}

// Re-raises model validation failures as configuration errors, keeping
// Infeasible distinct so the CLI can report it with its own exit status.
template <class Fn>
void as_config(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) config_error(e.what());
    throw;
  }
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Mrt: return "mrt";
    case Experiment::Mmrt: return "mmrt";
    case Experiment::BoundaryLayer: return "boundary-layer";
    case Experiment::AnalyticConstants: return "analytic-constants";
    case Experiment::CltCheck: return "clt-check";
    case Experiment::LaplaceCheck: return "laplace-check";
    case Experiment::AMoment: return "a-moment";
  }
  return "?";
}

std::optional<Experiment> parse_experiment(const std::string& name) {
  for (auto e : {Experiment::Mrt, Experiment::Mmrt, Experiment::BoundaryLayer, Experiment::AnalyticConstants,
                 Experiment::CltCheck, Experiment::LaplaceCheck, Experiment::AMoment})
    if (name == experiment_name(e)) return e;
  return std::nullopt;
}

const char* subcommand_of(Experiment e) {
  switch (e) {
    case Experiment::Mrt:
    case Experiment::Mmrt:
    case Experiment::BoundaryLayer: return "simulate";
    case Experiment::AnalyticConstants: return "analytic";
    case Experiment::CltCheck: return "clt-check";
    case Experiment::LaplaceCheck:
    case Experiment::AMoment: return "validate";
  }
  return "?";
}

RunConfig parse_config(const json& doc, const Overrides& ov) {
  check_keys(doc, {"experiment", "params", "init", "mc", "sweep", "quadrature", "clt", "laplace", "a_moment", "output"},
             "config");
  RunConfig cfg;
  const std::string name = text(member(doc, "experiment", "config"), "experiment");
  const auto experiment = parse_experiment(name);
  if (!experiment) config_error("unknown experiment '" + name + "'");
  cfg.experiment = *experiment;
  cfg.mc = default_mc(cfg.experiment);

  if (doc.contains("mc")) {
    const json& mc = doc.at("mc");
    check_keys(mc, {"replicates", "dt", "t_max", "seed", "workers"}, "mc");
    if (mc.contains("replicates")) cfg.mc.replicates = unsigned_integer(mc.at("replicates"), "mc.replicates");
    cfg.mc.dt = number_or(mc, "dt", cfg.mc.dt, "mc");
    cfg.mc.t_max = number_or(mc, "t_max", cfg.mc.t_max, "mc");
    if (mc.contains("seed")) cfg.mc.seed = unsigned_integer(mc.at("seed"), "mc.seed");
    if (mc.contains("workers"))
      cfg.mc.max_workers_hint = static_cast<unsigned>(unsigned_integer(mc.at("workers"), "mc.workers"));
  }
  if (ov.seed) cfg.mc.seed = *ov.seed;
  if (ov.replicates) cfg.mc.replicates = *ov.replicates;
  if (ov.dt) cfg.mc.dt = *ov.dt;
  if (ov.workers) cfg.mc.max_workers_hint = *ov.workers;
  cfg.timestamp = ov.timestamp;
  as_config([&] { validate(cfg.mc); });

  if (ov.output) {
    cfg.output = *ov.output;
  } else {
    cfg.output = text(member(doc, "output", "config"), "output");
  }
  if (cfg.output.empty()) config_error("output path must not be empty");

  if (doc.contains("quadrature")) {
    const json& q = doc.at("quadrature");
    check_keys(q, {"rel_tol", "abs_tol", "truncation_cutoff"}, "quadrature");
    cfg.quadrature.rel_tol = number_or(q, "rel_tol", cfg.quadrature.rel_tol, "quadrature");
    cfg.quadrature.abs_tol = number_or(q, "abs_tol", cfg.quadrature.abs_tol, "quadrature");
    cfg.quadrature.truncation_cutoff = number_or(q, "truncation_cutoff", cfg.quadrature.truncation_cutoff, "quadrature");
    as_config([&] { validate(cfg.quadrature); });
  }

  if (is_simulation(cfg.experiment)) {
    const json& p = member(doc, "params", "config");
    check_keys(p, {"n", "D", "L", "l0"}, "params");
    const json& n = member(p, "n", "params");
    if (!n.is_number_integer()) config_error("params.n must be an integer");
    cfg.params.n = n.get<int>();
    cfg.params.D = number(member(p, "D", "params"), "params.D");
    cfg.params.L = number(member(p, "L", "params"), "params.L");
    cfg.params.l0 = number(member(p, "l0", "params"), "params.l0");
    if (doc.contains("init")) cfg.init = parse_init(doc.at("init"));
    if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc.at("sweep"));

    if (cfg.experiment == Experiment::BoundaryLayer) {
      const bool phi_sweep = cfg.sweep && cfg.sweep->axis == SweepAxis::Phi0;
      if (!phi_sweep && !std::holds_alternative<BoundaryLayer>(cfg.init))
        config_error("boundary-layer experiment needs init.kind = boundary-layer or a phi0 sweep");
    }
    if (cfg.sweep && cfg.sweep->axis == SweepAxis::Phi0 && cfg.experiment == Experiment::Mmrt)
      config_error("phi0 sweeps apply to first-rotation experiments only");

    // Without a sweep the single point must be runnable; with one, bad points
    // become flagged rows.
    if (!cfg.sweep) {
      as_config([&] {
        validate(cfg.params);
        validate_config(cfg.init, cfg.params);
      });
    } else {
      as_config([&] {
        require(cfg.params.D > 0.0 && cfg.params.l0 > 0.0 && cfg.params.L >= 0.0 && cfg.params.n >= 1,
                "params must satisfy n >= 1, D > 0, L >= 0, l0 > 0");
      });
    }
  } else {
    for (const char* key : {"params", "init", "sweep"})
      if (doc.contains(key))
        config_error(std::string("'") + key + "' does not apply to experiment " + name);
  }

  if (cfg.experiment == Experiment::CltCheck) {
    const json& c = member(doc, "clt", "config");
    check_keys(c, {"mode", "n", "t_end", "stride", "t"}, "clt");
    const std::string mode = c.contains("mode") ? text(c.at("mode"), "clt.mode") : "qv";
    if (mode == "qv") cfg.clt.mode = CltMode::Qv;
    else if (mode == "limit") cfg.clt.mode = CltMode::Limit;
    else if (mode == "zn") cfg.clt.mode = CltMode::Zn;
    else config_error("clt.mode must be qv, limit or zn");
    if (c.contains("n")) cfg.clt.n = static_cast<int>(unsigned_integer(c.at("n"), "clt.n"));
    cfg.clt.t_end = number_or(c, "t_end", cfg.clt.t_end, "clt");
    if (c.contains("stride")) cfg.clt.stride = unsigned_integer(c.at("stride"), "clt.stride");
    if (c.contains("t")) cfg.clt.times = number_list(c.at("t"), "clt.t");
    if (cfg.clt.n < 1) config_error("clt.n must be at least 1");
    if (cfg.clt.t_end <= 0.0) config_error("clt.t_end must be positive");
    if (cfg.clt.stride < 1) config_error("clt.stride must be at least 1");
    for (double t : cfg.clt.times)
      if (t <= 0.0) config_error("clt.t entries must be positive");
    if (cfg.clt.mode != CltMode::Qv && cfg.mc.replicates < 2) config_error("moment checks need at least 2 replicates");
  } else if (doc.contains("clt")) {
    config_error("'clt' does not apply to experiment " + name);
  }

  if (cfg.experiment == Experiment::LaplaceCheck) {
    const json& l = member(doc, "laplace", "config");
    check_keys(l, {"c", "y"}, "laplace");
    cfg.laplace.c = number(member(l, "c", "laplace"), "laplace.c");
    if (l.contains("y")) cfg.laplace.ys = number_list(l.at("y"), "laplace.y");
    if (cfg.laplace.c <= 0.0) config_error("laplace.c must be positive");
    for (double y : cfg.laplace.ys)
      if (y < 0.0) config_error("laplace.y entries must be non-negative");
  } else if (doc.contains("laplace")) {
    config_error("'laplace' does not apply to experiment " + name);
  }

  if (cfg.experiment == Experiment::AMoment) {
    if (doc.contains("a_moment")) {
      const json& a = doc.at("a_moment");
      check_keys(a, {"t"}, "a_moment");
      cfg.a_moment_times = number_list(member(a, "t", "a_moment"), "a_moment.t");
    }
    for (double t : cfg.a_moment_times)
      if (t < analytic::kMinNegMomentTime) config_error("a_moment.t entries must be at least 1e-4");
  } else if (doc.contains("a_moment")) {
    config_error("'a_moment' does not apply to experiment " + name);
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text_in, const Overrides& ov) {
  json doc;
  try {
    doc = json::parse(text_in);
  } catch (const json::parse_error& e) {
    config_error(std::string("configuration is not valid JSON: ") + e.what());
  }
  return parse_config(doc, ov);
}

json to_json(const RunConfig& cfg) {
  json j;
  j["experiment"] = experiment_name(cfg.experiment);
  j["output"] = cfg.output;
  j["mc"] = {{"replicates", cfg.mc.replicates}, {"dt", cfg.mc.dt}, {"t_max", cfg.mc.t_max}, {"seed", cfg.mc.seed}};
  if (is_simulation(cfg.experiment)) {
    j["params"] = {{"n", cfg.params.n}, {"D", cfg.params.D}, {"L", cfg.params.L}, {"l0", cfg.params.l0}};
    j["init"] = init_to_json(cfg.init);
    if (cfg.sweep) j["sweep"] = {{"axis", axis_name(cfg.sweep->axis)}, {"values", cfg.sweep->values}};
  }
  switch (cfg.experiment) {
    case Experiment::AnalyticConstants:
      j["quadrature"] = {{"rel_tol", cfg.quadrature.rel_tol},
                         {"abs_tol", cfg.quadrature.abs_tol},
                         {"truncation_cutoff", cfg.quadrature.truncation_cutoff}};
      break;
    case Experiment::CltCheck: {
      const char* mode = cfg.clt.mode == CltMode::Qv ? "qv" : cfg.clt.mode == CltMode::Limit ? "limit" : "zn";
      j["clt"] = {{"mode", mode}, {"n", cfg.clt.n}, {"t_end", cfg.clt.t_end}, {"stride", cfg.clt.stride},
                  {"t", cfg.clt.times}};
      break;
    }
    case Experiment::LaplaceCheck: j["laplace"] = {{"c", cfg.laplace.c}, {"y", cfg.laplace.ys}}; break;
    case Experiment::AMoment: j["a_moment"] = {{"t", cfg.a_moment_times}}; break;
    default: break;
  }
  return j;
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(std::size_t x) { return std::to_string(x); }
std::string num(int x) { return std::to_string(x); }

class CsvBuilder {
 public:
  void comment(const std::string& line) { comments_ += "# " + line + "\n"; }
  void header(std::initializer_list<const char*> columns) { body_ += join(columns) + "\n"; }
  void row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
    body_ += line + "\n";
  }
  std::string str() const { return comments_ + body_; }

 private:
  static std::string join(std::initializer_list<const char*> cols) {
    std::string out;
    for (const char* c : cols) out += (out.empty() ? "" : ",") + std::string(c);
    return out;
  }
  std::string comments_;
  std::string body_;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string formula_for(const PolymerParams& p, const InitialConfig& init) {
  if (p.n < 3 || p.D <= 0.0) return "";
  try {
    if (std::holds_alternative<UniformRandom>(init)) return num(analytic::mrt_uniform(p.n, p.D));
    const auto c = initial_constant(init, p);
    if (std::abs(c.c_n) == 0.0) return "";
    return num(analytic::mrt_general(p.n, p.D, c.c_n));
  } catch (const Error&) {
    return "";
  }
}

std::string phi0_of(const InitialConfig& init) {
  if (const auto* b = std::get_if<BoundaryLayer>(&init)) return num(b->phi0);
  return "";
}

void render_simulation(const RunConfig& cfg, CsvBuilder& csv) {
  const Estimator estimator = cfg.experiment == Experiment::Mmrt ? Estimator::MinRotation : Estimator::FirstRotation;
  std::vector<SweepRow> rows;
  if (cfg.sweep) {
    rows = sweep(cfg.params, cfg.sweep->axis, cfg.sweep->values, cfg.init, cfg.mc, estimator);
  } else {
    SweepRow row;
    row.params = cfg.params;
    row.config = cfg.init;
    row.estimate = estimate_rotation_time(cfg.params, cfg.init, cfg.mc, estimator, 0);
    rows.push_back(std::move(row));
  }

  if (std::sqrt(2.0 * cfg.params.D * cfg.mc.dt) > 1.0)
    csv.comment("warning: per-step angle increment sqrt(2 D dt) exceeds 1 rad; reduce dt");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (!row.feasible) csv.comment("warning: row " + std::to_string(r + 1) + " not run: " + row.note);
    if (row.estimate && row.estimate->timeout_warning())
      csv.comment("warning: row " + std::to_string(r + 1) + ": " + num(row.estimate->n_timeout) + " of " +
                  num(row.estimate->replicates()) + " replicates timed out and are excluded from the mean");
    if (row.estimate && row.estimate->n_origin_fail > 0)
      csv.comment("warning: row " + std::to_string(r + 1) + ": " + num(row.estimate->n_origin_fail) +
                  " replicates passed through the origin and are excluded from the mean");
  }

  csv.header({"n", "D", "L", "l0", "init", "phi0", "feasible", "mean", "stderr", "n_used", "n_timeout",
              "n_origin_fail", "formula"});
  for (const auto& row : rows) {
    const auto& p = row.params;
    std::vector<std::string> cells = {num(p.n), num(p.D), num(p.L), num(p.l0), config_name(row.config),
                                      phi0_of(row.config), row.feasible ? "1" : "0"};
    if (row.estimate) {
      const auto& e = *row.estimate;
      cells.insert(cells.end(), {num(e.mean), e.std_error ? num(*e.std_error) : "", num(e.n_used),
                                 num(e.n_timeout), num(e.n_origin_fail)});
    } else {
      cells.insert(cells.end(), {"", "", "", "", ""});
    }
    const bool formula = cfg.experiment != Experiment::Mmrt && row.feasible;
    cells.push_back(formula ? formula_for(p, row.config) : "");
    csv.row(cells);
  }
}

void render_constants(const RunConfig& cfg, CsvBuilder& csv) {
  namespace lit = analytic::literature;
  const auto k = analytic::constants(cfg.quadrature);
  const auto v = analytic::proposition_variances(cfg.quadrature);
  const double q_from_lit_f = 2.0 * lit::F2pi + 2.0 * std::numbers::ln2 + analytic::kEulerGamma;
  csv.header({"F2pi", "G2pi", "Q", "Q_tilde", "c_E", "Q_tilde_minus_Q", "F2pi_crosscheck", "G2pi_crosscheck",
              "v1", "v1_closed", "v2", "v2_closed", "v2_literature_closed", "v2_literature_numeric",
              "F2pi_literature", "G2pi_literature", "Q_literature_intro", "Q_literature_final",
              "Q_tilde_literature", "Q_from_literature_F"});
  csv.row({num(k.F2pi), num(k.G2pi), num(k.Q), num(k.Q_tilde), num(k.c_E), num(k.Q_tilde - k.Q),
           num(analytic::crosscheck::F(2.0 * std::numbers::pi)), num(analytic::crosscheck::G(2.0 * std::numbers::pi)),
           num(v.v1), num(v.v1_closed), num(v.v2), num(v.v2_closed), num(v.v2_literature_closed),
           num(lit::v2_numeric), num(lit::F2pi), num(lit::G2pi), num(lit::Q_intro), num(lit::Q_final),
           num(lit::Q_tilde), num(q_from_lit_f)});
}

void moment_row(CsvBuilder& csv, const std::string& n, double t, const cltlab::MomentReport& m) {
  csv.row({n, num(t), num(m.samples), num(m.mean_re), num(m.mean_re_se), num(m.mean_im), num(m.mean_im_se),
           num(m.var_re), num(m.var_re_se), num(m.theory_var_re), num(m.var_im), num(m.var_im_se),
           num(m.theory_var_im), num(m.cov), num(m.cov_se)});
}

void render_clt(const RunConfig& cfg, CsvBuilder& csv) {
  if (cfg.clt.mode == CltMode::Qv) {
    Rng rng(cfg.mc.seed, 0, 0);
    const auto path = cltlab::empirical_qv(cfg.clt.n, cfg.clt.t_end, cfg.mc.dt, rng);
    const auto dev = cltlab::sup_deviation(path);
    csv.comment("sup_deviation: s=" + num(dev.s) + " c=" + num(dev.c) + " sc=" + num(dev.sc) +
                " sum_identity=" + num(dev.sum_identity));
    csv.header({"t", "qv_s", "qv_c", "qv_sc", "theory_s", "theory_c", "theory_sc"});
    for (std::size_t i = 0; i < path.times.size(); i += cfg.clt.stride) {
      const auto th = cltlab::theory_qv(path.times[i]);
      csv.row({num(path.times[i]), num(path.qv_s[i]), num(path.qv_c[i]), num(path.qv_sc[i]), num(th[0]),
               num(th[1]), num(th[2])});
    }
    return;
  }
  csv.header({"n", "t", "samples", "mean_re", "mean_re_se", "mean_im", "mean_im_se", "var_re", "var_re_se",
              "theory_var_re", "var_im", "var_im_se", "theory_var_im", "cov", "cov_se"});
  for (double t : cfg.clt.times) {
    if (cfg.clt.mode == CltMode::Limit) {
      moment_row(csv, "", t, cltlab::limit_Z_moments(t, cfg.mc));
    } else {
      moment_row(csv, num(cfg.clt.n), t, cltlab::compare_Zn_to_limit(cfg.clt.n, t, cfg.mc));
    }
  }
}

void render_laplace(const RunConfig& cfg, CsvBuilder& csv) {
  const auto points = laplace_check(cfg.laplace.c, cfg.laplace.ys, cfg.mc);
  csv.header({"c", "y", "n_used", "n_timeout", "empirical", "stderr", "analytic", "z_score"});
  for (const auto& p : points) {
    const double se = p.empirical.std_error.value_or(0.0);
    const double diff = p.empirical.mean - p.analytic;
    csv.row({num(cfg.laplace.c), num(p.y), num(p.empirical.n_used), num(p.empirical.n_timeout),
             num(p.empirical.mean), p.empirical.std_error ? num(se) : "", num(p.analytic),
             se > 0.0 ? num(diff / se) : ""});
  }
}

void render_a_moment(const RunConfig& cfg, CsvBuilder& csv) {
  csv.header({"t", "dt", "mean", "stderr", "mean_half_dt", "paired_diff", "paired_diff_se", "bias_allowance",
              "quadrature", "z_score"});
  for (double t : cfg.a_moment_times) {
    const auto check = exp_functional_refinement(t, cfg.mc);
    const double quad = analytic::neg_moment_A(t);
    const double se = check.coarse.std_error.value_or(0.0);
    csv.row({num(t), num(cfg.mc.dt), num(check.coarse.mean), check.coarse.std_error ? num(se) : "",
             num(check.fine.mean), num(check.difference.mean),
             check.difference.std_error ? num(*check.difference.std_error) : "", num(check.bias_allowance()),
             num(quad), se > 0.0 ? num((check.coarse.mean - quad) / se) : ""});
  }
}

}  // namespace

std::string render_csv(const RunConfig& cfg) {
  CsvBuilder csv;
  // The output path is left out so the same run written elsewhere is byte-identical.
  json recorded = to_json(cfg);
  recorded.erase("output");
  csv.comment("config: " + recorded.dump());
  csv.comment(std::string("polywind ") + kVersion + " " + experiment_name(cfg.experiment));
  if (cfg.timestamp) csv.comment("generated: " + utc_timestamp());

  switch (cfg.experiment) {
    case Experiment::Mrt:
    case Experiment::Mmrt:
    case Experiment::BoundaryLayer: render_simulation(cfg, csv); break;
    case Experiment::AnalyticConstants: render_constants(cfg, csv); break;
    case Experiment::CltCheck: render_clt(cfg, csv); break;
    case Experiment::LaplaceCheck: render_laplace(cfg, csv); break;
    case Experiment::AMoment: render_a_moment(cfg, csv); break;
  }
  return csv.str();
}

void run(const RunConfig& cfg) {
  const std::string document = render_csv(cfg);

  namespace fs = std::filesystem;
  const fs::path target(cfg.output);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    out << document;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      fail(ErrorKind::Io, "failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorKind::Io, "cannot move output into place at " + target.string());
  }
}

}  // namespace polywind
