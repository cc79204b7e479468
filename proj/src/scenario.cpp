#include "mbq/scenario.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "mbq/bosonize.hpp"
#include "mbq/dynamics.hpp"
#include "mbq/fock.hpp"
#include "mbq/fourier.hpp"
#include "mbq/io.hpp"
#include "mbq/qubit.hpp"
#include "mbq/spin_exact.hpp"

namespace fs = std::filesystem;

namespace mbq {
namespace {

// ---------------------------------------------------------------------------
// small shared helpers

bool has_section(const ConfigFile& cfg, const std::string& name) {
  for (const auto& s : cfg.sections())
    if (s == name) return true;
  return false;
}

std::vector<double> linspace(double from, double to, long points) {
  std::vector<double> v;
  v.reserve((std::size_t)points);
  if (points == 1) {
    v.push_back(from);
    return v;
  }
  for (long i = 0; i < points; ++i)
    v.push_back(from + (to - from) * (double)i / (double)(points - 1));
  return v;
}

std::string sanitize_message(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

struct Check {
  std::string name;
  bool passed;
  double value;
  double threshold;
};

// Accumulates checks and output files for one experiment run and writes the
// summary JSON at the end.
struct RunIO {
  const Scenario& sc;
  const ScenarioOptions& opt;
  std::string experiment;
  std::vector<Check> checks;
  std::vector<std::string> outputs;

  RunIO(const Scenario& s, const ScenarioOptions& o, std::string exp)
      : sc(s), opt(o), experiment(std::move(exp)) {
    fs::create_directories(opt.out_dir);
  }

  void check(const std::string& name, double value, double threshold) {
    checks.push_back({name, std::isfinite(value) && std::abs(value) <= threshold, value, threshold});
  }
  void check_flag(const std::string& name, bool passed, double value, double threshold) {
    checks.push_back({name, passed, value, threshold});
  }

  void save_csv(const CsvTable& t, const std::string& name) {
    t.write(opt.out_dir + "/" + name);
    outputs.push_back(name);
  }

  int finish(Json parameters, Json results) {
    Json summary = Json::object();
    summary.add("schema", Json::str("mbq-summary-v1"));
    summary.add("scenario", Json::str(sc.name));
    summary.add("experiment", Json::str(experiment));
    summary.add("model", Json::str(sc.model));
    summary.add("seed", Json::integer(sc.seed));
    if (!opt.reproducible) summary.add("timestamp", Json::str(iso_timestamp()));
    summary.add("parameters", std::move(parameters));
    summary.add("results", std::move(results));
    Json jchecks = Json::array();
    bool ok = true;
    for (const auto& c : checks) {
      ok = ok && c.passed;
      Json e = Json::object();
      e.add("name", Json::str(c.name));
      e.add("passed", Json::boolean(c.passed));
      e.add("value", Json::num(c.value));
      e.add("threshold", Json::num(c.threshold));
      jchecks.push(std::move(e));
    }
    summary.add("checks", std::move(jchecks));
    Json jout = Json::array();
    outputs.push_back("summary.json");
    for (const auto& f : outputs) jout.push(Json::str(f));
    summary.add("outputs", std::move(jout));
    summary.write(opt.out_dir + "/summary.json");
    return ok ? 0 : 1;
  }
};

// ---------------------------------------------------------------------------
// scenario -> model parameters

Json params_json(const QubitParams& p) {
  Json j = Json::object();
  j.add("E1", Json::num(p.E[0]));
  j.add("E2", Json::num(p.E[1]));
  j.add("lambda1", Json::num(p.lambda[0]));
  j.add("lambda2", Json::num(p.lambda[1]));
  j.add("lambda12", Json::num(p.lambda12));
  j.add("kappa_re", Json::num(p.kappa.real()));
  j.add("kappa_im", Json::num(p.kappa.imag()));
  j.add("kappa_prime", Json::num(p.kappa_prime));
  return j;
}

Json sums_json(const CondensateSums& s) {
  Json j = Json::object();
  j.add("n_per_sample", Json::integer(s.n));
  j.add("k1_index", Json::integer(s.k_index[0]));
  j.add("k2_index", Json::integer(s.k_index[1]));
  for (int m = 0; m < 2; ++m) {
    std::string suf = m == 0 ? "_1" : "_2";
    j.add("J0" + suf, Json::num(s.J0[m]));
    j.add("Dt0" + suf, Json::num(s.Dt0[m]));
    j.add("Dzz0" + suf, Json::num(s.Dzz0[m]));
    j.add("Jk" + suf, Json::num(s.Jk[m]));
    j.add("Dtk" + suf, Json::num(s.Dtk[m]));
    j.add("T0" + suf, Json::num(s.T0(m)));
    j.add("L0" + suf, Json::num(s.L0(m)));
    j.add("Tk" + suf, Json::num(s.Tk(m)));
  }
  j.add("cross_T_re", Json::num(s.cross_T.real()));
  j.add("cross_T_im", Json::num(s.cross_T.imag()));
  j.add("cross_T00", Json::num(s.cross_T00));
  j.add("cross_L00", Json::num(s.cross_L00));
  return j;
}

// Dispersion value A(k) = S (h + L(0) - T(k)) used for band output and the
// condensate-wavevector default of the double-well model.
double band_energy(const FourierTable& tf, const LatticeSpec& lat, int sample, int k,
                   double* imag_residual = nullptr) {
  cplx T = tf.intra(sample, k).transverse();
  cplx L0 = tf.intra(sample, 0).longitudinal();
  if (imag_residual) {
    double scale = std::max({1.0, std::abs(T), std::abs(L0)});
    *imag_residual = std::max(std::abs(T.imag()), std::abs(L0.imag())) / scale;
  }
  return lat.spin[sample] * (lat.field[sample] + L0.real() - T.real());
}

int dispersion_argmin(const FourierTable& tf, const LatticeSpec& lat, int sample) {
  int best = 0;
  double best_e = band_energy(tf, lat, sample, 0);
  for (int k = 1; k < tf.grid.size(); ++k) {
    double e = band_energy(tf, lat, sample, k);
    if (e < best_e - 1e-12 * std::max(1.0, std::abs(best_e))) {
      best = k;
      best_e = e;
    }
  }
  return best;
}

QubitParams direct_params(const ConfigFile& cfg) {
  QubitParams p;
  p.E = {cfg.get_number("params", "E1"), cfg.get_number("params", "E2")};
  p.lambda = {cfg.get_number("params", "lambda1"), cfg.get_number("params", "lambda2")};
  p.lambda12 = cfg.get_number("params", "lambda12");
  p.kappa = cplx(cfg.get_number("params", "kappa_re", 0.0), cfg.get_number("params", "kappa_im", 0.0));
  p.kappa_prime = cfg.get_number("params", "kappa_prime", 0.0);
  p.src.n = (int)cfg.get_integer("params", "n", 1);
  if (p.src.n < 1) throw ConfigError("[params] n: must be >= 1");
  return p;
}

struct ParamSource {
  QubitParams p;
  bool direct = false;  // true when read from [params] rather than a lattice
};

// Model parameters from the scenario: a [params] section wins; otherwise the
// lattice route selected by the model name. `k0` is the continuous condensate
// wavevector (x axis) used by the films model.
ParamSource acquire_params(const Scenario& sc, double k0) {
  if (has_section(sc.cfg, "params")) return {direct_params(sc.cfg), true};
  if (!sc.lattice)
    throw ConfigError("scenario has neither a [lattice] nor a [params] section");
  const LatticeSpec& lat = *sc.lattice;
  const CouplingTable& table = *sc.table;
  if (sc.model == "films") {
    Vec3 k(k0, 0.0, 0.0);
    return {params_from_condensate_sums(condensate_sums_continuous(table, lat, k, k)), false};
  }
  FourierTable tf = build_fourier_table(table, lat);
  if (sc.model == "basic") return {basic_params(tf, lat), false};
  int def1 = 0, def2 = 0;
  if (sc.model == "double-well") {
    def1 = dispersion_argmin(tf, lat, 0);
    def2 = dispersion_argmin(tf, lat, 1);
  }
  long k1 = sc.cfg.get_integer("model", "k1_index", def1);
  long k2 = sc.cfg.get_integer("model", "k2_index", def2);
  if (k1 < 0 || k1 >= tf.grid.size() || k2 < 0 || k2 >= tf.grid.size())
    throw ConfigError("[model] k1_index/k2_index: outside the reciprocal grid");
  return {double_well_params(tf, lat, (int)k1, (int)k2), false};
}

// Cross-pair bond constant J12 + D12^zz read off the closest inter-sample
// pair; meaningful for nearest-neighbour stacks where the cross sum per site
// reduces to this single bond.
double bond_constant(const LatticeSpec& lat, const CouplingTable& table) {
  int n = lat.n_per_sample;
  double best_r = -1.0, value = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = n; j < 2 * n; ++j) {
      double r = lat.displacement(i, j).norm();
      if (best_r < 0.0 || r < best_r - 1e-12) {
        best_r = r;
        value = table.longitudinal(i, j);
      }
    }
  if (best_r < 0.0) throw std::runtime_error("bond constant: lattice has no cross pairs");
  return value;
}

// ---------------------------------------------------------------------------
// experiments

int run_dispersion(const Scenario& sc, const ScenarioOptions& opt) {
  if (!sc.lattice) throw ConfigError("dispersion requires a [lattice] scenario");
  const LatticeSpec& lat = *sc.lattice;
  const CouplingTable& table = *sc.table;
  RunIO io(sc, opt, "dispersion");
  FourierTable tf = build_fourier_table(table, lat);
  int nk = tf.grid.size();

  CsvTable bands({"sample", "k_index", "kx", "ky", "kz", "energy"});
  CsvTable comps({"sample", "k_index", "kx", "ky", "kz", "component", "re", "im"});
  const char* comp_names[7] = {"J", "Dxx", "Dyy", "Dzz", "Dxy", "Dxz", "Dyz"};
  double max_imag = 0.0;
  Json minima = Json::array();
  for (int s = 0; s < 2; ++s) {
    int best = 0;
    double best_e = 0.0;
    for (int k = 0; k < nk; ++k) {
      double im = 0.0;
      double e = band_energy(tf, lat, s, k, &im);
      max_imag = std::max(max_imag, im);
      Vec3 kv = tf.grid.k(k);
      bands.row({std::to_string(s + 1), std::to_string(k), g17(kv[0]), g17(kv[1]), g17(kv[2]),
                 g17(e)});
      if (k == 0 || e < best_e) {
        best = k;
        best_e = e;
      }
      TransformValue v = tf.intra(s, k);
      cplx vals[7] = {v.J, v.D[0], v.D[1], v.D[2], v.D[3], v.D[4], v.D[5]};
      for (int c = 0; c < 7; ++c)
        comps.row({std::to_string(s + 1), std::to_string(k), g17(kv[0]), g17(kv[1]), g17(kv[2]),
                   comp_names[c], g17(vals[c].real()), g17(vals[c].imag())});
    }
    Json m = Json::object();
    m.add("sample", Json::integer(s + 1));
    m.add("k_index", Json::integer(best));
    m.add("energy", Json::num(best_e));
    minima.push(std::move(m));
  }
  io.save_csv(bands, "dispersion.csv");
  io.save_csv(comps, "fourier.csv");
  io.check("transform_reality", max_imag, 1e-9);

  Json results = Json::object();
  results.add("n_k", Json::integer(nk));
  results.add("minima", std::move(minima));

  // independent cross-check against the exact one-magnon energies (available
  // for decoupled, axially symmetric, translation-invariant samples)
  bool oracle_ran = false;
  std::string oracle_note;
  double max_dev = 0.0;
  try {
    CsvTable orc({"sample", "k_index", "energy_model", "energy_exact", "deviation"});
    for (int s = 0; s < 2; ++s) {
      auto pts = exact_dispersion(lat, table, s);
      for (const auto& pt : pts) {
        double model = band_energy(tf, lat, s, pt.k_index);
        double dev = std::abs(model - pt.energy);
        max_dev = std::max(max_dev, dev);
        orc.row({std::to_string(s + 1), std::to_string(pt.k_index), g17(model), g17(pt.energy),
                 g17(dev)});
      }
    }
    io.save_csv(orc, "oracle.csv");
    oracle_ran = true;
  } catch (const std::exception& e) {
    oracle_note = e.what();
  }
  if (oracle_ran) {
    io.check("dispersion_oracle", max_dev, 1e-10);
    results.add("oracle_max_deviation", Json::num(max_dev));
  } else {
    results.add("oracle", Json::str("skipped: " + oracle_note));
  }

  if (sc.cfg.get_flag("output", "plot_data", false)) {
    CsvTable plot({"x", "y", "series"});
    for (int s = 0; s < 2; ++s)
      for (int k = 0; k < nk; ++k)
        plot.row({std::to_string(k), g17(band_energy(tf, lat, s, k)),
                  std::string("sample-") + std::to_string(s + 1)});
    io.save_csv(plot, "plot.csv");
  }

  Json parameters = Json::object();
  parameters.add("n_per_sample", Json::integer(lat.n_per_sample));
  parameters.add("spin1", Json::num(lat.spin[0]));
  parameters.add("spin2", Json::num(lat.spin[1]));
  parameters.add("h1", Json::num(lat.field[0]));
  parameters.add("h2", Json::num(lat.field[1]));
  return io.finish(std::move(parameters), std::move(results));
}

int run_qubit(const Scenario& sc, const ScenarioOptions& opt) {
  RunIO io(sc, opt, "qubit");
  long n_t = sc.cfg.get_integer("qubit", "n_t", 5);
  if (n_t < 1 || n_t > 200) throw ConfigError("[qubit] n_t: must be in 1..200");
  double k0 = sc.cfg.get_number("model", "k0", 0.0);
  ParamSource ps = acquire_params(sc, k0);
  const QubitParams& p = ps.p;

  Json results = Json::object();
  if (!ps.direct) results.add("condensate_sums", sums_json(p.src));

  // matching-condition residuals, by applicability
  Json residuals = Json::object();
  auto add_residual = [&](const char* name, SyncForm form) {
    try {
      residuals.add(name, Json::num(sync_residual(p, form)));
    } catch (const std::exception& e) {
      residuals.add(name, Json::str(std::string("skipped: ") + e.what()));
    }
  };
  add_residual("generic", SyncForm::generic);
  if (!ps.direct) {
    if (sc.model == "basic") {
      add_residual("equal_zero_k", SyncForm::equal_zero_k);
      add_residual("zero_transverse", SyncForm::zero_transverse);
    } else {
      add_residual("finite_k", SyncForm::finite_k);
      add_residual("equal_finite_k", SyncForm::equal_finite_k);
    }
  }
  results.add("residuals", std::move(residuals));

  try {
    SquareForm sq = square_form(p);
    Json j = Json::object();
    j.add("m1", Json::num(sq.m1));
    j.add("m2", Json::num(sq.m2));
    j.add("lambda_m", Json::num(sq.lambda_m));
    j.add("shift_m", Json::num(sq.shift_m));
    j.add("nt_coeff", Json::num(sq.nt_coeff));
    j.add("constant", Json::num(sq.constant));
    results.add("square_form", std::move(j));
  } catch (const std::exception& e) {
    results.add("square_form", Json::str(std::string("skipped: ") + e.what()));
  }
  try {
    SymmetricQubit sy = symmetric_qubit(p);
    Json j = Json::object();
    j.add("lambda", Json::num(sy.lambda));
    j.add("n_g", Json::num(sy.n_g));
    j.add("nt_coeff", Json::num(sy.nt_coeff));
    j.add("constant", Json::num(sy.constant));
    j.add("alt_ng_per_nt", Json::num(sy.alt_ng_per_nt));
    results.add("symmetric_qubit", std::move(j));
  } catch (const std::exception& e) {
    results.add("symmetric_qubit", Json::str(std::string("skipped: ") + e.what()));
  }

  QubitPair pair = select_qubit_pair(p, n_t);
  cplx K = pair_coupling(p, n_t);
  KReport rep = pair_coupling_report(p, n_t);
  TwoLevelModel tl = two_level(p, pair);
  {
    Json j = Json::object();
    j.add("n_t", Json::integer(n_t));
    j.add("n1", Json::integer(pair.n1));
    j.add("n2", Json::integer(pair.n2));
    results.add("pair", std::move(j));
  }
  {
    Json j = Json::object();
    j.add("K_re", Json::num(K.real()));
    j.add("K_im", Json::num(K.imag()));
    j.add("K_abs", Json::num(std::abs(K)));
    j.add("alt_re", Json::num(rep.alt_normalized.real()));
    j.add("alt_im", Json::num(rep.alt_normalized.imag()));
    j.add("normalization_discrepancy", Json::num(rep.discrepancy));
    results.add("coupling", std::move(j));
  }
  {
    Json j = Json::object();
    j.add("g", Json::num(tl.g));
    j.add("delta", Json::num(tl.delta));
    j.add("omega", Json::num(tl.omega));
    j.add("max_transfer", Json::num(tl.max_transfer));
    j.add("t_first_max", Json::num(tl.t_first_max));
    results.add("two_level", std::move(j));
  }

  // matrix-level sanity on the working shell, plus cap-doubling invariance
  BosonTermSum terms = qubit_terms(p);
  FockSpace space = FockSpace::build({(int)n_t, (int)n_t}, (int)n_t);
  Eigen::MatrixXcd h = build_fock_matrix(terms, space);
  io.check("hermiticity", hermiticity_residual(h), 1e-12);
  io.check("number_conservation", number_commutator_residual(h, space), 1e-12);
  FockSpace space2 = FockSpace::build({2 * (int)n_t, 2 * (int)n_t}, (int)n_t);
  Eigen::MatrixXcd h2 = build_fock_matrix(terms, space2);
  double rel = 0.0;
  if (h.rows() == h2.rows()) {
    double denom = std::max(1.0, h.cwiseAbs().maxCoeff());
    rel = (h - h2).cwiseAbs().maxCoeff() / denom;
  } else {
    rel = std::numeric_limits<double>::infinity();
  }
  io.check("cap_doubling_invariance", rel, 1e-8);

  CsvTable t({"E1", "E2", "lambda1", "lambda2", "lambda12", "kappa_re", "kappa_im", "kappa_prime",
              "n_t", "n1", "n2", "g", "delta", "K_re", "K_im"});
  t.row({g17(p.E[0]), g17(p.E[1]), g17(p.lambda[0]), g17(p.lambda[1]), g17(p.lambda12),
         g17(p.kappa.real()), g17(p.kappa.imag()), g17(p.kappa_prime), std::to_string(n_t),
         std::to_string(pair.n1), std::to_string(pair.n2), g17(tl.g), g17(tl.delta), g17(K.real()),
         g17(K.imag())});
  io.save_csv(t, "params.csv");

  return io.finish(params_json(p), std::move(results));
}

// Residual evaluator shared by the synchronism experiment; `x` overrides
// either the condensate wavevector or the cross exchange constant.
struct SyncEvaluator {
  const Scenario& sc;
  std::string form;    // generic|equal-zero-k|zero-transverse|finite-k|equal-finite-k|bond|bond-equal
  std::string solve_for;  // none|k0|cross_J
  double k0_config = 0.0;

  double eval(double k0, const CouplingTable& table) const {
    const LatticeSpec& lat = *sc.lattice;
    if (form == "bond" || form == "bond-equal") {
      Vec3 k(k0, 0.0, 0.0);
      TransformValue v1 = intra_transform(table, lat, 0, k);
      TransformValue v10 = intra_transform(table, lat, 0, Vec3::Zero());
      TransformValue v2 = intra_transform(table, lat, 1, k);
      TransformValue v20 = intra_transform(table, lat, 1, Vec3::Zero());
      double B = bond_constant(lat, table);
      double T1k = v1.transverse().real(), L10 = v10.longitudinal().real();
      double T2k = v2.transverse().real(), L20 = v20.longitudinal().real();
      if (form == "bond") return sync_residual_bond(T1k, L10, T2k, L20, B);
      double scale = std::max({1.0, std::abs(T1k), std::abs(L10)});
      if (std::abs(T1k - T2k) > 1e-9 * scale || std::abs(L10 - L20) > 1e-9 * scale)
        throw std::runtime_error("bond-equal form requires identical samples");
      return sync_residual_bond_equal(T1k, L10, B);
    }
    Vec3 k(k0, 0.0, 0.0);
    QubitParams p = params_from_condensate_sums(condensate_sums_continuous(table, lat, k, k));
    return sync_residual(p, parse_param_form(form));
  }

  static SyncForm parse_param_form(const std::string& s) {
    if (s == "generic") return SyncForm::generic;
    if (s == "equal-zero-k") return SyncForm::equal_zero_k;
    if (s == "zero-transverse") return SyncForm::zero_transverse;
    if (s == "finite-k") return SyncForm::finite_k;
    if (s == "equal-finite-k") return SyncForm::equal_finite_k;
    throw ConfigError("[synchronism] form: unknown '" + s + "'");
  }
};

int run_synchronism(const Scenario& sc, const ScenarioOptions& opt) {
  RunIO io(sc, opt, "synchronism");
  std::string form = sc.cfg.get_string("synchronism", "form", "generic");
  std::string solve_for = sc.cfg.get_string("synchronism", "solve_for", "none");
  if (solve_for != "none" && solve_for != "k0" && solve_for != "cross_J")
    throw ConfigError("[synchronism] solve_for: unknown '" + solve_for + "'");
  bool bond_form = form == "bond" || form == "bond-equal";
  if (!bond_form) SyncEvaluator::parse_param_form(form);  // validate the name early

  Json parameters = Json::object();
  parameters.add("form", Json::str(form));
  parameters.add("solve_for", Json::str(solve_for));
  Json results = Json::object();

  // Direct-parameter scenarios only support the generic residual.
  if (has_section(sc.cfg, "params")) {
    if (form != "generic")
      throw ConfigError("[synchronism] form: only 'generic' is available with [params]");
    if (solve_for != "none")
      throw ConfigError("[synchronism] solve_for: unsupported with [params]");
    QubitParams p = direct_params(sc.cfg);
    results.add("residual_at_config", Json::num(sync_residual(p, SyncForm::generic)));
    return io.finish(std::move(parameters), std::move(results));
  }
  if (!sc.lattice) throw ConfigError("synchronism requires a [lattice] scenario");

  double k0 = sc.cfg.get_number("synchronism", "k0", sc.cfg.get_number("model", "k0", 0.0));
  parameters.add("k0", Json::num(k0));
  SyncEvaluator ev{sc, form, solve_for, k0};

  try {
    results.add("residual_at_config", Json::num(ev.eval(k0, *sc.table)));
  } catch (const std::exception& e) {
    results.add("residual_at_config", Json::str(std::string("undefined: ") + e.what()));
  }
  if (bond_form) results.add("bond_constant", Json::num(bond_constant(*sc.lattice, *sc.table)));

  if (solve_for == "none") return io.finish(std::move(parameters), std::move(results));

  double spacing = sc.lattice->grid ? sc.lattice->grid->spacing : 1.0;
  double lo, hi;
  if (solve_for == "k0") {
    lo = sc.cfg.get_number("synchronism", "lo", 0.0);
    hi = sc.cfg.get_number("synchronism", "hi", M_PI / spacing);
  } else {
    lo = sc.cfg.get_number("synchronism", "lo");
    hi = sc.cfg.get_number("synchronism", "hi");
  }
  long scan_points = sc.cfg.get_integer("synchronism", "scan_points", 512);
  if (!(hi > lo)) throw ConfigError("[synchronism] lo/hi: need lo < hi");
  if (scan_points < 2 || scan_points > 2000000)
    throw ConfigError("[synchronism] scan_points: must be in 2..2000000");
  parameters.add("lo", Json::num(lo));
  parameters.add("hi", Json::num(hi));
  parameters.add("scan_points", Json::integer(scan_points));

  std::function<double(double)> f;
  if (solve_for == "k0") {
    f = [&](double x) { return ev.eval(x, *sc.table); };
  } else {
    CouplingModel base = *sc.coupling;
    const LatticeSpec& lat = *sc.lattice;
    f = [&ev, base, &lat, k0](double x) {
      CouplingModel m = base;
      m.J12 = x;
      CouplingTable t = build_couplings(lat, m);
      return ev.eval(k0, t);
    };
  }

  // explicit scan for the CSV artifact (and the sign-change cross-check)
  CsvTable scan({"x", "residual", "status"});
  std::vector<ScanPoint> nodes;
  long sign_changes = 0;
  {
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (long i = 0; i <= scan_points; ++i) {
      double x = lo + (hi - lo) * (double)i / (double)scan_points;
      try {
        double fx = f(x);
        scan.row({g17(x), g17(fx), "ok"});
        if (std::isfinite(prev) && std::isfinite(fx) && prev * fx < 0.0) ++sign_changes;
        if (std::isfinite(fx)) nodes.push_back({x, fx});
        prev = fx;
      } catch (const std::exception& e) {
        scan.row({g17(x), "", sanitize_message(e.what())});
        prev = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  io.save_csv(scan, "scan.csv");
  results.add("scan_sign_changes", Json::integer(sign_changes));

  try {
    auto roots = solve_synchronism(f, lo, hi, (int)scan_points);
    CsvTable rt({"root", "residual"});
    Json jroots = Json::array();
    double max_res = 0.0;
    for (const auto& r : roots) {
      rt.row({g17(r.x), g17(r.residual)});
      Json jr = Json::object();
      jr.add("x", Json::num(r.x));
      jr.add("residual", Json::num(r.residual));
      jroots.push(std::move(jr));
      max_res = std::max(max_res, std::abs(r.residual));
    }
    io.save_csv(rt, "roots.csv");
    results.add("roots", std::move(jroots));
    io.check("root_residual", max_res, 1e-10);
    io.check_flag("root_found", true, (double)roots.size(), 0.0);
  } catch (const NoRootError& e) {
    results.add("roots", Json::array());
    results.add("root_search", Json::str(std::string("failed: ") + e.what()));
    io.check_flag("root_found", false, 0.0, 0.0);
  }
  return io.finish(std::move(parameters), std::move(results));
}

int run_evolve(const Scenario& sc, const ScenarioOptions& opt) {
  RunIO io(sc, opt, "evolve");
  const ConfigFile& cfg = sc.cfg;
  double t_end = cfg.get_number("evolve", "t_end");  // required; missing -> config error
  if (!(t_end > 0.0)) throw ConfigError("[evolve] t_end: must be > 0");
  long n_t = cfg.get_integer("evolve", "n_t");
  if (n_t < 1 || n_t > 300) throw ConfigError("[evolve] n_t: must be in 1..300");
  bool shell = cfg.get_flag("evolve", "shell", true);
  long cap = cfg.get_integer("evolve", "cap", shell ? n_t : 8);
  if (cap < 1 || cap > 400) throw ConfigError("[evolve] cap: must be in 1..400");
  if (shell && cap < n_t) throw ConfigError("[evolve] cap: must be >= n_t when shell is on");
  long samples = cfg.get_integer("evolve", "samples", 200);
  if (samples < 1 || samples > 2000000) throw ConfigError("[evolve] samples: must be in 1..2000000");
  std::string method_s = cfg.get_string("evolve", "method", "auto");
  Propagator method;
  if (method_s == "auto")
    method = Propagator::automatic;
  else if (method_s == "spectral")
    method = Propagator::spectral;
  else if (method_s == "krylov")
    method = Propagator::krylov;
  else
    throw ConfigError("[evolve] method: unknown '" + method_s + "'");
  double dt_max = cfg.get_number("evolve", "dt_max", 0.0);

  double k0 = cfg.get_number("model", "k0", 0.0);
  ParamSource ps = acquire_params(sc, k0);
  const QubitParams& p = ps.p;

  QubitPair pair{};
  bool have1 = cfg.has("evolve", "n1"), have2 = cfg.has("evolve", "n2");
  if (have1 && have2) {
    pair = {cfg.get_integer("evolve", "n1"), cfg.get_integer("evolve", "n2")};
    if (pair.n1 + pair.n2 != n_t)
      throw ConfigError("[evolve] n1/n2: must sum to n_t");
  } else if (have1) {
    pair = {cfg.get_integer("evolve", "n1"), n_t - cfg.get_integer("evolve", "n1")};
  } else if (have2) {
    pair = {n_t - cfg.get_integer("evolve", "n2"), cfg.get_integer("evolve", "n2")};
  } else {
    pair = select_qubit_pair(p, n_t);
  }
  if (pair.n1 < 0 || pair.n2 < 0 || pair.n1 > cap || pair.n2 > cap)
    throw ConfigError("[evolve] n1/n2: outside the occupation caps");

  BosonTermSum terms = qubit_terms(p);
  FockSpace space = shell ? FockSpace::build({(int)cap, (int)cap}, (int)n_t)
                          : FockSpace::build({(int)cap, (int)cap});
  Eigen::MatrixXcd h = build_fock_matrix(terms, space);
  io.check("hermiticity", hermiticity_residual(h), 1e-12);
  io.check("number_conservation", number_commutator_residual(h, space), 1e-12);

  long idx0 = state_index(space, pair.n1, pair.n2);
  if (idx0 < 0) throw ConfigError("[evolve] n1/n2: initial state outside the space");
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero((long)space.dim());
  psi0[idx0] = 1.0;

  PropagateOptions popt;
  popt.t_end = t_end;
  popt.n_samples = (int)samples;
  popt.method = method;
  popt.dt_max = dt_max;
  Trajectory traj = propagate(h, psi0, popt);
  io.check("norm_drift", traj.norm_drift, 1e-9);
  io.check("energy_drift", traj.energy_drift, 1e-9);

  std::vector<double> leak = leakage_series(traj, space, pair);
  LeakageSummary ls = summarize_leakage(leak);

  long idx1 = state_index(space, pair.n1 + 1, pair.n2 - 1);  // -1 when outside
  CsvTable tcsv({"t", "p_lower", "p_upper", "leakage", "norm", "energy"});
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    double n2w = traj.norm[i] * traj.norm[i];
    double pl = std::norm(traj.states((long)idx0, (long)i)) / n2w;
    double pu = idx1 >= 0 ? std::norm(traj.states(idx1, (long)i)) / n2w : 0.0;
    tcsv.row({g17(traj.times[i]), g17(pl), g17(pu), g17(leak[i]), g17(traj.norm[i]),
              g17(traj.energy[i])});
  }
  io.save_csv(tcsv, "trajectory.csv");

  Json results = Json::object();
  {
    Json j = Json::object();
    j.add("n1", Json::integer(pair.n1));
    j.add("n2", Json::integer(pair.n2));
    j.add("n_t", Json::integer(n_t));
    results.add("pair", std::move(j));
  }
  results.add("dim", Json::integer((long)space.dim()));
  bool spectral_used = method == Propagator::spectral ||
                       (method == Propagator::automatic && space.dim() <= 2000);
  results.add("method_used", Json::str(spectral_used ? "spectral" : "krylov"));
  results.add("norm_drift", Json::num(traj.norm_drift));
  results.add("energy_drift", Json::num(traj.energy_drift));
  {
    Json j = Json::object();
    j.add("max", Json::num(ls.max_leakage));
    j.add("final", Json::num(ls.final_leakage));
    results.add("leakage", std::move(j));
  }
  if (pair.n2 >= 1 && idx1 >= 0) {
    TwoLevelModel tl = two_level(p, pair);
    Json j = Json::object();
    j.add("g", Json::num(tl.g));
    j.add("delta", Json::num(tl.delta));
    j.add("omega", Json::num(tl.omega));
    j.add("max_transfer", Json::num(tl.max_transfer));
    j.add("t_first_max", Json::num(tl.t_first_max));
    results.add("two_level", std::move(j));
    RabiMeasurement rm = measure_rabi(h, psi0, idx1, t_end);
    Json jm = Json::object();
    jm.add("found", Json::boolean(rm.found));
    jm.add("t_first_max", Json::num(rm.t_first_max));
    jm.add("omega", Json::num(rm.omega));
    jm.add("peak_population", Json::num(rm.peak_population));
    results.add("measured", std::move(jm));
    if (rm.found && tl.omega > 0.0)
      results.add("omega_agreement", Json::num(std::abs(rm.omega - tl.omega) / tl.omega));
  }

  if (cfg.get_flag("output", "plot_data", false)) {
    CsvTable plot({"x", "y", "series"});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      double n2w = traj.norm[i] * traj.norm[i];
      plot.row({g17(traj.times[i]), g17(std::norm(traj.states(idx0, (long)i)) / n2w), "p_lower"});
      if (idx1 >= 0)
        plot.row({g17(traj.times[i]), g17(std::norm(traj.states(idx1, (long)i)) / n2w), "p_upper"});
      plot.row({g17(traj.times[i]), g17(leak[i]), "leakage"});
    }
    io.save_csv(plot, "plot.csv");
  }

  Json parameters = params_json(p);
  parameters.add("t_end", Json::num(t_end));
  parameters.add("samples", Json::integer(samples));
  parameters.add("method", Json::str(method_s));
  return io.finish(std::move(parameters), std::move(results));
}

int run_sweep(const Scenario& sc, const ScenarioOptions& opt) {
  RunIO io(sc, opt, "sweep");
  const ConfigFile& cfg = sc.cfg;
  std::string var = cfg.get_string("sweep", "variable");
  struct VarSpec {
    const char* name;
    const char* section;
    const char* key;
  };
  static const VarSpec kVars[] = {
      {"h1", "lattice", "h1"},         {"h2", "lattice", "h2"},
      {"gap", "lattice", "gap"},       {"spacing", "lattice", "spacing"},
      {"intra_J", "couplings", "intra_J"}, {"cross_J", "couplings", "cross_J"},
      {"dipole", "couplings", "dipole"},   {"k0", "model", "k0"},
  };
  const VarSpec* vs = nullptr;
  for (const auto& v : kVars)
    if (var == v.name) vs = &v;
  if (!vs) throw ConfigError("[sweep] variable: unknown '" + var + "'");
  double from = cfg.get_number("sweep", "from");
  double to = cfg.get_number("sweep", "to");
  long points = cfg.get_integer("sweep", "points");
  if (points < 1 || points > 1000000)
    throw ConfigError("[sweep] points: must be in 1..1000000 (empty sweeps are invalid)");
  if (!sc.lattice) throw ConfigError("sweep requires a [lattice] scenario");
  long n_t = cfg.get_integer("qubit", "n_t", 5);

  std::string model_residual_name =
      sc.model == "basic" ? "equal_zero_k" : (sc.model == "films" ? "finite_k" : "equal_finite_k");
  SyncForm model_form = sc.model == "basic"
                            ? SyncForm::equal_zero_k
                            : (sc.model == "films" ? SyncForm::finite_k : SyncForm::equal_finite_k);

  std::vector<double> values = linspace(from, to, points);
  std::vector<std::vector<std::string>> rows((std::size_t)points);
  long n_failed = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : n_failed)
  for (long i = 0; i < points; ++i) {
    std::vector<std::string>& row = rows[(std::size_t)i];
    try {
      ConfigFile c2 = cfg;
      c2.set(vs->section, vs->key, g17(values[(std::size_t)i]));
      Scenario s2 = load_scenario(c2);
      double k0 = c2.get_number("model", "k0", 0.0);
      QubitParams p;
      if (var == "k0") {
        Vec3 k(values[(std::size_t)i], 0.0, 0.0);
        p = params_from_condensate_sums(condensate_sums_continuous(*s2.table, *s2.lattice, k, k));
      } else {
        p = acquire_params(s2, k0).p;
      }
      std::string res_model, ng_cell;
      try {
        res_model = g17(sync_residual(p, model_form));
      } catch (const std::exception&) {
      }
      try {
        ng_cell = g17(symmetric_qubit(p).n_g);
      } catch (const std::exception&) {
      }
      QubitPair pair = select_qubit_pair(p, n_t);
      cplx K = pair_coupling(p, n_t);
      TwoLevelModel tl = two_level(p, pair);
      row = {std::to_string(i), g17(values[(std::size_t)i]), g17(p.E[0]), g17(p.E[1]),
             g17(p.lambda[0]), g17(p.lambda[1]), g17(p.lambda12), g17(p.kappa.real()),
             g17(p.kappa.imag()), g17(p.kappa_prime), g17(sync_residual(p, SyncForm::generic)),
             res_model, ng_cell, g17(K.real()), g17(K.imag()), g17(tl.g), g17(tl.delta), "ok", ""};
    } catch (const std::exception& e) {
      row = {std::to_string(i), g17(values[(std::size_t)i]), "", "", "", "", "", "", "", "",
             "", "", "", "", "", "", "", "error", sanitize_message(e.what())};
      n_failed += 1;
    }
  }

  CsvTable t({"index", "value", "E1", "E2", "lambda1", "lambda2", "lambda12", "kappa_re",
              "kappa_im", "kappa_prime", "residual_generic", "residual_model", "n_g", "K_re",
              "K_im", "g", "delta", "status", "message"});
  for (auto& r : rows) t.row(std::move(r));
  io.save_csv(t, "sweep.csv");

  Json parameters = Json::object();
  parameters.add("variable", Json::str(var));
  parameters.add("from", Json::num(from));
  parameters.add("to", Json::num(to));
  parameters.add("points", Json::integer(points));
  parameters.add("model_residual", Json::str(model_residual_name));
  Json results = Json::object();
  results.add("rows", Json::integer(points));
  results.add("failed_rows", Json::integer(n_failed));
  return io.finish(std::move(parameters), std::move(results));
}

int run_oracle_check(const Scenario& sc, const ScenarioOptions& opt) {
  if (!sc.lattice) throw ConfigError("oracle-check requires a [lattice] scenario");
  const LatticeSpec& lat = *sc.lattice;
  const CouplingTable& table = *sc.table;
  RunIO io(sc, opt, "oracle-check");
  Json results = Json::object();
  FourierTable tf = build_fourier_table(table, lat);
  int n = lat.n_per_sample, nk = tf.grid.size();

  // 1. exact one-magnon energies vs the quadratic diagonal
  try {
    double max_dev = 0.0;
    for (int s = 0; s < 2; ++s)
      for (const auto& pt : exact_dispersion(lat, table, s))
        max_dev = std::max(max_dev, std::abs(band_energy(tf, lat, s, pt.k_index) - pt.energy));
    io.check("dispersion_oracle", max_dev, 1e-10);
    results.add("dispersion_max_deviation", Json::num(max_dev));
  } catch (const std::exception& e) {
    results.add("dispersion_oracle", Json::str(std::string("skipped: ") + e.what()));
  }

  // 2. transform inversion back to the couplings
  {
    double max_dev = 0.0;
    for (int s = 0; s < 2; ++s) {
      int base = s * n;
      for (int j = 0; j < n; ++j) {
        Vec3 rho = lat.displacement(base, base + j);
        cplx acc = 0.0;
        for (int k = 0; k < nk; ++k)
          acc += tf.j_intra(s, k) * std::exp(cplx(0.0, tf.grid.k(k).dot(rho)));
        acc /= (double)nk;
        double expect = j == 0 ? 0.0 : table.J(base, base + j);
        max_dev = std::max(max_dev, std::abs(acc - expect));
      }
    }
    io.check("fourier_inversion", max_dev, 1e-12);
    results.add("fourier_inversion_max_deviation", Json::num(max_dev));
  }

  // 3. polarized reference energy: expansion constant vs spin expectation
  HPExpansion hp = hp_expand(lat, table);
  {
    double exact = polarized_energy(make_spin_system(lat, table));
    double dev = std::abs(hp.constant - exact) / std::max(1.0, std::abs(exact));
    io.check("polarized_reference", dev, 1e-12);
    results.add("polarized_reference_deviation", Json::num(dev));
  }

  // 4. real-space vs wavevector-space route equivalence on a truncated space
  long shell = sc.cfg.get_integer("oracle", "shell", 2);
  if (shell < 1 || shell > 4) throw ConfigError("[oracle] shell: must be in 1..4");
  if (2 * n <= 12) {
    std::vector<int> all(nk);
    for (int k = 0; k < nk; ++k) all[(std::size_t)k] = k;
    KSpaceHamiltonian ksp = kspace_coefficients(tf, lat, all, all);
    BosonTermSum route_a = to_kspace(hp.conserving, lat, ksp);
    FockSpace space = FockSpace::build(std::vector<int>(2 * (std::size_t)n, (int)shell), (int)shell);
    Eigen::MatrixXcd ha = build_fock_matrix(route_a, space);
    Eigen::MatrixXcd hb = build_fock_matrix(ksp.terms, space);
    double denom = std::max(1.0, hb.cwiseAbs().maxCoeff());
    double rel = (ha - hb).cwiseAbs().maxCoeff() / denom;
    io.check("route_equivalence", rel, 1e-10);
    io.check("hermiticity", hermiticity_residual(hb), 1e-12);
    io.check("number_conservation", number_commutator_residual(hb, space), 1e-12);
    results.add("route_equivalence_deviation", Json::num(rel));
    results.add("route_space_dim", Json::integer((long)space.dim()));
  } else {
    results.add("route_equivalence", Json::str("skipped: more than 12 sites total"));
  }

  Json parameters = Json::object();
  parameters.add("n_per_sample", Json::integer(n));
  parameters.add("shell", Json::integer(shell));
  return io.finish(std::move(parameters), std::move(results));
}

int run_scaling(const Scenario& sc, const ScenarioOptions& opt) {
  RunIO io(sc, opt, "scaling");
  double k0 = sc.cfg.get_number("model", "k0", 0.0);
  ParamSource ps = acquire_params(sc, k0);
  const QubitParams& p = ps.p;

  std::vector<long> occ = sc.cfg.has("scaling", "occupations")
                              ? sc.cfg.get_integers("scaling", "occupations")
                              : std::vector<long>{0, 1, 0, 4, 0, 9};
  if (occ.empty() || occ.size() % 2 != 0)
    throw ConfigError("[scaling] occupations: need a non-empty list of n1 n2 pairs");
  std::vector<QubitPair> pairs;
  for (std::size_t i = 0; i + 1 < occ.size(); i += 2) {
    if (occ[i] < 0 || occ[i + 1] < 1)
      throw ConfigError("[scaling] occupations: need n1 >= 0 and n2 >= 1");
    if (occ[i] + occ[i + 1] > 10000)
      throw ConfigError("[scaling] occupations: pair total too large");
    pairs.push_back({occ[i], occ[i + 1]});
  }

  std::vector<ScalingPoint> pts = scaling_study(p, pairs);
  // The measured frequency on the two-state restriction is the full
  // oscillation frequency, so the exact expectation carries the detuning:
  // omega/2 = sqrt(4 g^2 + delta^2)/2, which reduces to g on resonance.
  CsvTable t({"n_t", "n1", "n2", "g_predicted", "omega_half_predicted", "g_measured", "rel_error",
              "status"});
  Json jpts = Json::array();
  double max_rel = 0.0;
  bool all_found = true;
  for (const auto& pt : pts) {
    double expected = 0.5 * two_level(p, QubitPair{pt.n1, pt.n2}).omega;
    double rel = expected > 0.0 && pt.found ? std::abs(pt.g_measured - expected) / expected : 0.0;
    if (expected > 1e-300 && !pt.found) all_found = false;
    max_rel = std::max(max_rel, rel);
    t.row({std::to_string(pt.n1 + pt.n2), std::to_string(pt.n1), std::to_string(pt.n2),
           g17(pt.g_predicted), g17(expected), g17(pt.g_measured), g17(rel),
           pt.found ? "ok" : "flat"});
    Json j = Json::object();
    j.add("n_t", Json::integer(pt.n1 + pt.n2));
    j.add("n1", Json::integer(pt.n1));
    j.add("n2", Json::integer(pt.n2));
    j.add("g_predicted", Json::num(pt.g_predicted));
    j.add("omega_half_predicted", Json::num(expected));
    j.add("g_measured", Json::num(pt.g_measured));
    j.add("rel_error", Json::num(rel));
    jpts.push(std::move(j));
  }
  io.save_csv(t, "scaling.csv");
  io.check_flag("scaling_agreement", all_found && max_rel <= 1e-6, max_rel, 1e-6);

  Json parameters = params_json(p);
  Json results = Json::object();
  results.add("points", std::move(jpts));
  return io.finish(std::move(parameters), std::move(results));
}

}  // namespace

// ---------------------------------------------------------------------------
// scenario loading

Scenario load_scenario(const ConfigFile& cfg) {
  Scenario sc;
  sc.cfg = cfg;
  sc.name = cfg.get_string("scenario", "name", "unnamed");
  sc.model = cfg.get_string("scenario", "model", "basic");
  if (sc.model != "basic" && sc.model != "double-well" && sc.model != "small-sample" &&
      sc.model != "films")
    throw ConfigError("[scenario] model: unknown '" + sc.model +
                      "' (expected basic, double-well, small-sample or films)");
  sc.seed = cfg.get_integer("scenario", "seed", 0);

  if (!has_section(cfg, "lattice")) {
    if (!has_section(cfg, "params"))
      throw ConfigError("scenario needs a [lattice] section (or a [params] override)");
    return sc;
  }

  std::string preset = cfg.get_string("lattice", "preset", "ring");
  double spacing = cfg.get_number("lattice", "spacing", 1.0);
  double gap = cfg.get_number("lattice", "gap", 1.0);
  if (!(spacing > 0.0)) throw ConfigError("[lattice] spacing: must be > 0");
  if (!(gap > 0.0)) throw ConfigError("[lattice] gap: must be > 0");
  double S1 = cfg.get_number("lattice", "spin1", 0.5);
  double S2 = cfg.get_number("lattice", "spin2", 0.5);
  double h1 = cfg.get_number("lattice", "h1", 0.0);
  double h2 = cfg.get_number("lattice", "h2", 0.0);

  std::array<int, 3> dims{1, 1, 1};
  if (preset == "ring") {
    long nsites = cfg.get_integer("lattice", "n");
    if (nsites < 1 || nsites > 100000) throw ConfigError("[lattice] n: must be in 1..100000");
    dims = {(int)nsites, 1, 1};
  } else if (preset == "film" || preset == "box") {
    std::vector<long> d = cfg.get_integers("lattice", "dims");
    std::size_t want = preset == "film" ? 2 : 3;
    if (d.size() != want)
      throw ConfigError("[lattice] dims: expected " + std::to_string(want) + " entries for " +
                        preset);
    for (std::size_t a = 0; a < want; ++a) {
      if (d[a] < 1 || d[a] > 4096) throw ConfigError("[lattice] dims: entries must be in 1..4096");
      dims[a] = (int)d[a];
    }
  } else {
    throw ConfigError("[lattice] preset: unknown '" + preset + "' (expected ring, film or box)");
  }
  if ((long)dims[0] * dims[1] * dims[2] > 100000)
    throw ConfigError("[lattice] dims: more than 100000 sites per sample");

  LatticeSpec lat;
  try {
    lat = make_lattice(dims, spacing, gap, S1, S2, h1, h2);
    lat.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[lattice] ") + e.what());
  }

  auto parse_model = [](const std::string& key, const std::string& s) {
    if (s == "none") return ExchangeModel::none;
    if (s == "uniform") return ExchangeModel::uniform;
    if (s == "nearest_neighbor" || s == "nearest-neighbor") return ExchangeModel::nearest_neighbor;
    if (s == "table") return ExchangeModel::table;
    throw ConfigError("[couplings] " + key + ": unknown '" + s + "'");
  };
  CouplingModel cm;
  cm.intra = parse_model("intra_model", cfg.get_string("couplings", "intra_model", "uniform"));
  cm.J = cfg.get_number("couplings", "intra_J", 0.0);
  cm.cross = parse_model("cross_model", cfg.get_string("couplings", "cross_model", "none"));
  cm.J12 = cfg.get_number("couplings", "cross_J", 0.0);
  cm.d = cfg.get_number("couplings", "dipole", 0.0);
  if (cfg.has("couplings", "dipole_cross"))
    cm.d_cross = cfg.get_number("couplings", "dipole_cross");
  if (cfg.has("couplings", "pair_entries")) {
    std::vector<double> e = cfg.get_numbers("couplings", "pair_entries");
    if (e.size() % 3 != 0)
      throw ConfigError("[couplings] pair_entries: need (site_i site_j J) triples");
    for (std::size_t t = 0; t + 2 < e.size(); t += 3) {
      int i = (int)std::lround(e[t]), j = (int)std::lround(e[t + 1]);
      if (i < 0 || j < 0 || i >= lat.n_sites() || j >= lat.n_sites() || i == j)
        throw ConfigError("[couplings] pair_entries: invalid site pair");
      cm.J_entries.emplace_back(i, j, e[t + 2]);
    }
  }
  sc.lattice = lat;
  sc.coupling = cm;
  try {
    sc.table = build_couplings(lat, cm);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[couplings] ") + e.what());
  }
  return sc;
}

int run_experiment(const std::string& experiment, const ConfigFile& cfg,
                   const ScenarioOptions& opt) {
  Scenario sc = load_scenario(cfg);
  if (experiment == "dispersion") return run_dispersion(sc, opt);
  if (experiment == "qubit") return run_qubit(sc, opt);
  if (experiment == "synchronism") return run_synchronism(sc, opt);
  if (experiment == "evolve") return run_evolve(sc, opt);
  if (experiment == "sweep") return run_sweep(sc, opt);
  if (experiment == "oracle-check") return run_oracle_check(sc, opt);
  if (experiment == "scaling") return run_scaling(sc, opt);
  throw ConfigError("unknown experiment '" + experiment + "'");
}

// ---------------------------------------------------------------------------
// report rendering

int run_report(const std::string& results_path, const ScenarioOptions& opt) {
  std::ifstream f(results_path);
  if (!f) throw ConfigError("report: cannot open '" + results_path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("report: corrupt results file: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("report: corrupt results file: top level is not an object");

  std::ostringstream out;
  bool all_ok = true;
  if (!j.contains("experiment") && !j.contains("checks")) {
    out << "no experiments run\n";
  } else {
    for (const char* key : {"scenario", "experiment", "model"})
      if (j.contains(key) && j[key].is_string())
        out << key << ": " << j[key].get<std::string>() << "\n";
    if (j.contains("results") && j["results"].is_object()) {
      out << "results:\n";
      for (auto it = j["results"].begin(); it != j["results"].end(); ++it) {
        const auto& v = it.value();
        if (v.is_object()) {
          for (auto s = v.begin(); s != v.end(); ++s)
            if (s.value().is_primitive())
              out << "  " << it.key() << "." << s.key() << " = " << s.value().dump() << "\n";
        } else if (v.is_array()) {
          out << "  " << it.key() << ": " << v.size() << " entries\n";
        } else {
          out << "  " << it.key() << " = " << v.dump() << "\n";
        }
      }
    }
    long n_checks = 0, n_failed = 0;
    if (j.contains("checks")) {
      if (!j["checks"].is_array())
        throw ConfigError("report: corrupt results file: 'checks' is not an array");
      out << "checks:\n";
      for (const auto& c : j["checks"]) {
        if (!c.is_object() || !c.contains("name") || !c.contains("passed"))
          throw ConfigError("report: corrupt results file: malformed check entry");
        bool passed = c["passed"].get<bool>();
        ++n_checks;
        if (!passed) {
          ++n_failed;
          all_ok = false;
        }
        out << "  " << (passed ? "PASS" : "FAIL") << " " << c["name"].get<std::string>();
        if (c.contains("value") && c["value"].is_number())
          out << " (value " << c["value"].dump() << ", threshold "
              << (c.contains("threshold") ? c["threshold"].dump() : "-") << ")";
        out << "\n";
      }
    }
    if (all_ok)
      out << "overall: PASS (" << n_checks << " checks)\n";
    else
      out << "overall: FAIL (" << n_failed << " of " << n_checks << " checks failed)\n";
  }

  std::fputs(out.str().c_str(), stdout);
  fs::create_directories(opt.out_dir);
  std::ofstream rf(opt.out_dir + "/report.txt");
  rf << out.str();
  return all_ok ? 0 : 1;
}

}  // namespace mbq
