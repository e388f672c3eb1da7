// Copyright 2026 The Poissonization Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POISSON_SUITE_HPP
#define POISSON_SUITE_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "poisson/channels.hpp"
#include "poisson/entropy.hpp"
#include "poisson/io.hpp"
#include "poisson/modular.hpp"
#include "poisson/moments.hpp"
#include "poisson/random.hpp"
#include "poisson/words.hpp"

namespace poisson {

inline constexpr const char *kReportSchemaVersion = "1.0";

inline const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names = {
      "moments", "gram",    "fock",    "kms",       "classify",
      "channels", "independence", "entropy", "bernoulli", "classical"};
  return names;
}

/** Inclusive range a:b:step. */
struct LevelRange {
  int start = 5, stop = 30, step = 5;

  static LevelRange parse(const std::string &s) {
    LevelRange r;
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    if (!(in >> r.start >> c1 >> r.stop >> c2 >> r.step) || c1 != ':' || c2 != ':' ||
        r.step <= 0 || r.start < 0 || r.stop < r.start)
      throw FormatError("levels must look like a:b:step");
    return r;
  }

  std::vector<int> values() const {
    std::vector<int> v;
    for (int l = start; l <= stop; l += step) v.push_back(l);
    return v;
  }

  std::string str() const {
    return std::to_string(start) + ":" + std::to_string(stop) + ":" + std::to_string(step);
  }
};

struct ExperimentConfig {
  std::string suite;
  std::uint64_t seed = 1;
  /** Algebra specs; random instances cycle through them. */
  std::vector<std::vector<int>> algebras = {{2}, {3}};
  /** Fixed weight replacing the generator where a suite uses one weight per instance. */
  std::optional<json> weight;
  double max_mass = 1.0;
  /** 0 selects the suite default. */
  int instances = 0;
  /** 0 selects 4 for oracle suites and 6 for closed-form suites. */
  int max_word_length = 0;
  /** 0 selects the suite default tolerance. */
  double tol = 0.0;
  /** Largest truncation level the GNS oracle may use. */
  int max_level = 48;
  std::vector<double> lambdas = {0.5, 1.7, 4.0};
  std::vector<std::uint64_t> n_copies = {64, 128, 256};
  LevelRange levels;
  int growth_samples = 1000;
  std::string out;
  std::string csv_prefix;
  bool stable_output = false;
  /** 0 uses the hardware concurrency. */
  int threads = 0;

  void validate() const {
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
      throw FormatError("unknown suite: " + suite);
    if (algebras.empty()) throw FormatError("at least one algebra spec is needed");
    for (const auto &a : algebras) Algebra{a};
    if (!(max_mass > 0.0)) throw FormatError("max_mass must be positive");
    if (instances < 0 || max_word_length < 0 || tol < 0.0 || threads < 0)
      throw FormatError("counts and tolerances must be nonnegative");
    if (max_level < 1 || max_level > kMaxGnsLevel) throw FormatError("max_level out of range");
    for (double l : lambdas)
      if (!(l > 0.0)) throw FormatError("lambdas must be positive");
    for (auto n : n_copies)
      if (n == 0) throw FormatError("n_copies must be positive");
  }
};

inline json config_to_json(const ExperimentConfig &c) {
  json j = {{"suite", c.suite},
            {"seed", c.seed},
            {"algebras", c.algebras},
            {"max_mass", c.max_mass},
            {"instances", c.instances},
            {"max_word_length", c.max_word_length},
            {"tol", c.tol},
            {"max_level", c.max_level},
            {"lambdas", c.lambdas},
            {"n_copies", c.n_copies},
            {"levels", c.levels.str()},
            {"growth_samples", c.growth_samples},
            {"threads", c.threads}};
  if (c.weight) j["weight"] = *c.weight;
  return j;
}

/** Missing keys keep their defaults. Output paths are not part of the file. */
inline ExperimentConfig config_from_json(const json &j, ExperimentConfig c = {}) {
  try {
    if (j.contains("suite")) c.suite = j["suite"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("algebras")) c.algebras = j["algebras"].get<std::vector<std::vector<int>>>();
    if (j.contains("weight")) c.weight = j["weight"];
    if (j.contains("max_mass")) c.max_mass = j["max_mass"].get<double>();
    if (j.contains("instances")) c.instances = j["instances"].get<int>();
    if (j.contains("max_word_length")) c.max_word_length = j["max_word_length"].get<int>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("max_level")) c.max_level = j["max_level"].get<int>();
    if (j.contains("lambdas")) c.lambdas = j["lambdas"].get<std::vector<double>>();
    if (j.contains("n_copies")) c.n_copies = j["n_copies"].get<std::vector<std::uint64_t>>();
    if (j.contains("levels")) c.levels = LevelRange::parse(j["levels"].get<std::string>());
    if (j.contains("growth_samples")) c.growth_samples = j["growth_samples"].get<int>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
  } catch (const json::exception &e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  return c;
}

struct Record {
  std::string name;
  json computed;
  json reference;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

inline json record_to_json(const Record &r) {
  json j = {{"name", r.name},         {"computed", r.computed}, {"reference", r.reference},
            {"residual", r.residual}, {"tolerance", r.tolerance}, {"pass", r.pass}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  json config;
  std::vector<Record> records;
  std::map<std::string, Table> tables;
  bool pass = false;
  double wall_time = 0.0;
  json environment;
};

inline json environment_stamp(bool stable) {
  json env = {{"compiler", __VERSION__},
              {"cxx_standard", static_cast<long>(__cplusplus)},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)}};
  if (!stable) {
    env["hardware_threads"] = std::thread::hardware_concurrency();
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    env["timestamp"] = ts.str();
  }
  return env;
}

/** With stable = true the wall time and timestamp are omitted. */
inline json report_to_json(const Report &r, bool stable) {
  json j = {{"schema_version", kReportSchemaVersion},
            {"suite", r.suite},
            {"seed", r.seed},
            {"config", r.config},
            {"pass", r.pass},
            {"environment", r.environment}};
  std::size_t failed = 0;
  json recs = json::array();
  for (const auto &rec : r.records) {
    recs.push_back(record_to_json(rec));
    if (!rec.pass) ++failed;
  }
  j["summary"] = {{"records", r.records.size()}, {"failed", failed}};
  j["records"] = recs;
  json tables = json::object();
  for (const auto &[name, t] : r.tables) tables[name] = {{"columns", t.columns}, {"rows", t.rows}};
  j["tables"] = tables;
  if (!stable) j["wall_time_seconds"] = r.wall_time;
  return j;
}

/** One CSV file per table: <prefix>_<table>.csv. Returns the paths written. */
inline std::vector<std::string> write_csv_tables(const Report &r, const std::string &prefix) {
  std::vector<std::string> paths;
  for (const auto &[name, t] : r.tables) {
    const std::string path = prefix + "_" + name + ".csv";
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      out << (c ? "," : "") << t.columns[c];
    out << '\n';
    out << std::setprecision(17);
    for (const auto &row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
      out << '\n';
    }
    paths.push_back(path);
  }
  return paths;
}

// --------------------------------------------------------------------------
// Work pool.

struct CheckOutput {
  std::vector<Record> records;
  /** (table name, row) pairs appended in order. */
  std::vector<std::pair<std::string, std::vector<double>>> rows;
};

struct Check {
  std::string name;
  std::function<CheckOutput()> run;
};

/**
 * Runs the checks on a pool of threads. Outputs are stored per check and
 * assembled in submission order. Exceptions become failed records.
 */
inline std::vector<CheckOutput> run_checks(const std::vector<Check> &checks, int threads) {
  std::vector<CheckOutput> out(checks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < checks.size(); i = next++) {
      try {
        out[i] = checks[i].run();
      } catch (const std::exception &e) {
        Record r;
        r.name = checks[i].name;
        r.residual = std::numeric_limits<double>::infinity();
        r.note = e.what();
        out[i] = {{r}, {}};
      }
    }
  };
  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, std::min<int>(n, static_cast<int>(checks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();
  return out;
}

namespace detail {

inline json cplx_json(cplx z) { return complex_to_json(z); }

inline Record make_record(std::string name, json computed, json reference, double residual,
                          double tol, std::string note = {}) {
  Record r{std::move(name), std::move(computed), std::move(reference), residual, tol,
           residual <= tol, std::move(note)};
  return r;
}

inline Record compare(std::string name, cplx computed, cplx reference, double tol) {
  return make_record(std::move(name), cplx_json(computed), cplx_json(reference),
                     std::abs(computed - reference), tol);
}

inline Record compare(std::string name, double computed, double reference, double tol) {
  return make_record(std::move(name), computed, reference, std::abs(computed - reference), tol);
}

inline Record flag(std::string name, bool ok, double residual = 0.0, std::string note = {}) {
  Record r{std::move(name), ok, true, residual, 0.0, ok, std::move(note)};
  return r;
}

inline std::string indexed(const std::string &base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

struct SuiteContext {
  const ExperimentConfig &cfg;

  Algebra algebra(std::size_t i) const { return Algebra(cfg.algebras[i % cfg.algebras.size()]); }
  int instances(int fallback) const { return cfg.instances > 0 ? cfg.instances : fallback; }
  double tol(double fallback) const { return cfg.tol > 0.0 ? cfg.tol : fallback; }
  int oracle_length() const { return cfg.max_word_length > 0 ? cfg.max_word_length : 4; }
  int closed_length() const { return cfg.max_word_length > 0 ? cfg.max_word_length : 6; }

  /** Configured weight, or a random faithful one with mass in [0.2, max_mass]. */
  Weight weight(Rng &rng, std::size_t i) const {
    if (cfg.weight) return weight_from_json(*cfg.weight);
    return random_faithful_weight(rng, algebra(i), uniform(rng, 0.2, cfg.max_mass));
  }

  Letters letters(Rng &rng, const Algebra &a, int n) const {
    Letters l;
    for (int k = 0; k < n; ++k) l.push_back(random_contraction(rng, a));
    return l;
  }
};

inline int random_int(Rng &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline OracleValue oracle_moment(const MomentQuery &q, double tol, int max_level) {
  const auto space = GnsSpace::create(q.weight);
  const PoissonWord word{WordKind::Lambda, q.factors};
  return oracle_inner(
      [&](int level) {
        return std::make_pair(vacuum(space, level), build_word_vector(word, space, level));
      },
      static_cast<int>(q.factors.size()), std::max(q.weight.mass(), 1e-3),
      std::max(1.0, letter_norm_product(q.factors)), tol, max_level);
}

// --------------------------------------------------------------------------
// Suites.

inline std::vector<Check> classical_suite(const SuiteContext &ctx, Report &rep) {
  rep.tables["classical_pmf"] = {{"lambda", "k", "pmf", "gns_level_weight"}, {}};
  const double tol = ctx.tol(1e-12);
  std::vector<Check> checks;
  for (double lam : ctx.cfg.lambdas) {
    checks.push_back({"classical", [lam, tol] {
      CheckOutput out;
      const auto space = GnsSpace::create(Weight::tracial(Algebra::scalar(), lam));
      const int kmax = 20;
      const auto vac = vacuum(space, kmax);
      std::ostringstream tag;
      tag << "lambda=" << lam;
      for (int k = 0; k <= kmax; ++k) {
        const double pmf = classical_pmf(lam, k);
        const double direct = std::exp(-lam) * std::pow(lam, k) / std::tgamma(k + 1.0);
        const double level_weight = vac.component(k).squaredNorm();
        out.records.push_back(compare("pmf " + tag.str() + " k=" + std::to_string(k), pmf,
                                      direct, tol));
        out.records.push_back(compare("gns_level_weight " + tag.str() + " k=" +
                                          std::to_string(k),
                                      level_weight, pmf, tol));
        out.rows.push_back({"classical_pmf", {lam, double(k), pmf, level_weight}});
      }
      // Moments of the number operator lambda(1) are Touchard polynomials.
      const Element one = Element::identity(Algebra::scalar());
      const int top = tail_rule_level(4, lam, 1.0, 1e-14, kMaxGnsLevel);
      const auto v0 = vacuum(space, 2 * top);
      TruncatedGnsVector v = v0;
      for (int j = 1; j <= 4; ++j) {
        v = apply_lambda(one, v);
        double touchard = 0.0;
        for (int b = 1; b <= j; ++b)
          touchard += static_cast<double>(stirling2(j, b)) * std::pow(lam, b);
        out.records.push_back(compare("number_moment " + tag.str() + " j=" + std::to_string(j),
                                      v0.inner(v), cplx(touchard), 1e-10 * touchard));
      }
      return out;
    }});
  }
  return checks;
}

inline std::vector<Check> moments_suite(const SuiteContext &ctx, Report &) {
  const double tol = ctx.tol(1e-8);
  const std::uint64_t seed = ctx.cfg.seed;
  const int max_level = ctx.cfg.max_level;
  std::vector<Check> checks;
  const int n = ctx.instances(200);
  for (int i = 0; i < n; ++i) {
    checks.push_back({indexed("moment_oracle", i), [=, &ctx] {
      Rng rng = make_rng(seed, i);
      const Weight w = ctx.weight(rng, i);
      const int len = random_int(rng, 1, ctx.oracle_length());
      const MomentQuery q{w, ctx.letters(rng, w.algebra(), len)};
      const cplx closed = poisson_moment(q);
      const auto oracle = oracle_moment(q, tol / 10.0, max_level);
      Record r = compare(indexed("moment_oracle", i), closed, oracle.value, tol);
      r.note = "n=" + std::to_string(len) + " level=" + std::to_string(oracle.level);
      return CheckOutput{{r}, {}};
    }});
  }
  checks.push_back({"moment_zero_letters", [&ctx] {
    CheckOutput out;
    const Algebra a = ctx.algebra(0);
    const Weight w = ctx.cfg.weight ? weight_from_json(*ctx.cfg.weight) : Weight::tracial(a);
    for (int len = 0; len <= ctx.closed_length(); ++len) {
      const MomentQuery q{w, Letters(len, Element::zero(w.algebra()))};
      out.records.push_back(compare("moment_zero_letters n=" + std::to_string(len),
                                    poisson_moment(q), cplx(len == 0 ? 1.0 : 0.0), 0.0));
    }
    return out;
  }});
  const int batch = 100;
  for (int start = 0; start < ctx.cfg.growth_samples; start += batch) {
    checks.push_back({indexed("growth_bound", start), [=, &ctx] {
      CheckOutput out;
      int violations = 0;
      double worst = 0.0;
      for (int s = start; s < std::min(start + batch, ctx.cfg.growth_samples); ++s) {
        Rng rng = make_rng(seed ^ 0x9e3779b97f4a7c15ULL, s);
        const Weight w = ctx.weight(rng, s);
        const int len = random_int(rng, 1, ctx.closed_length());
        Letters l;
        for (int k = 0; k < len; ++k) l.push_back(random_element(rng, w.algebra()));
        const auto g = growth_bound_check({w, l});
        if (!g.pass) ++violations;
        worst = std::max(worst, g.moment_abs / std::min(g.bound, g.bound_weight_variant));
      }
      Record r = make_record(indexed("growth_bound", start), violations, 0, violations, 0.0,
                             "largest moment/bound ratio " + std::to_string(worst));
      out.records.push_back(r);
      return out;
    }});
  }
  return checks;
}

inline std::vector<Check> gram_suite(const SuiteContext &ctx, Report &) {
  const double tol = ctx.tol(1e-8);
  const std::uint64_t seed = ctx.cfg.seed;
  std::vector<Check> checks;
  const int n = ctx.instances(50);
  const int maxlen = std::min(3, ctx.oracle_length());
  for (int i = 0; i < n; ++i) {
    checks.push_back({indexed("gram", i), [=, &ctx] {
      CheckOutput out;
      Rng rng = make_rng(seed, i);
      const Weight w = ctx.weight(rng, i);
      const auto space = GnsSpace::create(w);
      const Letters xs = ctx.letters(rng, w.algebra(), random_int(rng, 0, maxlen));
      const Letters ys = ctx.letters(rng, w.algebra(), random_int(rng, 0, maxlen));
      const std::string tag = " n=" + std::to_string(xs.size()) + " m=" + std::to_string(ys.size());
      const PoissonWord a{WordKind::LambdaEmpty, xs}, b{WordKind::LambdaEmpty, ys};
      out.records.push_back(compare(indexed("gram_empty_oracle", i) + tag, gram_empty(xs, ys, w),
                                    oracle_word_inner(a, b, space, tol / 10.0).value, tol));
      const PoissonWord la{WordKind::Lambda, xs}, lb{WordKind::Lambda, ys};
      out.records.push_back(compare(indexed("gram_lambda_oracle", i) + tag,
                                    gram_lambda(xs, ys, w),
                                    oracle_word_inner(la, lb, space, tol / 10.0).value, tol));
      // Mean-zero letters: only perfect matchings survive.
      auto centered = [&](Letters l) {
        for (auto &x : l) x -= Element::identity(w.algebra()) * (w(x) / w.mass());
        return l;
      };
      const Letters cx = centered(xs), cy = centered(ys);
      const cplx perm = cx.size() == cy.size() ? permanent(pairing_matrix(cx, cy, w)) : 0.0;
      out.records.push_back(
          compare(indexed("gram_mean_zero_permanent", i) + tag, gram_empty(cx, cy, w), perm, 1e-10));
      return out;
    }});
  }
  return checks;
}

inline std::vector<Check> fock_suite(const SuiteContext &ctx, Report &) {
  const double tol = ctx.tol(1e-8);
  const std::uint64_t seed = ctx.cfg.seed;
  std::vector<Check> checks;
  const int n = ctx.instances(30);
  const int maxlen = std::min(3, ctx.oracle_length());
  for (int i = 0; i < n; ++i) {
    checks.push_back({indexed("fock", i), [=, &ctx] {
      CheckOutput out;
      Rng rng = make_rng(seed, i);
      const Weight w = ctx.weight(rng, i);
      const auto space = GnsSpace::create(w);
      const Letters xs = ctx.letters(rng, w.algebra(), random_int(rng, 0, maxlen));
      const Letters ys = ctx.letters(rng, w.algebra(), random_int(rng, 0, maxlen));
      const std::string tag = " n=" + std::to_string(xs.size()) + " m=" + std::to_string(ys.size());
      const PoissonWord a{WordKind::LambdaEmptyEmpty, xs}, b{WordKind::LambdaEmptyEmpty, ys};
      out.records.push_back(compare(indexed("gram_fock_oracle", i) + tag, gram_fock(xs, ys, w),
                                    oracle_word_inner(a, b, space, tol / 10.0).value, tol));
      const Letters long_word = ctx.letters(rng, w.algebra(), ctx.closed_length());
      out.records.push_back(make_record(indexed("transform_round_trip", i),
                                        transform_round_trip_residual(long_word, w), 0.0,
                                        transform_round_trip_residual(long_word, w), 1e-12));
      const Element x = random_contraction(rng, w.algebra());
      const Letters act = ctx.letters(rng, w.algebra(), random_int(rng, 0, maxlen - 1));
      const int level = tail_rule_level(2 * static_cast<int>(act.size()) + 2,
                                        std::max(w.mass(), 1e-3), 1.0, tol, ctx.cfg.max_level);
      const double res = fock_action_residual(x, act, w, 2 * level);
      out.records.push_back(make_record(indexed("fock_action", i), res, 0.0, res, tol));
      std::vector<Letters> iso;
      for (int k = 0; k <= 3; ++k) iso.push_back(ctx.letters(rng, w.algebra(), k));
      iso.push_back(ctx.letters(rng, w.algebra(), 2));
      const auto rep = fock_isometry_check(iso, w, 1e-10);
      out.records.push_back(
          make_record(indexed("fock_isometry", i), rep.max_deviation, 0.0, rep.max_deviation, 1e-10));
      return out;
    }});
  }
  return checks;
}

inline std::vector<Check> kms_suite(const SuiteContext &ctx, Report &) {
  const double tol = ctx.tol(1e-8);
  const std::uint64_t seed = ctx.cfg.seed;
  std::vector<Check> checks;
  const int n = ctx.instances(50);
  for (int i = 0; i < n; ++i) {
    checks.push_back({indexed("kms", i), [=, &ctx] {
      CheckOutput out;
      Rng rng = make_rng(seed, i);
      const Weight w = ctx.weight(rng, i);
      const Algebra &a = w.algebra();
      const double t = uniform(rng, -5.0, 5.0), s = uniform(rng, -5.0, 5.0);
      const Element x = random_contraction(rng, a), y = random_contraction(rng, a);
      const double kms = kms_residual(w, x, y, t);
      out.records.push_back(make_record(indexed("kms_residual", i), kms, 0.0, kms, tol));

      const Letters xs = ctx.letters(rng, a, random_int(rng, 0, 3));
      const Letters ys = ctx.letters(rng, a, random_int(rng, 0, 3));
      const auto fx = lift_modular_flow({WordKind::LambdaEmpty, xs}, w, t);
      const auto fy = lift_modular_flow({WordKind::LambdaEmpty, ys}, w, t);
      out.records.push_back(compare(indexed("flow_gram_invariance", i),
                                    gram_empty(fx.letters, fy.letters, w), gram_empty(xs, ys, w),
                                    1e-9));

      const Element ts = modular_flow(w, modular_flow(w, x, s), t);
      const double group = ts.max_abs_diff(modular_flow(w, x, t + s));
      out.records.push_back(make_record(indexed("flow_group_law", i), group, 0.0, group, 1e-12));

      const Weight other = random_faithful_weight(rng, a, uniform(rng, 0.2, ctx.cfg.max_mass));
      const Element lhs = connes_cocycle(other, w, t + s);
      const Element rhs = connes_cocycle(other, w, t) * modular_flow(w, connes_cocycle(other, w, s), t);
      const double coc = lhs.max_abs_diff(rhs);
      out.records.push_back(make_record(indexed("cocycle_identity", i), coc, 0.0, coc, 1e-10));
      return out;
    }});
  }
  return checks;
}

inline Weight diagonal_weight(const std::vector<double> &eigs) {
  RealVector d(static_cast<Eigen::Index>(eigs.size()));
  double mass = 0.0;
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    d(static_cast<Eigen::Index>(i)) = eigs[i];
    mass += eigs[i];
  }
  d /= mass;
  return Weight(Element({Matrix(d.cast<cplx>().asDiagonal())}));
}

inline Record type_record(const std::string &name, const TypeClass &c, TypeTag want,
                          std::optional<double> lambda, double tol) {
  json computed = {{"type", to_string(c.tag)}};
  json reference = {{"type", to_string(want)}};
  double residual = c.tag == want ? 0.0 : 1.0;
  if (lambda) {
    reference["lambda"] = *lambda;
    if (c.lambda) {
      computed["lambda"] = *c.lambda;
      residual = std::max(residual, std::abs(*c.lambda - *lambda));
    } else {
      residual = 1.0;
    }
  }
  return make_record(name, computed, reference, residual, tol, c.note);
}

inline std::vector<Check> classify_suite(const SuiteContext &ctx, Report &) {
  const std::uint64_t seed = ctx.cfg.seed;
  std::vector<Check> checks;
  checks.push_back({"classify_golden", [] {
    CheckOutput out;
    out.records.push_back(type_record("tracial M_3", classify_type(Weight::tracial(Algebra::full(3))),
                                      TypeTag::TypeII1, std::nullopt, 0.0));
    out.records.push_back(type_record(
        "tracial M_2+M_1", classify_type(Weight::tracial(Algebra({2, 1}), 2.0)),
        TypeTag::TypeII1, std::nullopt, 0.0));
    out.records.push_back(type_record("eigenvalues {1, 1/2}",
                                      classify_type(diagonal_weight({1.0, 0.5})),
                                      TypeTag::TypeIIIlambda, 0.5, 1e-12));
    out.records.push_back(
        type_record("eigenvalues {1, e, e^sqrt2}",
                    classify_type(diagonal_weight({1.0, std::exp(1.0), std::exp(std::sqrt(2.0))})),
                    TypeTag::TypeIII1, std::nullopt, 0.0));
    const double theta = 2.0 * M_PI;
    const double ta = 0.0, tb = 0.11;
    const double explicit_lambda = std::min(std::exp(theta * (std::abs(ta) - std::abs(tb))),
                                            std::exp(theta * (std::abs(tb) - std::abs(ta))));
    out.records.push_back(compare("principal_series_lambda t=(0, 0.11)",
                                  principal_series_lambda(ta, tb, theta), explicit_lambda, 1e-12));
    out.records.push_back(type_record("principal_series t=(0, 0.11)",
                                      classify_type(principal_series_weight({ta, tb}, theta)),
                                      TypeTag::TypeIIIlambda, explicit_lambda, 1e-12));
    out.records.push_back(type_record(
        "principal_series t=(0, 0.1, 0.1 sqrt2)",
        classify_type(principal_series_weight({0.0, 0.1, 0.1 * std::sqrt(2.0)}, theta)),
        TypeTag::TypeIII1, std::nullopt, 0.0));
    return out;
  }});
  const int n = ctx.instances(20);
  for (int i = 0; i < n; ++i) {
    checks.push_back({indexed("classify", i), [=] {
      CheckOutput out;
      Rng rng = make_rng(seed, i);
      // Lattice spectrum {1, q^a, q^b}: the ratios generate q^{gcd(a, b)}.
      const double q = uniform(rng, 0.15, 0.9);
      const int pa = random_int(rng, 1, 3), pb = random_int(rng, 1, 3);
      const double lam = std::pow(q, std::gcd(pa, pb));
      out.records.push_back(type_record(
          indexed("lattice", i), classify_type(diagonal_weight({1.0, std::pow(q, pa), std::pow(q, pb)})),
          TypeTag::TypeIIIlambda, lam, 1e-9));
      // Incommensurate spectrum {1, e^s, e^{s sqrt 2}}.
      const double s = uniform(rng, 0.2, 2.0);
      out.records.push_back(type_record(
          indexed("dense", i),
          classify_type(diagonal_weight({1.0, std::exp(s), std::exp(s * std::sqrt(2.0))})),
          TypeTag::TypeIII1, std::nullopt, 0.0));
      // Two principal-series parameters.
      const double ta = uniform(rng, -0.5, 0.5), tb = uniform(rng, -0.5, 0.5);
      const double ref = std::min(std::exp(2.0 * M_PI * (std::abs(ta) - std::abs(tb))),
                                  std::exp(2.0 * M_PI * (std::abs(tb) - std::abs(ta))));
      out.records.push_back(compare(indexed("principal_series_lambda", i),
                                    principal_series_lambda(ta, tb), ref, 1e-12));
      return out;
    }});
  }
  return checks;
}

inline std::vector<Check> channels_suite(const SuiteContext &ctx, Report &) {
  const std::uint64_t seed = ctx.cfg.seed;
  const double tol = ctx.tol(1e-9);
  std::vector<Check> checks;
  const int n = ctx.instances(20);
  for (int i = 0; i < n; ++i) {
    checks.push_back({indexed("channels", i), [=, &ctx] {
      CheckOutput out;
      Rng rng = make_rng(seed, i);
      const Algebra a = ctx.algebra(i);
      const double mass = uniform(rng, 0.2, ctx.cfg.max_mass);

      // Weight-preserving homomorphisms: unitary conjugation and a block embedding.
      {
        const Weight w_dst = random_faithful_weight(rng, a, mass);
        std::vector<Matrix> ub;
        for (int k = 0; k < a.num_blocks(); ++k) ub.push_back(random_unitary(rng, a.block_dim(k)));
        const Element uu(std::move(ub));
        const LinearMap t = LinearMap::unitary_conjugation(uu).with_dual(
            Weight(uu.adjoint() * w_dst.density() * uu), w_dst, tol);
        const Weight w_src(uu.adjoint() * w_dst.density() * uu);
        std::vector<PoissonWord> words, lifted;
        for (int k = 0; k < 3; ++k) {
          words.push_back({WordKind::LambdaEmpty, ctx.letters(rng, a, random_int(rng, 0, 3))});
          lifted.push_back(lift_on_words(t, words.back()));
        }
        const double res =
            (gram_matrix(words, w_src) - gram_matrix(lifted, w_dst)).cwiseAbs().maxCoeff();
        out.records.push_back(make_record(indexed("homomorphism_gram", i), res, 0.0, res, tol,
                                          "unitary conjugation"));

        std::vector<int> dst_dims = a.dims();
        dst_dims.push_back(1);
        const Algebra big(dst_dims);
        const Weight w_big = random_faithful_weight(rng, big, mass);
        std::vector<Matrix> restricted;
        std::vector<int> target;
        for (int k = 0; k < a.num_blocks(); ++k) {
          restricted.push_back(w_big.density().block(k));
          target.push_back(k);
        }
        const Weight w_small{Element(std::move(restricted))};
        const LinearMap emb = LinearMap::block_embedding(a, big, target).with_dual(w_small, w_big, tol);
        std::vector<PoissonWord> ew;
        for (const auto &wd : words) ew.push_back(lift_on_words(emb, wd));
        const double res2 =
            (gram_matrix(words, w_small) - gram_matrix(ew, w_big)).cwiseAbs().maxCoeff();
        out.records.push_back(make_record(indexed("embedding_gram", i), res2, 0.0, res2, tol,
                                          "non-unital block embedding"));
      }

      // Conditional expectation onto the diagonal, for a diagonal weight.
      {
        const Weight w = random_diagonal_weight(rng, a, mass);
        const LinearMap e = LinearMap::diagonal_expectation(a).with_dual(w, w, tol);
        const Letters xs = ctx.letters(rng, a, random_int(rng, 0, 3));
        const Letters ys = ctx.letters(rng, a, random_int(rng, 0, 3));
        const auto ex = lift_on_words(e, {WordKind::LambdaEmpty, xs});
        const auto ey = lift_on_words(e, {WordKind::LambdaEmpty, ys});
        const auto eex = lift_on_words(e, ex);
        double idem = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k)
          idem = std::max(idem, eex.letters[k].max_abs_diff(ex.letters[k]));
        out.records.push_back(make_record(indexed("expectation_idempotent", i), idem, 0.0, idem, tol));
        const cplx orth = gram_empty(xs, ey.letters, w) - gram_empty(ex.letters, ey.letters, w);
        out.records.push_back(compare(indexed("expectation_gram_orthogonal", i), orth, 0.0, tol));
      }

      // Corner projection against the least-squares oracle.
      {
        const Weight w = random_faithful_weight(rng, a, mass);
        const auto pair = random_corner_pair(rng, w, false);
        const Letters xs = ctx.letters(rng, a, random_int(rng, 1, 2));
        const auto rep = corner_projection_check(pair.e, xs, w, 1e-8);
        out.records.push_back(make_record(indexed("corner_projection", i), rep.residual, 0.0,
                                          rep.residual, 1e-8,
                                          "spanning words " + std::to_string(rep.spanning_words)));
      }

      // Unital completely positive, weight-preserving, modular-covariant mixture.
      {
        const Weight w = random_faithful_weight(rng, a, mass);
        std::vector<Matrix> vb;
        for (int k = 0; k < a.num_blocks(); ++k) {
          const auto &blk = w.modular().blocks()[k];
          Vector ph(blk.values.size());
          for (Eigen::Index j = 0; j < ph.size(); ++j)
            ph(j) = std::exp(I_UNIT * uniform(rng, 0.0, 2.0 * M_PI));
          vb.push_back(blk.vectors * ph.asDiagonal() * blk.vectors.adjoint());
        }
        const LinearMap t = LinearMap::mixture(uniform(rng, 0.2, 0.8), LinearMap::identity(a),
                                               LinearMap::unitary_conjugation(Element(std::move(vb))));
        std::vector<Letters> words;
        for (int k = 0; k < 3; ++k) words.push_back(ctx.letters(rng, a, random_int(rng, 0, 2)));
        const auto rep = ucp_lift_check(t, w, w, words, tol);
        const double worst = std::max({rep.unital_residual, rep.state_residual,
                                       std::max(0.0, -rep.lifted_psd_defect),
                                       std::max(0.0, -rep.contraction_defect)});
        out.records.push_back(make_record(indexed("ucp_lift", i), rep.pass, true, worst, tol,
                                          "choi_min " + std::to_string(rep.choi_min_eigenvalue)));
      }
      return out;
    }});
  }
  return checks;
}

inline std::vector<Check> independence_suite(const SuiteContext &ctx, Report &) {
  const std::uint64_t seed = ctx.cfg.seed;
  std::vector<Check> checks;
  const int n = ctx.instances(20);
  for (int i = 0; i < n; ++i) {
    checks.push_back({indexed("independence", i), [=, &ctx] {
      CheckOutput out;
      Rng rng = make_rng(seed, i);
      const Weight w = ctx.weight(rng, i);
      const auto pair = random_corner_pair(rng, w, i % 2 == 0);
      const Element x = random_corner_letter(rng, pair.e);
      const Element y = random_corner_letter(rng, pair.f);
      IndependenceOptions opt;
      opt.seed = seed + static_cast<std::uint64_t>(i);
      const auto rep = independence_check(pair.e, pair.f, x, y, w, opt);
      out.records.push_back(make_record(indexed("commutator", i), rep.commutator_residual, 0.0,
                                        rep.commutator_residual, opt.commutator_tol));
      out.records.push_back(make_record(indexed("factorization", i), rep.factorization_residual,
                                        0.0, rep.factorization_residual, opt.factorization_tol));
      out.records.push_back(make_record(indexed("moment_factorization", i), rep.moment_residual,
                                        0.0, rep.moment_residual, 100.0 * opt.factorization_tol));
      return out;
    }});
  }
  return checks;
}

inline std::vector<Check> entropy_suite(const SuiteContext &ctx, Report &rep) {
  rep.tables["entropy_convergence"] = {
      {"instance", "level", "value", "lindblad", "gap", "log_norm_rho", "log_norm_psi"}, {}};
  const std::uint64_t seed = ctx.cfg.seed;
  const double tol = ctx.tol(1e-6);
  const auto levels = ctx.cfg.levels.values();
  std::vector<Check> checks;
  const int n = ctx.instances(20);
  for (int i = 0; i < n; ++i) {
    checks.push_back({indexed("entropy", i), [=, &ctx] {
      CheckOutput out;
      Rng rng = make_rng(seed, i);
      const auto pair = random_dominated_pair(rng, ctx.algebra(i),
                                              uniform(rng, 0.3, std::min(1.5, 1.5 * ctx.cfg.max_mass)));
      const auto r = entropy_report(pair.rho, pair.psi, levels);
      for (const auto &l : r.levels)
        out.rows.push_back({"entropy_convergence",
                            {double(i), double(l.level), l.value, r.lindblad, l.gap,
                             l.log_norm_rho, l.log_norm_psi}});
      const auto &last = r.levels.back();
      out.records.push_back(compare(indexed("entropy_limit", i) + " level=" +
                                        std::to_string(last.level),
                                    last.value, r.lindblad, tol));
      Record mono = flag(indexed("entropy_monotone_gap", i), r.monotone_after_burn_in);
      mono.note = "logged only";
      mono.pass = true;
      out.records.push_back(mono);
      if (ctx.algebra(i).dimension() <= 4) {
        const Letters xs = ctx.letters(rng, ctx.algebra(i), 2);
        const double c = cocycle_lift_check(pair.rho, pair.psi, uniform(rng, -2.0, 2.0), xs, 1e-10);
        out.records.push_back(make_record(indexed("cocycle_lift", i), c, 0.0, c, 1e-8));
      }
      return out;
    }});
  }
  checks.push_back({"entropy_scalar", [=] {
    CheckOutput out;
    const std::vector<std::pair<double, double>> cases = {{0.5, 1.0}, {1.2, 1.5}, {0.7, 0.7},
                                                          {0.05, 1.4}};
    for (const auto &[a, b] : cases) {
      const Weight rho = Weight::tracial(Algebra::scalar(), a);
      const Weight psi = Weight::tracial(Algebra::scalar(), b);
      const double kl = a * std::log(a / b) + b - a;
      std::ostringstream tag;
      tag << "entropy_scalar a=" << a << " b=" << b;
      out.records.push_back(compare(tag.str(), poisson_relative_entropy(rho, psi, levels.back()),
                                    kl, 1e-8));
    }
    return out;
  }});
  return checks;
}

inline std::vector<Check> bernoulli_suite(const SuiteContext &ctx, Report &rep) {
  rep.tables["bernoulli"] = {{"query", "n_copies", "error", "scaled_error", "ratio"}, {}};
  const std::uint64_t seed = ctx.cfg.seed;
  auto ladder = ctx.cfg.n_copies;
  std::sort(ladder.begin(), ladder.end());
  std::vector<Check> checks;
  const int n = ctx.instances(20);
  for (int i = 0; i < n; ++i) {
    checks.push_back({indexed("bernoulli", i), [=, &ctx] {
      CheckOutput out;
      Rng rng = make_rng(seed, i);
      const Weight w = ctx.weight(rng, i);
      const int len = random_int(rng, 2, std::max(2, ctx.oracle_length()));
      const MomentQuery q{w, ctx.letters(rng, w.algebra(), len)};
      const cplx exact = poisson_moment(q);
      // |1 - (n)_k / n^k| <= k(k-1) / 2n gives n |error| <= C.
      const auto sw = subset_weights(q.weight, q.factors);
      double c = 0.0;
      for_each_partition(len, [&](const std::vector<int> &, const std::vector<std::uint32_t> &m) {
        double p = 0.5 * double(m.size()) * double(m.size() - 1);
        for (auto b : m) p *= std::abs(sw[b]);
        c += p;
      });
      double prev = -1.0;
      double worst_scaled = 0.0;
      for (std::size_t k = 0; k < ladder.size(); ++k) {
        const double err = std::abs(bernoulli_moment(q, ladder[k]) - exact);
        const double scaled = err * static_cast<double>(ladder[k]);
        worst_scaled = std::max(worst_scaled, scaled);
        const double ratio = prev > 0.0 ? err / prev : std::nan("");
        out.rows.push_back({"bernoulli", {double(i), double(ladder[k]), err, scaled, ratio}});
        if (prev > 0.0 && ladder[k] == 2 * ladder[k - 1]) {
          const bool ok = ratio >= 0.4 && ratio <= 0.6;
          Record r = make_record(indexed("bernoulli_ratio", i) + " n=" + std::to_string(ladder[k]),
                                 ratio, 0.5, std::abs(ratio - 0.5), 0.1);
          r.pass = ok;
          out.records.push_back(r);
        }
        prev = err;
      }
      Record b = make_record(indexed("bernoulli_scaled_bound", i), worst_scaled, c,
                             std::max(0.0, worst_scaled - c), 1e-12 * std::max(1.0, c));
      out.records.push_back(b);
      return out;
    }});
  }
  return checks;
}

}  // namespace detail

/** Runs one suite. Failures of individual checks never abort the run. */
inline Report run_suite(const ExperimentConfig &cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.suite = cfg.suite;
  rep.seed = cfg.seed;
  rep.config = config_to_json(cfg);
  rep.environment = environment_stamp(cfg.stable_output);
  const detail::SuiteContext ctx{cfg};
  std::vector<Check> checks;
  const std::string &s = cfg.suite;
  if (s == "classical") checks = detail::classical_suite(ctx, rep);
  else if (s == "moments") checks = detail::moments_suite(ctx, rep);
  else if (s == "gram") checks = detail::gram_suite(ctx, rep);
  else if (s == "fock") checks = detail::fock_suite(ctx, rep);
  else if (s == "kms") checks = detail::kms_suite(ctx, rep);
  else if (s == "classify") checks = detail::classify_suite(ctx, rep);
  else if (s == "channels") checks = detail::channels_suite(ctx, rep);
  else if (s == "independence") checks = detail::independence_suite(ctx, rep);
  else if (s == "entropy") checks = detail::entropy_suite(ctx, rep);
  else if (s == "bernoulli") checks = detail::bernoulli_suite(ctx, rep);
  for (auto &o : run_checks(checks, cfg.threads)) {
    for (auto &r : o.records) rep.records.push_back(std::move(r));
    for (auto &[table, row] : o.rows) rep.tables[table].rows.push_back(std::move(row));
  }
  rep.pass = !rep.records.empty() &&
             std::all_of(rep.records.begin(), rep.records.end(), [](const Record &r) { return r.pass; });
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/** Writes the JSON report and CSV tables named by the config. */
inline void write_report(const Report &rep, const ExperimentConfig &cfg) {
  if (!cfg.out.empty()) write_json_file(cfg.out, report_to_json(rep, cfg.stable_output));
  if (!cfg.csv_prefix.empty()) write_csv_tables(rep, cfg.csv_prefix);
}

inline const std::vector<std::string> &instance_kinds() {
  static const std::vector<std::string> kinds = {"faithful-weight", "hermitian-contraction",
                                                 "corner-pair", "dominated-weight-pair"};
  return kinds;
}

/** Deterministic fixture for the given kind, checked before it is returned. */
inline json generate_instance(const std::string &kind, std::uint64_t seed,
                              const std::vector<int> &dims, double mass = 1.0) {
  Rng rng = make_rng(seed);
  const Algebra a(dims);
  if (kind == "faithful-weight") return weight_to_json(random_faithful_weight(rng, a, mass));
  if (kind == "hermitian-contraction") return element_to_json(random_hermitian_contraction(rng, a));
  if (kind == "corner-pair") {
    const auto p = random_corner_pair(rng, random_faithful_weight(rng, a, mass));
    if (!(p.e * p.f).is_zero(1e-12)) throw std::logic_error("corner pair is not orthogonal");
    return {{"weight", weight_to_json(p.weight)},
            {"e", element_to_json(p.e)},
            {"f", element_to_json(p.f)}};
  }
  if (kind == "dominated-weight-pair") {
    const auto p = random_dominated_pair(rng, a, mass);
    if (!check_domination(p.rho, p.psi)) throw std::logic_error("pair is not dominated");
    return {{"rho", weight_to_json(p.rho)}, {"psi", weight_to_json(p.psi)}};
  }
  throw FormatError("unknown instance kind: " + kind);
}

}  // namespace poisson

#endif  // POISSON_SUITE_HPP
