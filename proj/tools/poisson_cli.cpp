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

// Command-line front end. Every subcommand prints one JSON document to
// stdout (or --out) and exits nonzero on failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poisson/poisson.hpp"

using namespace poisson;

namespace {

void emit(const json &j, const std::string &out) {
  if (out.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json_file(out, j);
}

json spectrum_json(const std::vector<double> &v) { return v; }

json type_json(const TypeClass &c, const std::vector<double> &spectrum) {
  json j = {{"type", to_string(c.tag)}, {"spectrum", spectrum_json(spectrum)},
            {"log_generators", c.log_generators}};
  j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
  if (c.step) j["step"] = *c.step;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

struct PartitionsCmd {
  int n = 0;
  bool list = false;
  std::string out;

  int run() const {
    json j = {{"n", n}, {"bell", bell(n)}};
    json st = json::array();
    for (int k = 0; k <= n; ++k) st.push_back(stirling2(n, k));
    j["stirling2"] = st;
    if (list) {
      json all = json::array();
      for (const auto &p : enumerate_partitions(n)) all.push_back(p.blocks());
      j["partitions"] = all;
    }
    emit(j, out);
    return 0;
  }
};

struct MomentsCmd {
  std::string weight;
  std::vector<std::string> word;
  std::vector<std::uint64_t> n_copies = {64, 128, 256};
  bool oracle = false;
  std::string out;

  int run() const {
    const Weight w = weight_from_json(read_json_file(weight));
    MomentQuery q{w, {}};
    for (const auto &p : word) q.factors.push_back(element_from_json(read_json_file(p)));
    const cplx value = poisson_moment(q);
    const auto g = growth_bound_check(q);
    json j = {{"value", complex_to_json(value)},
              {"bound", g.bound},
              {"bound_weight_variant", g.bound_weight_variant},
              {"within_bound", g.pass}};
    json b = json::object();
    for (auto n : n_copies) b[std::to_string(n)] = complex_to_json(bernoulli_moment(q, n));
    j["bernoulli"] = b;
    if (oracle) {
      const auto space = GnsSpace::create(w);
      const auto o = oracle_inner(
          [&](int level) {
            return std::make_pair(vacuum(space, level),
                                  build_word_vector({WordKind::Lambda, q.factors}, space, level));
          },
          static_cast<int>(q.factors.size()), std::max(w.mass(), 1e-3),
          std::max(1.0, letter_norm_product(q.factors)), 1e-10);
      j["oracle"] = {{"value", complex_to_json(o.value)},
                     {"level", o.level},
                     {"deviation", std::abs(o.value - value)}};
    }
    emit(j, out);
    return 0;
  }
};

struct GramCmd {
  std::string basis = "empty";
  std::string words;
  std::string weight;
  bool oracle = false;
  std::string out;

  int run() const {
    const Weight w = weight_from_json(read_json_file(weight));
    auto ws = words_from_json(read_json_file(words));
    const WordKind kind = word_kind_from_string(basis);
    for (auto &x : ws) x.kind = kind;
    const Matrix closed = gram_matrix(ws, w);
    json j = {{"basis", basis}, {"closed_form", dense_to_json(closed)}};
    if (oracle) {
      const auto space = GnsSpace::create(w);
      Matrix o(closed.rows(), closed.cols());
      for (Eigen::Index a = 0; a < o.rows(); ++a)
        for (Eigen::Index b = 0; b < o.cols(); ++b)
          o(a, b) = oracle_word_inner(ws[a], ws[b], space, 1e-10).value;
      j["oracle"] = dense_to_json(o);
      j["max_deviation"] = closed.size() ? (closed - o).cwiseAbs().maxCoeff() : 0.0;
    }
    emit(j, out);
    return 0;
  }
};

struct ClassifyCmd {
  std::string weight;
  std::string out;

  int run() const {
    const Weight w = weight_from_json(read_json_file(weight));
    const auto spec = arveson_spectrum(w);
    emit(type_json(classify_spectrum(spec), spec), out);
    return 0;
  }
};

struct PrincipalSeriesCmd {
  std::vector<double> t;
  double theta = 2.0 * M_PI;
  std::string out;

  int run() const {
    const Weight w = principal_series_weight(t, theta);
    const auto spec = arveson_spectrum(w);
    json j = type_json(classify_spectrum(spec), spec);
    json pairs = json::array();
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = a + 1; b < t.size(); ++b)
        pairs.push_back({{"t", {t[a], t[b]}}, {"lambda", principal_series_lambda(t[a], t[b], theta)}});
    j["pairwise_lambda"] = pairs;
    j["theta"] = theta;
    emit(j, out);
    return 0;
  }
};

struct ChannelsCmd {
  std::string map, weight_src, weight_dst, suite = "preserve";
  std::string words, e, f, x, y;
  double tol = 1e-9;
  std::string out;

  int run() const {
    const Weight ws = weight_from_json(read_json_file(weight_src));
    const Weight wd = weight_dst.empty() ? ws : weight_from_json(read_json_file(weight_dst));
    json j = {{"suite", suite}};
    bool pass = false;
    if (suite == "preserve" || suite == "ucp") {
      const LinearMap t = map_from_json(read_json_file(map));
      const double res = check_weight_preserving(t, ws, wd);
      j["weight_residual"] = res;
      j["unital_residual"] = unital_residual(t);
      j["choi_min_eigenvalue"] = choi_min_eigenvalue(t);
      j["homomorphism_residual"] = homomorphism_residual(t);
      pass = res <= tol;
      if (suite == "ucp") {
        std::vector<Letters> ls;
        if (!words.empty())
          for (const auto &pw : words_from_json(read_json_file(words))) ls.push_back(pw.letters);
        const auto r = ucp_lift_check(t, ws, wd, ls, tol);
        j["state_residual"] = r.state_residual;
        j["lifted_psd_defect"] = r.lifted_psd_defect;
        j["contraction_defect"] = r.contraction_defect;
        pass = r.pass;
      } else if (pass && !words.empty()) {
        const LinearMap td = t.with_dual(ws, wd, tol);
        std::vector<PoissonWord> orig, lifted;
        for (const auto &pw : words_from_json(read_json_file(words))) {
          orig.push_back(pw);
          lifted.push_back(lift_on_words(td, pw));
        }
        const double g = (gram_matrix(orig, ws) - gram_matrix(lifted, wd)).cwiseAbs().maxCoeff();
        j["gram_residual"] = g;
        pass = t.flags().homomorphism ? g <= tol : true;
      }
    } else if (suite == "corner") {
      const Element pe = element_from_json(read_json_file(e));
      const auto pw = words_from_json(read_json_file(words));
      double worst = 0.0;
      json per = json::array();
      for (const auto &w : pw) {
        const auto r = corner_projection_check(pe, w.letters, ws, tol);
        per.push_back({{"residual", r.residual}, {"level", r.level}, {"spanning_words", r.spanning_words}});
        worst = std::max(worst, r.residual);
      }
      j["words"] = per;
      j["max_residual"] = worst;
      pass = worst <= tol;
    } else if (suite == "independence") {
      const auto r = independence_check(element_from_json(read_json_file(e)),
                                        element_from_json(read_json_file(f)),
                                        element_from_json(read_json_file(x)),
                                        element_from_json(read_json_file(y)), ws);
      j["commutator_residual"] = r.commutator_residual;
      j["factorization_residual"] = r.factorization_residual;
      j["moment_residual"] = r.moment_residual;
      pass = r.pass;
    } else {
      throw std::invalid_argument("unknown channels suite: " + suite);
    }
    j["pass"] = pass;
    emit(j, out);
    return pass ? 0 : 1;
  }
};

struct EntropyCmd {
  std::string rho, psi, levels = "5:30:5";
  std::string out;

  int run() const {
    const Weight r = weight_from_json(read_json_file(rho));
    const Weight p = weight_from_json(read_json_file(psi));
    const auto rep = entropy_report(r, p, LevelRange::parse(levels).values());
    json table = json::array();
    for (const auto &l : rep.levels)
      table.push_back({{"level", l.level},
                       {"value", l.value},
                       {"gap", l.gap},
                       {"log_norm_rho", l.log_norm_rho},
                       {"log_norm_psi", l.log_norm_psi}});
    emit({{"lindblad", rep.lindblad},
          {"mass_rho", rep.mass_rho},
          {"mass_psi", rep.mass_psi},
          {"monotone_after_burn_in", rep.monotone_after_burn_in},
          {"levels", table}},
         out);
    return 0;
  }
};

struct RunCmd {
  ExperimentConfig cfg;
  std::string config_path;
  std::string levels;
  const CLI::App *app = nullptr;

  int run() {
    ExperimentConfig c = cfg;
    if (!config_path.empty()) {
      c = config_from_json(read_json_file(config_path), cfg);
      // Flags given on the command line win over the file.
      if (app->count("--suite")) c.suite = cfg.suite;
      if (app->count("--seed")) c.seed = cfg.seed;
      if (app->count("--instances")) c.instances = cfg.instances;
      if (app->count("--threads")) c.threads = cfg.threads;
    }
    if (!levels.empty()) c.levels = LevelRange::parse(levels);
    const Report rep = run_suite(c);
    write_report(rep, c);
    if (c.out.empty()) std::cout << report_to_json(rep, c.stable_output).dump(2) << '\n';
    std::size_t failed = 0;
    for (const auto &r : rep.records) failed += r.pass ? 0 : 1;
    std::cerr << rep.suite << ": " << rep.records.size() - failed << "/" << rep.records.size()
              << " records pass\n";
    return rep.pass ? 0 : 1;
  }
};

struct GenerateCmd {
  std::string kind;
  std::uint64_t seed = 1;
  std::vector<int> dims = {2};
  double mass = 1.0;
  std::string out;

  int run() const {
    emit(generate_instance(kind, seed, dims, mass), out);
    return 0;
  }
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Poissonization workbench for finite-dimensional weights"};
  app.require_subcommand(1);

  PartitionsCmd parts;
  auto *sp = app.add_subcommand("partitions", "Bell and Stirling numbers, set partitions");
  sp->add_option("--count", parts.n, "Ground set size")->required()->check(CLI::Range(0, kMaxPartitionSize));
  sp->add_flag("--list", parts.list, "List every partition");
  sp->add_option("--out", parts.out);

  MomentsCmd mom;
  auto *sm = app.add_subcommand("moments", "Poisson moments");
  auto *se = sm->add_subcommand("eval", "Evaluate phi(lambda(x_1) ... lambda(x_n))");
  sm->require_subcommand(1);
  se->add_option("--weight", mom.weight)->required()->check(CLI::ExistingFile);
  se->add_option("--word", mom.word, "Letter files in order")->check(CLI::ExistingFile);
  se->add_option("--n-copies", mom.n_copies, "Bernoulli approximants");
  se->add_flag("--oracle", mom.oracle, "Also evaluate on the truncated GNS space");
  se->add_option("--out", mom.out);

  GramCmd gram;
  auto *sg = app.add_subcommand("gram", "Gram matrix of Poisson words");
  sg->add_option("--basis", gram.basis)->check(CLI::IsMember({"lambda", "empty", "fock"}));
  sg->add_option("--words", gram.words)->required()->check(CLI::ExistingFile);
  sg->add_option("--weight", gram.weight)->required()->check(CLI::ExistingFile);
  sg->add_flag("--oracle", gram.oracle);
  sg->add_option("--out", gram.out);

  ClassifyCmd cls;
  auto *sc = app.add_subcommand("classify", "Factor type from the modular spectrum");
  sc->add_option("--weight", cls.weight)->required()->check(CLI::ExistingFile);
  sc->add_option("--out", cls.out);

  PrincipalSeriesCmd ps;
  auto *spr = app.add_subcommand("principal-series", "Principal-series weight and its type");
  spr->add_option("--t", ps.t)->required();
  spr->add_option("--theta", ps.theta);
  spr->add_option("--out", ps.out);

  ChannelsCmd ch;
  auto *sch = app.add_subcommand("channels", "Maps between weighted algebras");
  auto *scc = sch->add_subcommand("check", "Check a map or corner");
  sch->require_subcommand(1);
  scc->add_option("--map", ch.map)->check(CLI::ExistingFile);
  scc->add_option("--weight-src", ch.weight_src)->required()->check(CLI::ExistingFile);
  scc->add_option("--weight-dst", ch.weight_dst)->check(CLI::ExistingFile);
  scc->add_option("--suite", ch.suite)
      ->check(CLI::IsMember({"preserve", "corner", "independence", "ucp"}));
  scc->add_option("--words", ch.words)->check(CLI::ExistingFile);
  scc->add_option("--e", ch.e)->check(CLI::ExistingFile);
  scc->add_option("--f", ch.f)->check(CLI::ExistingFile);
  scc->add_option("--x", ch.x)->check(CLI::ExistingFile);
  scc->add_option("--y", ch.y)->check(CLI::ExistingFile);
  scc->add_option("--tol", ch.tol);
  scc->add_option("--out", ch.out);

  EntropyCmd ent;
  auto *sen = app.add_subcommand("entropy", "Truncated Poisson relative entropy");
  sen->add_option("--rho", ent.rho)->required()->check(CLI::ExistingFile);
  sen->add_option("--psi", ent.psi)->required()->check(CLI::ExistingFile);
  sen->add_option("--levels", ent.levels, "a:b:step");
  sen->add_option("--out", ent.out);

  RunCmd run;
  auto *sr = app.add_subcommand("run", "Run a seeded experiment suite");
  run.app = sr;
  sr->add_option("--suite", run.cfg.suite)->check(CLI::IsMember(suite_names()));
  sr->add_option("--seed", run.cfg.seed);
  sr->add_option("--config", run.config_path)->check(CLI::ExistingFile);
  sr->add_option("--out", run.cfg.out, "JSON report path");
  sr->add_option("--csv", run.cfg.csv_prefix, "CSV table prefix");
  sr->add_flag("--stable-output", run.cfg.stable_output, "Omit timestamps and wall time");
  sr->add_option("--levels", run.levels, "a:b:step");
  sr->add_option("--instances", run.cfg.instances);
  sr->add_option("--threads", run.cfg.threads);

  GenerateCmd gen;
  auto *sgn = app.add_subcommand("generate", "Write a seeded random fixture");
  sgn->add_option("--kind", gen.kind)->required()->check(CLI::IsMember(instance_kinds()));
  sgn->add_option("--seed", gen.seed);
  sgn->add_option("--dims", gen.dims);
  sgn->add_option("--mass", gen.mass);
  sgn->add_option("--out", gen.out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sp) return parts.run();
    if (*se) return mom.run();
    if (*sg) return gram.run();
    if (*sc) return cls.run();
    if (*spr) return ps.run();
    if (*scc) return ch.run();
    if (*sen) return ent.run();
    if (*sr) {
      if (run.cfg.suite.empty() && run.config_path.empty())
        throw std::invalid_argument("run needs --suite or --config");
      return run.run();
    }
    if (*sgn) return gen.run();
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
