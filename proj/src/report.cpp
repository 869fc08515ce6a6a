#include "releq/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace releq {

namespace {

using ordered_json = nlohmann::ordered_json;

void require_keys(const ordered_json& obj, const char* where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed)
      if (it.key() == key) ok = true;
    if (!ok)
      throw ConfigError(std::string("unknown key '") + it.key() + "' in " +
                        where);
  }
}

double positive_number(const ordered_json& v, const char* what) {
  if (!v.is_number())
    throw ConfigError(std::string(what) + " must be a number");
  const double x = v.get<double>();
  if (!(x > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  return x;
}

SystemSpec parse_system(const ordered_json& doc) {
  if (!doc.is_object()) throw ConfigError("system must be an object");
  require_keys(doc, "system",
               {"preset", "inertia", "coupling", "seed", "algebra",
                "mass_matrix"});
  SystemSpec spec;
  if (!doc.contains("preset") || !doc["preset"].is_string())
    throw ConfigError("system.preset is required");
  spec.preset = doc["preset"].get<std::string>();
  if (doc.contains("inertia")) {
    spec.inertia.clear();
    for (const auto& x : doc["inertia"])
      spec.inertia.push_back(positive_number(x, "system.inertia entry"));
    if (spec.inertia.size() != 3)
      throw ConfigError("system.inertia must have three entries");
  }
  if (doc.contains("coupling"))
    spec.coupling = doc["coupling"].get<double>();
  if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("algebra")) spec.algebra = doc["algebra"].get<std::string>();
  if (doc.contains("mass_matrix")) {
    for (const auto& row : doc["mass_matrix"]) {
      std::vector<double> r;
      for (const auto& x : row) r.push_back(x.get<double>());
      spec.mass_matrix.push_back(std::move(r));
    }
  }
  if (spec.preset != "rigid_body" && spec.preset != "rigid_body_rotors" &&
      spec.preset != "cotangent_group")
    throw ConfigError("unknown system preset '" + spec.preset + "'");
  if (spec.preset == "cotangent_group" &&
      (spec.algebra.empty() || spec.mass_matrix.empty()))
    throw ConfigError("cotangent_group needs algebra and mass_matrix");
  return spec;
}

TaskSpec parse_task(const ordered_json& doc) {
  if (!doc.is_object()) throw ConfigError("task must be an object");
  require_keys(doc, "task",
               {"type", "samples", "seed", "strategies", "multistart",
                "momentum_scale", "include_origin", "trials", "scale"});
  TaskSpec task;
  if (!doc.contains("type") || !doc["type"].is_string())
    throw ConfigError("task.type is required");
  task.type = doc["type"].get<std::string>();
  if (task.type != "strata" && task.type != "solve" && task.type != "analyze" &&
      task.type != "generic")
    throw ConfigError("unknown task type '" + task.type + "'");
  if (doc.contains("samples")) task.samples = doc["samples"].get<int>();
  if (doc.contains("seed")) {
    task.seed = doc["seed"].get<std::uint64_t>();
    task.has_seed = true;
  }
  if (doc.contains("strategies")) {
    task.strategies.clear();
    for (const auto& s : doc["strategies"]) {
      const std::string name = s.get<std::string>();
      if (name != "generic" && name != "origin" && name != "cartan" &&
          name != "center")
        throw ConfigError("unknown sampling strategy '" + name + "'");
      task.strategies.push_back(name);
    }
  }
  if (doc.contains("multistart")) task.multistart = doc["multistart"].get<int>();
  if (doc.contains("momentum_scale"))
    task.momentum_scale = positive_number(doc["momentum_scale"], "momentum_scale");
  if (doc.contains("include_origin"))
    task.include_origin = doc["include_origin"].get<bool>();
  if (doc.contains("trials")) task.trials = doc["trials"].get<int>();
  if (doc.contains("scale")) {
    if (!doc["scale"].is_number()) throw ConfigError("scale must be a number");
    task.scale = doc["scale"].get<double>();
    if (task.scale < 0.0) throw ConfigError("scale must be nonnegative");
  }
  const bool randomized =
      task.type == "strata" || task.type == "solve" || task.type == "generic";
  if (randomized && !task.has_seed)
    throw ConfigError("task '" + task.type + "' needs a seed");
  if (task.samples < 1 && task.type == "strata")
    throw ConfigError("strata.samples must be >= 1");
  if (task.trials < 1 && task.type == "generic")
    throw ConfigError("generic.trials must be >= 1");
  return task;
}

ordered_json fingerprint_json(const TypeFingerprint& fp) {
  return ordered_json{{"dim_k", fp.dim_k},
                      {"dim_z", fp.dim_z},
                      {"rank_k", fp.rank_k},
                      {"dim_derived", fp.dim_derived}};
}

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i)))
      throw TaskError("non-finite value in report payload");
    arr.push_back(v(i));
  }
  return arr;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i)
    rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

// Class key for grouping equilibria "up to symmetry": the fingerprint plus
// the nearest principal axis of the (symmetry-invariant) body momentum, or
// -1 for a direction away from all axes, -2 for zero momentum.
int axis_signature(const Eigen::VectorXd& m) {
  if (m.norm() < 1e-8) return -2;
  const Eigen::VectorXd unit = m.normalized();
  for (int i = 0; i < m.size(); ++i) {
    Eigen::VectorXd axis = Eigen::VectorXd::Unit(m.size(), i);
    if (std::min((unit - axis).norm(), (unit + axis).norm()) < 1e-6) return i;
  }
  return -1;
}

struct StratumRow {
  TypeFingerprint fp;
  int count = 0;
};

SampleStrategy strategy_from_name(const std::string& name) {
  if (name == "generic") return SampleStrategy::kGeneric;
  if (name == "origin") return SampleStrategy::kOrigin;
  return SampleStrategy::kThroughSubalgebra;
}

ordered_json run_strata(const LieAlgebra& g, const TaskSpec& task,
                        const RunTolerances& tols) {
  ordered_json rec;
  rec["task"] = "strata";
  rec["algebra"] = g.name();
  rec["samples_per_strategy"] = task.samples;

  std::vector<std::pair<TypeFingerprint, StratumInfo>> seen;
  std::vector<CommutingPair> representatives;
  std::map<int, int> counts;  // index into `seen` -> count
  int tangent_mismatches = 0;
  int rank_violations = 0;

  for (const std::string& name : task.strategies) {
    std::vector<CommutingPair> pairs;
    if (name == "cartan") {
      // Through a maximal torus: the centralizer of a generic element.
      std::mt19937_64 rng(task.seed ^ 0x9e3779b97f4a7c15ull);
      std::normal_distribution<double> normal;
      Eigen::VectorXd x(g.dim());
      for (int i = 0; i < g.dim(); ++i) x(i) = normal(rng);
      const Subspace cartan = stabilizer(g, AlgVector{x});
      pairs = sample_pairs(g, SampleStrategy::kThroughSubalgebra, task.samples,
                           task.seed, &cartan);
    } else if (name == "center") {
      const Subspace full = Subspace::full(g.dim());
      pairs = sample_pairs(g, SampleStrategy::kThroughSubalgebra, task.samples,
                           task.seed, &full);
    } else {
      pairs = sample_pairs(g, strategy_from_name(name),
                           name == "origin" ? 1 : task.samples, task.seed);
    }
    for (const auto& pair : pairs) {
      const TypeFingerprint fp = classify_pair(pair);
      if (fp.rank_k != g.rank()) ++rank_violations;
      const StratumInfo info = stratum_info(g, fp);
      if (stratum_tangent(pair).dim() != info.dim_stratum) ++tangent_mismatches;
      int idx = -1;
      for (size_t i = 0; i < seen.size(); ++i)
        if (seen[i].first == fp) idx = static_cast<int>(i);
      if (idx < 0) {
        idx = static_cast<int>(seen.size());
        seen.push_back({fp, info});
        representatives.push_back(pair);
      }
      ++counts[idx];
    }
  }

  // Deterministic order: by descending stratum dimension, then dim_k.
  std::vector<int> order(seen.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (seen[a].second.dim_stratum != seen[b].second.dim_stratum)
      return seen[a].second.dim_stratum > seen[b].second.dim_stratum;
    return seen[a].first.dim_k < seen[b].first.dim_k;
  });

  ordered_json rows = ordered_json::array();
  for (int idx : order) {
    const auto& [fp, info] = seen[idx];
    // Slice local model at a representative of the stratum: perturbations
    // inside the isotropy slice land in the ambient commuting variety
    // exactly when they commute within the isotropy subalgebra.
    const LocalModelReport lm = local_model_check(
        representatives[idx], 200, task.seed + 17 * idx,
        tols.membership_residual);
    rows.push_back(ordered_json{
        {"fingerprint", fingerprint_json(fp)},
        {"dim_stratum", info.dim_stratum},
        {"dim_quotient", info.dim_quotient},
        {"transversal_possible", info.transversal_possible},
        {"count", counts[idx]},
        {"local_model",
         ordered_json{{"samples", lm.samples},
                      {"agreements", lm.agreements},
                      {"disagreements", lm.disagreements},
                      {"members", lm.members},
                      {"max_residual_in", lm.max_residual_in}}}});
  }
  rec["strata"] = rows;
  rec["tangent_dimension_mismatches"] = tangent_mismatches;
  rec["rank_law_violations"] = rank_violations;
  return rec;
}

ordered_json re_json(const CotangentGroupSystem& sys,
                     const RelativeEquilibrium& re) {
  // Re-validate the invariants at serialization time.
  const EvalBundle b = sys.eval(re.point);
  const double res = (b.X_H - b.generator * re.generator.coords).norm();
  if (res >= tol::re_rel * (1.0 + b.X_H.norm()))
    throw TaskError("relative equilibrium fails its residual invariant");
  CommutingPair pair{re.momentum, re.generator, &sys.algebra()};
  if (!verify_commuting(pair))
    throw TaskError("relative equilibrium fails the commuting invariant");
  ordered_json rec;
  rec["attitude"] = matrix_json(re.point.frame);
  rec["group_coords"] = vector_json(re.point.group);
  rec["body_momentum"] = vector_json(re.point.momentum);
  rec["generator"] = vector_json(re.generator.coords);
  rec["momentum"] = vector_json(re.momentum.coords);
  rec["fingerprint"] = fingerprint_json(re.fingerprint);
  rec["residual"] = re.residual_norm;
  return rec;
}

ordered_json run_solve(const CotangentGroupSystem& sys, const TaskSpec& task,
                       const RunTolerances& tols,
                       std::vector<RelativeEquilibrium>* out_res) {
  SolveOptions opts;
  opts.svd_truncation = tols.solver_truncation;
  std::vector<RelativeEquilibrium> found =
      multistart_solve(sys, task.multistart, task.seed, task.momentum_scale, opts);
  if (task.include_origin) {
    SolveOutcome origin = solve_re(
        sys, sys.point_at_identity(Eigen::VectorXd::Zero(sys.algebra().dim())),
        Eigen::VectorXd::Zero(sys.algebra().dim()), opts);
    if (origin.converged) found.push_back(origin.re);
  }

  ordered_json rec;
  rec["task"] = "solve";
  rec["multistart"] = task.multistart;
  rec["converged"] = static_cast<int>(found.size());

  std::map<std::pair<int, int>, ordered_json> classes;  // (axis, dim_k) -> row
  ordered_json res = ordered_json::array();
  for (size_t i = 0; i < found.size(); ++i) {
    const auto& re = found[i];
    ordered_json row = re_json(sys, re);
    const int axis = axis_signature(re.point.momentum);
    row["axis"] = axis;
    res.push_back(row);
    auto key = std::make_pair(axis, re.fingerprint.dim_k);
    auto it = classes.find(key);
    if (it == classes.end()) {
      classes[key] = ordered_json{{"axis", axis},
                                  {"fingerprint", fingerprint_json(re.fingerprint)},
                                  {"count", 1},
                                  {"example_index", static_cast<int>(i)}};
    } else {
      it->second["count"] = it->second["count"].get<int>() + 1;
    }
  }
  rec["relative_equilibria"] = res;
  ordered_json class_rows = ordered_json::array();
  for (const auto& [key, row] : classes) class_rows.push_back(row);
  rec["classes"] = class_rows;

  if (out_res) *out_res = std::move(found);
  return rec;
}

ordered_json analyze_one(const CotangentGroupSystem& sys,
                         const RelativeEquilibrium& re) {
  ordered_json rec;
  rec["fingerprint"] = fingerprint_json(re.fingerprint);
  rec["residual"] = re.residual_norm;
  rec["necessary_inequality"] = necessary_inequality(re.fingerprint);

  const DirectVerdict direct = check_transversal_direct(sys, re);
  rec["transversal_direct"] =
      ordered_json{{"verdict", direct.transversal},
                   {"gap", direct.gap},
                   {"threshold", direct.threshold}};

  AdaptedFrame frame = adapted_frame(sys, re);
  const NormalFormBlocks blocks = normal_form_blocks(sys, re, frame);
  const NormalFormVerdict nf = check_transversal_normalform(sys, re, frame, blocks);
  rec["transversal_normal_form"] = ordered_json{
      {"verdict", nf.transversal},
      {"zero_semisimple", nf.zero_semisimple},
      {"c_onto_kernel", nf.c_onto_kernel},
      {"drift_spans", nf.drift_spans},
      {"nondegenerate", nf.nondegenerate},
      {"dbar_surjective", nf.dbar_surjective}};
  rec["verdicts_agree"] = direct.transversal == nf.transversal;
  rec["normal_form_residuals"] = ordered_json{
      {"forbidden_blocks", blocks.forbidden_block_residual},
      {"diagonal", blocks.diagonal_residual},
      {"coupling_relation", blocks.structure_residual_c},
      {"coupling_adjoint_relation", blocks.structure_residual_cstar},
      {"drift_relation", blocks.structure_residual_d},
      {"drift_symmetry", blocks.d_symmetry_residual},
      {"coupling_norm", blocks.c.norm()}};

  const StratumInfo info = stratum_info(sys.algebra(), re.fingerprint);
  rec["dim_stratum"] = info.dim_stratum;
  rec["dim_quotient"] = info.dim_quotient;

  if (direct.transversal) {
    const Subspace tangent = tangent_space_E(sys, re, frame, blocks);
    rec["tangent_dim"] = tangent.dim();
    rec["manifold_dim"] = manifold_dim(sys, re);
    const SymplecticityRecord sym = symplecticity_check(sys, re, frame, blocks);
    rec["symplectic"] = ordered_json{{"measured_rank", sym.measured_rank},
                                     {"tangent_dim", sym.tangent_dim},
                                     {"is_symplectic", sym.is_symplectic},
                                     {"predicted", sym.predicted},
                                     {"agree", sym.is_symplectic == sym.predicted}};
  } else {
    rec["tangent_dim"] = nullptr;
    rec["manifold_dim"] = nullptr;
    rec["symplectic"] = nullptr;
  }

  const SingularityDescriptor sd = singularity_model(re.fingerprint);
  rec["singularity"] = ordered_json{{"dim_l", sd.dim_l},
                                    {"rank_l", sd.rank_l},
                                    {"smooth_point", sd.smooth_point},
                                    {"cone_dim", sd.cone_dim},
                                    {"label", sd.label}};
  return rec;
}

ordered_json run_analyze(const CotangentGroupSystem& sys,
                         const std::vector<RelativeEquilibrium>& res) {
  ordered_json rec;
  rec["task"] = "analyze";
  ordered_json rows = ordered_json::array();
  for (const auto& re : res) rows.push_back(analyze_one(sys, re));
  rec["records"] = rows;
  return rec;
}

ordered_json run_generic(const SystemSpec& base_spec, const TaskSpec& task,
                         const RunTolerances& tols) {
  CotangentGroupSystem base = build_system(base_spec);
  const int n = base.algebra().dim();
  const Eigen::MatrixXd base_mass = base.mass_matrix();

  SolveOptions opts;
  opts.svd_truncation = tols.solver_truncation;

  ordered_json rec;
  rec["task"] = "generic";
  rec["trials"] = task.trials;
  rec["scale"] = task.scale;

  int skipped = 0;
  int with_re = 0;
  double aggregate_total = 0.0;
  ordered_json fractions = ordered_json::array();
  ordered_json origin_verdicts = ordered_json::array();
  for (int trial = 0; trial < task.trials; ++trial) {
    std::mt19937_64 rng(task.seed + 1000003ull * trial);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd bump(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) bump(i, j) = normal(rng);
    Eigen::MatrixXd mass =
        base_mass + 0.5 * task.scale * (bump + bump.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mass);
    if (es.eigenvalues().minCoeff() <= 1e-8) {
      // Positive definiteness destroyed beyond repair: skip and count.
      ++skipped;
      fractions.push_back(nullptr);
      origin_verdicts.push_back(nullptr);
      continue;
    }
    CotangentGroupSystem sys(base.algebra(), mass);
    auto found =
        multistart_solve(sys, task.multistart, task.seed + trial, 1.0, opts);
    // The zero-momentum equilibrium persists for every quadratic form;
    // its verdict is recorded separately (the nonzero fraction is the
    // genericity statistic, since the kinetic-energy family always
    // carries the zero equilibrium).
    SolveOutcome origin = solve_re(
        sys, sys.point_at_identity(Eigen::VectorXd::Zero(n)),
        Eigen::VectorXd::Zero(n), opts);
    if (origin.converged)
      origin_verdicts.push_back(
          check_transversal_direct(sys, origin.re).transversal);
    else
      origin_verdicts.push_back(nullptr);

    int nonzero = 0, transversal = 0;
    for (const auto& re : found) {
      if (re.momentum.coords.norm() <= 1e-6) continue;
      ++nonzero;
      if (check_transversal_direct(sys, re).transversal) ++transversal;
    }
    if (nonzero == 0) {
      fractions.push_back(nullptr);
      continue;
    }
    ++with_re;
    const double fraction = static_cast<double>(transversal) / nonzero;
    aggregate_total += fraction;
    fractions.push_back(fraction);
  }
  rec["skipped"] = skipped;
  rec["fractions"] = fractions;
  rec["origin_transversal"] = origin_verdicts;
  rec["aggregate"] = with_re > 0 ? aggregate_total / with_re : 0.0;
  return rec;
}

}  // namespace

RunConfig parse_config(const ordered_json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be an object");
  require_keys(doc, "configuration",
               {"algebra", "system", "tasks", "tolerances", "output"});
  RunConfig config;
  if (doc.contains("algebra")) {
    if (!doc["algebra"].is_string())
      throw ConfigError("algebra must be a string");
    config.algebra = doc["algebra"].get<std::string>();
    try {
      (void)build_algebra(config.algebra);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (doc.contains("system")) config.system = parse_system(doc["system"]);
  if (doc.contains("tasks")) {
    if (!doc["tasks"].is_array()) throw ConfigError("tasks must be an array");
    for (const auto& t : doc["tasks"]) config.tasks.push_back(parse_task(t));
  }
  if (doc.contains("tolerances")) {
    const auto& t = doc["tolerances"];
    require_keys(t, "tolerances", {"membership_residual", "solver_truncation"});
    if (t.contains("membership_residual"))
      config.tolerances.membership_residual =
          positive_number(t["membership_residual"], "membership_residual");
    if (t.contains("solver_truncation"))
      config.tolerances.solver_truncation =
          positive_number(t["solver_truncation"], "solver_truncation");
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("output must be a string");
    config.output = doc["output"].get<std::string>();
  }
  for (const auto& task : config.tasks) {
    if (task.type == "strata" && config.algebra.empty() && !config.system)
      throw ConfigError("strata task needs an algebra or a system");
    if ((task.type == "solve" || task.type == "analyze" ||
         task.type == "generic") &&
        !config.system)
      throw ConfigError("task '" + task.type + "' needs a system");
  }
  return config;
}

CotangentGroupSystem build_system(const SystemSpec& spec) {
  try {
    if (spec.preset == "rigid_body")
      return make_rigid_body(spec.inertia[0], spec.inertia[1], spec.inertia[2]);
    if (spec.preset == "rigid_body_rotors")
      return make_rigid_body_rotors(spec.coupling, spec.seed);
    // cotangent_group
    LieAlgebra g = build_algebra(spec.algebra);
    const int n = g.dim();
    if (static_cast<int>(spec.mass_matrix.size()) != n)
      throw ConfigError("mass_matrix dimension does not match the algebra");
    Eigen::MatrixXd mass(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(spec.mass_matrix[i].size()) != n)
        throw ConfigError("mass_matrix is not square");
      for (int j = 0; j < n; ++j) mass(i, j) = spec.mass_matrix[i][j];
    }
    return make_cotangent_group_system(g, mass);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunResult run(const RunConfig& config) {
  RunResult result;
  ordered_json& report = result.report;
  report["schema_version"] = kSchemaVersion;
  report["tool"] = ordered_json{{"name", kToolName}, {"version", kToolVersion}};

  ordered_json echo;
  if (!config.algebra.empty()) echo["algebra"] = config.algebra;
  if (config.system) {
    ordered_json s{{"preset", config.system->preset}};
    if (config.system->preset == "rigid_body") s["inertia"] = config.system->inertia;
    if (config.system->preset == "rigid_body_rotors") {
      s["coupling"] = config.system->coupling;
      s["seed"] = config.system->seed;
    }
    if (config.system->preset == "cotangent_group") {
      s["algebra"] = config.system->algebra;
      s["mass_matrix"] = config.system->mass_matrix;
    }
    echo["system"] = s;
  }
  ordered_json task_echo = ordered_json::array();
  for (const auto& t : config.tasks) {
    ordered_json te{{"type", t.type}};
    if (t.has_seed) te["seed"] = t.seed;
    if (t.type == "strata") {
      te["samples"] = t.samples;
      te["strategies"] = t.strategies;
    }
    if (t.type == "solve") {
      te["multistart"] = t.multistart;
      te["momentum_scale"] = t.momentum_scale;
      te["include_origin"] = t.include_origin;
    }
    if (t.type == "generic") {
      te["trials"] = t.trials;
      te["scale"] = t.scale;
      te["multistart"] = t.multistart;
    }
    task_echo.push_back(te);
  }
  echo["tasks"] = task_echo;
  echo["tolerances"] =
      ordered_json{{"membership_residual", config.tolerances.membership_residual},
                   {"solver_truncation", config.tolerances.solver_truncation}};
  report["config"] = echo;

  std::ostringstream digest;
  ordered_json tasks = ordered_json::array();
  std::vector<RelativeEquilibrium> last_solved;
  std::optional<CotangentGroupSystem> system;
  if (config.system) system = build_system(*config.system);

  for (const auto& task : config.tasks) {
    try {
      if (task.type == "strata") {
        LieAlgebra g = system ? system->algebra()
                              : build_algebra(config.algebra);
        ordered_json rec = run_strata(g, task, config.tolerances);
        digest << "strata[" << g.name() << "]: " << rec["strata"].size()
               << " strata, " << rec["rank_law_violations"].get<int>()
               << " rank violations\n";
        tasks.push_back(std::move(rec));
      } else if (task.type == "solve") {
        ordered_json rec = run_solve(*system, task, config.tolerances,
                                     &last_solved);
        digest << "solve: " << rec["converged"].get<int>() << "/"
               << task.multistart << " converged, "
               << rec["classes"].size() << " classes\n";
        tasks.push_back(std::move(rec));
      } else if (task.type == "analyze") {
        if (last_solved.empty())
          throw TaskError("analyze requires a preceding solve task");
        ordered_json rec = run_analyze(*system, last_solved);
        int transversal = 0;
        for (const auto& row : rec["records"])
          if (row["transversal_direct"]["verdict"].get<bool>()) ++transversal;
        digest << "analyze: " << transversal << "/" << rec["records"].size()
               << " transversal\n";
        tasks.push_back(std::move(rec));
      } else {
        ordered_json rec = run_generic(*config.system, task, config.tolerances);
        digest << "generic: aggregate transversal fraction "
               << rec["aggregate"].get<double>() << " over " << task.trials
               << " trials (" << rec["skipped"].get<int>() << " skipped)\n";
        tasks.push_back(std::move(rec));
      }
    } catch (const std::exception& e) {
      tasks.push_back(ordered_json{{"task", task.type}, {"error", e.what()}});
      report["tasks"] = tasks;
      result.exit_code = 1;
      result.summary = digest.str() + "task '" + task.type + "' failed: " +
                       e.what() + "\n";
      return result;
    }
  }
  report["tasks"] = tasks;
  result.summary = digest.str();
  return result;
}

}  // namespace releq
