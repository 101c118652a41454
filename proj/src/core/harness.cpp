// Copyright 2026 The cpdyn Authors
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

#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "channel.hpp"
#include "consistency.hpp"
#include "families.hpp"
#include "info.hpp"

namespace cpdyn {

namespace {

const std::set<std::string> kCommands = {"verify-family", "consistency", "theorem1", "dpi", "demo"};
const std::set<std::string> kFamilies = {"factorized", "classical-quantum", "direct-sum", "mixed-direct-sum",
                                         "markov-blocks", "steered", "kernel-extended"};
const std::set<std::string> kSelectors = {"full", "example1", "swap-counterexample"};
const std::set<std::string> kBlockFamilies = {"markov-blocks", "steered", "kernel-extended"};
const std::set<std::string> kKeys = {"family", "da", "ds", "de", "blocks", "trials", "seed", "psd_tol", "eq_tol", "tol",
                                     "g", "g_file", "g_samples", "draws", "search_draws", "example", "verbose", "timing"};

constexpr std::uint64_t kSearchSalt = 0x9e3779b97f4a7c15ULL;

BlockStructure default_blocks() { return {{1, 2}, {2, 1}}; }

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct Outcome {
  Json record;
  bool pass = false;
  double min_eig = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
};

// Trials run on a small worker pool. Trial i always uses Rng(seed ^ i) and
// its result lands in slot i, so the report does not depend on scheduling.
template <class F>
std::vector<Outcome> fan_out(int n, std::uint64_t seed, F&& f) {
  std::vector<Outcome> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        Rng rng(seed ^ static_cast<std::uint64_t>(i));
        out[i] = f(i, rng);
        out[i].record["index"] = i;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(1, n));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

RunReport assemble(const RunConfig& c, std::vector<Outcome> outcomes, std::vector<Json> extra,
                   std::chrono::steady_clock::time_point start) {
  RunReport r;
  r.config = {{"type", "config"}, {"schema_version", kReportSchemaVersion}, {"command", c.command}, {"config", config_to_json(c)}};
  int passed = 0;
  double worst_eig = std::numeric_limits<double>::infinity();
  double worst_res = -std::numeric_limits<double>::infinity();
  for (auto& o : outcomes) {
    o.record["type"] = "trial";
    o.record["pass"] = o.pass;
    passed += o.pass ? 1 : 0;
    if (std::isfinite(o.min_eig)) worst_eig = std::min(worst_eig, o.min_eig);
    if (std::isfinite(o.residual)) worst_res = std::max(worst_res, o.residual);
    r.trials.push_back(std::move(o.record));
  }
  r.extra = std::move(extra);
  r.pass = passed == static_cast<int>(r.trials.size());
  r.summary = {{"type", "summary"},
               {"pass", r.pass},
               {"pass_count", passed},
               {"trials", r.trials.size()},
               {"worst_min_eigenvalue", number_or_null(worst_eig)},
               {"worst_residual", number_or_null(worst_res)}};
  if (c.timing)
    r.summary["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<int> direct_sum_dims(const RunConfig& c) {
  std::vector<int> dims;
  if (c.blocks) {
    for (const auto& b : *c.blocks) dims.push_back(b.dim());
  } else if (c.ds >= 2) {
    dims = {1, c.ds - 1};
  } else {
    dims = {c.ds};
  }
  return dims;
}

BlockStructure blocks_of(const RunConfig& c) { return c.blocks ? *c.blocks : default_blocks(); }

FamilySpec random_family(const RunConfig& c, Rng& rng) {
  const std::string& f = c.family;
  if (f == "factorized") return random_factorized(c.ds, c.de, rng);
  if (f == "classical-quantum") return random_classical_quantum(c.ds, c.de, rng);
  if (f == "direct-sum") return random_direct_sum(direct_sum_dims(c), c.de, rng);
  if (f == "mixed-direct-sum") return random_mixed_direct_sum(direct_sum_dims(c), 1, c.de, rng);
  if (f == "markov-blocks") return random_markov_blocks(blocks_of(c), c.de, rng);
  if (f == "steered") return steered_from_markov(random_markov_state_spec(c.da, blocks_of(c), c.de, rng));
  if (f == "kernel-extended") {
    const FamilySpec base = random_markov_blocks(blocks_of(c), c.de, rng);
    return kernel_extended(base.as<MarkovBlocksSpec>(), kernel_tr_e(OperatorSubspace::full(c.ds, c.de)));
  }
  fail(ErrorCode::InvalidArgument, "unknown family: " + f);
}

Matrix draw_unitary(const RunConfig& c, int index, Rng& rng) {
  if (c.g == "all") return haar_unitary(c.ds * c.de, rng);
  if (c.g == "local") return kron(haar_unitary(c.ds, rng), haar_unitary(c.de, rng));
  if (c.g == "swap") return swap_unitary(c.ds);
  return c.g_unitaries[index % c.g_unitaries.size()];
}

UnitarySetSpec unitary_set(const RunConfig& c) {
  if (c.g == "all") return UnitarySetSpec::all(c.g_samples);
  if (c.g == "local") return UnitarySetSpec::local(c.g_samples);
  if (c.g == "swap") return UnitarySetSpec::swap();
  return UnitarySetSpec::explicit_list(c.g_unitaries);
}

struct SubspaceCase {
  OperatorSubspace v;
  std::optional<AssignmentMap> base;
};

SubspaceCase make_subspace(const RunConfig& c, Rng& rng) {
  if (c.family == "full") return {OperatorSubspace::full(c.ds, c.de), std::nullopt};
  if (c.family == "example1" || c.family == "swap-counterexample") {
    const Matrix omega = random_density_matrix(c.de, c.de, rng);
    OperatorSubspace v = fixed_env_marginal_subspace(omega, c.ds);
    if (c.family == "swap-counterexample") {
      // span{x (x) w} plus one kernel element whose S-marginal is not zero.
      std::vector<Matrix> ops;
      for (int i = 0; i < c.ds; ++i)
        for (int j = 0; j < c.ds; ++j) {
          Matrix e = Matrix::Zero(c.ds, c.ds);
          e(i, j) = 1.0;
          ops.push_back(kron(e, omega));
        }
      ops.push_back(kron(basis_projector(c.ds, 0), default_traceless(c.de)));
      v = span_from_states(ops, c.ds, c.de);
    }
    return {std::move(v), product_assignment(omega, c.ds)};
  }
  const FamilySpec spec = random_family(c, rng);
  return {family_subspace(spec), family_assignment(spec)};
}

Json verdicts_summary(const Theorem1Report& rep, double& min_eig, double& max_dist) {
  min_eig = std::numeric_limits<double>::infinity();
  max_dist = 0.0;
  double max_tp = 0.0, max_dom_tp = 0.0;
  bool all_cp = true;
  for (const auto& v : rep.verdicts) {
    min_eig = std::min({min_eig, v.min_choi, v.perturbed_min_choi});
    max_dist = std::max(max_dist, v.perturbation_distance);
    max_tp = std::max(max_tp, v.tp_error);
    max_dom_tp = std::max(max_dom_tp, v.domain_tp_error);
    all_cp = all_cp && v.cp && v.perturbed_cp;
  }
  return {{"dim_v", rep.dim_v},
          {"dim_v0", rep.dim_v0},
          {"dim_domain", rep.dim_domain},
          {"g", to_string(rep.g_kind)},
          {"unitaries", rep.verdicts.size()},
          {"consistent", rep.consistency.consistent},
          {"consistency_exact", rep.consistency.exact},
          {"consistency_method", rep.consistency.method},
          {"worst_violation", rep.consistency.worst_violation},
          {"canonical_cp", rep.canonical_cp},
          {"canonical_min_choi_eigenvalue", rep.canonical_min_choi},
          {"assignment_cp", rep.base_cp},
          {"assignment_min_choi_eigenvalue", rep.base_min_choi},
          {"assignment_section_error", rep.base_section_error},
          {"all_cp", all_cp},
          {"min_choi_eigenvalue", number_or_null(min_eig)},
          {"max_tp_error", max_tp},
          {"max_domain_tp_error", max_dom_tp},
          {"max_perturbation_distance", max_dist},
          {"premises_hold", rep.premises_hold},
          {"conclusion_holds", rep.conclusion_holds},
          {"theorem_holds", rep.theorem_holds},
          {"inputs_hash", hex64(rep.inputs_hash)}};
}

}  // namespace

std::uint64_t default_seed() {
  static const std::uint64_t seed = [] {
    const char* env = std::getenv("CPDYN_SEED");
    if (!env || !*env) return kBuiltinSeed;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (end == env || *end != '\0') return kBuiltinSeed;
    return static_cast<std::uint64_t>(v);
  }();
  return seed;
}

BlockStructure parse_blocks(const std::string& text) {
  BlockStructure out;
  if (!text.empty() && text.back() == ',') fail(ErrorCode::InvalidArgument, "blocks must look like 1x2,2x1");
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) fail(ErrorCode::InvalidArgument, "blocks must look like 1x2,2x1");
    try {
      size_t used_l = 0, used_r = 0;
      const std::string ls = item.substr(0, x), rs = item.substr(x + 1);
      const int l = std::stoi(ls, &used_l);
      const int r = std::stoi(rs, &used_r);
      if (used_l != ls.size() || used_r != rs.size()) throw std::invalid_argument("trailing");
      if (l < 1 || r < 1) fail(ErrorCode::InvalidArgument, "block dimensions must be positive");
      out.push_back(Block{l, r});
    } catch (const std::logic_error&) {
      fail(ErrorCode::InvalidArgument, "blocks must look like 1x2,2x1");
    }
  }
  if (out.empty()) fail(ErrorCode::InvalidArgument, "blocks must not be empty");
  return out;
}

std::string format_blocks(const BlockStructure& blocks) {
  std::string s;
  for (const auto& b : blocks) {
    if (!s.empty()) s += ',';
    s += std::to_string(b.left) + "x" + std::to_string(b.right);
  }
  return s;
}

void validate(RunConfig& c) {
  if (!kCommands.count(c.command)) fail(ErrorCode::InvalidArgument, "unknown command: " + c.command);
  if (c.trials < 1) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (c.da < 1 || c.ds < 1 || c.de < 1) fail(ErrorCode::InvalidArgument, "dimensions must be >= 1");
  if (!(c.psd_tol > 0.0) || !(c.eq_tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerances must be > 0");
  if (c.g_samples < 1 || c.draws < 1 || c.search_draws < 1) fail(ErrorCode::InvalidArgument, "sample counts must be >= 1");
  if (c.g != "all" && c.g != "local" && c.g != "swap" && c.g != "file")
    fail(ErrorCode::InvalidArgument, "g must be one of all, local, swap, file");

  if (c.command == "verify-family") {
    if (c.family.empty()) c.family = "factorized";
    if (!kFamilies.count(c.family)) fail(ErrorCode::InvalidArgument, "unknown family: " + c.family);
  } else if (c.command == "consistency" || c.command == "theorem1") {
    if (c.family.empty()) c.family = "full";
    if (!kFamilies.count(c.family) && !kSelectors.count(c.family))
      fail(ErrorCode::InvalidArgument, "unknown family or subspace: " + c.family);
  } else if (c.command == "demo") {
    if (c.example != 1 && c.example != 2) fail(ErrorCode::InvalidArgument, "demo example must be 1 or 2");
    if (c.example == 1 && c.ds != c.de) fail(ErrorCode::InvalidArgument, "demo 1 requires ds == de");
  }

  const bool block_family = kBlockFamilies.count(c.family) > 0 && c.command != "demo";
  if (c.command == "dpi" || block_family) {
    if (!c.blocks) c.blocks = default_blocks();
    c.ds = block_total(*c.blocks);
  } else if (c.blocks && (c.family == "direct-sum" || c.family == "mixed-direct-sum")) {
    c.ds = block_total(*c.blocks);
  }

  const int total = c.command == "dpi" ? c.da * c.ds * c.de : c.ds * c.de;
  if (total > kMaxTotalDim)
    fail(ErrorCode::InvalidArgument, "total dimension " + std::to_string(total) + " exceeds the cap of " + std::to_string(kMaxTotalDim));

  if (c.g == "swap" && c.ds != c.de) fail(ErrorCode::InvalidArgument, "g=swap requires ds == de");
  if (c.g == "file") {
    if (c.g_unitaries.empty()) {
      if (c.g_file.empty()) fail(ErrorCode::InvalidArgument, "g=file requires g_file");
      std::ifstream in(c.g_file);
      if (!in) fail(ErrorCode::InvalidArgument, "cannot read g_file: " + c.g_file);
      std::stringstream buf;
      buf << in.rdbuf();
      c.g_unitaries = unitaries_from_json(parse_json(buf.str()));
    }
    if (c.g_unitaries.empty()) fail(ErrorCode::InvalidArgument, "g_file lists no unitaries");
    for (const auto& u : c.g_unitaries) {
      if (u.rows() != c.ds * c.de || u.cols() != c.ds * c.de) fail(ErrorCode::DimensionMismatch, "g_file unitary does not act on S (x) E");
      if (!is_unitary(u)) fail(ErrorCode::NotUnitary, "g_file entry is not unitary");
    }
  }
}

RunConfig config_from_json(const std::string& command, const Json& j) {
  if (!j.is_object() && !j.is_null()) fail(ErrorCode::InvalidArgument, "config must be a JSON object");
  RunConfig c;
  c.command = command;
  c.seed = default_seed();
  c.trials = command == "demo" ? 1 : 10;
  bool g_given = false;
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!kKeys.count(it.key())) fail(ErrorCode::InvalidArgument, "unknown config key: " + it.key());
    try {
      c.family = j.value("family", std::string());
      c.da = j.value("da", c.da);
      c.ds = j.value("ds", c.ds);
      c.de = j.value("de", c.de);
      if (j.contains("blocks") && !j.at("blocks").is_null()) {
        const Json& b = j.at("blocks");
        c.blocks = b.is_string() ? parse_blocks(b.get<std::string>()) : [&] {
          BlockStructure bs;
          for (const auto& p : b) bs.push_back(Block{p.at(0).get<int>(), p.at(1).get<int>()});
          return bs;
        }();
      }
      c.trials = j.value("trials", c.trials);
      c.seed = j.value("seed", c.seed);
      if (j.contains("tol")) c.psd_tol = c.eq_tol = j.at("tol").get<double>();
      c.psd_tol = j.value("psd_tol", c.psd_tol);
      c.eq_tol = j.value("eq_tol", c.eq_tol);
      g_given = j.contains("g");
      c.g = j.value("g", c.g);
      c.g_file = j.value("g_file", c.g_file);
      c.g_samples = j.value("g_samples", c.g_samples);
      c.draws = j.value("draws", c.draws);
      c.search_draws = j.value("search_draws", c.search_draws);
      c.example = j.value("example", c.example);
      c.verbose = j.value("verbose", c.verbose);
      c.timing = j.value("timing", c.timing);
    } catch (const Json::exception& e) {
      fail(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
    }
  }
  if (!g_given && c.family == "kernel-extended") c.g = "local";
  validate(c);
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json j = {{"family", c.family.empty() ? Json(nullptr) : Json(c.family)},
            {"da", c.da},
            {"ds", c.ds},
            {"de", c.de},
            {"blocks", c.blocks ? Json(format_blocks(*c.blocks)) : Json(nullptr)},
            {"trials", c.trials},
            {"seed", c.seed},
            {"psd_tol", c.psd_tol},
            {"eq_tol", c.eq_tol},
            {"g", c.g},
            {"g_samples", c.g_samples},
            {"draws", c.draws},
            {"search_draws", c.search_draws},
            {"example", c.example},
            {"verbose", c.verbose}};
  if (c.g == "file") j["g_unitaries"] = c.g_unitaries.size();
  return j;
}

std::string RunReport::to_jsonl() const {
  std::string out = config.dump() + "\n";
  for (const auto& t : trials) out += t.dump() + "\n";
  for (const auto& e : extra) out += e.dump() + "\n";
  out += summary.dump() + "\n";
  return out;
}

RunReport cmd_verify_family(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  auto outcomes = fan_out(c.trials, c.seed, [&](int i, Rng& rng) {
    const FamilySpec spec = random_family(c, rng);
    const DensityMatrix rho = sample_member(spec, random_params(spec, rng));
    const Matrix u = draw_unitary(c, i, rng);
    const AssignmentMap assign = family_assignment(spec);
    const ChannelMap psi = reduced_dynamics(u, assign);
    const ChoiMatrix ch = choi(psi);
    Outcome o;
    o.min_eig = min_choi_eigenvalue(ch);
    const bool cp = is_cp(ch, c.psd_tol);
    const double tp = tp_error(psi);
    const int ds = spec.ds(), de = spec.de();
    const Matrix rho_s = trace_second(rho.matrix(), ds, de);
    double residual = (psi.apply(rho_s) - evolve_reduced(u, rho.matrix(), ds, de)).norm();
    o.record = {{"family", to_string(spec.variant())},
                {"min_choi_eigenvalue", o.min_eig},
                {"cp", cp},
                {"tp_error", tp},
                {"assignment_cp", assign.cp()},
                {"dynamics_residual", residual}};
    std::optional<KrausSet> kraus;
    if (spec.variant() == FamilyVariant::Factorized) kraus = kraus_factorized(u, spec.as<FactorizedSpec>().omega_e, ds);
    if (spec.variant() == FamilyVariant::ClassicalQuantum) kraus = kraus_classical_quantum(u, spec.as<ClassicalQuantumSpec>());
    if (kraus) {
      const double dist = choi_distance(kraus->to_channel(), psi);
      o.record["kraus_distance"] = dist;
      o.record["kraus_closure_error"] = kraus->closure_error();
      residual = std::max({residual, dist, kraus->closure_error()});
    }
    o.residual = residual;
    o.pass = cp && tp <= c.eq_tol && residual <= c.eq_tol;
    if (c.verbose) {
      o.record["unitary"] = matrix_to_json(u);
      o.record["choi"] = matrix_to_json(ch.matrix());
    }
    return o;
  });
  return assemble(c, std::move(outcomes), {}, start);
}

RunReport cmd_consistency(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  const UnitarySetSpec g = unitary_set(c);
  auto outcomes = fan_out(c.trials, c.seed, [&](int, Rng& rng) {
    const SubspaceCase sc = make_subspace(c, rng);
    const int dim_domain = marginal_dim(sc.v);
    const auto us = enumerate_unitaries(g, c.ds, c.de, rng);
    const OperatorSubspace kernel = kernel_tr_e(sc.v);
    const ConsistencyReport rep = check_consistency(sc.v, kernel, g.kind, us);
    const bool kernel_ok = kernel.dim() == sc.v.dim() - dim_domain;
    Outcome o;
    o.residual = rep.worst_violation;
    o.pass = rep.consistent && kernel_ok;
    o.record = {{"subspace", c.family},
                {"dim_v", sc.v.dim()},
                {"dim_v0", kernel.dim()},
                {"dim_domain", dim_domain},
                {"kernel_dimension_identity", kernel_ok},
                {"g", to_string(g.kind)},
                {"checked", rep.checked},
                {"consistent", rep.consistent},
                {"exact", rep.exact},
                {"method", rep.method},
                {"worst_violation", rep.worst_violation}};
    if (c.verbose) o.record["violations"] = rep.violations;
    return o;
  });
  return assemble(c, std::move(outcomes), {}, start);
}

RunReport cmd_theorem1(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  const UnitarySetSpec g = unitary_set(c);
  auto outcomes = fan_out(c.trials, c.seed, [&](int, Rng& rng) {
    SubspaceCase sc = make_subspace(c, rng);
    Theorem1Options opts;
    opts.base = std::move(sc.base);
    opts.eq_tol = c.eq_tol;
    const Theorem1Report rep = theorem1_verify(sc.v, g, rng, opts);
    Outcome o;
    o.record = verdicts_summary(rep, o.min_eig, o.residual);
    o.record["subspace"] = c.family;
    o.pass = rep.theorem_holds;
    return o;
  });
  return assemble(c, std::move(outcomes), {}, start);
}

RunReport cmd_dpi(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  const BlockStructure blocks = blocks_of(c);
  auto outcomes = fan_out(c.trials, c.seed, [&](int, Rng& rng) {
    const MarkovStateSpec spec = random_markov_state_spec(c.da, blocks, c.de, rng);
    const DensityMatrix rho = build_markov_state(spec);
    const double cmi = conditional_mutual_information(rho);
    double min_delta = std::numeric_limits<double>::infinity();
    double i_before = 0.0;
    for (int k = 0; k < c.draws; ++k) {
      const InfoReport r = dpi_check(rho.matrix(), c.da, c.ds, c.de, haar_unitary(c.ds * c.de, rng));
      i_before = r.i_before;
      min_delta = std::min(min_delta, r.delta);
    }
    Outcome o;
    o.residual = cmi;
    o.pass = min_delta >= -c.eq_tol;
    o.record = {{"state", "markov"}, {"cmi", cmi}, {"i_before", i_before}, {"draws", c.draws}, {"min_delta", min_delta}};
    return o;
  });
  Rng rng(c.seed ^ kSearchSalt);
  const DensityMatrix ghz = ghz_state();
  const DpiSearch s = dpi_counterexample_search(ghz.matrix(), 2, 2, 2, c.search_draws, rng);
  Json search = {{"type", "search"},
                 {"fixture", "ghz"},
                 {"cmi", s.cmi},
                 {"draws", s.draws},
                 {"threshold", s.threshold},
                 {"best_delta", s.best_delta},
                 {"best_index", s.best_index},
                 {"found", s.found},
                 {"verdict", s.found ? "violation found" : "not found"}};
  if (c.verbose && s.best_index >= 0) search["best_unitary"] = matrix_to_json(s.best_u);
  return assemble(c, std::move(outcomes), {search}, start);
}

RunReport cmd_demo(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  auto outcomes = fan_out(c.trials, c.seed, [&](int, Rng& rng) {
    const int ds = c.ds, de = c.de;
    Outcome o;
    Theorem1Report rep;
    double channel_distance = 0.0;
    int expected_v0 = 0;
    if (c.example == 1) {
      const Matrix omega = random_density_matrix(de, de, rng);
      const OperatorSubspace v = fixed_env_marginal_subspace(omega, ds);
      Theorem1Options opts;
      opts.base = product_assignment(omega, ds);
      opts.eq_tol = c.eq_tol;
      rep = theorem1_verify(v, UnitarySetSpec::swap(), rng, opts);
      // The swap sends x (x) w to w (x) x, so the reduced map is x -> tr(x) w.
      const ChannelMap psi = reduced_dynamics(swap_unitary(ds), *opts.base);
      const ChannelMap constant = ChannelMap::from_function(ds, ds, [&](const Matrix& x) { return Matrix(x.trace() * omega); });
      channel_distance = choi_distance(psi, constant);
      expected_v0 = ds * de * ds * de - ds * ds - de * de + 1;
    } else {
      std::vector<Matrix> us, joint;
      for (int k = 0; k < c.g_samples; ++k) {
        us.push_back(haar_unitary(ds, rng));
        joint.push_back(kron(us.back(), haar_unitary(de, rng)));
      }
      UnitarySetSpec g = UnitarySetSpec::local(c.g_samples);
      g.unitaries = joint;
      const OperatorSubspace v = OperatorSubspace::full(ds, de);
      Theorem1Options opts;
      opts.eq_tol = c.eq_tol;
      rep = theorem1_verify(v, g, rng, opts);
      const AssignmentMap canonical = canonical_assignment(v);
      for (size_t k = 0; k < us.size(); ++k)
        channel_distance = std::max(channel_distance, choi_distance(reduced_dynamics(joint[k], canonical), ChannelMap::unitary(us[k])));
      expected_v0 = ds * ds * (de * de - 1);
    }
    o.record = verdicts_summary(rep, o.min_eig, o.residual);
    o.record["example"] = c.example;
    o.record["expected_dim_v0"] = expected_v0;
    o.record["channel_identity_distance"] = channel_distance;
    o.residual = std::max(o.residual, channel_distance);
    o.pass = rep.premises_hold && rep.conclusion_holds && rep.dim_v0 == expected_v0 && channel_distance <= c.eq_tol;
    return o;
  });
  return assemble(c, std::move(outcomes), {}, start);
}

RunReport run(const RunConfig& c) {
  if (c.command == "verify-family") return cmd_verify_family(c);
  if (c.command == "consistency") return cmd_consistency(c);
  if (c.command == "theorem1") return cmd_theorem1(c);
  if (c.command == "dpi") return cmd_dpi(c);
  if (c.command == "demo") return cmd_demo(c);
  fail(ErrorCode::InvalidArgument, "unknown command: " + c.command);
}

}  // namespace cpdyn
