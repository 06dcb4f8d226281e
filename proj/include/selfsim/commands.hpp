#pragma once

// Batch commands behind the `selfsim` executable. Each command reads a
// RunConfig, writes its artifacts plus a manifest.json into the output
// directory and returns an exit code: 0 success, 1 a checked invariant failed.
// Library errors propagate as selfsim::Error (the executable maps them to 2).

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "selfsim/algebra.hpp"
#include "selfsim/group.hpp"
#include "selfsim/hecke.hpp"
#include "selfsim/io.hpp"
#include "selfsim/parallel.hpp"
#include "selfsim/renorm.hpp"
#include "selfsim/schreier.hpp"
#include "selfsim/spectra.hpp"

namespace selfsim {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { Verify, Spectrum, Slice, Omega, Orbital, Rigidity };

inline std::string to_string(Command c) {
  switch (c) {
    case Command::Verify: return "verify";
    case Command::Spectrum: return "spectrum";
    case Command::Slice: return "slice";
    case Command::Omega: return "omega";
    case Command::Orbital: return "orbital";
    case Command::Rigidity: return "rigidity";
  }
  return "unknown";
}

inline Command command_from_string(const std::string& name) {
  for (Command c : {Command::Verify, Command::Spectrum, Command::Slice, Command::Omega, Command::Orbital, Command::Rigidity})
    if (to_string(c) == name) return c;
  throw Error(ErrorKind::Parse, "unknown command: " + name);
}

struct RunConfig {
  Command command = Command::Verify;
  std::optional<AlgebraElement> element;  // defaults to Δ where an element is needed
  int level_min = 0;
  int level_max = 13;
  std::vector<double> t_values{-1.0};
  int radius = 0;
  std::string point = "(1)";
  std::string gens = "abcd";
  int depth = 64;
  std::uint64_t samples = 10000;
  double q = 0.5;
  std::uint64_t seed = 1;
  std::string target = "auto";  // auto | delta | generator-sum | none
  std::string out_dir = ".";
  double tol = 1e-9;
};

inline json to_json(const RunConfig& c) {
  json j;
  j["command"] = to_string(c.command);
  j["element"] = c.element ? to_json(*c.element) : json(nullptr);
  j["level_min"] = c.level_min;
  j["level_max"] = c.level_max;
  j["t"] = c.t_values;
  j["radius"] = c.radius;
  j["point"] = c.point;
  j["gens"] = c.gens;
  j["depth"] = c.depth;
  j["samples"] = c.samples;
  j["q"] = c.q;
  j["seed"] = c.seed;
  j["target"] = c.target;
  j["out"] = c.out_dir;
  j["tol"] = c.tol;
  return j;
}

inline RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.command = command_from_string(j.at("command").get<std::string>());
  if (!j.at("element").is_null()) c.element = algebra_from_json(j.at("element"));
  c.level_min = j.at("level_min").get<int>();
  c.level_max = j.at("level_max").get<int>();
  c.t_values = j.at("t").get<std::vector<double>>();
  c.radius = j.at("radius").get<int>();
  c.point = j.at("point").get<std::string>();
  c.gens = j.at("gens").get<std::string>();
  c.depth = j.at("depth").get<int>();
  c.samples = j.at("samples").get<std::uint64_t>();
  c.q = j.at("q").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.target = j.at("target").get<std::string>();
  c.out_dir = j.at("out").get<std::string>();
  c.tol = j.at("tol").get<double>();
  return c;
}

struct CommandOutcome {
  int exit_code = 0;
  std::vector<std::string> files;
  std::vector<std::string> messages;
};

/// Test hook for `verify`: mutates the level matrices before they are checked.
using LevelMutator = std::function<void(LevelMatrices&)>;

namespace detail {

inline IntervalUnion delta_target() { return IntervalUnion({{-0.5, 0.0}, {0.5, 1.0}}); }
inline IntervalUnion generator_sum_target() { return IntervalUnion({{-2.0, 0.0}, {2.0, 4.0}}); }

inline std::optional<IntervalUnion> resolve_target(const std::string& name, const AlgebraElement& m) {
  if (name == "delta") return delta_target();
  if (name == "generator-sum") return generator_sum_target();
  if (name == "none") return std::nullopt;
  if (name == "auto") {
    auto same_support = [&](const AlgebraElement& ref) {
      auto a = m.support();
      auto b = ref.support();
      if (a.size() != b.size()) return false;
      for (const auto& t : b)
        if (m.coefficient(t.word) != t.coef) return false;
      return true;
    };
    if (same_support(AlgebraElement::delta())) return delta_target();
    if (same_support(AlgebraElement::generator_sum())) return generator_sum_target();
    return std::nullopt;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown target set: " + name);
}

class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : root_(path) { std::filesystem::create_directories(root_); }

  void write(const std::string& name, const std::string& content, CommandOutcome& outcome) {
    write_file((root_ / name).string(), content);
    outcome.files.push_back(name);
  }

  void write_manifest(const RunConfig& cfg, const json& tolerances, CommandOutcome& outcome) {
    json manifest;
    manifest["command"] = to_string(cfg.command);
    manifest["config"] = to_json(cfg);
    manifest["tolerances"] = tolerances;
    manifest["versions"] = {{"selfsim", kVersion}, {"grig-core", kVersion}, {"schreier", kVersion},
                            {"hecke", kVersion},   {"renorm", kVersion},    {"spectra", kVersion}};
    manifest["outputs"] = outcome.files;
    manifest["exit_code"] = outcome.exit_code;
    write_file((root_ / "manifest.json").string(), manifest.dump(2) + "\n");
  }

 private:
  std::filesystem::path root_;
};

inline std::vector<GroupWord> parse_generating_set(const std::string& gens) {
  std::vector<GroupWord> out;
  for (char ch : gens) {
    if (ch == ',' || ch == ' ') continue;
    out.push_back(GroupWord::single(gen_from_char(ch)));
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty generating set");
  return out;
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11U) * 0x1.0p-53; }

}  // namespace detail

inline CommandOutcome cmd_verify(const RunConfig& cfg, const LevelMutator& mutate = {}) {
  if (cfg.level_min < 0 || cfg.level_max < cfg.level_min)
    throw Error(ErrorKind::InvalidArgument, "verify needs 0 <= level_min <= level_max");
  CommandOutcome outcome;
  detail::OutputDir out(cfg.out_dir);
  json checks = json::array();
  for (int n = cfg.level_min; n <= cfg.level_max; ++n) {
    LevelMatrices mats(n);
    if (mutate) mutate(mats);
    auto suite = relation_suite(mats);
    // Entrywise agreement of the recursion with the tree action.
    bool consistent = true;
    for (Gen g : kGenerators) {
      const auto& p = mats.perm(g);
      for (std::uint64_t v = 0; v < p.size() && consistent; ++v)
        consistent = p[v] == act_vertex(GroupWord::single(g), Vertex::from_index(n, v)).index();
    }
    suite.push_back({"recursion matches tree action @ level " + std::to_string(n), consistent});
    for (const auto& check : suite) {
      checks.push_back({{"name", check.name}, {"ok", check.ok}});
      if (!check.ok) {
        outcome.exit_code = 1;
        outcome.messages.push_back("FAILED: " + check.name);
      }
    }
  }
  if (outcome.exit_code == 0) outcome.messages.push_back("all " + std::to_string(checks.size()) + " checks passed");
  out.write("verify.json", json{{"checks", checks}, {"passed", outcome.exit_code == 0}}.dump(2) + "\n", outcome);
  out.write_manifest(cfg, {{"relations", "exact"}}, outcome);
  return outcome;
}

inline CommandOutcome cmd_spectrum(const RunConfig& cfg) {
  const AlgebraElement m = cfg.element.value_or(AlgebraElement::delta());
  if (!m.is_symmetric())
    throw Error(ErrorKind::InvalidArgument, "spectrum needs a self-adjoint element (m(g) = m(g^-1))");
  CommandOutcome outcome;
  detail::OutputDir out(cfg.out_dir);
  const OperatorMatrix mat = assemble_level(m, cfg.level_max);
  const EigReport eig = sym_eigs(mat);
  out.write("eigenvalues.csv", eig_report_csv(eig), outcome);
  json report{{"level", cfg.level_max}, {"dim", eig.dim}, {"residual_bound", eig.residual_bound}, {"norm", eig.norm}};
  if (eig.residual_bound > residual_tolerance(eig.norm)) {
    outcome.exit_code = 1;
    outcome.messages.push_back("FAILED: eigen residual above tolerance");
  }
  if (auto target = detail::resolve_target(cfg.target, m)) {
    const auto h = hausdorff_to_set(eig.eigenvalues, *target);
    report["target"] = to_json(*target);
    report["hausdorff_forward"] = h.forward;
    report["hausdorff_backward"] = h.backward;
    report["inside_target"] = h.forward <= cfg.tol;
    if (h.forward > cfg.tol) {
      outcome.exit_code = 1;
      outcome.messages.push_back("FAILED: eigenvalue outside target, distance " + format_double(h.forward));
    }
    outcome.messages.push_back("forward " + format_double(h.forward) + ", backward " + format_double(h.backward));
  }
  out.write("report.json", report.dump(2) + "\n", outcome);
  out.write_manifest(cfg, {{"membership", cfg.tol}, {"residual", "1e-10*(1+|M|)"}}, outcome);
  return outcome;
}

inline CommandOutcome cmd_slice(const RunConfig& cfg) {
  CommandOutcome outcome;
  detail::OutputDir out(cfg.out_dir);
  std::string endpoints = "t,lo,hi\n";
  json report = json::array();
  for (std::size_t i = 0; i < cfg.t_values.size(); ++i) {
    const double t = cfg.t_values[i];
    const IntervalUnion lambda = lambda_slice(t);
    for (const auto& p : lambda.parts())
      endpoints += format_double(t) + "," + format_double(p.lo) + "," + format_double(p.hi) + "\n";
    json entry{{"t", t}, {"lambda", to_json(lambda)}};
    json levels = json::array();
    const std::string tag = cfg.t_values.size() == 1 ? "" : "t" + std::to_string(i) + "_";
    for (int n = cfg.level_min; n <= cfg.level_max; ++n) {
      const auto samples = slice_spectrum_samples(t, n);
      out.write(tag + "samples_n" + std::to_string(n) + ".csv", values_csv(samples), outcome);
      const auto h = hausdorff_to_set(samples, lambda);
      levels.push_back({{"n", n}, {"count", samples.size()}, {"forward", h.forward}, {"backward", h.backward}});
      if (h.forward > cfg.tol) {
        outcome.exit_code = 1;
        outcome.messages.push_back("FAILED: sample outside Lambda_t at t=" + format_double(t) + ", n=" + std::to_string(n));
      }
    }
    entry["levels"] = levels;
    report.push_back(entry);
    out.write(tag + "slice.svg", omega_svg(std::min(cfg.level_max, 4), &t), outcome);
  }
  out.write("lambda.csv", endpoints, outcome);
  out.write("slice.json", report.dump(2) + "\n", outcome);
  out.write_manifest(cfg, {{"membership", cfg.tol}, {"dedup", 1e-12}}, outcome);
  return outcome;
}

inline CommandOutcome cmd_omega(const RunConfig& cfg) {
  CommandOutcome outcome;
  detail::OutputDir out(cfg.out_dir);
  json curves = json::array();
  struct Item {
    int n;
    std::int64_t j;
  };
  std::vector<Item> items;
  for (int n = std::max(1, cfg.level_min); n <= cfg.level_max; ++n)
    for (std::int64_t j = 0; j < (std::int64_t{1} << n); ++j) items.push_back({n, j});
  std::vector<CurveReport> reports(items.size());
  parallel_for(items.size(), [&](std::size_t k) {
    reports[k] = curve_invariance_check(items[k].n, items[k].j, 10000, cfg.tol);
  });
  double worst = 0.0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    worst = std::max(worst, reports[k].max_residual);
    curves.push_back({{"n", items[k].n}, {"j", items[k].j}, {"max_residual", reports[k].max_residual},
                      {"evaluated", reports[k].evaluated}, {"skipped_near_pole", reports[k].skipped_near_pole}});
    if (!reports[k].ok) outcome.exit_code = 1;
  }
  // Two-way invariance of Ω under F on a Halton point set in [−6, 6]².
  auto halton = [](std::uint64_t i, std::uint64_t base) {
    double f = 1.0;
    double r = 0.0;
    while (i > 0) {
      f /= static_cast<double>(base);
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    return r;
  };
  std::uint64_t mismatches = 0;
  std::uint64_t tested = 0;
  for (std::uint64_t i = 1; i <= cfg.samples; ++i) {
    const Param p{-6.0 + 12.0 * halton(i, 2), -6.0 + 12.0 * halton(i, 3)};
    if (near_beta_pole(p.beta)) continue;
    ++tested;
    if (in_omega(p) != in_omega(F(p))) ++mismatches;
  }
  if (mismatches > 0) outcome.exit_code = 1;
  outcome.messages.push_back("curve residual max " + format_double(worst) + ", Omega/F mismatches " +
                             std::to_string(mismatches) + " of " + std::to_string(tested));
  out.write("omega.svg", omega_svg(std::min(cfg.level_max, 6)), outcome);
  out.write("omega.json",
            json{{"curves", curves}, {"max_curve_residual", worst}, {"invariance_points", tested},
                 {"invariance_mismatches", mismatches}}
                    .dump(2) + "\n",
            outcome);
  out.write_manifest(cfg, {{"curve_residual", cfg.tol}, {"pole_margin", 0.1}}, outcome);
  return outcome;
}

inline CommandOutcome cmd_orbital(const RunConfig& cfg) {
  const AlgebraElement m = cfg.element.value_or(AlgebraElement::delta());
  CommandOutcome outcome;
  detail::OutputDir out(cfg.out_dir);
  const auto x = BoundaryPoint::parse(cfg.point);
  const auto ball = orbital_ball(x, detail::parse_generating_set(cfg.gens), cfg.radius, cfg.depth);
  out.write("graph.csv", ball.graph.to_csv(), outcome);
  const OperatorMatrix op = assemble_orbital(m, ball.graph);
  std::string flags = "vertex,boundary\n";
  for (std::size_t v = 0; v < ball.points.size(); ++v)
    flags += ball.graph.id(v) + "," + (op.boundary[v] ? "1" : "0") + "\n";
  out.write("boundary.csv", flags, outcome);
  json report{{"point", x.str()}, {"radius", cfg.radius}, {"vertices", ball.points.size()},
              {"boundary_rows", op.boundary_rows()}};
  if (op.symmetric()) {
    const EigReport eig = sym_eigs(op);
    out.write("spectrum.csv", eig_report_csv(eig), outcome);
    report["residual_bound"] = eig.residual_bound;
    if (auto target = detail::resolve_target(cfg.target, m)) {
      std::size_t near = 0;
      for (double l : eig.eigenvalues) near += target->distance(l) <= 0.05 ? 1 : 0;
      report["target"] = to_json(*target);
      report["fraction_within_0.05"] = static_cast<double>(near) / static_cast<double>(eig.eigenvalues.size());
      report["min_eigenvalue"] = eig.eigenvalues.front();
      report["max_eigenvalue"] = eig.eigenvalues.back();
    }
  } else {
    outcome.messages.push_back("truncated operator is not symmetric; spectrum skipped");
  }
  out.write("report.json", report.dump(2) + "\n", outcome);
  out.write_manifest(cfg, {{"near_target", 0.05}}, outcome);
  return outcome;
}

struct RigidityTally {
  Gen generator;
  std::uint64_t rigid = 0;
  int deepest = 0;  // largest rigidity depth observed
};

/// Samples boundary points coordinatewise i.i.d. with P(0) = q for `depth`
/// coordinates, followed by the fixed tail (0). Rigidity is only probed
/// within the random prefix, so the tail never influences the result.
inline std::vector<BoundaryPoint> sample_boundary_points(double q, std::uint64_t samples, int depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<BoundaryPoint> points;
  points.reserve(samples);
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(depth));
    for (auto& b : bits) b = detail::unit_uniform(rng) < q ? 0 : 1;
    points.emplace_back(std::move(bits), std::vector<std::uint8_t>{0});
  }
  return points;
}

inline std::vector<RigidityTally> rigidity_tally(const std::vector<BoundaryPoint>& points, int depth) {
  std::vector<RigidityTally> tallies;
  for (Gen g : kGenerators) {
    std::vector<int> at(points.size(), 0);
    const GroupWord w = GroupWord::single(g);
    parallel_for(points.size(), [&](std::size_t i) { at[i] = rigidity_depth(points[i], w, depth).rigid_at.value_or(0); });
    RigidityTally t{g, 0, 0};
    for (int d : at) {
      if (d > 0) ++t.rigid;
      t.deepest = std::max(t.deepest, d);
    }
    tallies.push_back(t);
  }
  return tallies;
}

inline CommandOutcome cmd_rigidity(const RunConfig& cfg) {
  if (!(cfg.q > 0.0 && cfg.q < 1.0)) throw Error(ErrorKind::InvalidArgument, "q must lie in (0,1)");
  if (cfg.depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be at least 1");
  CommandOutcome outcome;
  detail::OutputDir out(cfg.out_dir);
  json gens = json::object();
  if (cfg.samples > 0) {
    const auto points = sample_boundary_points(cfg.q, cfg.samples, cfg.depth, cfg.seed);
    for (const auto& t : rigidity_tally(points, cfg.depth)) {
      gens[std::string(1, to_char(t.generator))] = {
          {"rigid", t.rigid},
          {"fraction", static_cast<double>(t.rigid) / static_cast<double>(cfg.samples)},
          {"deepest", t.deepest}};
    }
  }
  out.write("rigidity.json",
            json{{"q", cfg.q}, {"samples", cfg.samples}, {"depth", cfg.depth}, {"seed", cfg.seed}, {"generators", gens}}
                    .dump(2) + "\n",
            outcome);
  out.write_manifest(cfg, {{"tail", "(0)"}}, outcome);
  return outcome;
}

inline CommandOutcome run_command(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Verify: return cmd_verify(cfg);
    case Command::Spectrum: return cmd_spectrum(cfg);
    case Command::Slice: return cmd_slice(cfg);
    case Command::Omega: return cmd_omega(cfg);
    case Command::Orbital: return cmd_orbital(cfg);
    case Command::Rigidity: return cmd_rigidity(cfg);
  }
  return {};
}

}  // namespace selfsim
