// axibie command-line interface.
//
// Subcommands: roots, solve, eval, verify, halfplane, kernel-table.
// Exit codes: 0 success, 1 configuration or I/O problem, 2 mathematical
// domain violation, 3 verification tolerances not met.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "axibie/axibie.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

struct GlobalOpts {
  std::string config;
  std::string out_dir;
  int threads = 0;
  unsigned seed = 0;
};

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("AXIBIE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 1024) return static_cast<int>(v);
  }
  return 0;
}

std::string out_path(const GlobalOpts& g, const std::string& name) {
  if (g.out_dir.empty()) return name;
  std::filesystem::create_directories(g.out_dir);
  return (std::filesystem::path(g.out_dir) / name).string();
}

// Boundary data for a case config: manufactured trace or CSV columns.
struct LoadedData {
  std::vector<double> g1, g2;
  bool manufactured = false;
  axibie::ManufacturedCase mc;  // valid iff manufactured
};

LoadedData load_boundary_data(const axibie::CaseConfig& cfg, const axibie::BieSystem& sys) {
  LoadedData out;
  if (cfg.data.kind == axibie::DataSource::Kind::manufactured) {
    out.manufactured = true;
    out.mc = axibie::manufactured_case(cfg.data.pole, cfg.data.coeffs, sys, cfg.material);
    out.g1 = out.mc.g1;
    out.g2 = out.mc.g2;
  } else {
    auto [g1, g2] = axibie::boundary_from_csv(axibie::read_text_file(cfg.data.path), sys.grid.n);
    out.g1 = std::move(g1);
    out.g2 = std::move(g2);
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_roots(const GlobalOpts& g) {
  const std::string text = axibie::read_text_file(g.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw axibie::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  // Accept either {"material": {...}} or the bare constants object.
  const auto& mj = j.contains("material") ? j.at("material") : j;
  const axibie::ElasticConstants m = axibie::material_from_json(mj);
  const axibie::CharacteristicData cd = axibie::characteristic_data(m);
  ordered_json out;
  out["version"] = axibie::kVersion;
  out["mu1"] = cd.lambda1 * cd.lambda1;
  out["mu2"] = cd.lambda2 * cd.lambda2;
  out["lambda1"] = cd.lambda1;
  out["lambda2"] = cd.lambda2;
  out["k1"] = cd.k1;
  out["k2"] = cd.k2;
  out["delta"] = cd.delta;
  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

int cmd_solve(const GlobalOpts& g) {
  const auto t0 = std::chrono::steady_clock::now();
  const axibie::CaseConfig cfg = axibie::parse_case_config(axibie::read_text_file(g.config));
  axibie::BieOptions opt;
  opt.threads = resolve_threads(g.threads);
  const axibie::BieSystem sys =
      axibie::assemble(cfg.contour, axibie::characteristic_data(cfg.material), cfg.n, opt);
  const LoadedData data = load_boundary_data(cfg, sys);
  const axibie::DensityPair h = axibie::solve(sys, data.g1, data.g2);

  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(sys.grid.n));
  for (int i = 0; i < sys.grid.n; ++i) {
    const auto& node = sys.grid.nodes[static_cast<std::size_t>(i)];
    rows.push_back({node.x, node.r, node.z, h.h1[static_cast<std::size_t>(i)],
                    h.h2[static_cast<std::size_t>(i)]});
  }
  const std::string densities_path = out_path(g, cfg.out.densities);
  axibie::write_text_file(densities_path,
                          axibie::render_csv(cfg.hash, {"s", "r", "z", "h1", "h2"}, rows));

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ordered_json report;
  report["version"] = axibie::kVersion;
  report["config_hash"] = "0x" + axibie::hex16(cfg.hash);
  report["n"] = sys.grid.n;
  report["condition"] = sys.condition;
  report["residual"] = h.residual;
  report["wall_time_seconds"] = wall;
  const std::string report_path = out_path(g, cfg.out.report);
  axibie::write_text_file(report_path, report.dump(2) + "\n");
  std::printf("solve: n=%d condition=%.3g residual=%.3g -> %s, %s\n", sys.grid.n, sys.condition,
              h.residual, densities_path.c_str(), report_path.c_str());
  return 0;
}

int cmd_eval(const GlobalOpts& g, const std::string& probes_path, bool with_stress) {
  const axibie::CaseConfig cfg = axibie::parse_case_config(axibie::read_text_file(g.config));
  axibie::BieOptions opt;
  opt.threads = resolve_threads(g.threads);
  const axibie::BieSystem sys =
      axibie::assemble(cfg.contour, axibie::characteristic_data(cfg.material), cfg.n, opt);
  const LoadedData data = load_boundary_data(cfg, sys);
  const axibie::DensityPair h = axibie::solve(sys, data.g1, data.g2);

  const axibie::CsvTable probes = axibie::parse_csv(axibie::read_text_file(probes_path));
  const int cr = probes.column("r");
  const int cz = probes.column("z");
  if (cr < 0 || cz < 0) throw axibie::ConfigError("probe CSV must have columns 'r' and 'z'");

  std::vector<std::string> header{"r", "z", "u_r", "u_z"};
  if (with_stress) {
    header.insert(header.end(), {"srr", "sphiphi", "szz", "srz"});
  }
  std::vector<std::vector<double>> rows;
  int near_count = 0;
  for (const auto& row : probes.rows) {
    const double r = row[static_cast<std::size_t>(cr)];
    const double z = row[static_cast<std::size_t>(cz)];
    const axibie::FieldSample s = with_stress ? axibie::stress(sys, h, cfg.material, r, z)
                                              : axibie::displacement(sys, h, r, z);
    if (s.near_boundary) ++near_count;
    std::vector<double> out{r, z, s.u.u_r, s.u.u_z};
    if (with_stress) {
      out.insert(out.end(), {s.stress.srr, s.stress.sphiphi, s.stress.szz, s.stress.srz});
    }
    rows.push_back(std::move(out));
  }
  if (near_count > 0) {
    std::fprintf(stderr,
                 "warning: %d probe(s) within five mesh widths of the contour; "
                 "expect reduced accuracy there\n",
                 near_count);
  }
  const std::string eval_path = out_path(g, "eval.csv");
  axibie::write_text_file(eval_path, axibie::render_csv(cfg.hash, header, rows));
  std::printf("eval: %zu probe(s) -> %s\n", rows.size(), eval_path.c_str());
  return 0;
}

// Deterministic interior probe set: points pulled toward the node centroid
// until they sit well inside, rotated in parameter by the seed.
std::vector<std::pair<double, double>> interior_probes(const axibie::BieSystem& sys,
                                                       unsigned seed, int count) {
  double cr = 0.0, cz = 0.0;
  for (const auto& node : sys.grid.nodes) {
    cr += node.r;
    cz += node.z;
  }
  cr /= sys.grid.n;
  cz /= sys.grid.n;
  const double phase = std::fmod(0.6180339887498949 * (seed + 1), 1.0);
  std::vector<std::pair<double, double>> probes;
  for (int i = 0; i < count; ++i) {
    const double s = sys.grid.period * (i + phase) / count;
    const auto p = sys.contour.at(s);
    double t = 0.55;
    for (int tries = 0; tries < 30; ++tries) {
      const double r = cr + t * (p.r - cr);
      const double z = cz + t * (p.z - cz);
      if (r > 0.0 && sys.contour.contains(r, z) &&
          sys.contour.nearest_distance(r, z) >= 0.2 * sys.contour.scale()) {
        probes.emplace_back(r, z);
        break;
      }
      t *= 0.9;
    }
  }
  if (probes.empty()) throw axibie::err_degenerate_contour("no valid interior probes found");
  return probes;
}

int cmd_verify(const GlobalOpts& g) {
  const axibie::CaseConfig cfg = axibie::parse_case_config(axibie::read_text_file(g.config));
  if (cfg.data.kind != axibie::DataSource::Kind::manufactured) {
    throw axibie::ConfigError("verify requires a manufactured data source");
  }
  axibie::BieOptions opt;
  opt.threads = resolve_threads(g.threads);
  const axibie::CharacteristicData cd = axibie::characteristic_data(cfg.material);

  // Resolution ladder n/4, n/2, n (clamped at the minimum node count).
  std::vector<int> ladder;
  for (const int div : {4, 2, 1}) {
    const int n = cfg.n / div;
    if (n >= 16 && n % 2 == 0 && (ladder.empty() || ladder.back() != n)) ladder.push_back(n);
  }

  std::vector<double> errors, conditions;
  double jump_error = 0.0, trace_sup = 0.0;
  std::vector<std::pair<double, double>> probes;
  for (std::size_t lev = 0; lev < ladder.size(); ++lev) {
    const int n = ladder[lev];
    const axibie::BieSystem sys = axibie::assemble(cfg.contour, cd, n, opt);
    const axibie::ManufacturedCase mc =
        axibie::manufactured_case(cfg.data.pole, cfg.data.coeffs, sys, cfg.material);
    const axibie::DensityPair h = axibie::solve(sys, mc.g1, mc.g2);
    if (lev == 0) probes = interior_probes(sys, g.seed, 10);
    double worst = 0.0;
    for (const auto& [r, z] : probes) {
      const auto got = axibie::displacement(sys, h, r, z);
      const auto want = mc.displacement(r, z);
      const double scale = std::max({std::abs(want.u_r), std::abs(want.u_z), 1e-30});
      worst = std::max(worst, std::max(std::abs(got.u.u_r - want.u_r),
                                       std::abs(got.u.u_z - want.u_z)) /
                                  scale);
    }
    errors.push_back(worst);
    conditions.push_back(sys.condition);
    if (lev + 1 == ladder.size()) {
      trace_sup = mc.trace_sup;
      jump_error = axibie::jump_check_max_error(sys, h, std::max(1, n / 32), opt.threads);
    }
  }

  const double finest = errors.back();
  double order = 0.0;
  if (ladder.size() >= 2) {
    const double levels = std::log2(static_cast<double>(ladder.back()) /
                                    static_cast<double>(ladder.front()));
    order = std::log2(errors.front() / std::max(finest, 1e-300)) / std::max(levels, 1.0);
  }
  const double cond_ratio = conditions.back() / conditions.front();

  const bool pass_error = finest <= 1e-6;
  const bool pass_order = ladder.size() < 2 || finest <= 1e-9 || order >= 3.0;
  const bool pass_jump = jump_error <= 1e-3 * std::max(trace_sup, 1e-300);
  const bool pass_condition = cond_ratio < 2.0 && cond_ratio > 0.5;
  const bool pass = pass_error && pass_order && pass_jump && pass_condition;

  ordered_json report;
  report["version"] = axibie::kVersion;
  report["config_hash"] = "0x" + axibie::hex16(cfg.hash);
  report["n_ladder"] = ladder;
  report["probe_count"] = probes.size();
  report["max_relative_error"] = errors;
  report["convergence_order"] = order;
  report["jump_error"] = jump_error;
  report["trace_sup"] = trace_sup;
  report["condition"] = conditions;
  report["condition_ratio"] = cond_ratio;
  report["checks"] = ordered_json{{"interior_error", pass_error},
                                  {"convergence_order", pass_order},
                                  {"jump", pass_jump},
                                  {"condition", pass_condition}};
  report["pass"] = pass;
  const std::string report_path = out_path(g, cfg.out.report);
  axibie::write_text_file(report_path, report.dump(2) + "\n");

  std::printf("check                 result   value\n");
  std::printf("interior_error        %s   %.3g (tol 1e-6)\n", pass_error ? "pass" : "FAIL",
              finest);
  std::printf("convergence_order     %s   %.2f (tol >= 3)\n", pass_order ? "pass" : "FAIL",
              order);
  std::printf("jump                  %s   %.3g (tol %.3g)\n", pass_jump ? "pass" : "FAIL",
              jump_error, 1e-3 * trace_sup);
  std::printf("condition             %s   ratio %.3f (tol < 2)\n",
              pass_condition ? "pass" : "FAIL", cond_ratio);
  std::printf("report -> %s\n", report_path.c_str());
  if (!pass) throw axibie::VerifyFailure("verification tolerances not met (see " + report_path +
                                         ")");
  return 0;
}

int cmd_halfplane(const GlobalOpts& g) {
  const std::string text = axibie::read_text_file(g.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw axibie::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const axibie::ElasticConstants m = axibie::material_from_json(axibie::json_field(j, "material"));

  const auto& pj = axibie::json_field(j, "profiles");
  const std::string kind = axibie::json_field(pj, "kind").get<std::string>();
  axibie::BoundaryData data = [&] {
    if (kind == "gaussian") {
      // f1 = A1 r exp(-(r/w1)^2), f2 = A2 exp(-(r/w2)^2)
      const auto& amp = axibie::json_field(pj, "amplitude");
      const auto& wid = axibie::json_field(pj, "width");
      if (!amp.is_array() || amp.size() != 2 || !wid.is_array() || wid.size() != 2) {
        throw axibie::ConfigError("gaussian profiles need amplitude [A1,A2] and width [w1,w2]");
      }
      const double a1 = amp[0].get<double>(), a2 = amp[1].get<double>();
      const double w1 = wid[0].get<double>(), w2 = wid[1].get<double>();
      if (!(w1 > 0.0) || !(w2 > 0.0)) throw axibie::ConfigError("gaussian widths must be > 0");
      const double rmax = 8.0 * std::max(w1, w2);
      return axibie::BoundaryData::from_functions(
          [=](double r) { return a1 * r * std::exp(-(r / w1) * (r / w1)); },
          [=](double r) { return a2 * std::exp(-(r / w2) * (r / w2)); }, rmax, 512);
    }
    if (kind == "csv") {
      const std::string path = axibie::json_field(pj, "path").get<std::string>();
      const axibie::CsvTable t = axibie::parse_csv(axibie::read_text_file(path));
      const int cr = t.column("r"), c1 = t.column("f1"), c2 = t.column("f2");
      if (cr < 0 || c1 < 0 || c2 < 0) {
        throw axibie::ConfigError("profile CSV must have columns 'r', 'f1', 'f2'");
      }
      std::vector<double> r, f1, f2;
      for (const auto& row : t.rows) {
        r.push_back(row[static_cast<std::size_t>(cr)]);
        f1.push_back(row[static_cast<std::size_t>(c1)]);
        f2.push_back(row[static_cast<std::size_t>(c2)]);
      }
      return axibie::BoundaryData::from_samples(std::move(r), std::move(f1), std::move(f2));
    }
    throw axibie::ConfigError("unknown profiles kind '" + kind + "'");
  }();

  const auto& gj = axibie::json_field(j, "grid");
  auto axis = [&](const char* key) {
    const auto& a = axibie::json_field(gj, key);
    if (!a.is_array() || a.size() != 3) {
      throw axibie::ConfigError(std::string("grid '") + key + "' must be [start, stop, count]");
    }
    const double lo = a[0].get<double>(), hi = a[1].get<double>();
    const int cnt = a[2].get<int>();
    if (cnt < 1 || hi < lo) throw axibie::ConfigError(std::string("bad grid axis '") + key + "'");
    std::vector<double> v;
    for (int i = 0; i < cnt; ++i) {
      v.push_back(cnt == 1 ? lo : lo + (hi - lo) * i / (cnt - 1));
    }
    return v;
  };
  const std::vector<double> rs = axis("r");
  const std::vector<double> zs = axis("z");

  axibie::SpectralGrid sg;
  if (j.contains("spectral")) {
    const auto& s = j.at("spectral");
    if (s.contains("t_max")) sg.t_max = s.at("t_max").get<double>();
    if (s.contains("panels")) sg.panels = s.at("panels").get<std::size_t>();
  }
  const axibie::HalfPlaneSolution sol = axibie::halfplane_solve(m, data, sg);

  std::vector<std::vector<double>> rows;
  for (const double z : zs) {
    for (const double r : rs) {
      const axibie::Displacement u =
          z > 0.0 ? sol.displacement(r, z) : sol.boundary_trace(r);
      rows.push_back({r, z, u.u_r, u.u_z});
    }
  }
  const std::string path = out_path(g, "halfplane.csv");
  axibie::write_text_file(path,
                          axibie::render_csv(axibie::fnv1a64(text), {"r", "z", "u_r", "u_z"}, rows));
  std::printf("halfplane: %zu point(s) -> %s\n", rows.size(), path.c_str());
  return 0;
}

int cmd_kernel_table(const GlobalOpts& g, const std::vector<double>& flat_points) {
  std::vector<std::array<double, 4>> pts;
  std::string hash_src;
  if (!g.config.empty()) {
    const std::string text = axibie::read_text_file(g.config);
    hash_src = text;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw axibie::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const auto& arr = axibie::json_field(j, "points");
    if (!arr.is_array()) throw axibie::ConfigError("'points' must be an array of [r,z,a,zeta]");
    for (const auto& p : arr) {
      if (!p.is_array() || p.size() != 4) {
        throw axibie::ConfigError("'points' entries must be [r, z, a, zeta]");
      }
      pts.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>(),
                     p[3].get<double>()});
    }
  }
  if (!flat_points.empty()) {
    if (flat_points.size() % 4 != 0) {
      throw axibie::ConfigError("--point needs groups of four values r z a zeta");
    }
    for (std::size_t i = 0; i < flat_points.size(); i += 4) {
      pts.push_back({flat_points[i], flat_points[i + 1], flat_points[i + 2],
                     flat_points[i + 3]});
    }
    for (const double v : flat_points) hash_src += axibie::format_g17(v) + ",";
  }
  if (pts.empty()) {
    throw axibie::ConfigError("kernel-table needs --config with 'points' or --point r z a zeta");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& [r, z, a, zeta] : pts) {
    const axibie::KernelJet w0 = axibie::w0_jet({r, z}, {a, zeta});
    const axibie::KernelJet w1 = axibie::w1_jet({r, z}, {a, zeta});
    rows.push_back({r, z, a, zeta, w0.value, w1.value, w0.d_r, w0.d_z, w1.d_r, w1.d_z});
  }
  const std::string csv = axibie::render_csv(
      axibie::fnv1a64(hash_src),
      {"r", "z", "a", "zeta", "w0", "w1", "w0_dr", "w0_dz", "w1_dr", "w1_dz"}, rows);
  std::fputs(csv.c_str(), stdout);
  return 0;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const axibie::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.error_class());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Axially symmetric displacement boundary-value problem solver "
               "for transversely isotropic solids of revolution"};
  app.set_version_flag("--version", std::string("axibie ") + axibie::kVersion);
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config, "JSON configuration file")->configurable(false);
  app.add_option("--out", g.out_dir, "output directory (created if missing)");
  app.add_option("--threads", g.threads, "worker threads (0 = auto; env AXIBIE_THREADS)");
  app.add_option("--seed", g.seed, "seed for randomized verification probes");

  auto* roots = app.add_subcommand("roots", "characteristic roots of a material");
  auto* solve = app.add_subcommand("solve", "solve the boundary integral system");
  auto* eval = app.add_subcommand("eval", "evaluate interior fields from a solved case");
  for (auto* sub : {roots, solve, eval}) sub->fallthrough();
  std::string probes_path;
  bool with_stress = false;
  eval->add_option("--probes", probes_path, "CSV with probe columns r,z")->required();
  eval->add_flag("--stress", with_stress, "include stress columns");
  auto* verify = app.add_subcommand("verify", "run the manufactured-solution checks");
  auto* halfplane = app.add_subcommand("halfplane", "solve the half-space problem on a grid");
  auto* kernel = app.add_subcommand("kernel-table", "tabulate ring kernels at given points");
  for (auto* sub : {verify, halfplane, kernel}) sub->fallthrough();
  std::vector<double> flat_points;
  kernel->add_option("--point", flat_points, "point r z a zeta (repeatable)")
      ->expected(-4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto need_config = [&]() {
    if (g.config.empty()) throw axibie::ConfigError("--config is required for this subcommand");
  };
  if (roots->parsed()) {
    return run_guarded([&] { need_config(); return cmd_roots(g); });
  }
  if (solve->parsed()) {
    return run_guarded([&] { need_config(); return cmd_solve(g); });
  }
  if (eval->parsed()) {
    return run_guarded([&] { need_config(); return cmd_eval(g, probes_path, with_stress); });
  }
  if (verify->parsed()) {
    return run_guarded([&] { need_config(); return cmd_verify(g); });
  }
  if (halfplane->parsed()) {
    return run_guarded([&] { need_config(); return cmd_halfplane(g); });
  }
  if (kernel->parsed()) {
    return run_guarded([&] { return cmd_kernel_table(g, flat_points); });
  }
  return 0;
}
