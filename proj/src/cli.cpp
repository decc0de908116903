#include "debary/cli.hpp"

#include "debary/parallel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace debary {

namespace {

// All table output is assembled into a string first so --out files and stdout
// carry identical bytes.
struct OutputSink {
  std::ostringstream buffer;

  int flush(const RunConfig& cfg, std::ostream& out, std::ostream& err, int code) {
    const std::string text = buffer.str();
    out << text;
    if (!cfg.out_path.empty()) {
      std::ofstream f(cfg.out_path);
      if (!f) {
        err << "error: cannot open output file '" << cfg.out_path << "'\n";
        return kExitRuntime;
      }
      f << text;
    }
    return code;
  }
};

int classify(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnsupportedLevel:
      return kExitParse;
    case ErrorCode::Inadmissible:
    case ErrorCode::InadmissibleSample:
      return kExitInadmissible;
    case ErrorCode::NoConvergence:
      return kExitNoConvergence;
    default:
      return kExitRuntime;
  }
}

std::vector<Vec> load_points(const RunConfig& cfg, int ambient_dim) {
  if (!cfg.points_path.empty()) {
    std::ifstream in(cfg.points_path);
    if (!in) {
      throw Error(ErrorCode::ParseError, "cannot open points file '" + cfg.points_path + "'");
    }
    return parse_points(in, ambient_dim, cfg.points_path);
  }
  if (!cfg.grid_spec.empty()) return parse_grid_spec(cfg.grid_spec, ambient_dim);
  if (!cfg.at.empty()) {
    std::istringstream in(cfg.at);
    return parse_points(in, ambient_dim, "--at");
  }
  throw Error(ErrorCode::ParseError, "no points given: use --points, --grid or --at");
}

SphereMap map_for_dim(const PlaneMap& pm, int sphere_dim) {
  if (sphere_dim == 2) return lift(pm);
  if (sphere_dim == 1) return circle_map(pm);
  throw Error(ErrorCode::InvalidArgument, "maps are supported for --dim 1 and 2 only");
}

}  // namespace

int RunConfig::effective_workers() const { return workers > 0 ? workers : default_workers(); }

int cmd_barycenter(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OutputSink sink;
  try {
    const MeasureSpec spec = parse_measure_file(cfg.measure_path);
    const QuadratureRule rule = make_rule(spec.sphere_dim, cfg.level);
    const SphereMeasure mu = build_measure(spec, rule);
    const BarycenterResult res = barycenter(mu, cfg.solver());
    write_barycenter_result(sink.buffer, res);
    if (!res.converged) {
      sink.buffer << "largest_atom_mass: " << fmt(res.largest_atom_mass) << "\n";
      sink.buffer << "residual_history:";
      for (double r : res.residual_history) sink.buffer << " " << fmt(r);
      sink.buffer << "\n";
      return sink.flush(cfg, out, err, kExitNoConvergence);
    }
    return sink.flush(cfg, out, err, kExitOk);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Inadmissible) {
      err << "inadmissible measure: " << e.what() << "\n";
      return kExitInadmissible;
    }
    err << "error: " << e.what() << "\n";
    return classify(e);
  }
}

int cmd_field(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OutputSink sink;
  try {
    const MeasureSpec spec = parse_measure_file(cfg.measure_path);
    const QuadratureRule rule = make_rule(spec.sphere_dim, cfg.level);
    const SphereMeasure mu = build_measure(spec, rule);
    const std::vector<Vec> points = load_points(cfg, spec.sphere_dim + 1);
    sink.buffer << "# w..., field..., normalized..., |normalized|\n";
    for (const Vec& p : points) {
      const FieldValue fv = field(mu, BallPoint(p));
      sink.buffer << fmt_vec(p, ",") << "," << fmt_vec(fv.vector, ",") << ","
                  << fmt_vec(fv.normalized, ",") << "," << fmt(fv.normalized.norm()) << "\n";
    }
    return sink.flush(cfg, out, err, kExitOk);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return classify(e);
  }
}

int cmd_extend(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OutputSink sink;
  try {
    const PlaneMap pm = parse_map_file(cfg.map_path);
    const SphereMap phi = map_for_dim(pm, cfg.dim);
    const QuadratureRule rule = make_rule(cfg.dim, cfg.level);
    const ExtensionEvaluator ev(phi, rule, cfg.solver());
    const std::vector<Vec> points = load_points(cfg, cfg.dim + 1);

    struct Row {
      Vec input, output;
      double residual = 0.0;
      int iterations = 0;
      std::string status = "ok";
    };
    std::vector<Row> rows(points.size());
    parallel_for(points.size(), cfg.effective_workers(), [&](std::size_t i) {
      Row& row = rows[i];
      row.input = points[i];
      try {
        const double n = points[i].norm();
        if (std::abs(n - 1.0) <= kSphereTol) {
          row.output = ev.boundary(SpherePoint(points[i])).coords();
        } else {
          const BarycenterResult res = ev.extend_detail(BallPoint(points[i]));
          row.output = res.point.coords();
          row.residual = res.residual;
          row.iterations = res.iterations;
        }
      } catch (const Error& e) {
        row.output = Vec::Zero(points[i].size());
        row.status = error_code_name(e.code());
      }
    });

    sink.buffer << "# input..., output..., residual, iterations, status\n";
    std::size_t failures = 0;
    double max_residual = 0.0;
    for (const Row& row : rows) {
      sink.buffer << fmt_vec(row.input, ",") << "," << fmt_vec(row.output, ",") << ","
                  << fmt(row.residual) << "," << row.iterations << "," << row.status << "\n";
      if (row.status != "ok") ++failures;
      max_residual = std::max(max_residual, row.residual);
    }
    sink.buffer << "# summary: points=" << rows.size() << " failed=" << failures
                << " max_residual=" << fmt(max_residual) << "\n";
    return sink.flush(cfg, out, err, failures == 0 ? kExitOk : kExitNoConvergence);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return classify(e);
  }
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OutputSink sink;
  try {
    SuiteConfig scfg;
    scfg.seed = cfg.seed;
    scfg.level = cfg.level;
    scfg.workers = cfg.effective_workers();
    scfg.solver = cfg.solver();
    const SuiteResult res = run_suite(cfg.suite, scfg);
    sink.buffer << "suite: " << res.name << " seed=" << cfg.seed << " level=" << cfg.level
                << "\n";
    write_check_items(sink.buffer, res.checks);
    std::size_t passed = 0, asserted = 0;
    for (const CheckItem& c : res.checks) {
      if (c.asserted) {
        ++asserted;
        if (c.pass) ++passed;
      }
    }
    sink.buffer << "# summary: " << passed << "/" << asserted << " properties passed\n";
    return sink.flush(cfg, out, err, res.passed() ? kExitOk : kExitCheckFailed);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return classify(e);
  }
}

int cmd_conjecture(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OutputSink sink;
  try {
    const PlaneMap pm = parse_map_file(cfg.map_path);
    const auto* blaschke = std::get_if<BlaschkeProduct>(&pm);
    if (!blaschke) {
      throw Error(ErrorCode::InvalidArgument, "conjecture scans take a Blaschke map input");
    }
    ExperimentConfig ecfg;
    ecfg.level = cfg.level;
    ecfg.solver = cfg.solver();
    ecfg.seed = cfg.seed;
    ecfg.workers = cfg.effective_workers();
    const BlaschkeStructureReport rep = blaschke_experiment_suite(*blaschke, ecfg);
    sink.buffer << "# conjecture residual scan (exploratory: no assertions on magnitudes)\n";
    write_blaschke_report(sink.buffer, rep);
    return sink.flush(cfg, out, err, kExitOk);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return classify(e);
  }
}

int cmd_mesh(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OutputSink sink;
  try {
    const PlaneMap pm = parse_map_file(cfg.map_path);
    const SphereMap phi = map_for_dim(pm, 2);
    const QuadratureRule rule = make_rule(2, cfg.level);
    const ExtensionEvaluator ev(phi, rule, cfg.solver());

    std::vector<Vec> vertices;
    std::vector<std::array<int, 4>> quads;
    const int n = cfg.mesh_segments;
    if (cfg.surface == "disc") {
      // polar grid on the equatorial disc; image vertices, ring x sector quads
      for (int i = 0; i <= n; ++i) {
        const double r = cfg.mesh_radius * i / n;
        for (int j = 0; j < 2 * n; ++j) {
          const double th = 2.0 * std::numbers::pi * j / (2 * n);
          Vec p(3);
          p << r * std::cos(th), r * std::sin(th), 0.0;
          vertices.push_back(ev.extend(BallPoint(std::move(p))).coords());
        }
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 2 * n; ++j) {
          const int jn = (j + 1) % (2 * n);
          quads.push_back({i * 2 * n + j, i * 2 * n + jn, (i + 1) * 2 * n + jn,
                           (i + 1) * 2 * n + j});
        }
      }
    } else if (cfg.surface == "sphere") {
      // latitude x longitude shell of the given radius
      for (int i = 0; i <= n; ++i) {
        const double polar = std::numbers::pi * i / n;
        for (int j = 0; j < 2 * n; ++j) {
          const double th = 2.0 * std::numbers::pi * j / (2 * n);
          Vec p(3);
          p << std::sin(polar) * std::cos(th), std::sin(polar) * std::sin(th), std::cos(polar);
          p *= cfg.mesh_radius;
          vertices.push_back(ev.extend(BallPoint(std::move(p))).coords());
        }
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 2 * n; ++j) {
          const int jn = (j + 1) % (2 * n);
          quads.push_back({i * 2 * n + j, i * 2 * n + jn, (i + 1) * 2 * n + jn,
                           (i + 1) * 2 * n + j});
        }
      }
    } else {
      throw Error(ErrorCode::InvalidArgument, "surface must be 'disc' or 'sphere'");
    }
    write_off_mesh(sink.buffer, vertices, quads);
    return sink.flush(cfg, out, err, kExitOk);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return classify(e);
  }
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "barycenter") return cmd_barycenter(cfg, out, err);
  if (cfg.command == "field") return cmd_field(cfg, out, err);
  if (cfg.command == "extend") return cmd_extend(cfg, out, err);
  if (cfg.command == "check") return cmd_check(cfg, out, err);
  if (cfg.command == "conjecture") return cmd_conjecture(cfg, out, err);
  if (cfg.command == "mesh") return cmd_mesh(cfg, out, err);
  err << "error: unknown command '" << cfg.command << "'\n";
  return kExitParse;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"conformal barycenters and barycentric extensions on the sphere"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--dim", cfg.dim, "sphere dimension n")->envname("DEBARY_DIM");
    sub->add_option("--level", cfg.level, "quadrature level")->envname("DEBARY_LEVEL");
    sub->add_option("--tol", cfg.tol, "solver tolerance")->envname("DEBARY_TOL");
    sub->add_option("--max-iters", cfg.max_iters, "solver iteration cap")
        ->envname("DEBARY_MAX_ITERS");
    sub->add_option("--seed", cfg.seed, "seed for randomized suites")->envname("DEBARY_SEED");
    sub->add_option("--workers", cfg.workers, "worker threads (0 = machine)")
        ->envname("DEBARY_WORKERS");
    sub->add_option("--out", cfg.out_path, "also write the output to this file");
  };

  CLI::App* bary = app.add_subcommand("barycenter", "conformal barycenter of a measure file");
  bary->add_option("--measure", cfg.measure_path, "measure file")->required();
  add_common(bary);

  CLI::App* fieldc = app.add_subcommand("field", "barycentric vector field of a measure");
  fieldc->add_option("--measure", cfg.measure_path, "measure file")->required();
  fieldc->add_option("--points", cfg.points_path, "points file");
  fieldc->add_option("--grid", cfg.grid_spec, "grid spec");
  fieldc->add_option("--at", cfg.at, "inline point, comma separated");
  add_common(fieldc);

  CLI::App* ext = app.add_subcommand("extend", "evaluate the barycentric extension of a map");
  ext->add_option("--map", cfg.map_path, "map file")->required();
  ext->add_option("--points", cfg.points_path, "points file");
  ext->add_option("--grid", cfg.grid_spec, "grid spec (disc:N[:R] | segment:p0:p1:N | shell:R:L)");
  ext->add_option("--at", cfg.at, "inline point, comma separated");
  add_common(ext);

  CLI::App* check = app.add_subcommand("check", "run a property suite");
  check->add_option("suite", cfg.suite, "one of: naturality barycenter extension blaschke inner jacobian")
      ->required();
  add_common(check);

  CLI::App* conj = app.add_subcommand("conjecture", "residual scan for the open conjectures");
  conj->add_option("--map", cfg.map_path, "Blaschke map file")->required();
  add_common(conj);

  CLI::App* mesh = app.add_subcommand("mesh", "export the image of a parametrized surface");
  mesh->add_option("--map", cfg.map_path, "map file")->required();
  mesh->add_option("--surface", cfg.surface, "disc | sphere");
  mesh->add_option("--segments", cfg.mesh_segments, "mesh resolution");
  mesh->add_option("--radius", cfg.mesh_radius, "surface radius");
  add_common(mesh);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  return run_command(cfg, std::cout, std::cerr);
}

}  // namespace debary
