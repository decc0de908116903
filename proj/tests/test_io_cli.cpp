#include "debary/cli.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace debary;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& contents)
      : path("/tmp/debary_test_" + name) {
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("expression parser") {
  const Expression e = Expression::parse("1 + 2*z^2 - pow(z, 3)/2");
  CHECK(std::abs(e.eval({{"z", Cplx(2.0, 0.0)}}) - Cplx(5.0, 0.0)) < 1e-15);

  const Expression c = Expression::parse("exp(i*z)");
  CHECK(std::abs(c.eval({{"z", Cplx(std::acos(-1.0), 0.0)}}) - Cplx(-1.0, 0.0)) < 1e-14);

  const Expression trig = Expression::parse("cos(z)*cos(z) + sin(z)*sin(z)");
  CHECK(std::abs(trig.eval({{"z", Cplx(0.7, 0.2)}}) - Cplx(1.0, 0.0)) < 1e-14);

  CHECK_THROWS_AS(Expression::parse("1 + "), Error);
  CHECK_THROWS_AS(Expression::parse("foo(z)").eval({{"z", Cplx(0, 0)}}), Error);
  CHECK_THROWS_AS(Expression::parse("(1"), Error);
}

TEST_CASE("complex literal parsing") {
  CHECK(parse_complex("1.5") == Cplx(1.5, 0.0));
  CHECK(parse_complex("-0.4i") == Cplx(0.0, -0.4));
  CHECK(parse_complex("1+2i") == Cplx(1.0, 2.0));
  CHECK(parse_complex("2.5e-1-0.5i") == Cplx(0.25, -0.5));
  CHECK(parse_complex("i") == Cplx(0.0, 1.0));
  CHECK(parse_complex("-i") == Cplx(0.0, -1.0));
  CHECK_THROWS_AS(parse_complex("nope"), Error);
}

TEST_CASE("measure file grammar") {
  std::istringstream in(
      "# a mixed measure\n"
      "dimension: 2\n"
      "atoms: [[1, 0, 0], 0.25], [[-1, 0, 0], 0.25]\n"
      "density_expr: 1 + 0.5*z3^2\n");
  const MeasureSpec spec = parse_measure(in, "test");
  CHECK(spec.sphere_dim == 2);
  CHECK(spec.atoms.size() == 2);
  REQUIRE(spec.density_expr.has_value());

  const QuadratureRule rule = make_rule(2, 16);
  const SphereMeasure mu = build_measure(spec, rule);
  CHECK(std::abs(mu.total_mass() - 1.0) < 1e-12);
  CHECK(mu.atom_count() == 2);

  // errors carry positions
  std::istringstream bad("dimension: 2\natoms: [[1, 0], 0.5]\n");
  try {
    parse_measure(bad, "bad.txt");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bad.txt:2") != std::string::npos);
  }

  std::istringstream missing("atoms: [[1,0,0], 1.0]\n");
  CHECK_THROWS_AS(parse_measure(missing, "m"), Error);
}

TEST_CASE("map file grammar") {
  std::istringstream in("blaschke: sigma=1, zeros=[0.3, -0.4i]\n");
  const PlaneMap pm = parse_map(in, "maps");
  const auto* b = std::get_if<BlaschkeProduct>(&pm);
  REQUIRE(b != nullptr);
  CHECK(b->degree() == 2);
  CHECK(std::abs(b->zeros()[1] - Cplx(0.0, -0.4)) == 0.0);

  std::istringstream rin("rational: num_coeffs=[0, 0, 1], den_coeffs=[1]\n");
  const PlaneMap rm = parse_map(rin, "maps");
  CHECK(std::get_if<RationalMap>(&rm) != nullptr);

  std::istringstream ein("expr: z^2 + 0.1*exp(z)\n");
  const PlaneMap em = parse_map(ein, "maps");
  CHECK(std::get_if<ExprPlaneMap>(&em) != nullptr);

  std::istringstream bad("spline: whatever\n");
  CHECK_THROWS_AS(parse_map(bad, "maps"), Error);
}

TEST_CASE("grid specs") {
  const auto disc = parse_grid_spec("disc:5:0.8", 3);
  CHECK(disc.size() > 10);
  for (const Vec& p : disc) {
    CHECK(p.norm() <= 0.8 + 1e-12);
    CHECK(p[2] == 0.0);
  }
  const auto seg = parse_grid_spec("segment:0,0,0:0,0,0.9:10", 3);
  CHECK(seg.size() == 10);
  CHECK((seg.back() - 0.9 * Vec::Unit(3, 2)).norm() < 1e-15);

  const auto shell = parse_grid_spec("shell:0.5:4", 3);
  CHECK(shell.size() == 4 * 8);
  for (const Vec& p : shell) CHECK(std::abs(p.norm() - 0.5) < 1e-12);

  CHECK_THROWS_AS(parse_grid_spec("disc:5", 2), Error);
  CHECK_THROWS_AS(parse_grid_spec("blob:1", 3), Error);
}

TEST_CASE("barycenter command: uniform, inadmissible, parse failure") {
  TempFile uniform("uniform.txt", "dimension: 2\ndensity_expr: 1\n");
  RunConfig cfg;
  cfg.command = "barycenter";
  cfg.measure_path = uniform.path;
  cfg.level = 16;
  std::ostringstream out, err;
  CHECK(cmd_barycenter(cfg, out, err) == kExitOk);
  CHECK(out.str().find("converged: true") != std::string::npos);
  CHECK(out.str().find("point:") != std::string::npos);

  TempFile twoatom("twoatom.txt",
                   "dimension: 2\natoms: [[1,0,0], 0.5], [[-1,0,0], 0.5]\n");
  cfg.measure_path = twoatom.path;
  std::ostringstream out2, err2;
  CHECK(cmd_barycenter(cfg, out2, err2) == kExitInadmissible);
  CHECK(err2.str().find("0.5") != std::string::npos);

  TempFile broken("broken.txt", "dimension: 2\natoms: [[1,0,0] 0.5]\n");
  cfg.measure_path = broken.path;
  std::ostringstream out3, err3;
  CHECK(cmd_barycenter(cfg, out3, err3) == kExitParse);
  CHECK(err3.str().find("broken.txt:2") != std::string::npos);
}

TEST_CASE("barycenter command solves the three-atom measure") {
  TempFile three("three.txt",
                 "dimension: 2\n"
                 "atoms: [[1,0,0], 0.333333333333333333], [[0,1,0], 0.333333333333333333], "
                 "[[0,0,1], 0.333333333333333334]\n");
  RunConfig cfg;
  cfg.command = "barycenter";
  cfg.measure_path = three.path;
  std::ostringstream out, err;
  REQUIRE(cmd_barycenter(cfg, out, err) == kExitOk);
  std::istringstream parse(out.str());
  std::string key;
  double x, y, z;
  parse >> key >> x >> y >> z;
  CHECK(key == "point:");
  CHECK(std::abs(x - 0.18350341907227397) < 1e-9);
  CHECK(std::abs(x - y) < 1e-9);
}

TEST_CASE("extend command over a disc grid with mobius map") {
  TempFile moeb("moebius.txt", "blaschke: sigma=1, zeros=[0.6]\n");
  RunConfig cfg;
  cfg.command = "extend";
  cfg.map_path = moeb.path;
  cfg.grid_spec = "disc:5:0.8";
  cfg.level = 16;
  cfg.workers = 2;
  std::ostringstream out, err;
  CHECK(cmd_extend(cfg, out, err) == kExitOk);
  CHECK(out.str().find("# summary: points=") != std::string::npos);
  CHECK(out.str().find("failed=0") != std::string::npos);

  // determinism across worker counts
  RunConfig cfg1 = cfg;
  cfg1.workers = 1;
  std::ostringstream out1, err1;
  CHECK(cmd_extend(cfg1, out1, err1) == kExitOk);
  CHECK(out.str() == out1.str());
}

TEST_CASE("field command at a point") {
  TempFile m("fieldmeasure.txt",
             "dimension: 2\natoms: [[1,0,0], 0.4], [[-1,0,0], 0.3], [[0,1,0], 0.3]\n");
  RunConfig cfg;
  cfg.command = "field";
  cfg.measure_path = m.path;
  cfg.at = "0,0,0";
  std::ostringstream out, err;
  CHECK(cmd_field(cfg, out, err) == kExitOk);
  CHECK(out.str().find("0.05") != std::string::npos);
}

TEST_CASE("conjecture command emits residual tables and never asserts") {
  TempFile f("conj.txt", "blaschke: sigma=1, zeros=[0.3, -0.4i]\n");
  RunConfig cfg;
  cfg.command = "conjecture";
  cfg.map_path = f.path;
  cfg.level = 16;
  std::ostringstream out, err;
  CHECK(cmd_conjecture(cfg, out, err) == kExitOk);
  CHECK(out.str().find("identity_conjecture_sup") != std::string::npos);

  TempFile r("notblaschke.txt", "rational: num_coeffs=[0,0,1], den_coeffs=[1]\n");
  cfg.map_path = r.path;
  std::ostringstream out2, err2;
  CHECK(cmd_conjecture(cfg, out2, err2) == kExitParse);
}

TEST_CASE("mesh command writes a well-formed OFF file") {
  TempFile f("meshmap.txt", "blaschke: sigma=1, zeros=[0.3]\n");
  RunConfig cfg;
  cfg.command = "mesh";
  cfg.map_path = f.path;
  cfg.level = 12;
  cfg.mesh_segments = 4;
  std::ostringstream out, err;
  REQUIRE(cmd_mesh(cfg, out, err) == kExitOk);
  std::istringstream check(out.str());
  std::string magic;
  int nv = 0, nf = 0, ne = 0;
  check >> magic >> nv >> nf >> ne;
  CHECK(magic == "OFF");
  CHECK(nv == 5 * 8);
  CHECK(nf == 4 * 8);
}

TEST_CASE("check command runs a fast suite deterministically") {
  RunConfig cfg;
  cfg.command = "check";
  cfg.suite = "jacobian";
  cfg.level = 16;
  cfg.seed = 5;
  std::ostringstream out1, err1, out2, err2;
  const int rc1 = cmd_check(cfg, out1, err1);
  const int rc2 = cmd_check(cfg, out2, err2);
  CHECK(rc1 == kExitOk);
  CHECK(rc1 == rc2);
  CHECK(out1.str() == out2.str());
  CHECK(out1.str().find("jacobian.fd_agreement") != std::string::npos);
}
