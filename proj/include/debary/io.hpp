#pragma once

#include "debary/barycenter.hpp"
#include "debary/complex_maps.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace debary {

/// Measure description as read from disk; the density expression is sampled
/// on a quadrature rule when the measure is built.
struct MeasureSpec {
  int sphere_dim = 0;
  std::vector<std::pair<Vec, double>> atoms;
  std::optional<Expression> density_expr;
};

/// Parses the measure grammar:
///   dimension: <n>
///   atoms: [[c1,...,ck], mass], ...          (repeatable)
///   density_expr: <expression in z1..zk>     (optional)
/// Lines starting with '#' and blank lines are skipped. Errors carry
/// file:line:column positions.
MeasureSpec parse_measure(std::istream& in, const std::string& origin);
MeasureSpec parse_measure_file(const std::string& path);

/// Builds the measure: atoms as given; the density expression evaluated on
/// the rule nodes and scaled so the total mass is one.
SphereMeasure build_measure(const MeasureSpec& spec, const QuadratureRule& rule);

/// Parses the map grammar (one definition per file):
///   rational: num_coeffs=[...], den_coeffs=[...]
///   blaschke: sigma=<complex>, zeros=[...]
///   expr: <expression in z>
PlaneMap parse_map(std::istream& in, const std::string& origin);
PlaneMap parse_map_file(const std::string& path);

/// Complex literal: 1.5, -0.4i, 1+2i, i, -i.
Cplx parse_complex(const std::string& text);

/// One point per line, comma or whitespace separated coordinates.
std::vector<Vec> parse_points(std::istream& in, int ambient_dim, const std::string& origin);

/// Grid specifications for extension tables:
///   disc:N[:R]        N x N Cartesian grid on the equatorial disc of radius R
///   segment:p0:p1:N   N points from p0 to p1 inclusive (coords comma-separated)
///   shell:R:LEVEL     quadrature nodes of the given level scaled to radius R
std::vector<Vec> parse_grid_spec(const std::string& spec, int ambient_dim);

/// printf("%.17g") with a fixed locale; all emitted numbers go through this
/// so byte-identical reruns stay byte-identical.
std::string fmt(double v);
std::string fmt_vec(const Vec& v, const char* sep = " ");

void write_barycenter_result(std::ostream& out, const BarycenterResult& res);

void write_check_items(std::ostream& out, const std::vector<CheckItem>& items);
void write_blaschke_report(std::ostream& out, const BlaschkeStructureReport& rep);
void write_zd_report(std::ostream& out, const ZdStructureReport& rep);
void write_inner_report(std::ostream& out, const InnerRecoveryReport& rep);

/// ASCII polygon mesh (OFF).
void write_off_mesh(std::ostream& out, const std::vector<Vec>& vertices,
                    const std::vector<std::array<int, 4>>& quads);

}  // namespace debary
