#include "debary/io.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <map>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace debary {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, int line, int col,
                             const std::string& what) {
  throw Error(ErrorCode::ParseError,
              origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Splits on top-level commas (ignoring those inside brackets/parentheses).
std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!strip(cur).empty()) parts.push_back(strip(cur));
  return parts;
}

double parse_double(const std::string& text, const std::string& origin, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    parse_fail(origin, line, 1, "malformed number '" + text + "'");
  }
}

// Contents of a bracketed list "[a, b, c]".
std::vector<std::string> bracket_items(const std::string& text, const std::string& origin,
                                       int line) {
  const std::string t = strip(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
    parse_fail(origin, line, 1, "expected a bracketed list, got '" + text + "'");
  }
  return split_top_level(t.substr(1, t.size() - 2));
}

}  // namespace

Cplx parse_complex(const std::string& text) {
  const std::string t = strip(text);
  if (t.empty()) throw Error(ErrorCode::ParseError, "empty complex literal");
  // pure imaginary shortcuts
  if (t == "i") return Cplx(0.0, 1.0);
  if (t == "-i") return Cplx(0.0, -1.0);
  if (t == "+i") return Cplx(0.0, 1.0);

  // find a '+'/'-' separating real and imaginary parts (not an exponent sign,
  // not the leading sign)
  std::size_t split = std::string::npos;
  for (std::size_t p = 1; p < t.size(); ++p) {
    if ((t[p] == '+' || t[p] == '-') && t[p - 1] != 'e' && t[p - 1] != 'E') split = p;
  }
  auto as_double = [&](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw Error(ErrorCode::ParseError, "malformed literal '" + t + "'");
    return v;
  };
  try {
    if (t.back() == 'i') {
      const std::string body = t.substr(0, t.size() - 1);
      if (split == std::string::npos) {
        if (body.empty() || body == "+" || body == "-") {
          return Cplx(0.0, body == "-" ? -1.0 : 1.0);
        }
        return Cplx(0.0, as_double(body));
      }
      const std::string re = t.substr(0, split);
      std::string im = t.substr(split, t.size() - split - 1);
      if (im == "+" ) im = "1";
      if (im == "-") im = "-1";
      return Cplx(as_double(re), as_double(im));
    }
    return Cplx(as_double(t), 0.0);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "malformed complex literal '" + t + "'");
  }
}

MeasureSpec parse_measure(std::istream& in, const std::string& origin) {
  MeasureSpec spec;
  std::string line;
  int lineno = 0;
  bool have_dim = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    const std::size_t colon = s.find(':');
    if (colon == std::string::npos) parse_fail(origin, lineno, 1, "expected 'key: value'");
    const std::string key = strip(s.substr(0, colon));
    const std::string value = strip(s.substr(colon + 1));

    if (key == "dimension") {
      const double d = parse_double(value, origin, lineno);
      if (d != std::floor(d) || d < 1) parse_fail(origin, lineno, int(colon) + 2, "dimension must be a positive integer");
      spec.sphere_dim = static_cast<int>(d);
      have_dim = true;
    } else if (key == "atoms") {
      if (!have_dim) parse_fail(origin, lineno, 1, "'dimension' must come before 'atoms'");
      for (const std::string& entry : split_top_level(value)) {
        // entry: [[c1,...,ck], mass]
        const std::vector<std::string> outer = bracket_items(entry, origin, lineno);
        if (outer.size() != 2) {
          parse_fail(origin, lineno, 1, "atom entry must be [[coords...], mass]");
        }
        const std::vector<std::string> coord_items = bracket_items(outer[0], origin, lineno);
        if (static_cast<int>(coord_items.size()) != spec.sphere_dim + 1) {
          parse_fail(origin, lineno, 1,
                     "atom needs " + std::to_string(spec.sphere_dim + 1) + " coordinates");
        }
        Vec c(spec.sphere_dim + 1);
        for (std::size_t i = 0; i < coord_items.size(); ++i) {
          c[Index(i)] = parse_double(coord_items[i], origin, lineno);
        }
        const double mass = parse_double(outer[1], origin, lineno);
        if (!(mass > 0.0)) parse_fail(origin, lineno, 1, "atom mass must be positive");
        spec.atoms.emplace_back(std::move(c), mass);
      }
    } else if (key == "density_expr") {
      if (spec.density_expr) parse_fail(origin, lineno, 1, "duplicate density_expr");
      try {
        spec.density_expr = Expression::parse(value);
      } catch (const Error& e) {
        parse_fail(origin, lineno, int(colon) + 2, e.what());
      }
    } else {
      parse_fail(origin, lineno, 1, "unknown key '" + key + "'");
    }
  }
  if (!have_dim) {
    throw Error(ErrorCode::ParseError, origin + ": missing 'dimension'");
  }
  if (spec.atoms.empty() && !spec.density_expr) {
    throw Error(ErrorCode::ParseError, origin + ": measure needs atoms or density_expr");
  }
  return spec;
}

MeasureSpec parse_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open measure file '" + path + "'");
  return parse_measure(in, path);
}

SphereMeasure build_measure(const MeasureSpec& spec, const QuadratureRule& rule) {
  if (rule.sphere_dim() != spec.sphere_dim) {
    throw Error(ErrorCode::InvalidArgument, "rule dimension does not match the measure");
  }
  double atom_mass = 0.0;
  for (const auto& [c, m] : spec.atoms) atom_mass += m;

  Mat pts(spec.sphere_dim + 1, spec.atoms.size());
  Vec masses(spec.atoms.size());
  for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
    pts.col(Index(i)) = spec.atoms[i].first;
    masses[Index(i)] = spec.atoms[i].second;
  }

  if (!spec.density_expr) {
    if (std::abs(atom_mass - 1.0) > 1e-10) {
      throw Error(ErrorCode::ParseError,
                  "atom masses sum to " + std::to_string(atom_mass) + ", expected 1");
    }
    return SphereMeasure::from_atoms(std::move(pts), std::move(masses));
  }

  if (atom_mass >= 1.0 - 1e-12) {
    throw Error(ErrorCode::ParseError,
                "atom masses leave no mass for the density part");
  }
  Vec density(rule.size());
  std::map<std::string, Cplx> vars;
  for (Index i = 0; i < rule.size(); ++i) {
    for (int j = 0; j <= spec.sphere_dim; ++j) {
      vars["z" + std::to_string(j + 1)] = Cplx(rule.nodes(j, i), 0.0);
    }
    const double v = spec.density_expr->eval_real(vars);
    if (v < 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "density expression is negative at a quadrature node");
    }
    density[i] = v;
  }
  const double raw = weighted_sum(density, rule.weights);
  if (!(raw > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "density expression vanishes on all nodes");
  }
  density *= (1.0 - atom_mass) / raw;
  SphereMeasure::QuadPart quad{rule.nodes, rule.weights, std::move(density)};
  return SphereMeasure(std::move(pts), std::move(masses), std::move(quad));
}

PlaneMap parse_map(std::istream& in, const std::string& origin) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    const std::size_t colon = s.find(':');
    if (colon == std::string::npos) parse_fail(origin, lineno, 1, "expected 'kind: ...'");
    const std::string kind = strip(s.substr(0, colon));
    const std::string value = strip(s.substr(colon + 1));

    auto parse_kv = [&](const std::string& text) {
      std::map<std::string, std::string> kv;
      for (const std::string& part : split_top_level(text)) {
        const std::size_t eq = part.find('=');
        if (eq == std::string::npos) parse_fail(origin, lineno, 1, "expected 'name=value'");
        kv[strip(part.substr(0, eq))] = strip(part.substr(eq + 1));
      }
      return kv;
    };

    try {
      if (kind == "rational") {
        auto kv = parse_kv(value);
        if (!kv.count("num_coeffs") || !kv.count("den_coeffs")) {
          parse_fail(origin, lineno, 1, "rational map needs num_coeffs and den_coeffs");
        }
        auto to_coeffs = [&](const std::string& text) {
          const auto items = bracket_items(text, origin, lineno);
          Eigen::VectorXcd c(items.size());
          for (std::size_t i = 0; i < items.size(); ++i) c[Index(i)] = parse_complex(items[i]);
          return c;
        };
        return RationalMap(to_coeffs(kv["num_coeffs"]), to_coeffs(kv["den_coeffs"]));
      }
      if (kind == "blaschke") {
        auto kv = parse_kv(value);
        const Cplx sigma = kv.count("sigma") ? parse_complex(kv["sigma"]) : Cplx(1.0, 0.0);
        std::vector<Cplx> zeros;
        if (kv.count("zeros")) {
          for (const std::string& item : bracket_items(kv["zeros"], origin, lineno)) {
            zeros.push_back(parse_complex(item));
          }
        }
        return BlaschkeProduct(sigma, std::move(zeros));
      }
      if (kind == "expr") {
        return ExprPlaneMap(Expression::parse(value));
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::InvalidArgument) {
        parse_fail(origin, lineno, 1, e.what());
      }
      throw;
    }
    parse_fail(origin, lineno, 1, "unknown map kind '" + kind + "'");
  }
  throw Error(ErrorCode::ParseError, origin + ": no map definition found");
}

PlaneMap parse_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open map file '" + path + "'");
  return parse_map(in, path);
}

std::vector<Vec> parse_points(std::istream& in, int ambient_dim, const std::string& origin) {
  std::vector<Vec> points;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    for (char& c : s) {
      if (c == ',') c = ' ';
    }
    std::istringstream row(s);
    Vec p(ambient_dim);
    for (int j = 0; j < ambient_dim; ++j) {
      if (!(row >> p[j])) {
        parse_fail(origin, lineno, 1,
                   "point needs " + std::to_string(ambient_dim) + " coordinates");
      }
    }
    double extra;
    if (row >> extra) parse_fail(origin, lineno, 1, "too many coordinates");
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<Vec> parse_grid_spec(const std::string& spec, int ambient_dim) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);

  auto fail = [&](const std::string& what) -> void {
    throw Error(ErrorCode::ParseError, "grid spec '" + spec + "': " + what);
  };

  std::vector<Vec> out;
  if (parts[0] == "disc") {
    if (ambient_dim != 3) fail("disc grids need dimension 2");
    if (parts.size() < 2 || parts.size() > 3) fail("expected disc:N[:R]");
    const int n = std::atoi(parts[1].c_str());
    const double r = parts.size() == 3 ? std::atof(parts[2].c_str()) : 0.9;
    if (n < 2 || !(r > 0.0) || r >= 1.0) fail("bad parameters");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = -r + 2.0 * r * i / (n - 1);
        const double y = -r + 2.0 * r * j / (n - 1);
        if (x * x + y * y <= r * r + 1e-12) {
          Vec p(3);
          p << x, y, 0.0;
          out.push_back(std::move(p));
        }
      }
    }
  } else if (parts[0] == "segment") {
    if (parts.size() != 4) fail("expected segment:p0:p1:N");
    auto to_point = [&](const std::string& text) {
      std::string s = text;
      for (char& c : s) {
        if (c == ',') c = ' ';
      }
      std::istringstream row(s);
      Vec p(ambient_dim);
      for (int j = 0; j < ambient_dim; ++j) {
        if (!(row >> p[j])) fail("endpoint needs " + std::to_string(ambient_dim) + " coords");
      }
      return p;
    };
    const Vec a = to_point(parts[1]);
    const Vec b = to_point(parts[2]);
    const int n = std::atoi(parts[3].c_str());
    if (n < 2) fail("segment needs at least 2 points");
    for (int i = 0; i < n; ++i) {
      const double t = double(i) / (n - 1);
      out.push_back(Vec(a + t * (b - a)));
    }
  } else if (parts[0] == "shell") {
    if (parts.size() != 3) fail("expected shell:R:LEVEL");
    const double r = std::atof(parts[1].c_str());
    const int level = std::atoi(parts[2].c_str());
    if (!(r > 0.0) || r >= 1.0) fail("shell radius must lie in (0,1)");
    const QuadratureRule rule = make_rule(ambient_dim - 1, level);
    for (Index i = 0; i < rule.size(); ++i) out.push_back(Vec(r * rule.nodes.col(i)));
  } else {
    fail("unknown grid kind '" + parts[0] + "'");
  }
  return out;
}

std::string fmt(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return std::string(buf.data());
}

std::string fmt_vec(const Vec& v, const char* sep) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += fmt(v[i]);
  }
  return out;
}

void write_barycenter_result(std::ostream& out, const BarycenterResult& res) {
  out << "point: " << fmt_vec(res.point.coords()) << "\n"
      << "residual: " << fmt(res.residual) << "\n"
      << "iterations: " << res.iterations << "\n"
      << "converged: " << (res.converged ? "true" : "false") << "\n";
}

void write_check_items(std::ostream& out, const std::vector<CheckItem>& items) {
  for (const CheckItem& c : items) {
    out << c.id << ": value=" << fmt(c.value);
    if (c.asserted) {
      out << " threshold=" << fmt(c.threshold) << " " << (c.pass ? "PASS" : "FAIL");
    } else {
      out << " (recorded)";
    }
    out << "\n";
  }
}

void write_blaschke_report(std::ostream& out, const BlaschkeStructureReport& rep) {
  out << "map: " << rep.map_descriptor << "\n";
  write_check_items(out, rep.checks);
  out << "identity_conjecture_sup: " << fmt(rep.identity_conjecture_sup) << " (recorded)\n";
  if (rep.has_fixed_origin) {
    out << "origin_conjecture_residual: " << fmt(rep.origin_conjecture_residual)
        << " (recorded)\n";
    out << "# axis probe: s, height, axis_offset\n";
    for (const AxisRow& row : rep.axis_rows) {
      out << fmt(row.s) << "," << fmt(row.height) << "," << fmt(row.axis_offset) << "\n";
    }
    out << "axis_heights_monotone: " << (rep.axis_heights_monotone ? "true" : "false")
        << " (recorded)\n";
  }
}

void write_zd_report(std::ostream& out, const ZdStructureReport& rep) {
  out << "map: z^" << rep.degree << "\n";
  write_check_items(out, rep.checks);
  out << "# radial profile: r, h(r)\n";
  for (const auto& row : rep.radial_profile) {
    out << fmt(row[0]) << "," << fmt(row[1]) << "\n";
  }
  out << "# interior rings: t, ring_radius, membership_residual (recorded)\n";
  for (const auto& row : rep.interior_rings) {
    out << fmt(row[0]) << "," << fmt(row[1]) << "," << fmt(row[2]) << "\n";
  }
}

void write_inner_report(std::ostream& out, const InnerRecoveryReport& rep) {
  out << "map: " << rep.map_descriptor << "\n";
  write_check_items(out, rep.checks);
}

void write_off_mesh(std::ostream& out, const std::vector<Vec>& vertices,
                    const std::vector<std::array<int, 4>>& quads) {
  out << "OFF\n" << vertices.size() << " " << quads.size() << " 0\n";
  for (const Vec& v : vertices) {
    out << fmt(v[0]) << " " << fmt(v[1]) << " " << fmt(v.size() > 2 ? v[2] : 0.0) << "\n";
  }
  for (const auto& q : quads) {
    out << "4 " << q[0] << " " << q[1] << " " << q[2] << " " << q[3] << "\n";
  }
}

}  // namespace debary
