// Command-line front end. Exit codes: 0 ok, 1 usage or I/O, 2 numeric failure
// or non-convergence, 3 domain error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracsym/csv.hpp"
#include "fracsym/ekober.hpp"
#include "fracsym/errors.hpp"
#include "fracsym/fkdvb.hpp"
#include "fracsym/frlnum.hpp"
#include "fracsym/parallel.hpp"
#include "fracsym/prolong.hpp"
#include "fracsym/record.hpp"
#include "fracsym/reduce.hpp"

using namespace fracsym;

namespace {

constexpr int kUsage = 1;
constexpr int kNumeric = 2;
constexpr int kDomain = 3;

// Splits "a,b,c" into exactly n numbers.
std::vector<double> parse_list(const std::string& text, std::size_t n, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  try {
    while (std::getline(ss, tok, ',')) out.push_back(parse_double(tok));
  } catch (const IoError&) {
    throw CLI::ValidationError(flag, "expected " + std::to_string(n) + " comma-separated numbers");
  }
  if (out.size() != n) {
    throw CLI::ValidationError(flag, "expected " + std::to_string(n) + " comma-separated numbers");
  }
  return out;
}

SchemeKind parse_scheme(const std::string& s) {
  return s == "gl" ? SchemeKind::GrunwaldLetnikov : SchemeKind::ProductTrapezoid;
}
const char* scheme_name(SchemeKind s) { return s == SchemeKind::GrunwaldLetnikov ? "gl" : "pt"; }

// Writes to the file when a path is given, otherwise to stdout.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write(os);
  if (!os) throw IoError("write to '" + path + "' failed");
}

// --- deriv ---------------------------------------------------------------------

struct DerivArgs {
  double order = 0.0;
  std::string scheme = "pt";
  std::string input, output, expr;
  bool integral = false;
  int digits = 11;
};

int cmd_deriv(const DerivArgs& a) {
  const FracOrder p(a.order);
  if (!a.expr.empty()) {
    const GeneralizedPolynomial f = parse_gp(a.expr);
    const GeneralizedPolynomial g = a.integral ? gp_rl_integral(f, p.value()) : gp_rl_deriv(f, p.value());
    emit(a.output, [&](std::ostream& os) { os << format_gp(g, a.digits) << "\n"; });
    return 0;
  }
  const Csv1D in = read_csv_1d_file(a.input);
  const SchemeKind scheme = parse_scheme(a.scheme);
  GridFunction1D<double> out =
      a.integral ? rl_integral_num(in.function, p) : rl_deriv_num(in.function, p, scheme);
  const CsvMetadata meta = {{"scheme", a.integral ? "pt" : scheme_name(scheme)},
                            {"order", format_double(p.value())},
                            {"operator", a.integral ? "integral" : "derivative"},
                            {"terminal", format_double(in.function.grid.terminal)},
                            {"reduced", "1 marks nodes from boundary stencils"}};
  emit(a.output, [&](std::ostream& os) { write_csv(os, out, meta, "f"); });
  return 0;
}

// --- symmetry ------------------------------------------------------------------

struct SymmetryArgs {
  double p = 0.0, q = 0.0, r = 0.0;
  std::string json;
  bool allow_integer = false;
};

int cmd_symmetry(const SymmetryArgs& a) {
  const FkdvbParams prm(a.p, a.q, a.r, a.allow_integer);
  std::cout << symmetry_report(prm);
  if (!a.json.empty()) {
    emit(a.json, [&](std::ostream& os) { os << symmetry_to_json(prm).dump(2) << "\n"; });
  }
  return 0;
}

// --- reduce --------------------------------------------------------------------

struct ReduceArgs {
  double p = 0.5, q = 0.3, r = 1.7;
  double zmin = 0.2, zmax = 2.0;
  int basis = 8, colloc = 24;
  std::string normalize;
  std::string out, diagnostics;
  double gamma0 = -0.2;
  bool fixed_gamma0 = false;
  double tolerance = 1e-6;
  int starts = 8;
  std::uint64_t seed = 1;
};

int cmd_reduce(const ReduceArgs& a) {
  ReducedProblem pb(FkdvbParams(a.p, a.q, a.r));
  pb.z0 = a.zmin;
  pb.z1 = a.zmax;
  pb.basis_size = a.basis;
  pb.collocation_points = a.colloc;
  if (!a.normalize.empty()) {
    const auto v = parse_list(a.normalize, 2, "--normalize");
    pb.z_ref = v[0];
    pb.w0 = v[1];
  }
  pb.gamma0 = a.gamma0;
  pb.free_gamma0 = !a.fixed_gamma0;
  pb.tolerance = a.tolerance;
  pb.starts = a.starts;
  pb.seed = a.seed;
  const ReducedSolutionCandidate c = solve_reduced(pb);
  emit(a.out, [&](std::ostream& os) { os << candidate_to_json(c).dump(2) << "\n"; });
  if (!a.diagnostics.empty()) emit(a.diagnostics, [&](std::ostream& os) { os << c.diagnostics; });
  std::cerr << "residual_norm: " << format_double(c.residual_norm) << "\n"
            << "converged: " << (c.converged ? "true" : "false") << "\n";
  if (!c.converged) {
    std::cerr << c.diagnostics;
    return kNumeric;
  }
  return 0;
}

// --- verify --------------------------------------------------------------------

struct VerifyArgs {
  std::string candidate, grid, out;
  std::string scheme = "pt";
  bool refine = false;
};

int cmd_verify(const VerifyArgs& a) {
  const ReducedSolutionCandidate c = read_candidate_file(a.candidate);
  const auto g = parse_list(a.grid, 6, "--grid");
  // The operators' terminal is 0, so each axis is sampled from 0; the
  // requested lower bounds become the reporting window.
  auto axis = [](double lo, double hi, double n, const char* name) {
    if (!(lo >= 0.0 && hi > lo)) throw DomainError(std::string(name) + ": need 0 <= min < max");
    if (n < 3 || n != std::floor(n)) throw DomainError(std::string(name) + ": node count must be an integer >= 3");
    return std::pair{Grid1D::span(0.0, hi, static_cast<Eigen::Index>(n)), ErrorWindow{lo / hi, 1.0}};
  };
  const auto [g1, w1] = axis(g[0], g[1], g[2], "x1");
  const auto [g2, w2] = axis(g[3], g[4], g[5], "x2");
  const ErrorWindow2D window{w1, w2};
  const SchemeKind scheme = parse_scheme(a.scheme);
  const GridFunction2D<double> u = reconstruct(c, g1, g2);
  GridFunction2D<double> res = residual_field(u, c.params, scheme);
  // Only the window is reported; rows outside it are dropped.
  const VerifyReport rep = verify_2d(u, c.params, window, scheme);
  emit(a.out, [&](std::ostream& os) {
    os << "# scheme: " << scheme_name(scheme) << "\n";
    os << "# linf: " << format_double(rep.linf) << "\n";
    os << "# l2: " << format_double(rep.l2) << "\n";
    os << "x1,x2,R\n";
    for (Eigen::Index j = 0; j < res.axis2.count; ++j) {
      for (Eigen::Index i = 0; i < res.axis1.count; ++i) {
        const double x1 = res.axis1.node(i), x2 = res.axis2.node(j);
        if (x1 < g[0] - 1e-12 * g[1] || x2 < g[3] - 1e-12 * g[4] || x1 == 0.0 || x2 == 0.0) continue;
        os << format_double(x1) << "," << format_double(x2) << "," << format_double(res.samples(i, j)) << "\n";
      }
    }
  });
  std::ostream& summary = std::cerr;
  summary << "linf: " << format_double(rep.linf) << "\nl2: " << format_double(rep.l2)
          << "\npoints: " << rep.points << "\n";
  if (a.refine) {
    const RefinementReport rr = verify_refinement(c, g1, g2, window);
    summary << "refined_linf: " << format_double(rr.fine.linf)
            << "\nrefinement_ratio: " << format_double(rr.ratio) << "\n";
  }
  return 0;
}

// --- ek ------------------------------------------------------------------------

struct EkArgs {
  double c = 0.0, a = 0.0, b = 1.0;
  std::string expr, input, output;
  std::string op = "integral";
  bool continued = false;
  int digits = 11;
};

int cmd_ek(const EkArgs& a) {
  const EKParams prm(a.c, a.a, a.b);
  const bool diff = a.op == "diff";
  if (!a.expr.empty()) {
    const GeneralizedPolynomial f = parse_gp(a.expr);
    const EKDomain dom = a.continued ? EKDomain::Continue : EKDomain::Strict;
    const GeneralizedPolynomial g = diff ? ek_diff(f, prm, dom) : ek_integral(f, prm, dom);
    emit(a.output, [&](std::ostream& os) { os << format_gp(g, a.digits) << "\n"; });
    return 0;
  }
  // Sampled input: piecewise-linear interpolant, held at the last sample
  // beyond the grid (declared growth 0).
  const Csv1D in = read_csv_1d_file(a.input);
  const auto& f = in.function;
  auto interp = [&f](double x) {
    const double s = (x - f.grid.terminal) / f.grid.step;
    if (s <= 0.0) return f.samples(0);
    if (s >= static_cast<double>(f.grid.count - 1)) return f.samples(f.grid.count - 1);
    const auto k = static_cast<Eigen::Index>(std::floor(s));
    const double t = s - static_cast<double>(k);
    return (1.0 - t) * f.samples(k) + t * f.samples(k + 1);
  };
  Eigen::VectorXd out(f.grid.count);
  Eigen::VectorXd err(f.grid.count);
  for (Eigen::Index k = 0; k < f.grid.count; ++k) {
    const double y = f.grid.node(k);
    if (y <= 0.0) {
      out(k) = 0.0;
      err(k) = 0.0;
      continue;
    }
    const QuadratureValue q = diff ? ek_diff_quad(interp, prm, y) : ek_integral_quad(interp, prm, y);
    out(k) = q.value;
    err(k) = q.error_estimate;
  }
  GridFunction1D<double> g(f.grid, out);
  const CsvMetadata meta = {{"operator", diff ? "ek_diff" : "ek_integral"},
                            {"c", format_double(a.c)},
                            {"a", format_double(a.a)},
                            {"b", format_double(a.b)},
                            {"extension", "held at last sample"},
                            {"max_quadrature_error", format_double(err.maxCoeff())}};
  emit(a.output, [&](std::ostream& os) { write_csv(os, g, meta, "f"); });
  return 0;
}

// --- prolong-check -------------------------------------------------------------

struct ProlongArgs {
  double p = 0.0;
  double q = 0.0;
  int m = 1;
  std::string field, u;
  int digits = 10;
};

int cmd_prolong_check(const ProlongArgs& a) {
  const auto c = parse_list(a.field, 3, "--field");
  const ScalingField f(c[0], c[1], c[2]);
  const BivariatePowerSum u = parse_bivariate(a.u);
  const MixedOrderSpec spec(a.m, a.p, a.q);
  const BivariatePowerSum phi = a.q == 0.0 ? phi_p(a.m, f, u, a.p) : phi_pq_mixed(spec, f, u);
  const auto pts = window_points(Grid1D::span(0.0, 1.0, 11), Grid1D::span(0.0, 1.0, 11));
  Eigen::VectorXd exact(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) exact(static_cast<Eigen::Index>(i)) = phi(pts[i].first, pts[i].second);
  const Discrepancy d = compare(group_deformation_oracle(f, u, spec, pts), exact);
  std::cout << "phi: " << format_bivariate(phi, a.digits) << "\n";
  if (a.q == 0.0) {
    std::cout << "series_deviation: "
              << format_double(compare(exact, [&] {
                   const BivariatePowerSum s = phi_p_series(a.m, f, u, a.p);
                   Eigen::VectorXd v(exact.size());
                   for (std::size_t i = 0; i < pts.size(); ++i) v(static_cast<Eigen::Index>(i)) = s(pts[i].first, pts[i].second);
                   return v;
                 }()).max_rel_deviation, 3)
              << "\n";
  }
  std::cout << "oracle_deviation: " << format_double(d.max_rel_deviation, 3) << "\n";
  std::cout << "points: " << d.points << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Lie-symmetry toolkit for the KdV-Burgers model"};
  app.require_subcommand(1);

  DerivArgs da;
  auto* deriv = app.add_subcommand("deriv", "Riemann-Liouville derivative or integral");
  deriv->add_option("--order", da.order, "Order P >= 0")->required();
  deriv->add_option("--scheme", da.scheme, "pt (product trapezoid) or gl (Grunwald-Letnikov)")
      ->check(CLI::IsMember({"pt", "gl"}));
  auto* d_in = deriv->add_option("--input", da.input, "Sampled input CSV (t,f)");
  auto* d_ex = deriv->add_option("--expr", da.expr, "Power sum such as \"1*t^1\" (exact path)");
  d_in->excludes(d_ex);
  deriv->add_option("--output", da.output, "Output path (default stdout)");
  deriv->add_flag("--integral", da.integral, "Fractional integral instead of derivative");
  deriv->add_option("--digits", da.digits, "Significant digits of the exact result")->check(CLI::Range(1, 17));

  SymmetryArgs sa;
  auto* sym = app.add_subcommand("symmetry", "Scaling symmetry, invariants and equivariance exponent");
  sym->add_option("--p", sa.p)->required();
  sym->add_option("--q", sa.q)->required();
  sym->add_option("--r", sa.r)->required();
  sym->add_option("--json", sa.json, "Also write a JSON record");
  sym->add_flag("--allow-integer", sa.allow_integer, "Accept integer orders (classical limit)");

  ReduceArgs ra;
  auto* red = app.add_subcommand("reduce", "Solve the reduced equation by collocation");
  red->add_option("--p", ra.p);
  red->add_option("--q", ra.q);
  red->add_option("--r", ra.r);
  red->add_option("--zmin", ra.zmin);
  red->add_option("--zmax", ra.zmax);
  red->add_option("--basis", ra.basis, "Basis size K");
  red->add_option("--colloc", ra.colloc, "Collocation points M");
  red->add_option("--normalize", ra.normalize, "z_ref,w0 (default midpoint,1)");
  red->add_option("--gamma0", ra.gamma0, "Leading exponent (scan centre unless fixed)");
  red->add_flag("--fixed-gamma0", ra.fixed_gamma0, "Keep the leading exponent fixed");
  red->add_option("--tol", ra.tolerance, "Residual tolerance");
  red->add_option("--starts", ra.starts, "Solver starts");
  red->add_option("--seed", ra.seed, "Seed for the starting points");
  red->add_option("--out", ra.out, "Candidate JSON path (default stdout)");
  red->add_option("--diagnostics", ra.diagnostics, "Write solver diagnostics to this path");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "2D residual of the reconstructed invariant solution");
  ver->add_option("--candidate", va.candidate, "Candidate JSON")->required();
  ver->add_option("--grid", va.grid, "x1min,x1max,n1,x2min,x2max,n2")->required();
  ver->add_option("--out", va.out, "Residual CSV path (default stdout)");
  ver->add_option("--scheme", va.scheme)->check(CLI::IsMember({"pt", "gl"}));
  ver->add_flag("--refine", va.refine, "Also report the residual on the grid with step h/2");

  EkArgs ea;
  auto* ek = app.add_subcommand("ek", "Erdelyi-Kober integral or derivative");
  ek->add_option("--c", ea.c)->required();
  ek->add_option("--a", ea.a)->required();
  ek->add_option("--b", ea.b)->required();
  auto* e_ex = ek->add_option("--expr", ea.expr, "Power sum (exact path)");
  auto* e_in = ek->add_option("--input", ea.input, "Sampled input CSV (quadrature path)");
  e_ex->excludes(e_in);
  ek->add_option("--op", ea.op)->check(CLI::IsMember({"integral", "diff"}));
  ek->add_flag("--continue", ea.continued, "Continue the Gamma-ratio rule outside its strip");
  ek->add_option("--output", ea.output, "Output path (default stdout)");
  ek->add_option("--digits", ea.digits)->check(CLI::Range(1, 17));

  ProlongArgs pa;
  auto* pro = app.add_subcommand("prolong-check", "Prolongation coefficient against the group-deformation oracle");
  pro->add_option("--p", pa.p)->required();
  pro->add_option("--q", pa.q, "Order along the other axis (mixed coefficient)");
  pro->add_option("--m", pa.m, "Axis of the order p")->check(CLI::IsMember({1, 2}));
  pro->add_option("--field", pa.field, "c1,c2,cu")->required();
  pro->add_option("--u", pa.u, "Power sum in x1, x2")->required();
  pro->add_option("--digits", pa.digits)->check(CLI::Range(1, 17));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    (void)worker_count();
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (deriv->parsed()) {
      if (da.input.empty() && da.expr.empty()) throw CLI::ValidationError("deriv", "one of --input or --expr is required");
      return cmd_deriv(da);
    }
    if (sym->parsed()) return cmd_symmetry(sa);
    if (red->parsed()) return cmd_reduce(ra);
    if (ver->parsed()) return cmd_verify(va);
    if (ek->parsed()) {
      if (ea.input.empty() && ea.expr.empty()) throw CLI::ValidationError("ek", "one of --input or --expr is required");
      return cmd_ek(ea);
    }
    if (pro->parsed()) return cmd_prolong_check(pa);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}
