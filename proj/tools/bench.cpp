// Command-line driver: problem generation, partitioning, preconditioned
// solves, and analytic convergence analysis for the two-level Schwarz solvers.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aras/analysis.hpp"
#include "aras/aras.hpp"
#include "aras/krylov.hpp"
#include "aras/matrix_market.hpp"
#include "aras/partition.hpp"
#include "aras/problems.hpp"

using namespace aras;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string problem = "poisson";
  std::size_t mx = 32, my = 32;
  std::string matrix_in;  // Matrix Market input overrides the generator
  std::string rhs_in;
  std::string rhs_kind = "manufactured";
  std::uint64_t seed = 0;
};

RhsKind parse_rhs_kind(const std::string& spec, std::uint64_t& seed) {
  if (spec == "manufactured") return RhsKind::Manufactured;
  if (spec == "ones") return RhsKind::Ones;
  if (spec == "ramp-x") return RhsKind::RampX;
  if (spec.rfind("random", 0) == 0) {
    const auto colon = spec.find(':');
    if (colon != std::string::npos) seed = std::stoull(spec.substr(colon + 1));
    return RhsKind::Random;
  }
  throw CLI::ValidationError("--rhs", "unknown kind '" + spec + "'");
}

GridProblem make_problem(const CommonOpts& o) {
  if (o.problem == "poisson") return poisson2d(o.mx, o.my);
  if (o.problem == "helmholtz") return helmholtz2d(o.mx);
  throw CLI::ValidationError("--problem", "unknown problem '" + o.problem + "'");
}

struct LoadedSystem {
  SparseMatrix A;
  Vec b;
};

LoadedSystem load_system(const CommonOpts& o) {
  if (!o.matrix_in.empty()) {
    LoadedSystem s{read_matrix_market(o.matrix_in), {}};
    if (!o.rhs_in.empty())
      s.b = read_vector_file(o.rhs_in);
    else
      s.b.assign(s.A.nrows, 1.0);
    if (s.b.size() != s.A.nrows)
      throw std::runtime_error("rhs length does not match the matrix dimension");
    return s;
  }
  GridProblem p = make_problem(o);
  std::uint64_t seed = o.seed;
  RhsKind kind = parse_rhs_kind(o.rhs_kind, seed);
  return {p.matrix, make_rhs(p, kind, seed)};
}

std::vector<std::vector<std::size_t>> make_owned(const std::string& spec,
                                                 const SparseMatrix& A, std::size_t p,
                                                 std::uint64_t seed, std::size_t& delta) {
  if (spec == "band") return band_partition(A.nrows, p);
  if (spec == "greedy") return greedy_graph_partition(A, p, seed);
  if (spec.rfind("file:", 0) == 0) {
    PartitionFile f = load_partition(spec.substr(5));
    if (f.m != A.nrows) throw std::runtime_error("partition file dimension mismatch");
    delta = f.delta;
    return f.owned;
  }
  throw CLI::ValidationError("--partition", "unknown partition '" + spec + "'");
}

CoarseInterfaceSpace make_basis(const std::string& spec, const SparseMatrix& A,
                                const RasPreconditioner& ras, const Vec& b) {
  const OverlapPartition& part = ras.partition();
  const std::size_t n = part.interface_size();
  auto tail = [&](const char* prefix) { return spec.substr(std::string(prefix).size()); };
  if (spec == "none" || spec == "") {
    CoarseInterfaceSpace cs;
    cs.basis = DenseMatrix(n, 0);
    cs.coarse_operator = DenseMatrix(0, 0);
    return cs;
  }
  if (spec == "full") return full_interface_space(A, ras);
  if (spec.rfind("random:", 0) == 0) {
    std::size_t q = 0;
    std::uint64_t seed = 1;
    const std::string rest = tail("random:");
    const auto comma = rest.find(',');
    q = std::stoull(rest.substr(0, comma));
    if (comma != std::string::npos) seed = std::stoull(rest.substr(comma + 1));
    CoarseInterfaceSpace cs;
    cs.basis = random_basis(n, proportional_split(q, part), seed, part);
    cs.coarse_operator = build_coarse_operator(A, ras, cs.basis);
    cs.origin = BasisOrigin::Random;
    return cs;
  }
  if (spec.rfind("svd:", 0) == 0) {
    const std::string rest = tail("svd:");
    const auto comma = rest.find(',');
    const std::size_t q = std::stoull(rest.substr(0, comma));
    double tol = 1e-12;
    if (comma != std::string::npos) tol = std::stod(rest.substr(comma + 1));
    return svd_trace_space(A, ras, b, q, tol);
  }
  if (spec.rfind("analytic-eigen:", 0) == 0) {
    const std::size_t q = std::stoull(tail("analytic-eigen:"));
    return eigen_truncated_basis(A, ras, q);
  }
  throw CLI::ValidationError("--basis", "unknown basis '" + spec + "'");
}

void write_csv(const std::string& path, const Vec& precond, const Vec& truer) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "iter,precond_resid,true_resid\n";
  out.precision(17);
  for (std::size_t k = 0; k < truer.size(); ++k)
    out << k << ',' << (k < precond.size() ? precond[k] : truer[k]) << ',' << truer[k]
        << '\n';
}

int cmd_generate(const CommonOpts& o, const std::string& matrix_out,
                 const std::string& rhs_out) {
  GridProblem p = make_problem(o);
  std::uint64_t seed = o.seed;
  RhsKind kind = parse_rhs_kind(o.rhs_kind, seed);
  Vec b = make_rhs(p, kind, seed);
  if (!matrix_out.empty()) write_matrix_market(matrix_out, p.matrix);
  if (!rhs_out.empty()) write_vector_file(rhs_out, b);
  std::printf("generated %s: %zu unknowns, %zu nonzeros\n", o.problem.c_str(),
              p.matrix.nrows, p.matrix.values.size());
  return 0;
}

int cmd_partition(const CommonOpts& o, const std::string& spec, std::size_t p,
                  std::size_t delta, const std::string& out) {
  LoadedSystem sys = load_system(o);
  std::size_t d = delta;
  auto owned = make_owned(spec, sys.A, p, o.seed, d);
  auto part = extend_overlap(sys.A, owned, d);
  save_partition(out, owned, sys.A.nrows, d);
  std::printf("partition: p=%zu m=%zu delta=%zu |Gamma|=%zu\n", part.p, part.m, d,
              part.interface_size());
  for (std::size_t i = 0; i < part.p; ++i)
    std::printf("  subdomain %zu: %zu owned, %zu extended, %zu interface\n", i,
                part.owned[i].size(), part.extended[i].size(), part.gamma_i[i].size());
  return 0;
}

int cmd_solve(const CommonOpts& o, const std::string& part_spec, std::size_t p,
              std::size_t delta, const std::string& prec, const std::string& basis,
              const std::string& solver, double tol, std::size_t max_it, bool absolute,
              const std::string& csv, const std::string& json_path,
              const std::string& basis_out, bool strict,
              std::optional<double> build_local_tol) {
  LoadedSystem sys = load_system(o);
  std::size_t d = delta;
  auto owned = make_owned(part_spec, sys.A, p, o.seed, d);
  auto part = extend_overlap(sys.A, owned, d);
  auto ras = std::make_shared<RasPreconditioner>(sys.A, part);

  std::unique_ptr<ArasPreconditioner> two_level;
  const Preconditioner* M = ras.get();
  if (prec == "aras" || prec == "aras2") {
    CoarseInterfaceSpace cs = make_basis(basis, sys.A, *ras, sys.b);
    if (!basis_out.empty()) save_coarse_space(basis_out, cs);
    two_level = std::make_unique<ArasPreconditioner>(
        sys.A, ras, std::move(cs),
        prec == "aras" ? ArasVariant::ARAS : ArasVariant::ARAS2);
    M = two_level.get();
  } else if (prec != "ras") {
    throw CLI::ValidationError("--preconditioner", "unknown preconditioner '" + prec + "'");
  }

  const StopMode stop = absolute ? StopMode::Absolute : StopMode::Relative;
  const Vec x0(sys.A.nrows, 0.0);
  SolveReport rep;
  if (solver == "richardson") {
    auto t = richardson_run(sys.A, *M, sys.b, x0, tol, max_it, stop);
    rep.method = "Richardson";
    rep.iterations = t.iterations();
    rep.converged = t.converged;
    rep.true_residuals = t.residual_norms;
    rep.precond_residuals = t.residual_norms;  // Richardson stops on the true residual
    rep.solution = t.history.back();
    const double bn = norm2(sys.b);
    rep.final_true_relative = t.residual_norms.back() / (bn > 0 ? bn : 1.0);
    if (t.diverged) std::fprintf(stderr, "warning: Richardson iteration diverged\n");
  } else if (solver == "gcr") {
    rep = gcr(sys.A, *M, sys.b, x0, tol, max_it, stop);
  } else if (solver == "gmres") {
    rep = gmres(sys.A, *M, sys.b, x0, tol, max_it, std::nullopt, stop);
  } else {
    throw CLI::ValidationError("--solver", "unknown solver '" + solver + "'");
  }
  rep.preconditioner = prec;

  if (!csv.empty()) write_csv(csv, rep.precond_residuals, rep.true_residuals);
  if (!json_path.empty()) {
    json j{{"schema", 1},
           {"method", solver},
           {"preconditioner", prec},
           {"basis", basis},
           {"n", sys.A.nrows},
           {"p", part.p},
           {"delta", d},
           {"interface_size", part.interface_size()},
           {"tol", tol},
           {"stop", absolute ? "absolute" : "relative"},
           {"iterations", rep.iterations},
           {"converged", rep.converged},
           {"final_true_relative", rep.final_true_relative},
           {"wall_seconds", rep.wall_seconds},
           {"counters",
            {{"local_solves", ras->counters()->local_solves.load()},
             {"spmvs", ras->counters()->spmvs.load()},
             {"svds", ras->counters()->svds.load()}}}};
    if (build_local_tol) j["build_local_tol"] = *build_local_tol;
    std::ofstream out(json_path);
    if (!out) throw std::runtime_error("cannot open " + json_path);
    out << j.dump(2) << '\n';
  }
  std::printf("%s + %s: %s in %zu iterations, final true relative residual %.3e\n",
              solver.c_str(), prec.c_str(), rep.converged ? "converged" : "NOT converged",
              rep.iterations, rep.final_true_relative);
  if (strict && !rep.converged) return 2;
  return 0;
}

int cmd_analyze(std::size_t mx, std::size_t my, std::size_t delta, std::size_t q,
                const std::string& csv) {
  TwoDomainPoissonSpec spec = two_domain_spec(mx, my, delta);
  auto modes = analytic_interface_modes(spec);
  RhoTriple rho = theoretical_rho(spec, std::min(q, modes.size()));
  std::printf("two-domain analysis: %zux%zu grid, overlap %zu, %zu interface modes\n", mx,
              my, delta, modes.size());
  std::printf("rho(RAS) = %.6f  rho(ARAS(%zu)) = %.6f  rho(ARAS2(%zu)) = %.6f\n",
              rho.ras, q, rho.aras, q, rho.aras2);
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot open " + csv);
    out << "mode,lambda,delta_l\n";
    out.precision(17);
    for (std::size_t l = 1; l <= modes.size(); ++l)
      out << l << ',' << spec.lambda(l) << ','
          << interface_mode_factor(spec.lambda(l), spec.h_x, spec.N_x, spec.overlap_steps)
          << '\n';
  }
  return 0;
}

int cmd_reproduce_table2(const std::string& csv) {
  GridProblem prob = poisson2d(32, 32);
  const double h2 = prob.h_x() * prob.h_x();
  SparseMatrix As = prob.matrix;
  sparse_scale(As, h2);
  Vec b = make_rhs(prob, RhsKind::RampX, 0);
  scale(b, h2);
  auto part = extend_overlap(As, band_partition(As.nrows, 2), 1);
  auto ras = std::make_shared<RasPreconditioner>(As, part);
  CoarseInterfaceSpace cs15 = eigen_truncated_basis(As, *ras, 15);
  CoarseInterfaceSpace cs30 = eigen_truncated_basis(As, *ras, 30);
  ArasPreconditioner a15(As, ras, cs15, ArasVariant::ARAS);
  ArasPreconditioner a215(As, ras, cs15, ArasVariant::ARAS2);
  ArasPreconditioner a230(As, ras, cs30, ArasVariant::ARAS2);
  const char* names[4] = {"RAS", "ARAS(15)", "ARAS2(15)", "ARAS2(30)"};
  const Preconditioner* precs[4] = {ras.get(), &a15, &a215, &a230};
  std::ofstream out;
  if (!csv.empty()) {
    out.open(csv);
    if (!out) throw std::runtime_error("cannot open " + csv);
    out << "preconditioner,rho,kappa,richardson_its,gcr_its\n";
  }
  std::printf("%-10s %10s %10s %6s %6s\n", "precond", "rho", "kappa", "Rich", "GCR");
  const Vec x0(As.nrows, 0.0);
  for (int i = 0; i < 4; ++i) {
    const double rho = spectral_radius(As, *precs[i]);
    const double kappa = condition_number(As, *precs[i]);
    auto t = richardson_run(As, *precs[i], b, x0, 1e-10, 1000, StopMode::Absolute, false);
    auto g = gcr(As, *precs[i], b, x0, 1e-13, 1000, StopMode::Absolute);
    std::size_t git = g.true_residuals.size();
    for (std::size_t k = 0; k < g.true_residuals.size(); ++k)
      if (g.true_residuals[k] <= 1e-10) {
        git = k;
        break;
      }
    std::printf("%-10s %10.4f %10.4f %6zu %6zu\n", names[i], rho, kappa, t.iterations(),
                git);
    if (out.is_open())
      out << names[i] << ',' << rho << ',' << kappa << ',' << t.iterations() << ',' << git
          << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aitken-accelerated restricted additive Schwarz solver bench"};
  app.require_subcommand(1);

  CommonOpts common;
  std::size_t threads = 1;

  auto add_common = [&](CLI::App* c, bool with_rhs = true, bool with_matrix_in = true) {
    c->add_option("--problem", common.problem, "poisson | helmholtz");
    c->add_option("--mx", common.mx, "grid points in x (including boundary)");
    c->add_option("--my", common.my, "grid points in y (including boundary)");
    if (with_matrix_in)
      c->add_option("--matrix", common.matrix_in,
                    "read the operator from a Matrix Market file");
    if (with_rhs) {
      c->add_option("--rhs-in", common.rhs_in, "read the right-hand side from a text file");
      c->add_option("--rhs", common.rhs_kind,
                    "manufactured | ones | ramp-x | random:<seed>");
    }
    c->add_option("--seed", common.seed, "seed for random draws");
    c->add_option("--threads", threads, "worker threads (1 = deterministic default)")
        ->check(CLI::PositiveNumber);
  };

  // generate
  auto* gen = app.add_subcommand("generate", "emit a test operator and right-hand side");
  std::string matrix_out, rhs_out;
  add_common(gen, true, false);
  gen->add_option("--matrix", matrix_out, "Matrix Market output path");
  gen->add_option("--rhs-out", rhs_out, "right-hand side output path");

  // partition
  auto* par = app.add_subcommand("partition", "compute and save an overlapping partition");
  std::string part_spec = "band", part_out;
  std::size_t p = 2, delta = 1;
  add_common(par, false);
  par->add_option("--partition", part_spec, "band | greedy | file:<path>");
  par->add_option("--p", p, "number of subdomains");
  par->add_option("--delta", delta, "overlap layers");
  par->add_option("--out", part_out, "partition output path")->required();

  // solve
  auto* sol = app.add_subcommand("solve", "run a preconditioned solve");
  std::string prec = "ras", basis = "none", solver = "gcr";
  std::string csv, json_path, basis_out;
  double tol = 1e-10;
  std::size_t max_it = 1000;
  bool absolute = false, strict = false;
  std::optional<double> build_local_tol;
  add_common(sol);
  sol->add_option("--partition", part_spec, "band | greedy | file:<path>");
  sol->add_option("--p", p, "number of subdomains");
  sol->add_option("--delta", delta, "overlap layers");
  sol->add_option("--preconditioner", prec, "ras | aras | aras2");
  sol->add_option("--basis", basis,
                  "none | full | random:<q[,seed]> | svd:<q[,tol]> | analytic-eigen:<q>");
  sol->add_option("--solver", solver, "richardson | gcr | gmres");
  sol->add_option("--tol", tol, "stopping tolerance");
  sol->add_option("--max-it", max_it, "iteration cap");
  sol->add_flag("--absolute", absolute, "stop on the absolute residual norm");
  sol->add_option("--csv", csv, "per-iteration residual CSV output");
  sol->add_option("--json", json_path, "JSON summary output");
  sol->add_option("--basis-out", basis_out, "save the coarse space for reuse");
  sol->add_flag("--strict", strict, "exit 2 if the solver did not converge");
  sol->add_option("--build-local-tol", build_local_tol,
                  "recorded build-phase local tolerance (local solves use exact LU)");

  // analyze
  auto* ana = app.add_subcommand("analyze", "analytic two-domain convergence factors");
  std::size_t q = 0;
  std::string ana_csv;
  ana->add_option("--mx", common.mx, "grid points in x");
  ana->add_option("--my", common.my, "grid points in y");
  ana->add_option("--delta", delta, "overlap layers");
  ana->add_option("--q", q, "retained coarse modes");
  ana->add_option("--csv", ana_csv, "per-mode CSV output");

  // reproduce-table2
  auto* rep = app.add_subcommand("reproduce-table2",
                                 "two-domain Poisson reference table (rho/kappa/its)");
  std::string rep_csv;
  rep->add_option("--csv", rep_csv, "CSV output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(common, matrix_out, rhs_out);
    if (par->parsed()) return cmd_partition(common, part_spec, p, delta, part_out);
    if (sol->parsed())
      return cmd_solve(common, part_spec, p, delta, prec, basis, solver, tol, max_it,
                       absolute, csv, json_path, basis_out, strict, build_local_tol);
    if (ana->parsed()) return cmd_analyze(common.mx, common.my, delta, q, ana_csv);
    if (rep->parsed()) return cmd_reproduce_table2(rep_csv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
