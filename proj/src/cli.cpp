#include "fracbv/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracbv/approx.hpp"
#include "fracbv/config.hpp"
#include "fracbv/denoise.hpp"
#include "fracbv/error.hpp"
#include "fracbv/pgm.hpp"
#include "fracbv/variation.hpp"
#include "fracbv/verify.hpp"

namespace fracbv {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::optional<std::string> config, input, output, variant;
  std::optional<std::string> alpha, beta, gamma, p, tol, max_iter, seed;
};

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (f.config) cfg = read_config(*f.config);
  const auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (v) set_config_value(cfg, key, *v);
  };
  set("input", f.input);
  set("variant", f.variant);
  set("alpha", f.alpha);
  set("beta", f.beta);
  set("gamma", f.gamma);
  set("p", f.p);
  set("tol", f.tol);
  set("max_iter", f.max_iter);
  set("seed", f.seed);
  return cfg;
}

ImageBuffer load_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw UsageError("an input image is required (--input)");
  return read_pgm(cfg.input);
}

fs::path output_dir(const Flags& f) {
  if (!f.output) throw UsageError("an output directory is required (--output)");
  fs::path dir(*f.output);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& cfg, json grid,
                    double wall, const std::vector<std::string>& files) {
  json m;
  m["command"] = command;
  m["config_digest"] = hex64(fnv1a64(canonical_config(cfg)));
  m["alpha"] = cfg.alpha;
  m["beta"] = cfg.beta;
  m["gamma"] = cfg.gamma;
  m["p"] = cfg.p;
  m["variant"] = variant_name(cfg.variant);
  m["grid"] = std::move(grid);
  m["wall_time"] = wall;
  m["tool_version"] = kToolVersion;
  m["files"] = files;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

json grid_summary(const Grid& g) {
  json s;
  s["dim"] = g.dim();
  s["points"] = g.dim() == 1 ? json::array({g.points(0)}) : json::array({g.points(0), g.points(1)});
  s["spacing"] = g.spacing(0);
  return s;
}

DenoiseProblem make_problem(const RunConfig& cfg, const ScalarField& noisy, const ConvexDomain& omega) {
  DenoiseProblem prob(noisy, omega);
  prob.variant = cfg.variant;
  prob.alpha = cfg.alpha;
  prob.beta = cfg.beta;
  prob.gamma = cfg.gamma;
  prob.p = cfg.p;
  prob.riesz_margin = cfg.riesz_margin;
  prob.riesz.spectral.padding_factor = cfg.padding_factor;
  prob.gagliardo.quadrature = cfg.quadrature;
  return prob;
}

int cmd_denoise(const Flags& flags, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = resolve(flags);
  const ImageBuffer img = load_input(cfg);
  const fs::path dir = output_dir(flags);
  const ConvexDomain omega = cfg.domain.empty() ? image_rectangle(img) : read_domain_file(cfg.domain);
  const ScalarField noisy = image_to_field(img, omega);
  const DenoiseProblem prob = make_problem(cfg, noisy, omega);
  SolveOptions opt;
  opt.tol = cfg.tol;
  opt.max_iter = cfg.max_iter;
  opt.seed = cfg.seed;
  opt.accelerate = cfg.accelerate;
  opt.check_every = cfg.check_every;
  const PredualSolution sol = solve_predual(prob, opt);
  ScalarField u = recover_primal(sol.phi, prob);
  // pixels outside the domain keep their input value
  Vector merged = noisy.values();
  for (Index i = 0; i < merged.size(); ++i) {
    if (noisy.mask()[i]) merged[i] = u[i];
  }
  write_pgm((dir / "denoised.pgm").string(), field_to_image(noisy.with_values(merged), img.width, img.height, img.max_value));

  std::string csv = "k,primal,predual,gap,vi_residual,step\n";
  for (const TraceRow& r : sol.report.trace) {
    csv += std::to_string(r.k) + "," + real(r.primal) + "," + real(r.predual) + "," + real(r.gap) + "," +
           real(r.vi_residual) + "," + real(r.step) + "\n";
  }
  write_text(dir / "trace.csv", csv);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json grid = grid_summary(noisy.grid());
  grid["width"] = img.width;
  grid["height"] = img.height;
  write_manifest(dir, "denoise", cfg, grid, wall, {"denoised.pgm", "trace.csv"});

  const SolveReport& r = sol.report;
  out << "variant " << variant_name(cfg.variant) << "\n"
      << "iterations " << r.iterations << "\n"
      << "primal_energy " << real(r.primal_energy) << "\n"
      << "predual_energy " << real(r.predual_energy) << "\n"
      << "duality_gap " << real(r.duality_gap) << "\n"
      << "vi_residual " << real(r.vi_residual) << "\n"
      << "converged " << (r.converged ? "true" : "false") << "\n";
  return r.converged ? 0 : 1;
}

int cmd_variation(const Flags& flags, std::ostream& out) {
  const RunConfig cfg = resolve(flags);
  const ImageBuffer img = load_input(cfg);
  const ConvexDomain omega = cfg.domain.empty() ? image_rectangle(img) : read_domain_file(cfg.domain);
  ScalarField f = image_to_field(img, omega);
  Vector v = f.values();
  for (Index i = 0; i < v.size(); ++i) {
    if (!f.mask()[i]) v[i] = 0.0;
  }
  f = f.with_values(v);
  GagliardoOptions go;
  go.quadrature = cfg.quadrature;
  RieszOptions ro = adjoint_riesz_options();
  ro.spectral.padding_factor = cfg.padding_factor;
  const double gag = var_gagliardo(f, f.mask(), cfg.alpha, go).value;
  const double semi = gagliardo_seminorm(f, f.mask(), cfg.alpha, go);
  const double riesz = var_riesz(f, cfg.alpha, ro).value;
  out << "alpha " << real(cfg.alpha) << "\n"
      << "Var_alpha riesz " << real(riesz) << "\n"
      << "var_alpha gagliardo " << real(gag) << "\n"
      << "seminorm " << real(semi) << "\n"
      << "identity_residual " << real(std::abs(gag - semi) / std::max(1.0, semi)) << "\n";
  return 0;
}

int cmd_perimeter(const Flags& flags, std::ostream& out) {
  const RunConfig cfg = resolve(flags);
  const ImageBuffer img = load_input(cfg);
  const ScalarField f = image_to_field(img);
  Mask E(f.grid().size());
  for (Index i = 0; i < E.size(); ++i) E[i] = f[i] >= 0.5;
  GagliardoOptions go;
  go.quadrature = cfg.quadrature;
  const PerimeterResult p = frac_perimeter(f.grid(), E, cfg.alpha, go);
  out << "alpha " << real(cfg.alpha) << "\n"
      << "truncated " << real(p.truncated) << "\n"
      << "tail " << real(p.tail) << "\n"
      << "perimeter " << real(p.total()) << "\n";
  if (p.truncation_warning) out << "warning: tail exceeds 5% of the total; enlarge the image border\n";
  return 0;
}

int cmd_verify(std::ostream& out, std::uint64_t seed) {
  int failed = 0;
  for (const CheckOutcome& c : run_invariant_suite(seed)) {
    out << (c.passed ? "pass " : "FAIL ") << c.name << "  " << c.detail << "\n";
    if (!c.passed) ++failed;
  }
  out << (failed ? std::to_string(failed) + " check(s) failed" : std::string("all checks passed")) << "\n";
  return failed ? 1 : 0;
}

int cmd_approx_demo(const Flags& flags, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = resolve(flags);
  const fs::path dir = output_dir(flags);

  const Grid g1 = make_grid({{-2.0, 3.0}}, {401});
  const ScalarField chi = ScalarField::sample(g1, [](const Point& x) { return x.x() >= 0.0 && x.x() <= 1.0 ? 1.0 : 0.0; });
  const Mask omega1 = ConvexDomain::interval(-1.0, 2.0).mask(g1);
  const Mask G1 = ConvexDomain::interval(-0.8, 1.8).mask(g1);
  const RecoveryTrace tr = recovery_sequence(chi.with_mask(omega1), omega1, G1, {0.16, 0.08, 0.04}, cfg.alpha);
  std::string rec = "eps,value,reference\n";
  for (std::size_t k = 0; k < tr.eps.size(); ++k) rec += real(tr.eps[k]) + "," + real(tr.values[k]) + "," + real(tr.reference) + "\n";
  write_text(dir / "recovery.csv", rec);

  const Grid g2 = make_grid({{-2.0, 2.0}, {-2.0, 2.0}}, {49, 49});
  const ConvexDomain square = ConvexDomain::rectangle(Point(-0.5, -0.5), Point(0.5, 0.5));
  Eigen::MatrixXd c(g2.size(), 2);
  for (Index i = 0; i < g2.size(); ++i) {
    const double env = std::exp(-g2.node(i).squaredNorm() / 0.1);
    c(i, 0) = 0.6 * env * std::cos(2.0 * g2.node(i).x());
    c(i, 1) = 0.6 * env * std::sin(3.0 * g2.node(i).y());
  }
  PipelineOptions po;
  po.alpha = cfg.alpha;
  const auto rr = density_pipeline_riesz(RieszVectorField(g2, c), 1.0, square, 5e-2, po);
  const Grid g3 = make_grid({{-1.0, 1.0}, {-1.0, 1.0}}, {21, 21});
  const ConvexDomain square3 = ConvexDomain::rectangle(Point(-0.55, -0.55), Point(0.55, 0.55));
  Eigen::MatrixXd pv(g3.size(), g3.size());
  for (Index j = 0; j < g3.size(); ++j) {
    for (Index i = 0; i < g3.size(); ++i) pv(i, j) = 0.8 * std::sin(g3.node(i).x() - g3.node(j).x());
  }
  const auto gr = density_pipeline_gagliardo(NonlocalField(g3, pv, square3.mask(g3)), 1.0, square3, 5e-2, po);
  const auto stages = [](const PipelineReport& r, const char* first) {
    return std::string("stage,distance\n") + first + "," + real(r.cutoff_distance) + "\nscaling," +
           real(r.scaling_distance) + "\nmollification," + real(r.mollification_distance) + "\ntotal," +
           real(r.total_distance) + "\n";
  };
  write_text(dir / "pipeline_riesz.csv", stages(rr.report, "cutoff"));
  write_text(dir / "pipeline_gagliardo.csv", stages(gr.report, "antisymmetrization"));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(dir, "approx-demo", cfg, grid_summary(g2), wall,
                 {"recovery.csv", "pipeline_riesz.csv", "pipeline_gagliardo.csv"});
  out << "recovery bounded " << (tr.bounded ? "true" : "false") << "\n"
      << "riesz pipeline distance " << real(rr.report.total_distance) << "\n"
      << "gagliardo pipeline distance " << real(gr.report.total_distance) << "\n";
  return tr.bounded ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional variation toolkit", "fracbv"};
  app.require_subcommand(1, 1);
  Flags f;
  const auto add_common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config, "key = value configuration file");
    sub->add_option("--input", f.input, "input PGM image");
    sub->add_option("--output", f.output, "output directory");
    sub->add_option("--variant", f.variant, "riesz or gagliardo");
    sub->add_option("--alpha", f.alpha, "fractional order in (0, 1)");
    sub->add_option("--beta", f.beta, "regularization weight");
    sub->add_option("--gamma", f.gamma, "fidelity weight");
    sub->add_option("--p", f.p, "fidelity exponent");
    sub->add_option("--tol", f.tol, "relative duality gap tolerance");
    sub->add_option("--max-iter", f.max_iter, "iteration limit");
    sub->add_option("--seed", f.seed, "power iteration seed");
  };
  CLI::App* denoise = app.add_subcommand("denoise", "solve the denoising problem for an image");
  CLI::App* variation = app.add_subcommand("variation", "print both fractional variations of an image");
  CLI::App* perimeter = app.add_subcommand("perimeter", "fractional perimeter of the thresholded image");
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  CLI::App* demo = app.add_subcommand("approx-demo", "recovery sequence and density pipelines on canned inputs");
  for (CLI::App* sub : {denoise, variation, perimeter, verify, demo}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "fracbv: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (denoise->parsed()) return cmd_denoise(f, out);
    if (variation->parsed()) return cmd_variation(f, out);
    if (perimeter->parsed()) return cmd_perimeter(f, out);
    if (verify->parsed()) return cmd_verify(out, resolve(f).seed);
    return cmd_approx_demo(f, out);
  } catch (const UsageError& e) {
    err << "fracbv: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "fracbv: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "fracbv: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    err << "fracbv: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "fracbv: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fracbv
