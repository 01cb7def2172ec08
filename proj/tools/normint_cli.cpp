// normint: integrate gradient fields into depth maps.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "normint/errors.hpp"
#include "normint/flatten.hpp"
#include "normint/image_io.hpp"
#include "normint/metrics.hpp"
#include "normint/pipeline.hpp"
#include "normint/quadratic.hpp"
#include "normint/synthetic.hpp"

namespace fs = std::filesystem;
using namespace normint;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitSolver = 4;

struct MethodFlags {
  std::string method = "quadratic";
  std::string init = "quadratic";
  std::string variant = "scaled";
  std::string precond = "ic";
  int phi = 1;
  std::optional<double> mu, nu, beta, gamma, alpha, epsilon, tol;
  std::optional<int> iters;
};

void add_method_flags(CLI::App* app, MethodFlags& f) {
  app->add_option("--method", f.method, "quadratic|tv|nonconvex|anisotropic|mumford-shah")
      ->capture_default_str();
  app->add_option("--mu", f.mu, "diffusion / Mumford-Shah mu");
  app->add_option("--nu", f.nu, "diffusion nu");
  app->add_option("--beta", f.beta, "log penalty beta");
  app->add_option("--gamma", f.gamma, "rational penalty gamma");
  app->add_option("--alpha", f.alpha, "ADMM penalty alpha");
  app->add_option("--epsilon", f.epsilon, "Ambrosio-Tortorelli epsilon");
  app->add_option("--iters", f.iters, "outer iterations");
  app->add_option("--init", f.init, "quadratic|zero|file")->capture_default_str();
  app->add_option("--tol", f.tol, "linear solver relative tolerance");
  app->add_option("--variant", f.variant, "pm|stat|scaled")->capture_default_str();
  app->add_option("--phi", f.phi, "1 = log, 2 = rational")->capture_default_str();
  app->add_option("--precond", f.precond, "none|jacobi|ic")->capture_default_str();
}

void apply_method_flags(const MethodFlags& f, RunConfig& cfg) {
  cfg.method = parse_method(f.method);
  cfg.init = parse_init(f.init);
  cfg.solver.preconditioner = parse_preconditioner(f.precond);
  if (f.tol) cfg.solver.rel_tolerance = *f.tol;
  if (f.phi == 1)
    cfg.phi.kind = PhiKind::Log;
  else if (f.phi == 2)
    cfg.phi.kind = PhiKind::Rational;
  else
    throw ConfigError("--phi must be 1 or 2");
  if (f.beta) cfg.phi.beta = *f.beta;
  if (f.gamma) cfg.phi.gamma = *f.gamma;
  if (f.alpha) cfg.tv.alpha = *f.alpha;
  cfg.diffusion.variant = parse_diffusion_variant(f.variant);
  if (f.method == "anisotropic") {
    if (f.mu) cfg.diffusion.mu = *f.mu;
  } else if (f.mu) {
    cfg.ms.mu = *f.mu;
  }
  if (f.nu) cfg.diffusion.nu = *f.nu;
  if (f.epsilon) cfg.ms.epsilon = *f.epsilon;
  if (f.iters) {
    cfg.tv.iterations = *f.iters;
    cfg.ipiano.iterations = *f.iters;
    cfg.diffusion.iterations = *f.iters;
    cfg.ms.iterations = *f.iters;
  }
}

std::string fmt_metrics(const std::map<std::string, double>& m) {
  std::ostringstream s;
  s.precision(8);
  for (const auto& [k, v] : m) s << k << " = " << v << '\n';
  return s.str();
}

// Comma-separated list of doubles.
std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "' in list");
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrate gradient fields into depth maps"};
  app.require_subcommand(1);
  bool dry_run = false;
  app.add_flag("--dry-run", dry_run, "validate and print the resolved configuration only");

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic gradient field");
  std::string g_kind = "smooth_bumps";
  int g_h = 64, g_w = 64;
  double g_sigma = 0.0, g_scale = 1.0, g_jump = 10.0;
  std::uint64_t g_seed = 0;
  std::string g_out = ".";
  gen->add_option("--kind", g_kind, "plane|smooth_bumps|vase_like|tent_like|step")
      ->capture_default_str();
  gen->add_option("--height", g_h)->capture_default_str();
  gen->add_option("--width", g_w)->capture_default_str();
  gen->add_option("--sigma", g_sigma, "noise level, fraction of max |g|")->capture_default_str();
  gen->add_option("--seed", g_seed)->capture_default_str();
  gen->add_option("--scale", g_scale)->capture_default_str();
  gen->add_option("--jump", g_jump, "step height")->capture_default_str();
  gen->add_option("--out-dir", g_out, "writes p.pfm q.pfm mask.pgm z_true.pfm")
      ->capture_default_str();

  // integrate
  auto* integ = app.add_subcommand("integrate", "integrate a gradient field");
  RunConfig run;
  MethodFlags mf;
  std::string i_p, i_q, i_mask, i_z0, i_lambda, i_truth, i_initp, i_out, i_obj, i_metrics,
      i_csv, i_energy, i_edges;
  add_method_flags(integ, mf);
  integ->add_option("--p", i_p, "PFM, derivative along rows")->required();
  integ->add_option("--q", i_q, "PFM, derivative along columns")->required();
  integ->add_option("--mask", i_mask, "PGM, >127 is inside");
  integ->add_option("--z0", i_z0, "PFM prior depth");
  integ->add_option("--lambda-map", i_lambda, "PFM prior weights");
  integ->add_option("--lambda", run.lambda, "uniform prior weight")->capture_default_str();
  integ->add_option("--truth", i_truth, "PFM ground truth for metrics");
  integ->add_flag("--mae", run.mae, "also report mean angular error");
  integ->add_option("--init-path", i_initp, "PFM initial depth for --init file");
  integ->add_option("--seed", run.seed)->capture_default_str();
  integ->add_option("-o,--out", i_out, "PFM depth output");
  integ->add_option("--obj", i_obj, "OBJ mesh output");
  integ->add_option("--metrics", i_metrics, "JSON metrics output");
  integ->add_option("--csv", i_csv, "CSV metrics output");
  integ->add_option("--energy", i_energy, "CSV energy history output");
  integ->add_option("--edges", i_edges, "PGM edge map output (mumford-shah)");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "compare a depth map to ground truth");
  std::string e_depth, e_truth, e_mask, e_csv;
  bool e_mae = false;
  eval->add_option("--depth", e_depth)->required();
  eval->add_option("--truth", e_truth)->required();
  eval->add_option("--mask", e_mask);
  eval->add_flag("--mae", e_mae);
  eval->add_option("--csv", e_csv);

  // flatten
  auto* flat = app.add_subcommand("flatten", "piecewise-constant image from control points");
  std::string f_in, f_out, f_ctrl;
  ControlPointSpec cps;
  MsConfig f_ms;
  flat->add_option("--in", f_in, "8-bit PPM input")->required();
  flat->add_option("--out", f_out, "PPM output")->required();
  flat->add_option("--control", f_ctrl, "PGM control-point map output");
  flat->add_option("--fraction", cps.fraction)->capture_default_str();
  flat->add_option("--mu", f_ms.mu)->capture_default_str();
  flat->add_option("--epsilon", f_ms.epsilon)->capture_default_str();
  flat->add_option("--iters", f_ms.iterations)->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "integrate synthetic data and report metrics");
  MethodFlags bf;
  std::string b_kind = "vase_like", b_sweep;
  int b_h = 64, b_w = 64;
  double b_sigma = 0.01, b_lambda = 1e-6;
  std::uint64_t b_seed = 0;
  bool b_full = false;
  add_method_flags(bench, bf);
  bench->add_option("--kind", b_kind)->capture_default_str();
  bench->add_option("--height", b_h)->capture_default_str();
  bench->add_option("--width", b_w)->capture_default_str();
  bench->add_option("--sigma", b_sigma)->capture_default_str();
  bench->add_option("--seed", b_seed)->capture_default_str();
  bench->add_option("--lambda", b_lambda)->capture_default_str();
  bench->add_flag("--full-grid", b_full, "ignore the object mask");
  bench->add_option("--sweep", b_sweep, "name=v1,v2,... over one method flag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return e.get_exit_code() == 0 ? 0 : (rc == 0 ? 0 : kExitConfig);
  }

  try {
    if (*gen) {
      SurfaceParams sp;
      sp.scale = g_scale;
      sp.jump = g_jump;
      const SurfaceKind kind = parse_surface_kind(g_kind);
      if (g_sigma < 0) throw ConfigError("sigma must be non-negative");
      if (dry_run) {
        std::cout << "kind " << to_string(kind) << "\nsize " << g_h << "x" << g_w << "\nsigma "
                  << g_sigma << "\nseed " << g_seed << "\nout " << g_out << '\n';
        return 0;
      }
      SyntheticSurface s = generate_surface(kind, g_h, g_w, sp);
      const Domain full(DomainMask::full(g_h, g_w));
      const GradientField g = add_gaussian_noise(gradient_on(full, s), {g_sigma, g_seed});
      const fs::path dir(g_out);
      fs::create_directories(dir);
      write_pfm(dir / "p.pfm", to_float(full.scatter(g.p)));
      write_pfm(dir / "q.pfm", to_float(full.scatter(g.q)));
      write_pfm(dir / "z_true.pfm", to_float(s.z));
      write_mask(dir / "mask.pgm", s.mask);
      return 0;
    }

    if (*integ) {
      run.p_path = i_p;
      run.q_path = i_q;
      const auto opt = [](const std::string& s) {
        return s.empty() ? std::optional<fs::path>{} : std::optional<fs::path>{s};
      };
      run.mask_path = opt(i_mask);
      run.z0_path = opt(i_z0);
      run.lambda_path = opt(i_lambda);
      run.truth_path = opt(i_truth);
      run.init_path = opt(i_initp);
      run.out_depth = opt(i_out);
      run.out_obj = opt(i_obj);
      run.out_metrics = opt(i_metrics);
      run.out_csv = opt(i_csv);
      run.out_energy = opt(i_energy);
      run.out_edges = opt(i_edges);
      apply_method_flags(mf, run);
      run.validate();
      if (dry_run) {
        std::cout << describe(run);
        return 0;
      }
      const RunReport rep = run_integration(run);
      std::cout << fmt_metrics(rep.metrics);
      return 0;
    }

    if (*eval) {
      const Raster<double> z = to_double(read_pfm(e_depth));
      const Raster<double> t = to_double(read_pfm(e_truth));
      if (!z.same_shape(t.height(), t.width()))
        throw ConfigError("depth and truth dimensions differ");
      DomainMask mask = DomainMask::full(z.height(), z.width());
      if (!e_mask.empty()) mask = read_mask(e_mask);
      if (mask.height() != z.height() || mask.width() != z.width())
        throw ConfigError("mask dimensions differ");
      if (dry_run) {
        std::cout << "depth " << e_depth << "\ntruth " << e_truth << '\n';
        return 0;
      }
      std::map<std::string, double> m;
      m["rmse"] = rmse_aligned(z, t, mask);
      if (e_mae) m["mae_deg"] = mae_normals(z, t, mask);
      std::cout << fmt_metrics(m);
      if (!e_csv.empty()) write_metrics_csv(e_csv, m);
      return 0;
    }

    if (*flat) {
      const Raster<Rgb> img = read_ppm(f_in);
      if (!(cps.fraction > 0 && cps.fraction <= 1)) throw ConfigError("fraction must lie in (0, 1]");
      if (dry_run) {
        std::cout << "in " << f_in << "\nout " << f_out << "\nfraction " << cps.fraction
                  << "\nmu " << f_ms.mu << "\nepsilon " << f_ms.epsilon << "\niters "
                  << f_ms.iterations << '\n';
        return 0;
      }
      const FlattenResult r = flatten_image(img, cps, f_ms);
      write_ppm(f_out, r.image);
      if (!f_ctrl.empty()) {
        Raster<std::uint8_t> c = r.control;
        for (auto& x : c.data()) x = x ? 255 : 0;
        write_pgm(f_ctrl, c);
      }
      return 0;
    }

    if (*bench) {
      RunConfig cfg;
      apply_method_flags(bf, cfg);
      cfg.lambda = b_lambda;
      const SurfaceKind kind = parse_surface_kind(b_kind);
      std::string sweep_name = "-";
      std::vector<double> values{0.0};
      if (!b_sweep.empty()) {
        const auto eq = b_sweep.find('=');
        if (eq == std::string::npos) throw ConfigError("--sweep expects name=v1,v2");
        sweep_name = b_sweep.substr(0, eq);
        values = parse_list(b_sweep.substr(eq + 1));
      }
      if (dry_run) {
        std::cout << "kind " << to_string(kind) << "\nsize " << b_h << "x" << b_w << "\nsigma "
                  << b_sigma << "\nsweep " << sweep_name << '\n';
        return 0;
      }
      const SyntheticSurface s = generate_surface(kind, b_h, b_w);
      const Domain full(DomainMask::full(b_h, b_w));
      const GradientField g_full =
          add_gaussian_noise(gradient_on(full, s), {b_sigma, b_seed});
      RunInputs in{b_full ? Domain(DomainMask::full(b_h, b_w)) : Domain(s.mask), {}, {}, {},
                   s.z};
      in.g = {in.domain.gather(full.scatter(g_full.p)), in.domain.gather(full.scatter(g_full.q))};
      in.prior = PriorField::uniform(in.domain.size(), b_lambda);
      if (cfg.init == InitKind::Zero) in.init.assign(in.domain.size(), 0.0);
      std::cout << "param,value,rmse,iterations,wall_time_s\n";
      for (double v : values) {
        MethodFlags f = bf;
        if (sweep_name == "mu") f.mu = v;
        else if (sweep_name == "nu") f.nu = v;
        else if (sweep_name == "beta") f.beta = v;
        else if (sweep_name == "gamma") f.gamma = v;
        else if (sweep_name == "alpha") f.alpha = v;
        else if (sweep_name == "epsilon") f.epsilon = v;
        else if (sweep_name == "iters") f.iters = static_cast<int>(v);
        else if (sweep_name == "lambda") in.prior = PriorField::uniform(in.domain.size(), v);
        else if (sweep_name != "-") throw ConfigError("cannot sweep '" + sweep_name + "'");
        RunConfig c = cfg;
        apply_method_flags(f, c);
        c.validate_method();
        const RunReport rep = integrate(c, in);
        std::cout << sweep_name << ',' << v << ',' << rep.metrics.at("rmse") << ','
                  << rep.metrics.at("iterations") << ',' << rep.metrics.at("wall_time_s") << '\n';
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << " (iterations " << e.iterations()
              << ", residual " << e.residual() << ")\n";
    return kExitSolver;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
