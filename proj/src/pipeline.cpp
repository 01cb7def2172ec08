#include "normint/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "normint/errors.hpp"
#include "normint/image_io.hpp"
#include "normint/metrics.hpp"
#include "normint/quadratic.hpp"

namespace normint {

Method parse_method(std::string_view name) {
  if (name == "quadratic") return Method::Quadratic;
  if (name == "tv") return Method::Tv;
  if (name == "nonconvex") return Method::Nonconvex;
  if (name == "anisotropic") return Method::Anisotropic;
  if (name == "mumford-shah" || name == "mumford_shah") return Method::MumfordShah;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Quadratic: return "quadratic";
    case Method::Tv: return "tv";
    case Method::Nonconvex: return "nonconvex";
    case Method::Anisotropic: return "anisotropic";
    case Method::MumfordShah: return "mumford-shah";
  }
  return "?";
}

InitKind parse_init(std::string_view name) {
  if (name == "quadratic") return InitKind::Quadratic;
  if (name == "zero") return InitKind::Zero;
  if (name == "file") return InitKind::File;
  throw ConfigError("unknown init '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (p_path.empty() || q_path.empty()) throw ConfigError("both --p and --q are required");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
  if (!(solver.rel_tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (init == InitKind::File && !init_path) throw ConfigError("--init file needs --init-path");
  if (out_edges && method != Method::MumfordShah)
    throw ConfigError("--edges is only available with --method mumford-shah");
  validate_method();
}

void RunConfig::validate_method() const {
  switch (method) {
    case Method::Quadratic: break;
    case Method::Tv:
      if (!(tv.alpha > 0.0)) throw ConfigError("alpha must be positive");
      if (tv.iterations < 0) throw ConfigError("iterations must be non-negative");
      break;
    case Method::Nonconvex:
      phi.validate();
      if (ipiano.iterations < 0) throw ConfigError("iterations must be non-negative");
      break;
    case Method::Anisotropic:
      if (!(diffusion.mu > 0.0) || !(diffusion.nu > 0.0))
        throw ConfigError("mu and nu must be positive");
      if (diffusion.iterations < 0) throw ConfigError("iterations must be non-negative");
      break;
    case Method::MumfordShah:
      if (!(ms.mu > 0.0) || !(ms.epsilon > 0.0))
        throw ConfigError("mu and epsilon must be positive");
      if (ms.iterations < 0) throw ConfigError("iterations must be non-negative");
      break;
  }
}

namespace {

Raster<double> read_same_shape(const std::filesystem::path& path, int h, int w,
                               const char* what) {
  Raster<double> r = to_double(read_pfm(path));
  if (!r.same_shape(h, w))
    throw ConfigError(std::string(what) + " dimensions do not match the gradient field");
  return r;
}

}  // namespace

RunInputs load_inputs(const RunConfig& cfg) {
  cfg.validate();
  const Raster<double> p = to_double(read_pfm(cfg.p_path));
  const int h = p.height(), w = p.width();
  const Raster<double> q = read_same_shape(cfg.q_path, h, w, "q");
  DomainMask mask = DomainMask::full(h, w);
  if (cfg.mask_path) {
    mask = read_mask(*cfg.mask_path);
    if (mask.height() != h || mask.width() != w)
      throw ConfigError("mask dimensions do not match the gradient field");
  }
  std::optional<Raster<double>> z0, lam, init, truth;
  if (cfg.z0_path) z0 = read_same_shape(*cfg.z0_path, h, w, "z0");
  if (cfg.lambda_path) lam = read_same_shape(*cfg.lambda_path, h, w, "lambda");
  if (cfg.init == InitKind::File) init = read_same_shape(*cfg.init_path, h, w, "initial depth");
  if (cfg.truth_path) truth = read_same_shape(*cfg.truth_path, h, w, "ground truth");

  RunInputs in{Domain(std::move(mask)), {}, {}, {}, std::move(truth)};
  in.g = {in.domain.gather(p), in.domain.gather(q)};
  const std::size_t n = in.domain.size();
  in.prior = PriorField::uniform(n, cfg.lambda);
  if (z0) in.prior.z0 = in.domain.gather(*z0);
  if (lam) in.prior.lambda = in.domain.gather(*lam);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(in.g.p[i]) || !std::isfinite(in.g.q[i]))
      throw ConfigError("non-finite gradient value inside the mask");
    if (!(in.prior.lambda[i] >= 0.0)) throw ConfigError("lambda must be non-negative");
  }
  if (cfg.init == InitKind::Zero) in.init.assign(n, 0.0);
  if (init) in.init = in.domain.gather(*init);
  check_isolated(in.domain, in.prior);
  return in;
}

RunReport integrate(const RunConfig& cfg, const RunInputs& in) {
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorSet ops = build_operators(in.domain);
  RunReport rep;
  DepthMap z;
  double iterations = 0.0;
  switch (cfg.method) {
    case Method::Quadratic: {
      const QuadraticResult r = integrate_quadratic(in.domain, ops, in.g, in.prior, cfg.solver);
      z = r.z;
      iterations = r.iterations;
      rep.energy.push_back(quadratic_energy(ops, in.domain, in.g, in.prior, z));
      break;
    }
    case Method::Tv: {
      TvConfig tc = cfg.tv;
      TvResult r = integrate_tv(in.domain, ops, in.g, in.prior, tc, in.init);
      z = std::move(r.z);
      iterations = r.iterations;
      rep.energy = std::move(r.energy);
      if (!r.primal_residual.empty()) rep.metrics["primal_residual"] = r.primal_residual.back();
      break;
    }
    case Method::Nonconvex: {
      NonconvexResult r = integrate_nonconvex(in.domain, ops, in.g, in.prior, cfg.phi,
                                              cfg.ipiano, in.init);
      z = std::move(r.z);
      iterations = r.iterations;
      rep.energy = std::move(r.energy);
      rep.metrics["alpha1"] = r.alpha1;
      break;
    }
    case Method::Anisotropic: {
      AnisotropicResult r =
          integrate_anisotropic(in.domain, ops, in.g, in.prior, cfg.diffusion, in.init);
      z = std::move(r.z);
      iterations = r.iterations;
      rep.energy = std::move(r.surrogate_after);
      rep.metrics["cholesky_fallbacks"] = r.fallbacks;
      break;
    }
    case Method::MumfordShah: {
      MsResult r = integrate_mumford_shah(in.domain, ops, in.g, in.prior, cfg.ms, in.init);
      z = std::move(r.z);
      iterations = r.iterations;
      rep.energy = std::move(r.energy);
      rep.edges = r.w.edge_map();
      rep.metrics["unconverged_inner_solves"] = r.unconverged_solves;
      break;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.depth = in.domain.scatter(z, std::numeric_limits<double>::quiet_NaN());
  rep.metrics["pixels"] = static_cast<double>(in.domain.size());
  rep.metrics["iterations"] = iterations;
  rep.metrics["wall_time_s"] = secs;
  if (!rep.energy.empty()) rep.metrics["final_energy"] = rep.energy.back();
  if (in.truth) {
    rep.metrics["rmse"] = rmse_aligned(z, in.domain.gather(*in.truth));
    if (cfg.mae) {
      // Central differences are taken on the aligned estimate.
      rep.metrics["mae_deg"] = mae_normals(in.domain.scatter(z), *in.truth, in.domain.mask);
    }
  }
  return rep;
}

void write_metrics_json(const std::filesystem::path& path, const RunConfig& cfg,
                        const std::map<std::string, double>& metrics) {
  nlohmann::json j;
  j["method"] = std::string(to_string(cfg.method));
  j["metrics"] = nlohmann::json::object();
  for (const auto& [k, v] : metrics) j["metrics"][k] = v;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
}

void write_metrics_csv(const std::filesystem::path& path,
                       const std::map<std::string, double>& metrics) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "metric,value\n" << std::setprecision(17);
  for (const auto& [k, v] : metrics) out << k << ',' << v << '\n';
}

void write_energy_csv(const std::filesystem::path& path, const std::vector<double>& energy) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "step,energy\n" << std::setprecision(17);
  for (std::size_t k = 0; k < energy.size(); ++k) out << k << ',' << energy[k] << '\n';
}

RunReport run_integration(const RunConfig& cfg) {
  const RunInputs in = load_inputs(cfg);
  RunReport rep = integrate(cfg, in);
  if (cfg.out_depth) write_pfm(*cfg.out_depth, to_float(rep.depth));
  if (cfg.out_obj) write_obj(*cfg.out_obj, rep.depth, in.domain.mask);
  if (cfg.out_metrics) write_metrics_json(*cfg.out_metrics, cfg, rep.metrics);
  if (cfg.out_csv) write_metrics_csv(*cfg.out_csv, rep.metrics);
  if (cfg.out_energy) write_energy_csv(*cfg.out_energy, rep.energy);
  if (cfg.out_edges && rep.edges) {
    Raster<std::uint8_t> img(in.domain.mask.height(), in.domain.mask.width(), 0);
    for (std::size_t i = 0; i < in.domain.size(); ++i) {
      const Pixel px = in.domain.index.pixel(i);
      img(px.u, px.v) = static_cast<std::uint8_t>(
          std::clamp(std::lround(255.0 * (*rep.edges)[i]), 0L, 255L));
    }
    write_pgm(*cfg.out_edges, img);
  }
  return rep;
}

std::string describe(const RunConfig& cfg) {
  std::ostringstream s;
  const auto opt = [](const std::optional<std::filesystem::path>& p) {
    return p ? p->string() : std::string("-");
  };
  s << "method     " << to_string(cfg.method) << '\n'
    << "p          " << cfg.p_path.string() << '\n'
    << "q          " << cfg.q_path.string() << '\n'
    << "mask       " << opt(cfg.mask_path) << '\n'
    << "z0         " << opt(cfg.z0_path) << '\n'
    << "lambda     " << (cfg.lambda_path ? cfg.lambda_path->string() : std::to_string(cfg.lambda))
    << '\n'
    << "tolerance  " << cfg.solver.rel_tolerance << '\n'
    << "precond    " << to_string(cfg.solver.preconditioner) << '\n'
    << "seed       " << cfg.seed << '\n';
  switch (cfg.method) {
    case Method::Quadratic: break;
    case Method::Tv:
      s << "alpha      " << cfg.tv.alpha << "\niterations " << cfg.tv.iterations << '\n';
      break;
    case Method::Nonconvex:
      s << "phi        " << (cfg.phi.kind == PhiKind::Log ? 1 : 2) << "\nbeta       "
        << cfg.phi.beta << "\ngamma      " << cfg.phi.gamma << "\niterations "
        << cfg.ipiano.iterations << '\n';
      break;
    case Method::Anisotropic:
      s << "mu         " << cfg.diffusion.mu << "\nnu         " << cfg.diffusion.nu
        << "\niterations " << cfg.diffusion.iterations << '\n';
      break;
    case Method::MumfordShah:
      s << "mu         " << cfg.ms.mu << "\nepsilon    " << cfg.ms.epsilon << "\niterations "
        << cfg.ms.iterations << '\n';
      break;
  }
  s << "outputs    depth=" << opt(cfg.out_depth) << " obj=" << opt(cfg.out_obj)
    << " metrics=" << opt(cfg.out_metrics) << " csv=" << opt(cfg.out_csv)
    << " energy=" << opt(cfg.out_energy) << '\n';
  return s.str();
}

}  // namespace normint
