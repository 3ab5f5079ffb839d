#include "guided/experiments.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace guided {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

MagnifyInput make_magnify_input(const ImageGrid& img, const MagnifySetup& setup,
                                std::optional<double> noise_var, std::uint64_t seed) {
  setup.validate();
  require_same_dim(img.w, setup.w, "magnify input");
  ImageGrid low = downsample(img, setup.r);
  MagnifyInput in;
  if (noise_var && *noise_var > 0.0) {
    NoisyGrid noisy = add_noise(low, *noise_var, seed);
    low = std::move(noisy.grid);
    // Replicating each low-res error into an r x r block scales its norm by r.
    in.noise_norm = static_cast<double>(setup.r) * noisy.noise_norm;
  }
  in.sf = upsample(low, setup.r).pixels;
  return in;
}

namespace {

double score(const Vector& v, const ImageGrid& truth) {
  return psnr(ImageGrid(truth.w, v), truth);
}

double rel_diff(const Vector& a, const Vector& b) {
  const double nb = b.norm();
  return nb > 0 ? (a - b).norm() / nb : (a - b).norm();
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, const ImageGrid& img) {
  if (cfg.id < 1 || cfg.id > 4) throw Error(ErrorKind::OutOfRange, "experiment id must be 1..4");
  const MagnifySetup& setup = cfg.setup;
  setup.validate();
  require_same_dim(img.w, setup.w, "run_experiment image");

  std::optional<double> noise = cfg.noise_var;
  if (cfg.id == 2 && !noise) noise = 0.001;
  if (cfg.id != 2 && cfg.id != 3) noise.reset();
  const std::uint64_t seed = noise ? cfg.seed : 0;

  const MagnifyInput input = make_magnify_input(img, setup, noise, cfg.seed);
  ReconstructionProblem prob{block_sampling_projector(setup.w, setup.r),
                             dct_lowpass_projector(setup.w, setup.k), input.sf,
                             noise ? std::optional<double>(input.noise_norm) : std::nullopt};

  ExperimentReport rep;
  rep.noise_norm = input.noise_norm;
  auto add = [&](std::string method, std::optional<double> param, const Vector& v, Index iters) {
    rep.rows.push_back({std::move(method), param, score(v, img), iters, seed});
  };

  if (cfg.id == 1 || cfg.id == 2) {
    const ReconstructionResult rec = consistent_reconstruct(prob, cfg.opts);
    const Index it = rec.solver.iterations;
    add("consistent", std::nullopt, rec.f_consistent, it);
    const GuidedResult g1 = guided_reconstruct(prob, GuidedImpl::G1Frame, cfg.opts);
    add("g1", std::nullopt, g1.t, g1.solve.iterations);
    const GuidedResult g2 = guided_reconstruct(prob, GuidedImpl::G2Projector, cfg.opts);
    add("g2", std::nullopt, g2.t, g2.solve.iterations);
    add("g3", std::nullopt, rec.t_guided, it);
    const Vector fm = minimax_regret(prob);
    add("minimax", std::nullopt, fm, 0);
    for (double a : cfg.alphas) add("blend", a, blend(rec.f_consistent, rec.t_guided, a), it);
    if (cfg.keep_outputs) {
      rep.outputs.emplace_back("f_c", rec.f_consistent);
      rep.outputs.emplace_back("f_g", g2.t);
      if (!cfg.alphas.empty()) {
        rep.outputs.emplace_back("f_alpha", blend(rec.f_consistent, rec.t_guided, cfg.alphas.front()));
      }
      rep.outputs.emplace_back("f_m", fm);
    }
    if (cfg.id == 2) {
      const AlphaSelection sel = select_alpha(prob, rec.f_consistent);
      rep.alpha_selection = sel;
      add("alpha_opt", sel.alpha, blend(rec.f_consistent, rec.t_guided, sel.alpha), it);
      add("alpha_opt_sq", sel.alpha_squared,
          blend(rec.f_consistent, rec.t_guided, sel.alpha_squared), it);
    }
  } else if (cfg.id == 3) {
    const std::uint64_t before = solver_invocations();
    const ReconstructionResult rec = consistent_reconstruct(prob, cfg.opts);
    const GuidedResult g3 = guided_reconstruct(prob, GuidedImpl::G3FromConsistent, cfg.opts, &rec);
    for (double a : cfg.alphas) {
      add("blend", a, blend(rec.f_consistent, g3.t, a), rec.solver.iterations);
    }
    const std::uint64_t mid = solver_invocations();
    std::vector<double> rhos = cfg.rhos;
    if (rhos.empty()) {
      for (double a : cfg.alphas) {
        if (a > 0.0) rhos.push_back(rho_from_alpha(a));
      }
    }
    for (double rho : rhos) {
      const RegularizedResult reg = regularized_reconstruct(prob, rho, cfg.opts);
      add("regularized", rho, reg.f, reg.solve.iterations);
    }
    rep.blend_solves = mid - before;
    rep.regularized_solves = solver_invocations() - mid;
  } else {
    for (Index cap : cfg.max_iter_caps) {
      SolveOptions o = cfg.opts;
      o.max_iter = cap;
      const ReconstructionResult rec = consistent_reconstruct(prob, o);
      const GuidedResult g1 = guided_reconstruct(prob, GuidedImpl::G1Frame, o);
      const GuidedResult g2 = guided_reconstruct(prob, GuidedImpl::G2Projector, o);
      const auto c = static_cast<double>(cap);
      add("g1", c, g1.t, g1.solve.iterations);
      add("g2", c, g2.t, g2.solve.iterations);
      add("g3", c, rec.t_guided, rec.solver.iterations);
      rep.g1_vs_g2.push_back(rel_diff(g1.t, g2.t));
      rep.g3_vs_g2.push_back(rel_diff(rec.t_guided, g2.t));
    }
  }
  return rep;
}

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "method,param,psnr_db,iterations,seed\n";
  for (const ExperimentRow& r : rows) {
    out << r.method << ',' << (r.param ? format_number(*r.param) : std::string()) << ','
        << format_number(r.psnr_db) << ',' << r.iterations << ',' << r.seed << '\n';
  }
}

}  // namespace guided
