#include "cli/commands.hpp"

#include "cli/config.hpp"
#include "guided/experiments.hpp"
#include "guided/graph.hpp"
#include "guided/io.hpp"
#include "guided/pgm.hpp"
#include "guided/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace guided::cli {

namespace fs = std::filesystem;

namespace {

// Options that may also come from the --config JSON file. After parsing, a
// key from the file is applied only if the flag was not given.
class ConfigBinder {
 public:
  template <typename T>
  CLI::Option* add(CLI::App& app, const std::string& key, T& var, const std::string& help) {
    CLI::Option* opt = app.add_option("--" + key, var, help);
    setters_.push_back({key, opt, [&var, key](const Json& j) {
                          try {
                            var = j.get<T>();
                          } catch (const nlohmann::json::exception&) {
                            throw Error(ErrorKind::Parse, "config key '" + key + "' has the wrong type");
                          }
                        }});
    return opt;
  }

  template <typename T>
  CLI::Option* add_optional(CLI::App& app, const std::string& key, std::optional<T>& var,
                            const std::string& help) {
    CLI::Option* opt = app.add_option("--" + key, var, help);
    setters_.push_back({key, opt, [&var, key](const Json& j) {
                          try {
                            if (j.is_null()) {
                              var.reset();
                            } else {
                              var = j.get<T>();
                            }
                          } catch (const nlohmann::json::exception&) {
                            throw Error(ErrorKind::Parse, "config key '" + key + "' has the wrong type");
                          }
                        }});
    return opt;
  }

  void apply(const std::string& config_path) const {
    if (config_path.empty()) return;
    const Json cfg = load_config_file(config_path);
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      bool known = false;
      for (const Setter& s : setters_) {
        if (s.key != it.key()) continue;
        known = true;
        if (s.opt->count() == 0) s.set(it.value());
      }
      if (!known) throw Error(ErrorKind::Parse, "unknown config key '" + it.key() + "'");
    }
  }

 private:
  struct Setter {
    std::string key;
    CLI::Option* opt;
    std::function<void(const Json&)> set;
  };
  std::vector<Setter> setters_;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NumericalBreakdown:
    case ErrorKind::DivergentBound:
    case ErrorKind::IllPosed:
    case ErrorKind::RankDeficient:
    case ErrorKind::NoObliqueProjection:
    case ErrorKind::IsolatedNode:
    case ErrorKind::HypothesisViolated:
      return kNumerical;
    default:
      return kUsage;
  }
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw Error(ErrorKind::InvalidArgument, std::string("missing ") + what);
  if (!fs::is_regular_file(path)) throw Error(ErrorKind::Io, std::string(what) + " not found: " + path);
}

void prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "cannot create output directory " + dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

SolveOptions solve_options(double tol, long max_iter) {
  SolveOptions o;
  o.tol = tol;
  if (max_iter < 0) throw Error(ErrorKind::OutOfRange, "--max-iter must be >= 0");
  o.max_iter = static_cast<Index>(max_iter);
  return o;
}

std::string label(const ExperimentRow& row) {
  if (!row.param || row.method == "alpha_opt" || row.method == "alpha_opt_sq") return row.method;
  return row.method + "(" + format_number(*row.param) + ")";
}

// ---------------------------------------------------------------- magnify

struct MagnifyArgs {
  std::string input;
  std::string out_dir = ".";
  long r = 2;
  std::optional<long> k;
  std::optional<double> k_scale;
  std::vector<double> alpha{0.7};
  std::vector<double> rho;
  std::optional<double> noise_var;
  std::uint64_t seed = 42;
  int experiment = 0;
  std::string k_scale_sweep;
  std::vector<long> max_iter_caps{1, 2};
  double tol = 1e-12;
  long max_iter = 0;
  int threads = 0;
  std::string format = "raw";
};

int run_magnify(const MagnifyArgs& a, std::ostream& out) {
  require_file(a.input, "input image");
  prepare_dir(a.out_dir);
  if (a.format != "raw" && a.format != "plain") {
    throw Error(ErrorKind::InvalidArgument, "--format must be raw or plain");
  }
  const ImageGrid img = read_pgm_file(a.input);

  ExperimentConfig base;
  base.id = a.experiment != 0 ? a.experiment : (a.noise_var ? 2 : 1);
  base.noise_var = a.noise_var;
  base.seed = a.seed;
  base.alphas = a.alpha;
  base.rhos = a.rho;
  base.max_iter_caps.assign(a.max_iter_caps.begin(), a.max_iter_caps.end());
  base.opts = solve_options(a.tol, a.max_iter);
  for (double al : base.alphas) {
    if (!(al >= 0.0 && al <= 1.0)) throw Error(ErrorKind::OutOfRange, "alpha values must lie in [0,1]");
  }

  std::vector<ExperimentRow> rows;
  if (!a.k_scale_sweep.empty()) {
    const std::vector<double> grid = parse_sweep(a.k_scale_sweep);
    std::vector<ExperimentConfig> cells;
    for (double ks : grid) {
      ExperimentConfig c = base;
      c.setup = MagnifySetup::with_k_scale(img.w, a.r, ks);
      cells.push_back(std::move(c));
    }
    std::vector<std::vector<ExperimentRow>> results(cells.size());
    parallel_for(cells.size(), resolve_threads(a.threads), [&](std::size_t i) {
      results[i] = run_experiment(cells[i], img).rows;
    });
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (ExperimentRow row : results[i]) {
        row.method = label(row);
        row.param = grid[i];
        rows.push_back(std::move(row));
      }
    }
  } else {
    if (a.k && a.k_scale) throw Error(ErrorKind::InvalidArgument, "give --k or --k-scale, not both");
    base.setup = a.k ? MagnifySetup::with_k(img.w, a.r, *a.k)
                     : MagnifySetup::with_k_scale(img.w, a.r, a.k_scale.value_or(2.0));
    base.keep_outputs = true;
    const ExperimentReport rep = run_experiment(base, img);
    rows = rep.rows;
    const PgmFormat fmt = a.format == "plain" ? PgmFormat::Plain : PgmFormat::Raw;
    for (const auto& [name, v] : rep.outputs) {
      write_file_atomic(join(a.out_dir, name + ".pgm"), pgm_bytes(ImageGrid(img.w, v), fmt));
    }
    out << "w=" << img.w << " r=" << base.setup.r << " k=" << base.setup.k
        << " k_scale=" << format_number(base.setup.k_scale) << '\n';
    if (rep.alpha_selection) {
      out << "alpha_opt=" << format_number(rep.alpha_selection->alpha)
          << " alpha_opt_sq=" << format_number(rep.alpha_selection->alpha_squared) << '\n';
    }
    if (base.id == 3) {
      out << "solves: blend family " << rep.blend_solves << ", regularized family "
          << rep.regularized_solves << '\n';
    }
    for (std::size_t i = 0; i < rep.g1_vs_g2.size(); ++i) {
      out << "MaxIter=" << base.max_iter_caps[i] << " |g1-g2|/|g2|=" << format_number(rep.g1_vs_g2[i])
          << " |g3-g2|/|g2|=" << format_number(rep.g3_vs_g2[i]) << '\n';
    }
  }

  std::ostringstream csv;
  write_experiment_csv(csv, rows);
  write_file_atomic(join(a.out_dir, "results.csv"), csv.str());

  for (const ExperimentRow& row : rows) {
    out << std::left << std::setw(22) << row.method << std::setw(10)
        << (row.param ? format_number(*row.param) : std::string("-")) << std::right
        << std::fixed << std::setprecision(3) << std::setw(9) << row.psnr_db << " dB"
        << std::setw(6) << row.iterations << " it\n";
    out.unsetf(std::ios::floatfield);
  }
  return kOk;
}

// ---------------------------------------------------------------- graph

struct GraphArgs {
  std::string edges;
  std::string signal;
  std::string samples;
  std::optional<double> omega;
  std::string omega_sweep;
  std::string out_dir = ".";
  std::string spectrum;
  double tol = 1e-12;
  long max_iter = 0;
  int threads = 0;
};

struct GraphCell {
  Index bandwidth = 0;
  UniquenessReport uniq;
  ReconstructionResult rec;
  double rel_error = 0.0;
};

GraphCell graph_cell(const GraphSpectrum& spec, const std::vector<Index>& nodes, const Vector& f,
                     double omega, const SolveOptions& opts) {
  GraphCell c;
  const Projector t = bandlimited_projector(spec, omega);
  c.bandwidth = t.rank();
  c.uniq = uniqueness_check(t, nodes);
  const auto prob = ReconstructionProblem::from_signal(sampling_projector(spec.n(), nodes), t, f);
  c.rec = consistent_reconstruct(prob, opts);
  const double fn = f.norm();
  c.rel_error = fn > 0 ? (c.rec.f_consistent - f).norm() / fn : c.rec.f_consistent.norm();
  return c;
}

int run_graph(const GraphArgs& a, std::ostream& out) {
  require_file(a.edges, "edge list");
  require_file(a.signal, "signal CSV");
  if (a.samples.empty()) throw Error(ErrorKind::InvalidArgument, "missing --samples");
  if (!a.omega && a.omega_sweep.empty()) {
    throw Error(ErrorKind::InvalidArgument, "give --omega or --omega-sweep");
  }
  prepare_dir(a.out_dir);

  const WeightedGraph g = read_edge_list_file(a.edges);
  const Vector f = read_vector_csv_file(a.signal);
  require_same_dim(f.size(), g.n(), "signal length vs node count");
  const std::vector<Index> nodes = parse_nodes(a.samples);
  if (nodes.empty()) throw Error(ErrorKind::EmptySubspace, "no sampled nodes");
  const GraphSpectrum spec = graph_spectrum(g);
  const SolveOptions opts = solve_options(a.tol, a.max_iter);

  if (!a.spectrum.empty()) {
    std::ostringstream ss;
    write_spectrum_csv(ss, spec);
    write_file_atomic(a.spectrum, ss.str());
  }

  if (!a.omega_sweep.empty()) {
    const std::vector<double> grid = parse_sweep(a.omega_sweep);
    std::vector<GraphCell> cells(grid.size());
    parallel_for(grid.size(), resolve_threads(a.threads),
                 [&](std::size_t i) { cells[i] = graph_cell(spec, nodes, f, grid[i], opts); });
    std::ostringstream csv;
    csv << "omega,bandwidth,unique,margin,relative_error,iterations\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const GraphCell& c = cells[i];
      csv << format_number(grid[i]) << ',' << c.bandwidth << ',' << (c.uniq.unique ? 1 : 0) << ','
          << format_number(c.uniq.margin) << ',' << format_number(c.rel_error) << ','
          << c.rec.solver.iterations << '\n';
    }
    write_file_atomic(join(a.out_dir, "graph_sweep.csv"), csv.str());
    out << csv.str();
    return kOk;
  }

  const GraphCell c = graph_cell(spec, nodes, f, *a.omega, opts);
  Json rep;
  rep["nodes"] = g.n();
  Json sampled = Json::array();
  for (Index i : nodes) sampled.push_back(i + 1);
  rep["samples"] = std::move(sampled);
  rep["omega"] = *a.omega;
  rep["bandwidth"] = c.bandwidth;
  rep["uniqueness"] = to_json(c.uniq);
  rep["relative_error"] = c.rel_error;
  rep["reconstruction"] = to_json(c.rec);
  write_file_atomic(join(a.out_dir, "graph_report.json"), rep.dump(2) + "\n");
  write_file_atomic(join(a.out_dir, "reconstruction.csv"), vector_csv(c.rec.f_consistent));
  out << "bandwidth " << c.bandwidth << ", unique " << (c.uniq.unique ? "yes" : "no")
      << ", margin " << format_number(c.uniq.margin) << ", relative error "
      << format_number(c.rel_error) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  bool list = false;
  double perturb = 0.0;
  std::string report;
  std::string filter;
  std::uint64_t seed = VerifyOptions{}.seed;
};

int run_verify_cmd(const VerifyArgs& a, std::ostream& out) {
  if (a.list) {
    for (const CheckInfo& c : list_checks()) out << std::left << std::setw(28) << c.name << c.description << '\n';
    return kOk;
  }
  VerifyOptions opts;
  opts.perturbation = a.perturb;
  opts.filter = a.filter;
  opts.seed = a.seed;
  const VerifyReport rep = run_verify(opts);
  if (rep.checks.empty()) throw Error(ErrorKind::InvalidArgument, "no check matches --filter");
  Json j;
  j["generated_at"] = timestamp_utc();
  j["seed"] = a.seed;
  j["perturbation"] = a.perturb;
  j["all_passed"] = rep.all_passed();
  Json checks = Json::array();
  for (const CheckOutcome& c : rep.checks) {
    out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(28) << c.name << c.detail << '\n';
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  if (!a.report.empty()) write_file_atomic(a.report, j.dump(2) + "\n");
  const auto passed = std::count_if(rep.checks.begin(), rep.checks.end(),
                                    [](const CheckOutcome& c) { return c.passed; });
  out << passed << '/' << rep.checks.size() << " checks passed\n";
  return rep.all_passed() ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- angles

struct AnglesArgs {
  std::string a;
  std::string b;
  std::string out;
};

int run_angles(const AnglesArgs& args, std::ostream& out) {
  require_file(args.a, "basis CSV --a");
  require_file(args.b, "basis CSV --b");
  const SubspaceBasis a = SubspaceBasis::span_of(read_matrix_csv_file(args.a));
  const SubspaceBasis b = SubspaceBasis::span_of(read_matrix_csv_file(args.b));
  const std::string text = to_json(principal_angles(a, b)).dump(2) + "\n";
  if (!args.out.empty()) write_file_atomic(args.out, text);
  out << text;
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Guided signal reconstruction: consistent, guided and blended reconstructions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "guided_recon 0.1.0");

  MagnifyArgs mag;
  std::string mag_config;
  ConfigBinder mag_bind;
  CLI::App* magnify = app.add_subcommand("magnify", "image magnification experiments");
  mag_bind.add(*magnify, "input", mag.input, "input PGM image (square)");
  mag_bind.add(*magnify, "out-dir", mag.out_dir, "directory for images and results.csv");
  mag_bind.add(*magnify, "r", mag.r, "block factor")->check(CLI::PositiveNumber);
  mag_bind.add_optional(*magnify, "k", mag.k, "guiding cutoff per dimension");
  mag_bind.add_optional(*magnify, "k-scale", mag.k_scale, "(w/r)/k, used when --k is absent (default 2)");
  mag_bind.add(*magnify, "alpha", mag.alpha, "blend weights")->delimiter(',');
  mag_bind.add(*magnify, "rho", mag.rho, "regularization weights (experiment 3)")->delimiter(',');
  mag_bind.add_optional(*magnify, "noise-var", mag.noise_var, "Gaussian noise variance on the low-res image");
  mag_bind.add(*magnify, "seed", mag.seed, "noise seed");
  mag_bind.add(*magnify, "experiment", mag.experiment, "1..4; default 1, or 2 with --noise-var")
      ->check(CLI::Range(0, 4));
  mag_bind.add(*magnify, "k-scale-sweep", mag.k_scale_sweep, "start:stop:step grid of k_scale values");
  mag_bind.add(*magnify, "max-iter-caps", mag.max_iter_caps, "experiment 4 iteration caps")->delimiter(',');
  mag_bind.add(*magnify, "tol", mag.tol, "CG relative residual tolerance");
  mag_bind.add(*magnify, "max-iter", mag.max_iter, "CG iteration cap (0: 10 * dim)");
  mag_bind.add(*magnify, "threads", mag.threads, "sweep workers (GUIDED_RECON_THREADS wins)");
  mag_bind.add(*magnify, "format", mag.format, "PGM output: raw (P5) or plain (P2)");
  magnify->add_option("--config", mag_config, "JSON file with defaults for any flag");

  GraphArgs gr;
  std::string gr_config;
  ConfigBinder gr_bind;
  CLI::App* graph = app.add_subcommand("graph", "bandlimited graph signal reconstruction");
  gr_bind.add(*graph, "edges", gr.edges, "edge list, 'i j w' per line, 1-indexed");
  gr_bind.add(*graph, "signal", gr.signal, "full signal as vector CSV");
  gr_bind.add(*graph, "samples", gr.samples, "sampled nodes, e.g. 1,2,5-9");
  gr_bind.add_optional(*graph, "omega", gr.omega, "bandwidth");
  gr_bind.add(*graph, "omega-sweep", gr.omega_sweep, "start:stop:step grid of bandwidths");
  gr_bind.add(*graph, "out-dir", gr.out_dir, "output directory");
  gr_bind.add(*graph, "spectrum", gr.spectrum, "also write index,eigenvalue CSV here");
  gr_bind.add(*graph, "tol", gr.tol, "CG relative residual tolerance");
  gr_bind.add(*graph, "max-iter", gr.max_iter, "CG iteration cap (0: 10 * dim)");
  gr_bind.add(*graph, "threads", gr.threads, "sweep workers (GUIDED_RECON_THREADS wins)");
  graph->add_option("--config", gr_config, "JSON file with defaults for any flag");

  VerifyArgs ver;
  CLI::App* verify = app.add_subcommand("verify", "run the worked examples and property checks");
  verify->add_flag("--list", ver.list, "list checks and exit");
  verify->add_option("--perturb", ver.perturb, "shift every expected value (harness self-test)");
  verify->add_option("--report", ver.report, "write a JSON report here");
  verify->add_option("--filter", ver.filter, "only run checks whose name contains this");
  verify->add_option("--seed", ver.seed, "seed for the randomized checks");

  AnglesArgs ang;
  CLI::App* angles = app.add_subcommand("angles", "principal angles between two column spans");
  angles->add_option("--a", ang.a, "first basis CSV (columns span the subspace)")->required();
  angles->add_option("--b", ang.b, "second basis CSV")->required();
  angles->add_option("--out", ang.out, "also write the JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int rc = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*magnify) {
      mag_bind.apply(mag_config);
      return run_magnify(mag, out);
    }
    if (*graph) {
      gr_bind.apply(gr_config);
      return run_graph(gr, out);
    }
    if (*verify) return run_verify_cmd(ver, out);
    if (*angles) return run_angles(ang, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace guided::cli
