// trb: generate test instances, run the trust-region bundle method, diagnose.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "trb/diagnostics.hpp"
#include "trb/driver.hpp"
#include "trb/problems.hpp"
#include "trb/run_io.hpp"

namespace fs = std::filesystem;
using namespace trb;

namespace {

constexpr int kUsage = 2;
constexpr int kRuntime = 1;

struct UsageError : Error {
  using Error::Error;
};

std::string default_out_dir() {
  const char* env = std::getenv("TRB_OUT_DIR");
  return env && *env ? env : ".";
}

Point parse_point(const std::string& text, Eigen::Index n) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("cannot parse coordinate '" + tok + "'");
    }
  }
  if (vals.size() == 1) return Point::Constant(n, vals[0]);
  if (static_cast<Eigen::Index>(vals.size()) != n) {
    throw UsageError("point has " + std::to_string(vals.size()) + " coordinates, instance has " +
                     std::to_string(n));
  }
  return Eigen::Map<const Vector>(vals.data(), n);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

// ---- generate

struct GenerateArgs {
  std::string family = "toy-quadratic";
  int n = 1;
  int m = 1;
  std::uint64_t seed = 0;
  int sine_power = 1;
  bool reference = false;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  Family fam;
  try {
    fam = family_from_name(a.family);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  ProblemInstance inst;
  try {
    inst = generate(fam, a.n, a.m, a.seed, a.sine_power);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (a.reference && !inst.x_star) {
    inst.x_star = compute_reference_minimizer(inst);
    inst.x_star_is_reference = true;
    inst.f_star = oracle_of(inst)->value(*inst.x_star);
  }
  save_instance(a.out, inst);
  std::cout << "wrote " << family_name(inst.family) << " instance (n=" << inst.n << ", m=" << inst.m
            << ", seed=" << inst.seed << ") to " << a.out << "\n";
  return 0;
}

// ---- run

struct RunArgs {
  std::string instance;
  std::string manifest;
  std::string out_dir;
  int q = 1, p = 1, jmax = 5;
  double delta0 = 1.0, delta_ratio = 0.1, tau = 1e-5, tau_ratio = 0.1, sigma = 0.5, cap = 0.1;
  std::string tau_schedule = "constant";
  std::size_t memory = 100;
  int max_inner = 10000, max_builder_iter = 200;
  std::uint64_t seed = 0;
  std::string x0;
  double remainder_constant = 0.0;
};

int cmd_run(const RunArgs& a, const CLI::App& sub) {
  RunConfig cfg;
  std::string instance_path = a.instance;
  if (!a.manifest.empty()) {
    std::ifstream in(a.manifest);
    if (!in) throw UsageError("cannot read manifest " + a.manifest);
    std::stringstream buf;
    buf << in.rdbuf();
    ManifestConfig mc = read_manifest(buf.str());
    cfg = mc.config;
    if (instance_path.empty()) instance_path = mc.instance_path;
  } else {
    cfg.q = a.q;
    cfg.p = a.p;
    cfg.j_max = a.jmax;
    cfg.delta0 = a.delta0;
    cfg.delta_ratio = a.delta_ratio;
    cfg.tau = a.tau;
    cfg.tau_ratio = a.tau_ratio;
    if (a.tau_schedule == "constant") {
      cfg.tau_schedule = TauSchedule::Constant;
    } else if (a.tau_schedule == "vanishing") {
      cfg.tau_schedule = TauSchedule::Vanishing;
    } else {
      throw UsageError("--tau-schedule must be constant or vanishing");
    }
    cfg.sigma = a.sigma;
    cfg.cap = a.cap;
    cfg.memory_capacity = a.memory;
    cfg.max_inner = a.max_inner;
    cfg.max_builder_iter = a.max_builder_iter;
    cfg.seed = a.seed;
    cfg.remainder_constant = a.remainder_constant;
  }
  if (instance_path.empty()) throw UsageError("run: --instance is required");
  const ProblemInstance inst = load_instance(instance_path);
  const auto oracle = oracle_of(inst);
  if (a.manifest.empty() || sub.count("--x0")) {
    cfg.x0 = a.x0.empty() ? default_start(inst) : parse_point(a.x0, inst.n);
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (cfg.x0.size() != inst.n) throw UsageError("x0 dimension does not match the instance");

  const fs::path dir = a.out_dir.empty() ? default_out_dir() : a.out_dir;
  fs::create_directories(dir);
  ManifestInfo info;
  info.instance_path = instance_path;
  info.family = family_name(inst.family);
  info.instance_seed = inst.seed;

  RunResult run;
  int code = 0;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    run = global_solve(*oracle, cfg, inst.x_star);
  } catch (const DriverError& e) {
    run = e.partial();
    info.status = e.what();
    code = kRuntime;
    std::cerr << "error: " << e.what() << " (partial trace written)\n";
  }
  info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<EnclosureLevel> encl;
  if (inst.x_star) encl = enclosure_report(run, *inst.x_star, cfg.norm());

  std::ostringstream csv, handoff;
  write_iterates_csv(csv, run);
  write_handoff(handoff, run);
  write_file(dir / "iterates.csv", csv.str());
  write_file(dir / "handoff.txt", handoff.str());
  write_file(dir / "manifest.json", manifest_json(cfg, info, run, encl));

  std::cout << "levels " << run.levels.size() << ", oracle calls " << run.oracle_calls
            << ", final f " << format_double(run.final_value) << "\n";
  for (const auto& e : encl) {
    std::cout << "  j=" << e.j << " delta=" << e.delta << " dist=" << e.distance
              << (e.enclosed ? " enclosed" : " not enclosed") << "\n";
  }
  std::cout << "outputs in " << dir.string() << "\n";
  return code;
}

// ---- diagnose

struct DiagnoseArgs {
  std::string instance;
  std::string mode;
  std::string out_dir;
  std::string x;
  double delta = 0.1;
  int p = 1, q = 1;
  int samples = 200;
  std::uint64_t seed = 0;
  double box_radius = 0.2;
  double epsilon = 1e-2;
  double lo = -0.2, hi = 0.2;
  int points = 2001;
  std::string norm = "euclidean";
};

int cmd_diagnose(const DiagnoseArgs& a) {
  const ProblemInstance inst = load_instance(a.instance);
  const auto oracle = oracle_of(inst);
  const fs::path dir = a.out_dir.empty() ? default_out_dir() : a.out_dir;
  fs::create_directories(dir);
  NormKind kind;
  try {
    kind = norm_kind_from_string(a.norm);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  auto point_arg = [&]() -> Point {
    if (!a.x.empty()) return parse_point(a.x, inst.n);
    return default_start(inst);
  };

  if (a.mode == "lambda") {
    if (inst.n > 3) throw UsageError("lambda mode needs dimension <= 3");
    const LambdaEstimate est = lambda_p(*oracle, point_arg(), a.delta, a.p, kind);
    std::ostringstream csv;
    csv << "delta,p,lambda,f_x,f_zstar";
    for (Eigen::Index k = 0; k < inst.n; ++k) csv << ",z" << k + 1;
    csv << "\n" << format_double(est.delta) << ',' << est.p << ',' << format_double(est.lambda_value)
        << ',' << format_double(oracle->value(est.x)) << ',' << format_double(oracle->value(est.z_star));
    for (Eigen::Index k = 0; k < inst.n; ++k) csv << ',' << format_double(est.z_star(k));
    csv << "\n";
    write_file(dir / "lambda.csv", csv.str());
    std::cout << "lambda_" << a.p << " = " << format_double(est.lambda_value) << " (" << to_string(est.method)
              << ")\n";
    return 0;
  }
  if (a.mode == "property-p") {
    if (inst.n > 2) throw UsageError("property-p mode needs dimension <= 2");
    if (!inst.x_star) throw UsageError("property-p mode needs an instance with a minimizer");
    ProbeOptions opt;
    opt.box_radius = a.box_radius;
    opt.num_samples = a.samples;
    opt.seed = a.seed;
    opt.norm = kind;
    const ProbeResult res = property_p_probe(*oracle, *inst.x_star, a.p, opt);
    std::ostringstream csv;
    for (Eigen::Index k = 0; k < inst.n; ++k) csv << 'x' << k + 1 << ',';
    csv << "delta,lambda,local_min\n";
    for (const auto& s : res.samples) {
      for (Eigen::Index k = 0; k < inst.n; ++k) csv << format_double(s.x(k)) << ',';
      csv << format_double(s.delta) << ',' << format_double(s.lambda) << ',' << (s.from_local_min ? 1 : 0)
          << "\n";
    }
    write_file(dir / "property_p.csv", csv.str());
    std::cout << "empirical inf of lambda_" << a.p << ": " << format_double(res.empirical_inf) << "\n";
    for (const auto& w : res.witnesses) {
      std::cout << "  x=" << w.x.transpose() << " delta=" << w.delta << " lambda=" << w.lambda
                << (w.from_local_min ? " (local min)" : "") << "\n";
    }
    return 0;
  }
  if (a.mode == "remainder-order") {
    if (a.q < 1 || a.q > 2) throw UsageError("--q must be 1 or 2");
    RemainderOptions opt;
    opt.q = a.q;
    opt.samples_per_delta = a.samples;
    opt.seed = a.seed;
    const RemainderEstimate est =
        remainder_constant_estimator(*oracle, point_arg(), {1e-1, 1e-2, 1e-3, 1e-4}, opt);
    std::ostringstream csv;
    csv << "delta,max_remainder\n";
    for (std::size_t k = 0; k < est.deltas.size(); ++k) {
      csv << format_double(est.deltas[k]) << ',' << format_double(est.max_remainder[k]) << "\n";
    }
    write_file(dir / "remainder.csv", csv.str());
    std::cout << "K_hat = " << format_double(est.k_hat) << ", slope = " << format_double(est.slope)
              << (est.proxy ? " (f - T proxy: branch values unavailable)" : "") << "\n";
    return 0;
  }
  if (a.mode == "criticality") {
    const double value =
        criticality_certificate(*oracle, point_arg(), a.epsilon, a.samples, a.seed, kind);
    write_file(dir / "criticality.csv", "epsilon,certificate\n" + format_double(a.epsilon) + "," +
                                            format_double(value) + "\n");
    std::cout << "min-norm sampled gradient: " << format_double(value) << "\n";
    return 0;
  }
  if (a.mode == "plotdata") {
    if (inst.n != 1) throw UsageError("plotdata mode needs a one-dimensional instance");
    std::ostringstream csv, script;
    write_plotdata(csv, *oracle, a.lo, a.hi, a.points);
    write_plot_script(script, "plotdata.csv", family_name(inst.family));
    write_file(dir / "plotdata.csv", csv.str());
    write_file(dir / "plot.gp", script.str());
    std::cout << "wrote plotdata.csv and plot.gp to " << dir.string() << "\n";
    return 0;
  }
  throw UsageError("unknown mode '" + a.mode + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trust-region bundle method for nonsmooth optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "write a seeded test instance");
  gen->add_option("--family", ga.family,
                  "max-quartic, sum-abs-quartic, max-eig, sine-growth, toy-quadratic, abs-value")
      ->capture_default_str();
  gen->add_option("--n", ga.n, "dimension")->capture_default_str();
  gen->add_option("--m", ga.m, "number of pieces (matrix size for max-eig)")->capture_default_str();
  gen->add_option("--seed", ga.seed)->capture_default_str();
  gen->add_option("--sine-power", ga.sine_power, "p for sine-growth")->capture_default_str();
  gen->add_flag("--reference", ga.reference, "compute a reference minimizer when none is known");
  gen->add_option("--out", ga.out, "instance file")->required();

  RunArgs ra;
  auto* run = app.add_subcommand("run", "run the method on an instance");
  run->add_option("--instance", ra.instance);
  run->add_option("--manifest", ra.manifest, "reproduce the config of a previous run");
  run->add_option("--q", ra.q)->capture_default_str();
  run->add_option("--p", ra.p)->capture_default_str();
  run->add_option("--jmax", ra.jmax)->capture_default_str();
  run->add_option("--delta0", ra.delta0)->capture_default_str();
  run->add_option("--delta-ratio", ra.delta_ratio)->capture_default_str();
  run->add_option("--tau", ra.tau)->capture_default_str();
  run->add_option("--tau-schedule", ra.tau_schedule, "constant or vanishing")->capture_default_str();
  run->add_option("--tau-ratio", ra.tau_ratio)->capture_default_str();
  run->add_option("--sigma", ra.sigma)->capture_default_str();
  run->add_option("--cap", ra.cap)->capture_default_str();
  run->add_option("--memory", ra.memory)->capture_default_str();
  run->add_option("--max-inner", ra.max_inner)->capture_default_str();
  run->add_option("--max-builder-iter", ra.max_builder_iter)->capture_default_str();
  run->add_option("--seed", ra.seed)->capture_default_str();
  run->add_option("--x0", ra.x0, "start point, comma separated or one value for all");
  run->add_option("--remainder-constant", ra.remainder_constant)->capture_default_str();
  run->add_option("--out-dir", ra.out_dir, "defaults to $TRB_OUT_DIR or .");

  DiagnoseArgs da;
  auto* diag = app.add_subcommand("diagnose", "brute-force diagnostics");
  diag->add_option("--instance", da.instance)->required();
  diag->add_option("--mode", da.mode, "lambda, property-p, remainder-order, criticality, plotdata")
      ->required();
  diag->add_option("--x", da.x, "point, comma separated");
  diag->add_option("--delta", da.delta)->capture_default_str();
  diag->add_option("--p", da.p)->capture_default_str();
  diag->add_option("--q", da.q)->capture_default_str();
  diag->add_option("--samples", da.samples)->capture_default_str();
  diag->add_option("--seed", da.seed)->capture_default_str();
  diag->add_option("--box-radius", da.box_radius)->capture_default_str();
  diag->add_option("--epsilon", da.epsilon)->capture_default_str();
  diag->add_option("--lo", da.lo)->capture_default_str();
  diag->add_option("--hi", da.hi)->capture_default_str();
  diag->add_option("--points", da.points)->capture_default_str();
  diag->add_option("--norm", da.norm, "euclidean or max")->capture_default_str();
  diag->add_option("--out-dir", da.out_dir, "defaults to $TRB_OUT_DIR or .");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) return cmd_generate(ga);
    if (*run) return cmd_run(ra, *run);
    return cmd_diagnose(da);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
