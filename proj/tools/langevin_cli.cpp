// Command-line front end: sampling, verification suites, phi tables, and
// envelope export. JSON config in, CSV/JSON out. Flag precedence is
// flags > config file > defaults.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "langevin/bounds.hpp"
#include "langevin/io.hpp"
#include "langevin/lyapunov.hpp"
#include "langevin/potential.hpp"
#include "langevin/sampler.hpp"
#include "langevin/verify.hpp"

namespace {

using json = nlohmann::json;
using namespace langevin;

namespace fs = std::filesystem;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

template <typename T>
T require(const json& j, const char* block, const char* key) {
  if (!j.contains(key))
    throw ConfigError(std::string("config: ") + block + "." + key + " is required");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

potential::PotentialSpec parse_potential(const json& cfg) {
  if (!cfg.contains("potential"))
    throw ConfigError("config: missing 'potential' block");
  const json& pb = cfg.at("potential");
  const auto kind = require<std::string>(pb, "potential", "kind");
  if (kind == "quadratic") {
    std::vector<double> curv;
    if (pb.contains("curvatures")) {
      curv = get_or(pb, "curvatures", std::vector<double>{});
    } else {
      const double rho = require<double>(pb, "potential", "rho");
      const int dim = require<int>(pb, "potential", "dim");
      if (dim < 1) throw ConfigError("config: potential.dim must be >= 1");
      curv.assign(static_cast<std::size_t>(dim), rho);
    }
    if (curv.empty()) throw ConfigError("config: potential.curvatures is empty");
    Vec c = Eigen::Map<const Vec>(curv.data(), static_cast<Index>(curv.size()));
    return potential::make_quadratic(c.size(), c);
  }
  if (kind == "huber") {
    const double beta = require<double>(pb, "potential", "beta");
    const int dim = require<int>(pb, "potential", "dim");
    return potential::make_huber_like(beta, dim);
  }
  throw ConfigError("config: unknown potential kind '" + kind +
                    "' (expected quadratic or huber)");
}

sampler::ChainConfig parse_chain(const json& cfg, const potential::PotentialSpec& p,
                                 const CommonOpts& opts) {
  const json cb = cfg.contains("chain") ? cfg.at("chain") : json::object();
  sampler::ChainConfig c;
  c.eta = require<double>(cb, "chain", "eta");
  c.dim = get_or(cb, "dim", static_cast<int>(p.dim));
  if (c.dim != p.dim)
    throw ConfigError("config: chain.dim does not match the potential dimension");
  c.n_chains = get_or<std::int64_t>(cb, "n_chains", 10000);
  c.record_every = get_or<std::int64_t>(cb, "record_every", 1);
  c.records_per_chain = get_or<std::int64_t>(cb, "records_per_chain", 1);
  c.seed = opts.seed_given ? opts.seed : get_or<std::uint64_t>(cb, "seed", 0);
  if (cb.contains("burn_in")) {
    c.burn_in = require<std::int64_t>(cb, "chain", "burn_in");
  } else if (p.m > 0.0) {
    c.burn_in = sampler::default_burn_in(p, c.eta);
  } else {
    throw ConfigError(
        "config: chain.burn_in is required for m = 0 potentials (no automatic "
        "mixing rate exists; choose it deliberately)");
  }
  if (cb.contains("init")) {
    const auto v = require<std::vector<double>>(cb, "chain", "init");
    c.init = Eigen::Map<const Vec>(v.data(), static_cast<Index>(v.size()));
  }
  return c;
}

double chain_eta(const json& cfg) {
  const json cb = cfg.contains("chain") ? cfg.at("chain") : json::object();
  return require<double>(cb, "chain", "eta");
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << j.dump(2) << '\n';
}

std::string out_path(const CommonOpts& opts, const char* name) {
  fs::create_directories(opts.out_dir);
  return (fs::path(opts.out_dir) / name).string();
}

bounds::ConcentrationEnvelope build_subexp(const potential::PotentialSpec& p,
                                           double eta, const json& vb,
                                           std::uint64_t seed) {
  potential::SuperlinearFit fit{};
  if (p.kind == potential::Kind::HuberLike) {
    fit = potential::exact_superlinear(p);
  } else {
    const double probe = get_or(vb, "probe_radius", 100.0);
    const int ndir = get_or(vb, "n_directions", 16);
    fit = potential::fit_superlinear(p, probe, ndir, seed);
  }
  const double r0 = lyapunov::estimate_r0(static_cast<int>(p.dim));
  return bounds::subexp_envelope(static_cast<int>(p.dim), eta, fit, r0);
}

json tail_report_json(const verify::TailReport& rep, const char* kind,
                      std::uint64_t seed, const std::string& digest) {
  json j;
  j["kind"] = kind;
  j["seed"] = seed;
  j["config_digest"] = digest;
  j["deltas"] = rep.deltas;
  j["radii"] = rep.radii;
  j["empirical_p"] = rep.empirical_p;
  j["ci_upper"] = rep.ci_upper;
  std::vector<std::string> verdicts;
  for (bool v : rep.verdicts) verdicts.push_back(v ? "PASS" : "FAIL");
  j["verdicts"] = verdicts;
  if (!rep.caveat.empty()) j["caveat"] = rep.caveat;
  j["pass"] = rep.all_pass();
  return j;
}

void print_tail_report(const verify::TailReport& rep) {
  for (std::size_t i = 0; i < rep.deltas.size(); ++i)
    std::printf("  delta=%-8g radius=%-12.6g empirical=%-10.4g ci99=%-10.4g %s\n",
                rep.deltas[i], rep.radii[i], rep.empirical_p[i], rep.ci_upper[i],
                rep.verdicts[i] ? "PASS" : "FAIL");
  if (!rep.caveat.empty()) std::printf("  caveat: %s\n", rep.caveat.c_str());
}

int cmd_sample(const json& cfg, const CommonOpts& opts) {
  const auto p = parse_potential(cfg);
  const auto chain = parse_chain(cfg, p, opts);
  const auto t0 = std::chrono::steady_clock::now();
  const auto ens = sampler::run_ensemble(p, chain, opts.threads);
  const double dt = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0).count();
  io::write_samples_csv(out_path(opts, "samples.csv"), ens);
  io::write_meta_json(out_path(opts, "meta.json"), ens, dt);
  std::printf("wrote %lld rows to %s (%.2fs)\n",
              static_cast<long long>(ens.samples.rows()),
              out_path(opts, "samples.csv").c_str(), dt);
  return 0;
}

int cmd_verify(const json& cfg, const CommonOpts& opts, const std::string& kind,
               double radius_scale) {
  const auto p = parse_potential(cfg);
  const json vb = cfg.contains("verify") ? cfg.at("verify") : json::object();
  const auto deltas = get_or(vb, "deltas", std::vector<double>{0.1, 0.01});
  const double rscale =
      radius_scale > 0.0 ? radius_scale : get_or(vb, "radius_scale", 1.0);

  if (kind == "lemmas") {
    const double eta = chain_eta(cfg);
    const auto n_points = get_or<std::int64_t>(vb, "n_points", 2000);
    const std::uint64_t seed =
        opts.seed_given ? opts.seed
                        : get_or<std::uint64_t>(
                              cfg.contains("chain") ? cfg.at("chain") : json::object(),
                              "seed", 0);
    const auto rep = verify::sweep_lemma_inequalities(p, eta, n_points, seed);
    io::write_sweep_report_csv(out_path(opts, "sweep_report.csv"), rep, p.digest());
    json j;
    j["kind"] = "lemmas";
    j["seed"] = rep.seed;
    j["pass"] = rep.pass;
    for (const auto& e : rep.entries) {
      j["max_violation"][e.name] = e.max_violation;
      std::printf("  %-20s max relative violation %.3e over %lld points\n",
                  e.name.c_str(), e.max_violation,
                  static_cast<long long>(e.n_points));
    }
    write_json_file(out_path(opts, "verify_summary.json"), j);
    std::printf("lemmas: %s\n", rep.pass ? "PASS" : "FAIL");
    return rep.pass ? 0 : 4;
  }

  // Applicability gates come before chain parsing so the diagnostic names the
  // actual mismatch, not a missing burn_in.
  if (kind == "subgaussian" && !(p.m > 0.0))
    throw InapplicableError("verify subgaussian: requires m>0 (strong convexity)");
  if (kind == "exact1d" && (p.kind != potential::Kind::Quadratic || p.dim != 1))
    throw InapplicableError(
        "verify exact1d: the exact stationary law exists only for quadratic "
        "potentials in dimension 1");

  const auto chain = parse_chain(cfg, p, opts);
  const std::string digest = io::config_digest(chain, p.digest());

  if (kind == "subgaussian") {
    const auto ens = sampler::run_ensemble(p, chain, opts.threads);
    const double c = bounds::contraction_coefficient(p.m, p.M, chain.eta);
    const bounds::ConcentrationEnvelope env =
        bounds::subgaussian_envelope(chain.dim, chain.eta, c);
    const auto rep = verify::check_tail(ens, env, deltas, rscale);
    io::write_tail_report_csv(out_path(opts, "tail_report.csv"), rep, chain.seed,
                              digest);
    write_json_file(out_path(opts, "verify_summary.json"),
                    tail_report_json(rep, "subgaussian", chain.seed, digest));
    print_tail_report(rep);
    std::printf("subgaussian tail: %s\n", rep.all_pass() ? "PASS" : "FAIL");
    return rep.all_pass() ? 0 : 4;
  }

  if (kind == "subexponential") {
    if (chain.eta > 1.0 / p.M)
      throw ConfigError(
          "verify subexponential: requires eta <= 1/M (progress condition)");
    const auto ens = sampler::run_ensemble(p, chain, opts.threads);
    const auto env = build_subexp(p, chain.eta, vb, chain.seed);
    const auto rep = verify::check_tail(ens, env, deltas, rscale);
    io::write_tail_report_csv(out_path(opts, "tail_report.csv"), rep, chain.seed,
                              digest);
    write_json_file(out_path(opts, "verify_summary.json"),
                    tail_report_json(rep, "subexponential", chain.seed, digest));
    print_tail_report(rep);
    std::printf("subexponential tail: %s\n", rep.all_pass() ? "PASS" : "FAIL");
    return rep.all_pass() ? 0 : 4;
  }

  if (kind == "exact1d") {
    const auto ens = sampler::run_ensemble(p, chain, opts.threads);
    const auto ks = verify::ks_check_1d_quadratic(ens, p.curvatures[0]);
    json j;
    j["kind"] = "exact1d";
    j["seed"] = chain.seed;
    j["config_digest"] = digest;
    j["ks_statistic"] = ks.statistic;
    j["ks_critical"] = ks.critical;
    j["pass"] = ks.pass;
    write_json_file(out_path(opts, "verify_summary.json"), j);
    std::printf("exact1d: KS %.5f vs critical %.5f -> %s\n", ks.statistic,
                ks.critical, ks.pass ? "PASS" : "FAIL");
    return ks.pass ? 0 : 4;
  }

  if (kind == "mgf") {
    const auto ens = sampler::run_ensemble(p, chain, opts.threads);
    std::vector<io::MgfRow> rows;
    json j;
    j["kind"] = "mgf";
    j["seed"] = chain.seed;
    j["config_digest"] = digest;
    if (p.m > 0.0) {
      const double c = bounds::contraction_coefficient(p.m, p.M, chain.eta);
      const auto lambdas =
          get_or(vb, "lambdas", std::vector<double>{0.25, 0.5, 1.0});
      for (double lam : lambdas) {
        const double bound = bounds::stationary_mgf_bound_sc(chain.eta, c, lam);
        rows.push_back({lam, verify::check_stationary_mgf(ens, lam, bound)});
      }
    } else {
      // Convex case: the theoretical bound is specific to lambda = beta/16.
      const auto env_var = build_subexp(p, chain.eta, vb, chain.seed);
      const auto& env = std::get<bounds::SubExponentialEnvelope>(env_var);
      const double bound = bounds::stationary_mgf_bound_convex(env);
      rows.push_back(
          {env.lambda, verify::check_stationary_mgf(ens, env.lambda, bound)});
      j["caveat"] =
          "burn-in was user-chosen (m = 0 gives no mixing rate); stationarity "
          "is assumed, not certified";
    }
    bool pass = true;
    json jrows = json::array();
    for (const auto& r : rows) {
      pass = pass && r.result.pass;
      json e;
      e["lambda"] = r.lambda;
      e["empirical_log_mean"] = r.result.empirical_log_mean;
      e["log_bound"] = r.result.log_bound;
      e["bootstrap_se"] = r.result.bootstrap_se;
      e["pass"] = r.result.pass;
      jrows.push_back(e);
      std::printf("  lambda=%-8g empirical=%-12.6g bound=%-12.6g se=%-10.3g %s\n",
                  r.lambda, r.result.empirical_log_mean, r.result.log_bound,
                  r.result.bootstrap_se, r.result.pass ? "PASS" : "FAIL");
    }
    j["rows"] = jrows;
    j["pass"] = pass;
    io::write_mgf_report_csv(out_path(opts, "mgf_report.csv"), rows, chain.seed,
                             digest);
    write_json_file(out_path(opts, "verify_summary.json"), j);
    std::printf("mgf: %s\n", pass ? "PASS" : "FAIL");
    return pass ? 0 : 4;
  }

  throw ConfigError("verify: unknown kind '" + kind + "'");
}

int cmd_lyapunov(const json& cfg, const CommonOpts& opts, int d, double lambda,
                 double z_max, int steps, bool oracle, const CLI::App* sub) {
  const json lb = cfg.contains("lyapunov") ? cfg.at("lyapunov") : json::object();
  if (!sub->count("--dim")) d = get_or(lb, "d", d);
  if (!sub->count("--lambda")) lambda = get_or(lb, "lambda", lambda);
  if (!sub->count("--z-max")) z_max = get_or(lb, "z_max", z_max);
  if (!sub->count("--steps")) steps = get_or(lb, "steps", steps);
  if (d < 1) throw ConfigError("lyapunov: dim must be >= 1");
  if (!(lambda > 0.0)) throw ConfigError("lyapunov: lambda must be positive");
  if (z_max < 0.0) throw ConfigError("lyapunov: z_max must be >= 0");
  if (steps < 1) throw ConfigError("lyapunov: steps must be >= 1");
  if (oracle && d == 1)
    throw ConfigError("lyapunov: the quadrature oracle is undefined for d=1");

  std::vector<io::LyapunovRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (z_max == 0.0) {
    io::LyapunovRow r{d, 0.0, 0.0, nan, std::nullopt};
    if (oracle) r.oracle = lyapunov::phi_quadrature_oracle(d, 0.0);
    rows.push_back(r);
  } else {
    const double lo = std::min(1e-3, z_max);
    for (int i = 0; i < steps; ++i) {
      const double t = steps == 1 ? 1.0 : static_cast<double>(i) / (steps - 1);
      const double z = lambda * lo * std::pow(z_max / lo, t);
      io::LyapunovRow r{d, z, lyapunov::log_phi(d, z),
                        lyapunov::log_derivative(d, z), std::nullopt};
      if (oracle) r.oracle = lyapunov::phi_quadrature_oracle(d, z);
      rows.push_back(r);
    }
  }
  io::write_lyapunov_csv(out_path(opts, "lyapunov.csv"), rows, opts.seed);
  if (oracle) {
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(r.log_phi - *r.oracle));
    std::printf("max |log_phi - oracle| = %.3e over %zu rows\n", worst, rows.size());
  }
  std::printf("wrote %zu rows to %s\n", rows.size(),
              out_path(opts, "lyapunov.csv").c_str());
  return 0;
}

int cmd_envelope(const json& cfg, const CommonOpts& opts, bool both) {
  const auto p = parse_potential(cfg);
  const double eta = chain_eta(cfg);
  const json vb = cfg.contains("verify") ? cfg.at("verify") : json::object();
  const auto deltas = get_or(vb, "deltas", std::vector<double>{0.3, 0.1, 0.01});

  sampler::ChainConfig stub;  // digest provenance for the export
  stub.eta = eta;
  stub.dim = static_cast<int>(p.dim);
  stub.seed = opts.seed;
  const std::string digest = io::config_digest(stub, p.digest());

  std::vector<bounds::ConcentrationEnvelope> envs;
  if (p.m > 0.0) {
    const double c = bounds::contraction_coefficient(p.m, p.M, eta);
    envs.push_back(bounds::subgaussian_envelope(stub.dim, eta, c));
    if (both) envs.push_back(build_subexp(p, eta, vb, opts.seed));
  } else {
    envs.push_back(build_subexp(p, eta, vb, opts.seed));
  }

  io::write_envelope_csv(out_path(opts, "envelope.csv"), envs, deltas, opts.seed,
                         digest);
  io::write_envelope_json(out_path(opts, "envelope.json"), envs, deltas,
                          opts.seed, digest);
  for (const auto& env : envs)
    for (double dl : deltas)
      std::printf("  %-16s delta=%-8g radius=%.6g\n",
                  bounds::envelope_kind_name(env), dl,
                  bounds::envelope_radius(env, dl));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Langevin chain sampler and stationary-tail verification toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON config file");
    sub->add_option("--out", opts.out_dir, "output directory (default .)");
    sub->add_option("--seed", opts.seed, "master seed (overrides config)");
    sub->add_option("--threads", opts.threads, "worker threads, 0 = hardware");
  };

  auto* sample = app.add_subcommand("sample", "run chains, write samples.csv");
  add_common(sample);

  auto* verify_cmd = app.add_subcommand("verify", "confront samples with theory");
  add_common(verify_cmd);
  std::string kind;
  verify_cmd
      ->add_option("--kind", kind,
                   "subgaussian | subexponential | exact1d | lemmas | mgf")
      ->required()
      ->check(CLI::IsMember(
          {"subgaussian", "subexponential", "exact1d", "lemmas", "mgf"}));
  double radius_scale = 0.0;  // 0 = take from config (default 1)
  verify_cmd->add_option("--radius-scale", radius_scale,
                         "shrink tail radii by this factor (sensitivity check)");

  auto* lyap = app.add_subcommand("lyapunov", "tabulate log phi and its derivative");
  add_common(lyap);
  int ly_d = 3, ly_steps = 40;
  double ly_lambda = 1.0, ly_zmax = 100.0;
  bool ly_oracle = false;
  lyap->add_option("--dim", ly_d, "dimension d >= 1");
  lyap->add_option("--lambda", ly_lambda, "scale factor applied to the z grid");
  lyap->add_option("--z-max", ly_zmax, "largest grid value (0 = single z=0 row)");
  lyap->add_option("--steps", ly_steps, "number of log-spaced rows");
  lyap->add_flag("--oracle", ly_oracle, "add a quadrature-oracle column (d >= 2)");

  auto* env_cmd = app.add_subcommand("envelope", "export tail envelope CSV/JSON");
  add_common(env_cmd);
  bool both = false;
  env_cmd->add_flag("--both", both,
                    "with m > 0, also export the convex-case envelope");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  for (auto* sub : {sample, verify_cmd, lyap, env_cmd})
    if (sub->parsed() && sub->count("--seed")) opts.seed_given = true;

  try {
    const json cfg = load_config(opts.config_path);
    if (sample->parsed()) return cmd_sample(cfg, opts);
    if (verify_cmd->parsed()) return cmd_verify(cfg, opts, kind, radius_scale);
    if (lyap->parsed())
      return cmd_lyapunov(cfg, opts, ly_d, ly_lambda, ly_zmax, ly_steps, ly_oracle,
                          lyap);
    if (env_cmd->parsed()) return cmd_envelope(cfg, opts, both);
    return 2;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "error: %s (chain %lld, iteration %lld)\n", e.what(),
                 static_cast<long long>(e.chain),
                 static_cast<long long>(e.iteration));
    return 3;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const InapplicableError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const UnavailableError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const InvalidParameterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const FitFailureError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SearchRangeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
