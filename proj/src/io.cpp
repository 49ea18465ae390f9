#include "langevin/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace langevin::io {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw Error("cannot open output file: " + path);
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json envelope_constants(const bounds::ConcentrationEnvelope& env) {
  json j;
  j["kind"] = bounds::envelope_kind_name(env);
  if (const auto* sg = std::get_if<bounds::SubGaussianEnvelope>(&env)) {
    j["dim"] = sg->dim;
    j["eta"] = sg->eta;
    j["c"] = sg->c;
    j["variance_proxy"] = sg->variance_proxy;
  } else {
    const auto& se = std::get<bounds::SubExponentialEnvelope>(env);
    j["dim"] = se.dim;
    j["eta"] = se.eta;
    j["alpha"] = se.alpha;
    j["beta"] = se.beta;
    j["r0"] = se.r0;
    j["r1"] = se.r1;
    j["lambda"] = se.lambda;
    j["A"] = se.A;
    j["C"] = se.C;
    j["R"] = se.R;
    j["proof_valid"] = se.proof_valid();
  }
  return j;
}

}  // namespace

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string config_digest(const sampler::ChainConfig& cfg,
                          const std::string& potential_digest) {
  std::ostringstream os;
  os << g17(cfg.eta) << '|' << cfg.dim << '|' << cfg.n_chains << '|' << cfg.burn_in
     << '|' << cfg.record_every << '|' << cfg.records_per_chain << '|' << cfg.seed
     << '|' << potential_digest;
  if (cfg.init) {
    os << '|';
    for (Index i = 0; i < cfg.init->size(); ++i) os << g17((*cfg.init)[i]) << ',';
  }
  return hex16(fnv1a(os.str()));
}

void write_samples_csv(const std::string& path, const sampler::SampleEnsemble& ens) {
  auto out = open_out(path);
  out << "chain,record";
  for (Index j = 0; j < ens.samples.cols(); ++j) out << ",x_" << j;
  out << '\n';
  const std::int64_t rpc = ens.config.records_per_chain;
  for (Index i = 0; i < ens.samples.rows(); ++i) {
    out << (i / rpc) << ',' << (i % rpc);
    for (Index j = 0; j < ens.samples.cols(); ++j)
      out << ',' << g17(ens.samples(i, j));
    out << '\n';
  }
}

void write_meta_json(const std::string& path, const sampler::SampleEnsemble& ens,
                     double wall_seconds) {
  json j;
  j["seed"] = ens.config.seed;
  j["config_digest"] = config_digest(ens.config, ens.potential_digest);
  j["potential_digest"] = ens.potential_digest;
  j["exact_oracle"] = ens.exact_oracle;
  j["rows"] = static_cast<std::int64_t>(ens.samples.rows());
  j["wall_seconds"] = wall_seconds;
  json c;
  c["eta"] = ens.config.eta;
  c["dim"] = ens.config.dim;
  c["n_chains"] = ens.config.n_chains;
  c["burn_in"] = ens.config.burn_in;
  c["record_every"] = ens.config.record_every;
  c["records_per_chain"] = ens.config.records_per_chain;
  if (ens.config.init) {
    std::vector<double> v(ens.config.init->data(),
                          ens.config.init->data() + ens.config.init->size());
    c["init"] = v;
  }
  j["chain"] = c;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_envelope_csv(const std::string& path,
                        const std::vector<bounds::ConcentrationEnvelope>& envs,
                        const std::vector<double>& deltas, std::uint64_t seed,
                        const std::string& digest) {
  auto out = open_out(path);
  out << "# seed=" << seed << " config=" << digest << '\n';
  out << "delta,radius,kind\n";
  for (double d : deltas)
    for (const auto& env : envs)
      out << g17(d) << ',' << g17(bounds::envelope_radius(env, d)) << ','
          << bounds::envelope_kind_name(env) << '\n';
}

void write_envelope_json(const std::string& path,
                         const std::vector<bounds::ConcentrationEnvelope>& envs,
                         const std::vector<double>& deltas, std::uint64_t seed,
                         const std::string& digest) {
  json j;
  j["seed"] = seed;
  j["config_digest"] = digest;
  j["deltas"] = deltas;
  j["envelopes"] = json::array();
  for (const auto& env : envs) {
    json e;
    e["constants"] = envelope_constants(env);
    std::vector<double> radii;
    radii.reserve(deltas.size());
    for (double d : deltas) radii.push_back(bounds::envelope_radius(env, d));
    e["radii"] = radii;
    j["envelopes"].push_back(e);
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_tail_report_csv(const std::string& path, const verify::TailReport& rep,
                           std::uint64_t seed, const std::string& digest) {
  auto out = open_out(path);
  out << "# seed=" << seed << " config=" << digest << '\n';
  if (!rep.caveat.empty()) out << "# caveat: " << rep.caveat << '\n';
  out << "delta,radius,empirical_p,ci_upper,verdict\n";
  for (std::size_t i = 0; i < rep.deltas.size(); ++i)
    out << g17(rep.deltas[i]) << ',' << g17(rep.radii[i]) << ','
        << g17(rep.empirical_p[i]) << ',' << g17(rep.ci_upper[i]) << ','
        << (rep.verdicts[i] ? "PASS" : "FAIL") << '\n';
}

void write_sweep_report_csv(const std::string& path, const verify::SweepReport& rep,
                            const std::string& digest) {
  auto out = open_out(path);
  out << "# seed=" << rep.seed << " config=" << digest << '\n';
  out << "inequality,max_violation,n_points\n";
  for (const auto& e : rep.entries)
    out << e.name << ',' << g17(e.max_violation) << ',' << e.n_points << '\n';
}

void write_mgf_report_csv(const std::string& path, const std::vector<MgfRow>& rows,
                          std::uint64_t seed, const std::string& digest) {
  auto out = open_out(path);
  out << "# seed=" << seed << " config=" << digest << '\n';
  out << "lambda,empirical_log_mean,log_bound,bootstrap_se,verdict\n";
  for (const auto& r : rows)
    out << g17(r.lambda) << ',' << g17(r.result.empirical_log_mean) << ','
        << g17(r.result.log_bound) << ',' << g17(r.result.bootstrap_se) << ','
        << (r.result.pass ? "PASS" : "FAIL") << '\n';
}

void write_lyapunov_csv(const std::string& path,
                        const std::vector<LyapunovRow>& rows, std::uint64_t seed) {
  bool with_oracle = false;
  for (const auto& r : rows)
    if (r.oracle) with_oracle = true;
  auto out = open_out(path);
  out << "# seed=" << seed << '\n';
  out << "d,z,log_phi,log_derivative";
  if (with_oracle) out << ",oracle";
  out << '\n';
  for (const auto& r : rows) {
    out << r.d << ',' << g17(r.z) << ',' << g17(r.log_phi) << ','
        << (std::isnan(r.log_derivative) ? "" : g17(r.log_derivative));
    if (with_oracle) out << ',' << (r.oracle ? g17(*r.oracle) : "");
    out << '\n';
  }
}

}  // namespace langevin::io
