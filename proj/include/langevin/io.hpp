#pragma once

#include <optional>
#include <string>
#include <vector>

#include "langevin/bounds.hpp"
#include "langevin/sampler.hpp"
#include "langevin/verify.hpp"

namespace langevin::io {

// Shortest-width %.17g rendering: round-trips doubles exactly.
std::string g17(double v);

// Stable hex digest of the run configuration (chain parameters + potential
// digest); embedded in exported files for provenance.
std::string config_digest(const sampler::ChainConfig& cfg,
                          const std::string& potential_digest);

// Canonical interchange format: header "chain,record,x_0,...,x_{d-1}", one
// row per recorded state, values in %.17g. No comment lines — provenance for
// a sample run lives in the meta JSON written next to it.
void write_samples_csv(const std::string& path, const sampler::SampleEnsemble& ens);

// Config echo, seed, digests, row count, wall time.
void write_meta_json(const std::string& path, const sampler::SampleEnsemble& ens,
                     double wall_seconds);

// Envelope export: '#' provenance lines, then "delta,radius,kind" rows (one
// per delta per envelope; the kind column separates them), plus a JSON
// constants block listing every envelope's named constants.
void write_envelope_csv(const std::string& path,
                        const std::vector<bounds::ConcentrationEnvelope>& envs,
                        const std::vector<double>& deltas, std::uint64_t seed,
                        const std::string& digest);
void write_envelope_json(const std::string& path,
                         const std::vector<bounds::ConcentrationEnvelope>& envs,
                         const std::vector<double>& deltas, std::uint64_t seed,
                         const std::string& digest);

// Tail report: '#' provenance lines, then
// "delta,radius,empirical_p,ci_upper,verdict".
void write_tail_report_csv(const std::string& path, const verify::TailReport& rep,
                           std::uint64_t seed, const std::string& digest);

// Inequality sweep: '#' provenance lines, then
// "inequality,max_violation,n_points".
void write_sweep_report_csv(const std::string& path, const verify::SweepReport& rep,
                            const std::string& digest);

struct MgfRow {
  double lambda = 0.0;
  verify::MgfResult result;
};

// MGF confrontation: '#' provenance lines, then
// "lambda,empirical_log_mean,log_bound,bootstrap_se,verdict".
void write_mgf_report_csv(const std::string& path, const std::vector<MgfRow>& rows,
                          std::uint64_t seed, const std::string& digest);

struct LyapunovRow {
  int d = 0;
  double z = 0.0;
  double log_phi = 0.0;
  double log_derivative = 0.0;  // NaN marks z = 0 (undefined there)
  std::optional<double> oracle;
};

// Table export: '#' provenance lines, then "d,z,log_phi,log_derivative"
// (plus ",oracle" when any row carries one).
void write_lyapunov_csv(const std::string& path,
                        const std::vector<LyapunovRow>& rows, std::uint64_t seed);

}  // namespace langevin::io
