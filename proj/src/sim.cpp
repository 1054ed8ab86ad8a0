#include "qldpc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include <nlohmann/json.hpp>

#include "qldpc/errors.hpp"
#include "qldpc/parallel.hpp"

namespace qldpc {

NoiseSample sample_noise(std::size_t n, double p, PhiloxStream& x_stream, PhiloxStream& z_stream) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability must lie in [0, 1]");
  NoiseSample s;
  s.x_error = BitVector::from_support(n, bernoulli_support(n, p, x_stream));
  s.z_error = BitVector::from_support(n, bernoulli_support(n, p, z_stream));
  return s;
}

NoiseSample sample_noise(std::size_t n, double p, std::uint64_t seed, std::uint64_t trial) {
  PhiloxStream x_stream(seed, trial, StreamTag::kXNoise);
  PhiloxStream z_stream(seed, trial, StreamTag::kZNoise);
  return sample_noise(n, p, x_stream, z_stream);
}

// ---------------------------------------------------------------------------
// Trials

TrialRunner::TrialRunner(const CssCode& code, const CssCatalogs& catalogs)
    : code_(code),
      x_check_cols_(code.hx.column_supports()),
      z_check_cols_(code.hz.column_supports()),
      z_decoder_(catalogs.z_errors),
      x_decoder_(catalogs.x_errors),
      parity_(std::max(code.hx.n_rows(), code.hz.n_rows()), 0) {
  if (catalogs.z_errors.n_qubits() != code.n_qubits() || catalogs.x_errors.n_qubits() != code.n_qubits()) {
    throw DimensionError("catalogs were built for a different code");
  }
}

bool TrialRunner::sector_fails(Sector errors, std::span<const Index> error) {
  if (error.empty()) return false;
  const auto& cols = errors == Sector::kZ ? x_check_cols_ : z_check_cols_;
  unsatisfied_.clear();
  for (Index q : error) {
    for (Index c : cols[q]) {
      parity_[c] ^= 1;
      unsatisfied_.push_back(c);
    }
  }
  // Keep checks whose final parity is odd, once each.
  std::sort(unsatisfied_.begin(), unsatisfied_.end());
  unsatisfied_.erase(std::unique(unsatisfied_.begin(), unsatisfied_.end()), unsatisfied_.end());
  std::size_t kept = 0;
  for (Index c : unsatisfied_) {
    if (parity_[c]) unsatisfied_[kept++] = c;
    parity_[c] = 0;
  }
  unsatisfied_.resize(kept);

  SmallSetFlipDecoder& decoder = errors == Sector::kZ ? z_decoder_ : x_decoder_;
  if (decoder.decode_sparse(unsatisfied_, correction_) != DecodeStatus::kConverged) return true;

  BitVector residual = BitVector::from_support(code_.n_qubits(), error);
  for (Index q : correction_) residual.flip(q);
  if (residual.none()) return false;
  return !code_.stabilizers_for(errors).echelon().contains(residual);
}

TrialOutcome TrialRunner::evaluate(std::span<const Index> x_error, std::span<const Index> z_error) {
  TrialOutcome out;
  out.z_fail = sector_fails(Sector::kZ, z_error);
  out.x_fail = sector_fails(Sector::kX, x_error);
  out.block_fail = out.x_fail || out.z_fail;
  return out;
}

TrialOutcome TrialRunner::run(double p, std::uint64_t seed, std::uint64_t trial) {
  const std::size_t n = code_.n_qubits();
  PhiloxStream x_stream(seed, trial, StreamTag::kXNoise);
  PhiloxStream z_stream(seed, trial, StreamTag::kZNoise);
  const auto x_error = bernoulli_support(n, p, x_stream);
  const auto z_error = bernoulli_support(n, p, z_stream);
  return evaluate(x_error, z_error);
}

TrialOutcome evaluate_errors(const CssCode& code, const CssCatalogs& catalogs, const BitVector& x_error,
                             const BitVector& z_error) {
  if (x_error.length() != code.n_qubits() || z_error.length() != code.n_qubits()) {
    throw DimensionError("error length does not match the code");
  }
  TrialRunner runner(code, catalogs);
  return runner.evaluate(x_error.support(), z_error.support());
}

TrialOutcome run_trial(const CssCode& code, const CssCatalogs& catalogs, double p, std::uint64_t seed,
                       std::uint64_t trial) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability must lie in [0, 1]");
  TrialRunner runner(code, catalogs);
  return runner.run(p, seed, trial);
}

FailureCounts count_failures(const CssCode& code, const CssCatalogs& catalogs, double p, std::size_t trials,
                             std::uint64_t seed, unsigned workers) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability must lie in [0, 1]");
  workers = std::max(1u, workers);
  // The residual test needs both echelon forms; build them before the workers race for them.
  code.hx.echelon();
  code.hz.echelon();
  std::vector<FailureCounts> per_worker(workers);
  std::vector<std::unique_ptr<TrialRunner>> runners(workers);
  parallel_chunks(trials, workers, 64, [&](unsigned worker, std::size_t begin, std::size_t end) {
    if (!runners[worker]) runners[worker] = std::make_unique<TrialRunner>(code, catalogs);
    FailureCounts& c = per_worker[worker];
    for (std::size_t t = begin; t < end; ++t) {
      const TrialOutcome o = runners[worker]->run(p, seed, t);
      c.block += o.block_fail;
      c.x += o.x_fail;
      c.z += o.z_fail;
    }
  });
  FailureCounts total;
  total.trials = trials;
  for (const auto& c : per_worker) {
    total.block += c.block;
    total.x += c.x;
    total.z += c.z;
  }
  return total;
}

EstimateWithCI estimate(const CssCode& code, const CssCatalogs& catalogs, double p, std::size_t trials,
                        std::uint64_t seed, unsigned workers) {
  if (trials == 0) throw ParameterError("estimate needs at least one trial");
  const FailureCounts c = count_failures(code, catalogs, p, trials, seed, workers);
  return make_estimate(p, c.block, trials);
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw ParameterError("empty p grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw ParameterError("p grid values must lie in [0, 1]");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ParameterError("p grid must be strictly increasing");
  }
}

}  // namespace

SweepResult sweep(const CssCode& code, const CssCatalogs& catalogs, std::span<const double> p_grid,
                  std::size_t trials_per_point, std::uint64_t seed, unsigned workers, std::string code_id) {
  check_grid(p_grid);
  if (trials_per_point == 0) throw ParameterError("sweep needs at least one trial per point");
  SweepResult r;
  r.code_id = std::move(code_id);
  const CodeParameters params = code_parameters(code);
  r.n = params.n;
  r.k = params.k;
  r.seed = seed;
  for (double p : p_grid) {
    const FailureCounts c = count_failures(code, catalogs, p, trials_per_point, seed, workers);
    r.points.push_back(SweepPoint{make_estimate(p, c.block, trials_per_point), c.x, c.z});
  }
  return r;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "code_id,N,k,p,trials,failures,p_log,ci99\n";
  for (const auto& pt : r.points) {
    const auto& e = pt.estimate;
    os << r.code_id << ',' << r.n << ',' << r.k << ',' << format_double(e.p) << ',' << e.trials << ','
       << e.failures << ',' << format_double(e.p_log) << ',' << format_double(e.ci99) << '\n';
  }
}

std::string sweep_to_json(const SweepResult& r) {
  nlohmann::ordered_json j;
  j["code_id"] = r.code_id;
  j["N"] = r.n;
  j["k"] = r.k;
  j["seed"] = r.seed;
  j["graph_files"] = r.graph_files;
  j["decoder_version"] = r.decoder_version;
  auto points = nlohmann::ordered_json::array();
  for (const auto& pt : r.points) {
    const auto& e = pt.estimate;
    const auto [lo, hi] = wilson_interval(e.failures, e.trials);
    nlohmann::ordered_json o;
    o["p"] = e.p;
    o["trials"] = e.trials;
    o["failures"] = e.failures;
    o["p_log"] = e.p_log;
    o["ci99"] = e.ci99;
    o["wilson99"] = {lo, hi};
    o["x_failures"] = pt.x_failures;
    o["z_failures"] = pt.z_failures;
    points.push_back(std::move(o));
  }
  j["points"] = std::move(points);
  return j.dump(2);
}

SweepResult sweep_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SweepResult r;
  r.code_id = j.value("code_id", std::string("code"));
  r.n = j.at("N").get<std::size_t>();
  r.k = j.at("k").get<std::size_t>();
  r.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("graph_files")) r.graph_files = j.at("graph_files").get<std::vector<std::string>>();
  r.decoder_version = j.value("decoder_version", std::string(kDecoderVersion));
  for (const auto& o : j.at("points")) {
    SweepPoint pt;
    pt.estimate = make_estimate(o.at("p").get<double>(), o.at("failures").get<std::size_t>(),
                                o.at("trials").get<std::size_t>());
    pt.x_failures = o.value("x_failures", std::size_t{0});
    pt.z_failures = o.value("z_failures", std::size_t{0});
    r.points.push_back(pt);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Threshold and toric comparison

ThresholdResult threshold_estimate(std::vector<SweepResult> sweeps) {
  if (sweeps.size() < 2) throw ParameterError("threshold estimation needs at least two sweeps");
  std::stable_sort(sweeps.begin(), sweeps.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  const std::size_t n_points = sweeps[0].points.size();
  for (const auto& s : sweeps) {
    if (s.points.size() != n_points) throw ParameterError("sweeps do not share a p grid");
    for (std::size_t i = 0; i < n_points; ++i) {
      if (s.points[i].estimate.p != sweeps[0].points[i].estimate.p) {
        throw ParameterError("sweeps do not share a p grid");
      }
    }
  }
  for (std::size_t s = 1; s < sweeps.size(); ++s) {
    if (sweeps[s].n == sweeps[s - 1].n) throw ParameterError("threshold sweeps must have distinct N");
  }

  ThresholdResult result;
  result.method_note =
      "sub-threshold ordering: p_th is the largest grid point up to which p_log strictly decreases "
      "with N and consecutive sizes have disjoint 99% Wald intervals; grid points without any "
      "failure are skipped; curve crossings are not used";
  for (std::size_t i = 0; i < n_points; ++i) {
    bool any_failures = false;
    for (const auto& s : sweeps) any_failures = any_failures || s.points[i].estimate.failures > 0;
    if (!any_failures) continue;
    bool ordered = true;
    for (std::size_t s = 1; s < sweeps.size() && ordered; ++s) {
      const auto& small = sweeps[s - 1].points[i].estimate;
      const auto& large = sweeps[s].points[i].estimate;
      ordered = large.p_log < small.p_log && large.p_log + large.ci99 < small.p_log - small.ci99;
    }
    if (!ordered) break;
    result.p_th = sweeps[0].points[i].estimate.p;
  }
  if (!result.p_th) result.method_note += "; the ordering never holds, so p_th is undefined";
  return result;
}

ToricComparison compare_with_toric(const EstimateWithCI& hgp, const EstimateWithCI& toric, std::size_t k) {
  if (k % 2 != 0) {
    throw ParameterError("toric comparison needs an even number of logical qubits, got k = " +
                         std::to_string(k));
  }
  ToricComparison c;
  c.k = k;
  c.hgp_block_fail = hgp.p_log;
  c.hgp_ci99 = hgp.ci99;
  const double copies = static_cast<double>(k / 2);
  const double q = toric.p_log;
  c.toric_block_fail = 1.0 - std::pow(1.0 - q, copies);
  const double slope = copies == 0.0 ? 0.0 : copies * std::pow(1.0 - q, copies - 1.0);
  c.toric_ci99 = slope * toric.ci99;
  return c;
}

}  // namespace qldpc
