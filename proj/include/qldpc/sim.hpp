#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qldpc/gf2.hpp"
#include "qldpc/hgp.hpp"
#include "qldpc/rng.hpp"
#include "qldpc/ssf.hpp"
#include "qldpc/stats.hpp"

namespace qldpc {

inline constexpr const char* kDecoderVersion = "ssf-1";

struct NoiseSample {
  BitVector x_error;
  BitVector z_error;
};

NoiseSample sample_noise(std::size_t n, double p, PhiloxStream& x_stream, PhiloxStream& z_stream);
/// Noise of trial `trial`, from its (seed, trial, sector) streams.
NoiseSample sample_noise(std::size_t n, double p, std::uint64_t seed, std::uint64_t trial);

struct TrialOutcome {
  bool x_fail = false;
  bool z_fail = false;
  bool block_fail = false;
};

/// Decoding workspace for one worker. The code and catalogs must outlive it.
class TrialRunner {
 public:
  TrialRunner(const CssCode& code, const CssCatalogs& catalogs);

  /// Decodes given error supports (increasing, no duplicates). A sector
  /// fails when its decoder does not converge or the residual is not a
  /// stabilizer.
  TrialOutcome evaluate(std::span<const Index> x_error, std::span<const Index> z_error);
  TrialOutcome run(double p, std::uint64_t seed, std::uint64_t trial);

 private:
  bool sector_fails(Sector errors, std::span<const Index> error);

  const CssCode& code_;
  std::vector<std::vector<Index>> x_check_cols_;  // H_X columns
  std::vector<std::vector<Index>> z_check_cols_;  // H_Z columns
  SmallSetFlipDecoder z_decoder_;
  SmallSetFlipDecoder x_decoder_;
  std::vector<std::uint8_t> parity_;
  std::vector<Index> unsatisfied_;
  std::vector<Index> correction_;
};

TrialOutcome evaluate_errors(const CssCode& code, const CssCatalogs& catalogs, const BitVector& x_error,
                             const BitVector& z_error);
TrialOutcome run_trial(const CssCode& code, const CssCatalogs& catalogs, double p, std::uint64_t seed,
                       std::uint64_t trial);

struct FailureCounts {
  std::size_t trials = 0;
  std::size_t block = 0;
  std::size_t x = 0;
  std::size_t z = 0;
};

/// Runs trials [0, trials) and sums their outcomes; independent of `workers`.
FailureCounts count_failures(const CssCode& code, const CssCatalogs& catalogs, double p, std::size_t trials,
                             std::uint64_t seed, unsigned workers = 1);

EstimateWithCI estimate(const CssCode& code, const CssCatalogs& catalogs, double p, std::size_t trials,
                        std::uint64_t seed, unsigned workers = 1);

struct SweepPoint {
  EstimateWithCI estimate;
  std::size_t x_failures = 0;
  std::size_t z_failures = 0;
};

struct SweepResult {
  std::string code_id;
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<SweepPoint> points;
  std::uint64_t seed = 0;
  std::vector<std::string> graph_files;
  std::string decoder_version = kDecoderVersion;
};

/// One estimate per grid point; every point uses the same seed.
SweepResult sweep(const CssCode& code, const CssCatalogs& catalogs, std::span<const double> p_grid,
                  std::size_t trials_per_point, std::uint64_t seed, unsigned workers = 1,
                  std::string code_id = "code");

/// `code_id,N,k,p,trials,failures,p_log,ci99` with a header row.
void write_sweep_csv(std::ostream& os, const SweepResult& r);
std::string sweep_to_json(const SweepResult& r);
SweepResult sweep_from_json(const std::string& text);

struct ThresholdResult {
  std::optional<double> p_th;
  std::string method_note;
};

/// Largest grid point up to which larger codes have strictly smaller p_log
/// with disjoint 99% intervals at every non-empty grid point.
ThresholdResult threshold_estimate(std::vector<SweepResult> sweeps);

struct ToricComparison {
  std::size_t k = 0;
  double hgp_block_fail = 0.0;
  double hgp_ci99 = 0.0;
  double toric_block_fail = 0.0;
  double toric_ci99 = 0.0;
};

/// Block failure of k/2 independent toric copies, 1 - (1 - q)^(k/2), against
/// the product code's p_log. The toric interval uses the delta method.
ToricComparison compare_with_toric(const EstimateWithCI& hgp, const EstimateWithCI& toric, std::size_t k);

/// Formats a double the way every output table does.
std::string format_double(double v);

}  // namespace qldpc
