#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qldpc/classical.hpp"
#include "qldpc/gf2.hpp"
#include "qldpc/hgp.hpp"

namespace qldpc {

/// Subset table shared by every generator with the same local incidence
/// structure. Bit i of a subset mask selects the i-th support qubit of the
/// generator (increasing qubit index); bit b of an image selects the b-th
/// local check (increasing check index).
///
/// Subsets are stored grouped by size and, within a size, by increasing mask,
/// which is exactly the decoder's tie-break order.
struct SubsetShape {
  std::size_t weight = 0;
  std::vector<std::uint64_t> qubit_masks;   // local image of each support qubit
  std::vector<std::uint32_t> masks;         // 2^w - 1 subsets, ordered
  std::vector<std::uint64_t> images;        // local syndrome image of masks[j]
  std::vector<std::uint32_t> size_offsets;  // subsets of size s: [size_offsets[s], size_offsets[s+1])
  std::vector<int> min_image_weight;        // over subsets of size s
  std::vector<std::uint64_t> image_by_mask; // indexed by mask
};

struct CatalogGenerator {
  std::vector<Index> support;       // qubits, increasing
  std::vector<Index> local_checks;  // checks touched by the support, increasing
  std::uint32_t shape = 0;
};

struct CatalogOptions {
  std::size_t max_generator_weight = 20;
};

/// Power sets of one sector's stabilizer generators with cached syndrome
/// images. For Z-type errors the generators are the rows of H_Z and the
/// images live on the X checks; the X-type catalog mirrors this.
class SmallSetCatalog {
 public:
  /// Local checks per generator are limited to 64 (one machine word).
  static constexpr std::size_t kMaxLocalChecks = 64;

  SmallSetCatalog(const CssCode& code, Sector errors, const CatalogOptions& options = {});

  Sector sector() const { return sector_; }
  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t n_checks() const { return n_checks_; }
  std::size_t n_generators() const { return generators_.size(); }
  std::size_t n_shapes() const { return shapes_.size(); }

  const CatalogGenerator& generator(std::size_t g) const { return generators_[g]; }
  const SubsetShape& shape_of(std::size_t g) const { return shapes_[generators_[g].shape]; }
  const SubsetShape& shape(std::size_t s) const { return shapes_[s]; }
  std::size_t subset_count(std::size_t g) const { return shape_of(g).masks.size(); }

  /// Qubits of the subset `mask` of generator g.
  BitVector subset_qubits(std::size_t g, std::uint32_t mask) const;
  /// Cached syndrome image σ(F) of the subset, expanded to all checks.
  BitVector subset_syndrome(std::size_t g, std::uint32_t mask) const;

  struct Incidence {
    std::uint32_t generator;
    std::uint32_t bit;  // position of the check among the generator's local checks
  };
  /// Generators whose subsets can flip this check.
  std::span<const Incidence> incidences(std::size_t check) const {
    return {incidences_.data() + incidence_offsets_[check],
            incidences_.data() + incidence_offsets_[check + 1]};
  }

 private:
  Sector sector_;
  std::size_t n_qubits_ = 0;
  std::size_t n_checks_ = 0;
  std::vector<CatalogGenerator> generators_;
  std::vector<SubsetShape> shapes_;
  std::vector<std::uint32_t> incidence_offsets_;
  std::vector<Incidence> incidences_;
};

SmallSetCatalog build_catalog(const CssCode& code, Sector errors, const CatalogOptions& options = {});

/// Both sectors' catalogs of one code.
struct CssCatalogs {
  SmallSetCatalog z_errors;  // decodes Z errors from the X syndrome
  SmallSetCatalog x_errors;  // decodes X errors from the Z syndrome
  const SmallSetCatalog& for_errors(Sector s) const { return s == Sector::kZ ? z_errors : x_errors; }
};

CssCatalogs build_catalogs(const CssCode& code, const CatalogOptions& options = {});

struct DecodeOutcome {
  DecodeStatus status = DecodeStatus::kFail;
  BitVector estimate;  // Ê
  std::size_t iterations = 0;
  std::size_t final_syndrome_weight = 0;
  /// |σ_0|, |σ_1|, ... when tracing is enabled.
  std::vector<std::size_t> syndrome_weights;

  bool converged() const { return status == DecodeStatus::kConverged; }
};

enum class SearchMode {
  /// Re-scores only generators next to checks changed by the last flip and
  /// prunes subset sizes that cannot beat the incumbent.
  kIncremental,
  /// Re-scores every subset of every generator at every iteration.
  kFullScan,
};

struct DecoderOptions {
  SearchMode mode = SearchMode::kIncremental;
  bool record_trace = false;
};

/// Small-set-flip. While some subset F of a generator strictly lowers the
/// syndrome weight, flips the F maximizing (|σ| - |σ ⊕ σ(F)|) / |F|.
/// Ties: smaller |F|, then lower generator index, then smaller subset mask.
///
/// Holds per-thread scratch state; one instance per worker.
class SmallSetFlipDecoder {
 public:
  explicit SmallSetFlipDecoder(const SmallSetCatalog& catalog, DecoderOptions options = {});

  DecodeOutcome decode(const BitVector& syndrome);

  /// Allocation-free entry point. `unsatisfied` lists the checks with
  /// syndrome 1 (no duplicates); `correction` receives the support of Ê.
  DecodeStatus decode_sparse(std::span<const Index> unsatisfied, std::vector<Index>& correction,
                             std::size_t* iterations = nullptr);

 private:
  struct Candidate {
    int score = 0;  // 0 means no subset of this generator lowers the syndrome
    int size = 0;
    std::uint32_t mask = 0;
    bool exact = true;  // false: score/size only bounds the generator's best ratio
  };

  Candidate best_subset(const SubsetShape& shape, std::uint64_t local, bool prune) const;
  Candidate best_subset_cached(std::uint32_t shape, std::uint64_t local);
  Candidate ratio_bound(const SubsetShape& shape, std::uint64_t local) const;
  bool better(std::uint32_t a, std::uint32_t b) const;
  void tree_update(std::uint32_t g);
  void mark(std::uint32_t g);
  void apply(std::uint32_t g, const Candidate& c, std::vector<Index>& flips);
  void toggle_check(Index check, bool track);
  std::uint64_t gather_local(std::uint32_t g) const;

  std::size_t run_incremental(std::vector<Index>& flips);
  std::size_t run_full_scan(std::vector<Index>& flips);

  const SmallSetCatalog& catalog_;
  DecoderOptions options_;
  std::vector<std::uint64_t> syndrome_;
  std::size_t weight_ = 0;
  std::size_t final_weight_ = 0;
  std::vector<std::uint64_t> local_;
  std::vector<Candidate> best_;
  std::vector<std::uint8_t> dirty_flag_;
  std::vector<std::uint32_t> dirty_;
  std::vector<std::uint32_t> tree_;
  std::size_t leaves_ = 1;
  std::vector<std::uint8_t> flipped_;
  std::vector<Index> flips_;
  std::vector<std::size_t> trace_;
  // Best subset per local syndrome, per shape. Exact: the answer depends on nothing else.
  std::vector<std::unordered_map<std::uint64_t, Candidate>> memo_;
};

DecodeOutcome small_set_flip(const SmallSetCatalog& catalog, const BitVector& syndrome,
                             DecoderOptions options = {});

/// Decodes both sectors independently: Z errors from the X syndrome and
/// X errors from the Z syndrome. Returns (Z-error outcome, X-error outcome).
std::pair<DecodeOutcome, DecodeOutcome> decode_css(const CssCode& code, const CssCatalogs& catalogs,
                                                   const BitVector& x_syndrome,
                                                   const BitVector& z_syndrome);

}  // namespace qldpc
