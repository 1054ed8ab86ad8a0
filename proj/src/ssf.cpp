#include "qldpc/ssf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "qldpc/errors.hpp"

namespace qldpc {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

SubsetShape make_shape(const std::vector<std::uint64_t>& qubit_masks) {
  SubsetShape shape;
  const std::size_t w = qubit_masks.size();
  shape.weight = w;
  shape.qubit_masks = qubit_masks;
  const std::uint32_t total = std::uint32_t{1} << w;
  shape.image_by_mask.assign(total, 0);
  for (std::uint32_t m = 1; m < total; ++m) {
    shape.image_by_mask[m] =
        shape.image_by_mask[m & (m - 1)] ^ qubit_masks[static_cast<std::size_t>(std::countr_zero(m))];
  }
  // Bucket by popcount; masks stay increasing within a bucket.
  shape.size_offsets.assign(w + 2, 0);
  for (std::uint32_t m = 1; m < total; ++m) ++shape.size_offsets[std::popcount(m) + 1];
  shape.size_offsets[1] = 0;
  for (std::size_t s = 2; s <= w + 1; ++s) shape.size_offsets[s] += shape.size_offsets[s - 1];
  shape.masks.resize(total - 1);
  shape.images.resize(total - 1);
  std::vector<std::uint32_t> cursor(shape.size_offsets.begin(), shape.size_offsets.end());
  for (std::uint32_t m = 1; m < total; ++m) {
    const auto pos = cursor[std::popcount(m)]++;
    shape.masks[pos] = m;
    shape.images[pos] = shape.image_by_mask[m];
  }
  shape.min_image_weight.assign(w + 1, 0);
  for (std::size_t s = 1; s <= w; ++s) {
    int best = std::numeric_limits<int>::max();
    for (auto j = shape.size_offsets[s]; j < shape.size_offsets[s + 1]; ++j) {
      best = std::min(best, std::popcount(shape.images[j]));
    }
    shape.min_image_weight[s] = best;
  }
  return shape;
}

}  // namespace

// ---------------------------------------------------------------------------
// Catalog

SmallSetCatalog::SmallSetCatalog(const CssCode& code, Sector errors, const CatalogOptions& options)
    : sector_(errors) {
  const SparseBitMatrix& gens = code.stabilizers_for(errors);
  const SparseBitMatrix& checks = code.checks_for(errors);
  n_qubits_ = code.n_qubits();
  n_checks_ = checks.n_rows();
  const auto qubit_checks = checks.column_supports();

  std::map<std::vector<std::uint64_t>, std::uint32_t> shape_ids;
  std::vector<std::uint32_t> check_degree(n_checks_, 0);
  generators_.reserve(gens.n_rows());
  for (std::size_t g = 0; g < gens.n_rows(); ++g) {
    CatalogGenerator gen;
    const auto row = gens.row(g);
    gen.support.assign(row.begin(), row.end());
    if (gen.support.size() > options.max_generator_weight) {
      throw BudgetExceeded("generator " + std::to_string(g) + " has weight " +
                               std::to_string(gen.support.size()) + " above the cap of " +
                               std::to_string(options.max_generator_weight),
                           std::ldexp(1.0, static_cast<int>(gen.support.size())));
    }
    for (Index q : gen.support) {
      gen.local_checks.insert(gen.local_checks.end(), qubit_checks[q].begin(), qubit_checks[q].end());
    }
    std::sort(gen.local_checks.begin(), gen.local_checks.end());
    gen.local_checks.erase(std::unique(gen.local_checks.begin(), gen.local_checks.end()),
                           gen.local_checks.end());
    if (gen.local_checks.size() > kMaxLocalChecks) {
      throw ParameterError("generator " + std::to_string(g) + " touches " +
                           std::to_string(gen.local_checks.size()) + " checks; at most " +
                           std::to_string(kMaxLocalChecks) + " are supported");
    }
    std::vector<std::uint64_t> masks(gen.support.size(), 0);
    for (std::size_t i = 0; i < gen.support.size(); ++i) {
      for (Index c : qubit_checks[gen.support[i]]) {
        const auto b = std::lower_bound(gen.local_checks.begin(), gen.local_checks.end(), c) -
                       gen.local_checks.begin();
        masks[i] |= std::uint64_t{1} << b;
      }
    }
    auto [it, inserted] = shape_ids.try_emplace(masks, static_cast<std::uint32_t>(shapes_.size()));
    if (inserted) shapes_.push_back(make_shape(masks));
    gen.shape = it->second;
    for (Index c : gen.local_checks) ++check_degree[c];
    generators_.push_back(std::move(gen));
  }

  incidence_offsets_.assign(n_checks_ + 1, 0);
  for (std::size_t c = 0; c < n_checks_; ++c) incidence_offsets_[c + 1] = incidence_offsets_[c] + check_degree[c];
  incidences_.resize(incidence_offsets_.back());
  std::vector<std::uint32_t> cursor(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    const auto& lc = generators_[g].local_checks;
    for (std::size_t b = 0; b < lc.size(); ++b) {
      incidences_[cursor[lc[b]]++] = Incidence{static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(b)};
    }
  }
}

BitVector SmallSetCatalog::subset_qubits(std::size_t g, std::uint32_t mask) const {
  const auto& gen = generators_[g];
  BitVector v(n_qubits_);
  for (std::size_t i = 0; i < gen.support.size(); ++i) {
    if ((mask >> i) & 1u) v.set(gen.support[i]);
  }
  return v;
}

BitVector SmallSetCatalog::subset_syndrome(std::size_t g, std::uint32_t mask) const {
  const auto& gen = generators_[g];
  const auto& shape = shapes_[gen.shape];
  if (mask == 0 || mask >= shape.image_by_mask.size()) {
    throw ParameterError("subset mask out of range for generator " + std::to_string(g));
  }
  std::uint64_t image = shape.image_by_mask[mask];
  BitVector v(n_checks_);
  while (image) {
    v.set(gen.local_checks[static_cast<std::size_t>(std::countr_zero(image))]);
    image &= image - 1;
  }
  return v;
}

SmallSetCatalog build_catalog(const CssCode& code, Sector errors, const CatalogOptions& options) {
  return SmallSetCatalog(code, errors, options);
}

CssCatalogs build_catalogs(const CssCode& code, const CatalogOptions& options) {
  return CssCatalogs{SmallSetCatalog(code, Sector::kZ, options), SmallSetCatalog(code, Sector::kX, options)};
}

// ---------------------------------------------------------------------------
// Decoder

SmallSetFlipDecoder::SmallSetFlipDecoder(const SmallSetCatalog& catalog, DecoderOptions options)
    : catalog_(catalog),
      options_(options),
      syndrome_((catalog.n_checks() + 63) / 64, 0),
      local_(catalog.n_generators(), 0),
      best_(catalog.n_generators()),
      dirty_flag_(catalog.n_generators(), 0),
      flipped_(catalog.n_qubits(), 0),
      memo_(catalog.n_shapes()) {
  while (leaves_ < catalog.n_generators()) leaves_ *= 2;
  tree_.assign(2 * leaves_, kNone);
}

SmallSetFlipDecoder::Candidate SmallSetFlipDecoder::best_subset(const SubsetShape& shape,
                                                                std::uint64_t local,
                                                                bool prune) const {
  Candidate best;
  if (local == 0) return best;
  const int w = static_cast<int>(shape.weight);
  const int unsat = std::popcount(local);

  // Upper bounds on the score of any subset of size s:
  //   |σ ∩ σ(F)| <= min(|σ|, sum of the s largest per-qubit overlaps),
  //   score = 2|σ ∩ σ(F)| - |σ(F)| <= that bound, and <= 2 bound - min |σ(F)|.
  int prefix[65] = {0};
  if (prune) {
    int overlap[64];
    for (int i = 0; i < w; ++i) overlap[i] = std::popcount(local & shape.qubit_masks[static_cast<std::size_t>(i)]);
    std::sort(overlap, overlap + w, std::greater<>());
    for (int i = 0; i < w; ++i) prefix[i + 1] = prefix[i] + overlap[i];
  }

  for (int s = 1; s <= w; ++s) {
    if (prune) {
      const int reach = std::min(unsat, prefix[s]);
      const int bound = std::min(reach, 2 * reach - shape.min_image_weight[static_cast<std::size_t>(s)]);
      if (bound <= 0) continue;
      // A larger subset must have a strictly larger ratio to win.
      if (best.size > 0 && bound * best.size <= best.score * s) continue;
    }
    const auto begin = shape.size_offsets[static_cast<std::size_t>(s)];
    const auto end = shape.size_offsets[static_cast<std::size_t>(s) + 1];
    for (auto j = begin; j < end; ++j) {
      const std::uint64_t image = shape.images[j];
      const int score = 2 * std::popcount(local & image) - std::popcount(image);
      if (score <= 0) continue;
      if (best.size == 0 || score * best.size > best.score * s) {
        best = Candidate{score, s, shape.masks[j]};
      }
    }
  }
  return best;
}

SmallSetFlipDecoder::Candidate SmallSetFlipDecoder::best_subset_cached(std::uint32_t shape,
                                                                       std::uint64_t local) {
  constexpr std::size_t kMemoLimit = std::size_t{1} << 20;
  if (local == 0) return Candidate{};
  auto& memo = memo_[shape];
  if (auto it = memo.find(local); it != memo.end()) return it->second;
  if (memo.size() >= kMemoLimit) memo.clear();
  const Candidate c = best_subset(catalog_.shape(shape), local, true);
  memo.emplace(local, c);
  return c;
}

SmallSetFlipDecoder::Candidate SmallSetFlipDecoder::ratio_bound(const SubsetShape& shape,
                                                                std::uint64_t local) const {
  // Largest per-size score bound of best_subset's pruning over size, keyed at
  // the smallest size attaining it: orders no lower than the true best.
  const int w = static_cast<int>(shape.weight);
  const int unsat = std::popcount(local);
  int count[65] = {0};
  for (std::uint64_t m : shape.qubit_masks) ++count[std::popcount(local & m)];
  Candidate best;
  best.exact = false;
  int s = 0, prefix = 0;
  for (int o = 64; o >= 0 && s < w; --o) {
    for (int k = 0; k < count[o]; ++k) {
      ++s;
      prefix += o;
      const int reach = std::min(unsat, prefix);
      const int bound = std::min(reach, 2 * reach - shape.min_image_weight[static_cast<std::size_t>(s)]);
      if (bound > 0 && (best.size == 0 || bound * best.size > best.score * s)) {
        best.score = bound;
        best.size = s;
      }
    }
  }
  return best;
}

bool SmallSetFlipDecoder::better(std::uint32_t a, std::uint32_t b) const {
  if (a == kNone) return false;
  if (b == kNone) return true;
  const Candidate& ca = best_[a];
  const Candidate& cb = best_[b];
  const int lhs = ca.score * cb.size;
  const int rhs = cb.score * ca.size;
  if (lhs != rhs) return lhs > rhs;
  if (ca.size != cb.size) return ca.size < cb.size;
  return a < b;
}

void SmallSetFlipDecoder::tree_update(std::uint32_t g) {
  std::size_t pos = leaves_ + g;
  tree_[pos] = best_[g].score > 0 ? g : kNone;
  for (pos /= 2; pos >= 1; pos /= 2) {
    const std::uint32_t l = tree_[2 * pos];
    const std::uint32_t r = tree_[2 * pos + 1];
    const std::uint32_t w = better(r, l) ? r : l;
    // Above an unchanged winner other than g nothing can change.
    if (w == tree_[pos] && w != g) break;
    tree_[pos] = w;
  }
}

void SmallSetFlipDecoder::mark(std::uint32_t g) {
  if (!dirty_flag_[g]) {
    dirty_flag_[g] = 1;
    dirty_.push_back(g);
  }
}

void SmallSetFlipDecoder::toggle_check(Index check, bool track) {
  std::uint64_t& word = syndrome_[check >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (check & 63);
  word ^= bit;
  if (word & bit) {
    ++weight_;
  } else {
    --weight_;
  }
  for (const auto& inc : catalog_.incidences(check)) {
    local_[inc.generator] ^= std::uint64_t{1} << inc.bit;
    if (track) mark(inc.generator);
  }
}

std::uint64_t SmallSetFlipDecoder::gather_local(std::uint32_t g) const {
  const auto& checks = catalog_.generator(g).local_checks;
  std::uint64_t local = 0;
  for (std::size_t b = 0; b < checks.size(); ++b) {
    const Index c = checks[b];
    local |= ((syndrome_[c >> 6] >> (c & 63)) & 1u) << b;
  }
  return local;
}

void SmallSetFlipDecoder::apply(std::uint32_t g, const Candidate& c, std::vector<Index>& flips) {
  const auto& gen = catalog_.generator(g);
  const auto& shape = catalog_.shape_of(g);
  for (std::uint32_t m = c.mask; m; m &= m - 1) {
    const Index q = gen.support[static_cast<std::size_t>(std::countr_zero(m))];
    flipped_[q] ^= 1;
    flips.push_back(q);
  }
  const std::size_t before = weight_;
  const bool track = options_.mode == SearchMode::kIncremental;
  for (std::uint64_t image = shape.image_by_mask[c.mask]; image; image &= image - 1) {
    toggle_check(gen.local_checks[static_cast<std::size_t>(std::countr_zero(image))], track);
  }
  if (weight_ + static_cast<std::size_t>(c.score) != before) {
    throw InternalError("small-set-flip step did not lower the syndrome by its score");
  }
  if (options_.record_trace) trace_.push_back(weight_);
}

std::size_t SmallSetFlipDecoder::run_incremental(std::vector<Index>& flips) {
  std::size_t iterations = 0;
  while (true) {
    for (std::uint32_t g : dirty_) {
      best_[g] = ratio_bound(catalog_.shape_of(g), local_[g]);
      tree_update(g);
      dirty_flag_[g] = 0;
    }
    dirty_.clear();
    const std::uint32_t top = tree_[1];
    if (top == kNone) break;
    if (!best_[top].exact) {
      best_[top] = best_subset_cached(catalog_.generator(top).shape, local_[top]);
      tree_update(top);
      continue;
    }
    apply(top, best_[top], flips);
    ++iterations;
  }
  return iterations;
}

std::size_t SmallSetFlipDecoder::run_full_scan(std::vector<Index>& flips) {
  std::size_t iterations = 0;
  while (weight_ > 0) {
    std::uint32_t top = kNone;
    Candidate top_candidate;
    for (std::uint32_t g = 0; g < catalog_.n_generators(); ++g) {
      const Candidate c = best_subset(catalog_.shape_of(g), gather_local(g), false);
      if (c.score <= 0) continue;
      if (top == kNone) {
        top = g;
        top_candidate = c;
        continue;
      }
      // Generators are visited in increasing order, so equal keys keep the earlier one.
      const int lhs = c.score * top_candidate.size;
      const int rhs = top_candidate.score * c.size;
      if (lhs > rhs || (lhs == rhs && c.size < top_candidate.size)) {
        top = g;
        top_candidate = c;
      }
    }
    if (top == kNone) break;
    apply(top, top_candidate, flips);
    ++iterations;
  }
  return iterations;
}

DecodeStatus SmallSetFlipDecoder::decode_sparse(std::span<const Index> unsatisfied,
                                                std::vector<Index>& correction,
                                                std::size_t* iterations) {
  correction.clear();
  flips_.clear();
  trace_.clear();
  const bool incremental = options_.mode == SearchMode::kIncremental;
  for (Index c : unsatisfied) {
    if (c >= catalog_.n_checks()) {
      throw DimensionError("unsatisfied check " + std::to_string(c) + " out of range");
    }
    toggle_check(c, incremental);
  }
  if (options_.record_trace) trace_.push_back(weight_);

  const std::size_t steps = incremental ? run_incremental(flips_) : run_full_scan(flips_);
  if (iterations) *iterations = steps;
  final_weight_ = weight_;
  const DecodeStatus status = weight_ == 0 ? DecodeStatus::kConverged : DecodeStatus::kFail;

  // Leave the scratch state zeroed for the next call.
  if (weight_ > 0) {
    for (std::size_t w = 0; w < syndrome_.size(); ++w) {
      while (syndrome_[w]) {
        const auto c = static_cast<Index>(w * 64 + static_cast<std::size_t>(std::countr_zero(syndrome_[w])));
        toggle_check(c, false);
      }
    }
  }
  for (Index q : flips_) {
    if (flipped_[q]) {
      correction.push_back(q);
      flipped_[q] = 0;
    }
  }
  std::sort(correction.begin(), correction.end());
  return status;
}

DecodeOutcome SmallSetFlipDecoder::decode(const BitVector& syndrome) {
  if (syndrome.length() != catalog_.n_checks()) {
    throw DimensionError("syndrome length " + std::to_string(syndrome.length()) + " != " +
                         std::to_string(catalog_.n_checks()) + " checks");
  }
  const auto unsatisfied = syndrome.support();
  std::vector<Index> correction;
  DecodeOutcome out;
  out.status = decode_sparse(unsatisfied, correction, &out.iterations);
  out.estimate = BitVector::from_support(catalog_.n_qubits(), correction);
  out.final_syndrome_weight = final_weight_;
  if (options_.record_trace) out.syndrome_weights = trace_;
  return out;
}

DecodeOutcome small_set_flip(const SmallSetCatalog& catalog, const BitVector& syndrome,
                             DecoderOptions options) {
  SmallSetFlipDecoder decoder(catalog, options);
  return decoder.decode(syndrome);
}

std::pair<DecodeOutcome, DecodeOutcome> decode_css(const CssCode& code, const CssCatalogs& catalogs,
                                                   const BitVector& x_syndrome,
                                                   const BitVector& z_syndrome) {
  if (x_syndrome.length() != code.hx.n_rows() || z_syndrome.length() != code.hz.n_rows()) {
    throw DimensionError("decode_css: syndrome lengths do not match the code");
  }
  return {small_set_flip(catalogs.z_errors, x_syndrome), small_set_flip(catalogs.x_errors, z_syndrome)};
}

}  // namespace qldpc
