#ifndef COVDESIGN_DESIGNS_H_
#define COVDESIGN_DESIGNS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "covdesign/graph.h"
#include "covdesign/matrix.h"
#include "covdesign/rng.h"

namespace covdesign {

// Largest K for which full outcome enumeration is attempted (2^16 outcomes).
inline constexpr int kMaxEnumerationClusters = 16;

enum class DesignKind { kBernoulli, kComplete, kIbr, kOcd };

// One point of a design's support: bit k of `mask` is t_k.
struct Outcome {
  std::uint32_t mask;
  double probability;
};

// Independent fair coin per cluster.
ClusterTreatment sample_bernoulli(int k, Rng& rng);
// Exactly K/2 treated for even K; for odd K the treated count is floor(K/2)
// or ceil(K/2) with probability 1/2 each, keeping every marginal at 1/2.
ClusterTreatment sample_complete(int k, Rng& rng);
// Complete randomisation inside each block, blocks independent. Blocks of
// size 1 get a fair coin.
ClusterTreatment sample_ibr(std::span<const std::vector<int>> blocks, int k, Rng& rng);
// t = (1 + sgn(R eta)) / 2, eta ~ N(0, I_K), sgn(0) = +1.
ClusterTreatment sample_ocd(const Matrix& root, Rng& rng);

// Clusters sorted by size (descending, ties by id) and cut into consecutive
// runs of `block_size`. Leftover clusters form one smaller even block when
// possible, plus a singleton if the leftover count is odd. Block size 2
// gives the size-paired variant.
std::vector<std::vector<int>> build_ibr_blocks(std::span<const int> cluster_sizes,
                                               int block_size);

// A balanced cluster-level randomisation scheme with known covariance.
class Design {
 public:
  static Design bernoulli(int k);
  static Design complete(int k);
  static Design ibr(std::vector<std::vector<int>> blocks, int k, int block_size);
  // Rows of `root` must have unit norm (to 1e-9).
  static Design ocd(Matrix root);

  DesignKind kind() const { return kind_; }
  int num_clusters() const { return k_; }
  int block_size() const { return block_size_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const Matrix& root() const { return root_; }
  // "ber", "cr", "ibr-p" (block size 2), "ibr-<b>", "ocd".
  std::string name() const;

  ClusterTreatment sample(Rng& rng) const;

  // Exact Cov[t].
  Matrix covariance() const;

  // True when enumerate() can produce the exact support. Gaussian-sign
  // designs qualify when every group of mutually non-orthogonal rows of R
  // spans at most two dimensions.
  bool enumerable(int max_clusters = kMaxEnumerationClusters) const;
  // Full outcome distribution; probabilities sum to 1. Throws InvalidArgument
  // if K exceeds max_clusters or the design is not enumerable.
  std::vector<Outcome> enumerate(int max_clusters = kMaxEnumerationClusters) const;

 private:
  Design(DesignKind kind, int k) : kind_(kind), k_(k) {}

  DesignKind kind_;
  int k_;
  int block_size_ = 0;
  std::vector<std::vector<int>> blocks_;
  Matrix root_;
};

ClusterTreatment mask_to_treatment(std::uint32_t mask, int k);

}  // namespace covdesign

#endif  // COVDESIGN_DESIGNS_H_
