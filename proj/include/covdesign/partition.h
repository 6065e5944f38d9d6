#ifndef COVDESIGN_PARTITION_H_
#define COVDESIGN_PARTITION_H_

#include <cstdint>
#include <span>
#include <vector>

namespace covdesign {

// A partition of units 0..n-1 into K non-empty clusters with ids 0..K-1.
class Clustering {
 public:
  Clustering() = default;
  // Throws InvalidArgument unless ids are exactly 0..k-1 and all used.
  Clustering(std::vector<int> assignment, int k);

  // Compacts arbitrary non-negative labels onto 0..K-1 in increasing label
  // order. `compacted` is set when the labels were not already contiguous.
  static Clustering from_labels(std::span<const std::int64_t> labels,
                                bool* compacted = nullptr);

  int num_units() const { return static_cast<int>(assignment_.size()); }
  int num_clusters() const { return k_; }
  int cluster_of(int unit) const { return assignment_[unit]; }
  std::span<const int> assignment() const { return assignment_; }
  const std::vector<int>& sizes() const { return sizes_; }
  std::vector<std::vector<int>> members() const;

  bool operator==(const Clustering& other) const {
    return k_ == other.k_ && assignment_ == other.assignment_;
  }

 private:
  std::vector<int> assignment_;
  std::vector<int> sizes_;
  int k_ = 0;
};

}  // namespace covdesign

#endif  // COVDESIGN_PARTITION_H_
