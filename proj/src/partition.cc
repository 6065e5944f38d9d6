#include "covdesign/partition.h"

#include <algorithm>
#include <map>
#include <string>

#include "covdesign/error.h"

namespace covdesign {

Clustering::Clustering(std::vector<int> assignment, int k)
    : assignment_(std::move(assignment)), sizes_(std::max(k, 0), 0), k_(k) {
  if (k < 0) throw InvalidArgument("cluster count must be non-negative");
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    const int c = assignment_[i];
    if (c < 0 || c >= k) {
      throw InvalidArgument("unit " + std::to_string(i) + " has cluster id " +
                            std::to_string(c) + " outside [0, " +
                            std::to_string(k) + ")");
    }
    ++sizes_[c];
  }
  for (int c = 0; c < k; ++c) {
    if (sizes_[c] == 0)
      throw InvalidArgument("cluster " + std::to_string(c) + " is empty");
  }
}

Clustering Clustering::from_labels(std::span<const std::int64_t> labels,
                                   bool* compacted) {
  std::map<std::int64_t, int> remap;
  for (std::int64_t l : labels) {
    if (l < 0) throw InvalidArgument("negative cluster label " + std::to_string(l));
    remap.emplace(l, 0);
  }
  int next = 0;
  bool changed = false;
  for (auto& [label, id] : remap) {
    id = next++;
    changed = changed || label != id;
  }
  std::vector<int> assignment(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) assignment[i] = remap[labels[i]];
  if (compacted != nullptr) *compacted = changed;
  return Clustering(std::move(assignment), next);
}

std::vector<std::vector<int>> Clustering::members() const {
  std::vector<std::vector<int>> out(k_);
  for (int c = 0; c < k_; ++c) out[c].reserve(sizes_[c]);
  for (int i = 0; i < num_units(); ++i) out[assignment_[i]].push_back(i);
  return out;
}

}  // namespace covdesign
