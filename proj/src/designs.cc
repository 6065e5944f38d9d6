#include "covdesign/designs.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include "covdesign/correlation_root.h"
#include "covdesign/error.h"
#include "covdesign/kernels.h"

namespace covdesign {
namespace {

// Picks `count` distinct positions of `pool` uniformly and marks them.
void choose_treated(std::span<const int> pool, int count, Rng& rng,
                    ClusterTreatment& t) {
  std::vector<int> scratch(pool.begin(), pool.end());
  for (int i = 0; i < count; ++i) {
    const auto j = i + static_cast<int>(rng.below(scratch.size() - i));
    std::swap(scratch[i], scratch[j]);
    t[scratch[i]] = 1;
  }
}

int treated_count(int size, Rng& rng) {
  if (size % 2 == 0) return size / 2;
  return rng.coin() ? size / 2 + 1 : size / 2;
}

double binomial(int n, int r) {
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

// Masks over `members` (bit members[i] set when position i is treated) with
// the complete-randomisation law on that group.
std::vector<Outcome> complete_law(std::span<const int> members) {
  const int size = static_cast<int>(members.size());
  std::vector<int> counts;
  if (size % 2 == 0) {
    counts = {size / 2};
  } else {
    counts = {size / 2, size / 2 + 1};
  }
  std::vector<Outcome> out;
  for (std::uint32_t local = 0; local < (1u << size); ++local) {
    const int ones = std::popcount(local);
    if (std::find(counts.begin(), counts.end(), ones) == counts.end()) continue;
    std::uint32_t mask = 0;
    for (int i = 0; i < size; ++i)
      if (local >> i & 1u) mask |= 1u << members[i];
    out.push_back({mask, 1.0 / (counts.size() * binomial(size, ones))});
  }
  return out;
}

std::vector<Outcome> product(const std::vector<Outcome>& a, const std::vector<Outcome>& b) {
  std::vector<Outcome> out;
  out.reserve(a.size() * b.size());
  for (const Outcome& x : a)
    for (const Outcome& y : b) out.push_back({x.mask | y.mask, x.probability * y.probability});
  return out;
}

// Groups of rows connected through non-zero inner products. Rows in
// different groups are orthogonal, so their Gaussian projections are
// independent.
std::vector<std::vector<int>> orthogonal_components(const Matrix& gram) {
  const int k = static_cast<int>(gram.rows());
  std::vector<int> label(k, -1);
  std::vector<std::vector<int>> groups;
  for (int s = 0; s < k; ++s) {
    if (label[s] >= 0) continue;
    std::vector<int> group{s};
    label[s] = static_cast<int>(groups.size());
    for (std::size_t q = 0; q < group.size(); ++q) {
      for (int j = 0; j < k; ++j) {
        if (label[j] < 0 && std::abs(gram(group[q], j)) > 1e-12) {
          label[j] = label[s];
          group.push_back(j);
        }
      }
    }
    std::sort(group.begin(), group.end());
    groups.push_back(std::move(group));
  }
  return groups;
}

// Planar angle of each row inside a rank <= 2 group, or nullopt if the group
// spans more than two dimensions.
std::optional<std::vector<double>> planar_angles(const Matrix& root,
                                                 std::span<const int> group) {
  constexpr double kTol = 1e-9;
  const std::size_t dim = root.cols();
  const auto& kern = kernels::active();
  std::vector<double> u1(root.row(group[0]).begin(), root.row(group[0]).end());
  std::vector<double> u2(dim, 0.0);
  double best = 0.0;
  for (int r : group) {
    const auto row = root.row(r);
    const double a = kern.dot(row.data(), u1.data(), dim);
    std::vector<double> resid(dim);
    for (std::size_t c = 0; c < dim; ++c) resid[c] = row[c] - a * u1[c];
    const double norm = std::sqrt(kern.dot(resid.data(), resid.data(), dim));
    if (norm > best) {
      best = norm;
      for (std::size_t c = 0; c < dim; ++c) u2[c] = resid[c] / norm;
    }
  }
  if (best <= kTol) std::fill(u2.begin(), u2.end(), 0.0);
  std::vector<double> angles;
  for (int r : group) {
    const auto row = root.row(r);
    const double a = kern.dot(row.data(), u1.data(), dim);
    const double b = kern.dot(row.data(), u2.data(), dim);
    double off = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double e = row[c] - a * u1[c] - b * u2[c];
      off += e * e;
    }
    if (std::sqrt(off) > kTol) return std::nullopt;
    angles.push_back(std::atan2(b, a));
  }
  return angles;
}

// Law of the sign pattern of a rank <= 2 group. The projection of eta onto
// the plane has a uniform direction theta, and row k is treated exactly when
// cos(theta - phi_k) >= 0, so each pattern's probability is an arc length.
std::vector<Outcome> planar_law(std::span<const int> group,
                                std::span<const double> angles) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::vector<double> cuts{0.0, kTwoPi};
  for (double phi : angles) {
    for (double edge : {phi - std::numbers::pi / 2, phi + std::numbers::pi / 2}) {
      double e = std::fmod(edge, kTwoPi);
      if (e < 0) e += kTwoPi;
      cuts.push_back(e);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::map<std::uint32_t, double> law;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double width = cuts[i + 1] - cuts[i];
    if (width <= 0.0) continue;
    const double theta = 0.5 * (cuts[i] + cuts[i + 1]);
    std::uint32_t mask = 0;
    for (std::size_t r = 0; r < group.size(); ++r)
      if (std::cos(theta - angles[r]) >= 0.0) mask |= 1u << group[r];
    law[mask] += width / kTwoPi;
  }
  std::vector<Outcome> out;
  for (auto [mask, p] : law) out.push_back({mask, p});
  return out;
}

}  // namespace

ClusterTreatment sample_bernoulli(int k, Rng& rng) {
  ClusterTreatment t(k);
  for (auto& v : t) v = rng.coin() ? 1 : 0;
  return t;
}

ClusterTreatment sample_complete(int k, Rng& rng) {
  ClusterTreatment t(k, 0);
  std::vector<int> all(k);
  std::iota(all.begin(), all.end(), 0);
  choose_treated(all, treated_count(k, rng), rng, t);
  return t;
}

ClusterTreatment sample_ibr(std::span<const std::vector<int>> blocks, int k, Rng& rng) {
  ClusterTreatment t(k, 0);
  for (const auto& block : blocks) {
    choose_treated(block, treated_count(static_cast<int>(block.size()), rng), rng, t);
  }
  return t;
}

ClusterTreatment sample_ocd(const Matrix& root, Rng& rng) {
  const std::size_t k = root.rows();
  std::vector<double> eta(root.cols());
  for (double& e : eta) e = rng.normal();
  std::vector<double> projected(k);
  const auto& kern = kernels::active();
  for (std::size_t i = 0; i < k; ++i)
    projected[i] = kern.dot(root.row(i).data(), eta.data(), eta.size());
  ClusterTreatment t(k);
  kern.sign_mask(projected.data(), t.data(), k);
  return t;
}

std::vector<std::vector<int>> build_ibr_blocks(std::span<const int> cluster_sizes,
                                               int block_size) {
  if (block_size < 2 || block_size % 2 != 0)
    throw InvalidArgument("IBR block size must be an even integer >= 2, got " +
                          std::to_string(block_size));
  const int k = static_cast<int>(cluster_sizes.size());
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return cluster_sizes[a] > cluster_sizes[b];
  });
  std::vector<std::vector<int>> blocks;
  int pos = 0;
  for (; pos + block_size <= k; pos += block_size)
    blocks.emplace_back(order.begin() + pos, order.begin() + pos + block_size);
  const int rest = k - pos;
  const int even_part = rest - rest % 2;
  if (even_part > 0) {
    blocks.emplace_back(order.begin() + pos, order.begin() + pos + even_part);
    pos += even_part;
  }
  if (pos < k) blocks.push_back({order[pos]});
  return blocks;
}

Design Design::bernoulli(int k) {
  if (k < 1) throw InvalidArgument("design needs K >= 1");
  return Design(DesignKind::kBernoulli, k);
}

Design Design::complete(int k) {
  if (k < 1) throw InvalidArgument("design needs K >= 1");
  return Design(DesignKind::kComplete, k);
}

Design Design::ibr(std::vector<std::vector<int>> blocks, int k, int block_size) {
  if (k < 1) throw InvalidArgument("design needs K >= 1");
  std::vector<int> seen(k, 0);
  for (const auto& b : blocks) {
    if (b.size() > 1 && b.size() % 2 != 0)
      throw InvalidArgument("IBR blocks must have even size or size 1");
    for (int c : b) {
      if (c < 0 || c >= k || seen[c]++)
        throw InvalidArgument("IBR blocks must partition clusters 0..K-1");
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw InvalidArgument("IBR blocks must partition clusters 0..K-1");
  Design d(DesignKind::kIbr, k);
  d.blocks_ = std::move(blocks);
  d.block_size_ = block_size;
  return d;
}

Design Design::ocd(Matrix root) {
  if (!root.square() || root.rows() == 0)
    throw InvalidArgument("correlation root must be a non-empty square matrix");
  if (max_row_norm_error(root) > 1e-9)
    throw InvalidArgument("correlation root rows must have unit 2-norm");
  Design d(DesignKind::kOcd, static_cast<int>(root.rows()));
  d.root_ = std::move(root);
  return d;
}

std::string Design::name() const {
  switch (kind_) {
    case DesignKind::kBernoulli:
      return "ber";
    case DesignKind::kComplete:
      return "cr";
    case DesignKind::kIbr:
      return block_size_ == 2 ? "ibr-p" : "ibr-" + std::to_string(block_size_);
    case DesignKind::kOcd:
      return "ocd";
  }
  return "?";
}

ClusterTreatment Design::sample(Rng& rng) const {
  switch (kind_) {
    case DesignKind::kBernoulli:
      return sample_bernoulli(k_, rng);
    case DesignKind::kComplete:
      return sample_complete(k_, rng);
    case DesignKind::kIbr:
      return sample_ibr(blocks_, k_, rng);
    case DesignKind::kOcd:
      return sample_ocd(root_, rng);
  }
  return {};
}

Matrix Design::covariance() const {
  Matrix cov(k_, k_);
  for (int i = 0; i < k_; ++i) cov(i, i) = 0.25;
  switch (kind_) {
    case DesignKind::kBernoulli:
      break;
    case DesignKind::kComplete: {
      if (k_ == 1) break;
      const double off = k_ % 2 == 0 ? -0.25 / (k_ - 1) : -0.25 / k_;
      for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j)
          if (i != j) cov(i, j) = off;
      break;
    }
    case DesignKind::kIbr:
      for (const auto& block : blocks_) {
        if (block.size() < 2) continue;
        const double off = -0.25 / (static_cast<double>(block.size()) - 1.0);
        for (int a : block)
          for (int b : block)
            if (a != b) cov(a, b) = off;
      }
      break;
    case DesignKind::kOcd:
      return covariance_from_root(root_);
  }
  return cov;
}

bool Design::enumerable(int max_clusters) const {
  if (k_ > max_clusters || k_ > kMaxEnumerationClusters) return false;
  if (kind_ != DesignKind::kOcd) return true;
  const Matrix gram = multiply_abt(root_, root_);
  for (const auto& group : orthogonal_components(gram))
    if (!planar_angles(root_, group)) return false;
  return true;
}

std::vector<Outcome> Design::enumerate(int max_clusters) const {
  if (k_ > max_clusters || k_ > kMaxEnumerationClusters) {
    throw InvalidArgument("cannot enumerate K=" + std::to_string(k_) +
                          " clusters (limit " +
                          std::to_string(std::min(max_clusters, kMaxEnumerationClusters)) +
                          ")");
  }
  std::vector<Outcome> law{{0u, 1.0}};
  switch (kind_) {
    case DesignKind::kBernoulli:
      for (int c = 0; c < k_; ++c) law = product(law, {{0u, 0.5}, {1u << c, 0.5}});
      break;
    case DesignKind::kComplete: {
      std::vector<int> all(k_);
      std::iota(all.begin(), all.end(), 0);
      law = complete_law(all);
      break;
    }
    case DesignKind::kIbr:
      for (const auto& block : blocks_) law = product(law, complete_law(block));
      break;
    case DesignKind::kOcd: {
      const Matrix gram = multiply_abt(root_, root_);
      for (const auto& group : orthogonal_components(gram)) {
        const auto angles = planar_angles(root_, group);
        if (!angles) {
          throw InvalidArgument(
              "Gaussian-sign design is not enumerable: a group of correlated rows "
              "spans more than two dimensions");
        }
        law = product(law, planar_law(group, *angles));
      }
      break;
    }
  }
  return law;
}

ClusterTreatment mask_to_treatment(std::uint32_t mask, int k) {
  ClusterTreatment t(k);
  for (int i = 0; i < k; ++i) t[i] = (mask >> i) & 1u;
  return t;
}

}  // namespace covdesign
