#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lnu {

inline constexpr double kNormalizationTolerance = 1e-6;

/// Per-node probability vectors over k label classes, stored row-major.
///
/// Rows must be nonnegative and sum to 1 within kNormalizationTolerance;
/// rows inside the tolerance are renormalized exactly, rows outside it are
/// rejected.
class DistributionTable {
 public:
  DistributionTable() = default;
  DistributionTable(std::size_t k, std::vector<double> row_major);

  std::size_t num_nodes() const { return k_ == 0 ? 0 : data_.size() / k_; }
  std::size_t num_classes() const { return k_; }
  std::span<const double> row(std::size_t v) const { return {data_.data() + v * k_, k_}; }
  const std::vector<double>& data() const { return data_; }

  /// Class with the largest probability; ties go to the smaller class id.
  int argmax(std::size_t v) const;
  std::vector<int> predictions() const;

  /// Label non-uniformity per node.
  std::vector<double> non_uniformity() const;

  bool operator==(const DistributionTable&) const = default;

 private:
  std::size_t k_ = 0;
  std::vector<double> data_;
};

/// w(mu) = sum_s |mu(s) - 1/k|. Lies in [0, 2(1 - 1/k)].
double non_uniformity(std::span<const double> mu);

/// Squared 2-Wasserstein distance under the discrete metric:
/// (1/2) sum_i |mu_i - nu_i|.
double wasserstein_sq_discrete(std::span<const double> mu, std::span<const double> nu);

/// k x k transport plan with row sums mu, column sums nu and diagonal
/// min(mu_i, nu_i), stored row-major.
struct Coupling {
  std::size_t k = 0;
  std::vector<double> plan;

  double at(std::size_t i, std::size_t j) const { return plan[i * k + j]; }
  /// Mass moved off the diagonal, i.e. the cost under the discrete metric.
  double transport_cost() const;
};

/// Builds the plan by repeatedly pairing a class with surplus (mu_i >= nu_i)
/// against a class with deficit, fixing both diagonal entries and merging the
/// leftover row and column into one smaller problem.
Coupling optimal_coupling(std::span<const double> mu, std::span<const double> nu);

/// Throws unless mu is nonnegative and sums to 1 within tolerance.
void validate_distribution(std::span<const double> mu, const char* what);

}  // namespace lnu
