#include "lnu/nonuniformity.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "lnu/error.hpp"

namespace lnu {

void validate_distribution(std::span<const double> mu, const char* what) {
  if (mu.empty()) throw Error(std::string(what) + ": empty distribution");
  double sum = 0.0;
  for (double p : mu) {
    if (!std::isfinite(p) || p < 0.0) throw Error(std::string(what) + ": negative or non-finite probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    std::ostringstream msg;
    msg << what << ": probabilities sum to " << sum;
    throw Error(msg.str());
  }
}

DistributionTable::DistributionTable(std::size_t k, std::vector<double> row_major)
    : k_(k), data_(std::move(row_major)) {
  if (k_ == 0) throw Error("DistributionTable: zero classes");
  if (data_.size() % k_ != 0) throw Error("DistributionTable: data size is not a multiple of k");
  for (std::size_t v = 0; v < num_nodes(); ++v) {
    std::span<double> r(data_.data() + v * k_, k_);
    try {
      validate_distribution(r, "DistributionTable");
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " (row " + std::to_string(v) + ")");
    }
    const double sum = std::accumulate(r.begin(), r.end(), 0.0);
    for (double& p : r) p /= sum;
  }
}

int DistributionTable::argmax(std::size_t v) const {
  const auto r = row(v);
  std::size_t best = 0;
  for (std::size_t s = 1; s < r.size(); ++s) {
    if (r[s] > r[best]) best = s;
  }
  return static_cast<int>(best);
}

std::vector<int> DistributionTable::predictions() const {
  std::vector<int> out(num_nodes());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = argmax(v);
  return out;
}

std::vector<double> DistributionTable::non_uniformity() const {
  std::vector<double> out(num_nodes());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = lnu::non_uniformity(row(v));
  return out;
}

double non_uniformity(std::span<const double> mu) {
  validate_distribution(mu, "non_uniformity");
  const double uniform = 1.0 / static_cast<double>(mu.size());
  double w = 0.0;
  for (double p : mu) w += std::abs(p - uniform);
  return w;
}

double wasserstein_sq_discrete(std::span<const double> mu, std::span<const double> nu) {
  if (mu.size() != nu.size()) throw Error("wasserstein_sq_discrete: supports differ in size");
  validate_distribution(mu, "wasserstein_sq_discrete");
  validate_distribution(nu, "wasserstein_sq_discrete");
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) total += std::abs(mu[i] - nu[i]);
  return 0.5 * total;
}

double Coupling::transport_cost() const {
  double cost = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) cost += at(i, j);
    }
  }
  return cost;
}

Coupling optimal_coupling(std::span<const double> mu, std::span<const double> nu) {
  if (mu.size() != nu.size()) throw Error("optimal_coupling: supports differ in size");
  validate_distribution(mu, "optimal_coupling");
  validate_distribution(nu, "optimal_coupling");
  const std::size_t k = mu.size();
  Coupling out{k, std::vector<double>(k * k, 0.0)};

  // Active pairs (row r, column c) with residual masses; initially r == c.
  struct Pair {
    std::size_t row;
    std::size_t col;
    double x;
    double y;
  };
  std::vector<Pair> active;
  active.reserve(k);
  for (std::size_t i = 0; i < k; ++i) active.push_back({i, i, mu[i], nu[i]});

  while (active.size() > 1) {
    std::size_t surplus = 0;
    std::size_t deficit = 0;
    for (std::size_t p = 1; p < active.size(); ++p) {
      if (active[p].x - active[p].y > active[surplus].x - active[surplus].y) surplus = p;
      if (active[p].x - active[p].y < active[deficit].x - active[deficit].y) deficit = p;
    }
    if (surplus == deficit) deficit = surplus == 0 ? 1 : 0;  // all differences equal (zero)
    const Pair s = active[surplus];
    const Pair d = active[deficit];
    // Surplus pair: its column is filled completely by its own row.
    out.plan[s.row * k + s.col] += s.y;
    // Deficit pair: its row is emptied completely into its own column.
    out.plan[d.row * k + d.col] += d.x;
    const Pair merged{s.row, d.col, std::max(0.0, s.x - s.y), std::max(0.0, d.y - d.x)};
    const std::size_t hi = std::max(surplus, deficit);
    const std::size_t lo = std::min(surplus, deficit);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(hi));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(lo));
    active.push_back(merged);
  }
  const Pair& last = active.front();
  out.plan[last.row * k + last.col] += 0.5 * (last.x + last.y);
  return out;
}

}  // namespace lnu
