#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lnu/graph.hpp"
#include "lnu/nonuniformity.hpp"
#include "lnu/split.hpp"

namespace lnu {

using FeatureMatrix = Eigen::MatrixXd;
using PropagationMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Two-layer GCN weights: logits = A relu(A X W1) W2.
struct GcnParams {
  Eigen::MatrixXd w1;  // d x h
  Eigen::MatrixXd w2;  // h x k

  Eigen::Index input_dim() const { return w1.rows(); }
  Eigen::Index hidden() const { return w1.cols(); }
  Eigen::Index classes() const { return w2.cols(); }
};

struct TrainConfig {
  int hidden = 16;
  double learning_rate = 0.01;
  double weight_decay = 5e-4;  // applied to W1 only
  int epochs = 200;
  int patience = 20;
  double dropout = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochRecord {
  double train_loss = 0.0;  // loss of the dropout forward pass used for the update
  double val_loss = 0.0;    // inference-mode loss on the validation set
};

struct TrainedModel {
  GcnParams params;
  PropagationMatrix adjacency;
  DistributionTable distributions;
  std::vector<EpochRecord> history;
  int best_epoch = -1;  // -1 when no epoch ran
};

/// D^-1/2 (A + I) D^-1/2 with degrees counted including the self-loop.
PropagationMatrix normalize_adjacency(const Graph& g);

/// Row-wise softmax with max subtraction.
DistributionTable softmax_rows(const Eigen::MatrixXd& logits);

struct ForwardResult {
  Eigen::MatrixXd logits;
  DistributionTable distributions;
};

/// Inference-mode forward pass (no dropout).
ForwardResult forward(const PropagationMatrix& adjacency, const FeatureMatrix& features, const GcnParams& params);

/// Mean over mask of -ln mu_v(y_v); probabilities are floored at 1e-15.
double masked_cross_entropy(const DistributionTable& dist, std::span<const int> labels, const NodeSet& mask);

struct LossGradients {
  double loss = 0.0;
  Eigen::MatrixXd w1;
  Eigen::MatrixXd w2;
};

/// Inference-mode objective masked_cross_entropy + (decay/2)|W1|^2 and its
/// analytic gradient.
LossGradients loss_and_gradients(const PropagationMatrix& adjacency, const FeatureMatrix& features,
                                 const GcnParams& params, std::span<const int> labels, const NodeSet& mask,
                                 double weight_decay = 0.0);

/// Glorot-uniform weights drawn from a stream derived from `seed`.
GcnParams glorot_init(Eigen::Index input_dim, Eigen::Index hidden, Eigen::Index classes, std::uint64_t seed);

/// Adam training with dropout, keeping the parameters of the epoch with the
/// lowest validation loss (train loss when the validation set is empty) and
/// stopping after `patience` epochs without improvement. Labels are read on
/// train and validation nodes only. Deterministic in cfg.seed.
TrainedModel train(const Graph& g, const FeatureMatrix& features, std::span<const int> labels,
                   std::size_t num_classes, const Split& split, const TrainConfig& cfg);

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped_kinks = 0;  // perturbations that flipped a relu
};

/// Central-difference check of loss_and_gradients over (at most max_samples)
/// parameters. A parameter is skipped when its +/- eps perturbations change
/// which hidden pre-activations are positive.
GradientCheckResult gradient_check(const Graph& g, const FeatureMatrix& features, std::span<const int> labels,
                                   const NodeSet& mask, const GcnParams& params, double eps = 1e-5,
                                   double weight_decay = 0.0, std::size_t max_samples = 400);

/// Fraction of mask nodes whose prediction equals the truth.
double accuracy(std::span<const int> predictions, std::span<const int> truth, const NodeSet& mask);

void save_checkpoint(const std::filesystem::path& path, const GcnParams& params);
GcnParams load_checkpoint(const std::filesystem::path& path);

}  // namespace lnu
