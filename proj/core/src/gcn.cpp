#include "lnu/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "json.hpp"
#include "lnu/io_util.hpp"
#include "rng.hpp"
#include "lnu/error.hpp"

namespace lnu {
namespace {

constexpr double kLogFloor = 1e-15;

// Inverted-dropout mask: entries 0 with probability p, else 1/(1-p).
Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, std::mt19937_64& rng) {
  Eigen::MatrixXd mask(rows, cols);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double keep = 1.0 / (1.0 - p);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) mask(i, j) = unit(rng) < p ? 0.0 : keep;
  }
  return mask;
}

Eigen::MatrixXd softmax_matrix(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index v = 0; v < logits.rows(); ++v) {
    const double top = logits.row(v).maxCoeff();
    out.row(v) = (logits.row(v).array() - top).exp().matrix();
    out.row(v) /= out.row(v).sum();
  }
  return out;
}

double log_softmax_at(const Eigen::MatrixXd& logits, Eigen::Index v, int label) {
  const double top = logits.row(v).maxCoeff();
  const double lse = top + std::log((logits.row(v).array() - top).exp().sum());
  return logits(v, label) - lse;
}

struct Pass {
  Eigen::MatrixXd inputs;  // features after dropout
  Eigen::MatrixXd pre;     // A X W1
  Eigen::MatrixXd hidden;  // relu(pre) after dropout
  Eigen::MatrixXd hidden_mask;
  Eigen::MatrixXd logits;
};

Pass run_forward(const PropagationMatrix& adj, const FeatureMatrix& x, const GcnParams& p, double dropout,
                 std::mt19937_64* rng) {
  Pass pass;
  if (rng && dropout > 0.0) {
    pass.inputs = x.cwiseProduct(dropout_mask(x.rows(), x.cols(), dropout, *rng));
  } else {
    pass.inputs = x;
  }
  pass.pre = adj * (pass.inputs * p.w1);
  Eigen::MatrixXd h = pass.pre.cwiseMax(0.0);
  if (rng && dropout > 0.0) {
    pass.hidden_mask = dropout_mask(h.rows(), h.cols(), dropout, *rng);
    pass.hidden = h.cwiseProduct(pass.hidden_mask);
  } else {
    pass.hidden = std::move(h);
  }
  pass.logits = adj * (pass.hidden * p.w2);
  return pass;
}

double masked_logit_loss(const Eigen::MatrixXd& logits, std::span<const int> labels, const std::vector<NodeId>& mask) {
  double total = 0.0;
  for (NodeId v : mask) total -= log_softmax_at(logits, v, labels[static_cast<std::size_t>(v)]);
  return total / static_cast<double>(mask.size());
}

LossGradients backward(const PropagationMatrix& adj, const Pass& pass, const GcnParams& p, std::span<const int> labels,
                       const std::vector<NodeId>& mask, double weight_decay) {
  LossGradients out;
  out.loss = masked_logit_loss(pass.logits, labels, mask) + 0.5 * weight_decay * p.w1.squaredNorm();
  const Eigen::MatrixXd probs = softmax_matrix(pass.logits);
  Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(probs.rows(), probs.cols());
  const double scale = 1.0 / static_cast<double>(mask.size());
  for (NodeId v : mask) {
    d_logits.row(v) = probs.row(v) * scale;
    d_logits(v, labels[static_cast<std::size_t>(v)]) -= scale;
  }
  // The propagation matrix is symmetric, so A^T dZ = A dZ.
  const Eigen::MatrixXd d_hw = adj * d_logits;
  out.w2 = pass.hidden.transpose() * d_hw;
  Eigen::MatrixXd d_hidden = d_hw * p.w2.transpose();
  if (pass.hidden_mask.size() > 0) d_hidden = d_hidden.cwiseProduct(pass.hidden_mask);
  const Eigen::MatrixXd d_pre = (pass.pre.array() > 0.0).select(d_hidden, 0.0);
  const Eigen::MatrixXd d_xw = adj * d_pre;
  out.w1 = pass.inputs.transpose() * d_xw + weight_decay * p.w1;
  return out;
}

void check_shapes(const PropagationMatrix& adj, const FeatureMatrix& x, const GcnParams& p) {
  if (adj.rows() != x.rows()) throw Error("gcn: feature rows do not match node count");
  if (p.w1.rows() != x.cols()) throw Error("gcn: W1 rows do not match feature dimension");
  if (p.w2.rows() != p.w1.cols()) throw Error("gcn: W2 rows do not match hidden width");
}

void check_labels(std::span<const int> labels, const NodeSet& mask, std::size_t k, const char* what) {
  for (NodeId v : mask.members()) {
    const int y = labels[static_cast<std::size_t>(v)];
    if (y < 0 || static_cast<std::size_t>(y) >= k) {
      throw Error(std::string(what) + ": node " + std::to_string(v) + " has no valid label");
    }
  }
}

struct AdamState {
  Eigen::MatrixXd m;
  Eigen::MatrixXd v;

  void step(Eigen::MatrixXd& w, const Eigen::MatrixXd& grad, double lr, int t) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    if (m.size() == 0) {
      m = Eigen::MatrixXd::Zero(w.rows(), w.cols());
      v = Eigen::MatrixXd::Zero(w.rows(), w.cols());
    }
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(beta1, t);
    const double c2 = 1.0 - std::pow(beta2, t);
    w.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  }
};

}  // namespace

void TrainConfig::validate() const {
  if (hidden <= 0) throw Error("TrainConfig: hidden width must be positive");
  if (!(learning_rate > 0.0)) throw Error("TrainConfig: learning rate must be positive");
  if (weight_decay < 0.0) throw Error("TrainConfig: weight decay must be nonnegative");
  if (epochs < 0) throw Error("TrainConfig: epochs must be nonnegative");
  if (patience <= 0) throw Error("TrainConfig: patience must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error("TrainConfig: dropout must lie in [0, 1)");
}

PropagationMatrix normalize_adjacency(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  std::vector<double> inv_sqrt(g.num_nodes());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(static_cast<NodeId>(v)) + 1));
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.num_nodes() + 2 * g.num_edges());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    const auto i = static_cast<Eigen::Index>(v);
    triplets.emplace_back(i, i, inv_sqrt[v] * inv_sqrt[v]);
    for (NodeId u : g.neighbors(static_cast<NodeId>(v))) {
      triplets.emplace_back(i, u, inv_sqrt[v] * inv_sqrt[static_cast<std::size_t>(u)]);
    }
  }
  PropagationMatrix adj(n, n);
  adj.setFromTriplets(triplets.begin(), triplets.end());
  return adj;
}

DistributionTable softmax_rows(const Eigen::MatrixXd& logits) {
  const Eigen::MatrixXd probs = softmax_matrix(logits);
  std::vector<double> data(static_cast<std::size_t>(probs.size()));
  for (Eigen::Index v = 0; v < probs.rows(); ++v) {
    for (Eigen::Index s = 0; s < probs.cols(); ++s) {
      data[static_cast<std::size_t>(v * probs.cols() + s)] = probs(v, s);
    }
  }
  return DistributionTable(static_cast<std::size_t>(probs.cols()), std::move(data));
}

ForwardResult forward(const PropagationMatrix& adjacency, const FeatureMatrix& features, const GcnParams& params) {
  check_shapes(adjacency, features, params);
  Pass pass = run_forward(adjacency, features, params, 0.0, nullptr);
  ForwardResult out;
  out.distributions = softmax_rows(pass.logits);
  out.logits = std::move(pass.logits);
  return out;
}

double masked_cross_entropy(const DistributionTable& dist, std::span<const int> labels, const NodeSet& mask) {
  if (mask.empty()) throw Error("masked_cross_entropy: empty mask");
  double total = 0.0;
  for (NodeId v : mask.members()) {
    const double p = dist.row(static_cast<std::size_t>(v))[static_cast<std::size_t>(labels[static_cast<std::size_t>(v)])];
    total -= std::log(std::max(p, kLogFloor));
  }
  return total / static_cast<double>(mask.size());
}

LossGradients loss_and_gradients(const PropagationMatrix& adjacency, const FeatureMatrix& features,
                                 const GcnParams& params, std::span<const int> labels, const NodeSet& mask,
                                 double weight_decay) {
  check_shapes(adjacency, features, params);
  if (mask.empty()) throw Error("loss_and_gradients: empty mask");
  check_labels(labels, mask, static_cast<std::size_t>(params.classes()), "loss_and_gradients");
  const Pass pass = run_forward(adjacency, features, params, 0.0, nullptr);
  return backward(adjacency, pass, params, labels, mask.members(), weight_decay);
}

GcnParams glorot_init(Eigen::Index input_dim, Eigen::Index hidden, Eigen::Index classes, std::uint64_t seed) {
  auto rng = detail::derived_stream(seed, 1);
  auto fill = [&rng](Eigen::Index rows, Eigen::Index cols) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) w(i, j) = dist(rng);
    }
    return w;
  };
  GcnParams p;
  p.w1 = fill(input_dim, hidden);
  p.w2 = fill(hidden, classes);
  return p;
}

TrainedModel train(const Graph& g, const FeatureMatrix& features, std::span<const int> labels,
                   std::size_t num_classes, const Split& split, const TrainConfig& cfg) {
  cfg.validate();
  split.validate();
  if (static_cast<std::size_t>(features.rows()) != g.num_nodes()) {
    throw Error("train: feature rows do not match node count");
  }
  if (labels.size() != g.num_nodes()) throw Error("train: label count does not match node count");
  check_labels(labels, split.train, num_classes, "train");
  check_labels(labels, split.val, num_classes, "train");

  TrainedModel model;
  model.adjacency = normalize_adjacency(g);
  GcnParams params = glorot_init(features.cols(), cfg.hidden, static_cast<Eigen::Index>(num_classes), cfg.seed);
  auto dropout_rng = detail::derived_stream(cfg.seed, 2);

  const auto train_nodes = split.train.members();
  const auto val_nodes = split.val.members();
  const auto& select_nodes = val_nodes.empty() ? train_nodes : val_nodes;

  GcnParams best = params;
  double best_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;
  AdamState adam_w1;
  AdamState adam_w2;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const Pass pass = run_forward(model.adjacency, features, params, cfg.dropout, &dropout_rng);
    const LossGradients grads = backward(model.adjacency, pass, params, labels, train_nodes, cfg.weight_decay);
    adam_w1.step(params.w1, grads.w1, cfg.learning_rate, epoch + 1);
    adam_w2.step(params.w2, grads.w2, cfg.learning_rate, epoch + 1);

    const Pass eval = run_forward(model.adjacency, features, params, 0.0, nullptr);
    const double select_loss = masked_logit_loss(eval.logits, labels, select_nodes);
    model.history.push_back({grads.loss, val_nodes.empty() ? 0.0 : select_loss});
    if (select_loss < best_loss) {
      best_loss = select_loss;
      best = params;
      model.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  model.params = std::move(best);
  model.distributions = forward(model.adjacency, features, model.params).distributions;
  return model;
}

GradientCheckResult gradient_check(const Graph& g, const FeatureMatrix& features, std::span<const int> labels,
                                   const NodeSet& mask, const GcnParams& params, double eps, double weight_decay,
                                   std::size_t max_samples) {
  const PropagationMatrix adj = normalize_adjacency(g);
  const LossGradients analytic = loss_and_gradients(adj, features, params, labels, mask, weight_decay);
  const auto mask_nodes = mask.members();

  auto objective = [&](const GcnParams& p, Eigen::MatrixXd* pre_out) {
    Pass pass = run_forward(adj, features, p, 0.0, nullptr);
    if (pre_out) *pre_out = pass.pre;
    return masked_logit_loss(pass.logits, labels, mask_nodes) + 0.5 * weight_decay * p.w1.squaredNorm();
  };

  GradientCheckResult result;
  const auto total = static_cast<std::size_t>(params.w1.size() + params.w2.size());
  const std::size_t stride = std::max<std::size_t>(1, total / std::max<std::size_t>(1, max_samples));
  for (std::size_t flat = 0; flat < total; flat += stride) {
    const bool first = flat < static_cast<std::size_t>(params.w1.size());
    const auto idx = static_cast<Eigen::Index>(first ? flat : flat - static_cast<std::size_t>(params.w1.size()));
    GcnParams plus = params;
    GcnParams minus = params;
    (first ? plus.w1 : plus.w2).data()[idx] += eps;
    (first ? minus.w1 : minus.w2).data()[idx] -= eps;
    Eigen::MatrixXd pre_plus;
    Eigen::MatrixXd pre_minus;
    const double f_plus = objective(plus, &pre_plus);
    const double f_minus = objective(minus, &pre_minus);
    if (((pre_plus.array() > 0.0) != (pre_minus.array() > 0.0)).any()) {
      ++result.skipped_kinks;
      continue;
    }
    const double numeric = (f_plus - f_minus) / (2.0 * eps);
    const double exact = (first ? analytic.w1 : analytic.w2).data()[idx];
    const double rel = std::abs(exact - numeric) / (std::abs(exact) + std::abs(numeric) + 1e-12);
    result.max_relative_error = std::max(result.max_relative_error, rel);
    ++result.checked;
  }
  return result;
}

double accuracy(std::span<const int> predictions, std::span<const int> truth, const NodeSet& mask) {
  if (mask.empty()) throw Error("accuracy: empty mask");
  std::size_t correct = 0;
  for (NodeId v : mask.members()) {
    if (predictions[static_cast<std::size_t>(v)] == truth[static_cast<std::size_t>(v)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(mask.size());
}

void save_checkpoint(const std::filesystem::path& path, const GcnParams& params) {
  auto flatten = [](const Eigen::MatrixXd& m) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
    }
    return out;
  };
  nlohmann::json doc;
  doc["format"] = "lnu-gcn";
  doc["version"] = 1;
  doc["input_dim"] = params.input_dim();
  doc["hidden"] = params.hidden();
  doc["classes"] = params.classes();
  doc["w1"] = flatten(params.w1);
  doc["w2"] = flatten(params.w2);
  write_file_atomic(path, doc.dump() + "\n");
}

GcnParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("checkpoint " + path.string() + ": " + e.what());
  }
  if (doc.value("format", "") != "lnu-gcn" || doc.value("version", 0) != 1) {
    throw Error("checkpoint " + path.string() + ": unsupported format or version");
  }
  const auto d = doc.at("input_dim").get<Eigen::Index>();
  const auto h = doc.at("hidden").get<Eigen::Index>();
  const auto k = doc.at("classes").get<Eigen::Index>();
  auto unflatten = [&](const nlohmann::json& values, Eigen::Index rows, Eigen::Index cols) {
    const auto flat = values.get<std::vector<double>>();
    if (flat.size() != static_cast<std::size_t>(rows * cols)) {
      throw Error("checkpoint " + path.string() + ": weight count does not match shape");
    }
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = flat[static_cast<std::size_t>(i * cols + j)];
    }
    return m;
  };
  GcnParams p;
  p.w1 = unflatten(doc.at("w1"), d, h);
  p.w2 = unflatten(doc.at("w2"), h, k);
  return p;
}

}  // namespace lnu
