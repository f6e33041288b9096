#include "scatnet/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "scatnet/binary_io.hpp"
#include "scatnet/error.hpp"

namespace scatnet {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct BinaryProblem {
  const FeatureMatrix& x;
  std::vector<double> y;  // +1 / -1
};

// Dual coordinate descent for min_w 1/2 |w|^2 + C sum max(0, 1 - y_i w.x_i)
// with x augmented by a constant 1 (bias).
void solve_binary(const BinaryProblem& p, const TrainOptions& opt, std::uint64_t seed,
                  std::span<double> w, double& bias) {
  const std::size_t n = p.x.rows();
  std::vector<double> qd(n), alpha(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) qd[i] = dot(p.x.row(i), p.x.row(i)) + 1.0;
  std::fill(w.begin(), w.end(), 0.0);
  bias = 0.0;

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  for (int epoch = 0; epoch < opt.max_epochs; ++epoch) {
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
      const auto xi = p.x.row(i);
      const double g = p.y[i] * (dot(w, xi) + bias) - 1.0;
      double pg = g;
      if (alpha[i] == 0.0) pg = std::min(g, 0.0);
      else if (alpha[i] == opt.C) pg = std::max(g, 0.0);
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::clamp(old - g / qd[i], 0.0, opt.C);
        const double d = (alpha[i] - old) * p.y[i];
        for (std::size_t k = 0; k < xi.size(); ++k) w[k] += d * xi[k];
        bias += d;
      }
    }
    if (pg_max - pg_min <= 1e-12) return;

    const double norm2 = dot(w, w) + bias * bias;
    double hinge = 0.0;
    double alpha_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      hinge += std::max(0.0, 1.0 - p.y[i] * (dot(w, p.x.row(i)) + bias));
      alpha_sum += alpha[i];
    }
    const double primal = 0.5 * norm2 + opt.C * hinge;
    const double dual = alpha_sum - 0.5 * norm2;
    if (primal - dual <= opt.tolerance * std::max(primal, 1e-300)) return;
  }
}

}  // namespace

LinearModel train_linear_svm(const FeatureMatrix& features, std::span<const std::uint32_t> labels,
                             const TrainOptions& options) {
  if (labels.size() != features.rows())
    throw ParameterError("label count " + std::to_string(labels.size()) + " does not match row count " +
                         std::to_string(features.rows()));
  if (!(options.C > 0.0)) throw ParameterError("C must be > 0");
  for (double v : features.values())
    if (!std::isfinite(v)) throw DataError("non-finite value in training features");

  LinearModel model;
  model.classes.assign(labels.begin(), labels.end());
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()), model.classes.end());
  if (model.classes.size() < 2) throw ParameterError("training needs at least 2 classes");
  model.dim = features.cols();
  model.C = options.C;
  model.seed = options.seed;
  model.weights.assign(model.classes.size() * model.dim, 0.0);
  model.biases.assign(model.classes.size(), 0.0);

  auto train_class = [&](std::size_t c) {
    BinaryProblem problem{features, std::vector<double>(labels.size())};
    for (std::size_t i = 0; i < labels.size(); ++i)
      problem.y[i] = labels[i] == model.classes[c] ? 1.0 : -1.0;
    std::span<double> w(model.weights.data() + c * model.dim, model.dim);
    solve_binary(problem, options, splitmix64(options.seed ^ splitmix64(c)), w, model.biases[c]);
  };

  const int threads = std::clamp(options.threads, 1, static_cast<int>(model.classes.size()));
  if (threads == 1) {
    for (std::size_t c = 0; c < model.classes.size(); ++c) train_class(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < model.classes.size(); c = next++) train_class(c);
      });
  }
  return model;
}

std::vector<double> class_scores(const LinearModel& model, std::span<const double> v) {
  if (v.size() != model.dim)
    throw ParameterError("feature vector of length " + std::to_string(v.size()) +
                         " does not match model dimension " + std::to_string(model.dim));
  std::vector<double> scores(model.num_classes());
  for (std::size_t c = 0; c < model.num_classes(); ++c)
    scores[c] = dot(model.weight(c), v) + model.biases[c];
  return scores;
}

std::uint32_t predict(const LinearModel& model, std::span<const double> v) {
  const auto scores = class_scores(model, v);
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[best]) best = c;
  return model.classes[best];
}

Evaluation evaluate(const LinearModel& model, const FeatureMatrix& features,
                    std::span<const std::uint32_t> labels) {
  if (labels.size() != features.rows()) throw ParameterError("label count does not match row count");
  if (features.cols() != model.dim)
    throw ParameterError("feature width " + std::to_string(features.cols()) +
                         " does not match model dimension " + std::to_string(model.dim));
  std::map<std::uint32_t, std::size_t> position;
  for (std::size_t c = 0; c < model.num_classes(); ++c) position[model.classes[c]] = c;

  Evaluation e;
  e.classes = model.classes;
  const std::size_t k = model.num_classes();
  e.confusion.assign(k, std::vector<std::size_t>(k, 0));
  e.per_class_count.assign(k, 0);
  e.per_class_accuracy.assign(k, 0.0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto it = position.find(labels[i]);
    if (it == position.end())
      throw DataError("test label " + std::to_string(labels[i]) + " is not a trained class");
    const std::size_t truth = it->second;
    const std::size_t guess = position.at(predict(model, features.row(i)));
    ++e.confusion[truth][guess];
    ++e.per_class_count[truth];
    if (truth == guess) ++correct;
  }
  e.accuracy = features.rows() ? static_cast<double>(correct) / features.rows() : 0.0;
  std::size_t present = 0;
  double sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    if (e.per_class_count[c] == 0) continue;
    e.per_class_accuracy[c] = static_cast<double>(e.confusion[c][c]) / e.per_class_count[c];
    sum += e.per_class_accuracy[c];
    ++present;
  }
  e.mean_per_class_accuracy = present ? sum / present : 0.0;
  return e;
}

std::string format_evaluation(const Evaluation& e) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "accuracy: " << 100.0 * e.accuracy << "%\n";
  out << "mean per-class accuracy: " << 100.0 * e.mean_per_class_accuracy << "%\n";
  out << "per-class accuracy:\n";
  for (std::size_t c = 0; c < e.classes.size(); ++c)
    out << "  class " << e.classes[c] << ": " << 100.0 * e.per_class_accuracy[c] << "% ("
        << e.per_class_count[c] << " examples)\n";
  out << "confusion matrix (rows: true class, columns: predicted):\n";
  out << std::setw(8) << "";
  for (auto c : e.classes) out << std::setw(8) << c;
  out << "\n";
  for (std::size_t r = 0; r < e.classes.size(); ++r) {
    out << std::setw(8) << e.classes[r];
    for (std::size_t c = 0; c < e.classes.size(); ++c) out << std::setw(8) << e.confusion[r][c];
    out << "\n";
  }
  return out.str();
}

void write_model(std::ostream& out, const LinearModel& model) {
  binary::Writer w(out);
  w.magic("SCM1");
  w.u32(kModelFileVersion);
  w.u64(model.classes.size());
  for (auto c : model.classes) w.u32(c);
  w.u64(model.dim);
  w.f64(model.C);
  w.u64(model.seed);
  for (double v : model.weights) w.f64(v);
  for (double v : model.biases) w.f64(v);
  w.finish();
}

LinearModel read_model(std::istream& in) {
  binary::Reader r(in);
  r.expect_magic("SCM1");
  const auto version_at = r.offset();
  if (r.u32("version") != kModelFileVersion) throw FormatError("unsupported SCM1 version", version_at);
  LinearModel model;
  const auto classes_at = r.offset();
  const auto k = r.u64("class count");
  if (k == 0) throw FormatError("model has no classes", classes_at);
  for (std::uint64_t c = 0; c < k; ++c) model.classes.push_back(r.u32("class label"));
  model.dim = r.u64("dimension");
  model.C = r.f64("C");
  model.seed = r.u64("seed");
  for (std::uint64_t i = 0; i < k * model.dim; ++i) model.weights.push_back(r.f64("weight"));
  for (std::uint64_t c = 0; c < k; ++c) model.biases.push_back(r.f64("bias"));
  r.expect_end();
  return model;
}

void write_model(const std::string& path, const LinearModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_model(out, model);
}

LinearModel read_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'", 0);
  return read_model(in);
}

}  // namespace scatnet
