#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "scatnet/features.hpp"

namespace scatnet {

/// One-vs-rest linear classifier: score_c(v) = w_c . v + b_c.
struct LinearModel {
  std::vector<std::uint32_t> classes;
  std::size_t dim = 0;
  std::vector<double> weights;  // classes.size() x dim, row-major
  std::vector<double> biases;
  double C = 1.0;
  std::uint64_t seed = 0;

  std::size_t num_classes() const { return classes.size(); }
  std::span<const double> weight(std::size_t c) const { return {weights.data() + c * dim, dim}; }
  bool operator==(const LinearModel&) const = default;
};

struct TrainOptions {
  double C = 1.0;
  std::uint64_t seed = 0;
  /// Stop once the duality gap is below tolerance * primal objective.
  double tolerance = 1e-4;
  int max_epochs = 20000;
  /// Per-class subproblems run on this many threads; results do not depend on it.
  int threads = 1;
};

/// L2-regularized hinge-loss SVM per class, solved by dual coordinate descent
/// with a seeded permutation per epoch. The bias is an extra constant
/// feature of value 1 and is regularized with the weights.
LinearModel train_linear_svm(const FeatureMatrix& features, std::span<const std::uint32_t> labels,
                             const TrainOptions& options = {});

std::vector<double> class_scores(const LinearModel& model, std::span<const double> v);

/// Class label with the highest score; ties go to the lowest class index.
std::uint32_t predict(const LinearModel& model, std::span<const double> v);

struct Evaluation {
  std::vector<std::uint32_t> classes;
  double accuracy = 0.0;
  double mean_per_class_accuracy = 0.0;
  std::vector<double> per_class_accuracy;
  std::vector<std::size_t> per_class_count;
  // confusion[true][predicted], indexed by class position
  std::vector<std::vector<std::size_t>> confusion;
};

Evaluation evaluate(const LinearModel& model, const FeatureMatrix& features,
                    std::span<const std::uint32_t> labels);

std::string format_evaluation(const Evaluation& e);

// SCM1 layout (little endian): "SCM1", u32 version, u64 class count,
//   class labels u32 each, u64 dim, f64 C, u64 seed,
//   classes * dim f64 weights (row-major), classes f64 biases.
inline constexpr std::uint32_t kModelFileVersion = 1;

void write_model(std::ostream& out, const LinearModel& model);
LinearModel read_model(std::istream& in);
void write_model(const std::string& path, const LinearModel& model);
LinearModel read_model(const std::string& path);

}  // namespace scatnet
