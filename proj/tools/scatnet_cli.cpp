#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "scatnet/classifier.hpp"
#include "scatnet/config.hpp"
#include "scatnet/dataset.hpp"
#include "scatnet/error.hpp"
#include "scatnet/features.hpp"
#include "scatnet/fft.hpp"
#include "scatnet/filterbank.hpp"
#include "scatnet/image_io.hpp"
#include "scatnet/scattering.hpp"

namespace fs = std::filesystem;
using namespace scatnet;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kData = 3, kFormat = 4 };

// Width disagreement between two input files; reported with the format exit code.
struct MismatchError : Error {
  using Error::Error;
};

ScatteringConfig config_from(const std::string& path) {
  return path.empty() ? ScatteringConfig{} : load_config(path);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string config;
  std::string output;
  std::string dataset;
  std::string list;
  std::vector<std::string> files;
  std::string subset = "all";
  int train_per_class = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  bool skip_bad = false;
};

// "path [label]" per line; blank lines and # comments ignored.
std::vector<LabeledFile> read_list(const std::string& path, bool& has_labels) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file list '" + path + "'");
  std::vector<LabeledFile> out;
  std::string line;
  int with = 0, without = 0;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    LabeledFile f;
    if (!(ls >> f.path)) continue;
    long label;
    if (ls >> label) {
      if (label < 0) throw DataError("negative label in '" + path + "'");
      f.label = static_cast<std::uint32_t>(label);
      ++with;
    } else {
      ++without;
    }
    out.push_back(f);
  }
  if (with && without) throw DataError("file list '" + path + "' labels only some entries");
  has_labels = with > 0;
  return out;
}

int run_extract(const ExtractArgs& a) {
  const auto config = config_from(a.config);
  // Decode pass first so failures are known before the header is written and
  // a dataset split only draws from readable images.
  std::vector<std::string> failures;
  auto screen = [&](const std::vector<LabeledFile>& files) {
    std::vector<LabeledFile> good;
    for (const auto& f : files) {
      try {
        decode_image(f.path);
        good.push_back(f);
      } catch (const IngestionError& e) {
        failures.push_back(e.what());
      }
    }
    return good;
  };
  auto report_failures = [&] {
    if (failures.empty()) return;
    std::cerr << failures.size() << " image(s) could not be read:\n";
    for (const auto& f : failures) std::cerr << "  " << f << "\n";
  };

  std::vector<LabeledFile> inputs;
  bool has_labels = false;
  const int sources = !a.dataset.empty() + !a.list.empty() + !a.files.empty();
  if (sources != 1) throw ParameterError("give exactly one of --dataset, --list or image files");
  if (!a.dataset.empty()) {
    auto ds = scan_dataset(a.dataset);
    has_labels = true;
    if (a.subset != "all" && a.train_per_class < 1)
      throw ParameterError("--subset train/test needs --train-per-class");
    ds.files = screen(ds.files);
    if (!failures.empty() && !a.skip_bad) {
      report_failures();
      return kData;
    }
    if (a.subset == "all") {
      inputs = ds.files;
    } else {
      const auto split = split_dataset(ds, a.train_per_class, a.seed);
      inputs = a.subset == "train" ? split.train : split.test;
    }
    std::cerr << "dataset: " << ds.class_names.size() << " classes, " << inputs.size() << " images ("
              << a.subset << ")\n";
  } else {
    if (!a.list.empty()) {
      inputs = read_list(a.list, has_labels);
    } else {
      for (const auto& f : a.files) inputs.push_back({f, 0});
      std::sort(inputs.begin(), inputs.end(),
                [](const LabeledFile& x, const LabeledFile& y) { return x.path < y.path; });
    }
    if (inputs.empty()) throw DataError("no input images");
    inputs = screen(inputs);
    if (!failures.empty() && !a.skip_bad) {
      report_failures();
      return kData;
    }
  }
  if (inputs.empty()) {
    report_failures();
    throw DataError("no readable input images");
  }

  const auto start = std::chrono::steady_clock::now();
  const ScatteringTransform transform(config);
  std::cerr << "filter banks ready in " << seconds_since(start) << " s; " << transform.feature_count()
            << " features per image\n";

  std::ofstream out(a.output, std::ios::binary);
  if (!out) throw Error("cannot open '" + a.output + "' for writing");
  FeatureFileWriter writer(out, path_table(config), transform.feature_count(), inputs.size(), has_labels);

  const int threads = std::max(1, std::min<int>(a.threads, static_cast<int>(inputs.size())));
  const std::size_t window = 2 * static_cast<std::size_t>(threads);
  std::mutex mu;
  std::condition_variable cv;
  std::map<std::size_t, std::vector<double>> done;
  std::size_t next_to_write = 0;
  std::atomic<std::size_t> next_to_take{0};
  std::optional<std::string> worker_error;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next_to_take++;
      if (i >= inputs.size()) return;
      {
        // Bounded reorder buffer: stay within `window` rows of the writer.
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return i < next_to_write + window || worker_error; });
        if (worker_error) return;
      }
      std::vector<double> row;
      try {
        row = transform.scatter(load_and_resize(inputs[i].path, config)).values;
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (!worker_error) worker_error = inputs[i].path + ": " + e.what();
        cv.notify_all();
        return;
      }
      std::lock_guard lock(mu);
      done.emplace(i, std::move(row));
      cv.notify_all();
    }
  };
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);

  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::vector<double> row;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return done.count(i) || worker_error; });
      if (worker_error) break;
      row = std::move(done[i]);
      done.erase(i);
      next_to_write = i + 1;
      cv.notify_all();
    }
    writer.write_row(row);
    if ((i + 1) % 10 == 0 || i + 1 == inputs.size())
      std::cerr << "\r" << (i + 1) << "/" << inputs.size() << " images, " << seconds_since(start) << " s"
                << std::flush;
  }
  pool.clear();
  std::cerr << "\n";
  if (worker_error) {
    out.close();
    fs::remove(a.output);
    throw Error(*worker_error);
  }
  std::vector<std::uint32_t> labels;
  if (has_labels)
    for (const auto& f : inputs) labels.push_back(f.label);
  writer.finish(labels);
  report_failures();
  std::cerr << "wrote " << inputs.size() << " rows to " << a.output << "\n";
  return kOk;
}

// ---------------------------------------------------------------- fit / eval

struct FitArgs {
  std::string train;
  std::string model;
  std::string standardizer;
  double C = 1.0;
  std::uint64_t seed = 0;
  int threads = 1;
};

int run_fit(const FitArgs& a) {
  auto file = read_features(a.train);
  if (!file.labels) throw DataError("training file '" + a.train + "' has no labels");
  const auto start = std::chrono::steady_clock::now();
  const auto standardizer = fit_standardizer(file.matrix);
  apply_standardizer_inplace(standardizer, file.matrix);
  TrainOptions options;
  options.C = a.C;
  options.seed = a.seed;
  options.threads = a.threads;
  const auto model = train_linear_svm(file.matrix, *file.labels, options);
  write_standardizer(a.standardizer, standardizer);
  write_model(a.model, model);
  const auto train_eval = evaluate(model, file.matrix, *file.labels);
  std::cerr << "trained " << model.num_classes() << " classes on " << file.matrix.rows() << " x "
            << file.matrix.cols() << " in " << seconds_since(start) << " s ("
            << standardizer.constant_columns.size() << " constant columns); train accuracy "
            << 100.0 * train_eval.accuracy << "%\n";
  return kOk;
}

struct EvalArgs {
  std::string model;
  std::string standardizer;
  std::string test;
};

int run_eval(const EvalArgs& a) {
  const auto model = read_model(a.model);
  const auto standardizer = read_standardizer(a.standardizer);
  auto file = read_features(a.test);
  if (!file.labels) throw DataError("test file '" + a.test + "' has no labels");
  if (standardizer.size() != model.dim)
    throw MismatchError("standardizer width " + std::to_string(standardizer.size()) +
                        " does not match model dimension " + std::to_string(model.dim));
  if (file.matrix.cols() != model.dim)
    throw MismatchError("feature width " + std::to_string(file.matrix.cols()) +
                        " does not match model dimension " + std::to_string(model.dim));
  apply_standardizer_inplace(standardizer, file.matrix);
  std::cout << format_evaluation(evaluate(model, file.matrix, *file.labels));
  return kOk;
}

// ---------------------------------------------------------------- diagnostics

RealGrid fftshift(const RealGrid& g) {
  RealGrid out(g.rows(), g.cols());
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c)
      out((r + g.rows() / 2) % g.rows(), (c + g.cols() / 2) % g.cols()) = g(r, c);
  return out;
}

struct FrameArgs {
  std::string config;
  std::string image;
  int layer = 1;
};

int run_frame_check(const FrameArgs& a) {
  const auto config = config_from(a.config);
  const auto start = std::chrono::steady_clock::now();
  const auto banks = build_filter_bank(config);
  const auto& bank = a.layer == 2 ? banks.layer2 : banks.layer1;
  const auto lp = littlewood_paley_scan(bank);
  const int n = bank.grid_size;
  auto freq = [n](int i) { return i < n / 2 ? i : i - n; };
  std::cout.precision(9);
  std::cout << "layer " << a.layer << " bank: N=" << n << " scales=" << bank.num_scales()
            << " angles=" << bank.num_angles << "\n"
            << "wavelet normalization: " << bank.normalization << "\n"
            << "A (lower frame bound): " << lp.lower << " at frequency (" << freq(lp.lower_row) << ", "
            << freq(lp.lower_col) << ")\n"
            << "B (upper frame bound): " << lp.upper << " at frequency (" << freq(lp.upper_row) << ", "
            << freq(lp.upper_col) << ")\n"
            << "A/B: " << lp.lower / lp.upper << "\n"
            << "time: " << seconds_since(start) << " s\n";
  if (!a.image.empty()) {
    write_png_gray(a.image, fftshift(lp.values));
    std::cout << "LP image (zero frequency at center) written to " << a.image << "\n";
  }
  return kOk;
}

struct DumpArgs {
  std::string config;
  std::string out_dir;
};

void dump_pair(const fs::path& dir, const std::string& stem, const ComplexGrid& hat) {
  RealGrid mag(hat.rows(), hat.cols());
  double peak = 0.0;
  for (int r = 0; r < hat.rows(); ++r)
    for (int c = 0; c < hat.cols(); ++c) peak = std::max(peak, mag(r, c) = std::abs(hat(r, c)));
  if (peak > 0)
    for (auto& v : mag.values()) v /= peak;
  write_png_gray((dir / (stem + "_freq.png")).string(), fftshift(mag));

  ComplexGrid spatial = hat;
  fft::inverse(spatial);
  RealGrid re(hat.rows(), hat.cols());
  double m = 0.0;
  for (const auto& v : spatial.values()) m = std::max(m, std::abs(v.real()));
  for (int r = 0; r < re.rows(); ++r)
    for (int c = 0; c < re.cols(); ++c) re(r, c) = m > 0 ? 0.5 + 0.5 * spatial(r, c).real() / m : 0.5;
  write_png_gray((dir / (stem + "_real.png")).string(), fftshift(re));
}

int run_dump_filters(const DumpArgs& a) {
  const auto config = config_from(a.config);
  const auto banks = build_filter_bank(config);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const auto& b = banks.layer1;
  int count = 0;
  for (int s = 0; s < b.num_scales(); ++s)
    for (int k = 0; k < b.num_angles; ++k, ++count)
      dump_pair(dir, "psi_j" + std::to_string(b.scales[s]) + "_k" + std::to_string(k), b.wavelet(s, k));
  ComplexGrid phi(b.phi.rows(), b.phi.cols());
  for (int r = 0; r < phi.rows(); ++r)
    for (int c = 0; c < phi.cols(); ++c) phi(r, c) = b.phi(r, c);
  dump_pair(dir, "phi", phi);
  std::cout << "wrote " << 2 * (count + 1) << " images to " << dir.string() << "\n";
  return kOk;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const MismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFormat;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DegenerateBankError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const IngestionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFormat;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering features and linear SVM classification"};
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "compute scattering features into an SCF1 file");
  extract->add_option("--config", ex.config, "config file (defaults when omitted)")->check(CLI::ExistingFile);
  extract->add_option("-o,--output", ex.output, "output SCF1 file")->required();
  extract->add_option("--dataset", ex.dataset, "root with one subdirectory per class")->check(CLI::ExistingDirectory);
  extract->add_option("--list", ex.list, "text file of 'path [label]' lines")->check(CLI::ExistingFile);
  extract->add_option("--subset", ex.subset, "dataset subset")->check(CLI::IsMember({"all", "train", "test"}));
  extract->add_option("--train-per-class", ex.train_per_class, "training images per class for the split")
      ->check(CLI::PositiveNumber);
  extract->add_option("--seed", ex.seed, "split seed");
  extract->add_option("--threads", ex.threads, "worker threads")->check(CLI::PositiveNumber);
  extract->add_flag("--skip-bad", ex.skip_bad, "drop unreadable images instead of failing");
  extract->add_option("files", ex.files, "image files (sorted before extraction)");

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "standardize features and train a one-vs-rest linear SVM");
  fit->add_option("--train", fa.train, "labeled SCF1 file")->required()->check(CLI::ExistingFile);
  fit->add_option("--model", fa.model, "output SCM1 model")->required();
  fit->add_option("--standardizer", fa.standardizer, "output SCS1 standardizer")->required();
  fit->add_option("-C,--C", fa.C, "SVM regularization constant")->check(CLI::PositiveNumber);
  fit->add_option("--seed", fa.seed, "coordinate order seed");
  fit->add_option("--threads", fa.threads, "threads across classes")->check(CLI::PositiveNumber);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "report accuracy of a model on a labeled SCF1 file");
  eval->add_option("--model", ea.model)->required()->check(CLI::ExistingFile);
  eval->add_option("--standardizer", ea.standardizer)->required()->check(CLI::ExistingFile);
  eval->add_option("--test", ea.test)->required()->check(CLI::ExistingFile);

  FrameArgs fr;
  auto* frame = app.add_subcommand("frame-check", "Littlewood-Paley frame bounds of the filter bank");
  frame->add_option("--config", fr.config)->check(CLI::ExistingFile);
  frame->add_option("--image", fr.image, "write the LP sum as a PNG");
  frame->add_option("--layer", fr.layer, "spatial bank to check")->check(CLI::IsMember({1, 2}));

  DumpArgs du;
  auto* dump = app.add_subcommand("dump-filters", "write layer-1 filters as PNG images");
  dump->add_option("--config", du.config)->check(CLI::ExistingFile);
  dump->add_option("-o,--out-dir", du.out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (*extract) return guarded([&] { return run_extract(ex); });
  if (*fit) return guarded([&] { return run_fit(fa); });
  if (*eval) return guarded([&] { return run_eval(ea); });
  if (*frame) return guarded([&] { return run_frame_check(fr); });
  if (*dump) return guarded([&] { return run_dump_filters(du); });
  return kUsage;
}
