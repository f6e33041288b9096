#include "scatnet/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <random>

#include "scatnet/error.hpp"

namespace fs = std::filesystem;

namespace scatnet {

Dataset scan_dataset(const std::string& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw DataError("dataset root '" + root + "' is not a directory");
  Dataset ds;
  ds.root = root;
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    const auto name = entry.path().filename().string();
    if (entry.is_directory() && !name.starts_with(".")) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  for (const auto& dir : class_dirs) {
    const auto label = static_cast<std::uint32_t>(ds.class_names.size());
    ds.class_names.push_back(dir.filename().string());
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const auto name = entry.path().filename().string();
      if (entry.is_regular_file() && !name.starts_with(".")) names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    for (const auto& name : names) ds.files.push_back({(dir / name).string(), label});
  }
  if (ds.files.empty()) throw DataError("dataset root '" + root + "' contains no class images");
  return ds;
}

Split split_dataset(const Dataset& dataset, int n_train, std::uint64_t seed) {
  if (n_train < 1) throw ParameterError("train-per-class must be >= 1");
  Split split;
  for (std::uint32_t label = 0; label < dataset.class_names.size(); ++label) {
    std::vector<LabeledFile> members;
    for (const auto& f : dataset.files)
      if (f.label == label) members.push_back(f);
    if (members.size() < static_cast<std::size_t>(n_train) + 1)
      throw DataError("class '" + dataset.class_names[label] + "' has " + std::to_string(members.size()) +
                      " images, need at least " + std::to_string(n_train + 1));
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (label + 1)));
    for (std::size_t i = members.size() - 1; i > 0; --i) std::swap(members[i], members[rng() % (i + 1)]);
    std::sort(members.begin(), members.begin() + n_train,
              [](const LabeledFile& a, const LabeledFile& b) { return a.path < b.path; });
    std::sort(members.begin() + n_train, members.end(),
              [](const LabeledFile& a, const LabeledFile& b) { return a.path < b.path; });
    split.train.insert(split.train.end(), members.begin(), members.begin() + n_train);
    split.test.insert(split.test.end(), members.begin() + n_train, members.end());
  }
  return split;
}

}  // namespace scatnet
