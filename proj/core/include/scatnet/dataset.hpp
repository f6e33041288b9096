#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scatnet {

struct LabeledFile {
  std::string path;
  std::uint32_t label = 0;
};

/// Image folder: one subdirectory per class, labels assigned in
/// lexicographic order of the subdirectory names.
struct Dataset {
  std::string root;
  std::vector<std::string> class_names;
  std::vector<LabeledFile> files;  // sorted by (label, file name)
};

/// Regular files inside each class directory are taken as images; hidden
/// entries are skipped. Throws DataError when no class has any file.
Dataset scan_dataset(const std::string& root);

struct Split {
  std::vector<LabeledFile> train;
  std::vector<LabeledFile> test;
};

/// Per class, n_train files drawn by a seeded shuffle of the sorted list go to
/// train and the rest to test. Depends only on (seed, sorted names). Throws
/// DataError if a class has fewer than n_train + 1 files.
Split split_dataset(const Dataset& dataset, int n_train, std::uint64_t seed);

}  // namespace scatnet
