#include "scatnet/features.hpp"

#include <cmath>
#include <fstream>

#include "scatnet/binary_io.hpp"
#include "scatnet/error.hpp"

namespace scatnet {

void FeatureMatrix::append_row(std::span<const double> values) {
  if (values.size() != cols_)
    throw ParameterError("row of length " + std::to_string(values.size()) +
                         " does not match matrix width " + std::to_string(cols_));
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Standardizer fit_standardizer(const FeatureMatrix& train, double epsilon) {
  if (train.rows() < 2) throw ParameterError("standardizer needs at least 2 training rows");
  const std::size_t n = train.rows();
  const std::size_t d = train.cols();
  Standardizer s;
  s.epsilon = epsilon;
  s.mean.assign(d, 0.0);
  s.inv_std.assign(d, 0.0);

  for (std::size_t r = 0; r < n; ++r) {
    const auto row = train.row(r);
    for (std::size_t c = 0; c < d; ++c) s.mean[c] += row[c];
  }
  for (auto& m : s.mean) m /= static_cast<double>(n);

  std::vector<double> var(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = train.row(r);
    for (std::size_t c = 0; c < d; ++c) {
      const double dv = row[c] - s.mean[c];
      var[c] += dv * dv;
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    const double sd = std::sqrt(var[c] / static_cast<double>(n));
    if (!std::isfinite(sd)) throw DataError("non-finite value in feature column " + std::to_string(c));
    if (sd < epsilon) {
      s.constant_columns.push_back(c);
    } else {
      s.inv_std[c] = 1.0 / sd;
    }
  }
  return s;
}

std::vector<double> apply_standardizer(const Standardizer& s, std::span<const double> v) {
  if (v.size() != s.size())
    throw ParameterError("feature vector of length " + std::to_string(v.size()) +
                         " does not match standardizer width " + std::to_string(s.size()));
  std::vector<double> out(v.size());
  for (std::size_t c = 0; c < v.size(); ++c) out[c] = (v[c] - s.mean[c]) * s.inv_std[c];
  return out;
}

void apply_standardizer_inplace(const Standardizer& s, FeatureMatrix& m) {
  if (m.cols() != s.size())
    throw ParameterError("feature matrix width " + std::to_string(m.cols()) +
                         " does not match standardizer width " + std::to_string(s.size()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = (row[c] - s.mean[c]) * s.inv_std[c];
  }
}

std::vector<double> unstandardize(const Standardizer& s, std::span<const double> v) {
  if (v.size() != s.size()) throw ParameterError("length mismatch in unstandardize");
  std::vector<double> out(v.size());
  for (std::size_t c = 0; c < v.size(); ++c)
    out[c] = s.inv_std[c] > 0.0 ? v[c] / s.inv_std[c] + s.mean[c] : s.mean[c];
  return out;
}

FeatureFileWriter::FeatureFileWriter(std::ostream& out, const std::vector<PathInfo>& paths,
                                     std::size_t width, std::size_t rows, bool has_labels)
    : out_(out), width_(width), rows_(rows), has_labels_(has_labels) {
  binary::Writer w(out_);
  w.magic("SCF1");
  w.u32(kFeatureFileVersion);
  w.u64(width);
  w.u64(rows);
  w.u8(has_labels ? 1 : 0);
  const std::string table = format_path_table(paths);
  w.u64(table.size());
  w.bytes(table);
}

void FeatureFileWriter::write_row(std::span<const double> values) {
  if (values.size() != width_)
    throw ParameterError("row of length " + std::to_string(values.size()) +
                         " does not match feature width " + std::to_string(width_));
  if (written_ == rows_) throw ParameterError("more rows than announced in the SCF1 header");
  binary::Writer w(out_);
  for (double v : values) w.f32(static_cast<float>(v));
  ++written_;
}

void FeatureFileWriter::finish(std::span<const std::uint32_t> labels) {
  if (written_ != rows_) throw ParameterError("fewer rows than announced in the SCF1 header");
  if (has_labels_ != !labels.empty() && rows_ > 0)
    throw ParameterError("labels must be given iff the header announced them");
  if (has_labels_ && labels.size() != rows_) throw ParameterError("label count does not match row count");
  binary::Writer w(out_);
  if (has_labels_)
    for (auto label : labels) w.u32(label);
  w.finish();
}

void write_features(std::ostream& out, const FeatureFile& file) {
  const auto& m = file.matrix;
  if (file.labels && file.labels->size() != m.rows())
    throw ParameterError("label count does not match row count");
  FeatureFileWriter writer(out, file.paths, m.cols(), m.rows(), file.labels.has_value());
  for (std::size_t r = 0; r < m.rows(); ++r) writer.write_row(m.row(r));
  if (file.labels) writer.finish(*file.labels);
  else writer.finish();
}

FeatureFile read_features(std::istream& in) {
  binary::Reader r(in);
  r.expect_magic("SCF1");
  const auto version_at = r.offset();
  if (r.u32("version") != kFeatureFileVersion)
    throw FormatError("unsupported SCF1 version", version_at);
  const auto width = r.u64("feature width");
  const auto rows = r.u64("row count");
  const auto flag_at = r.offset();
  const auto has_labels = r.u8("label flag");
  if (has_labels > 1) throw FormatError("label flag must be 0 or 1", flag_at);
  const auto table_len = r.u64("path table length");
  const auto table_at = r.offset();
  FeatureFile file;
  try {
    file.paths = parse_path_table(r.bytes(table_len, "path table"));
  } catch (const ParameterError& e) {
    throw FormatError(e.what(), table_at);
  }
  file.matrix = FeatureMatrix(width);
  std::vector<double> row(width);
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t c = 0; c < width; ++c) row[c] = r.f32("feature value");
    file.matrix.append_row(row);
  }
  if (has_labels) {
    std::vector<std::uint32_t> labels;
    for (std::uint64_t i = 0; i < rows; ++i) labels.push_back(r.u32("label"));
    file.labels = std::move(labels);
  }
  r.expect_end();
  return file;
}

void write_features(const std::string& path, const FeatureFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_features(out, file);
}

FeatureFile read_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'", 0);
  return read_features(in);
}

void write_standardizer(std::ostream& out, const Standardizer& s) {
  binary::Writer w(out);
  w.magic("SCS1");
  w.u32(kStandardizerFileVersion);
  w.u64(s.size());
  w.f64(s.epsilon);
  for (double v : s.mean) w.f64(v);
  for (double v : s.inv_std) w.f64(v);
  w.finish();
}

Standardizer read_standardizer(std::istream& in) {
  binary::Reader r(in);
  r.expect_magic("SCS1");
  const auto version_at = r.offset();
  if (r.u32("version") != kStandardizerFileVersion)
    throw FormatError("unsupported SCS1 version", version_at);
  const auto width = r.u64("width");
  Standardizer s;
  s.epsilon = r.f64("epsilon");
  for (std::uint64_t i = 0; i < width; ++i) s.mean.push_back(r.f64("mean"));
  for (std::uint64_t i = 0; i < width; ++i) {
    const auto at = r.offset();
    const double v = r.f64("inverse std");
    if (!std::isfinite(v) || v < 0.0) throw FormatError("invalid inverse std", at);
    if (v == 0.0) s.constant_columns.push_back(i);
    s.inv_std.push_back(v);
  }
  r.expect_end();
  return s;
}

void write_standardizer(const std::string& path, const Standardizer& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_standardizer(out, s);
}

Standardizer read_standardizer(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'", 0);
  return read_standardizer(in);
}

}  // namespace scatnet
