#include "scatnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "scatnet/error.hpp"

namespace scatnet {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

int parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size())
    throw ParameterError("config key '" + key + "': expected an integer, got '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(out))
    throw ParameterError("config key '" + key + "': expected a number, got '" + value + "'");
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::string normalized = value;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::vector<double> out;
  std::string item;
  while (in >> item) out.push_back(parse_double(key, item));
  return out;
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string join(const std::vector<int>& v, int Q) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ", ";
    if (Q == 1) out << v[i];
    else out << static_cast<double>(v[i]) / Q;
  }
  return out.str();
}

}  // namespace

std::vector<int> ScatteringConfig::resolved_j1_set() const {
  if (!j1_set.empty()) return j1_set;
  std::vector<int> out;
  for (int s = 0; s < Q * J; ++s) out.push_back(s);
  return out;
}

std::vector<int> ScatteringConfig::j2_for(int j1) const {
  std::vector<int> out;
  const int first = j2_rule == J2Rule::Strict ? j1 + 1 : j1;
  for (int s = first; s <= Q * J; ++s) out.push_back(s);
  return out;
}

std::vector<int> ScatteringConfig::layer2_scales() const {
  std::set<int> all;
  for (int j1 : resolved_j1_set())
    for (int j2 : j2_for(j1)) all.insert(j2);
  return {all.begin(), all.end()};
}

int ScatteringConfig::stride_log2(int scale_index) const {
  return std::max(0, scale_index / Q - 1);
}

void ScatteringConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ParameterError("invalid config: " + msg); };
  if (!is_power_of_two(image_size) || image_size < 4) fail("image_size must be a power of two >= 4");
  if (J < 1) fail("J must be >= 1");
  if ((1LL << J) > image_size) fail("2^J must not exceed image_size");
  if (Q != 1 && Q != 2) fail("Q must be 1 or 2");
  if (K1 < 1 || K2 < 1) fail("K1 and K2 must be >= 1");
  if (family == WaveletFamily::HaarReal) {
    if (K1 != 2 && K1 != 4) fail("Haar family supports K1 in {2, 4}");
    if (K2 != 2 && K2 != 4) fail("Haar family supports K2 in {2, 4}");
    if (Q != 1) fail("Haar family requires Q = 1");
  }
  for (std::size_t i = 0; i < j1_set.size(); ++i) {
    if (j1_set[i] < 0 || j1_set[i] > Q * J) fail("j1 scales must lie in [0, J]");
    if (i > 0 && j1_set[i] <= j1_set[i - 1]) fail("j1 scales must be strictly increasing");
  }
  for (std::size_t i = 0; i < l2_set.size(); ++i) {
    if (l2_set[i] < 0) fail("l2 octaves must be >= 0");
    if (i > 0 && l2_set[i] <= l2_set[i - 1]) fail("l2 octaves must be strictly increasing");
  }
  const int out = resolved_output_stride_log2();
  if (out < 0 || out > J) fail("output_stride_log2 must lie in [0, J]");
  if ((image_size >> out) < 1) fail("output stride exceeds image_size");

  int deepest = 0;
  for (int j1 : resolved_j1_set()) {
    deepest = std::max(deepest, stride_log2(j1));
    for (int j2 : j2_for(j1)) deepest = std::max(deepest, stride_log2(j2));
  }
  if (pooling == Pooling::Average) {
    if (deepest > out)
      fail("output stride 2^" + std::to_string(out) + " is finer than the coarsest layer stride 2^" +
           std::to_string(deepest));
  } else {
    if (pool_window_log2 < 0 || (1LL << pool_window_log2) > image_size)
      fail("pool window must lie in [1, image_size]");
    const int min_samples_log2 = pooling == Pooling::MaxOverlap ? 1 : 0;
    if (pool_window_log2 - deepest < min_samples_log2)
      fail("pool window is smaller than the coarsest layer stride");
  }
  if (reflect_pad < 0 || 2 * reflect_pad >= image_size) fail("reflect_pad must lie in [0, image_size/2)");
  if (!(lowpass_sigma > 0.0)) fail("lowpass_sigma must be > 0");
  morlet.validate();
}

ScatteringConfig parse_config(std::istream& in) {
  ScatteringConfig config;
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParameterError("config line " + std::to_string(line_no) + ": empty key");
    if (values.count(key))
      throw ParameterError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    values[key] = value;
  }

  std::optional<std::vector<double>> j1_values;
  for (const auto& [key, value] : values) {
    if (key == "image_size") config.image_size = parse_int(key, value);
    else if (key == "J") config.J = parse_int(key, value);
    else if (key == "K1") config.K1 = parse_int(key, value);
    else if (key == "K2") config.K2 = parse_int(key, value);
    else if (key == "Q") config.Q = parse_int(key, value);
    else if (key == "j1_set") j1_values = parse_list(key, value);
    else if (key == "j2_rule") {
      const auto v = lower(value);
      if (v == "inclusive") config.j2_rule = J2Rule::Inclusive;
      else if (v == "strict") config.j2_rule = J2Rule::Strict;
      else throw ParameterError("config key 'j2_rule': expected inclusive or strict");
    } else if (key == "l2_set") {
      config.l2_set.clear();
      for (double v : parse_list(key, value)) {
        if (v != std::floor(v)) throw ParameterError("config key 'l2_set': octaves must be integers");
        config.l2_set.push_back(static_cast<int>(v));
      }
      config.l2_set = sorted_unique(config.l2_set);
    } else if (key == "family") {
      const auto v = lower(value);
      if (v == "morlet") config.family = WaveletFamily::MorletComplex;
      else if (v == "haar") config.family = WaveletFamily::HaarReal;
      else throw ParameterError("config key 'family': expected morlet or haar");
    } else if (key == "pooling") {
      const auto v = lower(value);
      if (v == "average") config.pooling = Pooling::Average;
      else if (v == "max") config.pooling = Pooling::MaxNonOverlap;
      else if (v == "max_overlap") config.pooling = Pooling::MaxOverlap;
      else throw ParameterError("config key 'pooling': expected average, max or max_overlap");
    } else if (key == "pool_window_log2") config.pool_window_log2 = parse_int(key, value);
    else if (key == "output_stride_log2")
      config.output_stride_log2 = lower(value) == "auto" ? -1 : parse_int(key, value);
    else if (key == "color") {
      const auto v = lower(value);
      if (v == "gray") config.color = ColorMode::Gray;
      else if (v == "yuv") config.color = ColorMode::YUV;
      else throw ParameterError("config key 'color': expected gray or yuv");
    } else if (key == "morlet_sigma") config.morlet.sigma = parse_double(key, value);
    else if (key == "morlet_xi") config.morlet.xi = parse_double(key, value);
    else if (key == "morlet_slant") config.morlet.slant = parse_double(key, value);
    else if (key == "lowpass_sigma") config.lowpass_sigma = parse_double(key, value);
    else if (key == "reflect_pad") config.reflect_pad = parse_int(key, value);
    else throw ParameterError("unknown config key '" + key + "'");
  }

  if (j1_values) {
    std::vector<int> indices;
    for (double v : *j1_values) {
      const double scaled = v * config.Q;
      if (scaled != std::round(scaled))
        throw ParameterError("config key 'j1_set': scale " + std::to_string(v) +
                             " is not a multiple of 1/Q");
      indices.push_back(static_cast<int>(std::lround(scaled)));
    }
    config.j1_set = sorted_unique(indices);
  }
  config.validate();
  return config;
}

ScatteringConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string format_config(const ScatteringConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "image_size = " << c.image_size << "\n"
      << "J = " << c.J << "\n"
      << "K1 = " << c.K1 << "\n"
      << "K2 = " << c.K2 << "\n"
      << "Q = " << c.Q << "\n"
      << "j1_set = " << join(c.resolved_j1_set(), c.Q) << "\n"
      << "j2_rule = " << (c.j2_rule == J2Rule::Strict ? "strict" : "inclusive") << "\n"
      << "l2_set = " << join(c.l2_set, 1) << "\n"
      << "family = " << (c.family == WaveletFamily::HaarReal ? "haar" : "morlet") << "\n"
      << "pooling = "
      << (c.pooling == Pooling::Average ? "average"
          : c.pooling == Pooling::MaxNonOverlap ? "max" : "max_overlap")
      << "\n"
      << "pool_window_log2 = " << c.pool_window_log2 << "\n"
      << "output_stride_log2 = "
      << (c.output_stride_log2 < 0 ? std::string("auto") : std::to_string(c.output_stride_log2)) << "\n"
      << "color = " << (c.color == ColorMode::YUV ? "yuv" : "gray") << "\n"
      << "morlet_sigma = " << c.morlet.sigma << "\n"
      << "morlet_xi = " << c.morlet.xi << "\n"
      << "morlet_slant = " << c.morlet.slant << "\n"
      << "lowpass_sigma = " << c.lowpass_sigma << "\n"
      << "reflect_pad = " << c.reflect_pad << "\n";
  return out.str();
}

}  // namespace scatnet
