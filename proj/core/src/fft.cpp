#include "scatnet/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "scatnet/error.hpp"

namespace scatnet::fft {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // Planning with FFTW_ESTIMATE does not touch the buffer contents.
    fftw_complex* scratch = fftw_alloc_complex(static_cast<std::size_t>(rows) * cols);
    fftw_plan plan = fftw_plan_dft_2d(rows, cols, scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw InternalError("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(ComplexGrid& grid, int sign) {
  if (grid.empty()) return;
  fftw_plan plan = cache().get(grid.rows(), grid.cols(), sign);
  auto* data = reinterpret_cast<fftw_complex*>(grid.data());
  fftw_execute_dft(plan, data, data);
}

}  // namespace

void forward(ComplexGrid& grid) { execute(grid, FFTW_FORWARD); }

void inverse(ComplexGrid& grid) {
  execute(grid, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& v : grid.values()) v *= scale;
}

ComplexGrid forward(const RealGrid& grid) {
  ComplexGrid out(grid.rows(), grid.cols());
  for (std::size_t i = 0; i < grid.size(); ++i) out.data()[i] = grid.data()[i];
  forward(out);
  return out;
}

ComplexGrid forward_copy(const ComplexGrid& grid) {
  ComplexGrid out = grid;
  forward(out);
  return out;
}

}  // namespace scatnet::fft
