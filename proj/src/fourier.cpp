#include "qimsim/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>

namespace qimsim {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe; executing a cached plan on fresh
// buffers is. Plans are created FFTW_UNALIGNED so std::vector storage works.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(n));
        fftw_plan plan =
            fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

void run_dft(std::vector<cplx>& data, int sign) {
    fftw_plan plan = PlanCache::instance().get(static_cast<int>(data.size()), sign);
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, raw, raw);
}

}  // namespace

Axis mode_axis_for(const Axis& spatial) {
    double p_nyq = kPi / spatial.dx();
    return Axis(-p_nyq, p_nyq, spatial.n);
}

// With midpoint sampling on both axes the DFT picks up two half-sample
// phase twists: e^{-i p_m x_k} = e^{i pi k (n-1)/n} e^{-2 pi i m k / n}
// modulo the global e^{-i p_m x0} carrier, x0 being the first sample.
ComplexField fourier_modes(const ComplexField& field) {
    field.validate();
    const Axis& ax = field.axis;
    const int n = ax.n;
    const double dx = ax.dx();
    const double x0 = ax.at(0);
    Axis pax = mode_axis_for(ax);

    std::vector<cplx> work(field.samples);
    for (int k = 0; k < n; ++k)
        work[k] *= std::polar(1.0, kPi * k * (n - 1.0) / n);
    run_dft(work, FFTW_FORWARD);

    ComplexField out;
    out.axis = pax;
    out.samples.resize(n);
    for (int m = 0; m < n; ++m)
        out.samples[m] = work[m] * dx * std::polar(1.0, -pax.at(m) * x0);
    return out;
}

ComplexField synthesize(const ComplexField& modes, const Axis& spatial) {
    modes.validate();
    const int n = spatial.n;
    if (modes.axis.n != n)
        throw ValidationError("synthesize: mode and spatial axes disagree in length");
    const double dx = spatial.dx();
    const double x0 = spatial.at(0);

    std::vector<cplx> work(modes.samples);
    for (int m = 0; m < n; ++m)
        work[m] *= std::polar(1.0, modes.axis.at(m) * x0);
    run_dft(work, FFTW_BACKWARD);

    ComplexField out;
    out.axis = spatial;
    out.samples.resize(n);
    const double scale = 1.0 / (n * dx);
    for (int k = 0; k < n; ++k)
        out.samples[k] = work[k] * scale * std::polar(1.0, -kPi * k * (n - 1.0) / n);
    return out;
}

}  // namespace qimsim
