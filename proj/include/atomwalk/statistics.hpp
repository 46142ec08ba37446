#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atomwalk {

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double correlation = 0.0;  // Pearson r
  double rms_residual = 0.0;
  std::size_t points = 0;
};

/// Throws Error("empty-window") for fewer than two points or constant x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

enum class BinScale { Linear, Log };

std::string_view to_string(BinScale s);

/// bins == 0 chooses automatically: linear bins are sized so the 40-80th
/// percentile range holds 25 bins; log bins use 10 per decade.
struct BinningSpec {
  BinScale scale = BinScale::Linear;
  std::size_t bins = 0;
};

/// Normalized exit-time histogram. Densities integrate to
/// (sample_count - timeout_count) / sample_count over the bins.
struct ExitTimePDF {
  BinScale scale = BinScale::Linear;
  std::vector<double> bin_edges;  // bins + 1 entries
  std::vector<double> densities;
  std::vector<std::size_t> counts;
  std::size_t sample_count = 0;   // finite + timeouts
  std::size_t timeout_count = 0;

  std::size_t bins() const { return densities.size(); }
  /// Arithmetic (linear) or geometric (log) bin center.
  double center(std::size_t i) const;
  double integral() const;
};

/// Minimum number of finite exit times build_pdf accepts.
inline constexpr std::size_t kMinPdfSamples = 1000;

/// Histogram of finite exit times (timeouts are counted, not binned). Log
/// bins need strictly positive samples. Throws Error("insufficient-samples").
ExitTimePDF build_pdf(std::span<const double> exit_times, std::size_t timeout_count, const BinningSpec& binning);

enum class FitModel { ExponentialMiddle, PowerLawTail };

std::string_view to_string(FitModel m);

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// Signed slope of the straight-line fit in transformed coordinates:
/// d ln P / dT for ExponentialMiddle, d ln P / d ln T for PowerLawTail.
struct FitReport {
  FitModel model = FitModel::ExponentialMiddle;
  double parameter = 0.0;
  double parameter_stderr = 0.0;
  FitWindow window;
  double residual = 0.0;  // rms residual of ln P
  std::size_t point_count = 0;
};

/// Least-squares line through (T, ln P) over nonempty bins whose centers lie in
/// the window. Throws Error("empty-window") with fewer than 5 such bins.
FitReport fit_exponential_middle(const ExitTimePDF& pdf, FitWindow window);

/// Least-squares line through (ln T, ln P) over bins in the window holding at
/// least `min_count` samples. Throws Error("empty-window") when the window has
/// no nonempty bins and Error("sparse-tail") when fewer than 5 bins survive
/// the count filter.
FitReport fit_powerlaw_tail(const ExitTimePDF& pdf, FitWindow window, std::size_t min_count = 10);

/// q-th quantile (0 <= q <= 1) with linear interpolation between order
/// statistics.
double quantile(std::span<const double> values, double q);

/// Fit windows from percentiles of the finite exit times: 40-80 for the
/// exponential middle and 90-99.5 for the power-law tail.
FitWindow default_middle_window(std::span<const double> exit_times);
FitWindow default_tail_window(std::span<const double> exit_times);

/// CSV "bin_lo,bin_hi,density,count".
void write_pdf_csv(std::ostream& os, const ExitTimePDF& pdf);
/// JSON object with model, parameter, window, residual, point_count.
std::string fit_report_json(const FitReport& r);

}  // namespace atomwalk
