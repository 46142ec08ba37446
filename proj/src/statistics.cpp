#include "atomwalk/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "atomwalk/error.hpp"
#include "atomwalk/io.hpp"

namespace atomwalk {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw Error("empty-window", "line fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error("empty-window", "line fit needs at least two distinct abscissae");

  LinearFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ssr += r * r;
  }
  f.rms_residual = std::sqrt(ssr / static_cast<double>(n));
  f.slope_stderr = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  f.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  return f;
}

std::string_view to_string(BinScale s) { return s == BinScale::Linear ? "linear" : "log"; }

std::string_view to_string(FitModel m) {
  return m == FitModel::ExponentialMiddle ? "exponential_middle" : "power_law_tail";
}

double ExitTimePDF::center(std::size_t i) const {
  const double a = bin_edges[i], b = bin_edges[i + 1];
  return scale == BinScale::Linear ? 0.5 * (a + b) : std::sqrt(a * b);
}

double ExitTimePDF::integral() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < bins(); ++i) acc += densities[i] * (bin_edges[i + 1] - bin_edges[i]);
  return acc;
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw Error("insufficient-samples", "quantile of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(i);
  return v[i] + frac * (v[i + 1] - v[i]);
}

ExitTimePDF build_pdf(std::span<const double> exit_times, std::size_t timeout_count, const BinningSpec& binning) {
  if (exit_times.size() < kMinPdfSamples) {
    std::ostringstream msg;
    msg << "PDF needs at least " << kMinPdfSamples << " finite exit times, got " << exit_times.size();
    throw Error("insufficient-samples", msg.str());
  }
  for (double t : exit_times)
    if (!std::isfinite(t) || t < 0.0) throw Error("insufficient-samples", "exit times must be finite and >= 0");

  const auto [min_it, max_it] = std::minmax_element(exit_times.begin(), exit_times.end());
  const double lo = *min_it, hi = *max_it;

  ExitTimePDF pdf;
  pdf.scale = binning.scale;
  pdf.sample_count = exit_times.size() + timeout_count;
  pdf.timeout_count = timeout_count;

  std::size_t bins = binning.bins;
  if (binning.scale == BinScale::Linear) {
    if (bins == 0) {
      const double width = (quantile(exit_times, 0.8) - quantile(exit_times, 0.4)) / 25.0;
      bins = width > 0.0 ? static_cast<std::size_t>(std::ceil((hi - lo) / width)) : 1;
      bins = std::clamp<std::size_t>(bins, 1, 1'000'000);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    pdf.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
      pdf.bin_edges[i] = i == bins ? lo + span : lo + span * static_cast<double>(i) / static_cast<double>(bins);
    pdf.counts.assign(bins, 0);
    for (double t : exit_times) {
      auto idx = static_cast<std::size_t>(std::floor((t - lo) / span * static_cast<double>(bins)));
      pdf.counts[std::min(idx, bins - 1)]++;
    }
  } else {
    if (!(lo > 0.0)) throw Error("insufficient-samples", "logarithmic bins need strictly positive exit times");
    const double llo = std::log(lo);
    const double lspan = hi > lo ? std::log(hi) - llo : 1.0;
    if (bins == 0) bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(10.0 * lspan / std::log(10.0))));
    pdf.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
      pdf.bin_edges[i] = i == 0      ? lo
                         : i == bins ? (hi > lo ? hi : std::exp(llo + lspan))
                                     : std::exp(llo + lspan * static_cast<double>(i) / static_cast<double>(bins));
    pdf.counts.assign(bins, 0);
    for (double t : exit_times) {
      auto idx = static_cast<std::size_t>(std::floor((std::log(t) - llo) / lspan * static_cast<double>(bins)));
      pdf.counts[std::min(idx, bins - 1)]++;
    }
  }

  const double total = static_cast<double>(pdf.sample_count);
  pdf.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    pdf.densities[i] = static_cast<double>(pdf.counts[i]) / (total * (pdf.bin_edges[i + 1] - pdf.bin_edges[i]));
  return pdf;
}

namespace {

void check_window(FitWindow w) {
  if (!std::isfinite(w.lo) || !std::isfinite(w.hi) || !(w.lo < w.hi))
    throw Error("empty-window", "fit window needs finite lo < hi");
}

FitReport to_report(FitModel model, FitWindow w, const LinearFit& f) {
  FitReport r;
  r.model = model;
  r.parameter = f.slope;
  r.parameter_stderr = f.slope_stderr;
  r.window = w;
  r.residual = f.rms_residual;
  r.point_count = f.points;
  return r;
}

}  // namespace

FitReport fit_exponential_middle(const ExitTimePDF& pdf, FitWindow window) {
  check_window(window);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < pdf.bins(); ++i) {
    const double c = pdf.center(i);
    if (c < window.lo || c > window.hi || !(pdf.densities[i] > 0.0)) continue;
    xs.push_back(c);
    ys.push_back(std::log(pdf.densities[i]));
  }
  if (xs.size() < 5) {
    std::ostringstream msg;
    msg << "exponential fit window [" << window.lo << ", " << window.hi << "] holds " << xs.size()
        << " nonempty bins, need 5";
    throw Error("empty-window", msg.str());
  }
  return to_report(FitModel::ExponentialMiddle, window, fit_line(xs, ys));
}

FitReport fit_powerlaw_tail(const ExitTimePDF& pdf, FitWindow window, std::size_t min_count) {
  check_window(window);
  std::vector<double> xs, ys;
  std::size_t nonempty = 0;
  for (std::size_t i = 0; i < pdf.bins(); ++i) {
    const double c = pdf.center(i);
    if (c < window.lo || c > window.hi || !(pdf.densities[i] > 0.0) || !(c > 0.0)) continue;
    ++nonempty;
    if (pdf.counts[i] < min_count) continue;
    xs.push_back(std::log(c));
    ys.push_back(std::log(pdf.densities[i]));
  }
  if (nonempty == 0) throw Error("empty-window", "power-law fit window holds no nonempty bins");
  if (xs.size() < 5) {
    std::ostringstream msg;
    msg << "power-law fit window [" << window.lo << ", " << window.hi << "] keeps " << xs.size() << " bins with >= "
        << min_count << " counts, need 5";
    throw Error("sparse-tail", msg.str());
  }
  return to_report(FitModel::PowerLawTail, window, fit_line(xs, ys));
}

FitWindow default_middle_window(std::span<const double> exit_times) {
  return {quantile(exit_times, 0.40), quantile(exit_times, 0.80)};
}

FitWindow default_tail_window(std::span<const double> exit_times) {
  return {quantile(exit_times, 0.90), quantile(exit_times, 0.995)};
}

void write_pdf_csv(std::ostream& os, const ExitTimePDF& pdf) {
  os << "bin_lo,bin_hi,density,count\n";
  for (std::size_t i = 0; i < pdf.bins(); ++i)
    os << format_double(pdf.bin_edges[i]) << ',' << format_double(pdf.bin_edges[i + 1]) << ','
       << format_double(pdf.densities[i]) << ',' << pdf.counts[i] << '\n';
}

std::string fit_report_json(const FitReport& r) {
  nlohmann::ordered_json j;
  j["model"] = to_string(r.model);
  j["parameter"] = r.parameter;
  j["parameter_stderr"] = r.parameter_stderr;
  j["window"] = {r.window.lo, r.window.hi};
  j["residual"] = r.residual;
  j["point_count"] = r.point_count;
  return j.dump(2) + "\n";
}

}  // namespace atomwalk
