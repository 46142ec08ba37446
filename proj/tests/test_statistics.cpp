#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "atomwalk/error.hpp"
#include "atomwalk/statistics.hpp"

using namespace atomwalk;

namespace {

std::vector<double> exponential_sample(double rate, std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> d(rate);
  std::vector<double> v(n);
  for (auto& t : v) t = d(rng);
  return v;
}

// Density proportional to T^slope above t0 (slope < -1), by inversion.
std::vector<double> powerlaw_sample(double slope, double t0, std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& t : v) t = t0 * std::pow(1.0 - u(rng), 1.0 / (slope + 1.0));
  return v;
}

template <class F>
std::string code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "none";
}

}  // namespace

TEST_SUITE("statistics") {
  TEST_CASE("line fit recovers an exact line") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    std::vector<double> y;
    for (double xi : x) y.push_back(2.5 - 0.75 * xi);
    const LinearFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(f.rms_residual < 1e-14);
    CHECK(f.correlation == doctest::Approx(-1.0));
    CHECK(f.points == 5);
  }

  TEST_CASE("quantile interpolates between order statistics") {
    const std::vector<double> v{4, 1, 3, 2};
    CHECK(quantile(v, 0.0) == 1.0);
    CHECK(quantile(v, 1.0) == 4.0);
    CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile(v, 1.0 / 3.0) == doctest::Approx(2.0));
  }

  TEST_CASE("uniform sample gives a flat density and a zero exponential slope") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> t(100000);
    for (auto& x : t) x = u(rng);
    const ExitTimePDF pdf = build_pdf(t, 0, {BinScale::Linear, 10});
    REQUIRE(pdf.bins() == 10);
    for (double d : pdf.densities) CHECK(d == doctest::Approx(1.0).epsilon(0.03));
    const FitReport r = fit_exponential_middle(build_pdf(t, 0, {BinScale::Linear, 40}), {0.05, 0.95});
    CHECK(std::abs(r.parameter) < 0.05);
  }

  TEST_CASE("exponential rate recovered within 5%") {
    const double rate = 3e-4;
    const auto t = exponential_sample(rate, 100000, 11);
    const ExitTimePDF pdf = build_pdf(t, 0, {BinScale::Linear, 0});
    const FitReport r = fit_exponential_middle(pdf, default_middle_window(t));
    CHECK(r.model == FitModel::ExponentialMiddle);
    CHECK(-r.parameter == doctest::Approx(rate).epsilon(0.05));
    CHECK(r.point_count >= 20);
  }

  TEST_CASE("power-law slope recovered within 5%") {
    const double slope = -2.5;
    const auto t = powerlaw_sample(slope, 100.0, 100000, 13);
    const ExitTimePDF pdf = build_pdf(t, 0, {BinScale::Log, 0});
    const FitReport r = fit_powerlaw_tail(pdf, default_tail_window(t), 10);
    CHECK(r.model == FitModel::PowerLawTail);
    CHECK(r.parameter == doctest::Approx(slope).epsilon(0.05));
  }

  TEST_CASE("automatic binning") {
    const auto t = exponential_sample(1e-3, 20000, 3);
    const ExitTimePDF lin = build_pdf(t, 0, {BinScale::Linear, 0});
    const double width = lin.bin_edges[1] - lin.bin_edges[0];
    CHECK(width <= (quantile(t, 0.8) - quantile(t, 0.4)) / 25.0 * (1 + 1e-12));
    const ExitTimePDF lg = build_pdf(t, 0, {BinScale::Log, 0});
    const double decades = std::log10(lg.bin_edges.back() / lg.bin_edges.front());
    CHECK(lg.bins() == static_cast<std::size_t>(std::ceil(10.0 * decades - 1e-9)));
    CHECK(lg.center(0) == doctest::Approx(std::sqrt(lg.bin_edges[0] * lg.bin_edges[1])));
  }

  TEST_CASE("exponential data favours the exponential model") {
    const auto t = exponential_sample(5e-4, 50000, 17);
    const ExitTimePDF pdf = build_pdf(t, 0, {BinScale::Linear, 0});
    const FitWindow w{quantile(t, 0.1), quantile(t, 0.9)};
    const FitReport e = fit_exponential_middle(pdf, w);
    const FitReport p = fit_powerlaw_tail(pdf, w, 10);
    CHECK(p.residual > 2.0 * e.residual);
  }

  TEST_CASE("integral equals the finite fraction") {
    const auto t = exponential_sample(1e-3, 4000, 5);
    for (auto scale : {BinScale::Linear, BinScale::Log}) {
      const ExitTimePDF pdf = build_pdf(t, 1000, {scale, 0});
      CHECK(pdf.sample_count == 5000);
      CHECK(pdf.timeout_count == 1000);
      CHECK(pdf.integral() == doctest::Approx(0.8).epsilon(1e-12));
      std::size_t binned = 0;
      for (auto c : pdf.counts) binned += c;
      CHECK(binned == 4000);
    }
  }

  TEST_CASE("histogram is invariant under permutation of the sample") {
    auto t = exponential_sample(1e-3, 5000, 19);
    const ExitTimePDF a = build_pdf(t, 3, {BinScale::Log, 0});
    std::shuffle(t.begin(), t.end(), std::mt19937_64(23));
    const ExitTimePDF b = build_pdf(t, 3, {BinScale::Log, 0});
    CHECK(a.counts == b.counts);
    CHECK(a.densities == b.densities);
    CHECK(a.bin_edges == b.bin_edges);
  }

  TEST_CASE("slopes ignore density normalization and scale with time units") {
    const auto t = exponential_sample(3e-4, 50000, 29);
    ExitTimePDF pdf = build_pdf(t, 0, {BinScale::Linear, 0});
    const FitWindow w = default_middle_window(t);
    const FitReport a = fit_exponential_middle(pdf, w);
    for (auto& d : pdf.densities) d *= 7.0;
    const FitReport b = fit_exponential_middle(pdf, w);
    CHECK(b.parameter == doctest::Approx(a.parameter).epsilon(1e-10));
    CHECK(b.residual == doctest::Approx(a.residual).epsilon(1e-8));

    const auto p = powerlaw_sample(-2.5, 50.0, 50000, 31);
    std::vector<double> scaled(p);
    for (auto& x : scaled) x *= 10.0;
    const FitReport c = fit_powerlaw_tail(build_pdf(p, 0, {BinScale::Log, 0}), default_tail_window(p));
    const FitReport d = fit_powerlaw_tail(build_pdf(scaled, 0, {BinScale::Log, 0}), default_tail_window(scaled));
    CHECK(d.parameter == doctest::Approx(c.parameter).epsilon(1e-6));
  }

  TEST_CASE("error codes") {
    const auto few = exponential_sample(1e-3, kMinPdfSamples - 1, 1);
    CHECK(code_of([&] { build_pdf(few, 0, {}); }) == "insufficient-samples");
    auto with_zero = exponential_sample(1e-3, 2000, 1);
    with_zero[0] = 0.0;
    CHECK(code_of([&] { build_pdf(with_zero, 0, {BinScale::Log, 0}); }) == "insufficient-samples");
    with_zero[0] = NAN;
    CHECK(code_of([&] { build_pdf(with_zero, 0, {}); }) == "insufficient-samples");
    CHECK(code_of([&] { quantile(std::vector<double>{}, 0.5); }) == "insufficient-samples");

    const auto t = exponential_sample(1e-3, 2000, 2);
    const ExitTimePDF pdf = build_pdf(t, 0, {BinScale::Log, 0});
    const double top = pdf.bin_edges.back();
    CHECK(code_of([&] { fit_exponential_middle(pdf, {2 * top, 3 * top}); }) == "empty-window");
    CHECK(code_of([&] { fit_exponential_middle(pdf, {5.0, 1.0}); }) == "empty-window");
    CHECK(code_of([&] { fit_powerlaw_tail(pdf, {2 * top, 3 * top}); }) == "empty-window");
    CHECK(code_of([&] { fit_powerlaw_tail(pdf, default_tail_window(t), 100000); }) == "sparse-tail");
    CHECK(code_of([] { fit_line(std::vector<double>{1, 1}, std::vector<double>{1, 2}); }) == "empty-window");
  }

  TEST_CASE("CSV and JSON layouts") {
    const auto t = exponential_sample(1e-3, 2000, 4);
    const ExitTimePDF pdf = build_pdf(t, 0, {BinScale::Linear, 8});
    std::ostringstream os;
    write_pdf_csv(os, pdf);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "bin_lo,bin_hi,density,count");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 8);

    const FitReport r = fit_exponential_middle(build_pdf(t, 0, {}), default_middle_window(t));
    const auto j = nlohmann::json::parse(fit_report_json(r));
    CHECK(j["model"] == "exponential_middle");
    CHECK(j["window"].size() == 2);
    for (const char* k : {"parameter", "parameter_stderr", "residual", "point_count"}) CHECK(j.contains(k));
  }
}
