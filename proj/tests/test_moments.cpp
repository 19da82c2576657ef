#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "pbreg/errors.hpp"
#include "pbreg/moments.hpp"

using namespace pbreg;

TEST_CASE("bin_deviance_moments matches the arbitrary-precision oracle") {
  for (const auto& ref : oracle::bin_moments) {
    const MomentPair got = bin_deviance_moments(ref.mu);
    CHECK(got.expectation == doctest::Approx(ref.expectation).epsilon(1e-10));
    CHECK(got.variance == doctest::Approx(ref.variance).epsilon(1e-10));
    CHECK(got.kind == MomentKind::PoissonExact);
  }
}

TEST_CASE("bin_deviance_moments is stable under truncation doubling") {
  for (const double mu : {0.01, 0.1, 1.0, 10.0, 100.0, 1000.0, 10000.0}) {
    const std::int64_t k_max =
        static_cast<std::int64_t>(std::ceil(mu + 12.0 * std::sqrt(mu) + 40.0));
    const MomentPair base = bin_deviance_moments(mu, k_max);
    const MomentPair doubled = bin_deviance_moments(mu, 2 * k_max);
    CHECK(std::fabs(doubled.expectation - base.expectation) <
          1e-10 * std::fabs(base.expectation));
    CHECK(std::fabs(doubled.variance - base.variance) < 1e-10 * std::fabs(base.variance));
  }
}

TEST_CASE("bin_deviance_moments approaches the chi-squared limit at large mean") {
  const MomentPair at100 = bin_deviance_moments(100.0);
  CHECK(std::fabs(at100.expectation - 0.992) < 0.01);
  const MomentPair at10000 = bin_deviance_moments(10000.0);
  CHECK(at10000.expectation == doctest::Approx(1.0).epsilon(2e-4));
  CHECK(at10000.variance == doctest::Approx(2.0).epsilon(2e-3));
}

TEST_CASE("bin_deviance_moments rejects non-positive means") {
  CHECK_THROWS_AS(bin_deviance_moments(0.0), validation_error);
  CHECK_THROWS_AS(bin_deviance_moments(-1.0), validation_error);
}

TEST_CASE("expected_statistic aggregates bins and subtracts df") {
  const std::vector<double> bins(100, 1.0);
  const MomentPair got = expected_statistic(bins, 1.0);
  CHECK(got.expectation == doctest::Approx(100.0 * 1.14680561824524 - 1.0).epsilon(1e-10));
  CHECK(got.variance == doctest::Approx(100.0 * 1.36460187928009).epsilon(1e-10));
}

TEST_CASE("expected_statistic on zero bins returns the pure df correction") {
  const MomentPair got = expected_statistic({}, 2.5);
  CHECK(got.expectation == -2.5);
  CHECK(got.variance == 0.0);
}

TEST_CASE("expected_statistic covers the two-region aggregate") {
  std::vector<double> bins;
  bins.insert(bins.end(), 100, 0.2);
  bins.insert(bins.end(), 100, 0.1);
  const MomentPair got = expected_statistic(bins, 2.0);
  CHECK(got.expectation == doctest::Approx(oracle::agg_joint_01_01_expectation).epsilon(1e-9));
  // Within 5% of the Monte Carlo reference median 114.8 for this cell.
  CHECK(std::fabs(got.expectation - 114.8) / 114.8 < 0.05);
}

TEST_CASE("expected_statistic rejects invalid inputs") {
  CHECK_THROWS_AS(expected_statistic(std::vector<double>{1.0, 0.0}, 1.0), validation_error);
  CHECK_THROWS_AS(expected_statistic(std::vector<double>{1.0}, -1.0), validation_error);
}

TEST_CASE("chi2_reference arithmetic") {
  const MomentPair a = chi2_reference(100, 1.0);
  CHECK(a.expectation == 99.0);
  CHECK(a.variance == 198.0);
  CHECK(a.kind == MomentKind::ChiSquared);
  const MomentPair b = chi2_reference(200, 2.0);
  CHECK(b.expectation == 198.0);
  CHECK(b.variance == 396.0);
  const MomentPair c = chi2_reference(10, 1.0);
  CHECK(c.expectation == 9.0);
  CHECK(c.variance == 18.0);
}

TEST_CASE("chi2_reference requires more bins than df") {
  CHECK_THROWS_AS(chi2_reference(2, 2.0), validation_error);
  CHECK_THROWS_AS(chi2_reference(1, 5.0), validation_error);
  CHECK_THROWS_AS(chi2_reference(10, -1.0), validation_error);
}

TEST_CASE("gof_zscore normalizes against the moment pair") {
  const MomentPair m{100.0, 25.0, MomentKind::PoissonExact};
  CHECK(gof_zscore(100.0, m) == 0.0);
  CHECK(gof_zscore(105.0, m) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(gof_zscore(1.0, MomentPair{1.0, 0.0, MomentKind::PoissonExact}),
                  validation_error);
}

TEST_CASE("observed reference-median z-score for the source-dominated cell") {
  std::vector<double> bins;
  bins.insert(bins.end(), 100, 10.1);
  bins.insert(bins.end(), 100, 0.1);
  const MomentPair m = expected_statistic(bins, 2.0);
  CHECK(m.expectation == doctest::Approx(oracle::agg_joint_10_01_expectation).epsilon(1e-9));
  CHECK(m.variance == doctest::Approx(oracle::agg_joint_10_01_variance).epsilon(1e-9));
  const double z = gof_zscore(146.3, m);
  CHECK(z == doctest::Approx(oracle::zscore_146_3).epsilon(1e-7));
  CHECK(std::fabs(z) < 1.0);
}

TEST_CASE("conjectured df-corrected expectation for the profiled statistic") {
  const std::vector<double> bins(100, 11.0);
  const MomentPair got = expected_statistic(bins, 48.02);
  CHECK(got.expectation == doctest::Approx(oracle::conjecture_1_10).epsilon(1e-9));
  CHECK(std::fabs(got.expectation - 52.8) < 2.0);
}
