#include <doctest.h>

#include <cmath>

#include "nceig/errors.hpp"
#include "nceig/spectrum.hpp"

using namespace nceig;

namespace {

Spectrum spectrum_of(std::vector<complex> values) {
  Spectrum s;
  s.size = values.size();
  s.eigenvalues = std::move(values);
  return s;
}

}  // namespace

TEST_CASE("essential band") {
  const auto b1 = essential_band(-2, 2);
  CHECK(b1.lo == -4.0);
  CHECK(b1.hi == 0.0);
  const auto b2 = essential_band(-4, 4);
  CHECK(b2.lo == -16.0);
  CHECK(b2.hi == 0.0);
  const auto b3 = essential_band(1, 3);
  CHECK(b3.lo == -9.0);
  CHECK(b3.hi == -1.0);
  const auto b4 = essential_band(-3, -1);
  CHECK(b4.lo == -9.0);
  CHECK(b4.hi == -1.0);
  CHECK(b3.distance(0.5) == 1.5);
  CHECK(b3.distance(-10.0) == 1.0);
  CHECK(b3.distance(-2.0) == 0.0);
  CHECK(default_margin(b1) == doctest::Approx(0.025));
}

TEST_CASE("isolated eigenvalue filter") {
  const auto band = essential_band(-2, 2);
  CHECK(isolated_eigenvalues(spectrum_of({5.0, -1.0, -3.9}), band, 0.1) ==
        std::vector<complex>{5.0});
  CHECK(isolated_eigenvalues(spectrum_of({0.05}), band, 0.1).empty());
  // Far below the band, or off the real axis.
  CHECK(isolated_eigenvalues(spectrum_of({{-1.0, 0.5}, {-1.0, -0.5}, -4.2}), band, 0.1) ==
        std::vector<complex>{{-1.0, 0.5}, {-1.0, -0.5}, -4.2});
  CHECK_THROWS_AS(isolated_eigenvalues(spectrum_of({1.0}), band, 0.0), ConfigError);
}

TEST_CASE("match_eigenvalues") {
  const std::vector<complex> one{1.0};
  const auto p1 = match_eigenvalues(one, std::vector<complex>{1.05}, 0.2);
  REQUIRE(p1.partner[0].has_value());
  CHECK(*p1.partner[0] == 0);

  const auto p2 = match_eigenvalues(one, std::vector<complex>{3.0}, 0.2);
  CHECK_FALSE(p2.partner[0].has_value());
  CHECK(p2.matched() == 0);

  const std::vector<complex> prev{2.0, 1.0};
  const auto p3 = match_eigenvalues(prev, std::vector<complex>{1.98, 1.03}, 0.2);
  CHECK(*p3.partner[0] == 0);
  CHECK(*p3.partner[1] == 1);
  CHECK_FALSE(p3.ambiguous);

  // Nearest pair is served first even when it is not the first entry.
  const auto p4 = match_eigenvalues(prev, std::vector<complex>{1.6, 1.55}, 0.6);
  CHECK(*p4.partner[1] == 1);
  CHECK(*p4.partner[0] == 0);

  // Equidistant candidates: flagged, lower index wins.
  const auto p5 = match_eigenvalues(one, std::vector<complex>{1.1, 0.9}, 0.5);
  CHECK(p5.ambiguous);
  CHECK(*p5.partner[0] == 0);

  // A partial injection: each next entry used once.
  const auto p6 = match_eigenvalues(prev, std::vector<complex>{1.5}, 1.0);
  CHECK(p6.matched() == 1);
}

TEST_CASE("matching radii") {
  const auto band = essential_band(-2, 2);
  const std::vector<complex> iso{1.2, 0.3};
  const auto radii = matching_radii(iso, iso, band);
  CHECK(radii[0] == doctest::Approx(0.45));
  CHECK(radii[1] == doctest::Approx(0.15));
}

TEST_CASE("example 1 operator has two positive isolated eigenvalues") {
  const auto res = solve_instance(Kernel::gaussian(), 1.0, -2, 2, 2, 40);
  CHECK(res.spectrum.eigenvalues.size() == 80);
  REQUIRE(res.isolated.size() >= 2);
  CHECK(res.isolated[0].real() > 0.0);
  CHECK(res.isolated[1].real() > 0.0);
  for (const complex& z : res.isolated) {
    CHECK((res.band.distance(z.real()) > res.margin || std::abs(z.imag()) > res.margin));
  }
}

TEST_CASE("pure multiplication operator has nothing to track") {
  StudyConfig cfg;
  cfg.kernel = Kernel::from_expression("1");
  cfg.alpha = 0.0;
  cfg.schedule = {10, 20};
  const auto report = convergence_study(cfg);
  CHECK(report.tracked() == 0);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].error.empty());
  CHECK(report.rows[1].basis_size == 40);
}

TEST_CASE("schedule validation") {
  StudyConfig cfg;
  cfg.schedule = {10};
  CHECK_THROWS_AS(convergence_study(cfg), ConfigError);
  cfg.schedule = {10, 10};
  CHECK_THROWS_AS(convergence_study(cfg), ConfigError);
  cfg.schedule = {20, 10};
  CHECK_THROWS_AS(convergence_study(cfg), ConfigError);
  cfg.schedule = {1, 2};
  CHECK_THROWS_AS(convergence_study(cfg), ConfigError);
  cfg.schedule = {10, 20};
  cfg.reference = ReferenceStrategy::fine_mesh(20);
  CHECK_THROWS_AS(convergence_study(cfg), ConfigError);
  cfg.reference = {};
  cfg.margin = -1.0;
  CHECK_THROWS_AS(convergence_study(cfg), ConfigError);
}

TEST_CASE("convergence study on example 1 with a short schedule") {
  StudyConfig cfg;
  cfg.schedule = {10, 20, 40, 80};
  const auto report = convergence_study(cfg);
  CHECK(report.reference.n_ref == 320);
  REQUIRE(report.tracked() == 2);
  CHECK(report.reference_values[0].real() == doctest::Approx(1.19918).epsilon(1e-4));
  CHECK(report.reference_values[1].real() == doctest::Approx(0.28755).epsilon(1e-3));
  CHECK_FALSE(report.rows[0].ratio[0].has_value());
  for (std::size_t l = 1; l < report.rows.size(); ++l) {
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(report.rows[l].error[k] < report.rows[l - 1].error[k]);
      CHECK(*report.rows[l].ratio[k] ==
            doctest::Approx(report.rows[l - 1].error[k] / report.rows[l].error[k]));
      // Midpoint values of x^2 give second-order eigenvalue errors here.
      CHECK(*report.rows[l].ratio[k] > 3.5);
      CHECK(*report.rows[l].ratio[k] < 4.7);
    }
  }
  // The Richardson estimate assumes first order, so it sits well away from
  // the fine-mesh reference; recorded for inspection only.
  REQUIRE(report.reference_gap.size() == 2);
  CHECK(report.reference_gap[0] > 0.0);
}

TEST_CASE("richardson reference") {
  StudyConfig cfg;
  cfg.kernel = Kernel::cauchy();
  cfg.a = -4;
  cfg.b = 4;
  cfg.schedule = {10, 20, 40};
  cfg.reference = ReferenceStrategy::richardson();
  const auto report = convergence_study(cfg);
  REQUIRE(report.tracked() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    const complex expected = 2.0 * report.rows[2].lambda[k] - report.rows[1].lambda[k];
    CHECK(std::abs(report.reference_values[k] - expected) < 1e-15);
    CHECK(report.rows[2].error[k] == doctest::Approx(std::abs(report.rows[2].lambda[k] -
                                                              report.rows[1].lambda[k])));
  }
  CHECK(report.reference_gap.empty());
  CHECK(report.reference_description() == "richardson");
}

TEST_CASE("tracking loss when an eigenvalue sinks into the margin") {
  // For k = 1 the top eigenvalue drifts downward under refinement; put the
  // margin between the coarse and fine values so it disappears.
  const Kernel k = Kernel::from_expression("1");
  const double alpha = 0.4;
  const auto coarse = solve_instance(k, alpha, -1, 1, 1, 4, 1e-6);
  const auto fine = solve_instance(k, alpha, -1, 1, 1, 8, 1e-6);
  REQUIRE(!coarse.isolated.empty());
  REQUIRE(!fine.isolated.empty());
  const double top_coarse = coarse.isolated[0].real();
  const double top_fine = fine.isolated[0].real();
  CAPTURE(top_coarse);
  CAPTURE(top_fine);
  REQUIRE(top_coarse > top_fine);
  REQUIRE(top_fine > 0.0);

  StudyConfig cfg;
  cfg.kernel = k;
  cfg.alpha = alpha;
  cfg.a = -1;
  cfg.b = 1;
  cfg.order = 1;
  cfg.schedule = {4, 8};
  cfg.track_count = 1;
  cfg.margin = 0.5 * (top_coarse + top_fine);
  CHECK_THROWS_AS(convergence_study(cfg), TrackingError);
}
