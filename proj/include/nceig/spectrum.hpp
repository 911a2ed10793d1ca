#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nceig/eigensolver.hpp"
#include "nceig/kernel.hpp"

namespace nceig {

using complex = std::complex<double>;

// {-x^2 : x in [a, b]}: the part of the spectrum contributed by the
// multiplication operator. Discrete eigenvalues cluster inside it.
struct EssentialBand {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  // Distance of a real value to [lo, hi].
  double distance(double x) const noexcept {
    if (x > hi) return x - hi;
    if (x < lo) return lo - x;
    return 0.0;
  }
};

EssentialBand essential_band(double a, double b);

// Default filter margin: 0.005 * (band width + 1).
double default_margin(const EssentialBand& band);

// Keeps lambda with dist(Re lambda, band) > margin or |Im lambda| > margin,
// in descending order of real part. Requires margin > 0.
std::vector<complex> isolated_eigenvalues(const Spectrum& s, const EssentialBand& band,
                                          double margin);

struct Pairing {
  // For each prev entry, the index of its partner in next, if any.
  std::vector<std::optional<std::size_t>> partner;
  // Set when two candidate distances tied to 1e-14; the lower index won.
  bool ambiguous = false;

  std::size_t matched() const;
};

/// Greedy nearest-neighbour pairing in the complex plane: candidate pairs
/// within the radius are taken in order of increasing distance, each side
/// used at most once. radii holds one radius per prev entry.
Pairing match_eigenvalues(std::span<const complex> prev, std::span<const complex> next,
                          std::span<const double> radii);
Pairing match_eigenvalues(std::span<const complex> prev, std::span<const complex> next,
                          double radius);

// Half the distance from each tracked value to the nearest other isolated
// eigenvalue of the same level or to the essential band, whichever is closer.
std::vector<double> matching_radii(std::span<const complex> tracked,
                                   std::span<const complex> isolated, const EssentialBand& band);

struct ReferenceStrategy {
  enum class Kind { fine_mesh, richardson };
  Kind kind = Kind::fine_mesh;
  // Mesh size of the reference solve; 0 selects 4 * max(schedule).
  int n_ref = 0;

  static ReferenceStrategy fine_mesh(int n = 0) { return {Kind::fine_mesh, n}; }
  static ReferenceStrategy richardson() { return {Kind::richardson, 0}; }
};

struct StudyConfig {
  Kernel kernel = Kernel::gaussian();
  double alpha = 1.0;
  double a = -2.0;
  double b = 2.0;
  int order = 2;
  std::vector<int> schedule{10, 20, 40, 80, 160};
  int track_count = 2;
  std::optional<double> margin;  // default_margin(band) when empty
  ReferenceStrategy reference;
};

struct ConvergenceRow {
  int n = 0;
  std::size_t basis_size = 0;
  std::vector<complex> lambda;               // per tracked eigenvalue
  std::vector<double> error;                 // |lambda_n - lambda_ref|
  std::vector<std::optional<double>> ratio;  // previous error / this error
};

struct ConvergenceReport {
  std::string kernel;
  double alpha = 0.0;
  double a = 0.0;
  double b = 0.0;
  int order = 0;
  std::vector<int> schedule;
  int track_count = 0;  // requested
  double margin = 0.0;
  EssentialBand band;
  ReferenceStrategy reference;
  std::vector<complex> reference_values;  // one per tracked eigenvalue
  // Fine-mesh strategy only: |fine-mesh reference - Richardson estimate|.
  std::vector<double> reference_gap;
  std::vector<ConvergenceRow> rows;

  std::size_t tracked() const noexcept { return reference_values.size(); }
  std::string reference_description() const;
};

/// Assembles and solves every level of the schedule (levels in parallel),
/// seeds tracking with the isolated eigenvalues of largest real part at
/// the coarsest level and follows them forward level by level.
///
/// Throws ConfigError for a schedule that is not strictly increasing or has
/// fewer than two levels, and TrackingError when a tracked eigenvalue has
/// no partner within its matching radius at a later level or in the
/// reference solve. An operator without isolated eigenvalues yields a
/// report with no tracked columns.
ConvergenceReport convergence_study(const StudyConfig& config);

// One assembled-and-solved instance with its isolated eigenvalues.
struct SolveResult {
  std::string kernel;
  double alpha = 0.0;
  double a = 0.0;
  double b = 0.0;
  int order = 0;
  int n = 0;
  EssentialBand band;
  double margin = 0.0;
  Spectrum spectrum;
  std::vector<complex> isolated;
};

SolveResult solve_instance(const Kernel& kernel, double alpha, double a, double b, int order,
                           int n, std::optional<double> margin = std::nullopt);

}  // namespace nceig
