#include "nceig/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "nceig/assembly.hpp"
#include "nceig/errors.hpp"
#include "nceig/parallel.hpp"

namespace nceig {

EssentialBand essential_band(double a, double b) {
  const double lo = -std::max(a * a, b * b);
  const double hi = (a <= 0.0 && b >= 0.0) ? 0.0 : -std::min(a * a, b * b);
  return {lo, hi};
}

double default_margin(const EssentialBand& band) { return 0.005 * (band.width() + 1.0); }

std::vector<complex> isolated_eigenvalues(const Spectrum& s, const EssentialBand& band,
                                          double margin) {
  if (!(margin > 0.0)) throw ConfigError("isolation margin must be positive");
  std::vector<complex> out;
  for (const complex& z : s.eigenvalues) {
    if (band.distance(z.real()) > margin || std::abs(z.imag()) > margin) out.push_back(z);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](complex l, complex r) { return l.real() > r.real(); });
  return out;
}

std::size_t Pairing::matched() const {
  return static_cast<std::size_t>(
      std::count_if(partner.begin(), partner.end(), [](const auto& p) { return p.has_value(); }));
}

Pairing match_eigenvalues(std::span<const complex> prev, std::span<const complex> next,
                          std::span<const double> radii) {
  struct Candidate {
    double dist;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    for (std::size_t j = 0; j < next.size(); ++j) {
      const double d = std::abs(prev[i] - next[j]);
      if (d <= radii[i]) candidates.push_back({d, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
    return std::tie(l.dist, l.i, l.j) < std::tie(r.dist, r.i, r.j);
  });

  Pairing out;
  out.partner.assign(prev.size(), std::nullopt);
  std::vector<bool> taken(next.size(), false);
  auto available = [&](const Candidate& c) { return !out.partner[c.i] && !taken[c.j]; };
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!available(candidates[c])) continue;
    // Candidates within 1e-14 of the nearest count as tied; the lowest
    // (prev, next) index pair wins and a real conflict is flagged.
    const Candidate* best = &candidates[c];
    std::vector<const Candidate*> tied{best};
    for (std::size_t d = c + 1; d < candidates.size(); ++d) {
      const auto& other = candidates[d];
      if (other.dist - candidates[c].dist > 1e-14) break;
      if (!available(other)) continue;
      tied.push_back(&other);
      if (std::tie(other.i, other.j) < std::tie(best->i, best->j)) best = &other;
    }
    for (const Candidate* t : tied) {
      if (t != best && (t->i == best->i || t->j == best->j)) out.ambiguous = true;
    }
    out.partner[best->i] = best->j;
    taken[best->j] = true;
    if (best != &candidates[c]) --c;  // revisit the nearest candidate
  }
  return out;
}

Pairing match_eigenvalues(std::span<const complex> prev, std::span<const complex> next,
                          double radius) {
  const std::vector<double> radii(prev.size(), radius);
  return match_eigenvalues(prev, next, radii);
}

std::vector<double> matching_radii(std::span<const complex> tracked,
                                   std::span<const complex> isolated, const EssentialBand& band) {
  std::vector<double> radii;
  radii.reserve(tracked.size());
  for (const complex& z : tracked) {
    double nearest = std::hypot(band.distance(z.real()), z.imag());
    for (const complex& other : isolated) {
      if (other == z) continue;
      nearest = std::min(nearest, std::abs(other - z));
    }
    radii.push_back(0.5 * nearest);
  }
  return radii;
}

std::string ConvergenceReport::reference_description() const {
  std::ostringstream out;
  if (reference.kind == ReferenceStrategy::Kind::richardson) {
    out << "richardson";
  } else {
    out << "fine-mesh n_ref=" << reference.n_ref;
  }
  return out.str();
}

namespace {

struct Level {
  int n = 0;
  std::size_t basis_size = 0;
  std::vector<complex> isolated;
};

Level solve_level(const StudyConfig& config, const EssentialBand& band, double margin, int n) {
  const GaussRule& rule = gauss_rule(config.order);
  const Partition part = uniform_partition(config.a, config.b, n);
  const OperatorMatrix a = assemble(config.kernel, config.alpha, part, rule);
  const Spectrum s = eigenvalues(a);
  return {n, a.size(), isolated_eigenvalues(s, band, margin)};
}

// Follows `from` into `level`, throwing when a value has no partner.
std::vector<complex> follow(std::span<const complex> from, std::span<const complex> from_isolated,
                            const Level& level, const EssentialBand& band,
                            const std::string& where) {
  const std::vector<double> radii = matching_radii(from, from_isolated, band);
  const Pairing pairing = match_eigenvalues(from, level.isolated, radii);
  std::vector<complex> out(from.size());
  for (std::size_t k = 0; k < from.size(); ++k) {
    if (!pairing.partner[k]) {
      std::ostringstream msg;
      msg.precision(10);
      msg << "tracked eigenvalue " << k + 1 << " (" << from[k].real();
      if (from[k].imag() != 0.0) msg << (from[k].imag() < 0 ? " - " : " + ") << std::abs(from[k].imag()) << "i";
      msg << ") lost at " << where << ": no isolated eigenvalue within radius " << radii[k];
      throw TrackingError(msg.str());
    }
    out[k] = level.isolated[*pairing.partner[k]];
  }
  return out;
}

}  // namespace

ConvergenceReport convergence_study(const StudyConfig& config) {
  const auto& schedule = config.schedule;
  if (schedule.size() < 2) throw ConfigError("a convergence study needs at least two levels");
  for (std::size_t l = 1; l < schedule.size(); ++l) {
    if (schedule[l] <= schedule[l - 1]) throw ConfigError("schedule must be strictly increasing");
  }
  if (config.track_count < 1) throw ConfigError("track count must be at least 1");
  // Validate geometry and order up front, before any worker starts.
  (void)uniform_partition(config.a, config.b, schedule.front());
  (void)gauss_rule(config.order);

  ConvergenceReport report;
  report.kernel = config.kernel.source();
  report.alpha = config.alpha;
  report.a = config.a;
  report.b = config.b;
  report.order = config.order;
  report.schedule = schedule;
  report.track_count = config.track_count;
  report.band = essential_band(config.a, config.b);
  report.margin = config.margin.value_or(default_margin(report.band));
  if (!(report.margin > 0.0)) throw ConfigError("isolation margin must be positive");
  report.reference = config.reference;

  const bool fine = config.reference.kind == ReferenceStrategy::Kind::fine_mesh;
  if (fine && report.reference.n_ref == 0) report.reference.n_ref = 4 * schedule.back();
  if (fine && report.reference.n_ref <= schedule.back()) {
    throw ConfigError("reference mesh must be finer than the finest schedule level");
  }

  std::vector<int> sizes = schedule;
  if (fine) sizes.push_back(report.reference.n_ref);
  std::vector<Level> levels(sizes.size());
  parallel_for(sizes.size(), [&](std::size_t l) {
    levels[l] = solve_level(config, report.band, report.margin, sizes[l]);
  });

  const Level& coarsest = levels.front();
  const std::size_t tracked =
      std::min(static_cast<std::size_t>(config.track_count), coarsest.isolated.size());

  std::vector<std::vector<complex>> values(schedule.size());
  values[0].assign(coarsest.isolated.begin(), coarsest.isolated.begin() + tracked);
  for (std::size_t l = 1; l < schedule.size(); ++l) {
    values[l] = follow(values[l - 1], levels[l - 1].isolated, levels[l], report.band,
                       "n=" + std::to_string(schedule[l]));
  }

  const std::size_t last = schedule.size() - 1;
  const double rho = static_cast<double>(schedule[last]) / schedule[last - 1];
  std::vector<complex> richardson(tracked);
  for (std::size_t k = 0; k < tracked; ++k) {
    richardson[k] = (rho * values[last][k] - values[last - 1][k]) / (rho - 1.0);
  }
  if (fine) {
    report.reference_values = follow(values[last], levels[last].isolated, levels.back(),
                                     report.band, "reference n=" + std::to_string(sizes.back()));
    for (std::size_t k = 0; k < tracked; ++k) {
      report.reference_gap.push_back(std::abs(report.reference_values[k] - richardson[k]));
    }
  } else {
    report.reference_values = richardson;
  }

  for (std::size_t l = 0; l < schedule.size(); ++l) {
    ConvergenceRow row;
    row.n = schedule[l];
    row.basis_size = levels[l].basis_size;
    row.lambda = values[l];
    for (std::size_t k = 0; k < tracked; ++k) {
      row.error.push_back(std::abs(values[l][k] - report.reference_values[k]));
      if (l == 0) {
        row.ratio.push_back(std::nullopt);
      } else {
        row.ratio.push_back(report.rows[l - 1].error[k] / row.error[k]);
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

SolveResult solve_instance(const Kernel& kernel, double alpha, double a, double b, int order,
                           int n, std::optional<double> margin) {
  SolveResult out;
  out.kernel = kernel.source();
  out.alpha = alpha;
  out.a = a;
  out.b = b;
  out.order = order;
  out.n = n;
  const Partition part = uniform_partition(a, b, n);
  const GaussRule& rule = gauss_rule(order);
  out.band = essential_band(a, b);
  out.margin = margin.value_or(default_margin(out.band));
  if (!(out.margin > 0.0)) throw ConfigError("isolation margin must be positive");
  out.spectrum = eigenvalues(assemble(kernel, alpha, part, rule));
  out.isolated = isolated_eigenvalues(out.spectrum, out.band, out.margin);
  return out;
}

}  // namespace nceig
