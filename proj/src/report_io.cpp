#include "nceig/report_io.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace nceig {

using nlohmann::ordered_json;

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

ordered_json complex_json(complex z) { return ordered_json{{"re", z.real()}, {"im", z.imag()}}; }

ordered_json complex_list(const std::vector<complex>& zs) {
  ordered_json out = ordered_json::array();
  for (const complex& z : zs) out.push_back(complex_json(z));
  return out;
}

std::string format_error(double e) {
  char buf[40];
  if (e >= 1e-3 || e == 0.0) {
    std::snprintf(buf, sizeof buf, "%.4f", e);
  } else {
    std::snprintf(buf, sizeof buf, "%.4e", e);
  }
  return buf;
}

std::string format_ratio(double r) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", r);
  return buf;
}

std::string format_complex(complex z) {
  std::ostringstream out;
  out << format_real(z.real());
  if (z.imag() != 0.0) out << (z.imag() < 0 ? " - " : " + ") << format_real(std::abs(z.imag())) << "i";
  return out.str();
}

}  // namespace

std::string to_csv(const OperatorMatrix& m) {
  std::ostringstream out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out << ',';
      out << format_real(m(i, j));
    }
    out << '\n';
  }
  return out.str();
}

std::string to_json(const OperatorMatrix& m) {
  ordered_json j;
  j["size"] = m.size();
  j["alpha"] = m.alpha();
  j["kernel"] = m.kernel_source();
  j["order"] = m.order();
  j["breakpoints"] = m.partition().breakpoints();
  ordered_json entries = ordered_json::array();
  for (double v : m.entries().data()) entries.push_back(v);
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

std::string to_csv(const ConvergenceReport& r) {
  std::ostringstream out;
  out << "n,N_h";
  for (std::size_t k = 1; k <= r.tracked(); ++k) {
    out << ",lambda" << k << "_re,lambda" << k << "_im,err" << k << ",ratio" << k;
  }
  out << '\n';
  for (const auto& row : r.rows) {
    out << row.n << ',' << row.basis_size;
    for (std::size_t k = 0; k < r.tracked(); ++k) {
      out << ',' << format_real(row.lambda[k].real()) << ',' << format_real(row.lambda[k].imag())
          << ',' << format_real(row.error[k]) << ',';
      if (row.ratio[k]) out << format_real(*row.ratio[k]);
    }
    out << '\n';
  }
  return out.str();
}

std::string to_json(const ConvergenceReport& r) {
  ordered_json j;
  j["kernel"] = r.kernel;
  j["alpha"] = r.alpha;
  j["interval"] = {r.a, r.b};
  j["order"] = r.order;
  j["schedule"] = r.schedule;
  j["track_count"] = r.track_count;
  j["tracked"] = r.tracked();
  j["margin"] = r.margin;
  j["band"] = {{"lo", r.band.lo}, {"hi", r.band.hi}};
  j["reference"] = r.reference_description();
  j["reference_values"] = complex_list(r.reference_values);
  if (!r.reference_gap.empty()) j["reference_richardson_gap"] = r.reference_gap;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json jr;
    jr["n"] = row.n;
    jr["N_h"] = row.basis_size;
    jr["lambda"] = complex_list(row.lambda);
    jr["error"] = row.error;
    ordered_json ratios = ordered_json::array();
    for (const auto& q : row.ratio) ratios.push_back(q ? ordered_json(*q) : ordered_json());
    jr["ratio"] = std::move(ratios);
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string to_table(const ConvergenceReport& r) {
  std::ostringstream out;
  out << "kernel " << r.kernel << ", alpha = " << format_real(r.alpha) << ", interval ["
      << format_real(r.a) << ", " << format_real(r.b) << "], r = " << r.order << ", reference "
      << r.reference_description() << '\n';
  if (r.tracked() == 0) {
    out << "no isolated eigenvalues outside the essential band ["
        << format_real(r.band.lo) << ", " << format_real(r.band.hi) << "] (margin "
        << format_real(r.margin) << ")\n";
    return out.str();
  }
  for (std::size_t k = 0; k < r.tracked(); ++k) {
    out << "lambda(" << k + 1 << ") = " << format_complex(r.reference_values[k]) << '\n';
  }
  constexpr int n_width = 6;
  constexpr int err_width = 18;
  constexpr int ratio_width = 10;
  auto trimmed = [](const std::ostringstream& line) {
    std::string s = line.str();
    s.erase(s.find_last_not_of(' ') + 1);
    return s;
  };
  std::ostringstream header;
  header << std::left << std::setw(n_width) << "n";
  for (std::size_t k = 1; k <= r.tracked(); ++k) {
    header << std::setw(err_width)
           << ("|l_n(" + std::to_string(k) + ")-l(" + std::to_string(k) + ")|")
           << std::setw(ratio_width) << ("ratio(" + std::to_string(k) + ")");
  }
  out << trimmed(header) << '\n';
  for (const auto& row : r.rows) {
    std::ostringstream line;
    line << std::left << std::setw(n_width) << row.n;
    for (std::size_t k = 0; k < r.tracked(); ++k) {
      line << std::setw(err_width) << format_error(row.error[k]) << std::setw(ratio_width)
           << (row.ratio[k] ? format_ratio(*row.ratio[k]) : std::string());
    }
    out << trimmed(line) << '\n';
  }
  return out.str();
}

std::string to_csv(const SolveResult& s) {
  std::ostringstream out;
  out << "index,re,im,isolated\n";
  std::size_t next_isolated = 0;
  for (std::size_t i = 0; i < s.spectrum.eigenvalues.size(); ++i) {
    const complex z = s.spectrum.eigenvalues[i];
    // Isolated values are a subsequence of the sorted spectrum.
    const bool iso = next_isolated < s.isolated.size() && s.isolated[next_isolated] == z;
    if (iso) ++next_isolated;
    out << i + 1 << ',' << format_real(z.real()) << ',' << format_real(z.imag()) << ','
        << (iso ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string to_json(const SolveResult& s) {
  ordered_json j;
  j["kernel"] = s.kernel;
  j["alpha"] = s.alpha;
  j["interval"] = {s.a, s.b};
  j["order"] = s.order;
  j["n"] = s.n;
  j["N_h"] = s.spectrum.size;
  j["band"] = {{"lo", s.band.lo}, {"hi", s.band.hi}};
  j["margin"] = s.margin;
  j["eigenvalues"] = complex_list(s.spectrum.eigenvalues);
  j["isolated"] = complex_list(s.isolated);
  j["diagnostics"] = {{"sweeps", s.spectrum.sweeps}, {"deflations", s.spectrum.deflations}};
  return j.dump(2) + "\n";
}

std::string to_table(const SolveResult& s) {
  std::ostringstream out;
  out << "kernel " << s.kernel << ", alpha = " << format_real(s.alpha) << ", interval ["
      << format_real(s.a) << ", " << format_real(s.b) << "], r = " << s.order << ", n = " << s.n
      << ", N_h = " << s.spectrum.size << '\n';
  out << "essential band [" << format_real(s.band.lo) << ", " << format_real(s.band.hi)
      << "], margin " << format_real(s.margin) << '\n';
  out << "isolated eigenvalues (" << s.isolated.size() << "):\n";
  for (const complex& z : s.isolated) out << "  " << format_complex(z) << '\n';
  out << "all eigenvalues (" << s.spectrum.eigenvalues.size() << "):\n";
  for (const complex& z : s.spectrum.eigenvalues) out << "  " << format_complex(z) << '\n';
  return out.str();
}

}  // namespace nceig
