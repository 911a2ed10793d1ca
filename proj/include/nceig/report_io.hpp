#pragma once

#include <string>

#include "nceig/assembly.hpp"
#include "nceig/spectrum.hpp"

namespace nceig {

// Machine formats print every real with 17 significant digits (CSV) or the
// shortest round-trip spelling (JSON); both recover the same double.

// One matrix row per line, no header.
std::string to_csv(const OperatorMatrix& m);
// Metadata plus row-major "entries".
std::string to_json(const OperatorMatrix& m);

// Header n,N_h,lambda1_re,lambda1_im,err1,ratio1,...; ratio is blank on
// the first row.
std::string to_csv(const ConvergenceReport& r);
std::string to_json(const ConvergenceReport& r);
// Aligned text laid out like the published error tables: errors with four
// decimals (scientific below 1e-3), ratios with two.
std::string to_table(const ConvergenceReport& r);

std::string to_csv(const SolveResult& s);
std::string to_json(const SolveResult& s);
std::string to_table(const SolveResult& s);

// %.17g
std::string format_real(double v);

}  // namespace nceig
