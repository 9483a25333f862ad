#pragma once

#include <iosfwd>
#include <string>

#include "qfcsim/analysis/g2.hpp"
#include "qfcsim/analysis/histogram.hpp"

namespace qfcsim::io {

// Locale-independent "%.10g" rendering; identical inputs give identical bytes.
std::string format_number(double v);

// Header: bin_center_ps,counts,counts_per_s (counts_per_s empty when the
// histogram carries no acquisition time).
void write_histogram_csv(std::ostream& out, const analysis::Histogram& hist);

// Header: separation,counts,g2,sigma
void write_g2_csv(std::ostream& out, const analysis::G2Histogram& g2);

}  // namespace qfcsim::io
