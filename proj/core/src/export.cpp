#include "qfcsim/io/export.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace qfcsim::io {

std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

void write_histogram_csv(std::ostream& out, const analysis::Histogram& hist) {
  out << "bin_center_ps,counts,counts_per_s\n";
  const bool normalized = hist.normalization == analysis::Normalization::kCountsPerSecond;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    out << format_number(hist.bin_center_ps(i)) << ',' << hist.counts[i] << ',';
    if (normalized) {
      out << format_number(hist.value(i));
    }
    out << '\n';
  }
}

void write_g2_csv(std::ostream& out, const analysis::G2Histogram& g2) {
  out << "separation,counts,g2,sigma\n";
  for (std::size_t i = 0; i < g2.size(); ++i) {
    out << g2.separation(i) << ',' << g2.counts[i] << ',' << format_number(g2.g2[i]) << ','
        << format_number(g2.sigma[i]) << '\n';
  }
}

}  // namespace qfcsim::io
