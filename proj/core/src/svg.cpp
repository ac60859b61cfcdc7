#include "netspect/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "netspect/serialize.hpp"

namespace netspect {

namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelHeight = 280.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kGap = 60.0;

struct Scale {
  double lo, hi, pix_lo, pix_hi;
  double operator()(double v) const {
    if (hi == lo) return (pix_lo + pix_hi) / 2.0;
    return pix_lo + (v - lo) / (hi - lo) * (pix_hi - pix_lo);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << static_cast<long long>(std::llround(v * 100.0)) / 100.0;
  return os.str();
}

void axis(std::ostringstream& out, const Scale& x, const Scale& y, const std::string& x_label,
          const std::string& y_label) {
  out << "<line x1='" << x.pix_lo << "' y1='" << y.pix_hi << "' x2='" << x.pix_hi << "' y2='"
      << y.pix_hi << "' stroke='black'/>\n";
  out << "<line x1='" << x.pix_lo << "' y1='" << y.pix_lo << "' x2='" << x.pix_lo << "' y2='"
      << y.pix_hi << "' stroke='black'/>\n";
  out << "<text x='" << (x.pix_lo + x.pix_hi) / 2 << "' y='" << y.pix_hi + 35
      << "' text-anchor='middle' font-size='13'>" << x_label << "</text>\n";
  out << "<text x='" << x.pix_lo - 50 << "' y='" << (y.pix_lo + y.pix_hi) / 2
      << "' text-anchor='middle' font-size='13' transform='rotate(-90 " << x.pix_lo - 50 << ' '
      << (y.pix_lo + y.pix_hi) / 2 << ")'>" << y_label << "</text>\n";
  // x ticks at round deltas
  const int span = static_cast<int>(x.hi - x.lo);
  const int tick = std::max(1, span / 10);
  for (int v = static_cast<int>(x.lo); v <= static_cast<int>(x.hi); v += tick) {
    out << "<line x1='" << x(v) << "' y1='" << y.pix_hi << "' x2='" << x(v) << "' y2='"
        << y.pix_hi + 5 << "' stroke='black'/>\n";
    out << "<text x='" << x(v) << "' y='" << y.pix_hi + 18 << "' text-anchor='middle' font-size='11'>"
        << v << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = y.lo + (y.hi - y.lo) * i / 4.0;
    out << "<line x1='" << x.pix_lo - 5 << "' y1='" << y(v) << "' x2='" << x.pix_lo << "' y2='" << y(v)
        << "' stroke='black'/>\n";
    out << "<text x='" << x.pix_lo - 8 << "' y='" << y(v) + 4
        << "' text-anchor='end' font-size='11'>" << fmt(v) << "</text>\n";
  }
}

}  // namespace

std::string spectrogram_svg(const Spectrum& spectrum) {
  const double total_height = kMarginTop + 2 * kPanelHeight + kGap + 50.0;
  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << total_height
      << "' viewBox='0 0 " << kWidth << ' ' << total_height << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";

  if (!spectrum.points.empty()) {
    const double delta_lo = spectrum.points.front().delta;
    const double delta_hi = spectrum.points.back().delta;
    double bits_hi = 0.0;
    for (const auto& p : spectrum.points) bits_hi = std::max(bits_hi, p.norm_bits);

    Scale x{delta_lo, delta_hi, kMarginLeft, kWidth - kMarginRight};
    Scale y_top{0.0, bits_hi > 0 ? bits_hi : 1.0, kMarginTop + kPanelHeight, kMarginTop};

    out << "<text x='" << kWidth / 2 << "' y='18' text-anchor='middle' font-size='15'>"
        << "Description length over window size</text>\n";
    out << "<polyline fill='none' stroke='#1f77b4' stroke-width='1.5' points='";
    for (const auto& p : spectrum.points) out << x(p.delta) << ',' << y_top(p.norm_bits) << ' ';
    out << "'/>\n";
    out << "<circle cx='" << x(spectrum.mdl_delta) << "' cy='"
        << y_top(spectrum.points[static_cast<std::size_t>(spectrum.mdl_delta -
                                                          spectrum.points.front().delta)]
                     .norm_bits)
        << "' r='4' fill='#d62728'/>\n";
    axis(out, x, y_top, "window size", "DL - min (bits)");

    // Bottom panel: prominence stems.
    double prom_hi = 0.0;
    for (const auto& line : spectrum.minima) prom_hi = std::max(prom_hi, line.prominence);
    Scale y_bot{0.0, prom_hi > 0 ? prom_hi : 1.0, kMarginTop + 2 * kPanelHeight + kGap,
                kMarginTop + kPanelHeight + kGap};
    out << "<text x='" << kWidth / 2 << "' y='" << kMarginTop + kPanelHeight + kGap - 12
        << "' text-anchor='middle' font-size='15'>Timescale spectrogram</text>\n";
    for (const auto& line : spectrum.minima) {
      out << "<line x1='" << x(line.delta) << "' y1='" << y_bot(0.0) << "' x2='" << x(line.delta)
          << "' y2='" << y_bot(line.prominence) << "' stroke='#ff7f0e' stroke-width='3'/>\n";
      out << "<text x='" << x(line.delta) << "' y='" << y_bot(line.prominence) - 5
          << "' text-anchor='middle' font-size='11'>" << line.delta << "</text>\n";
    }
    axis(out, x, y_bot, "window size", "prominence (bits)");
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace netspect
