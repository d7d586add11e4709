#include <algorithm>
#include <cmath>
#include <sstream>

#include "antiloc/runner.hpp"

namespace antiloc {

namespace {

constexpr double kWidth = 800, kPanelHeight = 260, kLeft = 70, kRight = 20, kTop = 40, kGap = 50;

struct Axis {
  double lo, hi;
  double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

Axis padded(double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

// About five round tick values covering the axis.
std::vector<double> ticks(const Axis& a) {
  const double raw = (a.hi - a.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0})
    if (f * mag >= raw) {
      step = f * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-9 * step; v += step)
    t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

std::string label(double v) {
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << v;
  return ss.str();
}

void panel(std::ostringstream& out, std::span<const SpectrumRecord> recs,
           std::span<const double> resonances, double top, const char* name,
           double (*value)(const SpectrumRecord&), const char* colour, double reference) {
  const double bottom = top + kPanelHeight;
  const double left = kLeft, right = kWidth - kRight;
  const Axis x = padded(recs.front().delta, recs.back().delta);
  double lo = reference, hi = reference;
  for (const auto& r : recs) {
    const double v = value(r);
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const Axis y = padded(lo, hi);
  auto px = [&](double v) { return format_double(x.map(v, left, right)); };
  auto py = [&](double v) { return format_double(y.map(v, bottom, top)); };

  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left
      << "\" height=\"" << kPanelHeight << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double t : ticks(x))
    out << "<text x=\"" << px(t) << "\" y=\"" << bottom + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << label(t) << "</text>\n";
  for (double t : ticks(y)) {
    out << "<line x1=\"" << left << "\" x2=\"" << right << "\" y1=\"" << py(t) << "\" y2=\""
        << py(t) << "\" stroke=\"#eee\"/>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << py(t)
        << "\" text-anchor=\"end\" dominant-baseline=\"middle\" font-size=\"11\">" << label(t)
        << "</text>\n";
  }
  out << "<line x1=\"" << left << "\" x2=\"" << right << "\" y1=\"" << py(reference)
      << "\" y2=\"" << py(reference) << "\" stroke=\"#999\"/>\n";
  for (double r : resonances)
    if (r >= x.lo && r <= x.hi)
      out << "<line x1=\"" << px(r) << "\" x2=\"" << px(r) << "\" y1=\"" << top << "\" y2=\""
          << bottom << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
  for (const auto& r : recs)
    if (std::isfinite(value(r))) out << px(r.delta) << ',' << py(value(r)) << ' ';
  out << "\"/>\n";
  out << "<text x=\"" << left + 8 << "\" y=\"" << top + 16 << "\" font-size=\"13\">" << name
      << "</text>\n";
}

}  // namespace

std::string spectrum_svg(std::span<const SpectrumRecord> records,
                         std::span<const double> resonances, std::uint64_t config_hash,
                         std::uint64_t seed) {
  const double height = kTop + 2 * kPanelHeight + kGap + 40;
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "<!-- config_hash=" << hash_hex(config_hash) << " seed=" << seed << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << height << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!records.empty()) {
    panel(out, records, resonances, kTop, "R2 (double scattering)",
          [](const SpectrumRecord& r) { return r.R2; }, "#c0392b", 0.0);
    panel(out, records, resonances, kTop + kPanelHeight + kGap, "X_EF",
          [](const SpectrumRecord& r) { return r.X_EF; }, "#2c3e80", 1.0);
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << height - 8
      << "\" text-anchor=\"middle\" font-size=\"12\">detuning (units of gamma)</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace antiloc
