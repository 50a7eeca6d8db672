#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace tmsim::plot {

struct Series {
  std::string label;
  std::string color;
  bool dashed = false;
  std::vector<double> t, v;
};

/// Target value held on [t_from, t_to].
struct Step {
  double t_from, t_to, value;
};

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

inline std::string px(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

/// Line plot of trajectories over a gray target staircase. With log_scale the y axis is log2(1 + v).
inline void write_svg(std::ostream& os, const std::string& title, const std::vector<Series>& series,
                      const std::vector<Step>& steps, bool log_scale) {
  const double W = 800, H = 480, L = 70, R = 20, T = 40, B = 50;
  auto tr = [&](double v) { return log_scale ? std::log2(1 + std::max(v, 0.0)) : v; };
  double t0 = 0, t1 = 1, lo = 0, hi = 1;
  bool first = true;
  auto widen = [&](double t, double v) {
    double y = tr(v);
    if (first) {
      t0 = t1 = t;
      lo = hi = y;
      first = false;
    }
    t0 = std::min(t0, t);
    t1 = std::max(t1, t);
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  };
  for (auto& s : series)
    for (std::size_t i = 0; i < s.t.size(); ++i) widen(s.t[i], s.v[i]);
  for (auto& st : steps) {
    widen(st.t_from, st.value);
    widen(st.t_to, st.value);
  }
  if (hi - lo < 1e-12) hi = lo + 1;
  double pad = (hi - lo) * 0.05;
  lo -= pad;
  hi += pad;
  auto X = [&](double t) { return L + (t - t0) / (t1 - t0) * (W - L - R); };
  auto Y = [&](double v) { return H - B - (tr(v) - lo) / (hi - lo) * (H - T - B); };
  auto Yt = [&](double y) { return H - B - (y - lo) / (hi - lo) * (H - T - B); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << " " << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << title
     << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double t = t0 + (t1 - t0) * i / 5;
    os << "<text x=\"" << px(X(t)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"11\">" << fmt(t) << "</text>\n";
    double y = lo + (hi - lo) * i / 5;
    double v = log_scale ? std::exp2(y) - 1 : y;
    os << "<text x=\"" << L - 6 << "\" y=\"" << px(Yt(y) + 4) << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
       << "font-size=\"11\">" << fmt(v) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"12\">t</text>\n";
  for (auto& st : steps)
    os << "<line x1=\"" << px(X(st.t_from)) << "\" y1=\"" << px(Y(st.value)) << "\" x2=\"" << px(X(st.t_to))
       << "\" y2=\"" << px(Y(st.value)) << "\" stroke=\"#bbbbbb\" stroke-width=\"6\"/>\n";
  int row = 0;
  for (auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"5,3\"" : "")
       << " points=\"";
    for (std::size_t i = 0; i < s.t.size(); ++i) os << (i ? " " : "") << px(X(s.t[i])) << "," << px(Y(s.v[i]));
    os << "\"/>\n";
    os << "<text x=\"" << L + 10 << "\" y=\"" << T + 14 + 16 * row << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
       << s.color << "\">" << s.label << "</text>\n";
    ++row;
  }
  os << "<text x=\"" << L + 10 << "\" y=\"" << T + 14 + 16 * row
     << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#888888\">target</text>\n";
  os << "</svg>\n";
}

}  // namespace tmsim::plot
