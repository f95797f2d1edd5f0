#include "caravan/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <vector>

namespace caravan::svg {

namespace {

// Frozen layout constants: 40 px per unit, baseline at y = 200.
constexpr double kScale = 40.0;
constexpr double kBaseline = 200.0;
constexpr double kTopOffset = 40.0;  // cut top above the baseline at height 0

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return std::string(buf);
}

double x_of(const scalars::RealValue& re) { return re.embedded().to_double() * kScale; }
double y_of(const scalars::RealValue& im) {
  return kBaseline - kTopOffset - im.embedded().to_double() * kScale;
}

struct Canvas {
  std::ostringstream body;
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  bool started = false;

  void grow(double x, double y) {
    if (!started) {
      min_x = max_x = x;
      min_y = max_y = y;
      started = true;
      return;
    }
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }

  void line(double x1, double y1, double x2, double y2, bool dashed) {
    grow(x1, y1);
    grow(x2, y2);
    body << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
         << "\" y2=\"" << fmt(y2) << "\" stroke=\"black\" stroke-width=\"2\"";
    if (dashed) body << " stroke-dasharray=\"6 4\"";
    body << "/>\n";
  }

  void dot(double x, double y) {
    grow(x, y);
    body << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"3.5\" fill=\"black\"/>\n";
  }

  void arc(double x1, double x2, double y) {
    double r = (x2 - x1) / 2.0;
    grow(x1, y);
    grow(x2, y);
    grow((x1 + x2) / 2.0, y - r);
    body << "<path d=\"M " << fmt(x1) << " " << fmt(y) << " A " << fmt(r) << " " << fmt(r)
         << " 0 0 1 " << fmt(x2) << " " << fmt(y)
         << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }

  std::string finish() const {
    const double pad = 30.0;
    double x0 = min_x - pad, y0 = min_y - pad;
    double w = (max_x - min_x) + 2 * pad, h = (max_y - min_y) + 2 * pad;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(x0) << " " << fmt(y0)
        << " " << fmt(w) << " " << fmt(h) << "\">\n"
        << body.str() << "</svg>\n";
    return out.str();
  }
};

void render_cut_pairs(Canvas& canvas, const std::vector<cut::CutPair>& pairs) {
  for (const auto& pr : pairs) {
    for (const cut::CutPoint* pt : {&pr.p, &pr.q}) {
      double x = x_of(pt->re);
      double y = y_of(pt->im);
      canvas.line(x, y, x, kBaseline, /*dashed=*/false);
      canvas.dot(x, y);
    }
  }
  canvas.line(canvas.min_x - 20.0, kBaseline, canvas.max_x + 20.0, kBaseline, /*dashed=*/true);
  for (const auto& pr : pairs) {
    double x1 = x_of(pr.p.re);
    double x2 = x_of(pr.q.re);
    if (x1 > x2) std::swap(x1, x2);
    canvas.arc(x1, x2, kBaseline);
  }
}

}  // namespace

std::string render(const cut::CutDiagram& d) {
  Canvas canvas;
  render_cut_pairs(canvas, d.pairs());
  return canvas.finish();
}

std::string render(const strata::G1Configuration& c) {
  if (c.is_smooth()) {
    Canvas canvas;
    render_cut_pairs(canvas, {c.pair1(), c.pair2()});
    return canvas.finish();
  }
  Canvas canvas;
  // The glued points +-z; their separatrices are not cuts and render dashed.
  double xs[2] = {x_of(c.node_re()), -x_of(c.node_re())};
  double ys[2] = {y_of(c.node_im()), 2.0 * (kBaseline - kTopOffset) - y_of(c.node_im())};
  for (int k = 0; k < 2; ++k) {
    canvas.line(xs[k], ys[k], xs[k], kBaseline + 40.0, /*dashed=*/true);
    canvas.dot(xs[k], ys[k]);
  }
  return canvas.finish();
}

}  // namespace caravan::svg
