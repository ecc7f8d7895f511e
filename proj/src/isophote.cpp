#include "specnorm/isophote.hpp"

#include "specnorm/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>

namespace specnorm {

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& w : k) w /= sum;
  return k;
}

namespace {

int reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

}  // namespace

ScalarImage gaussian_smooth(const ScalarImage& img, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "blur sigma must be non-negative");
  if (sigma == 0.0 || img.width() == 0 || img.height() == 0) return img;
  const std::vector<double> k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  const int w = img.width();
  const int h = img.height();

  ScalarImage tmp(w, h, img.max_value());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int d = -r; d <= r; ++d) acc += k[d + r] * img.at(reflect(x + d, w), y);
      tmp.at(x, y) = acc;
    }
  }
  ScalarImage out(w, h, img.max_value());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int d = -r; d <= r; ++d) acc += k[d + r] * tmp.at(x, reflect(y + d, h));
      out.at(x, y) = acc;
    }
  }
  return out;
}

NormalizedImage normalize_bp(const ScalarImage& img, const RegionOfInterest& roi) {
  validate_roi(roi, img);
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  int bx = roi.x0, by = roi.y0;
  std::size_t at_max = 0;
  for (int y = roi.y0; y < roi.y1(); ++y) {
    for (int x = roi.x0; x < roi.x1(); ++x) {
      const double v = img.at(x, y);
      if (v > hi) {
        hi = v;
        bx = x;
        by = y;
      }
      lo = std::min(lo, v);
      if (v >= img.max_value()) ++at_max;
    }
  }
  if (!(hi > lo) || !(hi > 0.0)) {
    throw Error(ErrorCode::NoSpecularity, "region of interest is flat");
  }
  NormalizedImage out;
  out.image = img;
  for (double& v : out.image.data()) v /= hi;
  out.image.set_max_value(img.max_value() / hi);
  out.bp = Point2(bx, by);
  out.bp_on_boundary = roi.on_border(bx, by);
  out.saturated = static_cast<double>(at_max) >= 0.005 * roi.width * roi.height;
  return out;
}

double IsophotePolyline::area() const {
  const std::size_t n = points.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = points[i];
    const Point2& b = points[(i + 1) % n];
    acc += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * std::abs(acc);
}

bool IsophotePolyline::contains(const Point2& p) const {
  bool inside = false;
  const std::size_t n = points.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = points[i];
    const Point2& b = points[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

namespace {

// Edge keys: 2 * vertex + 0 for the edge to the right neighbour, + 1 for the
// edge to the neighbour below.
using EdgeKey = std::int64_t;

struct Tracer {
  const ScalarImage& img;
  double t;

  EdgeKey horizontal(int x, int y) const { return 2 * (static_cast<EdgeKey>(y) * img.width() + x); }
  EdgeKey vertical(int x, int y) const { return horizontal(x, y) + 1; }

  Point2 crossing(EdgeKey key) const {
    const EdgeKey vertex = key / 2;
    const int x = static_cast<int>(vertex % img.width());
    const int y = static_cast<int>(vertex / img.width());
    const int x1 = (key % 2 == 0) ? x + 1 : x;
    const int y1 = (key % 2 == 0) ? y : y + 1;
    const double va = img.at(x, y);
    const double vb = img.at(x1, y1);
    const double frac = (t - va) / (vb - va);
    return Point2(x + frac * (x1 - x), y + frac * (y1 - y));
  }
};

void append_unique(std::vector<Point2>& pts, const Point2& p) {
  if (pts.empty() || (pts.back() - p).squaredNorm() > 0.0) pts.push_back(p);
}

}  // namespace

ExtractionResult extract_isophote(const ScalarImage& img, const RegionOfInterest& roi, double t) {
  validate_roi(roi, img);
  const Tracer tracer{img, t};
  std::map<EdgeKey, std::array<EdgeKey, 2>> links;
  std::map<EdgeKey, int> degree;
  auto link = [&](EdgeKey a, EdgeKey b) {
    links[a][degree[a]++] = b;
    links[b][degree[b]++] = a;
  };

  for (int y = roi.y0; y + 1 < roi.y1(); ++y) {
    for (int x = roi.x0; x + 1 < roi.x1(); ++x) {
      const double tl = img.at(x, y), tr = img.at(x + 1, y);
      const double br = img.at(x + 1, y + 1), bl = img.at(x, y + 1);
      const int config = (tl > t) | (tr > t) << 1 | (br > t) << 2 | (bl > t) << 3;
      if (config == 0 || config == 15) continue;
      const EdgeKey top = tracer.horizontal(x, y);
      const EdgeKey bottom = tracer.horizontal(x, y + 1);
      const EdgeKey left = tracer.vertical(x, y);
      const EdgeKey right = tracer.vertical(x + 1, y);
      const bool center_above = 0.25 * (tl + tr + br + bl) > t;
      switch (config) {
        case 1: case 14: link(left, top); break;
        case 2: case 13: link(top, right); break;
        case 3: case 12: link(left, right); break;
        case 4: case 11: link(right, bottom); break;
        case 6: case 9: link(top, bottom); break;
        case 7: case 8: link(left, bottom); break;
        case 5:
          if (center_above) { link(top, right); link(bottom, left); }
          else { link(left, top); link(right, bottom); }
          break;
        case 10:
          if (center_above) { link(left, top); link(right, bottom); }
          else { link(top, right); link(bottom, left); }
          break;
        default: break;
      }
    }
  }

  ExtractionResult result;
  std::map<EdgeKey, bool> visited;
  auto walk = [&](EdgeKey start) {
    IsophotePolyline line;
    EdgeKey prev = -1;
    EdgeKey cur = start;
    for (;;) {
      visited[cur] = true;
      append_unique(line.points, tracer.crossing(cur));
      EdgeKey next = -1;
      const int deg = degree[cur];
      for (int i = 0; i < deg; ++i) {
        const EdgeKey cand = links[cur][i];
        if (cand != prev && !visited[cand]) {
          next = cand;
          break;
        }
      }
      if (next < 0) {
        // Closed when the walk returns to its start through a second link.
        line.closed = deg == 2 && (links[cur][0] == start || links[cur][1] == start) && cur != start;
        break;
      }
      prev = cur;
      cur = next;
    }
    if (line.closed && line.points.size() > 1 && (line.points.front() - line.points.back()).squaredNorm() == 0.0) {
      line.points.pop_back();
    }
    return line;
  };

  std::vector<IsophotePolyline> found;
  // Open chains first, starting from their ends, then the remaining loops.
  for (const auto& [key, deg] : degree) {
    if (deg == 1 && !visited[key]) found.push_back(walk(key));
  }
  for (const auto& [key, deg] : degree) {
    if (!visited[key]) found.push_back(walk(key));
  }

  for (auto& line : found) {
    if (line.points.size() < kMinPolylinePoints) {
      ++result.discarded_short;
      continue;
    }
    result.polylines.push_back(std::move(line));
  }
  if (result.discarded_short > 0) {
    result.diagnostics.push_back("discarded " + std::to_string(result.discarded_short) +
                                 " polyline(s) shorter than " + std::to_string(kMinPolylinePoints) + " points");
  }
  std::stable_sort(result.polylines.begin(), result.polylines.end(),
                   [](const IsophotePolyline& a, const IsophotePolyline& b) { return a.area() > b.area(); });
  return result;
}

IsophoteSelection select_primary_isophote(const std::vector<IsophotePolyline>& polylines, const Point2& bp) {
  if (polylines.empty()) throw Error(ErrorCode::SelectionFailed, "no isophote polyline to select from");
  const IsophotePolyline* best_closed = nullptr;
  const IsophotePolyline* best_around_bp = nullptr;
  const IsophotePolyline* longest_open = nullptr;
  for (const auto& line : polylines) {
    if (line.closed) {
      if (!best_closed || line.area() > best_closed->area()) best_closed = &line;
      if (line.contains(bp) && (!best_around_bp || line.area() > best_around_bp->area())) best_around_bp = &line;
    } else if (!longest_open || line.points.size() > longest_open->points.size()) {
      longest_open = &line;
    }
  }
  if (best_around_bp) return {*best_around_bp, true, false};
  if (best_closed) return {*best_closed, false, false};
  return {*longest_open, longest_open->contains(bp), true};
}

}  // namespace specnorm
