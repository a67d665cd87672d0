#include "xfrac/enrichment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "xfrac/error.hpp"

namespace xfrac {

namespace {

struct Box {
  double x0, x1, y0, y1;
  bool overlaps(const Box& o, double pad) const {
    return x0 <= o.x1 + pad && o.x0 <= x1 + pad && y0 <= o.y1 + pad && o.y0 <= y1 + pad;
  }
};

Box box_of(std::span<const Point> pts) {
  Box b{pts[0].x(), pts[0].x(), pts[0].y(), pts[0].y()};
  for (const auto& p : pts) {
    b.x0 = std::min(b.x0, p.x());
    b.x1 = std::max(b.x1, p.x());
    b.y0 = std::min(b.y0, p.y());
    b.y1 = std::max(b.y1, p.y());
  }
  return b;
}

}  // namespace

std::vector<std::optional<ElementCut>> cut_elements(const Mesh& mesh, const Discontinuities& disc) {
  std::vector<std::optional<ElementCut>> cuts(mesh.element_count());
  const double extent = 10.0 * (mesh.bounds.width() + mesh.bounds.height());
  std::vector<CrackPath> paths = disc.cracks;
  if (disc.interface) paths.push_back(disc.interface->as_path(extent));
  const int n_cracks = static_cast<int>(disc.cracks.size());

  std::vector<Box> boxes;
  for (const auto& p : paths) boxes.push_back(box_of(p.vertices()));

  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const ElementPoints pts = mesh.element_points(e);
    const Box eb = box_of(pts);
    const double pad = 1e-6 * (eb.x1 - eb.x0 + eb.y1 - eb.y0);
    for (std::size_t k = 0; k < paths.size(); ++k) {
      if (!boxes[k].overlaps(eb, pad)) continue;
      ClipResult clip = clip_element(pts, paths[k]);
      if (clip.kind == CutKind::uncut) continue;
      if (cuts[e]) {
        std::ostringstream msg;
        msg << "element " << e << " is cut by more than one discontinuity";
        throw Error(ErrorCode::unsupported_configuration, msg.str());
      }
      const int source = static_cast<int>(k) < n_cracks ? static_cast<int>(k) : -1;
      cuts[e] = ElementCut{source, std::move(clip)};
    }
  }
  return cuts;
}

int find_tip_element(const Mesh& mesh, const CrackPath& crack, int end) {
  const Point tip = crack.end_point(end);
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const ElementPoints pts = mesh.element_points(e);
    const Box b = box_of(pts);
    const double pad = 1e-6 * (b.x1 - b.x0 + b.y1 - b.y0);
    if (tip.x() < b.x0 - pad || tip.x() > b.x1 + pad || tip.y() < b.y0 - pad || tip.y() > b.y1 + pad) continue;
    if (element_holds_tip(pts, crack, end)) return static_cast<int>(e);
  }
  return -1;
}

NodeSets classify_nodes(const Mesh& mesh, const CrackPath& crack, int crack_index,
                        std::span<const std::optional<ElementCut>> cuts) {
  NodeSets sets;
  std::set<int> tip_nodes;
  std::vector<char> is_tip_elem(mesh.element_count(), 0);
  for (int end = 0; end < 2; ++end) {
    if (!crack.is_tip(end)) continue;
    const int e = find_tip_element(mesh, crack, end);
    if (e < 0) continue;
    is_tip_elem[e] = 1;
    for (int n : mesh.elements[e]) tip_nodes.insert(n);
  }
  sets.tip.assign(tip_nodes.begin(), tip_nodes.end());

  // Area on either side of the crack per element (0/0 when not cut).
  std::vector<std::array<double, 2>> side_area(mesh.element_count(), {0.0, 0.0});
  std::vector<char> split(mesh.element_count(), 0);
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto& cut = cuts[e];
    if (!cut || cut->source != crack_index || cut->clip.kind != CutKind::split) continue;
    split[e] = 1;
    for (std::size_t k = 0; k < cut->clip.pieces.size(); ++k) {
      const double a = std::abs(shoelace_area(cut->clip.pieces[k].vertices()));
      side_area[e][cut->clip.sides[k] > 0 ? 0 : 1] += a;
    }
  }

  const auto node_elems = mesh.node_elements();
  for (std::size_t n = 0; n < mesh.node_count(); ++n) {
    if (tip_nodes.count(static_cast<int>(n))) continue;
    bool any_split = false;
    for (int e : node_elems[n]) any_split = any_split || split[e];
    if (!any_split) continue;
    double support = 0.0;
    std::array<double, 2> sides{0.0, 0.0};
    for (int e : node_elems[n]) {
      const double a = mesh.element_area(e);
      support += a;
      if (split[e]) {
        sides[0] += side_area[e][0];
        sides[1] += side_area[e][1];
        continue;
      }
      if (is_tip_elem[e]) continue;
      const auto pts = mesh.element_points(e);
      const Point c = 0.25 * (pts[0] + pts[1] + pts[2] + pts[3]);
      try {
        sides[side_of_path(c, crack) > 0 ? 0 : 1] += a;
      } catch (const Error&) {
        // centroid on the extended path: the element is not cut by the crack itself
      }
    }
    if (sides[0] > 1e-4 * support && sides[1] > 1e-4 * support) sets.heaviside.push_back(static_cast<int>(n));
  }
  return sets;
}

DofMap::DofMap(std::size_t node_count) : nodes_(node_count), total_(2 * static_cast<int>(node_count)) {}

void DofMap::add(int node, const Enrichment& e) {
  nodes_[node].push_back({e, total_});
  total_ += 2;
}

int DofMap::find(int node, const Enrichment& e) const {
  for (const auto& d : nodes_[node])
    if (d.e == e) return d.index;
  return -1;
}

Enrichments build_enrichments(const Mesh& mesh, const Discontinuities& disc) {
  Enrichments out;
  out.cuts = cut_elements(mesh, disc);

  for (std::size_t c = 0; c < disc.cracks.size(); ++c) {
    const auto& crack = disc.cracks[c];
    for (int end = 0; end < 2; ++end) {
      if (!crack.is_tip(end)) continue;
      const int e = find_tip_element(mesh, crack, end);
      if (e < 0) {
        std::ostringstream msg;
        msg << "crack " << c << " tip " << end << " does not lie in the mesh";
        throw Error(ErrorCode::invalid_argument, msg.str());
      }
      const auto& cut = out.cuts[e];
      if (!cut || cut->source != static_cast<int>(c) || cut->clip.kind != CutKind::tip)
        throw Error(ErrorCode::degenerate_geometry, "tip element is not resolved as a tip cut");
      out.tips.push_back({static_cast<int>(c), end, e, crack.tip_frame(end)});
    }
    out.crack_sets.push_back(classify_nodes(mesh, crack, static_cast<int>(c), out.cuts));
  }

  std::set<int> abs_nodes;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto& cut = out.cuts[e];
    if (cut && cut->source < 0 && cut->clip.kind == CutKind::split)
      for (int n : mesh.elements[e]) abs_nodes.insert(n);
  }
  out.abs_nodes.assign(abs_nodes.begin(), abs_nodes.end());

  out.dofs = DofMap(mesh.node_count());
  for (std::size_t n = 0; n < mesh.node_count(); ++n) {
    const int node = static_cast<int>(n);
    for (std::size_t c = 0; c < out.crack_sets.size(); ++c) {
      const auto& h = out.crack_sets[c].heaviside;
      if (std::binary_search(h.begin(), h.end(), node))
        out.dofs.add(node, {EnrichmentKind::heaviside, static_cast<int>(c), -1, 0});
    }
    for (std::size_t t = 0; t < out.tips.size(); ++t) {
      const auto& en = mesh.elements[out.tips[t].element];
      if (std::find(en.begin(), en.end(), node) == en.end()) continue;
      for (int f = 0; f < 4; ++f)
        out.dofs.add(node, {EnrichmentKind::branch, out.tips[t].crack, static_cast<int>(t), f});
    }
    if (abs_nodes.count(node)) out.dofs.add(node, {EnrichmentKind::abs, -1, -1, 0});
  }
  return out;
}

std::array<double, 4> branch_functions(double r, double theta) {
  if (r <= 0.0) return {0.0, 0.0, 0.0, 0.0};
  const double sr = std::sqrt(r);
  const double s2 = std::sin(0.5 * theta), c2 = std::cos(0.5 * theta), s = std::sin(theta);
  return {sr * s2, sr * c2, sr * s * s2, sr * s * c2};
}

std::array<Point, 4> branch_derivatives(double r, double theta, const TipFrame& frame, double eps) {
  if (r <= eps) throw Error(ErrorCode::near_tip, "branch derivatives requested at the crack tip");
  const double sr = std::sqrt(r);
  const double s2 = std::sin(0.5 * theta), c2 = std::cos(0.5 * theta);
  const double s = std::sin(theta), c = std::cos(theta);
  // d/dr and (1/r) d/dtheta
  const double dr[4] = {s2 / (2.0 * sr), c2 / (2.0 * sr), s * s2 / (2.0 * sr), s * c2 / (2.0 * sr)};
  const double dt[4] = {c2 / (2.0 * sr), -s2 / (2.0 * sr), (c * s2 + 0.5 * s * c2) / sr,
                        (c * c2 - 0.5 * s * s2) / sr};
  const double ca = std::cos(frame.angle), sa = std::sin(frame.angle);
  std::array<Point, 4> out;
  for (int k = 0; k < 4; ++k) {
    const double gx = c * dr[k] - s * dt[k];
    const double gy = s * dr[k] + c * dt[k];
    out[k] = Point(ca * gx - sa * gy, sa * gx + ca * gy);
  }
  return out;
}

EnrichmentValue abs_enrichment(double phi, const Point& grad_phi) {
  return {std::abs(phi), phi < 0.0 ? Point(-grad_phi) : grad_phi};
}

// Only points exactly on the path are ambiguous; quadrature points in thin
// slivers next to the crack still have a well-defined side.
double heaviside(const Point& x, const CrackPath& crack) {
  return side_of_path(x, crack, std::numeric_limits<double>::min());
}

EnrichmentValue evaluate_enrichment(const Enrichment& e, const Point& x, const Discontinuities& disc,
                                    std::span<const TipEnrichment> tips) {
  switch (e.kind) {
    case EnrichmentKind::heaviside:
      return {heaviside(x, disc.cracks[e.crack]), Point::Zero()};
    case EnrichmentKind::branch: {
      const TipFrame& frame = tips[e.tip].frame;
      const auto [r, theta] = frame.polar(x);
      const auto f = branch_functions(r, theta);
      const auto g = branch_derivatives(r, theta, frame);
      return {f[e.func], g[e.func]};
    }
    case EnrichmentKind::abs: {
      const auto& iface = *disc.interface;
      return abs_enrichment(signed_distance(x, iface), iface.unit_normal());
    }
  }
  return {};
}

}  // namespace xfrac
