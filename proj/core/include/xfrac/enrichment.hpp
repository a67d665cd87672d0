#pragma once

// Enriched approximation bookkeeping: which elements are cut, which nodes
// carry Heaviside / crack-tip / interface enrichment, and the enrichment
// functions with their gradients.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "xfrac/geometry.hpp"
#include "xfrac/mesh.hpp"

namespace xfrac {

struct Discontinuities {
  std::vector<CrackPath> cracks;
  std::optional<InterfaceLine> interface;
};

// The discontinuity cutting an element. `source` is a crack index, or -1 for
// the material interface.
struct ElementCut {
  int source = -1;
  ClipResult clip;
};

// One entry per element; empty for elements nothing cuts. An element cut by
// two discontinuities is rejected as unsupported.
std::vector<std::optional<ElementCut>> cut_elements(const Mesh& mesh, const Discontinuities& disc);

struct TipEnrichment {
  int crack = 0;
  int end = 1;
  int element = -1;
  TipFrame frame;
};

struct NodeSets {
  std::vector<int> heaviside;  // N^c, sorted
  std::vector<int> tip;        // N^f, sorted
};

// Element holding the active tip `end` of `crack`: the lowest-numbered
// element that the crack continued beyond its tip enters. -1 if none.
int find_tip_element(const Mesh& mesh, const CrackPath& crack, int end);

// N^f: nodes of the tip elements. N^c: nodes (outside N^f) whose support is
// crossed by the crack with both sides holding more than 1e-4 of the support.
NodeSets classify_nodes(const Mesh& mesh, const CrackPath& crack, int crack_index,
                        std::span<const std::optional<ElementCut>> cuts);

enum class EnrichmentKind { heaviside, branch, abs };

struct Enrichment {
  EnrichmentKind kind = EnrichmentKind::heaviside;
  int crack = -1;  // heaviside / branch
  int tip = -1;    // branch: index into the tip list
  int func = 0;    // branch function 0..3

  bool operator==(const Enrichment&) const = default;
};

struct EnrichedDof {
  Enrichment e;
  int index;  // x component; y component is index + 1
};

class DofMap {
 public:
  DofMap() = default;
  explicit DofMap(std::size_t node_count);

  // Enrichments must be added in node order per node; indices are handed out
  // contiguously after the 2 * node_count standard DOFs.
  void add(int node, const Enrichment& e);

  int standard(int node, int comp) const { return 2 * node + comp; }
  std::span<const EnrichedDof> enriched(int node) const { return nodes_[node]; }
  bool is_enriched(int node) const { return !nodes_[node].empty(); }
  int total() const { return total_; }
  std::size_t node_count() const { return nodes_.size(); }
  // Enriched DOF pair for (node, e), or -1.
  int find(int node, const Enrichment& e) const;

 private:
  std::vector<std::vector<EnrichedDof>> nodes_;
  int total_ = 0;
};

// Everything the enriched discretization knows about the discontinuities.
struct Enrichments {
  std::vector<std::optional<ElementCut>> cuts;
  std::vector<NodeSets> crack_sets;  // per crack
  std::vector<TipEnrichment> tips;
  std::vector<int> abs_nodes;  // nodes of elements split by the interface
  DofMap dofs;
};

Enrichments build_enrichments(const Mesh& mesh, const Discontinuities& disc);

struct EnrichmentValue {
  double value = 0.0;
  Point grad = Point::Zero();
};

// sqrt(r) {sin(t/2), cos(t/2), sin t sin(t/2), sin t cos(t/2)}; zero at r = 0.
std::array<double, 4> branch_functions(double r, double theta);
// Global-frame gradients of the branch functions at local polar (r, theta).
// Throws near_tip for r <= eps.
std::array<Point, 4> branch_derivatives(double r, double theta, const TipFrame& frame, double eps = 1e-12);

// |phi| with gradient sign(phi) * grad_phi (positive side at phi = 0).
EnrichmentValue abs_enrichment(double phi, const Point& grad_phi);

// +1 / -1 side of the crack (on_discontinuity on the crack itself).
double heaviside(const Point& x, const CrackPath& crack);

EnrichmentValue evaluate_enrichment(const Enrichment& e, const Point& x, const Discontinuities& disc,
                                    std::span<const TipEnrichment> tips);

}  // namespace xfrac
