#pragma once

// Combinatorial integral affine atlases: charts are nodes, transitions are edges
// labelled by the coordinate change target <- source. Developing a path composes
// the labels; a path word is written left to right and traversed right to left.

#include <optional>
#include <string>
#include <vector>

#include "affinekit/affine.hpp"
#include "affinekit/expr.hpp"

namespace affinekit {

struct AtlasEdge {
  std::string name;
  std::size_t from = 0;
  std::size_t to = 0;
  AffineElement label;
};

class AtlasGraph {
 public:
  explicit AtlasGraph(std::size_t dim) : dim_(dim) {}
  /// One chart with a self-edge per generator.
  static AtlasGraph quotient(const GroupPresentation& P, const std::string& chart = "U");

  std::size_t dim() const { return dim_; }
  std::size_t add_chart(const std::string& name);
  /// Adds the edge and its reverse "name^-1" labelled by the inverse.
  void add_edge(const std::string& name, const std::string& from, const std::string& to,
                AffineElement label);
  /// Records a closed edge word; throws InvalidInput unless it composes to the identity.
  void add_two_cell(const std::string& word);

  const std::vector<std::string>& charts() const { return charts_; }
  const std::vector<AtlasEdge>& edges() const { return edges_; }
  const std::vector<std::string>& two_cells() const { return two_cells_; }
  std::optional<std::size_t> chart_index(const std::string& name) const;
  std::optional<std::size_t> edge_index(const std::string& name) const;

  /// Tokens separated by '*' or blanks; "e^-1" is the reverse edge, "e^k" repeats.
  std::vector<std::size_t> parse_word(const std::string& word) const;
  std::string word_text(const std::vector<std::size_t>& edges) const;

 private:
  std::size_t dim_;
  std::vector<std::string> charts_;
  std::vector<AtlasEdge> edges_;
  std::vector<std::string> two_cells_;
};

struct EdgePath {
  std::string start;               // chart where the rightmost edge begins
  std::vector<std::size_t> edges;  // as written
  std::optional<ExactVector> x0;
};

EdgePath make_path(const AtlasGraph& atlas, const std::string& start, const std::string& word,
                   std::optional<ExactVector> x0 = {});

struct Development {
  AffineElement composite;
  std::size_t end_chart = 0;
  std::optional<ExactVector> endpoint;
};
Development develop_path(const AtlasGraph& atlas, const EdgePath& path);

struct HolonomyResult {
  AffineElement affine;
  IntMatrix linear;
  ExactVector dev;
};
HolonomyResult holonomy(const AtlasGraph& atlas, const EdgePath& loop);

/// dev(tau then gamma) == dev(tau) + h_lin(tau) dev(gamma), exactly.
bool cocycle_check(const AtlasGraph& atlas, const EdgePath& gamma, const EdgePath& tau);

// --- numeric developing in a quotient model R^q / Gamma ----------------------

struct PathSample {
  double t = 0;
  std::vector<double> point;     // local coordinates of the current chart
  std::vector<double> velocity;  // d point / dt
};

/// Samples in one chart. `crossing` names the element g (a word in the model's
/// generators) used on entry: the previous chart's last point equals g(first point).
struct PathSegment {
  std::string crossing;
  std::vector<PathSample> samples;
};

/// n + 1 equally spaced samples of t -> x(t) on [t0, t1] (velocities from exact derivatives).
PathSegment sample_segment(const std::vector<Expression>& x, double t0, double t1, std::size_t n,
                           std::string crossing = {});

struct NumericDev {
  std::vector<double> dev;
  AffineElement chart_element;  // accumulated crossing product; its linear part is the holonomy
};

/// Trapezoidal approximation of the integral of h_lin(t) x'(t) along the path.
NumericDev numeric_dev(const GroupPresentation& model, const std::vector<PathSegment>& path,
                       double crossing_tol = 1e-9);

/// The same path traversed backwards (segments reversed, crossings inverted).
std::vector<PathSegment> reverse_path(const GroupPresentation& model,
                                      const std::vector<PathSegment>& path);

}  // namespace affinekit
