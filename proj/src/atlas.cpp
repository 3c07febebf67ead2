#include "affinekit/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace affinekit {

AtlasGraph AtlasGraph::quotient(const GroupPresentation& P, const std::string& chart) {
  AtlasGraph g(P.dim);
  g.add_chart(chart);
  for (std::size_t i = 0; i < P.generators.size(); ++i)
    g.add_edge(P.names[i], chart, chart, P.generators[i]);
  return g;
}

std::size_t AtlasGraph::add_chart(const std::string& name) {
  require(!name.empty(), ErrorKind::InvalidInput, "chart without a name");
  require(!chart_index(name), ErrorKind::InvalidInput, "duplicate chart '" + name + "'");
  charts_.push_back(name);
  return charts_.size() - 1;
}

void AtlasGraph::add_edge(const std::string& name, const std::string& from, const std::string& to,
                          AffineElement label) {
  const auto f = chart_index(from), t = chart_index(to);
  require(f && t, ErrorKind::InvalidInput, "edge '" + name + "' refers to an unknown chart");
  require(label.dim() == dim_, ErrorKind::DimMismatch, "edge '" + name + "' has the wrong dimension");
  require(name.find('^') == std::string::npos && name.find('*') == std::string::npos,
          ErrorKind::InvalidInput, "edge names may not contain '^' or '*'");
  require(!edge_index(name) && !edge_index(name + "^-1"), ErrorKind::InvalidInput,
          "duplicate edge '" + name + "'");
  AffineElement inv = invert(label);
  edges_.push_back({name, *f, *t, std::move(label)});
  edges_.push_back({name + "^-1", *t, *f, std::move(inv)});
}

void AtlasGraph::add_two_cell(const std::string& word) {
  const auto w = parse_word(word);
  require(!w.empty(), ErrorKind::InvalidInput, "empty two-cell");
  EdgePath p{charts_[edges_[w.back()].from], w, std::nullopt};
  const Development d = develop_path(*this, p);
  require(d.end_chart == edges_[w.back()].from, ErrorKind::InvalidInput,
          "two-cell '" + word + "' is not closed");
  require(d.composite.is_identity(), ErrorKind::InvalidInput,
          "two-cell '" + word + "' does not compose to the identity");
  two_cells_.push_back(word);
}

std::optional<std::size_t> AtlasGraph::chart_index(const std::string& name) const {
  for (std::size_t i = 0; i < charts_.size(); ++i)
    if (charts_[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> AtlasGraph::edge_index(const std::string& name) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].name == name) return i;
  return std::nullopt;
}

std::vector<std::size_t> AtlasGraph::parse_word(const std::string& word) const {
  std::string norm = word;
  std::replace(norm.begin(), norm.end(), '*', ' ');
  std::istringstream in(norm);
  std::vector<std::size_t> out;
  std::string tok;
  while (in >> tok) {
    if (tok == "id") continue;
    std::string name = tok;
    long k = 1;
    if (auto c = tok.find('^'); c != std::string::npos) {
      name = tok.substr(0, c);
      try {
        k = std::stol(tok.substr(c + 1));
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidPath, "bad exponent in '" + tok + "'");
      }
    }
    const auto e = edge_index(k < 0 ? name + "^-1" : name);
    require(e.has_value(), ErrorKind::InvalidPath, "unknown edge '" + name + "'");
    for (long i = 0; i < std::labs(k); ++i) out.push_back(*e);
  }
  return out;
}

std::string AtlasGraph::word_text(const std::vector<std::size_t>& edges) const {
  if (edges.empty()) return "id";
  std::string s;
  for (std::size_t i = 0; i < edges.size(); ++i) s += (i ? "*" : "") + edges_[edges[i]].name;
  return s;
}

EdgePath make_path(const AtlasGraph& atlas, const std::string& start, const std::string& word,
                   std::optional<ExactVector> x0) {
  require(atlas.chart_index(start).has_value(), ErrorKind::InvalidPath,
          "unknown chart '" + start + "'");
  return EdgePath{start, atlas.parse_word(word), std::move(x0)};
}

Development develop_path(const AtlasGraph& atlas, const EdgePath& path) {
  const auto s = atlas.chart_index(path.start);
  require(s.has_value(), ErrorKind::InvalidPath, "unknown chart '" + path.start + "'");
  BasisPtr basis = path.x0 ? path.x0->basis() : PeriodBasis::rational_only();
  for (auto e : path.edges) {
    require(e < atlas.edges().size(), ErrorKind::InvalidPath, "edge index out of range");
    basis = merge_bases(basis, atlas.edges()[e].label.u.basis());
  }
  Development d{AffineElement::identity(atlas.dim(), basis), *s, std::nullopt};
  // traverse right to left; the composite is the product in written order
  for (std::size_t i = path.edges.size(); i-- > 0;) {
    const AtlasEdge& e = atlas.edges()[path.edges[i]];
    require(e.from == d.end_chart, ErrorKind::InvalidPath,
            "edge '" + e.name + "' does not start at chart '" + atlas.charts()[d.end_chart] + "'");
    d.composite = compose(e.label, d.composite);
    d.end_chart = e.to;
  }
  if (path.x0) {
    require(path.x0->dim() == atlas.dim(), ErrorKind::DimMismatch, "start point dimension");
    d.endpoint = act(d.composite, *path.x0);
  }
  return d;
}

HolonomyResult holonomy(const AtlasGraph& atlas, const EdgePath& loop) {
  const Development d = develop_path(atlas, loop);
  require(d.end_chart == *atlas.chart_index(loop.start), ErrorKind::NotALoop,
          "path ends at chart '" + atlas.charts()[d.end_chart] + "'");
  return HolonomyResult{d.composite, d.composite.A, d.composite.u};
}

bool cocycle_check(const AtlasGraph& atlas, const EdgePath& gamma, const EdgePath& tau) {
  require(gamma.start == tau.start, ErrorKind::BaseMismatch,
          "loops based at '" + gamma.start + "' and '" + tau.start + "'");
  const HolonomyResult hg = holonomy(atlas, gamma), ht = holonomy(atlas, tau);
  EdgePath both{tau.start, tau.edges, std::nullopt};
  both.edges.insert(both.edges.end(), gamma.edges.begin(), gamma.edges.end());
  const HolonomyResult h = holonomy(atlas, both);
  return h.dev == ht.dev + apply(ht.linear, hg.dev);
}

// ---------------------------------------------------------------------------

PathSegment sample_segment(const std::vector<Expression>& x, double t0, double t1, std::size_t n,
                           std::string crossing) {
  require(n >= 1, ErrorKind::InvalidInput, "segment needs at least one step");
  PathSegment seg{std::move(crossing), {}};
  seg.samples.reserve(n + 1);
  std::vector<double> grad;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n);
    PathSample s{t, {}, {}};
    for (const auto& xi : x) {
      s.point.push_back(xi.eval_gradient({t}, grad));
      s.velocity.push_back(grad[0]);
    }
    seg.samples.push_back(std::move(s));
  }
  return seg;
}

namespace {

std::vector<double> act_numeric(const AffineElement& g, const std::vector<double>& x) {
  const std::vector<double> u = g.u.to_doubles();
  std::vector<double> y(u);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += g.A(i, j).get_d() * x[j];
  return y;
}

}  // namespace

NumericDev numeric_dev(const GroupPresentation& model, const std::vector<PathSegment>& path,
                       double crossing_tol) {
  const std::size_t q = model.dim;
  NumericDev out{std::vector<double>(q, 0.0), AffineElement::identity(q)};
  const std::vector<double>* prev_last = nullptr;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const PathSegment& seg = path[k];
    require(!seg.samples.empty(), ErrorKind::InvalidInput, "empty path segment");
    for (const auto& s : seg.samples)
      require(s.point.size() == q && s.velocity.size() == q, ErrorKind::DimMismatch,
              "path sample dimension");
    if (k > 0) {
      const AffineElement g = model.evaluate(model.parse_word(seg.crossing));
      const std::vector<double> image = act_numeric(g, seg.samples.front().point);
      double err = 0;
      for (std::size_t i = 0; i < q; ++i) err = std::max(err, std::fabs(image[i] - (*prev_last)[i]));
      require(err <= crossing_tol, ErrorKind::InconsistentCrossing,
              "segment " + std::to_string(k) + " does not continue the previous one (mismatch " +
                  std::to_string(err) + ")");
      out.chart_element = compose(out.chart_element, g);
    }
    const IntMatrix& H = out.chart_element.A;
    for (std::size_t i = 0; i + 1 < seg.samples.size(); ++i) {
      const PathSample& a = seg.samples[i];
      const PathSample& b = seg.samples[i + 1];
      const double half = 0.5 * (b.t - a.t);
      for (std::size_t r = 0; r < q; ++r)
        for (std::size_t c = 0; c < q; ++c)
          if (H(r, c) != 0) out.dev[r] += half * H(r, c).get_d() * (a.velocity[c] + b.velocity[c]);
    }
    prev_last = &seg.samples.back().point;
  }
  return out;
}

std::vector<PathSegment> reverse_path(const GroupPresentation& model,
                                      const std::vector<PathSegment>& path) {
  std::vector<PathSegment> out;
  if (path.empty()) return out;
  const double T = path.back().samples.back().t;
  for (std::size_t k = path.size(); k-- > 0;) {
    PathSegment seg;
    if (k + 1 < path.size()) {
      Word w = model.parse_word(path[k + 1].crossing);
      std::reverse(w.begin(), w.end());
      for (auto& l : w) l.inverse = !l.inverse;
      seg.crossing = model.word_text(w);
    }
    for (std::size_t i = path[k].samples.size(); i-- > 0;) {
      PathSample s = path[k].samples[i];
      s.t = T - s.t;
      for (auto& v : s.velocity) v = -v;
      seg.samples.push_back(std::move(s));
    }
    out.push_back(std::move(seg));
  }
  return out;
}

}  // namespace affinekit
