#include "nchns/stencil.hpp"

#include <cassert>

namespace nchns::stencil {

namespace {

// Each primitive is described by a visitor over (out_index, in_index, coeff)
// triples; apply() gathers, apply_t() scatters.
template <class Prim>
Vec apply(const Grid2D& g, In in) {
  assert(in.size() == Prim::in_size(g));
  Vec out(Prim::out_size(g), 0.0);
  Prim::visit(g, [&](std::size_t o, std::size_t i, double c) { out[o] += c * in[i]; });
  return out;
}

template <class Prim>
Vec apply_t(const Grid2D& g, In in) {
  assert(in.size() == Prim::out_size(g));
  Vec out(Prim::in_size(g), 0.0);
  Prim::visit(g, [&](std::size_t o, std::size_t i, double c) { out[i] += c * in[o]; });
  return out;
}

std::size_t cells(const Grid2D& g) { return g.ncells(); }
std::size_t xfaces(const Grid2D& g) { return g.nxfaces(); }
std::size_t yfaces(const Grid2D& g) { return g.nyfaces(); }
std::size_t nodes(const Grid2D& g) { return g.nnodes(); }

struct GradX {
  static std::size_t in_size(const Grid2D& g) { return cells(g); }
  static std::size_t out_size(const Grid2D& g) { return xfaces(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    const double r = 1.0 / g.dx();
    for (int j = 0; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) {
        v(g.xface(i, j), g.cell(i, j), r);
        v(g.xface(i, j), g.cell(i - 1, j), -r);
      }
  }
};

struct GradY {
  static std::size_t in_size(const Grid2D& g) { return cells(g); }
  static std::size_t out_size(const Grid2D& g) { return yfaces(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    const double r = 1.0 / g.dy();
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        v(g.yface(i, j), g.cell(i, j), r);
        v(g.yface(i, j), g.cell(i, j - 1), -r);
      }
  }
};

struct AvgX {
  static std::size_t in_size(const Grid2D& g) { return cells(g); }
  static std::size_t out_size(const Grid2D& g) { return xfaces(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) {
        v(g.xface(i, j), g.cell(i, j), 0.5);
        v(g.xface(i, j), g.cell(i - 1, j), 0.5);
      }
  }
};

struct AvgY {
  static std::size_t in_size(const Grid2D& g) { return cells(g); }
  static std::size_t out_size(const Grid2D& g) { return yfaces(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        v(g.yface(i, j), g.cell(i, j), 0.5);
        v(g.yface(i, j), g.cell(i, j - 1), 0.5);
      }
  }
};

struct DiffX {
  static std::size_t in_size(const Grid2D& g) { return xfaces(g); }
  static std::size_t out_size(const Grid2D& g) { return cells(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    const double r = 1.0 / g.dx();
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        v(g.cell(i, j), g.xface(i + 1, j), r);
        v(g.cell(i, j), g.xface(i, j), -r);
      }
  }
};

struct DiffY {
  static std::size_t in_size(const Grid2D& g) { return yfaces(g); }
  static std::size_t out_size(const Grid2D& g) { return cells(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    const double r = 1.0 / g.dy();
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        v(g.cell(i, j), g.yface(i, j + 1), r);
        v(g.cell(i, j), g.yface(i, j), -r);
      }
  }
};

struct MeanX {
  static std::size_t in_size(const Grid2D& g) { return xfaces(g); }
  static std::size_t out_size(const Grid2D& g) { return cells(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        v(g.cell(i, j), g.xface(i + 1, j), 0.5);
        v(g.cell(i, j), g.xface(i, j), 0.5);
      }
  }
};

struct MeanY {
  static std::size_t in_size(const Grid2D& g) { return yfaces(g); }
  static std::size_t out_size(const Grid2D& g) { return cells(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        v(g.cell(i, j), g.yface(i, j + 1), 0.5);
        v(g.cell(i, j), g.yface(i, j), 0.5);
      }
  }
};

// Node (i, j) sits between x-faces (i, j-1) and (i, j). Outside the domain the
// ghost value is the negated nearest interior face.
struct XNodeDy {
  static std::size_t in_size(const Grid2D& g) { return xfaces(g); }
  static std::size_t out_size(const Grid2D& g) { return nodes(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    const double r = 1.0 / g.dy();
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        const std::size_t o = g.node(i, j);
        if (j == 0) {
          v(o, g.xface(i, 0), 2.0 * r);
        } else if (j == g.ny) {
          v(o, g.xface(i, g.ny - 1), -2.0 * r);
        } else {
          v(o, g.xface(i, j), r);
          v(o, g.xface(i, j - 1), -r);
        }
      }
  }
};

struct XNodeAvg {
  static std::size_t in_size(const Grid2D& g) { return xfaces(g); }
  static std::size_t out_size(const Grid2D& g) { return nodes(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        v(g.node(i, j), g.xface(i, j), 0.5);
        v(g.node(i, j), g.xface(i, j - 1), 0.5);
      }
  }
};

struct YNodeDx {
  static std::size_t in_size(const Grid2D& g) { return yfaces(g); }
  static std::size_t out_size(const Grid2D& g) { return nodes(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    const double r = 1.0 / g.dx();
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        const std::size_t o = g.node(i, j);
        if (i == 0) {
          v(o, g.yface(0, j), 2.0 * r);
        } else if (i == g.nx) {
          v(o, g.yface(g.nx - 1, j), -2.0 * r);
        } else {
          v(o, g.yface(i, j), r);
          v(o, g.yface(i - 1, j), -r);
        }
      }
  }
};

struct YNodeAvg {
  static std::size_t in_size(const Grid2D& g) { return yfaces(g); }
  static std::size_t out_size(const Grid2D& g) { return nodes(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) {
        v(g.node(i, j), g.yface(i, j), 0.5);
        v(g.node(i, j), g.yface(i - 1, j), 0.5);
      }
  }
};

struct NodeDyToX {
  static std::size_t in_size(const Grid2D& g) { return nodes(g); }
  static std::size_t out_size(const Grid2D& g) { return xfaces(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    const double r = 1.0 / g.dy();
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        v(g.xface(i, j), g.node(i, j + 1), r);
        v(g.xface(i, j), g.node(i, j), -r);
      }
  }
};

struct NodeDxToY {
  static std::size_t in_size(const Grid2D& g) { return nodes(g); }
  static std::size_t out_size(const Grid2D& g) { return yfaces(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    const double r = 1.0 / g.dx();
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        v(g.yface(i, j), g.node(i + 1, j), r);
        v(g.yface(i, j), g.node(i, j), -r);
      }
  }
};

struct CellToNode {
  static std::size_t in_size(const Grid2D& g) { return cells(g); }
  static std::size_t out_size(const Grid2D& g) { return nodes(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        const int i0 = i > 0 ? i - 1 : i;
        const int i1 = i < g.nx ? i : i - 1;
        const int j0 = j > 0 ? j - 1 : j;
        const int j1 = j < g.ny ? j : j - 1;
        const int ni = i1 - i0 + 1;
        const int nj = j1 - j0 + 1;
        const double w = 1.0 / (ni * nj);
        for (int jj = j0; jj <= j1; ++jj)
          for (int ii = i0; ii <= i1; ++ii) v(g.node(i, j), g.cell(ii, jj), w);
      }
  }
};

struct NodeToCell {
  static std::size_t in_size(const Grid2D& g) { return nodes(g); }
  static std::size_t out_size(const Grid2D& g) { return cells(g); }
  template <class V>
  static void visit(const Grid2D& g, V&& v) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t o = g.cell(i, j);
        v(o, g.node(i, j), 0.25);
        v(o, g.node(i + 1, j), 0.25);
        v(o, g.node(i, j + 1), 0.25);
        v(o, g.node(i + 1, j + 1), 0.25);
      }
  }
};

}  // namespace

Vec grad_x(const Grid2D& g, In c) { return apply<GradX>(g, c); }
Vec grad_x_t(const Grid2D& g, In f) { return apply_t<GradX>(g, f); }
Vec grad_y(const Grid2D& g, In c) { return apply<GradY>(g, c); }
Vec grad_y_t(const Grid2D& g, In f) { return apply_t<GradY>(g, f); }
Vec avg_x(const Grid2D& g, In c) { return apply<AvgX>(g, c); }
Vec avg_x_t(const Grid2D& g, In f) { return apply_t<AvgX>(g, f); }
Vec avg_y(const Grid2D& g, In c) { return apply<AvgY>(g, c); }
Vec avg_y_t(const Grid2D& g, In f) { return apply_t<AvgY>(g, f); }

Vec diff_x(const Grid2D& g, In f) { return apply<DiffX>(g, f); }
Vec diff_x_t(const Grid2D& g, In c) { return apply_t<DiffX>(g, c); }
Vec diff_y(const Grid2D& g, In f) { return apply<DiffY>(g, f); }
Vec diff_y_t(const Grid2D& g, In c) { return apply_t<DiffY>(g, c); }
Vec mean_x(const Grid2D& g, In f) { return apply<MeanX>(g, f); }
Vec mean_x_t(const Grid2D& g, In c) { return apply_t<MeanX>(g, c); }
Vec mean_y(const Grid2D& g, In f) { return apply<MeanY>(g, f); }
Vec mean_y_t(const Grid2D& g, In c) { return apply_t<MeanY>(g, c); }

Vec xnode_dy(const Grid2D& g, In f) { return apply<XNodeDy>(g, f); }
Vec xnode_dy_t(const Grid2D& g, In n) { return apply_t<XNodeDy>(g, n); }
Vec xnode_avg(const Grid2D& g, In f) { return apply<XNodeAvg>(g, f); }
Vec xnode_avg_t(const Grid2D& g, In n) { return apply_t<XNodeAvg>(g, n); }
Vec ynode_dx(const Grid2D& g, In f) { return apply<YNodeDx>(g, f); }
Vec ynode_dx_t(const Grid2D& g, In n) { return apply_t<YNodeDx>(g, n); }
Vec ynode_avg(const Grid2D& g, In f) { return apply<YNodeAvg>(g, f); }
Vec ynode_avg_t(const Grid2D& g, In n) { return apply_t<YNodeAvg>(g, n); }

Vec node_dy_to_x(const Grid2D& g, In n) { return apply<NodeDyToX>(g, n); }
Vec node_dy_to_x_t(const Grid2D& g, In f) { return apply_t<NodeDyToX>(g, f); }
Vec node_dx_to_y(const Grid2D& g, In n) { return apply<NodeDxToY>(g, n); }
Vec node_dx_to_y_t(const Grid2D& g, In f) { return apply_t<NodeDxToY>(g, f); }

Vec cell_to_node(const Grid2D& g, In c) { return apply<CellToNode>(g, c); }
Vec cell_to_node_t(const Grid2D& g, In n) { return apply_t<CellToNode>(g, n); }
Vec node_to_cell(const Grid2D& g, In n) { return apply<NodeToCell>(g, n); }
Vec node_to_cell_t(const Grid2D& g, In c) { return apply_t<NodeToCell>(g, c); }

Vec mul(In a, In b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] * b[k];
  return r;
}

void add_to(Vec& acc, In b, double s) {
  assert(acc.size() == b.size());
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += s * b[k];
}

}  // namespace nchns::stencil
