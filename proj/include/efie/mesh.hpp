// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "efie/vec3.hpp"

namespace efie {

/// Thrown for malformed input, invalid configurations and violated
/// preconditions of the public API.
class Error : public std::runtime_error
{
public:
   using std::runtime_error::runtime_error;
};

class MeshError : public Error
{
public:
   using Error::Error;
};

/// Edge of the triangulation with its (one or two) adjacent triangles.
struct Edge
{
   std::array<int, 2> vertices;  // sorted ascending
   std::vector<int> triangles;   // ascending triangle ids
};

/// Oriented surface triangulation. Immutable once constructed.
class SurfaceMesh
{
public:
   /// Validates the invariants (distinct vertices, positive area,
   /// conformity, at most two triangles per edge) and builds the edge list.
   SurfaceMesh(std::vector<Vec3d> vertices, std::vector<std::array<int, 3>> triangles);

   std::size_t num_vertices() const { return vertices_.size(); }
   std::size_t num_triangles() const { return triangles_.size(); }

   const std::vector<Vec3d> &vertices() const { return vertices_; }
   const std::vector<std::array<int, 3>> &triangles() const { return triangles_; }
   const std::vector<Edge> &edges() const { return edges_; }

   const Vec3d &vertex(int v) const { return vertices_[v]; }
   const std::array<int, 3> &triangle(int t) const { return triangles_[t]; }

   /// Vertex coordinates of triangle `t` in winding order.
   Tri<double> corners(int t) const;
   double area(int t) const;
   /// Unit normal given by the winding order.
   Vec3d normal(int t) const;

   /// Local position (0..2) of global vertex `m` in triangle `t`, or -1.
   int local_index(int t, int m) const;

   /// Triangles having `m` as a vertex, ascending.
   std::vector<int> star(int m) const;

private:
   std::vector<Vec3d> vertices_;
   std::vector<std::array<int, 3>> triangles_;
   std::vector<Edge> edges_;
};

/// Reads the text mesh format: header `nv nt`, then `nv` lines `x y z`,
/// then `nt` lines `i j k` with 0-based indices. Lines starting with '#'
/// are ignored.
SurfaceMesh load_mesh(const std::filesystem::path &path);
SurfaceMesh read_mesh(std::istream &in);
void write_mesh(std::ostream &out, const SurfaceMesh &mesh);

/// Nodal hat function lambda_m on triangle `t` at barycentric point `bary`.
double hat_value(const SurfaceMesh &mesh, int t, int m, const std::array<double, 3> &bary);

/// Constant in-plane gradient of lambda_m on triangle `t`; zero when `m`
/// is not a vertex of `t`.
Vec3d hat_surface_gradient(const SurfaceMesh &mesh, int t, int m);

/// Gradient of the barycentric coordinate of local vertex `i` of `tri`.
template <typename T>
Vec3<T> barycentric_gradient(const Tri<T> &tri, int i)
{
   // grad lambda_i = n x (V_{i+2} - V_{i+1}) / (2|T|) with unit normal n
   Vec3<T> n2 = twice_area_normal(tri);
   auto nn = dot(n2, n2);
   Vec3<T> e = tri[(i + 2) % 3] - tri[(i + 1) % 3];
   return cross(n2, e) / nn;
}

/// Lowest-order Raviart-Thomas shape function i on a triangle:
/// (y - V_i) / (2|T|), the Piola image of the reference function attached
/// to the edge opposite vertex i. Its flux through that edge is one.
template <typename T>
Vec3<T> rt_shape(const Tri<T> &tri, int i, const Vec3<T> &y)
{
   return (y - tri[i]) / (2.0 * triangle_area(tri));
}

Vec3d rt_eval(const SurfaceMesh &mesh, int t, int i, const std::array<double, 3> &bary);

/// Surface divergence of rt_eval: +1/|T| (orientation absorbed in the
/// global DOF sign).
double rt_div(const SurfaceMesh &mesh, int t, int i);

/// One global RT degree of freedom per interior edge.
struct Dof
{
   int edge;
   std::array<int, 2> triangles;  // ascending ids
   std::array<int, 2> local;      // local basis index (vertex opposite the edge)
   std::array<int, 2> sign;       // +1 on the lower triangle, -1 on the higher
};

/// Maps interior edges to global DOFs. Boundary edges carry no DOF.
class DofMap
{
public:
   explicit DofMap(const SurfaceMesh &mesh);

   std::size_t size() const { return dofs_.size(); }
   const Dof &dof(int g) const { return dofs_[g]; }
   const std::vector<Dof> &dofs() const { return dofs_; }

   /// Global DOF id and sign of local basis `i` on triangle `t`; id -1 when
   /// that edge is on the boundary.
   struct Slot
   {
      int dof = -1;
      int sign = 0;
   };
   const Slot &slot(int t, int i) const { return slots_[3 * t + i]; }

private:
   std::vector<Dof> dofs_;
   std::vector<Slot> slots_;
};

/// Deformation x -> x + s tau lambda_m(x) associated with one mesh node.
struct ShapePerturbation
{
   int node = 0;
   Vec3d tau{};
};

/// Applies F_s for the perturbation; only vertex `node` moves.
SurfaceMesh deform_mesh(const SurfaceMesh &mesh, const ShapePerturbation &p, double s);

enum class PairClass { near, point, edge, same };

const char *to_string(PairClass c);

/// Classification by the number of shared vertex indices.
PairClass classify_pair(const SurfaceMesh &mesh, int tp, int tq);

} // namespace efie
