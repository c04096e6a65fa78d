// SPDX-License-Identifier: Apache-2.0

#include "efie/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace efie {

namespace {

// Relative threshold below which a triangle counts as degenerate.
constexpr double kDegenerateTol = 1e-14;

double bounding_scale(const std::vector<Vec3d> &v)
{
   double s = 0.0;
   for (const auto &p : v)
   {
      s = std::max({s, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
   }
   return s > 0.0 ? s : 1.0;
}

// True when p lies strictly inside segment [a, b] up to a relative tolerance.
bool inside_segment(const Vec3d &p, const Vec3d &a, const Vec3d &b, double tol)
{
   Vec3d ab = b - a;
   double len2 = dot(ab, ab);
   double t = dot(p - a, ab) / len2;
   if (t <= tol || t >= 1.0 - tol) { return false; }
   Vec3d q = a + ab * t;
   Vec3d d = p - q;
   return dot(d, d) <= tol * tol * len2;
}

} // namespace

SurfaceMesh::SurfaceMesh(std::vector<Vec3d> vertices, std::vector<std::array<int, 3>> triangles)
   : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
   const int nv = static_cast<int>(vertices_.size());
   for (const auto &p : vertices_)
   {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
      {
         throw MeshError("non-finite vertex coordinate");
      }
   }
   const double scale = bounding_scale(vertices_);

   std::map<std::array<int, 2>, std::vector<int>> edge_map;
   std::map<std::array<int, 3>, int> seen;
   for (int t = 0; t < static_cast<int>(triangles_.size()); ++t)
   {
      const auto &tri = triangles_[t];
      for (int v : tri)
      {
         if (v < 0 || v >= nv)
         {
            throw MeshError("triangle " + std::to_string(t) + " references vertex " +
                            std::to_string(v) + " out of range");
         }
      }
      if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      {
         throw MeshError("degenerate triangle " + std::to_string(t) + ": repeated vertex");
      }
      if (2.0 * area(t) <= kDegenerateTol * scale * scale)
      {
         throw MeshError("degenerate triangle " + std::to_string(t) + ": zero area");
      }
      auto key = tri;
      std::sort(key.begin(), key.end());
      if (auto [it, fresh] = seen.emplace(key, t); !fresh)
      {
         throw MeshError("non-conforming mesh: triangles " + std::to_string(it->second) +
                         " and " + std::to_string(t) + " coincide");
      }
      for (int e = 0; e < 3; ++e)
      {
         int a = tri[(e + 1) % 3], b = tri[(e + 2) % 3];
         edge_map[{std::min(a, b), std::max(a, b)}].push_back(t);
      }
   }

   edges_.reserve(edge_map.size());
   for (auto &[verts, tris] : edge_map)
   {
      if (tris.size() > 2)
      {
         throw MeshError("non-conforming mesh: edge (" + std::to_string(verts[0]) + "," +
                         std::to_string(verts[1]) + ") has more than two triangles");
      }
      edges_.push_back({verts, tris});
   }

   // Hanging nodes: a vertex strictly inside another triangle's edge.
   for (const auto &e : edges_)
   {
      const Vec3d &a = vertices_[e.vertices[0]];
      const Vec3d &b = vertices_[e.vertices[1]];
      for (int v = 0; v < nv; ++v)
      {
         if (v == e.vertices[0] || v == e.vertices[1]) { continue; }
         if (inside_segment(vertices_[v], a, b, 1e-12))
         {
            throw MeshError("non-conforming mesh: vertex " + std::to_string(v) +
                            " lies on edge (" + std::to_string(e.vertices[0]) + "," +
                            std::to_string(e.vertices[1]) + ")");
         }
      }
   }
}

Tri<double> SurfaceMesh::corners(int t) const
{
   const auto &tri = triangles_[t];
   return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

double SurfaceMesh::area(int t) const { return triangle_area(corners(t)); }

Vec3d SurfaceMesh::normal(int t) const
{
   Vec3d n = twice_area_normal(corners(t));
   return n / norm(n);
}

int SurfaceMesh::local_index(int t, int m) const
{
   const auto &tri = triangles_[t];
   for (int i = 0; i < 3; ++i)
   {
      if (tri[i] == m) { return i; }
   }
   return -1;
}

std::vector<int> SurfaceMesh::star(int m) const
{
   std::vector<int> out;
   for (int t = 0; t < static_cast<int>(triangles_.size()); ++t)
   {
      if (local_index(t, m) >= 0) { out.push_back(t); }
   }
   return out;
}

SurfaceMesh read_mesh(std::istream &in)
{
   std::vector<std::string> lines;
   std::string line;
   while (std::getline(in, line))
   {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') { continue; }
      lines.push_back(line);
   }
   if (lines.empty()) { throw MeshError("mesh parse error: empty input"); }

   auto parse_error = [](std::size_t lineno, const std::string &what) {
      return MeshError("mesh parse error (record " + std::to_string(lineno + 1) + "): " + what);
   };

   long nv = -1, nt = -1;
   {
      std::istringstream hs(lines[0]);
      std::string extra;
      if (!(hs >> nv >> nt) || (hs >> extra) || nv < 0 || nt < 0)
      {
         throw parse_error(0, "expected header 'nv nt'");
      }
   }
   if (lines.size() != static_cast<std::size_t>(1 + nv + nt))
   {
      throw MeshError("mesh parse error: expected " + std::to_string(nv) + " vertices and " +
                      std::to_string(nt) + " triangles, found " +
                      std::to_string(lines.size() - 1) + " records");
   }

   std::vector<Vec3d> verts(nv);
   for (long i = 0; i < nv; ++i)
   {
      std::istringstream ls(lines[1 + i]);
      std::string extra;
      if (!(ls >> verts[i].x >> verts[i].y >> verts[i].z) || (ls >> extra))
      {
         throw parse_error(1 + i, "expected 'x y z'");
      }
   }
   std::vector<std::array<int, 3>> tris(nt);
   for (long i = 0; i < nt; ++i)
   {
      std::istringstream ls(lines[1 + nv + i]);
      std::string extra;
      if (!(ls >> tris[i][0] >> tris[i][1] >> tris[i][2]) || (ls >> extra))
      {
         throw parse_error(1 + nv + i, "expected 'i j k'");
      }
   }
   return SurfaceMesh(std::move(verts), std::move(tris));
}

SurfaceMesh load_mesh(const std::filesystem::path &path)
{
   std::ifstream in(path);
   if (!in) { throw MeshError("cannot open mesh file '" + path.string() + "'"); }
   return read_mesh(in);
}

void write_mesh(std::ostream &out, const SurfaceMesh &mesh)
{
   out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
   out << std::setprecision(17);
   for (const auto &v : mesh.vertices()) { out << v.x << ' ' << v.y << ' ' << v.z << '\n'; }
   for (const auto &t : mesh.triangles()) { out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n'; }
}

double hat_value(const SurfaceMesh &mesh, int t, int m, const std::array<double, 3> &bary)
{
   int i = mesh.local_index(t, m);
   return i < 0 ? 0.0 : bary[i];
}

Vec3d hat_surface_gradient(const SurfaceMesh &mesh, int t, int m)
{
   int i = mesh.local_index(t, m);
   if (i < 0) { return {}; }
   return barycentric_gradient(mesh.corners(t), i);
}

Vec3d rt_eval(const SurfaceMesh &mesh, int t, int i, const std::array<double, 3> &bary)
{
   auto tri = mesh.corners(t);
   return rt_shape(tri, i, bary_point(tri, bary));
}

double rt_div(const SurfaceMesh &mesh, int t, int /*i*/)
{
   return 1.0 / mesh.area(t);
}

DofMap::DofMap(const SurfaceMesh &mesh) : slots_(3 * mesh.num_triangles())
{
   const auto &edges = mesh.edges();
   for (int e = 0; e < static_cast<int>(edges.size()); ++e)
   {
      const Edge &edge = edges[e];
      if (edge.triangles.size() != 2) { continue; }
      Dof d;
      d.edge = e;
      d.triangles = {edge.triangles[0], edge.triangles[1]};
      for (int side = 0; side < 2; ++side)
      {
         int t = d.triangles[side];
         const auto &tri = mesh.triangle(t);
         int local = -1;
         for (int i = 0; i < 3; ++i)
         {
            if (tri[i] != edge.vertices[0] && tri[i] != edge.vertices[1]) { local = i; }
         }
         d.local[side] = local;
         d.sign[side] = side == 0 ? 1 : -1;
      }
      const int g = static_cast<int>(dofs_.size());
      for (int side = 0; side < 2; ++side)
      {
         slots_[3 * d.triangles[side] + d.local[side]] = {g, d.sign[side]};
      }
      dofs_.push_back(d);
   }
}

SurfaceMesh deform_mesh(const SurfaceMesh &mesh, const ShapePerturbation &p, double s)
{
   if (p.node < 0 || p.node >= static_cast<int>(mesh.num_vertices()))
   {
      throw Error("perturbation node " + std::to_string(p.node) + " out of range");
   }
   if (!(s > -1.0 && s < 1.0)) { throw Error("deformation parameter must satisfy |s| < 1"); }
   auto verts = mesh.vertices();
   verts[p.node] += p.tau * s;
   try
   {
      return SurfaceMesh(std::move(verts), mesh.triangles());
   }
   catch (const MeshError &e)
   {
      throw MeshError(std::string("deformation produced an invalid mesh: ") + e.what());
   }
}

const char *to_string(PairClass c)
{
   switch (c)
   {
      case PairClass::near: return "near";
      case PairClass::point: return "point";
      case PairClass::edge: return "edge";
      case PairClass::same: return "same";
   }
   return "?";
}

PairClass classify_pair(const SurfaceMesh &mesh, int tp, int tq)
{
   int shared = 0;
   for (int a : mesh.triangle(tp))
   {
      for (int b : mesh.triangle(tq))
      {
         shared += (a == b);
      }
   }
   return static_cast<PairClass>(shared);
}

} // namespace efie
