#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hodg {

using Index = std::int32_t;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

enum class CellShape : std::uint8_t { triangle, quadrilateral };

enum class BcKind : std::uint8_t { far_field, slip_wall, no_slip_wall };

std::string to_string(BcKind kind);
BcKind parse_bc_kind(const std::string& name);

struct Node {
    double x = 0.0;
    double y = 0.0;
};

/// An edge shared by one or two cells. `right` is a cell index, or a negative
/// boundary tag -(patch + 1). The normal points from left to right (outward
/// from `left` at boundaries).
struct Face {
    Index node_a = -1;
    Index node_b = -1;
    Index left = -1;
    Index right = -1;
    Vec2 normal;
    double length = 0.0;
    Vec2 midpoint;

    bool boundary() const { return right < 0; }
    Index patch() const { return -right - 1; }
};

constexpr Index boundary_tag(Index patch) { return -(patch + 1); }

struct Cell {
    CellShape shape = CellShape::triangle;
    std::array<Index, 4> nodes{-1, -1, -1, -1};
    std::array<Index, 4> faces{-1, -1, -1, -1};
    /// Per local edge: adjacent cell, or the boundary tag of the face.
    std::array<Index, 4> neighbors{-1, -1, -1, -1};
    Vec2 centroid;
    double area = 0.0;
    double h = 0.0;

    int n_vertices() const { return shape == CellShape::triangle ? 3 : 4; }
};

struct BoundaryPatch {
    std::string name;
    BcKind kind = BcKind::far_field;
    std::vector<Index> faces;
};

struct Mesh {
    std::vector<Node> nodes;
    std::vector<Face> faces;
    std::vector<Cell> cells;
    std::vector<BoundaryPatch> patches;

    std::size_t n_cells() const { return cells.size(); }
    std::size_t n_faces() const { return faces.size(); }
    std::size_t n_interior_faces() const;
    Vec2 node(Index i) const { return {nodes[i].x, nodes[i].y}; }
};

/// Raw cell description used to assemble a mesh: shape plus CCW node ids.
struct CellSpec {
    CellShape shape = CellShape::triangle;
    std::array<Index, 4> nodes{-1, -1, -1, -1};
};

/// Boundary patch given by node pairs, as in the mesh file.
struct PatchSpec {
    std::string name;
    BcKind kind = BcKind::far_field;
    std::vector<std::array<Index, 2>> edges;
};

/// Boundary faces not listed in any patch are collected here.
inline constexpr const char* kUnassignedPatch = "unassigned";

/// Derives faces, neighbors and geometry from nodes + cells. Throws
/// TopologyError on out-of-range references, inverted cells, or edges shared
/// by more than two cells.
Mesh assemble_mesh(std::vector<Node> nodes, std::span<const CellSpec> cells,
                   std::span<const PatchSpec> patches = {});

/// Reads the `hodg-mesh 1` text format.
Mesh load_mesh(const std::filesystem::path& path);
Mesh parse_mesh(const std::string& text);
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);
std::string format_mesh(const Mesh& mesh);

struct Extent {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
};

/// Boundary kinds of the four sides of a generated rectangle.
struct SideKinds {
    BcKind bottom = BcKind::far_field;
    BcKind right = BcKind::far_field;
    BcKind top = BcKind::far_field;
    BcKind left = BcKind::far_field;
};

/// nx * ny quadrilaterals, cells numbered row-major from the (x0, y0) corner.
Mesh generate_quad_grid(int nx, int ny, Extent extent = {}, SideKinds sides = {});
/// Same lattice with every quad split into two triangles along its
/// lower-left to upper-right diagonal.
Mesh generate_tri_grid(int nx, int ny, Extent extent = {}, SideKinds sides = {});
/// Quad channel whose bottom wall carries a sin^2 bump of `height` over the
/// middle third of the x range; interior nodes are shifted proportionally.
/// Default sides: slip walls at bottom and top, far field left and right.
Mesh generate_bump_channel(int nx, int ny, Extent extent, double height,
                           SideKinds sides = {BcKind::slip_wall, BcKind::far_field,
                                              BcKind::slip_wall, BcKind::far_field});

struct Violation {
    std::string kind;
    Index entity = -1;
    std::string message;
};

/// Checks every structural and geometric invariant of the mesh; returns the
/// violations found (empty on success). Never throws.
std::vector<Violation> validate(const Mesh& mesh);

/// Signed shoelace area of a cell from its node coordinates.
double signed_area(const Mesh& mesh, const Cell& cell);

}  // namespace hodg
