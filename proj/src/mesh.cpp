#include "hodg/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "hodg/error.hpp"

namespace hodg {

std::string to_string(BcKind kind) {
    switch (kind) {
        case BcKind::far_field: return "far_field";
        case BcKind::slip_wall: return "slip_wall";
        case BcKind::no_slip_wall: return "no_slip_wall";
    }
    return "unknown";
}

BcKind parse_bc_kind(const std::string& name) {
    if (name == "far_field" || name == "farfield") return BcKind::far_field;
    if (name == "slip_wall") return BcKind::slip_wall;
    if (name == "no_slip_wall") return BcKind::no_slip_wall;
    throw Error("unknown boundary kind '" + name + "'");
}

std::size_t Mesh::n_interior_faces() const {
    return static_cast<std::size_t>(
        std::count_if(faces.begin(), faces.end(), [](const Face& f) { return !f.boundary(); }));
}

double signed_area(const Mesh& mesh, const Cell& cell) {
    const int nv = cell.n_vertices();
    double a = 0.0;
    for (int k = 0; k < nv; ++k) {
        const Vec2 p = mesh.node(cell.nodes[k]);
        const Vec2 q = mesh.node(cell.nodes[(k + 1) % nv]);
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

namespace {

std::uint64_t edge_key(Index a, Index b) {
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (lo << 32) | hi;
}

Vec2 polygon_centroid(const Mesh& mesh, const Cell& cell, double area) {
    const int nv = cell.n_vertices();
    double cx = 0.0, cy = 0.0;
    for (int k = 0; k < nv; ++k) {
        const Vec2 p = mesh.node(cell.nodes[k]);
        const Vec2 q = mesh.node(cell.nodes[(k + 1) % nv]);
        const double cr = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * cr;
        cy += (p.y + q.y) * cr;
    }
    return {cx / (6.0 * area), cy / (6.0 * area)};
}

void set_face_geometry(const Mesh& mesh, Face& f) {
    const Vec2 a = mesh.node(f.node_a);
    const Vec2 b = mesh.node(f.node_b);
    const Vec2 d = b - a;
    f.length = norm(d);
    f.normal = {d.y / f.length, -d.x / f.length};
    f.midpoint = 0.5 * (a + b);
}

}  // namespace

Mesh assemble_mesh(std::vector<Node> nodes, std::span<const CellSpec> cells,
                   std::span<const PatchSpec> patches) {
    Mesh mesh;
    mesh.nodes = std::move(nodes);
    const auto n_nodes = static_cast<Index>(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        if (!std::isfinite(mesh.nodes[i].x) || !std::isfinite(mesh.nodes[i].y))
            throw TopologyError("node " + std::to_string(i) + " has non-finite coordinates");
    }

    mesh.cells.resize(cells.size());
    std::unordered_map<std::uint64_t, Index> edge_to_face;
    edge_to_face.reserve(cells.size() * 2 + 8);

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const auto c = static_cast<Index>(ci);
        Cell& cell = mesh.cells[ci];
        cell.shape = cells[ci].shape;
        cell.nodes = cells[ci].nodes;
        const int nv = cell.n_vertices();
        for (int k = 0; k < nv; ++k) {
            const Index id = cell.nodes[k];
            if (id < 0 || id >= n_nodes)
                throw TopologyError("cell " + std::to_string(c) + " references node " +
                                    std::to_string(id) + " of " + std::to_string(n_nodes));
        }
        cell.area = signed_area(mesh, cell);
        if (!(cell.area > 0.0))
            throw TopologyError("cell " + std::to_string(c) +
                                " is inverted or degenerate (area " + std::to_string(cell.area) +
                                ")");
        cell.centroid = polygon_centroid(mesh, cell, cell.area);
        cell.h = std::sqrt(cell.area);

        for (int k = 0; k < nv; ++k) {
            const Index a = cell.nodes[k];
            const Index b = cell.nodes[(k + 1) % nv];
            const auto key = edge_key(a, b);
            auto it = edge_to_face.find(key);
            if (it == edge_to_face.end()) {
                Face f;
                f.node_a = a;
                f.node_b = b;
                f.left = c;
                f.right = -1;  // unmatched until a second cell claims it
                const auto fid = static_cast<Index>(mesh.faces.size());
                mesh.faces.push_back(f);
                edge_to_face.emplace(key, fid);
                cell.faces[k] = fid;
                continue;
            }
            Face& f = mesh.faces[it->second];
            if (f.right >= 0)
                throw TopologyError("non-manifold edge (" + std::to_string(a) + ", " +
                                    std::to_string(b) + ") shared by more than two cells");
            if (f.node_a != b || f.node_b != a)
                throw TopologyError("cells " + std::to_string(f.left) + " and " +
                                    std::to_string(c) + " traverse edge (" + std::to_string(a) +
                                    ", " + std::to_string(b) + ") in the same direction");
            f.right = c;
            cell.faces[k] = it->second;
        }
    }

    // Boundary faces: match patch descriptors, collect the rest.
    std::vector<Index> patch_of(mesh.faces.size(), -1);
    for (std::size_t p = 0; p < patches.size(); ++p) {
        BoundaryPatch bp;
        bp.name = patches[p].name;
        bp.kind = patches[p].kind;
        for (const auto& e : patches[p].edges) {
            auto it = edge_to_face.find(edge_key(e[0], e[1]));
            if (it == edge_to_face.end() || mesh.faces[it->second].right >= 0)
                throw TopologyError("patch '" + bp.name + "' lists (" + std::to_string(e[0]) +
                                    ", " + std::to_string(e[1]) + ") which is not a boundary edge");
            if (patch_of[it->second] >= 0)
                throw TopologyError("boundary edge (" + std::to_string(e[0]) + ", " +
                                    std::to_string(e[1]) + ") listed in two patches");
            patch_of[it->second] = static_cast<Index>(p);
            bp.faces.push_back(it->second);
        }
        mesh.patches.push_back(std::move(bp));
    }
    BoundaryPatch rest{kUnassignedPatch, BcKind::far_field, {}};
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        if (mesh.faces[f].right >= 0) continue;
        if (patch_of[f] < 0) rest.faces.push_back(static_cast<Index>(f));
    }
    if (!rest.faces.empty()) {
        const auto p = static_cast<Index>(mesh.patches.size());
        for (Index f : rest.faces) patch_of[f] = p;
        mesh.patches.push_back(std::move(rest));
    }
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        if (mesh.faces[f].right < 0) mesh.faces[f].right = boundary_tag(patch_of[f]);
    }

    for (Face& f : mesh.faces) set_face_geometry(mesh, f);
    for (std::size_t ci = 0; ci < mesh.cells.size(); ++ci) {
        Cell& cell = mesh.cells[ci];
        for (int k = 0; k < cell.n_vertices(); ++k) {
            const Face& f = mesh.faces[cell.faces[k]];
            cell.neighbors[k] = f.left == static_cast<Index>(ci) ? f.right : f.left;
        }
    }
    return mesh;
}

// ---------------------------------------------------------------------------
// File format

namespace {

struct LineReader {
    std::istringstream in;
    int line_no = 0;

    explicit LineReader(const std::string& text) : in(text) {}

    // Next non-empty line split into tokens; '#' starts a comment.
    std::vector<std::string> next(const char* expecting) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            std::vector<std::string> tok;
            for (std::string t; ls >> t;) tok.push_back(t);
            if (!tok.empty()) return tok;
        }
        throw ParseError(std::string("unexpected end of file, expecting ") + expecting,
                         line_no + 1);
    }
    bool at_end() {
        std::streampos pos = in.tellg();
        int saved = line_no;
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                in.clear();
                in.seekg(pos);
                line_no = saved;
                return false;
            }
        }
        return true;
    }
};

long long to_int(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + s + "'", line);
    }
}

double to_double(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + s + "'", line);
    }
}

std::size_t section_count(const std::vector<std::string>& tok, const char* name, int line) {
    if (tok.size() != 2 || tok[0] != name)
        throw ParseError(std::string("expected '") + name + " <count>'", line);
    const long long n = to_int(tok[1], line);
    if (n < 0) throw ParseError("negative count", line);
    return static_cast<std::size_t>(n);
}

}  // namespace

Mesh parse_mesh(const std::string& text) {
    LineReader r(text);
    auto tok = r.next("header");
    if (tok.size() != 2 || tok[0] != "hodg-mesh" || tok[1] != "1")
        throw ParseError("expected header 'hodg-mesh 1'", r.line_no);

    tok = r.next("nodes section");
    const std::size_t n_nodes = section_count(tok, "nodes", r.line_no);
    std::vector<Node> nodes(n_nodes);
    for (auto& n : nodes) {
        tok = r.next("node coordinates");
        if (tok.size() != 2) throw ParseError("expected 'x y'", r.line_no);
        n.x = to_double(tok[0], r.line_no);
        n.y = to_double(tok[1], r.line_no);
    }

    tok = r.next("cells section");
    const std::size_t n_cells = section_count(tok, "cells", r.line_no);
    std::vector<CellSpec> cells(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
        tok = r.next("cell");
        CellSpec& c = cells[i];
        std::size_t nv = 0;
        if (tok[0] == "t") {
            c.shape = CellShape::triangle;
            nv = 3;
        } else if (tok[0] == "q") {
            c.shape = CellShape::quadrilateral;
            nv = 4;
        } else {
            throw ParseError("cell type must be 't' or 'q', got '" + tok[0] + "'", r.line_no);
        }
        if (tok.size() != nv + 1)
            throw ParseError("cell needs " + std::to_string(nv) + " node ids", r.line_no);
        for (std::size_t k = 0; k < nv; ++k) {
            const long long id = to_int(tok[k + 1], r.line_no);
            if (id < 0 || id >= static_cast<long long>(n_nodes))
                throw TopologyError("line " + std::to_string(r.line_no) + ": cell " +
                                    std::to_string(i) + " references node " + std::to_string(id) +
                                    " of " + std::to_string(n_nodes));
            c.nodes[k] = static_cast<Index>(id);
        }
    }

    std::vector<PatchSpec> patches;
    if (!r.at_end()) {
        tok = r.next("patches section");
        const std::size_t n_patches = section_count(tok, "patches", r.line_no);
        for (std::size_t p = 0; p < n_patches; ++p) {
            tok = r.next("patch header");
            if (tok.size() != 3) throw ParseError("expected 'name kind count'", r.line_no);
            PatchSpec ps;
            ps.name = tok[0];
            try {
                ps.kind = parse_bc_kind(tok[1]);
            } catch (const Error& e) {
                throw ParseError(e.what(), r.line_no);
            }
            const long long count = to_int(tok[2], r.line_no);
            if (count < 0) throw ParseError("negative count", r.line_no);
            for (long long k = 0; k < count; ++k) {
                tok = r.next("patch face");
                if (tok.size() != 2) throw ParseError("expected 'nodeA nodeB'", r.line_no);
                ps.edges.push_back({static_cast<Index>(to_int(tok[0], r.line_no)),
                                    static_cast<Index>(to_int(tok[1], r.line_no))});
            }
            patches.push_back(std::move(ps));
        }
        if (!r.at_end()) throw ParseError("trailing content after patches", r.line_no + 1);
    }
    return assemble_mesh(std::move(nodes), cells, patches);
}

Mesh load_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open mesh file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_mesh(ss.str());
}

std::string format_mesh(const Mesh& mesh) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "hodg-mesh 1\n";
    out << "nodes " << mesh.nodes.size() << '\n';
    for (const Node& n : mesh.nodes) out << n.x << ' ' << n.y << '\n';
    out << "cells " << mesh.cells.size() << '\n';
    for (const Cell& c : mesh.cells) {
        out << (c.shape == CellShape::triangle ? 't' : 'q');
        for (int k = 0; k < c.n_vertices(); ++k) out << ' ' << c.nodes[k];
        out << '\n';
    }
    std::size_t n_patches = 0;
    for (const auto& p : mesh.patches)
        if (p.name != kUnassignedPatch || p.kind != BcKind::far_field) ++n_patches;
    out << "patches " << n_patches << '\n';
    for (const auto& p : mesh.patches) {
        if (p.name == kUnassignedPatch && p.kind == BcKind::far_field) continue;
        out << p.name << ' ' << to_string(p.kind) << ' ' << p.faces.size() << '\n';
        for (Index f : p.faces) out << mesh.faces[f].node_a << ' ' << mesh.faces[f].node_b << '\n';
    }
    return out.str();
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write mesh file '" + path.string() + "'");
    out << format_mesh(mesh);
    if (!out) throw Error("failed writing mesh file '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Generators

namespace {

std::vector<PatchSpec> side_patches(int nx, int ny, SideKinds sides) {
    const auto id = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
    std::vector<PatchSpec> p(4);
    p[0] = {"bottom", sides.bottom, {}};
    p[1] = {"right", sides.right, {}};
    p[2] = {"top", sides.top, {}};
    p[3] = {"left", sides.left, {}};
    for (int i = 0; i < nx; ++i) p[0].edges.push_back({id(i, 0), id(i + 1, 0)});
    for (int j = 0; j < ny; ++j) p[1].edges.push_back({id(nx, j), id(nx, j + 1)});
    for (int i = nx; i > 0; --i) p[2].edges.push_back({id(i, ny), id(i - 1, ny)});
    for (int j = ny; j > 0; --j) p[3].edges.push_back({id(0, j), id(0, j - 1)});
    return p;
}

std::vector<Node> lattice(int nx, int ny, Extent e) {
    if (nx < 1 || ny < 1)
        throw Error("grid dimensions must be at least 1 (got " + std::to_string(nx) + " x " +
                    std::to_string(ny) + ")");
    if (!(e.x1 > e.x0) || !(e.y1 > e.y0)) throw Error("grid extent must have positive size");
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            nodes.push_back({e.x0 + (e.x1 - e.x0) * i / nx, e.y0 + (e.y1 - e.y0) * j / ny});
    return nodes;
}

}  // namespace

Mesh generate_quad_grid(int nx, int ny, Extent extent, SideKinds sides) {
    auto nodes = lattice(nx, ny, extent);
    std::vector<CellSpec> cells;
    cells.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const Index a = j * (nx + 1) + i;
            cells.push_back({CellShape::quadrilateral, {a, a + 1, a + nx + 2, a + nx + 1}});
        }
    return assemble_mesh(std::move(nodes), cells, side_patches(nx, ny, sides));
}

Mesh generate_bump_channel(int nx, int ny, Extent extent, double height, SideKinds sides) {
    auto nodes = lattice(nx, ny, extent);
    const double len = extent.x1 - extent.x0;
    const double a = extent.x0 + len / 3.0, b = extent.x0 + 2.0 * len / 3.0;
    if (!(std::abs(height) < 0.5 * (extent.y1 - extent.y0)))
        throw Error("bump height must be below half the channel height");
    for (Node& n : nodes) {
        if (n.x <= a || n.x >= b) continue;
        const double s = std::sin(std::numbers::pi * (n.x - a) / (b - a));
        const double yb = height * s * s;
        n.y = extent.y0 + yb + (n.y - extent.y0) * (extent.y1 - extent.y0 - yb) / (extent.y1 - extent.y0);
    }
    std::vector<CellSpec> cells;
    cells.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const Index c = j * (nx + 1) + i;
            cells.push_back({CellShape::quadrilateral, {c, c + 1, c + nx + 2, c + nx + 1}});
        }
    return assemble_mesh(std::move(nodes), cells, side_patches(nx, ny, sides));
}

Mesh generate_tri_grid(int nx, int ny, Extent extent, SideKinds sides) {
    auto nodes = lattice(nx, ny, extent);
    std::vector<CellSpec> cells;
    cells.reserve(static_cast<std::size_t>(nx) * ny * 2);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const Index a = j * (nx + 1) + i;
            cells.push_back({CellShape::triangle, {a, a + 1, a + nx + 2, -1}});
            cells.push_back({CellShape::triangle, {a, a + nx + 2, a + nx + 1, -1}});
        }
    return assemble_mesh(std::move(nodes), cells, side_patches(nx, ny, sides));
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Violation> validate(const Mesh& mesh) {
    std::vector<Violation> out;
    auto add = [&out](const char* kind, Index id, std::string msg) {
        out.push_back({kind, id, std::move(msg)});
    };
    const auto n_nodes = static_cast<Index>(mesh.nodes.size());
    const auto n_cells = static_cast<Index>(mesh.cells.size());
    const auto n_faces = static_cast<Index>(mesh.faces.size());
    const auto n_patches = static_cast<Index>(mesh.patches.size());

    for (Index i = 0; i < n_nodes; ++i)
        if (!std::isfinite(mesh.nodes[i].x) || !std::isfinite(mesh.nodes[i].y))
            add("non-finite-node", i, "node has non-finite coordinates");

    std::vector<int> refs(mesh.faces.size(), 0);
    std::vector<bool> cell_ok(mesh.cells.size(), true);
    for (Index c = 0; c < n_cells; ++c) {
        const Cell& cell = mesh.cells[c];
        const int nv = cell.n_vertices();
        bool nodes_ok = true;
        for (int k = 0; k < nv; ++k)
            if (cell.nodes[k] < 0 || cell.nodes[k] >= n_nodes) nodes_ok = false;
        if (!nodes_ok) {
            add("bad-node-reference", c, "cell references a node out of range");
            cell_ok[c] = false;
            continue;
        }
        const double a = signed_area(mesh, cell);
        if (!(a > 0.0)) {
            add("negative-area", c, "cell area " + std::to_string(a) + " is not positive");
            cell_ok[c] = false;
        } else if (std::abs(a - cell.area) > 1e-12 * std::max(1.0, a)) {
            add("stale-geometry", c, "stored area differs from node geometry");
        }
        Vec2 closure;
        double perimeter = 0.0;
        for (int k = 0; k < nv; ++k) {
            const Index fid = cell.faces[k];
            if (fid < 0 || fid >= n_faces) {
                add("cross-reference", c, "cell lists face " + std::to_string(fid) + " out of range");
                cell_ok[c] = false;
                continue;
            }
            ++refs[fid];
            const Face& f = mesh.faces[fid];
            if (f.left != c && f.right != c) {
                add("cross-reference", c, "face " + std::to_string(fid) + " does not reference cell");
                cell_ok[c] = false;
                continue;
            }
            const Index expected = f.left == c ? f.right : f.left;
            if (cell.neighbors[k] != expected)
                add("cross-reference", c, "neighbor list disagrees with face " + std::to_string(fid));
            const Index na = cell.nodes[k], nb = cell.nodes[(k + 1) % nv];
            if (!((f.node_a == na && f.node_b == nb) || (f.node_a == nb && f.node_b == na)))
                add("cross-reference", c, "face " + std::to_string(fid) + " does not match cell edge");
            const double s = f.left == c ? 1.0 : -1.0;
            closure = closure + (s * f.length) * f.normal;
            perimeter += f.length;
        }
        if (cell_ok[c] && norm(closure) >= 1e-12 * perimeter)
            add("closure", c, "sum of outward normals times lengths is not zero");
    }

    std::vector<int> in_patch(mesh.faces.size(), 0);
    for (Index p = 0; p < n_patches; ++p)
        for (Index f : mesh.patches[p].faces) {
            if (f < 0 || f >= n_faces) {
                add("cross-reference", p, "patch lists face out of range");
                continue;
            }
            ++in_patch[f];
            if (mesh.faces[f].right != boundary_tag(p))
                add("cross-reference", f, "face listed in a patch it does not carry");
        }

    for (Index fid = 0; fid < n_faces; ++fid) {
        const Face& f = mesh.faces[fid];
        if (f.node_a < 0 || f.node_a >= n_nodes || f.node_b < 0 || f.node_b >= n_nodes) {
            add("bad-node-reference", fid, "face references a node out of range");
            continue;
        }
        if (f.left < 0 || f.left >= n_cells) {
            add("cross-reference", fid, "face has no valid left cell");
            continue;
        }
        const bool interior = f.right >= 0;
        if (interior && f.right >= n_cells) {
            add("cross-reference", fid, "face right cell out of range");
            continue;
        }
        if (!interior && f.patch() >= n_patches) {
            add("cross-reference", fid, "boundary face tag names a missing patch");
        }
        const int expected = interior ? 2 : 1;
        if (refs[fid] != expected)
            add("cross-reference", fid,
                "face referenced by " + std::to_string(refs[fid]) + " cells, expected " +
                    std::to_string(expected));
        if (!interior && in_patch[fid] != 1)
            add("cross-reference", fid, "boundary face not listed in exactly one patch");
        if (!(f.length > 0.0)) add("degenerate-face", fid, "face length is not positive");
        if (std::abs(norm(f.normal) - 1.0) > 1e-14) add("normal", fid, "normal is not unit");
        const Vec2 d = mesh.node(f.node_b) - mesh.node(f.node_a);
        if (std::abs(norm(d) - f.length) > 1e-12 * std::max(1.0, f.length))
            add("stale-geometry", fid, "stored length differs from node geometry");
        if (cell_ok[f.left] && dot(f.normal, f.midpoint - mesh.cells[f.left].centroid) <= 0.0)
            add("orientation", fid, "normal does not point away from the left cell");
        if (interior && cell_ok[f.right] &&
            dot(f.normal, mesh.cells[f.right].centroid - f.midpoint) <= 0.0)
            add("orientation", fid, "normal does not point toward the right cell");
    }
    return out;
}

}  // namespace hodg
