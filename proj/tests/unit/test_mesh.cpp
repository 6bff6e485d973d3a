#include "doctest.h"

#include <cmath>
#include <set>

#include "hodg/error.hpp"
#include "hodg/mesh.hpp"

using namespace hodg;

namespace {

bool has_violation(const std::vector<Violation>& v, const std::string& kind) {
    for (const auto& x : v)
        if (x.kind == kind) return true;
    return false;
}

}  // namespace

TEST_CASE("unit square quad from text") {
    const Mesh m = parse_mesh(
        "hodg-mesh 1\n"
        "nodes 4\n0 0\n1 0\n1 1\n0 1\n"
        "cells 1\nq 0 1 2 3\n");
    CHECK(m.n_cells() == 1);
    CHECK(m.n_faces() == 4);
    CHECK(m.n_interior_faces() == 0);
    CHECK(m.cells[0].area == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.cells[0].h == doctest::Approx(1.0));
    CHECK(validate(m).empty());
}

TEST_CASE("two triangles share one face") {
    const Mesh m = parse_mesh(
        "hodg-mesh 1\n"
        "nodes 4\n0 0\n1 0\n1 1\n0 1\n"
        "cells 2\nt 0 1 2\nt 0 2 3\n");
    CHECK(m.n_interior_faces() == 1);
    CHECK(m.n_faces() - m.n_interior_faces() == 4);
    for (const Face& f : m.faces) {
        if (f.boundary()) continue;
        CHECK(((f.left == 0 && f.right == 1) || (f.left == 1 && f.right == 0)));
        // normal leaves the left cell
        const Vec2 d = m.cells[f.right].centroid - m.cells[f.left].centroid;
        CHECK(dot(d, f.normal) > 0.0);
    }
    CHECK(validate(m).empty());
}

TEST_CASE("out-of-range node reference") {
    CHECK_THROWS_AS(parse_mesh("hodg-mesh 1\nnodes 4\n0 0\n1 0\n1 1\n0 1\ncells 1\nq 0 1 2 99\n"),
                    TopologyError);
    try {
        parse_mesh("hodg-mesh 1\nnodes 4\n0 0\n1 0\n1 1\n0 1\ncells 1\nq 0 1 2 99\n");
    } catch (const TopologyError& e) {
        CHECK(std::string(e.what()).find("99") != std::string::npos);
    }
}

TEST_CASE("parse errors carry the line") {
    try {
        parse_mesh("hodg-mesh 1\nnodes 2\n0 0\n1 zz\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    CHECK_THROWS_AS(parse_mesh("hodg-mesh 2\n"), ParseError);
    CHECK_THROWS_AS(parse_mesh("hodg-mesh 1\nnodes 3\n0 0\n1 0\n"), ParseError);
}

TEST_CASE("inverted and non-manifold cells are rejected") {
    std::vector<Node> nodes{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const std::vector<CellSpec> cw{{CellShape::triangle, {0, 2, 1, -1}}};
    CHECK_THROWS_AS(assemble_mesh(nodes, cw), TopologyError);

    nodes.push_back({2, 2});
    const std::vector<CellSpec> three{{CellShape::triangle, {0, 1, 2, -1}},
                                      {CellShape::triangle, {0, 2, 3, -1}},
                                      {CellShape::triangle, {2, 0, 4, -1}}};
    CHECK_THROWS_AS(assemble_mesh(nodes, three), TopologyError);
}

TEST_CASE("quad grid counts") {
    const Mesh m = generate_quad_grid(2, 2);
    CHECK(m.n_cells() == 4);
    CHECK(m.n_faces() == 12);
    CHECK(m.n_interior_faces() == 4);
    CHECK(m.nodes.size() == 9);
    CHECK(validate(m).empty());

    for (auto [nx, ny] : {std::pair{1, 1}, {3, 5}, {7, 2}}) {
        const Mesh g = generate_quad_grid(nx, ny);
        CHECK(g.n_cells() == std::size_t(nx * ny));
        CHECK(g.n_faces() == std::size_t(nx * (ny + 1) + ny * (nx + 1)));
        CHECK(validate(g).empty());
    }
    CHECK(generate_quad_grid(63, 64).n_cells() == 4032);
    CHECK_THROWS_AS(generate_quad_grid(0, 3), Error);
    CHECK_THROWS_AS(generate_tri_grid(3, 0), Error);
}

TEST_CASE("quad grid is numbered row-major") {
    const Mesh m = generate_quad_grid(4, 3, {0, 4, 0, 3});
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 4; ++i) {
            const Vec2 c = m.cells[j * 4 + i].centroid;
            CHECK(c.x == doctest::Approx(i + 0.5));
            CHECK(c.y == doctest::Approx(j + 0.5));
        }
}

TEST_CASE("triangle grid") {
    const Mesh one = generate_tri_grid(1, 1);
    CHECK(one.n_cells() == 2);
    CHECK(one.n_interior_faces() == 1);
    CHECK(generate_tri_grid(24, 14).n_cells() == 672);

    const Mesh m = generate_tri_grid(5, 4, {0, 2, 0, 1});
    const double quad_area = (2.0 / 5) * (1.0 / 4);
    for (const Cell& c : m.cells) CHECK(c.area == doctest::Approx(quad_area / 2).epsilon(1e-14));
    CHECK(validate(m).empty());
}

TEST_CASE("closure and unit normals") {
    const Mesh m = generate_tri_grid(6, 5, {-1, 2, 0, 3});
    for (std::size_t c = 0; c < m.n_cells(); ++c) {
        const Cell& cell = m.cells[c];
        Vec2 s;
        double perimeter = 0.0;
        for (int k = 0; k < cell.n_vertices(); ++k) {
            const Face& f = m.faces[cell.faces[k]];
            const double sg = f.left == Index(c) ? 1.0 : -1.0;
            s = s + (sg * f.length) * f.normal;
            perimeter += f.length;
        }
        CHECK(norm(s) < 1e-12 * perimeter);
    }
    for (const Face& f : m.faces) CHECK(std::abs(norm(f.normal) - 1.0) < 1e-14);
}

TEST_CASE("validate reports violations") {
    CHECK(validate(generate_quad_grid(4, 4)).empty());

    Mesh flipped = generate_quad_grid(3, 3);
    std::swap(flipped.cells[4].nodes[1], flipped.cells[4].nodes[3]);
    CHECK(has_violation(validate(flipped), "negative-area"));

    Mesh dangling = generate_quad_grid(3, 3);
    Face extra = dangling.faces[0];
    dangling.faces.push_back(extra);
    CHECK(has_violation(validate(dangling), "cross-reference"));

    Mesh broken = generate_quad_grid(2, 2);
    broken.cells[0].neighbors[0] = 3;
    CHECK(!validate(broken).empty());
}

TEST_CASE("patches and boundary kinds round trip through text") {
    SideKinds sides;
    sides.bottom = BcKind::slip_wall;
    sides.top = BcKind::no_slip_wall;
    const Mesh m = generate_tri_grid(3, 2, {0, 3, 0, 2}, sides);
    const Mesh r = parse_mesh(format_mesh(m));
    REQUIRE(r.n_cells() == m.n_cells());
    REQUIRE(r.n_faces() == m.n_faces());
    for (std::size_t c = 0; c < m.n_cells(); ++c)
        CHECK(r.cells[c].area == doctest::Approx(m.cells[c].area).epsilon(1e-15));
    std::set<std::pair<std::string, int>> a, b;
    for (const auto& p : m.patches) a.insert({p.name + to_string(p.kind), int(p.faces.size())});
    for (const auto& p : r.patches) b.insert({p.name + to_string(p.kind), int(p.faces.size())});
    CHECK(a == b);
    for (const Face& f : r.faces) {
        if (!f.boundary()) continue;
        const auto& p = r.patches[f.patch()];
        if (p.name == "bottom") CHECK(p.kind == BcKind::slip_wall);
        if (p.name == "top") CHECK(p.kind == BcKind::no_slip_wall);
    }
}

TEST_CASE("unlisted boundary faces become far field") {
    const Mesh m = parse_mesh(
        "hodg-mesh 1\n"
        "nodes 4\n0 0\n1 0\n1 1\n0 1\n"
        "cells 1\nq 0 1 2 3\n"
        "patches 1\nwall slip_wall 1\n0 1\n");
    int wall = 0, far = 0;
    for (const Face& f : m.faces) {
        const auto& p = m.patches[f.patch()];
        if (p.kind == BcKind::slip_wall) ++wall;
        if (p.kind == BcKind::far_field) ++far;
    }
    CHECK(wall == 1);
    CHECK(far == 3);
}
