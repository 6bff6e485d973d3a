#include "hodg/renumber.hpp"

#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "hodg/error.hpp"

namespace hodg {

AdjacencyGraph AdjacencyGraph::from_edges(std::size_t n,
                                          std::span<const std::pair<Index, Index>> edges) {
    std::vector<std::vector<Index>> lists(n);
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || std::size_t(a) >= n || std::size_t(b) >= n)
            throw Error("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                        ") out of range for " + std::to_string(n) + " vertices");
        if (a == b) continue;
        lists[a].push_back(b);
        lists[b].push_back(a);
    }
    AdjacencyGraph g;
    g.offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& l = lists[i];
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
        g.offsets[i + 1] = g.offsets[i] + static_cast<Index>(l.size());
        g.adj.insert(g.adj.end(), l.begin(), l.end());
    }
    return g;
}

Permutation Permutation::identity(std::size_t n) {
    Permutation p;
    p.forward.resize(n);
    std::iota(p.forward.begin(), p.forward.end(), 0);
    p.inverse = p.forward;
    return p;
}

Permutation Permutation::from_forward(std::vector<Index> forward) {
    Permutation p;
    const std::size_t n = forward.size();
    p.inverse.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const Index j = forward[i];
        if (j < 0 || std::size_t(j) >= n || p.inverse[j] >= 0)
            throw Error("invalid permutation: entry " + std::to_string(i) + " -> " +
                        std::to_string(j));
        p.inverse[j] = static_cast<Index>(i);
    }
    p.forward = std::move(forward);
    return p;
}

Permutation Permutation::from_order(std::vector<Index> order) {
    Permutation inv = from_forward(std::move(order));
    std::swap(inv.forward, inv.inverse);
    return inv;
}

Permutation Permutation::random(std::size_t n, std::uint64_t seed) {
    std::vector<Index> f(n);
    std::iota(f.begin(), f.end(), 0);
    std::shuffle(f.begin(), f.end(), std::mt19937_64(seed));
    return from_forward(std::move(f));
}

AdjacencyGraph build_adjacency(const Mesh& mesh) {
    std::vector<std::pair<Index, Index>> edges;
    edges.reserve(mesh.n_faces());
    for (const Face& f : mesh.faces)
        if (!f.boundary()) edges.emplace_back(f.left, f.right);
    return AdjacencyGraph::from_edges(mesh.n_cells(), edges);
}

Index bandwidth(const AdjacencyGraph& graph, const Permutation& perm) {
    if (perm.size() != graph.n())
        throw Error("bandwidth: permutation of size " + std::to_string(perm.size()) +
                    " for a graph of " + std::to_string(graph.n()) + " vertices");
    Index bw = 0;
    for (std::size_t i = 0; i < graph.n(); ++i)
        for (Index j : graph.neighbors(static_cast<Index>(i)))
            bw = std::max(bw, static_cast<Index>(std::abs(perm.forward[i] - perm.forward[j])));
    return bw;
}

namespace {

struct LevelInfo {
    int depth = 0;
    std::vector<Index> last_level;
};

// Breadth-first level structure rooted at `root`; `mark` must be all -1 on
// entry for the component and is restored before returning.
LevelInfo level_structure(const AdjacencyGraph& g, Index root, std::vector<int>& mark,
                          std::vector<Index>& touched) {
    touched.clear();
    std::vector<Index> level{root};
    mark[root] = 0;
    touched.push_back(root);
    int depth = 0;
    while (true) {
        std::vector<Index> next;
        for (Index v : level)
            for (Index w : g.neighbors(v))
                if (mark[w] < 0) {
                    mark[w] = depth + 1;
                    touched.push_back(w);
                    next.push_back(w);
                }
        if (next.empty()) break;
        level = std::move(next);
        ++depth;
    }
    for (Index v : touched) mark[v] = -1;
    return {depth, std::move(level)};
}

Index min_degree(const AdjacencyGraph& g, const std::vector<Index>& vs) {
    Index best = vs.front();
    for (Index v : vs)
        if (g.degree(v) < g.degree(best) || (g.degree(v) == g.degree(best) && v < best)) best = v;
    return best;
}

// George-Liu: start at the minimum-degree vertex of the component and move to
// a minimum-degree vertex of the deepest level while eccentricity grows.
Index pseudo_peripheral(const AdjacencyGraph& g, Index seed, std::vector<int>& mark) {
    std::vector<Index> touched;
    level_structure(g, seed, mark, touched);
    Index root = min_degree(g, touched);
    LevelInfo info = level_structure(g, root, mark, touched);
    while (true) {
        const Index cand = min_degree(g, info.last_level);
        LevelInfo next = level_structure(g, cand, mark, touched);
        if (next.depth <= info.depth) return root;
        root = cand;
        info = std::move(next);
    }
}

}  // namespace

std::vector<Index> cuthill_mckee_order(const AdjacencyGraph& g) {
    const std::size_t n = g.n();
    std::vector<Index> order;
    order.reserve(n);
    std::vector<char> visited(n, 0);
    std::vector<int> mark(n, -1);
    std::vector<Index> nbrs;
    for (std::size_t s = 0; s < n; ++s) {
        if (visited[s]) continue;
        const Index root = pseudo_peripheral(g, static_cast<Index>(s), mark);
        std::size_t head = order.size();
        order.push_back(root);
        visited[root] = 1;
        while (head < order.size()) {
            const Index v = order[head++];
            nbrs.clear();
            for (Index w : g.neighbors(v))
                if (!visited[w]) nbrs.push_back(w);
            std::sort(nbrs.begin(), nbrs.end(), [&g](Index a, Index b) {
                return g.degree(a) != g.degree(b) ? g.degree(a) < g.degree(b) : a < b;
            });
            for (Index w : nbrs) {
                visited[w] = 1;
                order.push_back(w);
            }
        }
    }
    return order;
}

Permutation rcm(const AdjacencyGraph& graph) {
    std::vector<Index> order = cuthill_mckee_order(graph);
    std::reverse(order.begin(), order.end());
    return Permutation::from_order(std::move(order));
}

Mesh apply_permutation(const Mesh& mesh, const Permutation& perm) {
    if (perm.size() != mesh.n_cells())
        throw Error("apply_permutation: permutation of size " + std::to_string(perm.size()) +
                    " for " + std::to_string(mesh.n_cells()) + " cells");
    Permutation::from_forward(perm.forward);  // validates

    std::vector<CellSpec> cells(mesh.n_cells());
    for (std::size_t c = 0; c < mesh.n_cells(); ++c)
        cells[perm.forward[c]] = {mesh.cells[c].shape, mesh.cells[c].nodes};
    std::vector<PatchSpec> patches;
    for (const auto& p : mesh.patches) {
        PatchSpec s{p.name, p.kind, {}};
        for (Index f : p.faces) s.edges.push_back({mesh.faces[f].node_a, mesh.faces[f].node_b});
        patches.push_back(std::move(s));
    }
    Mesh out = assemble_mesh(mesh.nodes, cells, patches);

    // Cells are assembled in new order, so each face's left cell is already
    // its smaller incident id; only the face order needs sorting.
    const std::size_t nf = out.n_faces();
    std::vector<Index> order(nf);
    std::iota(order.begin(), order.end(), 0);
    auto key = [&out](Index f) {
        const Face& face = out.faces[f];
        return std::pair{face.left, face.boundary() ? face.left : face.right};
    };
    std::stable_sort(order.begin(), order.end(),
                     [&key](Index a, Index b) { return key(a) < key(b); });
    std::vector<Index> new_id(nf);
    std::vector<Face> faces(nf);
    for (std::size_t k = 0; k < nf; ++k) {
        new_id[order[k]] = static_cast<Index>(k);
        faces[k] = out.faces[order[k]];
    }
    out.faces = std::move(faces);
    for (Cell& c : out.cells)
        for (int k = 0; k < c.n_vertices(); ++k) c.faces[k] = new_id[c.faces[k]];
    for (auto& p : out.patches) {
        for (Index& f : p.faces) f = new_id[f];
        std::sort(p.faces.begin(), p.faces.end());
    }
    return out;
}

std::string format_spy(const AdjacencyGraph& graph, const Permutation& perm) {
    if (perm.size() != graph.n()) throw Error("format_spy: size mismatch");
    std::vector<std::pair<Index, Index>> entries;
    entries.reserve(graph.n() + graph.n_edges());
    for (std::size_t i = 0; i < graph.n(); ++i) {
        const Index pi = perm.forward[i];
        entries.emplace_back(pi, pi);
        for (Index j : graph.neighbors(static_cast<Index>(i))) {
            const Index pj = perm.forward[j];
            if (pj < pi) entries.emplace_back(pi, pj);
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](auto a, auto b) { return std::pair{a.second, a.first} < std::pair{b.second, b.first}; });
    std::ostringstream os;
    os << "%%MatrixMarket matrix coordinate pattern symmetric\n";
    os << graph.n() << ' ' << graph.n() << ' ' << entries.size() << '\n';
    for (auto [r, c] : entries) os << r + 1 << ' ' << c + 1 << '\n';
    return os.str();
}

void export_spy(const AdjacencyGraph& graph, const Permutation& perm,
                const std::filesystem::path& path) {
    const std::string text = format_spy(graph, perm);
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace hodg
