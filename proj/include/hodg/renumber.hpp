#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hodg/dg.hpp"
#include "hodg/mesh.hpp"

namespace hodg {

/// Symmetric graph without self-loops in compressed row form.
struct AdjacencyGraph {
    std::vector<Index> offsets{0};
    std::vector<Index> adj;

    std::size_t n() const { return offsets.size() - 1; }
    std::span<const Index> neighbors(Index i) const {
        return {adj.data() + offsets[i], static_cast<std::size_t>(offsets[i + 1] - offsets[i])};
    }
    Index degree(Index i) const { return offsets[i + 1] - offsets[i]; }
    std::size_t n_edges() const { return adj.size() / 2; }

    /// Builds the graph from undirected edges; duplicates and self-loops are dropped.
    static AdjacencyGraph from_edges(std::size_t n, std::span<const std::pair<Index, Index>> edges);
};

/// forward[old] = new, inverse[new] = old.
struct Permutation {
    std::vector<Index> forward;
    std::vector<Index> inverse;

    std::size_t size() const { return forward.size(); }

    static Permutation identity(std::size_t n);
    /// Throws Error unless `forward` is a bijection on 0..n-1.
    static Permutation from_forward(std::vector<Index> forward);
    /// From a visiting order: order[k] is the old index placed at position k.
    static Permutation from_order(std::vector<Index> order);
    static Permutation random(std::size_t n, std::uint64_t seed);
};

/// One vertex per cell, one edge per interior face.
AdjacencyGraph build_adjacency(const Mesh& mesh);

/// max |forward[i] - forward[j]| over edges (i, j); 0 without edges.
Index bandwidth(const AdjacencyGraph& graph, const Permutation& perm);

/// Cuthill-McKee visiting order (old indices), before reversal. Each
/// component starts from a pseudo-peripheral vertex; components are taken in
/// order of their smallest vertex index.
std::vector<Index> cuthill_mckee_order(const AdjacencyGraph& graph);

/// Reverse Cuthill-McKee permutation.
Permutation rcm(const AdjacencyGraph& graph);

/// Renumbers cells by `perm` and sorts faces by (smaller, larger) incident
/// new cell id; a boundary face counts its single cell twice. Geometry is
/// recomputed, so cell data is bitwise equal to the original cell's.
Mesh apply_permutation(const Mesh& mesh, const Permutation& perm);

/// new state cell perm.forward[c] = old state cell c.
template <class Real>
DofState<Real> permute_state(const DofState<Real>& s, const Permutation& perm) {
    if (perm.size() != s.n_cells) throw Error("permute_state: size mismatch");
    DofState<Real> out(s.n_cells, s.n_basis);
    out.iteration = s.iteration;
    for (std::size_t c = 0; c < s.n_cells; ++c)
        std::copy_n(s.cell(c), s.stride(), out.cell(perm.forward[c]));
    return out;
}

/// MatrixMarket pattern of the permuted adjacency plus its diagonal, lower
/// triangle only (symmetric storage), 1-based.
std::string format_spy(const AdjacencyGraph& graph, const Permutation& perm);
void export_spy(const AdjacencyGraph& graph, const Permutation& perm,
                const std::filesystem::path& path);

}  // namespace hodg
