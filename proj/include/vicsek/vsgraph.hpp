#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace vicsek {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thrown when a requested computation exceeds a configured size budget.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Family parameter n >= 2. The fractal is built from 4n-3 contractions of
/// ratio 1/(2n-1) arranged in an X with arms of n-1 cells plus a central cell.
struct VicsekParams {
  int n = 2;

  VicsekParams() = default;
  explicit VicsekParams(int n_) : n(n_) {
    if (n < 2) throw std::invalid_argument("VicsekParams: n must be >= 2");
  }
  int num_maps() const { return 4 * n - 3; }
  int contraction() const { return 2 * n - 1; }
  double rho() const { return double(num_maps()) * contraction(); }
  double alpha() const { return std::log(double(num_maps())) / std::log(rho()); }
};

/// One m-cell: the image of the unit square under a length-m map word.
/// Corners are stored in base orientation order q1..q4 = (0,0),(1,0),(1,1),(0,1).
struct Cell {
  std::array<int32_t, 4> corner;
  int64_t ox = 0, oy = 0;  // integer translation at level-m scale
};

/// Level-m graph approximation. Vertices live on the integer lattice with
/// denominator (2n-1)^m; identity is exact, no floating-point dedup.
/// Immutable after construction.
struct GraphApprox {
  VicsekParams params;
  int level = 0;
  int64_t scale = 1;  // (2n-1)^level

  std::vector<int64_t> vx, vy;            // vertex lattice coordinates
  std::vector<int32_t> degree;            // 3 or 6
  std::vector<int64_t> adj_offset;        // CSR offsets, size vertices+1
  std::vector<int32_t> adj;               // CSR neighbor lists, sorted per vertex
  std::vector<Cell> cells;                // all (4n-3)^m cells, word order
  std::array<int32_t, 4> boundary_ids{};  // q1..q4
  std::array<int32_t, 4> central_ids{};   // corners of the innermost central cell
  std::unordered_map<uint64_t, int32_t> index_of_coord;

  int64_t vertex_count() const { return int64_t(vx.size()); }
  int64_t edge_count() const { return int64_t(adj.size()) / 2; }

  uint64_t key(int64_t x, int64_t y) const {
    return (uint64_t(x) << 32) | uint64_t(y);
  }
  int32_t vertex_at(int64_t x, int64_t y) const {
    auto it = index_of_coord.find(key(x, y));
    if (it == index_of_coord.end())
      throw std::invalid_argument("vertex_at: no vertex at given coordinates");
    return it->second;
  }
};

/// Real-valued function on the vertices of one graph approximation.
struct FunctionOnGraph {
  int level = 0;
  Vec values;
};

/// Integer translation of map j at level-1 scale. Map 0 is the central cell;
/// maps (a-1)(n-1)+k, k=1..n-1 run outward along arm a toward corner q_a.
std::pair<int, int> map_translation(const VicsekParams& p, int j);

/// Builds the level-m graph. Throws budget_error if 3(4n-3)^m+1 exceeds the
/// vertex budget (default 8e6, override via VICSEK_MAX_VERTICES).
GraphApprox build_graph(const VicsekParams& params, int m);

/// Weighted inner product (1/4)(4n-3)^{-m} sum_x (deg x / 3) u(x) v(x),
/// normalized so <1,1>_m = 1.
double inner_product(const GraphApprox& g, const FunctionOnGraph& u,
                     const FunctionOnGraph& v);

/// Unrenormalized graph energy sum_{x~y} |u(x)-u(y)|^2, each edge once.
double graph_energy(const GraphApprox& g, const FunctionOnGraph& u);

/// (2n-1)^{-m} E_m(u).
double graph_energy_renormalized(const GraphApprox& g, const FunctionOnGraph& u);

/// Pointwise graph Laplacian (Delta_m u)(x) = (1/deg x) sum_{y~x} (u(y)-u(x)),
/// applied at every vertex including the boundary.
FunctionOnGraph laplacian_apply(const GraphApprox& g, const FunctionOnGraph& u);

/// Full spectrum of -Delta_m as (eigenvalue, multiplicity) pairs, ascending.
/// Dense symmetric solve of D^{1/2}(I - D^{-1}A)D^{-1/2}; eigenvalues grouped
/// at relative tolerance 1e-9. Budget default 2000 vertices
/// (VICSEK_DENSE_BUDGET).
std::vector<std::pair<double, int>> oracle_spectrum(const GraphApprox& g);

/// Dense eigenpairs of -Delta_m (same solver as oracle_spectrum). Columns of
/// `vectors` are eigenfunctions, orthonormal in the weighted inner product up
/// to a common scale.
struct OracleEigen {
  Vec values;
  Mat vectors;
};
OracleEigen oracle_eigenpairs(const GraphApprox& g);

/// Vertices on one arm of a main diagonal, ordered from the outer corner
/// inward. arm=0 returns the whole q1->q3 diagonal ordered from q1.
std::vector<int32_t> diagonal_vertices(const GraphApprox& g, int arm);

/// Vertex bijection induced by a permutation of the four arms (S4). perm[a-1]
/// is the image arm of arm a. Returns u o Phi.
FunctionOnGraph apply_isometry(const GraphApprox& g, const std::array<int, 4>& perm,
                               const FunctionOnGraph& u);

/// Vertex permutation of the arm isometry: entry i is the index of Phi(v_i).
std::vector<int32_t> isometry_vertex_map(const GraphApprox& g,
                                         const std::array<int, 4>& perm);

/// Sentinel for the center point q0, which is not a lattice vertex at any
/// level ((2n-1)^m is odd). Distances treat it as the midpoint of the
/// innermost central cell.
inline constexpr int32_t kCenterPoint = -1;

/// Geodesic distance along the skeleton, arms of the main cross normalized to
/// length 1. Accepts vertex indices or kCenterPoint.
double geodesic_distance(const GraphApprox& g, int32_t v, int32_t w);

/// Distance |x| to the center q0 for every vertex.
Vec distances_to_center(const GraphApprox& g);

/// BFS hop counts from a set of seed vertices (-1 where unreachable).
std::vector<int32_t> bfs_hops(const GraphApprox& g, const std::vector<int32_t>& seeds);

}  // namespace vicsek
