#ifndef BLX_DISCRETE_OPERATOR_HPP
#define BLX_DISCRETE_OPERATOR_HPP

#include <cstddef>
#include <vector>

#include "blx/grid.hpp"

// Truncated matrix model of the broken-line Laplacian. L is built as the
// adjoint of the edge-difference map composed with the edge measure, so the
// discrete integration-by-parts identity <Lf, g>_nodes = <Gf, Gg>_edges is
// exact. The junction glues -1 and +1 into one vertex; +-R are Dirichlet.

namespace blx {

class OperatorMatrix {
  public:
    explicit OperatorMatrix(const Grid& grid);

    const Grid& grid() const { return *grid_; }
    std::size_t dofs() const { return weight_.size(); }
    std::size_t edges() const { return dofs() + 1; }

    // Degree-of-freedom vectors follow the chain order -R..-1=+1..+R with
    // the glued junction as a single entry and the +-R nodes dropped.
    std::vector<double> to_dof(const GridFunction& f) const;
    GridFunction to_grid(const std::vector<double>& dof) const;

    double node_weight(std::size_t i) const { return weight_[i]; }
    // Measure w_e * h_e of edge e (edge e joins dof e-1 and dof e; the
    // outermost edges reach the Dirichlet boundary).
    double edge_measure(std::size_t e) const { return emeas_[e]; }
    double edge_length(std::size_t e) const { return elen_[e]; }

    std::vector<double> apply(const std::vector<double>& f) const;
    // First-order differences on edges (boundary value 0 at +-R).
    std::vector<double> gradient_edges(const std::vector<double>& f) const;
    // Node-interpolated gradient: average of the adjacent edge values.
    GridFunction gradient_nodes(const GridFunction& f) const;

    double inner_nodes(const std::vector<double>& f,
                       const std::vector<double>& g) const;
    double inner_edges(const std::vector<double>& gf,
                       const std::vector<double>& gg) const;
    double edge_lp_norm(const std::vector<double>& ge, double p) const;

    // Thomas solve of (L + lambda^2) u = f.
    std::vector<double> resolvent_apply(double lambda,
                                        const std::vector<double>& f) const;

    // Symmetrized tridiagonal W^{1/2} L W^{-1/2} (shared with spectral()).
    const std::vector<double>& sym_diag() const { return sdiag_; }
    const std::vector<double>& sym_offdiag() const { return soff_; }
    const std::vector<double>& sqrt_weight() const { return sqrtw_; }

  private:
    const Grid* grid_;
    std::vector<double> weight_;   // node weights (dof order)
    std::vector<double> sqrtw_;
    std::vector<double> cond_;     // per-edge conductance w_e / h_e
    std::vector<double> emeas_;
    std::vector<double> elen_;
    std::vector<double> sdiag_;
    std::vector<double> soff_;
    std::vector<std::size_t> dof_of_node_;  // grid node -> dof (size_t(-1) at +-R)
};

OperatorMatrix assemble(const Grid& grid);

struct SpectralDecomposition {
    const OperatorMatrix* op = nullptr;
    std::vector<double> eigenvalues;  // ascending, >= -1e-12 * max
    std::vector<double> z;            // eigenvectors of the symmetrized matrix,
                                      // column-major n x n
    double zero_floor = 0.0;          // 1e-12 * max eigenvalue

    std::size_t n() const { return eigenvalues.size(); }
};

// Symmetric tridiagonal eigensolve (LAPACK divide and conquer). Throws on
// convergence failure.
SpectralDecomposition spectral(const OperatorMatrix& op);

struct PowerResult {
    std::vector<double> dof;
    int excluded_count = 0;    // modes below the zero floor (s < 0 only)
    double excluded_mass = 0;  // relative L2 mass of the excluded component
};

// V Lambda^s V* f in the weighted inner product. For s < 0 the modes below
// the zero floor are excluded and reported.
PowerResult apply_power(const SpectralDecomposition& spec, double s,
                        const std::vector<double>& f);

// Project f onto the complement of the excluded span.
std::vector<double> project_off_floor(const SpectralDecomposition& spec,
                                      const std::vector<double>& f);

// Delta^{-1/2} f computed from the resolvent integral
// (2/pi) int_0^inf (L + lambda^2)^{-1} f dlambda with Thomas solves on
// log-spaced Kronrod panels plus analytic end corrections. Unlike
// apply_power(spec, -1/2, .), this route involves no spectral zero floor,
// so large-scale components survive; it is the preferred application for
// probes on very large truncations, where the floor (which scales with the
// top of the spectrum) would swallow physical low modes.
std::vector<double> half_inverse_resolvent(const OperatorMatrix& op,
                                           const std::vector<double>& f);

// Edge-valued gradient of Delta^{-1/2} f.
struct RieszApplyResult {
    std::vector<double> edge_values;
    PowerResult half_inverse;
};
RieszApplyResult riesz_apply(const SpectralDecomposition& spec,
                             const OperatorMatrix& op,
                             const std::vector<double>& f);

}  // namespace blx

#endif
