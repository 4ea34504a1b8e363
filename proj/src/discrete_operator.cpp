#include "blx/discrete_operator.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <cmath>
#include <stdexcept>

namespace blx {

OperatorMatrix::OperatorMatrix(const Grid& grid) : grid_(&grid) {
    const std::size_t nps = grid.nodes_per_side();
    if (nps < 3)
        throw std::invalid_argument("OperatorMatrix: need >= 3 nodes per side");
    const std::size_t n_nodes = grid.size();
    const std::size_t n_dof = 2 * nps - 3;

    dof_of_node_.assign(n_nodes, std::size_t(-1));
    weight_.assign(n_dof, 0.0);
    // Chain order: negative interiors, glued junction, positive interiors.
    std::size_t d = 0;
    for (std::size_t i = 1; i + 1 < nps; ++i) dof_of_node_[i] = d++;
    const std::size_t jdof = d++;
    dof_of_node_[nps - 1] = jdof;  // -1
    dof_of_node_[nps] = jdof;      // +1 (same vertex)
    for (std::size_t i = nps + 1; i + 1 < n_nodes; ++i) dof_of_node_[i] = d++;

    for (std::size_t i = 0; i < n_nodes; ++i)
        if (dof_of_node_[i] != std::size_t(-1))
            weight_[dof_of_node_[i]] += grid.weight(i);

    sqrtw_.resize(n_dof);
    for (std::size_t i = 0; i < n_dof; ++i) sqrtw_[i] = std::sqrt(weight_[i]);

    // Edges in chain order; edge e joins dof e-1 and dof e, with the two
    // outermost edges reaching the Dirichlet boundary at -R and +R.
    const std::size_t n_edges = n_dof + 1;
    cond_.resize(n_edges);
    emeas_.resize(n_edges);
    elen_.resize(n_edges);
    // Grid nodes along the chain including boundaries: 0..n_nodes-1 with the
    // junction pair (nps-1, nps) collapsed.
    std::vector<std::size_t> chain;
    chain.reserve(n_dof + 2);
    for (std::size_t i = 0; i < nps; ++i) chain.push_back(i);
    for (std::size_t i = nps + 1; i < n_nodes; ++i) chain.push_back(i);
    for (std::size_t e = 0; e < n_edges; ++e) {
        const BrokenPoint& a = grid.node(chain[e]);
        const BrokenPoint& b = grid.node(chain[e + 1]);
        double ra = a.radius, rb = b.radius;
        // Every edge lies on one ray; the glued vertex contributes its
        // radius-1 endpoint to both of its edges.
        Side s = (a.radius > 1.0) ? a.side : b.side;
        double dd = grid.dims().dim(s);
        double h = std::abs(rb - ra);
        double dens = std::pow(0.5 * (ra + rb), dd - 1.0);
        elen_[e] = h;
        emeas_[e] = dens * h;
        cond_[e] = dens / h;
    }

    sdiag_.resize(n_dof);
    soff_.resize(n_dof > 0 ? n_dof - 1 : 0);
    for (std::size_t i = 0; i < n_dof; ++i)
        sdiag_[i] = (cond_[i] + cond_[i + 1]) / weight_[i];
    for (std::size_t i = 0; i + 1 < n_dof; ++i)
        soff_[i] = -cond_[i + 1] / (sqrtw_[i] * sqrtw_[i + 1]);
}

OperatorMatrix assemble(const Grid& grid) { return OperatorMatrix(grid); }

std::vector<double> OperatorMatrix::to_dof(const GridFunction& f) const {
    const Grid& g = *grid_;
    std::vector<double> out(dofs(), 0.0);
    const std::size_t nps = g.nodes_per_side();
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::size_t d = dof_of_node_[i];
        if (d == std::size_t(-1)) continue;
        out[d] = f.values[i];
    }
    // The glued vertex takes the mean of the two radius-1 samples.
    std::size_t jdof = dof_of_node_[nps - 1];
    out[jdof] = 0.5 * (f.values[nps - 1] + f.values[nps]);
    return out;
}

GridFunction OperatorMatrix::to_grid(const std::vector<double>& dof) const {
    GridFunction f(*grid_);
    for (std::size_t i = 0; i < grid_->size(); ++i) {
        std::size_t d = dof_of_node_[i];
        f.values[i] = (d == std::size_t(-1)) ? 0.0 : dof[d];
    }
    return f;
}

std::vector<double> OperatorMatrix::apply(const std::vector<double>& f) const {
    const std::size_t n = dofs();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double left = (i == 0) ? 0.0 : f[i - 1];
        double right = (i + 1 == n) ? 0.0 : f[i + 1];
        out[i] = (cond_[i] * (f[i] - left) + cond_[i + 1] * (f[i] - right)) /
                 weight_[i];
    }
    return out;
}

std::vector<double> OperatorMatrix::gradient_edges(
    const std::vector<double>& f) const {
    const std::size_t n = dofs();
    std::vector<double> g(n + 1);
    for (std::size_t e = 0; e <= n; ++e) {
        double a = (e == 0) ? 0.0 : f[e - 1];
        double b = (e == n) ? 0.0 : f[e];
        g[e] = (b - a) / elen_[e];
    }
    return g;
}

GridFunction OperatorMatrix::gradient_nodes(const GridFunction& f) const {
    std::vector<double> dof = to_dof(f);
    std::vector<double> ge = gradient_edges(dof);
    const Grid& g = *grid_;
    const std::size_t nps = g.nodes_per_side();
    GridFunction out(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::size_t d = dof_of_node_[i];
        if (d == std::size_t(-1)) {
            // Boundary node: one-sided edge value.
            out.values[i] = (i == 0) ? ge.front() : ge.back();
        } else {
            out.values[i] = 0.5 * (ge[d] + ge[d + 1]);
        }
    }
    // Both radius-1 samples carry the shared junction derivative.
    std::size_t jdof = dof_of_node_[nps - 1];
    double jg = 0.5 * (ge[jdof] + ge[jdof + 1]);
    out.values[nps - 1] = jg;
    out.values[nps] = jg;
    return out;
}

double OperatorMatrix::inner_nodes(const std::vector<double>& f,
                                   const std::vector<double>& g) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dofs(); ++i) s += weight_[i] * f[i] * g[i];
    return s;
}

double OperatorMatrix::inner_edges(const std::vector<double>& gf,
                                   const std::vector<double>& gg) const {
    double s = 0.0;
    for (std::size_t e = 0; e < edges(); ++e) s += emeas_[e] * gf[e] * gg[e];
    return s;
}

double OperatorMatrix::edge_lp_norm(const std::vector<double>& ge,
                                    double p) const {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : ge) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (std::size_t e = 0; e < edges(); ++e)
        s += emeas_[e] * std::pow(std::abs(ge[e]), p);
    return std::pow(s, 1.0 / p);
}

std::vector<double> OperatorMatrix::resolvent_apply(
    double lambda, const std::vector<double>& f) const {
    // Solve the symmetrized SPD system (S + lambda^2) v = W^{1/2} f.
    const std::size_t n = dofs();
    std::vector<double> diag(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = sdiag_[i] + lambda * lambda;
        rhs[i] = sqrtw_[i] * f[i];
    }
    std::vector<double> cp(n - 1);
    cp[0] = soff_[0] / diag[0];
    rhs[0] /= diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        double m = diag[i] - soff_[i - 1] * cp[i - 1];
        if (i < n - 1) cp[i] = soff_[i] / m;
        rhs[i] = (rhs[i] - soff_[i - 1] * rhs[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= cp[i] * rhs[i + 1];
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= sqrtw_[i];
    return rhs;
}

namespace {

// Kronrod-15 abscissae/weights on [-1, 1] (positive half; node 7 is 0).
const double kHiXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
const double kHiWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

}  // namespace

std::vector<double> half_inverse_resolvent(const OperatorMatrix& op,
                                           const std::vector<double>& f) {
    const std::size_t n = op.dofs();
    // Gershgorin bound on the top of the spectrum.
    const std::vector<double>& sd = op.sym_diag();
    const std::vector<double>& so = op.sym_offdiag();
    double lmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = sd[i];
        if (i > 0) row += std::abs(so[i - 1]);
        if (i + 1 < n) row += std::abs(so[i]);
        lmax = std::max(lmax, row);
    }
    // The lowest eigenvalue of the Dirichlet problem scales like 1/R^2, so
    // sqrt-eigenvalues live in [~1/R, sqrt(lmax)]. The split points sit
    // three decades below / a factor 30 above that range; the pieces
    // outside are handled analytically.
    const double R = op.grid().truncation();
    const double lam_lo = 1e-3 / R;
    const double lam_hi = 30.0 * std::sqrt(lmax);

    std::vector<double> acc(n, 0.0);
    // [0, lam_lo]: the resolvent is flat there, contributing lam_lo L^{-1}f
    // with relative error (lam_lo^2 / lambda_min) / 3.
    {
        std::vector<double> u0 = op.resolvent_apply(0.0, f);
        for (std::size_t i = 0; i < n; ++i) acc[i] += lam_lo * u0[i];
    }
    // One Kronrod-15 panel per octave of lambda; in the log variable every
    // eigencomponent lambda^2/(a + lambda^2) varies on an O(1) scale, so a
    // panel per octave is far inside the rule's accuracy.
    const int octaves =
        (int)std::ceil(std::log2(lam_hi / lam_lo)) + 1;
    const double t0 = std::log(lam_lo);
    const double dt = (std::log(lam_hi) - t0) / octaves;
    for (int j = 0; j < octaves; ++j) {
        const double c = t0 + (j + 0.5) * dt, h = 0.5 * dt;
        for (int p = 0; p < 8; ++p) {
            const int reps = p == 7 ? 1 : 2;
            for (int s = 0; s < reps; ++s) {
                double t = c + (s == 0 ? -h : h) * kHiXgk[p];
                double lam = std::exp(t);
                std::vector<double> u = op.resolvent_apply(lam, f);
                double w = kHiWgk[p] * h * lam;  // d lambda = lambda dt
                for (std::size_t i = 0; i < n; ++i) acc[i] += w * u[i];
            }
        }
    }
    // [lam_hi, inf): Neumann series of the resolvent in L / lambda^2,
    // integrated term by term; ratio of consecutive terms <= lmax/lam_hi^2.
    {
        std::vector<double> lf = op.apply(f);
        std::vector<double> llf = op.apply(lf);
        const double c1 = 1.0 / lam_hi;
        const double c3 = 1.0 / (3.0 * lam_hi * lam_hi * lam_hi);
        const double c5 = c3 * 3.0 / (5.0 * lam_hi * lam_hi);
        for (std::size_t i = 0; i < n; ++i)
            acc[i] += c1 * f[i] - c3 * lf[i] + c5 * llf[i];
    }
    for (std::size_t i = 0; i < n; ++i) acc[i] *= 2.0 / M_PI;
    return acc;
}

SpectralDecomposition spectral(const OperatorMatrix& op) {
    const std::size_t n = op.dofs();
    SpectralDecomposition spec;
    spec.op = &op;
    spec.eigenvalues = op.sym_diag();
    std::vector<double> off = op.sym_offdiag();
    spec.z.assign(n * n, 0.0);
    int info = LAPACKE_dstedc(LAPACK_COL_MAJOR, 'I', (lapack_int)n,
                              spec.eigenvalues.data(), off.data(),
                              spec.z.data(), (lapack_int)n);
    if (info != 0)
        throw std::runtime_error("spectral: dstedc failed, info = " +
                                 std::to_string(info));
    double lmax = spec.eigenvalues.back();
    spec.zero_floor = 1e-12 * lmax;
    if (spec.eigenvalues.front() < -spec.zero_floor)
        throw std::runtime_error("spectral: negative eigenvalue beyond floor");
    return spec;
}

namespace {

// coeffs = Z^T W^{1/2} f
std::vector<double> to_modes(const SpectralDecomposition& spec,
                             const std::vector<double>& f) {
    const std::size_t n = spec.n();
    const OperatorMatrix& op = *spec.op;
    std::vector<double> wf(n), c(n);
    for (std::size_t i = 0; i < n; ++i) wf[i] = op.sqrt_weight()[i] * f[i];
    cblas_dgemv(CblasColMajor, CblasTrans, (int)n, (int)n, 1.0, spec.z.data(),
                (int)n, wf.data(), 1, 0.0, c.data(), 1);
    return c;
}

std::vector<double> from_modes(const SpectralDecomposition& spec,
                               const std::vector<double>& c) {
    const std::size_t n = spec.n();
    const OperatorMatrix& op = *spec.op;
    std::vector<double> v(n);
    cblas_dgemv(CblasColMajor, CblasNoTrans, (int)n, (int)n, 1.0,
                spec.z.data(), (int)n, c.data(), 1, 0.0, v.data(), 1);
    for (std::size_t i = 0; i < n; ++i) v[i] /= op.sqrt_weight()[i];
    return v;
}

}  // namespace

PowerResult apply_power(const SpectralDecomposition& spec, double s,
                        const std::vector<double>& f) {
    if (s < -0.5)
        throw std::domain_error("apply_power: s < -1/2 not supported");
    std::vector<double> c = to_modes(spec, f);
    PowerResult out;
    double total = 0.0, excluded = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        total += c[k] * c[k];
        double lam = spec.eigenvalues[k];
        if (s < 0.0 && lam < spec.zero_floor) {
            excluded += c[k] * c[k];
            ++out.excluded_count;
            c[k] = 0.0;
        } else {
            c[k] *= (lam <= 0.0) ? 0.0 : std::pow(lam, s);
        }
    }
    out.excluded_mass = total > 0.0 ? std::sqrt(excluded / total) : 0.0;
    out.dof = from_modes(spec, c);
    return out;
}

std::vector<double> project_off_floor(const SpectralDecomposition& spec,
                                      const std::vector<double>& f) {
    std::vector<double> c = to_modes(spec, f);
    for (std::size_t k = 0; k < c.size(); ++k)
        if (spec.eigenvalues[k] < spec.zero_floor) c[k] = 0.0;
    return from_modes(spec, c);
}

RieszApplyResult riesz_apply(const SpectralDecomposition& spec,
                             const OperatorMatrix& op,
                             const std::vector<double>& f) {
    RieszApplyResult out;
    out.half_inverse = apply_power(spec, -0.5, f);
    out.edge_values = op.gradient_edges(out.half_inverse.dof);
    return out;
}

}  // namespace blx
